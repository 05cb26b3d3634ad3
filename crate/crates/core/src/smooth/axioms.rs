use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::seed::trial_rng;

use super::transport::{transport_with, Scheme};
use super::{Curve, GaugePotential, Point, Segment, SmoothError};

/// A random closed curve at `base` built from two to four lines, arcs and
/// cubics of size about `scale`, closed by a straight segment.
pub fn random_loop<R: Rng + ?Sized>(rng: &mut R, base: Point, scale: f64, dim: usize) -> Curve {
    let off = |rng: &mut R| {
        let z = if dim == 3 { rng.gen_range(-scale..scale) } else { 0.0 };
        [rng.gen_range(-scale..scale), rng.gen_range(-scale..scale), z]
    };
    let mut segs = Vec::new();
    let mut p = base;
    for _ in 0..rng.gen_range(2..=4) {
        let seg = match rng.gen_range(0..3) {
            0 => Segment::Line { from: p, to: p.add(&off(rng)) },
            1 => {
                let center = p.add(&[off(rng)[0], off(rng)[1], 0.0]);
                let d = p.sub(&center);
                let start = d[1].atan2(d[0]);
                let sweep = rng.gen_range(-PI..PI);
                Segment::Arc { center, radius: (d[0] * d[0] + d[1] * d[1]).sqrt(), start, end: start + sweep }
            }
            _ => {
                let (a, b, c) = (off(rng), off(rng), off(rng));
                Segment::Cubic { p0: p, p1: p.add(&a), p2: p.add(&b), p3: p.add(&c) }
            }
        };
        p = seg.end();
        segs.push(seg);
    }
    // arcs reproduce their start only up to rounding; pin the joint
    segs.push(Segment::Line { from: p, to: base });
    Curve::new(segs).expect("segments chain by construction")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomTrial {
    pub trial: u64,
    /// `d(H(γ with spur), H(γ))`.
    pub spur_residual: f64,
    /// `d(H(γ then γ'), H(γ')·H(γ))`.
    pub product_residual: f64,
    /// Richardson error estimate at the working step count, the larger of
    /// those for `γ` and for `γ` with the spur.
    pub integrator_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub potential: String,
    pub seed: u64,
    pub trials: u64,
    pub steps: usize,
    pub scheme: Scheme,
    pub max_spur_residual: f64,
    pub max_product_residual: f64,
    pub max_integrator_tol: f64,
    /// Trials whose residuals exceed ten times their integrator tolerance.
    pub failures: Vec<AxiomTrial>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.max_spur_residual.max(self.max_product_residual)
    }
}

/// Floor under the integrator tolerance, for curves the scheme integrates
/// exactly.
const ROUNDING: f64 = 1e-12;

/// Spur insertion and multiplicativity on `trials` seeded random loops at `base`.
pub fn axiom_check(
    a: &GaugePotential,
    base: Point,
    seed: u64,
    trials: u64,
    steps: usize,
    scheme: Scheme,
) -> Result<AxiomReport, SmoothError> {
    let runs = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let g1 = random_loop(&mut rng, base, 0.5, a.dim());
            let g2 = random_loop(&mut rng, base, 0.5, a.dim());
            let h1 = transport_with(a, &g1, steps, scheme)?;
            let h1_fine = transport_with(a, &g1, 2 * steps, scheme)?;
            let p = 2f64.powf(scheme.order());
            let integrator_tol = (h1.distance(&h1_fine) * p / (p - 1.0)).max(ROUNDING);

            let i = rng.gen_range(0..g1.segments().len());
            let s = rng.gen_range(0.2..0.8);
            let d = [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), 0.0];
            let spurred = g1.split_at(i, s).with_spur(i, d);
            let hs = transport_with(a, &spurred, steps, scheme)?;
            let hs_fine = transport_with(a, &spurred, 2 * steps, scheme)?;
            let integrator_tol = integrator_tol.max(hs.distance(&hs_fine) * p / (p - 1.0));
            let spur_residual = hs.distance(&h1);

            let h2 = transport_with(a, &g2, steps, scheme)?;
            let joined = transport_with(a, &g1.then(&g2)?, steps, scheme)?;
            let product_residual = joined.distance(&h2.mul(&h1));
            Ok(AxiomTrial { trial: t, spur_residual, product_residual, integrator_tol })
        })
        .collect::<Result<Vec<_>, SmoothError>>()?;
    let max = |f: fn(&AxiomTrial) -> f64| runs.iter().map(f).fold(0.0, f64::max);
    Ok(AxiomReport {
        potential: a.to_string(),
        seed,
        trials,
        steps,
        scheme,
        max_spur_residual: max(|r| r.spur_residual),
        max_product_residual: max(|r| r.product_residual),
        max_integrator_tol: max(|r| r.integrator_tol),
        failures: runs
            .iter()
            .filter(|r| r.spur_residual.max(r.product_residual) > 10.0 * r.integrator_tol)
            .cloned()
            .collect(),
    })
}
