use std::f64::consts::PI;

use rand::Rng;

use crate::smooth::samples::{su2_constant, su2_linear, u1_quadratic};
use crate::smooth::{
    axiom_check, convergence_study, family_smoothness_check, lattice_continuum_study, lattice_discretize, plaquette,
    transport_with, Curve, GaugePotential, LatticeBox, LoopFamily, Point, Scheme, SmoothElement,
};

use super::{Outcome, Suite, SuiteConfig, Tally};

const FLUX_TOL: f64 = 1e-6;
const FLUX_STEPS: usize = 10_000;
const ORDER_BAND: f64 = 0.2;
const AXIOM_TOL: f64 = 1e-6;

fn shoelace(p: &[Point]) -> f64 {
    p.iter().zip(p.iter().cycle().skip(1)).map(|(a, b)| a.0[0] * b.0[1] - b.0[0] * a.0[1]).sum::<f64>() / 2.0
}

fn phase_gap(h: &SmoothElement, expected: f64) -> f64 {
    h.distance(&SmoothElement::Phase(expected))
}

/// Closed-form comparisons, integrator order, the two axioms, smoothness of
/// loop families and the lattice limit.
pub(super) fn smooth_bridge(cfg: &SuiteConfig) -> super::Report {
    let mut tally = Tally::new(Suite::Smooth, cfg);
    let n = cfg.trials_for(Suite::Smooth);
    let tol = cfg.tol_or(FLUX_TOL);

    // a uniform field B has holonomy exp(-i B · signed area)
    let flux = cfg.run(0, n, |rng, _| {
        let b = rng.gen_range(-2.0..2.0);
        let k = rng.gen_range(3..7);
        let mut pts: Vec<Point> =
            (0..k).map(|_| Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let area = shoelace(&pts);
        pts.push(pts[0]);
        let a = GaugePotential::uniform_field(b);
        match Curve::polygon(&pts).and_then(|c| transport_with(&a, &c, FLUX_STEPS, Scheme::Midpoint)) {
            Ok(h) => {
                let r = phase_gap(&h, -b * area);
                Outcome::new(r < tol, r, || format!("B={b} polygon={pts:?}"), || format!("phase {h:?}, area {area}"))
            }
            Err(e) => Outcome::fail(format!("B={b} polygon={pts:?}"), e.to_string()),
        }
    });
    tally.record(format!("abelian flux on random polygons, {FLUX_STEPS} steps"), Some(tol), flux);

    let (b, r) = (0.9, 0.4);
    let circle = transport_with(
        &GaugePotential::uniform_field(b),
        &Curve::circle_through(Point::new(0.2, -0.1), r, 1.0),
        FLUX_STEPS,
        Scheme::Midpoint,
    );
    tally.single(
        "abelian flux on a circle",
        Some(tol),
        match circle {
            Ok(h) => {
                let d = phase_gap(&h, -b * PI * r * r);
                Outcome::new(d < tol, d, || format!("B={b} r={r}"), || format!("{h:?}"))
            }
            Err(e) => Outcome::fail(format!("B={b} r={r}"), e.to_string()),
        },
    );

    let loop_ = Curve::circle_through(Point::new(0.1, 0.2), 0.6, 0.3);
    let steps = [64, 128, 256, 512, 1024];
    for (name, a) in [("constant SU2", su2_constant()), ("quadratic U1", u1_quadratic()), ("linear SU2", su2_linear())]
    {
        let o = match convergence_study(&a, &loop_, &steps, Scheme::Midpoint) {
            Ok(r) => {
                let gap = (r.order - 2.0).abs();
                Outcome::new(
                    !r.exact && gap <= ORDER_BAND,
                    gap,
                    || a.to_string(),
                    || format!("observed order {}", r.order),
                )
            }
            Err(e) => Outcome::fail(a.to_string(), e.to_string()),
        };
        tally.single(format!("midpoint integrator order 2, {name}"), Some(ORDER_BAND), o);
    }
    let o = match convergence_study(&u1_quadratic(), &loop_, &steps, Scheme::LeftPoint) {
        Ok(r) => Outcome::new(
            !r.meets(2.0, ORDER_BAND),
            0.0,
            || "left-point rule".into(),
            || format!("order {} passed", r.order),
        ),
        Err(e) => Outcome::fail("left-point rule".into(), e.to_string()),
    };
    tally.single("first-order fixture is rejected", None, o);

    let axiom_tol = cfg.tol_or(AXIOM_TOL);
    for (name, a) in [("constant SU2", su2_constant()), ("quadratic U1", u1_quadratic())] {
        let o = match axiom_check(&a, Point::new(0.0, 0.0), cfg.seed, n, FLUX_STEPS, Scheme::Midpoint) {
            Ok(r) => {
                let m = r.max_residual();
                Outcome::new(r.passed() && m < axiom_tol, m, || a.to_string(), || format!("{:?}", r.failures))
            }
            Err(e) => Outcome::fail(a.to_string(), e.to_string()),
        };
        tally.single(format!("spur and product axioms, {name}, {n} loops"), Some(axiom_tol), o);
    }

    let fb = 1.3;
    let circles = LoopFamily::preset("circles").expect("catalog");
    let o = match family_smoothness_check(&GaugePotential::uniform_field(fb), &circles, 33, 2048) {
        Ok(r) => {
            let worst =
                r.derivatives.iter().map(|d| (d.d1[0][0] + 2.0 * PI * fb * d.params[0]).abs()).fold(0.0, f64::max);
            Outcome::new(
                r.grid_stable && worst < 1e-4,
                worst,
                || "circles, uniform field".into(),
                || format!("{:?}", r.levels),
            )
        }
        Err(e) => Outcome::fail("circles".into(), e.to_string()),
    };
    tally.single("circle family: grid-stable, derivative matches flux", Some(1e-4), o);
    let translations = LoopFamily::preset("translations").expect("catalog");
    let o = match family_smoothness_check(&su2_constant(), &translations, 9, 128) {
        Ok(r) => Outcome::new(
            r.grid_stable,
            0.0,
            || "translations, constant SU2".into(),
            || format!("{:?}", r.first_difference_change),
        ),
        Err(e) => Outcome::fail("translations".into(), e.to_string()),
    };
    tally.single("translation family: grid-stable", None, o);

    let bx = LatticeBox::unit();
    for (name, a, rect, res) in [
        ("linear SU2, grid-aligned rectangle", su2_linear(), [0.25, 0.25, 0.75, 0.5], vec![4, 8, 16, 32, 64]),
        ("constant SU2, snapped rectangle", su2_constant(), [0.2, 0.3, 0.9, 0.65], vec![4, 16, 64, 256]),
    ] {
        let o = match lattice_continuum_study(&a, &bx, rect, &res, 20_000) {
            Ok(s) => Outcome::new(!s.exact && s.slope >= 1.0, s.slope, || a.to_string(), || format!("{:?}", s.rows)),
            Err(e) => Outcome::fail(a.to_string(), e.to_string()),
        };
        tally.single(format!("lattice Wilson loop slope at least 1, {name}"), None, o);
    }
    let o = match lattice_continuum_study(&su2_constant(), &bx, [0.25, 0.25, 0.75, 0.5], &[4, 8, 16], 20_000) {
        Ok(s) => {
            let worst = s.rows.iter().map(|r| r.distance).fold(0.0, f64::max);
            Outcome::new(worst < 1e-10, worst, || "constant SU2".into(), || format!("{:?}", s.rows))
        }
        Err(e) => Outcome::fail("constant SU2".into(), e.to_string()),
    };
    tally.single("lattice agrees on aligned rectangles, constant SU2", Some(1e-10), o);

    let (pb, res) = (2.1, 64);
    let o = match lattice_discretize(&GaugePotential::uniform_field(pb), &bx, res) {
        Ok(f) => {
            let cell = 1.0 / (res * res) as f64;
            let worst = [(0, 0), (10, 33), (63, 63)]
                .iter()
                .filter_map(|&(i, j)| SmoothElement::from_element(&plaquette(&f, res, i, j)))
                .map(|p| phase_gap(&p, -pb * cell) / (pb * cell))
                .fold(0.0, f64::max);
            Outcome::new(worst < 1e-3, worst, || format!("B={pb} res={res}"), || "plaquette phase off".into())
        }
        Err(e) => Outcome::fail(format!("B={pb}"), e.to_string()),
    };
    tally.single("plaquette phase is the enclosed flux", Some(1e-3), o);
    tally.finish()
}
