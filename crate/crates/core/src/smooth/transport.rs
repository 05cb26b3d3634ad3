use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::GroupElement;

use super::{Curve, GaugePotential, Point, Segment, SmoothElement, SmoothError, SmoothGroup};

/// Where the potential is sampled on each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Second order: `exp(-A(x(t_mid))·Δx)`.
    Midpoint,
    /// First order: the potential at the step's start.
    LeftPoint,
}

impl Scheme {
    pub fn order(self) -> f64 {
        match self {
            Scheme::Midpoint => 2.0,
            Scheme::LeftPoint => 1.0,
        }
    }
}

/// Path-ordered product over `steps` equal parameter steps per segment.
/// Zero-length segments are skipped.
pub fn transport_with(
    a: &GaugePotential,
    curve: &Curve,
    steps: usize,
    scheme: Scheme,
) -> Result<SmoothElement, SmoothError> {
    transport_per_segment(a, curve, &vec![steps; curve.segments().len()], scheme)
}

/// [`transport_with`] with its own step count for each segment.
pub fn transport_per_segment(
    a: &GaugePotential,
    curve: &Curve,
    steps: &[usize],
    scheme: Scheme,
) -> Result<SmoothElement, SmoothError> {
    if steps.len() != curve.segments().len() || steps.contains(&0) {
        return Err(SmoothError::Bounds("at least one step per segment".into()));
    }
    let group = a.group();
    let mut acc = SmoothElement::identity(group);
    for (seg, &steps) in curve.segments().iter().zip(steps) {
        if seg.is_degenerate() {
            continue;
        }
        let h = 1.0 / steps as f64;
        let mut p0 = seg.start();
        for k in 0..steps {
            let t0 = k as f64 * h;
            let p1 = if k + 1 == steps { seg.end() } else { seg.at(t0 + h) };
            let at = match scheme {
                Scheme::Midpoint => seg.at(t0 + 0.5 * h),
                Scheme::LeftPoint => p0,
            };
            let x = a.contract(&at, &p1.sub(&p0))?;
            acc = step(group, &x).mul(&acc);
            p0 = p1;
        }
    }
    Ok(acc)
}

fn step(group: SmoothGroup, x: &[f64; 3]) -> SmoothElement {
    SmoothElement::exp_neg(group, x)
}

/// Transport along `curve` with the midpoint scheme.
pub fn transport_ode(a: &GaugePotential, curve: &Curve, steps: usize) -> Result<GroupElement, SmoothError> {
    Ok(transport_with(a, curve, steps, Scheme::Midpoint)?.to_element())
}

/// The result at `2·steps` and its Richardson error estimate
/// `d(H_N, H_2N) / (2^p - 1)`.
pub fn richardson_estimate(
    a: &GaugePotential,
    curve: &Curve,
    steps: usize,
    scheme: Scheme,
) -> Result<(SmoothElement, f64), SmoothError> {
    let coarse = transport_with(a, curve, steps, scheme)?;
    let fine = transport_with(a, curve, 2 * steps, scheme)?;
    Ok((fine, coarse.distance(&fine) / (2f64.powf(scheme.order()) - 1.0)))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = pts.iter().map(|(a, _)| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub scheme: Scheme,
    pub steps: Vec<usize>,
    pub errors: Vec<f64>,
    pub reference_steps: usize,
    /// Observed order: minus the log-log slope of error against steps.
    pub order: f64,
    /// Every error is at rounding level, so no order is observable.
    pub exact: bool,
}

impl ConvergenceReport {
    /// Observed order within `band` of `order`.
    pub fn meets(&self, order: f64, band: f64) -> bool {
        self.exact || (self.order - order).abs() <= band
    }
}

/// Errors against a reference at 16 times the finest step count.
pub fn convergence_study(
    a: &GaugePotential,
    curve: &Curve,
    steps: &[usize],
    scheme: Scheme,
) -> Result<ConvergenceReport, SmoothError> {
    let finest = steps.iter().copied().max().ok_or_else(|| SmoothError::Bounds("no step counts".into()))?;
    let reference_steps = 16 * finest;
    let reference = transport_with(a, curve, reference_steps, Scheme::Midpoint)?;
    let errors = steps
        .par_iter()
        .map(|&n| transport_with(a, curve, n, scheme).map(|h| h.distance(&reference)))
        .collect::<Result<Vec<f64>, _>>()?;
    let exact = errors.iter().all(|e| *e < 1e-13);
    let order = if exact {
        f64::NAN
    } else {
        let xs: Vec<f64> = steps.iter().map(|&n| n as f64).collect();
        -fit_slope(&xs, &errors)
    };
    Ok(ConvergenceReport { scheme, steps: steps.to_vec(), errors, reference_steps, order, exact })
}

/// `∮ a·dx` along a chain of straight segments, exact for the polynomial
/// catalog (three-point Gauss-Legendre is exact to degree five). `None` for
/// SU2 or curved segments.
pub fn polygon_line_integral(a: &GaugePotential, curve: &Curve) -> Option<f64> {
    if a.group() != SmoothGroup::U1 {
        return None;
    }
    let nodes = [(-(0.6f64).sqrt(), 5.0 / 9.0), (0.0, 8.0 / 9.0), ((0.6f64).sqrt(), 5.0 / 9.0)];
    let mut total = 0.0;
    for seg in curve.segments() {
        let Segment::Line { from, to } = seg else { return None };
        let d = to.sub(from);
        for (x, w) in nodes {
            let t = 0.5 * (x + 1.0);
            let p = Point(std::array::from_fn(|k| from.0[k] + t * d[k]));
            total += 0.5 * w * a.contract(&p, &d).ok()?[0];
        }
    }
    Some(total)
}
