use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::transport::{transport_with, Scheme};
use super::{Curve, GaugePotential, Point, SmoothElement, SmoothError};

/// A finite-dimensional family of loops at a fixed basepoint, parameterized
/// over an axis-aligned box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum LoopFamily {
    /// Counter-clockwise circles through `base` with centre in direction
    /// `phi`, radius over `radius`.
    Circles { base: Point, phi: f64, radius: [f64; 2] },
    /// `template` moved by an offset in `offsets = [x0, y0, x1, y1]` and
    /// joined to `base` by a straight tail.
    Translations { base: Point, template: Curve, offsets: [f64; 4] },
}

impl LoopFamily {
    /// Named catalog entries.
    pub fn preset(name: &str) -> Result<Self, SmoothError> {
        match name {
            "circles" => Ok(LoopFamily::Circles { base: Point::new(0.0, 0.0), phi: 0.0, radius: [0.1, 1.0] }),
            "translations" => Ok(LoopFamily::Translations {
                base: Point::new(0.0, 0.0),
                template: Curve::rectangle(0.0, 0.0, 0.3, 0.3),
                offsets: [-0.5, -0.5, 0.5, 0.5],
            }),
            other => Err(SmoothError::Bounds(format!("unknown loop family {other:?} (circles, translations)"))),
        }
    }

    pub fn domain(&self) -> Vec<[f64; 2]> {
        match self {
            LoopFamily::Circles { radius, .. } => vec![*radius],
            LoopFamily::Translations { offsets, .. } => vec![[offsets[0], offsets[2]], [offsets[1], offsets[3]]],
        }
    }

    pub fn loop_at(&self, params: &[f64]) -> Result<Curve, SmoothError> {
        match self {
            LoopFamily::Circles { base, phi, .. } => Ok(Curve::circle_through(*base, params[0], *phi)),
            LoopFamily::Translations { base, template, .. } => {
                Curve::lasso(*base, &template.translated([params[0], params[1], 0.0]))
            }
        }
    }
}

/// Statistics of the difference quotients on one grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridLevel {
    pub points_per_axis: usize,
    pub spacing: Vec<f64>,
    pub max_first_difference: f64,
    pub max_second_difference: f64,
}

/// First-derivative estimate at a parameter point, on the finest grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeSample {
    pub params: Vec<f64>,
    /// One vector per axis, in the chart coordinates of the group (the
    /// unwrapped phase for U1, quaternion components for SU2).
    pub d1: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: LoopFamily,
    pub steps: usize,
    pub levels: Vec<GridLevel>,
    /// Largest change of the first difference quotients between
    /// consecutive grids.
    pub first_difference_change: Vec<f64>,
    pub second_difference_change: Vec<f64>,
    /// `change[0] / change[1]`; about 4 for a map with three derivatives.
    pub first_difference_ratio: f64,
    pub grid_stable: bool,
    pub derivatives: Vec<DerivativeSample>,
}

/// Changes below this are treated as converged.
const NOISE_FLOOR: f64 = 1e-8;

fn coords(x: &SmoothElement) -> Vec<f64> {
    match x {
        SmoothElement::Phase(a) => vec![*a],
        SmoothElement::Rotor(q) => q.to_vec(),
    }
}

/// Samples `H∘ψ` on nested grids with `grid`, `2·grid - 1` and `4·grid - 3`
/// points per axis and compares central difference quotients at the interior
/// points of the coarsest grid.
pub fn family_smoothness_check(
    a: &GaugePotential,
    fam: &LoopFamily,
    grid: usize,
    steps: usize,
) -> Result<FamilyReport, SmoothError> {
    if grid < 3 {
        return Err(SmoothError::Bounds("the coarsest grid needs at least 3 points per axis".into()));
    }
    let dom = fam.domain();
    let k = dom.len();
    let fine_n = 4 * grid - 3;
    // values on the finest grid; coarser grids are sub-lattices
    let total = fine_n.pow(k as u32);
    let index = |flat: usize| -> Vec<usize> { (0..k).map(|ax| (flat / fine_n.pow(ax as u32)) % fine_n).collect() };
    let param = |idx: &[usize]| -> Vec<f64> {
        idx.iter().zip(&dom).map(|(&i, d)| d[0] + (d[1] - d[0]) * i as f64 / (fine_n - 1) as f64).collect()
    };
    let values = (0..total)
        .into_par_iter()
        .map(|flat| {
            let lp = fam.loop_at(&param(&index(flat)))?;
            Ok(coords(&transport_with(a, &lp, steps, Scheme::Midpoint)?))
        })
        .collect::<Result<Vec<_>, SmoothError>>()?;
    let at = |idx: &[usize]| -> &Vec<f64> {
        let flat: usize = idx.iter().enumerate().map(|(ax, &i)| i * fine_n.pow(ax as u32)).sum();
        &values[flat]
    };

    // interior points of the coarsest grid, in fine indices
    let inner: Vec<Vec<usize>> = {
        let mut pts = vec![Vec::new()];
        for _ in 0..k {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<usize>| {
                    (1..grid - 1).map(move |i| {
                        let mut q = p.clone();
                        q.push(4 * i);
                        q
                    })
                })
                .collect();
        }
        pts
    };
    let mut levels = Vec::new();
    let mut d1s: Vec<Vec<Vec<Vec<f64>>>> = Vec::new();
    let mut d2s: Vec<Vec<Vec<Vec<f64>>>> = Vec::new();
    for stride in [4usize, 2, 1] {
        let spacing: Vec<f64> = dom.iter().map(|d| (d[1] - d[0]) * stride as f64 / (fine_n - 1) as f64).collect();
        let mut d1 = Vec::with_capacity(inner.len());
        let mut d2 = Vec::with_capacity(inner.len());
        for p in &inner {
            let f0 = at(p);
            let (mut g1, mut g2) = (Vec::new(), Vec::new());
            for ax in 0..k {
                let (mut lo, mut hi) = (p.clone(), p.clone());
                lo[ax] -= stride;
                hi[ax] += stride;
                let (fl, fh) = (at(&lo), at(&hi));
                let h = spacing[ax];
                g1.push(fh.iter().zip(fl).map(|(x, y)| (x - y) / (2.0 * h)).collect::<Vec<_>>());
                g2.push(fh.iter().zip(fl).zip(f0).map(|((x, y), z)| (x - 2.0 * z + y) / (h * h)).collect::<Vec<_>>());
            }
            d1.push(g1);
            d2.push(g2);
        }
        levels.push(GridLevel {
            points_per_axis: (fine_n - 1) / stride + 1,
            spacing,
            max_first_difference: max_abs(&d1),
            max_second_difference: max_abs(&d2),
        });
        d1s.push(d1);
        d2s.push(d2);
    }
    let change = |d: &[Vec<Vec<Vec<f64>>>]| -> Vec<f64> { (0..2).map(|l| max_diff(&d[l], &d[l + 1])).collect() };
    let first_difference_change = change(&d1s);
    let second_difference_change = change(&d2s);
    let first_difference_ratio = first_difference_change[0] / first_difference_change[1];
    let converging = first_difference_change[1] <= NOISE_FLOOR
        || (first_difference_ratio >= 2.0 && first_difference_change[1] < first_difference_change[0]);
    let bounded = {
        let m: Vec<f64> = levels.iter().map(|l| l.max_second_difference).collect();
        let (lo, hi) = (m.iter().cloned().fold(f64::INFINITY, f64::min), m.iter().cloned().fold(0.0, f64::max));
        hi <= NOISE_FLOOR || hi <= 1.5 * lo
    };
    let derivatives =
        inner.iter().zip(&d1s[2]).map(|(p, d)| DerivativeSample { params: param(p), d1: d.clone() }).collect();
    Ok(FamilyReport {
        family: fam.clone(),
        steps,
        levels,
        first_difference_change,
        second_difference_change,
        first_difference_ratio,
        grid_stable: converging && bounded,
        derivatives,
    })
}

fn max_abs(d: &[Vec<Vec<f64>>]) -> f64 {
    d.iter().flatten().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_diff(a: &[Vec<Vec<f64>>], b: &[Vec<Vec<f64>>]) -> f64 {
    a.iter().flatten().flatten().zip(b.iter().flatten().flatten()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
