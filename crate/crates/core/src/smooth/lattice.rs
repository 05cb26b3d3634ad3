use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::GaugeField;
use crate::group::GroupElement;
use crate::path::{EdgeId, Graph, Step, VertexId, Walk};

use super::transport::{fit_slope, transport_with, Scheme};
use super::{Curve, GaugePotential, Point, SmoothElement, SmoothError};

/// The planar box `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeBox {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl FromStr for LatticeBox {
    type Err = SmoothError;
    /// `"x0,y0,x1,y1"`.
    fn from_str(s: &str) -> Result<Self, SmoothError> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| SmoothError::Bounds(format!("box {s:?}: {e}")))?;
        match v.as_slice() {
            [x0, y0, x1, y1] => LatticeBox::new(*x0, *y0, *x1, *y1),
            _ => Err(SmoothError::Bounds(format!("box {s:?}: expected x0,y0,x1,y1"))),
        }
    }
}

impl LatticeBox {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, SmoothError> {
        if !(x1 > x0 && y1 > y0) || ![x0, y0, x1, y1].iter().all(|c| c.is_finite()) {
            return Err(SmoothError::Bounds(format!("degenerate box {x0},{y0},{x1},{y1}")));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn unit() -> Self {
        Self { x0: 0.0, y0: 0.0, x1: 1.0, y1: 1.0 }
    }

    fn point(&self, res: usize, i: usize, j: usize) -> Point {
        let (hx, hy) = ((self.x1 - self.x0) / res as f64, (self.y1 - self.y0) / res as f64);
        Point::new(self.x0 + i as f64 * hx, self.y0 + j as f64 * hy)
    }
}

fn vertex(res: usize, i: usize, j: usize) -> VertexId {
    VertexId(j * (res + 1) + i)
}

fn x_edge(res: usize, i: usize, j: usize) -> EdgeId {
    EdgeId(j * res + i)
}

fn y_edge(res: usize, i: usize, j: usize) -> EdgeId {
    EdgeId(res * (res + 1) + j * (res + 1) + i)
}

/// The `(res + 1)²` grid over `bx` (vertices `v_i_j`, edges `x_i_j` and
/// `y_i_j` pointing along the axes) with single midpoint-step links
/// `exp(-A(mid)·Δx)`. Potentials on ℝ³ are sampled on the plane `z = 0`.
pub fn lattice_discretize(a: &GaugePotential, bx: &LatticeBox, res: usize) -> Result<GaugeField, SmoothError> {
    lattice_discretize_with(a, bx, res, 1)
}

/// [`lattice_discretize`] with `link_steps` integrator steps per link.
pub fn lattice_discretize_with(
    a: &GaugePotential,
    bx: &LatticeBox,
    res: usize,
    link_steps: usize,
) -> Result<GaugeField, SmoothError> {
    if res < 2 {
        return Err(SmoothError::Bounds("lattice resolution must be at least 2".into()));
    }
    let n = res + 1;
    let names: Vec<String> = (0..n * n).map(|k| format!("v_{}_{}", k % n, k / n)).collect();
    let mut edges = Vec::with_capacity(2 * res * n);
    let mut segs = Vec::with_capacity(2 * res * n);
    for j in 0..n {
        for i in 0..res {
            edges.push((
                format!("x_{i}_{j}"),
                names[vertex(res, i, j).0].clone(),
                names[vertex(res, i + 1, j).0].clone(),
            ));
            segs.push((bx.point(res, i, j), bx.point(res, i + 1, j)));
        }
    }
    for j in 0..res {
        for i in 0..n {
            edges.push((
                format!("y_{i}_{j}"),
                names[vertex(res, i, j).0].clone(),
                names[vertex(res, i, j + 1).0].clone(),
            ));
            segs.push((bx.point(res, i, j), bx.point(res, i, j + 1)));
        }
    }
    let graph = Graph::new(names, edges).map_err(|e| SmoothError::Bounds(e.to_string()))?;
    let links = segs
        .par_iter()
        .map(|(p, q)| Ok(transport_with(a, &Curve::line(*p, *q), link_steps, Scheme::Midpoint)?.to_element()))
        .collect::<Result<Vec<GroupElement>, SmoothError>>()?;
    Ok(GaugeField::new(Arc::new(graph), a.group().descriptor(), links).expect("one link per edge"))
}

/// The counter-clockwise boundary of the lattice rectangle with corners
/// `(i0, j0)` and `(i1, j1)`, from `v_i0_j0`.
pub fn rectangle_walk(graph: &Graph, res: usize, i0: usize, j0: usize, i1: usize, j1: usize) -> Walk {
    let mut steps = Vec::new();
    steps.extend((i0..i1).map(|i| Step::forward(x_edge(res, i, j0))));
    steps.extend((j0..j1).map(|j| Step::forward(y_edge(res, i1, j))));
    steps.extend((i0..i1).rev().map(|i| Step::reverse(x_edge(res, i, j1))));
    steps.extend((j0..j1).rev().map(|j| Step::reverse(y_edge(res, i0, j))));
    Walk::new(graph, vertex(res, i0, j0), steps).expect("lattice rectangle inside the grid")
}

/// Wilson loop of the plaquette with lower-left corner `(i, j)`.
pub fn plaquette(field: &GaugeField, res: usize, i: usize, j: usize) -> GroupElement {
    field.walk_product(&rectangle_walk(field.graph(), res, i, j, i + 1, j + 1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeStudyRow {
    pub resolution: usize,
    pub mesh: f64,
    /// The lattice rectangle actually used, snapped to grid lines.
    pub snapped: [f64; 4],
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeStudy {
    pub rectangle: [f64; 4],
    pub continuum_steps: usize,
    pub rows: Vec<LatticeStudyRow>,
    /// Log-log slope of distance against mesh size.
    pub slope: f64,
    /// Agreement at rounding level on every grid.
    pub exact: bool,
}

impl LatticeStudy {
    pub fn converges_at(&self, order: f64) -> bool {
        self.exact || self.slope >= order
    }
}

/// Lattice Wilson loops of `rect = [x0, y0, x1, y1]` (corners snapped to the
/// nearest grid lines) against the continuum transport around `rect`.
pub fn lattice_continuum_study(
    a: &GaugePotential,
    bx: &LatticeBox,
    rect: [f64; 4],
    resolutions: &[usize],
    continuum_steps: usize,
) -> Result<LatticeStudy, SmoothError> {
    let continuum =
        transport_with(a, &Curve::rectangle(rect[0], rect[1], rect[2], rect[3]), continuum_steps, Scheme::Midpoint)?;
    let rows = resolutions
        .iter()
        .map(|&res| {
            let field = lattice_discretize(a, bx, res)?;
            let snap = |v: f64, lo: f64, hi: f64| {
                (((v - lo) / (hi - lo)) * res as f64).round().clamp(0.0, res as f64) as usize
            };
            let (i0, j0) = (snap(rect[0], bx.x0, bx.x1), snap(rect[1], bx.y0, bx.y1));
            let (i1, j1) = (snap(rect[2], bx.x0, bx.x1), snap(rect[3], bx.y0, bx.y1));
            let w = field.walk_product(&rectangle_walk(field.graph(), res, i0, j0, i1, j1));
            let w = SmoothElement::from_element(&w).expect("matrix kinds");
            let (p0, p1) = (bx.point(res, i0, j0), bx.point(res, i1, j1));
            Ok(LatticeStudyRow {
                resolution: res,
                mesh: ((bx.x1 - bx.x0) / res as f64).max((bx.y1 - bx.y0) / res as f64),
                snapped: [p0.0[0], p0.0[1], p1.0[0], p1.0[1]],
                distance: w.distance(&continuum),
            })
        })
        .collect::<Result<Vec<_>, SmoothError>>()?;
    let exact = rows.iter().all(|r| r.distance < 1e-12);
    let slope = if exact {
        f64::NAN
    } else {
        let m: Vec<f64> = rows.iter().map(|r| r.mesh).collect();
        let d: Vec<f64> = rows.iter().map(|r| r.distance.max(1e-300)).collect();
        fit_slope(&m, &d)
    };
    Ok(LatticeStudy { rectangle: rect, continuum_steps, rows, slope, exact })
}
