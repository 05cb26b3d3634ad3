//! The smooth side: gauge potentials on a chart, path-ordered exponentials
//! along piecewise smooth curves, and numeric checks of the holonomy axioms.
//!
//! Conventions match the discrete side. Transport along a step multiplies on
//! the left, `g -> exp(-A(p)·dx)·g`, so a curve traversed after another
//! contributes its product on the left.

mod axioms;
mod curve;
mod family;
mod lattice;
pub mod samples;
mod transport;

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{quat, GroupDescriptor, GroupElement, Value};

pub use axioms::{axiom_check, random_loop, AxiomReport};
pub use curve::{Curve, Point, Segment};
pub use family::{family_smoothness_check, FamilyReport, GridLevel, LoopFamily};
pub use lattice::{
    lattice_continuum_study, lattice_discretize, lattice_discretize_with, plaquette, rectangle_walk, LatticeBox,
    LatticeStudy, LatticeStudyRow,
};
pub use transport::{
    convergence_study, fit_slope, polygon_line_integral, richardson_estimate, transport_ode, transport_per_segment,
    transport_with, ConvergenceReport, Scheme,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmoothError {
    #[error("dimension must be 2 or 3, got {0}")]
    Dimension(usize),
    #[error("potential: {0}")]
    Potential(String),
    #[error("curve: {0}")]
    Curve(String),
    #[error("non-finite potential value at ({0}, {1}, {2})")]
    NonFinite(f64, f64, f64),
    #[error("{0}")]
    Bounds(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothGroup {
    U1,
    SU2,
}

impl SmoothGroup {
    pub fn descriptor(self) -> GroupDescriptor {
        match self {
            SmoothGroup::U1 => GroupDescriptor::u1(),
            SmoothGroup::SU2 => GroupDescriptor::su2(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Catalog {
    Zero,
    Constant,
    Linear,
    Quadratic,
}

/// Lie-algebra valued one-form `A = Σ A_μ dx^μ` on a chart of ℝ² or ℝ³.
///
/// For U1 each `A_μ` is `i·a_μ(x)` with `a_μ` a polynomial of degree at most
/// two, coefficients in the monomial order `1, x_0, .., x_{n-1}, x_0², x_0 x_1,
/// .., x_{n-1}²`. For SU2 each `A_μ` is a pure quaternion; `constant` takes
/// one triple per axis and `linear` takes `1 + n` triples (constant part, then
/// one per coordinate) flattened.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "PotentialFile", into = "PotentialFile")]
pub struct GaugePotential {
    dim: usize,
    group: SmoothGroup,
    catalog: Catalog,
    coeffs: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialFile {
    dim: usize,
    group: SmoothGroup,
    catalog: Catalog,
    #[serde(default)]
    coeffs: Vec<Vec<f64>>,
}

impl TryFrom<PotentialFile> for GaugePotential {
    type Error = SmoothError;
    fn try_from(f: PotentialFile) -> Result<Self, SmoothError> {
        GaugePotential::new(f.dim, f.group, f.catalog, f.coeffs)
    }
}

impl From<GaugePotential> for PotentialFile {
    fn from(p: GaugePotential) -> Self {
        PotentialFile { dim: p.dim, group: p.group, catalog: p.catalog, coeffs: p.coeffs }
    }
}

fn monomials(dim: usize, catalog: Catalog) -> usize {
    match catalog {
        Catalog::Zero => 0,
        Catalog::Constant => 1,
        Catalog::Linear => 1 + dim,
        Catalog::Quadratic => 1 + dim + dim * (dim + 1) / 2,
    }
}

impl GaugePotential {
    pub fn new(dim: usize, group: SmoothGroup, catalog: Catalog, coeffs: Vec<Vec<f64>>) -> Result<Self, SmoothError> {
        if !(2..=3).contains(&dim) {
            return Err(SmoothError::Dimension(dim));
        }
        let per_axis = match (group, catalog) {
            (SmoothGroup::SU2, Catalog::Quadratic) => {
                return Err(SmoothError::Potential("SU2 potentials are constant or linear".into()))
            }
            (SmoothGroup::SU2, c) => 3 * monomials(dim, c),
            (SmoothGroup::U1, c) => monomials(dim, c),
        };
        let coeffs = if catalog == Catalog::Zero && coeffs.is_empty() { vec![Vec::new(); dim] } else { coeffs };
        if coeffs.len() != dim {
            return Err(SmoothError::Potential(format!("{} coefficient rows for dimension {dim}", coeffs.len())));
        }
        for (mu, row) in coeffs.iter().enumerate() {
            if row.len() != per_axis {
                return Err(SmoothError::Potential(format!(
                    "axis {mu}: {} coefficients, {catalog:?} {group:?} needs {per_axis}",
                    row.len()
                )));
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(SmoothError::Potential(format!("axis {mu}: non-finite coefficient")));
            }
        }
        Ok(Self { dim, group, catalog, coeffs })
    }

    pub fn zero(dim: usize, group: SmoothGroup) -> Self {
        Self::new(dim, group, Catalog::Zero, Vec::new()).expect("valid dimension")
    }

    /// `A_μ = i·a_μ`.
    pub fn constant_u1(a: &[f64]) -> Result<Self, SmoothError> {
        Self::new(a.len(), SmoothGroup::U1, Catalog::Constant, a.iter().map(|&c| vec![c]).collect())
    }

    /// `A_μ = v_μ` as pure quaternions.
    pub fn constant_su2(v: &[[f64; 3]]) -> Result<Self, SmoothError> {
        Self::new(v.len(), SmoothGroup::SU2, Catalog::Constant, v.iter().map(|t| t.to_vec()).collect())
    }

    /// Planar U1 potential with constant curvature `b`: `a = (-b y/2, b x/2)`.
    pub fn uniform_field(b: f64) -> Self {
        Self::new(2, SmoothGroup::U1, Catalog::Linear, vec![vec![0.0, 0.0, -b / 2.0], vec![0.0, b / 2.0, 0.0]])
            .expect("well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> SmoothGroup {
        self.group
    }

    pub fn catalog(&self) -> Catalog {
        self.catalog
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn is_abelian(&self) -> bool {
        self.group == SmoothGroup::U1
    }

    /// `A_μ(p)` as a Lie-algebra triple (U1 uses the first slot).
    pub fn component(&self, mu: usize, p: &Point) -> [f64; 3] {
        let row = &self.coeffs[mu];
        let x = &p.0;
        match (self.group, self.catalog) {
            (_, Catalog::Zero) => [0.0; 3],
            (SmoothGroup::U1, _) => [self.poly(row, x), 0.0, 0.0],
            (SmoothGroup::SU2, Catalog::Constant) => [row[0], row[1], row[2]],
            (SmoothGroup::SU2, _) => {
                let mut v = [row[0], row[1], row[2]];
                for (nu, xn) in x.iter().take(self.dim).enumerate() {
                    for (k, c) in v.iter_mut().enumerate() {
                        *c += row[3 * (1 + nu) + k] * xn;
                    }
                }
                v
            }
        }
    }

    fn poly(&self, row: &[f64], x: &[f64; 3]) -> f64 {
        let d = self.dim;
        let mut s = row[0];
        if row.len() > 1 {
            for i in 0..d {
                s += row[1 + i] * x[i];
            }
        }
        if row.len() > 1 + d {
            let mut k = 1 + d;
            for i in 0..d {
                for j in i..d {
                    s += row[k] * x[i] * x[j];
                    k += 1;
                }
            }
        }
        s
    }

    /// `A(p)·dx`, checked for finiteness.
    pub fn contract(&self, p: &Point, dx: &[f64; 3]) -> Result<[f64; 3], SmoothError> {
        let mut out = [0.0; 3];
        for (mu, d) in dx.iter().enumerate().take(self.dim) {
            let a = self.component(mu, p);
            for k in 0..3 {
                out[k] += a[k] * d;
            }
        }
        if out.iter().all(|c| c.is_finite()) {
            Ok(out)
        } else {
            Err(SmoothError::NonFinite(p.0[0], p.0[1], p.0[2]))
        }
    }

    /// Abelian curvature `∂_0 a_1 - ∂_1 a_0` at `p` (planar part).
    pub fn curvature_u1(&self, p: &Point) -> Option<f64> {
        if self.group != SmoothGroup::U1 {
            return None;
        }
        if self.catalog == Catalog::Zero || self.catalog == Catalog::Constant {
            return Some(0.0);
        }
        Some(self.partial(1, 0, p) - self.partial(0, 1, p))
    }

    /// `∂_i a_mu` for U1 polynomials.
    fn partial(&self, mu: usize, i: usize, p: &Point) -> f64 {
        let row = &self.coeffs[mu];
        let d = self.dim;
        let mut s = row[1 + i];
        if row.len() > 1 + d {
            let mut k = 1 + d;
            for a in 0..d {
                for b in a..d {
                    if a == i {
                        s += row[k] * p.0[b];
                    }
                    if b == i {
                        s += row[k] * p.0[a];
                    }
                    k += 1;
                }
            }
        }
        s
    }
}

impl fmt::Display for GaugePotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?} potential on R^{}", self.catalog, self.group, self.dim)
    }
}

/// A holonomy or transport value of the smooth side. U1 keeps the unwrapped
/// phase so that derivatives in a parameter are available.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothElement {
    Phase(f64),
    Rotor(quat::Quat),
}

impl SmoothElement {
    pub fn identity(group: SmoothGroup) -> Self {
        match group {
            SmoothGroup::U1 => SmoothElement::Phase(0.0),
            SmoothGroup::SU2 => SmoothElement::Rotor(quat::ONE),
        }
    }

    /// `exp(-X)` for the algebra element `X`.
    pub fn exp_neg(group: SmoothGroup, x: &[f64; 3]) -> Self {
        match group {
            SmoothGroup::U1 => SmoothElement::Phase(-x[0]),
            SmoothGroup::SU2 => SmoothElement::Rotor(quat::exp_pure(&[-x[0], -x[1], -x[2]])),
        }
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (SmoothElement::Phase(a), SmoothElement::Phase(b)) => SmoothElement::Phase(a + b),
            (SmoothElement::Rotor(a), SmoothElement::Rotor(b)) => SmoothElement::Rotor(quat::mul(a, b)),
            _ => panic!("mixed U1 and SU2 values"),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            SmoothElement::Phase(a) => SmoothElement::Phase(-a),
            SmoothElement::Rotor(q) => SmoothElement::Rotor(quat::conj(q)),
        }
    }

    /// Phase distance on the circle, chordal distance on quaternions.
    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (SmoothElement::Phase(a), SmoothElement::Phase(b)) => {
                let d = (a - b).rem_euclid(TAU);
                d.min(TAU - d)
            }
            (SmoothElement::Rotor(a), SmoothElement::Rotor(b)) => quat::distance(a, b),
            _ => f64::INFINITY,
        }
    }

    /// Coordinates in ℝ² (U1 as `e^{iθ}`) or ℝ⁴.
    pub fn embed(&self) -> Vec<f64> {
        match self {
            SmoothElement::Phase(a) => vec![a.cos(), a.sin()],
            SmoothElement::Rotor(q) => q.to_vec(),
        }
    }

    pub fn to_element(&self) -> GroupElement {
        match self {
            SmoothElement::Phase(a) => GroupDescriptor::u1().angle(*a).expect("finite phase"),
            SmoothElement::Rotor(q) => GroupDescriptor::su2().quaternion(*q).expect("unit quaternion"),
        }
    }

    pub fn from_element(x: &GroupElement) -> Option<Self> {
        match x.value() {
            Value::Angle(a) => Some(SmoothElement::Phase(*a)),
            Value::Quat(q) => Some(SmoothElement::Rotor(*q)),
            _ => None,
        }
    }
}

#[cfg(test)]
pub(crate) mod tests;
