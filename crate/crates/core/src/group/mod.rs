//! Structure groups.
//!
//! Finite kinds (cyclic, symmetric, dihedral, quaternion) compare exactly.
//! The matrix kinds U(1) and SU(2) compare within the descriptor tolerance,
//! measured as the wrapped angle difference for U(1) and the Euclidean
//! quaternion distance for SU(2).

mod hom;
pub mod quat;
mod search;
mod subgroup;

use std::f64::consts::TAU;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

pub use hom::{GroupHom, HomTag};
pub use search::{isomorphism_search, isomorphism_search_bounded, DEFAULT_MAX_SEARCH_ORDER};
pub(crate) use subgroup::word_search;
pub use subgroup::{centralizes, subgroup_generated, Subgroup, MEMBERSHIP_DEPTH, SUBGROUP_CAP};

use quat::Quat;

/// Default equality tolerance for U(1) and SU(2).
pub const DEFAULT_MATRIX_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("group mismatch: {left} vs {right}")]
    Mismatch { left: String, right: String },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid element of {group}: {reason}")]
    InvalidElement { group: String, reason: String },
    #[error("subgroup enumeration exceeded {cap} elements")]
    CapExceeded { cap: usize },
    #[error("{0} is a matrix group; element enumeration is not available")]
    NotEnumerable(String),
    #[error("group order {order} exceeds the search bound {bound}")]
    OrderBound { order: u64, bound: u64 },
    #[error("generator images violate relation #{index} of {group}")]
    RelationViolated { group: String, index: usize },
    #[error("homomorphism rule is inconsistent: {0}")]
    BadRule(String),
    #[error("homomorphism is not invertible")]
    NotInvertible,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupKind {
    Cyclic(u32),
    Symmetric(u32),
    Dihedral(u32),
    Quaternion8,
    U1,
    Su2,
}

/// A structure group together with its equality tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupDescriptor {
    kind: GroupKind,
    tol: f64,
}

/// Exact hashable identity of a finite-group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKey {
    Residue(u32),
    Perm(Vec<u8>),
    Dihedral { rot: u32, reflect: bool },
    Q8(u8),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Residue(u32),
    /// `perm[i]` is the image of `i`.
    Perm(Vec<u8>),
    /// `rot k`: i -> i + k, `ref k`: i -> k - i (mod n).
    Dihedral {
        rot: u32,
        reflect: bool,
    },
    /// Index `2 * unit + negative` with units ordered 1, i, j, k.
    Q8(u8),
    /// Angle in `[0, 2pi)`.
    Angle(f64),
    Quat(Quat),
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    group: GroupDescriptor,
    value: Value,
}

/// A word in the standard generators: `(generator index, exponent)` pairs,
/// multiplied left to right.
pub type Relation = Vec<(usize, i32)>;

const Q8_LABELS: [&str; 8] = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];

fn normalize_angle(a: f64) -> f64 {
    let t = a.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

fn q8_mul(a: u8, b: u8) -> u8 {
    // unit products for 1, i, j, k: (unit, sign flip)
    const TABLE: [[(u8, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let (ua, na) = (a / 2, a % 2 == 1);
    let (ub, nb) = (b / 2, b % 2 == 1);
    let (u, flip) = TABLE[ua as usize][ub as usize];
    let neg = na ^ nb ^ flip;
    u * 2 + neg as u8
}

fn q8_inv(a: u8) -> u8 {
    if a < 2 {
        a
    } else {
        a ^ 1
    }
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

impl GroupDescriptor {
    pub fn cyclic(n: u32) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidGroup("cyclic(0)".into()));
        }
        Ok(Self { kind: GroupKind::Cyclic(n), tol: 0.0 })
    }

    pub fn symmetric(n: u32) -> Result<Self, GroupError> {
        if n == 0 || n > 64 {
            return Err(GroupError::InvalidGroup(format!("symmetric({n})")));
        }
        Ok(Self { kind: GroupKind::Symmetric(n), tol: 0.0 })
    }

    pub fn dihedral(n: u32) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidGroup("dihedral(0)".into()));
        }
        Ok(Self { kind: GroupKind::Dihedral(n), tol: 0.0 })
    }

    pub fn quaternion8() -> Self {
        Self { kind: GroupKind::Quaternion8, tol: 0.0 }
    }

    pub fn u1() -> Self {
        Self { kind: GroupKind::U1, tol: DEFAULT_MATRIX_TOL }
    }

    pub fn su2() -> Self {
        Self { kind: GroupKind::Su2, tol: DEFAULT_MATRIX_TOL }
    }

    /// Replaces the tolerance of a matrix kind. Finite kinds keep tolerance 0.
    pub fn with_tolerance(self, tol: f64) -> Result<Self, GroupError> {
        if !self.is_matrix() {
            return Ok(self);
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(GroupError::InvalidGroup(format!("tolerance {tol} must be positive")));
        }
        Ok(Self { tol, ..self })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self.kind, GroupKind::U1 | GroupKind::Su2)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_matrix()
    }

    pub fn is_abelian(&self) -> bool {
        match self.kind {
            GroupKind::Cyclic(_) | GroupKind::U1 => true,
            GroupKind::Symmetric(n) => n <= 2,
            GroupKind::Dihedral(n) => n <= 2,
            GroupKind::Quaternion8 | GroupKind::Su2 => false,
        }
    }

    /// Order of a finite group, `None` for matrix kinds.
    pub fn order(&self) -> Option<u64> {
        match self.kind {
            GroupKind::Cyclic(n) => Some(n as u64),
            GroupKind::Symmetric(n) => Some(factorial(n)),
            GroupKind::Dihedral(n) => Some(2 * n as u64),
            GroupKind::Quaternion8 => Some(8),
            GroupKind::U1 | GroupKind::Su2 => None,
        }
    }

    /// Structural identity ignoring tolerance.
    pub fn same_group(&self, other: &Self) -> bool {
        self.kind == other.kind
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<(), GroupError> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(GroupError::Mismatch { left: self.to_string(), right: other.to_string() })
        }
    }

    pub fn identity(&self) -> GroupElement {
        let value = match self.kind {
            GroupKind::Cyclic(_) => Value::Residue(0),
            GroupKind::Symmetric(n) => Value::Perm((0..n as u8).collect()),
            GroupKind::Dihedral(_) => Value::Dihedral { rot: 0, reflect: false },
            GroupKind::Quaternion8 => Value::Q8(0),
            GroupKind::U1 => Value::Angle(0.0),
            GroupKind::Su2 => Value::Quat(quat::ONE),
        };
        GroupElement { group: *self, value }
    }

    /// Validates and normalizes a raw value into an element of this group.
    pub fn element(&self, value: Value) -> Result<GroupElement, GroupError> {
        let bad = |reason: String| GroupError::InvalidElement { group: self.to_string(), reason };
        let value = match (self.kind, value) {
            (GroupKind::Cyclic(n), Value::Residue(k)) => {
                if k >= n {
                    return Err(bad(format!("residue {k} not below {n}")));
                }
                Value::Residue(k)
            }
            (GroupKind::Symmetric(n), Value::Perm(p)) => {
                if p.len() != n as usize {
                    return Err(bad(format!("permutation of length {} for degree {n}", p.len())));
                }
                let mut seen = vec![false; p.len()];
                for &i in &p {
                    if (i as usize) >= p.len() || seen[i as usize] {
                        return Err(bad(format!("{p:?} is not a permutation")));
                    }
                    seen[i as usize] = true;
                }
                Value::Perm(p)
            }
            (GroupKind::Dihedral(n), Value::Dihedral { rot, reflect }) => {
                if rot >= n {
                    return Err(bad(format!("index {rot} not below {n}")));
                }
                Value::Dihedral { rot, reflect }
            }
            (GroupKind::Quaternion8, Value::Q8(i)) => {
                if i >= 8 {
                    return Err(bad(format!("label index {i}")));
                }
                Value::Q8(i)
            }
            (GroupKind::U1, Value::Angle(a)) => {
                if !a.is_finite() {
                    return Err(bad("non-finite angle".into()));
                }
                Value::Angle(normalize_angle(a))
            }
            (GroupKind::Su2, Value::Quat(q)) => {
                let n = quat::norm(&q);
                if !n.is_finite() || (n - 1.0).abs() > 1e-6_f64.max(self.tol) {
                    return Err(bad(format!("quaternion norm {n} is not 1")));
                }
                // leave unit input untouched so files round-trip bit for bit;
                // drift past a few ulps is corrected
                Value::Quat(if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
                    q
                } else {
                    quat::normalize(&q).expect("nonzero norm")
                })
            }
            (_, v) => return Err(bad(format!("payload {v:?} has the wrong shape"))),
        };
        Ok(GroupElement { group: *self, value })
    }

    pub fn residue(&self, k: u32) -> Result<GroupElement, GroupError> {
        self.element(Value::Residue(k))
    }

    pub fn perm(&self, images: &[u8]) -> Result<GroupElement, GroupError> {
        self.element(Value::Perm(images.to_vec()))
    }

    /// Permutation from cycles in 0-based points, e.g. `&[&[0, 1, 2]]`.
    pub fn cycles(&self, cycles: &[&[u8]]) -> Result<GroupElement, GroupError> {
        let GroupKind::Symmetric(n) = self.kind else {
            return Err(GroupError::InvalidElement {
                group: self.to_string(),
                reason: "cycle notation needs a symmetric group".into(),
            });
        };
        let mut p: Vec<u8> = (0..n as u8).collect();
        for c in cycles {
            for (idx, &a) in c.iter().enumerate() {
                let b = c[(idx + 1) % c.len()];
                if a as u32 >= n || b as u32 >= n {
                    return Err(GroupError::InvalidElement {
                        group: self.to_string(),
                        reason: format!("point {a} out of range"),
                    });
                }
                p[a as usize] = b;
            }
        }
        self.perm(&p)
    }

    pub fn rotation(&self, k: u32) -> Result<GroupElement, GroupError> {
        self.element(Value::Dihedral { rot: k, reflect: false })
    }

    pub fn reflection(&self, k: u32) -> Result<GroupElement, GroupError> {
        self.element(Value::Dihedral { rot: k, reflect: true })
    }

    pub fn q8(&self, label: &str) -> Result<GroupElement, GroupError> {
        let idx = Q8_LABELS.iter().position(|l| *l == label).ok_or_else(|| GroupError::InvalidElement {
            group: self.to_string(),
            reason: format!("label {label:?}"),
        })?;
        self.element(Value::Q8(idx as u8))
    }

    pub fn angle(&self, theta: f64) -> Result<GroupElement, GroupError> {
        self.element(Value::Angle(theta))
    }

    pub fn quaternion(&self, q: Quat) -> Result<GroupElement, GroupError> {
        let q = quat::normalize(&q)
            .ok_or_else(|| GroupError::InvalidElement { group: self.to_string(), reason: "zero quaternion".into() })?;
        self.element(Value::Quat(q))
    }

    /// Standard generators of the finite presentation. Empty for matrix kinds.
    pub fn generators(&self) -> Vec<GroupElement> {
        let g = |value| GroupElement { group: *self, value };
        match self.kind {
            GroupKind::Cyclic(n) => vec![g(Value::Residue(1 % n))],
            GroupKind::Symmetric(n) => (0..n.saturating_sub(1))
                .map(|i| {
                    let mut p: Vec<u8> = (0..n as u8).collect();
                    p.swap(i as usize, i as usize + 1);
                    g(Value::Perm(p))
                })
                .collect(),
            GroupKind::Dihedral(n) => {
                vec![g(Value::Dihedral { rot: 1 % n, reflect: false }), g(Value::Dihedral { rot: 0, reflect: true })]
            }
            GroupKind::Quaternion8 => vec![g(Value::Q8(2)), g(Value::Q8(4))],
            GroupKind::U1 | GroupKind::Su2 => Vec::new(),
        }
    }

    /// Defining relations over [`Self::generators`].
    pub fn relations(&self) -> Vec<Relation> {
        match self.kind {
            GroupKind::Cyclic(n) => vec![vec![(0, n as i32)]],
            GroupKind::Symmetric(n) => {
                let m = n.saturating_sub(1) as usize;
                let mut rels = Vec::new();
                for i in 0..m {
                    rels.push(vec![(i, 2)]);
                    if i + 1 < m {
                        rels.push(vec![(i, 1), (i + 1, 1), (i, 1), (i + 1, 1), (i, 1), (i + 1, 1)]);
                    }
                    for j in i + 2..m {
                        rels.push(vec![(i, 1), (j, 1), (i, 1), (j, 1)]);
                    }
                }
                rels
            }
            GroupKind::Dihedral(n) => {
                vec![vec![(0, n as i32)], vec![(1, 2)], vec![(1, 1), (0, 1), (1, 1), (0, 1)]]
            }
            GroupKind::Quaternion8 => vec![vec![(0, 4)], vec![(0, 2), (1, -2)], vec![(1, -1), (0, 1), (1, 1), (0, 1)]],
            GroupKind::U1 | GroupKind::Su2 => Vec::new(),
        }
    }

    /// Evaluates a relation word on arbitrary generator images.
    pub fn evaluate_word(&self, target: &GroupDescriptor, images: &[GroupElement], word: &Relation) -> GroupElement {
        let mut acc = target.identity();
        for &(gen, exp) in word {
            let base = if exp < 0 { images[gen].inverse() } else { images[gen].clone() };
            for _ in 0..exp.unsigned_abs() {
                acc = &acc * &base;
            }
        }
        acc
    }

    /// All elements in a fixed deterministic order.
    pub fn elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        let g = |value| GroupElement { group: *self, value };
        let order = self.order().ok_or_else(|| GroupError::NotEnumerable(self.to_string()))?;
        if order > SUBGROUP_CAP as u64 {
            return Err(GroupError::CapExceeded { cap: SUBGROUP_CAP });
        }
        Ok(match self.kind {
            GroupKind::Cyclic(n) => (0..n).map(|k| g(Value::Residue(k))).collect(),
            GroupKind::Dihedral(n) => (0..n)
                .map(|k| g(Value::Dihedral { rot: k, reflect: false }))
                .chain((0..n).map(|k| g(Value::Dihedral { rot: k, reflect: true })))
                .collect(),
            GroupKind::Quaternion8 => (0..8).map(|k| g(Value::Q8(k))).collect(),
            GroupKind::Symmetric(n) => {
                let mut p: Vec<u8> = (0..n as u8).collect();
                let mut out = vec![g(Value::Perm(p.clone()))];
                while next_permutation(&mut p) {
                    out.push(g(Value::Perm(p.clone())));
                }
                out
            }
            GroupKind::U1 | GroupKind::Su2 => unreachable!(),
        })
    }

    /// A uniformly random element (Haar measure for matrix kinds).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let value = match self.kind {
            GroupKind::Cyclic(n) => Value::Residue(rng.gen_range(0..n)),
            GroupKind::Symmetric(n) => {
                let mut p: Vec<u8> = (0..n as u8).collect();
                p.shuffle(rng);
                Value::Perm(p)
            }
            GroupKind::Dihedral(n) => Value::Dihedral { rot: rng.gen_range(0..n), reflect: rng.gen() },
            GroupKind::Quaternion8 => Value::Q8(rng.gen_range(0..8)),
            GroupKind::U1 => Value::Angle(normalize_angle(rng.gen_range(0.0..TAU))),
            GroupKind::Su2 => loop {
                let q: Quat = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let n = quat::norm(&q);
                if n > 1e-3 && n <= 1.0 {
                    break Value::Quat(quat::normalize(&q).expect("nonzero"));
                }
            },
        };
        GroupElement { group: *self, value }
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupKind::Symmetric(n) => write!(f, "symmetric({n})"),
            GroupKind::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupKind::Quaternion8 => write!(f, "quaternion8"),
            GroupKind::U1 => write!(f, "U1"),
            GroupKind::Su2 => write!(f, "SU2"),
        }
    }
}

impl GroupElement {
    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    /// Group product `self * other`, failing on a descriptor mismatch.
    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.group.check_same(&other.group)?;
        let n = |k: GroupKind| match k {
            GroupKind::Cyclic(n) | GroupKind::Dihedral(n) => n,
            _ => 0,
        };
        let value = match (&self.value, &other.value) {
            (Value::Residue(a), Value::Residue(b)) => Value::Residue((a + b) % n(self.group.kind)),
            (Value::Perm(a), Value::Perm(b)) => Value::Perm(b.iter().map(|&i| a[i as usize]).collect()),
            (Value::Dihedral { rot: a, reflect: ra }, Value::Dihedral { rot: b, reflect: rb }) => {
                let n = n(self.group.kind);
                let (a, b) = (*a, *b);
                match (ra, rb) {
                    (false, false) => Value::Dihedral { rot: (a + b) % n, reflect: false },
                    (false, true) => Value::Dihedral { rot: (a + b) % n, reflect: true },
                    (true, false) => Value::Dihedral { rot: (a + n - b) % n, reflect: true },
                    (true, true) => Value::Dihedral { rot: (a + n - b) % n, reflect: false },
                }
            }
            (Value::Q8(a), Value::Q8(b)) => Value::Q8(q8_mul(*a, *b)),
            (Value::Angle(a), Value::Angle(b)) => Value::Angle(normalize_angle(a + b)),
            (Value::Quat(a), Value::Quat(b)) => Value::Quat(quat::normalize(&quat::mul(a, b)).unwrap_or(quat::ONE)),
            _ => unreachable!("descriptor check guarantees matching payloads"),
        };
        Ok(GroupElement { group: self.group, value })
    }

    pub fn inverse(&self) -> GroupElement {
        let value = match &self.value {
            Value::Residue(a) => {
                let GroupKind::Cyclic(n) = self.group.kind else { unreachable!() };
                Value::Residue((n - a) % n)
            }
            Value::Perm(p) => {
                let mut inv = vec![0u8; p.len()];
                for (i, &pi) in p.iter().enumerate() {
                    inv[pi as usize] = i as u8;
                }
                Value::Perm(inv)
            }
            Value::Dihedral { rot, reflect } => {
                let GroupKind::Dihedral(n) = self.group.kind else { unreachable!() };
                if *reflect {
                    Value::Dihedral { rot: *rot, reflect: true }
                } else {
                    Value::Dihedral { rot: (n - rot) % n, reflect: false }
                }
            }
            Value::Q8(a) => Value::Q8(q8_inv(*a)),
            Value::Angle(a) => Value::Angle(normalize_angle(-a)),
            Value::Quat(q) => Value::Quat(quat::conj(q)),
        };
        GroupElement { group: self.group, value }
    }

    /// `c * self * c^-1`.
    pub fn conjugated_by(&self, c: &GroupElement) -> GroupElement {
        &(c * self) * &c.inverse()
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.group.identity();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Distance in the natural metric; 0 or 1 for finite kinds.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        if !self.group.same_group(&other.group) {
            return f64::INFINITY;
        }
        match (&self.value, &other.value) {
            (Value::Angle(a), Value::Angle(b)) => {
                let d = (a - b).rem_euclid(TAU);
                d.min(TAU - d)
            }
            (Value::Quat(a), Value::Quat(b)) => quat::distance(a, b),
            (a, b) => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Equality: exact for finite kinds, within the descriptor tolerance otherwise.
    pub fn approx_eq(&self, other: &GroupElement) -> bool {
        if self.group.is_matrix() {
            self.distance(other) <= self.group.tol.max(other.group.tol)
        } else {
            self.group.same_group(&other.group) && self.value == other.value
        }
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&self.group.identity())
    }

    pub fn commutes_with(&self, other: &GroupElement) -> bool {
        (self * other).approx_eq(&(other * self))
    }

    /// Exact key for finite kinds; `None` for matrix kinds.
    pub fn key(&self) -> Option<ElementKey> {
        match &self.value {
            Value::Residue(k) => Some(ElementKey::Residue(*k)),
            Value::Perm(p) => Some(ElementKey::Perm(p.clone())),
            Value::Dihedral { rot, reflect } => Some(ElementKey::Dihedral { rot: *rot, reflect: *reflect }),
            Value::Q8(i) => Some(ElementKey::Q8(*i)),
            Value::Angle(_) | Value::Quat(_) => None,
        }
    }

    /// Element order for finite kinds.
    pub fn order(&self) -> Option<u64> {
        if self.group.is_matrix() {
            return None;
        }
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = &acc * self;
            k += 1;
        }
        Some(k)
    }

    pub fn q8_label(&self) -> Option<&'static str> {
        match self.value {
            Value::Q8(i) => Some(Q8_LABELS[i as usize]),
            _ => None,
        }
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl std::ops::Mul for &GroupElement {
    type Output = GroupElement;

    /// Panics when the operands belong to different groups; use
    /// [`GroupElement::multiply`] for a checked product.
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.multiply(rhs).expect("product of elements from different groups")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Residue(k) => write!(f, "{k}"),
            Value::Perm(p) => write!(f, "{p:?}"),
            Value::Dihedral { rot, reflect: false } => write!(f, "rot{rot}"),
            Value::Dihedral { rot, reflect: true } => write!(f, "ref{rot}"),
            Value::Q8(i) => write!(f, "{}", Q8_LABELS[*i as usize]),
            Value::Angle(a) => write!(f, "{a}"),
            Value::Quat(q) => write!(f, "({}, {}, {}, {})", q[0], q[1], q[2], q[3]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cyclic_product() {
        let g = GroupDescriptor::cyclic(5).unwrap();
        let p = g.residue(3).unwrap().multiply(&g.residue(4).unwrap()).unwrap();
        assert_eq!(p, g.residue(2).unwrap());
    }

    #[test]
    fn identity_is_neutral_for_every_kind() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in catalog() {
            let x = g.random(&mut rng);
            assert!((&g.identity() * &x).approx_eq(&x), "{g}");
        }
    }

    #[test]
    fn su2_inverse_within_tolerance() {
        let g = GroupDescriptor::su2();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = g.random(&mut rng);
        assert!((&q * &q.inverse()).distance(&g.identity()) < 1e-9);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = GroupDescriptor::cyclic(5).unwrap().identity();
        let b = GroupDescriptor::cyclic(6).unwrap().identity();
        assert!(matches!(a.multiply(&b), Err(GroupError::Mismatch { .. })));
    }

    #[test]
    fn finite_orders_match_enumeration() {
        for g in catalog().into_iter().filter(|g| g.is_finite()) {
            assert_eq!(g.elements().unwrap().len() as u64, g.order().unwrap(), "{g}");
        }
        assert_eq!(GroupDescriptor::symmetric(5).unwrap().elements().unwrap().len(), 120);
    }

    #[test]
    fn tolerance_is_zero_for_finite_kinds() {
        for g in catalog() {
            assert_eq!(g.tolerance() > 0.0, g.is_matrix());
        }
    }

    #[test]
    fn presentations_hold_on_standard_generators() {
        for g in catalog().into_iter().filter(|g| g.is_finite()) {
            let gens = g.generators();
            for rel in g.relations() {
                assert!(g.evaluate_word(&g, &gens, &rel).is_identity(), "{g} {rel:?}");
            }
        }
    }

    #[test]
    fn quaternion_group_labels() {
        let q = GroupDescriptor::quaternion8();
        let i = q.q8("i").unwrap();
        let j = q.q8("j").unwrap();
        assert_eq!(&i * &j, q.q8("k").unwrap());
        assert_eq!(&j * &i, q.q8("-k").unwrap());
        assert_eq!(i.order(), Some(4));
    }

    #[test]
    fn angles_are_normalized() {
        let u = GroupDescriptor::u1();
        let a = u.angle(-0.5).unwrap();
        match a.value() {
            Value::Angle(t) => assert!((0.0..TAU).contains(t)),
            _ => unreachable!(),
        }
        assert!(u.angle(TAU + 1e-12).unwrap().approx_eq(&u.identity()));
    }

    pub(crate) fn catalog() -> Vec<GroupDescriptor> {
        vec![
            GroupDescriptor::cyclic(6).unwrap(),
            GroupDescriptor::symmetric(4).unwrap(),
            GroupDescriptor::dihedral(4).unwrap(),
            GroupDescriptor::quaternion8(),
            GroupDescriptor::u1(),
            GroupDescriptor::su2(),
        ]
    }
}
