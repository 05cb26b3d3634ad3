use std::sync::Arc;

use crate::group::GroupHom;
use crate::path::{GraphIso, ReducedWalk, Walk};

use super::{alpha_equivalent, CategoryError, HolonomyMap};

/// The data of a holonomy isomorphism `(Ψ, α, φ)` from `H` to `H'`, where the
/// reduced walk `α` runs from `Ψ⁻¹(x')` to `x`.
#[derive(Clone, Debug)]
pub struct IsoData {
    source: Arc<HolonomyMap>,
    target: Arc<HolonomyMap>,
    psi: GraphIso,
    alpha: ReducedWalk,
    phi: GroupHom,
}

/// An arrow of the groupoid in which curves inducing the same translation
/// of holonomy data are identified.
#[derive(Clone, Debug)]
pub struct HolIso(IsoData);

/// An arrow of the groupoid in which curves are identified only up to thin
/// equivalence.
#[derive(Clone, Debug)]
pub struct HolStarIso(IsoData);

impl IsoData {
    fn new(
        psi: GraphIso,
        alpha: &Walk,
        phi: GroupHom,
        source: Arc<HolonomyMap>,
        target: Arc<HolonomyMap>,
    ) -> Result<Self, CategoryError> {
        let psi = GraphIso::new(source.graph(), target.graph(), psi.vertex_map().to_vec(), psi.edge_map().to_vec())?;
        phi.source().check_same(source.group())?;
        phi.target().check_same(target.group())?;
        if !phi.is_iso() {
            return Err(CategoryError::NotIso);
        }
        let data = IsoData { source, target, psi, alpha: alpha.reduce(), phi };
        data.check_endpoints()?;
        data.check_diagram()?;
        Ok(data)
    }

    fn check_endpoints(&self) -> Result<(), CategoryError> {
        let y = self.psi.inverse().vertex(self.target.base());
        let g = self.source.graph();
        if self.alpha.start() != y || self.alpha.end() != self.source.base() {
            return Err(CategoryError::Endpoint(format!(
                "alpha runs {} -> {}, expected {} -> {}",
                g.vertex_name(self.alpha.start()),
                g.vertex_name(self.alpha.end()),
                g.vertex_name(y),
                g.vertex_name(self.source.base())
            )));
        }
        Ok(())
    }

    /// `φ(H(γ)) = H'(Ψ(α⁻¹ • γ • α))` on every chord generator `γ` of `H`.
    fn check_diagram(&self) -> Result<(), CategoryError> {
        for (i, (lhs, rhs)) in self.diagram_pairs()?.into_iter().enumerate() {
            if !lhs.approx_eq(&rhs) {
                return Err(CategoryError::DiagramViolation {
                    generator: i,
                    walk: self.source.basis().generators()[i].display(self.source.graph()),
                    expected: lhs.to_string(),
                    found: rhs.to_string(),
                });
            }
        }
        Ok(())
    }

    fn diagram_pairs(&self) -> Result<Vec<(crate::group::GroupElement, crate::group::GroupElement)>, CategoryError> {
        let a = self.alpha.walk();
        self.source
            .basis()
            .generators()
            .iter()
            .zip(self.source.images())
            .map(|(gen, img)| {
                let conj = a.then(gen.walk())?.then(&a.invert())?;
                let rhs = self.target.evaluate(&self.psi.walk(&conj))?;
                Ok((self.phi.apply(img), rhs))
            })
            .collect()
    }

    /// Largest diagram deviation over the generators.
    pub fn diagram_residual(&self) -> Result<f64, CategoryError> {
        Ok(self.diagram_pairs()?.iter().map(|(a, b)| a.distance(b)).fold(0.0, f64::max))
    }

    /// Re-runs every check of construction on the stored data.
    pub fn revalidate(&self) -> Result<(), CategoryError> {
        IsoData::new(self.psi.clone(), self.alpha.walk(), self.phi.clone(), self.source.clone(), self.target.clone())
            .map(|_| ())
    }

    pub fn source(&self) -> &Arc<HolonomyMap> {
        &self.source
    }

    pub fn target(&self) -> &Arc<HolonomyMap> {
        &self.target
    }

    pub fn psi(&self) -> &GraphIso {
        &self.psi
    }

    pub fn alpha(&self) -> &ReducedWalk {
        &self.alpha
    }

    pub fn phi(&self) -> &GroupHom {
        &self.phi
    }

    fn identity(h: &Arc<HolonomyMap>) -> Self {
        IsoData {
            source: h.clone(),
            target: h.clone(),
            psi: GraphIso::identity(h.graph()),
            alpha: ReducedWalk::empty(h.base()),
            phi: GroupHom::identity(h.group()),
        }
    }

    /// `self ∘ first = (Ψ'Ψ, α • Ψ⁻¹(α'), φ'φ)`.
    fn after(&self, first: &IsoData) -> Result<Self, CategoryError> {
        if !(Arc::ptr_eq(&first.target, &self.source) || first.target.same_map(&self.source)) {
            return Err(CategoryError::NotComposable("codomain and domain differ".into()));
        }
        let pulled = first.psi.inverse().reduced(&self.alpha);
        let alpha = pulled.then(&first.alpha)?;
        Ok(IsoData {
            source: first.source.clone(),
            target: self.target.clone(),
            psi: self.psi.compose(&first.psi),
            alpha,
            phi: self.phi.compose(&first.phi)?,
        })
    }

    /// `(Ψ⁻¹, (Ψ∘α)⁻¹, φ⁻¹)`.
    fn inverse(&self) -> Result<Self, CategoryError> {
        Ok(IsoData {
            source: self.target.clone(),
            target: self.source.clone(),
            psi: self.psi.inverse(),
            alpha: self.psi.reduced(&self.alpha).invert(),
            phi: self.phi.inverse()?,
        })
    }

    fn same_ends(&self, other: &IsoData) -> bool {
        (Arc::ptr_eq(&self.source, &other.source) || self.source.same_map(&other.source))
            && (Arc::ptr_eq(&self.target, &other.target) || self.target.same_map(&other.target))
            && self.psi == other.psi
            && self.phi.same_as(&other.phi)
    }
}

/// Validates `(Ψ, α, φ)` as an arrow `H -> H'`.
pub fn make_iso(
    psi: GraphIso,
    alpha: &Walk,
    phi: GroupHom,
    source: Arc<HolonomyMap>,
    target: Arc<HolonomyMap>,
) -> Result<HolIso, CategoryError> {
    IsoData::new(psi, alpha, phi, source, target).map(HolIso)
}

pub fn make_star_iso(
    psi: GraphIso,
    alpha: &Walk,
    phi: GroupHom,
    source: Arc<HolonomyMap>,
    target: Arc<HolonomyMap>,
) -> Result<HolStarIso, CategoryError> {
    IsoData::new(psi, alpha, phi, source, target).map(HolStarIso)
}

/// The quotient functor on arrows: same data, coarser equality.
pub fn quotient(a: &HolStarIso) -> HolIso {
    HolIso(a.0.clone())
}

impl std::ops::Deref for HolIso {
    type Target = IsoData;
    fn deref(&self) -> &IsoData {
        &self.0
    }
}

impl std::ops::Deref for HolStarIso {
    type Target = IsoData;
    fn deref(&self) -> &IsoData {
        &self.0
    }
}

impl HolIso {
    pub fn identity(h: &Arc<HolonomyMap>) -> Self {
        HolIso(IsoData::identity(h))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &HolIso) -> Result<HolIso, CategoryError> {
        self.0.after(&first.0).map(HolIso)
    }

    pub fn compose(second: &HolIso, first: &HolIso) -> Result<HolIso, CategoryError> {
        second.after(first)
    }

    pub fn inverse(&self) -> Result<HolIso, CategoryError> {
        self.0.inverse().map(HolIso)
    }

    /// Arrow equality: same ends, Ψ and φ, and equivalent curves.
    pub fn same_arrow(&self, other: &HolIso) -> bool {
        self.0.same_ends(&other.0)
            && self.alpha.start() == other.alpha.start()
            && alpha_equivalent(&self.source, self.alpha.walk(), other.alpha.walk()).unwrap_or(false)
    }

    /// Shortlex-least curve of the class (finite groups only).
    pub fn canonical_alpha(&self) -> Result<Option<ReducedWalk>, CategoryError> {
        self.source.canonical_alpha(&self.alpha)
    }

    /// The starred arrow carrying the same stored curve.
    pub fn lift(&self) -> HolStarIso {
        HolStarIso(self.0.clone())
    }
}

impl HolStarIso {
    pub fn identity(h: &Arc<HolonomyMap>) -> Self {
        HolStarIso(IsoData::identity(h))
    }

    pub fn after(&self, first: &HolStarIso) -> Result<HolStarIso, CategoryError> {
        self.0.after(&first.0).map(HolStarIso)
    }

    pub fn compose(second: &HolStarIso, first: &HolStarIso) -> Result<HolStarIso, CategoryError> {
        second.after(first)
    }

    pub fn inverse(&self) -> Result<HolStarIso, CategoryError> {
        self.0.inverse().map(HolStarIso)
    }

    /// Arrow equality: same ends, Ψ and φ, and equal reduced curves.
    pub fn same_arrow(&self, other: &HolStarIso) -> bool {
        self.0.same_ends(&other.0) && self.alpha == other.alpha
    }
}
