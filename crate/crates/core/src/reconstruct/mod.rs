//! From holonomy data back to bundles.
//!
//! [`reconstruct`] realizes a holonomy map as a field in spanning-tree gauge.
//! [`functor_on_arrow`] turns a holonomy isomorphism into a
//! connection-preserving bundle map, and [`extract_hol_iso`] goes the other
//! way. [`gauge_equivalent`] decides whether two pointed fields are related
//! by such a map and returns a checkable certificate or a refutation.

mod certificate;
mod search;

use std::sync::Arc;

use thiserror::Error;

use crate::bundle::{
    apply_gauge, connection_residual, BundleError, BundleMorphism, BundlePoint, GaugeField, GaugeTransformation,
};
use crate::category::{induced_holonomy_map, make_iso, CategoryError, HolIso, HolonomyMap, IsoData};
use crate::group::{GroupElement, GroupError, GroupHom};
use crate::path::{spanning_tree, Graph, PathError, VertexId, Walk};

pub use certificate::{EquivalenceCertificate, Invariant, LoopWitness, Refutation};
pub use search::{gauge_equivalent, Candidates, GaugeVerdict, SearchBounds};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReconstructError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("the pointed field does not induce the arrow's {0} map")]
    Mismatch(&'static str),
    #[error("morphism does not preserve the connection (residual {0:e})")]
    NotConnectionPreserving(f64),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

/// A field together with a point over the base vertex.
#[derive(Clone, Debug)]
pub struct PointedField {
    pub field: GaugeField,
    pub basepoint: BundlePoint,
}

/// Output of [`reconstruct`]: a field in tree gauge and `u = (x, e)`.
pub type ReconstructionResult = PointedField;

impl PointedField {
    pub fn new(field: GaugeField, basepoint: BundlePoint) -> Result<Self, ReconstructError> {
        field.point(basepoint.vertex, basepoint.fiber.clone())?;
        Ok(Self { field, basepoint })
    }

    pub fn holonomy_map(&self) -> Result<HolonomyMap, ReconstructError> {
        Ok(induced_holonomy_map(&self.field, &self.basepoint)?)
    }
}

/// Links on the tree of `h` are the identity; each chord carries the image
/// of its generator, so the round trip is exact.
pub fn reconstruct(h: &HolonomyMap) -> ReconstructionResult {
    let graph = h.graph_arc().clone();
    let group = *h.group();
    let mut links = vec![group.identity(); graph.edge_count()];
    for (e, img) in h.basis().chords().iter().zip(h.images()) {
        // generators traverse their chord forward
        links[e.0] = img.clone();
    }
    let field = GaugeField::new(graph, group, links).expect("one link per edge");
    let basepoint = field.identity_point(h.base());
    PointedField { field, basepoint }
}

/// Path choice `β_v` from the lifted point's vertex to `v`.
pub type BetaChoice<'a> = &'a dyn Fn(&Graph, VertexId, VertexId) -> Walk;

fn tree_beta(graph: &Graph, from: VertexId, to: VertexId) -> Walk {
    spanning_tree(graph, from).path(graph, from, to).into_walk()
}

/// The bundle map of an arrow `(Ψ, α, φ)`: it sends `z = transport(α⁻¹, u)`
/// to `u'` and is extended along tree paths by transport.
pub fn functor_on_arrow(
    a: &IsoData,
    src: &PointedField,
    dst: &PointedField,
) -> Result<BundleMorphism, ReconstructError> {
    functor_on_arrow_with(a, src, dst, &tree_beta)
}

/// [`functor_on_arrow`] with a caller-supplied choice of paths `β_v`.
pub fn functor_on_arrow_with(
    a: &IsoData,
    src: &PointedField,
    dst: &PointedField,
    beta: BetaChoice<'_>,
) -> Result<BundleMorphism, ReconstructError> {
    if !src.holonomy_map()?.same_map(a.source()) {
        return Err(ReconstructError::Mismatch("source"));
    }
    if !dst.holonomy_map()?.same_map(a.target()) {
        return Err(ReconstructError::Mismatch("target"));
    }
    Ok(arrow_morphism(a, src, dst, beta)?)
}

/// The construction itself, without re-deriving the holonomy maps.
pub(crate) fn arrow_morphism(
    a: &IsoData,
    src: &PointedField,
    dst: &PointedField,
    beta: BetaChoice<'_>,
) -> Result<BundleMorphism, BundleError> {
    let graph = src.field.graph();
    let z = src.field.transport(&a.alpha().walk().invert(), &src.basepoint)?;
    let phi = a.phi();
    let frames = graph
        .vertex_ids()
        .map(|v| {
            let b = beta(graph, z.vertex, v);
            let there = dst.field.transport(&a.psi().walk(&b), &dst.basepoint)?;
            let here = src.field.transport(&b, &z)?;
            Ok(&there.fiber * &phi.apply(&here.fiber).inverse())
        })
        .collect::<Result<Vec<_>, BundleError>>()?;
    BundleMorphism::new(a.psi().clone(), phi.clone(), frames)
}

/// A holonomy isomorphism recovered from a bundle map.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub iso: HolIso,
    /// `c` with `transport(α₀, F⁻¹(u')) = u·c` for the tree path `α₀`.
    pub defect: GroupElement,
    /// True when no curve lifts exactly onto `u` and φ was conjugated instead.
    pub adjusted: bool,
}

/// Recovers `(Ψ, α, φ)` from a connection-preserving `m`.
///
/// With `α₀` the tree path from `Ψ⁻¹(x')` to `x` and defect `c`, a loop `δ`
/// with `H(δ) = c⁻¹` makes `α = α₀` then `δ` lift exactly onto `u`, and the
/// arrow keeps φ. If `c` is not a holonomy the arrow `(Ψ, α₀, φ∘conj(c⁻¹))`
/// is returned and flagged as adjusted.
pub fn extract_hol_iso(
    m: &BundleMorphism,
    src: &PointedField,
    dst: &PointedField,
) -> Result<Extraction, ReconstructError> {
    let residual = connection_residual(m, &src.field, &dst.field)?;
    if residual > src.field.group().tolerance().max(dst.field.group().tolerance()) {
        return Err(ReconstructError::NotConnectionPreserving(residual));
    }
    let h = Arc::new(src.holonomy_map()?);
    let h2 = Arc::new(dst.holonomy_map()?);
    let graph = src.field.graph();
    let x = src.basepoint.vertex;
    let y = m.psi().inverse().vertex(dst.basepoint.vertex);
    let pulled = m.inverse()?.apply(&dst.basepoint);
    let alpha0 = h.tree().path(graph, y, x);
    let landed = src.field.transport(alpha0.walk(), &pulled)?;
    let defect = &src.basepoint.fiber.inverse() * &landed.fiber;
    if let Some(word) = h.word_for(&defect.inverse()) {
        let alpha = alpha0.then(&h.basis().expand(&word))?;
        if let Ok(iso) = make_iso(m.psi().clone(), alpha.walk(), m.phi().clone(), h.clone(), h2.clone()) {
            return Ok(Extraction { iso, defect, adjusted: false });
        }
    }
    let phi = m.phi().compose(&GroupHom::conjugation(&defect.inverse()))?;
    let iso = make_iso(m.psi().clone(), alpha0.walk(), phi, h, h2)?;
    Ok(Extraction { iso, defect, adjusted: true })
}

/// Outcome of comparing the images of two parallel arrows.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FaithfulnessReport {
    pub arrows_equal: bool,
    pub morphisms_equal: bool,
    /// Equal images with unequal arrows.
    pub violation: bool,
}

pub fn faithfulness_check(
    a: &HolIso,
    b: &HolIso,
    src: &PointedField,
    dst: &PointedField,
) -> Result<FaithfulnessReport, ReconstructError> {
    let ma = functor_on_arrow(a, src, dst)?;
    let mb = functor_on_arrow(b, src, dst)?;
    let arrows_equal = a.same_arrow(b);
    let morphisms_equal = ma.same_as(&mb);
    Ok(FaithfulnessReport { arrows_equal, morphisms_equal, violation: morphisms_equal && !arrows_equal })
}

/// Certificate that `field` is isomorphic to the reconstruction of its own
/// holonomy map at `u`.
#[derive(Clone, Debug)]
pub struct EssentialReport {
    pub certificate: EquivalenceCertificate,
    pub tree_links_identity: bool,
}

pub fn essential_surjectivity_check(field: &GaugeField, u: &BundlePoint) -> Result<EssentialReport, ReconstructError> {
    let src = PointedField::new(field.clone(), u.clone())?;
    let h = src.holonomy_map()?;
    let rec = reconstruct(&h);
    let tree_links_identity = h.tree().edges().iter().all(|e| rec.field.link(*e).is_identity());
    let hr = Arc::new(rec.holonomy_map()?);
    let hs = Arc::new(h);
    let iso = make_iso(
        crate::path::GraphIso::identity(rec.field.graph()),
        &Walk::empty(rec.basepoint.vertex),
        GroupHom::identity(rec.field.group()),
        hr,
        hs,
    )?;
    let certificate = EquivalenceCertificate::build(iso, rec, src)?;
    Ok(EssentialReport { certificate, tree_links_identity })
}

/// The gauge transformation fixing the basepoint fibre that carries `a` onto
/// `b`, when both pointed fields induce the same holonomy map.
pub fn basepoint_fixing_gauge(
    a: &PointedField,
    b: &PointedField,
) -> Result<Option<GaugeTransformation>, ReconstructError> {
    let graph = a.field.graph();
    if *graph != *b.field.graph() || a.basepoint.vertex != b.basepoint.vertex {
        return Ok(None);
    }
    let x = a.basepoint.vertex;
    let tree = spanning_tree(graph, x);
    let values = graph
        .vertex_ids()
        .map(|v| {
            let w = tree.path(graph, x, v);
            let pa = a.field.transport(w.walk(), &a.basepoint)?;
            let pb = b.field.transport(w.walk(), &b.basepoint)?;
            Ok(&pb.fiber * &pa.fiber.inverse())
        })
        .collect::<Result<Vec<_>, BundleError>>()?;
    let t = GaugeTransformation::new(values);
    let moved = apply_gauge(&a.field, &t)?;
    let fixes_u = (t.at(x) * &a.basepoint.fiber).approx_eq(&b.basepoint.fiber);
    Ok((fixes_u && moved.same_links(&b.field)).then_some(t))
}

pub mod random;

#[cfg(test)]
pub(crate) mod tests;
