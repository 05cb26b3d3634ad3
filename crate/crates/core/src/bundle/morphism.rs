use crate::group::GroupElement;
use crate::group::{GroupDescriptor, GroupHom};
use crate::path::{Graph, GraphIso, Step, VertexId};

use super::{BundleError, BundlePoint, GaugeField, GaugeTransformation};

/// A bundle map `F(v, h) = (Ψ(v), g(v)·φ(h))`.
#[derive(Clone, Debug)]
pub struct BundleMorphism {
    psi: GraphIso,
    phi: GroupHom,
    frames: Vec<GroupElement>,
}

impl BundleMorphism {
    pub fn new(psi: GraphIso, phi: GroupHom, frames: Vec<GroupElement>) -> Result<Self, BundleError> {
        if frames.len() != psi.vertex_map().len() {
            return Err(BundleError::Incompatible(format!(
                "{} frames for {} vertices",
                frames.len(),
                psi.vertex_map().len()
            )));
        }
        for f in &frames {
            phi.target().check_same(f.group())?;
        }
        Ok(Self { psi, phi, frames })
    }

    pub fn identity(graph: &Graph, group: &GroupDescriptor) -> Self {
        Self {
            psi: GraphIso::identity(graph),
            phi: GroupHom::identity(group),
            frames: vec![group.identity(); graph.vertex_count()],
        }
    }

    /// The vertical morphism realizing a gauge transformation.
    pub fn vertical(graph: &Graph, group: &GroupDescriptor, t: &GaugeTransformation) -> Self {
        Self { psi: GraphIso::identity(graph), phi: GroupHom::identity(group), frames: t.values().to_vec() }
    }

    pub fn psi(&self) -> &GraphIso {
        &self.psi
    }

    pub fn phi(&self) -> &GroupHom {
        &self.phi
    }

    pub fn frames(&self) -> &[GroupElement] {
        &self.frames
    }

    pub fn frame(&self, v: VertexId) -> &GroupElement {
        &self.frames[v.0]
    }

    pub fn apply(&self, p: &BundlePoint) -> BundlePoint {
        BundlePoint { vertex: self.psi.vertex(p.vertex), fiber: &self.frames[p.vertex.0] * &self.phi.apply(&p.fiber) }
    }

    /// `second ∘ self`.
    pub fn then(&self, second: &BundleMorphism) -> Result<BundleMorphism, BundleError> {
        let phi = second.phi.compose(&self.phi)?;
        let frames = self
            .frames
            .iter()
            .enumerate()
            .map(|(v, g)| &second.frames[self.psi.vertex(VertexId(v)).0] * &second.phi.apply(g))
            .collect();
        Ok(BundleMorphism { psi: second.psi.compose(&self.psi), phi, frames })
    }

    pub fn inverse(&self) -> Result<BundleMorphism, BundleError> {
        let phi_inv = self.phi.inverse()?;
        let psi_inv = self.psi.inverse();
        let frames = psi_inv.vertex_map().iter().map(|v| phi_inv.apply(&self.frames[v.0]).inverse()).collect();
        Ok(BundleMorphism { psi: psi_inv, phi: phi_inv, frames })
    }

    /// Equality as data: same Ψ, pointwise-equal φ, equal frames.
    pub fn same_as(&self, other: &BundleMorphism) -> bool {
        self.psi == other.psi
            && self.phi.same_as(&other.phi)
            && self.frames.iter().zip(&other.frames).all(|(a, b)| a.approx_eq(b))
    }

    /// Largest frame distance to `other`, infinite if Ψ or φ differ.
    pub fn distance(&self, other: &BundleMorphism) -> f64 {
        if self.psi != other.psi || !self.phi.same_as(&other.phi) {
            return f64::INFINITY;
        }
        self.frames.iter().zip(&other.frames).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }

    fn check_fields(&self, src: &GaugeField, dst: &GaugeField) -> Result<(), BundleError> {
        if self.psi.vertex_map().len() != src.graph().vertex_count()
            || self.psi.edge_map().len() != src.graph().edge_count()
            || src.graph().vertex_count() != dst.graph().vertex_count()
            || src.graph().edge_count() != dst.graph().edge_count()
        {
            return Err(BundleError::Incompatible("graph sizes differ".into()));
        }
        GraphIso::new(src.graph(), dst.graph(), self.psi.vertex_map().to_vec(), self.psi.edge_map().to_vec())?;
        self.phi.source().check_same(src.group())?;
        self.phi.target().check_same(dst.group())?;
        Ok(())
    }
}

/// Per-edge deviation `d(U'(Ψe), g(head)·φ(U(e))·g(tail)⁻¹)`, maximized.
pub fn connection_residual(m: &BundleMorphism, src: &GaugeField, dst: &GaugeField) -> Result<f64, BundleError> {
    m.check_fields(src, dst)?;
    let mut worst: f64 = 0.0;
    for (i, e) in src.graph().edges().iter().enumerate() {
        let lhs = dst.step_value(m.psi.step(Step::forward(crate::path::EdgeId(i))));
        let rhs = &(&m.frames[e.head.0] * &m.phi.apply(&src.links()[i])) * &m.frames[e.tail.0].inverse();
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

/// True iff `m` intertwines transport on every edge.
pub fn morphism_preserves_connection(m: &BundleMorphism, src: &GaugeField, dst: &GaugeField) -> bool {
    if m.check_fields(src, dst).is_err() {
        return false;
    }
    src.graph().edges().iter().enumerate().all(|(i, e)| {
        let lhs = dst.step_value(m.psi.step(Step::forward(crate::path::EdgeId(i))));
        let rhs = &(&m.frames[e.head.0] * &m.phi.apply(&src.links()[i])) * &m.frames[e.tail.0].inverse();
        lhs.approx_eq(&rhs)
    })
}

#[cfg(test)]
mod tests {
    use super::super::apply_gauge;
    use super::*;
    use crate::path::{random, EdgeId};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn identity_preserves_any_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Arc::new(random::connected_graph(&mut rng, 6, 1, 3));
        let su2 = GroupDescriptor::su2();
        let f = GaugeField::random(&mut rng, g.clone(), su2);
        assert!(morphism_preserves_connection(&BundleMorphism::identity(&g, &su2), &f, &f));
    }

    #[test]
    fn gauge_morphism_preserves_and_perturbation_breaks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d4 = GroupDescriptor::dihedral(4).unwrap();
        let g = Arc::new(random::connected_graph(&mut rng, 6, 2, 3));
        let f = GaugeField::random(&mut rng, g.clone(), d4);
        let t = GaugeTransformation::random(&mut rng, &g, &d4);
        let f2 = apply_gauge(&f, &t).unwrap();
        let m = BundleMorphism::vertical(&g, &d4, &t);
        assert!(morphism_preserves_connection(&m, &f, &f2));
        let bumped = &f2.links()[0] * &d4.rotation(1).unwrap();
        let f3 = f2.with_link(EdgeId(0), bumped).unwrap();
        assert!(!morphism_preserves_connection(&m, &f, &f3));
        assert_eq!(connection_residual(&m, &f, &f3).unwrap(), 1.0);
    }

    #[test]
    fn equivariance_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let q8 = GroupDescriptor::quaternion8();
        let g = Arc::new(random::connected_graph(&mut rng, 5, 1, 3));
        let t = GaugeTransformation::random(&mut rng, &g, &q8);
        let phi = GroupHom::conjugation(&q8.q8("j").unwrap());
        let m = BundleMorphism::new(GraphIso::identity(&g), phi.clone(), t.values().to_vec()).unwrap();
        for _ in 0..20 {
            let p = BundlePoint::new(random::vertex(&mut rng, &g), q8.random(&mut rng));
            let h = q8.random(&mut rng);
            assert_eq!(m.apply(&p.act(&h)), m.apply(&p).act(&phi.apply(&h)));
            assert_eq!(m.inverse().unwrap().apply(&m.apply(&p)), p);
        }
        let id = m.then(&m.inverse().unwrap()).unwrap();
        assert!(id.same_as(&BundleMorphism::identity(&g, &q8)));
    }
}
