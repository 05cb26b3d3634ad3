use std::f64::consts::{PI, TAU};

use crate::bundle::{BundleMorphism, BundlePoint};
use crate::category::{make_iso, HolIso};
use crate::group::{isomorphism_search, quat, GroupElement, GroupHom, Value};
use crate::path::{isomorphisms, spanning_tree, ChordBasis, GraphIso, ReducedWalk, Step, Walk};

use super::{arrow_morphism, tree_beta, PointedField, ReconstructError};

/// A connection-preserving bundle isomorphism together with the holonomy
/// isomorphism it came from, checkable without trusting its producer.
#[derive(Clone, Debug)]
pub struct EquivalenceCertificate {
    pub source: PointedField,
    pub target: PointedField,
    pub psi: GraphIso,
    pub alpha: ReducedWalk,
    pub phi: GroupHom,
    pub morphism: BundleMorphism,
    /// Largest per-edge connection deviation.
    pub connection_residual: f64,
    /// Largest per-generator diagram deviation.
    pub diagram_residual: f64,
}

impl EquivalenceCertificate {
    pub(crate) fn build(iso: HolIso, source: PointedField, target: PointedField) -> Result<Self, ReconstructError> {
        let morphism = arrow_morphism(&iso, &source, &target, &tree_beta)?;
        let mut cert = EquivalenceCertificate {
            psi: iso.psi().clone(),
            alpha: iso.alpha().clone(),
            phi: iso.phi().clone(),
            morphism,
            source,
            target,
            connection_residual: 0.0,
            diagram_residual: 0.0,
        };
        let (c, d) = cert.residuals()?;
        cert.connection_residual = c;
        cert.diagram_residual = d;
        Ok(cert)
    }

    /// The arrow, re-validated against both induced holonomy maps.
    pub fn holiso(&self) -> Result<HolIso, ReconstructError> {
        let h = self.source.holonomy_map()?;
        let h2 = self.target.holonomy_map()?;
        Ok(make_iso(self.psi.clone(), self.alpha.walk(), self.phi.clone(), h.into(), h2.into())?)
    }

    /// Recomputes both residuals from the raw fields, with link products and
    /// transport only.
    pub fn residuals(&self) -> Result<(f64, f64), ReconstructError> {
        let src = &self.source.field;
        let dst = &self.target.field;
        let (g, g2) = (src.graph(), dst.graph());
        let bad = |why: &str| ReconstructError::Certificate(why.to_string());
        let psi = GraphIso::new(g, g2, self.psi.vertex_map().to_vec(), self.psi.edge_map().to_vec())
            .map_err(|e| bad(&format!("Ψ is not a graph isomorphism: {e}")))?;
        if !self.phi.is_iso()
            || !self.phi.source().same_group(src.group())
            || !self.phi.target().same_group(dst.group())
        {
            return Err(bad("φ is not an isomorphism between the structure groups"));
        }
        let m = &self.morphism;
        if m.psi() != &psi || !m.phi().same_as(&self.phi) || m.frames().len() != g.vertex_count() {
            return Err(bad("morphism data disagree with the arrow"));
        }
        let frames = m.frames();
        let mut connection: f64 = 0.0;
        for (i, e) in g.edges().iter().enumerate() {
            let lhs = dst.step_value(psi.step(Step::forward(crate::path::EdgeId(i))));
            let u = &src.links()[i];
            let rhs = &(&frames[e.head.0] * &self.phi.apply(u)) * &frames[e.tail.0].inverse();
            connection = connection.max(lhs.distance(&rhs));
        }

        let (u, u2) = (&self.source.basepoint, &self.target.basepoint);
        let a = self.alpha.walk();
        if a.end() != u.vertex || psi.vertex(a.start()) != u2.vertex {
            return Err(bad("α has the wrong endpoints"));
        }
        let basis = ChordBasis::new(g, spanning_tree(g, u.vertex), u.vertex);
        let mut diagram: f64 = 0.0;
        for gen in basis.generators() {
            let lhs = self.phi.apply(&loop_holonomy(src, gen.walk(), u));
            let conj = a.then(gen.walk())?.then(&a.invert())?;
            let rhs = loop_holonomy(dst, &psi.walk(&conj), u2);
            diagram = diagram.max(lhs.distance(&rhs));
        }
        // F carries the lifted point z = transport(α⁻¹, u) onto u'
        let z = src.transport(&a.invert(), u)?;
        let fz = BundlePoint::new(psi.vertex(z.vertex), &frames[z.vertex.0] * &self.phi.apply(&z.fiber));
        if fz.vertex != u2.vertex {
            return Err(bad("F does not send the lifted point over the target base"));
        }
        diagram = diagram.max(fz.fiber.distance(&u2.fiber));
        Ok((connection, diagram))
    }

    /// Independent re-check at tolerance `tol`.
    pub fn verify(&self, tol: f64) -> Result<(f64, f64), ReconstructError> {
        let (c, d) = self.residuals()?;
        if c > tol {
            return Err(ReconstructError::Certificate(format!("connection residual {c:e} exceeds {tol:e}")));
        }
        if d > tol {
            return Err(ReconstructError::Certificate(format!("diagram residual {d:e} exceeds {tol:e}")));
        }
        Ok((c, d))
    }
}

/// Holonomy by the defining relation `transport(γ, u) = u·h`, written out.
fn loop_holonomy(field: &crate::bundle::GaugeField, lp: &Walk, u: &BundlePoint) -> GroupElement {
    let mut fiber = u.fiber.clone();
    for s in lp.steps() {
        fiber = &field.step_value(*s) * &fiber;
    }
    &u.fiber.inverse() * &fiber
}

/// A conjugacy- and automorphism-invariant of a holonomy element.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    /// Element order (finite kinds).
    Order(u64),
    /// Angle folded into `[0, π]` (U1, invariant under conjugation).
    FoldedAngle(f64),
    /// Real part of the unit quaternion (SU2).
    Trace(f64),
}

/// Separation required between numeric invariants before they count as
/// different.
const INVARIANT_GAP: f64 = 1e-6;

impl Invariant {
    pub fn of(x: &GroupElement) -> Invariant {
        match x.value() {
            Value::Angle(a) => {
                let a = a.rem_euclid(TAU);
                Invariant::FoldedAngle(if a > PI { TAU - a } else { a })
            }
            Value::Quat(q) => Invariant::Trace(quat::normalize(q).map_or(q[0], |q| q[0])),
            _ => Invariant::Order(x.order().expect("finite kinds have orders")),
        }
    }

    pub fn differs(&self, other: &Invariant) -> bool {
        match (self, other) {
            (Invariant::Order(a), Invariant::Order(b)) => a != b,
            (Invariant::FoldedAngle(a), Invariant::FoldedAngle(b)) | (Invariant::Trace(a), Invariant::Trace(b)) => {
                (a - b).abs() > INVARIANT_GAP
            }
            _ => true,
        }
    }
}

/// A loop at the source base whose invariant changes under `psi`.
#[derive(Clone, Debug)]
pub struct LoopWitness {
    pub psi: GraphIso,
    pub lp: Walk,
    pub source: Invariant,
    pub target: Invariant,
}

impl LoopWitness {
    pub(crate) fn find(src: &PointedField, dst: &PointedField, psi: &GraphIso, max_len: usize) -> Option<LoopWitness> {
        let g = src.field.graph();
        let x = src.basepoint.vertex;
        let basis = ChordBasis::new(g, spanning_tree(g, x), x);
        let n = basis.generators().len();
        let letters: Vec<(usize, i32)> = (0..n).flat_map(|i| [(i, 1), (i, -1)]).collect();
        let mut words: Vec<Vec<(usize, i32)>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &words {
                for &l in &letters {
                    if w.last() == Some(&(l.0, -l.1)) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(l);
                    let lp = basis.expand(&w2).into_walk();
                    if let Some(found) = LoopWitness::check(src, dst, psi, lp) {
                        return Some(found);
                    }
                    next.push(w2);
                }
            }
            words = next;
        }
        None
    }

    fn check(src: &PointedField, dst: &PointedField, psi: &GraphIso, lp: Walk) -> Option<LoopWitness> {
        let source = Invariant::of(&src.field.walk_product(&lp));
        let target = Invariant::of(&dst.field.walk_product(&psi.walk(&lp)));
        source.differs(&target).then(|| LoopWitness { psi: psi.clone(), lp, source, target })
    }

    /// Recomputes both invariants from the fields.
    pub fn recheck(&self, src: &PointedField, dst: &PointedField) -> bool {
        let valid = GraphIso::new(
            src.field.graph(),
            dst.field.graph(),
            self.psi.vertex_map().to_vec(),
            self.psi.edge_map().to_vec(),
        )
        .is_ok();
        valid
            && self.lp.is_loop()
            && self.lp.start() == src.basepoint.vertex
            && LoopWitness::check(src, dst, &self.psi, self.lp.clone()).is_some()
    }
}

/// Why no connection-preserving isomorphism exists.
#[derive(Clone, Debug)]
pub enum Refutation {
    GraphsNotIsomorphic,
    GroupsNotIsomorphic {
        source: String,
        target: String,
    },
    /// One witness loop for every graph isomorphism.
    Witnesses(Vec<LoopWitness>),
    /// Complete search over all candidates without a loop witness (finite kinds).
    Exhaustive {
        graph_isos: usize,
        group_isos: usize,
    },
}

impl Refutation {
    /// Re-derives the refutation from the fields alone.
    pub fn recheck(&self, src: &PointedField, dst: &PointedField, max_vertices: usize) -> bool {
        let (g, g2) = (src.field.graph(), dst.field.graph());
        match self {
            Refutation::GraphsNotIsomorphic => isomorphisms(g, g2, max_vertices, 1).is_ok_and(|v| v.is_empty()),
            Refutation::GroupsNotIsomorphic { .. } => {
                let (a, b) = (src.field.group(), dst.field.group());
                a.is_finite() && b.is_finite() && isomorphism_search(a, b).is_ok_and(|v| v.is_empty())
            }
            Refutation::Witnesses(ws) => {
                let Ok(all) = isomorphisms(g, g2, max_vertices, usize::MAX) else { return false };
                all.iter().all(|psi| ws.iter().any(|w| &w.psi == psi && w.recheck(src, dst)))
            }
            Refutation::Exhaustive { .. } => matches!(
                super::search::gauge_equivalent(src, dst, &Default::default(), &Default::default()),
                super::GaugeVerdict::Refuted(_)
            ),
        }
    }
}
