use std::sync::Arc;

use rayon::prelude::*;

use crate::category::{make_iso, HolIso, HolonomyMap};
use crate::group::{isomorphism_search_bounded, quat, GroupDescriptor, GroupElement, GroupHom, GroupKind, Value};
use crate::path::{isomorphisms, GraphIso};

use super::certificate::{EquivalenceCertificate, LoopWitness, Refutation};
use super::PointedField;

/// Limits on the equivalence search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBounds {
    pub max_vertices: usize,
    pub max_group_order: u64,
    pub max_graph_isos: usize,
    /// Word length explored for the frame element on matrix kinds.
    pub matrix_word_depth: usize,
    /// Chord-word length explored for refutation witnesses.
    pub witness_len: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self { max_vertices: 10, max_group_order: 64, max_graph_isos: 100_000, matrix_word_depth: 4, witness_len: 3 }
    }
}

/// Optional restrictions of the search space. `None` means "search all".
#[derive(Clone, Debug, Default)]
pub struct Candidates {
    pub psi: Option<Vec<GraphIso>>,
    pub phi: Option<Vec<GroupHom>>,
}

#[derive(Clone, Debug)]
pub enum GaugeVerdict {
    Equivalent(Box<EquivalenceCertificate>),
    Refuted(Refutation),
    /// Bounds were hit or the candidates were not exhaustive.
    Inconclusive(String),
}

impl GaugeVerdict {
    pub fn certificate(&self) -> Option<&EquivalenceCertificate> {
        match self {
            GaugeVerdict::Equivalent(c) => Some(c),
            _ => None,
        }
    }
}

enum PhiChoice {
    Fixed(GroupHom),
    /// Solve for the conjugating unit quaternion per Ψ.
    Su2Solve,
}

/// Decides whether `src` and `dst` are related by a connection-preserving
/// bundle isomorphism. Candidates `(Ψ, φ)` are tried in order (graph
/// isomorphism outermost) and the first success wins.
pub fn gauge_equivalent(
    src: &PointedField,
    dst: &PointedField,
    candidates: &Candidates,
    bounds: &SearchBounds,
) -> GaugeVerdict {
    let (g, g2) = (src.field.graph(), dst.field.graph());
    let (grp, grp2) = (*src.field.group(), *dst.field.group());
    for gr in [grp, grp2] {
        if gr.order().is_some_and(|n| n > bounds.max_group_order) {
            return GaugeVerdict::Inconclusive(format!(
                "{gr} exceeds the group order bound {}",
                bounds.max_group_order
            ));
        }
    }
    let (psis, psi_complete) = match &candidates.psi {
        Some(v) => (v.clone(), false),
        None => match isomorphisms(g, g2, bounds.max_vertices, bounds.max_graph_isos.saturating_add(1)) {
            Ok(v) if v.len() > bounds.max_graph_isos => {
                return GaugeVerdict::Inconclusive(format!("more than {} graph isomorphisms", bounds.max_graph_isos))
            }
            Ok(v) => (v, true),
            Err(e) => return GaugeVerdict::Inconclusive(e.to_string()),
        },
    };
    if psis.is_empty() && psi_complete {
        return GaugeVerdict::Refuted(Refutation::GraphsNotIsomorphic);
    }
    let (phis, phi_complete) = match &candidates.phi {
        Some(v) => (v.iter().cloned().map(PhiChoice::Fixed).collect(), false),
        None => default_phis(&grp, &grp2, bounds),
    };
    if phis.is_empty() && phi_complete {
        return GaugeVerdict::Refuted(Refutation::GroupsNotIsomorphic {
            source: grp.to_string(),
            target: grp2.to_string(),
        });
    }
    let (h, h2) = match (src.holonomy_map(), dst.holonomy_map()) {
        (Ok(a), Ok(b)) => (Arc::new(a), Arc::new(b)),
        (Err(e), _) | (_, Err(e)) => return GaugeVerdict::Inconclusive(e.to_string()),
    };
    let pairs: Vec<(&GraphIso, &PhiChoice)> = psis.iter().flat_map(|p| phis.iter().map(move |f| (p, f))).collect();
    let found = pairs.par_iter().find_map_first(|(psi, phi)| try_pair(&h, &h2, psi, phi, bounds));
    if let Some(iso) = found {
        return match EquivalenceCertificate::build(iso, src.clone(), dst.clone()) {
            Ok(c) => GaugeVerdict::Equivalent(Box::new(c)),
            Err(e) => GaugeVerdict::Inconclusive(format!("certificate construction failed: {e}")),
        };
    }
    if !psi_complete {
        return GaugeVerdict::Inconclusive("no certificate among the supplied graph isomorphisms".into());
    }
    let witnesses: Option<Vec<LoopWitness>> =
        psis.par_iter().map(|psi| LoopWitness::find(src, dst, psi, bounds.witness_len)).collect();
    match witnesses {
        Some(ws) => GaugeVerdict::Refuted(Refutation::Witnesses(ws)),
        None if phi_complete && grp.is_finite() => {
            GaugeVerdict::Refuted(Refutation::Exhaustive { graph_isos: psis.len(), group_isos: phis.len() })
        }
        None => GaugeVerdict::Inconclusive("no certificate found and no invariant separates the fields".into()),
    }
}

fn default_phis(a: &GroupDescriptor, b: &GroupDescriptor, bounds: &SearchBounds) -> (Vec<PhiChoice>, bool) {
    match (a.kind(), b.kind()) {
        (GroupKind::U1, GroupKind::U1) => (
            vec![PhiChoice::Fixed(GroupHom::identity(a)), PhiChoice::Fixed(GroupHom::u1_conjugation(a).expect("U1"))],
            true,
        ),
        (GroupKind::Su2, GroupKind::Su2) => (vec![PhiChoice::Su2Solve], true),
        _ if a.is_matrix() || b.is_matrix() => (Vec::new(), true),
        _ => match isomorphism_search_bounded(a, b, bounds.max_group_order) {
            Ok(v) => (v.into_iter().map(PhiChoice::Fixed).collect(), true),
            Err(_) => (Vec::new(), false),
        },
    }
}

/// Looks for `α = α₀` then `δ` making `(Ψ, α, φ)` an arrow. With
/// `ρ(γ) = H'(Ψ(α₀ γ α₀⁻¹))` the requirement is `φ(H(γ)) = k⁻¹ ρ(γ) k` for
/// `k = ρ(δ)` on every generator.
fn try_pair(
    h: &Arc<HolonomyMap>,
    h2: &Arc<HolonomyMap>,
    psi: &GraphIso,
    choice: &PhiChoice,
    bounds: &SearchBounds,
) -> Option<HolIso> {
    let g = h.graph();
    let x = h.base();
    let y = psi.inverse().vertex(h2.base());
    let alpha0 = h.tree().path(g, y, x);
    let rho: Vec<GroupElement> = h
        .basis()
        .generators()
        .iter()
        .map(|gen| {
            let w = alpha0.walk().then(gen.walk()).and_then(|w| w.then(&alpha0.walk().invert())).ok()?;
            h2.evaluate(&psi.walk(&w)).ok()
        })
        .collect::<Option<_>>()?;
    let phi = match choice {
        PhiChoice::Fixed(phi) => phi.clone(),
        PhiChoice::Su2Solve => {
            let tol = h.group().tolerance().max(h2.group().tolerance()).max(1e-12);
            let pairs: Vec<_> = h.images().iter().zip(&rho).map(|(a, b)| (quaternion(a), quaternion(b))).collect();
            let s = quat::conjugator(&pairs, tol)?;
            GroupHom::su2_conjugation(*h.group(), s)
        }
    };
    if !phi.source().same_group(h.group()) || !phi.target().same_group(h2.group()) {
        return None;
    }
    let lhs: Vec<GroupElement> = h.images().iter().map(|x| phi.try_apply(x).ok()).collect::<Option<_>>()?;
    let fits = |k: &GroupElement| {
        let ki = k.inverse();
        lhs.iter().zip(&rho).all(|(l, r)| l.approx_eq(&(&(&ki * r) * k)))
    };
    let word = if h2.group().is_finite() {
        crate::category::shortlex_word(h2.group(), &rho, fits)?
    } else {
        bounded_word(h2.group(), &rho, bounds.matrix_word_depth, fits)?
    };
    let alpha = alpha0.then(&h.basis().expand(&word)).ok()?;
    make_iso(psi.clone(), alpha.walk(), phi, h.clone(), h2.clone()).ok()
}

fn quaternion(x: &GroupElement) -> quat::Quat {
    match x.value() {
        Value::Quat(q) => *q,
        _ => quat::ONE,
    }
}

/// All reduced words up to `depth`, shortest first, in traversal order.
fn bounded_word(
    group: &GroupDescriptor,
    images: &[GroupElement],
    depth: usize,
    hit: impl Fn(&GroupElement) -> bool,
) -> Option<Vec<(usize, i32)>> {
    let mut layer = vec![(group.identity(), Vec::<(usize, i32)>::new())];
    for _ in 0..=depth {
        if let Some((_, w)) = layer.iter().find(|(k, _)| hit(k)) {
            return Some(w.clone());
        }
        let mut next = Vec::new();
        for (k, w) in &layer {
            for (i, g) in images.iter().enumerate() {
                for e in [1, -1] {
                    if w.last() == Some(&(i, -e)) {
                        continue;
                    }
                    let img = if e < 0 { g.inverse() } else { g.clone() };
                    let mut w2 = w.clone();
                    w2.push((i, e));
                    next.push((&img * k, w2));
                }
            }
        }
        layer = next;
    }
    None
}
