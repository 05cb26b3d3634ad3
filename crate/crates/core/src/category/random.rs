//! Seeded random objects and arrows for the groupoid law checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::group::{isomorphism_search, GroupDescriptor, GroupHom, GroupKind, Value};
use crate::path::{random as prand, spanning_tree, ChordBasis, Graph, GraphIso, Walk};

use super::{make_star_iso, HolStarIso, HolonomyMap};

/// The map `H'` on `target_graph` that makes `(Ψ, α, φ)` an arrow `H -> H'`:
/// `H'(γ') = φ(H(α • Ψ⁻¹(γ') • α⁻¹))`, based at `Ψ(start(α))`.
pub fn push_forward(
    h: &HolonomyMap,
    psi: &GraphIso,
    target_graph: Arc<Graph>,
    alpha: &Walk,
    phi: &GroupHom,
) -> HolonomyMap {
    let x2 = psi.vertex(alpha.start());
    let tree = spanning_tree(&target_graph, x2);
    let basis = ChordBasis::new(&target_graph, tree.clone(), x2);
    let back = psi.inverse();
    let images = basis
        .generators()
        .iter()
        .map(|g| {
            let pulled = back.walk(g.walk());
            let lp = alpha.invert().then(&pulled).and_then(|w| w.then(alpha)).expect("endpoints line up");
            phi.apply(&h.evaluate(&lp).expect("loop at the base"))
        })
        .collect();
    HolonomyMap::new(target_graph, x2, *phi.target(), tree, images).expect("pushed images are valid")
}

/// A finite group of another kind isomorphic to `g`, when the catalog has one.
pub fn isomorphic_partner(g: &GroupDescriptor) -> Option<GroupDescriptor> {
    match g.kind() {
        GroupKind::Symmetric(3) => GroupDescriptor::dihedral(3).ok(),
        GroupKind::Dihedral(3) => GroupDescriptor::symmetric(3).ok(),
        GroupKind::Cyclic(2) => GroupDescriptor::symmetric(2).ok(),
        GroupKind::Symmetric(2) => GroupDescriptor::cyclic(2).ok(),
        _ => None,
    }
}

/// A random group isomorphism out of `g`, sometimes into an isomorphic kind.
pub fn random_group_iso<R: Rng + ?Sized>(rng: &mut R, g: &GroupDescriptor) -> GroupHom {
    match g.kind() {
        GroupKind::U1 => {
            if rng.gen() {
                GroupHom::identity(g)
            } else {
                GroupHom::u1_conjugation(g).expect("U1")
            }
        }
        GroupKind::Su2 => {
            let Value::Quat(q) = *g.random(rng).value() else { unreachable!() };
            GroupHom::su2_conjugation(*g, q)
        }
        _ => {
            let target = match isomorphic_partner(g) {
                Some(p) if rng.gen_bool(0.5) => p,
                _ => *g,
            };
            let isos = isomorphism_search(g, &target).expect("catalog orders are small");
            isos.choose(rng).expect("isomorphic by construction").clone()
        }
    }
}

/// A random arrow out of `h`: a relabeled copy of the graph (or the graph
/// itself), a random group isomorphism and a random curve.
pub fn random_arrow<R: Rng + ?Sized>(rng: &mut R, h: &Arc<HolonomyMap>, max_alpha: usize) -> HolStarIso {
    let graph = h.graph();
    let (target_graph, psi) = if rng.gen_bool(0.5) {
        let (g2, psi) = prand::relabeled(rng, graph);
        (Arc::new(g2), psi)
    } else {
        (h.graph_arc().clone(), GraphIso::identity(graph))
    };
    let phi = random_group_iso(rng, h.group());
    let y = prand::vertex(rng, graph);
    let len = rng.gen_range(0..=max_alpha);
    let alpha = prand::walk_between(rng, graph, y, h.base(), len);
    let target = Arc::new(push_forward(h, &psi, target_graph, &alpha, &phi));
    make_star_iso(psi, &alpha, phi, h.clone(), target).expect("pushed forward maps satisfy the diagram")
}

/// A random holonomy map on a random graph.
pub fn random_map<R: Rng + ?Sized>(
    rng: &mut R,
    group: &GroupDescriptor,
    max_vertices: usize,
    min_rank: usize,
    max_extra: usize,
) -> Arc<HolonomyMap> {
    let graph = Arc::new(prand::connected_graph(rng, max_vertices, min_rank, max_extra));
    let base = prand::vertex(rng, &graph);
    let images = (0..graph.cycle_rank()).map(|_| group.random(rng)).collect();
    Arc::new(HolonomyMap::with_default_tree(graph, base, *group, images).expect("random images are valid"))
}

/// `n` consecutive random arrows starting at `h`.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, h: &Arc<HolonomyMap>, n: usize, max_alpha: usize) -> Vec<HolStarIso> {
    let mut out: Vec<HolStarIso> = Vec::with_capacity(n);
    let mut at = h.clone();
    for _ in 0..n {
        let a = random_arrow(rng, &at, max_alpha);
        at = a.target().clone();
        out.push(a);
    }
    out
}
