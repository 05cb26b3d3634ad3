//! Executable witnesses about the quotient functor.

use std::sync::Arc;

use serde::Serialize;

use crate::group::{GroupDescriptor, GroupHom};
use crate::path::{Graph, GraphIso, VertexId};

use super::{make_star_iso, quotient, CategoryError, HolIso, HolStarIso, HolonomyMap};

/// Two starred self-arrows of a flat map that differ while their images
/// under the quotient agree.
#[derive(Clone, Debug)]
pub struct NonFaithfulWitness {
    pub map: Arc<HolonomyMap>,
    pub first: HolStarIso,
    pub second: HolStarIso,
    pub starred_equal: bool,
    pub quotient_equal: bool,
}

impl NonFaithfulWitness {
    pub fn holds(&self) -> bool {
        !self.starred_equal && self.quotient_equal
    }
}

/// Flat map at the first vertex; the empty curve against the first chord
/// generator.
pub fn q_non_faithful_witness(graph: Arc<Graph>, group: GroupDescriptor) -> Result<NonFaithfulWitness, CategoryError> {
    let h = Arc::new(HolonomyMap::flat(graph, VertexId(0), group));
    let Some(gen) = h.basis().generators().first().cloned() else {
        return Err(CategoryError::Unsuitable("the graph has no cycles".into()));
    };
    let arrow = |w: &crate::path::Walk| {
        make_star_iso(GraphIso::identity(h.graph()), w, GroupHom::identity(&group), h.clone(), h.clone())
    };
    let first = arrow(&crate::path::Walk::empty(h.base()))?;
    let second = arrow(gen.walk())?;
    Ok(NonFaithfulWitness {
        starred_equal: first.same_arrow(&second),
        quotient_equal: quotient(&first).same_arrow(&quotient(&second)),
        map: h,
        first,
        second,
    })
}

/// Outcome of the non-splitting construction on a flat map.
///
/// With `alpha` and `alpha_prime` loops at the base whose composite is not
/// reducible to the empty walk, the arrows `(id, α, id)` and `(id, α', id)`
/// compose to the identity in the coarse groupoid. The report records the
/// starred composite of the lifts carrying the same curves, and also a pair
/// of lifts whose starred composite is the identity.
#[derive(Clone, Debug, Serialize)]
pub struct NotSplitReport {
    pub graph_vertices: usize,
    pub group: String,
    pub alpha: String,
    pub alpha_prime: String,
    /// The coarse composite equals the identity arrow.
    pub hol_composite_is_identity: bool,
    /// Reduced curve of the starred composite of the same-curve lifts.
    pub chosen_lift_composite: String,
    pub chosen_lift_composite_nonempty: bool,
    /// Lifts `(α, α⁻¹)` of the same two coarse arrows.
    pub cancelling_lift: (String, String),
    pub cancelling_lift_composite_nonempty: bool,
    /// Whether every pair of lifts has a nonempty starred composite.
    pub every_lift_nonempty: bool,
}

impl NotSplitReport {
    /// The obstruction as literally claimed: identity below, and no pair of
    /// lifts composing to the identity above.
    pub fn obstruction_holds(&self) -> bool {
        self.hol_composite_is_identity && self.every_lift_nonempty
    }
}

pub fn q_not_split_witness(graph: Arc<Graph>, group: GroupDescriptor) -> Result<NotSplitReport, CategoryError> {
    let h = Arc::new(HolonomyMap::flat(graph, VertexId(0), group));
    let gens = h.basis().generators();
    if gens.is_empty() {
        return Err(CategoryError::Unsuitable("every pair of co-terminal reduced walks coincides".into()));
    }
    let g = h.graph();
    let alpha = gens[0].clone();
    // with one cycle, α' = α still gives a nonempty composite α • α
    let alpha_prime = gens[gens.len() - 1].clone();
    let id = || GraphIso::identity(h.graph());
    let phi = GroupHom::identity(&group);
    let star = |w: &crate::path::Walk| make_star_iso(id(), w, phi.clone(), h.clone(), h.clone());

    let a = star(alpha.walk())?;
    let a2 = star(alpha_prime.walk())?;
    let hol_composite = quotient(&a2).after(&quotient(&a))?;
    let hol_composite_is_identity = hol_composite.same_arrow(&HolIso::identity(&h));

    let chosen = a2.after(&a)?;
    let inv = star(&alpha.walk().invert())?;
    // the cancelling lift of (id, α', id) is a valid lift because all curves
    // are equivalent over a flat map
    let cancelling_ok = quotient(&inv).same_arrow(&quotient(&a2));
    let cancelling = inv.after(&a)?;
    let cancelling_nonempty = !cancelling.alpha().is_empty();

    Ok(NotSplitReport {
        graph_vertices: g.vertex_count(),
        group: group.to_string(),
        alpha: alpha.display(g),
        alpha_prime: alpha_prime.display(g),
        hol_composite_is_identity,
        chosen_lift_composite: chosen.alpha().display(g),
        chosen_lift_composite_nonempty: !chosen.alpha().is_empty(),
        cancelling_lift: (alpha.display(g), alpha.invert().display(g)),
        cancelling_lift_composite_nonempty: cancelling_nonempty,
        every_lift_nonempty: !cancelling_ok || cancelling_nonempty,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::theta;
    use super::*;
    use crate::path::fixtures;

    #[test]
    fn theta_non_faithful() {
        let w = q_non_faithful_witness(theta(), GroupDescriptor::cyclic(2).unwrap()).unwrap();
        assert!(w.holds());
    }

    #[test]
    fn theta_not_split_report() {
        let r = q_not_split_witness(theta(), GroupDescriptor::cyclic(2).unwrap()).unwrap();
        assert!(r.hol_composite_is_identity);
        assert!(r.chosen_lift_composite_nonempty);
        assert_eq!(r.chosen_lift_composite, "x: c a~ b a~");
        assert!(!r.cancelling_lift_composite_nonempty);
        assert!(!r.every_lift_nonempty);
        assert!(!r.obstruction_holds());
    }

    #[test]
    fn figure_eight_quaternions() {
        let g = Arc::new(fixtures::figure_eight());
        let r = q_not_split_witness(g, GroupDescriptor::quaternion8()).unwrap();
        assert!(r.hol_composite_is_identity && r.chosen_lift_composite_nonempty);
    }

    #[test]
    fn tree_is_unsuitable() {
        let g = Arc::new(fixtures::path3());
        let err = q_not_split_witness(g.clone(), GroupDescriptor::cyclic(2).unwrap()).unwrap_err();
        assert!(matches!(err, CategoryError::Unsuitable(_)));
        assert!(q_non_faithful_witness(g, GroupDescriptor::cyclic(2).unwrap()).is_err());
    }
}
