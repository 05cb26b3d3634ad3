use std::collections::{HashSet, VecDeque};

use crate::group::GroupError;
use crate::group::{subgroup_generated, GroupElement, Subgroup, SUBGROUP_CAP};
use crate::path::{spanning_tree, ChordBasis, VertexId};

use super::{BundleError, BundlePoint, GaugeField};

/// Points reachable from `u` by horizontal transport, with holonomy group Φ.
#[derive(Clone, Debug)]
pub struct HolonomySubBundle {
    base: BundlePoint,
    phi: Subgroup,
    /// One reachable fiber value per vertex.
    representatives: Vec<GroupElement>,
    /// Full reachable fibers (finite kinds only).
    fibers: Option<Vec<Vec<GroupElement>>>,
}

pub fn holonomy_subbundle(field: &GaugeField, u: &BundlePoint) -> Result<HolonomySubBundle, BundleError> {
    field.group().check_same(u.fiber.group())?;
    let graph = field.graph();
    let tree = spanning_tree(graph, u.vertex);
    let representatives: Vec<GroupElement> = graph
        .vertex_ids()
        .map(|v| field.transport(tree.path(graph, u.vertex, v).walk(), u).map(|p| p.fiber))
        .collect::<Result<_, _>>()?;
    let basis = ChordBasis::new(graph, tree, u.vertex);
    let gens: Vec<GroupElement> =
        basis.generators().iter().map(|g| field.holonomy(g.walk(), u)).collect::<Result<_, _>>()?;
    let phi = subgroup_generated(field.group(), &gens)?;
    let fibers = if field.group().is_finite() { Some(reachable_fibers(field, u)?) } else { None };
    Ok(HolonomySubBundle { base: u.clone(), phi, representatives, fibers })
}

/// Breadth-first closure of `{u}` under single-step transport.
fn reachable_fibers(field: &GaugeField, u: &BundlePoint) -> Result<Vec<Vec<GroupElement>>, BundleError> {
    let graph = field.graph();
    let mut seen: HashSet<(VertexId, crate::group::ElementKey)> = HashSet::new();
    let mut fibers = vec![Vec::new(); graph.vertex_count()];
    let mut queue = VecDeque::new();
    seen.insert((u.vertex, u.fiber.key().expect("finite")));
    fibers[u.vertex.0].push(u.fiber.clone());
    queue.push_back(u.clone());
    while let Some(p) = queue.pop_front() {
        for &s in graph.outgoing(p.vertex) {
            let q = BundlePoint { vertex: graph.step_target(s), fiber: &field.step_value(s) * &p.fiber };
            if seen.insert((q.vertex, q.fiber.key().expect("finite"))) {
                if seen.len() > SUBGROUP_CAP {
                    return Err(GroupError::CapExceeded { cap: SUBGROUP_CAP }.into());
                }
                fibers[q.vertex.0].push(q.fiber.clone());
                queue.push_back(q);
            }
        }
    }
    for f in &mut fibers {
        f.sort_by_key(|x| x.key());
    }
    Ok(fibers)
}

impl HolonomySubBundle {
    pub fn base(&self) -> &BundlePoint {
        &self.base
    }

    /// The holonomy group Φ at the base point.
    pub fn holonomy_group(&self) -> &Subgroup {
        &self.phi
    }

    /// Enumerated reachable fiber over `v` (finite kinds).
    pub fn fiber(&self, v: VertexId) -> Option<&[GroupElement]> {
        self.fibers.as_ref().map(|f| f[v.0].as_slice())
    }

    pub fn representative(&self, v: VertexId) -> &GroupElement {
        &self.representatives[v.0]
    }

    /// Membership: `p = (v, r_v·k)` with `k ∈ Φ`.
    pub fn contains(&self, p: &BundlePoint) -> bool {
        match &self.fibers {
            Some(f) => f[p.vertex.0].iter().any(|x| x.approx_eq(&p.fiber)),
            None => self.phi.contains(&(&self.representatives[p.vertex.0].inverse() * &p.fiber)),
        }
    }

    /// Writes `p = q·a` with `q` in the sub-bundle.
    pub fn factor(&self, p: &BundlePoint) -> (BundlePoint, GroupElement) {
        let r = &self.representatives[p.vertex.0];
        let a = &r.inverse() * &p.fiber;
        (BundlePoint { vertex: p.vertex, fiber: r.clone() }, a)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::loop_field;
    use super::*;
    use crate::group::GroupDescriptor;
    use crate::path::{random, Graph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn flat_field_has_trivial_holonomy_group() {
        let g = Arc::new(Graph::from_str_edges(&["x", "y"], &[("a", "x", "y"), ("b", "y", "x")]).unwrap());
        let s3 = GroupDescriptor::symmetric(3).unwrap();
        let f = GaugeField::flat(g, s3);
        let sb = holonomy_subbundle(&f, &f.identity_point(VertexId(0))).unwrap();
        assert_eq!(sb.holonomy_group().order(), Some(1));
        assert_eq!(sb.fiber(VertexId(1)).unwrap().len(), 1);
    }

    #[test]
    fn order_three_loop() {
        let c6 = GroupDescriptor::cyclic(6).unwrap();
        let f = loop_field(c6.residue(2).unwrap());
        let sb = holonomy_subbundle(&f, &f.identity_point(VertexId(0))).unwrap();
        let phi: Vec<_> = sb.holonomy_group().elements().unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(phi, ["0", "2", "4"]);
        assert_eq!(sb.fiber(VertexId(0)).unwrap().len(), 3);
    }

    #[test]
    fn fibers_are_right_cosets_and_points_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let groups = [
            GroupDescriptor::symmetric(4).unwrap(),
            GroupDescriptor::dihedral(6).unwrap(),
            GroupDescriptor::cyclic(12).unwrap(),
            GroupDescriptor::quaternion8(),
        ];
        for grp in groups {
            for _ in 0..5 {
                let g = Arc::new(random::connected_graph(&mut rng, 6, 0, 2));
                let f = GaugeField::random(&mut rng, g.clone(), grp);
                let u = BundlePoint::new(random::vertex(&mut rng, &g), grp.random(&mut rng));
                let sb = holonomy_subbundle(&f, &u).unwrap();
                let phi = sb.holonomy_group().elements().unwrap();
                for v in g.vertex_ids() {
                    let r = sb.representative(v);
                    let coset: HashSet<_> = phi.iter().map(|k| (r * k).key()).collect();
                    let fiber: HashSet<_> = sb.fiber(v).unwrap().iter().map(|x| x.key()).collect();
                    assert_eq!(coset, fiber);
                    for a in grp.elements().unwrap() {
                        let p = BundlePoint::new(v, a);
                        let (q, b) = sb.factor(&p);
                        assert!(sb.contains(&q));
                        assert_eq!(q.act(&b), p);
                    }
                }
            }
        }
    }
}
