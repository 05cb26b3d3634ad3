//! Holonomy maps and the groupoids of holonomy isomorphisms.
//!
//! A holonomy map on a graph is fixed by a base vertex, a spanning tree and
//! one group element per chord generator. Evaluation factors through free
//! reduction, so thin invariance and multiplicativity hold by construction.
//! The smoothness axiom has no discrete content here and is recorded as
//! vacuous; the continuum checks live in [`crate::smooth`].

mod arrow;
pub mod random;
mod witness;

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::bundle::{BundleError, BundlePoint, GaugeField};
use crate::group::{
    subgroup_generated, word_search, GroupDescriptor, GroupElement, GroupError, Subgroup, MEMBERSHIP_DEPTH,
};
use crate::path::{spanning_tree, ChordBasis, Graph, PathError, ReducedWalk, Tree, VertexId, Walk};

pub use arrow::{make_iso, make_star_iso, quotient, HolIso, HolStarIso, IsoData};
pub use witness::{q_non_faithful_witness, q_not_split_witness, NonFaithfulWitness, NotSplitReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CategoryError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("curve endpoints violate the arrow law: {0}")]
    Endpoint(String),
    #[error("diagram fails on generator {generator} ({walk}): expected {expected}, found {found}")]
    DiagramViolation { generator: usize, walk: String, expected: String, found: String },
    #[error("arrows are not composable: {0}")]
    NotComposable(String),
    #[error("group map is not an isomorphism")]
    NotIso,
    #[error("unsuitable input: {0}")]
    Unsuitable(String),
    #[error("images must be given for {expected} chord generators, got {found}")]
    ImageCount { expected: usize, found: usize },
}

/// Status of the smoothness axiom for a discrete holonomy map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    /// There are no smooth families of loops on a graph.
    VacuousDiscrete,
}

#[derive(Clone, Debug)]
pub struct HolonomyMap {
    graph: Arc<Graph>,
    group: GroupDescriptor,
    basis: ChordBasis,
    images: Vec<GroupElement>,
    phi: Subgroup,
}

impl HolonomyMap {
    /// A map given by generator images relative to `tree`.
    pub fn new(
        graph: Arc<Graph>,
        base: VertexId,
        group: GroupDescriptor,
        tree: Tree,
        images: Vec<GroupElement>,
    ) -> Result<Self, CategoryError> {
        if base.0 >= graph.vertex_count() {
            return Err(PathError::UnknownVertex(format!("#{}", base.0)).into());
        }
        let basis = ChordBasis::new(&graph, tree, base);
        if images.len() != basis.chords().len() {
            return Err(CategoryError::ImageCount { expected: basis.chords().len(), found: images.len() });
        }
        for x in &images {
            group.check_same(x.group())?;
        }
        let phi = subgroup_generated(&group, &images)?;
        Ok(Self { graph, group, basis, images, phi })
    }

    /// Same as [`HolonomyMap::new`] with the breadth-first tree rooted at `base`.
    pub fn with_default_tree(
        graph: Arc<Graph>,
        base: VertexId,
        group: GroupDescriptor,
        images: Vec<GroupElement>,
    ) -> Result<Self, CategoryError> {
        let tree = spanning_tree(&graph, base);
        Self::new(graph, base, group, tree, images)
    }

    /// The map sending every loop to the identity.
    pub fn flat(graph: Arc<Graph>, base: VertexId, group: GroupDescriptor) -> Self {
        let tree = spanning_tree(&graph, base);
        let n = graph.cycle_rank();
        Self::new(graph, base, group, tree, vec![group.identity(); n]).expect("flat images are valid")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn base(&self) -> VertexId {
        self.basis.base()
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn tree(&self) -> &Tree {
        self.basis.tree()
    }

    pub fn basis(&self) -> &ChordBasis {
        &self.basis
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    /// Image group Φ (enumerated for finite kinds, generators otherwise).
    pub fn image_group(&self) -> &Subgroup {
        &self.phi
    }

    pub fn smoothness(&self) -> Smoothness {
        Smoothness::VacuousDiscrete
    }

    /// Image of a chord-generator word, letters in traversal order.
    pub fn evaluate_word(&self, word: &[(usize, i32)]) -> GroupElement {
        let mut acc = self.group.identity();
        for &(i, e) in word {
            let g = if e < 0 { self.images[i].inverse() } else { self.images[i].clone() };
            for _ in 0..e.unsigned_abs() {
                acc = &g * &acc;
            }
        }
        acc
    }

    pub fn evaluate(&self, lp: &Walk) -> Result<GroupElement, CategoryError> {
        let word = self.basis.decompose(lp)?;
        Ok(self.evaluate_word(&word))
    }

    /// Equality as maps on loops, independent of the stored spanning tree.
    pub fn same_map(&self, other: &HolonomyMap) -> bool {
        *self.graph == *other.graph
            && self.base() == other.base()
            && self.group.same_group(&other.group)
            && self
                .basis
                .generators()
                .iter()
                .zip(&self.images)
                .all(|(g, img)| other.evaluate(g.walk()).is_ok_and(|v| v.approx_eq(img)))
    }

    /// Largest generator-wise distance to `other` (both on the same graph and base).
    pub fn distance(&self, other: &HolonomyMap) -> f64 {
        if *self.graph != *other.graph || self.base() != other.base() {
            return f64::INFINITY;
        }
        self.basis
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, img)| other.evaluate(g.walk()).map_or(f64::INFINITY, |v| v.distance(img)))
            .fold(0.0, f64::max)
    }

    /// Shortlex-least representative of the class of `alpha` (a walk ending at
    /// the base), for finite groups. The class of `alpha` consists of the
    /// co-terminal walks `beta` for which `H(beta • alpha⁻¹)` commutes with Φ.
    /// Matrix kinds return `None`.
    pub fn canonical_alpha(&self, alpha: &ReducedWalk) -> Result<Option<ReducedWalk>, CategoryError> {
        let x = self.base();
        if alpha.end() != x {
            return Err(CategoryError::Endpoint(format!(
                "walk ends at {}, not at the base {}",
                self.graph.vertex_name(alpha.end()),
                self.graph.vertex_name(x)
            )));
        }
        if self.group.is_matrix() {
            return Ok(None);
        }
        let y = alpha.start();
        let alpha0 = self.tree().path(&self.graph, y, x);
        let t = self.evaluate(alpha0.invert().then(alpha)?.walk())?;
        let phi = self.phi.elements()?;
        let center: Vec<&GroupElement> =
            phi.iter().filter(|z| self.images.iter().all(|g| z.commutes_with(g))).collect();
        let targets: HashSet<_> = center.iter().map(|z| (&t * z).key()).collect();
        let word = self.shortlex_word(|g| targets.contains(&g.key()));
        let w = self.basis.expand(&word);
        Ok(Some(alpha0.then(&w)?))
    }

    /// Breadth-first search over reduced chord words in shortlex order.
    fn shortlex_word(&self, hit: impl Fn(&GroupElement) -> bool) -> Vec<(usize, i32)> {
        shortlex_word(&self.group, &self.images, hit).expect("the coset of t meets Φ because t lies in Φ")
    }

    /// A chord word (letters in traversal order) whose image is `target`.
    /// Exhaustive for finite kinds; a bounded search for matrix kinds.
    pub fn word_for(&self, target: &GroupElement) -> Option<Vec<(usize, i32)>> {
        if self.group.is_matrix() {
            let mut w = word_search(&self.group, &self.images, target, MEMBERSHIP_DEPTH)?;
            // the search multiplies left to right, evaluation runs right to left
            w.reverse();
            Some(w)
        } else {
            shortlex_word(&self.group, &self.images, |g| g == target)
        }
    }
}

/// Shortlex-least reduced word over `images` whose value hits; finite kinds.
pub(crate) fn shortlex_word(
    group: &GroupDescriptor,
    images: &[GroupElement],
    hit: impl Fn(&GroupElement) -> bool,
) -> Option<Vec<(usize, i32)>> {
    let e = group.identity();
    if hit(&e) {
        return Some(Vec::new());
    }
    let letters: Vec<(usize, i32)> = (0..images.len()).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let mut seen = HashSet::from([e.key()]);
    let mut queue = VecDeque::from([(e, Vec::<(usize, i32)>::new())]);
    while let Some((g, w)) = queue.pop_front() {
        for &l in &letters {
            if w.last() == Some(&(l.0, -l.1)) {
                continue;
            }
            let img = if l.1 < 0 { images[l.0].inverse() } else { images[l.0].clone() };
            let h = &img * &g;
            if seen.insert(h.key()) {
                let mut w2 = w.clone();
                w2.push(l);
                if hit(&h) {
                    return Some(w2);
                }
                queue.push_back((h, w2));
            }
        }
    }
    None
}

/// The holonomy map of `field` through `u`, on the breadth-first tree at `u`.
pub fn induced_holonomy_map(field: &GaugeField, u: &BundlePoint) -> Result<HolonomyMap, CategoryError> {
    let graph = field.graph_arc().clone();
    let tree = spanning_tree(&graph, u.vertex);
    let basis = ChordBasis::new(&graph, tree.clone(), u.vertex);
    let images = basis.generators().iter().map(|g| field.holonomy(g.walk(), u)).collect::<Result<Vec<_>, _>>()?;
    HolonomyMap::new(graph, u.vertex, *field.group(), tree, images)
}

/// Decides whether `alpha` and `beta` (both from some `y` to the base of `h`)
/// induce the same translation `H(alpha • γ' • alpha⁻¹) = H(beta • γ' • beta⁻¹)`
/// on every loop `γ'` at `y`. This holds iff `H(beta • alpha⁻¹)` commutes with
/// every generator image.
pub fn alpha_equivalent(h: &HolonomyMap, alpha: &Walk, beta: &Walk) -> Result<bool, CategoryError> {
    if alpha.start() != beta.start() || alpha.end() != h.base() || beta.end() != h.base() {
        return Err(CategoryError::Endpoint("alpha and beta must run from a common vertex to the base".into()));
    }
    let c = h.evaluate(&alpha.invert().then(beta)?)?;
    Ok(h.images().iter().all(|g| c.commutes_with(g)))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::bundle::GaugeField;
    use crate::path::{random as prand, EdgeId};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn theta() -> Arc<Graph> {
        Arc::new(Graph::from_str_edges(&["x", "y"], &[("a", "x", "y"), ("b", "x", "y"), ("c", "x", "y")]).unwrap())
    }

    #[test]
    fn empty_loop_and_generators() {
        let s3 = GroupDescriptor::symmetric(3).unwrap();
        let g = theta();
        let imgs = vec![s3.cycles(&[&[0, 1]]).unwrap(), s3.cycles(&[&[0, 1, 2]]).unwrap()];
        let h = HolonomyMap::with_default_tree(g.clone(), VertexId(0), s3, imgs.clone()).unwrap();
        assert!(h.evaluate(&Walk::empty(VertexId(0))).unwrap().is_identity());
        for (gen, img) in h.basis().generators().iter().zip(&imgs) {
            assert_eq!(&h.evaluate(gen.walk()).unwrap(), img);
        }
        assert!(h.evaluate(&Walk::parse(&g, "y: a~ b").unwrap()).is_err());
    }

    #[test]
    fn theta_field_images_by_hand() {
        let s3 = GroupDescriptor::symmetric(3).unwrap();
        let (a, b, c) =
            (s3.cycles(&[&[0, 1]]).unwrap(), s3.cycles(&[&[1, 2]]).unwrap(), s3.cycles(&[&[0, 1, 2]]).unwrap());
        let f = GaugeField::new(theta(), s3, vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let h = induced_holonomy_map(&f, &f.identity_point(VertexId(0))).unwrap();
        // generators at x are "b a~" and "c a~" with tree edge a
        assert_eq!(h.images()[0], &a.inverse() * &b);
        assert_eq!(h.images()[1], &a.inverse() * &c);
    }

    #[test]
    fn flat_field_gives_identity_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = Arc::new(prand::connected_graph(&mut rng, 8, 2, 4));
        let f = GaugeField::flat(g, GroupDescriptor::quaternion8());
        let h = induced_holonomy_map(&f, &f.identity_point(VertexId(0))).unwrap();
        assert!(h.images().iter().all(|x| x.is_identity()));
    }

    #[test]
    fn evaluation_matches_transport() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for grp in [GroupDescriptor::symmetric(4).unwrap(), GroupDescriptor::su2()] {
            for _ in 0..50 {
                let g = Arc::new(prand::connected_graph(&mut rng, 8, 1, 4));
                let f = GaugeField::random(&mut rng, g.clone(), grp);
                let u = BundlePoint::new(prand::vertex(&mut rng, &g), grp.random(&mut rng));
                let h = induced_holonomy_map(&f, &u).unwrap();
                let lp = prand::random_loop(&mut rng, &g, u.vertex, 15);
                assert!(h.evaluate(&lp).unwrap().approx_eq(&f.holonomy(&lp, &u).unwrap()));
            }
        }
    }

    #[test]
    fn base_change_conjugates_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d4 = GroupDescriptor::dihedral(4).unwrap();
        let g = Arc::new(prand::connected_graph(&mut rng, 6, 2, 4));
        let f = GaugeField::random(&mut rng, g, d4);
        let u = f.identity_point(VertexId(0));
        let k = d4.reflection(1).unwrap();
        let h1 = induced_holonomy_map(&f, &u).unwrap();
        let h2 = induced_holonomy_map(&f, &u.act(&k)).unwrap();
        for (a, b) in h1.images().iter().zip(h2.images()) {
            assert_eq!(*b, &(&k.inverse() * a) * &k);
        }
    }

    #[test]
    fn same_map_ignores_tree_choice() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s3 = GroupDescriptor::symmetric(3).unwrap();
        let g = theta();
        let f = GaugeField::random(&mut rng, g.clone(), s3);
        let h = induced_holonomy_map(&f, &f.identity_point(VertexId(0))).unwrap();
        let other_tree = Tree::from_edges(&g, VertexId(0), &[EdgeId(2)]).unwrap();
        let basis = ChordBasis::new(&g, other_tree.clone(), VertexId(0));
        let imgs = basis.generators().iter().map(|w| h.evaluate(w.walk()).unwrap()).collect();
        let h2 = HolonomyMap::new(g, VertexId(0), s3, other_tree, imgs).unwrap();
        assert!(h.same_map(&h2) && h2.same_map(&h));
    }

    #[test]
    fn alpha_criterion_matches_bounded_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s3 = GroupDescriptor::symmetric(3).unwrap();
        let g = theta();
        let loops_at_y = all_reduced_loops(&g, VertexId(1), 8);
        let mut seen = [0usize; 2];
        for _ in 0..40 {
            let f = GaugeField::random(&mut rng, g.clone(), s3);
            let h = induced_holonomy_map(&f, &f.identity_point(VertexId(0))).unwrap();
            let a = prand::walk_between(&mut rng, &g, VertexId(1), VertexId(0), 4);
            let b = prand::walk_between(&mut rng, &g, VertexId(1), VertexId(0), 4);
            let fast = alpha_equivalent(&h, &a, &b).unwrap();
            let slow = loops_at_y.iter().all(|lp| {
                let via = |w: &Walk| h.evaluate(&w.invert().then(lp).unwrap().then(w).unwrap()).unwrap();
                via(&a) == via(&b)
            });
            assert_eq!(fast, slow);
            seen[fast as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
    }

    #[test]
    fn flat_map_makes_all_curves_equivalent() {
        let g = theta();
        let h = HolonomyMap::flat(g.clone(), VertexId(0), GroupDescriptor::cyclic(2).unwrap());
        let a = Walk::parse(&g, "y: a~").unwrap();
        let b = Walk::parse(&g, "y: b~ a a~ c a~ b a~").unwrap();
        assert!(alpha_equivalent(&h, &a, &b).unwrap());
        let canon = h.canonical_alpha(&b.reduce()).unwrap().unwrap();
        assert_eq!(canon.display(&g), "y: a~");
    }

    #[test]
    fn canonical_alpha_is_a_class_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let d4 = GroupDescriptor::dihedral(4).unwrap();
        let g = Arc::new(Graph::from_str_edges(&["x"], &[("a", "x", "x"), ("b", "x", "x")]).unwrap());
        for _ in 0..30 {
            let f = GaugeField::random(&mut rng, g.clone(), d4);
            let h = induced_holonomy_map(&f, &f.identity_point(VertexId(0))).unwrap();
            let a = prand::random_loop(&mut rng, &g, VertexId(0), 5).reduce();
            let b = prand::random_loop(&mut rng, &g, VertexId(0), 5).reduce();
            let same = alpha_equivalent(&h, a.walk(), b.walk()).unwrap();
            let ca = h.canonical_alpha(&a).unwrap().unwrap();
            let cb = h.canonical_alpha(&b).unwrap().unwrap();
            assert!(alpha_equivalent(&h, a.walk(), ca.walk()).unwrap());
            assert_eq!(same, ca == cb);
        }
    }

    /// Every reduced loop at `v` with at most `max_len` steps.
    pub fn all_reduced_loops(g: &Graph, v: VertexId, max_len: usize) -> Vec<Walk> {
        let mut out = Vec::new();
        let mut frontier = vec![Walk::empty(v)];
        for _ in 0..=max_len {
            let mut next = Vec::new();
            for w in frontier {
                if w.end() == v {
                    out.push(w.clone());
                }
                if w.len() == max_len {
                    continue;
                }
                for &s in g.outgoing(w.end()) {
                    if w.steps().last() == Some(&s.inverse()) {
                        continue;
                    }
                    let step = Walk::new(g, w.end(), vec![s]).unwrap();
                    next.push(w.then(&step).unwrap());
                }
            }
            frontier = next;
        }
        out
    }
}
