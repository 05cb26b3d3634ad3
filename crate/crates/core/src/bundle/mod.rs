//! Discrete principal bundles with connection.
//!
//! The total space is `vertices × G` with right action `(v, g)·h = (v, gh)`.
//! Traversing an edge step maps the fiber coordinate `g` to `U(e)·g`, where a
//! reverse step uses `U(e)⁻¹`; later steps act on the left.

mod lemma;
mod morphism;
mod subbundle;

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::group::{GroupDescriptor, GroupElement, GroupError};
use crate::path::{Direction, EdgeId, Graph, PathError, Step, VertexId, Walk};

pub use lemma::{check_lemma1, check_lemma1_with, Lemma1Failure, Lemma1Report, TransportFn};
pub use morphism::{connection_residual, morphism_preserves_connection, BundleMorphism};
pub use subbundle::{holonomy_subbundle, HolonomySubBundle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BundleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("walk starts at {walk:?} but the point lies over {point:?}")]
    BasepointMismatch { walk: String, point: String },
    #[error("walk is not a loop at {0:?}")]
    NotALoop(String),
    #[error("expected {expected} link values, got {found}")]
    LinkCount { expected: usize, found: usize },
    #[error("morphism does not match the fields: {0}")]
    Incompatible(String),
}

/// Link variables on a connected graph.
#[derive(Clone, Debug)]
pub struct GaugeField {
    graph: Arc<Graph>,
    group: GroupDescriptor,
    links: Vec<GroupElement>,
}

/// A point `(v, g)` of the trivialized total space.
#[derive(Clone, Debug, PartialEq)]
pub struct BundlePoint {
    pub vertex: VertexId,
    pub fiber: GroupElement,
}

impl BundlePoint {
    pub fn new(vertex: VertexId, fiber: GroupElement) -> Self {
        Self { vertex, fiber }
    }

    /// Right action `(v, g)·h = (v, gh)`.
    pub fn act(&self, h: &GroupElement) -> BundlePoint {
        BundlePoint { vertex: self.vertex, fiber: &self.fiber * h }
    }

    pub fn approx_eq(&self, other: &BundlePoint) -> bool {
        self.vertex == other.vertex && self.fiber.approx_eq(&other.fiber)
    }
}

/// A vertical automorphism: one group element per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransformation {
    values: Vec<GroupElement>,
}

impl GaugeTransformation {
    pub fn new(values: Vec<GroupElement>) -> Self {
        Self { values }
    }

    pub fn identity(graph: &Graph, group: &GroupDescriptor) -> Self {
        Self { values: vec![group.identity(); graph.vertex_count()] }
    }

    pub fn constant(graph: &Graph, c: &GroupElement) -> Self {
        Self { values: vec![c.clone(); graph.vertex_count()] }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, graph: &Graph, group: &GroupDescriptor) -> Self {
        Self { values: (0..graph.vertex_count()).map(|_| group.random(rng)).collect() }
    }

    pub fn at(&self, v: VertexId) -> &GroupElement {
        &self.values[v.0]
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }
}

impl GaugeField {
    pub fn new(graph: Arc<Graph>, group: GroupDescriptor, links: Vec<GroupElement>) -> Result<Self, BundleError> {
        if links.len() != graph.edge_count() {
            return Err(BundleError::LinkCount { expected: graph.edge_count(), found: links.len() });
        }
        for l in &links {
            group.check_same(l.group())?;
        }
        Ok(Self { graph, group, links })
    }

    pub fn flat(graph: Arc<Graph>, group: GroupDescriptor) -> Self {
        let links = vec![group.identity(); graph.edge_count()];
        Self { graph, group, links }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, graph: Arc<Graph>, group: GroupDescriptor) -> Self {
        let links = (0..graph.edge_count()).map(|_| group.random(rng)).collect();
        Self { graph, group, links }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn links(&self) -> &[GroupElement] {
        &self.links
    }

    pub fn link(&self, e: EdgeId) -> &GroupElement {
        &self.links[e.0]
    }

    /// Link value of a step; reverse traversal uses the inverse.
    pub fn step_value(&self, s: Step) -> GroupElement {
        match s.dir {
            Direction::Forward => self.links[s.edge.0].clone(),
            Direction::Reverse => self.links[s.edge.0].inverse(),
        }
    }

    /// Returns a copy with one link replaced.
    pub fn with_link(&self, e: EdgeId, value: GroupElement) -> Result<Self, BundleError> {
        self.group.check_same(value.group())?;
        let mut links = self.links.clone();
        links[e.0] = value;
        Ok(Self { links, ..self.clone() })
    }

    /// Ordered product `U(s_n)···U(s_1)` along the walk.
    pub fn walk_product(&self, w: &Walk) -> GroupElement {
        let mut acc = self.group.identity();
        for s in w.steps() {
            acc = &self.step_value(*s) * &acc;
        }
        acc
    }

    /// Parallel transport of `p` along `w`.
    pub fn transport(&self, w: &Walk, p: &BundlePoint) -> Result<BundlePoint, BundleError> {
        if w.start() != p.vertex {
            return Err(BundleError::BasepointMismatch {
                walk: self.graph.vertex_name(w.start()).into(),
                point: self.graph.vertex_name(p.vertex).into(),
            });
        }
        Ok(BundlePoint { vertex: w.end(), fiber: &self.walk_product(w) * &p.fiber })
    }

    /// The `h` with `transport(loop, u) = u·h`, i.e. `a⁻¹ U(loop) a` for `u = (x, a)`.
    pub fn holonomy(&self, lp: &Walk, u: &BundlePoint) -> Result<GroupElement, BundleError> {
        if lp.start() != u.vertex || lp.end() != u.vertex {
            return Err(BundleError::NotALoop(self.graph.vertex_name(u.vertex).into()));
        }
        Ok(&(&u.fiber.inverse() * &self.walk_product(lp)) * &u.fiber)
    }

    pub fn point(&self, vertex: VertexId, fiber: GroupElement) -> Result<BundlePoint, BundleError> {
        self.group.check_same(fiber.group())?;
        Ok(BundlePoint { vertex, fiber })
    }

    /// Identity-fiber point over `x`.
    pub fn identity_point(&self, x: VertexId) -> BundlePoint {
        BundlePoint { vertex: x, fiber: self.group.identity() }
    }

    /// Generator-wise equality of link values.
    pub fn same_links(&self, other: &GaugeField) -> bool {
        *self.graph == *other.graph
            && self.group.same_group(&other.group)
            && self.links.iter().zip(&other.links).all(|(a, b)| a.approx_eq(b))
    }
}

/// `U'(e) = t(head)·U(e)·t(tail)⁻¹`.
pub fn apply_gauge(field: &GaugeField, t: &GaugeTransformation) -> Result<GaugeField, BundleError> {
    if t.values.len() != field.graph.vertex_count() {
        return Err(BundleError::Incompatible(format!(
            "{} gauge values for {} vertices",
            t.values.len(),
            field.graph.vertex_count()
        )));
    }
    for v in &t.values {
        field.group.check_same(v.group())?;
    }
    let links = field
        .graph
        .edges()
        .iter()
        .zip(&field.links)
        .map(|(e, u)| &(t.at(e.head) * u) * &t.at(e.tail).inverse())
        .collect();
    Ok(GaugeField { links, ..field.clone() })
}
