//! Finite connected graphs, edge walks and free reduction.
//!
//! A walk is a word of edge steps. Two walks are thinly equivalent exactly
//! when they have the same free reduction (cancel `e e⁻¹` until none remain).

mod iso;
pub mod random;
mod tree;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

pub use iso::{enumerate_isomorphisms, isomorphisms, GraphIso};
pub use tree::{spanning_tree, ChordBasis, Tree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("graph is disconnected: {0:?} is unreachable")]
    Disconnected(String),
    #[error("endpoint mismatch: expected {expected:?}, found {found:?}")]
    EndpointMismatch { expected: String, found: String },
    #[error("walk is not a loop at {0:?}")]
    NotALoop(String),
    #[error("cannot parse walk {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
    #[error("not a spanning tree: {0}")]
    NotATree(String),
    #[error("graph isomorphism invalid: {0}")]
    BadIsomorphism(String),
    #[error("graph has {found} vertices, above the search bound {bound}")]
    VertexBound { found: usize, bound: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }

    /// Composes orientations: reversing twice is forward.
    pub fn then(self, other: Direction) -> Direction {
        if self == other {
            Direction::Forward
        } else {
            Direction::Reverse
        }
    }
}

/// One traversal of an edge, forward (tail to head) or reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: EdgeId,
    pub dir: Direction,
}

impl Step {
    pub fn forward(edge: EdgeId) -> Self {
        Self { edge, dir: Direction::Forward }
    }

    pub fn reverse(edge: EdgeId) -> Self {
        Self { edge, dir: Direction::Reverse }
    }

    pub fn inverse(self) -> Self {
        Self { edge: self.edge, dir: self.dir.flip() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
}

/// A connected multigraph with named vertices and directed, named edges.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    /// Steps leaving each vertex, ordered by edge name then direction.
    outgoing: Vec<Vec<Step>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Graph {
    /// Builds a graph from vertex names and `(name, tail, head)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, PathError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), VertexId(i)).is_some() {
                return Err(PathError::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_index = HashMap::new();
        let mut list = Vec::new();
        for (i, (name, tail, head)) in edges.into_iter().enumerate() {
            let t = *vertex_index.get(&tail).ok_or_else(|| PathError::UnknownVertex(tail.clone()))?;
            let h = *vertex_index.get(&head).ok_or_else(|| PathError::UnknownVertex(head.clone()))?;
            if edge_index.insert(name.clone(), EdgeId(i)).is_some() {
                return Err(PathError::DuplicateEdge(name));
            }
            list.push(Edge { name, tail: t, head: h });
        }
        let mut outgoing = vec![Vec::new(); vertices.len()];
        let mut order: Vec<usize> = (0..list.len()).collect();
        order.sort_by(|&a, &b| list[a].name.cmp(&list[b].name));
        for i in order {
            let e = &list[i];
            outgoing[e.tail.0].push(Step::forward(EdgeId(i)));
            outgoing[e.head.0].push(Step::reverse(EdgeId(i)));
        }
        let g = Self { vertices, edges: list, vertex_index, edge_index, outgoing };
        let reach = g.reachable(VertexId(0));
        if let Some(v) = reach.iter().position(|r| !r) {
            return Err(PathError::Disconnected(g.vertices[v].clone()));
        }
        Ok(g)
    }

    /// Convenience constructor from string slices.
    pub fn from_str_edges(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self, PathError> {
        Self::new(vertices.iter().copied(), edges.iter().map(|(n, t, h)| (n.to_string(), t.to_string(), h.to_string())))
    }

    fn reachable(&self, from: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        seen[from.0] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for s in &self.outgoing[v.0] {
                let w = self.step_target(*s);
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, PathError> {
        self.vertex_index.get(name).copied().ok_or_else(|| PathError::UnknownVertex(name.into()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId, PathError> {
        self.edge_index.get(name).copied().ok_or_else(|| PathError::UnknownEdge(name.into()))
    }

    pub fn step_source(&self, s: Step) -> VertexId {
        let e = &self.edges[s.edge.0];
        match s.dir {
            Direction::Forward => e.tail,
            Direction::Reverse => e.head,
        }
    }

    pub fn step_target(&self, s: Step) -> VertexId {
        self.step_source(s.inverse())
    }

    /// Steps leaving `v`, ordered by edge name.
    pub fn outgoing(&self, v: VertexId) -> &[Step] {
        &self.outgoing[v.0]
    }

    /// Number of edge ends at `v` (a self-loop counts twice).
    pub fn degree(&self, v: VertexId) -> usize {
        self.outgoing[v.0].len()
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn step_name(&self, s: Step) -> String {
        let name = &self.edges[s.edge.0].name;
        match s.dir {
            Direction::Forward => name.clone(),
            Direction::Reverse => format!("{name}~"),
        }
    }
}

/// An edge walk: a start vertex and a sequence of endpoint-compatible steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    start: VertexId,
    end: VertexId,
    steps: Vec<Step>,
}

/// A walk with no step immediately followed by its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWalk(Walk);

impl Walk {
    pub fn empty(x: VertexId) -> Self {
        Self { start: x, end: x, steps: Vec::new() }
    }

    pub fn new(graph: &Graph, start: VertexId, steps: Vec<Step>) -> Result<Self, PathError> {
        if start.0 >= graph.vertex_count() {
            return Err(PathError::UnknownVertex(format!("#{}", start.0)));
        }
        let mut at = start;
        for s in &steps {
            if s.edge.0 >= graph.edge_count() {
                return Err(PathError::UnknownEdge(format!("#{}", s.edge.0)));
            }
            let src = graph.step_source(*s);
            if src != at {
                return Err(PathError::EndpointMismatch {
                    expected: graph.vertex_name(at).into(),
                    found: graph.vertex_name(src).into(),
                });
            }
            at = graph.step_target(*s);
        }
        Ok(Self { start, end: at, steps })
    }

    /// Parses `"x: a b~ c⁻¹"`: a start vertex, then steps, with `~` or `⁻¹`
    /// marking reverse traversal.
    pub fn parse(graph: &Graph, literal: &str) -> Result<Self, PathError> {
        let err = |reason: &str| PathError::Parse { literal: literal.into(), reason: reason.into() };
        let (start, rest) = literal.split_once(':').ok_or_else(|| err("missing ':' after start vertex"))?;
        let start = graph.vertex(start.trim())?;
        let mut steps = Vec::new();
        for tok in rest.split_whitespace() {
            let (name, dir) = if let Some(n) = tok.strip_suffix('~') {
                (n, Direction::Reverse)
            } else if let Some(n) = tok.strip_suffix("⁻¹") {
                (n, Direction::Reverse)
            } else {
                (tok, Direction::Forward)
            };
            if name.is_empty() {
                return Err(err("empty step"));
            }
            steps.push(Step { edge: graph.edge_id(name)?, dir });
        }
        Self::new(graph, start, steps)
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        self.start == self.end
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Walk) -> Result<Walk, PathError> {
        if self.end != next.start {
            return Err(PathError::EndpointMismatch {
                expected: format!("#{}", self.end.0),
                found: format!("#{}", next.start.0),
            });
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&next.steps);
        Ok(Walk { start: self.start, end: next.end, steps })
    }

    /// `w2 • w1`: `w1` is traversed first.
    pub fn compose(w2: &Walk, w1: &Walk) -> Result<Walk, PathError> {
        w1.then(w2)
    }

    pub fn invert(&self) -> Walk {
        Walk { start: self.end, end: self.start, steps: self.steps.iter().rev().map(|s| s.inverse()).collect() }
    }

    pub fn reduce(&self) -> ReducedWalk {
        let mut out: Vec<Step> = Vec::with_capacity(self.steps.len());
        for &s in &self.steps {
            if out.last() == Some(&s.inverse()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        ReducedWalk(Walk { start: self.start, end: self.end, steps: out })
    }

    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| w[1] != w[0].inverse())
    }

    pub fn display(&self, graph: &Graph) -> String {
        let mut s = format!("{}:", graph.vertex_name(self.start));
        for step in &self.steps {
            s.push(' ');
            s.push_str(&graph.step_name(*step));
        }
        s
    }
}

impl ReducedWalk {
    pub fn empty(x: VertexId) -> Self {
        ReducedWalk(Walk::empty(x))
    }

    pub fn walk(&self) -> &Walk {
        &self.0
    }

    pub fn into_walk(self) -> Walk {
        self.0
    }

    pub fn start(&self) -> VertexId {
        self.0.start
    }

    pub fn end(&self) -> VertexId {
        self.0.end
    }

    pub fn steps(&self) -> &[Step] {
        &self.0.steps
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reduced concatenation: `self` first, then `next`.
    pub fn then(&self, next: &ReducedWalk) -> Result<ReducedWalk, PathError> {
        Ok(self.0.then(&next.0)?.reduce())
    }

    pub fn invert(&self) -> ReducedWalk {
        ReducedWalk(self.0.invert())
    }

    pub fn display(&self, graph: &Graph) -> String {
        self.0.display(graph)
    }
}

impl From<ReducedWalk> for Walk {
    fn from(r: ReducedWalk) -> Walk {
        r.0
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dir {
            Direction::Forward => write!(f, "#{}", self.edge.0),
            Direction::Reverse => write!(f, "#{}~", self.edge.0),
        }
    }
}

/// Small named graphs used by the witness suites and the bundled fixtures.
pub mod fixtures {
    use super::Graph;

    /// Two vertices joined by three parallel edges `a, b, c` from `x` to `y`.
    pub fn theta() -> Graph {
        Graph::from_str_edges(&["x", "y"], &[("a", "x", "y"), ("b", "x", "y"), ("c", "x", "y")]).unwrap()
    }

    /// One vertex with self-loops `a` and `b`.
    pub fn figure_eight() -> Graph {
        Graph::from_str_edges(&["x"], &[("a", "x", "x"), ("b", "x", "x")]).unwrap()
    }

    /// The tree `x -a-> y -b-> z`.
    pub fn path3() -> Graph {
        Graph::from_str_edges(&["x", "y", "z"], &[("a", "x", "y"), ("b", "y", "z")]).unwrap()
    }

    pub fn loop1() -> Graph {
        Graph::from_str_edges(&["x"], &[("a", "x", "x")]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn disconnected_graph_rejected() {
        let err = Graph::from_str_edges(&["x", "y"], &[]).unwrap_err();
        assert_eq!(err, PathError::Disconnected("y".into()));
    }

    #[test]
    fn duplicate_edge_rejected() {
        let err = Graph::from_str_edges(&["x"], &[("a", "x", "x"), ("a", "x", "x")]).unwrap_err();
        assert_eq!(err, PathError::DuplicateEdge("a".into()));
    }

    #[test]
    fn parse_and_display() {
        let g = path3();
        let w = Walk::parse(&g, "x: a b b⁻¹ a~").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.display(&g), "x: a b b~ a~");
        assert!(w.reduce().is_empty());
    }

    #[test]
    fn parse_rejects_bad_start() {
        let g = path3();
        assert!(matches!(Walk::parse(&g, "y: a"), Err(PathError::EndpointMismatch { .. })));
        assert!(matches!(Walk::parse(&g, "a b"), Err(PathError::Parse { .. })));
    }

    #[test]
    fn compose_in_traversal_order() {
        let g = path3();
        let a = Walk::parse(&g, "x: a").unwrap();
        let b = Walk::parse(&g, "y: b").unwrap();
        let ab = Walk::compose(&b, &a).unwrap();
        assert_eq!(ab.display(&g), "x: a b");
        assert!(Walk::compose(&a, &b).is_err());
    }

    #[test]
    fn reduce_examples() {
        let g = figure_eight();
        assert!(Walk::parse(&g, "x: a a~").unwrap().reduce().is_empty());
        let r = Walk::parse(&g, "x: a b b~ a").unwrap().reduce();
        assert_eq!(r.display(&g), "x: a a");
    }

    #[test]
    fn inversion_is_involutive() {
        let g = theta();
        let w = Walk::parse(&g, "x: a b~ c").unwrap();
        assert_eq!(w.invert().display(&g), "y: c~ b a~");
        assert_eq!(w.invert().invert(), w);
        assert!(w.then(&w.invert()).unwrap().reduce().is_empty());
    }
}
