use std::collections::VecDeque;

use super::{EdgeId, Graph, PathError, ReducedWalk, Step, VertexId, Walk};

/// A spanning tree stored as parent links toward a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    root: VertexId,
    /// `parent[v]` is the step from the parent of `v` into `v`.
    parent: Vec<Option<Step>>,
    in_tree: Vec<bool>,
    depth: Vec<usize>,
}

/// Breadth-first spanning tree from `root`; ties broken by edge name.
pub fn spanning_tree(graph: &Graph, root: VertexId) -> Tree {
    let n = graph.vertex_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root.0] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &s in graph.outgoing(v) {
            let w = graph.step_target(s);
            if !seen[w.0] {
                seen[w.0] = true;
                parent[w.0] = Some(s);
                queue.push_back(w);
            }
        }
    }
    Tree::from_parents(graph, root, parent)
}

impl Tree {
    fn from_parents(graph: &Graph, root: VertexId, parent: Vec<Option<Step>>) -> Self {
        let mut in_tree = vec![false; graph.edge_count()];
        for s in parent.iter().flatten() {
            in_tree[s.edge.0] = true;
        }
        let mut depth = vec![usize::MAX; parent.len()];
        depth[root.0] = 0;
        let mut stack = Vec::new();
        for v in 0..parent.len() {
            let mut w = v;
            while depth[w] == usize::MAX {
                stack.push(w);
                w = graph.step_source(parent[w].expect("non-root has parent")).0;
            }
            let mut d = depth[w];
            while let Some(u) = stack.pop() {
                d += 1;
                depth[u] = d;
            }
        }
        Self { root, parent, in_tree, depth }
    }

    /// Builds a tree from a list of edges, checking that they span the graph
    /// without cycles.
    pub fn from_edges(graph: &Graph, root: VertexId, edges: &[EdgeId]) -> Result<Self, PathError> {
        let n = graph.vertex_count();
        if edges.len() + 1 != n {
            return Err(PathError::NotATree(format!("{} edges for {n} vertices", edges.len())));
        }
        let mut allowed = vec![false; graph.edge_count()];
        for e in edges {
            if e.0 >= graph.edge_count() {
                return Err(PathError::UnknownEdge(format!("#{}", e.0)));
            }
            if allowed[e.0] {
                return Err(PathError::NotATree(format!("edge {} listed twice", graph.edge(*e).name)));
            }
            allowed[e.0] = true;
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[root.0] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &s in graph.outgoing(v) {
                if !allowed[s.edge.0] {
                    continue;
                }
                let w = graph.step_target(s);
                if !seen[w.0] {
                    seen[w.0] = true;
                    parent[w.0] = Some(s);
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(PathError::NotATree(format!("{} not spanned", graph.vertex_name(VertexId(v)))));
        }
        Ok(Self::from_parents(graph, root, parent))
    }

    /// Same edge set, re-rooted at `root`.
    pub fn rerooted(&self, graph: &Graph, root: VertexId) -> Tree {
        Self::from_edges(graph, root, &self.edges()).expect("a spanning tree stays spanning")
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.in_tree[e.0]
    }

    /// Tree edges in edge order.
    pub fn edges(&self) -> Vec<EdgeId> {
        (0..self.in_tree.len()).filter(|&i| self.in_tree[i]).map(EdgeId).collect()
    }

    /// Non-tree edges in edge order.
    pub fn chords(&self) -> Vec<EdgeId> {
        (0..self.in_tree.len()).filter(|&i| !self.in_tree[i]).map(EdgeId).collect()
    }

    /// Steps from the root down to `v`.
    fn steps_from_root(&self, graph: &Graph, v: VertexId) -> Vec<Step> {
        let mut steps = Vec::with_capacity(self.depth[v.0]);
        let mut w = v;
        while let Some(s) = self.parent[w.0] {
            steps.push(s);
            w = graph.step_source(s);
        }
        steps.reverse();
        steps
    }

    pub fn path_from_root(&self, graph: &Graph, v: VertexId) -> ReducedWalk {
        ReducedWalk(Walk { start: self.root, end: v, steps: self.steps_from_root(graph, v) })
    }

    /// The unique reduced tree path from `a` to `b`.
    pub fn path(&self, graph: &Graph, a: VertexId, b: VertexId) -> ReducedWalk {
        let up = self.path_from_root(graph, a).invert();
        let down = self.path_from_root(graph, b);
        up.then(&down).expect("tree paths meet at the root")
    }
}

/// Free generators of the reduced loops at a base vertex, one per chord.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChordBasis {
    base: VertexId,
    tree: Tree,
    chords: Vec<EdgeId>,
    /// Generator index of each edge, `None` for tree edges.
    index: Vec<Option<usize>>,
    generators: Vec<ReducedWalk>,
}

impl ChordBasis {
    pub fn new(graph: &Graph, tree: Tree, base: VertexId) -> Self {
        let chords = tree.chords();
        let mut index = vec![None; graph.edge_count()];
        let generators = chords
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                index[e.0] = Some(i);
                let edge = graph.edge(e);
                let to_tail = tree.path(graph, base, edge.tail);
                let chord = ReducedWalk(Walk { start: edge.tail, end: edge.head, steps: vec![Step::forward(e)] });
                let back = tree.path(graph, edge.head, base);
                to_tail.then(&chord).and_then(|w| w.then(&back)).expect("compatible endpoints")
            })
            .collect();
        Self { base, tree, chords, index, generators }
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn chords(&self) -> &[EdgeId] {
        &self.chords
    }

    pub fn generators(&self) -> &[ReducedWalk] {
        &self.generators
    }

    pub fn generator_index(&self, e: EdgeId) -> Option<usize> {
        self.index[e.0]
    }

    /// Word in the generators (`(index, ±1)` letters, left to right) whose
    /// expansion reduces to the reduction of `lp`.
    pub fn decompose(&self, lp: &Walk) -> Result<Vec<(usize, i32)>, PathError> {
        if lp.start() != self.base || lp.end() != self.base {
            return Err(PathError::NotALoop(format!("#{}", self.base.0)));
        }
        let mut word: Vec<(usize, i32)> = Vec::new();
        for s in lp.steps() {
            if let Some(i) = self.index[s.edge.0] {
                let e = match s.dir {
                    super::Direction::Forward => 1,
                    super::Direction::Reverse => -1,
                };
                if word.last() == Some(&(i, -e)) {
                    word.pop();
                } else {
                    word.push((i, e));
                }
            }
        }
        Ok(word)
    }

    pub fn expand(&self, word: &[(usize, i32)]) -> ReducedWalk {
        let mut acc = ReducedWalk::empty(self.base);
        for &(i, e) in word {
            let g = if e < 0 { self.generators[i].invert() } else { self.generators[i].clone() };
            for _ in 0..e.unsigned_abs() {
                acc = acc.then(&g).expect("generators are loops at the base");
            }
        }
        acc
    }
}
