use std::ops::ControlFlow;

use super::{Direction, EdgeId, Graph, PathError, ReducedWalk, Step, VertexId, Walk};

/// A graph isomorphism: a vertex bijection plus, for each source edge, the
/// target edge and whether it is traversed in the same or the opposite sense.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphIso {
    vertex_map: Vec<VertexId>,
    edge_map: Vec<Step>,
}

impl GraphIso {
    pub fn identity(graph: &Graph) -> Self {
        Self { vertex_map: graph.vertex_ids().collect(), edge_map: graph.edge_ids().map(Step::forward).collect() }
    }

    /// Validates incidence and bijectivity.
    pub fn new(src: &Graph, dst: &Graph, vertex_map: Vec<VertexId>, edge_map: Vec<Step>) -> Result<Self, PathError> {
        let bad = |m: String| PathError::BadIsomorphism(m);
        if vertex_map.len() != src.vertex_count() || src.vertex_count() != dst.vertex_count() {
            return Err(bad("vertex counts differ".into()));
        }
        if edge_map.len() != src.edge_count() || src.edge_count() != dst.edge_count() {
            return Err(bad("edge counts differ".into()));
        }
        let mut hit = vec![false; dst.vertex_count()];
        for v in &vertex_map {
            if v.0 >= dst.vertex_count() || std::mem::replace(&mut hit[v.0], true) {
                return Err(bad("vertex map is not a bijection".into()));
            }
        }
        let mut hit = vec![false; dst.edge_count()];
        for (i, s) in edge_map.iter().enumerate() {
            if s.edge.0 >= dst.edge_count() || std::mem::replace(&mut hit[s.edge.0], true) {
                return Err(bad("edge map is not a bijection".into()));
            }
            let e = src.edge(EdgeId(i));
            if dst.step_source(*s) != vertex_map[e.tail.0] || dst.step_target(*s) != vertex_map[e.head.0] {
                return Err(bad(format!("edge {} does not preserve incidence", e.name)));
            }
        }
        Ok(Self { vertex_map, edge_map })
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[Step] {
        &self.edge_map
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    pub fn step(&self, s: Step) -> Step {
        let t = self.edge_map[s.edge.0];
        Step { edge: t.edge, dir: s.dir.then(t.dir) }
    }

    pub fn walk(&self, w: &Walk) -> Walk {
        Walk {
            start: self.vertex(w.start()),
            end: self.vertex(w.end()),
            steps: w.steps().iter().map(|s| self.step(*s)).collect(),
        }
    }

    /// Images of reduced walks stay reduced.
    pub fn reduced(&self, w: &ReducedWalk) -> ReducedWalk {
        ReducedWalk(self.walk(w.walk()))
    }

    pub fn inverse(&self) -> GraphIso {
        let mut vertex_map = vec![VertexId(0); self.vertex_map.len()];
        for (i, v) in self.vertex_map.iter().enumerate() {
            vertex_map[v.0] = VertexId(i);
        }
        let mut edge_map = vec![Step::forward(EdgeId(0)); self.edge_map.len()];
        for (i, s) in self.edge_map.iter().enumerate() {
            edge_map[s.edge.0] = Step { edge: EdgeId(i), dir: s.dir };
        }
        GraphIso { vertex_map, edge_map }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GraphIso) -> GraphIso {
        GraphIso {
            vertex_map: first.vertex_map.iter().map(|v| self.vertex(*v)).collect(),
            edge_map: first.edge_map.iter().map(|s| self.step(*s)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, v)| v.0 == i)
            && self.edge_map.iter().enumerate().all(|(i, s)| s.edge.0 == i && s.dir == Direction::Forward)
    }
}

/// Calls `visit` on every isomorphism `src -> dst` in a deterministic order
/// until it returns `Break`. Fails when either graph exceeds `max_vertices`.
pub fn enumerate_isomorphisms<F>(src: &Graph, dst: &Graph, max_vertices: usize, mut visit: F) -> Result<(), PathError>
where
    F: FnMut(GraphIso) -> ControlFlow<()>,
{
    for g in [src, dst] {
        if g.vertex_count() > max_vertices {
            return Err(PathError::VertexBound { found: g.vertex_count(), bound: max_vertices });
        }
    }
    if src.vertex_count() != dst.vertex_count() || src.edge_count() != dst.edge_count() {
        return Ok(());
    }
    let n = src.vertex_count();
    let src_mult = multiplicities(src);
    let dst_mult = multiplicities(dst);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let _ = assign_vertex(src, dst, &src_mult, &dst_mult, 0, &mut map, &mut used, &mut visit);
    Ok(())
}

/// Collects all isomorphisms (at most `limit`).
pub fn isomorphisms(src: &Graph, dst: &Graph, max_vertices: usize, limit: usize) -> Result<Vec<GraphIso>, PathError> {
    let mut out = Vec::new();
    enumerate_isomorphisms(src, dst, max_vertices, |iso| {
        out.push(iso);
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

/// Undirected edge counts between vertex pairs, self-loops on the diagonal.
fn multiplicities(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in g.edges() {
        m[e.tail.0][e.head.0] += 1;
        if e.tail != e.head {
            m[e.head.0][e.tail.0] += 1;
        }
    }
    m
}

#[allow(clippy::too_many_arguments)]
fn assign_vertex<F>(
    src: &Graph,
    dst: &Graph,
    sm: &[Vec<usize>],
    dm: &[Vec<usize>],
    v: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(GraphIso) -> ControlFlow<()>,
{
    let n = map.len();
    if v == n {
        return assign_edges(src, dst, map, visit);
    }
    for w in 0..n {
        if used[w] || src.degree(VertexId(v)) != dst.degree(VertexId(w)) || sm[v][v] != dm[w][w] {
            continue;
        }
        if (0..v).any(|u| sm[u][v] != dm[map[u]][w]) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        assign_vertex(src, dst, sm, dm, v + 1, map, used, visit)?;
        used[w] = false;
        map[v] = usize::MAX;
    }
    ControlFlow::Continue(())
}

/// Enumerates edge bijections compatible with a fixed vertex map.
fn assign_edges<F>(src: &Graph, dst: &Graph, map: &[usize], visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(GraphIso) -> ControlFlow<()>,
{
    // each source edge may go to any unused target edge joining the image
    // endpoints; self-loops may additionally flip
    let options: Vec<Vec<Step>> = src
        .edges()
        .iter()
        .map(|e| {
            let (t, h) = (map[e.tail.0], map[e.head.0]);
            let mut opts = Vec::new();
            for (j, f) in dst.edges().iter().enumerate() {
                if f.tail.0 == t && f.head.0 == h {
                    opts.push(Step::forward(EdgeId(j)));
                }
                if f.tail.0 == h && f.head.0 == t {
                    opts.push(Step::reverse(EdgeId(j)));
                }
            }
            opts
        })
        .collect();
    let vertex_map: Vec<VertexId> = map.iter().map(|&w| VertexId(w)).collect();
    let mut chosen = Vec::with_capacity(options.len());
    let mut used = vec![false; dst.edge_count()];
    edge_backtrack(&options, &vertex_map, &mut chosen, &mut used, visit)
}

fn edge_backtrack<F>(
    options: &[Vec<Step>],
    vertex_map: &[VertexId],
    chosen: &mut Vec<Step>,
    used: &mut Vec<bool>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(GraphIso) -> ControlFlow<()>,
{
    let i = chosen.len();
    if i == options.len() {
        return visit(GraphIso { vertex_map: vertex_map.to_vec(), edge_map: chosen.clone() });
    }
    for s in &options[i] {
        if used[s.edge.0] {
            continue;
        }
        used[s.edge.0] = true;
        chosen.push(*s);
        let r = edge_backtrack(options, vertex_map, chosen, used, visit);
        chosen.pop();
        used[s.edge.0] = false;
        r?;
    }
    ControlFlow::Continue(())
}
