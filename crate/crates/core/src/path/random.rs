//! Seeded random graphs and walks for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{spanning_tree, Graph, Step, VertexId, Walk};

/// A random connected graph with `1..=max_vertices` vertices named `v0, v1, ...`
/// and up to `max_extra` edges beyond a spanning tree (self-loops and
/// parallel edges allowed). At least `min_cycle_rank` extra edges are added.
pub fn connected_graph<R: Rng + ?Sized>(
    rng: &mut R,
    max_vertices: usize,
    min_cycle_rank: usize,
    max_extra: usize,
) -> Graph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (t, h) = if rng.gen() { (i, j) } else { (j, i) };
        edges.push((t, h));
    }
    let extra = rng.gen_range(min_cycle_rank..=max_extra.max(min_cycle_rank));
    for _ in 0..extra {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    edges.shuffle(rng);
    Graph::new(
        vertices.iter().cloned(),
        edges.into_iter().enumerate().map(|(k, (t, h))| (format!("e{k}"), vertices[t].clone(), vertices[h].clone())),
    )
    .expect("a spanning tree keeps the graph connected")
}

pub fn vertex<R: Rng + ?Sized>(rng: &mut R, graph: &Graph) -> VertexId {
    VertexId(rng.gen_range(0..graph.vertex_count()))
}

/// A random walk of exactly `len` steps (backtracks allowed) when the graph
/// has edges; the empty walk otherwise.
pub fn walk<R: Rng + ?Sized>(rng: &mut R, graph: &Graph, start: VertexId, len: usize) -> Walk {
    let mut at = start;
    let mut steps = Vec::with_capacity(len);
    for _ in 0..len {
        let out = graph.outgoing(at);
        let Some(&s) = out.choose(rng) else { break };
        steps.push(s);
        at = graph.step_target(s);
    }
    Walk::new(graph, start, steps).expect("steps follow incidence")
}

/// A random walk from `start` to `end`: a random excursion followed by the
/// tree path back to `end`.
pub fn walk_between<R: Rng + ?Sized>(rng: &mut R, graph: &Graph, start: VertexId, end: VertexId, len: usize) -> Walk {
    let w = walk(rng, graph, start, len);
    let tree = spanning_tree(graph, end);
    let back = tree.path(graph, w.end(), end);
    w.then(back.walk()).expect("tree path starts at the excursion end")
}

pub fn random_loop<R: Rng + ?Sized>(rng: &mut R, graph: &Graph, base: VertexId, len: usize) -> Walk {
    walk_between(rng, graph, base, base, len)
}

/// A random step sequence of length `len` that may include backtracks,
/// exposed for reduction tests.
pub fn steps<R: Rng + ?Sized>(rng: &mut R, graph: &Graph, start: VertexId, len: usize) -> Vec<Step> {
    walk(rng, graph, start, len).steps().to_vec()
}

/// A copy of `graph` with vertices and edges reordered and some edges
/// reversed, together with the isomorphism from `graph` onto it.
pub fn relabeled<R: Rng + ?Sized>(rng: &mut R, graph: &Graph) -> (Graph, super::GraphIso) {
    use super::{Direction, EdgeId};
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let mut vperm: Vec<usize> = (0..n).collect();
    vperm.shuffle(rng);
    let mut eperm: Vec<usize> = (0..m).collect();
    eperm.shuffle(rng);
    let flips: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
    // old vertex i becomes new vertex vperm[i]; old edge j becomes new edge eperm[j]
    let mut names = vec![String::new(); n];
    for (i, &k) in vperm.iter().enumerate() {
        names[k] = graph.vertex_name(VertexId(i)).to_string();
    }
    let mut edges = vec![(String::new(), String::new(), String::new()); m];
    for (j, e) in graph.edges().iter().enumerate() {
        let (t, h) = (names[vperm[e.tail.0]].clone(), names[vperm[e.head.0]].clone());
        edges[eperm[j]] = if flips[j] { (e.name.clone(), h, t) } else { (e.name.clone(), t, h) };
    }
    let g2 = Graph::new(names, edges).expect("relabeling preserves validity");
    let vertex_map = vperm.iter().map(|&k| VertexId(k)).collect();
    let edge_map = (0..m)
        .map(|j| Step { edge: EdgeId(eperm[j]), dir: if flips[j] { Direction::Reverse } else { Direction::Forward } })
        .collect();
    let iso = super::GraphIso::new(graph, &g2, vertex_map, edge_map).expect("constructed to preserve incidence");
    (g2, iso)
}
