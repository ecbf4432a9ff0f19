//! Isomorphism classes of small graphs, for exhaustive checks.
//!
//! Classes on `n` vertices are grown from the classes on `n - 1` by attaching
//! a new vertex to every possible neighbourhood, then deduplicated by a
//! canonical code: colour refinement orders the vertices into invariant
//! cells, and the code is the smallest adjacency bit string over all
//! orderings that respect the cells.

use std::collections::HashSet;

use crate::graph::Graph;
use crate::weighted::WeightedGraph;

/// Largest vertex count a canonical code fits in.
pub const MAX_ENUM_VERTICES: usize = 11;

type Masks = Vec<u16>;

fn masks_of(g: &Graph) -> Masks {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u16, |m, &u| m | 1 << u))
        .collect()
}

fn graph_of(masks: &[u16]) -> Graph {
    let n = masks.len();
    let edges = (0..n).flat_map(|u| (u + 1..n).filter(move |&v| masks[u] >> v & 1 == 1).map(move |v| (u, v)));
    Graph::from_edges(n, edges).expect("masks describe a simple graph")
}

/// Stable colouring, colours ranked so the ordering is isomorphism invariant.
fn refine(masks: &[u16]) -> Vec<usize> {
    let n = masks.len();
    let mut colour: Vec<usize> = masks.iter().map(|m| m.count_ones() as usize).collect();
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = (0..n).filter(|&u| masks[v] >> u & 1 == 1).map(|u| colour[u]).collect();
                around.sort_unstable();
                (colour[v], around)
            })
            .collect();
        let mut distinct = keys.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = keys.iter().map(|k| distinct.binary_search(k).expect("key present")).collect();
        let before = colour.iter().collect::<HashSet<_>>().len();
        colour = next;
        if distinct.len() == before {
            return colour;
        }
    }
}

fn code_for(masks: &[u16], order: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            code = code << 1 | (masks[order[i]] >> order[j] & 1) as u64;
        }
    }
    code
}

/// Canonical code of a graph given as neighbour bit masks.
fn canonical_code(masks: &[u16]) -> u64 {
    let colour = refine(masks);
    let cells_count = colour.iter().max().map_or(0, |&c| c + 1);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); cells_count];
    for (v, &c) in colour.iter().enumerate() {
        cells[c].push(v);
    }
    let mut best = u64::MAX;
    let mut order = Vec::with_capacity(masks.len());
    permute_cells(masks, &mut cells, 0, &mut order, &mut best);
    best
}

fn permute_cells(masks: &[u16], cells: &mut [Vec<usize>], cell: usize, order: &mut Vec<usize>, best: &mut u64) {
    if cell == cells.len() {
        *best = (*best).min(code_for(masks, order));
        return;
    }
    let len = cells[cell].len();
    // Heap's algorithm over the current cell.
    let mut c = vec![0usize; len];
    let base = order.len();
    order.extend_from_slice(&cells[cell]);
    permute_cells(masks, cells, cell + 1, order, best);
    order.truncate(base);
    let mut i = 0;
    while i < len {
        if c[i] < i {
            if i % 2 == 0 {
                cells[cell].swap(0, i);
            } else {
                cells[cell].swap(c[i], i);
            }
            order.extend_from_slice(&cells[cell]);
            permute_cells(masks, cells, cell + 1, order, best);
            order.truncate(base);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// One representative of every isomorphism class of graphs on exactly `n`
/// vertices.
pub fn graphs_on(n: usize) -> Vec<Graph> {
    assert!(n <= MAX_ENUM_VERTICES, "enumeration limited to {MAX_ENUM_VERTICES} vertices");
    let mut level = vec![Vec::new()];
    for size in 1..=n {
        level = grow(&level, size);
    }
    level.iter().map(|m| graph_of(m)).collect()
}

/// Every isomorphism class on `1..=max_n` vertices, smallest first.
pub fn graphs_up_to(max_n: usize) -> Vec<Graph> {
    assert!(max_n <= MAX_ENUM_VERTICES, "enumeration limited to {MAX_ENUM_VERTICES} vertices");
    let mut out = Vec::new();
    let mut level = vec![Vec::new()];
    for size in 1..=max_n {
        level = grow(&level, size);
        out.extend(level.iter().map(|m| graph_of(m)));
    }
    out
}

/// Classes on `n` vertices from the classes on `n - 1`.
fn grow(level: &[Masks], n: usize) -> Vec<Masks> {
    let new = n - 1;
    let mut seen = HashSet::new();
    let mut next = Vec::new();
    for base in level {
        for hood in 0u16..(1 << new) {
            let mut masks = base.clone();
            for (u, m) in masks.iter_mut().enumerate() {
                if hood >> u & 1 == 1 {
                    *m |= 1 << new;
                }
            }
            masks.push(hood);
            if seen.insert(canonical_code(&masks)) {
                next.push(masks);
            }
        }
    }
    next
}

pub fn is_connected(g: &Graph) -> bool {
    WeightedGraph::from_graph(g).is_connected()
}

/// Connected isomorphism classes on `1..=max_n` vertices.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    graphs_up_to(max_n).into_iter().filter(is_connected).collect()
}

/// Whether two graphs are isomorphic, by canonical code.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_code(&masks_of(a)) == canonical_code(&masks_of(b))
}
