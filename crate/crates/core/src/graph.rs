//! Directed-graph utilities for exhaustive cycle detection: a compact
//! adjacency representation, iterative strongly-connected components, and
//! enumeration of *all* elementary cycles (start-anchored search with
//! blocked sets, confined to one SCC at a time).
//!
//! Everything here is iterative — lattice graphs reach millions of nodes
//! with long chains, which would overflow the stack under naive recursion.

/// Compressed sparse-row digraph over nodes `0..n`.
pub(crate) struct DiGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl DiGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(u, _) in edges {
            counts[u + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut targets = vec![0usize; edges.len()];
        for &(u, v) in edges {
            targets[cursor[u]] = v;
            cursor[u] += 1;
        }
        DiGraph { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Tarjan's algorithm, iterative.  Returns one component id per node;
/// ids are arbitrary but consistent.
pub(crate) fn strongly_connected_components(g: &DiGraph) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut scc_id = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut next_scc = 0usize;
    // Explicit call stack of (node, next-neighbor-position).
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));

        while let Some(&mut (v, ref mut ei)) = frames.last_mut() {
            if let Some(&w) = g.neighbors(v).get(*ei) {
                *ei += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        scc_id[w] = next_scc;
                        if w == v {
                            break;
                        }
                    }
                    next_scc += 1;
                }
            }
        }
    }
    scc_id
}

/// Raised when elementary-cycle enumeration exceeds its cap.
#[derive(Debug)]
pub(crate) struct TooManyCycles {
    pub cap: usize,
}

/// Enumerate every elementary (node-simple) cycle of `g`, self-loops
/// included, each reported exactly once as its node sequence in edge order
/// starting from its smallest node.  Output is sorted by (smallest node,
/// length, sequence), independent of edge insertion order.
///
/// The search anchors at each node `s` in increasing order and explores only
/// nodes `≥ s` inside `s`'s strongly-connected component, with the classic
/// blocked-set machinery to avoid revisiting dead ends; each cycle is found
/// precisely at its minimal node.
pub(crate) fn elementary_cycles(
    g: &DiGraph,
    cap: usize,
) -> Result<Vec<Vec<usize>>, TooManyCycles> {
    let n = g.n();
    let scc_id = strongly_connected_components(g);
    let mut scc_size = vec![0usize; n];
    for v in 0..n {
        scc_size[scc_id[v]] += 1;
    }

    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut blocked = vec![false; n];
    let mut b_sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut touched: Vec<usize> = Vec::new();

    for s in 0..n {
        if scc_size[scc_id[s]] == 1 {
            // A singleton component carries at most a self-loop.
            if g.neighbors(s).contains(&s) {
                cycles.push(vec![s]);
                if cycles.len() > cap {
                    return Err(TooManyCycles { cap });
                }
            }
            continue;
        }

        // Anchored search inside the component of s, nodes ≥ s only.
        let comp = scc_id[s];
        let admissible = |w: usize| w >= s && scc_id[w] == comp;
        let mut path: Vec<usize> = vec![s];
        // Frame: (node, next neighbor position, cycle found below).
        let mut frames: Vec<(usize, usize, bool)> = vec![(s, 0, false)];
        blocked[s] = true;
        touched.push(s);

        while let Some(&mut (v, ref mut ei, ref mut found)) = frames.last_mut() {
            if let Some(&w) = g.neighbors(v).get(*ei) {
                *ei += 1;
                if !admissible(w) {
                    continue;
                }
                if w == s {
                    cycles.push(path.clone());
                    if cycles.len() > cap {
                        return Err(TooManyCycles { cap });
                    }
                    *found = true;
                } else if !blocked[w] {
                    blocked[w] = true;
                    touched.push(w);
                    path.push(w);
                    frames.push((w, 0, false));
                }
            } else {
                let (v, _, found) = frames.pop().expect("frame");
                path.pop();
                if found {
                    // Unblock v and everything transitively waiting on it.
                    let mut to_unblock = vec![v];
                    while let Some(u) = to_unblock.pop() {
                        if blocked[u] {
                            blocked[u] = false;
                            to_unblock.append(&mut b_sets[u]);
                        }
                    }
                    if let Some(last) = frames.last_mut() {
                        last.2 = true;
                    }
                } else {
                    // Park v on the block-lists of its admissible successors.
                    for &w in g.neighbors(v) {
                        if admissible(w) && !b_sets[w].contains(&v) {
                            b_sets[w].push(v);
                            touched.push(w);
                        }
                    }
                }
            }
        }

        for &v in &touched {
            blocked[v] = false;
            b_sets[v].clear();
        }
        touched.clear();
    }

    cycles.sort();
    Ok(cycles)
}
