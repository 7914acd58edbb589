//! Incremental bridge counting for graphic matroids.
//!
//! [`BridgeTracker`] maintains the number of bridges of a growing graph
//! under edge insertions in near-linear total time: a union-find over
//! connected components, a union-find over 2-edge-connected components,
//! and a rooted forest of 2-edge-connected components whose tree edges
//! are exactly the current bridges. Inserting an edge either links two
//! components (one new bridge), closes a cycle through distinct
//! 2-edge-connected components (every tree edge on the cycle stops being
//! a bridge and the path collapses), or lands inside one component
//! (no change).
//!
//! This is the fast path behind the rank/bridge profiles and the MST
//! scaling sweep; [`count_bridges_dfs`] is the independent one-shot
//! oracle it is validated against.

use crate::matroid::UnionFind;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct BridgeTracker {
    cc: UnionFind,
    tecc: UnionFind,
    /// Bridge-forest parent link, meaningful only at `tecc`
    /// representatives. Stores an arbitrary vertex of the parent
    /// component; readers normalize through `tecc.find`.
    parent: Vec<usize>,
    mark: Vec<u64>,
    stamp: u64,
    bridges: usize,
}

impl BridgeTracker {
    pub fn new(vertex_count: usize) -> Self {
        BridgeTracker {
            cc: UnionFind::new(vertex_count),
            tecc: UnionFind::new(vertex_count),
            parent: vec![NONE; vertex_count],
            mark: vec![0; vertex_count],
            stamp: 0,
            bridges: 0,
        }
    }

    /// Current number of bridges among the inserted edges.
    pub fn bridge_count(&self) -> usize {
        self.bridges
    }

    fn parent_rep(&mut self, rep: usize) -> Option<usize> {
        let p = self.parent[rep];
        if p == NONE {
            None
        } else {
            Some(self.tecc.find(p))
        }
    }

    /// Makes `rep` the root of its bridge tree by flipping the parent
    /// links on its root path.
    fn reroot(&mut self, rep: usize) {
        let mut chain = vec![rep];
        let mut cur = rep;
        while let Some(p) = self.parent_rep(cur) {
            chain.push(p);
            cur = p;
        }
        self.parent[chain[0]] = NONE;
        for i in 1..chain.len() {
            self.parent[chain[i]] = chain[i - 1];
        }
    }

    pub fn insert_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return; // self-loop: never a bridge, never merges anything
        }
        let ru = self.tecc.find(u);
        let rv = self.tecc.find(v);
        if ru == rv {
            return;
        }
        if !self.cc.same(u, v) {
            // New bridge linking two components; re-root the smaller one.
            let (small_rep, big_vertex) = if self.cc.component_size(u) <= self.cc.component_size(v)
            {
                (ru, v)
            } else {
                (rv, u)
            };
            self.reroot(small_rep);
            self.parent[small_rep] = big_vertex;
            self.bridges += 1;
            self.cc.union(u, v);
            return;
        }

        // Same component: the new edge closes a cycle. Walk up from both
        // endpoints alternately, marking visited nodes; the first node
        // seen from both sides is the meeting point. Everything strictly
        // below it on either side merges into one 2-edge-connected
        // component and the corresponding tree edges stop being bridges.
        self.stamp += 1;
        let stamp = self.stamp;
        self.mark[ru] = stamp;
        self.mark[rv] = stamp;
        let mut chain_u = vec![ru];
        let mut chain_v = vec![rv];
        let mut cur_u = Some(ru);
        let mut cur_v = Some(rv);
        let meeting;
        'walk: loop {
            for (cur, chain) in [(&mut cur_u, &mut chain_u), (&mut cur_v, &mut chain_v)] {
                if let Some(node) = *cur {
                    match self.parent_rep(node) {
                        Some(p) => {
                            if self.mark[p] == stamp {
                                meeting = p;
                                break 'walk;
                            }
                            self.mark[p] = stamp;
                            chain.push(p);
                            *cur = Some(p);
                        }
                        None => *cur = None, // reached a root; other side finishes
                    }
                }
            }
            assert!(
                cur_u.is_some() || cur_v.is_some(),
                "endpoints share a component, so the walks must meet"
            );
        }

        let below = |chain: &[usize]| -> usize {
            chain.iter().position(|&x| x == meeting).unwrap_or(chain.len())
        };
        let keep_u = below(&chain_u);
        let keep_v = below(&chain_v);
        let saved_parent = self.parent[meeting];

        let mut merged = 0usize;
        for &x in chain_u[..keep_u].iter().chain(chain_v[..keep_v].iter()) {
            if self.tecc.union(x, meeting) {
                merged += 1;
            }
        }
        debug_assert_eq!(merged, keep_u + keep_v);
        self.bridges -= merged;
        let new_rep = self.tecc.find(meeting);
        self.parent[new_rep] = saved_parent;
    }
}

/// One-shot bridge count of the subgraph on `vertex_count` vertices with
/// the given edges, by depth-first lowlink search. Parallel edges are
/// handled by skipping only the arrival edge, so a doubled edge is never
/// a bridge.
pub fn count_bridges_dfs(vertex_count: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    for (id, &(u, v)) in edges.iter().enumerate() {
        if u == v {
            continue;
        }
        adj[u].push((v, id));
        adj[v].push((u, id));
    }

    let mut disc = vec![usize::MAX; vertex_count];
    let mut low = vec![usize::MAX; vertex_count];
    let mut timer = 0usize;
    let mut bridges = 0usize;
    // Explicit stack: (vertex, arrival edge id, next adjacency index).
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();

    for start in 0..vertex_count {
        if disc[start] != usize::MAX {
            continue;
        }
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        stack.push((start, usize::MAX, 0));
        while let Some(&mut (v, via, ref mut idx)) = stack.last_mut() {
            if *idx < adj[v].len() {
                let (w, id) = adj[v][*idx];
                *idx += 1;
                if id == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, id, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridges += 1;
                    }
                }
            }
        }
    }
    bridges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{GraphicMatroidSpec, Matroid};
    use rand::{Rng, SeedableRng};

    fn definitional_bridges(spec: &GraphicMatroidSpec, subset: &[usize]) -> usize {
        let m = Matroid::graphic(spec.clone()).unwrap();
        m.bridges(subset).unwrap().len()
    }

    #[test]
    fn triangle_walkthrough() {
        let mut t = BridgeTracker::new(3);
        t.insert_edge(0, 1);
        assert_eq!(t.bridge_count(), 1);
        t.insert_edge(0, 2);
        assert_eq!(t.bridge_count(), 2);
        t.insert_edge(1, 2);
        assert_eq!(t.bridge_count(), 0);
    }

    #[test]
    fn self_loops_and_parallels() {
        let mut t = BridgeTracker::new(2);
        t.insert_edge(0, 0);
        assert_eq!(t.bridge_count(), 0);
        t.insert_edge(0, 1);
        assert_eq!(t.bridge_count(), 1);
        t.insert_edge(0, 1);
        assert_eq!(t.bridge_count(), 0);
        t.insert_edge(0, 1);
        assert_eq!(t.bridge_count(), 0);
    }

    #[test]
    fn dfs_oracle_basics() {
        // path: every edge a bridge
        assert_eq!(count_bridges_dfs(4, &[(0, 1), (1, 2), (2, 3)]), 3);
        // triangle: none
        assert_eq!(count_bridges_dfs(3, &[(0, 1), (0, 2), (1, 2)]), 0);
        // doubled edge: none
        assert_eq!(count_bridges_dfs(2, &[(0, 1), (0, 1)]), 0);
        // two triangles joined by one edge: exactly that edge
        assert_eq!(
            count_bridges_dfs(
                6,
                &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]
            ),
            1
        );
    }

    #[test]
    fn tracker_matches_oracles_on_random_insertions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240915);
        for _case in 0..60 {
            let n = rng.random_range(2..9usize);
            let m = rng.random_range(1..16usize);
            let edges: Vec<(usize, usize)> = (0..m)
                .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
                .collect();
            let spec = GraphicMatroidSpec {
                vertex_count: n,
                edges: edges.clone(),
            };
            let mut tracker = BridgeTracker::new(n);
            for i in 0..m {
                tracker.insert_edge(edges[i].0, edges[i].1);
                let prefix: Vec<usize> = (0..=i).collect();
                let expect = definitional_bridges(&spec, &prefix);
                assert_eq!(
                    tracker.bridge_count(),
                    expect,
                    "prefix {:?} of {:?}",
                    prefix,
                    edges
                );
                let dfs = count_bridges_dfs(n, &edges[..=i]);
                assert_eq!(dfs, expect, "dfs disagrees on {:?}", &edges[..=i]);
            }
        }
    }

    #[test]
    fn tracker_handles_component_relinking() {
        // Build several components, then stitch them so re-rooting runs.
        let mut t = BridgeTracker::new(9);
        for base in [0, 3, 6] {
            t.insert_edge(base, base + 1);
            t.insert_edge(base + 1, base + 2);
        }
        assert_eq!(t.bridge_count(), 6);
        t.insert_edge(2, 3);
        t.insert_edge(5, 6);
        assert_eq!(t.bridge_count(), 8);
        t.insert_edge(0, 8); // one giant cycle: nothing left
        assert_eq!(t.bridge_count(), 0);
    }
}
