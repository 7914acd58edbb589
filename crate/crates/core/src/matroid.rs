//! Rank-oracle matroids with uniform and graphic implementations, bridge
//! detection, and the greedy minimum-basis algorithm.
//!
//! A matroid is described by its ground-set size and a rank function on
//! element subsets obeying the usual axioms (monotone, submodular, unit
//! increase). Uniform and graphic matroids get dedicated fast paths; any
//! other matroid can be supplied as a custom rank oracle.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Union-find over vertices with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the two classes; returns false when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn component_size(&mut self, a: usize) -> usize {
        let r = self.find(a);
        self.size[r]
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Uniform matroid `U_{n,k}`: every k-subset of n elements is a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformMatroidSpec {
    pub n: usize,
    pub k: usize,
}

/// Graphic matroid of a multigraph: rank of an edge set is the vertex
/// count minus the number of components it leaves. Parallel edges and
/// self-loops are allowed; a self-loop has rank zero and never enters a
/// basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphicMatroidSpec {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphicMatroidSpec {
    /// Parses the edge-list text format: one `u v` pair per line,
    /// 0-based vertices. Blank lines and `#` comments are skipped; the
    /// vertex count is one past the largest endpoint.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_v = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or_else(|| {
                    Error::InvalidParameter(format!("edge list line {}: expected `u v`", lineno + 1))
                })?
                .parse::<usize>()
                .map_err(|_| {
                    Error::InvalidParameter(format!(
                        "edge list line {}: vertices must be non-negative integers",
                        lineno + 1
                    ))
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::InvalidParameter(format!(
                    "edge list line {}: trailing tokens",
                    lineno + 1
                )));
            }
            max_v = max_v.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(Error::InvalidParameter("edge list has no edges".into()));
        }
        Ok(GraphicMatroidSpec {
            vertex_count: max_v + 1,
            edges,
        })
    }

    /// Complete graph on `n` vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "complete graph needs at least 2 vertices".into(),
            ));
        }
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Ok(GraphicMatroidSpec {
            vertex_count: n,
            edges,
        })
    }

    /// Cycle graph on `n` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(
                "cycle graph needs at least 3 vertices".into(),
            ));
        }
        let edges = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Ok(GraphicMatroidSpec {
            vertex_count: n,
            edges,
        })
    }

    /// Path tree on `n` vertices; every edge is a bridge.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "path graph needs at least 2 vertices".into(),
            ));
        }
        let edges = (0..n - 1).map(|u| (u, u + 1)).collect();
        Ok(GraphicMatroidSpec {
            vertex_count: n,
            edges,
        })
    }
}

/// Tag identifying the concrete rank implementation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatroidKind {
    Uniform,
    Graphic,
    Custom,
}

/// User-supplied rank oracle. Receives a strictly increasing slice of
/// element indices and must return a rank obeying the matroid axioms.
pub type RankFn = Arc<dyn Fn(&[usize]) -> usize + Send + Sync>;

#[derive(Clone)]
enum Inner {
    Uniform { k: usize },
    Graphic(GraphicMatroidSpec),
    Custom { rank_fn: RankFn },
}

/// A matroid on ground set `{0, .., ground_size-1}` with a pure,
/// re-entrant rank oracle. Values are immutable after construction and
/// safe to share across threads.
#[derive(Clone)]
pub struct Matroid {
    ground_size: usize,
    rank_ground: usize,
    inner: Inner,
}

impl std::fmt::Debug for Matroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Matroid")
            .field("kind", &self.kind())
            .field("ground_size", &self.ground_size)
            .field("rank_ground", &self.rank_ground)
            .finish()
    }
}

impl Matroid {
    pub fn uniform(spec: UniformMatroidSpec) -> Result<Self> {
        if spec.k < 1 || spec.k + 1 > spec.n {
            return Err(Error::InvalidParameter(format!(
                "uniform matroid requires 1 <= k <= n-1, got n={}, k={}",
                spec.n, spec.k
            )));
        }
        Ok(Matroid {
            ground_size: spec.n,
            rank_ground: spec.k,
            inner: Inner::Uniform { k: spec.k },
        })
    }

    pub fn graphic(spec: GraphicMatroidSpec) -> Result<Self> {
        if spec.vertex_count == 0 {
            return Err(Error::InvalidParameter(
                "graphic matroid requires at least one vertex".into(),
            ));
        }
        for &(u, v) in &spec.edges {
            if u >= spec.vertex_count || v >= spec.vertex_count {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) has an endpoint outside 0..{}",
                    spec.vertex_count
                )));
            }
        }
        let mut uf = UnionFind::new(spec.vertex_count);
        let mut rank = 0;
        for &(u, v) in &spec.edges {
            if uf.union(u, v) {
                rank += 1;
            }
        }
        Ok(Matroid {
            ground_size: spec.edges.len(),
            rank_ground: rank,
            inner: Inner::Graphic(spec),
        })
    }

    /// Wraps a user-supplied rank oracle without validating the axioms.
    pub fn custom(ground_size: usize, rank_fn: RankFn) -> Self {
        let full: Vec<usize> = (0..ground_size).collect();
        let rank_ground = rank_fn(&full);
        Matroid {
            ground_size,
            rank_ground,
            inner: Inner::Custom { rank_fn },
        }
    }

    /// Wraps a rank oracle and spot-checks the matroid axioms first:
    /// empty set, singletons, and `trials` random subset pairs. Intended
    /// as a debug aid; the unchecked constructor is the default path.
    pub fn custom_checked(ground_size: usize, rank_fn: RankFn, trials: usize, seed: u64) -> Result<Self> {
        use rand::Rng;
        use rand::SeedableRng;

        let m = Matroid::custom(ground_size, rank_fn);
        if m.rank_of_sorted(&[]) != 0 {
            return Err(Error::InvalidParameter("rank of the empty set must be 0".into()));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let random_subset = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<usize> {
            (0..ground_size).filter(|_| rng.random::<bool>()).collect()
        };
        for _ in 0..trials {
            let s = random_subset(&mut rng);
            let t = random_subset(&mut rng);
            let mut st_union: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
            st_union.sort_unstable();
            st_union.dedup();
            let st_inter: Vec<usize> = s.iter().copied().filter(|x| t.contains(x)).collect();
            let (rs, rt) = (m.rank_of_sorted(&s), m.rank_of_sorted(&t));
            if rs > s.len() {
                return Err(Error::InvalidParameter("rank exceeds set size".into()));
            }
            if m.rank_of_sorted(&st_union) + m.rank_of_sorted(&st_inter) > rs + rt {
                return Err(Error::InvalidParameter("rank is not submodular".into()));
            }
            if m.rank_of_sorted(&st_union) < rs.max(rt) {
                return Err(Error::InvalidParameter("rank is not monotone".into()));
            }
            for a in 0..ground_size {
                if s.contains(&a) {
                    continue;
                }
                let mut sa = s.clone();
                sa.push(a);
                sa.sort_unstable();
                let r = m.rank_of_sorted(&sa);
                if r > rs + 1 || r < rs {
                    return Err(Error::InvalidParameter(
                        "adding one element must change rank by 0 or +1".into(),
                    ));
                }
            }
        }
        Ok(m)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    /// Rank of the full ground set, cached at construction.
    pub fn rank_ground(&self) -> usize {
        self.rank_ground
    }

    pub fn kind(&self) -> MatroidKind {
        match self.inner {
            Inner::Uniform { .. } => MatroidKind::Uniform,
            Inner::Graphic(_) => MatroidKind::Graphic,
            Inner::Custom { .. } => MatroidKind::Custom,
        }
    }

    pub fn uniform_k(&self) -> Option<usize> {
        match self.inner {
            Inner::Uniform { k } => Some(k),
            _ => None,
        }
    }

    pub fn graph(&self) -> Option<&GraphicMatroidSpec> {
        match &self.inner {
            Inner::Graphic(g) => Some(g),
            _ => None,
        }
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        for &a in subset {
            if a >= self.ground_size {
                return Err(Error::ElementOutOfRange {
                    index: a,
                    ground_size: self.ground_size,
                });
            }
        }
        Ok(())
    }

    /// Rank of a subset. The input is treated as a set: duplicates are
    /// ignored; order does not matter. Graphic matroids run a fresh
    /// union-find pass over the subset edges.
    pub fn rank(&self, subset: &[usize]) -> Result<usize> {
        self.check_subset(subset)?;
        let mut sorted: Vec<usize> = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(self.rank_of_sorted(&sorted))
    }

    /// Rank of a strictly increasing, in-range slice (no validation).
    pub(crate) fn rank_of_sorted(&self, sorted: &[usize]) -> usize {
        match &self.inner {
            Inner::Uniform { k } => sorted.len().min(*k),
            Inner::Graphic(g) => {
                let mut uf = UnionFind::new(g.vertex_count);
                let mut rank = 0;
                for &e in sorted {
                    let (u, v) = g.edges[e];
                    if uf.union(u, v) {
                        rank += 1;
                    }
                }
                rank
            }
            Inner::Custom { rank_fn } => rank_fn(sorted),
        }
    }

    /// Exactly the elements `a` of `subset` with
    /// `rank(subset \ {a}) < rank(subset)`.
    pub fn bridges(&self, subset: &[usize]) -> Result<Vec<usize>> {
        self.check_subset(subset)?;
        let mut sorted: Vec<usize> = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let full_rank = self.rank_of_sorted(&sorted);
        let mut out = Vec::new();
        let mut without = Vec::with_capacity(sorted.len().saturating_sub(1));
        for (i, &a) in sorted.iter().enumerate() {
            without.clear();
            without.extend_from_slice(&sorted[..i]);
            without.extend_from_slice(&sorted[i + 1..]);
            if self.rank_of_sorted(&without) < full_rank {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Bridges of the ground set; these force infinite VCG payments.
    pub fn ground_bridges(&self) -> Vec<usize> {
        let full: Vec<usize> = (0..self.ground_size).collect();
        self.bridges(&full).expect("full ground set is in range")
    }

    pub fn is_bridgeless(&self) -> bool {
        self.ground_bridges().is_empty()
    }

    /// True when the sorted slice is independent (`rank == size`).
    pub fn is_independent(&self, subset: &[usize]) -> Result<bool> {
        let mut sorted: Vec<usize> = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != subset.len() {
            return Err(Error::InvalidParameter(
                "independence query expects distinct elements".into(),
            ));
        }
        self.check_subset(&sorted)?;
        Ok(self.rank_of_sorted(&sorted) == sorted.len())
    }
}

/// Incremental rank state used by the greedy pass; one variant per kind.
pub(crate) enum RankBuilder<'a> {
    Uniform { count: usize, k: usize },
    Graphic { uf: UnionFind, g: &'a GraphicMatroidSpec },
    Custom { current: Vec<usize>, rank: usize, rank_fn: &'a RankFn },
}

impl<'a> RankBuilder<'a> {
    pub(crate) fn new(m: &'a Matroid) -> Self {
        match &m.inner {
            Inner::Uniform { k } => RankBuilder::Uniform { count: 0, k: *k },
            Inner::Graphic(g) => RankBuilder::Graphic {
                uf: UnionFind::new(g.vertex_count),
                g,
            },
            Inner::Custom { rank_fn } => RankBuilder::Custom {
                current: Vec::new(),
                rank: 0,
                rank_fn,
            },
        }
    }

    /// Adds `e` if it increases the rank; reports whether it was kept.
    pub(crate) fn try_add(&mut self, e: usize) -> bool {
        match self {
            RankBuilder::Uniform { count, k } => {
                if *count < *k {
                    *count += 1;
                    true
                } else {
                    false
                }
            }
            RankBuilder::Graphic { uf, g } => {
                let (u, v) = g.edges[e];
                uf.union(u, v)
            }
            RankBuilder::Custom { current, rank, rank_fn } => {
                let pos = current.binary_search(&e).unwrap_err();
                current.insert(pos, e);
                let new_rank = rank_fn(current);
                if new_rank > *rank {
                    *rank = new_rank;
                    true
                } else {
                    current.remove(pos);
                    false
                }
            }
        }
    }
}

/// A minimum-cost basis together with its nominal cost.
#[derive(Clone, Debug, PartialEq)]
pub struct MinBasis<S> {
    /// Basis elements, ascending.
    pub elements: Vec<usize>,
    /// Sum of (effective) costs over the basis.
    pub cost: S,
}

/// Greedy minimum basis: take elements in increasing (cost, index) order,
/// keeping each one that increases the rank. Optimal for matroids; the
/// (cost, index) key makes tie-breaking deterministic.
pub fn greedy_min_basis<S: Scalar>(m: &Matroid, costs: &[S]) -> Result<MinBasis<S>> {
    greedy_min_basis_edited(m, costs, &[], &[])
}

/// Greedy minimum basis under edits: `excluded` elements are unavailable
/// (cost treated as infinite), `zeroed` elements cost 0. Fails with
/// `NoFiniteBasis` when the remaining elements do not span the matroid.
pub fn greedy_min_basis_edited<S: Scalar>(
    m: &Matroid,
    costs: &[S],
    excluded: &[usize],
    zeroed: &[usize],
) -> Result<MinBasis<S>> {
    if costs.len() != m.ground_size() {
        return Err(Error::InvalidParameter(format!(
            "cost vector has length {}, ground set has {}",
            costs.len(),
            m.ground_size()
        )));
    }
    m.check_subset(excluded)?;
    m.check_subset(zeroed)?;
    let n = m.ground_size();
    let mut is_excluded = vec![false; n];
    for &a in excluded {
        is_excluded[a] = true;
    }
    let mut is_zeroed = vec![false; n];
    for &a in zeroed {
        if is_excluded[a] {
            return Err(Error::InvalidParameter(format!(
                "element {a} is both excluded and zeroed"
            )));
        }
        is_zeroed[a] = true;
    }
    for &c in costs {
        if !(c >= S::zero()) || !c.is_finite() {
            return Err(Error::InvalidParameter(
                "costs must be finite and non-negative".into(),
            ));
        }
    }

    let effective = |a: usize| if is_zeroed[a] { S::zero() } else { costs[a] };
    let mut order: Vec<usize> = (0..n).filter(|&a| !is_excluded[a]).collect();
    order.sort_unstable_by(|&a, &b| {
        effective(a)
            .partial_cmp(&effective(b))
            .expect("finite costs compare")
            .then(a.cmp(&b))
    });

    let target = m.rank_ground();
    let mut builder = RankBuilder::new(m);
    let mut elements = Vec::with_capacity(target);
    let mut cost = S::zero();
    for &a in &order {
        if builder.try_add(a) {
            elements.push(a);
            cost = cost + effective(a);
            if elements.len() == target {
                break;
            }
        }
    }
    if elements.len() < target {
        return Err(Error::NoFiniteBasis);
    }
    elements.sort_unstable();
    Ok(MinBasis { elements, cost })
}

/// Enumerates every basis of the matroid (subsets with
/// `|S| = rank(S) = rank(ground)`), guarded to small ground sets.
pub fn enumerate_bases(m: &Matroid, limit: usize) -> Result<Vec<Vec<usize>>> {
    let n = m.ground_size();
    if n > limit {
        return Err(Error::EnumerationGuard { size: n, limit });
    }
    let target = m.rank_ground();
    let mut bases = Vec::new();
    let mut subset = Vec::with_capacity(target);
    for mask in 0u64..(1u64 << n) {
        if (mask.count_ones() as usize) != target {
            continue;
        }
        subset.clear();
        for a in 0..n {
            if mask & (1 << a) != 0 {
                subset.push(a);
            }
        }
        if m.rank_of_sorted(&subset) == target {
            bases.push(subset.clone());
        }
    }
    Ok(bases)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k3() -> Matroid {
        Matroid::graphic(GraphicMatroidSpec {
            vertex_count: 3,
            edges: vec![(0, 1), (0, 2), (1, 2)],
        })
        .unwrap()
    }

    #[test]
    fn uniform_rank_caps_at_k() {
        let m = Matroid::uniform(UniformMatroidSpec { n: 4, k: 2 }).unwrap();
        assert_eq!(m.rank(&[0, 1, 2]).unwrap(), 2);
        assert_eq!(m.rank(&[3]).unwrap(), 1);
        assert_eq!(m.rank(&[]).unwrap(), 0);
        assert_eq!(m.rank_ground(), 2);
    }

    #[test]
    fn graphic_rank_counts_components() {
        let m = k3();
        assert_eq!(m.rank(&[0, 1, 2]).unwrap(), 2);
        assert_eq!(m.rank(&[0]).unwrap(), 1);
        assert_eq!(m.rank(&[]).unwrap(), 0);
    }

    #[test]
    fn rank_rejects_out_of_range() {
        let m = k3();
        assert!(matches!(
            m.rank(&[5]),
            Err(Error::ElementOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn bridges_of_k3_subsets() {
        let m = k3();
        assert_eq!(m.bridges(&[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(m.bridges(&[0, 1, 2]).unwrap(), Vec::<usize>::new());
        let u = Matroid::uniform(UniformMatroidSpec { n: 3, k: 1 }).unwrap();
        assert_eq!(u.bridges(&[0]).unwrap(), vec![0]);
    }

    #[test]
    fn bridge_count_matches_rank_drop_sum() {
        // beta(S) must equal the number of single-element removals that
        // lower the rank, recomputed by raw rank calls.
        let m = k3();
        for mask in 0u32..8 {
            let subset: Vec<usize> = (0..3).filter(|a| mask & (1 << a) != 0).collect();
            let r = m.rank(&subset).unwrap();
            let direct: usize = subset
                .iter()
                .map(|&a| {
                    let without: Vec<usize> = subset.iter().copied().filter(|&b| b != a).collect();
                    (r - m.rank(&without).unwrap() == 1) as usize
                })
                .sum();
            assert_eq!(m.bridges(&subset).unwrap().len(), direct);
        }
    }

    #[test]
    fn bridgeless_classification() {
        assert!(Matroid::uniform(UniformMatroidSpec { n: 5, k: 3 })
            .unwrap()
            .is_bridgeless());
        assert!(k3().is_bridgeless());
        let tree = Matroid::graphic(GraphicMatroidSpec::path(4).unwrap()).unwrap();
        assert!(!tree.is_bridgeless());
        assert_eq!(tree.ground_bridges(), vec![0, 1, 2]);
    }

    #[test]
    fn greedy_on_k3_fixture() {
        let m = k3();
        let costs = [0.2f64, 0.5, 0.7];
        let b = greedy_min_basis(&m, &costs).unwrap();
        assert_eq!(b.elements, vec![0, 1]);
        assert!((b.cost - 0.7).abs() < 1e-12);

        // Independent oracle: brute force over all two-edge bases.
        let best = enumerate_bases(&m, 20)
            .unwrap()
            .into_iter()
            .map(|basis| basis.iter().map(|&a| costs[a]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!((b.cost - best).abs() < 1e-12);
    }

    #[test]
    fn greedy_on_uniform_picks_cheapest() {
        let m = Matroid::uniform(UniformMatroidSpec { n: 3, k: 1 }).unwrap();
        let b = greedy_min_basis(&m, &[0.9f64, 0.3, 0.6]).unwrap();
        assert_eq!(b.elements, vec![1]);
        assert!((b.cost - 0.3).abs() < 1e-12);

        let m = Matroid::uniform(UniformMatroidSpec { n: 6, k: 3 }).unwrap();
        let costs = [0.9f64, 0.1, 0.8, 0.2, 0.7, 0.3];
        let b = greedy_min_basis(&m, &costs).unwrap();
        assert_eq!(b.elements, vec![1, 3, 5]);
    }

    #[test]
    fn greedy_reports_no_finite_basis() {
        let tree = Matroid::graphic(GraphicMatroidSpec::path(3).unwrap()).unwrap();
        let err = greedy_min_basis_edited(&tree, &[0.1f64, 0.2], &[0], &[]).unwrap_err();
        assert!(matches!(err, Error::NoFiniteBasis));
    }

    #[test]
    fn greedy_respects_zeroed_elements() {
        let m = k3();
        let b = greedy_min_basis_edited(&m, &[0.2f64, 0.5, 0.7], &[], &[2]).unwrap();
        assert!(b.elements.contains(&2));
        assert!((b.cost - 0.2).abs() < 1e-12);
    }

    #[test]
    fn greedy_skips_loops() {
        let m = Matroid::graphic(GraphicMatroidSpec {
            vertex_count: 2,
            edges: vec![(0, 0), (0, 1)],
        })
        .unwrap();
        assert_eq!(m.rank_ground(), 1);
        let b = greedy_min_basis(&m, &[0.01f64, 0.9]).unwrap();
        assert_eq!(b.elements, vec![1]);
    }

    #[test]
    fn parallel_edges_are_distinct_elements() {
        let m = Matroid::graphic(GraphicMatroidSpec {
            vertex_count: 2,
            edges: vec![(0, 1), (0, 1)],
        })
        .unwrap();
        assert_eq!(m.rank(&[0, 1]).unwrap(), 1);
        assert!(m.is_bridgeless());
        let b = greedy_min_basis(&m, &[0.7f64, 0.3]).unwrap();
        assert_eq!(b.elements, vec![1]);
    }

    #[test]
    fn edge_list_parsing() {
        let spec = GraphicMatroidSpec::parse_edge_list("0 1\n1 2\n\n# comment\n0 2\n").unwrap();
        assert_eq!(spec.vertex_count, 3);
        assert_eq!(spec.edges.len(), 3);
        assert!(GraphicMatroidSpec::parse_edge_list("0 x\n").is_err());
        assert!(GraphicMatroidSpec::parse_edge_list("").is_err());
    }

    #[test]
    fn custom_checked_accepts_uniform_and_rejects_garbage() {
        let ok = Matroid::custom_checked(5, Arc::new(|s: &[usize]| s.len().min(2)), 50, 7);
        assert!(ok.is_ok());
        let bad = Matroid::custom_checked(5, Arc::new(|s: &[usize]| s.len() * 2), 50, 7);
        assert!(bad.is_err());
    }

    #[test]
    fn enumerate_bases_guard() {
        let m = Matroid::uniform(UniformMatroidSpec { n: 25, k: 2 }).unwrap();
        assert!(matches!(
            enumerate_bases(&m, 20),
            Err(Error::EnumerationGuard { size: 25, limit: 20 })
        ));
    }
}
