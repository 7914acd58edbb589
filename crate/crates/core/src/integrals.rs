//! Exact integral representations of auction quantities.
//!
//! Writing `A(t)` for the set of items with cost at most `t`, the nominal
//! cost is the integral of `rank(A) - rank(A(t))`, the VCG overpayment is
//! the integral of the bridge count of `A(t)`, the per-item threshold is
//! the integral of `rank(A(t) + a) - rank(A(t) - a)`, and the sum of
//! squared selected costs is the integral of the rank deficit against
//! `2t dt`. All integrands are step functions of `t`, so each integral is
//! a short exact sum over breakpoints, evaluated in ascending order.

use serde::Serialize;

use crate::bridge_tracker::BridgeTracker;
use crate::matroid::{Matroid, MatroidKind, UnionFind};
use crate::{Error, Result, Scalar};

/// Piecewise-constant profile of `rank(A(t))` and `beta(A(t))`.
///
/// `rank_at[i]` and `bridges_at[i]` hold on the interval starting at
/// `breakpoints[i-1]` (at 0 for `i = 0`) and ending at `breakpoints[i]`
/// (at infinity for the last entry). Breakpoints that change neither
/// value are dropped, so a profile over loops only is empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankProfile<S> {
    breakpoints: Vec<S>,
    rank_at: Vec<usize>,
    bridges_at: Vec<usize>,
    rank_ground: usize,
}

/// Per-kind incremental state feeding the fast profile builder.
enum ProfileState<'a> {
    Uniform {
        count: usize,
        k: usize,
    },
    Graphic {
        uf: UnionFind,
        tracker: BridgeTracker,
        rank: usize,
        m: &'a Matroid,
    },
    /// Definitional fallback: fresh rank calls per breakpoint.
    Oracle {
        prefix: Vec<usize>,
        m: &'a Matroid,
    },
}

impl<'a> ProfileState<'a> {
    fn slow(m: &'a Matroid) -> Self {
        ProfileState::Oracle {
            prefix: Vec::new(),
            m,
        }
    }

    fn fast(m: &'a Matroid) -> Self {
        match m.kind() {
            MatroidKind::Uniform => ProfileState::Uniform {
                count: 0,
                k: m.uniform_k().expect("uniform matroid has k"),
            },
            MatroidKind::Graphic => {
                let g = m.graph().expect("graphic matroid has graph");
                ProfileState::Graphic {
                    uf: UnionFind::new(g.vertex_count),
                    tracker: BridgeTracker::new(g.vertex_count),
                    rank: 0,
                    m,
                }
            }
            MatroidKind::Custom => ProfileState::slow(m),
        }
    }

    fn add(&mut self, e: usize) {
        match self {
            ProfileState::Uniform { count, .. } => *count += 1,
            ProfileState::Graphic { uf, tracker, rank, m } => {
                let (u, v) = m.graph().expect("graphic").edges[e];
                if uf.union(u, v) {
                    *rank += 1;
                }
                tracker.insert_edge(u, v);
            }
            ProfileState::Oracle { prefix, .. } => {
                let pos = prefix.binary_search(&e).unwrap_err();
                prefix.insert(pos, e);
            }
        }
    }

    fn rank_and_bridges(&self) -> (usize, usize) {
        match self {
            ProfileState::Uniform { count, k } => {
                let rank = (*count).min(*k);
                let beta = if *count <= *k { *count } else { 0 };
                (rank, beta)
            }
            ProfileState::Graphic { tracker, rank, .. } => (*rank, tracker.bridge_count()),
            ProfileState::Oracle { prefix, m } => {
                let rank = m.rank_of_sorted(prefix);
                let beta = m.bridges(prefix).expect("prefix is in range").len();
                (rank, beta)
            }
        }
    }
}

fn build_profile<S: Scalar>(m: &Matroid, costs: &[S], mut state: ProfileState) -> Result<RankProfile<S>> {
    if costs.len() != m.ground_size() {
        return Err(Error::InvalidParameter(format!(
            "cost vector has length {}, ground set has {}",
            costs.len(),
            m.ground_size()
        )));
    }
    for &c in costs {
        if !c.is_finite() || c < S::zero() {
            return Err(Error::InvalidParameter(
                "costs must be finite and non-negative".into(),
            ));
        }
    }
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_unstable_by(|&a, &b| costs[a].partial_cmp(&costs[b]).expect("finite").then(a.cmp(&b)));

    let mut breakpoints = Vec::new();
    let mut rank_at = vec![0usize];
    let mut bridges_at = vec![0usize];
    let mut i = 0;
    while i < order.len() {
        let t = costs[order[i]];
        // absorb the whole group of equal costs before sampling the state
        let mut j = i;
        while j < order.len() && costs[order[j]] == t {
            state.add(order[j]);
            j += 1;
        }
        let (rank, beta) = state.rank_and_bridges();
        if rank != *rank_at.last().unwrap() || beta != *bridges_at.last().unwrap() {
            breakpoints.push(t);
            rank_at.push(rank);
            bridges_at.push(beta);
        }
        i = j;
    }
    debug_assert_eq!(*rank_at.last().unwrap(), m.rank_ground());
    Ok(RankProfile {
        breakpoints,
        rank_at,
        bridges_at,
        rank_ground: m.rank_ground(),
    })
}

impl<S: Scalar> RankProfile<S> {
    /// Definitional construction: rank and bridge count recomputed from
    /// scratch at every breakpoint via raw rank calls.
    pub fn build(m: &Matroid, costs: &[S]) -> Result<Self> {
        build_profile(m, costs, ProfileState::slow(m))
    }

    /// Incremental construction: O(1) updates for uniform matroids, a
    /// union-find plus bridge tracker for graphic ones. Custom matroids
    /// fall back to [`RankProfile::build`]. Produces bit-identical
    /// profiles to the definitional path.
    pub fn build_fast(m: &Matroid, costs: &[S]) -> Result<Self> {
        build_profile(m, costs, ProfileState::fast(m))
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn rank_at(&self) -> &[usize] {
        &self.rank_at
    }

    pub fn bridges_at(&self) -> &[usize] {
        &self.bridges_at
    }

    pub fn rank_ground(&self) -> usize {
        self.rank_ground
    }

    /// True when the profile ends bridge-free, i.e. the matroid itself
    /// has no bridges.
    pub fn ends_bridgeless(&self) -> bool {
        *self.bridges_at.last().unwrap() == 0
    }

    fn fold_intervals<F: FnMut(S, S, usize, usize)>(&self, mut f: F) {
        let mut lo = S::zero();
        for (i, &hi) in self.breakpoints.iter().enumerate() {
            f(lo, hi, self.rank_at[i], self.bridges_at[i]);
            lo = hi;
        }
    }

    /// Nominal cost as the integral of the rank deficit: equals the
    /// greedy minimum for any cost vector.
    pub fn nominal_cost_integral(&self) -> S {
        let mut total = S::zero();
        self.fold_intervals(|lo, hi, rank, _| {
            let deficit = S::from_usize(self.rank_ground - rank).expect("small integer");
            total = total + deficit * (hi - lo);
        });
        total
    }

    /// Integral of the bridge count; diverges when the ground set keeps
    /// a bridge past the last breakpoint.
    pub fn bridge_integral(&self) -> Result<S> {
        if !self.ends_bridgeless() {
            return Err(Error::DivergentIntegral);
        }
        let mut total = S::zero();
        self.fold_intervals(|lo, hi, _, beta| {
            let b = S::from_usize(beta).expect("small integer");
            total = total + b * (hi - lo);
        });
        Ok(total)
    }

    /// Total VCG cost as nominal plus the bridge integral.
    pub fn vcg_total_integral(&self, nominal: S) -> Result<S> {
        Ok(nominal + self.bridge_integral()?)
    }

    /// Sum of squared costs over the greedy minimum basis, as the rank
    /// deficit integrated against `2t dt`.
    pub fn sum_of_squares_integral(&self) -> S {
        let mut total = S::zero();
        self.fold_intervals(|lo, hi, rank, _| {
            let deficit = S::from_usize(self.rank_ground - rank).expect("small integer");
            total = total + deficit * (hi * hi - lo * lo);
        });
        total
    }

    /// CSV rows `t_lo,t_hi,rank,bridges`; the final interval is open
    /// with `t_hi = inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_lo,t_hi,rank,bridges\n");
        let mut lo = "0".to_string();
        for (i, &hi) in self.breakpoints.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", lo, hi, self.rank_at[i], self.bridges_at[i]));
            lo = format!("{hi}");
        }
        out.push_str(&format!(
            "{},inf,{},{}\n",
            lo,
            self.rank_at.last().unwrap(),
            self.bridges_at.last().unwrap()
        ));
        out
    }
}

/// VCG threshold of item `a` as the integral of
/// `rank(A(t) + a) - rank(A(t) - a)`: the integrand is 1 until the other
/// items of cost at most `t` span `a` and 0 afterwards, so the integral
/// is exactly the spanning time. Diverges when `a` is never spanned,
/// i.e. when it is a bridge of the ground set.
pub fn threshold_integral<S: Scalar>(m: &Matroid, costs: &[S], a: usize) -> Result<S> {
    if a >= m.ground_size() {
        return Err(Error::ElementOutOfRange {
            index: a,
            ground_size: m.ground_size(),
        });
    }
    if costs.len() != m.ground_size() {
        return Err(Error::InvalidParameter(format!(
            "cost vector has length {}, ground set has {}",
            costs.len(),
            m.ground_size()
        )));
    }
    let mut others: Vec<usize> = (0..m.ground_size()).filter(|&b| b != a).collect();
    others.sort_unstable_by(|&x, &y| costs[x].partial_cmp(&costs[y]).expect("finite").then(x.cmp(&y)));

    let spans = |prefix: &[usize]| -> bool {
        let mut with_a: Vec<usize> = prefix.to_vec();
        let pos = with_a.binary_search(&a).unwrap_err();
        with_a.insert(pos, a);
        m.rank_of_sorted(&with_a) == m.rank_of_sorted(prefix)
    };

    let mut prefix: Vec<usize> = Vec::with_capacity(others.len());
    if spans(&prefix) {
        return Ok(S::zero()); // a is a loop: integrand vanishes everywhere
    }
    for &b in &others {
        let pos = prefix.binary_search(&b).unwrap_err();
        prefix.insert(pos, b);
        if spans(&prefix) {
            return Ok(costs[b]);
        }
    }
    Err(Error::DivergentIntegral)
}
