//! Monte Carlo estimators and statistical suites.
//!
//! Replication `r` of a run draws its costs from stream `r` of the
//! master-seeded generator, so results are independent of worker count
//! and batch layout. Batches of replications run in parallel; partial
//! results are reduced in replication order, making every report
//! deterministic for a fixed `(seed, reps)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bridge_tracker::{count_bridges_dfs, BridgeTracker};
use crate::integrals::{threshold_integral, RankProfile};
use crate::matroid::{greedy_min_basis, GraphicMatroidSpec, Matroid, UnionFind};
use crate::sampling::{CostModel, Dist, SeedSpec};
use crate::stats::{
    covariance_moment, ks_pvalue, ks_statistic_uniform, mean, mean_moment, origin_slope, pearson,
    variance_moment, IdentityCheck, Moment,
};
use crate::vcg::{brute_force_outcome, run_auction, Instance, System};
use crate::{Error, ExtCost, Result, Scalar};

const BATCH: u64 = 4096;

/// A system paired with a cost model: everything needed to draw
/// replications.
#[derive(Clone, Debug)]
pub struct Template<S: Scalar> {
    system: System,
    model: CostModel<S>,
}

impl<S: Scalar> Template<S> {
    pub fn new(system: System, model: CostModel<S>) -> Result<Self> {
        if model.len() != system.ground_size() {
            return Err(Error::InvalidParameter(format!(
                "cost model has {} items, system has {}",
                model.len(),
                system.ground_size()
            )));
        }
        Ok(Template { system, model })
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn model(&self) -> &CostModel<S> {
        &self.model
    }

    /// Refuses systems whose VCG total is infinite by construction:
    /// bridged matroids and families with an item in every structure.
    pub fn require_finite_vcg(&self) -> Result<()> {
        let blocking = self.system.blocking_items();
        if blocking.is_empty() {
            Ok(())
        } else {
            Err(Error::BridgedMatroid { bridges: blocking })
        }
    }

    fn matroid(&self) -> Result<&Matroid> {
        self.system.as_matroid().ok_or_else(|| {
            Error::InvalidParameter("this operation requires a matroid system".into())
        })
    }

    fn require_standard_uniform(&self) -> Result<()> {
        if self.model.is_standard_uniform() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "this suite requires i.i.d. Uniform(0,1) costs".into(),
            ))
        }
    }
}

/// Per-replication totals, aggregated in f64.
#[derive(Clone, Copy, Debug)]
pub struct RepData {
    /// Nominal cost of the minimum structure.
    pub cstar: f64,
    /// Total VCG cost.
    pub vcg: f64,
    /// Sum of squared costs over the minimum structure.
    pub sumsq: f64,
}

/// Ordered replication results plus tie-guard diagnostics.
#[derive(Clone, Debug)]
pub struct DrawResult {
    pub reps: Vec<RepData>,
    pub tie_redraws: u64,
}

/// Runs `f` over replication indices `0..reps` in fixed-size batches,
/// in parallel, preserving replication order in the output.
pub fn replicate<T: Send>(
    reps: u64,
    f: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let starts: Vec<u64> = (0..reps).step_by(BATCH as usize).collect();
    let batches: Vec<Vec<T>> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + BATCH).min(reps);
            (start..end).map(&f).collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<Vec<T>>>>()?;
    Ok(batches.into_iter().flatten().collect())
}

fn rep_totals<S: Scalar>(system: &System, costs: &[S]) -> Result<RepData> {
    match system {
        System::Matroid(m) => {
            let profile = RankProfile::build_fast(m, costs)?;
            let cstar = profile.nominal_cost_integral();
            let vcg = profile.vcg_total_integral(cstar)?;
            Ok(RepData {
                cstar: cstar.as_f64(),
                vcg: vcg.as_f64(),
                sumsq: profile.sum_of_squares_integral().as_f64(),
            })
        }
        System::Family(_) => {
            let inst = Instance::new(system.clone(), costs.to_vec())?;
            let out = run_auction(&inst)?;
            let sumsq = out
                .min_structure
                .iter()
                .map(|&a| costs[a].as_f64().powi(2))
                .sum();
            Ok(RepData {
                cstar: out.nominal_cost.as_f64(),
                vcg: out.vcg_total.expect_finite("finite-vcg system").as_f64(),
                sumsq,
            })
        }
    }
}

/// Draws `reps` replications of the template.
pub fn draw_reps<S: Scalar>(tpl: &Template<S>, reps: u64, master_seed: u64) -> Result<DrawResult> {
    draw_reps_audited(tpl, reps, master_seed, None).map(|(d, _)| d)
}

/// Summary of the exact-identity audit run alongside a draw.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct AuditSummary {
    pub checked: u64,
    pub max_rel_dev: f64,
}

pub(crate) fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Draws replications, optionally auditing every `stride`-th sample
/// against the exact identities (see [`audit_matroid_sample`]).
pub fn draw_reps_audited<S: Scalar>(
    tpl: &Template<S>,
    reps: u64,
    master_seed: u64,
    audit_stride: Option<u64>,
) -> Result<(DrawResult, AuditSummary)> {
    tpl.require_finite_vcg()?;
    let rows = replicate(reps, |r| {
        let (costs, redraws) = tpl.model.sample_counting(SeedSpec {
            master_seed,
            replication: r,
        });
        let data = rep_totals(&tpl.system, &costs)?;
        let audit_dev = match audit_stride {
            Some(stride) if r % stride == 0 => match &tpl.system {
                System::Matroid(m) => Some(audit_matroid_sample(m, &costs, 1e-9)?),
                System::Family(_) => Some(audit_family_sample(&tpl.system, &costs, 1e-9)?),
            },
            _ => None,
        };
        Ok((data, u64::from(redraws), audit_dev))
    })?;

    let mut result = DrawResult {
        reps: Vec::with_capacity(rows.len()),
        tie_redraws: 0,
    };
    let mut audit = AuditSummary::default();
    for (data, redraws, audit_dev) in rows {
        result.reps.push(data);
        result.tie_redraws += redraws;
        if let Some(dev) = audit_dev {
            audit.checked += 1;
            audit.max_rel_dev = audit.max_rel_dev.max(dev);
        }
    }
    Ok((result, audit))
}

/// Exact-identity audit of one matroid sample, returning the largest
/// relative deviation found (at most `tol`, else an error):
/// greedy nominal cost vs the rank integral, auction total vs the
/// bridge integral, every per-item threshold vs its integral form, the
/// selection rule `selected iff cost < threshold`, the squared-cost sum
/// vs its integral, and the fast profile against the definitional one.
pub fn audit_matroid_sample<S: Scalar>(m: &Matroid, costs: &[S], tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut push = |what: &str, a: f64, b: f64| -> Result<()> {
        let dev = rel_dev(a, b);
        if dev > tol {
            return Err(Error::IdentityViolation {
                what: what.to_string(),
                deviation: dev,
            });
        }
        worst = worst.max(dev);
        Ok(())
    };

    let slow = RankProfile::build(m, costs)?;
    let fast = RankProfile::build_fast(m, costs)?;
    if slow != fast {
        return Err(Error::IdentityViolation {
            what: "fast profile vs definitional profile".into(),
            deviation: f64::INFINITY,
        });
    }

    let basis = greedy_min_basis(m, costs)?;
    let direct_sumsq: f64 = basis.elements.iter().map(|&a| costs[a].as_f64().powi(2)).sum();
    push(
        "nominal cost vs rank integral",
        basis.cost.as_f64(),
        slow.nominal_cost_integral().as_f64(),
    )?;
    push(
        "selected squared costs vs integral",
        direct_sumsq,
        slow.sum_of_squares_integral().as_f64(),
    )?;

    let inst = Instance::new(System::Matroid(m.clone()), costs.to_vec())?;
    let out = run_auction(&inst)?;
    if out.bridges.is_empty() {
        push(
            "auction total vs bridge integral",
            out.vcg_total.expect_finite("bridgeless").as_f64(),
            slow.vcg_total_integral(slow.nominal_cost_integral())?.as_f64(),
        )?;
    }
    for a in 0..m.ground_size() {
        match out.threshold[a] {
            ExtCost::Finite(t) => {
                let via_integral = threshold_integral(m, costs, a)?;
                push("threshold vs integral", t.as_f64(), via_integral.as_f64())?;
                // selection rule, meaningful under distinct costs
                let selected = out.min_structure.binary_search(&a).is_ok();
                if selected != (costs[a] < t) && costs[a] != t {
                    return Err(Error::IdentityViolation {
                        what: format!("selection rule for item {a}"),
                        deviation: f64::INFINITY,
                    });
                }
            }
            ExtCost::Infinite => {
                if threshold_integral(m, costs, a).is_ok() {
                    return Err(Error::IdentityViolation {
                        what: format!("item {a}: definitional threshold infinite, integral finite"),
                        deviation: f64::INFINITY,
                    });
                }
            }
        }
    }
    Ok(worst)
}

/// Exact audit of one family sample: the greedy-free auction against the
/// enumeration oracle, field by field.
pub fn audit_family_sample<S: Scalar>(system: &System, costs: &[S], tol: f64) -> Result<f64> {
    let inst = Instance::new(system.clone(), costs.to_vec())?;
    audit_outcome_pair(&inst, tol)
}

fn ext_dev<S: Scalar>(a: ExtCost<S>, b: ExtCost<S>) -> f64 {
    match (a, b) {
        (ExtCost::Finite(x), ExtCost::Finite(y)) => rel_dev(x.as_f64(), y.as_f64()),
        (ExtCost::Infinite, ExtCost::Infinite) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Compares [`run_auction`] against [`brute_force_outcome`] on every
/// field; returns the worst relative deviation, erring above `tol`.
pub fn audit_outcome_pair<S: Scalar>(instance: &Instance<S>, tol: f64) -> Result<f64> {
    let a = run_auction(instance)?;
    let b = brute_force_outcome(instance)?;
    if a.min_structure != b.min_structure || a.bridges != b.bridges {
        return Err(Error::IdentityViolation {
            what: "auction vs brute force: structure or bridge list".into(),
            deviation: f64::INFINITY,
        });
    }
    let mut worst = rel_dev(a.nominal_cost.as_f64(), b.nominal_cost.as_f64());
    worst = worst.max(ext_dev(a.vcg_total, b.vcg_total));
    worst = worst.max(ext_dev(a.overpayment, b.overpayment));
    for i in 0..instance.ground_size() {
        worst = worst.max(ext_dev(a.threshold[i], b.threshold[i]));
        worst = worst.max(ext_dev(a.payment[i], b.payment[i]));
        worst = worst.max(ext_dev(a.incentive[i], b.incentive[i]));
    }
    if worst > tol {
        return Err(Error::IdentityViolation {
            what: "auction vs brute force".into(),
            deviation: worst,
        });
    }
    Ok(worst)
}

/// Audits the extended-threshold lemma on one matroid sample: for every
/// subset `F` of the minimum basis and every `a` in `F`, the extended
/// threshold `v(F,a)` equals the simple threshold; and over every
/// independent `F`, membership in the minimum basis is equivalent to
/// `cost(a) <= v(F,a)` for all `a` in `F` (distinct subset sums assumed,
/// which holds almost surely for sampled costs).
pub fn audit_extended_thresholds<S: Scalar>(m: &Matroid, costs: &[S], tol: f64) -> Result<f64> {
    let n = m.ground_size();
    if n > 16 {
        return Err(Error::EnumerationGuard { size: n, limit: 16 });
    }
    let inst = Instance::new(System::Matroid(m.clone()), costs.to_vec())?;
    let basis = greedy_min_basis(m, costs)?.elements;
    let mut worst: f64 = 0.0;

    // equality on subsets of the minimum basis
    for mask in 1u32..(1 << basis.len()) {
        let f_set: Vec<usize> = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &a)| a)
            .collect();
        for &a in &f_set {
            let ext = crate::vcg::extended_threshold(&inst, &f_set, a)?;
            let simple = crate::vcg::vcg_threshold(&inst, a)?;
            let dev = ext_dev(ext, simple);
            if dev > tol {
                return Err(Error::IdentityViolation {
                    what: format!("extended threshold v(F,{a}) vs simple threshold"),
                    deviation: dev,
                });
            }
            worst = worst.max(dev);
        }
    }

    // membership characterization over every independent set
    for mask in 1u64..(1 << n) {
        let f_set: Vec<usize> = (0..n).filter(|a| mask & (1 << a) != 0).collect();
        if m.rank_of_sorted(&f_set) != f_set.len() {
            continue;
        }
        let inside = f_set.iter().all(|a| basis.binary_search(a).is_ok());
        let mut holds = true;
        for &a in &f_set {
            match crate::vcg::extended_threshold(&inst, &f_set, a)? {
                ExtCost::Finite(v) => {
                    if costs[a] > v {
                        holds = false;
                        break;
                    }
                }
                ExtCost::Infinite => {}
            }
        }
        if inside != holds {
            return Err(Error::IdentityViolation {
                what: format!("membership characterization for F={f_set:?}"),
                deviation: f64::INFINITY,
            });
        }
    }
    Ok(worst)
}

/// Mixed moments `E[c* vcg^m]` and `E[vcg^(m+1)]` for one power `m`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MixedMoment {
    pub m: u32,
    pub e_cstar_vcg_m: Moment,
    pub e_vcg_m_plus_1: Moment,
}

/// Sample moments of the nominal and VCG cost with standard errors.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub replications: u64,
    pub tie_redraws: u64,
    pub mean_cstar: Moment,
    pub mean_vcg: Moment,
    pub var_cstar: Moment,
    pub var_vcg: Moment,
    pub cov_cstar_vcg: Moment,
    /// Variance of `vcg - 2 * cstar`.
    pub var_diff: Moment,
    pub mixed_moments: Vec<MixedMoment>,
    /// Mean of the squared-cost sum over the minimum structure.
    pub sumsq_mean: Moment,
}

/// Unbiased sample moments over `reps` replications; deterministic for a
/// fixed seed regardless of thread count.
pub fn estimate<S: Scalar>(tpl: &Template<S>, reps: u64, master_seed: u64) -> Result<EstimateReport> {
    if reps < 100 {
        return Err(Error::InvalidParameter(format!(
            "estimation requires at least 100 replications, got {reps}"
        )));
    }
    let draw = draw_reps(tpl, reps, master_seed)?;
    Ok(report_from_draw(&draw))
}

pub fn report_from_draw(draw: &DrawResult) -> EstimateReport {
    let c: Vec<f64> = draw.reps.iter().map(|r| r.cstar).collect();
    let v: Vec<f64> = draw.reps.iter().map(|r| r.vcg).collect();
    let q: Vec<f64> = draw.reps.iter().map(|r| r.sumsq).collect();
    let d: Vec<f64> = draw.reps.iter().map(|r| r.vcg - 2.0 * r.cstar).collect();

    let mixed = (0..=2u32)
        .map(|m| {
            let cvm: Vec<f64> = c.iter().zip(&v).map(|(c, v)| c * v.powi(m as i32)).collect();
            let vm1: Vec<f64> = v.iter().map(|v| v.powi(m as i32 + 1)).collect();
            MixedMoment {
                m,
                e_cstar_vcg_m: mean_moment(&cvm),
                e_vcg_m_plus_1: mean_moment(&vm1),
            }
        })
        .collect();

    EstimateReport {
        replications: draw.reps.len() as u64,
        tie_redraws: draw.tie_redraws,
        mean_cstar: mean_moment(&c),
        mean_vcg: mean_moment(&v),
        var_cstar: variance_moment(&c),
        var_vcg: variance_moment(&v),
        cov_cstar_vcg: covariance_moment(&c, &v),
        var_diff: variance_moment(&d),
        mixed_moments: mixed,
        sumsq_mean: mean_moment(&q),
    }
}

/// One populated bin of a conditional-law study.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConditionalBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean_cstar: f64,
    pub se: f64,
    /// Mean VCG total of the bin members (the exact conditioning value).
    pub mean_vcg: f64,
}

/// Binned conditional means of the nominal cost given the VCG total,
/// plus the through-origin regression slope.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionalReport {
    pub replications: u64,
    pub bin_edges: Vec<f64>,
    pub bins: Vec<ConditionalBin>,
    pub dropped_bins: usize,
    pub slope: Moment,
}

const MIN_BIN_COUNT: usize = 30;

/// Estimates `E[c* | vcg]` by binning and by least squares through the
/// origin. Bins with fewer than 30 samples are dropped and counted.
pub fn conditional_law<S: Scalar>(
    tpl: &Template<S>,
    reps: u64,
    master_seed: u64,
    bins: usize,
) -> Result<ConditionalReport> {
    if bins < 1 {
        return Err(Error::InvalidParameter("need at least one bin".into()));
    }
    let draw = draw_reps(tpl, reps, master_seed)?;
    let c: Vec<f64> = draw.reps.iter().map(|r| r.cstar).collect();
    let v: Vec<f64> = draw.reps.iter().map(|r| r.vcg).collect();
    let vmax = v.iter().cloned().fold(0.0f64, f64::max);
    if vmax <= 0.0 {
        return Err(Error::InvalidParameter("all totals are zero".into()));
    }
    let width = vmax / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| i as f64 * width).collect();

    let mut members: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 0.0); bins];
    for (ci, vi) in c.iter().zip(&v) {
        let idx = ((vi / width) as usize).min(bins - 1);
        members[idx].0.push(*ci);
        members[idx].1 += vi;
    }
    let mut out_bins = Vec::new();
    let mut dropped = 0;
    for (i, (xs, vsum)) in members.iter().enumerate() {
        if xs.len() < MIN_BIN_COUNT {
            dropped += 1;
            continue;
        }
        let m = mean_moment(xs);
        out_bins.push(ConditionalBin {
            lo: edges[i],
            hi: edges[i + 1],
            count: xs.len(),
            mean_cstar: m.value,
            se: m.se,
            mean_vcg: vsum / xs.len() as f64,
        });
    }
    if out_bins.is_empty() {
        return Err(Error::UnderpopulatedBins {
            min_count: MIN_BIN_COUNT,
        });
    }
    Ok(ConditionalReport {
        replications: reps,
        bin_edges: edges,
        bins: out_bins,
        dropped_bins: dropped,
        slope: origin_slope(&v, &c),
    })
}

/// KS result for one conditioned item.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KsItem {
    pub item: usize,
    pub threshold: f64,
    pub statistic: f64,
    pub p_value: f64,
}

/// Correlation of the probability transforms of one item pair.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairCorrelation {
    pub item_a: usize,
    pub item_b: usize,
    pub r: f64,
    pub z: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformityReport {
    pub attempted: u64,
    pub accepted: usize,
    pub items: Vec<KsItem>,
    pub pairs: Vec<PairCorrelation>,
}

/// Conditional-distribution test: fix the costs outside `f_set`, resample
/// the costs on `f_set`, keep replications where `f_set` lies inside the
/// minimum structure, and test each kept cost against its base
/// distribution truncated at the extended threshold (uniform on
/// `(0, v(F,a))` in the Uniform(0,1) case), plus pairwise independence of
/// the probability transforms.
pub fn conditional_uniformity_test<S: Scalar>(
    m: &Matroid,
    outside_costs: &[S],
    f_set: &[usize],
    model: &CostModel<S>,
    attempts: u64,
    master_seed: u64,
    target_accepted: usize,
) -> Result<UniformityReport> {
    if f_set.is_empty() {
        return Err(Error::InvalidParameter("F must be non-empty".into()));
    }
    if model.len() != m.ground_size() || outside_costs.len() != m.ground_size() {
        return Err(Error::InvalidParameter(
            "outside costs and model must cover the ground set".into(),
        ));
    }
    if !m.is_independent(f_set)? {
        return Err(Error::DependentSet(f_set.to_vec()));
    }
    let mut f_sorted = f_set.to_vec();
    f_sorted.sort_unstable();

    // v(F,a) depends only on the costs outside F; zero F for the query.
    let mut base_costs = outside_costs.to_vec();
    for &a in &f_sorted {
        base_costs[a] = S::zero();
    }
    let inst = Instance::new(System::Matroid(m.clone()), base_costs)?;
    let mut v_of: Vec<f64> = Vec::with_capacity(f_sorted.len());
    for &a in &f_sorted {
        match crate::vcg::extended_threshold(&inst, &f_sorted, a)? {
            ExtCost::Finite(t) => v_of.push(t.as_f64()),
            ExtCost::Infinite => {
                return Err(Error::InvalidParameter(format!(
                    "extended threshold of item {a} is infinite; the test needs a bridgeless setup"
                )))
            }
        }
    }

    let mut pit: Vec<Vec<f64>> = vec![Vec::new(); f_sorted.len()];
    let mut accepted = 0usize;
    let mut attempted = 0u64;
    let mut costs = outside_costs.to_vec();
    for r in 0..attempts {
        attempted = r + 1;
        let drawn = model.sample(SeedSpec {
            master_seed,
            replication: r,
        });
        for &a in &f_sorted {
            costs[a] = drawn[a];
        }
        let basis = greedy_min_basis(m, &costs)?;
        if f_sorted.iter().all(|a| basis.elements.binary_search(a).is_ok()) {
            for (i, &a) in f_sorted.iter().enumerate() {
                let dist = model.dists()[a];
                let u = dist.cdf(costs[a]).as_f64() / dist.cdf(S::from_f64_lossy(v_of[i])).as_f64();
                pit[i].push(u);
            }
            accepted += 1;
            if target_accepted > 0 && accepted >= target_accepted {
                break;
            }
        }
    }
    if accepted == 0 || (accepted as f64) < 1e-3 * attempted as f64 {
        return Err(Error::LowAcceptance {
            accepted,
            attempted: attempted as usize,
        });
    }

    let items = f_sorted
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut xs = pit[i].clone();
            xs.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite"));
            let d = ks_statistic_uniform(&xs);
            KsItem {
                item: a,
                threshold: v_of[i],
                statistic: d,
                p_value: ks_pvalue(d, xs.len()),
            }
        })
        .collect();

    let mut pairs = Vec::new();
    for i in 0..f_sorted.len() {
        for j in (i + 1)..f_sorted.len() {
            let r = pearson(&pit[i], &pit[j]);
            pairs.push(PairCorrelation {
                item_a: f_sorted[i],
                item_b: f_sorted[j],
                r,
                z: r * (accepted as f64).sqrt(),
            });
        }
    }
    Ok(UniformityReport {
        attempted,
        accepted,
        items,
        pairs,
    })
}

/// The variance and mixed-moment identities for bridgeless matroids with
/// Uniform(0,1) costs, each gated at `gate` standard errors:
/// covariance = half the VCG variance; the VCG variance decomposition;
/// the difference variance equals the mean squared-cost sum; the nominal
/// variance quarter-split; and `E[c* vcg^m] = E[vcg^(m+1)]/2` for
/// `m = 0, 1, 2`.
pub fn variance_identity_suite<S: Scalar>(
    tpl: &Template<S>,
    reps: u64,
    master_seed: u64,
    gate: f64,
) -> Result<Vec<IdentityCheck>> {
    tpl.matroid()?;
    tpl.require_standard_uniform()?;
    let draw = draw_reps(tpl, reps, master_seed)?;
    Ok(variance_checks_from_draw(&draw, gate))
}

pub fn variance_checks_from_draw(draw: &DrawResult, gate: f64) -> Vec<IdentityCheck> {
    let c: Vec<f64> = draw.reps.iter().map(|r| r.cstar).collect();
    let v: Vec<f64> = draw.reps.iter().map(|r| r.vcg).collect();
    let q: Vec<f64> = draw.reps.iter().map(|r| r.sumsq).collect();
    let d: Vec<f64> = draw.reps.iter().map(|r| r.vcg - 2.0 * r.cstar).collect();
    let (mc, mv, md) = (mean(&c), mean(&v), mean(&d));

    let cov = covariance_moment(&c, &v).value;
    let var_c = variance_moment(&c).value;
    let var_v = variance_moment(&v).value;
    let var_d = variance_moment(&d).value;
    let mq = mean(&q);

    let mut checks = Vec::new();

    let infl: Vec<f64> = c
        .iter()
        .zip(&v)
        .map(|(ci, vi)| (ci - mc) * (vi - mv) - 0.5 * (vi - mv).powi(2))
        .collect();
    checks.push(IdentityCheck::two_sided(
        "cov_equals_half_var_vcg",
        cov,
        0.5 * var_v,
        &infl,
        gate,
    ));

    let infl: Vec<f64> = c
        .iter()
        .zip(&v)
        .zip(&d)
        .map(|((ci, vi), di)| (vi - mv).powi(2) - 4.0 * (ci - mc).powi(2) + (di - md).powi(2))
        .collect();
    checks.push(IdentityCheck::two_sided(
        "var_vcg_decomposition",
        var_v,
        4.0 * var_c - var_d,
        &infl,
        gate,
    ));

    let infl: Vec<f64> = d.iter().zip(&q).map(|(di, qi)| (di - md).powi(2) - qi).collect();
    checks.push(IdentityCheck::two_sided(
        "var_diff_equals_sumsq_mean",
        var_d,
        mq,
        &infl,
        gate,
    ));

    let infl: Vec<f64> = c
        .iter()
        .zip(&v)
        .zip(&q)
        .map(|((ci, vi), qi)| (ci - mc).powi(2) - 0.25 * (vi - mv).powi(2) - 0.25 * qi)
        .collect();
    checks.push(IdentityCheck::two_sided(
        "var_cstar_quarter_split",
        var_c,
        0.25 * var_v + 0.25 * mq,
        &infl,
        gate,
    ));

    for m in 0..=2u32 {
        let lhs_vals: Vec<f64> = c.iter().zip(&v).map(|(ci, vi)| ci * vi.powi(m as i32)).collect();
        let rhs_vals: Vec<f64> = v.iter().map(|vi| vi.powi(m as i32 + 1)).collect();
        let infl: Vec<f64> = lhs_vals
            .iter()
            .zip(&rhs_vals)
            .map(|(l, r)| l - 0.5 * r)
            .collect();
        checks.push(IdentityCheck::two_sided(
            &format!("mixed_moment_m{m}"),
            mean(&lhs_vals),
            0.5 * mean(&rhs_vals),
            &infl,
            gate,
        ));
    }
    checks
}

/// Coarse classification of a cost model, driving which statistical
/// suite applies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelClass {
    /// Every item Uniform(0,1).
    StandardUniform,
    /// Every item exponential (rates may differ).
    AllExponential,
    /// Every item Beta(alpha,1) with one shared alpha.
    IidBeta(f64),
    Other,
}

pub fn classify_model<S: Scalar>(model: &CostModel<S>) -> ModelClass {
    if model.is_standard_uniform() {
        return ModelClass::StandardUniform;
    }
    if model.dists().iter().all(|d| matches!(d, Dist::Exponential { .. })) {
        return ModelClass::AllExponential;
    }
    if let [Dist::Beta { alpha }, rest @ ..] = model.dists() {
        if rest.iter().all(|d| d == &Dist::Beta { alpha: *alpha }) {
            return ModelClass::IidBeta(alpha.as_f64());
        }
    }
    ModelClass::Other
}

/// Monotonicity checks from an existing draw. Exponential models must
/// put the mean nominal cost strictly below half the mean VCG total
/// (one sided, 3 s.e.). Beta(alpha,1) models must hit the ratio
/// `alpha/(alpha+1)` exactly on bridgeless matroids (means and
/// conditional slope, two sided at 3 s.e.) and at most the ratio on
/// general systems (one sided).
pub fn monotone_checks_from_draw(
    draw: &DrawResult,
    class: ModelClass,
    is_matroid: bool,
) -> Result<Vec<IdentityCheck>> {
    let c: Vec<f64> = draw.reps.iter().map(|r| r.cstar).collect();
    let v: Vec<f64> = draw.reps.iter().map(|r| r.vcg).collect();
    let mut checks = Vec::new();
    match class {
        ModelClass::AllExponential => {
            let infl: Vec<f64> = c.iter().zip(&v).map(|(ci, vi)| 0.5 * vi - ci).collect();
            checks.push(IdentityCheck::strictly_below(
                "cstar_strictly_below_half_vcg",
                mean(&c),
                0.5 * mean(&v),
                &infl,
                3.0,
            ));
        }
        ModelClass::IidBeta(alpha) => {
            let ratio = crate::oracles::beta_ratio(alpha)?;
            let infl: Vec<f64> = c.iter().zip(&v).map(|(ci, vi)| ci - ratio * vi).collect();
            if is_matroid {
                checks.push(IdentityCheck::two_sided(
                    "beta_mean_ratio",
                    mean(&c),
                    ratio * mean(&v),
                    &infl,
                    3.0,
                ));
                let slope = origin_slope(&v, &c);
                let z = (slope.value - ratio) / slope.se;
                checks.push(IdentityCheck {
                    name: "beta_conditional_slope".into(),
                    lhs: slope.value,
                    rhs: ratio,
                    se: slope.se,
                    z,
                    pass: z.abs() <= 3.0,
                });
            } else {
                // general systems only bound the ratio from above
                let se = mean_moment(&infl).se;
                let z = (ratio * mean(&v) - mean(&c)) / se;
                checks.push(IdentityCheck {
                    name: "beta_ratio_upper_bound".into(),
                    lhs: mean(&c),
                    rhs: ratio * mean(&v),
                    se,
                    z,
                    pass: z >= -3.0,
                });
            }
        }
        _ => {
            return Err(Error::InvalidParameter(
                "monotonicity suite needs all-exponential or identical Beta(alpha,1) costs".into(),
            ))
        }
    }
    Ok(checks)
}

/// Draws replications and runs [`monotone_checks_from_draw`].
pub fn monotone_inequality_suite<S: Scalar>(
    tpl: &Template<S>,
    reps: u64,
    master_seed: u64,
) -> Result<Vec<IdentityCheck>> {
    let class = classify_model(&tpl.model);
    if matches!(class, ModelClass::IidBeta(_)) && tpl.system.as_matroid().is_none() {
        // keep the strong equality checks for matroids only
        let draw = draw_reps(tpl, reps, master_seed)?;
        return monotone_checks_from_draw(&draw, class, false);
    }
    if matches!(class, ModelClass::IidBeta(_)) {
        tpl.matroid()?;
    }
    let draw = draw_reps(tpl, reps, master_seed)?;
    monotone_checks_from_draw(&draw, class, tpl.system.as_matroid().is_some())
}

/// One-sided guard for the general doubling bound under uniform costs:
/// the mean VCG total must not fall below twice the mean nominal cost by
/// more than 4 standard errors.
pub fn th1_guard_from_draw(draw: &DrawResult) -> IdentityCheck {
    let c: Vec<f64> = draw.reps.iter().map(|r| r.cstar).collect();
    let v: Vec<f64> = draw.reps.iter().map(|r| r.vcg).collect();
    let diffs: Vec<f64> = draw.reps.iter().map(|r| r.vcg - 2.0 * r.cstar).collect();
    let m = mean_moment(&diffs);
    let z = m.value / m.se;
    IdentityCheck {
        name: "vcg_at_least_double_cstar".into(),
        lhs: 2.0 * mean(&c),
        rhs: mean(&v),
        se: m.se,
        z,
        pass: z >= -4.0,
    }
}

/// One grid point of the bridge-rate identity check
/// `E[beta(A(t))] = t * d/dt E[rank(A(t))]`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LdiffPoint {
    pub t: f64,
    /// Monte Carlo estimate of `E[beta(A(t))]`.
    pub lhs: f64,
    /// `t` times the central finite difference of `E[rank(A(t))]`.
    pub rhs: f64,
    pub se: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Checks the bridge-rate identity on a grid of interior `t` values with
/// central differences of step `h`. The tolerance combines the
/// statistical error of the paired estimate (4 s.e.) with the `O(h^2)`
/// differentiation bias.
pub fn ldiff_check<S: Scalar>(
    tpl: &Template<S>,
    reps: u64,
    master_seed: u64,
    grid: &[f64],
    h: f64,
) -> Result<Vec<LdiffPoint>> {
    let m = tpl.matroid()?.clone();
    tpl.require_standard_uniform()?;
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("step h must be positive".into()));
    }
    for &t in grid {
        if t - h <= 0.0 || t + h >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "grid point {t} with step {h} touches the boundary of (0,1)"
            )));
        }
    }

    let rows = replicate(reps, |r| {
        let costs = tpl.model.sample(SeedSpec {
            master_seed,
            replication: r,
        });
        let mut per_t = Vec::with_capacity(grid.len());
        for &t in grid {
            let at = |cut: f64| -> Vec<usize> {
                (0..costs.len()).filter(|&a| costs[a].as_f64() <= cut).collect()
            };
            let beta = m.bridges(&at(t))?.len() as f64;
            let rk_hi = m.rank(&at(t + h))? as f64;
            let rk_lo = m.rank(&at(t - h))? as f64;
            per_t.push((beta, t * (rk_hi - rk_lo) / (2.0 * h)));
        }
        Ok(per_t)
    })?;

    let mut out = Vec::with_capacity(grid.len());
    for (i, &t) in grid.iter().enumerate() {
        let lhs_vals: Vec<f64> = rows.iter().map(|row| row[i].0).collect();
        let rhs_vals: Vec<f64> = rows.iter().map(|row| row[i].1).collect();
        let diffs: Vec<f64> = lhs_vals.iter().zip(&rhs_vals).map(|(a, b)| a - b).collect();
        let lhs = mean(&lhs_vals);
        let rhs = mean(&rhs_vals);
        let se = mean_moment(&diffs).se;
        let tol = 4.0 * se + 2.0 * h * h;
        out.push(LdiffPoint {
            t,
            lhs,
            rhs,
            se,
            tol,
            pass: (lhs - rhs).abs() <= tol,
        });
    }
    Ok(out)
}

/// Per-size results of the complete-graph MST sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MstPoint {
    pub n: usize,
    pub replications: u64,
    pub mean_cstar: Moment,
    pub mean_vcg: Moment,
    pub var_cstar: Moment,
    pub var_vcg: Moment,
    /// Mean of `vcg - 2 * cstar`, zero in expectation at every `n`.
    pub th2_gap: Moment,
}

/// Default ceiling on the complete-graph size; `K_500` already has
/// 124750 edges per replication.
pub const MST_DEFAULT_MAX_N: usize = 500;

/// Minimum spanning tree scaling sweep on complete graphs with
/// Uniform(0,1) edge costs. Per replication, one sorted sweep yields the
/// nominal cost (Kruskal), the rank integral (cross-checked on the audit
/// subsample), and the VCG total via the incremental bridge tracker,
/// which the audit validates against a depth-first recount.
pub fn mst_scaling(
    ns: &[usize],
    reps: u64,
    master_seed: u64,
    max_n: usize,
) -> Result<Vec<MstPoint>> {
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 4 {
            return Err(Error::InvalidParameter(format!(
                "mst scaling requires n >= 4, got {n}"
            )));
        }
        if n > max_n {
            return Err(Error::InvalidParameter(format!(
                "n={n} exceeds the configured cap {max_n}"
            )));
        }
        let spec = GraphicMatroidSpec::complete(n)?;
        let edges = spec.edges.clone();
        let m = edges.len();
        let model = CostModel::iid(m, Dist::Uniform { upper: 1.0f64 })?;
        let audit_stride = (reps / 16).max(1);

        let rows = replicate(reps, |r| {
            let costs = model.sample(SeedSpec {
                master_seed,
                replication: r,
            });
            let audit = r % audit_stride == 0;
            mst_sweep(n, &edges, &costs, audit)
        })?;

        let c: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let v: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let gap: Vec<f64> = rows.iter().map(|r| r.1 - 2.0 * r.0).collect();
        out.push(MstPoint {
            n,
            replications: reps,
            mean_cstar: mean_moment(&c),
            mean_vcg: mean_moment(&v),
            var_cstar: variance_moment(&c),
            var_vcg: variance_moment(&v),
            th2_gap: mean_moment(&gap),
        });
    }
    Ok(out)
}

/// One sorted sweep over the edges of `K_n`: Kruskal sum, rank-deficit
/// integral, and bridge-count integral. With `audit` set, checks the
/// integral against the Kruskal sum and the tracker against a
/// depth-first bridge count at three prefixes.
fn mst_sweep(n: usize, edges: &[(usize, usize)], costs: &[f64], audit: bool) -> Result<(f64, f64)> {
    let m = edges.len();
    let mut order: Vec<u32> = (0..m as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        costs[a as usize]
            .partial_cmp(&costs[b as usize])
            .expect("finite")
            .then(a.cmp(&b))
    });

    let checkpoints = [m / 4, m / 2, 3 * m / 4];
    let mut uf = UnionFind::new(n);
    let mut tracker = BridgeTracker::new(n);
    let rank_ground = n - 1;
    let mut rank = 0usize;
    let mut prev_t = 0.0f64;
    let mut kruskal = 0.0f64;
    let mut cost_int = 0.0f64;
    let mut bridge_int = 0.0f64;
    for (i, &e) in order.iter().enumerate() {
        let t = costs[e as usize];
        let dt = t - prev_t;
        cost_int += (rank_ground - rank) as f64 * dt;
        bridge_int += tracker.bridge_count() as f64 * dt;
        let (u, v) = edges[e as usize];
        if uf.union(u, v) {
            rank += 1;
            kruskal += t;
        }
        tracker.insert_edge(u, v);
        prev_t = t;
        if audit && checkpoints.contains(&(i + 1)) {
            let prefix: Vec<(usize, usize)> =
                order[..=i].iter().map(|&e| edges[e as usize]).collect();
            let dfs = count_bridges_dfs(n, &prefix);
            if dfs != tracker.bridge_count() {
                return Err(Error::IdentityViolation {
                    what: format!("incremental bridge count at prefix {}", i + 1),
                    deviation: (dfs as f64 - tracker.bridge_count() as f64).abs(),
                });
            }
        }
    }
    debug_assert_eq!(rank, rank_ground);
    debug_assert_eq!(tracker.bridge_count(), 0);
    if audit {
        let dev = rel_dev(kruskal, cost_int);
        if dev > 1e-9 {
            return Err(Error::IdentityViolation {
                what: "mst nominal cost vs rank integral".into(),
                deviation: dev,
            });
        }
    }
    Ok((kruskal, kruskal + bridge_int))
}
