//! The five subcommands. Each returns the process exit code:
//! 0 all checks passed, 1 a statistical gate failed. Configuration
//! problems and exact-identity violations surface as errors and are
//! mapped to 2 and 3 by `main`.

use std::path::PathBuf;

use vcg_lab::mc::{self, ModelClass, Template};
use vcg_lab::sampling::{CostModel, SeedSpec};
use vcg_lab::stats::IdentityCheck;
use vcg_lab::vcg::{Instance, System};
use vcg_lab::{oracles, Error};

use crate::output::{csv_with_config, emit, json_envelope, RunConfig};
use crate::sysspec::{parse_dist, parse_system};
use crate::Format;

const EXACT_TOL: f64 = 1e-9;

fn exit_code(checks: &[IdentityCheck]) -> u8 {
    if checks.iter().all(|c| c.pass) {
        0
    } else {
        1
    }
}

fn print_checks(checks: &[IdentityCheck]) {
    for c in checks {
        eprintln!(
            "{} {}: lhs={:.6} rhs={:.6} se={:.2e} z={:+.2}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.lhs,
            c.rhs,
            c.se,
            c.z
        );
    }
}

pub struct AuditArgs {
    pub system: String,
    pub dist: String,
    pub param: Option<f64>,
    pub reps: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Per-sample exact-identity audit over freshly sampled instances:
/// integrals vs definitions on every sample, auction vs brute force up
/// to 12 items, extended thresholds up to 8 items.
pub fn run_audit(args: AuditArgs, mut cfg: RunConfig) -> anyhow::Result<u8> {
    cfg.system = Some(args.system.clone());
    cfg.dist = Some(args.dist.clone());
    cfg.param = args.param;
    cfg.reps = Some(args.reps);
    cfg.seed = Some(args.seed);

    let system = parse_system(&args.system)?;
    let m = match &system {
        System::Matroid(m) => m,
        System::Family(_) => anyhow::bail!("audit requires a matroid system"),
    };
    let bridges = m.ground_bridges();
    if !bridges.is_empty() {
        return Err(Error::BridgedMatroid { bridges }.into());
    }
    let dist = parse_dist(&args.dist, args.param)?;
    let n = m.ground_size();
    let model = CostModel::iid(n, dist)?;

    let check_outcomes = n <= 12;
    let check_extended = n <= 8;
    let devs = mc::replicate(args.reps, |r| {
        let costs = model.sample(SeedSpec {
            master_seed: args.seed,
            replication: r,
        });
        let mut dev = mc::audit_matroid_sample(m, &costs, EXACT_TOL)?;
        if check_outcomes {
            let inst = Instance::new(system.clone(), costs.clone())?;
            dev = dev.max(mc::audit_outcome_pair(&inst, EXACT_TOL)?);
        }
        if check_extended {
            dev = dev.max(mc::audit_extended_thresholds(m, &costs, EXACT_TOL)?);
        }
        Ok(dev)
    })?;
    let max_dev = devs.iter().cloned().fold(0.0f64, f64::max);

    eprintln!(
        "audit pass: {} samples, max relative deviation {max_dev:.3e}",
        args.reps
    );
    let text = match args.format {
        Format::Json => {
            let body = serde_json::json!({
                "samples": args.reps,
                "tolerance": EXACT_TOL,
                "max_rel_dev": max_dev,
                "outcome_pairs_checked": check_outcomes,
                "extended_thresholds_checked": check_extended,
            });
            json_envelope(&cfg, body)?
        }
        Format::Csv => {
            let t = format!(
                "samples,tolerance,max_rel_dev,outcome_pairs_checked,extended_thresholds_checked\n{},{},{},{},{}\n",
                args.reps, EXACT_TOL, max_dev, check_outcomes, check_extended
            );
            csv_with_config(&cfg, &t)?
        }
    };
    emit(args.out.as_ref(), &text)?;
    Ok(0)
}

pub struct EstimateArgs {
    pub system: String,
    pub dist: String,
    pub param: Option<f64>,
    pub reps: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Moment estimation plus the applicable statistical suite: the variance
/// identities for matroids under Uniform(0,1), the monotonicity checks
/// for exponential or Beta costs, and the doubling guard for families
/// under uniform costs.
pub fn run_estimate(args: EstimateArgs, mut cfg: RunConfig) -> anyhow::Result<u8> {
    cfg.system = Some(args.system.clone());
    cfg.dist = Some(args.dist.clone());
    cfg.param = args.param;
    cfg.reps = Some(args.reps);
    cfg.seed = Some(args.seed);

    let system = parse_system(&args.system)?;
    let dist = parse_dist(&args.dist, args.param)?;
    let model = CostModel::iid(system.ground_size(), dist)?;
    let class = mc::classify_model(&model);
    let is_matroid = matches!(system, System::Matroid(_));
    let tpl = Template::new(system, model)?;

    if args.reps < 100 {
        anyhow::bail!("estimation requires at least 100 replications");
    }
    let draw = mc::draw_reps(&tpl, args.reps, args.seed)?;
    let report = mc::report_from_draw(&draw);
    let mut checks: Vec<IdentityCheck> = Vec::new();
    match class {
        ModelClass::StandardUniform if is_matroid => {
            checks.extend(mc::variance_checks_from_draw(&draw, 4.0));
        }
        ModelClass::StandardUniform => {
            checks.push(mc::th1_guard_from_draw(&draw));
        }
        ModelClass::AllExponential | ModelClass::IidBeta(_) => {
            checks.extend(mc::monotone_checks_from_draw(&draw, class, is_matroid)?);
        }
        ModelClass::Other => {}
    }
    print_checks(&checks);

    let text = match args.format {
        Format::Json => json_envelope(
            &cfg,
            serde_json::json!({ "estimate": report, "checks": checks }),
        )?,
        Format::Csv => {
            let mut t = String::from("statistic,value,std_error\n");
            let mut row = |name: &str, v: f64, se: f64| {
                t.push_str(&format!("{name},{v},{se}\n"));
            };
            row("mean_cstar", report.mean_cstar.value, report.mean_cstar.se);
            row("mean_vcg", report.mean_vcg.value, report.mean_vcg.se);
            row("var_cstar", report.var_cstar.value, report.var_cstar.se);
            row("var_vcg", report.var_vcg.value, report.var_vcg.se);
            row(
                "cov_cstar_vcg",
                report.cov_cstar_vcg.value,
                report.cov_cstar_vcg.se,
            );
            row("var_diff", report.var_diff.value, report.var_diff.se);
            row("sumsq_mean", report.sumsq_mean.value, report.sumsq_mean.se);
            for mm in &report.mixed_moments {
                row(
                    &format!("e_cstar_vcg_m{}", mm.m),
                    mm.e_cstar_vcg_m.value,
                    mm.e_cstar_vcg_m.se,
                );
                row(
                    &format!("e_vcg_m{}_plus_1", mm.m),
                    mm.e_vcg_m_plus_1.value,
                    mm.e_vcg_m_plus_1.se,
                );
            }
            row("tie_redraws", report.tie_redraws as f64, 0.0);
            csv_with_config(&cfg, &t)?
        }
    };
    emit(args.out.as_ref(), &text)?;
    Ok(exit_code(&checks))
}

pub struct ConditionalArgs {
    pub system: String,
    pub dist: String,
    pub param: Option<f64>,
    pub reps: u64,
    pub seed: u64,
    pub bins: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Conditional-law study: binned means of the nominal cost given the
/// VCG total plus the through-origin slope. Matroids under Uniform(0,1)
/// must show slope 1/2 and per-bin halving; Beta matroids slope
/// alpha/(alpha+1); the triangle path family is compared against its
/// closed-form conditional curve.
pub fn run_conditional(args: ConditionalArgs, mut cfg: RunConfig) -> anyhow::Result<u8> {
    cfg.system = Some(args.system.clone());
    cfg.dist = Some(args.dist.clone());
    cfg.param = args.param;
    cfg.reps = Some(args.reps);
    cfg.seed = Some(args.seed);
    cfg.bins = Some(args.bins);

    let system = parse_system(&args.system)?;
    let dist = parse_dist(&args.dist, args.param)?;
    let model = CostModel::iid(system.ground_size(), dist)?;
    let class = mc::classify_model(&model);
    let is_matroid = matches!(system, System::Matroid(_));
    let is_k3path = matches!(&system, System::Family(f) if *f == vcg_lab::set_system::StructureFamily::k3_path());
    let tpl = Template::new(system, model)?;
    let report = mc::conditional_law(&tpl, args.reps, args.seed, args.bins)?;

    let mut checks: Vec<IdentityCheck> = Vec::new();
    match (class, is_matroid) {
        (ModelClass::StandardUniform, true) => {
            let z = (report.slope.value - 0.5) / report.slope.se;
            checks.push(IdentityCheck {
                name: "conditional_slope_half".into(),
                lhs: report.slope.value,
                rhs: 0.5,
                se: report.slope.se,
                z,
                pass: z.abs() <= 3.0,
            });
            for b in &report.bins {
                let z = (b.mean_cstar - 0.5 * b.mean_vcg) / b.se;
                checks.push(IdentityCheck {
                    name: format!("bin_{:.3}_{:.3}_half_vcg", b.lo, b.hi),
                    lhs: b.mean_cstar,
                    rhs: 0.5 * b.mean_vcg,
                    se: b.se,
                    z,
                    pass: z.abs() <= 4.0,
                });
            }
        }
        (ModelClass::IidBeta(alpha), true) => {
            let ratio = oracles::beta_ratio(alpha)?;
            let z = (report.slope.value - ratio) / report.slope.se;
            checks.push(IdentityCheck {
                name: "conditional_slope_beta_ratio".into(),
                lhs: report.slope.value,
                rhs: ratio,
                se: report.slope.se,
                z,
                pass: z.abs() <= 3.0,
            });
        }
        (ModelClass::StandardUniform, false) if is_k3path => {
            let oracle = oracles::k3_path_uniform_stats();
            for b in &report.bins {
                let expected = oracle.bin_mean(b.lo.max(0.0), b.hi.min(2.0))?;
                let z = (b.mean_cstar - expected) / b.se;
                checks.push(IdentityCheck {
                    name: format!("k3path_bin_{:.3}_{:.3}", b.lo, b.hi),
                    lhs: b.mean_cstar,
                    rhs: expected,
                    se: b.se,
                    z,
                    pass: z.abs() <= 4.0,
                });
            }
        }
        _ => {}
    }
    print_checks(&checks);

    let text = match args.format {
        Format::Json => json_envelope(
            &cfg,
            serde_json::json!({ "conditional": report, "checks": checks }),
        )?,
        Format::Csv => {
            let mut t = String::from("bin_lo,bin_hi,count,mean_cstar,se_cstar,mean_vcg\n");
            for b in &report.bins {
                t.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    b.lo, b.hi, b.count, b.mean_cstar, b.se, b.mean_vcg
                ));
            }
            csv_with_config(&cfg, &t)?
        }
    };
    emit(args.out.as_ref(), &text)?;
    Ok(exit_code(&checks))
}

pub struct MstArgs {
    pub n_list: Vec<usize>,
    pub reps: u64,
    pub seed: u64,
    pub max_n: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Complete-graph MST sweep: per-size moments with the per-sample audit
/// built in, plus the exact doubling check at every size.
pub fn run_mst_scaling(args: MstArgs, mut cfg: RunConfig) -> anyhow::Result<u8> {
    cfg.n_list = Some(args.n_list.clone());
    cfg.reps = Some(args.reps);
    cfg.seed = Some(args.seed);
    cfg.max_n = Some(args.max_n);
    if args.n_list.is_empty() {
        anyhow::bail!("provide at least one graph size via --n-list");
    }

    let points = mc::mst_scaling(&args.n_list, args.reps, args.seed, args.max_n)?;
    let mut checks = Vec::new();
    for p in &points {
        let z = p.th2_gap.value / p.th2_gap.se;
        checks.push(IdentityCheck {
            name: format!("th2_doubling_n{}", p.n),
            lhs: p.mean_vcg.value,
            rhs: 2.0 * p.mean_cstar.value,
            se: p.th2_gap.se,
            z,
            pass: z.abs() <= 4.0,
        });
    }
    print_checks(&checks);

    let text = match args.format {
        Format::Json => json_envelope(
            &cfg,
            serde_json::json!({ "points": points, "checks": checks }),
        )?,
        Format::Csv => {
            let mut t = String::from(
                "n,mean_cstar,mean_vcg,n_var_vcg,n_var_cstar,se_mean_cstar,se_mean_vcg\n",
            );
            for p in &points {
                t.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    p.n,
                    p.mean_cstar.value,
                    p.mean_vcg.value,
                    p.n as f64 * p.var_vcg.value,
                    p.n as f64 * p.var_cstar.value,
                    p.mean_cstar.se,
                    p.mean_vcg.se
                ));
            }
            csv_with_config(&cfg, &t)?
        }
    };
    emit(args.out.as_ref(), &text)?;
    Ok(exit_code(&checks))
}

/// Dumps every closed-form constant as JSON for fixture generation.
pub fn run_oracle_dump(out: Option<PathBuf>, cfg: RunConfig) -> anyhow::Result<u8> {
    let mut uniform_rows = Vec::new();
    let mut exp_rows = Vec::new();
    for n in 2..=8usize {
        for k in 1..n {
            let s = oracles::uniform_matroid_uniform_stats(n, k)?;
            uniform_rows.push(serde_json::json!({ "n": n, "k": k, "stats": s }));
            let (ec, ev) = oracles::uniform_matroid_exponential_means(n, k)?;
            exp_rows.push(serde_json::json!({ "n": n, "k": k, "e_cstar": ec, "e_vcg": ev }));
        }
    }
    let k3u = oracles::k3_path_uniform_stats();
    let (k3e_c, k3e_v) = oracles::k3_path_exponential_means();
    let body = serde_json::json!({
        "mst": oracles::mst_constants(),
        "k3_path_uniform": {
            "e_cstar": k3u.e_cstar,
            "e_vcg": k3u.e_vcg,
            "cond_mean_at_1": k3u.cond_mean(1.0)?,
        },
        "k3_path_exponential": { "e_cstar": k3e_c, "e_vcg": k3e_v },
        "uniform_matroid_uniform": uniform_rows,
        "uniform_matroid_exponential": exp_rows,
        "beta_ratio": {
            "0.5": oracles::beta_ratio(0.5)?,
            "1": oracles::beta_ratio(1.0)?,
            "2": oracles::beta_ratio(2.0)?,
        },
    });
    emit(out.as_ref(), &json_envelope(&cfg, body)?)?;
    Ok(0)
}
