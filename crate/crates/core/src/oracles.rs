//! Closed-form reference values used as ground truth by tests and the
//! experiment CLI: uniform-matroid order-statistic moments, the triangle
//! two-terminal path example, minimum-spanning-tree constants, and the
//! Beta(alpha,1) ratio.

use serde::Serialize;

use crate::{Error, Result};

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k < 1 || k + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "uniform matroid closed forms require 1 <= k <= n-1, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Exact moments of the nominal and VCG cost for `U_{n,k}` with i.i.d.
/// Uniform(0,1) costs. `var_diff` is the variance of `vcg - 2 * nominal`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct UniformMatroidStats {
    pub e_cstar: f64,
    pub e_vcg: f64,
    pub var_cstar: f64,
    pub var_vcg: f64,
    pub var_diff: f64,
}

pub fn uniform_matroid_uniform_stats(n: usize, k: usize) -> Result<UniformMatroidStats> {
    check_nk(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let e_cstar = kf * (kf + 1.0) / (2.0 * (nf + 1.0));
    let e_vcg = kf * (kf + 1.0) / (nf + 1.0);
    let var_cstar = kf * (kf + 1.0) * (4.0 * nf * kf + 2.0 * nf + kf + 2.0 - 3.0 * kf * kf)
        / (12.0 * (nf + 1.0).powi(2) * (nf + 2.0));
    let var_vcg = kf * kf * (kf + 1.0) * (nf - kf) / ((nf + 1.0).powi(2) * (nf + 2.0));
    let var_diff = kf * (kf + 1.0) * (kf + 2.0) / (3.0 * (nf + 1.0) * (nf + 2.0));
    Ok(UniformMatroidStats {
        e_cstar,
        e_vcg,
        var_cstar,
        var_vcg,
        var_diff,
    })
}

/// Exact means for `U_{n,k}` with i.i.d. Exp(1) costs, as harmonic sums.
pub fn uniform_matroid_exponential_means(n: usize, k: usize) -> Result<(f64, f64)> {
    check_nk(n, k)?;
    let e_cstar: f64 = (1..=k).map(|j| j as f64 / (n - k + j) as f64).sum();
    let e_vcg: f64 = k as f64 * (1..=k + 1).map(|j| 1.0 / (n - j + 1) as f64).sum::<f64>();
    Ok((e_cstar, e_vcg))
}

/// Closed forms for the triangle two-terminal path family with i.i.d.
/// Uniform(0,1) costs: nominal `min(x1, x2+x3)`, VCG total
/// `max(x2+x3, 2*x1-x2-x3)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct K3PathUniform {
    pub e_cstar: f64,
    pub e_vcg: f64,
}

pub fn k3_path_uniform_stats() -> K3PathUniform {
    K3PathUniform {
        e_cstar: 11.0 / 24.0,
        e_vcg: 13.0 / 12.0,
    }
}

impl K3PathUniform {
    /// Joint density of (nominal, vcg) on `[0,1] x [0,2]`.
    pub fn density(&self, x: f64, y: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=2.0).contains(&y) {
            return Err(Error::InvalidParameter(format!(
                "density support is [0,1]x[0,2], got ({x}, {y})"
            )));
        }
        let mut f = 0.0;
        if x <= y && y <= 1.0 {
            f += y;
        }
        if y > 1.0 {
            f += 2.0 - y;
        }
        if x <= y.min(2.0 - y) {
            f += x / 2.0;
        }
        Ok(f)
    }

    /// Conditional expectation of the nominal cost given a VCG total of
    /// `y`; equals `(8/15) y` below 1 and dips afterwards.
    pub fn cond_mean(&self, y: f64) -> Result<f64> {
        if !(0.0..=2.0).contains(&y) {
            return Err(Error::InvalidParameter(format!(
                "conditional mean support is [0,2], got {y}"
            )));
        }
        Ok(if y <= 1.0 {
            8.0 / 15.0 * y
        } else {
            let w = 2.0 - y;
            (6.0 + 2.0 * w * w) / (12.0 + 3.0 * w)
        })
    }

    /// Marginal density of the VCG total on `[0,2]`.
    pub fn vcg_density(&self, y: f64) -> Result<f64> {
        if !(0.0..=2.0).contains(&y) {
            return Err(Error::InvalidParameter(format!(
                "marginal support is [0,2], got {y}"
            )));
        }
        Ok(if y <= 1.0 {
            1.25 * y * y
        } else {
            (2.0 - y) + 0.25 * (2.0 - y) * (2.0 - y)
        })
    }

    /// Density-weighted average of the conditional mean over a VCG-total
    /// window: the exact expectation a binned estimate converges to.
    pub fn bin_mean(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(0.0..=2.0).contains(&lo) || !(0.0..=2.0).contains(&hi) || lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "bin [{lo},{hi}] must sit inside [0,2]"
            )));
        }
        let simpson = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| -> f64 {
            let steps = 400;
            let h = (b - a) / steps as f64;
            let mut acc = f(a) + f(b);
            for i in 1..steps {
                acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
            }
            acc * h / 3.0
        };
        let num_f = |y: f64| self.cond_mean(y).unwrap() * self.vcg_density(y).unwrap();
        let den_f = |y: f64| self.vcg_density(y).unwrap();
        // split at the kink
        let (mut num, mut den) = (0.0, 0.0);
        for (a, b) in [(lo, hi.min(1.0)), (lo.max(1.0), hi)] {
            if b > a {
                num += simpson(a, b, &num_f);
                den += simpson(a, b, &den_f);
            }
        }
        Ok(num / den)
    }
}

/// Exact means for the triangle path family with i.i.d. Exp(1) costs.
pub fn k3_path_exponential_means() -> (f64, f64) {
    (0.75, 2.5)
}

/// Asymptotic minimum-spanning-tree constants for the complete graph
/// with Uniform(0,1) edge costs: the nominal cost tends to zeta(3), the
/// VCG total to twice that, and `n * Var` of the two costs tend to
/// `6 zeta(4) - 4 zeta(3)` and `24 zeta(4) - 18 zeta(3)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MstConstants {
    pub zeta3: f64,
    pub two_zeta3: f64,
    pub var_cstar_coeff: f64,
    pub var_vcg_coeff: f64,
}

pub fn mst_constants() -> MstConstants {
    let zeta3 = zeta(3.0);
    let zeta4 = zeta(4.0);
    MstConstants {
        zeta3,
        two_zeta3: 2.0 * zeta3,
        var_cstar_coeff: 6.0 * zeta4 - 4.0 * zeta3,
        var_vcg_coeff: 24.0 * zeta4 - 18.0 * zeta3,
    }
}

/// Riemann zeta by direct series with an Euler-Maclaurin tail; accurate
/// to well over 12 significant digits for s >= 2.
pub fn zeta(s: f64) -> f64 {
    let n = 1000usize;
    let head: f64 = (1..n).map(|i| (i as f64).powf(-s)).sum();
    let nf = n as f64;
    let tail = nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0;
    head + tail
}

/// The matroid Beta(alpha,1) cost ratio `E[nominal] / E[vcg] = a/(a+1)`.
pub fn beta_ratio(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "beta ratio requires alpha > 0, got {alpha}"
        )));
    }
    Ok(alpha / (alpha + 1.0))
}
