//! Statistics helpers for the Monte Carlo lab: moments with standard
//! errors, identity checks gated in standard-error units, regression
//! through the origin, and the Kolmogorov-Smirnov test.
//!
//! Standard errors come from the empirical spread of per-replication
//! influence values (the replication samples themselves for a mean,
//! centered squares for a variance, centered cross products for a
//! covariance), which keeps every derived check on the same footing.

use serde::Serialize;

/// A point estimate with its standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Moment {
    pub value: f64,
    pub se: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn mean_moment(xs: &[f64]) -> Moment {
    let m = mean(xs);
    let n = xs.len() as f64;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    Moment {
        value: m,
        se: (var / n).sqrt(),
    }
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Variance with the standard error of the centered-square influence.
pub fn variance_moment(xs: &[f64]) -> Moment {
    let m = mean(xs);
    let infl: Vec<f64> = xs.iter().map(|x| (x - m).powi(2)).collect();
    let mm = mean_moment(&infl);
    Moment {
        value: infl.iter().sum::<f64>() / (xs.len() as f64 - 1.0),
        se: mm.se,
    }
}

/// Unbiased sample covariance.
pub fn covariance(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, my) = (mean(xs), mean(ys));
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / (xs.len() as f64 - 1.0)
}

pub fn covariance_moment(xs: &[f64], ys: &[f64]) -> Moment {
    let (mx, my) = (mean(xs), mean(ys));
    let infl: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let mm = mean_moment(&infl);
    Moment {
        value: infl.iter().sum::<f64>() / (xs.len() as f64 - 1.0),
        se: mm.se,
    }
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    covariance(xs, ys) / (variance(xs) * variance(ys)).sqrt()
}

/// Least squares through the origin of `y` on `x`, with a
/// heteroscedasticity-robust (sandwich) standard error.
pub fn origin_slope(xs: &[f64], ys: &[f64]) -> Moment {
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = sxy / sxx;
    let meat: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - slope * x;
            x * x * r * r
        })
        .sum();
    Moment {
        value: slope,
        se: meat.sqrt() / sxx,
    }
}

/// One line of a test-suite ledger: an identity `lhs = rhs` checked at
/// `gate` standard errors of the per-replication difference.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub se: f64,
    pub z: f64,
    pub pass: bool,
}

impl IdentityCheck {
    /// Two-sided check from influence values of the difference.
    pub fn two_sided(name: &str, lhs: f64, rhs: f64, diff_influence: &[f64], gate: f64) -> Self {
        let se = mean_moment(diff_influence).se;
        let z = if se > 0.0 {
            (lhs - rhs) / se
        } else if lhs == rhs {
            0.0
        } else {
            f64::INFINITY
        };
        IdentityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            se,
            z,
            pass: z.abs() <= gate,
        }
    }

    /// One-sided check that `lhs < rhs` by at least `gate` standard
    /// errors.
    pub fn strictly_below(name: &str, lhs: f64, rhs: f64, diff_influence: &[f64], gate: f64) -> Self {
        let se = mean_moment(diff_influence).se;
        let z = if se > 0.0 { (rhs - lhs) / se } else { f64::INFINITY };
        IdentityCheck {
            name: name.to_string(),
            lhs,
            rhs,
            se,
            z,
            pass: z >= gate,
        }
    }
}

/// Supremum distance between sorted values in [0,1] and the uniform CDF.
pub fn ks_statistic_uniform(sorted_unit: &[f64]) -> f64 {
    let n = sorted_unit.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted_unit.iter().enumerate() {
        d = d
            .max((x - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - x).abs());
    }
    d
}

/// Kolmogorov distribution survival function `Q(lambda)`, the asymptotic
/// probability that the scaled KS statistic exceeds `lambda`. Small and
/// large arguments use the two standard series.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    if lambda < 0.755 {
        // theta-function form, fast for small lambda
        let f = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let sum = (-f).exp() + (-9.0 * f).exp() + (-25.0 * f).exp();
        return 1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j as f64).powi(2) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value of the one-sample KS statistic `d` at sample size `n`.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    kolmogorov_sf((n as f64).sqrt() * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn mean_and_variance_basics() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), 2.5);
        assert!((variance(&xs) - 5.0 / 3.0).abs() < 1e-12);
        let m = mean_moment(&xs);
        assert!((m.se - (5.0 / 3.0 / 4.0f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn covariance_of_identical_series_is_variance() {
        let xs = [0.3, 1.7, 0.9, 2.4, 0.1];
        assert!((covariance(&xs, &xs) - variance(&xs)).abs() < 1e-12);
        assert!((pearson(&xs, &xs) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn origin_slope_recovers_a_linear_law() {
        let xs: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x).collect();
        let m = origin_slope(&xs, &ys);
        assert!((m.value - 0.5).abs() < 1e-12);
        assert!(m.se < 1e-12);
    }

    #[test]
    fn origin_slope_with_noise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>() + 0.5).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 0.5 * x + 0.1 * (rng.random::<f64>() - 0.5))
            .collect();
        let m = origin_slope(&xs, &ys);
        assert!((m.value - 0.5).abs() < 4.0 * m.se);
        assert!(m.se < 0.001);
    }

    #[test]
    fn identity_check_gates() {
        let diffs: Vec<f64> = (0..1000).map(|i| (i % 7) as f64 - 3.0).collect();
        let ok = IdentityCheck::two_sided("same", 1.0, 1.0, &diffs, 3.0);
        assert!(ok.pass);
        let bad = IdentityCheck::two_sided("off", 1.0, 2.0, &diffs, 3.0);
        assert!(!bad.pass);
        let exact = IdentityCheck::two_sided("exact", 2.0, 2.0, &[0.0; 8], 3.0);
        assert!(exact.pass && exact.z == 0.0);
    }

    #[test]
    fn ks_distribution_reference_values() {
        // Q(0.5) ~ 0.9639, Q(1.0) ~ 0.2700, Q(1.36) ~ 0.0497, Q(1.63) ~ 0.0098
        assert!((kolmogorov_sf(0.5) - 0.9639).abs() < 5e-4);
        assert!((kolmogorov_sf(1.0) - 0.2700).abs() < 5e-4);
        assert!((kolmogorov_sf(1.36) - 0.0497).abs() < 5e-4);
        assert!((kolmogorov_sf(1.63) - 0.0098).abs() < 5e-4);
        assert_eq!(kolmogorov_sf(0.05), 1.0);
    }

    #[test]
    fn ks_test_accepts_uniform_and_rejects_skew() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut unif: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        unif.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let p = ks_pvalue(ks_statistic_uniform(&unif), unif.len());
        assert!(p > 0.01, "uniform rejected: p={p}");

        let mut skew: Vec<f64> = unif.iter().map(|u| u.powi(2)).collect();
        skew.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let p = ks_pvalue(ks_statistic_uniform(&skew), skew.len());
        assert!(p < 1e-6, "skewed accepted: p={p}");
    }
}
