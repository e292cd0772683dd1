//! Wilson score intervals, chi-square tests with optional Yates continuity
//! correction, upper-tail p-values, and Cramér's V.
//!
//! The p-value comes from the regularized upper incomplete gamma function
//! Q(df/2, x/2), computed with a series / continued-fraction hybrid to an
//! absolute tolerance of 1e-12, so no external statistics dependency is
//! needed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// z for the 95% level, fixed for reproducibility (not the rounded 1.96).
pub const Z_95: f64 = 1.959964;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("confidence must lie strictly between 0 and 1, got {0}")]
    InvalidConfidence(f64),
    #[error("degenerate table: every row and column sum must be positive")]
    DegenerateTable,
    #[error("Yates continuity correction applies to 2x2 tables only, got {rows}x{cols}")]
    YatesOnNon2x2 { rows: usize, cols: usize },
    #[error("proportion has successes {successes} > trials {trials}")]
    InvalidProportion { successes: u64, trials: u64 },
    #[error("chi-square needs at least 2 rows and 2 columns")]
    TooFewCategories,
}

/// successes / trials, with successes <= trials and trials >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64) -> Result<Self, StatsError> {
        if trials == 0 || successes > trials {
            return Err(StatsError::InvalidProportion { successes, trials });
        }
        Ok(Proportion { successes, trials })
    }

    pub fn rate(self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Wilson score interval bounds for a binomial proportion.
///
/// Preferable to the normal approximation at small sample sizes: bounds stay
/// inside [0, 1] and zero successes pin the lower bound at exactly 0.
pub fn wilson_interval(p: Proportion, confidence: f64) -> Result<(f64, f64), StatsError> {
    if !(0.0 < confidence && confidence < 1.0) {
        return Err(StatsError::InvalidConfidence(confidence));
    }
    let z = if (confidence - 0.95).abs() < 1e-9 {
        Z_95
    } else {
        normal_quantile(0.5 + confidence / 2.0)
    };
    let n = p.trials as f64;
    let p_hat = p.rate();
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p_hat + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt();
    let lower = if p.successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let upper = if p.successes == p.trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    Ok((lower, upper))
}

/// Observed counts for an r x c categorical comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// counts[row][col]
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new<R, C>(row_labels: Vec<R>, col_labels: Vec<C>, counts: Vec<Vec<u64>>) -> Self
    where
        R: Into<String>,
        C: Into<String>,
    {
        ContingencyTable {
            row_labels: row_labels.into_iter().map(Into::into).collect(),
            col_labels: col_labels.into_iter().map(Into::into).collect(),
            counts,
        }
    }

    /// Success/failure table from per-row (successes, trials) pairs.
    pub fn from_rates<R: Into<String>>(rows: Vec<(R, u64, u64)>) -> Self {
        let mut row_labels = Vec::new();
        let mut counts = Vec::new();
        for (label, successes, trials) in rows {
            row_labels.push(label.into());
            counts.push(vec![successes, trials - successes]);
        }
        ContingencyTable {
            row_labels,
            col_labels: vec!["compiled".into(), "failed".into()],
            counts,
        }
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.counts.first().map(Vec::len).unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub cramers_v: f64,
    pub yates_applied: bool,
    /// Smallest expected cell count, for the assumption check (>= 5).
    pub min_expected: f64,
}

/// Pearson chi-square test of independence with Cramér's V.
///
/// With `yates` (2x2 only) the statistic uses (|O-E| - 0.5)^2 / E.
pub fn chi_square(table: &ContingencyTable, yates: bool) -> Result<ChiSquareResult, StatsError> {
    let r = table.rows();
    let c = table.cols();
    if r < 2 || c < 2 {
        return Err(StatsError::TooFewCategories);
    }
    if yates && (r != 2 || c != 2) {
        return Err(StatsError::YatesOnNon2x2 { rows: r, cols: c });
    }

    let row_sums: Vec<f64> = table.counts.iter().map(|row| row.iter().sum::<u64>() as f64).collect();
    let col_sums: Vec<f64> = (0..c)
        .map(|j| table.counts.iter().map(|row| row[j]).sum::<u64>() as f64)
        .collect();
    let n: f64 = row_sums.iter().sum();
    if row_sums.iter().chain(col_sums.iter()).any(|&s| s <= 0.0) {
        return Err(StatsError::DegenerateTable);
    }

    let mut statistic = 0.0;
    let mut min_expected = f64::INFINITY;
    for i in 0..r {
        for j in 0..c {
            let expected = row_sums[i] * col_sums[j] / n;
            min_expected = min_expected.min(expected);
            let observed = table.counts[i][j] as f64;
            let diff = if yates {
                ((observed - expected).abs() - 0.5).max(0.0)
            } else {
                observed - expected
            };
            statistic += diff * diff / expected;
        }
    }

    let df = (r - 1) * (c - 1);
    let p_value = chi_square_p_value(statistic, df);
    let cramers_v = (statistic / (n * (r.min(c) - 1) as f64)).sqrt();

    Ok(ChiSquareResult {
        statistic,
        df,
        p_value,
        cramers_v,
        yates_applied: yates,
        min_expected,
    })
}

/// The paper's convention: Yates correction for 2x2 tables, plain Pearson
/// otherwise.
pub fn chi_square_auto(table: &ContingencyTable) -> Result<ChiSquareResult, StatsError> {
    let yates = table.rows() == 2 && table.cols() == 2;
    chi_square(table, yates)
}

/// Upper-tail probability of the chi-square distribution:
/// Q(df/2, x/2). For df=2 this reduces to exp(-x/2).
pub fn chi_square_p_value(statistic: f64, df: usize) -> f64 {
    debug_assert!(statistic >= 0.0);
    if statistic <= 0.0 {
        return 1.0;
    }
    gamma_q(df as f64 / 2.0, statistic / 2.0)
}

// ---------------------------------------------------------------------------
// regularized incomplete gamma (series / continued-fraction hybrid)
// ---------------------------------------------------------------------------

const GAMMA_TOL: f64 = 1e-12;
const GAMMA_MAX_ITER: usize = 500;

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

/// P(a, x) by power series, converges fast for x < a + 1.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..GAMMA_MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * GAMMA_TOL {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Q(a, x) by Lentz continued fraction, converges fast for x >= a + 1.
fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < GAMMA_TOL {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Lanczos approximation of ln Γ(x), accurate to ~1e-13 for x > 0.
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 14] = [
        57.156_235_665_862_92,
        -59.597_960_355_475_49,
        14.136_097_974_741_747,
        -0.491_913_816_097_620_2,
        3.399_464_998_481_189e-5,
        4.652_362_892_704_858e-5,
        -9.837_447_530_487_956e-5,
        1.580_887_032_249_125e-4,
        -2.102_644_417_241_049e-4,
        2.174_396_181_152_126e-4,
        -1.643_181_065_367_639e-4,
        8.441_822_398_385_275e-5,
        -2.619_083_840_158_141e-5,
        3.689_918_265_953_162e-6,
    ];
    debug_assert!(x > 0.0);
    let mut y = x;
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut series = 0.999_999_999_999_997_1;
    for &coeff in &COEFFS {
        y += 1.0;
        series += coeff / y;
    }
    tmp + (2.506_628_274_631_000_5 * series / x).ln()
}

/// Standard normal quantile (Acklam's rational approximation), used only for
/// confidences other than the fixed 95% level.
fn normal_quantile(p: f64) -> f64 {
    debug_assert!(0.0 < p && p < 1.0);
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_690e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wilson(successes: u64, trials: u64) -> (f64, f64) {
        wilson_interval(Proportion::new(successes, trials).unwrap(), 0.95).unwrap()
    }

    #[test]
    fn wilson_overall_rate() {
        let (lo, hi) = wilson(56, 240);
        assert!((lo - 0.184).abs() < 1e-3, "lo={lo}");
        assert!((hi - 0.291).abs() < 1e-3, "hi={hi}");
    }

    #[test]
    fn wilson_chain_of_thought_rate() {
        let (lo, hi) = wilson(4, 60);
        assert!((lo - 0.026).abs() < 1e-3, "lo={lo}");
        assert!((hi - 0.159).abs() < 1e-3, "hi={hi}");
    }

    #[test]
    fn wilson_critical_rate() {
        let (lo, hi) = wilson(2, 56);
        assert!((lo - 0.010).abs() < 1e-3, "lo={lo}");
        assert!((hi - 0.121).abs() < 1e-3, "hi={hi}");
    }

    #[test]
    fn wilson_unsafe_error_handling_rate() {
        let (lo, hi) = wilson(32, 56);
        assert!((lo - 0.441).abs() < 1e-3, "lo={lo}");
        assert!((hi - 0.692).abs() < 1e-3, "hi={hi}");
    }

    #[test]
    fn wilson_zero_successes_pins_lower_bound() {
        let (lo, _) = wilson(0, 10);
        assert_eq!(lo, 0.0);
    }

    #[test]
    fn wilson_all_successes_pins_upper_bound() {
        let (_, hi) = wilson(10, 10);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn wilson_rejects_bad_confidence() {
        let p = Proportion::new(1, 2).unwrap();
        assert!(matches!(wilson_interval(p, 0.0), Err(StatsError::InvalidConfidence(_))));
        assert!(matches!(wilson_interval(p, 1.0), Err(StatsError::InvalidConfidence(_))));
    }

    #[test]
    fn prompt_table_chi_square() {
        let table = ContingencyTable::from_rates(vec![
            ("zero_shot", 21, 60),
            ("security_focused", 17, 60),
            ("constraint_based", 14, 60),
            ("chain_of_thought", 4, 60),
        ]);
        let result = chi_square(&table, false).unwrap();
        assert!((result.statistic - 14.72).abs() < 0.01, "stat={}", result.statistic);
        assert_eq!(result.df, 3);
        assert!((result.p_value - 0.002).abs() < 5e-4, "p={}", result.p_value);
        assert!((result.cramers_v - 0.248).abs() < 1e-3, "v={}", result.cramers_v);
    }

    #[test]
    fn model_table_chi_square() {
        let table = ContingencyTable::from_rates(vec![
            ("deepseek", 20, 80),
            ("gpt4o", 18, 80),
            ("gemini", 18, 80),
        ]);
        let result = chi_square(&table, false).unwrap();
        assert!((result.statistic - 0.19).abs() < 0.01, "stat={}", result.statistic);
        assert_eq!(result.df, 2);
        assert!((result.p_value - 0.911).abs() < 1e-3, "p={}", result.p_value);
        assert!((result.cramers_v - 0.028).abs() < 1e-3, "v={}", result.cramers_v);
    }

    #[test]
    fn algorithm_table_chi_square_with_yates() {
        let table = ContingencyTable::from_rates(vec![
            ("aes_256_gcm", 41, 120),
            ("chacha20_poly1305", 15, 120),
        ]);
        let result = chi_square(&table, true).unwrap();
        assert!((result.statistic - 14.56).abs() < 0.02, "stat={}", result.statistic);
        assert_eq!(result.df, 1);
        assert!(result.p_value < 0.001);
        assert!((result.cramers_v - 0.246).abs() < 1e-3, "v={}", result.cramers_v);
        assert!(result.yates_applied);

        // without the correction the statistic is the plain Pearson 15.74
        let plain = chi_square(&table, false).unwrap();
        assert!((plain.statistic - 15.74).abs() < 0.02, "stat={}", plain.statistic);
    }

    #[test]
    fn uniform_2x2_is_perfect_independence() {
        let table = ContingencyTable::new(
            vec!["a", "b"],
            vec!["x", "y"],
            vec![vec![10, 10], vec![10, 10]],
        );
        let result = chi_square(&table, false).unwrap();
        assert_eq!(result.statistic, 0.0);
        assert_eq!(result.p_value, 1.0);
        assert_eq!(result.cramers_v, 0.0);
    }

    #[test]
    fn yates_on_non_2x2_is_rejected() {
        let table = ContingencyTable::from_rates(vec![("a", 1, 10), ("b", 2, 10), ("c", 3, 10)]);
        assert!(matches!(
            chi_square(&table, true),
            Err(StatsError::YatesOnNon2x2 { rows: 3, cols: 2 })
        ));
    }

    #[test]
    fn degenerate_table_is_rejected() {
        let table = ContingencyTable::new(
            vec!["a", "b"],
            vec!["x", "y"],
            vec![vec![0, 0], vec![3, 4]],
        );
        assert_eq!(chi_square(&table, false), Err(StatsError::DegenerateTable));
    }

    #[test]
    fn p_value_for_rounded_model_statistic() {
        // the paper's chi2 of 0.19 is rounded; the p for the rounded input
        let p = chi_square_p_value(0.19, 2);
        assert!((p - 0.9094).abs() < 1e-3, "p={p}");
    }

    #[test]
    fn p_value_for_prompt_statistic() {
        let p = chi_square_p_value(14.72, 3);
        assert!((p - 0.00207).abs() < 2e-4, "p={p}");
    }

    #[test]
    fn p_value_at_zero_is_one() {
        for df in [1, 2, 3, 10] {
            assert_eq!(chi_square_p_value(0.0, df), 1.0);
        }
    }

    #[test]
    fn p_value_df2_reduces_to_exp() {
        for x in [0.1, 0.5, 1.0, 3.0, 7.0, 20.0] {
            let p = chi_square_p_value(x, 2);
            assert!((p - (-x / 2.0).exp()).abs() < 1e-10, "x={x} p={p}");
        }
    }

    #[test]
    fn p_value_decreases_in_statistic() {
        for df in [1, 2, 3, 5] {
            let mut prev = 1.0;
            for i in 1..60 {
                let p = chi_square_p_value(i as f64 * 0.5, df);
                assert!(p < prev, "df={df} i={i}");
                prev = p;
            }
        }
    }

    #[test]
    fn ln_gamma_known_values() {
        // Γ(1)=1, Γ(2)=1, Γ(3)=2, Γ(0.5)=sqrt(pi)
        assert!(ln_gamma(1.0).abs() < 1e-12);
        assert!(ln_gamma(2.0).abs() < 1e-12);
        assert!((ln_gamma(3.0) - 2.0f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
    }

    #[test]
    fn brute_force_cross_check_on_random_tables() {
        // 50 deterministic pseudo-random 2x3 tables; statistic must match a
        // direct sum over exact expected counts to 1e-9.
        let mut state = 0x243F_6A88_85A3_08D3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 50) + 1
        };
        for _ in 0..50 {
            let counts = vec![
                vec![next(), next(), next()],
                vec![next(), next(), next()],
            ];
            let table = ContingencyTable::new(vec!["r0", "r1"], vec!["c0", "c1", "c2"], counts.clone());
            let result = chi_square(&table, false).unwrap();

            let row: Vec<f64> = counts.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
            let col: Vec<f64> = (0..3)
                .map(|j| counts.iter().map(|r| r[j]).sum::<u64>() as f64)
                .collect();
            let n: f64 = row.iter().sum();
            let mut expected_stat = 0.0;
            for i in 0..2 {
                for j in 0..3 {
                    let e = row[i] * col[j] / n;
                    let o = counts[i][j] as f64;
                    expected_stat += (o - e) * (o - e) / e;
                }
            }
            assert!((result.statistic - expected_stat).abs() < 1e-9);
        }
    }

    #[test]
    fn normal_quantile_sanity() {
        assert!((normal_quantile(0.975) - 1.959964).abs() < 1e-4);
        assert!(normal_quantile(0.5).abs() < 1e-9);
        assert!((normal_quantile(0.995) - 2.575829).abs() < 1e-4);
    }
}
