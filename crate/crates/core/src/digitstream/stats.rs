use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use super::{digit_value, DigitError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatTest {
    /// Digit frequencies against the uniform distribution.
    Chi2,
    /// Frequencies of non-overlapping digit pairs.
    Serial,
    /// Runs above and below the middle of the alphabet.
    Runs,
}

impl StatTest {
    pub const ALL: [StatTest; 3] = [StatTest::Chi2, StatTest::Serial, StatTest::Runs];

    pub fn name(self) -> &'static str {
        match self {
            StatTest::Chi2 => "chi2",
            StatTest::Serial => "serial",
            StatTest::Runs => "runs",
        }
    }

    fn min_digits(self) -> usize {
        match self {
            StatTest::Chi2 => 100,
            StatTest::Serial | StatTest::Runs => 1000,
        }
    }
}

impl std::str::FromStr for StatTest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StatTest::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown test '{s}' (expected chi2, serial or runs)"))
    }
}

/// Statistic with its p-value. `df` is set for chi-square tests; the runs
/// test reports a z-score as its statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct StatReport {
    pub test: StatTest,
    pub n: usize,
    pub statistic: f64,
    pub df: Option<u32>,
    pub p_value: f64,
}

impl StatReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "test": self.test.name(),
            "n": self.n,
            "statistic": self.statistic,
            "df": self.df,
            "p_value": self.p_value,
        })
    }
}

fn chi_square(counts: &[u64], total: u64) -> (f64, u32, f64) {
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let df = counts.len() as u32 - 1;
    let p = ChiSquared::new(df as f64).expect("positive df").sf(stat);
    (stat, df, p)
}

fn runs(values: &[u32], base: u32) -> (f64, f64) {
    let high: Vec<bool> = values.iter().map(|&v| 2 * v >= base).collect();
    let n1 = high.iter().filter(|&&h| h).count() as f64;
    let n2 = high.len() as f64 - n1;
    let n = n1 + n2;
    let r = 1 + high.windows(2).filter(|w| w[0] != w[1]).count();
    let mean = 2.0 * n1 * n2 / n + 1.0;
    let var = (mean - 1.0) * (mean - 2.0) / (n - 1.0);
    if var <= 0.0 {
        return (f64::INFINITY, 0.0);
    }
    let z = (r as f64 - mean) / var.sqrt();
    let p = 2.0 * Normal::new(0.0, 1.0).expect("standard normal").sf(z.abs());
    (z, p)
}

/// Frequency diagnostics over a digit string in `base`. These describe
/// the sample and make no claim about unpredictability.
pub fn stat_tests(digits: &str, base: u32, tests: &[StatTest]) -> Result<Vec<StatReport>, DigitError> {
    if !(2..=36).contains(&base) {
        return Err(DigitError::InvalidBase(base));
    }
    let values: Vec<u32> = digits
        .bytes()
        .filter_map(digit_value)
        .filter(|&v| v < base)
        .collect();
    let n = values.len();
    tests
        .iter()
        .map(|&test| {
            if n < test.min_digits() {
                return Err(DigitError::TooFewDigits {
                    test: test.name(),
                    needed: test.min_digits(),
                    got: n,
                });
            }
            let report = match test {
                StatTest::Chi2 => {
                    let mut counts = vec![0u64; base as usize];
                    for &v in &values {
                        counts[v as usize] += 1;
                    }
                    let (statistic, df, p_value) = chi_square(&counts, n as u64);
                    StatReport { test, n, statistic, df: Some(df), p_value }
                }
                StatTest::Serial => {
                    let mut counts = vec![0u64; (base * base) as usize];
                    for pair in values.chunks_exact(2) {
                        counts[(pair[0] * base + pair[1]) as usize] += 1;
                    }
                    let (statistic, df, p_value) = chi_square(&counts, (n / 2) as u64);
                    StatReport { test, n, statistic, df: Some(df), p_value }
                }
                StatTest::Runs => {
                    let (statistic, p_value) = runs(&values, base);
                    StatReport { test, n, statistic, df: None, p_value }
                }
            };
            Ok(report)
        })
        .collect()
}
