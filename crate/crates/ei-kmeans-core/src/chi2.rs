//! Pearson chi-square machinery: contingency expectations, statistic,
//! degrees of freedom, and upper-tail p-values.
//!
//! The p-value uses the regularized upper incomplete gamma function
//! `Q(df/2, x/2)`, computed with a series expansion for small arguments and
//! a Lentz continued fraction for large ones.

use alloc::vec::Vec;

use crate::{Error, Result};

/// A 2xK table of nonnegative counts: row 0 holds the training bin counts,
/// row 1 the test bin counts. Every row and column sum is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    train: Vec<u64>,
    test: Vec<u64>,
}

impl ContingencyTable {
    pub fn new(train: Vec<u64>, test: Vec<u64>) -> Result<Self> {
        if train.len() != test.len() {
            return Err(Error::LengthMismatch {
                expected: train.len(),
                found: test.len(),
            });
        }
        if train.len() < 2 {
            return Err(Error::TooFewBins {
                needed: 2,
                found: train.len(),
            });
        }
        if train.iter().sum::<u64>() == 0 || test.iter().sum::<u64>() == 0 {
            return Err(Error::ZeroMargin("row"));
        }
        if train.iter().zip(&test).any(|(&a, &b)| a + b == 0) {
            return Err(Error::ZeroMargin("column"));
        }
        Ok(Self { train, test })
    }

    pub fn k(&self) -> usize {
        self.train.len()
    }

    pub fn train(&self) -> &[u64] {
        &self.train
    }

    pub fn test(&self) -> &[u64] {
        &self.test
    }

    /// All 2K observed cells, row-major.
    pub fn observed(&self) -> Vec<f64> {
        self.train
            .iter()
            .chain(&self.test)
            .map(|&c| c as f64)
            .collect()
    }
}

/// Expected frequencies `E(i,j) = row_sum(i) * col_sum(j) / total`, returned
/// row-major with the same 2xK shape as the table. Zero cells are legal;
/// zero margins are rejected by [`ContingencyTable::new`].
pub fn contingency_expected(table: &ContingencyTable) -> Vec<f64> {
    let k = table.k();
    let row_sums = [
        table.train.iter().sum::<u64>() as f64,
        table.test.iter().sum::<u64>() as f64,
    ];
    let col_sums: Vec<f64> = (0..k)
        .map(|j| (table.train[j] + table.test[j]) as f64)
        .collect();
    let total = row_sums[0] + row_sums[1];
    let mut out = Vec::with_capacity(2 * k);
    for rs in row_sums {
        for cs in &col_sums {
            out.push(rs * cs / total);
        }
    }
    out
}

/// `sum (O - E)^2 / E` over all cells.
pub fn chi2_statistic(observed: &[f64], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() {
        return Err(Error::LengthMismatch {
            expected: expected.len(),
            found: observed.len(),
        });
    }
    let mut acc = 0.0;
    for (i, (&o, &e)) in observed.iter().zip(expected).enumerate() {
        if !(e > 0.0) {
            return Err(Error::NonPositiveExpected(i));
        }
        let diff = o - e;
        acc += diff * diff / e;
    }
    Ok(acc)
}

/// `(rows - 1) * (cols - 1)`.
pub fn degrees_of_freedom(rows: usize, cols: usize) -> Result<usize> {
    if rows < 2 || cols < 2 {
        return Err(Error::DegenerateTable);
    }
    Ok((rows - 1) * (cols - 1))
}

/// Upper-tail probability `P(X >= x)` for `X ~ chi-square(df)`.
pub fn chi2_pvalue(x: f64, df: usize) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::NegativeStatistic(x));
    }
    if df == 0 {
        return Err(Error::InvalidParameter("df must be at least 1"));
    }
    Ok(gamma_q(df as f64 / 2.0, x / 2.0))
}

/// Outcome of a two-sample chi-square test.
#[derive(Debug, Clone, PartialEq)]
pub struct Chi2Outcome {
    pub reject: bool,
    pub p_value: f64,
    pub statistic: f64,
    pub df: usize,
}

/// Pearson chi-square test on a 2xK contingency table at level `alpha`;
/// rejects when `p < alpha`.
pub fn chi2_test(table: &ContingencyTable, alpha: f64) -> Result<Chi2Outcome> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let expected = contingency_expected(table);
    let statistic = chi2_statistic(&table.observed(), &expected)?;
    let df = degrees_of_freedom(2, table.k())?;
    let p_value = chi2_pvalue(statistic, df)?;
    Ok(Chi2Outcome {
        reject: p_value < alpha,
        p_value,
        statistic,
        df,
    })
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma.

/// Lanczos approximation (g = 7, n = 9) of `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * libm::log(2.0 * core::f64::consts::PI) + (x + 0.5) * libm::log(t) - t + libm::log(acc)
}

const GAMMA_EPS: f64 = 1e-16;
const GAMMA_MAX_ITER: usize = 500;

/// Lower regularized incomplete gamma `P(a, x)` via its series expansion;
/// converges quickly for `x < a + 1`.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..GAMMA_MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    sum * libm::exp(-x + a * libm::log(x) - ln_gamma(a))
}

/// Upper regularized incomplete gamma `Q(a, x)` via the Lentz continued
/// fraction; converges quickly for `x >= a + 1`.
fn gamma_q_cf(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    h * libm::exp(-x + a * libm::log(x) - ln_gamma(a))
}

/// Regularized upper incomplete gamma `Q(a, x)` for `a > 0`, `x >= 0`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}
