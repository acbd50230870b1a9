//! The `2k`-th power mean of `Σ_a e((m a^3 + a)/p)` against its Catalan
//! main term `C_k p^{k+1}`.

use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::exp_sums::{power_mean, PhaseFamily, PowerMeanResult};
use crate::identities::{
    cubic_eighth_closed_form, cubic_fourth_closed_form, cubic_sixth_closed_form,
};

pub const MAX_K: u32 = 6;

/// `binomial(2k, k) / (k + 1)`
pub fn catalan(k: u32) -> u128 {
    // C_{j+1} = C_j · 2(2j+1)/(j+2), exact at every step
    (0..k).fold(1u128, |c, j| {
        let j = u128::from(j);
        c * 2 * (2 * j + 1) / (j + 2)
    })
}

fn check_args(p: u64, k: u32) -> Result<()> {
    if p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if k == 0 || k > MAX_K {
        return Err(Error::InvalidArgument(format!(
            "k must be in 1..={MAX_K} (got {k})"
        )));
    }
    Ok(())
}

/// `Σ_{m=0}^{p-1} |Σ_{a=0}^{p-1} e((m a^3 + a)/p)|^{2k}` with its rounding data.
pub fn conjecture_power_mean(p: u64, k: u32) -> Result<PowerMeanResult> {
    check_args(p, k)?;
    power_mean(
        &PhaseFamily::cubic_conjecture(),
        &arith::Modulus::new(p)?,
        2 * k,
    )
}

/// The exact integer value; fails when the rounding residual is out of tolerance.
pub fn conjecture_value(p: u64, k: u32) -> Result<i128> {
    conjecture_power_mean(p, k)?.checked()
}

/// Closed form of the conjecture sum where one is known (the `m = 0` term is 0).
///
/// `k = 1` holds for every odd prime; `k = 2, 3, 4` need `p > 3`.
pub fn closed_form(p: u64, k: u32) -> Option<i128> {
    let pi = p as i128;
    match k {
        1 if (p - 1).is_multiple_of(3) => Some(pi * pi - 2 * pi),
        1 => Some(pi * pi),
        2 if p > 3 => Some(cubic_fourth_closed_form(p)),
        3 if p > 3 => cubic_sixth_closed_form(p).ok(),
        4 if p > 3 => cubic_eighth_closed_form(p).ok(),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureRow {
    pub p: u64,
    pub k: u32,
    pub value: i128,
    pub catalan: u128,
    pub main_term: i128,
    /// `(value - main_term) / p^{k + 1/2}`
    pub normalized_residual: f64,
    /// rounding residual of the power mean
    pub residual: f64,
    pub closed_form: Option<i128>,
}

impl ConjectureRow {
    pub fn matches_closed_form(&self) -> Option<bool> {
        self.closed_form.map(|c| c == self.value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub k: u32,
    pub rows: Vec<ConjectureRow>,
    pub max_abs_normalized_residual: f64,
    pub max_residual: f64,
    pub numeric_failures: Vec<u64>,
    pub closed_form_checked: usize,
    pub closed_form_mismatches: Vec<u64>,
}

impl ConjectureReport {
    pub fn all_consistent(&self) -> bool {
        self.numeric_failures.is_empty() && self.closed_form_mismatches.is_empty()
    }
}

pub fn conjecture_row(p: u64, k: u32) -> Result<ConjectureRow> {
    let pm = conjecture_power_mean(p, k)?;
    let catalan = catalan(k);
    let main_term = catalan as i128 * (p as i128).pow(k + 1);
    let scale = (p as f64).powf(f64::from(k) + 0.5);
    Ok(ConjectureRow {
        p,
        k,
        value: pm.rounded,
        catalan,
        main_term,
        normalized_residual: (pm.rounded - main_term) as f64 / scale,
        residual: pm.residual,
        closed_form: closed_form(p, k),
    })
}

/// Rows for every odd prime in `[lo, hi]`, ascending.
pub fn conjecture_report(k: u32, lo: u64, hi: u64) -> Result<ConjectureReport> {
    if k == 0 || k > MAX_K {
        return Err(Error::InvalidArgument(format!(
            "k must be in 1..={MAX_K} (got {k})"
        )));
    }
    let primes = arith::odd_primes_in_range(lo, hi);
    let rows = primes
        .par_iter()
        .map(|&p| conjecture_row(p, k))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ConjectureReport {
        k,
        rows: Vec::new(),
        max_abs_normalized_residual: 0.0,
        max_residual: 0.0,
        numeric_failures: Vec::new(),
        closed_form_checked: 0,
        closed_form_mismatches: Vec::new(),
    };
    for row in &rows {
        report.max_abs_normalized_residual = report
            .max_abs_normalized_residual
            .max(row.normalized_residual.abs());
        report.max_residual = report.max_residual.max(row.residual);
        if row.residual >= crate::exp_sums::RESIDUAL_TOLERANCE {
            report.numeric_failures.push(row.p);
        }
        if let Some(ok) = row.matches_closed_form() {
            report.closed_form_checked += 1;
            if !ok {
                report.closed_form_mismatches.push(row.p);
            }
        }
    }
    report.rows = rows;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u128, k: u128) -> u128 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn catalan_examples() {
        assert_eq!(catalan(1), 1);
        assert_eq!(catalan(4), 14);
        assert_eq!(catalan(6), 132);
        for k in 1..=30u32 {
            let k1 = u128::from(k);
            assert_eq!(catalan(k), binomial(2 * k1, k1) / (k1 + 1));
        }
    }

    #[test]
    fn conjecture_value_examples() {
        assert_eq!(conjecture_value(5, 1).unwrap(), 25);
        assert_eq!(conjecture_value(7, 1).unwrap(), 35);
        assert_eq!(conjecture_value(7, 2).unwrap(), 343);
        assert!(conjecture_value(9, 1).is_err());
        assert!(conjecture_value(7, 7).is_err());
        assert!(conjecture_value(7, 0).is_err());
    }

    #[test]
    fn k1_counting_formula() {
        for p in arith::odd_primes_in_range(3, 120) {
            assert_eq!(
                Some(conjecture_value(p, 1).unwrap()),
                closed_form(p, 1),
                "p={p}"
            );
        }
    }

    #[test]
    fn report_rows_and_summary() {
        let r = conjecture_report(2, 5, 60).unwrap();
        assert_eq!(r.rows.len(), arith::odd_primes_in_range(5, 60).len());
        assert!(r.rows.windows(2).all(|w| w[0].p < w[1].p));
        assert!(r.all_consistent());
        assert_eq!(r.closed_form_checked, r.rows.len());
        for row in &r.rows {
            assert_eq!(row.main_term, 2 * (row.p as i128).pow(3));
            let bound = row.catalan as f64 + r.max_abs_normalized_residual / (row.p as f64).sqrt();
            let lower = row.catalan as f64 - r.max_abs_normalized_residual / (row.p as f64).sqrt();
            let ratio = row.value as f64 / (row.p as f64).powi(3);
            assert!(ratio <= bound + 1e-12 && ratio >= lower - 1e-12);
        }
        assert!(conjecture_report(0, 5, 60).is_err());
    }

    #[test]
    fn report_skips_closed_form_at_three() {
        let r = conjecture_report(3, 3, 13).unwrap();
        assert_eq!(r.rows[0].p, 3);
        assert_eq!(r.rows[0].closed_form, None);
        assert_eq!(r.closed_form_checked, r.rows.len() - 1);
        assert!(r.closed_form_mismatches.is_empty());
    }
}
