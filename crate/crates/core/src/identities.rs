//! Registry of closed-form power-mean and character-sum identities.
//!
//! Each entry pairs an LHS recipe (a brute-force power mean or a character
//! sum combination) with an integer closed form and an applicability
//! predicate. Inapplicable moduli are reported as skips, never as failures.

use rayon::prelude::*;

use crate::arith::{self, Modulus};
use crate::char_sums::{corollary1_check, ning_wang_c, salie_twisted_char_sum};
use crate::error::{Error, Result};
use crate::exp_sums::{inner_sums, power_mean, PhaseFamily, RESIDUAL_TOLERANCE};

/// Stable identity names, in registry order.
pub const IDENTITY_IDS: [&str; 10] = [
    "salie_4th",
    "zhang_composite_4th",
    "zwl_4th",
    "nw_4th",
    "corollary1",
    "zz_cubic_4th",
    "zh_cubic_6th_over_a",
    "zm_cubic_6th",
    "wz_cubic_8th",
    "gauss_magnitude",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityDescriptor {
    pub id: &'static str,
    pub statement: &'static str,
    pub applicability: &'static str,
    /// The identity carries a free unit `n`.
    pub takes_n: bool,
    /// Sweeps iterate primes only (as opposed to every integer).
    pub prime_modulus: bool,
}

type LhsFn = fn(&Modulus, i64) -> Result<(i128, f64)>;
type RhsFn = fn(&Modulus, i64) -> Result<i128>;
type AppliesFn = fn(&Modulus, i64) -> std::result::Result<(), String>;

#[derive(Clone)]
struct Entry {
    descriptor: IdentityDescriptor,
    applies: AppliesFn,
    lhs: LhsFn,
    rhs: RhsFn,
}

/// One evaluated identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityOutcome {
    pub identity_id: &'static str,
    pub modulus: u64,
    pub n: Option<i64>,
    pub lhs: i128,
    pub rhs: i128,
    pub residual: f64,
    pub pass: bool,
    pub numeric_failure: bool,
}

/// Immutable table of identities.
#[derive(Clone)]
pub struct Registry {
    entries: Vec<Entry>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

impl Registry {
    pub fn standard() -> Self {
        let entries = vec![
            Entry {
                descriptor: IdentityDescriptor {
                    id: "salie_4th",
                    statement: "sum_{m=0}^{p-1} |sum_{a=1}^{p-1} e((a + m*inv(a))/p)|^4 = 2p^3 - 3p^2 - 3p",
                    applicability: "odd primes p >= 3",
                    takes_n: false,
                    prime_modulus: true,
                },
                applies: odd_prime,
                lhs: |q, _| pm(&PhaseFamily::kloosterman(1), q, 4),
                rhs: |q, _| {
                    let p = q.value() as i128;
                    Ok(2 * p.pow(3) - 3 * p * p - 3 * p)
                },
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "zhang_composite_4th",
                    statement: "sum_{m=1}^{q} |S(m, n; q)|^4 = 3^omega(q) q^2 phi(q) prod_{p||q} (2/3 - 1/(3p) - 4/(3p(p-1)))",
                    applicability: "odd q >= 3 with gcd(n, q) = 1 (even q contradict the closed form)",
                    takes_n: true,
                    prime_modulus: false,
                },
                applies: |q, n| {
                    if q.value() < 3 {
                        Err(format!("inapplicable (q = {} < 3)", q.value()))
                    } else if q.value() % 2 == 0 {
                        Err("inapplicable (even q)".into())
                    } else {
                        unit_n(q, n)
                    }
                },
                lhs: |q, n| pm(&PhaseFamily::kloosterman(n), q, 4),
                rhs: |q, _| zhang_composite_rhs(q),
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "zwl_4th",
                    statement: "sum_{m=0}^{p-1} |sum_{a=1}^{p-1} e((m a^2 + inv(a))/p)|^4 via sum_c ((c + 1 + inv(c))/p)",
                    applicability: "primes p > 3",
                    takes_n: false,
                    prime_modulus: true,
                },
                applies: prime_above_three,
                lhs: |q, _| pm(&PhaseFamily::twisted_monomial(2), q, 4),
                rhs: |q, _| zwl_rhs(q.value()),
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "nw_4th",
                    statement: "sum_{m=0}^{p-1} |sum_{a=1}^{p-1} e((m a^2 + inv(a))/p)|^4 via p^2 C(p)",
                    applicability: "primes p > 3",
                    takes_n: false,
                    prime_modulus: true,
                },
                applies: prime_above_three,
                lhs: |q, _| pm(&PhaseFamily::twisted_monomial(2), q, 4),
                rhs: |q, _| nw_rhs(q.value()),
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "corollary1",
                    statement: "(-1/p) sum_c ((c^3 + c^2 + c)/p) - C(p) = 2",
                    applicability: "odd primes p >= 3",
                    takes_n: false,
                    prime_modulus: true,
                },
                applies: odd_prime,
                lhs: |q, _| Ok((i128::from(corollary1_check(q.value())?.difference), 0.0)),
                rhs: |_, _| Ok(2),
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "zz_cubic_4th",
                    statement: "sum_{m=1}^{p-1} |S(m, n, 3; p)|^4 = 2p^3 - p^2 (3 !| p-1) or 2p^3 - 7p^2 (3 | p-1)",
                    applicability: "primes p > 3 with gcd(n, p) = 1",
                    takes_n: true,
                    prime_modulus: true,
                },
                applies: |q, n| prime_above_three(q, n).and_then(|_| unit_n(q, n)),
                lhs: |q, n| pm(&PhaseFamily::two_term(3, n), q, 4),
                rhs: |q, _| Ok(cubic_fourth_closed_form(q.value())),
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "zh_cubic_6th_over_a",
                    statement: "sum_{a=1}^{p-1} |sum_{n=0}^{p-1} e((n^3 + a n)/p)|^6 = 5p^4 - 8p^3 - p^2",
                    applicability: "odd primes p with 3 !| p-1",
                    takes_n: false,
                    prime_modulus: true,
                },
                applies: |q, n| {
                    odd_prime(q, n)?;
                    if (q.value() - 1) % 3 == 0 {
                        Err("inapplicable (3 | p-1)".into())
                    } else {
                        Ok(())
                    }
                },
                lhs: |q, _| pm(&PhaseFamily::cubic_varying_linear(), q, 6),
                rhs: |q, _| {
                    let p = q.value() as i128;
                    Ok(5 * p.pow(4) - 8 * p.pow(3) - p * p)
                },
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "zm_cubic_6th",
                    statement: "sum_{m=1}^{p-1} |S(m, n, 3; p)|^6 = 5p^3(p-1) (p = 5 mod 6) or 5p^4 - 23p^3 - d^2 p^2 (p = 1 mod 6)",
                    applicability: "primes p > 3 with gcd(n, p) = 1",
                    takes_n: true,
                    prime_modulus: true,
                },
                applies: |q, n| prime_above_three(q, n).and_then(|_| unit_n(q, n)),
                lhs: |q, n| pm(&PhaseFamily::two_term(3, n), q, 6),
                rhs: |q, _| cubic_sixth_closed_form(q.value()),
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "wz_cubic_8th",
                    statement: "sum_{m=1}^{p-1} |S(m, n, 3; p)|^8 = 7(2p^5 - 3p^4) (p = 5 mod 6) or 14p^5 - 75p^4 - 8p^3 d^2 (p = 1 mod 6)",
                    applicability: "primes p > 3 with gcd(n, p) = 1",
                    takes_n: true,
                    prime_modulus: true,
                },
                applies: |q, n| prime_above_three(q, n).and_then(|_| unit_n(q, n)),
                lhs: |q, n| pm(&PhaseFamily::two_term(3, n), q, 8),
                rhs: |q, _| cubic_eighth_closed_form(q.value()),
            },
            Entry {
                descriptor: IdentityDescriptor {
                    id: "gauss_magnitude",
                    statement: "|S(m, 0, 2; p)| = sqrt(p) for every m in 1..p-1; lhs = sum_m |S|^4 = p^2 (p-1)",
                    applicability: "odd primes p >= 3",
                    takes_n: false,
                    prime_modulus: true,
                },
                applies: odd_prime,
                lhs: gauss_lhs,
                rhs: |q, _| {
                    let p = q.value() as i128;
                    Ok(p * p * (p - 1))
                },
            },
        ];
        debug_assert!(entries
            .iter()
            .map(|e| e.descriptor.id)
            .eq(IDENTITY_IDS.iter().copied()));
        Self { entries }
    }

    /// A copy of this registry whose closed form for `id` is replaced.
    pub fn with_rhs(mut self, id: &str, rhs: fn(&Modulus, i64) -> Result<i128>) -> Result<Self> {
        let entry = self
            .entries
            .iter_mut()
            .find(|e| e.descriptor.id == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))?;
        entry.rhs = rhs;
        Ok(self)
    }

    pub fn list(&self) -> Vec<IdentityDescriptor> {
        self.entries.iter().map(|e| e.descriptor).collect()
    }

    pub fn descriptor(&self, id: &str) -> Result<IdentityDescriptor> {
        Ok(self.entry(id)?.descriptor)
    }

    fn entry(&self, id: &str) -> Result<&Entry> {
        self.entries
            .iter()
            .find(|e| e.descriptor.id == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    /// Evaluates one identity. An inapplicable modulus yields
    /// [`Error::Inapplicable`]; `n` defaults to 1 for identities that carry it.
    pub fn evaluate(&self, id: &str, modulus: u64, n: Option<i64>) -> Result<IdentityOutcome> {
        let entry = self.entry(id)?;
        let q = Modulus::new(modulus)?;
        let n_val = if entry.descriptor.takes_n {
            n.unwrap_or(1)
        } else {
            1
        };
        (entry.applies)(&q, n_val).map_err(Error::Inapplicable)?;
        let (lhs, residual) = (entry.lhs)(&q, n_val)?;
        let rhs = (entry.rhs)(&q, n_val)?;
        let numeric_failure = residual >= RESIDUAL_TOLERANCE;
        Ok(IdentityOutcome {
            identity_id: entry.descriptor.id,
            modulus,
            n: entry.descriptor.takes_n.then_some(n_val),
            lhs,
            rhs,
            residual,
            pass: lhs == rhs && !numeric_failure,
            numeric_failure,
        })
    }

    /// Evaluates `id` over every candidate modulus in `[lo, hi]` and every
    /// `n` choice. Rows come back ordered by modulus, then by `n_grid` order.
    pub fn sweep(&self, id: &str, lo: u64, hi: u64, n_grid: &[NChoice]) -> Result<SweepReport> {
        let descriptor = self.descriptor(id)?;
        let moduli: Vec<u64> = if descriptor.prime_modulus {
            arith::primes_in_range(lo, hi)
        } else {
            (lo.max(1)..=hi).collect()
        };
        self.sweep_moduli(id, &moduli, n_grid)
    }

    /// Like [`Registry::sweep`] over an explicit modulus list.
    pub fn sweep_moduli(
        &self,
        id: &str,
        moduli: &[u64],
        n_grid: &[NChoice],
    ) -> Result<SweepReport> {
        let descriptor = self.descriptor(id)?;
        let default_grid = [NChoice::Value(1)];
        let grid = if !descriptor.takes_n {
            &default_grid[..1]
        } else if n_grid.is_empty() {
            &default_grid[..]
        } else {
            n_grid
        };
        let rows: Vec<SweepRow> = moduli
            .par_iter()
            .map(|&q| self.rows_for_modulus(descriptor, q, grid))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        Ok(SweepReport::from_rows(rows))
    }

    fn rows_for_modulus(&self, d: IdentityDescriptor, q: u64, grid: &[NChoice]) -> Vec<SweepRow> {
        let mut seen = Vec::new();
        let mut rows = Vec::new();
        for choice in grid {
            let n = if d.takes_n {
                match choice.resolve(q) {
                    Some(n) => Some(n),
                    None => {
                        rows.push(SweepRow::Skipped {
                            identity_id: d.id,
                            modulus: q,
                            n: None,
                            reason: "inapplicable (no unit n > 1)".into(),
                        });
                        continue;
                    }
                }
            } else {
                None
            };
            if seen.contains(&n) {
                continue;
            }
            seen.push(n);
            rows.push(match self.evaluate(d.id, q, n) {
                Ok(outcome) => SweepRow::Evaluated(outcome),
                Err(Error::Inapplicable(reason)) => SweepRow::Skipped {
                    identity_id: d.id,
                    modulus: q,
                    n,
                    reason,
                },
                Err(e) => SweepRow::Errored {
                    identity_id: d.id,
                    modulus: q,
                    n,
                    message: e.to_string(),
                },
            });
        }
        rows
    }
}

/// Choice of the free unit `n` in a sweep, resolved per modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NChoice {
    /// A literal, reduced modulo `q` (so `-1` means `q - 1`).
    Value(i64),
    SmallestUnitAboveOne,
}

impl NChoice {
    pub fn resolve(self, q: u64) -> Option<i64> {
        match self {
            NChoice::Value(v) => Some(if q > 1 { arith::reduce(v, q) as i64 } else { v }),
            NChoice::SmallestUnitAboveOne => Modulus::new(q)
                .ok()?
                .smallest_unit_above_one()
                .map(|u| u as i64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepRow {
    Evaluated(IdentityOutcome),
    Skipped {
        identity_id: &'static str,
        modulus: u64,
        n: Option<i64>,
        reason: String,
    },
    Errored {
        identity_id: &'static str,
        modulus: u64,
        n: Option<i64>,
        message: String,
    },
}

impl SweepRow {
    pub fn modulus(&self) -> u64 {
        match self {
            SweepRow::Evaluated(o) => o.modulus,
            SweepRow::Skipped { modulus, .. } | SweepRow::Errored { modulus, .. } => *modulus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepSummary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub numeric_failures: usize,
    pub max_residual: f64,
}

impl SweepSummary {
    pub fn absorb(&mut self, row: &SweepRow) {
        match row {
            SweepRow::Evaluated(o) => {
                if o.pass {
                    self.pass += 1;
                } else {
                    self.fail += 1;
                }
                if o.numeric_failure {
                    self.numeric_failures += 1;
                }
                self.max_residual = self.max_residual.max(o.residual);
            }
            SweepRow::Skipped { .. } => self.skip += 1,
            SweepRow::Errored { .. } => self.fail += 1,
        }
    }

    pub fn merge(&mut self, other: &SweepSummary) {
        self.pass += other.pass;
        self.fail += other.fail;
        self.skip += other.skip;
        self.numeric_failures += other.numeric_failures;
        self.max_residual = self.max_residual.max(other.max_residual);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn from_rows(rows: Vec<SweepRow>) -> Self {
        let mut summary = SweepSummary::default();
        for row in &rows {
            summary.absorb(row);
        }
        Self { rows, summary }
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &IdentityOutcome> {
        self.rows.iter().filter_map(|r| match r {
            SweepRow::Evaluated(o) => Some(o),
            _ => None,
        })
    }
}

pub fn list_identities() -> Vec<IdentityDescriptor> {
    Registry::standard().list()
}

/// Evaluates against the standard registry.
pub fn evaluate(id: &str, modulus: u64, n: Option<i64>) -> Result<IdentityOutcome> {
    Registry::standard().evaluate(id, modulus, n)
}

pub fn sweep(id: &str, lo: u64, hi: u64, n_grid: &[NChoice]) -> Result<SweepReport> {
    Registry::standard().sweep(id, lo, hi, n_grid)
}

fn pm(family: &PhaseFamily, q: &Modulus, two_k: u32) -> Result<(i128, f64)> {
    let r = power_mean(family, q, two_k)?;
    Ok((r.rounded, r.residual))
}

fn odd_prime(q: &Modulus, _n: i64) -> std::result::Result<(), String> {
    if q.is_odd_prime() {
        Ok(())
    } else {
        Err("inapplicable (not an odd prime)".into())
    }
}

fn prime_above_three(q: &Modulus, n: i64) -> std::result::Result<(), String> {
    odd_prime(q, n)?;
    if q.value() == 3 {
        Err("inapplicable (p = 3)".into())
    } else {
        Ok(())
    }
}

fn unit_n(q: &Modulus, n: i64) -> std::result::Result<(), String> {
    if q.is_unit(n) {
        Ok(())
    } else {
        Err(format!("inapplicable (gcd(n, q) > 1 for n = {n})"))
    }
}

fn gauss_lhs(q: &Modulus, _n: i64) -> Result<(i128, f64)> {
    let (lhs, mut residual) = pm(&PhaseFamily::two_term(2, 0), q, 4)?;
    let root_p = (q.value() as f64).sqrt();
    let worst = inner_sums(&PhaseFamily::two_term(2, 0), q)
        .into_iter()
        .map(|(_, s)| (s.norm() - root_p).abs() / root_p)
        .fold(0.0, f64::max);
    if worst >= 1e-9 {
        // a single bad magnitude must fail the row even if the mean agrees
        residual = residual.max(worst.max(RESIDUAL_TOLERANCE));
    }
    Ok((lhs, residual))
}

/// `3^ω(q) q^2 φ(q) ∏_{p‖q} (2p^2 - 3p - 3) / (3p(p-1))`, which must be integral.
pub fn zhang_composite_rhs(q: &Modulus) -> Result<i128> {
    let qv = q.value() as i128;
    let mut num = 3i128.pow(q.omega()) * qv * qv * q.phi() as i128;
    let mut den = 1i128;
    for p in q.unitary_primes() {
        let p = p as i128;
        num *= 2 * p * p - 3 * p - 3;
        den *= 3 * p * (p - 1);
    }
    if num % den != 0 {
        return Err(Error::NonIntegralRhs(q.value()));
    }
    Ok(num / den)
}

fn legendre3(p: u64) -> i128 {
    i128::from(arith::legendre(3, p).expect("odd prime"))
}

fn zwl_rhs(p: u64) -> Result<i128> {
    let s = i128::from(salie_twisted_char_sum(p)?);
    let l3 = legendre3(p);
    let pi = p as i128;
    let p2 = pi * pi;
    Ok(if p % 4 == 3 {
        2 * pi.pow(3) - 6 * p2 - 5 * pi + 2 * l3 * p2 - p2 * s
    } else {
        2 * pi.pow(3) - 10 * p2 - 9 * pi - 2 * l3 * p2 + p2 * s
    })
}

fn nw_rhs(p: u64) -> Result<i128> {
    let c = i128::from(ning_wang_c(p)?);
    let l3 = legendre3(p);
    let pi = p as i128;
    let p2 = pi * pi;
    Ok(if p % 4 == 3 {
        2 * pi.pow(3) - 4 * p2 + 2 * p2 * l3 - 5 * pi + p2 * c
    } else {
        2 * pi.pow(3) - 8 * p2 - 2 * p2 * l3 - 9 * pi + p2 * c
    })
}

/// Fourth power mean of `S(m, n, 3; p)` over `m = 1..p-1`.
pub fn cubic_fourth_closed_form(p: u64) -> i128 {
    let pi = p as i128;
    if (p - 1).is_multiple_of(3) {
        2 * pi.pow(3) - 7 * pi * pi
    } else {
        2 * pi.pow(3) - pi * pi
    }
}

fn d_squared(p: u64) -> Result<i128> {
    let rep = arith::represent_4p(p)?;
    Ok(i128::from(rep.d) * i128::from(rep.d))
}

/// Sixth power mean of `S(m, n, 3; p)` over `m = 1..p-1`, `p > 3`.
pub fn cubic_sixth_closed_form(p: u64) -> Result<i128> {
    let pi = p as i128;
    match p % 6 {
        5 => Ok(5 * pi.pow(3) * (pi - 1)),
        1 => Ok(5 * pi.pow(4) - 23 * pi.pow(3) - d_squared(p)? * pi * pi),
        _ => Err(Error::Inapplicable(format!("p = {p} is not 1 or 5 mod 6"))),
    }
}

/// Eighth power mean of `S(m, n, 3; p)` over `m = 1..p-1`, `p > 3`.
pub fn cubic_eighth_closed_form(p: u64) -> Result<i128> {
    let pi = p as i128;
    match p % 6 {
        5 => Ok(7 * (2 * pi.pow(5) - 3 * pi.pow(4))),
        1 => Ok(14 * pi.pow(5) - 75 * pi.pow(4) - 8 * pi.pow(3) * d_squared(p)?),
        _ => Err(Error::Inapplicable(format!("p = {p} is not 1 or 5 mod 6"))),
    }
}
