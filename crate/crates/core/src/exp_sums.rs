//! Complete exponential sums modulo `q` and their `2k`-th power means.
//!
//! All kernels evaluate `e(x/q)` from a per-modulus table built by
//! [`crate::ddouble::unit_roots`] and accumulate in double-double, so a
//! power mean that is a rational integer comes back within a tiny distance
//! of that integer. [`PowerMeanResult`] always carries both the raw value
//! and the rounding residual.

use num_complex::Complex64;

use crate::arith::{self, Modulus};
use crate::ddouble::{unit_roots, Dd, DdComplex};
use crate::error::{Error, Result};

/// Largest residual `|raw - rounded|` accepted as an exact integer.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InnerDomain {
    AllResidues,
    UnitsOnly,
}

/// Whether the second term of the phase is `n·a` or `n·ā`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Twist {
    None,
    Inverse,
}

/// Which coefficient runs over the sweep.
///
/// `LinearCoefficient` is the coefficient of the second term, i.e. of `a`
/// without a twist and of `ā` with the inverse twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VaryingSlot {
    MonomialCoefficient,
    LinearCoefficient,
}

/// Describes the inner sum `Σ_a e((u·a^k + w·t(a))/q)` and which of `u`, `w`
/// is swept over `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseFamily {
    monomial_degree: u32,
    inner_domain: InnerDomain,
    twist: Twist,
    varying_slot: VaryingSlot,
    fixed_coefficient: i64,
    include_zero_in_sweep: bool,
}

impl PhaseFamily {
    pub fn new(
        monomial_degree: u32,
        inner_domain: InnerDomain,
        twist: Twist,
        varying_slot: VaryingSlot,
        fixed_coefficient: i64,
        include_zero_in_sweep: bool,
    ) -> Result<Self> {
        if monomial_degree == 0 {
            return Err(Error::InvalidArgument("monomial degree must be ≥ 1".into()));
        }
        if twist == Twist::Inverse && inner_domain != InnerDomain::UnitsOnly {
            return Err(Error::InvalidArgument(
                "inverse twist requires the units-only domain".into(),
            ));
        }
        Ok(Self {
            monomial_degree,
            inner_domain,
            twist,
            varying_slot,
            fixed_coefficient,
            include_zero_in_sweep,
        })
    }

    /// `Σ_m |Σ'_a e((m·a + n·ā)/q)|^4`, `m` over a complete residue system.
    pub fn kloosterman(n: i64) -> Self {
        Self {
            monomial_degree: 1,
            inner_domain: InnerDomain::UnitsOnly,
            twist: Twist::Inverse,
            varying_slot: VaryingSlot::MonomialCoefficient,
            fixed_coefficient: n,
            include_zero_in_sweep: true,
        }
    }

    /// `Σ_{m=0}^{p-1} |Σ_{a=1}^{p-1} e((m·a^k + ā)/p)|^{2j}`.
    pub fn twisted_monomial(k: u32) -> Self {
        Self {
            monomial_degree: k,
            inner_domain: InnerDomain::UnitsOnly,
            twist: Twist::Inverse,
            varying_slot: VaryingSlot::MonomialCoefficient,
            fixed_coefficient: 1,
            include_zero_in_sweep: true,
        }
    }

    /// `Σ_{m=1}^{p-1} |Σ_{a=0}^{p-1} e((m·a^k + n·a)/p)|^{2j}`.
    pub fn two_term(k: u32, n: i64) -> Self {
        Self {
            monomial_degree: k,
            inner_domain: InnerDomain::AllResidues,
            twist: Twist::None,
            varying_slot: VaryingSlot::MonomialCoefficient,
            fixed_coefficient: n,
            include_zero_in_sweep: false,
        }
    }

    /// The cubic family of the Catalan conjecture: `m` from 0, linear coefficient 1.
    pub fn cubic_conjecture() -> Self {
        Self {
            include_zero_in_sweep: true,
            ..Self::two_term(3, 1)
        }
    }

    /// `Σ_{a=1}^{p-1} |Σ_{n=0}^{p-1} e((n^3 + a·n)/p)|^{2j}`: the linear slot varies.
    pub fn cubic_varying_linear() -> Self {
        Self {
            monomial_degree: 3,
            inner_domain: InnerDomain::AllResidues,
            twist: Twist::None,
            varying_slot: VaryingSlot::LinearCoefficient,
            fixed_coefficient: 1,
            include_zero_in_sweep: false,
        }
    }

    pub fn monomial_degree(&self) -> u32 {
        self.monomial_degree
    }

    pub fn inner_domain(&self) -> InnerDomain {
        self.inner_domain
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    pub fn varying_slot(&self) -> VaryingSlot {
        self.varying_slot
    }

    pub fn fixed_coefficient(&self) -> i64 {
        self.fixed_coefficient
    }

    pub fn include_zero_in_sweep(&self) -> bool {
        self.include_zero_in_sweep
    }

    fn sweep(&self, q: u64) -> std::ops::Range<u64> {
        if self.include_zero_in_sweep {
            0..q
        } else {
            1..q
        }
    }
}

/// Precomputed phase data for one family at one modulus.
struct PhaseKernel {
    q: u64,
    roots: Vec<DdComplex>,
    // (a^k mod q, t(a) mod q) for every a in the inner domain
    terms: Vec<(u64, u64)>,
    family: PhaseFamily,
}

impl PhaseKernel {
    fn new(family: PhaseFamily, q: u64) -> Self {
        let inverses = (family.twist == Twist::Inverse).then(|| arith::inverse_table(q));
        let terms = (0..q)
            .filter(|&a| match family.inner_domain {
                InnerDomain::AllResidues => true,
                InnerDomain::UnitsOnly => arith::gcd(a, q) == 1,
            })
            .map(|a| {
                let mono = arith::pow_mod(a, u64::from(family.monomial_degree), q);
                let second = match &inverses {
                    Some(inv) => inv[a as usize],
                    None => a,
                };
                (mono, second)
            })
            .collect();
        Self {
            q,
            roots: unit_roots(q),
            terms,
            family,
        }
    }

    fn inner_sum(&self, v: i64) -> DdComplex {
        let q = self.q;
        let v = arith::reduce(v, q);
        let fixed = arith::reduce(self.family.fixed_coefficient, q);
        let (u, w) = match self.family.varying_slot {
            VaryingSlot::MonomialCoefficient => (v, fixed),
            VaryingSlot::LinearCoefficient => (fixed, v),
        };
        let mut acc = DdComplex::ZERO;
        for &(mono, second) in &self.terms {
            let idx = (u * mono % q + w * second % q) % q;
            acc += self.roots[idx as usize];
        }
        acc
    }
}

/// `e(j/q)` for `j = 0..q`.
pub fn root_table(q: u64) -> Vec<Complex64> {
    unit_roots(q).into_iter().map(DdComplex::to_c64).collect()
}

/// The inner sum of `family` at sweep value `v`.
pub fn inner_sum(family: &PhaseFamily, modulus: &Modulus, v: i64) -> Complex64 {
    PhaseKernel::new(*family, modulus.value())
        .inner_sum(v)
        .to_c64()
}

/// Every `(v, inner(v))` over the family's sweep, sharing one kernel.
pub fn inner_sums(family: &PhaseFamily, modulus: &Modulus) -> Vec<(u64, Complex64)> {
    let kernel = PhaseKernel::new(*family, modulus.value());
    family
        .sweep(modulus.value())
        .map(|v| (v, kernel.inner_sum(v as i64).to_c64()))
        .collect()
}

/// Kloosterman sum `S(m, n; q) = Σ'_{a mod q} e((m·a + n·ā)/q)`.
pub fn kloosterman(m: i64, n: i64, q: &Modulus) -> Complex64 {
    let family = PhaseFamily::kloosterman(n);
    inner_sum(&family, q, m)
}

/// Two-term sum `S(m, n, k; q) = Σ_{a=1}^{q} e((m·a^k + n·a)/q)`.
pub fn two_term_sum(m: i64, n: i64, k: u32, q: &Modulus) -> Complex64 {
    assert!(k >= 1, "monomial degree must be ≥ 1");
    let family = PhaseFamily::two_term(k, n);
    inner_sum(&family, q, m)
}

/// `Σ_{a=1}^{p-1} e((m·a^k + ā)/p)` for an odd prime `p`.
pub fn twisted_sum(m: i64, k: u32, p: u64) -> Result<Complex64> {
    let modulus = Modulus::new(p)?;
    if !modulus.is_odd_prime() {
        return Err(Error::NotOddPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be ≥ 1".into()));
    }
    Ok(inner_sum(&PhaseFamily::twisted_monomial(k), &modulus, m))
}

/// A `2k`-th power mean rounded to the nearest integer.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMeanResult {
    pub family: PhaseFamily,
    pub modulus: u64,
    pub two_k: u32,
    raw: Dd,
    pub rounded: i128,
    pub residual: f64,
}

impl PowerMeanResult {
    pub fn raw_value(&self) -> f64 {
        self.raw.to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.residual < RESIDUAL_TOLERANCE
    }

    /// The rounded value, or an error when the residual is out of tolerance.
    pub fn checked(&self) -> Result<i128> {
        if self.is_exact() {
            Ok(self.rounded)
        } else {
            Err(Error::NumericResidual {
                modulus: self.modulus,
                residual: self.residual,
            })
        }
    }
}

/// `Σ_v |inner(v)|^{two_k}` over the family's sweep, with `v` running over a
/// complete residue system (with or without 0).
///
/// The reduction runs sequentially in sweep order, so the result is
/// bit-for-bit reproducible.
pub fn power_mean(family: &PhaseFamily, modulus: &Modulus, two_k: u32) -> Result<PowerMeanResult> {
    if two_k == 0 || !two_k.is_multiple_of(2) || two_k > 12 {
        return Err(Error::InvalidArgument(format!(
            "two_k must be one of 2, 4, ..., 12 (got {two_k})"
        )));
    }
    let q = modulus.value();
    if q < 3 {
        return Err(Error::InvalidArgument(format!("modulus {q} < 3")));
    }
    let kernel = PhaseKernel::new(*family, q);
    let mut total = Dd::ZERO;
    for v in family.sweep(q) {
        let norm = kernel.inner_sum(v as i64).norm_sqr();
        total += norm.powi(two_k / 2);
    }
    let (rounded, residual) = total.round_i128();
    Ok(PowerMeanResult {
        family: *family,
        modulus: q,
        two_k,
        raw: total,
        rounded,
        residual,
    })
}

/// `|S(m, n; q)| / ((m, n, q)^{1/2} · d(q) · q^{1/2})`.
pub fn kloosterman_bound_ratio(m: i64, n: i64, q: &Modulus) -> f64 {
    let g = arith::gcd3(m, n, q.value()) as f64;
    let scale = g.sqrt() * q.divisor_count() as f64 * (q.value() as f64).sqrt();
    kloosterman(m, n, q).norm() / scale
}

/// `|S(m, n, k; p)| / √p`, the quantity bounded by `k - 1` for `p ∤ m`.
pub fn weil_ratio(m: i64, n: i64, k: u32, p: u64) -> Result<f64> {
    let modulus = Modulus::new(p)?;
    if !modulus.is_odd_prime() {
        return Err(Error::NotOddPrime(p));
    }
    if k < 2 || u64::from(k) >= p {
        return Err(Error::InvalidArgument(format!(
            "weil ratio needs 2 ≤ k < p (k = {k}, p = {p})"
        )));
    }
    if arith::reduce(m, p) == 0 {
        return Err(Error::InvalidArgument(format!("p = {p} divides m = {m}")));
    }
    Ok(two_term_sum(m, n, k, &modulus).norm() / (p as f64).sqrt())
}
