//! Exact integer primitives: gcds, inverses, the Legendre symbol,
//! trial-division factorization and the `4p = d^2 + 27b^2` representation.
//!
//! Every routine reduces its arguments into the canonical residue range
//! first, so callers may pass raw (possibly negative) loop indices.
//! Intermediate products go through `u128`; moduli are expected to stay
//! below `10^9`, where trial division is instantaneous.

use crate::error::{Error, Result};

/// Reduce an arbitrary integer into `[0, q)`.
#[inline]
pub fn reduce(a: i64, q: u64) -> u64 {
    (a as i128).rem_euclid(q as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Greatest common divisor of `m`, `n` and `q`, with `m` and `n` reduced mod `q`.
/// `gcd3(0, 0, q) == q`.
pub fn gcd3(m: i64, n: i64, q: u64) -> u64 {
    assert!(q >= 1, "modulus must be positive");
    gcd(gcd(reduce(m, q), reduce(n, q)), q)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// The inverse of `a` modulo `q`, in `[1, q-1]`.
pub fn mod_inverse(a: i64, q: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("modulus {q} < 2")));
    }
    let a_red = reduce(a, q);
    // extended Euclid on (a, q) in signed arithmetic
    let (mut r0, mut r1) = (q as i128, a_red as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (t0, t1) = (t1, t0 - quot * t1);
    }
    if r0 != 1 {
        return Err(Error::NotCoprime { a, q });
    }
    Ok(t0.rem_euclid(q as i128) as u64)
}

/// Table of inverses modulo `q`; entry `a` is `ā` for units and 0 otherwise.
pub fn inverse_table(q: u64) -> Vec<u64> {
    (0..q)
        .map(|a| mod_inverse(a as i64, q).unwrap_or(0))
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    Ok(legendre_unchecked(reduce(a, p), p))
}

/// Euler's criterion without the primality check. `a` must already be reduced.
#[inline]
pub(crate) fn legendre_unchecked(a: u64, p: u64) -> i8 {
    if a == 0 {
        return 0;
    }
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        r if r == p - 1 => -1,
        _ => unreachable!("Euler criterion on a non-prime modulus {p}"),
    }
}

/// Trial-division factorization, ascending primes. `factorize(1)` is empty.
pub fn factorize(mut q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            let mut e = 0;
            while q.is_multiple_of(d) {
                q /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if q > 1 {
        out.push((q, 1));
    }
    out
}

/// Multiplicative data of a modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorFunctions {
    pub phi: u64,
    pub omega: u32,
    pub divisor_count: u64,
}

pub fn factor_functions(q: u64) -> FactorFunctions {
    factor_functions_of(&factorize(q))
}

fn factor_functions_of(factors: &[(u64, u32)]) -> FactorFunctions {
    let mut phi = 1u64;
    let mut divisor_count = 1u64;
    for &(p, e) in factors {
        phi *= (p - 1) * p.pow(e - 1);
        divisor_count *= u64::from(e) + 1;
    }
    FactorFunctions {
        phi,
        omega: factors.len() as u32,
        divisor_count,
    }
}

/// A positive integer modulus together with its factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus {
    q: u64,
    factorization: Vec<(u64, u32)>,
    is_prime: bool,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let factorization = factorize(q);
        let is_prime = factorization.len() == 1 && factorization[0] == (q, 1);
        Ok(Self {
            q,
            factorization,
            is_prime,
        })
    }

    pub fn value(&self) -> u64 {
        self.q
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn is_prime(&self) -> bool {
        self.is_prime
    }

    pub fn is_odd_prime(&self) -> bool {
        self.is_prime && self.q > 2
    }

    pub fn functions(&self) -> FactorFunctions {
        factor_functions_of(&self.factorization)
    }

    pub fn phi(&self) -> u64 {
        self.functions().phi
    }

    pub fn omega(&self) -> u32 {
        self.factorization.len() as u32
    }

    pub fn divisor_count(&self) -> u64 {
        self.functions().divisor_count
    }

    /// Primes `p` with `p | q` and `p^2 ∤ q`.
    pub fn unitary_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factorization
            .iter()
            .filter(|&&(_, e)| e == 1)
            .map(|&(p, _)| p)
    }

    pub fn is_unit(&self, a: i64) -> bool {
        gcd(reduce(a, self.q), self.q) == 1
    }

    /// Smallest unit strictly greater than 1, if any exists below `q`.
    pub fn smallest_unit_above_one(&self) -> Option<u64> {
        (2..self.q).find(|&a| gcd(a, self.q) == 1)
    }
}

/// All primes in `[lo, hi]`, ascending. Empty when `hi < lo`.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2)..=hi)
        .filter(|&p| !composite[p as usize])
        .collect()
}

pub fn odd_primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    primes_in_range(lo.max(3), hi)
}

/// The representation `4p = d^2 + 27 b^2` with `d ≡ 1 (mod 3)` and `b ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DRep {
    pub d: i64,
    pub b: u64,
}

/// Finds `(d, b)` by exhausting `b` from 0 up to `sqrt(4p/27)`.
pub fn represent_4p(p: u64) -> Result<DRep> {
    if !is_prime(p) || p % 3 != 1 {
        return Err(Error::NotRepresentable(p));
    }
    let four_p = 4 * p;
    let mut b = 0u64;
    while 27 * b * b <= four_p {
        let rest = four_p - 27 * b * b;
        let root = isqrt(rest);
        if root * root == rest {
            let r = root as i64;
            for d in [r, -r] {
                if d.rem_euclid(3) == 1 {
                    return Ok(DRep { d, b });
                }
            }
        }
        b += 1;
    }
    Err(Error::NotRepresentable(p))
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
