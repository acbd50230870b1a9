//! Legendre-symbol sums of integer polynomials.

use crate::arith::{self, legendre_unchecked};
use crate::error::{Error, Result};
use crate::poly::{eval_reduced, PolynomialZ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SumRange {
    /// `x = 1..p-1`
    #[default]
    FromOne,
    /// `x = 0..p-1`
    FromZero,
}

/// `(a/p)` for every residue `a`, built once per prime.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    p: u64,
    symbols: Vec<i8>,
}

impl LegendreTable {
    pub fn new(p: u64) -> Result<Self> {
        if p.is_multiple_of(2) || !arith::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let mut symbols = vec![-1i8; p as usize];
        symbols[0] = 0;
        for x in 1..=(p - 1) / 2 {
            symbols[(x * x % p) as usize] = 1;
        }
        debug_assert!((1..p.min(50)).all(|a| symbols[a as usize] == legendre_unchecked(a, p)));
        Ok(Self { p, symbols })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn symbol(&self, a: u64) -> i8 {
        self.symbols[(a % self.p) as usize]
    }

    pub fn char_sum(&self, f: &PolynomialZ, range: SumRange) -> i64 {
        let p = self.p;
        let coeffs = f.reduced(p);
        let start = match range {
            SumRange::FromOne => 1,
            SumRange::FromZero => 0,
        };
        (start..p)
            .map(|x| i64::from(self.symbols[eval_reduced(&coeffs, x, p) as usize]))
            .sum()
    }
}

/// `Σ_x (f(x)/p)` over the chosen range.
pub fn char_sum_poly(f: &PolynomialZ, p: u64, range: SumRange) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    Ok(LegendreTable::new(p)?.char_sum(f, range))
}

/// `(x^2 + 1)(x^2 + 4x + 1)`
pub fn ning_wang_poly() -> PolynomialZ {
    PolynomialZ::new(vec![1, 4, 2, 4, 1])
}

/// `x^3 + x^2 + x`
pub fn cubic_poly() -> PolynomialZ {
    PolynomialZ::new(vec![0, 1, 1, 1])
}

/// `C(p) = Σ_{b=1}^{p-1} ((b^2+1)(b^2+4b+1) / p)`
pub fn ning_wang_c(p: u64) -> Result<i64> {
    char_sum_poly(&ning_wang_poly(), p, SumRange::FromOne)
}

/// `Σ_{c=1}^{p-1} ((c + 1 + c̄) / p)`
pub fn salie_twisted_char_sum(p: u64) -> Result<i64> {
    let table = LegendreTable::new(p)?;
    let inverses = arith::inverse_table(p);
    Ok((1..p)
        .map(|c| i64::from(table.symbol((c + 1 + inverses[c as usize]) % p)))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corollary1Check {
    pub p: u64,
    /// `(-1/p) Σ_{c=1}^{p-1} ((c^3 + c^2 + c)/p)`
    pub term1: i64,
    /// `C(p)`
    pub term2: i64,
    pub difference: i64,
    pub pass: bool,
}

pub fn corollary1_check(p: u64) -> Result<Corollary1Check> {
    let table = LegendreTable::new(p)?;
    let minus_one = i64::from(table.symbol(p - 1));
    let term1 = minus_one * table.char_sum(&cubic_poly(), SumRange::FromOne);
    let term2 = table.char_sum(&ning_wang_poly(), SumRange::FromOne);
    let difference = term1 - term2;
    Ok(Corollary1Check {
        p,
        term1,
        term2,
        difference,
        pass: difference == 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{legendre, odd_primes_in_range};

    fn poly(c: &[i64]) -> PolynomialZ {
        PolynomialZ::new(c.to_vec())
    }

    // direct enumeration through the Euler-criterion symbol, no table
    fn direct_sum(f: &PolynomialZ, p: u64, from: u64) -> i64 {
        (from..p)
            .map(|x| i64::from(legendre(f.eval_mod(x as i64, p) as i64, p).unwrap()))
            .sum()
    }

    #[test]
    fn char_sum_examples() {
        for p in odd_primes_in_range(3, 60) {
            assert_eq!(
                char_sum_poly(&PolynomialZ::x(), p, SumRange::FromOne).unwrap(),
                0
            );
            assert_eq!(
                char_sum_poly(&poly(&[0, 0, 1]), p, SumRange::FromOne).unwrap(),
                p as i64 - 1
            );
        }
        assert_eq!(
            char_sum_poly(&cubic_poly(), 5, SumRange::FromOne).unwrap(),
            2
        );
        assert!(char_sum_poly(&PolynomialZ::zero(), 5, SumRange::FromOne).is_err());
        assert_eq!(
            char_sum_poly(&cubic_poly(), 9, SumRange::FromOne),
            Err(Error::NotOddPrime(9))
        );
    }

    #[test]
    fn table_matches_direct_enumeration() {
        let f = poly(&[-3, 2, 0, 5, 1]);
        for p in odd_primes_in_range(3, 120) {
            let t = LegendreTable::new(p).unwrap();
            assert_eq!(t.char_sum(&f, SumRange::FromOne), direct_sum(&f, p, 1));
            assert_eq!(t.char_sum(&f, SumRange::FromZero), direct_sum(&f, p, 0));
        }
    }

    #[test]
    fn ning_wang_c_examples() {
        assert_eq!(ning_wang_c(3).unwrap(), -1);
        assert_eq!(ning_wang_c(5).unwrap(), 0);
        assert_eq!(ning_wang_c(7).unwrap(), -2);
    }

    #[test]
    fn salie_twisted_examples() {
        assert_eq!(salie_twisted_char_sum(5).unwrap(), 2);
        assert_eq!(salie_twisted_char_sum(7).unwrap(), 0);
        assert_eq!(salie_twisted_char_sum(3).unwrap(), -1);
    }

    #[test]
    fn salie_twisted_equals_cubic_sum() {
        for p in odd_primes_in_range(3, 400) {
            assert_eq!(
                salie_twisted_char_sum(p).unwrap(),
                char_sum_poly(&cubic_poly(), p, SumRange::FromOne).unwrap()
            );
        }
    }

    #[test]
    fn corollary1_examples() {
        let c = corollary1_check(3).unwrap();
        assert_eq!((c.term1, c.term2, c.difference, c.pass), (1, -1, 2, true));
        let c = corollary1_check(5).unwrap();
        assert_eq!((c.term1, c.term2, c.difference), (2, 0, 2));
        let c = corollary1_check(7).unwrap();
        assert_eq!((c.term1, c.term2, c.difference), (0, -2, 2));
    }

    #[test]
    fn corollary1_beyond_tested_range() {
        for p in odd_primes_in_range(3, 2000) {
            assert!(corollary1_check(p).unwrap().pass, "p={p}");
        }
    }

    #[test]
    fn translation_invariance_full_range() {
        let fs = [
            poly(&[1, 0, 1]),
            poly(&[2, -1, 3, 1]),
            cubic_poly(),
            ning_wang_poly(),
        ];
        for p in odd_primes_in_range(3, 60) {
            for f in &fs {
                let base = char_sum_poly(f, p, SumRange::FromZero).unwrap();
                for t in -7..7 {
                    assert_eq!(
                        char_sum_poly(&f.shift(t), p, SumRange::FromZero).unwrap(),
                        base
                    );
                }
            }
        }
    }

    #[test]
    fn square_scaling_invariance() {
        let f = poly(&[2, -1, 3, 1]);
        for p in odd_primes_in_range(3, 60) {
            for s in [2i64, 3, -5, 7] {
                if s.rem_euclid(p as i64) == 0 {
                    continue;
                }
                for range in [SumRange::FromOne, SumRange::FromZero] {
                    assert_eq!(
                        char_sum_poly(&f.scale(s * s), p, range).unwrap(),
                        char_sum_poly(&f, p, range).unwrap()
                    );
                }
            }
        }
    }
}
