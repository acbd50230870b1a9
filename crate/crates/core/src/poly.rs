use std::cmp::Ordering;
use std::fmt;

use crate::arith::{self, mul_mod, reduce};

/// Integer polynomial, coefficients in ascending degree. The zero polynomial
/// has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolynomialZ {
    coeffs: Vec<i64>,
}

impl PolynomialZ {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x`
    pub fn x() -> Self {
        Self::new(vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<i64> {
        self.coeffs.last().copied()
    }

    pub fn max_abs_coeff(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: i64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `f(x + t)`
    pub fn shift(&self, t: i64) -> Self {
        // Horner in the ring Z[x]: f(x+t) = (...(c_n (x+t) + c_{n-1})(x+t) + ...)
        let step = Self::new(vec![t, 1]);
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&step);
            if acc.coeffs.is_empty() {
                acc = Self::new(vec![c]);
            } else {
                acc.coeffs[0] += c;
                acc = Self::new(acc.coeffs);
            }
        }
        acc
    }

    /// `f(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// Coefficients reduced into `[0, p)`, ascending.
    pub fn reduced(&self, p: u64) -> Vec<u64> {
        self.coeffs.iter().map(|&c| reduce(c, p)).collect()
    }

    /// `f(x) mod p` by Horner's rule.
    pub fn eval_mod(&self, x: i64, p: u64) -> u64 {
        eval_reduced(&self.reduced(p), reduce(x, p), p)
    }

    /// Whether `f mod p` has positive degree and no repeated factor over `F_p`.
    pub fn is_squarefree_mod(&self, p: u64) -> bool {
        let f = trim(self.reduced(p));
        if f.len() < 2 {
            return false;
        }
        let df = trim(
            f.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        );
        if df.is_empty() {
            return false;
        }
        gcd_mod(f, df, p).len() == 1
    }
}

/// Horner evaluation of pre-reduced coefficients at a reduced point.
#[inline]
pub fn eval_reduced(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn rem_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let lead_inv = arith::mod_inverse(*b.last().unwrap() as i64, p).expect("nonzero lead");
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let factor = mul_mod(*a.last().unwrap(), lead_inv, p);
        for (i, &c) in b.iter().enumerate() {
            let sub = mul_mod(factor, c, p);
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        a = trim(a);
    }
    a
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        let r = rem_mod(a, &b, p);
        a = b;
        b = r;
    }
    a
}

impl Ord for PolynomialZ {
    /// Degree first, then coefficients from the leading one down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for PolynomialZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PolynomialZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}
