//! Double-double ("f64 pair") arithmetic, about 106 bits of significand.
//!
//! Power means of the cubic families reach `C_6 p^7 ≈ 3·10^19` at `p = 300`,
//! beyond the range where an `f64` still resolves units. Accumulating in
//! double-double keeps the rounding residual meaningful at those sizes.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const FRAC_PI_4: Dd = Dd {
    hi: std::f64::consts::FRAC_PI_4,
    lo: 3.061_616_997_868_383e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// `num / den` correct to double-double precision, for `|num|, den < 2^53`.
    pub fn ratio(num: i64, den: i64) -> Self {
        let (n, d) = (num as f64, den as f64);
        let q1 = n / d;
        let rem = -q1.mul_add(d, -n);
        let q2 = rem / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn powi(self, mut exp: u32) -> Self {
        let mut base = self;
        let mut acc = Dd::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Nearest integer and the absolute distance to it.
    pub fn round_i128(self) -> (i128, f64) {
        let r_hi = self.hi.round();
        let rem = (self.hi - r_hi) + self.lo;
        let r_lo = rem.round();
        ((r_hi as i128) + (r_lo as i128), (rem - r_lo).abs())
    }

    /// `(cos x, sin x)` by Taylor series; intended for `|x| ≤ π/4`.
    fn cos_sin_small(x: Dd) -> (Dd, Dd) {
        let x2 = x * x;
        let mut sin = x;
        let mut cos = Dd::ONE;
        let mut term_s = x;
        let mut term_c = Dd::ONE;
        let mut n = 1u32;
        loop {
            let a = f64::from((2 * n) * (2 * n + 1));
            let b = f64::from((2 * n - 1) * (2 * n));
            term_s = -(term_s * x2).div_f64(a);
            term_c = -(term_c * x2).div_f64(b);
            sin += term_s;
            cos += term_c;
            if term_s.hi.abs() < 1e-36 && term_c.hi.abs() < 1e-36 {
                break;
            }
            n += 1;
        }
        (cos, sin)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let rem = ((self.hi - p) - e) + self.lo;
        let q2 = rem / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, rhs: Dd) {
        *self = *self + rhs;
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for DdComplex {
    type Output = DdComplex;
    #[inline]
    fn add(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl AddAssign for DdComplex {
    #[inline]
    fn add_assign(&mut self, rhs: DdComplex) {
        *self = *self + rhs;
    }
}

/// `e(j/q)` for `j = 0..q`, each from its own angle.
///
/// The angle is folded into `[-π/4, π/4]` around a multiple of `π/2` with
/// exact integer arithmetic, so quarter-turn points come out exact.
pub fn unit_roots(q: u64) -> Vec<DdComplex> {
    assert!((1..(1 << 50)).contains(&q), "modulus out of range");
    (0..q).map(|j| unit_root(j, q)).collect()
}

fn unit_root(j: u64, q: u64) -> DdComplex {
    let t = (8 * j) % (8 * q);
    let octant = t / q;
    let rest = t % q;
    let (quarter, theta) = if octant.is_multiple_of(2) {
        (octant / 2, FRAC_PI_4 * Dd::ratio(rest as i64, q as i64))
    } else {
        (
            octant.div_ceil(2) % 4,
            -(FRAC_PI_4 * Dd::ratio((q - rest) as i64, q as i64)),
        )
    };
    let (c, s) = Dd::cos_sin_small(theta);
    let (re, im) = match quarter {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    DdComplex { re, im }
}
