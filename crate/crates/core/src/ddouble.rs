//! Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
//!
//! Only what the phase reduction and the Piatetski-Shapiro floors need:
//! ring operations, `exp`, `ln`, powers, and an exact split into integer and
//! fractional parts. Relative accuracy is about 2^-104.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
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

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact for every `u64` (two 32-bit halves, each exact in `f64`).
    pub fn from_u64(n: u64) -> Self {
        let hi = (n >> 32) as f64 * 4_294_967_296.0;
        let lo = (n & 0xffff_ffff) as f64;
        let (s, e) = two_sum(hi, lo);
        Self { hi: s, lo: e }
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

    pub fn sqr(self) -> Self {
        self * self
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    /// Largest integer `<= self`, as a double-double.
    pub fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            let fl = self.lo.floor();
            let (hi, lo) = quick_two_sum(fh, fl);
            Self { hi, lo }
        } else {
            Self { hi: fh, lo: 0.0 }
        }
    }

    /// Fractional part in `[0, 1)`, as a double.
    ///
    /// This is the whole point of carrying the low word: for `|x|` around
    /// 1e9 a plain `f64` keeps only ~7 fractional digits.
    pub fn fract(self) -> f64 {
        let r = self - self.floor();
        let f = r.hi + r.lo;
        if f >= 1.0 {
            f - 1.0
        } else if f < 0.0 {
            f + 1.0
        } else {
            f
        }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        // x = k ln2 + r, then exp(r) = (exp(r / 2^9))^(2^9)
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).ldexp(-9);
        // Taylor series, |r| < 7e-4 so 14 terms reach 2^-110.
        let mut term = r;
        let mut sum = r;
        for i in 2..=14 {
            term = term * r / Self::from_f64(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        // exp(r) - 1 squared up via (1+s)^2 - 1 = 2s + s^2 to keep precision
        for _ in 0..9 {
            sum = sum.mul_f64(2.0) + sum.sqr();
        }
        (sum + Self::ONE).ldexp(k as i32)
    }

    /// Natural logarithm of a positive value, by one Newton step on `exp`.
    pub fn ln(self) -> Self {
        assert!(self.hi > 0.0, "ln of non-positive double-double");
        let y = Self::from_f64(self.hi.ln());
        // y + x e^{-y} - 1, twice to be safe with the double seed
        let y = y + self * (-y).exp() - Self::ONE;
        y + self * (-y).exp() - Self::ONE
    }

    /// `self^e` for positive `self` and a real exponent given as double-double.
    pub fn powdd(self, e: Self) -> Self {
        (self.ln() * e).exp()
    }

    pub fn powf(self, e: f64) -> Self {
        self.powdd(Self::from_f64(e))
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: DoubleDouble, b: DoubleDouble, rel: f64) -> bool {
        let d = (a - b).abs().to_f64();
        d <= rel * b.abs().to_f64()
    }

    #[test]
    fn exact_integers() {
        let n = DoubleDouble::from_u64(u64::MAX);
        assert_eq!(n.hi, 18446744073709551616.0);
        assert_eq!(n.lo, -1.0);
        assert_eq!(DoubleDouble::from_u64(12345).floor().to_f64(), 12345.0);
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &x in &[1e-3, 0.5, 1.0, 2.0, 10.0, 12345.678, 1e9] {
            let d = DoubleDouble::from_f64(x);
            assert!(close(d.ln().exp(), d, 1e-30), "x = {x}");
        }
        // e^1 against the 32-digit constant 2.7182818284590452353602874713527
        let e1 = DoubleDouble::ONE.exp();
        assert_eq!(e1.hi, std::f64::consts::E);
        assert!((e1.lo - 1.445_646_891_729_250_2e-16).abs() < 1e-31);
    }

    #[test]
    fn integer_powers_are_recovered() {
        // 7^(3/2) squared is 343 exactly
        let x = DoubleDouble::from_u64(7).powf(1.5);
        assert!(close(x.sqr(), DoubleDouble::from_u64(343), 1e-30));
        // 2^20 via ln/exp
        let y = DoubleDouble::from_u64(2).powf(20.0);
        assert!(close(y, DoubleDouble::from_u64(1 << 20), 1e-30));
    }

    #[test]
    fn fractional_part_of_large_values() {
        // 1e9 + 0.25 is not representable to 1e-12 in f64 fractional terms
        let x = DoubleDouble::from_u64(1_000_000_000) + DoubleDouble::from_f64(0.25);
        assert_eq!(x.fract(), 0.25);
        let y = DoubleDouble::from_u64(1_000_000_000) - DoubleDouble::from_f64(1e-20);
        assert!((y.fract() - 1.0).abs() < 1e-15 || y.fract() < 1e-15);
        let z = -DoubleDouble::from_f64(2.75);
        assert_eq!(z.fract(), 0.25);
    }
}
