use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Float, Rational};

use super::precision::MIN_BITS;

/// Arbitrary-precision complex number.
///
/// Both components always share one precision. Binary operations promote to
/// the larger precision of the two operands. The argument lies in `(-pi, pi]`;
/// a negative real number has argument `+pi` whatever the sign of its zero
/// imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    re: Float,
    im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec()).max(MIN_BITS);
        BigComplex { re: Float::with_val(p, re), im: Float::with_val(p, im) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn real(prec: u32, x: f64) -> Self {
        Self::from_f64(prec, x, 0.0)
    }

    pub fn from_float(x: Float) -> Self {
        let im = Float::new(x.prec());
        BigComplex::new(x, im)
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        BigComplex::new(Float::with_val(prec, n), Float::new(prec))
    }

    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        BigComplex::new(Float::with_val(prec, r), Float::new(prec))
    }

    pub fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 0.0)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    /// `pi` as a real complex value.
    pub fn pi(prec: u32) -> Self {
        Self::from_float(Float::with_val(prec, Constant::Pi))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.re, self.im)
    }

    /// Rounded copy at a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let p = prec.max(MIN_BITS);
        BigComplex { re: Float::with_val(p, &self.re), im: Float::with_val(p, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// The integer value if this number is an exact real integer that fits an `i64`.
    pub fn as_integer(&self) -> Option<i64> {
        if !self.im.is_zero() || !self.re.is_integer() {
            return None;
        }
        self.re.to_integer().and_then(|n| n.to_i64())
    }

    /// `Some(n)` with `n >= 0` if the value equals the non-positive integer `-n`.
    pub fn as_nonpositive_integer(&self) -> Option<u64> {
        match self.as_integer() {
            Some(k) if k <= 0 => Some(k.unsigned_abs()),
            _ => None,
        }
    }

    /// True when within `2^-(prec-margin) * max(1, |z|)` of a non-positive integer.
    pub fn near_nonpositive_integer(&self, margin: u32) -> Option<u64> {
        if self.re.is_sign_positive() && self.re > 0.5 {
            return None;
        }
        let nearest = Float::with_val(self.prec(), self.re.round_ref());
        if nearest > 0 {
            return None;
        }
        let diff = BigComplex::new(Float::with_val(self.prec(), &self.re - &nearest), self.im.clone());
        let scale = self.abs_f64().max(1.0);
        let tol = (-((self.prec().saturating_sub(margin)) as f64)).exp2() * scale;
        if diff.abs_f64() <= tol {
            nearest.to_integer().and_then(|n| n.to_i64()).map(|k| k.unsigned_abs())
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// `log2 |z|`, finite even when `|z|` overflows an f64.
    pub fn log2_abs(&self) -> f64 {
        let a = self.abs();
        if a.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, a.log2_ref()).to_f64()
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Float {
        let p = self.prec();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                return Float::with_val(p, Constant::Pi);
            }
            return Float::new(p);
        }
        self.im.clone().atan2(&self.re)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex {
            re: Float::with_val(self.prec(), &self.re / &n),
            im: Float::with_val(self.prec(), -(Float::with_val(self.prec(), &self.im / &n))),
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let modulus = self.abs();
        BigComplex { re: Float::with_val(p, modulus.ln_ref()), im: self.arg() }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let mag = Float::with_val(p, self.re.exp_ref());
        if self.im.is_zero() {
            return BigComplex { re: mag, im: Float::new(p) };
        }
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex { re: Float::with_val(p, &mag * &c), im: Float::with_val(p, &mag * &s) }
    }

    /// Principal square root (`Re >= 0`; the negative real axis maps to `+i` times the root).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return BigComplex::zero(p);
        }
        let r = self.abs();
        let absre = Float::with_val(p, self.re.abs_ref());
        let t = Float::with_val(p, (r + &absre) / 2u32).sqrt();
        let two_t = Float::with_val(p, &t * 2u32);
        if !self.re.is_sign_negative() || self.re.is_zero() {
            let im = Float::with_val(p, &self.im / &two_t);
            BigComplex { re: t, im }
        } else {
            let im_abs = Float::with_val(p, self.im.abs_ref());
            let re = Float::with_val(p, im_abs / &two_t);
            let im = if self.im < 0 { -t } else { t };
            BigComplex { re, im }
        }
    }

    /// `self^s = exp(s ln self)` on the principal branch; `0^s = 0` for `Re s > 0`.
    pub fn pow(&self, s: &BigComplex) -> Self {
        let p = self.prec().max(s.prec());
        if self.is_zero() {
            if s.is_zero() {
                return BigComplex::one(p);
            }
            if s.re > 0 {
                return BigComplex::zero(p);
            }
            return BigComplex::from_f64(p, f64::INFINITY, 0.0);
        }
        (s * &self.ln()).exp()
    }

    /// Integer power by repeated squaring (no branch choice involved).
    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = BigComplex::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        BigComplex { re: Float::with_val(p, &s * &ch), im: Float::with_val(p, &c * &sh) }
    }

    pub fn cos(&self) -> Self {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        BigComplex { re: Float::with_val(p, &c * &ch), im: Float::with_val(p, -(Float::with_val(p, &s * &sh))) }
    }

    pub fn mul_real(&self, x: &Float) -> Self {
        let p = self.prec().max(x.prec());
        BigComplex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * x), im: Float::with_val(p, &self.im * x) }
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re * n), im: Float::with_val(p, &self.im * n) }
    }

    pub fn div_i64(&self, n: i64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re / n), im: Float::with_val(p, &self.im / n) }
    }

    pub fn add_f64(&self, x: f64) -> Self {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re + x), im: self.im.clone() }
    }

    pub fn add_real(&self, x: &Float) -> Self {
        let p = self.prec().max(x.prec());
        BigComplex { re: Float::with_val(p, &self.re + x), im: Float::with_val(p, &self.im) }
    }

    pub fn mul_i(&self) -> Self {
        BigComplex { re: Float::with_val(self.prec(), -&self.im), im: self.re.clone() }
    }

    /// `|self - other| / |other|`, or `|self|` when `other` is zero.
    pub fn rel_diff(&self, other: &BigComplex) -> f64 {
        let d = (self - other).abs();
        let o = other.abs();
        if o.is_zero() {
            return d.to_f64();
        }
        Float::with_val(64, &d / &o).to_f64()
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = self.re.to_string_radix(10, Some(digits));
        let im = self.im.to_string_radix(10, Some(digits));
        if let Some(abs) = im.strip_prefix('-') {
            format!("{re} - {abs}i")
        } else {
            format!("{re} + {im}i")
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_string_digits(digits))
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: Float::with_val(self.prec(), -&self.re), im: Float::with_val(self.prec(), -&self.im) }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex { re: Float::with_val(p, &self.re + &rhs.re), im: Float::with_val(p, &self.im + &rhs.im) }
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex { re: Float::with_val(p, &self.re - &rhs.re), im: Float::with_val(p, &self.im - &rhs.im) }
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        if rhs.im.is_zero() && self.im.is_zero() {
            return BigComplex { re: Float::with_val(p, &self.re * &rhs.re), im: Float::new(p) };
        }
        let ac = Float::with_val(p + 16, &self.re * &rhs.re);
        let bd = Float::with_val(p + 16, &self.im * &rhs.im);
        let ad = Float::with_val(p + 16, &self.re * &rhs.im);
        let bc = Float::with_val(p + 16, &self.im * &rhs.re);
        BigComplex { re: Float::with_val(p, &ac - &bd), im: Float::with_val(p, &ad + &bc) }
    }
}

impl Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        if rhs.im.is_zero() {
            let p = self.prec().max(rhs.prec());
            return BigComplex {
                re: Float::with_val(p, &self.re / &rhs.re),
                im: Float::with_val(p, &self.im / &rhs.re),
            };
        }
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
        impl $tr<BigComplex> for &BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Compare moduli without rounding to f64.
pub fn cmp_abs(a: &BigComplex, b: &BigComplex) -> Ordering {
    a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap_or(Ordering::Equal)
}
