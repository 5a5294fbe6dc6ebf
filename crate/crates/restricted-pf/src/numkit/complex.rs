use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::{Float, Rational};

/// Complex number with MPFR real and imaginary parts.
///
/// Binary operations produce a result at the smaller of the operand precisions.
#[derive(Clone, PartialEq)]
pub struct APComplex {
    pub re: Float,
    pub im: Float,
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

impl APComplex {
    pub fn zero(prec: u32) -> Self {
        APComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        APComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        APComplex { re, im }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        let p = re.prec().min(im.prec());
        APComplex { re: Float::with_val(p, re), im: Float::with_val(p, im) }
    }

    pub fn from_int(prec: u32, n: i64) -> Self {
        Self::from_real(Float::with_val(prec, n))
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Self::from_real(Float::with_val(prec, q))
    }

    /// Parses "a+bi", "a-bi", "a", "bi".
    pub fn parse(prec: u32, s: &str) -> Option<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = t.strip_suffix('i') {
            let bytes = body.as_bytes();
            let mut split = None;
            for idx in (1..bytes.len()).rev() {
                if (bytes[idx] == b'+' || bytes[idx] == b'-') && bytes[idx - 1] != b'e' && bytes[idx - 1] != b'E' {
                    split = Some(idx);
                    break;
                }
            }
            let (re_s, im_s) = match split {
                Some(idx) => (&body[..idx], &body[idx..]),
                None => ("0", body),
            };
            let im_s = match im_s {
                "" | "+" => "1",
                "-" => "-1",
                x => x,
            };
            let re = Float::parse(re_s).ok()?;
            let im = Float::parse(im_s).ok()?;
            Some(APComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) })
        } else {
            let re = Float::parse(&t).ok()?;
            Some(Self::from_real(Float::with_val(prec, re)))
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        APComplex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        APComplex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    /// |z|^2
    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let a = Float::with_val(p, self.re.square_ref());
        let b = Float::with_val(p, self.im.square_ref());
        a + b
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn mul_i(&self) -> Self {
        APComplex { re: Float::with_val(self.im.prec(), -&self.im), im: self.re.clone() }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().min(s.prec());
        APComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        let p = self.prec();
        APComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn scale_rat(&self, q: &Rational) -> Self {
        self.scale(&Float::with_val(self.prec(), q))
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        APComplex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -(Float::with_val(p, &self.im / &n))),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = sin_cos(&self.im);
        APComplex { re: Float::with_val(p, &r * &c), im: Float::with_val(p, &r * &s) }
    }

    /// e^{i x} for real x.
    pub fn cis(x: &Float) -> Self {
        let (s, c) = sin_cos(x);
        APComplex { re: c, im: s }
    }

    /// Principal logarithm; on the negative real axis with im = -0 the argument is -π.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.norm_sqr().ln()) / 2u32;
        APComplex { re: m, im: self.arg() }
    }

    /// Principal square root, Re >= 0.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        if !self.re.is_sign_negative() {
            let s = Float::with_val(p, Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let t = Float::with_val(p, &self.im / &s) / 2u32;
            APComplex { re: s, im: t }
        } else {
            let mut t = Float::with_val(p, Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            if self.im.is_sign_negative() {
                t = -t;
            }
            let s = Float::with_val(p, &self.im / &t) / 2u32;
            APComplex { re: s, im: t }
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Principal power exp(a log z).
    pub fn powc(&self, a: &APComplex) -> Self {
        (a * &self.ln()).exp()
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (s, c) = sin_cos(&self.re);
        let sh = Float::with_val(p, self.im.sinh_ref());
        let ch = Float::with_val(p, self.im.cosh_ref());
        APComplex { re: Float::with_val(p, &s * &ch), im: Float::with_val(p, &c * &sh) }
    }

    pub fn cos(&self) -> Self {
        let p = self.prec();
        let (s, c) = sin_cos(&self.re);
        let sh = Float::with_val(p, self.im.sinh_ref());
        let ch = Float::with_val(p, self.im.cosh_ref());
        APComplex { re: Float::with_val(p, &c * &ch), im: Float::with_val(p, -(Float::with_val(p, &s * &sh))) }
    }

    /// cot(x+iy) = (sin 2x - i sinh 2y) / (cosh 2y - cos 2x)
    pub fn cot(&self) -> Self {
        let p = self.prec();
        let two = Float::with_val(p, 2u32);
        let x2 = Float::with_val(p, &self.re * &two);
        let y2 = Float::with_val(p, &self.im * &two);
        let (s2, c2) = sin_cos(&x2);
        let sh = Float::with_val(p, y2.sinh_ref());
        let ch = Float::with_val(p, y2.cosh_ref());
        let den = Float::with_val(p, &ch - &c2);
        APComplex { re: Float::with_val(p, &s2 / &den), im: Float::with_val(p, -(Float::with_val(p, &sh / &den))) }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Fixed-format string with `digits` significant digits in each part.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = fmt_float(&self.re, digits);
        let im_abs = Float::with_val(self.im.prec(), self.im.abs_ref());
        let im = fmt_float(&im_abs, digits);
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        format!("{re} {sign} {im}i")
    }
}

pub fn sin_cos(x: &Float) -> (Float, Float) {
    let p = x.prec();
    let mut s = x.clone();
    let mut c = Float::new(p);
    s.sin_cos_mut(&mut c);
    (s, c)
}

/// Scientific notation with a given number of significant digits.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

impl fmt::Debug for APComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(20))
    }
}

impl fmt::Display for APComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(f.precision().unwrap_or(15)))
    }
}

impl<'a> Add<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn add(self, o: &APComplex) -> APComplex {
        let p = self.prec().min(o.prec());
        APComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl<'a> Sub<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn sub(self, o: &APComplex) -> APComplex {
        let p = self.prec().min(o.prec());
        APComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl<'a> Mul<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn mul(self, o: &APComplex) -> APComplex {
        let p = self.prec().min(o.prec());
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        APComplex { re: ac - bd, im: ad + bc }
    }
}

impl<'a> Div<&'a APComplex> for &'a APComplex {
    type Output = APComplex;
    fn div(self, o: &APComplex) -> APComplex {
        self * &o.recip()
    }
}

impl Neg for &APComplex {
    type Output = APComplex;
    fn neg(self) -> APComplex {
        APComplex { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }
}

impl Neg for APComplex {
    type Output = APComplex;
    fn neg(self) -> APComplex {
        APComplex { re: -self.re, im: -self.im }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<APComplex> for APComplex {
            type Output = APComplex;
            fn $m(self, o: APComplex) -> APComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a APComplex> for APComplex {
            type Output = APComplex;
            fn $m(self, o: &APComplex) -> APComplex {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<APComplex> for &'a APComplex {
            type Output = APComplex;
            fn $m(self, o: APComplex) -> APComplex {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl AddAssign<&APComplex> for APComplex {
    fn add_assign(&mut self, o: &APComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign<APComplex> for APComplex {
    fn add_assign(&mut self, o: APComplex) {
        *self += &o;
    }
}

impl SubAssign<&APComplex> for APComplex {
    fn sub_assign(&mut self, o: &APComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&APComplex> for APComplex {
    fn mul_assign(&mut self, o: &APComplex) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn close(a: &APComplex, b: &APComplex, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn exp_ln_roundtrip() {
        let z = APComplex::from_f64(P, 0.3, -2.7);
        assert!(close(&z.ln().exp(), &z, 1e-70));
    }

    #[test]
    fn sqrt_is_principal() {
        for (a, b) in [(-4.0, 0.0), (-4.0, -0.0), (3.0, 4.0), (-3.0, -4.0), (0.0, -2.0)] {
            let z = APComplex::from_f64(P, a, b);
            let r = z.sqrt();
            assert!(!r.re.is_sign_negative());
            assert!(close(&r.square(), &z, 1e-70));
        }
        let r = APComplex::from_f64(P, -4.0, 0.0).sqrt();
        assert!(close(&r, &APComplex::from_f64(P, 0.0, 2.0), 1e-70));
    }

    #[test]
    fn cot_matches_cos_over_sin() {
        for (a, b) in [(0.3, 0.2), (2.2, -0.4), (1.1, 30.0)] {
            let z = APComplex::from_f64(P, a, b);
            let lhs = z.cot();
            let rhs = &z.cos() / &z.sin();
            assert!(close(&lhs, &rhs, 1e-60));
        }
    }

    #[test]
    fn powi_and_parse() {
        let z = APComplex::parse(P, "1.5-2i").unwrap();
        assert!(close(&z, &APComplex::from_f64(P, 1.5, -2.0), 0.0_f64.max(1e-70)));
        let w = z.powi(-3);
        assert!(close(&(&w * &z.powi(3)), &APComplex::one(P), 1e-70));
        assert!(close(&APComplex::parse(P, "-i").unwrap(), &APComplex::from_f64(P, 0.0, -1.0), 1e-70));
        assert!(close(&APComplex::parse(P, "2.5").unwrap(), &APComplex::from_f64(P, 2.5, 0.0), 1e-70));
    }

    #[test]
    fn precision_is_min_of_operands() {
        let a = APComplex::from_f64(128, 1.0, 1.0);
        let b = APComplex::from_f64(256, 1.0, 1.0);
        assert_eq!((&a * &b).prec(), 128);
        assert_eq!((&a + &b).prec(), 128);
    }
}
