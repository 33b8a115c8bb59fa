//! Working-precision plumbing: a copyable precision handle and a minimal
//! complex type over [`rug::Float`].
//!
//! Every value in the analytic layers carries its precision from
//! construction. The accuracy contract throughout the crate is that a
//! result computed at `D` decimal digits is good to `10^-(D-10)`; internal
//! arithmetic runs with a generous guard on top of `D` so that the modest
//! cancellations in the series assemblies stay under that envelope.

use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::Float;
use std::ops::{Add, Div, Mul, Neg, Sub};

const LOG2_10: f64 = 3.321928094887362;

/// Decimal working precision. `Prec::new(64)` is the crate default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prec {
    digits: u32,
}

impl Prec {
    pub const MIN_DIGITS: u32 = 32;

    /// Guard digits added on top of the requested precision for internal
    /// arithmetic. Sized for the root-polish and Binet reconstruction
    /// checks, which amplify unit roundoff by `beta^64`-scale factors.
    const GUARD_DIGITS: u32 = 24;

    pub fn new(digits: u32) -> Prec {
        Prec {
            digits: digits.max(Self::MIN_DIGITS),
        }
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Binary precision used for the underlying floats.
    pub fn bits(self) -> u32 {
        ((self.digits + Self::GUARD_DIGITS) as f64 * LOG2_10).ceil() as u32 + 16
    }

    /// Same precision plus `extra` decimal digits, for locally
    /// ill-conditioned steps (finite differences, Laurent probes).
    pub fn raised(self, extra: u32) -> Prec {
        Prec {
            digits: self.digits + extra,
        }
    }

    pub fn float<T>(self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    pub fn zero(self) -> Float {
        self.float(0)
    }

    /// Parse a decimal literal at working precision.
    pub fn parse(self, s: &str) -> Float {
        Float::with_val(self.bits(), Float::parse(s).expect("valid decimal literal"))
    }

    pub fn pi(self) -> Float {
        self.float(Constant::Pi)
    }

    /// Euler–Mascheroni constant.
    pub fn euler_gamma(self) -> Float {
        self.float(Constant::Euler)
    }

    /// `10^-(digits - slack)`: tolerance with `slack` digits given back.
    pub fn eps(self, slack: u32) -> Float {
        let e = self.digits.saturating_sub(slack) as i32;
        self.float(10).pow_i(-e)
    }

    /// `10^-(digits + extra)`: truncation threshold for series tails.
    pub fn tail_eps(self, extra: u32) -> Float {
        self.float(10).pow_i(-((self.digits + extra) as i32))
    }
}

impl Default for Prec {
    fn default() -> Self {
        Prec::new(64)
    }
}

/// Integer power helper for `Float` (rug exposes `pow` via traits; this
/// keeps call sites short).
pub trait FloatPowI {
    fn pow_i(self, e: i32) -> Float;
}

impl FloatPowI for Float {
    fn pow_i(self, e: i32) -> Float {
        use rug::ops::Pow;
        self.pow(e)
    }
}

/// Complex number with `rug::Float` components.
///
/// Only the operations the analytic layers need are implemented; the type
/// is deliberately not generic. Precision travels with the components.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Cx {
        Cx { re, im }
    }

    pub fn from_real(re: Float) -> Cx {
        let im = Float::with_val(re.prec(), 0);
        Cx { re, im }
    }

    pub fn zero(prec: Prec) -> Cx {
        Cx::new(prec.zero(), prec.zero())
    }

    pub fn one(prec: Prec) -> Cx {
        Cx::new(prec.float(1), prec.zero())
    }

    pub fn i(prec: Prec) -> Cx {
        Cx::new(prec.zero(), prec.float(1))
    }

    pub fn bits(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Cx {
        Cx::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn norm_sq(&self) -> Float {
        self.re.clone().square() + self.im.clone().square()
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// Principal argument, in (-pi, pi].
    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn recip(&self) -> Cx {
        let d = self.norm_sq();
        Cx::new(self.re.clone() / d.clone(), -self.im.clone() / d)
    }

    pub fn scale(&self, f: &Float) -> Cx {
        Cx::new(self.re.clone() * f, self.im.clone() * f)
    }

    pub fn exp(&self) -> Cx {
        let m = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(self.bits()));
        Cx::new(m.clone() * c, m * s)
    }

    /// Principal branch logarithm.
    pub fn ln(&self) -> Cx {
        Cx::new(self.abs().ln(), self.arg())
    }

    /// Principal power `self^w`.
    pub fn powc(&self, w: &Cx) -> Cx {
        (&(w * &self.ln())).exp()
    }

    /// `self^k` by repeated squaring (exact integer exponent path).
    pub fn powi(&self, k: i64) -> Cx {
        let prec_bits = self.bits();
        if k == 0 {
            return Cx::new(Float::with_val(prec_bits, 1), Float::new(prec_bits));
        }
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Cx::new(Float::with_val(prec_bits, 1), Float::new(prec_bits));
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
}

impl std::fmt::Display for Cx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_sign_positive() {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}

macro_rules! cx_binop {
    ($trait:ident, $fn:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&Cx> for &Cx {
            type Output = Cx;
            fn $fn(self, rhs: &Cx) -> Cx {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $trait<Cx> for Cx {
            type Output = Cx;
            fn $fn(self, rhs: Cx) -> Cx {
                (&self).$fn(&rhs)
            }
        }
        impl $trait<&Cx> for Cx {
            type Output = Cx;
            fn $fn(self, rhs: &Cx) -> Cx {
                (&self).$fn(rhs)
            }
        }
        impl $trait<Cx> for &Cx {
            type Output = Cx;
            fn $fn(self, rhs: Cx) -> Cx {
                self.$fn(&rhs)
            }
        }
    };
}

cx_binop!(Add, add, |a, b| Cx::new(
    (&a.re + &b.re).complete(a.bits()),
    (&a.im + &b.im).complete(a.bits())
));
cx_binop!(Sub, sub, |a, b| Cx::new(
    (&a.re - &b.re).complete(a.bits()),
    (&a.im - &b.im).complete(a.bits())
));
cx_binop!(Mul, mul, |a, b| {
    let re = a.re.clone() * &b.re - a.im.clone() * &b.im;
    let im = a.re.clone() * &b.im + a.im.clone() * &b.re;
    Cx::new(re, im)
});
cx_binop!(Div, div, |a, b| {
    let d = b.norm_sq();
    let re = (a.re.clone() * &b.re + a.im.clone() * &b.im) / d.clone();
    let im = (a.im.clone() * &b.re - a.re.clone() * &b.im) / d;
    Cx::new(re, im)
});

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        -&self
    }
}
