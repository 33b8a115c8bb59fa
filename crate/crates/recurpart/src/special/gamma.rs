//! Complex Gamma function by the Stirling series with argument raising,
//! plus the leading Laurent data at the non-positive integer poles.
//!
//! Stirling's asymptotic series reaches `10^-D` accuracy once
//! `Re w ≳ 0.4 D`, so arguments left of that line are first shifted with
//! the functional equation, and the left half-plane goes through the
//! reflection formula. Precision therefore scales with the requested
//! digits, which is the reason for preferring this over a fixed-coefficient
//! rational approximation.

use crate::error::{Error, Result};
use crate::hp::{Cx, Prec};
use crate::special::bernoulli::bernoulli;
use rug::{Complete, Float, Integer};

/// sin(pi z) via sin(x+iy) = sin x cosh y + i cos x sinh y, which avoids
/// forming exp(±i pi z) separately.
pub fn sin_pi(z: &Cx, prec: Prec) -> Cx {
    let x = prec.float(&z.re) * prec.pi();
    let y = prec.float(&z.im) * prec.pi();
    let (sx, cx) = x.sin_cos(Float::new(prec.bits()));
    let (shy, chy) = y.sinh_cosh(Float::new(prec.bits()));
    Cx::new(sx * chy, cx * shy)
}

fn is_nonpositive_integer(z: &Cx) -> Option<i64> {
    if !z.im.is_zero() {
        return None;
    }
    if z.re.is_sign_positive() && !z.re.is_zero() {
        return None;
    }
    if z.re.clone().fract().is_zero() {
        z.re.to_integer().and_then(|i| i.to_i64())
    } else {
        None
    }
}

/// log Gamma by the Stirling series; the caller guarantees Re w is past
/// the precision-dependent threshold.
fn ln_gamma_stirling(w: &Cx, prec: Prec) -> Cx {
    let half = prec.float(0.5);
    let ln2pi = (prec.pi() * prec.float(2)).ln();
    let wl = w.ln();
    let mut acc = &(w - &Cx::from_real(half.clone())) * &wl;
    acc = &acc - w;
    acc = &acc + &Cx::from_real(ln2pi * half);

    let winv2 = (&Cx::one(prec) / w).powi(2);
    let mut pow = &Cx::one(prec) / w; // w^{-(2k-1)}
    let tail = prec.tail_eps(5);
    let mut prev_mag = Float::with_val(prec.bits(), rug::float::Special::Infinity);
    for k in 1..400u32 {
        let b = bernoulli(2 * k);
        let denom = Integer::from(2 * k) * Integer::from(2 * k - 1);
        let coeff = prec.float(b.numer()) / prec.float(b.denom()) / prec.float(denom);
        let term = pow.scale(&coeff);
        let mag = term.abs();
        if mag > prev_mag {
            break; // asymptotic divergence onset
        }
        acc = &acc + &term;
        if mag < tail {
            break;
        }
        prev_mag = mag;
        pow = &pow * &winv2;
    }
    acc
}

/// Gamma(z) for complex z, accurate to the crate contract for
/// |Im z| at least up to 100.
pub fn gamma(z: &Cx, prec: Prec) -> Result<Cx> {
    let z = Cx::new(prec.float(&z.re), prec.float(&z.im));
    if let Some(n) = is_nonpositive_integer(&z) {
        return Err(Error::PoleAtNonpositiveInteger(n));
    }
    // Reflection into the right half-plane keeps the raising loop short.
    if z.re < 0.5 {
        let one_minus = &Cx::one(prec) - &z;
        let g = gamma(&one_minus, prec)?;
        let s = sin_pi(&z, prec);
        return Ok(&Cx::from_real(prec.pi()) / &(&s * &g));
    }
    let threshold = 0.42 * (prec.digits() as f64) + 12.0;
    let shift = if z.re.to_f64() < threshold {
        (threshold - z.re.to_f64()).ceil() as u32
    } else {
        0
    };
    let mut denom = Cx::one(prec);
    for j in 0..shift {
        denom = &denom * &(&z + &Cx::from_real(prec.float(j)));
    }
    let shifted = &z + &Cx::from_real(prec.float(shift));
    let lg = ln_gamma_stirling(&shifted, prec);
    Ok(&lg.exp() / &denom)
}

/// Leading Laurent data of Gamma at z = -n:
/// `(residue, constant) = ((-1)^n/n!, (-1)^n/n! (H_n - gamma))`.
pub fn gamma_laurent_at_neg(n: u32, prec: Prec) -> (Float, Float) {
    let fact = Integer::factorial(n).complete();
    let mut residue = prec.float(1) / prec.float(&fact);
    if n % 2 == 1 {
        residue = -residue;
    }
    let mut h = prec.zero();
    for k in 1..=n {
        h += prec.float(1) / prec.float(k);
    }
    let constant = residue.clone() * (h - prec.euler_gamma());
    (residue, constant)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Prec {
        Prec::new(64)
    }

    #[test]
    fn integer_values() {
        let g = gamma(&Cx::one(p()), p()).unwrap();
        assert!((g.re.clone() - 1u32).abs() < p().eps(10));
        assert!(g.im.clone().abs() < p().eps(10));
        let g5 = gamma(&Cx::from_real(p().float(5)), p()).unwrap();
        assert!((g5.re.clone() - 24u32).abs() < p().eps(8));
    }

    #[test]
    fn half_integer() {
        let g = gamma(&Cx::from_real(p().float(0.5)), p()).unwrap();
        let sqrt_pi = p().pi().sqrt();
        assert!((g.re.clone() - sqrt_pi).abs() < p().eps(10));
    }

    #[test]
    fn pole_rejected() {
        assert!(matches!(
            gamma(&Cx::from_real(p().float(-3)), p()),
            Err(Error::PoleAtNonpositiveInteger(-3))
        ));
        assert!(matches!(
            gamma(&Cx::zero(p()), p()),
            Err(Error::PoleAtNonpositiveInteger(0))
        ));
    }

    #[test]
    fn reflection_residual_on_grid() {
        // |Gamma(z) Gamma(1-z) sin(pi z)/pi - 1| stays inside the contract
        let prec = p();
        let pts = [(0.3, 7.0), (-2.5, 1.5), (3.7, -12.0), (-8.2, 20.0)];
        for (re, im) in pts {
            let z = Cx::new(prec.float(re), prec.float(im));
            let lhs = &(&gamma(&z, prec).unwrap() * &gamma(&(&Cx::one(prec) - &z), prec).unwrap())
                * &sin_pi(&z, prec);
            let resid = (&lhs / &Cx::from_real(prec.pi()) - &Cx::one(prec)).abs();
            assert!(resid < prec.eps(10), "residual {} at ({re},{im})", resid);
        }
    }

    #[test]
    fn laurent_data_at_poles() {
        let prec = p();
        let (r0, c0) = gamma_laurent_at_neg(0, prec);
        assert!((r0.clone() - 1u32).abs() < prec.eps(10));
        assert!((c0.clone() + prec.euler_gamma()).abs() < prec.eps(10));
        // probe: Gamma(-n + h) ~ residue/h + constant + O(h)
        let hi = prec.raised(40);
        let h = hi.parse("1e-20");
        for n in [1i64, 4] {
            let (r, c) = gamma_laurent_at_neg(n as u32, prec);
            let z = Cx::from_real(hi.float(-n) + h.clone());
            let val = gamma(&z, hi).unwrap();
            let probe_r = val.re.clone() * h.clone();
            assert!((probe_r - &r).abs() < hi.parse("1e-19"), "residue probe n={n}");
            let probe_c = val.re.clone() - prec.float(&r) / h.clone();
            assert!((probe_c - &c).abs() < hi.parse("1e-15"), "constant probe n={n}");
        }
    }
}
