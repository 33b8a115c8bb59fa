//! Riemann zeta for complex arguments: Euler–Maclaurin summation on
//! Re z > 0.5, the functional equation elsewhere. Also the Laurent data of
//! zeta(1+z) at z = 0 (Euler–Mascheroni and first Stieltjes constant), a
//! termwise-differentiated Euler–Maclaurin evaluator for zeta', and the
//! derivative at the odd negative integers 1-4n through the functional
//! equation's logarithmic derivative.

use crate::error::{Error, Result};
use crate::hp::{Cx, FloatPowI, Prec};
use crate::special::bernoulli::bernoulli;
use crate::special::gamma::{gamma, sin_pi};
use rug::Float;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Euler–Maclaurin node count; grows with precision and |Im z|.
fn em_nodes(prec: Prec, im_abs: f64) -> u32 {
    (0.18 * prec.bits() as f64 + 0.7 * im_abs).ceil() as u32 + 12
}

/// Euler–Maclaurin evaluation, valid for Re z > 0.5.
fn zeta_em(z: &Cx, prec: Prec) -> Cx {
    let n = em_nodes(prec, z.im.to_f64().abs());
    let mut acc = Cx::zero(prec);
    let minus_z = -z;
    for j in 1..n {
        let lj = prec.float(j).ln();
        acc = &acc + &(&minus_z * &Cx::from_real(lj)).exp();
    }
    let nf = Cx::from_real(prec.float(n));
    let ln_n = Cx::from_real(prec.float(n).ln());
    // N^{1-z}/(z-1)
    let n_pow = (&(&Cx::one(prec) - z) * &ln_n).exp();
    acc = &acc + &(&n_pow / &(z - &Cx::one(prec)));
    // N^{-z}/2
    let n_mz = (&minus_z * &ln_n).exp();
    acc = &acc + &n_mz.scale(&prec.float(0.5));
    // correction terms: B_{2k}/(2k)! (z)_{2k-1} N^{-z-2k+1}
    let tail = prec.tail_eps(5);
    let mut poch = z.clone(); // (z)_1 = z
    let mut idx = 1u32; // next factor is (z + idx)
    let mut fact = prec.float(1); // (2k)!
    let mut prev_mag = Float::with_val(prec.bits(), rug::float::Special::Infinity);
    for k in 1..=(4 * n) {
        fact *= prec.float(2 * k - 1) * prec.float(2 * k);
        let b = bernoulli(2 * k);
        let coeff = prec.float(b.numer()) / prec.float(b.denom()) / fact.clone();
        // N^{-z-2k+1} = N^{-z} * N^{-(2k-1)}
        let n_smallpow = (&nf).powi(-(2 * k as i64 - 1));
        let term = (&(&n_mz * &poch) * &n_smallpow).scale(&coeff);
        let mag = term.abs();
        if mag > prev_mag {
            break;
        }
        acc = &acc + &term;
        if mag < tail {
            break;
        }
        prev_mag = mag;
        // extend Pochhammer by two factors
        poch = &poch * &(z + &Cx::from_real(prec.float(idx)));
        poch = &poch * &(z + &Cx::from_real(prec.float(idx + 1)));
        idx += 2;
    }
    acc
}

/// zeta(z) for complex z != 1.
pub fn riemann_zeta(z: &Cx, prec: Prec) -> Result<Cx> {
    let z = Cx::new(prec.float(&z.re), prec.float(&z.im));
    if z.im.is_zero() && z.re == 1 {
        return Err(Error::PoleAtOne);
    }
    if z.re > 0.5 {
        return Ok(zeta_em(&z, prec));
    }
    if z.im.is_zero() && z.re.is_zero() {
        // the reflection below hits sin(0) * zeta(1); the limit is -1/2
        return Ok(Cx::from_real(prec.float(-0.5)));
    }
    // zeta(z) = 2^z pi^{z-1} sin(pi z/2) Gamma(1-z) zeta(1-z)
    let one_minus = &Cx::one(prec) - &z;
    let zeta_rhs = zeta_em(&one_minus, prec);
    let g = gamma(&one_minus, prec)?;
    let half_z = z.scale(&prec.float(0.5));
    let s = sin_pi(&half_z, prec);
    let two_pow = (&z * &Cx::from_real(prec.float(2).ln())).exp();
    let pi_pow = (&(&z - &Cx::one(prec)) * &Cx::from_real(prec.pi().ln())).exp();
    Ok(&(&(&(&two_pow * &pi_pow) * &s) * &g) * &zeta_rhs)
}

/// d/dz zeta(z) on the real axis for z > 0.5, by differentiating every
/// Euler–Maclaurin term analytically. Kept separate from `riemann_zeta`
/// so the finite-difference cross-check stays an independent route.
pub fn zeta_deriv_em(z: &Float, prec: Prec) -> Float {
    let z = prec.float(z);
    assert!(z > 0.5, "termwise-differentiated EM needs Re z > 0.5");
    let n = em_nodes(prec, 0.0);
    let mut acc = prec.zero();
    for j in 2..n {
        let lj = prec.float(j).ln();
        acc -= lj.clone() * (-(z.clone()) * lj).exp();
    }
    let ln_n = prec.float(n).ln();
    let n_1mz = ((prec.float(1) - z.clone()) * ln_n.clone()).exp();
    let zm1 = z.clone() - prec.float(1);
    // d/dz [N^{1-z}/(z-1)] = -ln N N^{1-z}/(z-1) - N^{1-z}/(z-1)^2
    acc += -ln_n.clone() * n_1mz.clone() / zm1.clone() - n_1mz / zm1.clone().square();
    let n_mz = (-(z.clone()) * ln_n.clone()).exp();
    // d/dz [N^{-z}/2] = -ln N N^{-z}/2
    acc += -ln_n.clone() * n_mz.clone() / prec.float(2);
    // d/dz of correction terms
    let tail = prec.tail_eps(5);
    let mut poch = z.clone();
    let mut poch_logsum = prec.float(1) / z.clone(); // sum 1/(z+i), i=0..2k-2
    let mut idx = 1u32;
    let mut fact = prec.float(1);
    let mut prev_mag = Float::with_val(prec.bits(), rug::float::Special::Infinity);
    for k in 1..=(4 * n) {
        fact *= prec.float(2 * k - 1) * prec.float(2 * k);
        let b = bernoulli(2 * k);
        let coeff = prec.float(b.numer()) / prec.float(b.denom()) / fact.clone();
        let n_pow = n_mz.clone() * prec.float(n).pow_i(-(2 * k as i32 - 1));
        let term = coeff * poch.clone() * n_pow * (poch_logsum.clone() - ln_n.clone());
        let mag = term.clone().abs();
        if mag > prev_mag {
            break;
        }
        acc += term;
        if mag < tail {
            break;
        }
        prev_mag = mag;
        for step in [idx, idx + 1] {
            let f = z.clone() + prec.float(step);
            poch *= f.clone();
            poch_logsum += f.recip();
        }
        idx += 2;
    }
    acc
}

/// First Stieltjes constant by the Euler–Maclaurin-accelerated limit of
/// `sum log k / k - (log m)^2 / 2`. Cached per working precision.
pub fn stieltjes_gamma1(prec: Prec) -> Float {
    static CACHE: OnceLock<Mutex<HashMap<u32, Float>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec.bits()) {
        return v.clone();
    }
    let n = ((prec.digits() + 30) as f64 * 0.37).ceil() as u32 + 8;
    let mut s = prec.zero();
    for k in 2..=n {
        let kf = prec.float(k);
        s += kf.clone().ln() / kf;
    }
    let ln_n = prec.float(n).ln();
    s -= ln_n.clone().square() / prec.float(2);
    s -= ln_n.clone() / (prec.float(2) * prec.float(n));
    let tail = prec.tail_eps(5);
    let mut h = prec.zero(); // H_{2j-1}
    for j in 1..200u32 {
        h += prec.float(1) / prec.float(2 * j - 1);
        let b = bernoulli(2 * j);
        let coeff = prec.float(b.numer()) / prec.float(b.denom());
        let term =
            coeff * (ln_n.clone() - h.clone()) / (prec.float(2 * j) * prec.float(n).pow_i(2 * j as i32));
        let done = term.clone().abs() < tail;
        s += term;
        if done {
            break;
        }
        h += prec.float(1) / prec.float(2 * j);
    }
    cache.lock().unwrap().insert(prec.bits(), s.clone());
    s
}

/// Laurent coefficients of zeta(1+z) at z = 0: (1, gamma, -gamma_1).
pub fn zeta_laurent_at_one(prec: Prec) -> (Float, Float, Float) {
    (prec.float(1), prec.euler_gamma(), -stieltjes_gamma1(prec))
}

/// zeta'(1-4n) through the functional equation's logarithmic derivative:
/// `zeta'(1-4n) = (B_{4n}/(4n)) (H_{4n-1} - gamma - log 2pi + zeta'(4n)/zeta(4n))`.
pub fn zeta_deriv_neg(n: u32, prec: Prec) -> Float {
    assert!(n >= 1);
    let m = 4 * n;
    let b = bernoulli(m);
    let bf = prec.float(b.numer()) / prec.float(b.denom());
    let mut h = prec.zero();
    for k in 1..m {
        h += prec.float(1) / prec.float(k);
    }
    let zm = prec.float(m);
    let z_val = zeta_em(&Cx::from_real(zm.clone()), prec).re;
    let zd = zeta_deriv_em(&zm, prec);
    bf / prec.float(m) * (h - prec.euler_gamma() - (prec.float(2) * prec.pi()).ln() + zd / z_val)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Prec {
        Prec::new(64)
    }

    #[test]
    fn classical_values() {
        let prec = p();
        // zeta(2) = pi^2/6
        let z2 = riemann_zeta(&Cx::from_real(prec.float(2)), prec).unwrap();
        let want = prec.pi().square() / prec.float(6);
        assert!((z2.re.clone() - want).abs() < prec.eps(10));
        // zeta(0) = -1/2
        let z0 = riemann_zeta(&Cx::zero(prec), prec).unwrap();
        assert!((z0.re.clone() + prec.float(0.5)).abs() < prec.eps(10));
        // zeta(-3) = 1/120
        let zm3 = riemann_zeta(&Cx::from_real(prec.float(-3)), prec).unwrap();
        assert!((zm3.re.clone() - prec.float(1) / prec.float(120)).abs() < prec.eps(10));
    }

    #[test]
    fn pole_rejected() {
        assert!(matches!(
            riemann_zeta(&Cx::one(p()), p()),
            Err(Error::PoleAtOne)
        ));
    }

    #[test]
    fn stieltjes_value() {
        // gamma_1 = -0.0728158454836767248605863758749013191377...
        let g1 = stieltjes_gamma1(p());
        let want = p().parse("-0.0728158454836767248605863758749013191377363383343379525990065597414014335715");
        assert!((g1 - want).abs() < p().eps(12));
    }

    #[test]
    fn zeta_deriv_em_vs_central_difference() {
        let prec = p();
        let s = prec.float(4);
        let d_em = zeta_deriv_em(&s, prec);
        let hi = prec.raised(40);
        let h = hi.float(10).pow_i(-30);
        let up = riemann_zeta(&Cx::from_real(hi.float(4) + h.clone()), hi).unwrap().re;
        let dn = riemann_zeta(&Cx::from_real(hi.float(4) - h.clone()), hi).unwrap().re;
        let d_fd = (up - dn) / (h * 2u32);
        assert!(
            (d_em.clone() - &d_fd).abs() < prec.eps(prec.digits() / 2),
            "em {} vs fd {}",
            d_em,
            d_fd
        );
    }

    #[test]
    fn zeta_deriv_neg_values() {
        let prec = p();
        // zeta'(-3) = 0.0053785763577743011444169742... (known value)
        let v = zeta_deriv_neg(1, prec);
        let want = prec.parse("0.00537857635777430114441697421041384289566443974229550705944702322332450199792");
        assert!((v.clone() - want).abs() < prec.eps(12), "got {}", v);
    }
}
