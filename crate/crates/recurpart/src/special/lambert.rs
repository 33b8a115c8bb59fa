//! Lambert W, principal branch on x >= 0: asymptotic/series seed plus
//! Halley refinement, and the separate three-term asymptotic form used by
//! the saddle-point corollaries.

use crate::error::{Error, Result};
use crate::hp::Prec;
use rug::Float;

/// w with w e^w = x, principal branch, x >= 0.
pub fn lambert_w(x: &Float, prec: Prec) -> Result<Float> {
    let x = prec.float(x);
    if x.is_sign_negative() && !x.is_zero() {
        return Err(Error::NegativeArgument(x.to_f64()));
    }
    if x.is_zero() {
        return Ok(prec.zero());
    }
    let e = prec.float(1).exp();
    let mut w = if x > e {
        // W(x) = log x - log log x + ...
        let lx = x.clone().ln();
        let llx = lx.clone().ln();
        lx.clone() - llx.clone() + llx / lx
    } else if x < 0.25 {
        // W(x) = x - x^2 + 3x^3/2 - ... near 0
        x.clone() * (prec.float(1) - x.clone() + x.clone().square() * prec.float(1.5))
    } else {
        // mid range: crude but inside Halley's basin
        prec.float(0.5) * x.clone().ln_1p()
    };
    let tol = prec.tail_eps(10);
    for _ in 0..500 {
        let ew = w.clone().exp();
        let f = w.clone() * ew.clone() - x.clone();
        // Halley: w <- w - f / (e^w (w+1) - (w+2) f / (2w+2))
        let w1 = w.clone() + prec.float(1);
        let denom =
            ew * w1.clone() - (w.clone() + prec.float(2)) * f.clone() / (w1 * prec.float(2));
        let step = f / denom;
        w -= step.clone();
        if step.abs() <= tol.clone() * w.clone().abs().max(&prec.float(1e-300)) {
            break;
        }
    }
    Ok(w)
}

/// The three-term large-x expansion `log x - log log x + log log x / log x`,
/// exactly as used by the saddle-point corollaries; not a W evaluator.
pub fn lambert_w_asymptotic(x: &Float, prec: Prec) -> Result<Float> {
    let x = prec.float(x);
    let e = prec.float(1).exp();
    if x <= e {
        return Err(Error::TooSmall(x.to_f64()));
    }
    let lx = x.clone().ln();
    let llx = lx.clone().ln();
    Ok(lx.clone() - llx.clone() + llx / lx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::FloatPowI;

    fn p() -> Prec {
        Prec::new(64)
    }

    #[test]
    fn fixed_points() {
        let prec = p();
        assert!(lambert_w(&prec.zero(), prec).unwrap().is_zero());
        let e = prec.float(1).exp();
        let w = lambert_w(&e, prec).unwrap();
        assert!((w - 1u32).abs() < prec.eps(10));
        // W(1) = 0.5671432904097838729999686622...
        let w1 = lambert_w(&prec.float(1), prec).unwrap();
        let want = prec.parse("0.567143290409783872999968662210355549753815787186512508135131079223045793087");
        assert!((w1 - want).abs() < prec.eps(10));
    }

    #[test]
    fn defining_equation_residual_log_spaced() {
        let prec = p();
        // 100 log-spaced x in [1e-6, 1e12]
        for i in 0..100 {
            let expo = -6.0 + 18.0 * (i as f64) / 99.0;
            let x = prec.float(expo).exp10();
            let w = lambert_w(&x, prec).unwrap();
            let ew = w.clone().exp();
            let resid = (w * ew - x.clone()).abs() / x.max(&prec.float(1));
            assert!(resid < prec.eps(10), "x=1e{expo}, resid {resid}");
        }
    }

    #[test]
    fn negative_rejected() {
        assert!(matches!(
            lambert_w(&p().float(-1), p()),
            Err(Error::NegativeArgument(_))
        ));
    }

    #[test]
    fn asymptotic_form() {
        let prec = p();
        assert!(matches!(
            lambert_w_asymptotic(&prec.float(2), prec),
            Err(Error::TooSmall(_))
        ));
        // frozen: at x = 1e6 the three terms give 11.37977...; true W is 11.38335...
        let a = lambert_w_asymptotic(&prec.float(1e6), prec).unwrap();
        let w = lambert_w(&prec.float(1e6), prec).unwrap();
        assert!((a.clone() - prec.float(11.3798)).abs() < 1e-4);
        assert!((a - w).abs() < 0.01);
    }

    #[test]
    fn asymptotic_error_shrinks_across_decades() {
        let prec = p();
        let mut last = prec.float(1e9);
        for expo in [6, 9, 12, 15] {
            let x = prec.float(10).pow_i(expo);
            let gap = (lambert_w_asymptotic(&x, prec).unwrap() - lambert_w(&x, prec).unwrap()).abs();
            assert!(gap < last, "gap should shrink, got {gap} at 1e{expo}");
            last = gap;
        }
    }
}
