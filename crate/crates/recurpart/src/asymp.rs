//! Assembled asymptotic estimates for the partition counts: the
//! saddle-point (Coons–Kirsten) route
//! `log p(n) = n a + log F(e^{-a}) - log(2 pi)/2 - log(-dn/ds)/2`
//! and the closed theorem form `A(x) n^{B(n)} (log n)^{C(n)}`.
//!
//! The theorem-form coefficients are re-derived from the expansion data of
//! [`crate::genlog`] (see the B/C/A constant blocks below); they differ
//! from older display forms by Euler–Mascheroni bookkeeping, which
//! `theorem12_estimate` quantifies by evaluating the display form as a
//! second route and reporting the gap instead of asserting it away.
//! Everything stays in the log domain: counts reach 1e86 and beyond.

use crate::bigcount::BigCount;
use crate::error::Result;
use crate::genlog;
use crate::hp::Prec;
use crate::saddle::{PeriodicTable, SaddleCtx};
use crate::seqkit::RecurrenceSpec;
use rug::Float;

/// A theorem-form estimate `A n^B (log n)^C` in the log domain, with the
/// route components kept for diagnostics. The decomposition always
/// satisfies `log_value = log A + B log n + C loglog n` exactly (A absorbs
/// the bounded periodic factor of whichever route produced log_value).
#[derive(Clone, Debug)]
pub struct AsymptoticEstimate {
    pub n: BigCount,
    pub log_value: Float,
    pub a: Float,
    pub b: Float,
    pub c: Float,
    pub components: Vec<(String, Float)>,
    pub spec_label: String,
}

impl AsymptoticEstimate {
    /// Residual of the decomposition identity (should be ~0 by
    /// construction; kept as an explicit self-check).
    pub fn decomposition_residual(&self, prec: Prec) -> Float {
        let l = prec.float(&self.n).ln();
        let ll = l.clone().ln();
        (prec.float(&self.a).ln() + prec.float(&self.b) * l + prec.float(&self.c) * ll
            - prec.float(&self.log_value))
        .abs()
    }
}

/// log of the Coons–Kirsten saddle assembly at a given saddle point
/// (Fibonacci): `n a + log F_2(e^{-a}) - log(2pi)/2 - log(-dn/ds|_a)/2`.
pub fn ck_assemble(n: &Float, alpha: &Float, prec: Prec) -> Result<Float> {
    let ctx = SaddleCtx::fibonacci(prec);
    ck_assemble_in(&ctx, n, alpha, None, prec)
}

fn ck_assemble_in(
    ctx: &SaddleCtx,
    n: &Float,
    alpha: &Float,
    spec: Option<&RecurrenceSpec>,
    prec: Prec,
) -> Result<Float> {
    let n = prec.float(n);
    let a = prec.float(alpha);
    let log_gen = match spec {
        None => genlog::log_gen_f2(&a, prec)?,
        Some(s) => genlog::log_gen_p(s, &a, prec)?,
    };
    let dn = ctx.dn_ds_leading(&a);
    Ok(n * a + log_gen
        - (prec.float(2) * prec.pi()).ln() / prec.float(2)
        - (-dn).ln() / prec.float(2))
}

/// Leading-order law: `(log n)^2 / (2 log phi)`.
pub fn leading_log(n: &Float, prec: Prec) -> Float {
    let log_phi = crate::seqkit::make_fibonacci(prec).log_beta(prec);
    prec.float(n).ln().square() / (prec.float(2) * log_phi)
}

/// General-recurrence leading law `(log n)^2 / (2 log beta)`.
pub fn leading_log_spec(spec: &RecurrenceSpec, n: &Float, prec: Prec) -> Float {
    prec.float(n).ln().square() / (prec.float(2) * spec.log_beta(prec))
}

/// Theorem-form coefficient blocks shared by the Fibonacci and general
/// cases. `w0` is the order-0 Laurent coefficient of the recurrence zeta
/// at 0 as it enters the expansion's log-s slot (`-lin_coeff`), and
/// `c2_hat` the expansion constant.
struct TheoremBlocks {
    b: Float,
    c: Float,
    log_a: Float,
}

fn theorem_blocks(
    n: &Float,
    log_beta: &Float,
    lin_coeff: &Float,
    c2_hat: &Float,
    psi0_osc: f64,
    psi1_val: f64,
    prec: Prec,
) -> TheoremBlocks {
    let l = prec.float(n).ln();
    let ll = l.clone().ln();
    let lb = prec.float(log_beta);
    let llb = lb.clone().ln();
    let two = prec.float(2);
    // c3_hat = -lin_coeff * log beta + log beta  (the gamma-free constant
    // in the log-s slot, shifted by the bridge for the Fibonacci form)
    let c3_hat = (prec.float(1) - prec.float(lin_coeff)) * lb.clone();
    let osc = prec.float(4) * prec.float(psi0_osc) / lb.clone();
    let b = (l.clone() - two.clone() * ll.clone() - osc.clone() + two.clone() * llb.clone()
        + two.clone() * c3_hat.clone()
        - prec.float(4) * lb.clone()
        + two.clone())
        / (two.clone() * lb.clone());
    let c = (ll - osc - two.clone() * llb.clone() - two.clone() * c3_hat.clone()
        + prec.float(3) * lb.clone())
        / (two.clone() * lb.clone());
    let log_a = -(two.clone() * prec.pi() * lb.clone()).ln() / two.clone()
        + llb.clone().square() / (two.clone() * lb.clone())
        + (c3_hat / lb.clone() - prec.float(1.5)) * llb
        + prec.float(c2_hat)
        + prec.float(psi1_val);
    TheoremBlocks { b, c, log_a }
}

/// The full Theorem-1.1-form estimate for the Fibonacci count p_F(n),
/// using the psi tables for the oscillatory parts.
pub fn theorem11_estimate(
    n: u64,
    psi0: &PeriodicTable,
    psi1: &PeriodicTable,
    prec: Prec,
) -> Result<AsymptoticEstimate> {
    let ctx = SaddleCtx::fibonacci(prec);
    let nf = prec.float(n);
    let exp = &ctx.expansion;
    let phase = ctx.phase_of(&nf);
    let psi0_osc = psi0.value(phase) - psi0.mean();
    let psi1_val = psi1.value(phase);
    let blocks = theorem_blocks(
        &nf,
        &ctx.log_beta,
        &exp.lin_coeff,
        &exp.const_term,
        psi0_osc,
        psi1_val,
        prec,
    );
    let l = nf.clone().ln();
    let ll = l.clone().ln();
    let log_value =
        blocks.log_a.clone() + blocks.b.clone() * l + blocks.c.clone() * ll;
    Ok(AsymptoticEstimate {
        n: BigCount::from(n),
        log_value,
        a: blocks.log_a.clone().exp(),
        b: blocks.b,
        c: blocks.c,
        components: vec![
            ("log_A".into(), blocks.log_a),
            ("psi0_osc".into(), prec.float(psi0_osc)),
            ("psi1".into(), prec.float(psi1_val)),
        ],
        spec_label: "fibonacci".into(),
    })
}

/// The general (Theorem-1.2-form) estimate for p_P(n). `log_value` is the
/// Coons–Kirsten route (saddle solve + expansion); the closed
/// coefficient-form value and the display-form value are stored in
/// `components` together with their gaps, so the suspected transcription
/// drift in the display constants is reported rather than silently chosen.
pub fn theorem12_estimate(
    spec: &RecurrenceSpec,
    n: u64,
    psi3: &PeriodicTable,
    psi4: &PeriodicTable,
    prec: Prec,
) -> Result<AsymptoticEstimate> {
    let ctx = SaddleCtx::general(spec, prec)?;
    let nf = prec.float(n);
    let exp = &ctx.expansion;
    let phase = ctx.phase_of(&nf);
    let psi0_osc = psi3.value(phase) - psi3.mean();
    let psi4_val = psi4.value(phase);

    // ck route
    let alpha = ctx.solve_alpha(&nf)?;
    let ck = ck_assemble_in(&ctx, &nf, &alpha, Some(spec), prec)?;

    // coefficient-form route (corrected blocks); for a general sequence
    // there is no bridge, so the c3_hat slot sees lin_coeff directly
    let lb = prec.float(&ctx.log_beta);
    let llb = lb.clone().ln();
    let l = nf.clone().ln();
    let ll = l.clone().ln();
    let two = prec.float(2);
    let w0 = -prec.float(&exp.lin_coeff);
    let log_lambda = prec.float(spec.lambda()).ln();
    let osc = prec.float(4) * prec.float(psi0_osc) / lb.clone();
    let b = (l.clone() - two.clone() * ll.clone() - osc.clone() + two.clone() * llb.clone()
        - two.clone() * log_lambda.clone()
        - prec.float(3) * lb.clone()
        + two.clone())
        / (two.clone() * lb.clone());
    let c = (ll.clone() - osc - two.clone() * llb.clone()
        + two.clone() * log_lambda.clone()
        + two.clone() * lb.clone())
        / (two.clone() * lb.clone());
    let log_a = -(two.clone() * prec.pi() * lb.clone()).ln() / two.clone()
        + llb.clone().square() / (two.clone() * lb.clone())
        + (w0.clone() - prec.float(0.5)) * llb.clone()
        + prec.float(&exp.const_term)
        + prec.float(psi4_val);
    let coeff_form = log_a.clone() + b.clone() * l.clone() + c.clone() * ll.clone();

    // display-form route (as printed in the source theorem displays)
    let gam = prec.euler_gamma();
    let g1 = crate::special::stieltjes_gamma1(prec);
    let w1p = prec.float(&crate::zetarec::zeta_rec_laurent0(spec, prec).coeff(1).re);
    let c2_display = (gam.clone().square() + prec.pi().square() / prec.float(6)) / two.clone()
        / lb.clone()
        + (gam.clone().square() - g1) / lb.clone()
        - (log_lambda.clone() / lb.clone() + prec.float(0.5)) * two.clone() * gam.clone()
        + w1p;
    let b_display = (l.clone() - two.clone() * ll.clone() - prec.float(4) * prec.float(psi0_osc) / lb.clone()
        + two.clone() * llb.clone()
        + prec.float(4) * gam.clone()
        - two.clone() * log_lambda.clone()
        - two.clone() * lb.clone()
        + two.clone())
        / (two.clone() * lb.clone());
    let c_display = (ll.clone() + two.clone()
        - prec.float(4) * prec.float(psi0_osc) / lb.clone()
        + two.clone() * llb.clone()
        - prec.float(4) * gam.clone()
        + two.clone() * log_lambda.clone()
        + two.clone() * lb.clone()
        + two.clone())
        / (two.clone() * lb.clone());
    let log_a_display = -(two.clone() * prec.pi() * lb.clone()).ln() / two.clone()
        + llb.clone().square() / (two.clone() * lb.clone())
        + (two.clone() * gam - log_lambda) * llb.clone() / lb.clone()
        - llb / two.clone()
        + c2_display
        + prec.float(psi4_val);
    let display_form = log_a_display + b_display * l.clone() + c_display * ll.clone();

    // keep the decomposition identity exact against the ck log_value
    let a = (ck.clone() - b.clone() * l - c.clone() * ll).exp();
    Ok(AsymptoticEstimate {
        n: BigCount::from(n),
        log_value: ck.clone(),
        a,
        b,
        c,
        components: vec![
            ("ck".into(), ck.clone()),
            ("coeff_form".into(), coeff_form.clone()),
            ("display_form".into(), display_form.clone()),
            ("coeff_minus_ck".into(), coeff_form - ck.clone()),
            ("display_minus_ck".into(), display_form - ck),
            ("alpha".into(), alpha),
        ],
        spec_label: spec.label().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigcount::{count_table_for, log_count};
    use crate::seqkit::{make_fibonacci, make_pell, make_recurrence};

    fn p() -> Prec {
        Prec::new(64)
    }

    #[test]
    fn leading_log_values() {
        let prec = p();
        // n = e: 1/(2 log phi)
        let at_e = leading_log(&prec.float(1).exp(), prec);
        assert!((at_e - prec.parse("1.039043460617513768800661303058897883871")).abs() < 1e-30);
        let at_1e6 = leading_log(&prec.float(1e6), prec);
        assert!((at_1e6 - prec.float(198.32)).abs() < 0.01);
    }

    #[test]
    fn ck_route_beats_leading_on_exact_counts() {
        let prec = p();
        let fib = make_fibonacci(prec);
        let table = count_table_for(&fib, 10_000).unwrap();
        let ctx = SaddleCtx::fibonacci(prec);
        for n in [1000u64, 10_000] {
            let nf = prec.float(n);
            let alpha = ctx.solve_alpha(&nf).unwrap();
            let est = ck_assemble(&nf, &alpha, prec).unwrap();
            let exact = log_count(table.count(n), prec).unwrap();
            let e = (est - exact.clone()).abs();
            let lead_err = (leading_log(&nf, prec) - exact).abs();
            assert!(e.clone() < prec.float(0.2), "e(n) = {e} at n={n}");
            assert!(e < lead_err);
        }
    }

    #[test]
    fn ck_monotone_on_grid() {
        let prec = p();
        let ctx = SaddleCtx::fibonacci(prec);
        let mut prev = prec.float(-1);
        for n in [200u64, 500, 1000, 5000, 20_000] {
            let nf = prec.float(n);
            let alpha = ctx.solve_alpha(&nf).unwrap();
            let est = ck_assemble(&nf, &alpha, prec).unwrap();
            assert!(est > prev, "not monotone at n={n}");
            prev = est;
        }
    }

    #[test]
    fn alpha_route_gap_is_small() {
        // swapping solve_alpha for alpha_estimate moves the ck value only
        // a little (the saddle is stationary)
        let prec = p();
        let ctx = SaddleCtx::fibonacci(prec);
        let psi0 = ctx.build_psi0().unwrap();
        let n = prec.float(1e6);
        let a1 = ctx.solve_alpha(&n).unwrap();
        let a2 = ctx.alpha_estimate(&n, &psi0).unwrap();
        let v1 = ck_assemble(&n, &a1, prec).unwrap();
        let v2 = ck_assemble(&n, &a2, prec).unwrap();
        assert!((v1 - v2).abs() < 1e-2);
    }

    #[test]
    fn theorem11_decomposition_and_accuracy() {
        let prec = p();
        let ctx = SaddleCtx::fibonacci(prec);
        let psi0 = ctx.build_psi0().unwrap();
        let psi1 = ctx.build_psi1().unwrap();
        let fib = make_fibonacci(prec);
        let table = count_table_for(&fib, 10_000).unwrap();
        for n in [1000u64, 10_000] {
            let est = theorem11_estimate(n, &psi0, &psi1, prec).unwrap();
            assert!(est.decomposition_residual(prec) < prec.eps(10));
            let exact = log_count(table.count(n), prec).unwrap();
            let e = (prec.float(&est.log_value) - exact.clone()).abs();
            let lead_err = (leading_log(&prec.float(n), prec) - exact).abs();
            assert!(e.clone() < lead_err, "full must beat leading at n={n}");
            assert!(e < 2, "theorem-form error {e} at n={n}");
        }
    }

    #[test]
    fn theorem11_constant_block_precision_doubling() {
        let prec = p();
        let hi = Prec::new(128);
        let block = |pr: Prec| {
            let ctx = SaddleCtx::fibonacci(pr);
            let lb = ctx.log_beta.clone();
            let c3_hat = (pr.float(1) - pr.float(&ctx.expansion.lin_coeff)) * lb.clone();
            (pr.float(2) * lb.clone().ln() + pr.float(2) * c3_hat - pr.float(4) * lb.clone()
                + pr.float(2))
                / (pr.float(2) * lb)
        };
        assert!((block(prec) - block(hi)).abs() < prec.eps(5));
    }

    #[test]
    fn theorem11_vs_ck_route_equivalence() {
        let prec = p();
        let ctx = SaddleCtx::fibonacci(prec);
        let psi0 = ctx.build_psi0().unwrap();
        let psi1 = ctx.build_psi1().unwrap();
        // the routes agree to the claimed remainder order:
        // |difference| * log n / (loglog n)^2 stays bounded (~2.6)
        for n in [1_000u64, 100_000, 10_000_000] {
            let nf = prec.float(n);
            let alpha = ctx.solve_alpha(&nf).unwrap();
            let ck = ck_assemble(&nf, &alpha, prec).unwrap();
            let thm = theorem11_estimate(n, &psi0, &psi1, prec).unwrap();
            let l = nf.clone().ln();
            let ll = l.clone().ln();
            let normalized = (ck - prec.float(&thm.log_value)).abs() * l / ll.square();
            assert!(normalized < 5.0, "normalized route gap {normalized} at n={n}");
        }
    }

    #[test]
    fn theorem12_pell_routes() {
        let prec = p();
        let pell = make_pell(prec).unwrap();
        let ctx = SaddleCtx::general(&pell, prec).unwrap();
        let psi3 = ctx.build_psi0().unwrap();
        let psi4 = ctx.build_psi1().unwrap();
        let table = count_table_for(&pell, 10_000).unwrap();
        let est = theorem12_estimate(&pell, 10_000, &psi3, &psi4, prec).unwrap();
        assert!(est.decomposition_residual(prec) < prec.eps(10));
        // ck route against the exact count
        let exact = log_count(table.count(10_000), prec).unwrap();
        let e = (prec.float(&est.log_value) - exact).abs();
        assert!(e < 0.3, "Pell ck error {e}");
        // the corrected coefficient form tracks ck to the remainder order
        let coeff_gap = est
            .components
            .iter()
            .find(|(k, _)| k == "coeff_minus_ck")
            .unwrap()
            .1
            .clone();
        assert!(coeff_gap.clone().abs() < 1, "coeff-form gap {coeff_gap}");
        // the display form is far off (the transcription drift grows with
        // log n); report-only, but pin that it is large and positive here
        let disp_gap = est
            .components
            .iter()
            .find(|(k, _)| k == "display_minus_ck")
            .unwrap()
            .1
            .clone();
        assert!(disp_gap > 5, "display-form gap should be visible, got {disp_gap}");
    }

    #[test]
    fn theorem12_specializes_to_fibonacci_counts() {
        // the shifted sequence 1,2,3,5,8,... has the same part multiset as
        // the F_2-indexed Fibonacci numbers, so both routes estimate the
        // same count
        let prec = p();
        let shifted = make_recurrence(&[1, 1], &[1, 2], "fib-shifted", prec).unwrap();
        let ctx = SaddleCtx::general(&shifted, prec).unwrap();
        let psi3 = ctx.build_psi0().unwrap();
        let psi4 = ctx.build_psi1().unwrap();
        let est12 = theorem12_estimate(&shifted, 10_000, &psi3, &psi4, prec).unwrap();

        // ck route on the Fibonacci side for a like-for-like comparison
        let fctx = SaddleCtx::fibonacci(prec);
        let nf = prec.float(10_000);
        let alpha = fctx.solve_alpha(&nf).unwrap();
        let ck11 = ck_assemble(&nf, &alpha, prec).unwrap();
        let gap = (prec.float(&est12.log_value) - ck11).abs();
        assert!(gap < prec.float(0.01), "ck cross-form gap {gap}");
        // the theorem-form route differs from ck by the documented
        // O((loglog n)^2/log n) remainder
        let psi0 = fctx.build_psi0().unwrap();
        let psi1 = fctx.build_psi1().unwrap();
        let est11 = theorem11_estimate(10_000, &psi0, &psi1, prec).unwrap();
        let gap = (prec.float(&est12.log_value) - prec.float(&est11.log_value)).abs();
        assert!(gap < 2, "cross-form gap {gap}");
    }
}
