//! The recurrence zeta functions: the Dirichlet series over a sequence's
//! terms, its analytic continuation, the pole lattice, residues, and
//! Laurent data at the real poles.
//!
//! The continuation comes from Binet's formula: writing
//! `P_k = lambda beta^k (1 + X_k)` with `X_k` the conjugate-root
//! contribution and expanding `(1+X_k)^{-z}` binomially turns the series
//! into a closed geometric part `lambda^{-z}/(beta^z - 1)` plus a
//! multi-index sum whose inner geometric series are summed in closed form.
//! Each closed form is meromorphic, which is what places the poles.
//!
//! Generalized binomials are evaluated as the product
//! `prod_{j<k} (-z-j)/(j+1)`, never through Gamma ratios, so that integer
//! arguments stay exact (the product terminates with an exact zero there).

use crate::error::{Error, Result};
use crate::hp::{Cx, FloatPowI, Prec};
use crate::seqkit::RecurrenceSpec;
use rug::Float;
use std::collections::BTreeMap;

/// Radius (in location space) under which continuation refuses to
/// evaluate next to a pole.
pub const NEAR_POLE_RADIUS: f64 = 1e-6;

/// A pole of a recurrence zeta function.
#[derive(Clone, Debug)]
pub struct PoleSpec {
    pub location: Cx,
    pub order: u32,
    pub residue: Cx,
    /// Vertical index n.
    pub n: i64,
    /// Binomial index vector (k_1, ..., k_{r-1}); length 1 for degree 2.
    pub kvec: Vec<u32>,
}

/// Laurent coefficients of a function around a center, orders >= -1.
#[derive(Clone, Debug)]
pub struct LaurentData {
    pub center: Cx,
    pub coeffs: BTreeMap<i32, Cx>,
    pub radius_hint: f64,
}

impl LaurentData {
    pub fn coeff(&self, order: i32) -> &Cx {
        &self.coeffs[&order]
    }

    pub fn residue(&self) -> &Cx {
        self.coeff(-1)
    }
}

/// binom(-z, k) as a terminating product.
pub fn binom_neg(z: &Cx, k: u32, prec: Prec) -> Cx {
    let mut acc = Cx::one(prec);
    for j in 0..k {
        let num = -(z + &Cx::from_real(prec.float(j)));
        acc = &acc * &(&num / &Cx::from_real(prec.float(j + 1)));
    }
    acc
}

/// Direct Dirichlet sum over Fibonacci terms (from F_1, so the unit term
/// is counted twice), absolutely convergent for Re z > 0; the evaluator
/// requires Re z >= 0.05 so its geometric tail bound stays effective.
pub fn zeta_fib_series(z: &Cx, prec: Prec) -> Result<Cx> {
    let fib = crate::seqkit::make_fibonacci(prec);
    zeta_rec_series(&fib, z, prec)
}

/// Direct Dirichlet sum over any spec's terms (from index 1).
pub fn zeta_rec_series(spec: &RecurrenceSpec, z: &Cx, prec: Prec) -> Result<Cx> {
    let sigma = z.re.to_f64();
    if sigma < 0.05 {
        return Err(Error::AbscissaViolation(sigma));
    }
    let z = Cx::new(prec.float(&z.re), prec.float(&z.im));
    let minus_z = -&z;
    let tail = prec.tail_eps(5);
    // per-term decay factor beta^{-sigma}
    let decay_sigma = (prec.float(spec.beta()).ln() * prec.float(-sigma)).exp();
    let geom = decay_sigma.clone() / (prec.float(1) - decay_sigma);
    let mut acc = Cx::zero(prec);
    let mut k = 1usize;
    loop {
        let t = spec.term(k);
        let lt = prec.float(&t).ln();
        let term = (&minus_z * &Cx::from_real(lt)).exp();
        acc = &acc + &term;
        let bound = term.abs() * geom.clone();
        if k > 2 && bound < tail {
            break;
        }
        k += 1;
        assert!(k < 3_000_000, "series truncation runaway");
    }
    Ok(acc)
}

/// Index vectors (k_1 >= k_2 >= ... >= k_{r-1} >= 0) with fixed k_1.
fn nested_indices(k1: u32, levels: usize) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, levels: usize, out: &mut Vec<Vec<u32>>) {
        if cur.len() == levels {
            out.push(cur.clone());
            return;
        }
        let cap = *cur.last().unwrap();
        for next in 0..=cap {
            cur.push(next);
            rec(cur, levels, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![k1];
    rec(&mut cur, levels.max(1), &mut out);
    out
}

/// Per-index data shared by the continuation, the pole list, and the
/// Laurent coefficients: the multinomial weight `B`, the Binet weight `L`,
/// and the root ratio `rho` (|rho| < 1 for k != 0).
fn index_weights(spec: &RecurrenceSpec, kvec: &[u32], prec: Prec) -> (Float, Cx, Cx) {
    let r = spec.degree();
    let beta = Cx::from_real(prec.float(spec.beta()));
    let lambda = Cx::from_real(prec.float(spec.lambda()));
    let mut b_weight = prec.float(1);
    for j in 1..kvec.len() {
        b_weight *= prec.float(rug::Complete::complete(rug::Integer::binomial_u(kvec[j - 1], kvec[j])));
    }
    let mut l_weight = Cx::one(prec);
    let mut rho = Cx::one(prec);
    for j in 2..=r {
        // exponent a_j = k_{j-1} - k_j with k_r = 0
        let k_prev = kvec[j - 2];
        let k_this = if j - 1 < kvec.len() { kvec[j - 1] } else { 0 };
        let a = k_prev - k_this;
        if a == 0 {
            continue;
        }
        let lam_j = &spec.binet_rest()[j - 2];
        let beta_j = &spec.conjugate_roots()[j - 2];
        let lam_j = Cx::new(prec.float(&lam_j.re), prec.float(&lam_j.im));
        let beta_j = Cx::new(prec.float(&beta_j.re), prec.float(&beta_j.im));
        l_weight = &l_weight * &(&lam_j / &lambda).powi(a as i64);
        rho = &rho * &(&beta_j / &beta).powi(a as i64);
    }
    (b_weight, l_weight, rho)
}

/// Analytic continuation of the recurrence zeta function at z, off the
/// pole lattice.
pub fn zeta_rec_continued(spec: &RecurrenceSpec, z: &Cx, prec: Prec) -> Result<Cx> {
    let z = Cx::new(prec.float(&z.re), prec.float(&z.im));
    let log_beta = spec.log_beta(prec);
    let beta_pow = (&(-&z) * &Cx::from_real(log_beta.clone())).exp(); // beta^{-z}
    let near = log_beta.clone() * prec.float(NEAR_POLE_RADIUS * 0.99);

    // closed geometric part 1/(beta^z - 1) = beta^{-z}/(1 - beta^{-z})
    let denom0 = &Cx::one(prec) - &beta_pow;
    if denom0.abs() < near {
        return Err(Error::NearPole {
            location: format!("{}", z),
            radius: NEAR_POLE_RADIUS,
        });
    }
    let mut acc = &beta_pow / &denom0;

    let tail = prec.tail_eps(5);
    let levels = spec.degree() - 1;
    let mut quiet_blocks = 0u32;
    for k1 in 1..20_000u32 {
        let binom = binom_neg(&z, k1, prec);
        let mut block_max = prec.zero();
        for kvec in nested_indices(k1, levels) {
            let (b_w, l_w, rho) = index_weights(spec, &kvec, prec);
            let q = &rho * &beta_pow;
            let denom = &Cx::one(prec) - &q;
            if denom.abs() < near {
                return Err(Error::NearPole {
                    location: format!("{}", z),
                    radius: NEAR_POLE_RADIUS,
                });
            }
            let term = (&(&binom * &l_w) * &(&q / &denom)).scale(&b_w);
            let mag = term.abs();
            if mag > block_max {
                block_max = mag;
            }
            acc = &acc + &term;
        }
        if block_max < tail {
            quiet_blocks += 1;
            if quiet_blocks >= 5 {
                break;
            }
        } else {
            quiet_blocks = 0;
        }
    }

    let lam_pow = (&(-&z) * &Cx::from_real(prec.float(spec.lambda()).ln())).exp();
    Ok(&lam_pow * &acc)
}

/// Continuation of the Fibonacci zeta function (the degree-2 instance most
/// of the crate works with).
pub fn zeta_fib_continued(z: &Cx, prec: Prec) -> Result<Cx> {
    let fib = crate::seqkit::make_fibonacci(prec);
    zeta_rec_continued(&fib, z, prec)
}

/// Poles of the Fibonacci zeta function with 0 <= k <= k_max, |n| <= n_max:
/// locations `-2k + i pi (2n+k)/log phi`, residues
/// `(-1)^k 5^{s/2} binom(-s, k) / log phi`.
pub fn fib_poles(k_max: u32, n_max: i64, prec: Prec) -> Vec<PoleSpec> {
    let log_phi = crate::seqkit::make_fibonacci(prec).log_beta(prec);
    let ln5 = prec.float(5).ln();
    let mut out = Vec::new();
    for k in 0..=k_max {
        for n in -n_max..=n_max {
            let re = prec.float(-2i64 * k as i64);
            let im = prec.pi() * prec.float(2 * n + k as i64) / log_phi.clone();
            let s = Cx::new(re, im);
            let five_pow = (&s.scale(&prec.float(0.5)) * &Cx::from_real(ln5.clone())).exp();
            let mut residue =
                &(&five_pow * &binom_neg(&s, k, prec)) / &Cx::from_real(log_phi.clone());
            if k % 2 == 1 {
                residue = -residue;
            }
            out.push(PoleSpec {
                location: s,
                order: 1,
                residue,
                n,
                kvec: vec![k],
            });
        }
    }
    out
}

/// Pole lattice of a general recurrence zeta function; residues by a
/// numeric contour integral (closed residue formulas are only worked out
/// for degree 2).
pub fn rec_poles(
    spec: &RecurrenceSpec,
    k1_max: u32,
    n_max: i64,
    prec: Prec,
) -> Result<Vec<PoleSpec>> {
    let log_beta = spec.log_beta(prec);
    let levels = spec.degree() - 1;
    let mut out = Vec::new();
    for k1 in 0..=k1_max {
        let kvecs = if k1 == 0 {
            vec![vec![0u32; levels]]
        } else {
            nested_indices(k1, levels)
        };
        for kvec in kvecs {
            let (_, _, rho) = index_weights(spec, &kvec, prec);
            let rho_ln_abs = rho.abs().ln();
            let rho_arg = rho.arg();
            for n in -n_max..=n_max {
                let re = rho_ln_abs.clone() / log_beta.clone();
                let im = (rho_arg.clone() + prec.pi() * prec.float(2 * n)) / log_beta.clone();
                let location = Cx::new(re, im);
                let residue = contour_residue(
                    |w| zeta_rec_continued(spec, w, prec),
                    &location,
                    1e-3,
                    64,
                    prec,
                )?;
                out.push(PoleSpec {
                    location,
                    order: 1,
                    residue,
                    n,
                    kvec: kvec.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Numeric residue by the trapezoid rule on a circle; spectrally accurate
/// for analytic integrands, so the radius only needs to stay inside the
/// distance to the neighboring singularity.
pub fn contour_residue<F>(f: F, center: &Cx, radius: f64, nodes: u32, prec: Prec) -> Result<Cx>
where
    F: Fn(&Cx) -> Result<Cx>,
{
    let mut acc = Cx::zero(prec);
    let r = prec.float(radius);
    for j in 0..nodes {
        let theta = prec.float(2 * j) * prec.pi() / prec.float(nodes);
        let dir = Cx::new(theta.clone().cos(), theta.sin());
        let zj = center + &dir.scale(&r);
        acc = &acc + &(&f(&zj)? * &dir);
    }
    Ok(acc.scale(&(r / prec.float(nodes))))
}

/// The alternating series c_1 = sum_k (-1)^k / (k (phi^{2k} + (-1)^{k+1})).
pub fn c1_series(prec: Prec) -> Float {
    let phi = prec.float(crate::seqkit::make_fibonacci(prec).beta());
    let tail = prec.tail_eps(5);
    let mut acc = prec.zero();
    let mut phi2k = prec.float(1);
    let phi2 = phi.square();
    for k in 1..200_000u32 {
        phi2k *= phi2.clone();
        let sign_num = if k % 2 == 1 { -1 } else { 1 };
        let sign_den = if k % 2 == 1 { 1 } else { -1 };
        let term = prec.float(sign_num) / (prec.float(k) * (phi2k.clone() + prec.float(sign_den)));
        let done = term.clone().abs() < tail;
        acc += term;
        if done {
            break;
        }
    }
    acc
}

/// Laurent data of the Fibonacci zeta function at z = 0.
pub fn zeta_fib_laurent0(prec: Prec) -> LaurentData {
    let log_phi = crate::seqkit::make_fibonacci(prec).log_beta(prec);
    let ln5 = prec.float(5).ln();
    let mut coeffs = BTreeMap::new();
    coeffs.insert(-1, Cx::from_real(log_phi.clone().recip()));
    coeffs.insert(
        0,
        Cx::from_real((ln5.clone() - log_phi.clone()) / (prec.float(2) * log_phi.clone())),
    );
    let order1 = (log_phi.clone() - prec.float(3) * ln5.clone()) / prec.float(12)
        + ln5.square() / (prec.float(8) * log_phi)
        + c1_series(prec);
    coeffs.insert(1, Cx::from_real(order1));
    LaurentData {
        center: Cx::zero(prec),
        coeffs,
        radius_hint: 2.0,
    }
}

/// Value at z = -4n of the terms of the continuation that stay
/// holomorphic there (the k != 2n part; a finite sum, since
/// binom(4n, k) = 0 past k = 4n).
pub fn c_neg4n(n: u32, prec: Prec) -> Float {
    assert!(n >= 1);
    let fib = crate::seqkit::make_fibonacci(prec);
    let phi = prec.float(fib.beta());
    let four_n = 4 * n;
    let five_pow = prec.float(5).pow_i(-(2 * n as i32));
    let mut c = prec.zero();
    for k in 0..=four_n {
        if k == 2 * n {
            continue;
        }
        let binom = prec.float(rug::Complete::complete(rug::Integer::binomial_u(four_n, k)));
        let sign_den = if k % 2 == 1 { 1 } else { -1 };
        let phi_pow = phi.clone().pow_i(2 * k as i32 - four_n as i32);
        c += binom / (phi_pow + prec.float(sign_den));
    }
    c * five_pow
}

/// Laurent data of the Fibonacci zeta function at z = -4n.
///
/// Residue `b_{-4n} = 5^{-2n} C(4n,2n)/log phi`. The constant term has
/// three pieces: the holomorphic-part value [`c_neg4n`], the `-A_0/2`
/// from expanding `1/(phi^{z+4n}-1)`, and `A_1/log phi` from the z-slope
/// of the numerator factor `A(z) = 5^{z/2} binom(-z, 2n)` at the pole,
/// with `A_1 = A_0 (log 5 / 2 - (H_{4n} - H_{2n}))`. All three are kept
/// explicitly; a numeric Laurent probe pins the total in the tests.
pub fn zeta_fib_laurent_neg4n(n: u32, prec: Prec) -> LaurentData {
    assert!(n >= 1);
    let fib = crate::seqkit::make_fibonacci(prec);
    let log_phi = fib.log_beta(prec);
    let four_n = 4 * n;
    let central = prec.float(rug::Complete::complete(rug::Integer::binomial_u(four_n, 2 * n)));
    let five_pow = prec.float(5).pow_i(-(2 * n as i32));
    let a0 = five_pow.clone() * central;
    let residue = a0.clone() / log_phi.clone();

    let mut h_gap = prec.zero(); // H_{4n} - H_{2n}
    for k in (2 * n + 1)..=four_n {
        h_gap += prec.float(1) / prec.float(k);
    }
    let a1 = a0.clone() * (prec.float(5).ln() / prec.float(2) - h_gap);
    let constant = c_neg4n(n, prec) - a0 / prec.float(2) + a1 / log_phi;

    let mut coeffs = BTreeMap::new();
    coeffs.insert(-1, Cx::from_real(residue));
    coeffs.insert(0, Cx::from_real(constant));
    LaurentData {
        center: Cx::from_real(prec.float(-(four_n as i64))),
        coeffs,
        radius_hint: 1.0,
    }
}

/// The double sum C_1 of the general Laurent expansion at 0, evaluated by
/// the same index machinery as the continuation.
pub fn c1_general(spec: &RecurrenceSpec, prec: Prec) -> Float {
    let tail = prec.tail_eps(5);
    let levels = spec.degree() - 1;
    let mut acc = prec.zero();
    let mut quiet = 0u32;
    for k1 in 1..20_000u32 {
        let mut block_max = prec.zero();
        let sign = if k1 % 2 == 1 { -1 } else { 1 };
        for kvec in nested_indices(k1, levels) {
            let (b_w, l_w, rho) = index_weights(spec, &kvec, prec);
            // (-1)^{k1}/k1 * B * L * rho/(1-rho): the z-linear coefficient
            // each index contributes at z = 0
            let geom = &rho / &(&Cx::one(prec) - &rho);
            let term = (&l_w * &geom).scale(&(b_w * prec.float(sign) / prec.float(k1)));
            let mag = term.abs();
            if mag > block_max {
                block_max = mag.clone();
            }
            acc += term.re;
        }
        if block_max < tail {
            quiet += 1;
            if quiet >= 5 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    acc
}

/// Laurent data of a general recurrence zeta function at z = 0:
/// residue 1/log beta, constant -log lambda/log beta - 1/2, and the
/// z-coefficient assembled from the Binet data plus C_1.
pub fn zeta_rec_laurent0(spec: &RecurrenceSpec, prec: Prec) -> LaurentData {
    let log_beta = spec.log_beta(prec);
    let log_lambda = prec.float(spec.lambda()).ln();
    let mut coeffs = BTreeMap::new();
    coeffs.insert(-1, Cx::from_real(log_beta.clone().recip()));
    coeffs.insert(
        0,
        Cx::from_real(-log_lambda.clone() / log_beta.clone() - prec.float(0.5)),
    );
    let order1 = log_lambda.clone().square() / (prec.float(2) * log_beta.clone())
        + log_lambda / prec.float(2)
        + log_beta / prec.float(12)
        + c1_general(spec, prec);
    coeffs.insert(1, Cx::from_real(order1));
    LaurentData {
        center: Cx::zero(prec),
        coeffs,
        radius_hint: 1.0,
    }
}
