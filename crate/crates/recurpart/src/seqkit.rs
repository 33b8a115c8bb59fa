//! Linear recurrence sequences: characteristic roots, Binet coefficients,
//! exact terms, and the admissible part sets for partition counting.
//!
//! A [`RecurrenceSpec`] is immutable after construction and safe to share
//! across threads; the exact term cache is internally synchronized.
//!
//! The Fibonacci instance carries both index origins: the Dirichlet-series
//! layer sums over k >= 1 (so the term 1 appears twice, as F_1 and F_2),
//! while the partition layer takes parts from F_2 on, so that 1 is a part
//! exactly once.

use crate::error::{Error, Result};
use crate::hp::{Cx, FloatPowI, Prec};
use rug::{Float, Integer};
use serde::Deserialize;
use std::path::Path;
use std::sync::Mutex;

/// A strictly increasing integer linear recurrence with a dominant real
/// root, together with its analytic data.
#[derive(Debug)]
pub struct RecurrenceSpec {
    label: String,
    coeffs: Vec<i64>,
    initial: Vec<i64>,
    /// 1-based index of the first term usable as a partition part.
    /// 2 for the built-in Fibonacci (skipping the duplicated 1), 1 otherwise.
    part_origin: usize,
    dominant_root: Float,
    conjugate_roots: Vec<Cx>,
    /// Leading Binet coefficient (lambda > 0, real).
    binet_lead: Float,
    /// Binet coefficients of the conjugate roots, same order.
    binet_rest: Vec<Cx>,
    /// False when degree > 4 (irreducibility accepted with a warning).
    irreducibility_checked: bool,
    terms: Mutex<Vec<Integer>>,
}

#[derive(Deserialize)]
struct RecurrenceFile {
    label: String,
    coeffs: Vec<i64>,
    initial: Vec<i64>,
}

impl RecurrenceSpec {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn part_origin(&self) -> usize {
        self.part_origin
    }

    pub fn irreducibility_checked(&self) -> bool {
        self.irreducibility_checked
    }

    /// Dominant root beta > 1, at construction precision.
    pub fn beta(&self) -> &Float {
        &self.dominant_root
    }

    pub fn log_beta(&self, prec: Prec) -> Float {
        prec.float(&self.dominant_root).ln()
    }

    pub fn conjugate_roots(&self) -> &[Cx] {
        &self.conjugate_roots
    }

    /// Leading Binet coefficient lambda.
    pub fn lambda(&self) -> &Float {
        &self.binet_lead
    }

    pub fn binet_rest(&self) -> &[Cx] {
        &self.binet_rest
    }

    /// Modulus of the largest conjugate root.
    pub fn second_modulus(&self, prec: Prec) -> Float {
        let mut best = prec.zero();
        for r in &self.conjugate_roots {
            let m = prec.float(&r.abs());
            if m > best {
                best = m;
            }
        }
        best
    }

    pub fn is_fibonacci(&self) -> bool {
        self.coeffs == [1, 1] && self.initial == [1, 1]
    }

    /// Exact k-th term (1-based) by the integer recurrence; memoized.
    pub fn term(&self, k: usize) -> Integer {
        assert!(k >= 1, "terms are 1-based");
        let mut cache = self.terms.lock().unwrap();
        while cache.len() < k {
            let next = if cache.len() < self.initial.len() {
                Integer::from(self.initial[cache.len()])
            } else {
                let len = cache.len();
                let mut acc = Integer::new();
                for (i, c) in self.coeffs.iter().enumerate() {
                    acc += &cache[len - 1 - i] * Integer::from(*c);
                }
                acc
            };
            cache.push(next);
        }
        cache[k - 1].clone()
    }

    /// All distinct terms <= limit usable as partition parts, in
    /// increasing order. Empty when limit < first part.
    pub fn parts_up_to(&self, limit: &Integer) -> Vec<Integer> {
        let mut out = Vec::new();
        let mut k = self.part_origin;
        loop {
            let t = self.term(k);
            if &t > limit {
                break;
            }
            out.push(t);
            k += 1;
        }
        out
    }
}

/// The Fibonacci recurrence, with beta = golden ratio and lambda = 1/sqrt(5).
pub fn make_fibonacci(prec: Prec) -> RecurrenceSpec {
    let build = construction_prec(prec, 1.62);
    let sqrt5 = build.float(5).sqrt();
    let phi = (sqrt5.clone() + 1u32) / 2u32;
    let phibar = (build.float(1) - sqrt5.clone()) / 2u32;
    RecurrenceSpec {
        label: "fibonacci".into(),
        coeffs: vec![1, 1],
        initial: vec![1, 1],
        part_origin: 2,
        dominant_root: phi,
        conjugate_roots: vec![Cx::from_real(phibar)],
        binet_lead: sqrt5.clone().recip(),
        binet_rest: vec![Cx::from_real(-sqrt5.recip())],
        irreducibility_checked: true,
        terms: Mutex::new(vec![Integer::from(1), Integer::from(1)]),
    }
}

/// Construction precision: enough digits that Binet reconstruction of the
/// first 64 terms stays below the contract tolerance even after beta^64
/// amplification.
fn construction_prec(prec: Prec, beta_hint: f64) -> Prec {
    let amplification = (64.0 * beta_hint.log10()).ceil() as u32;
    prec.raised(amplification + 16)
}

/// Build and fully validate a recurrence from coefficients and initial
/// terms: P_{k+r} = c_1 P_{k+r-1} + ... + c_r P_k.
pub fn make_recurrence(coeffs: &[i64], initial: &[i64], label: &str, prec: Prec) -> Result<RecurrenceSpec> {
    let r = coeffs.len();
    if r < 2 || initial.len() != r {
        return Err(Error::BadRecurrenceShape);
    }
    if initial[0] != 1 {
        return Err(Error::FirstTermNotOne(initial[0].to_string()));
    }

    // strictly increasing and distinct over the first max(64, 4r) terms
    let probe = RecurrenceSpec {
        label: label.into(),
        coeffs: coeffs.to_vec(),
        initial: initial.to_vec(),
        part_origin: 1,
        dominant_root: prec.zero(),
        conjugate_roots: vec![],
        binet_lead: prec.zero(),
        binet_rest: vec![],
        irreducibility_checked: false,
        terms: Mutex::new(Vec::new()),
    };
    let horizon = 64.max(4 * r);
    let mut prev = Integer::from(0);
    for k in 1..=horizon {
        let t = probe.term(k);
        if t <= prev {
            return Err(Error::NotIncreasing(k));
        }
        prev = t;
    }

    let irreducible_checked = if r <= 4 {
        if let Some(factor) = reducible_witness(coeffs) {
            return Err(Error::ReducibleCharPoly(factor));
        }
        true
    } else {
        false
    };

    // roots at elevated precision
    let beta_hint = dominant_root_hint(coeffs);
    let build = construction_prec(prec, beta_hint);
    let roots = char_poly_roots(coeffs, build)?;
    let (dominant, conjugates) = split_dominant(roots, build)?;

    // Binet coefficients from the r x r root-power system
    let mut all_roots = vec![Cx::from_real(dominant.clone())];
    all_roots.extend(conjugates.iter().cloned());
    let lambdas = solve_binet(&all_roots, initial, build);
    let lead = &lambdas[0];
    if lead.im.clone().abs() > build.eps(12) || !lead.re.is_sign_positive() {
        return Err(Error::NoDominantRoot);
    }

    let spec = RecurrenceSpec {
        label: label.into(),
        coeffs: coeffs.to_vec(),
        initial: initial.to_vec(),
        part_origin: 1,
        dominant_root: dominant,
        conjugate_roots: conjugates,
        binet_lead: lead.re.clone(),
        binet_rest: lambdas[1..].to_vec(),
        irreducibility_checked: irreducible_checked,
        terms: Mutex::new(Vec::new()),
    };
    verify_binet(&spec, prec, build)?;
    Ok(spec)
}

/// Load a recurrence from the JSON schema {"label", "coeffs", "initial"}.
pub fn load_recurrence(path: &Path, prec: Prec) -> Result<RecurrenceSpec> {
    let text = std::fs::read_to_string(path)?;
    let file: RecurrenceFile = serde_json::from_str(&text)?;
    make_recurrence(&file.coeffs, &file.initial, &file.label, prec)
}

/// Crude dominant-root magnitude estimate for sizing the construction
/// precision (Cauchy bound).
fn dominant_root_hint(coeffs: &[i64]) -> f64 {
    1.0 + coeffs.iter().map(|c| c.unsigned_abs() as f64).fold(0.0, f64::max)
}

/// Characteristic polynomial x^r - c_1 x^{r-1} - ... - c_r evaluated with
/// its derivative, for Newton and Durand–Kerner.
fn char_poly_eval(coeffs: &[i64], z: &Cx, prec: Prec) -> (Cx, Cx) {
    let r = coeffs.len();
    // p(x) in monomial order: x^r - sum c_i x^{r-i}
    let mut p = Cx::one(prec);
    let mut dp = Cx::zero(prec);
    for i in 0..r {
        dp = &(&dp * z) + &p;
        p = &(&p * z) - &Cx::from_real(prec.float(coeffs[i]));
    }
    (p, dp)
}

/// All r roots by Durand–Kerner at working precision.
fn char_poly_roots(coeffs: &[i64], prec: Prec) -> Result<Vec<Cx>> {
    let r = coeffs.len();
    let radius = dominant_root_hint(coeffs);
    let mut roots: Vec<Cx> = (0..r)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * (j as f64) / (r as f64) + 0.42;
            Cx::new(
                prec.float(radius * angle.cos()),
                prec.float(radius * angle.sin()),
            )
        })
        .collect();
    let tol = prec.tail_eps(4);
    let mut converged = false;
    for _ in 0..2000 {
        let mut max_step = prec.zero();
        for j in 0..r {
            let (p, _) = char_poly_eval(coeffs, &roots[j], prec);
            let mut denom = Cx::one(prec);
            for (i, other) in roots.iter().enumerate() {
                if i != j {
                    denom = &denom * &(&roots[j] - other);
                }
            }
            let step = &p / &denom;
            let mag = step.abs();
            if mag > max_step {
                max_step = mag;
            }
            roots[j] = &roots[j] - &step;
        }
        if max_step < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoDominantRoot);
    }
    // Newton polish
    for root in roots.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = char_poly_eval(coeffs, root, prec);
            *root = &*root - &(&p / &dp);
        }
    }
    Ok(roots)
}

/// Separate the dominant real root from the conjugates, enforcing
/// real > 1 and strict modulus dominance.
fn split_dominant(mut roots: Vec<Cx>, prec: Prec) -> Result<(Float, Vec<Cx>)> {
    roots.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
    let top = roots[0].clone();
    let top_abs = top.abs();
    let second_abs = roots[1].abs();
    let gap_tol = prec.eps(prec.digits() / 2);
    if (top_abs.clone() - second_abs).abs() < gap_tol {
        return Err(Error::NoDominantRoot);
    }
    if top.im.clone().abs() > prec.eps(12) || !top.re.is_sign_positive() || top.re <= 1 {
        return Err(Error::NoDominantRoot);
    }
    Ok((top.re, roots[1..].to_vec()))
}

/// Solve sum_j lambda_j root_j^k = P_k for k = 1..r (dense Gaussian
/// elimination; r is small).
fn solve_binet(roots: &[Cx], initial: &[i64], prec: Prec) -> Vec<Cx> {
    let r = roots.len();
    let mut a: Vec<Vec<Cx>> = (0..r)
        .map(|k| roots.iter().map(|rt| rt.powi(k as i64 + 1)).collect())
        .collect();
    let mut b: Vec<Cx> = initial.iter().map(|p| Cx::from_real(prec.float(*p))).collect();
    for col in 0..r {
        // partial pivot
        let piv = (col..r)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..r {
            let f = &a[row][col] / &a[col][col];
            for c in col..r {
                a[row][c] = &a[row][c] - &(&f * &a[col][c]);
            }
            b[row] = &b[row] - &(&f * &b[col]);
        }
    }
    let mut x = vec![Cx::zero(prec); r];
    for row in (0..r).rev() {
        let mut acc = b[row].clone();
        for c in (row + 1)..r {
            acc = &acc - &(&a[row][c] * &x[c]);
        }
        x[row] = &acc / &a[row][row];
    }
    x
}

/// Binet reconstruction must match the exact terms to the contract
/// tolerance for k <= 64.
fn verify_binet(spec: &RecurrenceSpec, prec: Prec, build: Prec) -> Result<()> {
    let tol = prec.eps(8);
    for k in 1..=64usize {
        let mut acc = Cx::from_real(
            build.float(&spec.binet_lead) * build.float(&spec.dominant_root).pow_i(k as i32),
        );
        for (lam, root) in spec.binet_rest.iter().zip(&spec.conjugate_roots) {
            acc = &acc + &(lam * &root.powi(k as i64));
        }
        let exact = spec.term(k);
        let err = (acc.re.clone() - build.float(&exact)).abs() + acc.im.clone().abs();
        if err > tol {
            return Err(Error::NoDominantRoot);
        }
    }
    Ok(())
}

/// Returns a description of a rational factor when the monic integer
/// characteristic polynomial is reducible (degree <= 4 only).
fn reducible_witness(coeffs: &[i64]) -> Option<String> {
    // p(x) = x^r - c_1 x^{r-1} - ... - c_r, monic with integer coefficients,
    // so any rational root is an integer dividing c_r.
    let r = coeffs.len();
    let constant = -coeffs[r - 1]; // trailing coefficient of p
    if constant == 0 {
        return Some("x divides the characteristic polynomial".into());
    }
    let eval = |x: i128| -> i128 {
        let mut p: i128 = 1;
        for c in coeffs {
            p = p * x - (*c as i128);
        }
        p
    };
    for d in divisors(constant.unsigned_abs()) {
        for root in [d as i128, -(d as i128)] {
            if eval(root) == 0 {
                return Some(format!("integer root x = {root}"));
            }
        }
    }
    if r == 4 {
        // quadratic * quadratic with integer coefficients:
        // (x^2+ax+b)(x^2+cx+d), bd = -c_4, a+c = -c_1, b+d+ac = -c_2, ad+bc = -c_3
        let (c1, c2, c3, c4) = (
            coeffs[0] as i128,
            coeffs[1] as i128,
            coeffs[2] as i128,
            coeffs[3] as i128,
        );
        let prod = -c4;
        for b in signed_divisors(prod) {
            if prod % b != 0 {
                continue;
            }
            let d = prod / b;
            if d != b {
                // a(d - b) = -c_3 + c_1 b  => a integer?
                let num = -c3 + c1 * b;
                if num % (d - b) != 0 {
                    continue;
                }
                let a = num / (d - b);
                let c = -c1 - a;
                if b + d + a * c == -c2 {
                    return Some(format!("(x^2+{a}x+{b})(x^2+{c}x+{d})"));
                }
            } else {
                // b = d: need -c_1 b = -c_3 and a+c = -c_1, ac = -c_2 - 2b
                if c1 * b == c3 {
                    let s = -c1;
                    let p = -c2 - 2 * b;
                    let disc = s * s - 4 * p;
                    if disc >= 0 {
                        let sq = (disc as f64).sqrt() as i128;
                        for t in [sq - 1, sq, sq + 1] {
                            if t >= 0 && t * t == disc && (s + t) % 2 == 0 {
                                let a = (s + t) / 2;
                                let c = s - a;
                                return Some(format!("(x^2+{a}x+{b})(x^2+{c}x+{b})"));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n && i < 1_000_000 {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

fn signed_divisors(n: i128) -> Vec<i128> {
    let mut out = Vec::new();
    for d in divisors(n.unsigned_abs() as u64) {
        out.push(d as i128);
        out.push(-(d as i128));
    }
    out
}

/// The Pell recurrence (coeffs 2,1; terms 1, 2, 5, 12, 29, ...), used
/// throughout the tests as the second worked instance.
pub fn make_pell(prec: Prec) -> Result<RecurrenceSpec> {
    make_recurrence(&[2, 1], &[1, 2], "pell", prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Prec {
        Prec::new(64)
    }

    #[test]
    fn fibonacci_analytic_data() {
        let fib = make_fibonacci(p());
        let phi = p().parse("1.61803398874989484820458683436563811772030917980576286213544862270526046282");
        assert!((p().float(fib.beta()) - phi).abs() < p().eps(10));
        let lam = p().parse("0.447213595499957939281834733746255247088123671922305144854179449082104185128");
        assert!((p().float(fib.lambda()) - lam).abs() < p().eps(10));
        assert_eq!(fib.term(10), Integer::from(55));
        assert_eq!(fib.term(30), Integer::from(832040));
        assert_eq!(fib.part_origin(), 2);
    }

    #[test]
    fn fibonacci_parts_skip_duplicate_one() {
        let fib = make_fibonacci(p());
        let parts = fib.parts_up_to(&Integer::from(10));
        assert_eq!(parts, vec![1, 2, 3, 5, 8].into_iter().map(Integer::from).collect::<Vec<_>>());
        assert!(fib.parts_up_to(&Integer::from(0)).is_empty());
    }

    #[test]
    fn pell_data() {
        let pell = make_pell(p()).unwrap();
        let beta = p().parse("2.41421356237309504880168872420969807856967187537694807317667973799073247846");
        assert!((p().float(pell.beta()) - beta).abs() < p().eps(10));
        // lambda = 1/(2 sqrt 2)
        let lam = p().parse("0.353553390593273762200422181052424519642417968844237018294169934497683119616");
        assert!((p().float(pell.lambda()) - lam).abs() < p().eps(10));
        assert_eq!(pell.term(5), Integer::from(29));
        let parts = pell.parts_up_to(&Integer::from(12));
        assert_eq!(parts, vec![1, 2, 5, 12].into_iter().map(Integer::from).collect::<Vec<_>>());
    }

    #[test]
    fn shifted_fibonacci_is_valid() {
        // coeffs (1,1), initial (1,2): terms 1,2,3,5,8 are distinct
        let s = make_recurrence(&[1, 1], &[1, 2], "fib-shifted", p()).unwrap();
        assert_eq!(s.term(5), Integer::from(8));
        // lambda = phi/sqrt(5)
        let lam = p().parse("0.723606797749978969640917366873127623544061835961152572427089724541052092564");
        assert!((p().float(s.lambda()) - lam).abs() < p().eps(10));
    }

    #[test]
    fn rejections() {
        assert!(matches!(
            make_recurrence(&[1, 1], &[2, 1], "bad", p()),
            Err(Error::FirstTermNotOne(_))
        ));
        assert!(matches!(
            make_recurrence(&[1, 1], &[1, 1], "dup", p()),
            Err(Error::NotIncreasing(_))
        ));
        // x^2 - 3x - 4 = (x-4)(x+1): reducible
        assert!(matches!(
            make_recurrence(&[3, 4], &[1, 5], "red", p()),
            Err(Error::ReducibleCharPoly(_))
        ));
        // x^2 - 2x - 3 = (x-3)(x+1)
        assert!(matches!(
            make_recurrence(&[2, 3], &[1, 4], "red2", p()),
            Err(Error::ReducibleCharPoly(_))
        ));
    }

    #[test]
    fn recurrence_identity_holds_exactly() {
        let pell = make_pell(p()).unwrap();
        for k in 1..=64usize {
            let lhs = pell.term(k + 2);
            let rhs = pell.term(k + 1) * 2 + pell.term(k);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degree_three_recurrence() {
        // x^3 - x^2 - x - 1 (tribonacci-like), initial 1, 2, 4: distinct and increasing
        let s = make_recurrence(&[1, 1, 1], &[1, 2, 4], "trib", p()).unwrap();
        assert_eq!(s.term(6), Integer::from(24));
        assert_eq!(s.degree(), 3);
        assert!(s.irreducibility_checked());
        // Binet reconstruction is validated inside make_recurrence
    }

    #[test]
    fn parts_max_equals_term() {
        let fib = make_fibonacci(p());
        let t = fib.term(12);
        let parts = fib.parts_up_to(&t);
        assert_eq!(parts.last().unwrap(), &t);
    }

    #[test]
    fn json_loading() {
        let dir = std::env::temp_dir().join("recurpart-test-json");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("pell.json");
        std::fs::write(&path, r#"{"label":"pell","coeffs":[2,1],"initial":[1,2]}"#).unwrap();
        let spec = load_recurrence(&path, p()).unwrap();
        assert_eq!(spec.label(), "pell");
        assert_eq!(spec.term(4), Integer::from(12));
    }
}
