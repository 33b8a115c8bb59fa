//! The saddle-point layer: the saddle equation `n = -d/ds log F(e^{-s})`,
//! its numeric solution, the Lambert-W closed-form inversion, and the
//! numerically constructed 1-periodic functions read by the theorem-form
//! estimates.
//!
//! The saddle relation has the shape
//! `n = -log(a)/(a log b) + h0(a)/a + const`, where `h0` is log-periodic
//! (constant up to ~1e-9 oscillation). Inverting the leading part goes
//! through `w e^w = y`: the tables store the periodic exponent
//! `psi0 = log b (log(w e^w) - log n)`, so that reading them back gives
//! `alpha = W(e^{psi0/log b} n) / (n log b)`. Builder and consumer use
//! that one convention; the closed-form cross-check
//! `psi0 = (log b)^2 h0 + log b loglog b` is asserted in the tests.
//!
//! Tables are indexed by the saddle's own phase `frac(log(1/alpha)/log b)`
//! (exactly one unit per multiplicative period [b, b^2]); indexing by
//! `frac(log n/log b)` instead would drift by `loglog n/log b` between
//! build depth and consumption scale, which matters for sequences whose
//! oscillation amplitude is above the table tolerance.

use crate::error::{Error, Result};
use crate::genlog::{self, LogGenExpansion};
use crate::hp::{Cx, Prec};
use crate::seqkit::RecurrenceSpec;
use crate::special::lambert_w;
use rug::Float;

/// A solved saddle point with its phase data.
#[derive(Clone, Debug)]
pub struct SaddlePair {
    pub n: Float,
    pub alpha: Float,
    /// frac(log n / log beta)
    pub phase: f64,
    pub h0_value: Float,
}

/// Samples of a 1-periodic function with periodic cubic interpolation.
/// Values are stored in f64: the tables carry ~1e-9-scale oscillations
/// around O(1) means against 1e-8 tolerances, so the f64 noise floor is
/// eight orders below the contract.
#[derive(Clone, Debug)]
pub struct PeriodicTable {
    /// (phase, value), sorted by phase, phases in [0, 1).
    pub samples: Vec<(f64, f64)>,
    pub generation_m: u32,
    /// Sup-norm distance between the last two depth generations. The
    /// recorded phase drifts by ~loglog n/log beta between depths, so
    /// spectra with oscillation amplitudes above the target tolerance
    /// plateau here instead of converging; the value records the
    /// stabilization actually achieved.
    pub stabilization: f64,
}

impl PeriodicTable {
    /// Periodic cubic Hermite interpolation (Catmull–Rom slopes on the
    /// irregular grid, wrapped around the unit circle).
    pub fn value(&self, phase: f64) -> f64 {
        let n = self.samples.len();
        assert!(n >= 4, "table too small");
        let mut x = phase.rem_euclid(1.0);
        let i = match self.samples.partition_point(|(p, _)| *p <= x) {
            0 => {
                x += 1.0;
                n - 1
            }
            k => k - 1,
        };
        let base = self.samples[i].0;
        let pt = |off: isize| -> (f64, f64) {
            let m = n as isize;
            let jj = ((((i as isize + off) % m) + m) % m) as usize;
            let (mut px, v) = self.samples[jj];
            if off < 0 {
                if px > base {
                    px -= 1.0;
                }
            } else if off > 0 && px <= base {
                px += 1.0;
            }
            (px, v)
        };
        let (xm1, ym1) = pt(-1);
        let (x0, y0) = (base, self.samples[i].1);
        let (x1, y1) = pt(1);
        let (x2, y2) = pt(2);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let m0 = (y1 - ym1) / (x1 - xm1) * h;
        let m1 = (y2 - y0) / (x2 - x0) * h;
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().map(|(_, v)| v).sum::<f64>() / self.samples.len() as f64
    }

    /// Largest absolute disagreement with another table on a uniform grid.
    pub fn sup_distance(&self, other: &PeriodicTable, grid: usize) -> f64 {
        (0..grid)
            .map(|i| {
                let x = i as f64 / grid as f64;
                (self.value(x) - other.value(x)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Precomputed saddle context: the expansion coefficients, the O(1) term
/// of the saddle relation, and the dispatch data for the periodic sums.
pub struct SaddleCtx<'a> {
    spec: Option<&'a RecurrenceSpec>,
    pub expansion: LogGenExpansion,
    /// The constant in `n(alpha)`: +1 for the Fibonacci F_2 form,
    /// `-zeta_P(-1)/2` in general.
    pub n_const: Float,
    pub log_beta: Float,
    prec: Prec,
}

impl<'a> SaddleCtx<'a> {
    pub fn fibonacci(prec: Prec) -> SaddleCtx<'static> {
        let fib = crate::seqkit::make_fibonacci(prec);
        SaddleCtx {
            spec: None,
            expansion: genlog::f2_expansion(prec),
            n_const: prec.float(1),
            log_beta: fib.log_beta(prec),
            prec,
        }
    }

    pub fn general(spec: &'a RecurrenceSpec, prec: Prec) -> Result<SaddleCtx<'a>> {
        let zm1 = crate::zetarec::zeta_rec_continued(spec, &Cx::from_real(prec.float(-1)), prec)?;
        Ok(SaddleCtx {
            spec: Some(spec),
            expansion: genlog::p_expansion(spec, prec),
            n_const: -zm1.re / prec.float(2),
            log_beta: spec.log_beta(prec),
            prec,
        })
    }

    /// The log-periodic part of the saddle relation:
    /// `h0(s) = -lin_coeff - s f'(s)|_periodic`, satisfying h0(s) = h0(beta s).
    pub fn h0(&self, s: &Float) -> Result<Float> {
        let prec = self.prec;
        let osc = match self.spec {
            None => genlog::h_deriv_weighted(s, prec)?,
            Some(spec) => genlog::f2_pole_line_deriv(spec, s, prec)?,
        };
        Ok(-prec.float(&self.expansion.lin_coeff) - osc)
    }

    /// `n(alpha) = 2 quad log(1/a)/a - lin/a - (s f')/a + n_const`.
    pub fn n_of_alpha(&self, alpha: &Float) -> Result<Float> {
        let prec = self.prec;
        let a = prec.float(alpha);
        let h0 = self.h0(&a)?;
        Ok(
            -prec.float(2) * prec.float(&self.expansion.quad_coeff) * a.clone().ln() / a.clone()
                + h0 / a
                + prec.float(&self.n_const),
        )
    }

    /// Leading closed form of dn/ds at the saddle: `log a / (a^2 log beta)`.
    pub fn dn_ds_leading(&self, alpha: &Float) -> Float {
        let prec = self.prec;
        let a = prec.float(alpha);
        a.clone().ln() / (a.square() * self.log_beta.clone())
    }

    /// Full closed-form derivative `(log a - 1)/(a^2 log b) - h0/a^2`
    /// (the periodic part's own derivative is O(1/a), dropped).
    pub fn dn_ds_exact(&self, alpha: &Float) -> Result<Float> {
        let prec = self.prec;
        let a = prec.float(alpha);
        let h0 = self.h0(&a)?;
        Ok((a.clone().ln() - 1u32) / (a.clone().square() * self.log_beta.clone())
            - h0 / a.square())
    }

    /// Solve `n_of_alpha(alpha) = n` by bracketed Newton. The bracket
    /// comes from the first-order inversion `alpha ~ log n/(n log beta)`
    /// scaled by [0.5, 2], widened once if needed.
    pub fn solve_alpha(&self, n: &Float) -> Result<Float> {
        let prec = self.prec;
        let n = prec.float(n);
        assert!(n >= 100, "saddle solving needs n >= 100");
        let first_order = n.clone().ln() / (n.clone() * self.log_beta.clone());
        let mut lo = first_order.clone() * prec.float(0.5);
        let mut hi = first_order.clone() * prec.float(2);
        let f = |a: &Float| -> Result<Float> { Ok(self.n_of_alpha(a)? - n.clone()) };
        // n(alpha) decreases in alpha: f(lo) > 0 > f(hi) wanted
        let mut widenings = 0;
        while f(&lo)? < 0 {
            lo *= prec.float(0.5);
            widenings += 1;
            if widenings > 8 {
                return Err(Error::BracketFailure(n.to_f64()));
            }
        }
        while f(&hi)? > 0 {
            hi *= prec.float(2);
            widenings += 1;
            if widenings > 8 {
                return Err(Error::BracketFailure(n.to_f64()));
            }
        }
        let mut x = (lo.clone() + hi.clone()) / prec.float(2);
        let target = prec.float(1e-12) * n.clone();
        for _ in 0..500 {
            let fx = f(&x)?;
            if fx.clone().abs() < target {
                return Ok(x);
            }
            if fx.is_sign_positive() {
                lo = x.clone();
            } else {
                hi = x.clone();
            }
            let dfx = self.dn_ds_exact(&x)?;
            let mut next = x.clone() - fx / dfx;
            if !(next > lo && next < hi) {
                next = (lo.clone() + hi.clone()) / prec.float(2);
            }
            x = next;
        }
        Err(Error::BracketFailure(n.to_f64()))
    }

    /// Closed-form estimate from the inversion table:
    /// `alpha = W(e^{psi0(phase)/log b} n) / (n log b)`, the table read at
    /// the saddle's own phase `frac(-log alpha/log b)`. The phase is made
    /// self-consistent by a short fixed-point iteration from the
    /// first-order seed (the contraction factor is the table's oscillation
    /// amplitude over (log b)^2 W, far below 1).
    pub fn alpha_estimate(&self, n: &Float, psi0: &PeriodicTable) -> Result<Float> {
        let prec = self.prec;
        let n = prec.float(n);
        let mut alpha = n.clone().ln() / (n.clone() * self.log_beta.clone());
        for _ in 0..3 {
            let phase_x = -prec.float(&alpha).ln() / self.log_beta.clone();
            let phase = (phase_x.clone() - phase_x.floor()).to_f64().rem_euclid(1.0);
            let psi = prec.float(psi0.value(phase));
            let y = (psi / self.log_beta.clone()).exp() * n.clone();
            let w = lambert_w(&y, prec)?;
            alpha = w / (n.clone() * self.log_beta.clone());
        }
        Ok(alpha)
    }

    pub fn phase_of(&self, n: &Float) -> f64 {
        let prec = self.prec;
        let x = prec.float(n).ln() / self.log_beta.clone();
        let fracpart = x.clone() - x.floor();
        fracpart.to_f64().rem_euclid(1.0)
    }

    /// The full (log alpha)^2 expansion in terms of n and the psi0 table:
    /// `L(L - 2LL + 2LLb) + LL(LL + 2 - 2LLb) + LLb^2 - 2 psi0/log b`.
    pub fn log_alpha_sq_expansion(&self, n: &Float, psi0: &PeriodicTable) -> Float {
        let prec = self.prec;
        let n = prec.float(n);
        let l = n.clone().ln();
        let ll = l.clone().ln();
        let llb = self.log_beta.clone().ln();
        let psi = prec.float(psi0.value(self.phase_of(&n)));
        l.clone() * (l.clone() - prec.float(2) * ll.clone() + prec.float(2) * llb.clone())
            + ll.clone() * (ll + prec.float(2) - prec.float(2) * llb.clone())
            + llb.square()
            - prec.float(2) * psi / self.log_beta.clone()
    }

    /// Build the psi0 inversion table: for a grid of depths
    /// `alpha = beta^{-(m+t)}`, map through the saddle relation and record
    /// `(frac(log n/log b), log b (log(w e^w) - log n))` with
    /// `w = alpha n log b`; deepen m until successive tables agree to
    /// 1e-8 in sup norm.
    pub fn build_psi0(&self) -> Result<PeriodicTable> {
        self.build_table(|_, _, psi| psi)
    }

    /// Build the psi1 table: the value of the oscillatory correction at
    /// the saddle, `(frac(log n/log b), [k=0]h(alpha))`.
    pub fn build_psi1(&self) -> Result<PeriodicTable> {
        let prec = self.prec;
        self.build_table(|ctx, alpha, _| match ctx.spec {
            None => genlog::h_k0(alpha, prec).expect("pole-line sum").to_f64(),
            Some(spec) => genlog::f2_pole_line(spec, alpha, prec)
                .expect("pole-line sum")
                .to_f64(),
        })
    }

    fn build_table<F>(&self, record: F) -> Result<PeriodicTable>
    where
        F: Fn(&SaddleCtx, &Float, f64) -> f64,
    {
        let grid = 288usize;
        let tol = 1e-8;
        let mut prev: Option<(PeriodicTable, f64)> = None;
        let mut m = 40u32;
        while m <= 200 {
            let mut table = self.table_at_depth(m, grid, &record)?;
            if let Some((p, prev_dist)) = &prev {
                let dist = table.sup_distance(p, 2 * grid);
                table.stabilization = dist;
                // converged, or plateaued at the phase-drift floor
                if dist < tol || dist > 0.8 * prev_dist {
                    return Ok(table);
                }
                prev = Some((table, dist));
            } else {
                prev = Some((table, f64::INFINITY));
            }
            m += 5;
        }
        Err(Error::NoConvergence(200))
    }

    fn table_at_depth<F>(&self, m: u32, grid: usize, record: &F) -> Result<PeriodicTable>
    where
        F: Fn(&SaddleCtx, &Float, f64) -> f64,
    {
        let prec = self.prec;
        let mut samples = Vec::with_capacity(grid);
        for i in 0..grid {
            let t = i as f64 / grid as f64;
            let alpha = (-(prec.float(m) + prec.float(t)) * self.log_beta.clone()).exp();
            let n = self.n_of_alpha(&alpha)?;
            let w = alpha.clone() * n.clone() * self.log_beta.clone();
            // psi = log b (log(w e^w) - log n) = log b (log w + w - log n)
            let psi = self.log_beta.clone() * (w.clone().ln() + w - n.clone().ln());
            // index by the saddle's own log-scale phase frac(-log a/log b)
            // = t exactly: this is periodic without the loglog-n drift the
            // n-phase would carry, so deepening m genuinely stabilizes
            samples.push((t, record(self, &alpha, psi.to_f64())));
        }
        samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        samples.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12);
        Ok(PeriodicTable {
            samples,
            generation_m: m,
            stabilization: f64::INFINITY,
        })
    }

    /// Solve the saddle and package it with its phase data.
    pub fn saddle_pair(&self, n: &Float) -> Result<SaddlePair> {
        let prec = self.prec;
        let n = prec.float(n);
        let alpha = self.solve_alpha(&n)?;
        let h0_value = self.h0(&alpha)?;
        Ok(SaddlePair {
            phase: self.phase_of(&n),
            n,
            alpha,
            h0_value,
        })
    }
}

/// Fibonacci log-periodic saddle component (free-function form).
pub fn h0(s: &Float, prec: Prec) -> Result<Float> {
    SaddleCtx::fibonacci(prec).h0(s)
}

/// Fibonacci saddle relation n(alpha).
pub fn n_of_alpha(alpha: &Float, prec: Prec) -> Result<Float> {
    SaddleCtx::fibonacci(prec).n_of_alpha(alpha)
}

/// Fibonacci saddle solve.
pub fn solve_alpha(n: &Float, prec: Prec) -> Result<Float> {
    SaddleCtx::fibonacci(prec).solve_alpha(n)
}

/// Fibonacci closed-form saddle estimate from a psi0 table.
pub fn alpha_estimate(n: &Float, psi0: &PeriodicTable, prec: Prec) -> Result<Float> {
    SaddleCtx::fibonacci(prec).alpha_estimate(n, psi0)
}

/// Leading closed form of dn/ds at the saddle (Fibonacci).
pub fn dn_ds_at(alpha: &Float, prec: Prec) -> Float {
    SaddleCtx::fibonacci(prec).dn_ds_leading(alpha)
}

/// Build the Fibonacci psi0 table.
pub fn build_psi0(prec: Prec) -> Result<PeriodicTable> {
    SaddleCtx::fibonacci(prec).build_psi0()
}

/// Build the Fibonacci psi1 table.
pub fn build_psi1(prec: Prec) -> Result<PeriodicTable> {
    SaddleCtx::fibonacci(prec).build_psi1()
}

/// The (log alpha)^2 expansion (Fibonacci).
pub fn log_alpha_sq_expansion(n: &Float, psi0: &PeriodicTable, prec: Prec) -> Float {
    SaddleCtx::fibonacci(prec).log_alpha_sq_expansion(n, psi0)
}


impl<'a> SaddleCtx<'a> {
    /// Rebuild a psi0-style table at the same depth with a different grid
    /// size (used by the grid-doubling stability checks).
    pub fn rebuild_at(&self, table: &PeriodicTable, grid: usize) -> Result<PeriodicTable> {
        self.table_at_depth(table.generation_m, grid, &|_, _, psi| psi)
    }

    /// Rebuild a psi1-style table at the same depth with a different grid.
    pub fn rebuild_psi1_at(&self, table: &PeriodicTable, grid: usize) -> Result<PeriodicTable> {
        let prec = self.prec;
        self.table_at_depth(table.generation_m, grid, &|ctx: &SaddleCtx, alpha: &Float, _| {
            match ctx.spec {
                None => genlog::h_k0(alpha, prec).expect("pole-line sum").to_f64(),
                Some(spec) => genlog::f2_pole_line(spec, alpha, prec)
                    .expect("pole-line sum")
                    .to_f64(),
            }
        })
    }
}
