//! Exact Bernoulli numbers by the defining recurrence, cached.
//!
//! Convention: B_1 = -1/2, so zeta(1-m) = -B_m/m holds for every m >= 2
//! and B_m = 0 for odd m > 1.

use rug::{Complete, Integer, Rational};
use std::sync::Mutex;
use std::sync::OnceLock;

static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// `B_m` as an exact rational.
pub fn bernoulli(m: u32) -> Rational {
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut tbl = cache.lock().unwrap();
    while tbl.len() <= m as usize {
        let m_next = tbl.len() as u32;
        // sum_{j=0}^{m-1} C(m+1, j) B_j = -C(m+1, m) B_m  =>  solve for B_m
        let mut acc = Rational::new();
        for (j, bj) in tbl.iter().enumerate() {
            let c = Integer::binomial_u(m_next + 1, j as u32).complete();
            acc += bj * Rational::from(c);
        }
        let den = Integer::binomial_u(m_next + 1, m_next).complete();
        let b = -acc / Rational::from(den);
        tbl.push(b);
    }
    tbl[m as usize].clone()
}

/// `zeta(1-m) = -B_m / m` for integer m >= 2, exact.
pub fn zeta_one_minus(m: u32) -> Rational {
    assert!(m >= 2);
    -bernoulli(m) / Rational::from(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), Rational::from(1));
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(3), Rational::from(0));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn zeta_at_negative_integers() {
        // zeta(-1) = -1/12, zeta(-3) = 1/120
        assert_eq!(zeta_one_minus(2), Rational::from((-1, 12)));
        assert_eq!(zeta_one_minus(4), Rational::from((1, 120)));
    }
}
