//! Riemann zeta values at integers and the constants derived from them.
//!
//! Values for `2 <= k <= ZETA_TABLE_MAX` are computed once and cached in a
//! read-only table: Borwein's accelerated alternating series for small `k`,
//! the defining sum otherwise (it converges after a handful of terms).

use std::f64::consts::PI;
use std::sync::OnceLock;

const ZETA_TABLE_MAX: usize = 160;
const BORWEIN_TERMS: usize = 32;
// above this the direct sum is both faster and correctly rounded
const BORWEIN_MAX: usize = 20;

static ZETA_TABLE: OnceLock<Vec<f64>> = OnceLock::new();

fn table() -> &'static [f64] {
    ZETA_TABLE.get_or_init(|| {
        let coeffs = borwein_coefficients(BORWEIN_TERMS);
        (0..=ZETA_TABLE_MAX)
            .map(|k| match k {
                0 | 1 => f64::NAN,
                k if k <= BORWEIN_MAX => borwein_zeta(k as i32, &coeffs),
                k => direct_zeta(k as i32),
            })
            .collect()
    })
}

/// `d_0..=d_n` of Borwein's algorithm 2.
fn borwein_coefficients(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    // term_i = n (n+i-1)! 4^i / ((n-i)! (2i)!), term_0 = 1
    let mut term = 1.0;
    let mut acc = 1.0;
    d.push(acc);
    for i in 1..=n {
        let fi = i as f64;
        term *= (nf + fi - 1.0) * 4.0 * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        d.push(acc);
    }
    d
}

fn borwein_zeta(s: i32, d: &[f64]) -> f64 {
    let n = d.len() - 1;
    let dn = d[n];
    let mut sum = 0.0;
    for k in (0..n).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (d[k] - dn) / ((k + 1) as f64).powi(s);
    }
    let eta = -sum / dn;
    eta / (1.0 - 2f64.powi(1 - s))
}

fn direct_zeta(k: i32) -> f64 {
    // terms fall below 1e-18 after a few dozen n once k > BORWEIN_MAX;
    // the tail is summed smallest first and added to 1 last
    let mut n_max = 2u32;
    while (n_max as f64).powi(-k) >= 1e-18 {
        n_max += 1;
    }
    let tail: f64 = (2..n_max).rev().map(|n| (n as f64).powi(-k)).sum();
    1.0 + tail
}

/// ζ(k) for an integer `k >= 2`.
///
/// # Panics
/// Panics if `k < 2`; ζ has a pole at 1 and this helper only covers the
/// convergent half-line.
pub fn zeta_value(k: u32) -> f64 {
    assert!(k >= 2, "zeta_value requires k >= 2, got {k}");
    let k = k as usize;
    if k <= ZETA_TABLE_MAX {
        table()[k]
    } else {
        direct_zeta(k as i32)
    }
}

/// ζ at an arbitrary integer argument other than 1, using the functional
/// equation for negative arguments.
pub(crate) fn zeta_integer(s: i64) -> f64 {
    match s {
        1 => f64::INFINITY,
        0 => -0.5,
        s if s >= 2 => zeta_value(s as u32),
        s => {
            let r = -s;
            if r % 2 == 0 {
                0.0
            } else {
                // ζ(1-2n) = (-1)^n 2 (2n-1)! ζ(2n) / (2π)^{2n}
                let n = ((r + 1) / 2) as i32;
                let mut value = 2.0 * zeta_value(2 * n as u32);
                for i in 1..=(2 * n - 1) {
                    value *= i as f64 / (2.0 * PI);
                }
                value /= 2.0 * PI;
                if n % 2 == 0 {
                    value
                } else {
                    -value
                }
            }
        }
    }
}

/// Harmonic number `H_n`.
pub(crate) fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_values_match_closed_forms() {
        assert!((zeta_value(2) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta_value(4) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta_value(6) - PI.powi(6) / 945.0).abs() < 1e-15);
    }

    #[test]
    fn table_and_direct_sum_agree_at_the_seams() {
        let k = BORWEIN_MAX as i32;
        let coeffs = borwein_coefficients(BORWEIN_TERMS);
        assert!((borwein_zeta(k, &coeffs) - direct_zeta(k)).abs() <= 2.0 * f64::EPSILON);
        let k = ZETA_TABLE_MAX as i32;
        assert_eq!(table()[k as usize], direct_zeta(k));
        assert_eq!(zeta_value(500), 1.0 + 2f64.powi(-500));
    }

    #[test]
    fn negative_arguments() {
        assert!((zeta_integer(-1) + 1.0 / 12.0).abs() < 1e-16);
        assert!((zeta_integer(-3) - 1.0 / 120.0).abs() < 1e-16);
        assert!((zeta_integer(-5) + 1.0 / 252.0).abs() < 1e-16);
        assert_eq!(zeta_integer(-2), 0.0);
        assert_eq!(zeta_integer(0), -0.5);
    }
}
