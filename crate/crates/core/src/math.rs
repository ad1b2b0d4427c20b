//! Log-domain factorials and a few stable helpers shared across the crate.
//!
//! Amplitude formulas are evaluated as `exp(sum of logs)` per term so that
//! photon numbers well beyond 170 (where `n!` overflows `f64`) remain usable.

use std::sync::OnceLock;

const TABLE_LEN: usize = 257;

fn ln_factorial_table() -> &'static [f64; TABLE_LEN] {
    static TABLE: OnceLock<[f64; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0_f64; TABLE_LEN];
        // Kahan-compensated cumulative sum of ln k.
        let mut sum = 0.0_f64;
        let mut c = 0.0_f64;
        for n in 2..TABLE_LEN {
            let y = (n as f64).ln() - c;
            let s = sum + y;
            c = (s - sum) - y;
            sum = s;
            t[n] = sum;
        }
        t
    })
}

/// ln(n!) to near machine precision for all n.
pub fn ln_factorial(n: usize) -> f64 {
    if n < TABLE_LEN {
        return ln_factorial_table()[n];
    }
    // Stirling series; the truncation error is < 1/(1680 n^7), far below
    // f64 resolution for n >= 257.
    let x = n as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// ln C(n, k); k is clamped to the valid range by the caller.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// sqrt(C(n, k)), evaluated in the log domain.
pub fn sqrt_binomial(n: usize, k: usize) -> f64 {
    (0.5 * ln_binomial(n, k)).exp()
}

/// ln cosh x without overflow for large |x|.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// ln sinh x for x > 0 without overflow.
pub fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
}
