//! Fixed-precision rendering for human-readable output.

use qent::separable::ProductEnsemble;
use qent::{ComplexMatrix, C64};

pub const SIG_DIGITS: i32 = 6;

/// `%g`-style rendering with six significant digits.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    // Rounding may carry into the next decade (999999.5 -> 1e6).
    let rounded: f64 = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x).parse().unwrap();
    let exp = if rounded.abs() >= 10f64.powi(exp + 1) {
        exp + 1
    } else {
        exp
    };
    if !(-4..SIG_DIGITS).contains(&exp) {
        let s = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
        let (mantissa, e) = s.split_once('e').unwrap();
        let e: i32 = e.parse().unwrap();
        let sign = if e < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), e.abs())
    } else {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn complex(z: C64) -> String {
    if z.im == 0.0 {
        sig(z.re)
    } else if z.re == 0.0 {
        format!("{}i", sig(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", sig(z.re), sig(z.im.abs()))
    }
}

/// Zeroes entries below print resolution so round-off does not show.
fn clean(z: C64) -> C64 {
    let f = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
    C64::new(f(z.re), f(z.im))
}

pub fn vector(v: &[C64]) -> String {
    let parts: Vec<String> = v.iter().map(|&z| complex(clean(z))).collect();
    format!("[{}]", parts.join(", "))
}

pub fn matrix(m: &ComplexMatrix, indent: &str) -> String {
    (0..m.rows())
        .map(|i| {
            let row: Vec<C64> = (0..m.cols()).map(|j| m[(i, j)]).collect();
            format!("{indent}{}\n", vector(&row))
        })
        .collect()
}

pub fn ensemble(e: &ProductEnsemble, indent: &str) -> String {
    e.terms()
        .iter()
        .map(|t| {
            let factors: Vec<String> = t.factors.iter().map(|f| vector(f.amplitudes())).collect();
            format!("{indent}{}  {}\n", sig(t.weight), factors.join(" ⊗ "))
        })
        .collect()
}
