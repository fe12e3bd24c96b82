//! Truncated power series in a local variable `w = z - t`.

use crate::C64;

pub type Series = Vec<C64>;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn mul(a: &[C64], b: &[C64], len: usize) -> Series {
    let mut out = vec![zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a / b`, requires `b[0] != 0`.
pub fn div(a: &[C64], b: &[C64], len: usize) -> Series {
    let b0 = b[0];
    let mut out = vec![zero(); len];
    for n in 0..len {
        let mut acc = a.get(n).copied().unwrap_or_else(zero);
        for k in 1..=n {
            if let Some(bk) = b.get(k) {
                acc -= bk * out[n - k];
            }
        }
        out[n] = acc / b0;
    }
    out
}

/// `exp(h)` via `E' = h' E`.
pub fn exp(h: &[C64], len: usize) -> Series {
    let mut out = vec![zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = h.first().copied().unwrap_or_else(zero).exp();
    for n in 1..len {
        let mut acc = zero();
        for k in 1..=n {
            if let Some(hk) = h.get(k) {
                acc += hk * (k as f64) * out[n - k];
            }
        }
        out[n] = acc / n as f64;
    }
    out
}

pub fn eval(s: &[C64], w: C64) -> C64 {
    s.iter().rev().fold(zero(), |acc, c| acc * w + c)
}
