//! Dense complex polynomials with ascending coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::C64;

/// Dense polynomial `c[0] + c[1] z + ... + c[n] z^n`.
///
/// The coefficient list is trimmed so the leading coefficient is nonzero; the
/// zero polynomial is stored as `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<C64>,
}

impl Default for ComplexPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    /// Drops leading coefficients below `rel_tol * max|c|`.
    pub fn trimmed(mut self, rel_tol: f64) -> Self {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().norm() <= rel_tol * scale {
            self.coeffs.pop();
        }
        self
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![C64::new(0.0, 0.0); k + 1];
        c[k] = C64::new(1.0, 0.0);
        Self { coeffs: c }
    }

    /// `lead * prod (z - r)` over the listed roots.
    pub fn from_roots(lead: C64, roots: impl IntoIterator<Item = C64>) -> Self {
        let mut p = Self::constant(lead);
        for r in roots {
            p = &p * &Self::new(vec![-r, C64::new(1.0, 0.0)]);
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == C64::new(0.0, 0.0)
    }

    /// Degree; zero for constants, including the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![C64::new(0.0, 0.0); k];
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let n = self.degree();
        let d = divisor.degree();
        if self.is_zero() || n < d {
            return (Self::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C64::new(0.0, 0.0); n - d + 1];
        for k in (0..=n - d).rev() {
            let q = rem[k + d] / lead;
            quot[k] = q;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * dc;
            }
        }
        rem.truncate(d.max(1));
        if d == 0 {
            rem = vec![C64::new(0.0, 0.0)];
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Coefficients of `p(t + w)` as a polynomial in `w`.
    pub fn taylor_shift(&self, t: C64) -> Vec<C64> {
        // repeated synthetic division
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += t * next;
            }
        }
        c
    }

    /// Coefficients of `conj(p(1/conj z)) * z^deg`, i.e. the reversed conjugate polynomial.
    pub fn reversed_conj(&self) -> Self {
        Self::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = C64::new(0.0, 0.0);
        ComplexPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).copied().unwrap_or(zero) + rhs.coeffs.get(k).copied().unwrap_or(zero))
                .collect(),
        )
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        self + &(-rhs)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
