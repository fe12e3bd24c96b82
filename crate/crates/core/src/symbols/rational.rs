//! Rational functions of `z` in factored form.

use std::fmt;

use super::factored::{FactoredPoly, Region, Root, CLASSIFY_TOL, COPRIME_TOL};
use super::poly::ComplexPoly;
use super::series;
use crate::error::{Error, Result};
use crate::factor;
use crate::C64;

/// `num / den` with no shared roots (up to [`COPRIME_TOL`]) and a monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    num: FactoredPoly,
    den: FactoredPoly,
}

impl RationalFn {
    /// Panics on a zero denominator; use [`RationalFn::try_new`] for user input.
    pub fn new(num: FactoredPoly, den: FactoredPoly) -> Self {
        Self::try_new(num, den).expect("zero denominator")
    }

    pub fn try_new(num: FactoredPoly, den: FactoredPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Schema("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let mut num = num;
        let mut den = den;
        // cancel common roots
        'outer: loop {
            for (i, nr) in num.roots().iter().enumerate() {
                if let Some((j, dr)) =
                    den.roots().iter().enumerate().find(|(_, dr)| (dr.z - nr.z).norm() <= COPRIME_TOL)
                {
                    let k = nr.mult.min(dr.mult);
                    num = num.without_root(i, k);
                    den = den.without_root(j, k);
                    continue 'outer;
                }
            }
            break;
        }
        let lead = den.leading();
        Ok(Self { num: num.scale(C64::new(1.0, 0.0) / lead), den: den.monic() })
    }

    pub fn zero() -> Self {
        Self { num: FactoredPoly::zero(), den: FactoredPoly::one() }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self { num: FactoredPoly::constant(c), den: FactoredPoly::one() }
    }

    /// `z^k` for any integer `k`.
    pub fn z_power(k: i32) -> Self {
        if k >= 0 {
            Self::from_poly(FactoredPoly::z_power(k as usize))
        } else {
            Self::new(FactoredPoly::one(), FactoredPoly::z_power((-k) as usize))
        }
    }

    pub fn from_poly(p: FactoredPoly) -> Self {
        Self::new(p, FactoredPoly::one())
    }

    /// Factors a dense polynomial numerically.
    pub fn from_dense(p: &ComplexPoly) -> Result<Self> {
        Ok(Self::from_poly(factor::roots(p, CLASSIFY_TOL)?))
    }

    pub fn num(&self) -> &FactoredPoly {
        &self.num
    }

    pub fn den(&self) -> &FactoredPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() == 0 && self.den.degree() == 0
    }

    /// `deg num - deg den`.
    pub fn relative_degree(&self) -> i64 {
        self.num.degree() as i64 - self.den.degree() as i64
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Evaluates, refusing points within `tol` of a pole.
    pub fn try_eval(&self, z: C64, tol: f64) -> Result<C64> {
        if self.den.roots().iter().any(|r| (r.z - z).norm() <= tol) {
            return Err(Error::PoleOnEvaluationPoint(z));
        }
        Ok(self.eval(z))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::IllConditioned("division by the zero rational function".into()));
        }
        Self::try_new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<Self> {
        Self::one().div(self)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.num.scale(s), self.den.clone())
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn mul_poly(&self, p: &FactoredPoly) -> Self {
        Self::new(self.num.mul(p), self.den.clone())
    }

    pub fn div_poly(&self, p: &FactoredPoly) -> Self {
        Self::new(self.num.clone(), self.den.mul(p))
    }

    /// Sum; the new numerator is refactored numerically.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let lhs = &self.num.expand() * &other.den.expand();
        let rhs = &other.num.expand() * &self.den.expand();
        let sum = &lhs + &rhs;
        let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff());
        if sum.max_abs_coeff() <= 1e-13 * scale {
            return Ok(Self::zero());
        }
        let sum = sum.trimmed(1e-13);
        let num = factor::roots(&sum, CLASSIFY_TOL)?;
        Self::try_new(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Function whose values on the circle are the conjugates of `self`,
    /// written again as a rational function of `z`.
    pub fn conj_on_circle(&self) -> Self {
        let shift = self.den.degree() as i32 - self.num.degree() as i32;
        let base = Self::new(self.num.conj_reflect(), self.den.conj_reflect());
        base.mul(&Self::z_power(shift))
    }

    pub fn poles(&self) -> &[Root] {
        self.den.roots()
    }

    pub fn zeros(&self) -> &[Root] {
        self.num.roots()
    }

    pub fn pole_count(&self, region: Region) -> usize {
        self.den.count(region)
    }

    /// No poles in the closed disc: the function lies in H2+ (and in H-infinity).
    pub fn is_analytic_on_closed_disc(&self) -> bool {
        self.pole_count(Region::D) == 0 && self.pole_count(Region::T) == 0
    }

    /// Poles only in the open disc and vanishing at infinity: the function lies in H2-.
    pub fn is_in_h2_minus(&self) -> bool {
        self.is_zero()
            || (self.pole_count(Region::E) == 0 && self.pole_count(Region::T) == 0 && self.relative_degree() < 0)
    }

    pub fn is_bounded_on_circle(&self) -> bool {
        self.pole_count(Region::T) == 0
    }

    /// Taylor coefficients at `t` (not a pole), `len` terms.
    pub fn series_at(&self, t: C64, len: usize) -> Result<series::Series> {
        if self.den.roots().iter().any(|r| (r.z - t).norm() <= 1e-9) {
            return Err(Error::NotRegularPoint(t));
        }
        let n = self.num.expand().taylor_shift(t);
        let d = self.den.expand().taylor_shift(t);
        Ok(series::div(&n, &d, len))
    }

    /// `Some(c)` when `self = c * other` identically.
    pub fn ratio_constant(&self, other: &Self) -> Option<C64> {
        let r = self.div(other).ok()?;
        r.is_constant().then(|| r.num.leading())
    }

    pub fn partial_fractions(&self) -> PartialFractions {
        let n = self.num.expand();
        let (poly, _) = n.div_rem(&self.den.expand());
        let mut parts = Vec::new();
        for (idx, root) in self.den.roots().iter().enumerate() {
            let rest = self.den.without_root(idx, root.mult).expand();
            let s = series::div(&n.taylor_shift(root.z), &rest.taylor_shift(root.z), root.mult);
            // s_k multiplies (z-p)^(k-m); store by increasing pole order
            let mut coeffs = vec![C64::new(0.0, 0.0); root.mult];
            for (k, sk) in s.iter().enumerate() {
                coeffs[root.mult - 1 - k] = *sk;
            }
            parts.push(PolePart { pole: root.z, region: root.region, coeffs });
        }
        PartialFractions { poly, parts }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / {}", self.num, self.den.monic())
        }
    }
}

/// Principal part at one pole: `sum_k coeffs[k] / (z - pole)^(k+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolePart {
    pub pole: C64,
    pub region: Region,
    pub coeffs: Vec<C64>,
}

impl PolePart {
    pub fn eval(&self, z: C64) -> C64 {
        let inv = C64::new(1.0, 0.0) / (z - self.pole);
        let mut pw = inv;
        let mut acc = C64::new(0.0, 0.0);
        for c in &self.coeffs {
            acc += c * pw;
            pw *= inv;
        }
        acc
    }
}

/// Polynomial part plus principal parts.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub poly: ComplexPoly,
    pub parts: Vec<PolePart>,
}

impl PartialFractions {
    pub fn zero() -> Self {
        Self { poly: ComplexPoly::zero(), parts: vec![] }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.poly.eval(z) + self.parts.iter().map(|p| p.eval(z)).sum::<C64>()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.parts.iter().all(|p| p.coeffs.iter().all(|c| c.norm() == 0.0))
    }

    /// Splits into the H2+ part (polynomial plus exterior poles) and the H2-
    /// part (interior poles). Poles on the circle are rejected.
    pub fn split(&self) -> Result<(PartialFractions, PartialFractions)> {
        if let Some(p) = self.parts.iter().find(|p| p.region == Region::T) {
            return Err(Error::PoleOnGrid(format!("pole {} on the unit circle", p.pole)));
        }
        let plus = PartialFractions {
            poly: self.poly.clone(),
            parts: self.parts.iter().filter(|p| p.region == Region::E).cloned().collect(),
        };
        let minus = PartialFractions {
            poly: ComplexPoly::zero(),
            parts: self.parts.iter().filter(|p| p.region == Region::D).cloned().collect(),
        };
        Ok((plus, minus))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            poly: self.poly.scale(s),
            parts: self
                .parts
                .iter()
                .map(|p| PolePart { coeffs: p.coeffs.iter().map(|c| c * s).collect(), ..p.clone() })
                .collect(),
        }
    }
}
