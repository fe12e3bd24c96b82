//! Symbols on the unit circle: a rational function times a monomial in
//! singular inner atoms, sums of such terms, and nondegenerate pairs.

use std::fmt;

use super::factored::FactoredPoly;
use super::inner::{BlaschkeProduct, SingularInnerAtom};
use super::rational::RationalFn;
use super::series::{self, Series};
use crate::error::{Error, Result};
use crate::C64;

/// Distance below which an evaluation point counts as sitting on a pole or atom.
pub const POLE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomFactor {
    pub atom: SingularInnerAtom,
    pub exponent: i32,
}

/// `rational(z) * prod atom_i(z)^exponent_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySymbol {
    rational: RationalFn,
    atoms: Vec<AtomFactor>,
}

impl BoundarySymbol {
    pub fn new(rational: RationalFn, atoms: Vec<AtomFactor>) -> Self {
        let mut merged: Vec<AtomFactor> = Vec::new();
        for f in atoms {
            match merged.iter_mut().find(|m| m.atom.same_as(&f.atom)) {
                Some(m) => m.exponent += f.exponent,
                None => merged.push(f),
            }
        }
        merged.retain(|f| f.exponent != 0);
        merged.sort_by(|a, b| {
            a.atom.point().arg().total_cmp(&b.atom.point().arg()).then(a.atom.mass().total_cmp(&b.atom.mass()))
        });
        Self { rational, atoms: merged }
    }

    pub fn rational(r: RationalFn) -> Self {
        Self::new(r, vec![])
    }

    pub fn constant(c: C64) -> Self {
        Self::rational(RationalFn::constant(c))
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn z_power(k: i32) -> Self {
        Self::rational(RationalFn::z_power(k))
    }

    pub fn atom(atom: SingularInnerAtom, exponent: i32) -> Self {
        Self::new(RationalFn::one(), vec![AtomFactor { atom, exponent }])
    }

    pub fn blaschke(b: &BlaschkeProduct) -> Self {
        Self::rational(b.to_rational())
    }

    pub fn rational_part(&self) -> &RationalFn {
        &self.rational
    }

    pub fn atoms(&self) -> &[AtomFactor] {
        &self.atoms
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    /// Rational part if the symbol carries no atoms.
    pub fn as_rational(&self) -> Option<&RationalFn> {
        (!self.has_atoms()).then_some(&self.rational)
    }

    pub fn same_atoms(&self, other: &Self) -> bool {
        self.atoms.len() == other.atoms.len()
            && self.atoms.iter().zip(&other.atoms).all(|(a, b)| a.exponent == b.exponent && a.atom.same_as(&b.atom))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        Self::new(self.rational.mul(&other.rational), atoms)
    }

    pub fn mul_rational(&self, r: &RationalFn) -> Self {
        Self::new(self.rational.mul(r), self.atoms.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self::new(
            self.rational.inv()?,
            self.atoms.iter().map(|f| AtomFactor { exponent: -f.exponent, ..*f }).collect(),
        ))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.rational.scale(s), self.atoms.clone())
    }

    /// Symbol with conjugated boundary values (`conj z = 1/z` on the circle;
    /// atoms flip their exponent).
    pub fn conj_on_circle(&self) -> Self {
        Self::new(
            self.rational.conj_on_circle(),
            self.atoms.iter().map(|f| AtomFactor { exponent: -f.exponent, ..*f }).collect(),
        )
    }

    /// Value at a point of the circle.
    pub fn eval(&self, z: C64) -> Result<C64> {
        if self.atoms.iter().any(|f| (f.atom.point() - z).norm() <= POLE_TOL) {
            return Err(Error::PoleOnEvaluationPoint(z));
        }
        let r = self.rational.try_eval(z, POLE_TOL)?;
        Ok(self.atoms_value(z) * r)
    }

    /// Value of the meromorphic extension at any point off the poles and atoms.
    pub fn value_at(&self, z: C64) -> C64 {
        self.rational.eval(z) * self.atoms_value(z)
    }

    fn atoms_value(&self, z: C64) -> C64 {
        self.atoms.iter().map(|f| f.atom.log_value(z) * f.exponent as f64).sum::<C64>().exp()
    }

    /// Taylor coefficients at `t` of the extension, `len` terms.
    pub fn series_at(&self, t: C64, len: usize) -> Result<Series> {
        let mut s = self.rational.series_at(t, len)?;
        for f in &self.atoms {
            let atom_series = f.atom.series_at(t, f.exponent.signum(), len)?;
            let mut powered = vec![C64::new(1.0, 0.0)];
            for _ in 0..f.exponent.unsigned_abs() {
                powered = series::mul(&powered, &atom_series, len);
            }
            s = series::mul(&s, &powered, len);
        }
        Ok(s)
    }

    /// Bounded on the circle: atoms are unimodular there, so only circle poles matter.
    pub fn is_bounded(&self) -> bool {
        self.rational.is_bounded_on_circle()
    }

    /// Canonical textual form, stable under rational cancellation; used to
    /// compare simplified symbols token by token.
    pub fn token(&self) -> String {
        let mut parts = Vec::new();
        let r = &self.rational;
        if r.is_zero() {
            return "0".into();
        }
        let lead = r.num().leading();
        if (lead - C64::new(1.0, 0.0)).norm() > 1e-12 {
            parts.push(fmt_complex(lead));
        }
        let net = r.num().origin_multiplicity() as i64 - r.den().origin_multiplicity() as i64;
        match net {
            0 => {}
            1 => parts.push("z".into()),
            -1 => parts.push("z̄".into()),
            k if k > 0 => parts.push(format!("z^{k}")),
            k => parts.push(format!("z̄^{}", -k)),
        }
        let factor = |root: &super::factored::Root| {
            let base = linear_factor(root.z);
            if root.mult > 1 {
                format!("{base}^{}", root.mult)
            } else {
                base
            }
        };
        for root in r.num().roots().iter().filter(|x| x.z.norm() > 1e-10) {
            parts.push(factor(root));
        }
        for root in r.den().roots().iter().filter(|x| x.z.norm() > 1e-10) {
            parts.push(format!("/{}", factor(root)));
        }
        for f in &self.atoms {
            let a = format!("atom({},{})", fmt_complex(f.atom.point()), fmt_real(f.atom.mass()));
            parts.push(match f.exponent {
                1 => a,
                -1 => format!("conj({a})"),
                e => format!("{a}^{e}"),
            });
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
}

impl fmt::Display for BoundarySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

fn linear_factor(r: C64) -> String {
    if fmt_real(r.im) == "0" && r.re < 0.0 {
        format!("(z+{})", fmt_real(-r.re))
    } else {
        format!("(z-{})", fmt_complex(r))
    }
}

fn fmt_real(x: f64) -> String {
    let s = format!("{:.12}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn fmt_complex(c: C64) -> String {
    let re = fmt_real(c.re);
    let im = fmt_real(c.im);
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ => format!("({re}{}{im}i)", if c.im >= 0.0 { "+" } else { "" }),
    }
}

impl fmt::Display for BoundaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.token()).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Finite sum of [`BoundarySymbol`] terms with distinct atom monomials.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BoundaryFn {
    terms: Vec<BoundarySymbol>,
}

impl BoundaryFn {
    pub fn zero() -> Self {
        Self { terms: vec![] }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = BoundarySymbol>) -> Result<Self> {
        let mut out = Self::zero();
        for t in terms {
            out.push(t)?;
        }
        Ok(out)
    }

    fn push(&mut self, t: BoundarySymbol) -> Result<()> {
        if t.is_zero() {
            return Ok(());
        }
        match self.terms.iter_mut().position(|s| s.same_atoms(&t)) {
            Some(i) => {
                let sum = self.terms[i].rational.add(&t.rational)?;
                if sum.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].rational = sum;
                }
            }
            None => self.terms.push(t),
        }
        Ok(())
    }

    pub fn terms(&self) -> &[BoundarySymbol] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_atoms(&self) -> bool {
        self.terms.iter().any(|t| t.has_atoms())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn mul_symbol(&self, s: &BoundarySymbol) -> Result<Self> {
        Self::from_terms(self.terms.iter().map(|t| t.mul(s)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { terms: self.terms.iter().map(|t| t.scale(c)).collect() }
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }

    pub fn value_at(&self, z: C64) -> C64 {
        self.terms.iter().map(|t| t.value_at(z)).sum()
    }

    /// Points (poles on the circle, atom points) that evaluation must avoid.
    pub fn singular_points(&self) -> Vec<C64> {
        let mut pts = Vec::new();
        for t in &self.terms {
            pts.extend(t.rational.poles().iter().map(|r| r.z));
            pts.extend(t.atoms.iter().map(|f| f.atom.point()));
        }
        pts
    }

    pub fn atom_points(&self) -> Vec<C64> {
        self.terms.iter().flat_map(|t| t.atoms.iter().map(|f| f.atom.point())).collect()
    }
}

impl From<BoundarySymbol> for BoundaryFn {
    fn from(s: BoundarySymbol) -> Self {
        if s.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![s] }
        }
    }
}

impl From<RationalFn> for BoundaryFn {
    fn from(r: RationalFn) -> Self {
        BoundarySymbol::rational(r).into()
    }
}

/// Nondegenerate symbol pair `(a, b)` of the paired operator `a P+ + b P-`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolPair {
    a: BoundarySymbol,
    b: BoundarySymbol,
}

impl SymbolPair {
    pub fn new(a: BoundarySymbol, b: BoundarySymbol) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::DegeneratePair("a is identically zero".into()));
        }
        if b.is_zero() {
            return Err(Error::DegeneratePair("b is identically zero".into()));
        }
        if a.same_atoms(&b) && rational_eq(a.rational_part(), b.rational_part()) {
            return Err(Error::DegeneratePair("a - b is identically zero".into()));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &BoundarySymbol {
        &self.a
    }

    pub fn b(&self) -> &BoundarySymbol {
        &self.b
    }

    pub fn has_atoms(&self) -> bool {
        self.a.has_atoms() || self.b.has_atoms()
    }

    /// `a / b` as a symbol.
    pub fn ratio(&self) -> Result<BoundarySymbol> {
        self.a.div(&self.b)
    }

    /// Pair `(conj b, conj a)`, whose projected kernel describes ker- of `self`.
    pub fn swapped_conjugate(&self) -> Result<Self> {
        Self::new(self.b.conj_on_circle(), self.a.conj_on_circle())
    }
}

fn rational_eq(x: &RationalFn, y: &RationalFn) -> bool {
    let lhs = &x.num().expand() * &y.den().expand();
    let rhs = &y.num().expand() * &x.den().expand();
    let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff());
    (&lhs - &rhs).max_abs_coeff() <= 1e-12 * scale
}

/// Coprime polynomial normal form of an atom-free pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialPair {
    pub p1: FactoredPoly,
    pub p2: FactoredPoly,
    /// The common factor `eta` with `a eta = p1`, `b eta = p2`.
    pub multiplier: RationalFn,
}

/// Normal form `(p1, p2)` with `a/b = p1/p2` on the circle, so that both
/// pairs have the same projected kernel.
pub fn to_polynomial_pair(pair: &SymbolPair) -> Result<PolynomialPair> {
    let (Some(a), Some(b)) = (pair.a.as_rational(), pair.b.as_rational()) else {
        return Err(Error::UnsupportedSymbol("singular inner factors have no polynomial normal form".into()));
    };
    let ratio = a.div(b)?;
    let p1 = ratio.num().clone();
    let p2 = ratio.den().clone();
    let multiplier = RationalFn::from_poly(p2.clone()).div(b)?;
    Ok(PolynomialPair { p1, p2, multiplier })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::factored::FactoredPoly;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn zplus1() -> RationalFn {
        RationalFn::from_poly(FactoredPoly::from_roots(c(1.0, 0.0), [(c(-1.0, 0.0), 1)]))
    }

    #[test]
    fn eval_examples() {
        let theta = SingularInnerAtom::new(c(-1.0, 0.0), 1.0).unwrap();
        let s = BoundarySymbol::atom(theta, 1);
        assert!((s.eval(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let z2 = BoundarySymbol::z_power(2);
        assert!((z2.eval(c(0.0, 1.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(s.eval(c(-1.0, 0.0)), Err(Error::PoleOnEvaluationPoint(_))));
    }

    #[test]
    fn conj_of_z_is_zbar() {
        let s = BoundarySymbol::z_power(1).conj_on_circle();
        assert_eq!(s.token(), "z̄");
        let t = BoundarySymbol::rational(zplus1()).conj_on_circle();
        assert_eq!(t.token(), "z̄·(z+1)");
    }

    #[test]
    fn degenerate_pairs_are_rejected() {
        let a = BoundarySymbol::rational(zplus1());
        assert!(matches!(SymbolPair::new(a.clone(), a.clone()), Err(Error::DegeneratePair(_))));
        assert!(matches!(
            SymbolPair::new(BoundarySymbol::constant(c(0.0, 0.0)), a.clone()),
            Err(Error::DegeneratePair(_))
        ));
        assert!(SymbolPair::new(a, BoundarySymbol::one()).is_ok());
    }

    #[test]
    fn polynomial_pair_of_zbar_power_over_z_plus_one() {
        let n = 3;
        let pair = SymbolPair::new(BoundarySymbol::z_power(-n), BoundarySymbol::rational(zplus1())).unwrap();
        let pp = to_polynomial_pair(&pair).unwrap();
        assert_eq!(pp.p1.degree(), 0);
        assert_eq!(pp.p2.degree(), n as usize + 1);
        assert_eq!(pp.p2.origin_multiplicity(), n as usize);
    }

    #[test]
    fn atoms_cancel_in_products() {
        let theta = SingularInnerAtom::new(c(-1.0, 0.0), 1.0).unwrap();
        let s = BoundarySymbol::atom(theta, 1).mul(&BoundarySymbol::atom(theta, -1));
        assert!(!s.has_atoms());
    }

    #[test]
    fn sums_merge_like_terms() {
        let f = BoundaryFn::from_terms([BoundarySymbol::z_power(1), BoundarySymbol::z_power(1).scale(c(-1.0, 0.0))])
            .unwrap();
        assert!(f.is_zero());
    }
}
