//! Polynomials kept as a leading constant times `(z - r)^k` factors, each
//! root tagged with the region of the plane it lies in.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::ComplexPoly;
use crate::C64;

/// Default modulus tolerance for deciding that a root lies on the circle.
pub const CLASSIFY_TOL: f64 = 1e-8;
/// Roots closer than this are treated as the same root when cancelling.
pub const COPRIME_TOL: f64 = 1e-8;
/// Roots closer than this are merged when forming products.
const MERGE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    /// open unit disc
    D,
    /// unit circle
    T,
    /// exterior of the closed disc
    E,
}

impl Region {
    pub fn classify(z: C64, tol: f64) -> Self {
        let r = z.norm();
        if (r - 1.0).abs() <= tol {
            Region::T
        } else if r < 1.0 {
            Region::D
        } else {
            Region::E
        }
    }

    /// Region of `1 / conj(z)`.
    pub fn reflected(self) -> Self {
        match self {
            Region::D => Region::E,
            Region::T => Region::T,
            Region::E => Region::D,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub z: C64,
    pub mult: usize,
    pub region: Region,
}

impl Root {
    pub fn new(z: C64, mult: usize) -> Self {
        Self::with_region(z, mult, Region::classify(z, CLASSIFY_TOL))
    }

    /// Root whose region is pinned by the caller; circle roots are projected
    /// onto the circle exactly.
    pub fn with_region(z: C64, mult: usize, region: Region) -> Self {
        let z = if region == Region::T && z.norm() > 0.0 { z / z.norm() } else { z };
        Self { z, mult, region }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactoredPoly {
    leading: C64,
    roots: Vec<Root>,
}

impl FactoredPoly {
    pub fn new(leading: C64, roots: Vec<Root>) -> Self {
        if leading == C64::new(0.0, 0.0) {
            return Self::zero();
        }
        let mut merged: Vec<Root> = Vec::with_capacity(roots.len());
        for r in roots.into_iter().filter(|r| r.mult > 0) {
            match merged.iter_mut().find(|m| (m.z - r.z).norm() <= MERGE_TOL) {
                Some(m) => m.mult += r.mult,
                None => merged.push(r),
            }
        }
        merged.sort_by(|a, b| {
            a.region.cmp(&b.region).then(a.z.norm().total_cmp(&b.z.norm())).then(a.z.arg().total_cmp(&b.z.arg()))
        });
        Self { leading, roots: merged }
    }

    pub fn zero() -> Self {
        Self { leading: C64::new(0.0, 0.0), roots: vec![] }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(c, vec![])
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `z^k`
    pub fn z_power(k: usize) -> Self {
        Self::new(C64::new(1.0, 0.0), vec![Root::new(C64::new(0.0, 0.0), k)])
    }

    /// `lead * prod (z - r)^k`, regions classified with the default tolerance.
    pub fn from_roots(lead: C64, roots: impl IntoIterator<Item = (C64, usize)>) -> Self {
        Self::new(lead, roots.into_iter().map(|(z, k)| Root::new(z, k)).collect())
    }

    pub fn leading(&self) -> C64 {
        self.leading
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn is_zero(&self) -> bool {
        self.leading == C64::new(0.0, 0.0)
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.mult).sum()
    }

    pub fn count(&self, region: Region) -> usize {
        self.roots.iter().filter(|r| r.region == region).map(|r| r.mult).sum()
    }

    /// Multiplicity of the root at the origin.
    pub fn origin_multiplicity(&self) -> usize {
        self.roots.iter().filter(|r| r.z.norm() <= MERGE_TOL).map(|r| r.mult).sum()
    }

    /// Monic factor collecting the roots of one region.
    pub fn region_part(&self, region: Region) -> Self {
        Self::new(C64::new(1.0, 0.0), self.roots.iter().filter(|r| r.region == region).copied().collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { leading: C64::new(1.0, 0.0), roots: self.roots.clone() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.leading * s, self.roots.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut roots = self.roots.clone();
        roots.extend_from_slice(&other.roots);
        Self::new(self.leading * other.leading, roots)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Same roots with one multiplicity unit of `z` removed (used when a
    /// root is cancelled).
    pub(crate) fn without_root(&self, idx: usize, k: usize) -> Self {
        let mut roots = self.roots.clone();
        roots[idx].mult -= k;
        Self::new(self.leading, roots)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.roots.iter().fold(self.leading, |acc, r| acc * (z - r.z).powu(r.mult as u32))
    }

    pub fn expand(&self) -> ComplexPoly {
        if self.is_zero() {
            return ComplexPoly::zero();
        }
        ComplexPoly::from_roots(self.leading, self.roots.iter().flat_map(|r| std::iter::repeat_n(r.z, r.mult)))
    }

    /// Returns `q` with `conj(p(z)) = q(z) * z^(-deg p)` on the circle.
    pub fn conj_reflect(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut lead = self.leading.conj();
        let mut roots = Vec::new();
        for r in &self.roots {
            if r.z.norm() <= MERGE_TOL {
                continue;
            }
            lead *= (-r.z.conj()).powu(r.mult as u32);
            let image = C64::new(1.0, 0.0) / r.z.conj();
            roots.push(Root::with_region(image, r.mult, r.region.reflected()));
        }
        Self::new(lead, roots)
    }

    /// Re-tags every root with the given tolerance, except circle roots that
    /// already sit on the circle to machine precision.
    pub fn reclassify(&self, tol: f64) -> Self {
        Self::new(
            self.leading,
            self.roots.iter().map(|r| Root::with_region(r.z, r.mult, Region::classify(r.z, tol))).collect(),
        )
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.leading)?;
        for r in &self.roots {
            if r.z.norm() == 0.0 {
                write!(f, "z")?;
            } else {
                write!(f, "(z-({}))", r.z)?;
            }
            if r.mult > 1 {
                write!(f, "^{}", r.mult)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn classification_by_modulus() {
        assert_eq!(Region::classify(c(0.5, 0.0), 1e-8), Region::D);
        assert_eq!(Region::classify(c(0.0, 1.0), 1e-8), Region::T);
        assert_eq!(Region::classify(c(3.0, 0.0), 1e-8), Region::E);
    }

    #[test]
    fn expansion_agrees_with_eval() {
        let p = FactoredPoly::from_roots(c(2.0, 1.0), [(c(0.5, 0.0), 1), (c(0.0, 1.0), 2), (c(-3.0, 0.0), 1)]);
        let e = p.expand();
        let z = c(0.3, -0.9);
        assert!((e.eval(z) - p.eval(z)).norm() < 1e-13);
        assert_eq!(p.count(Region::T), 2);
    }

    #[test]
    fn conj_reflect_matches_conjugate_on_circle() {
        let p = FactoredPoly::from_roots(
            c(1.5, -0.5),
            [(c(0.5, 0.2), 1), (c(0.0, 0.0), 2), (c(2.0, -1.0), 1), (c(0.0, 1.0), 1)],
        );
        let q = p.conj_reflect();
        for k in 0..16 {
            let z = C64::from_polar(1.0, 0.37 + k as f64 * 0.39);
            let lhs = p.eval(z).conj();
            let rhs = q.eval(z) * z.powi(-(p.degree() as i32));
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
        assert_eq!(q.count(Region::D), 1);
        assert_eq!(q.count(Region::E), 1);
        assert_eq!(q.count(Region::T), 1);
    }

    #[test]
    fn products_merge_equal_roots() {
        let p = FactoredPoly::from_roots(c(1.0, 0.0), [(c(-1.0, 0.0), 1)]);
        let sq = p.mul(&p);
        assert_eq!(sq.roots().len(), 1);
        assert_eq!(sq.roots()[0].mult, 2);
    }
}
