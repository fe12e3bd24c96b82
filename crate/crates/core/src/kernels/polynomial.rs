//! Projected kernels of polynomial pairs `(p1, p2)`.

use super::{KernelBasis, Side, TraceEntry};
use crate::error::{Error, Result};
use crate::factor::split_regions;
use crate::symbols::{FactoredPoly, RationalFn, COPRIME_TOL};

/// Region counts behind the dimension law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCounts {
    pub n2: usize,
    pub m: usize,
    pub dim: usize,
}

pub fn pair_counts(p1: &FactoredPoly, p2: &FactoredPoly) -> PairCounts {
    let s1 = split_regions(p1);
    let s2 = split_regions(p2);
    let n2 = p2.degree();
    let m = s2.n_t + s1.n_t + s2.n_e + s1.n_d;
    PairCounts { n2, m, dim: n2.saturating_sub(m) }
}

fn check_coprime(p1: &FactoredPoly, p2: &FactoredPoly) -> Result<()> {
    if p1.is_zero() || p2.is_zero() {
        return Err(Error::DegeneratePair("zero polynomial in pair".into()));
    }
    for r in p1.roots() {
        if p2.roots().iter().any(|s| (s.z - r.z).norm() <= COPRIME_TOL) {
            return Err(Error::NotCoprime(r.z));
        }
    }
    Ok(())
}

/// `ker+ (p1, p2) = F P_{d-1}` with `d = n2 - m` and `F = p2T p2E / p1E`.
pub fn paired_kernel_plus(p1: &FactoredPoly, p2: &FactoredPoly) -> Result<KernelBasis> {
    check_coprime(p1, p2)?;
    let c = pair_counts(p1, p2);
    let s1 = split_regions(p1);
    let s2 = split_regions(p2);
    let mut trace = vec![TraceEntry::new(
        format!("polynomial pair dimension law: n2 = {}, m = {}, dim = {}", c.n2, c.m, c.dim),
        "polynomial pair kernel, dimension n2 - m = n2D - n1D - n1T",
    )];
    if c.dim == 0 {
        return Ok(KernelBasis::zero(Side::Plus, trace));
    }
    let factor = RationalFn::new(s2.t.mul(&s2.e), s1.e);
    trace.push(TraceEntry::new(
        "basis factor p2T p2E / p1E (the quotient q / p1 must lie in H2+)",
        "polynomial pair kernel, basis from the proof",
    ));
    Ok(KernelBasis { factor, span_dim: c.dim, side: Side::Plus, trace })
}

/// The displayed reading `p1T p2T p1D p2E P_{d-1}`, kept for comparison only.
pub fn printed_kernel_plus(p1: &FactoredPoly, p2: &FactoredPoly) -> Result<KernelBasis> {
    check_coprime(p1, p2)?;
    let c = pair_counts(p1, p2);
    let s1 = split_regions(p1);
    let s2 = split_regions(p2);
    let mut trace = vec![TraceEntry::new(
        format!("polynomial pair dimension law: n2 = {}, m = {}, dim = {}", c.n2, c.m, c.dim),
        "polynomial pair kernel, dimension n2 - m",
    )];
    if c.dim == 0 {
        return Ok(KernelBasis::zero(Side::Plus, trace));
    }
    trace.push(TraceEntry::new(
        "basis factor p1T p2T p1D p2E without division by p1",
        "polynomial pair kernel, basis as displayed",
    ));
    let factor = RationalFn::from_poly(s1.t.mul(&s2.t).mul(&s1.d).mul(&s2.e));
    Ok(KernelBasis { factor, span_dim: c.dim, side: Side::Plus, trace })
}
