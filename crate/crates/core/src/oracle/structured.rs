//! Exact Riesz projection `P+` of sums `r * I` and `r * conj(I)` with `r`
//! rational and `I` a product of singular inner atoms.

use crate::error::{Error, Result};
use crate::symbols::{BoundaryFn, BoundarySymbol, ComplexPoly, PolePart, RationalFn, Region};
use crate::C64;

/// `P+ g` as kept terms plus a polynomial plus principal parts.
#[derive(Clone, Debug, Default)]
pub struct Projected {
    pub kept: Vec<BoundarySymbol>,
    pub poly: ComplexPoly,
    pub parts: Vec<PolePart>,
}

impl Projected {
    pub fn eval(&self, z: C64) -> Result<C64> {
        let mut acc = self.poly.eval(z) + self.parts.iter().map(|p| p.eval(z)).sum::<C64>();
        for t in &self.kept {
            acc += t.eval(z)?;
        }
        Ok(acc)
    }
}

pub fn project_plus(g: &BoundaryFn) -> Result<Projected> {
    let mut out = Projected::default();
    for term in g.terms() {
        let r = term.rational_part();
        if r.pole_count(Region::T) > 0 {
            return Err(Error::PoleOnGrid(format!("{r} has a pole on the circle")));
        }
        let signs: Vec<i32> = term.atoms().iter().map(|f| f.exponent.signum()).collect();
        if signs.is_empty() {
            let (plus, _) = r.partial_fractions().split()?;
            out.poly = &out.poly + &plus.poly;
            out.parts.extend(plus.parts);
        } else if signs.iter().all(|s| *s > 0) {
            // r I minus its principal parts inside the disc
            out.kept.push(term.clone());
            for part in principal_parts(term, Region::D)? {
                out.parts.push(PolePart { coeffs: part.coeffs.iter().map(|c| -c).collect(), ..part });
            }
        } else if signs.iter().all(|s| *s < 0) {
            out.parts.extend(principal_parts(term, Region::E)?);
            let q = r.partial_fractions().poly;
            if !q.is_zero() {
                out.poly = &out.poly + &nonnegative_part(&q, term)?;
            }
        } else {
            return Err(Error::UnsupportedSymbol("projection of a term mixing inner and conjugate-inner atoms".into()));
        }
    }
    Ok(out)
}

/// Principal parts of `term` at the poles of its rational part lying in `region`.
fn principal_parts(term: &BoundarySymbol, region: Region) -> Result<Vec<PolePart>> {
    let r = term.rational_part();
    let mut parts = Vec::new();
    for (idx, root) in r.poles().iter().enumerate() {
        if root.region != region {
            continue;
        }
        let m = root.mult;
        let rest = RationalFn::new(r.num().clone(), r.den().without_root(idx, m));
        let s = BoundarySymbol::new(rest, term.atoms().to_vec()).series_at(root.z, m)?;
        let coeffs = (0..m).map(|k| s[m - 1 - k]).collect();
        parts.push(PolePart { pole: root.z, region, coeffs });
    }
    Ok(parts)
}

/// Nonnegative frequencies of `q * conj(I)` for a polynomial `q`, using
/// `conj(I) = sum conj(i_n) z^(-n)` on the circle.
fn nonnegative_part(q: &ComplexPoly, term: &BoundarySymbol) -> Result<ComplexPoly> {
    let inner = BoundarySymbol::new(RationalFn::one(), term.atoms().to_vec()).conj_on_circle();
    let deg = q.degree();
    let i = inner.series_at(C64::new(0.0, 0.0), deg + 1)?;
    let qc = q.coeffs();
    let coeffs = (0..=deg).map(|m| (m..=deg).map(|j| qc[j] * i[j - m].conj()).sum()).collect();
    Ok(ComplexPoly::new(coeffs))
}
