//! Dimension arithmetic, the direct-sum decomposition and near-invariance checks.

use nalgebra::{DMatrix, DVector};

use super::{kernel_plus, lift, symbol, KernelBasis, KernelElement, Side};
use crate::error::{Error, Result};
use crate::oracle::grid;
use crate::symbols::{BlaschkeProduct, BoundarySymbol, RationalFn, Region, SymbolPair};
use crate::C64;

/// Relative least-squares residual below which a function counts as a member of a span.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Grid points this close to a circle pole of the tested function are skipped.
const POLE_EXCLUSION: f64 = 1e-3;

/// `dim ker+(a theta, b)` from `d = dim ker+(a, b)` and `k = deg theta`.
pub fn dim_after_inner(d: usize, k: usize) -> usize {
    d.saturating_sub(k)
}

/// Relative distance of `f` from the span of `basis` on the circle, by least squares.
pub fn span_residual(basis: &KernelBasis, f: impl Fn(C64) -> Result<C64>) -> Result<f64> {
    span_residual_avoiding(basis, &[], f)
}

fn span_residual_avoiding(basis: &KernelBasis, avoid: &[C64], f: impl Fn(C64) -> Result<C64>) -> Result<f64> {
    let n = (8 * (basis.span_dim + 8)).next_power_of_two().max(64);
    let pts: Vec<C64> =
        grid(n, true).into_iter().filter(|z| avoid.iter().all(|t| (t - z).norm() > POLE_EXCLUSION)).collect();
    let y = DVector::from_iterator(pts.len(), pts.iter().map(|z| f(*z)).collect::<Result<Vec<_>>>()?);
    let ynorm = y.norm();
    if ynorm == 0.0 {
        return Ok(0.0);
    }
    if basis.span_dim == 0 {
        return Ok(1.0);
    }
    let elems = basis.elements();
    let a = DMatrix::from_fn(pts.len(), elems.len(), |r, c| elems[c].eval(pts[r]));
    let svd = a.clone().svd(true, true);
    let coef = svd.solve(&y, 1e-14 * svd.singular_values.max()).map_err(|e| Error::IllConditioned(e.to_string()))?;
    Ok((a * coef - y).norm() / ynorm)
}

/// `ker+(a, b) = z^k ker+(a z^k, b) + span{z^j psi_j : j < k}` with `psi_j(0) = 1`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub dim: usize,
    pub psis: Vec<KernelElement>,
    pub reduced: KernelBasis,
}

pub fn decompose(pair: &SymbolPair, k: usize) -> Result<Decomposition> {
    if k == 0 {
        return Err(Error::InvalidConfig("decomposition depth must be at least 1".into()));
    }
    let full = kernel_plus(pair)?;
    let d = full.span_dim;
    if d < k {
        return Err(Error::KernelTooSmall { dim: d, k });
    }
    let mut psis = Vec::with_capacity(k);
    for j in 0..k {
        let shifted = shift_a(pair, j)?;
        let basis = kernel_plus(&shifted)?;
        if basis.is_zero() {
            return Err(Error::KernelTooSmall { dim: d, k });
        }
        let f0 = basis.factor.eval(C64::new(0.0, 0.0));
        let psi = basis.factor.scale(C64::new(1.0, 0.0) / f0);
        psis.push(lift(&psi.into(), &shifted)?);
    }
    let reduced = match shift_a(pair, k) {
        Ok(p) => kernel_plus(&p)?,
        // a z^k = b: the reduced kernel is ker T(1) = {0}
        Err(Error::DegeneratePair(_)) => KernelBasis::zero(Side::Plus, vec![]),
        Err(e) => return Err(e),
    };
    if reduced.span_dim + k != d {
        return Err(Error::IllConditioned(format!(
            "reduced kernel has dimension {} but {d} - {k} was expected",
            reduced.span_dim
        )));
    }
    Ok(Decomposition { dim: d, psis, reduced })
}

fn shift_a(pair: &SymbolPair, j: usize) -> Result<SymbolPair> {
    SymbolPair::new(pair.a().mul(&BoundarySymbol::z_power(j as i32)), pair.b().clone())
}

/// Near `eta`-invariance of the span: every `f` in it with `eta f` in H2+
/// must have `eta f` in the span again.
pub fn near_invariance_check(basis: &KernelBasis, eta: &RationalFn) -> Result<bool> {
    if basis.side != Side::Plus {
        return Err(Error::InvalidConfig("near invariance is tested on ker+ bases".into()));
    }
    let d = basis.span_dim;
    if d == 0 {
        return Ok(true);
    }
    let h = eta.mul(&basis.factor);
    // p = sum c_j z^j must cancel every pole of h in the closed disc
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for pole in h.poles().iter().filter(|p| p.region != Region::E) {
        for i in 0..pole.mult {
            let row: Vec<C64> = (0..d)
                .map(|j| {
                    if j < i {
                        C64::new(0.0, 0.0)
                    } else {
                        let falling: f64 = ((j - i + 1)..=j).map(|x| x as f64).product();
                        pole.z.powu((j - i) as u32) * falling
                    }
                })
                .collect();
            let norm = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            rows.push(row.into_iter().map(|c| c / norm.max(f64::MIN_POSITIVE)).collect());
        }
    }
    let null = null_space(&rows, d);
    let circle_poles: Vec<C64> = h.poles().iter().filter(|p| p.region == Region::T).map(|p| p.z).collect();
    for c in null.column_iter() {
        let f = |z: C64| Ok(h.eval(z) * (0..d).map(|j| c[j] * z.powu(j as u32)).sum::<C64>());
        if span_residual_avoiding(basis, &circle_poles, f)? > MEMBERSHIP_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orthonormal basis (columns) of `{c : rows c = 0}` in `C^d`.
fn null_space(rows: &[Vec<C64>], d: usize) -> DMatrix<C64> {
    if rows.is_empty() {
        return DMatrix::identity(d, d);
    }
    // pad to at least d rows so the SVD returns the full right factor
    let r = rows.len().max(d);
    let m = DMatrix::from_fn(r, d, |i, j| rows.get(i).map_or(C64::new(0.0, 0.0), |row| row[j]));
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.max();
    let idx: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= 1e-10 * smax.max(1.0)).collect();
    DMatrix::from_fn(d, idx.len(), |row, col| v_t[(idx[col], row)].conj())
}

/// True when some basis element is not divisible by `b`, i.e. the span is
/// not contained in `b H2+`.
pub fn escapes_blaschke(basis: &KernelBasis, b: &BlaschkeProduct) -> Result<bool> {
    if b.degree() == 0 {
        return Ok(false);
    }
    for e in basis.elements() {
        let scale = grid(64, true).iter().map(|z| e.eval(*z).norm()).fold(0.0, f64::max);
        for (a, k) in b.zeros() {
            let s = symbol(&e).series_at(*a, *k)?;
            if s.iter().any(|c| c.norm() > 1e-10 * scale) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
