use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Orthonormal basis of the column space; rejects numerically dependent columns.
pub fn orthonormal_columns(a: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    if a.ncols() == 0 {
        return Ok(a.clone());
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols())).map(|i| r[(i, i)].norm()).collect();
    let max = diag.iter().copied().fold(0.0, f64::max);
    if a.ncols() > a.nrows() || diag.iter().any(|d| *d <= 1e-12 * max) || max == 0.0 {
        return Err(Error::RankDeficientInput);
    }
    Ok(qr.q())
}

/// Largest principal angle; `pi/2` when the dimensions differ.
pub fn max_principal_angle(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<f64> {
    if a.ncols() != b.ncols() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    if a.ncols() == 0 {
        return Ok(0.0);
    }
    Ok(principal_angles(a, b)?.into_iter().fold(0.0, f64::max))
}

/// Principal angles in `[0, pi/2]`, ascending. Small angles come from sines
/// (SVD of the part of `B` orthogonal to `A`), large ones from cosines.
pub fn principal_angles(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<Vec<f64>> {
    if a.nrows() != b.nrows() {
        return Err(Error::InvalidConfig(format!("subspaces live in dimensions {} and {}", a.nrows(), b.nrows())));
    }
    let (a, b) = if a.ncols() >= b.ncols() { (a, b) } else { (b, a) };
    let p = b.ncols();
    if p == 0 {
        return Ok(vec![]);
    }
    let qa = orthonormal_columns(a)?;
    let qb = orthonormal_columns(b)?;
    let cross = qa.adjoint() * &qb;
    let mut cosines: Vec<f64> = cross.singular_values().iter().map(|s| s.min(1.0)).collect();
    cosines.sort_by(|x, y| y.total_cmp(x));
    let residual = &qb - &qa * &cross;
    let mut sines: Vec<f64> = residual.singular_values().iter().map(|s| s.min(1.0)).collect();
    sines.sort_by(|x, y| x.total_cmp(y));
    Ok((0..p)
        .map(|i| {
            let c = cosines[i];
            if c * c >= 0.5 {
                sines[i].asin()
            } else {
                c.acos()
            }
        })
        .collect())
}
