//! Independent numerical verifier on the unit circle: sampled symbols, FFT
//! Riesz projections, tall finite sections, SVD kernels and principal angles.

mod angles;
mod grid;
mod numeric;
mod structured;
mod verify;

pub use angles::{max_principal_angle, orthonormal_columns, principal_angles};
pub use grid::{apply_paired, grid, project, sample, OracleConfig, Sign};
pub use numeric::{numeric_kernel, taylor_coefficients, NumericKernel};
pub use structured::{project_plus, Projected};
pub use verify::{verify_basis, Verification};

use crate::error::{Error, Result};
use crate::symbols::{BoundaryFn, SymbolPair};

/// Samples closer than this to an atom point are left out of residual norms.
pub const ATOM_EXCLUSION: f64 = 1e-6;

/// `||P+((a/b) phi_plus)|| / ||phi_plus||` on the grid.
///
/// Atom-free products are projected by FFT. Products carrying singular inner
/// atoms are projected exactly (partial fractions against Taylor series of
/// the atoms) and then sampled, because the FFT route converges only like
/// `N^(-1/4)` for them.
pub fn toeplitz_residual(pair: &SymbolPair, phi_plus: &BoundaryFn, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    let g = phi_plus.mul_symbol(&pair.ratio()?)?;
    if g.has_atoms() || phi_plus.has_atoms() {
        let projected = project_plus(&g)?;
        return with_grid_retry(|half| {
            let pts = grid(cfg.grid_n, half);
            let avoid = g.atom_points();
            let mut num = 0.0;
            let mut den = 0.0;
            for z in pts.iter().filter(|z| avoid.iter().all(|t| (*t - **z).norm() > ATOM_EXCLUSION)) {
                num += projected.eval(*z)?.norm_sqr();
                den += phi_plus.eval(*z)?.norm_sqr();
            }
            Ok((num / den).sqrt())
        });
    }
    toeplitz_residual_fft(pair, phi_plus, cfg)
}

/// The plain FFT route, exposed so the aliasing floor for atoms can be measured.
pub fn toeplitz_residual_fft(pair: &SymbolPair, phi_plus: &BoundaryFn, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    let g = phi_plus.mul_symbol(&pair.ratio()?)?;
    let avoid = g.atom_points();
    with_grid_retry(|half| {
        let pts = grid(cfg.grid_n, half);
        let keep: Vec<bool> = pts.iter().map(|z| avoid.iter().all(|t| (*t - *z).norm() > ATOM_EXCLUSION)).collect();
        let gs: Vec<_> = pts
            .iter()
            .zip(&keep)
            .map(|(z, k)| if *k { g.eval(*z) } else { Ok(Default::default()) })
            .collect::<Result<_>>()?;
        let fs: Vec<_> = pts
            .iter()
            .zip(&keep)
            .map(|(z, k)| if *k { phi_plus.eval(*z) } else { Ok(Default::default()) })
            .collect::<Result<_>>()?;
        let p = project(&gs, Sign::Plus);
        let num: f64 = p.iter().zip(&keep).filter(|(_, k)| **k).map(|(v, _)| v.norm_sqr()).sum();
        let den: f64 = fs.iter().map(|v| v.norm_sqr()).sum();
        Ok((num / den).sqrt())
    })
}

/// Runs on the half-step grid and, if a sample hits a pole, once more on the
/// unshifted grid.
pub(crate) fn with_grid_retry<T>(mut f: impl FnMut(bool) -> Result<T>) -> Result<T> {
    match f(true) {
        Err(Error::PoleOnEvaluationPoint(_)) | Err(Error::PoleOnGrid(_)) => f(false).map_err(|e| match e {
            Error::PoleOnEvaluationPoint(z) => Error::PoleOnGrid(format!("sample {z} hits a pole")),
            other => other,
        }),
        other => other,
    }
}
