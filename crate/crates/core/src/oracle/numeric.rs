use nalgebra::DMatrix;
use rustfft::FftPlanner;

use super::grid::{grid, OracleConfig};
use super::with_grid_retry;
use crate::error::{Error, Result};
use crate::symbols::{RationalFn, Region, SymbolPair};
use crate::C64;

/// Numerical kernel of `f -> P+((a/b) f)` on the trial space `F0 z^j`, `j <= M`.
#[derive(Clone, Debug)]
pub struct NumericKernel {
    pub dim: usize,
    /// Orthonormal kernel vectors (columns) in trial coordinates.
    pub basis: DMatrix<C64>,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Monic polynomial clearing the circle poles of `a/b`.
    pub trial_factor: RationalFn,
}

impl NumericKernel {
    /// Coordinates of `factor * z^j`, `j < dim`, in this kernel's trial basis.
    pub fn coordinates(&self, factor: &RationalFn, dim: usize) -> Result<DMatrix<C64>> {
        span_coordinates(factor, &self.trial_factor, dim, self.basis.nrows())
    }
}

/// Builds the tall section from the symbol alone: the trial factor is the
/// product of `(z - t)` over circle poles `t` of `a/b`.
pub fn numeric_kernel(pair: &SymbolPair, cfg: &OracleConfig) -> Result<NumericKernel> {
    cfg.validate()?;
    let ratio = pair
        .ratio()?
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::UnsupportedSymbol("numeric kernels need an atom-free symbol".into()))?;
    let trial = RationalFn::from_poly(ratio.den().region_part(Region::T));
    let g = ratio.mul(&trial);
    let n = cfg.grid_n;
    let (m, k) = (cfg.cutoff_m, cfg.buffer_k);

    let coeffs = with_grid_retry(|half| {
        let pts = grid(n, half);
        let mut buf = pts
            .iter()
            .map(|z| g.try_eval(*z, 1e-9).map_err(|_| Error::PoleOnGrid(format!("a/b at {z}"))))
            .collect::<Result<Vec<C64>>>()?;
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let shift = if half { 1.0 } else { 0.0 };
        // g_hat(f) for f in -m..=m+k
        Ok((-(m as i64)..=(m + k) as i64)
            .map(|f| {
                let bin = f.rem_euclid(n as i64) as usize;
                let phase = C64::from_polar(1.0, -std::f64::consts::PI * shift * f as f64 / n as f64);
                buf[bin] * phase / n as f64
            })
            .collect::<Vec<C64>>())
    })?;

    let rows = m + k + 1;
    let cols = m + 1;
    let a = DMatrix::from_fn(rows, cols, |r, c| coeffs[(r as i64 - c as i64 + m as i64) as usize]);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::IllConditioned("SVD did not return V".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = sv.first().copied().unwrap_or(0.0);
    if !smax.is_finite() || smax == 0.0 {
        return Err(Error::IllConditioned(format!("largest singular value {smax}")));
    }
    let null: Vec<usize> = order.iter().copied().filter(|&i| svd.singular_values[i] < cfg.rank_tol * smax).collect();
    let basis = DMatrix::from_fn(cols, null.len(), |r, c| v_t[(null[c], r)].conj());
    Ok(NumericKernel { dim: null.len(), basis, singular_values: sv, trial_factor: trial })
}

/// Taylor coefficients at the origin.
pub fn taylor_coefficients(r: &RationalFn, len: usize) -> Result<Vec<C64>> {
    r.series_at(C64::new(0.0, 0.0), len)
}

/// Columns: Taylor coefficients of `(factor / trial) z^j` for `j < dim`.
pub fn span_coordinates(factor: &RationalFn, trial: &RationalFn, dim: usize, len: usize) -> Result<DMatrix<C64>> {
    let base = factor.div(trial)?;
    if !base.is_analytic_on_closed_disc() {
        return Err(Error::NotInHardySpace(format!("{base} is not in the trial space")));
    }
    let s = taylor_coefficients(&base, len)?;
    Ok(DMatrix::from_fn(len, dim, |r, c| if r >= c { s[r - c] } else { C64::new(0.0, 0.0) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::principal_angles;
    use crate::symbols::{BoundarySymbol, FactoredPoly};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zbar_cubed_has_three_dimensional_kernel() {
        let pair = SymbolPair::new(BoundarySymbol::z_power(-3), BoundarySymbol::one()).unwrap();
        let nk = numeric_kernel(&pair, &OracleConfig::default()).unwrap();
        assert_eq!(nk.dim, 3);
    }

    #[test]
    fn exterior_zero_gives_non_polynomial_kernel() {
        let a =
            BoundarySymbol::rational(RationalFn::from_poly(FactoredPoly::from_roots(c(1.0, 0.0), [(c(2.0, 0.0), 1)])));
        let pair = SymbolPair::new(a, BoundarySymbol::z_power(3)).unwrap();
        let nk = numeric_kernel(&pair, &OracleConfig::default()).unwrap();
        assert_eq!(nk.dim, 3);
        let factor = RationalFn::new(FactoredPoly::one(), FactoredPoly::from_roots(c(1.0, 0.0), [(c(2.0, 0.0), 1)]));
        let engine = nk.coordinates(&factor, 3).unwrap();
        let angles = principal_angles(&engine, &nk.basis).unwrap();
        assert!(angles.iter().all(|a| *a < 1e-8), "{angles:?}");
        let printed = nk.coordinates(&RationalFn::one(), 3).unwrap();
        let angles = principal_angles(&printed, &nk.basis).unwrap();
        assert!(angles.iter().any(|a| *a > 1e-2), "{angles:?}");
    }

    #[test]
    fn circle_pole_is_cleared_by_trial_factor() {
        // (z - 1) / z^2 has kernel {1}; its reciprocal direction z^2/(z - 1) has a circle pole
        let p = RationalFn::from_poly(FactoredPoly::from_roots(c(1.0, 0.0), [(c(1.0, 0.0), 1)]));
        let pair = SymbolPair::new(BoundarySymbol::rational(p.clone()), BoundarySymbol::z_power(2)).unwrap();
        assert_eq!(numeric_kernel(&pair, &OracleConfig::default()).unwrap().dim, 1);
        let pair = SymbolPair::new(BoundarySymbol::z_power(-2), BoundarySymbol::rational(p)).unwrap();
        let nk = numeric_kernel(&pair, &OracleConfig::default()).unwrap();
        assert_eq!(nk.dim, 2);
    }
}
