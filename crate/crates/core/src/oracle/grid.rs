use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbols::SymbolPair;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// grid size, a power of two
    pub grid_n: usize,
    /// highest trial degree
    pub cutoff_m: usize,
    /// extra output frequencies of the tall section
    pub buffer_k: usize,
    /// relative singular value threshold
    pub rank_tol: f64,
    pub residual_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { grid_n: 4096, cutoff_m: 128, buffer_k: 64, rank_tol: 1e-7, residual_tol: 1e-6 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.grid_n.is_power_of_two() {
            return Err(Error::InvalidConfig(format!("grid size {} is not a power of two", self.grid_n)));
        }
        if self.grid_n < 4 * (self.cutoff_m + self.buffer_k) {
            return Err(Error::InvalidConfig(format!(
                "grid size {} is below 4 (cutoff + buffer) = {}",
                self.grid_n,
                4 * (self.cutoff_m + self.buffer_k)
            )));
        }
        for (name, v) in [("rank_tol", self.rank_tol), ("residual_tol", self.residual_tol)] {
            if !(v > 0.0 && v < 1e-2) {
                return Err(Error::InvalidConfig(format!("{name} = {v} outside (0, 1e-2)")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `n` equispaced points on the circle; `half` shifts them by half a step,
/// which keeps all roots of unity off the grid.
pub fn grid(n: usize, half: bool) -> Vec<C64> {
    let shift = if half { 1.0 } else { 0.0 };
    (0..n).map(|j| C64::from_polar(1.0, PI * (2.0 * j as f64 + shift) / n as f64)).collect()
}

pub fn sample(f: impl Fn(C64) -> Result<C64>, pts: &[C64]) -> Result<Vec<C64>> {
    pts.iter().map(|z| f(*z)).collect()
}

/// Riesz projection of grid samples: `Plus` keeps frequencies `0..n/2`,
/// `Minus` keeps the rest, so the two always sum to the identity.
pub fn project(samples: &[C64], sign: Sign) -> Vec<C64> {
    let n = samples.len();
    let mut planner = FftPlanner::new();
    let mut buf = samples.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    let zero = C64::new(0.0, 0.0);
    for (k, v) in buf.iter_mut().enumerate() {
        let nonneg = k < n / 2;
        if nonneg != (sign == Sign::Plus) {
            *v = zero;
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|v| v * scale).collect()
}

/// `a P+ f + b P- f` on the grid the samples were taken on.
pub fn apply_paired(pair: &SymbolPair, f: &[C64], half: bool) -> Result<Vec<C64>> {
    let pts = grid(f.len(), half);
    let plus = project(f, Sign::Plus);
    let minus = project(f, Sign::Minus);
    pts.iter()
        .zip(plus.iter().zip(&minus))
        .map(|(z, (p, m))| {
            let a = pair.a().eval(*z).map_err(|_| Error::PoleOnGrid(format!("a at {z}")))?;
            let b = pair.b().eval(*z).map_err(|_| Error::PoleOnGrid(format!("b at {z}")))?;
            Ok(a * p + b * m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::BoundarySymbol;

    #[test]
    fn monomials_project_cleanly() {
        let pts = grid(64, true);
        for n in [-3i32, -1, 0, 2, 5] {
            let s: Vec<C64> = pts.iter().map(|z| z.powi(n)).collect();
            let p = project(&s, Sign::Plus);
            let err: f64 = if n >= 0 {
                p.iter().zip(&s).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
            } else {
                p.iter().map(|a| a.norm()).fold(0.0, f64::max)
            };
            assert!(err < 1e-13, "n={n} err={err}");
        }
    }

    #[test]
    fn projections_partition_identity() {
        let pts = grid(128, true);
        let s: Vec<C64> =
            pts.iter().enumerate().map(|(j, z)| z * (j as f64).sin() + z.conj() * (j as f64 * 0.3).cos()).collect();
        let p = project(&s, Sign::Plus);
        let m = project(&s, Sign::Minus);
        for i in 0..s.len() {
            assert!((p[i] + m[i] - s[i]).norm() < 1e-12);
        }
        let pp = project(&p, Sign::Plus);
        let pm = project(&p, Sign::Minus);
        for i in 0..s.len() {
            assert!((pp[i] - p[i]).norm() < 1e-12);
            assert!(pm[i].norm() < 1e-12);
        }
    }

    #[test]
    fn identity_pair_applies_identity() {
        let pair = SymbolPair::new(BoundarySymbol::one(), BoundarySymbol::one());
        assert!(pair.is_err());
        let pair = SymbolPair::new(BoundarySymbol::one(), BoundarySymbol::constant(C64::new(2.0, 0.0))).unwrap();
        let pts = grid(64, true);
        let f: Vec<C64> = pts.iter().map(|z| z + z.conj()).collect();
        let out = apply_paired(&pair, &f, true).unwrap();
        for (o, z) in out.iter().zip(&pts) {
            assert!((o - (z + z.conj() * 2.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        assert!(OracleConfig { grid_n: 1000, ..Default::default() }.validate().is_err());
        assert!(OracleConfig { grid_n: 512, ..Default::default() }.validate().is_err());
        assert!(OracleConfig { rank_tol: 0.5, ..Default::default() }.validate().is_err());
    }
}
