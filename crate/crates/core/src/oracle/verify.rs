use serde::Serialize;

use super::{max_principal_angle, numeric_kernel, toeplitz_residual, OracleConfig};
use crate::error::{Error, Result};
use crate::kernels::{KernelBasis, Side};
use crate::symbols::{BoundaryFn, SymbolPair};

/// Engine-versus-oracle comparison for one `ker+` basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    /// `None` when the symbol carries atoms and has no finite section.
    pub oracle_dim: Option<usize>,
    pub max_angle: Option<f64>,
    /// Largest relative residual over the basis elements.
    pub residual: f64,
    #[serde(skip)]
    pub agrees: bool,
}

/// Checks dimension, span and residual of `basis` against the oracle;
/// `tol` bounds both the principal angles and the residuals.
pub fn verify_basis(pair: &SymbolPair, basis: &KernelBasis, cfg: &OracleConfig, tol: f64) -> Result<Verification> {
    cfg.validate()?;
    let mut residual: f64 = 0.0;
    if basis.side == Side::Plus {
        for e in basis.elements() {
            residual = residual.max(toeplitz_residual(pair, &BoundaryFn::from(e), cfg)?);
        }
    }
    if pair.has_atoms() {
        return Ok(Verification { oracle_dim: None, max_angle: None, residual, agrees: residual <= tol });
    }
    let nk = numeric_kernel(pair, cfg)?;
    let d = basis.span_dim;
    let right = std::f64::consts::FRAC_PI_2;
    let max_angle = if nk.dim != d {
        right
    } else {
        match nk.coordinates(&basis.factor, d) {
            Ok(coords) => max_principal_angle(&coords, &nk.basis)?,
            // a span outside the trial space cannot be the kernel
            Err(Error::NotInHardySpace(_)) => right,
            Err(e) => return Err(e),
        }
    };
    Ok(Verification {
        oracle_dim: Some(nk.dim),
        max_angle: Some(max_angle),
        residual,
        agrees: nk.dim == d && max_angle <= tol && residual <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::kernel_plus;
    use crate::symbols::{BoundarySymbol, FactoredPoly, RationalFn};
    use crate::C64;

    #[test]
    fn engine_kernel_verifies_and_a_corrupted_one_does_not() {
        let a = BoundarySymbol::z_power(-3);
        let b = BoundarySymbol::rational(RationalFn::from_poly(FactoredPoly::from_roots(
            C64::new(1.0, 0.0),
            [(C64::new(2.0, 0.0), 1)],
        )));
        let pair = SymbolPair::new(a, b).unwrap();
        let k = kernel_plus(&pair).unwrap();
        let cfg = OracleConfig::default();
        let v = verify_basis(&pair, &k, &cfg, 1e-6).unwrap();
        assert!(v.agrees, "{v:?}");
        assert_eq!(v.oracle_dim, Some(3));

        let mut bad = k.clone();
        bad.factor = bad
            .factor
            .mul(&RationalFn::from_poly(FactoredPoly::from_roots(C64::new(1.0, 0.0), [(C64::new(0.3, 0.0), 1)])));
        assert!(!verify_basis(&pair, &bad, &cfg, 1e-6).unwrap().agrees);
        bad.factor = RationalFn::from_poly(FactoredPoly::from_roots(C64::new(1.0, 0.0), [(C64::new(1.0, 0.0), 1)]))
            .div(&RationalFn::from_poly(FactoredPoly::from_roots(C64::new(1.0, 0.0), [(C64::new(-1.0, 0.0), 1)])))
            .unwrap();
        assert!(!verify_basis(&pair, &bad, &cfg, 1e-6).unwrap().agrees);
    }
}
