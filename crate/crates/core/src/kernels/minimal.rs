//! Minimal Toeplitz kernels and maximal functions.

use super::{kernel_plus, span_residual, symbol, KernelBasis, Side, TraceEntry, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::factor::inner_outer;
use crate::symbols::{BoundarySymbol, RationalFn, Region, SymbolPair};
use crate::C64;

/// Symbol `conj(z) conj(I) conj(O) / O` of the smallest Toeplitz kernel
/// containing `phi_plus = I O`.
pub fn minimal_kernel_of_function(phi_plus: &RationalFn) -> Result<BoundarySymbol> {
    let (inner, outer) = inner_outer(phi_plus)?;
    let unimodular = outer.conj_on_circle().div(&outer)?;
    let sym = inner.to_rational().conj_on_circle().mul(&unimodular).mul(&RationalFn::z_power(-1));
    Ok(BoundarySymbol::rational(sym))
}

/// `F (1 + z + ... + z^(d-1))` for `ker+ = F P_(d-1)`; an outer function whose
/// minimal kernel is the whole span when the symbol is bounded.
pub fn maximal_function(basis: &KernelBasis) -> Result<RationalFn> {
    if basis.side != Side::Plus || basis.is_zero() {
        return Err(Error::EmptyKernel);
    }
    if basis.factor.num().count(Region::T) > 0 {
        return Err(Error::UnboundedSymbol(
            "boundary zeros in the basis factor come from circle poles of the symbol".into(),
        ));
    }
    let geometric = RationalFn::from_poly(crate::symbols::FactoredPoly::from_roots(
        C64::new(1.0, 0.0),
        (1..basis.span_dim)
            .map(|j| (C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / basis.span_dim as f64), 1)),
    ));
    Ok(basis.factor.mul(&geometric))
}

#[derive(Clone, Debug)]
pub struct MinimalKernel {
    /// `a conj(b) / b_o`
    pub symbol: BoundarySymbol,
    /// Exact basis when the symbol is atom-free.
    pub basis: Option<KernelBasis>,
    /// `b phi_m` for a maximal function `phi_m` of `ker T_a`, when available.
    pub maximal: Option<RationalFn>,
    pub trace: Vec<TraceEntry>,
}

/// Smallest Toeplitz kernel containing `b ker T_a`.
pub fn minimal_kernel_containing(b: &RationalFn, a: &BoundarySymbol) -> Result<MinimalKernel> {
    if b.is_zero() || !b.is_analytic_on_closed_disc() {
        return Err(Error::NotInHardySpace(format!("b = {b} must be analytic on the closed disc")));
    }
    let (_, b_outer) = inner_outer(b)?;
    let sym = a.mul(&symbol(&b.conj_on_circle())).mul(&symbol(&b_outer.inv()?));
    let mut trace = vec![TraceEntry::new(
        format!("symbol a conj(b) / b_o with outer factor b_o = {b_outer}"),
        "minimal Toeplitz kernel containing b ker T(a) is ker T(a conj(b) / b_o)",
    )];

    let source = if a.has_atoms() {
        trace.push(TraceEntry::new(
            "singular inner factor present: the symbol simplifies by rational cancellation only",
            "singular inner worked example",
        ));
        None
    } else {
        let ka = kernel_plus(&SymbolPair::new(a.clone(), BoundarySymbol::one())?)?;
        if ka.is_zero() {
            return Err(Error::EmptyKernel);
        }
        if !ka.factor.mul(b).is_analytic_on_closed_disc() {
            return Err(Error::NotContained("b ker T(a) leaves H2+".into()));
        }
        Some(ka)
    };

    let (basis, maximal) = match (&source, sym.as_rational()) {
        (Some(ka), Some(_)) => {
            let basis = kernel_plus(&SymbolPair::new(sym.clone(), BoundarySymbol::one())?)?;
            for e in ka.elements() {
                let prod = e.mul(b);
                let r = span_residual(&basis, |z| Ok(prod.eval(z)))?;
                if r > MEMBERSHIP_TOL {
                    return Err(Error::NotContained(format!("b * {e} is off the span by {r:e}")));
                }
            }
            trace.push(TraceEntry::new(
                format!("containment b ker T(a) in a kernel of dimension {} verified", basis.span_dim),
                "minimal Toeplitz kernel containing b ker T(a)",
            ));
            let maximal = match maximal_function(ka) {
                Ok(phi) => {
                    trace.push(TraceEntry::new(
                        "b times a maximal function of ker T(a) is maximal for the result",
                        "maximal function transfer",
                    ));
                    Some(phi.mul(b))
                }
                Err(Error::UnboundedSymbol(_)) => None,
                Err(e) => return Err(e),
            };
            (Some(basis), maximal)
        }
        _ => (None, None),
    };
    Ok(MinimalKernel { symbol: sym, basis, maximal, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{BlaschkeProduct, FactoredPoly, SingularInnerAtom};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn lin(r: C64) -> RationalFn {
        RationalFn::from_poly(FactoredPoly::from_roots(c(1.0, 0.0), [(r, 1)]))
    }

    #[test]
    fn minimal_kernels_of_monomials() {
        let s = minimal_kernel_of_function(&RationalFn::one()).unwrap();
        assert_eq!(s.token(), "z̄");
        let s = minimal_kernel_of_function(&RationalFn::z_power(1)).unwrap();
        assert_eq!(s.token(), "z̄^2");
    }

    #[test]
    fn worked_example_with_blaschke_factor() {
        // f = (z + 1)(B - B(0)) / z has minimal kernel K(z B); the outer factor
        // (z + 1)(1 - conj(B(0)) B) alone only reaches dimension 2
        let b = BlaschkeProduct::new(c(1.0, 0.0), vec![(c(0.5, 0.0), 1), (c(0.0, -0.3), 1)]).unwrap();
        let br = b.to_rational();
        let b0 = b.eval(c(0.0, 0.0));
        let f = lin(c(-1.0, 0.0)).mul(&br.sub(&RationalFn::constant(b0)).unwrap()).mul(&RationalFn::z_power(-1));
        let s = minimal_kernel_of_function(&f).unwrap();
        let k = kernel_plus(&SymbolPair::new(s, BoundarySymbol::one()).unwrap()).unwrap();
        assert_eq!(k.span_dim, 3);
        assert!(k.contains(&f).unwrap());
        let zb = BoundarySymbol::rational(br.mul(&RationalFn::z_power(1))).conj_on_circle();
        let kzb = kernel_plus(&SymbolPair::new(zb, BoundarySymbol::one()).unwrap()).unwrap();
        assert!(k.factor.ratio_constant(&kzb.factor).is_some());

        let outer = lin(c(-1.0, 0.0)).mul(&RationalFn::one().sub(&br.scale(b0.conj())).unwrap());
        let s = minimal_kernel_of_function(&outer).unwrap();
        let k = kernel_plus(&SymbolPair::new(s, BoundarySymbol::one()).unwrap()).unwrap();
        assert_eq!(k.span_dim, 2);
    }

    #[test]
    fn golden_singular_atom() {
        let theta = SingularInnerAtom::new(c(-1.0, 0.0), 1.0).unwrap();
        let a = BoundarySymbol::atom(theta, -1);
        let mk = minimal_kernel_containing(&lin(c(-1.0, 0.0)), &a).unwrap();
        let expected = BoundarySymbol::z_power(-1).mul(&BoundarySymbol::atom(theta, -1));
        assert_eq!(mk.symbol.token(), expected.token());
        assert_eq!(mk.symbol.token(), "z̄·conj(atom(-1,1))");
    }

    #[test]
    fn b_equal_one_keeps_symbol() {
        let a = BoundarySymbol::z_power(-3);
        let mk = minimal_kernel_containing(&RationalFn::one(), &a).unwrap();
        assert_eq!(mk.symbol.token(), a.token());
        assert_eq!(mk.basis.unwrap().span_dim, 3);
    }

    #[test]
    fn exterior_outer_multiplier() {
        let a = BoundarySymbol::z_power(-3);
        let b = lin(c(0.5, 0.0));
        let mk = minimal_kernel_containing(&b, &a).unwrap();
        let basis = mk.basis.unwrap();
        let phi = mk.maximal.unwrap();
        let k =
            kernel_plus(&SymbolPair::new(minimal_kernel_of_function(&phi).unwrap(), BoundarySymbol::one()).unwrap())
                .unwrap();
        assert_eq!(k.span_dim, basis.span_dim);
    }

    #[test]
    fn rejects_non_hardy_b() {
        let b = lin(c(0.5, 0.0)).inv().unwrap();
        assert!(matches!(minimal_kernel_containing(&b, &BoundarySymbol::z_power(-1)), Err(Error::NotInHardySpace(_))));
        assert!(matches!(
            minimal_kernel_containing(&RationalFn::one(), &BoundarySymbol::z_power(1)),
            Err(Error::EmptyKernel)
        ));
    }
}
