//! The exact kernel engine: projected paired kernels, lifts between the
//! paired kernel and its projections, minimal kernels and near invariance.

mod minimal;
mod polynomial;
mod routes;
mod structure;

pub use minimal::{maximal_function, minimal_kernel_containing, minimal_kernel_of_function, MinimalKernel};
pub use polynomial::{pair_counts, paired_kernel_plus, printed_kernel_plus, PairCounts};
pub use routes::{KernelRoute, Normalize, Printed, Rewrite, RouteRegistry};
pub use structure::{
    decompose, dim_after_inner, escapes_blaschke, near_invariance_check, span_residual, Decomposition, MEMBERSHIP_TOL,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{grid, project_plus, ATOM_EXCLUSION};
use crate::symbols::{BoundaryFn, BoundarySymbol, RationalFn, SymbolPair};
use crate::C64;

/// Residual above which a function is not accepted as a kernel element.
pub const LIFT_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub rule: String,
    pub paper_ref: String,
}

impl TraceEntry {
    pub fn new(rule: impl Into<String>, reference: impl Into<String>) -> Self {
        Self { rule: rule.into(), paper_ref: reference.into() }
    }
}

/// Which projection of the paired kernel a basis describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// elements `F z^j`
    Plus,
    /// elements `F z^-j`
    Minus,
}

/// `F * span{z^(+-j) : j < span_dim}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub factor: RationalFn,
    pub span_dim: usize,
    pub side: Side,
    pub trace: Vec<TraceEntry>,
}

impl KernelBasis {
    pub fn zero(side: Side, trace: Vec<TraceEntry>) -> Self {
        Self { factor: RationalFn::zero(), span_dim: 0, side, trace }
    }

    pub fn is_zero(&self) -> bool {
        self.span_dim == 0
    }

    pub fn element(&self, j: usize) -> RationalFn {
        let k = j as i32;
        self.factor.mul(&RationalFn::z_power(if self.side == Side::Plus { k } else { -k }))
    }

    pub fn elements(&self) -> Vec<RationalFn> {
        (0..self.span_dim).map(|j| self.element(j)).collect()
    }

    /// Relative least-squares distance of `f` from the span on the circle.
    pub fn residual_of(&self, f: &BoundaryFn) -> Result<f64> {
        span_residual(self, |z| f.eval(z))
    }

    pub fn contains(&self, f: &RationalFn) -> Result<bool> {
        Ok(self.residual_of(&f.clone().into())? <= MEMBERSHIP_TOL)
    }

    /// Same span, new trace entries appended.
    pub fn with_trace(mut self, more: impl IntoIterator<Item = TraceEntry>) -> Self {
        self.trace.extend(more);
        self
    }
}

/// `phi = phi_plus + phi_minus` with `a phi_plus + b phi_minus = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelElement {
    pub plus: BoundaryFn,
    pub minus: BoundaryFn,
    pub pair: SymbolPair,
}

impl KernelElement {
    /// `max |a phi_plus + b phi_minus|` relative to `max(|a phi_plus|, |b phi_minus|)` on `n` points.
    pub fn residual(&self, n: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        let avoid = [self.plus.atom_points(), self.minus.atom_points()].concat();
        for z in grid(n, true) {
            if avoid.iter().any(|t| (t - z).norm() <= ATOM_EXCLUSION) {
                continue;
            }
            let ap = self.pair.a().eval(z)? * self.plus.eval(z)?;
            let bm = self.pair.b().eval(z)? * self.minus.eval(z)?;
            worst = worst.max((ap + bm).norm());
            scale = scale.max(ap.norm()).max(bm.norm());
        }
        Ok(if scale == 0.0 { 0.0 } else { worst / scale })
    }

    /// Samples of `phi` on the half-step grid.
    pub fn samples(&self, n: usize) -> Result<Vec<C64>> {
        grid(n, true).into_iter().map(|z| Ok(self.plus.eval(z)? + self.minus.eval(z)?)).collect()
    }
}

/// `ker+` through the normalization route, cross-checked against the rewriting route.
pub fn kernel_plus(pair: &SymbolPair) -> Result<KernelBasis> {
    kernel_plus_via(pair, &RouteRegistry::default(), "normalize")
}

/// `ker+` through a named route; the default routes are cross-checked against each other.
pub fn kernel_plus_via(pair: &SymbolPair, registry: &RouteRegistry, route: &str) -> Result<KernelBasis> {
    if pair.has_atoms() {
        return Err(Error::UnsupportedSymbol("exact kernels need atom-free symbols".into()));
    }
    let primary = registry.get(route)?.kernel_plus(pair)?;
    let check = if route == "rewrite" { "normalize" } else { "rewrite" };
    if route == "printed" {
        return Ok(primary);
    }
    let other = registry.get(check)?.kernel_plus(pair)?;
    if other.span_dim != primary.span_dim {
        return Err(Error::RouteMismatch(format!(
            "{route} gives dimension {}, {check} gives {}",
            primary.span_dim, other.span_dim
        )));
    }
    if primary.span_dim > 0 && primary.factor.ratio_constant(&other.factor).is_none() {
        return Err(Error::RouteMismatch(format!(
            "{route} factor {} is not a multiple of {check} factor {}",
            primary.factor, other.factor
        )));
    }
    let mut trace = primary.trace.clone();
    trace.extend(other.trace.iter().map(|t| TraceEntry::new(format!("[{check}] {}", t.rule), t.paper_ref.clone())));
    trace.push(TraceEntry::new(
        format!("{route} and {check} routes agree as subspaces"),
        "rewriting rules and polynomial normalization give the same kernel",
    ));
    Ok(KernelBasis { trace, ..primary })
}

/// Lifts `phi_plus` in `ker+` to the paired kernel: `phi_minus = -(a/b) phi_plus`.
pub fn lift(phi_plus: &BoundaryFn, pair: &SymbolPair) -> Result<KernelElement> {
    let ratio = pair.ratio()?;
    let g = phi_plus.mul_symbol(&ratio)?;
    let projected = match project_plus(&g) {
        Ok(p) => p,
        Err(Error::PoleOnGrid(_)) => return Err(Error::NotInKernel(f64::INFINITY)),
        Err(e) => return Err(e),
    };
    let avoid = g.atom_points();
    let mut num = 0.0;
    let mut den = 0.0;
    for z in grid(512, true) {
        if avoid.iter().any(|t| (t - z).norm() <= ATOM_EXCLUSION) {
            continue;
        }
        num += projected.eval(z)?.norm_sqr();
        den += phi_plus.eval(z)?.norm_sqr();
    }
    let residual = if den == 0.0 { 0.0 } else { (num / den).sqrt() };
    if residual > LIFT_TOL {
        return Err(Error::NotInKernel(residual));
    }
    Ok(KernelElement { plus: phi_plus.clone(), minus: g.scale(C64::new(-1.0, 0.0)), pair: pair.clone() })
}

/// `ker-(a, b) = conj(z) * conj(ker+(conj b, conj a))`.
pub fn kernel_minus(pair: &SymbolPair) -> Result<KernelBasis> {
    let swapped = pair.swapped_conjugate()?;
    let plus = kernel_plus(&swapped)?;
    let mut trace = vec![TraceEntry::new(
        "ker- from ker+ of the pair (conj b, conj a)",
        "duality ker-(a, b) = conj(z) conj(ker+(conj b, conj a))",
    )];
    trace.extend(plus.trace.iter().cloned());
    if plus.is_zero() {
        return Ok(KernelBasis::zero(Side::Minus, trace));
    }
    let factor = plus.factor.conj_on_circle().mul(&RationalFn::z_power(-1));
    Ok(KernelBasis { factor, span_dim: plus.span_dim, side: Side::Minus, trace })
}

/// Lifts an element of `ker-`: `phi_plus = -(b/a) phi_minus`.
pub fn lift_minus(phi_minus: &RationalFn, pair: &SymbolPair) -> Result<KernelElement> {
    let minus: BoundaryFn = phi_minus.clone().into();
    let plus = minus.mul_symbol(&pair.b().div(pair.a())?)?.scale(C64::new(-1.0, 0.0));
    for t in plus.terms() {
        if !t.has_atoms() && !t.rational_part().is_analytic_on_closed_disc() {
            return Err(Error::NotInKernel(f64::INFINITY));
        }
    }
    Ok(KernelElement { plus, minus, pair: pair.clone() })
}

pub(crate) fn symbol(r: &RationalFn) -> BoundarySymbol {
    BoundarySymbol::rational(r.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::FactoredPoly;

    fn zbar3() -> SymbolPair {
        SymbolPair::new(BoundarySymbol::z_power(-3), BoundarySymbol::one()).unwrap()
    }

    #[test]
    fn model_space_pair() {
        let k = kernel_plus(&zbar3()).unwrap();
        assert_eq!(k.span_dim, 3);
        let e = lift(&RationalFn::one().into(), &zbar3()).unwrap();
        let z = C64::from_polar(1.0, 0.3);
        assert!((e.minus.eval(z).unwrap() + z.powi(-3)).norm() < 1e-14);
        assert!(e.residual(256).unwrap() < 1e-14);
    }

    #[test]
    fn non_members_are_refused() {
        let r = lift(&RationalFn::z_power(3).into(), &zbar3());
        assert!(matches!(r, Err(Error::NotInKernel(_))));
    }

    #[test]
    fn minus_kernel_of_zbar_cubed() {
        let k = kernel_minus(&zbar3()).unwrap();
        assert_eq!(k.span_dim, 3);
        for (j, e) in k.elements().iter().enumerate() {
            let el = lift_minus(e, &zbar3()).unwrap();
            assert!(el.residual(128).unwrap() < 1e-12, "element {j}");
        }
        assert!(k.factor.ratio_constant(&RationalFn::z_power(-1)).is_some());
    }

    #[test]
    fn degenerate_zero_kernel_pair() {
        let p = SymbolPair::new(
            BoundarySymbol::one(),
            symbol(&RationalFn::from_poly(FactoredPoly::from_roots(C64::new(1.0, 0.0), [(C64::new(2.0, 0.0), 1)]))),
        )
        .unwrap();
        assert_eq!(kernel_plus(&p).unwrap().span_dim, 0);
        assert_eq!(kernel_minus(&p).unwrap().span_dim, 0);
    }
}
