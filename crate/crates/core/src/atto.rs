//! Finite-rank asymmetric truncated Toeplitz operators `A: K_theta -> K_alpha`,
//! `f -> P_alpha(phi f)`, with
//! `phi = conj(theta) R2+ - alpha R1-` and their closed-form kernels.

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::factor::taylor_at;
use crate::kernels::{kernel_plus, KernelBasis, Side, TraceEntry};
use crate::oracle::{grid, orthonormal_columns, OracleConfig};
use crate::symbols::expr::{schema_error, ComplexJson, SymbolExpr};
use crate::symbols::{
    BlaschkeProduct, BoundarySymbol, ComplexPoly, FactoredPoly, RationalFn, Region, Root, SymbolPair,
};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct AttoSpec {
    pub theta: BlaschkeProduct,
    pub alpha: BlaschkeProduct,
    /// poles outside the closed disc, vanishing at infinity
    pub r_plus: RationalFn,
    /// poles inside the disc, vanishing at infinity
    pub r_minus: RationalFn,
    /// `(t_j, n_j)` with `t_j` on the circle
    pub points: Vec<(C64, usize)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    t: ComplexJson,
    order: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttoSpecJson {
    theta: SymbolExpr,
    alpha: SymbolExpr,
    #[serde(default)]
    r_plus: Option<SymbolExpr>,
    #[serde(default)]
    r_minus: Option<SymbolExpr>,
    #[serde(default)]
    points: Vec<PointJson>,
}

impl AttoSpec {
    pub fn new(
        theta: BlaschkeProduct,
        alpha: BlaschkeProduct,
        r_plus: RationalFn,
        r_minus: RationalFn,
        points: Vec<(C64, usize)>,
    ) -> Result<Self> {
        let spec = Self { theta, alpha, r_plus, r_minus, points };
        spec.validate()?;
        Ok(spec)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let j: AttoSpecJson = serde_json::from_str(text).map_err(schema_error)?;
        let rational = |e: &Option<SymbolExpr>| match e {
            Some(e) => e.to_rational(),
            None => Ok(RationalFn::zero()),
        };
        Self::new(
            j.theta.to_blaschke()?,
            j.alpha.to_blaschke()?,
            rational(&j.r_plus)?,
            rational(&j.r_minus)?,
            j.points.iter().map(|p| (C64::new(p.t[0], p.t[1]), p.order)).collect(),
        )
    }

    /// Same data with a different range space.
    pub fn with_alpha(&self, alpha: BlaschkeProduct) -> Self {
        Self { alpha, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        let vanishing = |r: &RationalFn| r.is_zero() || r.relative_degree() < 0;
        if !vanishing(&self.r_plus) || !self.r_plus.poles().iter().all(|p| p.region == Region::E) {
            return Err(Error::PoleRegionViolation(format!(
                "R+ = {} must vanish at infinity with poles outside the closed disc",
                self.r_plus
            )));
        }
        if !vanishing(&self.r_minus) || !self.r_minus.poles().iter().all(|p| p.region == Region::D) {
            return Err(Error::PoleRegionViolation(format!(
                "R- = {} must vanish at infinity with poles inside the disc",
                self.r_minus
            )));
        }
        for (i, (t, n)) in self.points.iter().enumerate() {
            if (t.norm() - 1.0).abs() > 1e-9 || *n == 0 {
                return Err(Error::Schema(format!("point {t} of order {n} must lie on the circle with order >= 1")));
            }
            if self.points[..i].iter().any(|(s, _)| (s - t).norm() <= 1e-9) {
                return Err(Error::Schema(format!("point {t} is repeated")));
            }
        }
        Ok(())
    }
}

/// The pieces of `phi` in both of its forms.
#[derive(Clone, Debug)]
pub struct AttoSymbolParts {
    pub r2_plus: RationalFn,
    pub r1_minus: RationalFn,
    /// `prod (z - t_j)^n_j`
    pub e: FactoredPoly,
    pub d1_minus: FactoredPoly,
    pub d2_plus: FactoredPoly,
    pub q1: ComplexPoly,
    pub q2: ComplexPoly,
    pub m: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_t: usize,
    theta_bar: BoundarySymbol,
    alpha: BoundarySymbol,
    r_plus: RationalFn,
    r_minus: RationalFn,
    /// `(t_j, n_j, P^alpha_j, P^conj(theta)_j)`
    taylor: Vec<(C64, usize, ComplexPoly, ComplexPoly)>,
}

impl AttoSymbolParts {
    /// `conj(theta) R2+ - alpha R1-`
    pub fn phi_product(&self, z: C64) -> Result<C64> {
        Ok(self.theta_bar.eval(z)? * self.r2_plus.try_eval(z, 1e-12)?
            - self.alpha.eval(z)? * self.r1_minus.try_eval(z, 1e-12)?)
    }

    /// `conj(theta) R+ - alpha R- + sum (conj(theta) P^alpha_j - alpha P^conj(theta)_j) / (z - t_j)^n_j`
    pub fn phi_sum(&self, z: C64) -> Result<C64> {
        let tb = self.theta_bar.eval(z)?;
        let al = self.alpha.eval(z)?;
        let mut acc = tb * self.r_plus.try_eval(z, 1e-12)? - al * self.r_minus.try_eval(z, 1e-12)?;
        for (t, n, pa, ptb) in &self.taylor {
            let d = (z - t).powu(*n as u32);
            if d.norm() == 0.0 {
                return Err(Error::PoleOnEvaluationPoint(z));
            }
            acc += (tb * pa.eval(z) - al * ptb.eval(z)) / d;
        }
        Ok(acc)
    }
}

/// Assembles `phi`: Taylor polynomials at each `t_j`, `R2+ = Q2 / (E D2+)`
/// and `R1- = Q1 / (E D1-)`.
pub fn build_symbol(spec: &AttoSpec) -> Result<AttoSymbolParts> {
    spec.validate()?;
    let theta_bar = BoundarySymbol::blaschke(&spec.theta).conj_on_circle();
    let alpha = BoundarySymbol::blaschke(&spec.alpha);
    let e = FactoredPoly::new(
        C64::new(1.0, 0.0),
        spec.points.iter().map(|(t, n)| Root::with_region(*t, *n, Region::T)).collect(),
    );
    let d2_plus = spec.r_plus.den().clone();
    let d1_minus = spec.r_minus.den().clone();
    let e_dense = e.expand();

    let mut taylor = Vec::new();
    let mut sum_alpha = ComplexPoly::zero();
    let mut sum_theta = ComplexPoly::zero();
    for (t, n) in &spec.points {
        let pa = taylor_at(&alpha, *t, n - 1)?;
        let ptb = taylor_at(&theta_bar, *t, n - 1)?;
        let others = FactoredPoly::new(
            C64::new(1.0, 0.0),
            e.roots().iter().filter(|r| (r.z - t).norm() > 1e-12).copied().collect(),
        )
        .expand();
        sum_alpha = &sum_alpha + &(&pa * &others);
        sum_theta = &sum_theta + &(&ptb * &others);
        taylor.push((*t, *n, pa, ptb));
    }
    let q2 = &(&spec.r_plus.num().expand() * &e_dense) + &(&d2_plus.expand() * &sum_alpha);
    let q1 = &(&spec.r_minus.num().expand() * &e_dense) + &(&d1_minus.expand() * &sum_theta);
    let quotient = |q: &ComplexPoly, d: &FactoredPoly| -> Result<RationalFn> {
        if q.is_zero() {
            return Ok(RationalFn::zero());
        }
        Ok(RationalFn::from_dense(q)?.div_poly(&e.mul(d)))
    };
    let r2_plus = quotient(&q2, &d2_plus)?;
    let r1_minus = quotient(&q1, &d1_minus)?;
    let (n_plus, n_minus, n_t) = (d1_minus.degree(), d2_plus.degree(), e.degree());
    Ok(AttoSymbolParts {
        r2_plus,
        r1_minus,
        e,
        d1_minus,
        d2_plus,
        q1,
        q2,
        m: n_plus + n_minus + n_t,
        n_plus,
        n_minus,
        n_t,
        theta_bar,
        alpha,
        r_plus: spec.r_plus.clone(),
        r_minus: spec.r_minus.clone(),
        taylor,
    })
}

/// `ker A = E D1- D2+ ker T(conj(theta) z^m)`, independent of `alpha` once `deg alpha >= m`.
pub fn atto_kernel(spec: &AttoSpec) -> Result<KernelBasis> {
    let parts = build_symbol(spec)?;
    let m = parts.m;
    if spec.alpha.degree() < m {
        return Err(Error::AlphaTooSmall { deg_alpha: spec.alpha.degree(), m });
    }
    let mut trace = vec![TraceEntry::new(
        format!(
            "m = n+ + n- + nT = {} + {} + {} = {m}, dim K_alpha = {} >= m",
            parts.n_plus,
            parts.n_minus,
            parts.n_t,
            spec.alpha.degree()
        ),
        "finite-rank ATTO kernel, precondition dim K_alpha >= m",
    )];
    let symbol = BoundarySymbol::blaschke(&spec.theta).conj_on_circle().mul(&BoundarySymbol::z_power(m as i32));
    let inner = match SymbolPair::new(symbol, BoundarySymbol::one()) {
        Ok(pair) => kernel_plus(&pair)?,
        // conj(theta) z^m = 1
        Err(Error::DegeneratePair(_)) => KernelBasis::zero(Side::Plus, vec![]),
        Err(e) => return Err(e),
    };
    trace.extend(inner.trace.iter().cloned());
    trace.push(TraceEntry::new(
        "kernel = E D1- D2+ ker T(conj(theta) z^m); the range space alpha does not enter",
        "finite-rank ATTO kernel, independence of alpha",
    ));
    if inner.is_zero() {
        return Ok(KernelBasis::zero(Side::Plus, trace));
    }
    let factor = inner.factor.mul_poly(&parts.e.mul(&parts.d1_minus).mul(&parts.d2_plus));
    Ok(KernelBasis { factor, span_dim: inner.span_dim, side: Side::Plus, trace })
}

/// Malmquist-Takenaka orthonormal basis of `K_theta`, origin zeros first.
pub fn model_space_basis(theta: &BlaschkeProduct) -> Vec<RationalFn> {
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::new();
    let mut prefix = RationalFn::one();
    for a in theta.zero_list() {
        // sqrt(1 - |a|^2) / (1 - conj(a) z)
        let head = if a.norm() == 0.0 {
            RationalFn::one()
        } else {
            RationalFn::new(
                FactoredPoly::constant(C64::new((1.0 - a.norm_sqr()).sqrt(), 0.0)),
                FactoredPoly::new(-a.conj(), vec![Root::new(one / a.conj(), 1)]),
            )
        };
        out.push(prefix.mul(&head));
        let factor = BlaschkeProduct::new(one, vec![(a, 1)]).expect("zero inside the disc");
        prefix = prefix.mul(&factor.to_rational());
    }
    out
}

/// Numerical kernel of the compression matrix `M_ij = <phi e_j, f_i>`.
#[derive(Clone, Debug)]
pub struct CompressionKernel {
    pub dim: usize,
    pub rank: usize,
    /// Orthonormal kernel vectors in the orthonormal basis of `K_theta`.
    pub coords: DMatrix<C64>,
    pub singular_values: Vec<f64>,
    /// `M_ij = <phi e_j, f_i>`
    pub matrix: DMatrix<C64>,
}

impl CompressionKernel {
    /// Largest `||M c||` over the orthonormal columns `c` of `coords`.
    pub fn residual(&self, coords: &DMatrix<C64>) -> f64 {
        let image = &self.matrix * coords;
        image.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn compression_kernel(spec: &AttoSpec, cfg: &OracleConfig) -> Result<CompressionKernel> {
    cfg.validate()?;
    let parts = build_symbol(spec)?;
    let es = model_space_basis(&spec.theta);
    let fs = model_space_basis(&spec.alpha);
    let (nt, na) = (es.len(), fs.len());
    let pts = grid(cfg.grid_n, true);
    let w = 1.0 / cfg.grid_n as f64;
    let phi: Vec<C64> = pts.iter().map(|z| parts.phi_product(*z)).collect::<Result<_>>()?;
    let ev = DMatrix::from_fn(pts.len(), nt, |r, c| es[c].eval(pts[r]) * phi[r]);
    let fv = DMatrix::from_fn(pts.len(), na, |r, c| fs[c].eval(pts[r]));
    let m = fv.adjoint() * ev * C64::new(w, 0.0);
    // pad so the SVD returns a full right factor
    let rows = na.max(nt);
    let padded = DMatrix::from_fn(rows, nt, |r, c| if r < na { m[(r, c)] } else { C64::new(0.0, 0.0) });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::IllConditioned("SVD did not return V".into()))?;
    let smax = svd.singular_values.max();
    let tol = cfg.rank_tol * smax.max(f64::MIN_POSITIVE);
    let null: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] < tol).collect();
    let coords = DMatrix::from_fn(nt, null.len(), |r, c| v_t[(null[c], r)].conj());
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(CompressionKernel { dim: null.len(), rank: nt - null.len(), coords, singular_values: sv, matrix: m })
}

/// Coordinates of the basis elements of `k` in the orthonormal basis of `K_theta`.
pub fn model_space_coordinates(k: &KernelBasis, theta: &BlaschkeProduct, n: usize) -> Result<DMatrix<C64>> {
    let es = model_space_basis(theta);
    let pts = grid(n, true);
    let w = C64::new(1.0 / n as f64, 0.0);
    let elems = k.elements();
    let ev = DMatrix::from_fn(n, es.len(), |r, c| es[c].eval(pts[r]));
    let kv = DMatrix::from_fn(n, elems.len(), |r, c| elems[c].eval(pts[r]));
    let coords = ev.adjoint() * kv * w;
    orthonormal_columns(&coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::principal_angles;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pole(p: C64) -> RationalFn {
        RationalFn::new(FactoredPoly::one(), FactoredPoly::from_roots(c(1.0, 0.0), [(p, 1)]))
    }

    fn fixture(alpha: usize) -> AttoSpec {
        AttoSpec::new(
            BlaschkeProduct::z_power(5),
            BlaschkeProduct::z_power(alpha),
            pole(c(2.0, 0.0)),
            RationalFn::z_power(-1),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn counts_for_the_z5_fixture() {
        let p = build_symbol(&fixture(4)).unwrap();
        assert_eq!((p.n_minus, p.n_plus, p.n_t, p.m), (1, 1, 0, 2));
        assert_eq!(p.e.degree(), 0);
        for z in grid(1024, true) {
            assert!((p.phi_product(z).unwrap() - p.phi_sum(z).unwrap()).norm() < 1e-9);
        }
    }

    #[test]
    fn boundary_point_symbol() {
        let spec = AttoSpec::new(
            BlaschkeProduct::z_power(2),
            BlaschkeProduct::z_power(3),
            RationalFn::zero(),
            RationalFn::zero(),
            vec![(c(1.0, 0.0), 1)],
        )
        .unwrap();
        let p = build_symbol(&spec).unwrap();
        assert_eq!((p.m, p.n_t), (1, 1));
        for z in grid(1024, true) {
            let expected = (z.conj().powu(2) - z.powu(3)) / (z - 1.0);
            assert!((p.phi_sum(z).unwrap() - expected).norm() < 1e-9);
            assert!((p.phi_product(z).unwrap() - expected).norm() < 1e-9);
        }
    }

    #[test]
    fn empty_spec_is_zero_symbol() {
        let spec = AttoSpec::new(
            BlaschkeProduct::z_power(3),
            BlaschkeProduct::z_power(3),
            RationalFn::zero(),
            RationalFn::zero(),
            vec![],
        )
        .unwrap();
        let p = build_symbol(&spec).unwrap();
        assert_eq!(p.m, 0);
        assert!(p.phi_product(c(0.6, 0.8)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn z5_kernel_matches_compressions() {
        let k = atto_kernel(&fixture(2)).unwrap();
        assert_eq!(k.span_dim, 3);
        let cfg = OracleConfig::default();
        let analytic = model_space_coordinates(&k, &BlaschkeProduct::z_power(5), cfg.grid_n).unwrap();
        for alpha in [2, 7] {
            let nk = compression_kernel(&fixture(alpha), &cfg).unwrap();
            assert_eq!(nk.dim, 3);
            let angles = principal_angles(&analytic, &nk.coords).unwrap();
            assert!(angles.iter().all(|a| *a < 1e-6), "{angles:?}");
            assert!(nk.residual(&analytic) < 1e-10);
        }
        assert!(matches!(atto_kernel(&fixture(1)), Err(Error::AlphaTooSmall { deg_alpha: 1, m: 2 })));
    }

    #[test]
    fn large_m_gives_zero_kernel() {
        let spec = AttoSpec::new(
            BlaschkeProduct::z_power(2),
            BlaschkeProduct::z_power(4),
            pole(c(2.0, 0.0)),
            RationalFn::z_power(-1),
            vec![],
        )
        .unwrap();
        assert_eq!(atto_kernel(&spec).unwrap().span_dim, 0);
    }

    #[test]
    fn model_space_bases_are_orthonormal() {
        let b = BlaschkeProduct::new(c(1.0, 0.0), vec![(c(0.0, 0.0), 1), (c(0.5, 0.0), 1), (c(-1.0 / 3.0, 0.0), 1)])
            .unwrap();
        let es = model_space_basis(&b);
        assert_eq!(es.len(), 3);
        assert!(es[0].is_constant());
        let pts = grid(1024, true);
        for i in 0..3 {
            for j in 0..3 {
                let g: C64 = pts.iter().map(|z| es[i].eval(*z) * es[j].eval(*z).conj()).sum::<C64>() / 1024.0;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((g - expected).norm() < 1e-8);
            }
        }
        let z3 = model_space_basis(&BlaschkeProduct::z_power(3));
        assert!(z3.iter().enumerate().all(|(k, e)| e.ratio_constant(&RationalFn::z_power(k as i32)).is_some()));
    }

    #[test]
    fn z_power_in_theta_leaves_the_quotient_model_space() {
        // theta = z^2 B with m = 2: kernel = E D1- D2+ K_B
        let b_zeros = vec![(c(0.5, 0.0), 1), (c(-1.0 / 3.0, 0.2), 1)];
        let mut zeros = b_zeros.clone();
        zeros.insert(0, (c(0.0, 0.0), 2));
        let theta = BlaschkeProduct::new(c(1.0, 0.0), zeros).unwrap();
        let b = BlaschkeProduct::new(c(1.0, 0.0), b_zeros).unwrap();
        let spec =
            AttoSpec::new(theta, BlaschkeProduct::z_power(3), pole(c(2.0, 0.0)), RationalFn::z_power(-1), vec![])
                .unwrap();
        let k = atto_kernel(&spec).unwrap();
        assert_eq!(k.span_dim, 2);
        let prefix = RationalFn::from_poly(FactoredPoly::from_roots(c(1.0, 0.0), [(c(0.0, 0.0), 1), (c(2.0, 0.0), 1)]));
        let pts = grid(512, true);
        let sample = |fs: Vec<RationalFn>| DMatrix::from_fn(pts.len(), fs.len(), |r, j| fs[j].eval(pts[r]));
        let expected = sample(model_space_basis(&b).iter().map(|e| e.mul(&prefix)).collect());
        let got = sample(k.elements());
        let angles =
            principal_angles(&orthonormal_columns(&expected).unwrap(), &orthonormal_columns(&got).unwrap()).unwrap();
        assert!(angles.iter().all(|a| *a < 1e-9), "{angles:?}");
    }

    #[test]
    fn two_zero_model_space_gram() {
        let b = BlaschkeProduct::new(c(1.0, 0.0), vec![(c(0.5, 0.0), 1), (c(-1.0 / 3.0, 0.0), 1)]).unwrap();
        let es = model_space_basis(&b);
        assert_eq!(es.len(), 2);
        let pts = grid(1024, true);
        let g: C64 = pts.iter().map(|z| es[0].eval(*z) * es[1].eval(*z).conj()).sum::<C64>() / 1024.0;
        assert!(g.norm() < 1e-12);
    }

    #[test]
    fn pole_regions_are_enforced() {
        let r = AttoSpec::new(
            BlaschkeProduct::z_power(3),
            BlaschkeProduct::z_power(3),
            pole(c(0.5, 0.0)),
            RationalFn::zero(),
            vec![],
        );
        assert!(matches!(r, Err(Error::PoleRegionViolation(_))));
    }
}
