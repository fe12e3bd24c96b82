//! Root finding, region classification, inner-outer factorization, the
//! Blaschke split `B = B_- z^k B_+` and Taylor polynomials at boundary points.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::symbols::{BlaschkeProduct, BoundarySymbol, ComplexPoly, FactoredPoly, RationalFn, Region, Root};
use crate::C64;

/// Roots closer than this are merged outright.
pub const MERGE_TOL: f64 = 1e-7;
/// Relative coefficient error above which a factorization is rejected.
pub const RECONSTRUCT_TOL: f64 = 1e-6;

/// All roots of `p`, from the eigenvalues of its companion matrix followed
/// by one Newton step, tagged D/T/E with modulus tolerance `tol`.
pub fn roots(p: &ComplexPoly, tol: f64) -> Result<FactoredPoly> {
    if p.is_zero() {
        return Err(Error::IllConditioned("cannot factor the zero polynomial".into()));
    }
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::InvalidConfig(format!("classification tolerance {tol} outside (0, 0.1)")));
    }
    let coeffs = p.coeffs();
    let lead = p.leading();
    let origin = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[origin..];
    let n = reduced.len() - 1;

    let mut found: Vec<C64> = vec![C64::new(0.0, 0.0); origin];
    if n > 0 {
        let mut m = DMatrix::<C64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..n {
            m[(i, n - 1)] = -reduced[i] / lead;
        }
        let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::IllConditioned("companion eigenvalue iteration did not converge".into()))?;
        let (_, t) = schur.unpack();
        found.extend((0..n).map(|i| t[(i, i)]));
    }

    let clustered: Vec<(C64, usize)> = cluster(p, lead, found)
        .into_iter()
        .map(|(z, k)| if z.norm() == 0.0 { (z, k) } else { (polish(p, k, z), k) })
        .collect();
    let result = FactoredPoly::new(
        lead,
        clustered.into_iter().map(|(z, k)| Root::with_region(z, k, Region::classify(z, tol))).collect(),
    );
    let err = relative_error(&result.expand(), p);
    if err > RECONSTRUCT_TOL {
        return Err(Error::IllConditioned(format!("roots reproduce the polynomial only to relative error {err:e}")));
    }
    Ok(result)
}

/// One Newton step on `p^(k-1)`, for which a root of multiplicity `k` is simple.
fn polish(p: &ComplexPoly, k: usize, z: C64) -> C64 {
    let p = (1..k).fold(p.clone(), |q, _| q.derivative());
    let d = p.derivative().eval(z);
    if d.norm() == 0.0 {
        return z;
    }
    let step = z - p.eval(z) / d;
    if p.eval(step).norm() < p.eval(z).norm() {
        step
    } else {
        z
    }
}

fn relative_error(a: &ComplexPoly, b: &ComplexPoly) -> f64 {
    (a - b).max_abs_coeff() / b.max_abs_coeff()
}

/// Groups near-coincident roots. Pairs within [`MERGE_TOL`] always merge;
/// looser clusters (the scatter of a multiple root) merge into their
/// centroid when that reproduces `p` as well as the scattered roots do.
fn cluster(p: &ComplexPoly, lead: C64, roots: Vec<C64>) -> Vec<(C64, usize)> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for z in roots {
        match groups.iter_mut().find(|g| (centroid(g) - z).norm() <= MERGE_TOL) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    let mut i = 0;
    while i < groups.len() {
        let ci = centroid(&groups[i]);
        let scale = 1.0f64.max(ci.norm());
        let near: Vec<usize> =
            (i + 1..groups.len()).filter(|&j| (centroid(&groups[j]) - ci).norm() <= 1e-3 * scale).collect();
        if !near.is_empty() {
            let mut trial = groups.clone();
            for &j in near.iter().rev() {
                let moved = trial.remove(j);
                trial[i].extend(moved);
            }
            if relative_error(&expand_groups(lead, &trial), p) <= 1e-10 {
                groups = trial;
            }
        }
        i += 1;
    }
    groups.into_iter().map(|g| (centroid(&g), g.len())).collect()
}

fn centroid(g: &[C64]) -> C64 {
    g.iter().sum::<C64>() / g.len() as f64
}

fn expand_groups(lead: C64, groups: &[Vec<C64>]) -> ComplexPoly {
    ComplexPoly::from_roots(lead, groups.iter().flat_map(|g| std::iter::repeat_n(centroid(g), g.len())))
}

/// Region parts `p = leading * pD * pT * pE` with their degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionSplit {
    pub d: FactoredPoly,
    pub t: FactoredPoly,
    pub e: FactoredPoly,
    pub n_d: usize,
    pub n_t: usize,
    pub n_e: usize,
}

pub fn split_regions(p: &FactoredPoly) -> RegionSplit {
    RegionSplit {
        d: p.region_part(Region::D),
        t: p.region_part(Region::T),
        e: p.region_part(Region::E),
        n_d: p.count(Region::D),
        n_t: p.count(Region::T),
        n_e: p.count(Region::E),
    }
}

/// `B = B_- z^k B_+` on the circle with `B_-^{+-1}` bounded anti-analytic,
/// `B_+^{+-1}` bounded analytic and `k = deg B`. Origin zeros go to `z^k` only.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeSplit {
    pub minus: RationalFn,
    pub k: usize,
    pub plus: RationalFn,
}

pub fn blaschke_split(b: &BlaschkeProduct) -> BlaschkeSplit {
    let nonzero: Vec<(C64, usize)> = b.zeros().iter().copied().filter(|(a, _)| a.norm() != 0.0).collect();
    let count: usize = nonzero.iter().map(|(_, k)| k).sum();
    // B_- = c prod (z - a) / z
    let minus =
        RationalFn::new(FactoredPoly::from_roots(b.constant(), nonzero.iter().copied()), FactoredPoly::z_power(count));
    // B_+ = prod 1 / (1 - conj(a) z)
    let mut lead = C64::new(1.0, 0.0);
    let mut poles = Vec::new();
    for (a, k) in &nonzero {
        lead *= (-a.conj()).powu(*k as u32);
        poles.push(Root::new(C64::new(1.0, 0.0) / a.conj(), *k));
    }
    let plus = RationalFn::new(FactoredPoly::one(), FactoredPoly::new(lead, poles));
    BlaschkeSplit { minus, k: b.degree(), plus }
}

/// Inner-outer factorization of a rational function analytic on the closed
/// disc. Zeros on the circle stay in the outer factor.
pub fn inner_outer(f: &RationalFn) -> Result<(BlaschkeProduct, RationalFn)> {
    if f.is_zero() {
        return Err(Error::NotInHardySpace("the zero function has no inner-outer factorization".into()));
    }
    if !f.is_analytic_on_closed_disc() {
        return Err(Error::NotInHardySpace(format!("{f} has poles in the closed disc")));
    }
    let zeros: Vec<(C64, usize)> = f.zeros().iter().filter(|r| r.region == Region::D).map(|r| (r.z, r.mult)).collect();
    let inner = BlaschkeProduct::new(C64::new(1.0, 0.0), zeros)?;
    let outer = f.div(&inner.to_rational())?;
    Ok((inner, outer))
}

/// Taylor polynomial of order `order` at the circle point `t`, expanded in powers of `z`.
pub fn taylor_at(sym: &BoundarySymbol, t: C64, order: usize) -> Result<ComplexPoly> {
    let s = sym.series_at(t, order + 1)?;
    // sum s_i (z - t)^i
    let mut out = ComplexPoly::zero();
    let shift = ComplexPoly::new(vec![-t, C64::new(1.0, 0.0)]);
    let mut pw = ComplexPoly::one();
    for si in s {
        out = &out + &pw.scale(si);
        pw = &pw * &shift;
    }
    Ok(out)
}
