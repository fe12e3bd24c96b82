//! Inner functions used as symbols: finite Blaschke products and singular
//! inner atoms `exp(mass (z + t) / (z - t))`.

use super::factored::{FactoredPoly, Root, CLASSIFY_TOL};
use super::rational::RationalFn;
use super::series::{self, Series};
use crate::error::{Error, Result};
use crate::C64;

/// `constant * prod ((z - a) / (1 - conj(a) z))^mult` with every `a` in the disc.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    constant: C64,
    zeros: Vec<(C64, usize)>,
}

impl BlaschkeProduct {
    pub fn new(constant: C64, zeros: Vec<(C64, usize)>) -> Result<Self> {
        if (constant.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Schema(format!("Blaschke constant {constant} is not unimodular")));
        }
        if let Some((a, _)) = zeros.iter().find(|(a, _)| a.norm() >= 1.0 - CLASSIFY_TOL) {
            return Err(Error::Schema(format!("Blaschke zero {a} is not inside the disc")));
        }
        let mut zeros: Vec<(C64, usize)> = zeros.into_iter().filter(|(_, k)| *k > 0).collect();
        // origin first so the orthonormal basis starts with a constant
        zeros.sort_by_key(|(a, _)| a.norm() != 0.0);
        Ok(Self { constant, zeros })
    }

    /// `z^k`
    pub fn z_power(k: usize) -> Self {
        Self { constant: C64::new(1.0, 0.0), zeros: vec![(C64::new(0.0, 0.0), k)] }
    }

    pub fn constant(&self) -> C64 {
        self.constant
    }

    pub fn zeros(&self) -> &[(C64, usize)] {
        &self.zeros
    }

    /// Zeros repeated by multiplicity, origin first.
    pub fn zero_list(&self) -> Vec<C64> {
        self.zeros.iter().flat_map(|(a, k)| std::iter::repeat_n(*a, *k)).collect()
    }

    /// Number of zeros; equals `dim K_B`.
    pub fn degree(&self) -> usize {
        self.zeros.iter().map(|(_, k)| k).sum()
    }

    pub fn eval(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        self.zeros.iter().fold(self.constant, |acc, (a, k)| acc * ((z - a) / (one - a.conj() * z)).powu(*k as u32))
    }

    pub fn to_rational(&self) -> RationalFn {
        let num = FactoredPoly::new(self.constant, self.zeros.iter().map(|(a, k)| Root::new(*a, *k)).collect());
        let mut lead = C64::new(1.0, 0.0);
        let mut roots = Vec::new();
        for (a, k) in &self.zeros {
            if a.norm() == 0.0 {
                continue;
            }
            lead *= (-a.conj()).powu(*k as u32);
            roots.push(Root::new(C64::new(1.0, 0.0) / a.conj(), *k));
        }
        RationalFn::new(num, FactoredPoly::new(lead, roots))
    }
}

/// `exp(mass * (z + point) / (z - point))`, a singular inner function with a
/// point mass on the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularInnerAtom {
    point: C64,
    mass: f64,
}

impl SingularInnerAtom {
    pub fn new(point: C64, mass: f64) -> Result<Self> {
        if (point.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Schema(format!("atom point {point} is not on the unit circle")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Schema(format!("atom mass {mass} must be positive")));
        }
        Ok(Self { point, mass })
    }

    pub fn point(&self) -> C64 {
        self.point
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn same_as(&self, other: &Self) -> bool {
        (self.point - other.point).norm() <= 1e-12 && (self.mass - other.mass).abs() <= 1e-12 * self.mass
    }

    /// Exponent `mass (z + point) / (z - point)`.
    pub fn log_value(&self, z: C64) -> C64 {
        (z + self.point) / (z - self.point) * self.mass
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.log_value(z).exp()
    }

    /// Taylor coefficients of `exp(sign * log_value)` at `t`.
    pub fn series_at(&self, t: C64, sign: i32, len: usize) -> Result<Series> {
        let d = t - self.point;
        if d.norm() <= 1e-9 {
            return Err(Error::NotRegularPoint(t));
        }
        // log_value = mass + 2 mass point / (d + w)
        let s = sign as f64;
        let mut h = vec![C64::new(0.0, 0.0); len.max(1)];
        let base = self.point * (2.0 * self.mass) / d;
        let mut pw = C64::new(1.0, 0.0);
        for (k, hk) in h.iter_mut().enumerate() {
            *hk = base * pw * s;
            if k == 0 {
                *hk += self.mass * s;
            }
            pw *= -C64::new(1.0, 0.0) / d;
        }
        Ok(series::exp(&h, len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn blaschke_is_unimodular_on_circle() {
        let b = BlaschkeProduct::new(c(0.0, 1.0), vec![(c(0.5, 0.0), 1), (c(-0.2, 0.6), 2)]).unwrap();
        for k in 0..50 {
            let z = C64::from_polar(1.0, 0.1 + k as f64 * 0.125);
            assert!((b.eval(z).norm() - 1.0).abs() < 1e-10);
            assert!((b.to_rational().eval(z) - b.eval(z)).norm() < 1e-12);
        }
        // boundary fixed point of a single real zero
        let single = BlaschkeProduct::new(c(1.0, 0.0), vec![(c(0.5, 0.0), 1)]).unwrap();
        assert!((single.eval(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn atom_at_minus_one_matches_closed_form() {
        let theta = SingularInnerAtom::new(c(-1.0, 0.0), 1.0).unwrap();
        assert!((theta.eval(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((theta.eval(c(0.0, 0.0)) - c((-1f64).exp(), 0.0)).norm() < 1e-15);
        for k in 1..20 {
            let z = C64::from_polar(1.0, k as f64 * 0.15);
            assert!((theta.eval(z).norm() - 1.0).abs() < 1e-12);
            let closed = ((z - 1.0) / (z + 1.0)).exp();
            assert!((theta.eval(z) - closed).norm() < 1e-13);
        }
        assert!(theta.eval(c(0.3, 0.2)).norm() < 1.0);
    }

    #[test]
    fn atom_series_matches_finite_differences() {
        let theta = SingularInnerAtom::new(c(0.0, 1.0), 0.7).unwrap();
        let t = C64::from_polar(1.0, 2.0);
        let s = theta.series_at(t, -1, 3).unwrap();
        let f = |z: C64| (-theta.log_value(z)).exp();
        let h = 1e-4;
        let d1 = (f(t + h) - f(t - h)) / (2.0 * h);
        let d2 = (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
        assert!((s[0] - f(t)).norm() < 1e-13);
        assert!((s[1] - d1).norm() < 1e-6 * d1.norm().max(1.0));
        assert!((s[2] * 2.0 - d2).norm() < 1e-4 * d2.norm().max(1.0));
    }
}
