//! Seeded random symbols shared by the property and acceptance suites.
#![allow(dead_code)]

use pk_core::symbols::{BlaschkeProduct, BoundarySymbol, FactoredPoly, RationalFn, Region, Root, SymbolPair};
use pk_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_241_017;

/// `PK_SEED` if set, otherwise a fixed default.
pub fn seed() -> u64 {
    std::env::var("PK_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A random coprime polynomial pair with its factored parts.
#[derive(Clone, Debug)]
pub struct RandomPair {
    pub p1: FactoredPoly,
    pub p2: FactoredPoly,
    pub pair: SymbolPair,
}

pub struct Gen {
    rng: ChaCha8Rng,
    /// Roots already placed in the current draw.
    taken: Vec<C64>,
}

const SEPARATION: f64 = 0.25;

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), taken: vec![] }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn candidate(&mut self, region: Region) -> C64 {
        let angle = self.rng.gen_range(0.0..std::f64::consts::TAU);
        let radius = match region {
            Region::D if self.rng.gen_bool(0.15) => 0.0,
            Region::D => self.rng.gen_range(0.1..0.6),
            Region::T => 1.0,
            Region::E => self.rng.gen_range(1.5..3.0),
        };
        C64::from_polar(radius, angle)
    }

    /// A point of `region` at least `SEPARATION` from every earlier point.
    pub fn point(&mut self, region: Region) -> C64 {
        loop {
            let z = self.candidate(region);
            if self.taken.iter().all(|t| (t - z).norm() >= SEPARATION) {
                self.taken.push(z);
                return z;
            }
        }
    }

    pub fn region(&mut self) -> Region {
        [Region::D, Region::T, Region::E][self.rng.gen_range(0..3)]
    }

    pub fn unit_scalar(&mut self) -> C64 {
        C64::from_polar(self.rng.gen_range(0.5..2.0), self.rng.gen_range(0.0..std::f64::consts::TAU))
    }

    /// Polynomial with `counts[r]` distinct roots in `[D, T, E][r]`; circle
    /// roots are pinned, inner roots are occasionally double.
    pub fn poly(&mut self, counts: [usize; 3]) -> FactoredPoly {
        let mut roots = Vec::new();
        for (region, n) in [Region::D, Region::T, Region::E].into_iter().zip(counts) {
            for _ in 0..n {
                let z = self.point(region);
                let mult = if region == Region::D && self.rng.gen_bool(0.15) { 2 } else { 1 };
                roots.push(Root::with_region(z, mult, region));
            }
        }
        let lead = self.unit_scalar();
        FactoredPoly::new(lead, roots)
    }

    fn counts(&mut self, max_deg: usize) -> [usize; 3] {
        let deg = self.rng.gen_range(0..=max_deg);
        let mut counts = [0; 3];
        for _ in 0..deg {
            counts[self.rng.gen_range(0..3)] += 1;
        }
        counts
    }

    /// Coprime `(p1, p2)` of degrees at most 6 with roots in all three regions.
    pub fn polynomial_pair(&mut self) -> RandomPair {
        loop {
            self.taken.clear();
            let (c1, c2) = (self.counts(6), self.counts(6));
            let p1 = self.poly(c1);
            let p2 = self.poly(c2);
            if p1.degree() > 6 || p2.degree() > 6 {
                continue;
            }
            let pair = SymbolPair::new(
                BoundarySymbol::rational(RationalFn::from_poly(p1.clone())),
                BoundarySymbol::rational(RationalFn::from_poly(p2.clone())),
            );
            if let Ok(pair) = pair {
                return RandomPair { p1, p2, pair };
            }
        }
    }

    /// Pairs whose kernel dimension is at least `min_dim`.
    pub fn rich_pair(&mut self, min_dim: usize) -> RandomPair {
        loop {
            self.taken.clear();
            let n1 = [self.rng.gen_range(0..=1), self.rng.gen_range(0..=1), self.rng.gen_range(0..=2)];
            let n2 =
                [self.rng.gen_range(min_dim + n1[0] + n1[1]..=6), self.rng.gen_range(0..=1), self.rng.gen_range(0..=1)];
            let p1 = self.poly(n1);
            let p2 = self.poly(n2);
            let counts = pk_core::kernels::pair_counts(&p1, &p2);
            if counts.dim < min_dim || p2.degree() > 8 {
                continue;
            }
            let pair = SymbolPair::new(
                BoundarySymbol::rational(RationalFn::from_poly(p1.clone())),
                BoundarySymbol::rational(RationalFn::from_poly(p2.clone())),
            )
            .expect("distinct polynomials");
            return RandomPair { p1, p2, pair };
        }
    }

    /// Blaschke product of degree `deg` whose zeros and their reflections
    /// keep clear of the points drawn so far.
    pub fn blaschke(&mut self, deg: usize) -> BlaschkeProduct {
        let mut zeros = Vec::new();
        while zeros.iter().map(|(_, k)| k).sum::<usize>() < deg {
            let z = if self.rng.gen_bool(0.2) {
                c(0.0, 0.0)
            } else {
                C64::from_polar(self.rng.gen_range(0.1..0.7), self.rng.gen_range(0.0..std::f64::consts::TAU))
            };
            let refl = if z.norm() == 0.0 { None } else { Some(1.0 / z.conj()) };
            let clear = |p: C64| self.taken.iter().all(|t| (t - p).norm() >= SEPARATION);
            let origin_again = z.norm() == 0.0 && zeros.iter().any(|(w, _): &(C64, usize)| w.norm() == 0.0);
            if origin_again {
                zeros.iter_mut().find(|(w, _)| w.norm() == 0.0).unwrap().1 += 1;
                continue;
            }
            if clear(z) && refl.is_none_or(clear) {
                self.taken.push(z);
                self.taken.extend(refl);
                zeros.push((z, 1));
            }
        }
        let u = C64::from_polar(1.0, self.rng.gen_range(0.0..std::f64::consts::TAU));
        BlaschkeProduct::new(u, zeros).expect("zeros inside the disc")
    }

    /// `c prod (z - zeros) / prod (z - poles)` with poles in `E` and zeros in
    /// `D` or `E`, vanishing count at most `deg` each.
    pub fn exterior_rational(&mut self, max_zeros: usize, max_poles: usize) -> RationalFn {
        let nz = self.rng.gen_range(0..=max_zeros);
        let np = self.rng.gen_range(0..=max_poles);
        let zeros: Vec<Root> = (0..nz)
            .map(|_| {
                let region = if self.rng.gen_bool(0.5) { Region::D } else { Region::E };
                Root::with_region(self.point(region), 1, region)
            })
            .collect();
        let poles: Vec<Root> = (0..np).map(|_| Root::with_region(self.point(Region::E), 1, Region::E)).collect();
        let lead = self.unit_scalar();
        RationalFn::new(FactoredPoly::new(lead, zeros), FactoredPoly::new(c(1.0, 0.0), poles))
    }

    pub fn reset(&mut self) {
        self.taken.clear();
    }
}
