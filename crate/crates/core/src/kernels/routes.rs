//! Interchangeable strategies for `ker+`, selected by name at runtime.

use std::collections::BTreeMap;

use super::polynomial::{paired_kernel_plus, printed_kernel_plus};
use super::{KernelBasis, Side, TraceEntry};
use crate::error::{Error, Result};
use crate::symbols::{to_polynomial_pair, FactoredPoly, RationalFn, Region, Root, SymbolPair};
use crate::C64;

pub trait KernelRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn kernel_plus(&self, pair: &SymbolPair) -> Result<KernelBasis>;
}

/// Clears denominators to a coprime polynomial pair and applies the dimension law.
pub struct Normalize;

/// Applies factor-by-factor rewriting rules to `a` and `b` until the pair
/// reduces to `(z^s, 1)`, collecting the cleared factors in a multiplier.
pub struct Rewrite;

/// Polynomial normalization with the displayed basis factor (no division by `p1`).
pub struct Printed;

fn normal_form_trace(pair: &SymbolPair) -> Result<(FactoredPoly, FactoredPoly, TraceEntry)> {
    let pp = to_polynomial_pair(pair)?;
    let entry = TraceEntry::new(
        format!("cleared common factor {} to reach a coprime polynomial pair", pp.multiplier),
        "common invertible factors leave the projected kernel unchanged",
    );
    Ok((pp.p1, pp.p2, entry))
}

impl KernelRoute for Normalize {
    fn name(&self) -> &'static str {
        "normalize"
    }

    fn describe(&self) -> &'static str {
        "coprime polynomial normal form plus the dimension law"
    }

    fn kernel_plus(&self, pair: &SymbolPair) -> Result<KernelBasis> {
        let (p1, p2, entry) = normal_form_trace(pair)?;
        let mut k = paired_kernel_plus(&p1, &p2)?;
        k.trace.insert(0, entry);
        Ok(k)
    }
}

impl KernelRoute for Printed {
    fn name(&self) -> &'static str {
        "printed"
    }

    fn describe(&self) -> &'static str {
        "polynomial normal form with the displayed basis p1T p2T p1D p2E"
    }

    fn kernel_plus(&self, pair: &SymbolPair) -> Result<KernelBasis> {
        let (p1, p2, entry) = normal_form_trace(pair)?;
        let mut k = printed_kernel_plus(&p1, &p2)?;
        k.trace.insert(0, entry);
        Ok(k)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    A,
    B,
}

struct Rules {
    multiplier: RationalFn,
    /// exponent `s` of the reduced symbol `z^s`
    s: i64,
    counts: BTreeMap<&'static str, usize>,
}

impl Rules {
    fn apply(&mut self, slot: Slot, root: &Root, is_pole: bool) {
        let m = root.mult;
        let lin = FactoredPoly::new(C64::new(1.0, 0.0), vec![Root::with_region(root.z, m, root.region)]);
        // a zero of a or a pole of b is a zero of a/b
        let zero_of_ratio = (slot == Slot::A) != is_pole;
        match root.region {
            Region::E => {
                if zero_of_ratio {
                    self.multiplier = self.multiplier.div_poly(&lin);
                } else {
                    self.multiplier = self.multiplier.mul_poly(&lin);
                }
                self.bump("invertible analytic factor moved into the multiplier", m);
            }
            Region::D => {
                let sign = if zero_of_ratio { 1 } else { -1 };
                self.s += sign * m as i64;
                if root.z.norm() != 0.0 {
                    self.bump("z - d = z (1 - d/z); invertible anti-analytic part dropped", m);
                }
            }
            Region::T => {
                if zero_of_ratio {
                    self.s += m as i64;
                    self.bump("boundary zero z - t replaced by z", m);
                } else {
                    self.multiplier = self.multiplier.mul_poly(&lin);
                    self.bump("boundary pole z - t carried into the multiplier", m);
                }
            }
        }
    }

    fn bump(&mut self, rule: &'static str, m: usize) {
        *self.counts.entry(rule).or_default() += m;
    }
}

fn rule_reference(rule: &str) -> &'static str {
    if rule.starts_with("invertible analytic") {
        "analytic invertible factors: ker+(a h, b) = h^-1 ker+(a, b), ker+(a, b h) = h ker+(a, b)"
    } else if rule.starts_with("z - d") {
        "Blaschke split B = B- z^k B+, anti-analytic invertible factors leave ker+ unchanged"
    } else if rule.starts_with("boundary zero") {
        "boundary-zero replacement: ker T(g (z - t)^n) = ker T(g z^n)"
    } else {
        "unbounded symbols: ker T(g / (z - t)) = (z - t) ker T(g)"
    }
}

impl KernelRoute for Rewrite {
    fn name(&self) -> &'static str {
        "rewrite"
    }

    fn describe(&self) -> &'static str {
        "factor-by-factor rewriting of (a, b) down to a model space"
    }

    fn kernel_plus(&self, pair: &SymbolPair) -> Result<KernelBasis> {
        let (Some(a), Some(b)) = (pair.a().as_rational(), pair.b().as_rational()) else {
            return Err(Error::UnsupportedSymbol("rewriting needs atom-free symbols".into()));
        };
        let mut rules = Rules { multiplier: RationalFn::one(), s: 0, counts: BTreeMap::new() };
        for (slot, r) in [(Slot::A, a), (Slot::B, b)] {
            for root in r.zeros() {
                rules.apply(slot, root, false);
            }
            for root in r.poles() {
                rules.apply(slot, root, true);
            }
        }
        let mut trace: Vec<TraceEntry> = rules
            .counts
            .iter()
            .map(|(rule, n)| TraceEntry::new(format!("{rule} (x{n})"), rule_reference(rule)))
            .collect();
        let dim = (-rules.s).max(0) as usize;
        trace.push(TraceEntry::new(
            format!("reduced to ker T(z^{}) of dimension {dim}", rules.s),
            "model space K(z^n) = polynomials of degree below n",
        ));
        if dim == 0 {
            return Ok(KernelBasis::zero(Side::Plus, trace));
        }
        let factor = rules.multiplier.scale(C64::new(1.0, 0.0) / rules.multiplier.num().leading());
        Ok(KernelBasis { factor, span_dim: dim, side: Side::Plus, trace })
    }
}

/// Named routes, looked up by the CLI's `--route`.
pub struct RouteRegistry {
    routes: BTreeMap<&'static str, Box<dyn KernelRoute>>,
}

impl RouteRegistry {
    pub fn empty() -> Self {
        Self { routes: BTreeMap::new() }
    }

    pub fn register(&mut self, route: Box<dyn KernelRoute>) {
        self.routes.insert(route.name(), route);
    }

    pub fn get(&self, name: &str) -> Result<&dyn KernelRoute> {
        self.routes.get(name).map(|r| r.as_ref()).ok_or_else(|| Error::UnknownRoute(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.keys().copied().collect()
    }
}

impl Default for RouteRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Normalize));
        r.register(Box::new(Rewrite));
        r.register(Box::new(Printed));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{BlaschkeProduct, BoundarySymbol};

    fn zp1() -> BoundarySymbol {
        BoundarySymbol::rational(RationalFn::from_poly(FactoredPoly::from_roots(
            C64::new(1.0, 0.0),
            [(C64::new(-1.0, 0.0), 1)],
        )))
    }

    #[test]
    fn registry_lookup() {
        let reg = RouteRegistry::default();
        assert_eq!(reg.names(), vec!["normalize", "printed", "rewrite"]);
        assert!(matches!(reg.get("bogus"), Err(Error::UnknownRoute(_))));
    }

    #[test]
    fn conj_blaschke_over_z_plus_one() {
        let b = BlaschkeProduct::new(
            C64::new(1.0, 0.0),
            vec![(C64::new(0.0, 0.0), 2), (C64::new(0.3, 0.2), 1), (C64::new(-0.5, 0.0), 1)],
        )
        .unwrap();
        let pair = SymbolPair::new(BoundarySymbol::blaschke(&b).conj_on_circle(), zp1()).unwrap();
        let reg = RouteRegistry::default();
        let n = reg.get("normalize").unwrap().kernel_plus(&pair).unwrap();
        let r = reg.get("rewrite").unwrap().kernel_plus(&pair).unwrap();
        assert_eq!(n.span_dim, 4);
        assert_eq!(r.span_dim, 4);
        assert!(n.factor.ratio_constant(&r.factor).is_some(), "{} vs {}", n.factor, r.factor);
    }
}
