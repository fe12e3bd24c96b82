//! JSON symbol schema.
//!
//! ```json
//! {"product": [{"conj": {"atom": {"point": [-1, 0], "mass": 1, "exp": 1}}},
//!              {"factored": {"leading": [1, 0], "roots": [{"z": [-1, 0], "mult": 1, "region": "T"}]}}]}
//! ```

use serde::{Deserialize, Serialize};

use super::factored::{FactoredPoly, Region, Root};
use super::inner::{BlaschkeProduct, SingularInnerAtom};
use super::poly::ComplexPoly;
use super::rational::RationalFn;
use super::symbol::{BoundarySymbol, SymbolPair};
use crate::error::{Error, Result};
use crate::C64;

pub type ComplexJson = [f64; 2];

fn one() -> ComplexJson {
    [1.0, 0.0]
}

fn unit() -> usize {
    1
}

fn c(v: ComplexJson) -> C64 {
    C64::new(v[0], v[1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootJson {
    pub z: ComplexJson,
    #[serde(default = "unit")]
    pub mult: usize,
    /// Pins the region instead of classifying `|z|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolExpr {
    Poly {
        coeffs: Vec<ComplexJson>,
    },
    Factored {
        #[serde(default = "one")]
        leading: ComplexJson,
        #[serde(default)]
        roots: Vec<RootJson>,
    },
    Blaschke {
        #[serde(default = "one")]
        constant: ComplexJson,
        #[serde(default)]
        zeros: Vec<RootJson>,
    },
    Rational {
        num: Box<SymbolExpr>,
        den: Box<SymbolExpr>,
    },
    Atom {
        point: ComplexJson,
        mass: f64,
        #[serde(default = "exp_default")]
        exp: i32,
    },
    /// `z^k`, any integer `k`.
    Zpow(i32),
    Product(Vec<SymbolExpr>),
    Conj(Box<SymbolExpr>),
}

fn exp_default() -> i32 {
    1
}

impl SymbolExpr {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(schema_error)
    }

    pub fn to_symbol(&self) -> Result<BoundarySymbol> {
        match self {
            SymbolExpr::Poly { coeffs } => {
                let p = ComplexPoly::new(coeffs.iter().copied().map(c).collect());
                if p.is_zero() {
                    return Ok(BoundarySymbol::constant(C64::new(0.0, 0.0)));
                }
                Ok(BoundarySymbol::rational(RationalFn::from_dense(&p)?))
            }
            SymbolExpr::Factored { leading, roots } => {
                Ok(BoundarySymbol::rational(RationalFn::from_poly(factored(*leading, roots)?)))
            }
            SymbolExpr::Blaschke { constant, zeros } => Ok(BoundarySymbol::blaschke(&blaschke(*constant, zeros)?)),
            SymbolExpr::Rational { num, den } => {
                let den = den.to_symbol()?;
                if den.is_zero() {
                    return Err(Error::Schema("rational: zero denominator".into()));
                }
                num.to_symbol()?.div(&den)
            }
            SymbolExpr::Atom { point, mass, exp } => {
                if exp.abs() != 1 {
                    return Err(Error::Schema(format!("atom: exp must be 1 or -1, got {exp}")));
                }
                Ok(BoundarySymbol::atom(SingularInnerAtom::new(c(*point), *mass)?, *exp))
            }
            SymbolExpr::Zpow(k) => Ok(BoundarySymbol::z_power(*k)),
            SymbolExpr::Product(items) => {
                items.iter().try_fold(BoundarySymbol::one(), |acc, s| Ok(acc.mul(&s.to_symbol()?)))
            }
            SymbolExpr::Conj(inner) => Ok(inner.to_symbol()?.conj_on_circle()),
        }
    }

    /// The Blaschke product (times a unimodular constant) this expression
    /// denotes, if it is written as one.
    pub fn to_blaschke(&self) -> Result<BlaschkeProduct> {
        match self {
            SymbolExpr::Blaschke { constant, zeros } => blaschke(*constant, zeros),
            SymbolExpr::Zpow(k) if *k >= 0 => Ok(BlaschkeProduct::z_power(*k as usize)),
            _ => Err(Error::Schema("expected a blaschke expression".into())),
        }
    }

    /// Rational function denoted by an atom-free expression.
    pub fn to_rational(&self) -> Result<RationalFn> {
        self.to_symbol()?.as_rational().cloned().ok_or_else(|| Error::Schema("expected a rational expression".into()))
    }
}

impl SymbolExpr {
    /// Round-trippable form of a factored polynomial, regions pinned.
    pub fn from_factored(p: &FactoredPoly) -> Self {
        SymbolExpr::Factored {
            leading: json(p.leading()),
            roots: p.roots().iter().map(|r| RootJson { z: json(r.z), mult: r.mult, region: Some(r.region) }).collect(),
        }
    }

    pub fn from_rational(r: &RationalFn) -> Self {
        SymbolExpr::Rational {
            num: Box::new(Self::from_factored(r.num())),
            den: Box::new(Self::from_factored(r.den())),
        }
    }

    pub fn from_symbol(s: &BoundarySymbol) -> Self {
        if !s.has_atoms() {
            return Self::from_rational(s.rational_part());
        }
        let mut items = vec![Self::from_rational(s.rational_part())];
        for f in s.atoms() {
            let atom = SymbolExpr::Atom { point: json(f.atom.point()), mass: f.atom.mass(), exp: f.exponent.signum() };
            items.extend(std::iter::repeat_n(atom, f.exponent.unsigned_abs() as usize));
        }
        SymbolExpr::Product(items)
    }
}

fn json(z: C64) -> ComplexJson {
    [z.re, z.im]
}

fn factored(leading: ComplexJson, roots: &[RootJson]) -> Result<FactoredPoly> {
    let roots = roots
        .iter()
        .map(|r| {
            if r.mult == 0 {
                return Err(Error::Schema("root multiplicity must be positive".into()));
            }
            Ok(match r.region {
                Some(region) => Root::with_region(c(r.z), r.mult, region),
                None => Root::new(c(r.z), r.mult),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactoredPoly::new(c(leading), roots))
}

fn blaschke(constant: ComplexJson, zeros: &[RootJson]) -> Result<BlaschkeProduct> {
    BlaschkeProduct::new(c(constant), zeros.iter().map(|r| (c(r.z), r.mult)).collect())
}

pub(crate) fn schema_error(e: serde_json::Error) -> Error {
    Error::Schema(format!("line {} column {}: {}", e.line(), e.column(), e))
}

/// `{"a": symbol, "b": symbol}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairExpr {
    pub a: SymbolExpr,
    pub b: SymbolExpr,
}

impl PairExpr {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(schema_error)
    }

    pub fn to_pair(&self) -> Result<SymbolPair> {
        SymbolPair::new(self.a.to_symbol()?, self.b.to_symbol()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn export_round_trips() {
        let text = r#"{"product": [
            {"rational": {"num": {"factored": {"leading": [2, 0], "roots": [{"z": [1, 0], "region": "T"}]}},
                          "den": {"factored": {"roots": [{"z": [0.5, 0.5], "mult": 2}]}}}},
            {"conj": {"atom": {"point": [-1, 0], "mass": 0.5}}}
        ]}"#;
        let s = SymbolExpr::parse(text).unwrap().to_symbol().unwrap();
        let back = SymbolExpr::from_symbol(&s).to_symbol().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn parses_every_form() {
        let text = r#"{"product": [
            {"poly": {"coeffs": [[1,0],[1,0]]}},
            {"factored": {"roots": [{"z": [1, 0], "region": "T"}]}},
            {"blaschke": {"zeros": [{"z": [0.5, 0]}]}},
            {"rational": {"num": {"zpow": 1}, "den": {"poly": {"coeffs": [[-2,0],[1,0]]}}}},
            {"conj": {"atom": {"point": [-1, 0], "mass": 1.0, "exp": 1}}}
        ]}"#;
        let s = SymbolExpr::parse(text).unwrap().to_symbol().unwrap();
        assert_eq!(s.atoms().len(), 1);
        assert_eq!(s.atoms()[0].exponent, -1);
        let z = C64::new(0.6, 0.8);
        let theta = (z - 1.0) / (z + 1.0);
        let expected = (z + 1.0) * (z - 1.0) * (z - 0.5) / (1.0 - z * 0.5) * z / (z - 2.0) * theta.exp().conj();
        assert!((s.eval(z).unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn schema_errors_carry_position() {
        let err = SymbolExpr::parse("{\"poly\": {\"coefs\": []}}").unwrap_err();
        let Error::Schema(msg) = err else { panic!() };
        assert!(msg.contains("line 1"));
        assert!(SymbolExpr::parse(r#"{"atom": {"point": [1,0], "mass": 1, "exp": 2}}"#).unwrap().to_symbol().is_err());
    }
}
