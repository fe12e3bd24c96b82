//! Exact arithmetic for the symbol class: polynomials, rational functions,
//! finite Blaschke products, singular inner atoms and their conjugates on the circle.

pub mod expr;
pub mod factored;
pub mod inner;
pub mod poly;
pub mod rational;
pub mod series;
pub mod symbol;

pub use expr::{PairExpr, SymbolExpr};
pub use factored::{FactoredPoly, Region, Root, CLASSIFY_TOL, COPRIME_TOL};
pub use inner::{BlaschkeProduct, SingularInnerAtom};
pub use poly::ComplexPoly;
pub use rational::{PartialFractions, PolePart, RationalFn};
pub use symbol::{to_polynomial_pair, AtomFactor, BoundaryFn, BoundarySymbol, PolynomialPair, SymbolPair};
