//! Exact arithmetic in F_p[x_1, ..., x_n].

pub mod binom;
pub mod field;
pub mod parse;
pub mod poly;
pub mod univariate;

pub use binom::binom_mod_p;
pub use field::{FieldElement, Prime, MAX_PRIME};
pub use parse::{parse, parse_in};
pub use poly::{Exponent, Order, Poly, Ring, Substitution};
pub use univariate::UPoly;
