pub mod blowup;
pub mod error;
pub mod fpoly;
pub mod harness;
pub mod kangaroo;
pub mod oblique;
pub mod script;
pub mod shade;
pub mod zwickel;

pub use blowup::{BlowupOutcome, BlowupStep, Chart, InseparableForm, ResolutionState, Snapshot};
pub use error::{AlgebraError, Error, ParseError, Result};
pub use fpoly::{binom_mod_p, parse, parse_in, Exponent, FieldElement, Order, Poly, Prime, Ring, Substitution, UPoly};
pub use shade::{shade, Jump, Shade, ShadeResult};
