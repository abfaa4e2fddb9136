//! Fixtures shared by the benchmarks.

use kangaroo_core::zwickel::ZwickelContext;
use kangaroo_core::{parse_in, InseparableForm, Poly, Prime, Ring};

pub fn prime(n: u64) -> Prime {
    Prime::new(n).expect("prime")
}

/// A dense-ish polynomial in three variables, `(y+z+w+1)^n`.
pub fn dense(p: u64, n: u32) -> Poly {
    let ring = Ring::new(prime(p), &["y", "z", "w"]);
    parse_in("y+z+w+1", &ring).unwrap().pow(n as u64)
}

/// The antelope of the golden sequence, x^2 + y^3 z^3 (y^2 + z^2) with r = (3,3).
pub fn antelope() -> InseparableForm {
    let ring = Ring::new(prime(2), &["y", "z"]);
    InseparableForm::new(1, parse_in("y^3*z^3*(y^2+z^2)", &ring).unwrap(), vec![3, 3]).unwrap()
}

/// Three variables, c = 4, so the matrix has a few hundred rows.
pub fn zwickel_context() -> ZwickelContext {
    let h = vec![1; 6];
    ZwickelContext::new(prime(2), 3, 2, 8, vec![3, 2, 1], 1, h).unwrap()
}
