//! The shade invariant of `x^c + F(y)` with respect to the divisor `y^r`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blowup::InseparableForm;
use crate::error::{AlgebraError, Error, Result};
use crate::fpoly::{Order, Poly};

/// Shade value; `BoldRegular` when `F` is a c-th power (resolution done locally).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shade {
    Finite(u64),
    BoldRegular,
}

impl Shade {
    pub fn finite(self) -> Option<u64> {
        match self {
            Shade::Finite(s) => Some(s),
            Shade::BoldRegular => None,
        }
    }
}

impl fmt::Display for Shade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shade::Finite(s) => write!(f, "{s}"),
            Shade::BoldRegular => write!(f, "bold-regular"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShadeResult {
    pub shade: Shade,
    /// `normalized / y^r`.
    pub residual: Poly,
    /// `h` with `F - h^c = normalized`, i.e. the coordinate change `x -> x - h`.
    pub witness: Poly,
    /// `F` after the minimal coordinate change realizing the shade.
    pub normalized: Poly,
}

/// Order of the coefficient ideal of `f` with respect to `{x = 0}`, where `o` is the order of `f`.
///
/// `min_{i<o} (o!/(o-i)) * ord a_i` for `f = sum a_i(y) x^i`.
pub fn coeff_order(f: &Poly, x: usize, o: u64) -> Result<Order> {
    if o == 0 {
        return Err(Error::Precondition("coefficient ideal needs order o >= 1".into()));
    }
    if x >= f.nvars() {
        return Err(AlgebraError::Arity { expected: f.nvars(), got: x + 1 }.into());
    }
    let fact = (1..=o).try_fold(1u64, |acc, i| acc.checked_mul(i)).ok_or(AlgebraError::Overflow)?;
    let mut best = Order::Infinite;
    for (e, _) in f.terms() {
        let i = e[x] as u64;
        if i >= o {
            continue;
        }
        let rest: u64 = e.iter().enumerate().filter(|(j, _)| *j != x).map(|(_, &k)| k as u64).sum();
        let w = (fact / (o - i)).checked_mul(rest).ok_or(AlgebraError::Overflow)?;
        best = best.min(Order::Finite(w));
    }
    Ok(best)
}

/// Shade of the form, realized by removing the c-power monomials of `F` that sit below the
/// order of the rest (or are not divisible by `y^r`).
pub fn shade(form: &InseparableForm) -> Result<ShadeResult> {
    let f = form.f();
    let c = form.c();
    let r = form.r();
    let c32 = c as u32;
    let (nonpower, all_powers) = f.strip_c_power_monomials(c)?;
    let ring = f.ring();
    if nonpower.is_zero() {
        return Ok(ShadeResult { shade: Shade::BoldRegular, residual: ring.zero(), witness: all_powers, normalized: ring.zero() });
    }
    let o = nonpower.order().finite().expect("nonzero");
    let keep = |e: &Vec<u32>| {
        let is_power = e.iter().all(|&k| k % c32 == 0);
        let deg: u64 = e.iter().map(|&k| k as u64).sum();
        !is_power || (deg >= o && e.iter().zip(r).all(|(a, b)| a >= b))
    };
    let normalized = f.filter_terms(keep);
    let removed = f.filter_terms(|e| !keep(e));
    let (_, witness) = removed.strip_c_power_monomials(c)?;
    let residual = normalized.divide_monomial(r)?;
    let total: u64 = r.iter().map(|&k| k as u64).sum();
    Ok(ShadeResult { shade: Shade::Finite(o - total), residual, witness, normalized })
}

/// How the pair (order, shade) moved across a blowup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Jump {
    OrderDropped,
    Resolved,
    Drop,
    Constant,
    KangarooJump,
}

pub fn shade_jump(order_before: Order, before: Shade, order_after: Order, after: Shade) -> Jump {
    if order_after < order_before {
        return Jump::OrderDropped;
    }
    match (before, after) {
        (_, Shade::BoldRegular) => Jump::Resolved,
        (Shade::BoldRegular, Shade::Finite(_)) => Jump::KangarooJump,
        (Shade::Finite(a), Shade::Finite(b)) if b > a => Jump::KangarooJump,
        (Shade::Finite(a), Shade::Finite(b)) if b < a => Jump::Drop,
        _ => Jump::Constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::{parse_in, Prime, Ring};

    fn yz(p: u64) -> Ring {
        Ring::new(Prime::new(p).unwrap(), &["y", "z"])
    }

    fn form(f: &str, r: [u32; 2], p: u64) -> InseparableForm {
        InseparableForm::new(1, parse_in(f, &yz(p)).unwrap(), r.to_vec()).unwrap()
    }

    #[test]
    fn example_shades() {
        assert_eq!(shade(&form("y^7+y*z^4", [0, 0], 2)).unwrap().shade, Shade::Finite(5));
        let s = shade(&form("y^3*z^3*(y^2+z^2)", [3, 3], 2)).unwrap();
        assert_eq!(s.shade, Shade::Finite(2));
        assert!(s.witness.is_zero());
        let s = shade(&form("z^6*(y^5+y^4+y^3+y^2)", [0, 6], 2)).unwrap();
        assert_eq!(s.shade, Shade::Finite(3));
        assert_eq!(s.witness.to_string(), "y*z^3");
        assert_eq!(s.residual, parse_in("y^5+y^4+y^3", &yz(2)).unwrap());
    }

    #[test]
    fn bold_regular() {
        let s = shade(&form("y^2+z^4", [0, 0], 2)).unwrap();
        assert_eq!(s.shade, Shade::BoldRegular);
        assert_eq!(s.witness.to_string(), "z^2+y");
    }

    #[test]
    fn coefficient_ideal_orders() {
        let ring = Ring::new(Prime::new(5).unwrap(), &["x", "y"]);
        let f = parse_in("x^2+x*y^3+y^5", &ring).unwrap();
        assert_eq!(coeff_order(&f, 0, 2).unwrap(), Order::Finite(5));
        let g = parse_in("x^3+y^4", &ring).unwrap();
        assert_eq!(coeff_order(&g, 0, 3).unwrap(), Order::Finite(8));
        assert_eq!(coeff_order(&parse_in("x^3", &ring).unwrap(), 0, 3).unwrap(), Order::Infinite);
        assert!(coeff_order(&g, 0, 0).is_err());
    }

    #[test]
    fn jump_classes() {
        let two = Order::Finite(2);
        assert_eq!(shade_jump(two, Shade::Finite(2), two, Shade::Finite(3)), Jump::KangarooJump);
        assert_eq!(shade_jump(two, Shade::Finite(5), two, Shade::Finite(2)), Jump::Drop);
        assert_eq!(shade_jump(two, Shade::Finite(2), two, Shade::Finite(2)), Jump::Constant);
        assert_eq!(shade_jump(two, Shade::Finite(2), Order::Finite(1), Shade::Finite(0)), Jump::OrderDropped);
    }

    /// Maximize ord(F + h^c) over every h of degree <= 4 in two variables over F_2.
    #[test]
    fn matches_brute_force_over_coordinate_changes() {
        let ring = yz(2);
        let monos: Vec<Vec<u32>> = (0..=4u32).flat_map(|d| (0..=d).map(move |i| vec![i, d - i])).filter(|e| e != &vec![0, 0]).collect();
        let samples = ["y^2*z^2+y^3*z^2+y^5", "z^6*(y^5+y^4+y^3+y^2)", "y^2+y^3+z^5", "y^4+z^4+y^3*z^3", "y^3+y*z^2+z^6"];
        for s in samples {
            let f = parse_in(s, &ring).unwrap();
            let mut best = Order::Finite(0);
            for mask in 0u32..(1 << monos.len()) {
                let mut h = ring.zero();
                for (i, m) in monos.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        h = &h + &ring.monomial(m.clone(), crate::FieldElement::one(ring.modulus()));
                    }
                }
                best = best.max((&f + &h.pow(2)).order());
            }
            let sh = shade(&InseparableForm::new(1, f.clone(), vec![0, 0]).unwrap()).unwrap();
            let want = match sh.shade {
                Shade::Finite(k) => Order::Finite(k),
                Shade::BoldRegular => Order::Infinite,
            };
            // h of degree <= 4 reaches every c-power monomial present in the samples
            assert_eq!(best, want, "{s}");
            assert_eq!(&(&f - &sh.witness.pow(2)), &sh.normalized);
        }
    }
}
