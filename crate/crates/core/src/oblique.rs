//! Hybrid and oblique polynomials: closed forms, the obliqueness test, the jet construction and
//! the exhaustive uniqueness search.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{AlgebraError, Error, Result};
use crate::fpoly::{binom_mod_p, FieldElement, Order, Poly, Prime, Ring, Substitution, UPoly};

fn ring2(p: Prime, a: &str, b: &str) -> Ring {
    Ring::new(p, &[a, b])
}

/// `H_r^k(y, w) = sum_i C(k+r, i+r) y^i w^(k-i)`.
pub fn hybrid(r: u32, k: u32, p: Prime) -> Poly {
    let ring = ring2(p, "y", "w");
    let mut out = ring.zero();
    for i in 0..=k {
        let c = binom_mod_p((k + r) as i64, (i + r) as u64, p);
        out = &out + &ring.monomial(vec![i, k - i], FieldElement::from_u64(c, p));
    }
    out
}

#[derive(Debug, Clone)]
pub struct HybridOblique {
    pub poly: Poly,
    /// `C(k+r, k+1) = 0 mod p`: the polynomial is a p-th power up to p-power monomials.
    pub degenerate: bool,
}

/// `y^r z^s H_r^k(y, tz - y)` over `(y, z)`.
pub fn hybrid_oblique(r: u32, s: u32, k: u32, t: u64, p: Prime) -> Result<HybridOblique> {
    if t % p.get() == 0 {
        return Err(Error::Precondition("translation t must be nonzero mod p".into()));
    }
    let ring = ring2(p, "y", "z");
    let y = ring.gen(0);
    let w = &(&ring.gen(1) * &ring.constant(t as i64)) - &y;
    let h = hybrid(r, k, p).substitute(&Substitution::new(&ring, vec![y, w])?)?;
    let poly = h.shift(&[r, s]);
    let degenerate = binom_mod_p((k + r) as i64, (k + 1) as u64, p) == 0;
    Ok(HybridOblique { poly, degenerate })
}

/// `z^s * integral of y^(r-1) (y - tz)^k dy`, keeping the terms with `p` not dividing `r+i`.
pub fn integral_oblique(s: u32, r: u32, k: u32, t: u64, p: Prime) -> Result<Poly> {
    if t % p.get() == 0 {
        return Err(Error::Precondition("translation t must be nonzero mod p".into()));
    }
    let ring = ring2(p, "y", "z");
    let mut out = ring.zero();
    for i in 0..=k {
        let n = (r + i) as u64;
        let Some(inv) = p.inv(n % p.get()) else { continue };
        let sign = if (k - i) % 2 == 1 { p.get() - 1 } else { 1 };
        let c = [binom_mod_p(k as i64, i as u64, p), inv, sign, p.pow_mod(t, (k - i) as u64)]
            .into_iter()
            .fold(1, |a, b| p.mul(a, b));
        out = &out + &ring.monomial(vec![r + i, s + k - i], FieldElement::from_u64(c, p));
    }
    Ok(out)
}

/// `(-1)^k C(k+r, k+1) (k+1)`.
pub fn wagner_scalar(r: u32, k: u32, p: Prime) -> FieldElement {
    let b = binom_mod_p((k + r) as i64, (k + 1) as u64, p);
    let v = FieldElement::from_u64(p.mul(b, (k as u64 + 1) % p.get()), p);
    if k % 2 == 1 { -v } else { v }
}

/// Order of `P(y_i + t_i y_chart)` with its p-power monomials deleted, in the non-chart variables.
pub fn oblique_order(pp: &Poly, chart: usize, t: &[u64]) -> Result<Order> {
    let ring = pp.ring();
    if t.len() != ring.nvars() || chart >= ring.nvars() {
        return Err(AlgebraError::Arity { expected: ring.nvars(), got: t.len() }.into());
    }
    let ych = ring.gen(chart);
    let images = (0..ring.nvars())
        .map(|i| if i == chart { ych.clone() } else { &ring.gen(i) + &(&ych * &ring.constant(t[i] as i64)) })
        .collect();
    let plus = pp.substitute(&Substitution::new(ring, images)?)?;
    let (stripped, _) = plus.strip_c_power_monomials(ring.modulus().get())?;
    let others: Vec<usize> = (0..ring.nvars()).filter(|&i| i != chart).collect();
    Ok(stripped.order_in(&others))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Obliqueness {
    Oblique,
    NotOblique,
    /// `P` is itself a p-th power (it strips to zero).
    Disqualified,
}

#[derive(Debug, Clone)]
pub struct ObliquenessReport {
    pub verdict: Obliqueness,
    pub k: u64,
    pub order: Order,
    /// Whether the order stayed at most `k+1`.
    pub moh_ceiling_ok: bool,
    /// Squarefree-decomposition verdict, bivariate inputs only.
    pub pth_power_factor: Option<bool>,
}

/// Test `P = y^r g`, `g` homogeneous of degree `k`, for obliqueness at translation `t`.
pub fn obliqueness_test(pp: &Poly, r: &[u32], chart: usize, t: &[u64]) -> Result<ObliquenessReport> {
    if pp.is_zero() {
        return Err(AlgebraError::ZeroPolynomial("obliqueness test").into());
    }
    if !pp.is_homogeneous() {
        return Err(Error::Precondition("P must be homogeneous".into()));
    }
    pp.divide_monomial(r).map_err(|_| Error::Precondition("y^r must divide P".into()))?;
    let p = pp.modulus();
    if t.iter().enumerate().any(|(i, &ti)| i != chart && ti % p.get() == 0) {
        return Err(Error::Precondition("translation entries off the chart must be nonzero".into()));
    }
    let total: u64 = r.iter().map(|&x| x as u64).sum();
    let k = pp.total_degree().expect("nonzero") - total;
    let pth_power_factor = if pp.nvars() == 2 { Some(pth_power_factor_test(pp)?) } else { None };
    let (stripped, _) = pp.strip_c_power_monomials(p.get())?;
    if stripped.is_zero() {
        return Ok(ObliquenessReport { verdict: Obliqueness::Disqualified, k, order: Order::Infinite, moh_ceiling_ok: true, pth_power_factor });
    }
    let order = oblique_order(pp, chart, t)?;
    let verdict = if order >= Order::Finite(k + 1) { Obliqueness::Oblique } else { Obliqueness::NotOblique };
    Ok(ObliquenessReport { verdict, k, order, moh_ceiling_ok: order <= Order::Finite(k + 1), pth_power_factor })
}

/// Whether a bivariate homogeneous `P` has a factor `q^p` with `q` nonconstant.
pub fn pth_power_factor_test(pp: &Poly) -> Result<bool> {
    if pp.nvars() != 2 {
        return Err(Error::Algebra(AlgebraError::Unsupported(format!(
            "p-th power factor detection needs 2 variables, got {}",
            pp.nvars()
        ))));
    }
    if pp.is_zero() || !pp.is_homogeneous() {
        return Err(Error::Precondition("P must be nonzero and homogeneous".into()));
    }
    let p = pp.modulus();
    let d = pp.total_degree().expect("nonzero") as usize;
    // dehomogenize at the second variable: P(u, 1)
    let mut coeffs = vec![0u64; d + 1];
    for (e, c) in pp.terms() {
        coeffs[e[0] as usize] = c.value();
    }
    let u = UPoly::new(p, coeffs);
    // the second variable divides P with multiplicity d - deg P(u, 1)
    let at_infinity = (d - u.degree().expect("nonzero")) as u64;
    Ok(at_infinity >= p.get() || u.has_pth_power_factor())
}

/// Build `y^r g` from `v` via `y_m^(r_m) * homog(z^s * tau^-1 [(z+1)^(-s) v^p]_k)`.
///
/// `v` lives in the same ring as the result and must not involve the chart variable.
pub fn jet_construction(r: &[u32], chart: usize, k: u32, v: &Poly) -> Result<Poly> {
    let ring = v.ring();
    let p = ring.modulus();
    let m = ring.nvars();
    if r.len() != m || chart >= m {
        return Err(AlgebraError::Arity { expected: m, got: r.len() }.into());
    }
    if v.is_zero() {
        return Err(AlgebraError::ZeroPolynomial("jet construction").into());
    }
    if v.degree_in(chart).unwrap_or(0) > 0 {
        return Err(Error::Precondition("v must not involve the chart variable".into()));
    }
    let one = ring.one();
    let mut base = one.clone();
    for i in (0..m).filter(|&i| i != chart) {
        base = &base * &(&ring.gen(i) + &one).pow(r[i] as u64);
    }
    let jet = (&base.inverse_series(k as u64)? * &v.pow(p.get())).truncate(k as u64);
    let images = (0..m).map(|i| if i == chart { ring.gen(i) } else { &ring.gen(i) - &one }).collect();
    let h = jet.substitute(&Substitution::new(ring, images)?)?;
    let mut s = r.to_vec();
    s[chart] = 0;
    let q = h.shift(&s);
    let deg: u32 = s.iter().sum::<u32>() + k;
    let mut out = ring.zero();
    for (e, c) in q.terms() {
        let mut e2 = e.clone();
        let d: u32 = e.iter().sum();
        e2[chart] = deg - d + r[chart];
        out = &out + &ring.monomial(e2, c);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ObliqueClass {
    /// The member with the fewest terms.
    pub representative: Poly,
    /// Canonical key: p-power monomials deleted, leading coefficient 1.
    pub key: Poly,
    pub members: usize,
}

/// Exhaustive search for oblique `y^r g` with `g` homogeneous of degree `k`, the chart being the
/// last variable and `t = (1, ..., 1)`. Classes are taken modulo p-power monomials and scalars.
pub fn uniqueness_search(ring: &Ring, r: &[u32], k: u32, max_candidates: u64) -> Result<Vec<ObliqueClass>> {
    let p = ring.modulus();
    let m = ring.nvars();
    if r.len() != m || m == 0 {
        return Err(AlgebraError::Arity { expected: m, got: r.len() }.into());
    }
    let monos = homogeneous_exponents(m, k);
    let n = monos.len() as u32;
    let count = p.get().checked_pow(n).filter(|&c| c <= max_candidates).ok_or_else(|| {
        Error::Budget(format!("{}^{} candidates exceed the budget {max_candidates}", p.get(), n))
    })?;
    let chart = m - 1;
    let mut t = vec![1u64; m];
    t[chart] = 0;
    let found: Vec<(Poly, Poly)> = (1..count)
        .into_par_iter()
        .filter_map(|idx| {
            let mut x = idx;
            let mut g = ring.zero();
            for e in &monos {
                let c = x % p.get();
                x /= p.get();
                if c != 0 {
                    g = &g + &ring.monomial(e.clone(), FieldElement::from_u64(c, p));
                }
            }
            let pp = g.shift(r);
            let rep = obliqueness_test(&pp, r, chart, &t).ok()?;
            (rep.verdict == Obliqueness::Oblique).then(|| (class_key(&pp), pp))
        })
        .collect();
    let mut classes: BTreeMap<String, ObliqueClass> = BTreeMap::new();
    for (key, pp) in found {
        let entry = classes.entry(key.to_string()).or_insert_with(|| ObliqueClass { representative: pp.clone(), key: key.clone(), members: 0 });
        entry.members += 1;
        let better = (pp.num_terms(), pp.to_string()) < (entry.representative.num_terms(), entry.representative.to_string());
        if better {
            entry.representative = pp;
        }
    }
    Ok(classes.into_values().collect())
}

/// Delete p-power monomials and scale the leading (display-first) coefficient to 1.
pub fn class_key(pp: &Poly) -> Poly {
    let p = pp.modulus();
    let (stripped, _) = pp.strip_c_power_monomials(p.get()).expect("p is a power of p");
    match stripped.sorted_terms().first() {
        Some(&(_, lead)) => stripped.scale(FieldElement::from_u64(lead, p).inv().expect("nonzero")),
        None => stripped,
    }
}

/// All exponent vectors of `m` variables with total degree `k`, in lexicographic order.
pub fn homogeneous_exponents(m: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m == 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=k {
            prefix.push(a);
            rec(m - 1, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::parse_in;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn yz(n: u64) -> Ring {
        ring2(p(n), "y", "z")
    }

    #[test]
    fn hybrid_examples() {
        assert_eq!(hybrid(1, 2, p(2)).to_string(), "y^2+y*w+w^2");
        assert_eq!(hybrid(3, 2, p(2)).to_string(), "y^2+y*w");
        let ring = ring2(p(5), "y", "w");
        let full = parse_in("(y+w)^4", &ring).unwrap();
        assert_eq!(hybrid(0, 4, p(5)), full);
    }

    /// H_r^k is the polynomial part of y^(-r) (y+w)^(k+r).
    #[test]
    fn laurent_identity() {
        for q in [2u64, 3, 5, 7] {
            let ring = ring2(p(q), "y", "w");
            for r in 0..=10u32 {
                for k in 0..=10u32 {
                    let full = parse_in("y+w", &ring).unwrap().pow((k + r) as u64);
                    let poly_part = full.filter_terms(|e| e[0] >= r).divide_monomial(&[r, 0]).unwrap();
                    assert_eq!(hybrid(r, k, p(q)), poly_part, "p={q} r={r} k={k}");
                }
            }
        }
    }

    #[test]
    fn hybrid_oblique_examples() {
        let h = hybrid_oblique(3, 3, 2, 1, p(2)).unwrap();
        assert_eq!(h.poly.to_string(), "y^4*z^4");
        assert!(h.degenerate);
        let h = hybrid_oblique(1, 1, 1, 1, p(3)).unwrap();
        assert_eq!(h.poly, parse_in("y*z*(2*z-y)", &yz(3)).unwrap());
        assert!(!h.degenerate);
        assert_eq!(hybrid_oblique(2, 5, 0, 1, p(3)).unwrap().poly.to_string(), "y^2*z^5");
    }

    #[test]
    fn integral_examples() {
        let f = integral_oblique(3, 3, 2, 1, p(2)).unwrap();
        assert_eq!(f.format_factored(), "y^3*z^3*(y^2+z^2)");
        // k = 0: (1/r) y^r z^s
        let g = integral_oblique(4, 2, 0, 2, p(5)).unwrap();
        assert_eq!(g, parse_in("3*y^2*z^4", &yz(5)).unwrap());
    }

    #[test]
    fn wagner_examples() {
        assert!(wagner_scalar(3, 2, p(2)).is_zero());
        for r in 0..8 {
            assert_eq!(wagner_scalar(r, 0, p(7)).value(), r as u64 % 7);
        }
    }

    #[test]
    fn obliqueness_examples() {
        let ring = yz(2);
        // P = y_2 y_1 (y_2^2 + y_1^2) with y_2 = z the chart
        let pp = parse_in("z*y*(z^2+y^2)", &ring).unwrap();
        let rep = obliqueness_test(&pp, &[1, 1], 1, &[1, 0]).unwrap();
        assert_eq!(rep.verdict, Obliqueness::Oblique);
        assert_eq!(rep.order, Order::Finite(3));
        assert_eq!(rep.pth_power_factor, Some(true));
        let antelope = parse_in("y^3*z^3*(y^2+z^2)", &ring).unwrap();
        assert_eq!(obliqueness_test(&antelope, &[3, 3], 1, &[1, 0]).unwrap().verdict, Obliqueness::Oblique);
        let deg = parse_in("y^4*z^4", &ring).unwrap();
        assert_eq!(obliqueness_test(&deg, &[3, 3], 1, &[1, 0]).unwrap().verdict, Obliqueness::Disqualified);
        let not = parse_in("y^3*z^3*(y^2+y*z)", &ring).unwrap();
        assert_eq!(obliqueness_test(&not, &[3, 3], 1, &[1, 0]).unwrap().verdict, Obliqueness::NotOblique);
    }

    #[test]
    fn pth_power_factors() {
        let ring = yz(2);
        assert!(pth_power_factor_test(&parse_in("y^3*z^3*(y^2+z^2)", &ring).unwrap()).unwrap());
        for q in [2u64, 3, 5] {
            let ring = yz(q);
            assert!(!pth_power_factor_test(&parse_in("y*z", &ring).unwrap()).unwrap());
            let f = &parse_in("y+z", &ring).unwrap().pow(q) * &parse_in("y", &ring).unwrap();
            assert!(pth_power_factor_test(&f).unwrap());
            assert!(pth_power_factor_test(&parse_in("z^5", &ring).unwrap()).unwrap());
        }
        let three = Ring::new(p(2), &["a", "b", "c"]);
        assert!(pth_power_factor_test(&parse_in("a*b*c", &three).unwrap()).is_err());
    }

    #[test]
    fn jet_examples() {
        let ring = yz(2);
        let v = parse_in("y", &ring).unwrap();
        let pp = jet_construction(&[3, 3], 1, 2, &v).unwrap();
        assert_eq!(pp.format_factored(), "y^3*z^3*(y^2+z^2)");
        // constant v: the jet is y, giving the p-th power y^4 z^4
        let pp = jet_construction(&[3, 3], 1, 2, &ring.one()).unwrap();
        assert_eq!(pp.to_string(), "y^4*z^4");
        assert_eq!(jet_construction(&[2, 5], 1, 0, &ring.one()).unwrap().to_string(), "y^2*z^5");
        assert!(jet_construction(&[1, 1], 1, 1, &ring.zero()).is_err());
    }

    #[test]
    fn unique_class_for_the_antelope() {
        let classes = uniqueness_search(&yz(2), &[3, 3], 2, 1 << 20).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].representative.format_factored(), "y^3*z^3*(y^2+z^2)");
        // condition (1) fails: 3 + 3 + 1 odd
        assert!(uniqueness_search(&yz(2), &[3, 3], 1, 1 << 20).unwrap().is_empty());
        // condition (2) fails: r_1 even
        assert!(uniqueness_search(&yz(2), &[2, 3], 3, 1 << 20).unwrap().is_empty());
        assert!(matches!(uniqueness_search(&yz(3), &[1, 1], 30, 1000), Err(Error::Budget(_))));
    }
}
