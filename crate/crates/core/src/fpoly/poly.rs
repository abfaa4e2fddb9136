//! Sparse multivariate polynomials over F_p.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::{FieldElement, Prime};
use crate::error::AlgebraError;

/// Exponent vector, one entry per ring variable.
pub type Exponent = Vec<u32>;

/// Order of a polynomial; the zero polynomial has infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinite)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A polynomial ring F_p[v_1, ..., v_n] with named variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    p: Prime,
    vars: Arc<[String]>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(p: Prime, vars: &[S]) -> Self {
        Ring { p, vars: vars.iter().map(|v| v.as_ref().to_string()).collect() }
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, AlgebraError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    pub fn zero(&self) -> Poly {
        Poly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Poly {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> Poly {
        self.monomial(vec![0; self.nvars()], FieldElement::new(c, self.p))
    }

    pub fn element(&self, c: FieldElement) -> Poly {
        self.monomial(vec![0; self.nvars()], c)
    }

    /// The i-th variable.
    pub fn gen(&self, i: usize) -> Poly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.monomial(e, FieldElement::one(self.p))
    }

    pub fn var(&self, name: &str) -> Result<Poly, AlgebraError> {
        Ok(self.gen(self.index_of(name)?))
    }

    pub fn monomial(&self, exponent: Exponent, coeff: FieldElement) -> Poly {
        assert_eq!(exponent.len(), self.nvars(), "exponent arity");
        assert_eq!(coeff.modulus(), self.p, "coefficient modulus");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff.value());
        }
        Poly { ring: self.clone(), terms }
    }

    /// Build from (exponent, integer coefficient) pairs; like terms are combined.
    pub fn from_terms<I>(&self, terms: I) -> Result<Poly, AlgebraError>
    where
        I: IntoIterator<Item = (Exponent, i64)>,
    {
        let mut out = self.zero();
        for (e, c) in terms {
            if e.len() != self.nvars() {
                return Err(AlgebraError::Arity { expected: self.nvars(), got: e.len() });
            }
            out.add_term(e, self.p.reduce(c));
        }
        Ok(out)
    }

    pub fn same_as(&self, other: &Ring) -> Result<(), AlgebraError> {
        if self.p != other.p {
            return Err(AlgebraError::ModulusMismatch { left: self.p.get(), right: other.p.get() });
        }
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.join(","),
                right: other.vars.join(","),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.p, self.vars.join(","))
    }
}

/// Sparse polynomial: exponent vector to nonzero residue.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Exponent, u64>,
}

impl Poly {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn modulus(&self) -> Prime {
        self.ring.p
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, FieldElement)> + '_ {
        let p = self.ring.p;
        self.terms.iter().map(move |(e, &c)| (e, FieldElement::from_u64(c, p)))
    }


    pub fn coeff(&self, exponent: &[u32]) -> FieldElement {
        FieldElement::from_u64(self.terms.get(exponent).copied().unwrap_or(0), self.ring.p)
    }

    /// The constant term.
    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub(crate) fn add_term(&mut self, exponent: Exponent, coeff: u64) {
        if coeff == 0 {
            return;
        }
        let p = self.ring.p;
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = p.add(*o.get(), coeff);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| degree(e)).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.ring.same_as(&other.ring)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.ring.same_as(&other.ring)?;
        let p = self.ring.p;
        let mut out = self.ring.zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, p.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        assert_eq!(c.modulus(), self.ring.p);
        if c.is_zero() {
            return self.ring.zero();
        }
        let p = self.ring.p;
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, &v)| (e.clone(), p.mul(v, c.value()))).collect(),
        }
    }

    /// Multiply by the monomial `x^exponent`.
    pub fn shift(&self, exponent: &[u32]) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, &v)| (e.iter().zip(exponent).map(|(a, b)| a + b).collect(), v))
                .collect(),
        }
    }

    /// Minimum over terms of the exponent sum restricted to `subset`.
    pub fn order_in(&self, subset: &[usize]) -> Order {
        self.terms
            .keys()
            .map(|e| subset.iter().map(|&i| e[i] as u64).sum())
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Order with respect to named variables.
    pub fn order_in_vars<S: AsRef<str>>(&self, names: &[S]) -> Result<Order, AlgebraError> {
        let idx = names
            .iter()
            .map(|n| self.ring.index_of(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.order_in(&idx))
    }

    /// Total order: minimal total degree of a term.
    pub fn order(&self) -> Order {
        self.terms.keys().map(|e| degree(e)).min().map_or(Order::Infinite, Order::Finite)
    }

    pub fn weighted_order(&self, weights: &[u64]) -> Result<Order, AlgebraError> {
        if weights.len() != self.nvars() {
            return Err(AlgebraError::Arity { expected: self.nvars(), got: weights.len() });
        }
        Ok(self
            .terms
            .keys()
            .map(|e| weighted_degree(e, weights))
            .min()
            .map_or(Order::Infinite, Order::Finite))
    }

    pub fn is_weighted_homogeneous(&self, weights: &[u64]) -> bool {
        let mut degs = self.terms.keys().map(|e| weighted_degree(e, weights));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_weighted_homogeneous(&vec![1; self.nvars()])
    }

    /// Sum of the terms of minimal total degree (the tangent cone).
    pub fn initial_form(&self) -> Result<Poly, AlgebraError> {
        let Order::Finite(o) = self.order() else {
            return Err(AlgebraError::ZeroPolynomial("initial form"));
        };
        Ok(self.filter_terms(|e| degree(e) == o))
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u64) -> Poly {
        self.filter_terms(|e| degree(e) == d)
    }

    pub fn filter_terms(&self, keep: impl Fn(&Exponent) -> bool) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, &c)| (e.clone(), c)).collect(),
        }
    }

    /// Keep the terms of total degree at most `k`.
    pub fn truncate(&self, k: u64) -> Poly {
        self.filter_terms(|e| degree(e) <= k)
    }

    /// Split off every term whose exponent is componentwise divisible by `c = p^e`, `e >= 1`.
    ///
    /// Returns `(stripped, witness)` with `self = stripped + witness^c`. Every residue in
    /// F_p is its own c-th root, so the witness carries the stripped coefficients unchanged.
    pub fn strip_c_power_monomials(&self, c: u64) -> Result<(Poly, Poly), AlgebraError> {
        let p = self.ring.p;
        if p.log_of_power(c).is_none() {
            return Err(AlgebraError::NotPrimePower { c, p: p.get() });
        }
        let c32 = u32::try_from(c).map_err(|_| AlgebraError::Overflow)?;
        let mut stripped = self.ring.zero();
        let mut witness = self.ring.zero();
        for (e, &v) in &self.terms {
            if e.iter().all(|&x| x % c32 == 0) {
                witness.terms.insert(e.iter().map(|&x| x / c32).collect(), v);
            } else {
                stripped.terms.insert(e.clone(), v);
            }
        }
        Ok((stripped, witness))
    }

    /// Componentwise minimum of the exponents (the largest monomial dividing `self`).
    pub fn monomial_content(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()))
    }

    pub fn divide_monomial(&self, m: &[u32]) -> Result<Poly, AlgebraError> {
        if m.len() != self.nvars() {
            return Err(AlgebraError::Arity { expected: self.nvars(), got: m.len() });
        }
        let mut terms = BTreeMap::new();
        for (e, &v) in &self.terms {
            if e.iter().zip(m).any(|(a, b)| a < b) {
                return Err(AlgebraError::NotDivisible { exponent: e.clone() });
            }
            terms.insert(e.iter().zip(m).map(|(a, b)| a - b).collect(), v);
        }
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    /// Exact division by an arbitrary nonzero polynomial (lexicographic leading terms).
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, AlgebraError> {
        self.ring.same_as(&divisor.ring)?;
        let Some((lead_e, &lead_c)) = divisor.terms.last_key_value() else {
            return Err(AlgebraError::ZeroPolynomial("division"));
        };
        if divisor.terms.len() == 1 {
            let q = self.divide_monomial(lead_e)?;
            let inv = self.ring.p.inv(lead_c).expect("nonzero");
            return Ok(q.scale(FieldElement::from_u64(inv, self.ring.p)));
        }
        let p = self.ring.p;
        let inv = p.inv(lead_c).expect("nonzero");
        let mut rem = self.clone();
        let mut quot = self.ring.zero();
        while let Some((e, &c)) = rem.terms.last_key_value() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return Err(AlgebraError::NotDivisible { exponent: e.clone() });
            }
            let qe: Exponent = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = p.mul(c, inv);
            quot.add_term(qe.clone(), qc);
            for (de, &dc) in &divisor.terms {
                let te: Exponent = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, p.neg(p.mul(dc, qc)));
            }
        }
        Ok(quot)
    }

    /// Multiplicative inverse modulo terms of total degree greater than `degree`.
    pub fn inverse_series(&self, degree: u64) -> Result<Poly, AlgebraError> {
        let c0 = self.constant_term();
        let inv0 = c0.inv().ok_or(AlgebraError::NotInvertible)?;
        // self = c0 * (1 - q), q without constant term
        let normalized = self.scale(inv0);
        let q = &self.ring.one() - &normalized;
        let mut acc = self.ring.one();
        let mut qpow = self.ring.one();
        for _ in 0..degree {
            qpow = (&qpow * &q).truncate(degree);
            if qpow.is_zero() {
                break;
            }
            acc = &acc + &qpow;
        }
        Ok(acc.truncate(degree).scale(inv0))
    }

    /// Evaluate at a point of F_p^n.
    pub fn evaluate(&self, point: &[u64]) -> Result<FieldElement, AlgebraError> {
        if point.len() != self.nvars() {
            return Err(AlgebraError::Arity { expected: self.nvars(), got: point.len() });
        }
        let p = self.ring.p;
        let mut acc = 0u64;
        for (e, &c) in &self.terms {
            let v = e.iter().zip(point).fold(c, |a, (&k, &x)| p.mul(a, p.pow_mod(x, k as u64)));
            acc = p.add(acc, v);
        }
        Ok(FieldElement::from_u64(acc, p))
    }

    /// Apply a substitution; the result lives in the substitution's target ring.
    pub fn substitute(&self, s: &Substitution) -> Result<Poly, AlgebraError> {
        if s.images.len() != self.nvars() {
            return Err(AlgebraError::Arity { expected: self.nvars(), got: s.images.len() });
        }
        if s.target.p != self.ring.p {
            return Err(AlgebraError::ModulusMismatch {
                left: self.ring.p.get(),
                right: s.target.p.get(),
            });
        }
        // cache powers of every image up to the needed degree
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(self.nvars());
        for (i, img) in s.images.iter().enumerate() {
            let maxdeg = self.degree_in(i).unwrap_or(0) as usize;
            let mut pw = Vec::with_capacity(maxdeg + 1);
            pw.push(s.target.one());
            for d in 1..=maxdeg {
                let next = &pw[d - 1] * img;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = s.target.zero();
        for (e, &c) in &self.terms {
            let mut term = s.target.constant(c as i64);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Reinterpret the same exponent vectors over a ring with the same arity and modulus.
    pub fn rename(&self, ring: &Ring) -> Result<Poly, AlgebraError> {
        if ring.nvars() != self.nvars() {
            return Err(AlgebraError::Arity { expected: self.nvars(), got: ring.nvars() });
        }
        if ring.p != self.ring.p {
            return Err(AlgebraError::ModulusMismatch { left: self.ring.p.get(), right: ring.p.get() });
        }
        Ok(Poly { ring: ring.clone(), terms: self.terms.clone() })
    }

    /// Embed into a ring whose variables include all of ours, matching by name.
    pub fn embed(&self, ring: &Ring) -> Result<Poly, AlgebraError> {
        if ring.p != self.ring.p {
            return Err(AlgebraError::ModulusMismatch { left: self.ring.p.get(), right: ring.p.get() });
        }
        let map = self
            .vars()
            .iter()
            .map(|v| ring.index_of(v))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = ring.zero();
        for (e, &c) in &self.terms {
            let mut ne = vec![0; ring.nvars()];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] = k;
            }
            out.terms.insert(ne, c);
        }
        Ok(out)
    }

    /// Terms in display order: graded lexicographic, variables in declared order.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, u64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, &c)| (e, c)).collect();
        v.sort_by(|a, b| grlex_desc(a.0, b.0));
        v
    }

    /// Print with the common monomial factored out, e.g. `y^3*z^3*(y^2+z^2)`.
    pub fn format_factored(&self) -> String {
        let Some(content) = self.monomial_content() else {
            return "0".to_string();
        };
        if self.terms.len() < 2 || content.iter().all(|&c| c == 0) {
            return self.to_string();
        }
        let rest = self.divide_monomial(&content).expect("content divides");
        let mono = format_monomial(self.vars(), &content);
        format!("{mono}*({rest})")
    }
}

fn grlex_desc(a: &[u32], b: &[u32]) -> Ordering {
    degree(b).cmp(&degree(a)).then_with(|| b.cmp(a))
}

pub(crate) fn degree(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

pub(crate) fn weighted_degree(e: &[u32], w: &[u64]) -> u64 {
    e.iter().zip(w).map(|(&x, &wi)| x as u64 * wi).sum()
}

fn format_monomial(vars: &[String], e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, &k) in vars.iter().zip(e) {
        match k {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let mono = format_monomial(self.vars(), e);
            match (c, mono.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{mono}")?,
                (_, false) => write!(f, "{c}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.ring)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("ring mismatch in add")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("ring mismatch in sub")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("ring mismatch in mul")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let p = self.ring.p;
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), p.neg(c))).collect(),
        }
    }
}

/// Images for every variable of a source ring, all living in one target ring.
#[derive(Clone, Debug)]
pub struct Substitution {
    target: Ring,
    images: Vec<Poly>,
}

impl Substitution {
    pub fn new(target: &Ring, images: Vec<Poly>) -> Result<Self, AlgebraError> {
        for img in &images {
            target.same_as(img.ring())?;
        }
        Ok(Substitution { target: target.clone(), images })
    }

    /// Identity on `ring`, to be modified with [`Substitution::set`].
    pub fn identity(ring: &Ring) -> Self {
        Substitution { target: ring.clone(), images: (0..ring.nvars()).map(|i| ring.gen(i)).collect() }
    }

    pub fn set(&mut self, var: usize, image: Poly) -> Result<(), AlgebraError> {
        self.target.same_as(image.ring())?;
        self.images[var] = image;
        Ok(())
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str]) -> Ring {
        Ring::new(Prime::new(p).unwrap(), vars)
    }

    #[test]
    fn char_two_cancellation_and_frobenius() {
        let r = ring(2, &["y", "z"]);
        let s = &r.gen(0) + &r.gen(1);
        assert!((&s + &s).is_zero());
        assert_eq!(s.pow(2), &r.gen(0).pow(2) + &r.gen(1).pow(2));
    }

    #[test]
    fn order_and_initial_form() {
        let r = ring(2, &["y"]);
        let y = r.gen(0);
        let f = &(&y.pow(5) + &y.pow(4)) + &y.pow(3);
        assert_eq!(f.order(), Order::Finite(3));
        assert_eq!(f.initial_form().unwrap(), y.pow(3));
        assert_eq!(r.zero().order(), Order::Infinite);
        assert!(r.zero().initial_form().is_err());
        assert_eq!(r.constant(1).order_in(&[0]), Order::Finite(0));
    }

    #[test]
    fn subset_order() {
        // y2*y1^2*(y1+y2) has order 2 in y1
        let r = ring(2, &["y2", "y1"]);
        let (y2, y1) = (r.gen(0), r.gen(1));
        let f = &(&y2 * &y1.pow(2)) * &(&y1 + &y2);
        assert_eq!(f.order_in(&[1]), Order::Finite(2));
        assert_eq!(f.order_in_vars(&["y1"]).unwrap(), Order::Finite(2));
        assert!(f.order_in_vars(&["q"]).is_err());
    }

    #[test]
    fn weighted_orders() {
        let r = ring(5, &["x", "y"]);
        let x2 = r.gen(0).pow(2);
        assert_eq!(x2.weighted_order(&[3, 1]).unwrap(), Order::Finite(6));
        let f = &x2 + &r.gen(1).pow(6);
        assert_eq!(f.weighted_order(&[3, 1]).unwrap(), Order::Finite(6));
        assert!(f.is_weighted_homogeneous(&[3, 1]));
        assert_eq!(r.zero().weighted_order(&[3, 1]).unwrap(), Order::Infinite);
    }

    #[test]
    fn stripping_examples() {
        let r = ring(2, &["y", "z"]);
        let (y, z) = (r.gen(0), r.gen(1));
        let g = &(&(&y.pow(5) + &y.pow(4)) + &y.pow(3)) + &y.pow(2);
        let f = &z.pow(6) * &g;
        let (s, h) = f.strip_c_power_monomials(2).unwrap();
        // y^4 z^6 is a square monomial too, so it goes along with y^2 z^6
        assert_eq!(s, &(&z.pow(6) * &y.pow(5)) + &(&z.pow(6) * &y.pow(3)));
        assert_eq!(h, &(&y * &z.pow(3)) + &(&y.pow(2) * &z.pow(3)));
        assert_eq!(&s + &h.pow(2), f);
        let antelope = &(&y.pow(5) * &z.pow(3)) + &(&y.pow(3) * &z.pow(5));
        let (s, h) = antelope.strip_c_power_monomials(2).unwrap();
        assert_eq!(s, antelope);
        assert!(h.is_zero());
        let single = y.pow(2);
        let (s, h) = single.strip_c_power_monomials(2).unwrap();
        assert!(s.is_zero());
        assert_eq!(h, y);
        assert!(f.strip_c_power_monomials(3).is_err());
        assert!(f.strip_c_power_monomials(1).is_err());
    }

    #[test]
    fn monomial_division() {
        let r = ring(2, &["y", "z"]);
        let (y, z) = (r.gen(0), r.gen(1));
        let f = &(&y.pow(5) * &z.pow(3)) + &(&y.pow(3) * &z.pow(5));
        let q = f.divide_monomial(&[3, 3]).unwrap();
        assert_eq!(q, &y.pow(2) + &z.pow(2));
        assert_eq!(f.divide_monomial(&[0, 0]).unwrap(), f);
        match f.divide_monomial(&[4, 0]) {
            Err(AlgebraError::NotDivisible { exponent }) => assert_eq!(exponent, vec![3, 5]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_polynomial_division() {
        let r = ring(3, &["a", "b"]);
        let (a, b) = (r.gen(0), r.gen(1));
        let d = &(&a + &b.scale(FieldElement::new(2, r.modulus()))) + &r.one();
        let q = &(&a.pow(2) * &b) + &r.constant(2);
        let prod = &d * &q;
        assert_eq!(prod.div_exact(&d).unwrap(), q);
        assert!((&prod + &r.one()).div_exact(&d).is_err());
    }

    #[test]
    fn inverse_series_geometric() {
        let r = ring(2, &["z"]);
        let z = r.gen(0);
        let base = &r.one() + &z;
        let inv = base.inverse_series(3).unwrap();
        let expect = &(&(&r.one() + &z) + &z.pow(2)) + &z.pow(3);
        assert_eq!(inv, expect);
        assert_eq!((&base * &inv).truncate(3), r.one());
        assert!(z.inverse_series(3).is_err());
        assert_eq!(expect.truncate(10), expect);
    }

    #[test]
    fn factored_display() {
        let r = ring(2, &["y", "z"]);
        let (y, z) = (r.gen(0), r.gen(1));
        let f = &(&y.pow(5) * &z.pow(3)) + &(&y.pow(3) * &z.pow(5));
        assert_eq!(f.to_string(), "y^5*z^3+y^3*z^5");
        assert_eq!(f.format_factored(), "y^3*z^3*(y^2+z^2)");
        assert_eq!((&y * &z.pow(3)).format_factored(), "y*z^3");
        assert_eq!(r.zero().format_factored(), "0");
    }
}
