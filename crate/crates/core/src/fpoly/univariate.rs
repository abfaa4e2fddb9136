//! Dense univariate polynomials over F_p with squarefree decomposition and
//! Cantor-Zassenhaus factorization.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Prime;

/// Coefficients low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    p: Prime,
    coeffs: Vec<u64>,
}

impl UPoly {
    pub fn new(p: Prime, coeffs: Vec<u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c % p.get()).collect();
        let mut f = UPoly { p, coeffs };
        f.normalize();
        f
    }

    pub fn zero(p: Prime) -> Self {
        UPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: Prime) -> Self {
        UPoly { p, coeffs: vec![1] }
    }

    /// The polynomial `u`.
    pub fn x(p: Prime) -> Self {
        UPoly { p, coeffs: vec![0, 1] }
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| self.p.add(*self.coeffs.get(i).unwrap_or(&0), *o.coeffs.get(i).unwrap_or(&0)))
            .collect();
        UPoly::new(self.p, c)
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| self.p.sub(*self.coeffs.get(i).unwrap_or(&0), *o.coeffs.get(i).unwrap_or(&0)))
            .collect();
        UPoly::new(self.p, c)
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = self.p.add(c[i + j], self.p.mul(a, b));
            }
        }
        UPoly::new(self.p, c)
    }

    pub fn scale(&self, s: u64) -> UPoly {
        UPoly::new(self.p, self.coeffs.iter().map(|&a| self.p.mul(a, s)).collect())
    }

    pub fn monic(&self) -> UPoly {
        match self.p.inv(self.lead()) {
            Some(i) => self.scale(i),
            None => self.clone(),
        }
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = self.p.inv(d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(self.p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = self.p.mul(r[i + dd], inv);
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i + j] = self.p.sub(r[i + j], self.p.mul(c, b));
            }
        }
        r.truncate(dd);
        (UPoly::new(self.p, q), UPoly::new(self.p, r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, &a)| self.p.mul(a, i as u64 % self.p.get())).collect();
        UPoly::new(self.p, c)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &UPoly) -> UPoly {
        let mut base = self.rem(m);
        let mut acc = UPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// The p-th root of a polynomial in `u^p`. Frobenius fixes F_p.
    fn pth_root(&self) -> UPoly {
        let p = self.p.get() as usize;
        debug_assert!(self.coeffs.iter().enumerate().all(|(i, &c)| c == 0 || i % p == 0));
        UPoly::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    /// Squarefree decomposition of a nonconstant polynomial: monic pairwise coprime
    /// squarefree factors with multiplicities, sorted by multiplicity.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u64)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let mut c = f.gcd(&f.derivative());
        let mut w = f.divrem(&c).0;
        let mut i = 1u64;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if !c.is_one() {
            let p = self.p.get();
            for (g, j) in c.pth_root().squarefree_decomposition() {
                out.push((g, j * p));
            }
        }
        out.sort_by_key(|(_, m)| *m);
        out
    }

    /// True iff `q^p` divides `self` for some nonconstant `q`.
    pub fn has_pth_power_factor(&self) -> bool {
        let p = self.p.get();
        self.squarefree_decomposition().iter().any(|(_, m)| *m >= p)
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = UPoly::x(self.p);
        let mut h = x.rem(&f);
        let mut d = 1;
        while f.degree().unwrap_or(0) >= 2 * d {
            h = h.pow_mod(self.p.get(), &f);
            let g = h.sub(&x).gcd(&f);
            if !g.is_one() {
                f = f.divrem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            let n = f.degree().unwrap();
            out.push((f, n));
        }
        out
    }

    /// Splits a monic product of distinct irreducibles of degree `d`.
    pub fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
        let n = self.degree().unwrap_or(0);
        if n <= d {
            return vec![self.monic()];
        }
        let p = self.p.get();
        loop {
            let a = UPoly::new(self.p, (0..n).map(|_| rng.random_range(0..p)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                // a^((p^d - 1)/2) as a product of Frobenius images of a^((p-1)/2)
                let mut t = a.pow_mod((p - 1) / 2, self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.pow_mod(p, self);
                    acc = acc.mul(&t).rem(self);
                }
                acc.sub(&UPoly::one(self.p))
            };
            let g = b.gcd(self);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let h = self.divrem(&g).0;
                let mut out = g.equal_degree(d, rng);
                out.extend(h.equal_degree(d, rng));
                return out;
            }
        }
    }

    /// Leading coefficient and sorted monic irreducible factors with multiplicity.
    pub fn factor(&self) -> (u64, Vec<(UPoly, u64)>) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut out = Vec::new();
        for (s, m) in self.squarefree_decomposition() {
            for (g, d) in s.distinct_degree() {
                for h in g.equal_degree(d, &mut rng) {
                    out.push((h, m));
                }
            }
        }
        out.sort_by(|a, b| (a.0.coeffs.len(), &a.0.coeffs, a.1).cmp(&(b.0.coeffs.len(), &b.0.coeffs, b.1)));
        (self.lead(), out)
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "u")?,
                (1, _) => write!(f, "{c}*u")?,
                (_, 1) => write!(f, "u^{i}")?,
                _ => write!(f, "{c}*u^{i}")?,
            }
        }
        Ok(())
    }
}
