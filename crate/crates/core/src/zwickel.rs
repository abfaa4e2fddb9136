//! Zwickels in a weighted layer and the coefficient transform under
//! `x -> x + sum h_g y^g`, `y -> y + t*y_m`.
//!
//! Exponent vectors over `y` are stored with position 0 holding `y_m` and position `i` holding
//! `y_{m-i}`. The translation `t` is symbolic: its nonzero entries sit at positions
//! `1..=m-1-j` and become the variables of [`ZwickelContext::t_ring`].

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpoly::{binom_mod_p, FieldElement, Poly, Prime, Ring, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub k: u32,
    pub alpha: Vec<u32>,
}

impl LatticePoint {
    pub fn new(k: u32, alpha: Vec<u32>) -> Self {
        LatticePoint { k, alpha }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZwickelContext {
    pub p: Prime,
    pub m: usize,
    pub w: u32,
    pub deg: u32,
    /// `q` in storage order (`q[0]` is the exponent of `y_m`).
    pub q: Vec<u32>,
    pub j: usize,
    /// One value per element of [`ZwickelContext::gamma`], in that order.
    pub h: Vec<u64>,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// All vectors of length `len` with entry sum `n`, in lexicographic order.
pub fn compositions(n: u32, len: usize) -> Vec<Vec<u32>> {
    fn go(n: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == len {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=n {
            cur.push(a);
            go(n - a, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, len, &mut Vec::with_capacity(len), &mut out);
    out
}

impl ZwickelContext {
    pub fn new(p: Prime, m: usize, w: u32, deg: u32, q: Vec<u32>, j: usize, h: Vec<u64>) -> Result<Self> {
        if m == 0 || w == 0 || deg == 0 {
            return Err(Error::Precondition("m, w and deg must be positive".into()));
        }
        if deg % w != 0 {
            return Err(Error::Precondition(format!("w={w} does not divide deg={deg}")));
        }
        if q.len() != m {
            return Err(Error::Precondition(format!("q has {} entries, expected {m}", q.len())));
        }
        if q.iter().map(|&a| a as u64).sum::<u64>() > deg as u64 {
            return Err(Error::Precondition("|q| exceeds deg".into()));
        }
        if j >= m {
            return Err(Error::Precondition(format!("split index j={j} must be below m={m}")));
        }
        let ctx = ZwickelContext { p, m, w, deg, q, j, h: Vec::new() };
        let g = ctx.gamma().len();
        if h.len() != g {
            return Err(Error::Precondition(format!("h has {} entries, expected {g}", h.len())));
        }
        let h = h.into_iter().map(|v| v % p.get()).collect();
        Ok(ZwickelContext { h, ..ctx })
    }

    pub fn c(&self) -> u32 {
        self.deg / self.w
    }

    /// Exponents `g` with `|g| = w`, lexicographically ordered.
    pub fn gamma(&self) -> Vec<Vec<u32>> {
        compositions(self.w, self.m)
    }

    /// Positions carrying a symbolic translation entry.
    pub fn t_positions(&self) -> std::ops::Range<usize> {
        1..self.m - self.j
    }

    pub fn t_ring(&self) -> Ring {
        let names: Vec<String> = self.t_positions().map(|i| format!("t{}", self.m - i)).collect();
        Ring::new(self.p, &names)
    }

    /// `r` keeps the entries of `q` at `y_m, ..., y_{j+1}`.
    pub fn r(&self) -> Vec<u32> {
        self.q.iter().enumerate().map(|(i, &v)| if i < self.m - self.j { v } else { 0 }).collect()
    }

    pub fn ell(&self) -> Vec<u32> {
        self.q.iter().enumerate().map(|(i, &v)| if i < self.m - self.j { 0 } else { v }).collect()
    }

    pub fn slice(&self, k: u32) -> Vec<LatticePoint> {
        let d = self.deg - self.w * k;
        compositions(d, self.m).into_iter().map(|a| LatticePoint::new(k, a)).collect()
    }

    /// The whole layer `w*k + |alpha| = deg`, `0 <= k <= c`, sorted.
    pub fn layer(&self) -> Vec<LatticePoint> {
        (0..=self.c()).flat_map(|k| self.slice(k)).collect()
    }

    fn bound(&self, k: u32, v: u32) -> u32 {
        let c = self.c() as u64;
        ceil_div((c - k as u64) * v as u64, c) as u32
    }
}

/// `(c/(c-k)) * alpha`, exact.
pub fn project(pt: &LatticePoint, c: u32) -> Result<Vec<Ratio<u64>>> {
    if pt.k >= c {
        return Err(Error::Precondition(format!("projection needs k < c, got k={} c={c}", pt.k)));
    }
    let s = Ratio::new(c as u64, (c - pt.k) as u64);
    Ok(pt.alpha.iter().map(|&a| s * Ratio::from_integer(a as u64)).collect())
}

pub fn upper_zwickel(ctx: &ZwickelContext) -> Vec<LatticePoint> {
    ctx.layer()
        .into_iter()
        .filter(|pt| pt.alpha.iter().zip(&ctx.q).all(|(&a, &q)| a >= ctx.bound(pt.k, q)))
        .collect()
}

pub fn lower_zwickel(ctx: &ZwickelContext) -> Vec<LatticePoint> {
    let r_total: u32 = ctx.r().iter().sum();
    let ell = ctx.ell();
    ctx.layer()
        .into_iter()
        .filter(|pt| {
            pt.alpha[0] >= ctx.bound(pt.k, r_total)
                && pt.alpha.iter().zip(&ell).skip(1).all(|(&b, &l)| b >= ctx.bound(pt.k, l))
        })
        .collect()
}

/// Like [`lower_zwickel`], but the bound on the `y_m` exponent is the sum of the
/// componentwise ceilings over `r`.
pub fn y_star(ctx: &ZwickelContext) -> Vec<LatticePoint> {
    let r = ctx.r();
    let ell = ctx.ell();
    ctx.layer()
        .into_iter()
        .filter(|pt| {
            let b0: u32 = r.iter().map(|&v| ctx.bound(pt.k, v)).sum();
            pt.alpha[0] >= b0 && pt.alpha.iter().zip(&ell).skip(1).all(|(&b, &l)| b >= ctx.bound(pt.k, l))
        })
        .collect()
}

/// `prod_g C(k - (lambda_<g), lambda_g)` mod p, the product running over `lambda` in order.
pub fn alt_binom(k: u64, lambda: &[u32], p: Prime) -> FieldElement {
    let mut acc = 1 % p.get();
    let mut used = 0u64;
    for &l in lambda {
        if used + l as u64 > k {
            return FieldElement::zero(p);
        }
        acc = p.mul(acc, binom_mod_p((k - used) as i64, l as u64, p));
        used += l as u64;
    }
    FieldElement::from_u64(acc, p)
}

/// Sparse matrix over `F_p[t]`, rows and columns indexed by the layer.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix {
    pub t_ring: Ring,
    pub points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
    pub entries: BTreeMap<(usize, usize), Poly>,
}

impl TransformMatrix {
    fn build(ctx: &ZwickelContext, raw: HashMap<(usize, usize), Vec<(Vec<u32>, i64)>>) -> Result<Self> {
        let t_ring = ctx.t_ring();
        let points = ctx.layer();
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut entries = BTreeMap::new();
        for (key, terms) in raw {
            let poly = t_ring.from_terms(terms)?;
            if !poly.is_zero() {
                entries.insert(key, poly);
            }
        }
        Ok(TransformMatrix { t_ring, points, index, entries })
    }

    pub fn index_of(&self, pt: &LatticePoint) -> Option<usize> {
        self.index.get(pt).copied()
    }

    /// Nonzero entries of one row, by column index.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, &Poly)> + '_ {
        self.entries.range((row, 0)..(row + 1, 0)).map(|(&(_, c), e)| (c, e))
    }

    pub fn entry(&self, row: &LatticePoint, col: &LatticePoint) -> Result<Poly> {
        let (Some(i), Some(j)) = (self.index_of(row), self.index_of(col)) else {
            return Err(Error::Precondition("index pair outside the layer".into()));
        };
        Ok(self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.t_ring.zero()))
    }
}

/// Assemble the matrix from the closed formula: sum over `lambda` with `|lambda| = k - l` and
/// over the binomial expansion of `(y + t*y_m)^alpha`.
pub fn transform_matrix(ctx: &ZwickelContext) -> Result<TransformMatrix> {
    let p = ctx.p;
    let m = ctx.m;
    let gamma = ctx.gamma();
    let tpos: Vec<usize> = ctx.t_positions().collect();
    let points = ctx.layer();
    let index: HashMap<&LatticePoint, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let lambdas: Vec<Vec<Vec<u32>>> = (0..=ctx.c()).map(|n| compositions(n, gamma.len())).collect();
    let mut raw: HashMap<(usize, usize), Vec<(Vec<u32>, i64)>> = HashMap::new();

    for (row, pt) in points.iter().enumerate() {
        let alpha = &pt.alpha;
        for l in 0..=pt.k {
            let n = pt.k - l;
            let ckl = binom_mod_p(pt.k as i64, l as u64, p);
            if ckl == 0 {
                continue;
            }
            for lambda in &lambdas[n as usize] {
                let mut coef = p.mul(ckl, alt_binom(n as u64, lambda, p).value());
                let mut lg = vec![0u32; m];
                for (g, &lv) in gamma.iter().zip(lambda) {
                    if lv == 0 {
                        continue;
                    }
                    coef = p.mul(coef, p.pow_mod(ctx.h[gamma.iter().position(|x| x == g).unwrap()], lv as u64));
                    for (a, &b) in lg.iter_mut().zip(g) {
                        *a += lv * b;
                    }
                }
                if coef == 0 {
                    continue;
                }
                // odometer over delta_i in 0..=alpha_i at the t positions
                let mut delta: Vec<u32> = tpos.iter().map(|_| 0).collect();
                loop {
                    let mut beta = vec![0u32; m];
                    let mut c2 = coef;
                    let mut texp = Vec::with_capacity(tpos.len());
                    for i in 1..m {
                        let d = match tpos.iter().position(|&q| q == i) {
                            Some(s) => {
                                c2 = p.mul(c2, binom_mod_p(alpha[i] as i64, delta[s] as u64, p));
                                texp.push(alpha[i] - delta[s]);
                                delta[s]
                            }
                            None => alpha[i],
                        };
                        beta[i] = d + lg[i];
                    }
                    let rest: u32 = beta[1..].iter().sum();
                    let target = ctx.deg - ctx.w * l;
                    if c2 != 0 && rest <= target {
                        beta[0] = target - rest;
                        let col = *index
                            .get(&LatticePoint::new(l, beta))
                            .ok_or_else(|| Error::Precondition("column outside the layer".into()))?;
                        raw.entry((row, col)).or_default().push((texp, c2 as i64));
                    }
                    let mut s = 0;
                    while s < tpos.len() && delta[s] == alpha[tpos[s]] {
                        delta[s] = 0;
                        s += 1;
                    }
                    if s == tpos.len() {
                        break;
                    }
                    delta[s] += 1;
                }
            }
        }
    }
    TransformMatrix::build(ctx, raw)
}

/// Expand `x^k y^alpha` under the substitution for every layer point and read off coefficients.
pub fn transform_matrix_oracle(ctx: &ZwickelContext) -> Result<TransformMatrix> {
    let m = ctx.m;
    let tpos: Vec<usize> = ctx.t_positions().collect();
    let mut names = vec!["x".to_string()];
    names.extend((0..m).map(|i| format!("y{}", m - i)));
    names.extend(tpos.iter().map(|&i| format!("t{}", m - i)));
    let ring = Ring::new(ctx.p, &names);
    let y = |i: usize| ring.gen(1 + i);
    let mut shift = ring.gen(0);
    for (g, &hv) in ctx.gamma().iter().zip(&ctx.h) {
        let mut e = vec![0u32; ring.nvars()];
        e[1..=m].copy_from_slice(g);
        shift = &shift + &ring.monomial(e, FieldElement::from_u64(hv, ctx.p));
    }
    let mut images = vec![shift];
    for i in 0..m {
        match tpos.iter().position(|&q| q == i) {
            Some(s) => images.push(&y(i) + &(&ring.gen(1 + m + s) * &y(0))),
            None => images.push(y(i)),
        }
    }
    images.extend((0..tpos.len()).map(|s| ring.gen(1 + m + s)));
    let sub = Substitution::new(&ring, images)?;
    let imgs = sub.images();

    let x_pows: Vec<Poly> = (0..=ctx.c()).map(|k| imgs[0].pow(k as u64)).collect();
    let y_pows: Vec<Vec<Poly>> = (0..m).map(|i| (0..=ctx.deg).map(|a| imgs[1 + i].pow(a as u64)).collect()).collect();

    let points = ctx.layer();
    let index: HashMap<&LatticePoint, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut raw: HashMap<(usize, usize), Vec<(Vec<u32>, i64)>> = HashMap::new();
    for (row, pt) in points.iter().enumerate() {
        let mut img = ring.one();
        for (i, &a) in pt.alpha.iter().enumerate() {
            img = &img * &y_pows[i][a as usize];
        }
        img = &img * &x_pows[pt.k as usize];
        for (e, c) in img.terms() {
            let col_pt = LatticePoint::new(e[0], e[1..=m].to_vec());
            let col = *index.get(&col_pt).ok_or_else(|| Error::Precondition("expansion left the layer".into()))?;
            raw.entry((row, col)).or_default().push((e[1 + m..].to_vec(), c.value() as i64));
        }
    }
    TransformMatrix::build(ctx, raw)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetReport {
    /// `|Z(q)(k)|` and `|Y*(k)|` for `k = 0..=c`.
    pub z_sizes: Vec<usize>,
    pub y_star_sizes: Vec<usize>,
    pub square: bool,
    pub block_triangular: bool,
    pub is_monomial: bool,
    pub coefficient: u64,
    /// Exponent of the determinant, one entry per `y_{m-1}, ..., y_1`.
    pub rho: Vec<u32>,
    /// Fraction-free elimination of the full square matrix agrees, when it was run.
    pub bareiss_agrees: Option<bool>,
}

/// Square systems at most this large are also checked by fraction-free elimination.
pub const BAREISS_LIMIT: usize = 24;

fn det_mod_p(mut a: Vec<Vec<u64>>, p: Prime) -> u64 {
    let n = a.len();
    let mut det = 1 % p.get();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = p.neg(det);
        }
        det = p.mul(det, a[col][col]);
        let inv = p.inv(a[col][col]).expect("nonzero pivot");
        for r in col + 1..n {
            let f = p.mul(a[r][col], inv);
            if f == 0 {
                continue;
            }
            for c in col..n {
                a[r][c] = p.sub(a[r][c], p.mul(f, a[col][c]));
            }
        }
    }
    det
}

fn solve_mod_p(mut a: Vec<Vec<u64>>, mut b: Vec<u64>, p: Prime) -> Option<Vec<u64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(piv, col);
        b.swap(piv, col);
        let inv = p.inv(a[col][col]).expect("nonzero pivot");
        for c in col..n {
            a[col][c] = p.mul(a[col][c], inv);
        }
        b[col] = p.mul(b[col], inv);
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for c in col..n {
                a[r][c] = p.sub(a[r][c], p.mul(f, a[col][c]));
            }
            b[r] = p.sub(b[r], p.mul(f, b[col]));
        }
    }
    Some(b)
}

/// Fraction-free determinant over `F_p[t]`.
pub fn bareiss_det(mut a: Vec<Vec<Poly>>, ring: &Ring) -> Result<Poly> {
    let n = a.len();
    if n == 0 {
        return Ok(ring.one());
    }
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(ring.zero());
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

fn group_by_k(pts: &[LatticePoint], c: u32) -> Vec<Vec<LatticePoint>> {
    let mut out = vec![Vec::new(); c as usize + 1];
    for pt in pts {
        out[pt.k as usize].push(pt.clone());
    }
    out
}

/// Determinant of the square block `Z(q) x Y*` of `matrix`.
///
/// Rows and columns are ordered by `k`. The block must be lower triangular in `k`, and each diagonal
/// block must have the shape `const * t^(u(row) - v(col))`; its determinant is then
/// `det(const) * t^(sum u - sum v)`.
pub fn det_monomiality_check(ctx: &ZwickelContext, matrix: &TransformMatrix) -> Result<DetReport> {
    let p = ctx.p;
    let c = ctx.c();
    let z = upper_zwickel(ctx);
    let ys = y_star(ctx);
    let zk = group_by_k(&z, c);
    let yk = group_by_k(&ys, c);
    let z_sizes: Vec<usize> = zk.iter().map(Vec::len).collect();
    let y_star_sizes: Vec<usize> = yk.iter().map(Vec::len).collect();
    let tpos: Vec<usize> = ctx.t_positions().collect();
    let mut report = DetReport {
        square: z_sizes == y_star_sizes,
        z_sizes,
        y_star_sizes,
        block_triangular: true,
        is_monomial: false,
        coefficient: 0,
        rho: vec![0; ctx.m - 1],
        bareiss_agrees: None,
    };
    if !report.square {
        return Ok(report);
    }
    let zi: Vec<usize> = z.iter().map(|pt| matrix.index_of(pt).expect("layer point")).collect();
    let yi: Vec<usize> = ys.iter().map(|pt| matrix.index_of(pt).expect("layer point")).collect();
    let in_y: std::collections::HashSet<usize> = yi.iter().copied().collect();
    for (&r, rp) in zi.iter().zip(&z) {
        if matrix.row(r).any(|(cc, _)| in_y.contains(&cc) && matrix.points[cc].k > rp.k) {
            report.block_triangular = false;
        }
    }

    let mut shaped = report.block_triangular;
    let mut coefficient = 1 % p.get();
    let mut rho = vec![0i64; ctx.m - 1];
    for k in 0..=c as usize {
        let mut consts = vec![vec![0u64; yk[k].len()]; zk[k].len()];
        for (a, rp) in zk[k].iter().enumerate() {
            for (b, cp) in yk[k].iter().enumerate() {
                let e = matrix.entry(rp, cp)?;
                if e.is_zero() {
                    continue;
                }
                let want: Vec<i64> = tpos.iter().map(|&i| rp.alpha[i] as i64 - cp.alpha[i] as i64).collect();
                let terms: Vec<_> = e.terms().collect();
                let ok = terms.len() == 1 && terms[0].0.iter().map(|&v| v as i64).eq(want.iter().copied());
                if !ok {
                    shaped = false;
                    continue;
                }
                consts[a][b] = terms[0].1.value();
            }
        }
        coefficient = p.mul(coefficient, det_mod_p(consts, p));
        for pt in &zk[k] {
            for &i in &tpos {
                rho[i - 1] += pt.alpha[i] as i64;
            }
        }
        for pt in &yk[k] {
            for &i in &tpos {
                rho[i - 1] -= pt.alpha[i] as i64;
            }
        }
    }
    report.coefficient = coefficient;
    report.is_monomial = shaped && coefficient != 0 && rho.iter().all(|&v| v >= 0);
    if rho.iter().all(|&v| v >= 0) {
        report.rho = rho.iter().map(|&v| v as u32).collect();
    }

    if z.len() <= BAREISS_LIMIT {
        let dense: Vec<Vec<Poly>> = z.iter().map(|rp| ys.iter().map(|cp| matrix.entry(rp, cp)).collect::<Result<_>>()).collect::<Result<_>>()?;
        let det = bareiss_det(dense, &matrix.t_ring)?;
        let mut e = vec![0u32; tpos.len()];
        for (s, &i) in tpos.iter().enumerate() {
            e[s] = report.rho[i - 1];
        }
        let expected = matrix.t_ring.monomial(e, FieldElement::from_u64(coefficient, p));
        report.bareiss_agrees = Some(report.is_monomial && det == expected);
    }
    Ok(report)
}

/// Coefficients of `f(x + sum h_g y^g, y + t*y_m)` for `f` given on the layer, with numeric `t`.
pub fn apply_transform(
    ctx: &ZwickelContext,
    matrix: &TransformMatrix,
    f: &BTreeMap<LatticePoint, u64>,
    t: &[u64],
) -> Result<BTreeMap<LatticePoint, u64>> {
    let p = ctx.p;
    let mut out = BTreeMap::new();
    for (pt, &a) in f {
        let r = matrix.index_of(pt).ok_or_else(|| Error::Precondition("coefficient outside the layer".into()))?;
        for (c, e) in matrix.row(r) {
            let v = p.mul(a % p.get(), e.evaluate(t)?.value());
            let slot = out.entry(matrix.points[c].clone()).or_insert(0);
            *slot = p.add(*slot, v);
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

/// Recover `f` on `Z(q)` from the coefficients `b` of its transform on the lower zwickel.
///
/// Solves slice by slice from `k = c` downwards; every translation entry must be nonzero.
pub fn reconstruct_coefficients(
    ctx: &ZwickelContext,
    matrix: &TransformMatrix,
    b: &BTreeMap<LatticePoint, u64>,
    t: &[u64],
) -> Result<BTreeMap<LatticePoint, u64>> {
    let p = ctx.p;
    let n = ctx.t_positions().len();
    if t.len() != n {
        return Err(Error::Precondition(format!("expected {n} translation values, got {}", t.len())));
    }
    if t.iter().any(|&v| v % p.get() == 0) {
        return Err(Error::Precondition("reconstruction needs every translation entry nonzero".into()));
    }
    let c = ctx.c();
    let zk = group_by_k(&upper_zwickel(ctx), c);
    let yk = group_by_k(&y_star(ctx), c);
    let eval = |rp: &LatticePoint, cp: &LatticePoint| -> Result<u64> { Ok(matrix.entry(rp, cp)?.evaluate(t)?.value()) };
    let mut found: BTreeMap<LatticePoint, u64> = BTreeMap::new();
    for k in (0..=c as usize).rev() {
        if zk[k].len() != yk[k].len() {
            return Err(Error::Precondition(format!("slice {k} is not square")));
        }
        let mut rhs = Vec::with_capacity(yk[k].len());
        for cp in &yk[k] {
            let mut v = b.get(cp).copied().unwrap_or(0) % p.get();
            for (rp, &a) in &found {
                v = p.sub(v, p.mul(a, eval(rp, cp)?));
            }
            rhs.push(v);
        }
        let mut sys = vec![vec![0u64; zk[k].len()]; yk[k].len()];
        for (bi, cp) in yk[k].iter().enumerate() {
            for (ai, rp) in zk[k].iter().enumerate() {
                sys[bi][ai] = eval(rp, cp)?;
            }
        }
        let sol = solve_mod_p(sys, rhs, p).ok_or_else(|| Error::Precondition(format!("singular system in slice {k}")))?;
        for (rp, v) in zk[k].iter().zip(sol) {
            found.insert(rp.clone(), v);
        }
    }
    found.retain(|_, v| *v != 0);
    Ok(found)
}
