//! Point blowups of purely inseparable forms `x^c + F(y)` in chart coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpoly::{Order, Poly, Prime, Ring, Substitution};
use crate::shade::{shade, Shade};

/// `f = x^c + F(y)` with `c = p^e` and exceptional multiplicities `r` on the hyperplanes `y_i = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct InseparableForm {
    e: u32,
    c: u64,
    f: Poly,
    r: Vec<u32>,
}

impl InseparableForm {
    /// Validates that `F` has order at least `c` and that `y^r` divides its non-c-power part.
    pub fn new(e: u32, f: Poly, r: Vec<u32>) -> Result<Self> {
        let p = f.modulus();
        if e == 0 {
            return Err(Error::InvalidForm("exponent e must be at least 1".into()));
        }
        let c = p.pow(e)?;
        if r.len() != f.nvars() {
            return Err(Error::InvalidForm(format!("{} multiplicities for {} variables", r.len(), f.nvars())));
        }
        if let Order::Finite(o) = f.order() {
            if o < c {
                return Err(Error::InvalidForm(format!("F has order {o} < c = {c}")));
            }
        }
        let (stripped, _) = f.strip_c_power_monomials(c)?;
        if stripped.divide_monomial(&r).is_err() {
            let mono: Vec<String> = r.iter().map(u32::to_string).collect();
            return Err(Error::InvalidForm(format!("y^({}) does not divide {stripped}", mono.join(","))));
        }
        Ok(InseparableForm { e, c, f, r })
    }

    /// Split a full polynomial `x^c + F(y)`; the result lives over the remaining variables.
    pub fn from_poly(full: &Poly, x: &str, e: u32, r: Option<Vec<u32>>) -> Result<Self> {
        let p = full.modulus();
        let c = p.pow(e)?;
        let xi = full.ring().index_of(x)?;
        let yvars: Vec<String> = full.vars().iter().filter(|v| *v != x).cloned().collect();
        let ring = Ring::new(p, &yvars);
        let mut terms = Vec::new();
        let mut saw_xc = false;
        for (exp, coeff) in full.terms() {
            if exp[xi] == 0 {
                let mut ye = exp.clone();
                ye.remove(xi);
                terms.push((ye, coeff.value() as i64));
            } else if exp[xi] as u64 == c && exp.iter().filter(|&&k| k > 0).count() == 1 && coeff.value() == 1 {
                saw_xc = true;
            } else {
                return Err(Error::InvalidForm(format!("term with {x}-degree {} is not of the form {x}^{c}", exp[xi])));
            }
        }
        if !saw_xc {
            return Err(Error::InvalidForm(format!("missing leading term {x}^{c}")));
        }
        let f = ring.from_terms(terms)?;
        let r = r.unwrap_or_else(|| vec![0; ring.nvars()]);
        InseparableForm::new(e, f, r)
    }

    pub fn modulus(&self) -> Prime {
        self.f.modulus()
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// The y-part `F`.
    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn ring(&self) -> &Ring {
        self.f.ring()
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    /// Order of `x^c + F` at the origin, after removing a constant c-th power.
    pub fn order(&self) -> Order {
        let f0 = &self.f - &self.ring().element(self.f.constant_term());
        match f0.order() {
            Order::Finite(o) if o < self.c => Order::Finite(o),
            _ => Order::Finite(self.c),
        }
    }

    /// Render as `x^c+F` using the given name for x.
    pub fn display_with(&self, x: &str) -> String {
        if self.f.is_zero() {
            format!("{x}^{}", self.c)
        } else {
            format!("{x}^{}+{}", self.c, self.f)
        }
    }
}

impl fmt::Debug for InseparableForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} r={:?}", self.display_with("x"), self.r)
    }
}

/// The chart of a point blowup: the exceptional divisor is `{chart = 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chart {
    X,
    Y(usize),
}

/// A point blowup at the origin followed by a move to the point `t` of the exceptional divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlowupStep {
    pub chart: Chart,
    /// One entry per y-variable; the chart's own entry is always 0.
    pub translation: Vec<u64>,
}

impl BlowupStep {
    pub fn new(chart: Chart, translation: Vec<u64>) -> Result<Self> {
        if let Chart::Y(i) = chart {
            if i >= translation.len() {
                return Err(Error::InvalidStep(format!("chart index {i} out of range")));
            }
            if translation[i] != 0 {
                return Err(Error::InvalidStep("the chart variable carries no translation".into()));
            }
        }
        Ok(BlowupStep { chart, translation })
    }

    /// Chart `y_i` with the given translations on the other variables.
    pub fn y(chart: usize, translation: Vec<u64>) -> Result<Self> {
        BlowupStep::new(Chart::Y(chart), translation)
    }

    pub fn describe(&self, vars: &[String]) -> String {
        match self.chart {
            Chart::X => "chart x".to_string(),
            Chart::Y(ch) => {
                let t: Vec<String> = vars
                    .iter()
                    .zip(&self.translation)
                    .enumerate()
                    .filter(|(i, _)| *i != ch)
                    .map(|(_, (v, t))| format!("{v}={t}"))
                    .collect();
                if t.is_empty() {
                    format!("chart {}", vars[ch])
                } else {
                    format!("chart {} t:{}", vars[ch], t.join(","))
                }
            }
        }
    }
}

/// Result of a single weak transform.
#[derive(Debug, Clone)]
pub enum BlowupOutcome {
    /// The order stays `c`; the transformed form with its new divisor.
    Equiconstant(InseparableForm),
    /// The order fell below `c` (or the point is off the strict transform, for the x-chart).
    OrderDropped { order: Order, transform: Option<Poly> },
}

/// Substitute `y_j -> y_ch (y_j + t_j)`, divide by `y_ch^c`, and drop a constant c-th power.
pub fn transform_poly(f: &Poly, c: u64, step: &BlowupStep) -> Result<Poly> {
    let Chart::Y(ch) = step.chart else {
        return Err(Error::InvalidStep("the x-chart has no inseparable transform".into()));
    };
    let ring = f.ring();
    if step.translation.len() != ring.nvars() {
        return Err(Error::InvalidStep(format!(
            "{} translation entries for {} variables",
            step.translation.len(),
            ring.nvars()
        )));
    }
    let ych = ring.gen(ch);
    let images = (0..ring.nvars())
        .map(|j| {
            if j == ch {
                ych.clone()
            } else {
                &ych * &(&ring.gen(j) + &ring.constant(step.translation[j] as i64))
            }
        })
        .collect();
    let total = f.substitute(&Substitution::new(ring, images)?)?;
    let mut div = vec![0u32; ring.nvars()];
    div[ch] = u32::try_from(c).map_err(|_| Error::Algebra(crate::AlgebraError::Overflow))?;
    let weak = total
        .divide_monomial(&div)
        .map_err(|e| Error::InvalidForm(format!("total transform not divisible by the exceptional power: {e}")))?;
    Ok(&weak - &ring.element(weak.constant_term()))
}

/// Multiplicities after the step: the chart gets `|r| + shade - c`, old components survive iff `t_i = 0`.
pub fn transform_divisor(r: &[u32], shade: Shade, c: u64, step: &BlowupStep) -> Result<Vec<u32>> {
    let Chart::Y(ch) = step.chart else {
        return Err(Error::InvalidStep("the x-chart carries no divisor".into()));
    };
    let total: u64 = r.iter().map(|&x| x as u64).sum();
    let new = match shade {
        Shade::Finite(s) => (total + s).checked_sub(c).ok_or_else(|| {
            Error::Precondition(format!("|r| + shade = {} is below c = {c}", total + s))
        })?,
        Shade::BoldRegular => 0,
    };
    Ok(r.iter()
        .enumerate()
        .map(|(i, &ri)| {
            if i == ch {
                new as u32
            } else if step.translation[i] == 0 {
                ri
            } else {
                0
            }
        })
        .collect())
}

/// Blow up the origin and move to the point named by `step`.
pub fn weak_transform(form: &InseparableForm, step: &BlowupStep) -> Result<BlowupOutcome> {
    if step.chart == Chart::X {
        return Ok(BlowupOutcome::OrderDropped { order: Order::Finite(0), transform: None });
    }
    if step.translation.iter().any(|&t| t >= form.modulus().get()) {
        return Err(Error::InvalidStep("translation entries must be residues mod p".into()));
    }
    let sh = shade(form)?;
    // blow up the normalized form so the result keeps the c-power bookkeeping minimal
    let f1 = transform_poly(&sh.normalized, form.c, step)?;
    let r1 = transform_divisor(&form.r, sh.shade, form.c, step)?;
    match f1.order() {
        Order::Finite(o) if o < form.c => Ok(BlowupOutcome::OrderDropped { order: Order::Finite(o), transform: Some(f1) }),
        _ => Ok(BlowupOutcome::Equiconstant(InseparableForm::new(form.e, f1, r1)?)),
    }
}

/// Whether `after` still has order `c` at the origin.
pub fn is_equiconstant(before: &InseparableForm, after: &InseparableForm) -> bool {
    after.order() == Order::Finite(before.c)
}

/// One row of a resolution history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    /// The step that produced this point; `None` for the initial point.
    pub step: Option<BlowupStep>,
    pub order: Order,
    pub shade: Shade,
    pub r: Vec<u32>,
    /// For each y-variable, the history index of the point where its exceptional component appeared.
    pub labels: Vec<Option<usize>>,
    pub f: Poly,
}

/// A form together with the blowups that led to it.
#[derive(Debug, Clone)]
pub struct ResolutionState {
    current: InseparableForm,
    history: Vec<Snapshot>,
    dropped: Option<(BlowupStep, Order)>,
}

impl ResolutionState {
    /// Components with `r_i > 0` at the start are labeled as present at point 0.
    pub fn new(form: InseparableForm) -> Result<Self> {
        let labels = form.r.iter().map(|&ri| (ri > 0).then_some(0)).collect();
        let snap = Snapshot { step: None, order: form.order(), shade: shade(&form)?.shade, r: form.r.clone(), labels, f: form.f.clone() };
        Ok(ResolutionState { current: form, history: vec![snap], dropped: None })
    }

    pub fn current(&self) -> &InseparableForm {
        &self.current
    }

    pub fn history(&self) -> &[Snapshot] {
        &self.history
    }

    pub fn last(&self) -> &Snapshot {
        self.history.last().expect("history is never empty")
    }

    /// The step and order at which the order dropped, if it did.
    pub fn dropped(&self) -> Option<&(BlowupStep, Order)> {
        self.dropped.as_ref()
    }

    /// Apply one step. An order drop is recorded and ends the sequence.
    pub fn apply(&self, step: &BlowupStep) -> Result<ResolutionState> {
        if self.dropped.is_some() {
            return Err(Error::Terminated(self.history.len() - 1));
        }
        let mut next = self.clone();
        match weak_transform(&self.current, step)? {
            BlowupOutcome::Equiconstant(form) => {
                let Chart::Y(ch) = step.chart else { unreachable!("x-chart always drops") };
                let idx = self.history.len();
                let labels = self
                    .last()
                    .labels
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| if i == ch { Some(idx) } else if step.translation[i] == 0 { l } else { None })
                    .collect();
                next.history.push(Snapshot {
                    step: Some(step.clone()),
                    order: form.order(),
                    shade: shade(&form)?.shade,
                    r: form.r.clone(),
                    labels,
                    f: form.f.clone(),
                });
                next.current = form;
            }
            BlowupOutcome::OrderDropped { order, .. } => {
                next.dropped = Some((step.clone(), order));
            }
        }
        Ok(next)
    }

    /// Apply a sequence of steps.
    pub fn replay(form: InseparableForm, steps: &[BlowupStep]) -> Result<ResolutionState> {
        let mut st = ResolutionState::new(form)?;
        for s in steps {
            st = st.apply(s)?;
        }
        Ok(st)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::parse_in;

    fn yz(p: u64) -> Ring {
        Ring::new(Prime::new(p).unwrap(), &["y", "z"])
    }

    #[test]
    fn third_blowup_before_stripping() {
        let ring = yz(2);
        let f2 = InseparableForm::new(1, parse_in("y^3*z^3*(y^2+z^2)", &ring).unwrap(), vec![3, 3]).unwrap();
        let step = BlowupStep::y(1, vec![1, 0]).unwrap();
        let BlowupOutcome::Equiconstant(f3) = weak_transform(&f2, &step).unwrap() else { panic!() };
        assert_eq!(f3.f(), &parse_in("z^6*(y+1)^3*((y+1)^2+1)", &ring).unwrap());
        assert_eq!(f3.r(), &[0, 6]);
    }

    #[test]
    fn first_blowup() {
        let ring = yz(2);
        let f0 = InseparableForm::new(1, parse_in("y^7+y*z^4", &ring).unwrap(), vec![0, 0]).unwrap();
        let BlowupOutcome::Equiconstant(f1) = weak_transform(&f0, &BlowupStep::y(0, vec![0, 0]).unwrap()).unwrap() else {
            panic!()
        };
        assert_eq!(f1.f(), &parse_in("y^3*(y^2+z^4)", &ring).unwrap());
        assert_eq!(f1.r(), &[3, 0]);
    }

    #[test]
    fn bold_regular_passes_through() {
        let ring = yz(3);
        let f = InseparableForm::new(1, ring.zero(), vec![0, 0]).unwrap();
        for step in [BlowupStep::y(0, vec![0, 2]).unwrap(), BlowupStep::y(1, vec![1, 0]).unwrap()] {
            let BlowupOutcome::Equiconstant(g) = weak_transform(&f, &step).unwrap() else { panic!() };
            assert!(g.f().is_zero());
            assert_eq!(g.r(), &[0, 0]);
        }
    }

    #[test]
    fn divisor_rule() {
        let s = BlowupStep::y(1, vec![1, 0]).unwrap();
        assert_eq!(transform_divisor(&[3, 3], Shade::Finite(2), 2, &s).unwrap(), vec![0, 6]);
        let s = BlowupStep::y(0, vec![0, 0]).unwrap();
        assert_eq!(transform_divisor(&[0, 0], Shade::Finite(5), 2, &s).unwrap(), vec![3, 0]);
        assert_eq!(transform_divisor(&[0, 0], Shade::Finite(2), 2, &s).unwrap(), vec![0, 0]);
        assert!(transform_divisor(&[0, 0], Shade::Finite(1), 2, &s).is_err());
    }

    #[test]
    fn x_chart_and_order_drop() {
        let ring = yz(2);
        let f = InseparableForm::new(1, parse_in("y^3+z^3", &ring).unwrap(), vec![0, 0]).unwrap();
        assert!(matches!(weak_transform(&f, &BlowupStep::new(Chart::X, vec![0, 0]).unwrap()).unwrap(), BlowupOutcome::OrderDropped { .. }));
        // y^3 + z^3 -> z(y^3 + 1) at the origin of the z-chart, order 1
        let out = weak_transform(&f, &BlowupStep::y(1, vec![0, 0]).unwrap()).unwrap();
        assert!(matches!(out, BlowupOutcome::OrderDropped { order: Order::Finite(1), .. }));
    }

    #[test]
    fn constructor_rejects() {
        let ring = yz(2);
        assert!(InseparableForm::new(1, parse_in("y", &ring).unwrap(), vec![0, 0]).is_err());
        assert!(InseparableForm::new(1, parse_in("y^2*z+z^3", &ring).unwrap(), vec![1, 0]).is_err());
        assert!(InseparableForm::new(1, parse_in("y^2*z+y*z^3", &ring).unwrap(), vec![1, 1]).is_ok());
        assert!(InseparableForm::new(1, parse_in("y^3", &ring).unwrap(), vec![0]).is_err());
    }

    #[test]
    fn split_full_polynomial() {
        let full = crate::fpoly::parse("x^2 + y^7 + y*z^4", Prime::new(2).unwrap()).unwrap();
        let f = InseparableForm::from_poly(&full, "x", 1, None).unwrap();
        assert_eq!(f.ring().vars(), ["y", "z"]);
        assert_eq!(f.f().num_terms(), 2);
        let bad = crate::fpoly::parse("x^2 + x*y^3", Prime::new(2).unwrap()).unwrap();
        assert!(InseparableForm::from_poly(&bad, "x", 1, None).is_err());
    }
}
