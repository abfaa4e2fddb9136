//! The four necessary conditions for a kangaroo point, candidate enumeration, detection, and
//! oasis/antelope/kangaroo classification of resolution histories.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::blowup::{weak_transform, BlowupOutcome, BlowupStep, Chart, InseparableForm, ResolutionState};
use crate::error::{Error, Result};
use crate::fpoly::{Order, Poly, Prime};
use crate::oblique::{oblique_order, obliqueness_test, ObliquenessReport};
use crate::shade::{shade, shade_jump, Jump, Shade};

fn check_modulus(c: u64) -> Result<()> {
    if c == 0 {
        return Err(Error::Precondition("modulus c must be at least 1".into()));
    }
    Ok(())
}

/// Componentwise residues `r_i mod c`.
pub fn residues(r: &[u32], c: u64) -> Result<Vec<u64>> {
    check_modulus(c)?;
    Ok(r.iter().map(|&x| x as u64 % c).collect())
}

/// Number of `r_i` not divisible by `c`.
pub fn phi(r: &[u32], c: u64) -> Result<usize> {
    Ok(residues(r, c)?.iter().filter(|&&x| x != 0).count())
}

/// `|r| + ord g` is a multiple of `p`.
pub fn condition1(r: &[u32], ordg: u64, p: Prime) -> bool {
    (r.iter().map(|&x| x as u64).sum::<u64>() + ordg) % p.get() == 0
}

/// `sum of residues <= (phi(r) - 1) * c`.
pub fn arithmetic_inequality(r: &[u32], c: u64) -> Result<bool> {
    let res = residues(r, c)?;
    let lhs: i128 = res.iter().map(|&x| x as i128).sum();
    let phi = res.iter().filter(|&&x| x != 0).count() as i128;
    Ok(lhs <= (phi - 1) * c as i128)
}

pub fn condition2(r: &[u32], p: Prime) -> bool {
    arithmetic_inequality(r, p.get()).expect("p >= 2")
}

/// The ceiling form: `sum ceil(rbar_i / c) > ceil(sum rbar_i / c)`.
pub fn ceiling_form(r: &[u32], c: u64) -> Result<bool> {
    let res = residues(r, c)?;
    let lhs: u64 = res.iter().map(|&x| x.div_ceil(c)).sum();
    let rhs = res.iter().sum::<u64>().div_ceil(c);
    Ok(lhs > rhs)
}

/// Whether the arithmetic inequality and its ceiling form agree on `r`.
pub fn ceiling_equivalence_check(r: &[u32], c: u64) -> Result<bool> {
    Ok(arithmetic_inequality(r, c)? == ceiling_form(r, c)?)
}

/// Every F_p-point of the exceptional divisor, once each, in the chart of its last nonzero
/// coordinate.
pub fn all_points(m: usize, p: Prime) -> Vec<BlowupStep> {
    let q = p.get();
    let mut out = Vec::new();
    for ch in 0..m {
        let n = q.pow(ch as u32);
        for idx in 0..n {
            let mut t = vec![0u64; m];
            let mut x = idx;
            for ti in t.iter_mut().take(ch) {
                *ti = x % q;
                x /= q;
            }
            out.push(BlowupStep::y(ch, t).expect("chart entry is zero"));
        }
    }
    out
}

/// Whether the point lies off every old component `y_i = 0` with `p` not dividing `r_i`.
pub fn satisfies_condition3(r: &[u32], p: Prime, step: &BlowupStep) -> bool {
    let Chart::Y(ch) = step.chart else { return false };
    r.iter().enumerate().all(|(i, &ri)| i == ch || ri as u64 % p.get() == 0 || step.translation[i] != 0)
}

pub fn condition3_candidates(form: &InseparableForm) -> Vec<BlowupStep> {
    let p = form.modulus();
    all_points(form.nvars(), p).into_iter().filter(|s| satisfies_condition3(form.r(), p, s)).collect()
}

/// `y^r` times the initial form of `g`, the tangent cone that condition (4) constrains.
pub fn tangent_cone(form: &InseparableForm) -> Result<Option<Poly>> {
    let sh = shade(form)?;
    if sh.shade == Shade::BoldRegular {
        return Ok(None);
    }
    Ok(Some(sh.normalized.initial_form()?))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub residues: Vec<u64>,
    pub phi: usize,
    /// `|r| + ord g`.
    pub degree: u64,
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
    pub cond4: bool,
    /// Order of the stripped translate of the tangent cone in the non-chart variables.
    #[serde(skip)]
    pub oblique_order: Order,
    #[serde(skip)]
    pub candidates: Vec<BlowupStep>,
    #[serde(skip)]
    pub obliqueness: Option<ObliquenessReport>,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3 && self.cond4
    }
}

/// Evaluate conditions (1)-(4) at `form` for the point named by `step`.
pub fn conditions(form: &InseparableForm, step: &BlowupStep) -> Result<Option<ConditionReport>> {
    let p = form.modulus();
    let Some(cone) = tangent_cone(form)? else { return Ok(None) };
    let k = shade(form)?.shade.finite().expect("finite");
    let total: u64 = form.r().iter().map(|&x| x as u64).sum();
    let res = residues(form.r(), p.get())?;
    let phi = res.iter().filter(|&&x| x != 0).count();
    let cond3 = satisfies_condition3(form.r(), p, step);
    let (oblique_ord, obliqueness) = match step.chart {
        Chart::X => (Order::Finite(0), None),
        Chart::Y(ch) => {
            let ord = oblique_order(&cone, ch, &step.translation)?;
            let nonzero = step.translation.iter().enumerate().all(|(i, &t)| i == ch || t != 0);
            let rep = if nonzero { Some(obliqueness_test(&cone, form.r(), ch, &step.translation)?) } else { None };
            (ord, rep)
        }
    };
    Ok(Some(ConditionReport {
        residues: res,
        phi,
        degree: total + k,
        cond1: condition1(form.r(), k, p),
        cond2: condition2(form.r(), p),
        cond3,
        cond4: oblique_ord >= Order::Finite(k + 1),
        oblique_order: oblique_ord,
        candidates: condition3_candidates(form),
        obliqueness,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Kangaroo,
    NotKangaroo,
    /// All four conditions hold, yet the shade does not rise.
    Blocked,
    OrderDropped,
}

#[derive(Debug, Clone)]
pub struct Detection {
    pub classification: Classification,
    pub shade_before: Shade,
    pub shade_after: Option<Shade>,
    pub after: Option<InseparableForm>,
    /// `None` for bold regular sources.
    pub report: Option<ConditionReport>,
    /// A kangaroo whose source violates one of the conditions, or a rise beyond `p^(e-1)`.
    pub necessity_violated: bool,
}

/// Blow up, recompute the shade, and classify the point.
pub fn detect_kangaroo(form: &InseparableForm, step: &BlowupStep) -> Result<Detection> {
    let before = shade(form)?.shade;
    let report = conditions(form, step)?;
    let (classification, shade_after, after) = match weak_transform(form, step)? {
        BlowupOutcome::OrderDropped { .. } => (Classification::OrderDropped, None, None),
        BlowupOutcome::Equiconstant(g) => {
            let s = shade(&g)?.shade;
            let jump = shade_jump(form.order(), before, g.order(), s);
            let cls = match jump {
                Jump::KangarooJump => Classification::Kangaroo,
                _ if report.as_ref().is_some_and(ConditionReport::all) => Classification::Blocked,
                _ => Classification::NotKangaroo,
            };
            (cls, Some(s), Some(g))
        }
    };
    let mut necessity_violated = false;
    if classification == Classification::Kangaroo {
        let ceiling = form.c() / form.modulus().get();
        let rise_ok = match (before, shade_after) {
            (Shade::Finite(a), Some(Shade::Finite(b))) => b <= a + ceiling,
            _ => false,
        };
        necessity_violated = !rise_ok || !report.as_ref().is_some_and(ConditionReport::all);
    }
    Ok(Detection { classification, shade_before: before, shade_after, after, report, necessity_violated })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Role {
    Oasis,
    Antelope,
    Kangaroo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triple {
    /// `None` when a component through the antelope was present from the start.
    pub oasis: Option<usize>,
    pub antelope: usize,
    pub kangaroo: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistoryClassification {
    pub roles: Vec<BTreeSet<Role>>,
    pub triples: Vec<Triple>,
}

/// Tag each point of the history; one triple per shade jump at constant order.
pub fn classify_history(state: &ResolutionState) -> HistoryClassification {
    let h = state.history();
    let mut roles = vec![BTreeSet::new(); h.len()];
    let mut triples = Vec::new();
    for i in 1..h.len() {
        if shade_jump(h[i - 1].order, h[i - 1].shade, h[i].order, h[i].shade) != Jump::KangarooJump {
            continue;
        }
        let ant = i - 1;
        let first = h[ant]
            .labels
            .iter()
            .zip(&h[ant].r)
            .filter_map(|(l, &r)| if r > 0 { *l } else { None })
            .min();
        let oasis = first.and_then(|l| l.checked_sub(1));
        roles[ant].insert(Role::Antelope);
        roles[i].insert(Role::Kangaroo);
        if let Some(o) = oasis {
            roles[o].insert(Role::Oasis);
        }
        triples.push(Triple { oasis, antelope: ant, kangaroo: i });
    }
    HistoryClassification { roles, triples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::{parse_in, Ring};
    use crate::script::Script;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residues(&[3, 3], 2).unwrap(), vec![1, 1]);
        assert_eq!(phi(&[3, 3], 2).unwrap(), 2);
        assert_eq!(phi(&[0, 0], 5).unwrap(), 0);
        assert_eq!(residues(&[6, 4, 3], 3).unwrap(), vec![0, 1, 0]);
        assert_eq!(phi(&[6, 4, 3], 3).unwrap(), 1);
        assert!(residues(&[1], 0).is_err());
    }

    #[test]
    fn condition_examples() {
        assert!(condition1(&[3, 3], 2, p(2)));
        assert!(condition1(&[0, 0], 3, p(3)));
        assert!(!condition1(&[1, 0], 1, p(3)));
        assert!(condition2(&[3, 3], p(2)));
        assert!(!condition2(&[1, 0], p(7)));
        assert!(condition2(&[2, 1], p(3)));
        assert!(!condition2(&[2, 2], p(2)));
    }

    #[test]
    fn ceiling_forms() {
        assert!(ceiling_equivalence_check(&[3, 3], 2).unwrap());
        assert!(ceiling_form(&[3, 3], 2).unwrap());
        assert!(ceiling_equivalence_check(&[0, 0], 3).unwrap());
        // the literal `<=` reading disagrees with the inequality on this very input
        let res = residues(&[3, 3], 2).unwrap();
        let literal = res.iter().map(|x| x.div_ceil(2)).sum::<u64>() <= res.iter().sum::<u64>().div_ceil(2);
        assert_ne!(literal, arithmetic_inequality(&[3, 3], 2).unwrap());
    }

    #[test]
    fn candidate_points() {
        let ring = Ring::new(p(2), &["y", "z"]);
        let f = InseparableForm::new(1, parse_in("y^3*z^3*(y^2+z^2)", &ring).unwrap(), vec![3, 3]).unwrap();
        assert_eq!(condition3_candidates(&f), vec![BlowupStep::y(1, vec![1, 0]).unwrap()]);
        let g = InseparableForm::new(1, parse_in("y^3+z^5", &ring).unwrap(), vec![0, 0]).unwrap();
        assert_eq!(condition3_candidates(&g).len(), 3);
        assert_eq!(all_points(3, p(3)).len(), 13);
        // r = (p, 1): only points off z = 0
        let r3 = Ring::new(p(3), &["y", "z"]);
        let h = InseparableForm::new(1, parse_in("y^3*z*(y+z)^2", &r3).unwrap(), vec![3, 1]).unwrap();
        let c = condition3_candidates(&h);
        assert!(c.iter().all(|s| s.chart == Chart::Y(1)));
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn detection_at_the_antelope() {
        let ring = Ring::new(p(2), &["y", "z"]);
        let f = InseparableForm::new(1, parse_in("y^3*z^3*(y^2+z^2)", &ring).unwrap(), vec![3, 3]).unwrap();
        let d = detect_kangaroo(&f, &BlowupStep::y(1, vec![1, 0]).unwrap()).unwrap();
        assert_eq!(d.classification, Classification::Kangaroo);
        assert_eq!((d.shade_before, d.shade_after), (Shade::Finite(2), Some(Shade::Finite(3))));
        assert!(!d.necessity_violated);
        let d = detect_kangaroo(&f, &BlowupStep::y(1, vec![0, 0]).unwrap()).unwrap();
        assert_eq!(d.classification, Classification::NotKangaroo);
        assert!(!d.report.unwrap().cond3);
        let bold = InseparableForm::new(1, parse_in("y^2*z^2", &ring).unwrap(), vec![0, 0]).unwrap();
        let d = detect_kangaroo(&bold, &BlowupStep::y(1, vec![1, 0]).unwrap()).unwrap();
        assert_eq!(d.classification, Classification::NotKangaroo);
        assert!(d.report.is_none());
    }

    #[test]
    fn golden_history_tags() {
        let st = Script::golden().run().unwrap();
        let cls = classify_history(&st);
        assert_eq!(cls.triples, vec![Triple { oasis: Some(0), antelope: 2, kangaroo: 3 }]);
        assert!(cls.roles[1].is_empty());
        // a single dropping blowup carries no tags
        let mut s = Script::golden();
        s.steps.truncate(1);
        let cls = classify_history(&s.run().unwrap());
        assert!(cls.triples.is_empty() && cls.roles.iter().all(BTreeSet::is_empty));
    }
}
