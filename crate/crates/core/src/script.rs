//! JSON blowup scripts: `{p, e, f0, steps: [{chart, translation: {var: int}}]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::blowup::{BlowupStep, Chart, InseparableForm, ResolutionState};
use crate::error::{Error, Result};
use crate::fpoly::{parse, Poly, Prime, Ring};

/// The three-blowup sequence over F_2 ending in a kangaroo point.
pub const GOLDEN_SCRIPT: &str = include_str!("../../cli/examples/kangaroo_p2.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub chart: String,
    #[serde(default)]
    pub translation: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    pub p: u64,
    pub e: u32,
    /// The full polynomial `x^c + F(y)`.
    pub f0: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    /// Order of the y-variables; defaults to the alphabetical order of those occurring in `f0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<Vec<u32>>,
    pub steps: Vec<ScriptStep>,
}

impl Script {
    pub fn from_json(text: &str) -> Result<Script> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scripts serialize")
    }

    pub fn golden() -> Script {
        Script::from_json(GOLDEN_SCRIPT).expect("bundled fixture parses")
    }

    fn x_name(&self) -> &str {
        self.x.as_deref().unwrap_or("x")
    }

    pub fn initial_form(&self) -> Result<InseparableForm> {
        let p = Prime::new(self.p)?;
        let x = self.x_name();
        let parsed = parse(&self.f0, p)?;
        let mut yvars: Vec<String> = parsed.vars().iter().filter(|v| *v != x).cloned().collect();
        if let Some(vs) = &self.vars {
            if let Some(missing) = yvars.iter().find(|v| !vs.contains(v)) {
                return Err(Error::Script(format!("variable `{missing}` of f0 is not listed in vars")));
            }
            if vs.iter().any(|v| v == x) {
                return Err(Error::Script(format!("vars must not contain `{x}`")));
            }
            yvars = vs.clone();
        }
        let mut all = vec![x.to_string()];
        all.extend(yvars);
        let full = parsed.embed(&Ring::new(p, &all)).map_err(|_| Error::Script(format!("f0 must contain `{x}`")))?;
        InseparableForm::from_poly(&full, x, self.e, self.r0.clone())
    }

    /// Resolve the named charts and translations against the form's variables.
    pub fn resolve_steps(&self, ring: &Ring) -> Result<Vec<BlowupStep>> {
        let x = self.x_name();
        self.steps.iter().map(|s| resolve_step(s, ring, x)).collect()
    }

    pub fn run(&self) -> Result<ResolutionState> {
        let form = self.initial_form()?;
        let steps = self.resolve_steps(form.ring())?;
        ResolutionState::replay(form, &steps)
    }

    /// A script reproducing `steps` from `form`.
    pub fn from_form(form: &InseparableForm, steps: &[BlowupStep]) -> Script {
        let vars = form.ring().vars().to_vec();
        let steps = steps
            .iter()
            .map(|s| ScriptStep {
                chart: match s.chart {
                    Chart::X => "x".to_string(),
                    Chart::Y(i) => vars[i].clone(),
                },
                translation: vars
                    .iter()
                    .zip(&s.translation)
                    .enumerate()
                    .filter(|(i, _)| Chart::Y(*i) != s.chart)
                    .map(|(_, (v, &t))| (v.clone(), t as i64))
                    .collect(),
            })
            .collect();
        let r0 = form.r().iter().any(|&k| k > 0).then(|| form.r().to_vec());
        Script { p: form.modulus().get(), e: form.e(), f0: form.display_with("x"), x: None, vars: Some(vars), r0, steps }
    }
}

pub fn resolve_step(s: &ScriptStep, ring: &Ring, x: &str) -> Result<BlowupStep> {
    let p = ring.modulus();
    let chart = if s.chart == x { Chart::X } else { Chart::Y(ring.index_of(&s.chart)?) };
    let mut t = vec![0u64; ring.nvars()];
    for (v, &val) in &s.translation {
        if v == x {
            return Err(Error::Script("the x-coordinate of the point is determined by the form; do not translate x".into()));
        }
        let i = ring.index_of(v)?;
        if Chart::Y(i) == chart {
            if p.reduce(val) != 0 {
                return Err(Error::Script(format!("the chart variable `{v}` cannot be translated")));
            }
            continue;
        }
        t[i] = p.reduce(val);
    }
    BlowupStep::new(chart, t)
}

/// Render `x^c+F` for a form with variables named as in its ring.
pub fn format_form(form: &InseparableForm) -> String {
    form.display_with("x")
}

/// Display `F` with the exceptional monomial factored out.
pub fn format_factored(f: &Poly) -> String {
    f.format_factored()
}
