use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kangaroo_core::harness::{self, MohBudget, ZwickelBudget};
use kangaroo_core::kangaroo::{classify_history, condition1, condition2, detect_kangaroo, Classification};
use kangaroo_core::oblique::{hybrid_oblique, integral_oblique, jet_construction, uniqueness_search, wagner_scalar};
use kangaroo_core::script::Script;
use kangaroo_core::{parse, parse_in, shade, BlowupStep, InseparableForm, Prime, Ring};

#[derive(Parser)]
#[command(name = "kangaroo", version, about = "Blowups of x^(p^e) + F(y) and their kangaroo points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a JSON blowup script and print the trace.
    Replay { script: PathBuf },
    /// Shade of F with respect to y^r, with the witness of the coordinate change.
    Shade {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Blow up one point and report conditions (1)-(4) and the shade change.
    Detect {
        #[command(flatten)]
        form: FormArgs,
        /// Chart variable.
        #[arg(long)]
        chart: String,
        /// Translation, e.g. `y=1` or `y=1,w=0`.
        #[arg(long = "t", default_value = "")]
        t: String,
    },
    /// Closed-form oblique candidates over (y, z).
    Oblique {
        #[arg(long, value_enum)]
        mode: ObliqueMode,
        #[arg(short, value_parser = parse_prime)]
        p: Prime,
        #[arg(short)]
        r: u32,
        #[arg(short)]
        s: u32,
        #[arg(short)]
        k: u32,
        #[arg(short, default_value_t = 1)]
        t: u64,
        /// The polynomial v(y) for the jet construction.
        #[arg(long, default_value = "y")]
        v: String,
    },
    /// Seeded verification campaigns.
    Scan {
        #[command(subcommand)]
        which: ScanCommand,
    },
    /// Oblique classes for every (r, k) in range, one JSON record per line.
    Atlas {
        #[arg(short, value_parser = parse_prime)]
        p: Prime,
        #[arg(long, default_value_t = 4)]
        rmax: u32,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long, default_value_t = harness::CLASS_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long, env = "KANGAROO_WORKERS", default_value_t = 0)]
        workers: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ObliqueMode {
    Hybrid,
    Integral,
    Jet,
}

#[derive(Args)]
struct FormArgs {
    #[arg(short, value_parser = parse_prime)]
    p: Prime,
    #[arg(short, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    e: u32,
    /// Exceptional multiplicities, comma separated, one per y-variable.
    #[arg(short)]
    r: Option<String>,
    /// Order of the y-variables, comma separated (default: alphabetical).
    #[arg(long)]
    vars: Option<String>,
    /// F(y), or the full x^c + F(y).
    poly: String,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "KANGAROO_WORKERS", default_value_t = 0)]
    workers: usize,
}

#[derive(Subcommand)]
enum ScanCommand {
    /// Exhaustive scan of x^p + y^r g with g homogeneous in two variables.
    Kangaroo {
        #[arg(short, default_value = "2", value_parser = parse_prime)]
        p: Prime,
        #[arg(long, default_value_t = 5)]
        rmax: u32,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Random forms and points against the bound shade' <= shade + p^(e-1).
    Moh {
        #[arg(short, default_value = "2", value_parser = parse_prime)]
        p: Prime,
        #[arg(short, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        e: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4))]
        m: u32,
        #[arg(long, default_value_t = 5)]
        max_r: u32,
        #[arg(long, default_value_t = 8)]
        max_deg: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        max_terms: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Halving of the shade between oasis and antelope, on sequences built around scanned kangaroos.
    Fact {
        #[arg(short, default_value = "2", value_parser = parse_prime)]
        p: Prime,
        #[arg(long, default_value_t = 5)]
        rmax: u32,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, default_value_t = 30)]
        prefixes: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Zwickel cardinalities, transform matrices, determinants and reconstruction.
    Zwickel {
        #[arg(long, default_value = "2,3,5")]
        primes: String,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        #[arg(long, default_value_t = 4)]
        max_c: u32,
        #[arg(long, default_value_t = 12)]
        max_deg: u32,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let n: u64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    Prime::new(n).map_err(|e| e.to_string())
}

fn csv_u32(s: &str) -> anyhow::Result<Vec<u32>> {
    s.split(',').map(|x| x.trim().parse::<u32>().with_context(|| format!("bad multiplicity `{x}`"))).collect()
}

impl FormArgs {
    fn form(&self) -> anyhow::Result<InseparableForm> {
        let r = self.r.as_deref().map(csv_u32).transpose()?;
        let found = parse(&self.poly, self.p)?;
        if found.vars().iter().any(|v| v == "x") {
            let full = match &self.vars {
                Some(vs) => {
                    let mut names = vec!["x".to_string()];
                    names.extend(vs.split(',').map(|v| v.trim().to_string()));
                    parse_in(&self.poly, &Ring::new(self.p, &names))?
                }
                None => found,
            };
            return Ok(InseparableForm::from_poly(&full, "x", self.e, r)?);
        }
        let f = match &self.vars {
            Some(vs) => {
                let names: Vec<&str> = vs.split(',').map(str::trim).collect();
                parse_in(&self.poly, &Ring::new(self.p, &names))?
            }
            None => found,
        };
        let r = r.unwrap_or_else(|| vec![0; f.nvars()]);
        Ok(InseparableForm::new(self.e, f, r)?)
    }
}

fn parse_point(form: &InseparableForm, chart: &str, t: &str) -> anyhow::Result<BlowupStep> {
    let ring = form.ring();
    let ch = ring.index_of(chart).with_context(|| format!("unknown chart variable `{chart}`"))?;
    let mut tr = vec![0u64; ring.nvars()];
    for part in t.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, val) = part.split_once('=').with_context(|| format!("expected var=value, got `{part}`"))?;
        let i = ring.index_of(name.trim()).with_context(|| format!("unknown variable `{name}`"))?;
        let v: i64 = val.trim().parse().with_context(|| format!("bad value in `{part}`"))?;
        if i == ch {
            bail!("the chart variable `{chart}` cannot be translated");
        }
        tr[i] = ring.modulus().reduce(v);
    }
    Ok(BlowupStep::y(ch, tr)?)
}

fn vec_str(r: &[u32]) -> String {
    let v: Vec<String> = r.iter().map(u32::to_string).collect();
    format!("({})", v.join(","))
}

fn replay(path: &PathBuf) -> anyhow::Result<bool> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let script = Script::from_json(&text)?;
    let state = script.run()?;
    let vars = state.current().ring().vars().to_vec();
    println!("{:<5} {:<16} {:<6} {:<6} {:<8} F", "step", "point", "order", "shade", "r");
    for (i, snap) in state.history().iter().enumerate() {
        let point = snap.step.as_ref().map_or("origin".to_string(), |s| s.describe(&vars));
        let f = shade(&InseparableForm::new(script.e, snap.f.clone(), snap.r.clone())?)?.normalized;
        println!("{i:<5} {point:<16} {:<6} {:<6} {:<8} {}", snap.order.to_string(), snap.shade.to_string(), vec_str(&snap.r), f.format_factored());
    }
    if let Some((step, order)) = state.dropped() {
        println!("order drops to {order} at {}", step.describe(&vars));
    }
    let h = state.history();
    let triples = classify_history(&state).triples;
    if triples.is_empty() {
        println!("no kangaroo");
    }
    for t in triples {
        if let Some(o) = t.oasis {
            println!("oasis at step {o}: shade {}", h[o].shade);
        }
        println!("KANGAROO at step {}: shade {} -> {}", t.kangaroo, h[t.antelope].shade, h[t.kangaroo].shade);
    }
    Ok(true)
}

fn detect(form: &InseparableForm, step: &BlowupStep) -> anyhow::Result<bool> {
    let vars = form.ring().vars().to_vec();
    let d = detect_kangaroo(form, step)?;
    println!("form: {}  r={}", form.display_with("x"), vec_str(form.r()));
    println!("point: {}", step.describe(&vars));
    if let Some(rep) = &d.report {
        let yn = |b: bool| if b { "yes" } else { "no" };
        println!(
            "conditions: (1) {} (2) {} (3) {} (4) {}  [residues {:?}, phi {}, |r|+k {}, oblique order {}]",
            yn(rep.cond1),
            yn(rep.cond2),
            yn(rep.cond3),
            yn(rep.cond4),
            rep.residues,
            rep.phi,
            rep.degree,
            rep.oblique_order
        );
    }
    match (&d.shade_after, &d.after) {
        (Some(s), Some(after)) => {
            println!("shade: {} -> {s}", d.shade_before);
            println!("after: {}  r={}", after.display_with("x"), vec_str(after.r()));
        }
        _ => println!("shade: {} -> order dropped", d.shade_before),
    }
    let label = match d.classification {
        Classification::Kangaroo => "KANGAROO",
        Classification::NotKangaroo => "no kangaroo",
        Classification::Blocked => "no kangaroo (conditions hold)",
        Classification::OrderDropped => "order dropped",
    };
    println!("classification: {label}");
    if d.necessity_violated {
        println!("VIOLATION: a kangaroo at a point failing the conditions");
    }
    Ok(!d.necessity_violated)
}

fn oblique(mode: ObliqueMode, p: Prime, r: u32, s: u32, k: u32, t: u64, v: &str) -> anyhow::Result<bool> {
    match mode {
        ObliqueMode::Hybrid => {
            let h = hybrid_oblique(r, s, k, t, p)?;
            println!("{}", h.poly.format_factored());
            if h.degenerate {
                println!("degenerate: C({},{}) = 0 mod {p}", k + r, k + 1);
            }
        }
        ObliqueMode::Integral => println!("{}", integral_oblique(s, r, k, t, p)?.format_factored()),
        ObliqueMode::Jet => {
            let ring = Ring::new(p, &["y", "z"]);
            let v = parse_in(v, &ring).context("v must be a polynomial in y")?;
            println!("{}", jet_construction(&[r, s], 1, k, &v)?.format_factored());
        }
    }
    Ok(true)
}

fn emit(value: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn scan(which: &ScanCommand) -> anyhow::Result<bool> {
    match which {
        ScanCommand::Kangaroo { p, rmax, kmax, common } => {
            let cat = harness::kangaroo_scan(*p, *rmax, *kmax, common.workers)?;
            for ev in &cat.events {
                println!("{}", ev.record());
            }
            for c in &cat.classes {
                emit(c)?;
            }
            for f in cat.necessity_violations.iter().chain(&cat.sufficiency_failures) {
                emit(f)?;
            }
            println!(
                "scanned {} forms, {} points: {} jumps, {} necessity violations, {} sufficiency failures, {} order drops with all conditions, {} class counts other than one",
                cat.forms,
                cat.points,
                cat.jumps,
                cat.necessity_violations.len(),
                cat.sufficiency_failures.len(),
                cat.dropped_with_conditions,
                cat.class_failures().len()
            );
            Ok(cat.ok())
        }
        ScanCommand::Moh { p, e, trials, m, max_r, max_deg, max_terms, common } => {
            let budget = MohBudget { m: *m as usize, max_r: *max_r, max_deg: *max_deg, max_terms: *max_terms as usize, ..MohBudget::default() };
            let rep = harness::moh_trial(*p, *e, &budget, *trials, common.seed, common.workers)?;
            for v in &rep.violations {
                emit(v)?;
            }
            emit(&rep)?;
            println!(
                "{} trials, {} evaluated, max jump {}, {} violations",
                rep.trials,
                rep.evaluated,
                rep.max_jump.map_or("none".to_string(), |j| format!("{j:+}")),
                rep.violations.len()
            );
            Ok(rep.violations.is_empty())
        }
        ScanCommand::Fact { p, rmax, kmax, prefixes, common } => {
            let cat = harness::kangaroo_scan(*p, *rmax, *kmax, common.workers)?;
            let rep = harness::oasis_fact_check(&cat.events, *prefixes, common.seed, common.workers)?;
            for v in &rep.violations {
                emit(v)?;
            }
            println!(
                "{} antelopes, {} sequences, {} triples, {} exceptional (oasis shade 2), {} at equality, {} violations",
                rep.antelopes,
                rep.sequences,
                rep.triples,
                rep.exceptional,
                rep.equality_cases,
                rep.violations.len()
            );
            Ok(rep.violations.is_empty())
        }
        ScanCommand::Zwickel { primes, max_m, max_c, max_deg, common } => {
            let primes = primes
                .split(',')
                .map(|s| parse_prime(s.trim()).map(Prime::get).map_err(anyhow::Error::msg))
                .collect::<anyhow::Result<Vec<u64>>>()?;
            let budget = ZwickelBudget { primes, max_m: *max_m, max_c: *max_c, max_deg: *max_deg };
            if budget.max_m == 0 || budget.max_c == 0 {
                bail!("--max-m and --max-c must be at least 1");
            }
            let rep = harness::zwickel_sweep(&budget, common.seed, common.workers)?;
            for f in &rep.failures {
                println!("FAIL {f}");
            }
            println!(
                "{} families, {} contexts, {} oracle comparisons, {} fraction-free cross-checks, {} failures",
                rep.families,
                rep.contexts,
                rep.oracle_checked,
                rep.bareiss_checked,
                rep.failures.len()
            );
            Ok(rep.ok())
        }
    }
}

fn atlas(p: Prime, rmax: u32, kmax: u32, budget: u64, workers: usize) -> anyhow::Result<bool> {
    let ring = Ring::new(p, &["y", "z"]);
    for ry in 0..=rmax {
        for rz in ry..=rmax {
            for k in 0..=kmax {
                let r = [ry, rz];
                let search = harness::with_workers(workers, || uniqueness_search(&ring, &r, k, budget))?;
                let mut rec = serde_json::json!({
                    "p": p.get(),
                    "r": r,
                    "k": k,
                    "cond1": condition1(&r, k as u64, p),
                    "cond2": condition2(&r, p),
                    "wagner_scalar": wagner_scalar(ry, k, p).value(),
                    "degenerate": hybrid_oblique(ry, rz, k, 1, p)?.degenerate,
                });
                match search {
                    Ok(classes) => {
                        rec["classes"] = classes.len().into();
                        rec["representatives"] = classes.iter().map(|c| c.representative.format_factored()).collect::<Vec<_>>().into();
                    }
                    Err(e) => rec["error"] = e.to_string().into(),
                }
                println!("{rec}");
            }
        }
    }
    Ok(true)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Replay { script } => replay(&script),
        Command::Shade { form } => {
            let f = form.form()?;
            let s = shade(&f)?;
            println!("shade={} witness={}", s.shade, s.witness);
            Ok(true)
        }
        Command::Detect { form, chart, t } => {
            let f = form.form()?;
            let step = parse_point(&f, &chart, &t)?;
            detect(&f, &step)
        }
        Command::Oblique { mode, p, r, s, k, t, v } => oblique(mode, p, r, s, k, t, &v),
        Command::Scan { which } => scan(&which),
        Command::Atlas { p, rmax, kmax, budget, workers } => atlas(p, rmax, kmax, budget, workers),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
