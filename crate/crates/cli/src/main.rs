use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use icregion::claims::{verify, ClaimId};
use icregion::dist::{DistError, FactorSpec};
use icregion::polytope::{bind, Binding, HPoly, VertexList2};
use icregion::regions::{binding_for, region_for, RegionError, RegionId};
use icregion::sampler::{improvement_search, parse_alphabets, Objective, SearchConfig};
use icregion::scalar::{decimal_sig, parse_rational, rational_json, rational_string};
use icregion::symfm::{
    derive_region, substitute_rate_sums, system_from_json, system_to_json, AxiomSetId, LinearSystem, RateVar,
    SystemId,
};
use icregion::terms::{eval_spec_terms, TermVector};
use icregion::Rational;

#[derive(Parser)]
#[command(name = "icregion", version, about = "Rate regions of the two-user interference channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all 22 information terms of a spec.
    Terms {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bind a region to a spec and emit its vertices.
    Region {
        #[arg(long)]
        spec: PathBuf,
        /// hk, hk-mod, cmg, compact, hod (or a quadruple region hk-q, cmg-q, hod-q).
        #[arg(long)]
        which: String,
        /// CSV file receiving the vertex list.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// JSON file receiving the bound system.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project a quadruple system onto (R1, R2) symbolically.
    Derive {
        #[arg(long)]
        system: String,
        /// chain or hk-indep; defaults to hk-indep for hk and hk-mod, chain otherwise.
        #[arg(long)]
        axioms: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Also write every intermediate stage here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check region relations on seeded samples.
    Verify {
        /// all or one claim id.
        #[arg(long, default_value = "all")]
        claim: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Look for specs where the correlated region beats the independent one.
    Search {
        #[arg(long, default_value = "q=2,u=2,w=2,x=2,y=2")]
        alphabets: String,
        #[arg(long, default_value_t = 500)]
        budget: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "area")]
        objective: String,
        /// Mixing weight toward a fresh row, a rational in (0,1).
        #[arg(long, default_value = "1/4")]
        step: String,
        /// Start every restart from this spec.
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bind a user-supplied system and eliminate variables numerically.
    Project {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, conflicts_with = "terms", required_unless_present = "terms")]
        spec: Option<PathBuf>,
        /// terms.json as written by `terms`.
        #[arg(long)]
        terms: Option<PathBuf>,
        /// Comma-separated variables to eliminate; defaults to all but R1, R2.
        #[arg(long, value_delimiter = ',')]
        eliminate: Option<Vec<String>>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

enum Failure {
    Spec(String),
    Form(String),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Spec(_) => 2,
            Failure::Form(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<RegionError> for Failure {
    fn from(e: RegionError) -> Self {
        match e {
            RegionError::FormMismatch { .. } => Failure::Form(e.to_string()),
            RegionError::Dist(d) => spec_failure(d),
            other => Failure::Other(other.into()),
        }
    }
}

fn spec_failure(e: DistError) -> Failure {
    Failure::Spec(e.to_string())
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: &Path, v: &Value) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    write(path, &s)
}

fn load_spec(path: &Path) -> Res<FactorSpec> {
    let text = read(path)?;
    let spec = FactorSpec::from_json_str(&text).map_err(spec_failure)?;
    spec.validate().map_err(spec_failure)?;
    Ok(spec)
}

fn vertices_csv(v: &VertexList2<Rational>) -> String {
    let mut s = String::from("R1,R2\n");
    for p in v {
        s.push_str(&format!("{},{}\n", decimal_sig(&p[0], 12), decimal_sig(&p[1], 12)));
    }
    s
}

fn poly_json(p: &HPoly<Rational>) -> Value {
    let dims: Vec<RateVar> = p.dims().iter().collect();
    let rows: Vec<Value> = p
        .rows()
        .iter()
        .map(|r| {
            let lhs: serde_json::Map<String, Value> = dims
                .iter()
                .filter(|d| !num_zero(r.coef(**d)))
                .map(|d| (d.to_string(), rational_json(r.coef(*d))))
                .collect();
            json!({"lhs": lhs, "rhs": rational_json(&r.rhs)})
        })
        .collect();
    json!({
        "variables": dims.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "inequalities": rows,
    })
}

fn num_zero(x: &Rational) -> bool {
    *x == Rational::from_integer(0.into())
}

fn two_d_extras(p: &HPoly<Rational>, out: &mut Value) -> anyhow::Result<Option<VertexList2<Rational>>> {
    if p.dims().len() != 2 {
        return Ok(None);
    }
    let v = p.vertices2()?;
    let area = p.area2()?;
    out["vertices"] = Value::Array(v.iter().map(|q| json!([rational_json(&q[0]), rational_json(&q[1])])).collect());
    out["area"] = rational_json(&area);
    Ok(Some(v))
}

fn cmd_terms(spec: &Path, out: &Path) -> Res<()> {
    let spec = load_spec(spec)?;
    let tv = eval_spec_terms(&spec).map_err(spec_failure)?;
    write_json(out, &serde_json::to_value(tv).map_err(anyhow::Error::from)?)?;
    Ok(())
}

fn cmd_region(spec: &Path, which: &str, emit: Option<&Path>, out: Option<&Path>) -> Res<()> {
    let spec = load_spec(spec)?;
    let id: RegionId = which.parse().map_err(|e: String| anyhow!(e))?;
    let poly = region_for(&spec, id)?;
    let mut j = poly_json(&poly);
    j["region"] = json!(id.tag());
    j["form"] = json!(spec.form.tag());
    let verts = two_d_extras(&poly, &mut j)?;
    if let Some(path) = emit {
        let v = verts.ok_or_else(|| anyhow!("--emit needs a two-dimensional region; `{which}` is a quadruple region"))?;
        write(path, &vertices_csv(&v))?;
    }
    if let Some(path) = out {
        write_json(path, &j)?;
    }
    Ok(())
}

fn cmd_derive(system: &str, axioms: Option<&str>, out: &Path, report: Option<&Path>) -> Res<()> {
    let sys: SystemId = system.parse().map_err(anyhow::Error::from)?;
    let ax: AxiomSetId = match axioms {
        Some(a) => a.parse().map_err(anyhow::Error::from)?,
        None if matches!(sys, SystemId::Hk | SystemId::HkModified) => AxiomSetId::HkIndep,
        None => AxiomSetId::Chain,
    };
    let start = Instant::now();
    let d = derive_region(sys, ax);
    let elapsed = start.elapsed();
    write_json(out, &system_to_json(d.result()))?;
    if let Some(path) = report {
        let stages: Vec<Value> = d
            .stages
            .iter()
            .map(|s| {
                json!({
                    "label": s.label,
                    "axioms": s.axioms.iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
                    "system": system_to_json(&s.result),
                    "removed": s.removed.iter().map(|c| json!({
                        "row": c.row.to_string(),
                        "rows_used": c.rows_used.iter().map(|(k, r)| json!([rational_string(k), r.to_string()])).collect::<Vec<_>>(),
                        "nonneg_used": c.nonneg_used.iter().map(|(k, v)| json!([rational_string(k), v.to_string()])).collect::<Vec<_>>(),
                        "axioms_used": c.axioms_used.iter().map(|(k, a)| json!([rational_string(k), a])).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        write_json(
            path,
            &json!({
                "system": sys.tag(),
                "axioms": ax.tag(),
                "start": system_to_json(&d.start),
                "substituted": system_to_json(&d.substituted),
                "eliminated": system_to_json(&d.eliminated),
                "stages": stages,
            }),
        )?;
    }
    eprintln!(
        "{}: {} rows after elimination, {} after pruning ({} ms)",
        sys.tag(),
        d.eliminated.len(),
        d.result().len(),
        elapsed.as_millis()
    );
    Ok(())
}

fn cmd_verify(claim: &str, samples: usize, seed: u64, out: &Path) -> Res<bool> {
    let which = if claim == "all" {
        None
    } else {
        Some(claim.parse::<ClaimId>().map_err(|e| anyhow!(e))?)
    };
    if samples == 0 {
        return Err(anyhow!("--samples must be at least 1").into());
    }
    let report = verify(which, samples, seed);
    write_json(out, &report.to_json())?;
    for c in &report.claims {
        let kind = if c.id.is_hard() { "hard" } else { "data" };
        eprintln!("{:<24} {kind:<5} {}/{} passed", c.id.tag(), c.passed(), c.outcomes.len());
    }
    Ok(report.hard_failures().is_empty())
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    alphabets: &str,
    budget: usize,
    restarts: usize,
    seed: u64,
    objective: &str,
    step: &str,
    start: Option<&Path>,
    out: &Path,
) -> Res<()> {
    let alphabets = parse_alphabets(alphabets).map_err(anyhow::Error::from)?;
    let objective: Objective = objective.parse().map_err(anyhow::Error::from)?;
    let step = parse_rational(step).ok_or_else(|| anyhow!("bad --step `{step}`"))?;
    let mut cfg = SearchConfig::new(alphabets, budget, restarts, seed, objective);
    cfg.step = step;
    if let Some(p) = start {
        cfg.start = Some(load_spec(p)?);
    }
    let res = improvement_search(&cfg).map_err(anyhow::Error::from)?;
    write_json(out, &res.to_json())?;
    eprintln!("best {} gap {}", objective, decimal_sig(&res.value, 12));
    Ok(())
}

fn parse_var(s: &str) -> anyhow::Result<RateVar> {
    RateVar::from_name(s.trim()).ok_or_else(|| anyhow!("unknown variable `{s}`"))
}

fn cmd_project(
    system: &Path,
    spec: Option<&Path>,
    terms: Option<&Path>,
    eliminate: Option<&[String]>,
    out: &Path,
    emit: Option<&Path>,
) -> Res<()> {
    let sv: Value = serde_json::from_str(&read(system)?).map_err(anyhow::Error::from)?;
    let mut sys: LinearSystem = system_from_json(&sv).map_err(anyhow::Error::from)?;
    let binding: Binding = match (spec, terms) {
        (Some(p), _) => binding_for(&load_spec(p)?).map_err(spec_failure)?,
        (None, Some(p)) => {
            let tv: TermVector<f64> = serde_json::from_str(&read(p)?).map_err(|e| Failure::Spec(e.to_string()))?;
            Binding::from_terms(&tv)
        }
        (None, None) => return Err(anyhow!("one of --spec or --terms is required").into()),
    };
    let vars = sys.vars();
    let over_st = [RateVar::S1, RateVar::S2].iter().any(|v| vars.contains(*v));
    if over_st && ![RateVar::R1, RateVar::R2].iter().any(|v| vars.contains(*v)) {
        sys = substitute_rate_sums(&sys).map_err(anyhow::Error::from)?;
    }
    let drop: Vec<RateVar> = match eliminate {
        Some(list) => list.iter().map(|s| parse_var(s)).collect::<anyhow::Result<_>>()?,
        None => sys
            .vars()
            .iter()
            .filter(|v| !matches!(v, RateVar::R1 | RateVar::R2))
            .collect(),
    };
    let poly = bind(&sys, &binding).map_err(anyhow::Error::from)?.eliminate_all(&drop);
    let mut j = poly_json(&poly);
    let verts = two_d_extras(&poly, &mut j)?;
    write_json(out, &j)?;
    if let Some(path) = emit {
        let v = verts.ok_or_else(|| anyhow!("--emit needs exactly two remaining variables"))?;
        write(path, &vertices_csv(&v))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Res<bool> {
    match cli.command {
        Command::Terms { spec, out } => cmd_terms(&spec, &out).map(|_| true),
        Command::Region { spec, which, emit, out } => {
            cmd_region(&spec, &which, emit.as_deref(), out.as_deref()).map(|_| true)
        }
        Command::Derive {
            system,
            axioms,
            out,
            report,
        } => cmd_derive(&system, axioms.as_deref(), &out, report.as_deref()).map(|_| true),
        Command::Verify {
            claim,
            samples,
            seed,
            out,
        } => cmd_verify(&claim, samples, seed, &out),
        Command::Search {
            alphabets,
            budget,
            restarts,
            seed,
            objective,
            step,
            start,
            out,
        } => cmd_search(
            &alphabets,
            budget,
            restarts,
            seed,
            &objective,
            &step,
            start.as_deref(),
            &out,
        )
        .map(|_| true),
        Command::Project {
            system,
            spec,
            terms,
            eliminate,
            out,
            emit,
        } => cmd_project(
            &system,
            spec.as_deref(),
            terms.as_deref(),
            eliminate.as_deref(),
            &out,
            emit.as_deref(),
        )
        .map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: at least one hard claim failed");
            ExitCode::from(1)
        }
        Err(f) => {
            match &f {
                Failure::Spec(m) => eprintln!("error: invalid spec: {m}"),
                Failure::Form(m) => eprintln!("error: {m}"),
                Failure::Other(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
