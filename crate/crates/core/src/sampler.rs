//! Seeded random specs and a restart hill climb for the gap between the
//! correlated-auxiliary region and the independent-auxiliary region.
//!
//! Rows are drawn with ChaCha8 seeded from a `u64`. Tables are visited in
//! the order of [`FactorSpec::tables_mut`] (q, w1, u1, w2, u2, x1, x2,
//! channel), each table row-major, each row filled with `uniform(0,1)`
//! draws and normalized.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::dist::{independence_projection, AlphabetSpec, DistError, FactorSpec, Form, VariableId};
use crate::polytope::{HPoly, PolyError, VertexList2};
use crate::regions::{region_for, RegionError, RegionId};
use crate::scalar::{decimal_sig, rational_json, rational_string, to_f64, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("budget must be at least 1")]
    Budget,
    #[error("restarts must be at least 1")]
    Restarts,
    #[error("step must lie strictly between 0 and 1, got {0}")]
    Step(String),
    #[error("bad alphabet list `{0}`")]
    Alphabets(String),
    #[error("unknown objective `{0}` (expected area or sumrate)")]
    Objective(String),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

impl From<PolyError> for SearchError {
    fn from(e: PolyError) -> Self {
        SearchError::Region(RegionError::Poly(e))
    }
}

/// Mix two words into a per-item seed (splitmix64 finalizer).
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fresh_row(rng: &mut ChaCha8Rng, row: &mut [f64]) {
    for v in row.iter_mut() {
        *v = rng.gen::<f64>();
    }
    normalize(row);
}

fn normalize(row: &mut [f64]) {
    let s: f64 = row.iter().sum();
    if s > 0.0 {
        for v in row.iter_mut() {
            *v /= s;
        }
    } else {
        let k = row.len() as f64;
        row.iter_mut().for_each(|v| *v = 1.0 / k);
    }
}

/// Fill every row of every factor from `rng`.
pub fn fill_spec(spec: &mut FactorSpec, rng: &mut ChaCha8Rng) {
    for table in spec.tables_mut() {
        for r in 0..table.rows() {
            fresh_row(rng, table.row_mut(r));
        }
    }
}

/// A random spec of the given form.
pub fn sample_spec(alphabets: AlphabetSpec, form: Form, seed: u64) -> FactorSpec {
    let mut spec = FactorSpec::uniform(form, alphabets);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fill_spec(&mut spec, &mut rng);
    spec
}

/// The `index`-th spec of a seeded stream; what the claim harness samples.
pub fn sample_nth(alphabets: AlphabetSpec, form: Form, seed: u64, index: u64) -> FactorSpec {
    sample_spec(alphabets, form, sub_seed(seed, index))
}

/// Move every row toward a fresh random row: `(1 - step) row + step fresh`.
pub fn perturb(spec: &FactorSpec, step: f64, rng: &mut ChaCha8Rng) -> FactorSpec {
    let mut out = spec.clone();
    for table in out.tables_mut() {
        let len = table.row_len();
        let mut fresh = vec![0.0; len];
        for r in 0..table.rows() {
            fresh_row(rng, &mut fresh);
            let row = table.row_mut(r);
            for (v, f) in row.iter_mut().zip(&fresh) {
                *v = (1.0 - step) * *v + step * f;
            }
            normalize(row);
        }
    }
    out
}

/// Parse `q=2,u=2,w=2,x=2,y=2`. A bare letter sets both users; `u1=3`
/// sets one. Unlisted variables default to 2.
pub fn parse_alphabets(s: &str) -> Result<AlphabetSpec, SearchError> {
    let bad = || SearchError::Alphabets(s.to_string());
    let mut a = AlphabetSpec::uniform(2).expect("nonzero");
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(bad)?;
        let n: usize = v.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        let k = k.trim().to_ascii_uppercase();
        let vars: Vec<VariableId> = match k.as_str() {
            "Q" => vec![VariableId::Q],
            "U" => vec![VariableId::U1, VariableId::U2],
            "W" => vec![VariableId::W1, VariableId::W2],
            "X" => vec![VariableId::X1, VariableId::X2],
            "Y" => vec![VariableId::Y1, VariableId::Y2],
            other => vec![VariableId::from_name(other).ok_or_else(bad)?],
        };
        for var in vars {
            a.set(var, n);
        }
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Area of the correlated region minus area of the projected one.
    AreaGap,
    /// Difference of the maximal sum rates.
    SumRateGap,
}

impl Objective {
    pub fn tag(self) -> &'static str {
        match self {
            Objective::AreaGap => "area",
            Objective::SumRateGap => "sumrate",
        }
    }
}

impl FromStr for Objective {
    type Err = SearchError;
    fn from_str(s: &str) -> Result<Self, SearchError> {
        match s {
            "area" | "area-gap" => Ok(Objective::AreaGap),
            "sumrate" | "sumrate-gap" => Ok(Objective::SumRateGap),
            _ => Err(SearchError::Objective(s.to_string())),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub alphabets: AlphabetSpec,
    /// Evaluations per restart, the starting point included.
    pub budget: usize,
    pub restarts: usize,
    pub step: Rational,
    pub seed: u64,
    pub objective: Objective,
    /// Start every restart here instead of from a random spec.
    pub start: Option<FactorSpec>,
}

impl SearchConfig {
    pub fn new(alphabets: AlphabetSpec, budget: usize, restarts: usize, seed: u64, objective: Objective) -> Self {
        SearchConfig {
            alphabets,
            budget,
            restarts,
            step: Rational::new(1.into(), 4.into()),
            seed,
            objective,
            start: None,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.budget == 0 {
            return Err(SearchError::Budget);
        }
        if self.restarts == 0 {
            return Err(SearchError::Restarts);
        }
        if !self.step.is_positive() || self.step >= Rational::one() {
            return Err(SearchError::Step(rational_string(&self.step)));
        }
        Ok(())
    }
}

/// Both regions of one spec and the gap between them.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Rational,
    pub hod: HPoly<Rational>,
    pub hk: HPoly<Rational>,
}

fn max_sum_rate(p: &HPoly<Rational>) -> Result<Rational, SearchError> {
    let one = Rational::one();
    Ok(p.maximize(&[one.clone(), one])?.map(|(v, _)| v).unwrap_or_else(Rational::zero))
}

/// Express any spec in the correlated form the search moves through.
pub fn as_hod16(spec: &FactorSpec) -> Result<FactorSpec, DistError> {
    match spec.form {
        Form::Hk2 => spec.hk2_as_hod16(),
        Form::Cmg9 => spec.cmg_as_hod16(),
        _ => Ok(spec.clone()),
    }
}

/// Correlated region of `spec` against the independent region of its
/// projection.
pub fn evaluate(spec: &FactorSpec, objective: Objective) -> Result<Evaluation, SearchError> {
    let spec = &as_hod16(spec)?;
    let hod = region_for(spec, RegionId::HodR)?;
    let projected = independence_projection(spec)?;
    let hk = region_for(&projected, RegionId::HkR)?;
    let value = match objective {
        Objective::AreaGap => hod.area2()? - hk.area2()?,
        Objective::SumRateGap => max_sum_rate(&hod)? - max_sum_rate(&hk)?,
    };
    Ok(Evaluation { value, hod, hk })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    pub restart: usize,
    pub iteration: usize,
    pub value: Rational,
    /// Best over all evaluations up to and including this one, in
    /// (restart, iteration) order.
    pub best: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub best_spec: FactorSpec,
    pub best_restart: usize,
    pub value: Rational,
    pub hod_vertices: VertexList2<Rational>,
    pub hk_vertices: VertexList2<Rational>,
    pub trace: Vec<TracePoint>,
}

struct RestartRun {
    best: FactorSpec,
    best_value: Rational,
    values: Vec<Rational>,
}

fn run_restart(cfg: &SearchConfig, restart: usize) -> Result<RestartRun, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, restart as u64));
    let mut current = match &cfg.start {
        Some(s) => as_hod16(s)?,
        None => {
            let mut s = FactorSpec::uniform(Form::Hod16, cfg.alphabets);
            fill_spec(&mut s, &mut rng);
            s
        }
    };
    let step = to_f64(&cfg.step);
    let mut current_value = evaluate(&current, cfg.objective)?.value;
    let mut values = vec![current_value.clone()];
    for _ in 1..cfg.budget {
        let cand = perturb(&current, step, &mut rng);
        let v = evaluate(&cand, cfg.objective)?.value;
        values.push(v.clone());
        if v > current_value {
            current = cand;
            current_value = v;
        }
    }
    Ok(RestartRun {
        best: current,
        best_value: current_value,
        values,
    })
}

/// Hill climbing with random restarts; restarts run in parallel and the
/// merge keeps the largest value, earliest restart on ties.
pub fn improvement_search(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    cfg.validate()?;
    let runs: Vec<RestartRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(cfg, r))
        .collect::<Result<_, _>>()?;
    let mut best_restart = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.best_value > runs[best_restart].best_value {
            best_restart = i;
        }
    }
    let mut trace = Vec::with_capacity(cfg.budget * cfg.restarts);
    let mut best: Option<Rational> = None;
    for (ri, run) in runs.iter().enumerate() {
        for (it, v) in run.values.iter().enumerate() {
            let b = match &best {
                Some(b) if b >= v => b.clone(),
                _ => v.clone(),
            };
            best = Some(b.clone());
            trace.push(TracePoint {
                restart: ri,
                iteration: it,
                value: v.clone(),
                best: b,
            });
        }
    }
    let winner = &runs[best_restart];
    let eval = evaluate(&winner.best, cfg.objective)?;
    Ok(SearchResult {
        config: cfg.clone(),
        best_spec: winner.best.clone(),
        best_restart,
        value: eval.value,
        hod_vertices: eval.hod.vertices2()?,
        hk_vertices: eval.hk.vertices2()?,
        trace,
    })
}

fn vertices_json(v: &VertexList2<Rational>) -> Value {
    Value::Array(v.iter().map(|p| json!([rational_json(&p[0]), rational_json(&p[1])])).collect())
}

impl SearchResult {
    pub fn to_json(&self) -> Value {
        json!({
            "objective": self.config.objective.tag(),
            "baseline": "independent-auxiliary region of the spec's independence projection (same Q, W, U marginals)",
            "seed": self.config.seed,
            "budget": self.config.budget,
            "restarts": self.config.restarts,
            "step": rational_string(&self.config.step),
            "alphabets": self.config.alphabets.sizes(),
            "value": rational_json(&self.value),
            "value_decimal": decimal_sig(&self.value, 12),
            "strict_improvement": self.value.is_positive(),
            "best_restart": self.best_restart,
            "best_spec": self.best_spec.to_json(),
            "hod_vertices": vertices_json(&self.hod_vertices),
            "hk_vertices": vertices_json(&self.hk_vertices),
            "trace": self.trace.iter().map(|t| json!({
                "restart": t.restart,
                "iteration": t.iteration,
                "value": to_f64(&t.value),
                "best": to_f64(&t.best),
            })).collect::<Vec<_>>(),
        })
    }
}
