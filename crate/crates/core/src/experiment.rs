//! JSON-configured single runs and benchmark matrices.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::accelerated::{reference_optimum, run_agm, run_agm_simple_restart};
use crate::analysis::{compare_report, BoundId, BoundReport};
use crate::linalg::norm;
use crate::parallel::Execution;
use crate::problem::{Metadata, ProblemDoc, ProblemInstance, SmoothingKind};
use crate::rng::SplitMix64;
use crate::smoothing::SmoothingFamily;
use crate::subgradient::{run_subgradient, run_two_rate_restart, StepSizeRule};
use crate::trace::{SolverRun, StopCriterion};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    SdmConstant,
    SdmPolyak,
    SdmNormalized,
    Alg3,
    Alg4Nonsmooth,
    Alg4Adjoint,
    Agm,
    Alg5,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SdmConstant => "sdm_constant",
            Algorithm::SdmPolyak => "sdm_polyak",
            Algorithm::SdmNormalized => "sdm_normalized",
            Algorithm::Alg3 => "alg3",
            Algorithm::Alg4Nonsmooth => "alg4_nonsmooth",
            Algorithm::Alg4Adjoint => "alg4_adjoint",
            Algorithm::Agm => "agm",
            Algorithm::Alg5 => "alg5",
        }
    }

    /// The bound the run is reported against.
    pub fn bound(self) -> BoundId {
        match self {
            Algorithm::SdmConstant | Algorithm::SdmNormalized => BoundId::Eq8,
            Algorithm::SdmPolyak => BoundId::T5,
            Algorithm::Alg3 => BoundId::T4,
            Algorithm::Alg4Nonsmooth => BoundId::T6,
            Algorithm::Alg4Adjoint => BoundId::T8,
            Algorithm::Agm => BoundId::Eq25,
            Algorithm::Alg5 => BoundId::T7,
        }
    }

    /// The classical bound the run's own bound is compared with in benches.
    pub fn standard_bound(self) -> BoundId {
        match self {
            Algorithm::SdmConstant | Algorithm::SdmPolyak | Algorithm::SdmNormalized | Algorithm::Alg3 => BoundId::Eq8,
            Algorithm::Alg4Nonsmooth => BoundId::Eq17,
            Algorithm::Alg4Adjoint | Algorithm::Agm | Algorithm::Alg5 => BoundId::Eq25,
        }
    }
}

/// A problem given inline or as a path relative to the referring file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemSource {
    Path(PathBuf),
    Inline(Box<ProblemDoc>),
}

impl ProblemSource {
    pub fn load(&self, base_dir: &Path) -> Result<ProblemDoc> {
        match self {
            ProblemSource::Inline(doc) => Ok((**doc).clone()),
            ProblemSource::Path(p) => {
                let path = base_dir.join(p);
                let text = fs::read_to_string(&path)
                    .map_err(|e| Error::invalid(format!("cannot read problem {}: {e}", path.display())))?;
                ProblemDoc::from_json(&text)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Zeros,
    Ones,
    /// Coordinates uniform in `[−scale, scale]` from the config seed.
    Random,
}

fn one() -> f64 {
    1.0
}

/// Starting point: an explicit vector (must be feasible) or a preset,
/// scaled and then projected onto the feasible set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Point(Vec<f64>),
    Preset {
        preset: Preset,
        #[serde(default = "one")]
        scale: f64,
    },
}

impl Default for StartSpec {
    fn default() -> Self {
        StartSpec::Preset {
            preset: Preset::Ones,
            scale: 1.0,
        }
    }
}

impl StartSpec {
    pub fn resolve(&self, problem: &ProblemInstance, seed: u64) -> Result<Vec<f64>> {
        let n = problem.dim();
        match self {
            StartSpec::Point(x) => {
                problem.check_point(x)?;
                Ok(x.clone())
            }
            StartSpec::Preset { preset, scale } => {
                if !scale.is_finite() {
                    return Err(Error::invalid("x0 scale must be finite"));
                }
                let x = match preset {
                    Preset::Zeros => vec![0.0; n],
                    Preset::Ones => vec![*scale; n],
                    Preset::Random => {
                        let mut rng = SplitMix64::new(seed);
                        (0..n).map(|_| rng.uniform(-scale, *scale)).collect()
                    }
                };
                Ok(problem.project(&x))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub problem: ProblemSource,
    pub algorithm: Algorithm,
    pub eps_prime: f64,
    pub budget: u64,
    #[serde(default)]
    pub x0: StartSpec,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// A validated experiment: problem built, certificates completed and the
/// start point resolved.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub algorithm: Algorithm,
    pub problem: ProblemInstance,
    pub family: Option<SmoothingFamily>,
    pub x0: Vec<f64>,
    pub eps_prime: f64,
    pub budget: u64,
}

/// Fills in `f*` for smooth instances with a certified `L` by a
/// high-accuracy reference run; the value is tagged as derived.
pub fn complete_certificates(problem: ProblemInstance) -> Result<ProblemInstance> {
    if problem.f_star().is_some() || !problem.objective().is_smooth() {
        return Ok(problem);
    }
    let Some(l) = problem.lipschitz_l() else {
        return Ok(problem);
    };
    let x0 = problem.project(&vec![0.0; problem.dim()]);
    let g0 = norm(&problem.first_order(&x0));
    let (_, f) = reference_optimum(&problem, &x0, l, 1e-12 * g0.max(1.0), 1_000_000)?;
    let meta = Metadata {
        f_star: Some(f),
        f_star_derived: true,
        ..problem.metadata().clone()
    };
    problem.with_metadata(meta)
}

pub fn prepare(doc: &ProblemDoc, algorithm: Algorithm, eps_prime: f64, budget: u64, x0: &StartSpec, seed: u64) -> Result<Prepared> {
    if !(eps_prime > 0.0) || !eps_prime.is_finite() {
        return Err(Error::invalid(format!("eps_prime must be positive and finite, got {eps_prime}")));
    }
    let problem = complete_certificates(doc.build()?)?;
    let smoothing = doc.smoothing.map(|s| s.kind);
    let family = match algorithm {
        Algorithm::Alg4Nonsmooth => {
            if smoothing != Some(SmoothingKind::Entropy) {
                return Err(Error::Incompatible(
                    "alg4_nonsmooth needs a problem with {\"smoothing\": {\"kind\": \"entropy\"}}".into(),
                ));
            }
            Some(SmoothingFamily::entropy(&problem)?)
        }
        Algorithm::Alg4Adjoint => {
            if smoothing != Some(SmoothingKind::AdjointEntropy) {
                return Err(Error::Incompatible(
                    "alg4_adjoint needs a problem with {\"smoothing\": {\"kind\": \"adjoint_entropy\"}}".into(),
                ));
            }
            Some(SmoothingFamily::adjoint_entropy(&problem)?)
        }
        Algorithm::Agm | Algorithm::Alg5 => {
            if !problem.objective().is_smooth() {
                return Err(Error::Incompatible(format!(
                    "{} needs a smooth objective; add an adjoint_entropy smoothing block or pick a subgradient method",
                    algorithm.name()
                )));
            }
            if problem.lipschitz_l().is_none() {
                return Err(Error::Incompatible(format!("{} needs a certified lipschitz_L", algorithm.name())));
            }
            None
        }
        Algorithm::SdmConstant | Algorithm::SdmPolyak => {
            if problem.f_star().is_none() {
                return Err(Error::Incompatible(format!("{} needs a certified f_star", algorithm.name())));
            }
            None
        }
        Algorithm::SdmNormalized | Algorithm::Alg3 => None,
    };
    let x0 = x0.resolve(&problem, seed)?;
    Ok(Prepared {
        algorithm,
        problem,
        family,
        x0,
        eps_prime,
        budget,
    })
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub run: SolverRun,
    pub report: Option<BoundReport>,
    /// Why no report was produced, when none was.
    pub report_note: Option<String>,
    pub standard: Option<(BoundId, f64)>,
}

impl Prepared {
    pub fn stop(&self) -> Option<StopCriterion> {
        self.problem.f_star().map(|f| StopCriterion::new(f, self.eps_prime))
    }

    pub fn dist0(&self) -> Option<f64> {
        self.problem.dist_to_opt(&self.x0)
    }

    pub fn solve(&self) -> Result<SolverRun> {
        let p = &self.problem;
        let (x0, budget, stop) = (&self.x0, self.budget, self.stop());
        let opt_gap = || p.f_star().map(|f| f - p.f_slb());
        match self.algorithm {
            Algorithm::SdmConstant => {
                let eps = self.eps_prime * opt_gap().ok_or(Error::MissingCertificate("f_star"))?;
                run_subgradient(p, x0, StepSizeRule::ConstantEpsilon { eps }, budget, stop)
            }
            Algorithm::SdmPolyak => {
                let f_star = p.f_star().ok_or(Error::MissingCertificate("f_star"))?;
                run_subgradient(p, x0, StepSizeRule::Polyak { f_star }, budget, stop)
            }
            Algorithm::SdmNormalized => {
                let r = self.dist0().unwrap_or_else(|| norm(x0)).max(1e-12);
                run_subgradient(p, x0, StepSizeRule::Normalized { r, n: budget }, budget, stop)
            }
            Algorithm::Alg3 => run_two_rate_restart(p, x0, self.eps_prime, budget, stop),
            Algorithm::Alg4Nonsmooth | Algorithm::Alg4Adjoint => {
                let fam = self.family.as_ref().expect("prepared with a family");
                crate::smoothing::run_parametric_smoothing_restart(fam, x0, self.eps_prime, budget, stop)
            }
            Algorithm::Agm => run_agm(p, x0, p.lipschitz_l().expect("checked"), budget, stop),
            Algorithm::Alg5 => run_agm_simple_restart(p, x0, p.lipschitz_l().expect("checked"), budget, stop),
        }
    }

    /// Every bound input available for this problem and start.
    pub fn bound_inputs(&self) -> BTreeMap<String, f64> {
        let p = &self.problem;
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<f64>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        let f0 = p.value(&self.x0);
        put("eps_prime", Some(self.eps_prime));
        put("M", p.lipschitz_m());
        put("G", p.growth_g());
        put("f0_gap", Some(f0 - p.f_slb()));
        put("dist0", self.dist0());
        if let Some(fs) = p.f_star() {
            let gap = fs - p.f_slb();
            put("opt_gap", Some(gap));
            put("f0_gap_ratio", Some(((f0 - fs) / gap).max(0.0)));
        }
        match &self.family {
            Some(fam) => {
                put("D_bar", Some(fam.d_bar()));
                match fam.kind() {
                    crate::smoothing::FamilyKind::NonsmoothNesterov => put("A_bar", Some(fam.scale())),
                    crate::smoothing::FamilyKind::AdjointExtra => put("L", Some(fam.scale())),
                }
            }
            None => {
                put("L", p.lipschitz_l());
                if let crate::problem::Objective::PiecewiseLinear { a, .. } = p.objective() {
                    if a.rows() >= 2 {
                        put("A_bar", Some(a.max_row_norm().powi(2)));
                        put("D_bar", Some((a.rows() as f64).ln()));
                    }
                }
            }
        }
        m
    }

    fn restricted(&self, id: BoundId, all: &BTreeMap<String, f64>) -> std::result::Result<BTreeMap<String, f64>, String> {
        id.required_inputs()
            .iter()
            .map(|k| {
                all.get(*k)
                    .map(|v| (k.to_string(), *v))
                    .ok_or_else(|| format!("{id} needs certified {k}"))
            })
            .collect()
    }

    pub fn execute(&self) -> Result<RunOutcome> {
        let run = self.solve()?;
        let all = self.bound_inputs();
        let id = self.algorithm.bound();
        let (report, report_note) = match self.restricted(id, &all) {
            Err(note) => (None, Some(note)),
            Ok(inp) => match compare_report(&run, id, inp) {
                Ok(r) => (Some(r), None),
                Err(Error::BudgetExhausted) => (None, Some("no ε′-relative solution within the budget".into())),
                Err(e) => return Err(e),
            },
        };
        let sid = self.algorithm.standard_bound();
        let standard = self
            .restricted(sid, &all)
            .ok()
            .and_then(|inp| sid.evaluate(&inp).ok())
            .map(|v| (sid, v));
        Ok(RunOutcome {
            run,
            report,
            report_note,
            standard,
        })
    }
}

/// Loads, validates and runs one experiment. Relative problem paths
/// resolve against `base_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, base_dir: &Path) -> Result<(Prepared, RunOutcome)> {
    let doc = cfg.problem.load(base_dir)?;
    let prep = prepare(&doc, cfg.algorithm, cfg.eps_prime, cfg.budget, &cfg.x0, cfg.seed)?;
    let out = prep.execute()?;
    Ok((prep, out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixProblem {
    pub name: String,
    pub problem: ProblemSource,
    /// Starting points; defaults to the all-ones preset.
    #[serde(default)]
    pub starts: Vec<StartSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchMatrix {
    #[serde(default)]
    pub problems: Vec<MatrixProblem>,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub eps_primes: Vec<f64>,
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
}

impl BenchMatrix {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// One summary row of a bench.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub problem: String,
    pub start: usize,
    pub algorithm: String,
    pub eps_prime: f64,
    pub dist0: Option<f64>,
    pub iterates: u64,
    pub observed: Option<u64>,
    pub bound: String,
    pub theoretical: Option<f64>,
    pub satisfied: Option<bool>,
    pub standard: String,
    pub standard_bound: Option<f64>,
    /// Own bound divided by the classical bound.
    pub ratio: Option<f64>,
}

struct Cell {
    problem: usize,
    start: usize,
    algorithm: Algorithm,
    eps_prime: f64,
}

/// Runs every (problem, start, algorithm, ε′) cell. All cells are validated
/// before any runs; a failing cell aborts with its coordinates. Rows come
/// back in matrix order regardless of `exec`.
pub fn run_bench(matrix: &BenchMatrix, base_dir: &Path, exec: Execution) -> Result<Vec<BenchRow>> {
    let docs = matrix
        .problems
        .iter()
        .map(|mp| mp.problem.load(base_dir).map_err(|e| named(&mp.name, None, e)))
        .collect::<Result<Vec<_>>>()?;
    let default_start = vec![StartSpec::default()];
    let mut cells = Vec::new();
    for (pi, mp) in matrix.problems.iter().enumerate() {
        let starts = if mp.starts.is_empty() { &default_start } else { &mp.starts };
        for si in 0..starts.len() {
            for &algorithm in &matrix.algorithms {
                for &eps_prime in &matrix.eps_primes {
                    cells.push(Cell {
                        problem: pi,
                        start: si,
                        algorithm,
                        eps_prime,
                    });
                }
            }
        }
    }
    let start_of = |c: &Cell| {
        let mp = &matrix.problems[c.problem];
        if mp.starts.is_empty() {
            StartSpec::default()
        } else {
            mp.starts[c.start].clone()
        }
    };
    let prepared = exec.map(&cells, |c| {
        prepare(&docs[c.problem], c.algorithm, c.eps_prime, matrix.budget, &start_of(c), matrix.seed)
            .map_err(|e| named(&matrix.problems[c.problem].name, Some(c), e))
    });
    let prepared = prepared.into_iter().collect::<Result<Vec<_>>>()?;
    let outcomes = exec.map(&prepared, |p| p.execute());
    cells
        .iter()
        .zip(prepared.iter().zip(outcomes))
        .map(|(c, (prep, out))| {
            let out = out.map_err(|e| named(&matrix.problems[c.problem].name, Some(c), e))?;
            let all = prep.bound_inputs();
            let id = c.algorithm.bound();
            let theoretical = out
                .report
                .as_ref()
                .map(|r| r.theoretical)
                .or_else(|| prep.restricted(id, &all).ok().and_then(|i| id.evaluate(&i).ok()));
            let standard_bound = out.standard.map(|s| s.1);
            Ok(BenchRow {
                problem: matrix.problems[c.problem].name.clone(),
                start: c.start,
                algorithm: c.algorithm.name().to_string(),
                eps_prime: c.eps_prime,
                dist0: prep.dist0(),
                iterates: out.run.iterates_computed,
                observed: out.run.first_success,
                bound: id.to_string(),
                theoretical,
                satisfied: out.report.as_ref().map(|r| r.satisfied),
                standard: c.algorithm.standard_bound().to_string(),
                standard_bound,
                ratio: match (theoretical, standard_bound) {
                    (Some(t), Some(s)) if s > 0.0 => Some(t / s),
                    _ => None,
                },
            })
        })
        .collect()
}

fn named(problem: &str, cell: Option<&Cell>, e: Error) -> Error {
    let at = match cell {
        Some(c) => format!(
            "problem {problem:?}, start {}, {}, eps_prime {}",
            c.start,
            c.algorithm.name(),
            c.eps_prime
        ),
        None => format!("problem {problem:?}"),
    };
    match e {
        Error::Incompatible(m) => Error::Incompatible(format!("{at}: {m}")),
        other => Error::InvalidParameter(format!("{at}: {other}")),
    }
}

pub const BENCH_HEADER: &str =
    "problem,start,algorithm,eps_prime,dist0,iterates,observed,bound,theoretical,satisfied,standard,standard_bound,ratio";

pub fn write_bench_csv<W: std::io::Write>(rows: &[BenchRow], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(BENCH_HEADER.split(','))
        .map_err(|e| Error::invalid(e.to_string()))?;
    for r in rows {
        out.serialize(r).map_err(|e| Error::invalid(e.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_doc() -> ProblemDoc {
        ProblemDoc::from_json(
            r#"{"kind":"piecewise_linear","A":[[1.0],[-1.0]],"b":[0,0],"f_slb":-1,
                "metadata":{"f_star":0,"growth_G":1,"opt_set":{"type":"box","lower":[0],"upper":[0]}},
                "smoothing":{"kind":"entropy"}}"#,
        )
        .unwrap()
    }

    #[test]
    fn config_parses_inline_and_presets() {
        let cfg = ExperimentConfig::from_json(
            r#"{"problem":{"kind":"counterexample"},"algorithm":"alg3","eps_prime":0.5,"budget":10,
                "x0":{"preset":"random","scale":3},"seed":7}"#,
        )
        .unwrap();
        assert_eq!(cfg.algorithm, Algorithm::Alg3);
        let cfg = ExperimentConfig::from_json(r#"{"problem":"p.json","algorithm":"agm","eps_prime":1,"budget":1,"x0":[1,2]}"#)
            .unwrap();
        assert_eq!(cfg.problem, ProblemSource::Path("p.json".into()));
        assert_eq!(cfg.x0, StartSpec::Point(vec![1.0, 2.0]));
        assert!(ExperimentConfig::from_json(r#"{"problem":"p","algorithm":"newton","eps_prime":1,"budget":1}"#).is_err());
    }

    #[test]
    fn compatibility_checks() {
        let doc = abs_doc();
        let x0 = StartSpec::Point(vec![4.0]);
        assert!(matches!(prepare(&doc, Algorithm::Agm, 0.5, 10, &x0, 0), Err(Error::Incompatible(_))));
        assert!(matches!(prepare(&doc, Algorithm::Alg4Adjoint, 0.5, 10, &x0, 0), Err(Error::Incompatible(_))));
        assert!(prepare(&doc, Algorithm::Alg4Nonsmooth, 0.5, 10, &x0, 0).is_ok());
        assert!(prepare(&doc, Algorithm::Alg3, 0.0, 10, &x0, 0).is_err());
    }

    #[test]
    fn alg3_on_abs_reports_satisfied() {
        let prep = prepare(&abs_doc(), Algorithm::Alg3, 0.1, 100_000, &StartSpec::Point(vec![10.0]), 0).unwrap();
        let out = prep.execute().unwrap();
        let rep = out.report.unwrap();
        assert_eq!(rep.theorem, BoundId::T4);
        assert!(rep.satisfied);
        assert_eq!(out.standard.unwrap().0, BoundId::Eq8);
    }

    #[test]
    fn logistic_gets_derived_optimum() {
        let doc = ProblemDoc::from_json(r#"{"kind":"logistic","A":[[1,0.5],[-0.3,1],[0.2,-1],[-1,-0.4],[0.6,0.6]]}"#).unwrap();
        let prep = prepare(&doc, Algorithm::Alg5, 0.1, 10_000, &StartSpec::default(), 0).unwrap();
        assert!(prep.problem.metadata().f_star_derived);
        let out = prep.execute().unwrap();
        assert!(out.run.succeeded());
        // No growth certificate, so the report is skipped with a reason.
        assert!(out.report.is_none());
        assert!(out.report_note.unwrap().contains('G'));
    }

    #[test]
    fn random_preset_is_seeded() {
        let doc = ProblemDoc::from_json(r#"{"kind":"logistic","A":[[1,0.5],[-0.3,1]]}"#).unwrap();
        let p = doc.build().unwrap();
        let spec = StartSpec::Preset {
            preset: Preset::Random,
            scale: 2.0,
        };
        assert_eq!(spec.resolve(&p, 5).unwrap(), spec.resolve(&p, 5).unwrap());
        assert_ne!(spec.resolve(&p, 5).unwrap(), spec.resolve(&p, 6).unwrap());
    }

    #[test]
    fn bench_order_and_empty() {
        let empty = BenchMatrix::from_json(r#"{"budget":10}"#).unwrap();
        assert!(run_bench(&empty, Path::new("."), Execution::Parallel).unwrap().is_empty());
        let m = BenchMatrix {
            problems: vec![MatrixProblem {
                name: "abs".into(),
                problem: ProblemSource::Inline(Box::new(abs_doc())),
                starts: vec![StartSpec::Point(vec![10.0]), StartSpec::Point(vec![1000.0])],
            }],
            algorithms: vec![Algorithm::SdmPolyak, Algorithm::Alg3],
            eps_primes: vec![1.0, 0.1],
            budget: 100_000,
            seed: 0,
        };
        let par = run_bench(&m, Path::new("."), Execution::Parallel).unwrap();
        let seq = run_bench(&m, Path::new("."), Execution::Sequential).unwrap();
        assert_eq!(par, seq);
        assert_eq!(par.len(), 8);
        assert_eq!((par[1].algorithm.as_str(), par[1].eps_prime), ("sdm_polyak", 0.1));
        let mut buf = Vec::new();
        write_bench_csv(&par, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with(BENCH_HEADER));
    }
}
