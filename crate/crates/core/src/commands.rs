//! The batch commands behind the CLI. Each takes a [`RunConfig`] and writes
//! its artifacts either into files or to a caller-supplied writer, so the
//! same code runs from the binary, from examples and from tests.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{self, ArgInstance, CurvePoint, Evaluation, Method, Overwrite, Task};
use crate::model::{
    self, AnyInstance, CorpusKind, EssayInstance, JointWeights, MicrotextInstance, Variant,
};
use crate::synth::{self, CorpusSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub kind: CorpusKind,
    /// Methods to run; `decode`, `simulate` and `sweep` use the first.
    pub methods: Vec<Method>,
    pub weights: JointWeights,
    /// Overrides the variant stored in each essay instance.
    pub variant: Option<Variant>,
    pub seed: u64,
    pub k: usize,
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(corpus: impl Into<PathBuf>, kind: CorpusKind) -> Self {
        RunConfig {
            corpus: corpus.into(),
            kind,
            methods: vec![Method::Ilp],
            weights: JointWeights::default(),
            variant: None,
            seed: 0,
            k: 10,
            jobs: 1,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = self.weights.out_of_bounds();
        if !bad.is_empty() {
            return Err(Error::Usage(format!("weights outside [0, 1]: {}", bad.join(", "))));
        }
        if self.methods.is_empty() {
            return Err(Error::Usage("no method given".into()));
        }
        if self.variant.is_some() && self.kind == CorpusKind::Microtext {
            return Err(Error::Usage("--variant only applies to essays".into()));
        }
        Ok(())
    }

    fn method(&self) -> Method {
        self.methods[0]
    }
}

/// A loaded corpus of either kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Corpus {
    Microtext(Vec<MicrotextInstance>),
    Essays(Vec<EssayInstance>),
}

impl Corpus {
    pub fn len(&self) -> usize {
        match self {
            Corpus::Microtext(v) => v.len(),
            Corpus::Essays(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn instances(&self) -> Vec<AnyInstance> {
        match self {
            Corpus::Microtext(v) => v.iter().cloned().map(AnyInstance::Microtext).collect(),
            Corpus::Essays(v) => v.iter().cloned().map(AnyInstance::Essay).collect(),
        }
    }
}

/// Parse a corpus file without schema checks.
pub fn read_corpus(path: &Path, kind: CorpusKind) -> Result<Corpus> {
    let reader = BufReader::new(File::open(path)?);
    Ok(match kind {
        CorpusKind::Microtext => Corpus::Microtext(model::read_jsonl(reader)?),
        CorpusKind::Essays => Corpus::Essays(model::read_jsonl(reader)?),
    })
}

/// Parse, apply the variant override, and reject malformed instances.
pub fn load_corpus(config: &RunConfig) -> Result<Corpus> {
    config.check()?;
    let mut corpus = read_corpus(&config.corpus, config.kind)?;
    if let (Corpus::Essays(v), Some(variant)) = (&mut corpus, config.variant) {
        for inst in v.iter_mut() {
            inst.variant = variant;
        }
    }
    for inst in corpus.instances() {
        let violations = model::validate_instance(&inst);
        if !violations.is_empty() {
            let id = match inst {
                AnyInstance::Microtext(m) => m.id,
                AnyInstance::Essay(e) => e.id,
            };
            return Err(Error::Schema { id, violations });
        }
    }
    Ok(corpus)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeSummary {
    pub method: Method,
    pub decoded: usize,
    pub mean_objective: Option<f64>,
    pub infeasible_count: usize,
    pub infeasible_ids: Vec<String>,
}

#[derive(Serialize)]
struct PredictionLine<'a, L> {
    id: &'a str,
    pred: &'a L,
    objective: f64,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a DecodeSummary,
}

fn decode_into<I: ArgInstance, W: Write>(
    instances: &[I],
    config: &RunConfig,
    mut out: W,
) -> Result<DecodeSummary> {
    let method = config.method();
    let decoded = eval::decode_all(instances, method, &config.weights, config.jobs)?;
    let mut order: Vec<usize> = (0..instances.len()).collect();
    order.sort_by(|&a, &b| instances[a].id().cmp(instances[b].id()));

    let mut infeasible = Vec::new();
    let mut objectives = Vec::new();
    for k in order {
        match &decoded[k] {
            Some(d) => {
                let line = PredictionLine {
                    id: instances[k].id(),
                    pred: &d.labels,
                    objective: d.objective,
                };
                serde_json::to_writer(&mut out, &line).map_err(|source| Error::Json { line: 0, source })?;
                out.write_all(b"\n")?;
                objectives.push(d.objective);
            }
            None => infeasible.push(instances[k].id().to_string()),
        }
    }
    let summary = DecodeSummary {
        method,
        decoded: objectives.len(),
        mean_objective: (!objectives.is_empty()).then(|| objectives.iter().sum::<f64>() / objectives.len() as f64),
        infeasible_count: infeasible.len(),
        infeasible_ids: infeasible,
    };
    serde_json::to_writer(&mut out, &SummaryLine { summary: &summary })
        .map_err(|source| Error::Json { line: 0, source })?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(summary)
}

/// Decode every instance and write JSON Lines predictions, sorted by id,
/// followed by a summary line. Infeasible instances go into the summary.
pub fn cmd_decode<W: Write>(config: &RunConfig, out: W) -> Result<DecodeSummary> {
    match load_corpus(config)? {
        Corpus::Microtext(v) => decode_into(&v, config, out),
        Corpus::Essays(v) => decode_into(&v, config, out),
    }
}

/// k-fold evaluation of each configured method. Writes `report.json`,
/// `rows.csv` and `summary.csv` into `out_dir`.
pub fn cmd_evaluate(config: &RunConfig, out_dir: Option<&Path>) -> Result<Evaluation> {
    let corpus = load_corpus(config)?;
    let (w, k, seed, jobs) = (&config.weights, config.k, config.seed, config.jobs);
    let evaluation = match &corpus {
        Corpus::Microtext(v) => eval::evaluate(v, &config.methods, w, k, seed, jobs)?,
        Corpus::Essays(v) => eval::evaluate(v, &config.methods, w, k, seed, jobs)?,
    };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(&evaluation).map_err(|source| Error::Json { line: 0, source })?;
        std::fs::write(dir.join("report.json"), json + "\n")?;
        evaluation.write_rows_csv(BufWriter::new(File::create(dir.join("rows.csv"))?))?;
        evaluation.write_summary_csv(BufWriter::new(File::create(dir.join("summary.csv"))?))?;
    }
    Ok(evaluation)
}

/// Overwrite-simulation curve, written as `fraction,task,f1`.
pub fn cmd_simulate<W: Write>(
    config: &RunConfig,
    target: Overwrite,
    fractions: &[f64],
    out: W,
) -> Result<Vec<CurvePoint>> {
    let (m, w, seed, jobs) = (config.method(), &config.weights, config.seed, config.jobs);
    let curve = match load_corpus(config)? {
        Corpus::Microtext(v) => eval::simulate(&v, target, fractions, m, w, seed, jobs)?,
        Corpus::Essays(v) => eval::simulate(&v, target, fractions, m, w, seed, jobs)?,
    };
    eval::write_curve_csv(&curve, "fraction", out)?;
    Ok(curve)
}

/// Weight-sweep curve, written as `x,task,f1`.
pub fn cmd_sweep<W: Write>(config: &RunConfig, target: Task, xs: &[f64], out: W) -> Result<Vec<CurvePoint>> {
    let (m, w, jobs) = (config.method(), &config.weights, config.jobs);
    let curve = match load_corpus(config)? {
        Corpus::Microtext(v) => eval::weight_sweep(&v, target, xs, m, w, jobs)?,
        Corpus::Essays(v) => eval::weight_sweep(&v, target, xs, m, w, jobs)?,
    };
    eval::write_curve_csv(&curve, "x", out)?;
    Ok(curve)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub kind: CorpusKind,
    pub spec: CorpusSpec,
    /// Essays only; defaults to mod1.
    pub variant: Option<Variant>,
}

/// Generate a synthetic corpus in canonical JSON Lines form.
pub fn cmd_synth<W: Write>(config: &SynthConfig, out: W) -> Result<usize> {
    match config.kind {
        CorpusKind::Microtext => {
            if config.variant.is_some() {
                return Err(Error::Usage("--variant only applies to essays".into()));
            }
            let v = synth::microtext_corpus(&config.spec)?;
            model::write_jsonl(&v, out)?;
            Ok(v.len())
        }
        CorpusKind::Essays => {
            let v = synth::essay_corpus(&config.spec, config.variant.unwrap_or(Variant::Mod1))?;
            model::write_jsonl(&v, out)?;
            Ok(v.len())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceIssues {
    pub id: String,
    pub schema: Vec<String>,
    /// Corpus constraints the gold labels break; informative only.
    pub gold_constraints: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub instances: usize,
    pub schema_errors: usize,
    pub gold_constraint_violations: usize,
    pub issues: Vec<InstanceIssues>,
}

/// Check every instance for schema problems and report which gold
/// labellings violate their corpus constraints. Written as pretty JSON.
pub fn cmd_validate<W: Write>(config: &RunConfig, mut out: W) -> Result<ValidationReport> {
    config.check()?;
    let mut corpus = read_corpus(&config.corpus, config.kind)?;
    if let (Corpus::Essays(v), Some(variant)) = (&mut corpus, config.variant) {
        for inst in v.iter_mut() {
            inst.variant = variant;
        }
    }
    let mut issues = Vec::new();
    for inst in corpus.instances() {
        let schema = model::validate_instance(&inst);
        // constraint checks index freely, so only run them on sound instances
        let gold_constraints: Vec<String> = if schema.is_empty() {
            model::check_gold_constraints(&inst).into_iter().map(String::from).collect()
        } else {
            Vec::new()
        };
        if !schema.is_empty() || !gold_constraints.is_empty() {
            let id = match &inst {
                AnyInstance::Microtext(m) => m.id.clone(),
                AnyInstance::Essay(e) => e.id.clone(),
            };
            issues.push(InstanceIssues {
                id,
                schema,
                gold_constraints,
            });
        }
    }
    issues.sort_by(|a, b| a.id.cmp(&b.id));
    let report = ValidationReport {
        instances: corpus.len(),
        schema_errors: issues.iter().filter(|i| !i.schema.is_empty()).count(),
        gold_constraint_violations: issues.iter().filter(|i| !i.gold_constraints.is_empty()).count(),
        issues,
    };
    serde_json::to_writer_pretty(&mut out, &report).map_err(|source| Error::Json { line: 0, source })?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(report)
}
