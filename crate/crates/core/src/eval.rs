//! Scoring and experiment protocol: per-task F1 and macro-F1, k-fold
//! bookkeeping, paired t-tests, the ground-truth overwrite simulation and
//! the combination-weight sweep.
//!
//! Task F1 is the unweighted mean of the per-class F1 values computed from
//! confusion counts pooled over all instances. Binary tasks average the
//! positive and negative class; relation tasks pool every ordered pair.
//! The positive-class F1 of binary tasks is reported alongside.

use std::fmt;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::microtext::Decoded;
use crate::model::{
    ComponentType, EssayInstance, EssayLabels, Function, JointWeights, MicrotextInstance, MicrotextLabels,
};
use crate::{essays, microtext, mst};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Cc,
    Ro,
    Fu,
    At,
    Comp,
    Rel,
}

impl Task {
    pub const MICROTEXT: [Task; 4] = [Task::Cc, Task::Ro, Task::Fu, Task::At];
    pub const ESSAYS: [Task; 2] = [Task::Comp, Task::Rel];

    /// Class names; for binary tasks the positive class comes first.
    pub fn classes(self) -> &'static [&'static str] {
        match self {
            Task::Cc => &["cc", "not-cc"],
            Task::Ro => &["pro", "opp"],
            Task::Fu => &["sup", "att", "none"],
            Task::At => &["at", "un-at"],
            Task::Comp => &["claim", "premise"],
            Task::Rel => &["support", "non-support"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Task::Cc => "cc",
            Task::Ro => "ro",
            Task::Fu => "fu",
            Task::At => "at",
            Task::Comp => "comp",
            Task::Rel => "rel",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Separate,
    Mst,
    Ilp,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Separate, Method::Mst, Method::Ilp];

    pub fn name(self) -> &'static str {
        match self {
            Method::Separate => "separate",
            Method::Mst => "mst",
            Method::Ilp => "ilp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What the harness needs from an instance of either corpus.
pub trait ArgInstance: Clone + Send + Sync {
    type Labels: Clone + Send + Sync + PartialEq + fmt::Debug + Serialize;

    fn tasks() -> &'static [Task];
    fn id(&self) -> &str;
    fn gold(&self) -> &Self::Labels;
    /// `Ok(None)` when the method finds no labelling (ILP infeasibility).
    fn decode(&self, method: Method, weights: &JointWeights) -> Result<Option<Decoded<Self::Labels>>>;
    fn objective(&self, weights: &JointWeights, labels: &Self::Labels) -> f64;
    /// A labelling that is wrong at every site, used to score instances a
    /// method could not decode.
    fn all_wrong(&self) -> Self::Labels;
    /// Append the `(gold class, predicted class)` pairs of one task.
    fn class_pairs(gold: &Self::Labels, pred: &Self::Labels, task: Task, out: &mut Vec<(usize, usize)>);
    /// Number of prediction sites the task has in this instance.
    fn sites(&self, task: Task) -> usize;
    /// Replace the scores of one site by the one-hot gold vector.
    fn overwrite_site(&mut self, task: Task, site: usize);
    /// Weights for sweep point `x` with `task` as the target.
    fn sweep_weights(base: &JointWeights, task: Task, x: f64) -> JointWeights;
}

fn bit(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Ordered pair `(i, j)`, `i != j`, at position `site` in row-major order.
fn pair_at(n: usize, site: usize) -> (usize, usize) {
    let i = site / (n - 1);
    let r = site % (n - 1);
    (i, if r >= i { r + 1 } else { r })
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

impl ArgInstance for MicrotextInstance {
    type Labels = MicrotextLabels;

    fn tasks() -> &'static [Task] {
        &Task::MICROTEXT
    }

    fn id(&self) -> &str {
        &self.id
    }

    fn gold(&self) -> &MicrotextLabels {
        &self.gold
    }

    fn decode(&self, method: Method, weights: &JointWeights) -> Result<Option<Decoded<MicrotextLabels>>> {
        Ok(match method {
            Method::Separate => {
                let labels = microtext::decode_separate(self);
                Some(Decoded {
                    objective: microtext::objective(self, weights, &labels),
                    labels,
                    nodes_explored: 0,
                })
            }
            Method::Mst => Some(mst::decode_microtext(self, weights)?),
            Method::Ilp => microtext::decode_ilp(self, weights)?,
        })
    }

    fn objective(&self, weights: &JointWeights, labels: &MicrotextLabels) -> f64 {
        microtext::objective(self, weights, labels)
    }

    fn all_wrong(&self) -> MicrotextLabels {
        let g = &self.gold;
        MicrotextLabels {
            cc: g.cc.iter().map(|c| !c).collect(),
            ro: g.ro.iter().map(|r| !r).collect(),
            fu: g.fu.iter().map(|f| Function::from_index((f.index() + 1) % 3)).collect(),
            at: (0..self.n)
                .map(|i| (0..self.n).map(|j| i != j && !g.at[i][j]).collect())
                .collect(),
        }
    }

    fn class_pairs(gold: &MicrotextLabels, pred: &MicrotextLabels, task: Task, out: &mut Vec<(usize, usize)>) {
        let cls = |b: bool| usize::from(!b);
        let n = gold.cc.len();
        match task {
            Task::Cc => out.extend(gold.cc.iter().zip(&pred.cc).map(|(&g, &p)| (cls(g), cls(p)))),
            Task::Ro => out.extend(gold.ro.iter().zip(&pred.ro).map(|(&g, &p)| (cls(g), cls(p)))),
            Task::Fu => out.extend(gold.fu.iter().zip(&pred.fu).map(|(g, p)| (g.index(), p.index()))),
            Task::At => out.extend(pairs(n).map(|(i, j)| (cls(gold.at[i][j]), cls(pred.at[i][j])))),
            Task::Comp | Task::Rel => panic!("{task} is not a microtext task"),
        }
    }

    fn sites(&self, task: Task) -> usize {
        match task {
            Task::Cc | Task::Ro | Task::Fu => self.n,
            Task::At => self.n * (self.n - 1),
            Task::Comp | Task::Rel => 0,
        }
    }

    fn overwrite_site(&mut self, task: Task, site: usize) {
        let g = &self.gold;
        let s = &mut self.scores;
        match task {
            Task::Cc => s.cc[site] = bit(g.cc[site]),
            Task::Ro => s.ro[site] = bit(g.ro[site]),
            Task::Fu => {
                let mut row = [0.0; 3];
                row[g.fu[site].index()] = 1.0;
                s.fu[site] = row;
            }
            Task::At => {
                let (i, j) = pair_at(self.n, site);
                s.at[i][j] = bit(g.at[i][j]);
            }
            Task::Comp | Task::Rel => panic!("{task} is not a microtext task"),
        }
    }

    fn sweep_weights(base: &JointWeights, task: Task, x: f64) -> JointWeights {
        let rest = (1.0 - x) / 3.0;
        let mut w = [rest; 4];
        let idx = Task::MICROTEXT
            .iter()
            .position(|&t| t == task)
            .unwrap_or_else(|| panic!("{task} is not a microtext task"));
        w[idx] = x;
        JointWeights {
            w1: w[0],
            w2: w[1],
            w3: w[2],
            w4: w[3],
            ..*base
        }
    }
}

impl ArgInstance for EssayInstance {
    type Labels = EssayLabels;

    fn tasks() -> &'static [Task] {
        &Task::ESSAYS
    }

    fn id(&self) -> &str {
        &self.id
    }

    fn gold(&self) -> &EssayLabels {
        &self.gold
    }

    fn decode(&self, method: Method, weights: &JointWeights) -> Result<Option<Decoded<EssayLabels>>> {
        Ok(match method {
            Method::Separate => {
                let labels = essays::decode_separate(self);
                Some(Decoded {
                    objective: essays::objective(self, weights, &labels),
                    labels,
                    nodes_explored: 0,
                })
            }
            Method::Mst => Some(mst::decode_essays(self, weights)?),
            Method::Ilp => essays::decode_ilp(self, weights)?,
        })
    }

    fn objective(&self, weights: &JointWeights, labels: &EssayLabels) -> f64 {
        essays::objective(self, weights, labels)
    }

    fn all_wrong(&self) -> EssayLabels {
        let g = &self.gold;
        EssayLabels {
            ctype: g
                .ctype
                .iter()
                .map(|c| match c {
                    ComponentType::Claim => ComponentType::Premise,
                    ComponentType::Premise => ComponentType::Claim,
                })
                .collect(),
            rel: (0..self.n)
                .map(|i| (0..self.n).map(|j| i != j && !g.rel[i][j]).collect())
                .collect(),
        }
    }

    fn class_pairs(gold: &EssayLabels, pred: &EssayLabels, task: Task, out: &mut Vec<(usize, usize)>) {
        let cls = |b: bool| usize::from(!b);
        let n = gold.ctype.len();
        match task {
            Task::Comp => out.extend(gold.ctype.iter().zip(&pred.ctype).map(|(&g, &p)| {
                (
                    cls(g == ComponentType::Claim),
                    cls(p == ComponentType::Claim),
                )
            })),
            Task::Rel => out.extend(pairs(n).map(|(i, j)| (cls(gold.rel[i][j]), cls(pred.rel[i][j])))),
            _ => panic!("{task} is not an essays task"),
        }
    }

    fn sites(&self, task: Task) -> usize {
        match task {
            Task::Comp => self.n,
            Task::Rel => self.n * (self.n - 1),
            _ => 0,
        }
    }

    fn overwrite_site(&mut self, task: Task, site: usize) {
        match task {
            Task::Comp => {
                let c = bit(self.gold.ctype[site] == ComponentType::Claim);
                self.scores.claim[site] = c;
                self.scores.premise[site] = 1.0 - c;
            }
            Task::Rel => {
                let (i, j) = pair_at(self.n, site);
                self.scores.sup[i][j] = bit(self.gold.rel[i][j]);
            }
            _ => panic!("{task} is not an essays task"),
        }
    }

    fn sweep_weights(base: &JointWeights, _task: Task, x: f64) -> JointWeights {
        base.with_v(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskScore {
    pub task: Task,
    /// Unweighted mean of `per_class_f1`.
    pub f1: f64,
    pub per_class_f1: Vec<(String, f64)>,
    /// F1 of the positive class, binary tasks only.
    pub positive_f1: Option<f64>,
    /// Classes absent from both gold and prediction; they count as F1 = 0.
    pub absent_classes: Vec<String>,
}

/// Task score from `(gold class, predicted class)` pairs.
pub fn f1_from_pairs(task: Task, pairs: &[(usize, usize)]) -> TaskScore {
    let classes = task.classes();
    let k = classes.len();
    let (mut tp, mut fp, mut fnc) = (vec![0u64; k], vec![0u64; k], vec![0u64; k]);
    for &(g, p) in pairs {
        if g == p {
            tp[g] += 1;
        } else {
            fnc[g] += 1;
            fp[p] += 1;
        }
    }
    let mut per_class = Vec::with_capacity(k);
    let mut absent = Vec::new();
    for c in 0..k {
        let denom = 2 * tp[c] + fp[c] + fnc[c];
        let f1 = if denom == 0 {
            absent.push(classes[c].to_string());
            0.0
        } else {
            (2 * tp[c]) as f64 / denom as f64
        };
        per_class.push((classes[c].to_string(), f1));
    }
    let f1 = per_class.iter().map(|(_, f)| f).sum::<f64>() / k as f64;
    TaskScore {
        task,
        f1,
        positive_f1: (k == 2).then(|| per_class[0].1),
        per_class_f1: per_class,
        absent_classes: absent,
    }
}

/// F1 of one task over paired gold and predicted labellings.
pub fn task_f1<I: ArgInstance>(gold: &[I::Labels], pred: &[I::Labels], task: Task) -> TaskScore {
    assert_eq!(gold.len(), pred.len(), "gold and prediction cover different instances");
    let mut pairs = Vec::new();
    for (g, p) in gold.iter().zip(pred) {
        I::class_pairs(g, p, task, &mut pairs);
    }
    f1_from_pairs(task, &pairs)
}

/// Unweighted mean of the task F1 values.
pub fn macro_f1(scores: &[TaskScore]) -> f64 {
    assert!(!scores.is_empty(), "macro-F1 of no tasks");
    scores.iter().map(|s| s.f1).sum::<f64>() / scores.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fold {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// Shuffle the ids with `seed` and cut them into `k` contiguous test folds;
/// the first `len % k` folds get one extra id.
pub fn kfold_split(ids: &[String], k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k == 0 || k > ids.len() {
        return Err(Error::Usage(format!(
            "cannot split {} instances into {k} folds",
            ids.len()
        )));
    }
    let mut shuffled = ids.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (ids.len() / k, ids.len() % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        let test = shuffled[start..start + size].to_vec();
        let train = shuffled[..start]
            .iter()
            .chain(&shuffled[start + size..])
            .cloned()
            .collect();
        folds.push(Fold { train, test });
        start += size;
    }
    Ok(folds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TTestFlag {
    /// Every difference is zero; reported as `t = 0, p = 1`.
    NoDifference,
    /// Constant non-zero differences; `t` is infinite and `p = 0`.
    ZeroVariance,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub p: f64,
    pub df: usize,
    pub flag: Option<TTestFlag>,
}

/// Two-tailed paired t-test on `a - b`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Usage(format!(
            "paired t-test needs two samples of equal length >= 2, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let df = n - 1;
    if diffs.iter().all(|&d| d == 0.0) {
        return Ok(TTest {
            t: 0.0,
            p: 1.0,
            df,
            flag: Some(TTestFlag::NoDifference),
        });
    }
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / df as f64;
    // Spread below rounding noise of the mean counts as constant.
    if var.sqrt() <= 1e-12 * mean.abs() {
        return Ok(TTest {
            t: mean.signum() * f64::INFINITY,
            p: 0.0,
            df,
            flag: Some(TTestFlag::ZeroVariance),
        });
    }
    let t = mean / (var / n as f64).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(TTest { t, p, df, flag: None })
}

/// Overwrite `ceil(fraction * m)` of the task's `m` sites, chosen uniformly
/// without regard to whether their scores are already right, with the
/// one-hot gold scores.
pub fn simulate_overwrite<I: ArgInstance, R: Rng + ?Sized>(
    instance: &I,
    task: Task,
    fraction: f64,
    rng: &mut R,
) -> I {
    let mut out = instance.clone();
    let m = instance.sites(task);
    let count = overwrite_count(fraction, m);
    for site in rand::seq::index::sample(rng, m, count) {
        out.overwrite_site(task, site);
    }
    out
}

pub(crate) fn overwrite_count(fraction: f64, m: usize) -> usize {
    // absorb representation error such as 0.3 * 10 = 3.0000000000000004
    let raw = (fraction * m as f64 - 1e-9).ceil();
    (raw.max(0.0) as usize).min(m)
}

/// Decode every instance, in input order. Uses up to `jobs` threads.
pub fn decode_all<I: ArgInstance>(
    instances: &[I],
    method: Method,
    weights: &JointWeights,
    jobs: usize,
) -> Result<Vec<Option<Decoded<I::Labels>>>> {
    if jobs <= 1 {
        return instances.iter().map(|i| i.decode(method, weights)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    pool.install(|| {
        instances
            .par_iter()
            .map(|i| i.decode(method, weights))
            .collect()
    })
}

/// Predicted labels with undecodable instances replaced by all-wrong ones.
fn predictions<I: ArgInstance>(instances: &[I], decoded: &[Option<Decoded<I::Labels>>]) -> Vec<I::Labels> {
    instances
        .iter()
        .zip(decoded)
        .map(|(inst, d)| match d {
            Some(d) => d.labels.clone(),
            None => inst.all_wrong(),
        })
        .collect()
}

pub fn score_all<I: ArgInstance>(instances: &[I], pred: &[I::Labels]) -> Vec<TaskScore> {
    let gold: Vec<I::Labels> = instances.iter().map(|i| i.gold().clone()).collect();
    I::tasks().iter().map(|&t| task_f1::<I>(&gold, pred, t)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Significance {
    pub baseline: Method,
    pub t: f64,
    pub p: f64,
    pub flag: Option<TTestFlag>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub method: Method,
    pub per_task: Vec<TaskScore>,
    pub macro_f1: f64,
    /// Macro-F1 of each fold.
    pub folds: Vec<f64>,
    /// Task F1 of each fold, in task order.
    pub fold_task_f1: Vec<Vec<f64>>,
    pub significance: Vec<Significance>,
    pub infeasible_ids: Vec<String>,
    /// Which F1 variant `f1` holds.
    pub primary_f1: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub tasks: Vec<Task>,
    pub k: usize,
    pub seed: u64,
    pub weights: JointWeights,
    pub reports: Vec<ExperimentReport>,
}

/// k-fold evaluation of each method; joint methods are t-tested against
/// `separate` over fold-level macro-F1.
pub fn evaluate<I: ArgInstance>(
    instances: &[I],
    methods: &[Method],
    weights: &JointWeights,
    k: usize,
    seed: u64,
    jobs: usize,
) -> Result<Evaluation> {
    let ids: Vec<String> = instances.iter().map(|i| i.id().to_string()).collect();
    let folds = kfold_split(&ids, k, seed)?;
    let index: std::collections::HashMap<&str, usize> =
        ids.iter().enumerate().map(|(k, id)| (id.as_str(), k)).collect();
    let fold_members: Vec<Vec<usize>> = folds
        .iter()
        .map(|f| f.test.iter().map(|id| index[id.as_str()]).collect())
        .collect();

    let mut reports = Vec::new();
    for &method in methods {
        let decoded = decode_all(instances, method, weights, jobs)?;
        let pred = predictions(instances, &decoded);
        let per_task = score_all(instances, &pred);
        let mut fold_task_f1 = Vec::with_capacity(k);
        let mut fold_macro = Vec::with_capacity(k);
        for members in &fold_members {
            let sub: Vec<I> = members.iter().map(|&m| instances[m].clone()).collect();
            let sub_pred: Vec<I::Labels> = members.iter().map(|&m| pred[m].clone()).collect();
            let scores = score_all(&sub, &sub_pred);
            fold_macro.push(macro_f1(&scores));
            fold_task_f1.push(scores.iter().map(|s| s.f1).collect());
        }
        reports.push(ExperimentReport {
            method,
            macro_f1: macro_f1(&per_task),
            per_task,
            folds: fold_macro,
            fold_task_f1,
            significance: Vec::new(),
            infeasible_ids: instances
                .iter()
                .zip(&decoded)
                .filter(|(_, d)| d.is_none())
                .map(|(i, _)| i.id().to_string())
                .collect(),
            primary_f1: "class-mean".to_string(),
        });
    }

    let baseline = reports
        .iter()
        .find(|r| r.method == Method::Separate)
        .map(|r| r.folds.clone());
    if let Some(base) = baseline {
        for r in reports.iter_mut().filter(|r| r.method != Method::Separate) {
            let tt = paired_t_test(&r.folds, &base)?;
            r.significance.push(Significance {
                baseline: Method::Separate,
                t: tt.t,
                p: tt.p,
                flag: tt.flag,
            });
        }
    }
    Ok(Evaluation {
        tasks: I::tasks().to_vec(),
        k,
        seed,
        weights: *weights,
        reports,
    })
}

impl Evaluation {
    pub fn report(&self, method: Method) -> Option<&ExperimentReport> {
        self.reports.iter().find(|r| r.method == method)
    }

    /// One row per (method, task, fold) plus `all` summary rows; the
    /// `macro` task carries macro-F1.
    pub fn write_rows_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["method", "task", "fold", "f1"])?;
        for r in &self.reports {
            for (f, task_f1) in r.fold_task_f1.iter().enumerate() {
                for (t, f1) in self.tasks.iter().zip(task_f1) {
                    w.write_record([r.method.name(), t.name(), &f.to_string(), &f1.to_string()])?;
                }
                w.write_record([r.method.name(), "macro", &f.to_string(), &r.folds[f].to_string()])?;
            }
            for s in &r.per_task {
                w.write_record([r.method.name(), s.task.name(), "all", &s.f1.to_string()])?;
            }
            w.write_record([r.method.name(), "macro", "all", &r.macro_f1.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Method rows with one column per task plus macro-F1.
    pub fn write_summary_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["method".to_string()];
        header.extend(self.tasks.iter().map(|t| t.name().to_string()));
        header.push("macro".into());
        header.push("p_vs_separate".into());
        w.write_record(&header)?;
        for r in &self.reports {
            let mut row = vec![r.method.name().to_string()];
            row.extend(r.per_task.iter().map(|s| format!("{:.3}", s.f1)));
            row.push(format!("{:.3}", r.macro_f1));
            row.push(r.significance.first().map(|s| format!("{:.4}", s.p)).unwrap_or_default());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Sweep weight or overwritten fraction.
    pub x: f64,
    pub task: Task,
    pub f1: f64,
}

/// Which task's scores a simulation overwrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overwrite {
    Task(Task),
    All,
}

/// For each fraction, overwrite the target sites of every instance with
/// gold, re-decode, and score every task.
pub fn simulate<I: ArgInstance>(
    instances: &[I],
    target: Overwrite,
    fractions: &[f64],
    method: Method,
    weights: &JointWeights,
    seed: u64,
    jobs: usize,
) -> Result<Vec<CurvePoint>> {
    if let Some(f) = fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::Usage(format!("fraction {f} is outside [0, 1]")));
    }
    let targets: Vec<Task> = match target {
        Overwrite::Task(t) if I::tasks().contains(&t) => vec![t],
        Overwrite::Task(t) => return Err(Error::Usage(format!("task {t} does not belong to this corpus"))),
        Overwrite::All => I::tasks().to_vec(),
    };
    let mut curve = Vec::new();
    for &fraction in fractions {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modified: Vec<I> = instances
            .iter()
            .map(|inst| {
                targets
                    .iter()
                    .fold(inst.clone(), |acc, &t| simulate_overwrite(&acc, t, fraction, &mut rng))
            })
            .collect();
        let decoded = decode_all(&modified, method, weights, jobs)?;
        let pred = predictions(&modified, &decoded);
        for s in score_all(&modified, &pred) {
            curve.push(CurvePoint {
                x: fraction,
                task: s.task,
                f1: s.f1,
            });
        }
    }
    Ok(curve)
}

/// Decode the corpus at each weight `x`. Microtexts give the target task
/// weight `x` and the others `(1 - x) / 3`; essays set `v = x`.
pub fn weight_sweep<I: ArgInstance>(
    instances: &[I],
    target: Task,
    xs: &[f64],
    method: Method,
    base: &JointWeights,
    jobs: usize,
) -> Result<Vec<CurvePoint>> {
    if let Some(x) = xs.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::Usage(format!("sweep value {x} is outside [0, 1]")));
    }
    if !I::tasks().contains(&target) {
        return Err(Error::Usage(format!("task {target} does not belong to this corpus")));
    }
    let mut curve = Vec::new();
    for &x in xs {
        let w = I::sweep_weights(base, target, x);
        let decoded = decode_all(instances, method, &w, jobs)?;
        let pred = predictions(instances, &decoded);
        for s in score_all(instances, &pred) {
            curve.push(CurvePoint { x, task: s.task, f1: s.f1 });
        }
    }
    Ok(curve)
}

pub fn write_curve_csv<W: Write>(points: &[CurvePoint], x_name: &str, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([x_name, "task", "f1"])?;
    for p in points {
        w.write_record([p.x.to_string(), p.task.name().to_string(), p.f1.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
