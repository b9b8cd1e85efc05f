//! Domain types for both corpora, instance validation and the JSON Lines
//! instance format.
//!
//! Scores are taken as given: they are validated but never renormalized.
//! Pairwise matrices are stored as full `n x n` grids whose diagonal is dead
//! (always `false` for labels, `0.0` for scores).

use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-6;

/// Function of a microtext segment towards the segment it attaches to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Function {
    #[serde(rename = "sup")]
    Support,
    #[serde(rename = "att")]
    Attack,
    #[serde(rename = "none")]
    None,
}

impl Function {
    pub const ALL: [Function; 3] = [Function::Support, Function::Attack, Function::None];

    /// Position of this class in a `(support, attack, none)` score row.
    pub fn index(self) -> usize {
        match self {
            Function::Support => 0,
            Function::Attack => 1,
            Function::None => 2,
        }
    }

    pub fn from_index(idx: usize) -> Function {
        Function::ALL[idx]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentType {
    Claim,
    Premise,
}

/// Filtered versions of the essays corpus; each adds constraints to the
/// previous one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Mod1,
    Mod2,
    Mod3,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Mod1, Variant::Mod2, Variant::Mod3];

    /// Every premise must support something.
    pub fn premises_must_support(self) -> bool {
        self >= Variant::Mod2
    }

    /// Every claim must be supported by something.
    pub fn claims_must_be_supported(self) -> bool {
        self == Variant::Mod3
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Mod1 => "mod1",
            Variant::Mod2 => "mod2",
            Variant::Mod3 => "mod3",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "mod1" => Ok(Variant::Mod1),
            "mod2" => Ok(Variant::Mod2),
            "mod3" => Ok(Variant::Mod3),
            other => Err(format!("unknown variant `{other}` (expected mod1, mod2 or mod3)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MicrotextLabels {
    /// Is the segment the central claim.
    pub cc: Vec<bool>,
    /// `true` for proponent, `false` for opponent.
    pub ro: Vec<bool>,
    pub fu: Vec<Function>,
    /// `at[i][j]`: segment `i` attaches to segment `j`.
    pub at: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MicrotextScores {
    pub cc: Vec<f64>,
    /// Probability of the proponent role.
    pub ro: Vec<f64>,
    /// Per segment `(support, attack, none)` distribution.
    pub fu: Vec<[f64; 3]>,
    pub at: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MicrotextInstance {
    pub id: String,
    pub n: usize,
    pub gold: MicrotextLabels,
    pub scores: MicrotextScores,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssayLabels {
    pub ctype: Vec<ComponentType>,
    /// `rel[i][j]`: component `i` supports component `j`.
    pub rel: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssayScores {
    pub claim: Vec<f64>,
    pub premise: Vec<f64>,
    pub sup: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssayInstance {
    pub id: String,
    pub n: usize,
    pub variant: Variant,
    pub gold: EssayLabels,
    pub scores: EssayScores,
}

/// Combination weights shared by every decoder.
///
/// `w1..w4` weight the microtext sub-tasks (cc, ro, fu, at), `v` balances
/// component against relation scores for essays, and `beta` mixes premise
/// and support scores into essay evidence-graph edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointWeights {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub v: f64,
    pub beta: f64,
}

impl Default for JointWeights {
    fn default() -> Self {
        JointWeights {
            w1: 0.25,
            w2: 0.25,
            w3: 0.25,
            w4: 0.25,
            v: 0.5,
            beta: 0.5,
        }
    }
}

impl JointWeights {
    pub fn microtext(w1: f64, w2: f64, w3: f64, w4: f64) -> Self {
        JointWeights {
            w1,
            w2,
            w3,
            w4,
            ..Default::default()
        }
    }

    pub fn with_v(self, v: f64) -> Self {
        JointWeights { v, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        JointWeights { beta, ..self }
    }

    /// Names of the weights that fall outside `[0, 1]`.
    pub fn out_of_bounds(&self) -> Vec<&'static str> {
        [
            ("w1", self.w1),
            ("w2", self.w2),
            ("w3", self.w3),
            ("w4", self.w4),
            ("v", self.v),
            ("beta", self.beta),
        ]
        .into_iter()
        .filter(|(_, w)| !(0.0..=1.0).contains(w))
        .map(|(name, _)| name)
        .collect()
    }
}

fn check_len(out: &mut Vec<String>, field: &str, len: usize, n: usize) -> bool {
    if len != n {
        out.push(format!("{field} has length {len}, expected {n}"));
        false
    } else {
        true
    }
}

fn check_prob(out: &mut Vec<String>, field: &str, idx: &str, p: f64) {
    if !(0.0..=1.0).contains(&p) {
        out.push(format!("{field}[{idx}] = {p} is not a probability"));
    }
}

fn check_square<T>(out: &mut Vec<String>, field: &str, m: &[Vec<T>], n: usize) -> bool {
    let rows_ok = check_len(out, field, m.len(), n);
    let mut ok = rows_ok;
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            out.push(format!("{field} row {i} has length {}, expected {n}", row.len()));
            ok = false;
        }
    }
    ok
}

impl MicrotextInstance {
    /// Violated type invariants, each naming the field and index.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n;
        if n == 0 {
            out.push("n must be at least 1".to_string());
        }
        let g = &self.gold;
        check_len(&mut out, "gold.cc", g.cc.len(), n);
        check_len(&mut out, "gold.ro", g.ro.len(), n);
        check_len(&mut out, "gold.fu", g.fu.len(), n);
        if check_square(&mut out, "gold.at", &g.at, n) {
            for i in 0..n {
                if g.at[i][i] {
                    out.push(format!("gold.at[{i}][{i}] must be false"));
                }
            }
        }

        let s = &self.scores;
        if check_len(&mut out, "scores.cc", s.cc.len(), n) {
            for (i, &p) in s.cc.iter().enumerate() {
                check_prob(&mut out, "scores.cc", &i.to_string(), p);
            }
        }
        if check_len(&mut out, "scores.ro", s.ro.len(), n) {
            for (i, &p) in s.ro.iter().enumerate() {
                check_prob(&mut out, "scores.ro", &i.to_string(), p);
            }
        }
        if check_len(&mut out, "scores.fu", s.fu.len(), n) {
            for (i, row) in s.fu.iter().enumerate() {
                for (k, &p) in row.iter().enumerate() {
                    check_prob(&mut out, "scores.fu", &format!("{i}][{k}"), p);
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > SUM_TOLERANCE {
                    out.push(format!("fu row {i} sums to {sum}"));
                }
            }
        }
        if check_square(&mut out, "scores.at", &s.at, n) {
            for i in 0..n {
                for j in 0..n {
                    let p = s.at[i][j];
                    if i == j {
                        if p != 0.0 {
                            out.push(format!("scores.at[{i}][{i}] = {p}, diagonal must be 0"));
                        }
                    } else {
                        check_prob(&mut out, "scores.at", &format!("{i}][{j}"), p);
                    }
                }
            }
        }
        out
    }
}

impl EssayInstance {
    /// Violated type invariants, each naming the field and index.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n;
        if n == 0 {
            out.push("n must be at least 1".to_string());
        }
        check_len(&mut out, "gold.ctype", self.gold.ctype.len(), n);
        if check_square(&mut out, "gold.rel", &self.gold.rel, n) {
            for i in 0..n {
                if self.gold.rel[i][i] {
                    out.push(format!("gold.rel[{i}][{i}] must be false"));
                }
            }
        }
        let s = &self.scores;
        let claim_ok = check_len(&mut out, "scores.claim", s.claim.len(), n);
        let premise_ok = check_len(&mut out, "scores.premise", s.premise.len(), n);
        for (i, &p) in s.claim.iter().enumerate() {
            check_prob(&mut out, "scores.claim", &i.to_string(), p);
        }
        for (i, &p) in s.premise.iter().enumerate() {
            check_prob(&mut out, "scores.premise", &i.to_string(), p);
        }
        if claim_ok && premise_ok {
            for i in 0..n {
                let sum = s.claim[i] + s.premise[i];
                if (sum - 1.0).abs() > SUM_TOLERANCE {
                    out.push(format!("claim + premise for component {i} sums to {sum}"));
                }
            }
        }
        if check_square(&mut out, "scores.sup", &s.sup, n) {
            for i in 0..n {
                for j in 0..n {
                    let p = s.sup[i][j];
                    if i == j {
                        if p != 0.0 {
                            out.push(format!("scores.sup[{i}][{i}] = {p}, diagonal must be 0"));
                        }
                    } else {
                        check_prob(&mut out, "scores.sup", &format!("{i}][{j}"), p);
                    }
                }
            }
        }
        out
    }
}

/// Either kind of instance, for code paths that accept both corpora.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyInstance {
    Microtext(MicrotextInstance),
    Essay(EssayInstance),
}

pub fn validate_instance(instance: &AnyInstance) -> Vec<String> {
    match instance {
        AnyInstance::Microtext(m) => m.validate(),
        AnyInstance::Essay(e) => e.validate(),
    }
}

/// Names of the corpus constraints that the gold labels violate. Essays are
/// checked under their own variant.
pub fn check_gold_constraints(instance: &AnyInstance) -> Vec<&'static str> {
    match instance {
        AnyInstance::Microtext(m) => crate::microtext::violated_constraints(&m.gold),
        AnyInstance::Essay(e) => crate::essays::violated_constraints(&e.gold, e.variant),
    }
}

/// Which corpus a file holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CorpusKind {
    Microtext,
    Essays,
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusKind::Microtext => "microtext",
            CorpusKind::Essays => "essays",
        })
    }
}

/// Read JSON Lines instances. Blank lines are skipped; line numbers in
/// errors are 1-based.
pub fn read_jsonl<T, R>(reader: R) -> Result<Vec<T>>
where
    T: for<'de> Deserialize<'de>,
    R: BufRead,
{
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|source| Error::Json {
            line: idx + 1,
            source,
        })?;
        out.push(item);
    }
    Ok(out)
}

/// Write one compact JSON object per line, the canonical instance form.
pub fn write_jsonl<T, W>(items: &[T], mut writer: W) -> Result<()>
where
    T: Serialize,
    W: Write,
{
    for item in items {
        serde_json::to_writer(&mut writer, item).map_err(|source| Error::Json { line: 0, source })?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

pub fn to_canonical_json<T: Serialize>(item: &T) -> String {
    serde_json::to_string(item).expect("instance types always serialize")
}
