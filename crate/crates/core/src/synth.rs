//! Synthetic corpora: gold structures sampled uniformly, scores obtained by
//! mixing the gold one-hot vectors with uniform noise.
//!
//! A site with gold class `g` gets `(1 - eps) * onehot(g) + eps * u` where
//! `u` is drawn uniformly (from `[0, 1)` for binary sites, from the simplex
//! for the three-way function distribution). For `eps < 0.5` the argmax of
//! every site is its gold class.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    ComponentType, EssayInstance, EssayLabels, EssayScores, Function, MicrotextInstance, MicrotextLabels,
    MicrotextScores, Variant,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("microtexts need at least 3 segments, got {0}")]
    TooFewSegments(usize),
    #[error("essay paragraphs need at least {min} components under {variant}, got {n}")]
    TooFewComponents { n: usize, variant: Variant, min: usize },
    #[error("epsilon must lie in [0, 1], got {0}")]
    Epsilon(f64),
    #[error("empty size range {0}..={1}")]
    EmptyRange(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub epsilon: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        NoiseSpec { epsilon, seed }
    }

    fn check(&self) -> Result<(), SynthError> {
        if (0.0..=1.0).contains(&self.epsilon) {
            Ok(())
        } else {
            Err(SynthError::Epsilon(self.epsilon))
        }
    }
}

fn binary_score(rng: &mut impl Rng, gold: bool, eps: f64) -> f64 {
    let u: f64 = rng.random();
    (1.0 - eps) * f64::from(u8::from(gold)) + eps * u
}

/// Uniform point on the 3-simplex from the spacings of two uniforms.
fn simplex3(rng: &mut impl Rng) -> [f64; 3] {
    let (mut x, mut y): (f64, f64) = (rng.random(), rng.random());
    if x > y {
        std::mem::swap(&mut x, &mut y);
    }
    [x, y - x, 1.0 - y]
}

pub fn gen_microtext(id: impl Into<String>, n: usize, noise: &NoiseSpec) -> Result<MicrotextInstance, SynthError> {
    if n < 3 {
        return Err(SynthError::TooFewSegments(n));
    }
    noise.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let gold = loop {
        let gold = sample_microtext_tree(&mut rng, n);
        let has_opponent = gold.ro.iter().any(|&r| !r);
        let cc = gold.cc.iter().position(|&c| c).unwrap();
        let cc_supported = (0..n).any(|i| gold.at[i][cc] && gold.fu[i] == Function::Support);
        if has_opponent && cc_supported {
            break gold;
        }
    };

    let eps = noise.epsilon;
    let mut scores = MicrotextScores {
        cc: Vec::with_capacity(n),
        ro: Vec::with_capacity(n),
        fu: Vec::with_capacity(n),
        at: vec![vec![0.0; n]; n],
    };
    for i in 0..n {
        scores.cc.push(binary_score(&mut rng, gold.cc[i], eps));
    }
    for i in 0..n {
        scores.ro.push(binary_score(&mut rng, gold.ro[i], eps));
    }
    for i in 0..n {
        let u = simplex3(&mut rng);
        let mut row = [0.0; 3];
        for (k, slot) in row.iter_mut().enumerate() {
            let hot = if gold.fu[i].index() == k { 1.0 } else { 0.0 };
            *slot = (1.0 - eps) * hot + eps * u[k];
        }
        scores.fu.push(row);
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            scores.at[i][j] = binary_score(&mut rng, gold.at[i][j], eps);
        }
    }
    Ok(MicrotextInstance {
        id: id.into(),
        n,
        gold,
        scores,
    })
}

/// Uniform central claim, then every other segment (in random order)
/// attaches to a uniformly chosen earlier one with a uniform function;
/// roles follow from the functions.
fn sample_microtext_tree(rng: &mut impl Rng, n: usize) -> MicrotextLabels {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cc = order[0];
    let mut labels = MicrotextLabels {
        cc: vec![false; n],
        ro: vec![true; n],
        fu: vec![Function::None; n],
        at: vec![vec![false; n]; n],
    };
    labels.cc[cc] = true;
    for k in 1..n {
        let node = order[k];
        let target = order[rng.random_range(0..k)];
        labels.at[node][target] = true;
        labels.fu[node] = if rng.random_bool(0.5) {
            Function::Support
        } else {
            Function::Attack
        };
        labels.ro[node] = match labels.fu[node] {
            Function::Attack => !labels.ro[target],
            _ => labels.ro[target],
        };
    }
    labels
}

/// Minimum paragraph size accepted for a variant.
pub fn min_essay_size(variant: Variant) -> usize {
    if variant.claims_must_be_supported() {
        2
    } else {
        1
    }
}

/// Essay paragraphs are depth-one trees: claims at the top, each premise
/// supporting exactly one claim. Under mod3 the premises cover every claim.
pub fn gen_essay(
    id: impl Into<String>,
    n: usize,
    variant: Variant,
    noise: &NoiseSpec,
) -> Result<EssayInstance, SynthError> {
    let min = min_essay_size(variant);
    if n < min {
        return Err(SynthError::TooFewComponents { n, variant, min });
    }
    noise.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);

    let max_claims = match (n, variant) {
        (1, _) => 1,
        (_, Variant::Mod3) => n / 2,
        _ => n - 1,
    };
    let k = rng.random_range(1..=max_claims);
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(&mut rng);
    let (claims, premises) = nodes.split_at(k);

    let mut gold = EssayLabels {
        ctype: vec![ComponentType::Premise; n],
        rel: vec![vec![false; n]; n],
    };
    for &c in claims {
        gold.ctype[c] = ComponentType::Claim;
    }
    for (idx, &p) in premises.iter().enumerate() {
        let target = if variant.claims_must_be_supported() && idx < k {
            claims[idx]
        } else {
            claims[rng.random_range(0..k)]
        };
        gold.rel[p][target] = true;
    }

    let eps = noise.epsilon;
    let claim: Vec<f64> = (0..n)
        .map(|i| binary_score(&mut rng, gold.ctype[i] == ComponentType::Claim, eps))
        .collect();
    let premise = claim.iter().map(|c| 1.0 - c).collect();
    let mut sup = vec![vec![0.0; n]; n];
    for (i, row) in sup.iter_mut().enumerate() {
        for j in (0..n).filter(|&j| j != i) {
            row[j] = binary_score(&mut rng, gold.rel[i][j], eps);
        }
    }
    Ok(EssayInstance {
        id: id.into(),
        n,
        variant,
        gold,
        scores: EssayScores { claim, premise, sup },
    })
}

/// Parameters for a whole synthetic corpus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl CorpusSpec {
    fn sizes_and_seeds(&self) -> Result<Vec<(usize, u64)>, SynthError> {
        if self.n_min > self.n_max {
            return Err(SynthError::EmptyRange(self.n_min, self.n_max));
        }
        let mut master = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..self.count)
            .map(|_| {
                let n = master.random_range(self.n_min..=self.n_max);
                (n, master.next_u64())
            })
            .collect())
    }
}

fn corpus_id(prefix: &str, k: usize) -> String {
    format!("{prefix}-{k:05}")
}

pub fn microtext_corpus(spec: &CorpusSpec) -> Result<Vec<MicrotextInstance>, SynthError> {
    spec.sizes_and_seeds()?
        .into_iter()
        .enumerate()
        .map(|(k, (n, seed))| gen_microtext(corpus_id("mt", k), n, &NoiseSpec::new(spec.epsilon, seed)))
        .collect()
}

pub fn essay_corpus(spec: &CorpusSpec, variant: Variant) -> Result<Vec<EssayInstance>, SynthError> {
    spec.sizes_and_seeds()?
        .into_iter()
        .enumerate()
        .map(|(k, (n, seed))| gen_essay(corpus_id("es", k), n, variant, &NoiseSpec::new(spec.epsilon, seed)))
        .collect()
}
