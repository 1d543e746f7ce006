//! k-nearest-neighbour classification over sketches, plus the accuracy,
//! precision, recall and F1 summaries used to score it.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::hashfamily::uniform_below;
use crate::similarity::{cosine, euclidean};
use crate::sketch::{EmbeddingMatrix, SketchVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// `1 - cos θ`; an all-zero vector is treated as orthogonal to everything.
    Cosine,
}

impl Metric {
    pub fn distance(self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            Metric::Euclidean => euclidean(x, y),
            Metric::Cosine => Ok(1.0 - cosine(x, y)?),
        }
    }
}

/// Embeddings with one class label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledEmbeddings {
    matrix: EmbeddingMatrix,
    labels: Vec<String>,
}

impl LabeledEmbeddings {
    pub fn new(matrix: EmbeddingMatrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != matrix.n() {
            return Err(Error::InvalidInput("one label per embedding row required"));
        }
        Ok(LabeledEmbeddings { matrix, labels })
    }

    pub fn matrix(&self) -> &EmbeddingMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Ok(LabeledEmbeddings {
            matrix: self.matrix.select(indices)?,
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        })
    }
}

/// Majority label among the `neighbors` smallest `distances`.
///
/// Equal distances keep the lower index first. A tied vote goes to whichever
/// tied label has the nearest representative, which is the nearest
/// neighbour's own label whenever it is among the tied ones.
pub fn vote<'a, L: Ord>(distances: &[f64], labels: &'a [L], neighbors: usize) -> Result<&'a L> {
    if labels.is_empty() {
        return Err(Error::InvalidInput("empty training set"));
    }
    if distances.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            left: distances.len(),
            right: labels.len(),
        });
    }
    if neighbors == 0 || neighbors > labels.len() {
        return Err(Error::InvalidParameter("neighbors must lie in 1..=n"));
    }
    let mut order: Vec<usize> = (0..labels.len()).collect();
    // Stable sort: index order survives among equal distances.
    order.sort_by(|&a, &b| distances[a].total_cmp(&distances[b]));
    let nearest = &order[..neighbors];

    let mut counts: BTreeMap<&L, usize> = BTreeMap::new();
    for &i in nearest {
        *counts.entry(&labels[i]).or_insert(0) += 1;
    }
    let best = counts.values().copied().max().unwrap_or(0);
    let winner = nearest
        .iter()
        .map(|&i| &labels[i])
        .find(|l| counts[l] == best)
        .expect("nonempty neighbourhood");
    Ok(winner)
}

pub fn knn_predict<'a>(
    train: &'a LabeledEmbeddings,
    query: &SketchVector,
    neighbors: usize,
    metric: Metric,
) -> Result<&'a str> {
    if train.n() == 0 {
        return Err(Error::InvalidInput("empty training set"));
    }
    let distances = train
        .matrix
        .rows()
        .iter()
        .map(|r| metric.distance(r.scaled(), query.scaled()))
        .collect::<Result<Vec<f64>>>()?;
    vote(&distances, &train.labels, neighbors).map(String::as_str)
}

pub fn knn_predict_all(
    train: &LabeledEmbeddings,
    queries: &EmbeddingMatrix,
    neighbors: usize,
    metric: Metric,
) -> Result<Vec<String>> {
    let predict = |q: &SketchVector| knn_predict(train, q, neighbors, metric).map(String::from);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        queries.rows().par_iter().map(predict).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        queries.rows().iter().map(predict).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassScore {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Occurrences among the true labels.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub precision_macro: f64,
    pub recall_macro: f64,
    pub f1_macro: f64,
    pub precision_weighted: f64,
    pub recall_weighted: f64,
    pub f1_weighted: f64,
    pub per_class: Vec<ClassScore>,
}

/// Scores predictions against truth. Classes are the union of true and
/// predicted labels; a ratio with a zero denominator counts as 0. Weighted
/// averages weight each class by its true support.
pub fn score<S: AsRef<str>, P: AsRef<str>>(
    truth: &[S],
    predicted: &[P],
) -> Result<ClassificationMetrics> {
    if truth.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            left: truth.len(),
            right: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::InvalidInput("nothing to score"));
    }
    // label -> (true positives, predicted count, support)
    let mut tally: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
    let mut correct = 0;
    for (t, p) in truth.iter().zip(predicted) {
        let (t, p) = (t.as_ref(), p.as_ref());
        tally.entry(t).or_default().2 += 1;
        tally.entry(p).or_default().1 += 1;
        if t == p {
            tally.entry(t).or_default().0 += 1;
            correct += 1;
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let per_class: Vec<ClassScore> = tally
        .iter()
        .map(|(&label, &(tp, pred, support))| {
            let precision = ratio(tp, pred);
            let recall = ratio(tp, support);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassScore {
                label: String::from(label),
                precision,
                recall,
                f1,
                support,
            }
        })
        .collect();
    let n = truth.len() as f64;
    let classes = per_class.len() as f64;
    let macro_avg = |f: fn(&ClassScore) -> f64| per_class.iter().map(f).sum::<f64>() / classes;
    let weighted = |f: fn(&ClassScore) -> f64| {
        per_class
            .iter()
            .map(|c| f(c) * c.support as f64)
            .sum::<f64>()
            / n
    };
    Ok(ClassificationMetrics {
        accuracy: correct as f64 / n,
        precision_macro: macro_avg(|c| c.precision),
        recall_macro: macro_avg(|c| c.recall),
        f1_macro: macro_avg(|c| c.f1),
        precision_weighted: weighted(|c| c.precision),
        recall_weighted: weighted(|c| c.recall),
        f1_weighted: weighted(|c| c.f1),
        per_class,
    })
}

/// Predicts every test row from `train` and scores the result.
pub fn evaluate(
    train: &LabeledEmbeddings,
    test: &LabeledEmbeddings,
    neighbors: usize,
    metric: Metric,
) -> Result<ClassificationMetrics> {
    let predicted = knn_predict_all(train, test.matrix(), neighbors, metric)?;
    score(test.labels(), &predicted)
}

/// Seeded shuffle of `0..n` split into `(train, test)`; the test side gets
/// `ceil(n * test_fraction)` indices.
pub fn train_test_split(
    n: usize,
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(0.0..=1.0).contains(&test_fraction) {
        return Err(Error::InvalidParameter("test fraction must lie in [0, 1]"));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = uniform_below(&mut rng, i as u64 + 1) as usize;
        idx.swap(i, j);
    }
    let n_test = (libm::ceil(n as f64 * test_fraction) as usize).min(n);
    let test = idx.split_off(n - n_test);
    Ok((idx, test))
}
