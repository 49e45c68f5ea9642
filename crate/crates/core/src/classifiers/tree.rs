//! C4.5-style decision tree.
//!
//! Splits are chosen by gain ratio among candidates whose information gain
//! is at least the average gain of all candidates. Numeric attributes split
//! in two at midpoints between adjacent distinct values; categorical
//! attributes split into one branch per level. The grown tree is pruned by
//! subtree replacement using the pessimistic (upper confidence bound) error
//! estimate.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::data::{ColumnKind, FeatureMatrix, Value};
use crate::error::{Error, Result};

const MIN_GAIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// Confidence level for pessimistic pruning, in (0, 0.5].
    pub confidence: f64,
    /// Minimum number of instances on each side of a split.
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            confidence: 0.25,
            min_leaf: 2,
        }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.confidence > 0.0 && self.confidence <= 0.5) {
            return Err(Error::invalid(format!(
                "pruning confidence must be in (0, 0.5], got {}",
                self.confidence
            )));
        }
        if self.min_leaf == 0 {
            return Err(Error::invalid("min_leaf must be at least 1"));
        }
        Ok(())
    }
}

/// Class counts are `[negative, positive]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        counts: [f64; 2],
    },
    Threshold {
        column: usize,
        threshold: f64,
        counts: [f64; 2],
        /// Rows with value <= threshold.
        below: Box<Node>,
        above: Box<Node>,
    },
    Multiway {
        column: usize,
        counts: [f64; 2],
        /// One child per level of the column.
        children: Vec<Node>,
    },
}

impl Node {
    pub fn counts(&self) -> [f64; 2] {
        match self {
            Node::Leaf { counts }
            | Node::Threshold { counts, .. }
            | Node::Multiway { counts, .. } => *counts,
        }
    }

    fn children(&self) -> Vec<&Node> {
        match self {
            Node::Leaf { .. } => vec![],
            Node::Threshold { below, above, .. } => vec![below, above],
            Node::Multiway { children, .. } => children.iter().collect(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub params: TreeParams,
    pub n_columns: usize,
    pub root: Node,
}

/// Shannon entropy in bits of a count vector.
pub fn entropy(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub column: usize,
    /// `Some` for numeric binary splits.
    pub threshold: Option<f64>,
    pub gain: f64,
    pub split_info: f64,
    pub gain_ratio: f64,
}

fn class_counts(labels: impl Iterator<Item = bool>) -> [f64; 2] {
    let mut c = [0.0; 2];
    for l in labels {
        c[usize::from(l)] += 1.0;
    }
    c
}

fn candidate(
    column: usize,
    threshold: Option<f64>,
    parent: [f64; 2],
    parts: &[[f64; 2]],
) -> SplitCandidate {
    let n = parent[0] + parent[1];
    let children: f64 = parts.iter().map(|p| (p[0] + p[1]) / n * entropy(p)).sum();
    let gain = entropy(&parent) - children;
    let sizes: Vec<f64> = parts.iter().map(|p| p[0] + p[1]).collect();
    let split_info = entropy(&sizes);
    let gain_ratio = if split_info > 0.0 {
        gain / split_info
    } else {
        0.0
    };
    SplitCandidate {
        column,
        threshold,
        gain,
        split_info,
        gain_ratio,
    }
}

/// Visits every admissible threshold of a numeric column. `sorted` holds
/// (value, label) pairs in ascending value order.
fn numeric_candidates(
    sorted: &[(f64, bool)],
    column: usize,
    min_leaf: usize,
    mut visit: impl FnMut(SplitCandidate),
) {
    let parent = class_counts(sorted.iter().map(|p| p.1));
    let mut left = [0.0; 2];
    for i in 0..sorted.len().saturating_sub(1) {
        left[usize::from(sorted[i].1)] += 1.0;
        let (lo, hi) = (sorted[i].0, sorted[i + 1].0);
        if lo == hi {
            continue;
        }
        let n_left = i + 1;
        if n_left < min_leaf || sorted.len() - n_left < min_leaf {
            continue;
        }
        let right = [parent[0] - left[0], parent[1] - left[1]];
        visit(candidate(
            column,
            Some(lo + (hi - lo) / 2.0),
            parent,
            &[left, right],
        ));
    }
}

fn categorical_candidate(
    m: &FeatureMatrix,
    rows: &[usize],
    column: usize,
    n_levels: usize,
    min_leaf: usize,
) -> Option<SplitCandidate> {
    let mut parts = vec![[0.0; 2]; n_levels];
    for &r in rows {
        if let Value::Cat(level) = m.row(r)[column] {
            parts[level as usize][usize::from(m.labels()[r])] += 1.0;
        }
    }
    let big_enough = parts
        .iter()
        .filter(|p| p[0] + p[1] >= min_leaf as f64)
        .count();
    if big_enough < 2 {
        return None;
    }
    let parent = class_counts(rows.iter().map(|&r| m.labels()[r]));
    let nonempty: Vec<[f64; 2]> = parts.into_iter().filter(|p| p[0] + p[1] > 0.0).collect();
    Some(candidate(column, None, parent, &nonempty))
}

fn sorted_column(m: &FeatureMatrix, rows: &[usize], column: usize) -> Result<Vec<(f64, bool)>> {
    let mut out = Vec::with_capacity(rows.len());
    for &r in rows {
        match m.row(r)[column] {
            Value::Num(x) => out.push((x, m.labels()[r])),
            other => return Err(Error::SchemaMismatch(format!(
                "tree training expects complete numeric values in column {column}, found {other:?}"
            ))),
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Every admissible split of `column` over `rows`, for inspection.
pub fn split_candidates(
    m: &FeatureMatrix,
    rows: &[usize],
    column: usize,
    min_leaf: usize,
) -> Result<Vec<SplitCandidate>> {
    let mut out = Vec::new();
    match &m.columns()[column].kind {
        ColumnKind::Numeric => {
            let sorted = sorted_column(m, rows, column)?;
            numeric_candidates(&sorted, column, min_leaf, |c| out.push(c));
        }
        ColumnKind::Categorical { levels } => {
            out.extend(categorical_candidate(
                m,
                rows,
                column,
                levels.len(),
                min_leaf,
            ));
        }
    }
    Ok(out)
}

struct Grower<'a> {
    m: &'a FeatureMatrix,
    params: TreeParams,
}

impl Grower<'_> {
    /// Best split per column, then the gain-ratio winner among those with at
    /// least average gain. Ties go to the lower column index.
    fn best_split(&self, rows: &[usize]) -> Result<Option<SplitCandidate>> {
        let mut per_column = Vec::new();
        for (c, col) in self.m.columns().iter().enumerate() {
            let best = match &col.kind {
                ColumnKind::Numeric => {
                    let sorted = sorted_column(self.m, rows, c)?;
                    let mut best: Option<SplitCandidate> = None;
                    numeric_candidates(&sorted, c, self.params.min_leaf, |cand| {
                        if best.is_none_or(|b| cand.gain > b.gain) {
                            best = Some(cand);
                        }
                    });
                    best
                }
                ColumnKind::Categorical { levels } => {
                    categorical_candidate(self.m, rows, c, levels.len(), self.params.min_leaf)
                }
            };
            if let Some(b) = best.filter(|b| b.gain > MIN_GAIN && b.split_info > 0.0) {
                per_column.push(b);
            }
        }
        if per_column.is_empty() {
            return Ok(None);
        }
        let average = per_column.iter().map(|c| c.gain).sum::<f64>() / per_column.len() as f64;
        let mut winner: Option<SplitCandidate> = None;
        for cand in per_column.into_iter().filter(|c| c.gain >= average - 1e-3) {
            if winner.is_none_or(|w| cand.gain_ratio > w.gain_ratio) {
                winner = Some(cand);
            }
        }
        Ok(winner)
    }

    fn grow(&self, rows: Vec<usize>) -> Result<Node> {
        let counts = class_counts(rows.iter().map(|&r| self.m.labels()[r]));
        if counts[0] == 0.0 || counts[1] == 0.0 || rows.len() < 2 * self.params.min_leaf {
            return Ok(Node::Leaf { counts });
        }
        let Some(split) = self.best_split(&rows)? else {
            return Ok(Node::Leaf { counts });
        };
        let column = split.column;
        match split.threshold {
            Some(threshold) => {
                let (below, above): (Vec<usize>, Vec<usize>) = rows.into_iter().partition(|&r| {
                    self.m.row(r)[column]
                        .as_num()
                        .is_some_and(|x| x <= threshold)
                });
                Ok(Node::Threshold {
                    column,
                    threshold,
                    counts,
                    below: Box::new(self.grow(below)?),
                    above: Box::new(self.grow(above)?),
                })
            }
            None => {
                let n_levels = self.m.columns()[column].levels().len();
                let mut parts = vec![Vec::new(); n_levels];
                for r in rows {
                    if let Value::Cat(level) = self.m.row(r)[column] {
                        parts[level as usize].push(r);
                    }
                }
                let children = parts
                    .into_iter()
                    .map(|p| self.grow(p))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Node::Multiway {
                    column,
                    counts,
                    children,
                })
            }
        }
    }
}

/// Upper confidence bound on the number of errors among `n` instances with
/// `e` observed errors, minus `e`.
pub fn added_errors(n: f64, e: f64, confidence: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if e < 1.0 {
        let base = n * (1.0 - confidence.powf(1.0 / n));
        if e == 0.0 {
            return base;
        }
        return base + e * (added_errors(n, 1.0, confidence) - base);
    }
    if e + 0.5 >= n {
        return (n - e).max(0.0);
    }
    let z = Normal::standard().inverse_cdf(1.0 - confidence);
    let f = (e + 0.5) / n;
    let r = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt())
        / (1.0 + z * z / n);
    r * n - e
}

/// Pessimistic error estimate of `node` treated as a leaf.
pub fn leaf_error_estimate(counts: [f64; 2], confidence: f64) -> f64 {
    let n = counts[0] + counts[1];
    let e = n - counts[0].max(counts[1]);
    e + added_errors(n, e, confidence)
}

/// Pessimistic error estimate of a subtree as it stands.
pub fn subtree_error_estimate(node: &Node, confidence: f64) -> f64 {
    match node {
        Node::Leaf { counts } => leaf_error_estimate(*counts, confidence),
        _ => node
            .children()
            .into_iter()
            .map(|c| subtree_error_estimate(c, confidence))
            .sum(),
    }
}

/// Bottom-up subtree replacement. Returns the estimated errors of the
/// pruned subtree.
fn prune(node: &mut Node, confidence: f64) -> f64 {
    let subtree = match node {
        Node::Leaf { counts } => return leaf_error_estimate(*counts, confidence),
        Node::Threshold { below, above, .. } => prune(below, confidence) + prune(above, confidence),
        Node::Multiway { children, .. } => children.iter_mut().map(|c| prune(c, confidence)).sum(),
    };
    let counts = node.counts();
    let as_leaf = leaf_error_estimate(counts, confidence);
    if as_leaf <= subtree {
        *node = Node::Leaf { counts };
        as_leaf
    } else {
        subtree
    }
}

pub fn train_decision_tree(matrix: &FeatureMatrix, params: TreeParams) -> Result<TreeModel> {
    let root = grow_unpruned(matrix, params)?;
    let mut root = root;
    prune(&mut root, params.confidence);
    Ok(TreeModel {
        params,
        n_columns: matrix.n_cols(),
        root,
    })
}

/// The grown tree before pruning.
pub fn grow_unpruned(matrix: &FeatureMatrix, params: TreeParams) -> Result<Node> {
    params.validate()?;
    if matrix.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let positives = matrix.labels().iter().filter(|&&l| l).count();
    if positives == 0 || positives == matrix.n_rows() {
        return Err(Error::SingleClass(matrix.n_rows()));
    }
    if let Some(v) = matrix.rows().iter().flatten().find(|v| v.is_missing()) {
        return Err(Error::SchemaMismatch(format!(
            "tree training requires missing values to be filtered first, found {v:?}"
        )));
    }
    Grower { m: matrix, params }.grow((0..matrix.n_rows()).collect())
}

fn majority_child<'a>(children: impl Iterator<Item = &'a Node>) -> Option<&'a Node> {
    let mut best: Option<&Node> = None;
    for c in children {
        let w = |n: &Node| n.counts()[0] + n.counts()[1];
        if best.is_none_or(|b| w(c) > w(b)) {
            best = Some(c);
        }
    }
    best
}

impl TreeModel {
    /// Class distribution of the leaf reached by `row`. Empty leaves fall
    /// back to their parent's distribution; missing values follow the
    /// heaviest child.
    pub fn distribution(&self, row: &[Value]) -> Result<[f64; 2]> {
        if row.len() != self.n_columns {
            return Err(Error::SchemaMismatch(format!(
                "row has {} values, tree expects {}",
                row.len(),
                self.n_columns
            )));
        }
        let mut node = &self.root;
        let mut fallback = node.counts();
        loop {
            let counts = node.counts();
            if counts[0] + counts[1] > 0.0 {
                fallback = counts;
            }
            let next = match node {
                Node::Leaf { .. } => return Ok(fallback),
                Node::Threshold {
                    column,
                    threshold,
                    below,
                    above,
                    ..
                } => match row[*column] {
                    Value::Num(x) if x <= *threshold => below.as_ref(),
                    Value::Num(_) => above.as_ref(),
                    _ => majority_child([below.as_ref(), above.as_ref()].into_iter())
                        .expect("binary node has children"),
                },
                Node::Multiway {
                    column, children, ..
                } => match row[*column] {
                    Value::Cat(level) if (level as usize) < children.len() => {
                        &children[level as usize]
                    }
                    _ => majority_child(children.iter()).expect("multiway node has children"),
                },
            };
            node = next;
        }
    }

    pub fn score(&self, row: &[Value]) -> Result<f64> {
        let [neg, pos] = self.distribution(row)?;
        Ok(pos / (neg + pos))
    }

    pub fn leaf_count(&self) -> usize {
        fn walk(n: &Node) -> usize {
            if n.is_leaf() {
                1
            } else {
                n.children().into_iter().map(walk).sum()
            }
        }
        walk(&self.root)
    }

    pub fn leaf_weight(&self) -> f64 {
        fn walk(n: &Node) -> f64 {
            match n {
                Node::Leaf { counts } => counts[0] + counts[1],
                _ => n.children().into_iter().map(walk).sum(),
            }
        }
        walk(&self.root)
    }

    pub fn depth(&self) -> usize {
        fn walk(n: &Node) -> usize {
            1 + n.children().into_iter().map(walk).max().unwrap_or(0)
        }
        walk(&self.root)
    }
}
