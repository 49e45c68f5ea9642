//! Undersampling and stratified fold assignment.

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Labeled;
use crate::error::{Error, Result};

fn class_indices(labels: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let pos = (0..labels.len()).filter(|&i| labels[i]).collect();
    let neg = (0..labels.len()).filter(|&i| !labels[i]).collect();
    (pos, neg)
}

/// Indices of a balanced subset: every minority-class index plus an equally
/// sized sample (without replacement) of the majority class, in ascending
/// order.
pub fn undersample_indices(labels: &[bool], seed: u64) -> Result<Vec<usize>> {
    let (pos, neg) = class_indices(labels);
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::SingleClass(labels.len()));
    }
    let (minority, majority) = if pos.len() <= neg.len() {
        (pos, neg)
    } else {
        (neg, pos)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = minority.clone();
    out.extend(
        index::sample(&mut rng, majority.len(), minority.len())
            .into_iter()
            .map(|i| majority[i]),
    );
    out.sort_unstable();
    Ok(out)
}

pub fn undersample<T: Labeled + Clone>(records: &[T], seed: u64) -> Result<Vec<T>> {
    let labels: Vec<bool> = records.iter().map(Labeled::label).collect();
    Ok(undersample_indices(&labels, seed)?
        .into_iter()
        .map(|i| records[i].clone())
        .collect())
}

/// Splits positions `0..labels.len()` into `k` stratified folds: each class
/// is shuffled and dealt round-robin, so fold sizes per class differ by at
/// most one. Each fold is returned in ascending order.
pub fn stratified_folds(labels: &[bool], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::invalid(format!("need at least 2 folds, got {k}")));
    }
    let (mut pos, mut neg) = class_indices(labels);
    if pos.len() < k || neg.len() < k {
        return Err(Error::invalid(format!(
            "{k}-fold split needs at least {k} records per class, have {} positive and {} negative",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut folds = vec![Vec::new(); k];
    for class in [pos, neg] {
        for (j, i) in class.into_iter().enumerate() {
            folds[j % k].push(i);
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(pos: usize, neg: usize) -> Vec<bool> {
        let mut v = vec![true; pos];
        v.extend(vec![false; neg]);
        v
    }

    #[test]
    fn balances_to_twice_the_minority() {
        let l = labels(30, 70);
        let idx = undersample_indices(&l, 3).unwrap();
        assert_eq!(idx.len(), 60);
        assert_eq!(idx.iter().filter(|&&i| l[i]).count(), 30);
        assert!((0..30).all(|i| idx.contains(&i)));
    }

    #[test]
    fn balanced_input_is_kept_whole() {
        let l = labels(5, 5);
        assert_eq!(
            undersample_indices(&l, 9).unwrap(),
            (0..10).collect::<Vec<_>>()
        );
    }

    #[test]
    fn single_class_is_rejected() {
        assert!(undersample_indices(&labels(4, 0), 1).is_err());
    }

    #[test]
    fn folds_partition_and_stratify() {
        let l = labels(23, 23);
        let folds = stratified_folds(&l, 10, 5).unwrap();
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..46).collect::<Vec<_>>());
        for f in &folds {
            let p = f.iter().filter(|&&i| l[i]).count() as i64;
            assert!((p - (f.len() as i64 - p)).abs() <= 1);
        }
        assert!(stratified_folds(&labels(9, 20), 10, 5).is_err());
    }
}
