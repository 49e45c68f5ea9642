//! F1 and AUC.
//!
//! Both are computed as a single division of exact integer quantities, so
//! the results are the correctly rounded values of the underlying rationals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl Confusion {
    pub fn from_predictions(predicted: &[bool], actual: &[bool]) -> Result<Self> {
        if predicted.len() != actual.len() {
            return Err(Error::invalid(format!(
                "{} predictions for {} labels",
                predicted.len(),
                actual.len()
            )));
        }
        let mut c = Confusion::default();
        for (&p, &a) in predicted.iter().zip(actual) {
            match (p, a) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// F1 of the positive class, 2tp / (2tp + fp + fn); 0 when the class
    /// never occurs in labels or predictions.
    pub fn positive_f1(&self) -> f64 {
        ratio(
            2 * self.tp as u128,
            (2 * self.tp + self.fp + self.fn_) as u128,
        )
    }

    /// F1 of the negative class.
    pub fn negative_f1(&self) -> f64 {
        ratio(
            2 * self.tn as u128,
            (2 * self.tn + self.fn_ + self.fp) as u128,
        )
    }

    /// Unweighted mean of the two per-class F1 values.
    pub fn macro_f1(&self) -> f64 {
        let (a, b) = (
            2 * self.tp as u128,
            (2 * self.tp + self.fp + self.fn_) as u128,
        );
        let (c, d) = (
            2 * self.tn as u128,
            (2 * self.tn + self.fn_ + self.fp) as u128,
        );
        match (b, d) {
            (0, 0) => 0.0,
            (0, _) => ratio(c, 2 * d),
            (_, 0) => ratio(a, 2 * b),
            _ => ratio(a * d + c * b, 2 * b * d),
        }
    }
}

fn ratio(num: u128, den: u128) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Headline F1: the macro average over both classes.
pub fn f1_score(confusion: &Confusion) -> f64 {
    confusion.macro_f1()
}

/// Area under the ROC curve via the rank-sum statistic, with tied scores
/// sharing their average rank.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::invalid("scores contain NaN"));
    }
    let n_pos = labels.iter().filter(|&&l| l).count() as u128;
    let n_neg = labels.len() as u128 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass(labels.len()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Twice the positive rank sum keeps average ranks integral.
    let mut doubled_rank_sum: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && scores[order[end + 1]] == scores[order[start]] {
            end += 1;
        }
        // Ranks start+1 ..= end+1; their average doubled is start + end + 2.
        let doubled = (start + end + 2) as u128;
        let pos_in_group = order[start..=end].iter().filter(|&&i| labels[i]).count() as u128;
        doubled_rank_sum += doubled * pos_in_group;
        start = end + 1;
    }
    let num = doubled_rank_sum - n_pos * (n_pos + 1);
    Ok(num as f64 / (2 * n_pos * n_neg) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_f1_direct_formula() {
        let c = Confusion {
            tp: 4,
            fp: 1,
            tn: 0,
            fn_: 1,
        };
        assert_eq!(c.positive_f1(), 0.8);
    }

    #[test]
    fn macro_is_mean_of_classes() {
        let c = Confusion {
            tp: 4,
            fp: 1,
            tn: 3,
            fn_: 2,
        };
        let expect = (8.0 / 11.0 + 6.0 / 9.0) / 2.0;
        assert!((c.macro_f1() - expect).abs() < 1e-15);
    }

    #[test]
    fn auc_worked_examples() {
        assert_eq!(
            auc(&[0.9, 0.8, 0.7, 0.6], &[true, false, true, false]).unwrap(),
            0.75
        );
        assert_eq!(
            auc(&[0.1, 0.2, 0.8, 0.9], &[false, false, true, true]).unwrap(),
            1.0
        );
        assert_eq!(auc(&[0.5; 4], &[false, true, true, false]).unwrap(), 0.5);
        assert!(matches!(
            auc(&[0.1, 0.2], &[true, true]),
            Err(Error::SingleClass(2))
        ));
    }
}
