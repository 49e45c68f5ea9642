//! Class counts per dataset, rendered like a dataset-statistics table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{LocationRecord, RequestRecord};
use crate::error::{Error, Result};

/// A record carrying a binary disclosure label.
pub trait Labeled {
    const POSITIVE: &'static str;
    const NEGATIVE: &'static str;

    fn label(&self) -> bool;

    /// Sub-dataset the record belongs to, if the dataset is split.
    fn stratum(&self) -> Option<String> {
        None
    }
}

impl Labeled for RequestRecord {
    const POSITIVE: &'static str = "accepted";
    const NEGATIVE: &'static str = "rejected";

    fn label(&self) -> bool {
        self.label
    }
}

impl Labeled for LocationRecord {
    const POSITIVE: &'static str = "shared";
    const NEGATIVE: &'static str = "not shared";

    fn label(&self) -> bool {
        self.label
    }

    fn stratum(&self) -> Option<String> {
        Some(format!("D_{}", self.audience))
    }
}

impl Labeled for bool {
    const POSITIVE: &'static str = "positive";
    const NEGATIVE: &'static str = "negative";

    fn label(&self) -> bool {
        *self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub positive: usize,
    pub negative: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.positive + self.negative
    }

    fn add(&mut self, label: bool) {
        if label {
            self.positive += 1;
        } else {
            self.negative += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub dataset: String,
    pub positive_name: String,
    pub negative_name: String,
    pub counts: ClassCounts,
    pub strata: BTreeMap<String, ClassCounts>,
}

pub fn dataset_stats<T: Labeled>(dataset: &str, records: &[T]) -> Result<StatsReport> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut counts = ClassCounts::default();
    let mut strata: BTreeMap<String, ClassCounts> = BTreeMap::new();
    for r in records {
        counts.add(r.label());
        if let Some(s) = r.stratum() {
            strata.entry(s).or_default().add(r.label());
        }
    }
    Ok(StatsReport {
        dataset: dataset.to_string(),
        positive_name: T::POSITIVE.to_string(),
        negative_name: T::NEGATIVE.to_string(),
        counts,
        strata,
    })
}

impl StatsReport {
    pub fn render(&self) -> String {
        let mut rows: Vec<(String, ClassCounts)> = vec![(self.dataset.clone(), self.counts)];
        rows.extend(self.strata.iter().map(|(k, v)| (format!("  {k}"), *v)));
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(7);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>12}  {:>10}",
            "Dataset",
            format!("#{}", self.positive_name),
            format!("#{}", self.negative_name),
            "#total"
        );
        for (name, c) in rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>12}  {:>12}  {:>10}",
                name,
                group_thousands(c.positive),
                group_thousands(c.negative),
                group_thousands(c.total())
            );
        }
        out
    }
}

fn group_thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn requests(accepted: usize, rejected: usize) -> Vec<RequestRecord> {
        (0..accepted + rejected)
            .map(|i| RequestRecord {
                requester: i,
                receiver: i + 1,
                label: i < accepted,
                spurious_risk: false,
            })
            .collect()
    }

    #[test]
    fn twitter_counts() {
        let r = dataset_stats("D_Twitter", &requests(4_874, 7_914)).unwrap();
        assert_eq!(
            r.counts,
            ClassCounts {
                positive: 4_874,
                negative: 7_914
            }
        );
        assert!(r.render().contains("4,874"));
        assert!(r.render().contains("7,914"));
    }

    #[test]
    fn googleplus_counts() {
        let r = dataset_stats("D_Google+", &requests(21_798, 114_400)).unwrap();
        assert_eq!(r.counts.positive, 21_798);
        assert_eq!(r.counts.negative, 114_400);
        assert_eq!(r.counts.total(), 136_198);
    }

    #[test]
    fn degenerate_class() {
        let r = dataset_stats("all-one", &[true; 10]).unwrap();
        assert_eq!((r.counts.positive, r.counts.negative), (10, 0));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            dataset_stats::<bool>("none", &[]),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn thousands() {
        assert_eq!(group_thousands(0), "0");
        assert_eq!(group_thousands(999), "999");
        assert_eq!(group_thousands(114_400), "114,400");
        assert_eq!(group_thousands(1_234_567), "1,234,567");
    }
}
