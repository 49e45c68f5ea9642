//! Factor-group ablation and the text renderings of evaluation results.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::cv::{adapted_cv, Ablated, CvConfig, EvalResult, FoldSource};
use crate::classifiers::Learner;
use crate::data::FactorGroup;
use crate::error::{Error, Result};

/// The removals to try, each a set of groups dropped together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AblationPlan {
    pub removals: Vec<Vec<FactorGroup>>,
}

impl AblationPlan {
    /// One removal per factor group.
    pub fn osn() -> Self {
        AblationPlan {
            removals: FactorGroup::ALL.iter().map(|&g| vec![g]).collect(),
        }
    }

    /// Appropriateness and context are removed together: the raw context
    /// columns and the context-conditioned share rates describe the same
    /// attributes.
    pub fn location() -> Self {
        AblationPlan {
            removals: vec![
                vec![FactorGroup::Trustworthiness],
                vec![FactorGroup::Tendency],
                vec![FactorGroup::Sensitivity],
                vec![FactorGroup::Appropriateness, FactorGroup::Context],
            ],
        }
    }

    pub fn custom(groups: &[FactorGroup]) -> Self {
        AblationPlan {
            removals: groups.iter().map(|&g| vec![g]).collect(),
        }
    }
}

pub fn removal_label(groups: &[FactorGroup]) -> String {
    groups
        .iter()
        .map(|g| format!("({})", g.number()))
        .collect::<Vec<_>>()
        .join("+")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationEntry {
    pub label: String,
    pub groups: Vec<FactorGroup>,
    /// `None` when none of the groups occur in the dataset.
    pub result: Option<EvalResult>,
    pub delta_f1: Option<f64>,
    pub delta_auc: Option<f64>,
}

impl AblationEntry {
    pub fn is_applicable(&self) -> bool {
        self.result.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub dataset: String,
    pub baseline: EvalResult,
    pub entries: Vec<AblationEntry>,
}

impl AblationReport {
    pub fn entry(&self, group: FactorGroup) -> Option<&AblationEntry> {
        self.entries.iter().find(|e| e.groups.contains(&group))
    }
}

pub fn ablate<S: FoldSource + ?Sized>(
    dataset: &str,
    source: &S,
    learner: &Learner,
    plan: &AblationPlan,
    config: &CvConfig,
) -> Result<AblationReport> {
    if plan.removals.iter().any(Vec::is_empty) {
        return Err(Error::invalid("ablation removal with no groups"));
    }
    let baseline = adapted_cv(source, learner, config)?;
    let present: Vec<FactorGroup> = source.columns().iter().map(|c| c.group).collect();
    let mut entries = Vec::with_capacity(plan.removals.len());
    for groups in &plan.removals {
        let label = removal_label(groups);
        if !groups.iter().any(|g| present.contains(g)) {
            entries.push(AblationEntry {
                label,
                groups: groups.clone(),
                result: None,
                delta_f1: None,
                delta_auc: None,
            });
            continue;
        }
        let result = adapted_cv(&Ablated::new(source, groups)?, learner, config)?;
        entries.push(AblationEntry {
            label,
            groups: groups.clone(),
            delta_f1: Some(result.mean_f1 - baseline.mean_f1),
            delta_auc: Some(result.mean_auc - baseline.mean_auc),
            result: Some(result),
        });
    }
    Ok(AblationReport {
        dataset: dataset.to_string(),
        baseline,
        entries,
    })
}

/// Dataset / #tuples / F1 / AUC table, one line per result.
pub fn render_results(rows: &[(&str, &EvalResult)]) -> String {
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(7);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>8}  {:>13}  {:>13}  {:>5}",
        "Dataset", "#tuples", "F1", "AUC", "runs"
    );
    for (name, r) in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>8}  {:.3} ± {:.3}  {:.3} ± {:.3}  {:>5}",
            name,
            r.tuples,
            r.mean_f1,
            r.sd_f1,
            r.mean_auc,
            r.sd_auc,
            r.run_count()
        );
    }
    out
}

/// F1 and AUC with all features and with each removal; inapplicable
/// removals print as N/A.
pub fn render_ablation(report: &AblationReport) -> String {
    let mut headers = vec!["All".to_string()];
    headers.extend(report.entries.iter().map(|e| format!("-{}", e.label)));
    let cell = |v: Option<f64>| v.map_or_else(|| "N/A".to_string(), |x| format!("{x:.3}"));
    let mut f1 = vec![cell(Some(report.baseline.mean_f1))];
    let mut auc = vec![cell(Some(report.baseline.mean_auc))];
    for e in &report.entries {
        f1.push(cell(e.result.as_ref().map(|r| r.mean_f1)));
        auc.push(cell(e.result.as_ref().map(|r| r.mean_auc)));
    }
    let w = headers.iter().map(String::len).max().unwrap_or(5).max(5);
    let line = |label: &str, cells: &[String]| {
        let mut s = format!("{label:<8}");
        for c in cells {
            let _ = write!(s, "  {c:>w$}");
        }
        s
    };
    let mut out = format!("{} ({})\n", report.dataset, report.baseline.learner);
    out.push_str(&line("", &headers));
    out.push('\n');
    out.push_str(&line("F1", &f1));
    out.push('\n');
    out.push_str(&line("AUC", &auc));
    out.push('\n');
    out
}
