//! Undersampling, adapted cross-validation, metrics and ablation.

pub mod ablation;
pub mod cv;
pub mod metrics;
pub mod sampling;

pub use ablation::{
    ablate, removal_label, render_ablation, render_results, AblationEntry, AblationPlan,
    AblationReport,
};
pub use cv::{
    adapted_cv, cv_splits, evaluate_split, train_split, Ablated, CvConfig, EvalResult, ExtraColumn,
    FoldSource, LocationSource, MatrixSource, RunMetrics, Split,
};
pub use metrics::{auc, f1_score, Confusion};
pub use sampling::{stratified_folds, undersample, undersample_indices};
