//! Cross-validation, metrics, pattern importance and the enumerate-then-learn baseline.

pub mod cv;
pub mod folds;
pub mod importance;
pub mod metrics;
pub mod naive;

pub use cv::{bench, run_cv, BenchRow, BenchStatus, CvOptions, CvReport, Grid, Mode};
pub use folds::stratified_kfold;
pub use importance::{feature_importance, Importance};
pub use metrics::{accuracy, auc};
