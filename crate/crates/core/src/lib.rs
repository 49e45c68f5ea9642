//! Privacy decision prediction from behavioral analogs.
//!
//! Derives disclosure labels and analog features from social-graph data and
//! location-sharing surveys, trains binary classifiers, and runs the
//! undersampled cross-validation and factor-ablation protocol over them.

pub mod classifiers;
pub mod cli;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod location_features;
pub mod osn;
pub mod synth;

pub use error::{Error, Result};
