//! Domain types, file formats and dataset statistics.

#[macro_use]
pub mod vocab;
pub mod graph;
pub mod location;
pub mod matrix;
pub mod model_file;
pub mod request;
pub mod stats;

pub use graph::{Edge, OsnGraph, OsnUser, Platform, ProfileItem};
pub use location::{
    load_location_records, read_location_records, write_location_records, LocationRecord,
    StudyDesign, LOCATION_CSV_HEADER,
};
pub use matrix::{Column, ColumnKind, FactorGroup, FeatureMatrix, MatrixSchema, Value};
pub use model_file::{load_model, read_model, save_model, write_model, MODEL_FORMAT_VERSION};
pub use request::RequestRecord;
pub use stats::{dataset_stats, ClassCounts, Labeled, StatsReport};
pub use vocab::*;
