//! Statistical post-processing of measurement records.

pub mod clifford1q;
pub mod dataset;
pub mod entropy;
pub mod purity;
pub mod report;
pub mod shadow;
pub mod spam;

pub use clifford1q::{cliffords, Clifford1q, NUM_CLIFFORDS};
pub use dataset::RandomizedMeasurementDataset;
pub use entropy::{entropy_report, EntropyReport};
pub use purity::{bootstrap_error, purity_estimate, regions, tee, unbiased_square, Partition, RegionShape, TeeSamples};
pub use report::{expectation_report, Estimate, ExperimentReport, MeasurementPlan, ReportOptions, ShotRecord};
pub use shadow::{shadow_fidelity, ShadowEstimate};
pub use spam::{spam_apply, spam_mitigate, TransitionMatrix};
