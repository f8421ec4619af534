//! Snapshot dataset handling and the logistic probability estimator.

mod dataset;
mod logistic;

pub use dataset::{
    generate_snapshots, load_dataset, load_dataset_reader, split, SnapshotDataset, TimeProfile,
    FEATURE_COUNT, SNAPSHOT_FEATURE_NAMES,
};
pub use logistic::{train, LogisticModel, StandardizationStats, TrainConfig, TrainingMeta};
