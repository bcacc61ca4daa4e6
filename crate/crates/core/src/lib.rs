//! Computational analysis of slang lexicons: phonology, morphology, formation
//! classes, usage embeddings and social bias.
//!
//! Modules roughly follow the pipeline order. [`corpus`] loads lexicons,
//! [`phonology`] and [`morphology`] characterize word forms, [`slangclass`]
//! classifies formation types with an open-set reject option,
//! [`embeddings`] and [`social`] cover usage vectors, subject categories and
//! bias metrics, and [`stats`] holds the shared metrics and tests.

pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod fixtures;
pub mod morphology;
pub mod phonology;
pub mod report;
pub mod slangclass;
pub mod social;
pub mod stats;
pub mod store;

pub use error::{Error, Result};
