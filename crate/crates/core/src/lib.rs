//! Multilayer synchronous threshold dynamical systems, a consistent learner for
//! their unknown thresholds, and tools for bounding the Natarajan dimension of
//! the resulting hypothesis classes.

pub mod configuration;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod learner;
pub mod ndim;
pub mod rng;

pub use configuration::Configuration;
pub use dynamics::{MasterKind, ThresholdSystem};
pub use error::{Error, Result};
pub use graph::{MultilayerNetwork, VertexLayerPair};
pub use learner::{LearningProblem, TrainingSet};
