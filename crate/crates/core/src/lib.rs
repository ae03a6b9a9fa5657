//! Harmonic analysis on finite Vilenkin groups `Z_{m_1} x ... x Z_{m_N}`.

pub mod approx;
pub mod battery;
pub mod error;
pub mod format;
pub mod function;
pub mod group;
pub mod operators;
pub mod orlicz;
pub mod seeding;
pub mod system;
pub mod transform;
pub mod weak_type;

pub use error::{Error, Result};
pub use function::{LevelFunction, PointSet};
pub use group::{GroupPoint, HaarLevel, RadixSequence};
pub use operators::{MeasureReport, OperatorFamily};
pub use transform::{NaiveTransform, SpectrumVector, TransformPlan};
