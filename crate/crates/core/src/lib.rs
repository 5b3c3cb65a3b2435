//! Littlewood-Richardson coefficients through the hive model.
//!
//! Small ranks are counted exactly by enumerating integer hives. Larger
//! ranks are estimated by sampling: the relaxed hive body `Q` is rounded with
//! its Dikin ellipsoid, its volume is estimated by a multiphase Monte Carlo
//! scheme, and the fraction of Dikin-walk samples whose nearest lattice point
//! is a genuine hive scales that volume into a count.

pub mod error;
pub mod estimator;
pub mod experiments;
pub mod geometry;
pub mod hive;
pub mod partitions;
pub mod ratio;
pub mod rng;
pub mod sampling;
pub mod volume;

pub use error::{Error, Result};
pub use estimator::{estimate_lrc, EstimateReport};

pub use geometry::{Body, HPolytope};
pub use hive::{build_rhombus_system, exact_count, Hive, RhombusSystem};
pub use partitions::{make_shift, parse_partition, Partition, PartitionTriple, ShiftVectors};
pub use ratio::Rational;
