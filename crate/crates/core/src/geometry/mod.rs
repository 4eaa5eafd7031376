//! Device geometries: collinear chains and the cylindrical gas.

mod chain;
mod cylinder;
mod regions;

pub use chain::{build_chain, positions_csv};
pub use cylinder::{sample_cylinder, sample_cylinder_instance, CylinderSpec, RSA_JAMMING_FRACTION};
pub use regions::{assign_regions, Region, RegionPartition};
