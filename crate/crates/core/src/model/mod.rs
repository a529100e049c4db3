//! Instance generation, cost matrices and error accounting.

mod cost;
mod dump;
mod instance;
mod permutation;
mod report;

pub use cost::{cost_matrices, CostMatrices};
pub use dump::{read_instance, write_instance};
pub use instance::{generate_instance, Instance, InstanceSpec, PlantedMode};
pub use permutation::Permutation;
pub use report::{error_report, poly_rate, ErrorReport};
