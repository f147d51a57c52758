//! Instance and solution files, benchmark generation and validation.

mod format;
mod generate;
mod validate;

pub use format::{
    agent_name, instance_from_str, instance_to_string, read_instance, read_solution, solution_from_str,
    solution_to_string, write_instance, write_solution, FormatError,
};
pub use generate::{generate, obstacle_count, GenerateError, GeneratorSpec, OBSTACLE_RADIUS, RESERVED_SQUARE};
pub use validate::{
    back_solve, validate, ConflictRecord, ValidateError, ValidationReport, Violation, BOUND_TOL, KINEMATIC_TOL,
};
