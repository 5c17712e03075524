//! Test generation for quantum and reversible circuits under single-fault models.
//!
//! A [`Circuit`] compiles to a unitary, a fault model enumerates the faults it
//! can suffer, the simulator turns each fault into per-input detection
//! probabilities, and the cover solver picks a small repeated test plan.

pub mod atpg;
pub mod bits;
pub mod circuit;
pub mod cover;
pub mod error;
pub mod fault;
pub mod golden;
pub mod matrix;
pub mod simulate;
pub mod table;

pub use atpg::{build_stuckat_tables, parse_reversible, simulate_stuckat, ReversibleCircuit, StuckAtSite};
pub use circuit::{parse_circuit, Circuit, Division, PermTable, Stage, StageKind};
pub use cover::{
    coverage_gamma, exact_min_cover, exhaustive_baseline, greedy_cover, plan_tests, repetitions_needed,
    BaselineComparison, CoverageReport, PlanConfig, TestPlan, TestSequence,
};
pub use error::{Error, Result};
pub use fault::{Fault, FaultModelConfig, FaultUniverse};
pub use matrix::{Axis, ComplexMatrix};
pub use table::{ClassicalFaultTable, FaultClass, QuantumFaultTable, ReversibleFaultTable, TableFormat};
