//! Logical operators on hole-cut layouts: stabilizer-group membership,
//! chain deformation, hole moves, braids, the patch Hadamard and small
//! initialization and measurement scenarios on the tableau simulator.

pub mod checks;
pub mod frame;
pub mod group;
pub mod hadamard;
pub mod moves;
pub mod scenarios;

pub use frame::{Frame, MeasureRecord, OutcomeOracle, OutcomeSource, TableauOracle};
pub use group::{ByproductRecord, Membership, OperatorChain, StabilizerGroup};
pub use moves::{braid, move_hole, BraidOutcome, BraidSpec, MoveOutcome};
pub use hadamard::{hadamard_patch, HadamardGeometry, HadamardOutcome};
pub use scenarios::{init_measure_scenarios, ScenarioReport};
