//! The tester abstraction and the exponential and quadratic
//! adaptive-to-non-adaptive simulations.

pub mod builtin;
mod exponential;
mod quadratic;
mod tester;
mod verify;

pub use builtin::builtin_tester;
pub use exponential::{
    exponential_sim, extract_plan, reachable_cells, NonAdaptivePlan, MAX_EXP_QUERIES,
};
pub use quadratic::quadratic_sim;
pub use tester::{
    replay_to_verdict, run_tester, CoinStream, RunRecord, TesterAction, TesterProgram, Transcript,
    TranscriptEvent,
};
pub use verify::verify_nonadaptive;
