//! Scenario-driven verification runs over the core library.

pub mod runner;
pub mod scenario;

pub use runner::{run, Report, SuiteReport};
pub use scenario::{Scenario, ScenarioError, Suite};
