//! The proof tree of `t.final`: every module's checks as nodes, a
//! deterministic scheduler, and the report.

mod fixtures;
mod nodes;
mod report;
mod tree;

pub use fixtures::{FixtureCheck, FixtureError, Fixtures, FIXTURE_FILES};
pub use nodes::{registry, Ctx, NodeKind, NodeSpec, Outcome};
pub use report::{AxiomEntry, NodeResult, Report, Status, Summary, Verdict, SCHEMA_VERSION};
pub use tree::{ProofTree, Selector, TreeError};
