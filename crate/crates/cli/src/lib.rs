//! Input parsing, pipeline orchestration and report emission for the `qg`
//! command-line tool.

pub mod doc;
pub mod input;
pub mod pipeline;
pub mod report;

pub use doc::Diagnostic;
pub use input::{parse_input, InputDocument, VerifyLevel};
pub use pipeline::run;
pub use report::{Report, SuiteStatus};
