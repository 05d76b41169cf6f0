//! Command-line front end for `genkahler`: an expression language for
//! polynomials, forms and polyvectors, JSON scenario files, and commands that
//! produce deterministic JSON reports.

pub mod commands;
pub mod error;
pub mod expr;
pub mod scenario;

pub use commands::{run_scenario, run_task, RunReport, COVERAGE};
pub use error::CliError;
pub use expr::{parse_expr, parse_value, Expr, Value};
pub use scenario::{Overrides, Scenario, Settings};

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(report: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
