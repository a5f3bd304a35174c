//! Command-line front end: an operator-expression parser, versioned reports,
//! and one subcommand per computational module.

pub mod commands;
pub mod expr;
pub mod report;

pub use commands::{execute, Cli, CliError};
pub use expr::{parse_operator_expr, parse_poly, OperatorExpr, ParseError};
pub use report::Report;
