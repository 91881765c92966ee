//! Command-line front end: field expressions, subcommands and reports.

pub mod commands;
pub mod expr;
pub mod report;

pub use commands::{run_command, Outcome};
pub use expr::{eval_str, evaluate, parse_expr, Ast, BinOp, EvalError, ExprError, ParseError};
pub use report::{Precision, Report, Status};
