//! Parsing manifold expressions and producing spectrum reports.

pub mod expr;
pub mod report;

pub use expr::{parse_expression, Expr, ExprKind, ParseError, Span};
pub use report::{emit_json, parse_coefficients, render_text, report_json, run_spectrum, RunError, RunOptions, SpectrumReport};
