//! Syntax: the AST, a recursive-descent parser, the typing judgments for
//! values and computations, and a pretty-printer that round-trips with the
//! parser.

mod ast;
mod check;
mod parse;

pub use ast::{free_vars_comp, free_vars_value, Comp, Context, SelfRef, Type, Value};
pub use check::{typecheck_comp, typecheck_value, TypeError};
pub use parse::{parse_comp, parse_type, parse_value, SyntaxError};
