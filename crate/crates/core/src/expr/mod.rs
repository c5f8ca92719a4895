//! Expression language over the chart parameters `u`, `v`, evaluated to
//! Taylor jets so every scalar field in the toolkit comes with exact
//! derivatives.

mod ast;
mod eval;
mod jet;
mod parse;
mod random;

pub use ast::{BinaryOp, Expr, UnaryOp, Var};
pub use eval::{eval, eval_jet, EvalError};
pub use jet::{Jet, MAX_ORDER};
pub use parse::{parse, ParseError};
pub use random::{is_tame, random_expr};
