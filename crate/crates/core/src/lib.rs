//! Jet-space calculus: total derivatives, linearizations, brackets of
//! nonlinear differential operators, and compatibility of differential
//! constraints decided by normal forms modulo prolonged equations.

pub mod cli;
pub mod compat;
pub mod config;
pub mod error;
pub mod expr;
pub mod ideal;
pub mod jet;
pub mod linops;
pub mod parse;

pub use error::{Error, ParseError, Result};
pub use expr::{Expr, Kernel, KernelKind, Monomial, RatFunc};
pub use jet::{AnsatzBinding, JetContext, MultiIndex, Symbol, SymbolPoly};
