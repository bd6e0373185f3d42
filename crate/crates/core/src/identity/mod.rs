//! A small language of polynomial identities in shifted sequence terms,
//! with an exact range checker and a threshold probe.
//!
//! ```
//! use trimat::identity::{check_identity, parse_identity, SeqEnv};
//!
//! let ast = parse_identity("K(n) = 4*T(n+1) - T(n) - T(n+2)").unwrap();
//! let report = check_identity(&ast, -30, 30, &SeqEnv::new()).unwrap();
//! assert!(report.holds());
//! ```

mod ast;
mod corpus;
mod eval;
mod parser;

pub use ast::{render, render_linear, Expr, IdentityAST};
pub use corpus::{builtin_corpus, parse_corpus_file, PRODUCT_M};
pub use eval::{
    check_identity, conjecture_probe, eval_expr, CheckReport, Failure, ProbeOutcome, SeqEnv,
    Verdict, FAILURE_CAP, PROBE_WINDOW,
};
pub use parser::{parse_expr, parse_identity, ParseError};
