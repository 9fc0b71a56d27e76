//! S-CORE workbench: syntax, parsing, states and the N/A/R evaluators, plus a
//! randomized harness that checks the reversibility properties of each
//! semantics.

mod lexer;

pub mod harness;
pub mod parser;
pub mod semantics;
pub mod state;
pub mod syntax;

pub use parser::{parse, ParseError};
pub use semantics::{
    eval, eval_a, eval_n, eval_r, eval_traced, pop_r, push_r, render_trace, AbortReason,
    AbortRecord, EvalError, RunOutcome, Semantics, Snapshot, StepResult, Trace,
};
pub use state::{broken, dump_state, hd, parse_state, parse_state_bindings, tl, Cell, Counter, IntValue, Stack, State};
pub use syntax::{
    check_well_formed, check_well_formed_with, invert, pretty, variables_of, Identifier,
    ProvisoMode, Term, Violation,
};
