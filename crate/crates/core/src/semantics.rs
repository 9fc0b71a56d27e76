//! Big-step evaluators.
//!
//! * N: naive pair semantics, `POP` uses total `hd`/`tl`.
//! * A: as N, but `POP x` aborts unless `x` holds 0 and a non-empty stack.
//! * R: triple semantics, `PUSH`/`POP` act through [`push_r`] and [`pop_r`].
//!
//! All three unfold `FOR x {P}` `|v|` times, where `v` is the value of `x` on
//! entry; negative `v` runs the inverse body. Well-formed loops never modify
//! their leader, so `v` is read once.

use std::fmt;

use num_bigint::{BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::state::{dump_state, hd, tl, Cell, IntValue, Stack, State};
use crate::syntax::{check_well_formed, Identifier, Term, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    N,
    A,
    R,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::N, Semantics::A, Semantics::R];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::N => "n",
            Semantics::A => "a",
            Semantics::R => "r",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which clause of [`push_r`] / [`pop_r`] fires on a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    First,
    Second,
    Third,
}

/// `v = 0`, stack non-empty: the shape both second clauses need.
fn loaded_zero(cell: &Cell) -> bool {
    cell.value.is_zero() && !cell.stack.is_empty()
}

pub fn push_clause(cell: &Cell) -> Clause {
    if cell.counter.is_zero() {
        Clause::First
    } else if loaded_zero(cell) {
        Clause::Second
    } else {
        Clause::Third
    }
}

pub fn pop_clause(cell: &Cell) -> Clause {
    if loaded_zero(cell) && cell.counter.is_zero() {
        Clause::First
    } else if loaded_zero(cell) {
        Clause::Second
    } else {
        Clause::Third
    }
}

/// R-semantics `PUSH`, first matching clause wins:
///
/// ```text
/// (v, t,    0)   => (0, v::t, 0)
/// (0, v::t, c+1) => (0, v::t, c+1)
/// (u, s,    c+1) => (u, s,    c)
/// ```
pub fn push_r(mut cell: Cell) -> Cell {
    match push_clause(&cell) {
        Clause::First => {
            let v = std::mem::take(&mut cell.value);
            cell.stack.push(v);
        }
        Clause::Second => {}
        Clause::Third => cell.counter -= 1u32,
    }
    cell
}

/// R-semantics `POP`, first matching clause wins:
///
/// ```text
/// (0, v::t, 0)   => (v, t,    0)
/// (0, v::t, c+1) => (0, v::t, c+1)
/// (u, s,    c)   => (u, s,    c+1)
/// ```
pub fn pop_r(mut cell: Cell) -> Cell {
    match pop_clause(&cell) {
        Clause::First => cell.value = cell.stack.pop().expect("clause 1 has a non-empty stack"),
        Clause::Second => {}
        Clause::Third => cell.counter += 1u32,
    }
    cell
}

fn push_n(mut cell: Cell) -> Cell {
    let v = std::mem::take(&mut cell.value);
    cell.stack.push(v);
    cell
}

fn pop_n(cell: Cell) -> Cell {
    Cell { value: hd(&cell.stack), stack: tl(&cell.stack), counter: cell.counter }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbortReason {
    ValueNonzero,
    EmptyStack,
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AbortReason::ValueNonzero => "value-nonzero",
            AbortReason::EmptyStack => "empty-stack",
        })
    }
}

/// A failed `POP` assertion under A-semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbortRecord {
    /// The failing instruction, e.g. `POP x`.
    pub instruction: String,
    pub variable: Identifier,
    pub reason: AbortReason,
    pub observed_value: IntValue,
    pub observed_stack: Stack,
    /// 1-based index of the failing atomic step.
    pub trace_position: usize,
}

impl fmt::Display for AbortRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} aborted at step {}: {} ({} = {}, {})",
            self.instruction,
            self.trace_position,
            self.reason,
            self.variable,
            self.observed_value,
            self.observed_stack
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Final(State),
    Aborted(AbortRecord),
}

impl RunOutcome {
    pub fn final_state(&self) -> Option<&State> {
        match self {
            RunOutcome::Final(s) => Some(s),
            RunOutcome::Aborted(_) => None,
        }
    }

    pub fn into_final(self) -> Option<State> {
        match self {
            RunOutcome::Final(s) => Some(s),
            RunOutcome::Aborted(_) => None,
        }
    }

    pub fn is_aborted(&self) -> bool {
        matches!(self, RunOutcome::Aborted(_))
    }
}

/// Inputs an evaluator refuses to run.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("ill-formed program: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<Violation>),
    #[error("{semantics}-semantics needs every counter to be 0, but `{variable}` has a nonzero counter")]
    NonzeroCounter { semantics: Semantics, variable: Identifier },
}

fn precheck(p: &Term, sigma: &State, sem: Semantics) -> Result<(), EvalError> {
    check_well_formed(p).map_err(EvalError::IllFormed)?;
    if sem != Semantics::R {
        if let Some(x) = sigma.first_nonzero_counter() {
            return Err(EvalError::NonzeroCounter { semantics: sem, variable: x.clone() });
        }
    }
    Ok(())
}

/// State (or abort) observed right after one atomic step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    State(State),
    Abort(AbortRecord),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    /// 1-based step index.
    pub step: usize,
    /// The atomic instruction actually executed (after loop-direction inversion).
    pub instruction: Term,
    pub result: StepResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub snapshots: Vec<Snapshot>,
    pub outcome: RunOutcome,
}

struct Machine {
    sem: Semantics,
    state: State,
    steps: usize,
    trace: Option<Vec<Snapshot>>,
}

impl Machine {
    fn exec(&mut self, t: &Term, backward: bool) -> Result<(), AbortRecord> {
        match t {
            Term::Seq(p, q) => {
                if backward {
                    self.exec(q, true)?;
                    self.exec(p, true)
                } else {
                    self.exec(p, false)?;
                    self.exec(q, false)
                }
            }
            Term::For(x, body) => {
                let v = &self.state.get(x).value;
                let reverse = backward ^ (v.sign() == Sign::Minus);
                let n = v.magnitude().clone();
                repeat(&n, || self.exec(body, reverse))
            }
            atom => self.step(atom, backward),
        }
    }

    fn step(&mut self, atom: &Term, backward: bool) -> Result<(), AbortRecord> {
        let instr = if backward { crate::syntax::invert(atom) } else { atom.clone() };
        self.steps += 1;
        let res = self.apply(&instr);
        if let Some(trace) = &mut self.trace {
            trace.push(Snapshot {
                step: self.steps,
                instruction: instr,
                result: match &res {
                    Ok(()) => StepResult::State(self.state.clone()),
                    Err(rec) => StepResult::Abort(rec.clone()),
                },
            });
        }
        res
    }

    fn apply(&mut self, instr: &Term) -> Result<(), AbortRecord> {
        match (instr, self.sem) {
            (Term::Skip, _) => {}
            (Term::Inc(x), _) => self.state.update(x, |mut c| {
                c.value += 1;
                c
            }),
            (Term::Dec(x), _) => self.state.update(x, |mut c| {
                c.value -= 1;
                c
            }),
            (Term::Push(x), Semantics::R) => self.state.update(x, push_r),
            (Term::Pop(x), Semantics::R) => self.state.update(x, pop_r),
            (Term::Push(x), _) => self.state.update(x, push_n),
            (Term::Pop(x), Semantics::N) => self.state.update(x, pop_n),
            (Term::Pop(x), Semantics::A) => {
                let cell = self.state.get(x);
                let reason = if !cell.value.is_zero() {
                    Some(AbortReason::ValueNonzero)
                } else if cell.stack.is_empty() {
                    Some(AbortReason::EmptyStack)
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Err(AbortRecord {
                        instruction: instr.to_string(),
                        variable: x.clone(),
                        reason,
                        observed_value: cell.value.clone(),
                        observed_stack: cell.stack.clone(),
                        trace_position: self.steps,
                    });
                }
                self.state.update(x, pop_n);
            }
            (Term::Seq(..) | Term::For(..), _) => unreachable!("only atoms are applied"),
        }
        Ok(())
    }
}

fn repeat<E>(n: &BigUint, mut f: impl FnMut() -> Result<(), E>) -> Result<(), E> {
    if let Some(k) = n.to_u64() {
        for _ in 0..k {
            f()?;
        }
    } else {
        let mut left = n.clone();
        while !left.is_zero() {
            f()?;
            left -= 1u32;
        }
    }
    Ok(())
}

fn run(p: &Term, sigma: &State, sem: Semantics, traced: bool) -> Result<Trace, EvalError> {
    precheck(p, sigma, sem)?;
    let mut m = Machine {
        sem,
        state: sigma.clone(),
        steps: 0,
        trace: traced.then(Vec::new),
    };
    let res = m.exec(p, false);
    let outcome = match res {
        Ok(()) => RunOutcome::Final(m.state),
        Err(rec) => RunOutcome::Aborted(rec),
    };
    Ok(Trace { snapshots: m.trace.unwrap_or_default(), outcome })
}

/// Runs `p` from `sigma` under the chosen semantics.
pub fn eval(p: &Term, sigma: &State, sem: Semantics) -> Result<RunOutcome, EvalError> {
    run(p, sigma, sem, false).map(|t| t.outcome)
}

pub fn eval_n(p: &Term, sigma: &State) -> Result<State, EvalError> {
    let out = eval(p, sigma, Semantics::N)?;
    Ok(out.into_final().expect("N-semantics never aborts"))
}

pub fn eval_a(p: &Term, sigma: &State) -> Result<RunOutcome, EvalError> {
    eval(p, sigma, Semantics::A)
}

pub fn eval_r(p: &Term, sigma: &State) -> Result<State, EvalError> {
    let out = eval(p, sigma, Semantics::R)?;
    Ok(out.into_final().expect("R-semantics never aborts"))
}

/// Like [`eval`], also recording a snapshot after every atomic step.
pub fn eval_traced(p: &Term, sigma: &State, sem: Semantics) -> Result<Trace, EvalError> {
    run(p, sigma, sem, true)
}

/// Text rendering of a trace: one block per step that touches a variable,
/// showing that variable's cell, then a `FINAL` block with `vars` or an
/// `ABORT` block for the failing step.
pub fn render_trace<'a>(trace: &Trace, vars: impl IntoIterator<Item = &'a Identifier>) -> String {
    let mut out = String::new();
    for snap in &trace.snapshots {
        match &snap.result {
            StepResult::State(state) => {
                let Some(x) = snap.instruction.target() else { continue };
                out.push_str(&format!("step {}: {}\n", snap.step, snap.instruction));
                out.push_str(&dump_state(state, [x]));
                out.push('\n');
            }
            StepResult::Abort(_) => {}
        }
    }
    match &trace.outcome {
        RunOutcome::Final(state) => {
            out.push_str("FINAL\n");
            out.push_str(&dump_state(state, vars));
        }
        RunOutcome::Aborted(rec) => {
            out.push_str(&format!(
                "ABORT step {}: {} ({})\n{} = {}, {}, 0\n",
                rec.trace_position,
                rec.instruction,
                rec.reason,
                rec.variable,
                rec.observed_value,
                rec.observed_stack
            ));
        }
    }
    out
}
