//! Property checks on single (program, state) cases and the exhaustive
//! push/pop oracle.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::semantics::{eval_a, eval_r, pop_r, push_r, RunOutcome};
use crate::state::{Cell, Stack, State};
use crate::syntax::{invert, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub program: Term,
    pub initial: State,
    pub details: String,
    pub minimized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `vacuous` counts cases that passed only because their premise did not hold
    /// (an aborted forward A-run).
    Pass { cases_run: u64, vacuous: u64 },
    Fail(Box<Failure>),
}

impl Verdict {
    fn pass() -> Self {
        Verdict::Pass { cases_run: 1, vacuous: 0 }
    }

    fn vacuous() -> Self {
        Verdict::Pass { cases_run: 1, vacuous: 1 }
    }

    fn fail(program: &Term, initial: &State, details: String) -> Self {
        Verdict::Fail(Box::new(Failure {
            program: program.clone(),
            initial: initial.clone(),
            details,
            minimized: false,
        }))
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self, Verdict::Pass { vacuous, .. } if *vacuous > 0)
    }
}

fn describe_difference(label: &str, expected: &State, got: &State) -> String {
    match expected.first_difference(got) {
        Some(x) => format!(
            "{label}: `{x}` is ({}) but started as ({})",
            got.get(x),
            expected.get(x)
        ),
        None => format!("{label}: states differ"),
    }
}

/// `P; -P` and `-P; P` are both the identity on `sigma` under R-semantics.
pub fn check_strong_reversibility(p: &Term, sigma: &State) -> Verdict {
    let inv = invert(p);
    for (label, prog) in [("P;-P", Term::seq(p.clone(), inv.clone())), ("-P;P", Term::seq(inv, p.clone()))] {
        match eval_r(&prog, sigma) {
            Ok(tau) if &tau == sigma => {}
            Ok(tau) => return Verdict::fail(p, sigma, describe_difference(label, sigma, &tau)),
            Err(e) => return Verdict::fail(p, sigma, format!("{label}: {e}")),
        }
    }
    Verdict::pass()
}

/// If `P` reaches `tau` from `sigma` under A-semantics, `-P` reaches `sigma`
/// from `tau`. Aborting forward runs pass vacuously.
pub fn check_weak_reversibility_a(p: &Term, sigma: &State) -> Verdict {
    let tau = match eval_a(p, sigma) {
        Ok(RunOutcome::Final(tau)) => tau,
        Ok(RunOutcome::Aborted(_)) => return Verdict::vacuous(),
        Err(e) => return Verdict::fail(p, sigma, format!("forward: {e}")),
    };
    match eval_a(&invert(p), &tau) {
        Ok(RunOutcome::Final(back)) if &back == sigma => Verdict::pass(),
        Ok(RunOutcome::Final(back)) => {
            Verdict::fail(p, sigma, describe_difference("-P after P", sigma, &back))
        }
        Ok(RunOutcome::Aborted(rec)) => {
            Verdict::fail(p, sigma, format!("-P aborted from the forward result: {rec}"))
        }
        Err(e) => Verdict::fail(p, sigma, format!("backward: {e}")),
    }
}

/// A completed A-run agrees with the R-run, and leaves every counter at 0.
pub fn check_agreement_a_r(p: &Term, sigma: &State) -> Verdict {
    let tau = match eval_a(p, sigma) {
        Ok(RunOutcome::Final(tau)) => tau,
        Ok(RunOutcome::Aborted(_)) => return Verdict::vacuous(),
        Err(e) => return Verdict::fail(p, sigma, format!("A: {e}")),
    };
    match eval_r(p, sigma) {
        Ok(r) if r == tau && !r.any_broken() => Verdict::pass(),
        Ok(r) => Verdict::fail(p, sigma, describe_difference("R vs A", &tau, &r)),
        Err(e) => Verdict::fail(p, sigma, format!("R: {e}")),
    }
}

/// Which half of "A aborts iff R ends with a broken variable" a case refutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// A aborted but R ended with no broken variable.
    OnlyIf,
    /// R ended broken but A completed.
    If,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub a_aborted: bool,
    pub r_final_broken: bool,
    pub direction_witness: Option<Direction>,
}

/// Runs A and R from `sigma` (counters must be 0) and compares A's abort with
/// R's broken variables. `None` if either evaluator rejects the input.
pub fn check_failure_correspondence(p: &Term, sigma: &State) -> Option<Correspondence> {
    let a_aborted = eval_a(p, sigma).ok()?.is_aborted();
    let r_final_broken = eval_r(p, sigma).ok()?.any_broken();
    let direction_witness = match (a_aborted, r_final_broken) {
        (true, false) => Some(Direction::OnlyIf),
        (false, true) => Some(Direction::If),
        _ => None,
    };
    Some(Correspondence { a_aborted, r_final_broken, direction_witness })
}

/// Bounds of the exhaustive cell grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBounds {
    /// `|value| <= value`
    pub value: u32,
    pub stack_len: usize,
    /// `|element| <= elem`
    pub elem: u32,
    pub counter: u32,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { value: 2, stack_len: 3, elem: 1, counter: 2 }
    }
}

/// Every cell inside `b`.
pub fn enumerate_cells(b: OracleBounds) -> Vec<Cell> {
    let elem = i64::from(b.elem);
    let elems: Vec<i64> = (-elem..=elem).collect();
    let mut stacks: Vec<Vec<i64>> = vec![vec![]];
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..b.stack_len {
        layer = layer
            .iter()
            .flat_map(|s| {
                elems.iter().map(move |&e| {
                    let mut t = s.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
        stacks.extend(layer.iter().cloned());
    }
    let value = i64::from(b.value);
    let mut out = Vec::new();
    for v in -value..=value {
        for s in &stacks {
            for c in 0..=b.counter {
                out.push(Cell::new(v, Stack::from_top_first(s.iter().copied()), c));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InverseLaw {
    PopAfterPush,
    PushAfterPop,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub cells_checked: u64,
    /// First cell violating a law, if any.
    pub failure: Option<(Cell, InverseLaw, Cell)>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `pop_r(push_r(c)) == c` and `push_r(pop_r(c)) == c` on every cell
/// of the grid.
pub fn exhaustive_pop_push_inverse(b: OracleBounds) -> OracleReport {
    let mut cells_checked = 0;
    for cell in enumerate_cells(b) {
        cells_checked += 1;
        let round = pop_r(push_r(cell.clone()));
        if round != cell {
            return OracleReport { cells_checked, failure: Some((cell, InverseLaw::PopAfterPush, round)) };
        }
        let round = push_r(pop_r(cell.clone()));
        if round != cell {
            return OracleReport { cells_checked, failure: Some((cell, InverseLaw::PushAfterPop, round)) };
        }
    }
    OracleReport { cells_checked, failure: None }
}

/// Pairs of distinct grid cells that `f` sends to the same image.
pub fn collisions(b: OracleBounds, f: impl Fn(Cell) -> Cell) -> Vec<(Cell, Cell)> {
    let mut seen: HashMap<Cell, Cell> = HashMap::new();
    let mut out = Vec::new();
    for cell in enumerate_cells(b) {
        let image = f(cell.clone());
        match seen.get(&image) {
            Some(first) => out.push((first.clone(), cell)),
            None => {
                seen.insert(image, cell);
            }
        }
    }
    out
}
