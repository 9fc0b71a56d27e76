//! Greedy counterexample minimization: program structure first, then state.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::state::{Cell, Stack, State};
use crate::syntax::{Identifier, Term};

/// Every term obtained from `t` by one shrink step: a node replaced by `SKIP`,
/// a `Seq` replaced by one of its arms, or a `FOR` replaced by its body.
/// Each candidate is well-formed whenever `t` is.
pub fn shrink_term(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Skip => return out,
        Term::Seq(a, b) => {
            out.push((**a).clone());
            out.push((**b).clone());
            out.extend(shrink_term(a).into_iter().map(|a2| Term::Seq(Box::new(a2), b.clone())));
            out.extend(shrink_term(b).into_iter().map(|b2| Term::Seq(a.clone(), Box::new(b2))));
        }
        Term::For(x, body) => {
            out.push((**body).clone());
            out.extend(shrink_term(body).into_iter().map(|b2| Term::for_loop(x.clone(), b2)));
        }
        _ => {}
    }
    if *t != Term::Skip && !out.contains(&Term::Skip) {
        out.insert(0, Term::Skip);
    }
    out
}

fn toward_zero(v: &BigInt) -> Vec<BigInt> {
    if v.is_zero() {
        return vec![];
    }
    let mut out = vec![BigInt::zero()];
    let half: BigInt = v / 2;
    if !half.is_zero() {
        out.push(half);
    }
    let step = if v.is_positive() { v - 1 } else { v + 1 };
    if !out.contains(&step) {
        out.push(step);
    }
    out
}

fn shrink_cell(c: &Cell) -> Vec<Cell> {
    let mut out = Vec::new();
    if !c.is_default() {
        out.push(Cell::default());
    }
    for v in toward_zero(&c.value) {
        out.push(Cell { value: v, ..c.clone() });
    }
    if !c.stack.is_empty() {
        out.push(Cell { stack: Stack::new(), ..c.clone() });
        let elems: Vec<BigInt> = c.stack.iter().cloned().collect();
        for i in 0..elems.len() {
            let mut fewer = elems.clone();
            fewer.remove(i);
            out.push(Cell { stack: Stack::from_top_first(fewer), ..c.clone() });
            for e in toward_zero(&elems[i]) {
                let mut smaller = elems.clone();
                smaller[i] = e;
                out.push(Cell { stack: Stack::from_top_first(smaller), ..c.clone() });
            }
        }
    }
    if !c.counter.is_zero() {
        out.push(Cell { counter: Zero::zero(), ..c.clone() });
        out.push(Cell { counter: &c.counter - 1u32, ..c.clone() });
    }
    out.dedup();
    out.retain(|d| d != c);
    out
}

/// Every state obtained from `s` by shrinking one cell one step.
pub fn shrink_state(s: &State) -> Vec<State> {
    let vars: Vec<(Identifier, Cell)> = s.iter().map(|(x, c)| (x.clone(), c.clone())).collect();
    let mut out = Vec::new();
    for (x, c) in &vars {
        for d in shrink_cell(c) {
            out.push(s.set(x, d));
        }
    }
    out
}

/// Shrinks `(program, state)` while `fails` keeps holding. The result is a local
/// minimum: no single step from [`shrink_term`] or [`shrink_state`] still fails.
pub fn minimize(
    program: &Term,
    state: &State,
    fails: impl Fn(&Term, &State) -> bool,
) -> (Term, State) {
    let mut p = program.clone();
    let mut s = state.clone();
    loop {
        let mut changed = false;
        'program: loop {
            for cand in shrink_term(&p) {
                if fails(&cand, &s) {
                    p = cand;
                    changed = true;
                    continue 'program;
                }
            }
            break;
        }
        'state: loop {
            for cand in shrink_state(&s) {
                if fails(&p, &cand) {
                    s = cand;
                    changed = true;
                    continue 'state;
                }
            }
            break;
        }
        if !changed {
            return (p, s);
        }
    }
}
