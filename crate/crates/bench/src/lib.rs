//! Fixture programs and states shared by the benchmarks.

use score_core::{parse, Cell, State, Term};

/// Named `(program, state)` workloads.
pub fn fixtures() -> Vec<(&'static str, Term, State)> {
    let p = |src: &str| parse(src).expect("fixture parses");
    vec![
        (
            "srl-identity",
            p("INC x; FOR x {DEC y}; FOR x {INC y}; DEC x"),
            State::new().with("x", Cell::of(4, &[], 0)).with("y", Cell::of(9, &[], 0)),
        ),
        (
            "stack-transfer",
            p("FOR x {POP s}; FOR x {PUSH s}"),
            State::new().with("x", Cell::of(3, &[], 0)).with("s", Cell::of(0, &[2, 1], 0)),
        ),
        (
            "nested-loops",
            p("FOR n { FOR m { INC acc; PUSH t }; FOR m { POP t } }"),
            State::new().with("n", Cell::of(40, &[], 0)).with("m", Cell::of(25, &[], 0)),
        ),
        (
            "broken-pops",
            p("FOR n { POP s }; FOR n { PUSH s }"),
            State::new().with("n", Cell::of(500, &[], 0)).with("s", Cell::of(7, &[1, 2, 3], 0)),
        ),
    ]
}
