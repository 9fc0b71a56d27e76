//! Value domains and states.
//!
//! Every variable denotes a [`Cell`]: an integer value, a stack of integers
//! and a counter of unmatched illegal pops. A [`State`] is a total map from
//! identifiers to cells; identifiers it does not store hold the default cell
//! `(0, [], 0)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::lexer::{tokenize, Tok};
use crate::parser::{Cursor, ParseError};
use crate::syntax::Identifier;

/// Unbounded signed integer.
pub type IntValue = BigInt;

/// Unbounded non-negative integer.
pub type Counter = BigUint;

/// Stack of integers. Index 0 of [`Stack::iter`] is the top.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Stack {
    // stored bottom-first so push/pop on the top are O(1)
    items: Vec<IntValue>,
}

impl Stack {
    pub const fn new() -> Self {
        Stack { items: Vec::new() }
    }

    /// Builds a stack from elements listed top-first.
    pub fn from_top_first<I, T>(elems: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<IntValue>,
    {
        let mut items: Vec<IntValue> = elems.into_iter().map(Into::into).collect();
        items.reverse();
        Stack { items }
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn top(&self) -> Option<&IntValue> {
        self.items.last()
    }

    /// Elements from the top down.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &IntValue> + ExactSizeIterator {
        self.items.iter().rev()
    }

    /// `h :: self`
    pub fn push(&mut self, h: IntValue) {
        self.items.push(h);
    }

    pub fn pop(&mut self) -> Option<IntValue> {
        self.items.pop()
    }
}

impl fmt::Debug for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Total head: the top element, or 0 on the empty stack.
pub fn hd(s: &Stack) -> IntValue {
    s.top().cloned().unwrap_or_default()
}

/// Total tail: everything below the top; the empty stack is a fixed point.
pub fn tl(s: &Stack) -> Stack {
    let mut t = s.clone();
    t.pop();
    t
}

/// The triple a variable denotes.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Cell {
    pub value: IntValue,
    pub stack: Stack,
    pub counter: Counter,
}

impl Cell {
    pub fn new(value: impl Into<IntValue>, stack: Stack, counter: impl Into<Counter>) -> Self {
        Cell { value: value.into(), stack, counter: counter.into() }
    }

    /// Convenience constructor from machine integers, stack top-first.
    pub fn of(value: i64, stack: &[i64], counter: u64) -> Self {
        Cell::new(value, Stack::from_top_first(stack.iter().copied()), counter)
    }

    pub fn is_default(&self) -> bool {
        self.value.is_zero() && self.stack.is_empty() && self.counter.is_zero()
    }

    /// `(value, stack)`, ignoring the counter.
    pub fn pair(&self) -> (&IntValue, &Stack) {
        (&self.value, &self.stack)
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.value, self.stack, self.counter)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}", self.value, self.stack, self.counter)
    }
}

/// A variable is broken while its counter is positive.
pub fn broken(cell: &Cell) -> bool {
    !cell.counter.is_zero()
}

static DEFAULT_CELL: Cell = Cell {
    value: BigInt::ZERO,
    stack: Stack::new(),
    counter: BigUint::ZERO,
};

/// Finite-support total map from identifiers to cells.
///
/// Default cells are never stored, so the derived equality agrees on every
/// identifier exactly when two states are equal as total functions.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct State {
    cells: BTreeMap<Identifier, Cell>,
}

impl State {
    pub fn new() -> Self {
        State::default()
    }

    /// Cell held by `x`; the default cell outside the support.
    pub fn get(&self, x: &Identifier) -> &Cell {
        self.cells.get(x).unwrap_or(&DEFAULT_CELL)
    }

    /// Persistent update: a new state with `x` mapped to `cell`.
    pub fn set(&self, x: &Identifier, cell: Cell) -> State {
        let mut next = self.clone();
        next.insert(x.clone(), cell);
        next
    }

    /// In-place update.
    pub fn insert(&mut self, x: Identifier, cell: Cell) {
        if cell.is_default() {
            self.cells.remove(&x);
        } else {
            self.cells.insert(x, cell);
        }
    }

    /// Replaces the cell of `x` by `f(cell)`.
    pub fn update(&mut self, x: &Identifier, f: impl FnOnce(Cell) -> Cell) {
        let cell = self.cells.remove(x).unwrap_or_default();
        self.insert(x.clone(), f(cell));
    }

    pub fn with(mut self, x: &str, cell: Cell) -> State {
        let id = Identifier::new(x).expect("valid identifier");
        self.insert(id, cell);
        self
    }

    /// Identifiers holding a non-default cell.
    pub fn support(&self) -> impl Iterator<Item = &Identifier> {
        self.cells.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Identifier, &Cell)> {
        self.cells.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn any_broken(&self) -> bool {
        self.cells.values().any(broken)
    }

    /// First identifier (in order) whose counter is nonzero.
    pub fn first_nonzero_counter(&self) -> Option<&Identifier> {
        self.cells.iter().find(|(_, c)| broken(c)).map(|(x, _)| x)
    }

    /// The same state with every counter reset to 0.
    pub fn without_counters(&self) -> State {
        let mut out = State::new();
        for (x, c) in &self.cells {
            out.insert(x.clone(), Cell { counter: Counter::zero(), ..c.clone() });
        }
        out
    }

    /// The smallest identifier on which the two states disagree.
    pub fn first_difference<'a>(&'a self, other: &'a State) -> Option<&'a Identifier> {
        self.cells
            .keys()
            .chain(other.cells.keys())
            .filter(|x| self.get(x) != other.get(x))
            .min()
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.cells.iter()).finish()
    }
}

impl FromIterator<(Identifier, Cell)> for State {
    fn from_iter<T: IntoIterator<Item = (Identifier, Cell)>>(iter: T) -> Self {
        let mut s = State::new();
        for (x, c) in iter {
            s.insert(x, c);
        }
        s
    }
}

/// Renders the cells of `vars` in state-file syntax, one `x = v, [..], c` line
/// each, sorted by identifier. Every line ends in a newline.
pub fn dump_state<'a>(state: &State, vars: impl IntoIterator<Item = &'a Identifier>) -> String {
    let vars: BTreeSet<&Identifier> = vars.into_iter().collect();
    let mut out = String::new();
    for x in vars {
        out.push_str(&format!("{x} = {}\n", state.get(x)));
    }
    out
}

/// Parses a `.sst` state file.
///
/// ```text
/// line := ident "=" int [ "," "[" [int ("," int)*] "]" [ "," nat ] ]
/// ```
///
/// Stacks are written top-first. Blank lines and `#` comments are ignored.
pub fn parse_state(src: &str) -> Result<State, ParseError> {
    parse_state_bindings(src).map(|(state, _)| state)
}

/// Like [`parse_state`], also returning every identifier the file binds,
/// including those bound to the default cell.
pub fn parse_state_bindings(src: &str) -> Result<(State, BTreeSet<Identifier>), ParseError> {
    let mut cur = Cursor::new(tokenize(src, true)?);
    let mut seen = BTreeSet::new();
    let mut state = State::new();
    loop {
        match cur.peek().tok {
            Tok::Eof => break,
            Tok::Newline => {
                cur.bump();
                continue;
            }
            _ => {}
        }
        let at = cur.peek().clone();
        let x = cur.ident()?;
        if !seen.insert(x.clone()) {
            return Err(ParseError::new(
                at.line,
                at.column,
                format!("duplicate binding for `{x}`"),
                vec![],
            ));
        }
        cur.expect(Tok::Equals, "`=`")?;
        let value = int(&mut cur)?;
        let mut stack = Stack::new();
        let mut counter = Counter::zero();
        if cur.eat(&Tok::Comma) {
            cur.expect(Tok::LBracket, "`[`")?;
            let mut elems = Vec::new();
            if !cur.eat(&Tok::RBracket) {
                loop {
                    elems.push(int(&mut cur)?);
                    if cur.eat(&Tok::RBracket) {
                        break;
                    }
                    cur.expect(Tok::Comma, "`,` or `]`")?;
                }
            }
            stack = Stack::from_top_first(elems);
            if cur.eat(&Tok::Comma) {
                let at = cur.peek().clone();
                let n = int(&mut cur)?;
                counter = n.to_biguint().ok_or_else(|| {
                    ParseError::new(at.line, at.column, "counter must be non-negative", vec![])
                })?;
            }
        }
        match cur.peek().tok {
            Tok::Newline | Tok::Eof => {}
            _ => return Err(cur.error(&["`,`", "end of line"])),
        }
        state.insert(x, Cell { value, stack, counter });
    }
    Ok((state, seen))
}

fn int(cur: &mut Cursor) -> Result<IntValue, ParseError> {
    match &cur.peek().tok {
        Tok::Int(n) => {
            let n = n.clone();
            cur.bump();
            Ok(n)
        }
        _ => Err(cur.error(&["integer"])),
    }
}
