//! Abstract syntax of S-CORE terms, the structural inverter and the
//! well-formedness check on `FOR` leaders.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reserved words of the concrete syntax. None of them is a valid identifier.
pub const KEYWORDS: [&str; 6] = ["SKIP", "INC", "DEC", "PUSH", "POP", "FOR"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier `{0}`")]
pub struct InvalidIdentifier(pub String);

/// A variable name matching `[A-Za-z_][A-Za-z0-9_]*` that is not a keyword.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Identifier(Arc<str>);

impl Identifier {
    pub fn new(name: &str) -> Result<Self, InvalidIdentifier> {
        if is_identifier(name) {
            Ok(Identifier(Arc::from(name)))
        } else {
            Err(InvalidIdentifier(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if is_ident_start(c) => {}
        _ => return false,
    }
    chars.all(is_ident_continue) && !KEYWORDS.contains(&name)
}

impl fmt::Debug for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Identifier {
    type Error = InvalidIdentifier;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Identifier::new(&value)
    }
}

impl From<Identifier> for String {
    fn from(value: Identifier) -> Self {
        value.0.to_string()
    }
}

/// S-CORE term. `Seq` is binary; `a; b; c` is `Seq(a, Seq(b, c))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Skip,
    Inc(Identifier),
    Dec(Identifier),
    Push(Identifier),
    Pop(Identifier),
    Seq(Box<Term>, Box<Term>),
    For(Identifier, Box<Term>),
}

impl Term {
    pub fn seq(first: Term, second: Term) -> Term {
        Term::Seq(Box::new(first), Box::new(second))
    }

    pub fn for_loop(leader: Identifier, body: Term) -> Term {
        Term::For(leader, Box::new(body))
    }

    /// Right-associated sequence of `terms`; `Skip` when empty.
    pub fn seq_all(terms: impl IntoIterator<Item = Term>) -> Term {
        let mut terms: Vec<Term> = terms.into_iter().collect();
        let Some(mut acc) = terms.pop() else {
            return Term::Skip;
        };
        while let Some(t) = terms.pop() {
            acc = Term::seq(t, acc);
        }
        acc
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, Term::Seq(..) | Term::For(..))
    }

    /// Variable an atomic instruction acts on (`None` for `SKIP` and compound terms).
    pub fn target(&self) -> Option<&Identifier> {
        match self {
            Term::Inc(x) | Term::Dec(x) | Term::Push(x) | Term::Pop(x) => Some(x),
            _ => None,
        }
    }

    /// Height of the AST; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Seq(p, q) => 1 + p.depth().max(q.depth()),
            Term::For(_, body) => 1 + body.depth(),
            _ => 1,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Seq(p, q) => 1 + p.size() + q.size(),
            Term::For(_, body) => 1 + body.size(),
            _ => 1,
        }
    }

    pub fn uses_stack(&self) -> bool {
        match self {
            Term::Push(_) | Term::Pop(_) => true,
            Term::Seq(p, q) => p.uses_stack() || q.uses_stack(),
            Term::For(_, body) => body.uses_stack(),
            _ => false,
        }
    }
}

/// The syntactic inverse of `p`.
pub fn invert(p: &Term) -> Term {
    match p {
        Term::Skip => Term::Skip,
        Term::Inc(x) => Term::Dec(x.clone()),
        Term::Dec(x) => Term::Inc(x.clone()),
        Term::Push(x) => Term::Pop(x.clone()),
        Term::Pop(x) => Term::Push(x.clone()),
        Term::Seq(p, q) => Term::seq(invert(q), invert(p)),
        Term::For(x, body) => Term::for_loop(x.clone(), invert(body)),
    }
}

/// Identifiers occurring anywhere in `p`, loop leaders included.
pub fn variables_of(p: &Term) -> BTreeSet<Identifier> {
    let mut out = BTreeSet::new();
    collect_vars(p, &mut out);
    out
}

fn collect_vars(p: &Term, out: &mut BTreeSet<Identifier>) {
    match p {
        Term::Skip => {}
        Term::Inc(x) | Term::Dec(x) | Term::Push(x) | Term::Pop(x) => {
            out.insert(x.clone());
        }
        Term::Seq(p, q) => {
            collect_vars(p, out);
            collect_vars(q, out);
        }
        Term::For(x, body) => {
            out.insert(x.clone());
            collect_vars(body, out);
        }
    }
}

/// Which occurrences of a leader inside its loop body count as violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProvisoMode {
    /// The leader may not occur in the body at all.
    #[default]
    Strict,
    /// Only `INC leader` and `DEC leader` are forbidden.
    Relaxed,
}

/// One step from a node to one of its children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathStep {
    First,
    Second,
    Body,
}

/// Position of a sub-term, as the steps taken from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TermPath(pub Vec<PathStep>);

impl TermPath {
    /// Sub-term at this path, if the path is valid for `root`.
    pub fn resolve<'a>(&self, root: &'a Term) -> Option<&'a Term> {
        self.0.iter().try_fold(root, |t, step| match (t, step) {
            (Term::Seq(p, _), PathStep::First) => Some(&**p),
            (Term::Seq(_, q), PathStep::Second) => Some(&**q),
            (Term::For(_, body), PathStep::Body) => Some(&**body),
            _ => None,
        })
    }
}

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for step in &self.0 {
            let s = match step {
                PathStep::First => "first",
                PathStep::Second => "second",
                PathStep::Body => "body",
            };
            write!(f, "/{s}")?;
        }
        Ok(())
    }
}

/// A loop leader occurring inside its own body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub leader: Identifier,
    /// Path to the offending `FOR` node.
    pub loop_path: TermPath,
    /// Path to the sub-term where the leader occurs.
    pub occurrence: TermPath,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "leader {} of FOR at {} occurs at {}",
            self.leader, self.loop_path, self.occurrence
        )
    }
}

/// Checks the `FOR` proviso with the default (strict) reading.
pub fn check_well_formed(p: &Term) -> Result<(), Vec<Violation>> {
    check_well_formed_with(p, ProvisoMode::Strict)
}

pub fn check_well_formed_with(p: &Term, mode: ProvisoMode) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let mut path = Vec::new();
    let mut leaders: Vec<(Identifier, usize)> = Vec::new();
    scan(p, mode, &mut path, &mut leaders, &mut violations);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

pub fn is_well_formed(p: &Term) -> bool {
    check_well_formed(p).is_ok()
}

// `leaders` holds every enclosing leader with the path length of its FOR node.
fn scan(
    p: &Term,
    mode: ProvisoMode,
    path: &mut Vec<PathStep>,
    leaders: &mut Vec<(Identifier, usize)>,
    out: &mut Vec<Violation>,
) {
    let offending = match (p, mode) {
        (Term::Inc(x) | Term::Dec(x), _) => Some(x),
        (Term::Push(x) | Term::Pop(x) | Term::For(x, _), ProvisoMode::Strict) => Some(x),
        _ => None,
    };
    if let Some(x) = offending {
        for (leader, depth) in leaders.iter().filter(|(l, _)| l == x) {
            out.push(Violation {
                leader: leader.clone(),
                loop_path: TermPath(path[..*depth].to_vec()),
                occurrence: TermPath(path.clone()),
            });
        }
    }
    match p {
        Term::Seq(a, b) => {
            path.push(PathStep::First);
            scan(a, mode, path, leaders, out);
            path.pop();
            path.push(PathStep::Second);
            scan(b, mode, path, leaders, out);
            path.pop();
        }
        Term::For(x, body) => {
            leaders.push((x.clone(), path.len()));
            path.push(PathStep::Body);
            scan(body, mode, path, leaders, out);
            path.pop();
            leaders.pop();
        }
        _ => {}
    }
}

/// Renders `p` in the concrete syntax accepted by [`crate::parser::parse`].
pub fn pretty(p: &Term) -> String {
    p.to_string()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Skip => f.write_str("SKIP"),
            Term::Inc(x) => write!(f, "INC {x}"),
            Term::Dec(x) => write!(f, "DEC {x}"),
            Term::Push(x) => write!(f, "PUSH {x}"),
            Term::Pop(x) => write!(f, "POP {x}"),
            Term::For(x, body) => write!(f, "FOR {x} {{ {body} }}"),
            Term::Seq(..) => write_seq(self, f),
        }
    }
}

// Right spines print flat; a Seq in first position is parenthesised so that
// parsing rebuilds the same tree.
fn write_seq(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let Term::Seq(a, b) = t else {
        return write!(f, "{t}");
    };
    if matches!(**a, Term::Seq(..)) {
        write!(f, "({a})")?;
    } else {
        write!(f, "{a}")?;
    }
    f.write_str("; ")?;
    write_seq(b, f)
}
