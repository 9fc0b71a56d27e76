//! Seeded random generation of well-formed terms and states.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::state::{Cell, Counter, IntValue, Stack, State};
use crate::syntax::{Identifier, Term};

/// Relative frequency of each constructor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weights {
    pub skip: u32,
    pub inc: u32,
    pub dec: u32,
    pub push: u32,
    pub pop: u32,
    pub seq: u32,
    #[serde(rename = "for")]
    pub for_loop: u32,
}

impl Weights {
    pub fn uniform() -> Self {
        Weights { skip: 1, inc: 1, dec: 1, push: 1, pop: 1, seq: 1, for_loop: 1 }
    }

    pub fn only_skip() -> Self {
        Weights { skip: 1, inc: 0, dec: 0, push: 0, pop: 0, seq: 0, for_loop: 0 }
    }

    fn total(&self) -> u64 {
        [self.skip, self.inc, self.dec, self.push, self.pop, self.seq, self.for_loop]
            .iter()
            .map(|&w| u64::from(w))
            .sum()
    }
}

impl Default for Weights {
    fn default() -> Self {
        Weights::uniform()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    pub max_vars: usize,
    pub value_min: i64,
    pub value_max: i64,
    pub max_stack_len: usize,
    pub max_counter: u64,
    pub weights: Weights,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 1,
            max_depth: 6,
            max_vars: 4,
            value_min: -5,
            value_max: 5,
            max_stack_len: 4,
            max_counter: 2,
            weights: Weights::uniform(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("max_depth must be positive")]
    ZeroDepth,
    #[error("max_vars must be positive")]
    ZeroVars,
    #[error("empty value range {0}..={1}")]
    EmptyRange(i64, i64),
    #[error("all constructor weights are zero")]
    ZeroWeights,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_depth == 0 {
            return Err(ConfigError::ZeroDepth);
        }
        if self.max_vars == 0 {
            return Err(ConfigError::ZeroVars);
        }
        if self.value_min > self.value_max {
            return Err(ConfigError::EmptyRange(self.value_min, self.value_max));
        }
        if self.weights.total() == 0 {
            return Err(ConfigError::ZeroWeights);
        }
        Ok(())
    }

    pub fn value_range(&self) -> RangeInclusive<i64> {
        self.value_min..=self.value_max
    }
}

/// Name of the `i`-th variable of the generator's pool.
pub fn pool_var(i: usize) -> Identifier {
    const NAMES: [&str; 7] = ["x", "y", "z", "s", "t", "u", "w"];
    let name = match NAMES.get(i) {
        Some(n) => n.to_string(),
        None => format!("v{i}"),
    };
    Identifier::new(&name).expect("pool names are identifiers")
}

#[derive(Clone, Copy)]
enum Ctor {
    Skip,
    Inc,
    Dec,
    Push,
    Pop,
    Seq,
    For,
}

/// Draws terms and states from one RNG stream.
pub struct Generator {
    cfg: GenConfig,
    pool: Vec<Identifier>,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: &GenConfig) -> Self {
        Generator::with_rng(cfg, ChaCha8Rng::seed_from_u64(cfg.seed))
    }

    /// Generator for the `index`-th case of a campaign: same seed, separate stream.
    pub fn for_case(cfg: &GenConfig, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index);
        Generator::with_rng(cfg, rng)
    }

    fn with_rng(cfg: &GenConfig, rng: ChaCha8Rng) -> Self {
        let pool = (0..cfg.max_vars).map(pool_var).collect();
        Generator { cfg: cfg.clone(), pool, rng }
    }

    /// A well-formed term of depth at most `max_depth`. Loop bodies never use an
    /// enclosing leader.
    pub fn term(&mut self) -> Term {
        let mut forbidden = Vec::new();
        self.term_at(self.cfg.max_depth, &mut forbidden)
    }

    fn term_at(&mut self, depth: usize, forbidden: &mut Vec<usize>) -> Term {
        let free: Vec<usize> = (0..self.pool.len()).filter(|i| !forbidden.contains(i)).collect();
        let w = &self.cfg.weights;
        let compound = depth >= 2;
        let has_var = !free.is_empty();
        let options = [
            (Ctor::Skip, w.skip, true),
            (Ctor::Inc, w.inc, has_var),
            (Ctor::Dec, w.dec, has_var),
            (Ctor::Push, w.push, has_var),
            (Ctor::Pop, w.pop, has_var),
            (Ctor::Seq, w.seq, compound),
            (Ctor::For, w.for_loop, compound && has_var),
        ];
        let total: u64 = options.iter().filter(|o| o.2).map(|o| u64::from(o.1)).sum();
        if total == 0 {
            return Term::Skip;
        }
        let mut pick = self.rng.gen_range(0..total);
        let mut ctor = Ctor::Skip;
        for (c, weight, enabled) in options {
            if !enabled {
                continue;
            }
            if pick < u64::from(weight) {
                ctor = c;
                break;
            }
            pick -= u64::from(weight);
        }

        let var = |g: &mut Self| g.pool[free[g.rng.gen_range(0..free.len())]].clone();
        match ctor {
            Ctor::Skip => Term::Skip,
            Ctor::Inc => Term::Inc(var(self)),
            Ctor::Dec => Term::Dec(var(self)),
            Ctor::Push => Term::Push(var(self)),
            Ctor::Pop => Term::Pop(var(self)),
            Ctor::Seq => {
                let a = self.term_at(depth - 1, forbidden);
                let b = self.term_at(depth - 1, forbidden);
                Term::seq(a, b)
            }
            Ctor::For => {
                let leader = free[self.rng.gen_range(0..free.len())];
                forbidden.push(leader);
                let body = self.term_at(depth - 1, forbidden);
                forbidden.pop();
                Term::for_loop(self.pool[leader].clone(), body)
            }
        }
    }

    pub fn int(&mut self) -> IntValue {
        self.rng.gen_range(self.cfg.value_range()).into()
    }

    pub fn cell(&mut self) -> Cell {
        let value = self.int();
        let len = self.rng.gen_range(0..=self.cfg.max_stack_len);
        let elems: Vec<IntValue> = (0..len).map(|_| self.int()).collect();
        let counter: Counter = self.rng.gen_range(0..=self.cfg.max_counter).into();
        Cell { value, stack: Stack::from_top_first(elems), counter }
    }

    /// Random cells for each of `vars`, drawn in identifier order.
    pub fn state(&mut self, vars: &BTreeSet<Identifier>) -> State {
        vars.iter().map(|x| (x.clone(), self.cell())).collect()
    }
}

/// A term from `cfg.seed`.
pub fn gen_term(cfg: &GenConfig) -> Term {
    Generator::new(cfg).term()
}

/// A state over `vars` from `cfg.seed`.
pub fn gen_state(cfg: &GenConfig, vars: &BTreeSet<Identifier>) -> State {
    Generator::new(cfg).state(vars)
}
