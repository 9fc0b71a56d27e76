//! The `score` command line: argument model and command dispatch.
//!
//! [`run`] takes the argument vector and two writers and returns the exit
//! status, so commands can be driven in-process.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use score_core::harness::{
    collisions, exhaustive_pop_push_inverse, run_campaign, GenConfig, OracleBounds, Weights,
};
use score_core::{
    check_well_formed_with, dump_state, eval, eval_traced, invert, parse, parse_state_bindings,
    pop_r, pretty, push_r, render_trace, variables_of, Identifier, ProvisoMode, RunOutcome,
    Semantics, State, Term,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ABORT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "score", version, about = "Run, invert and test S-CORE programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a program and print the final state.
    Run(Exec),
    /// Print the inverse of a program.
    Invert {
        program: PathBuf,
    },
    /// Check the FOR-loop proviso.
    Check {
        program: PathBuf,
        /// Only forbid INC/DEC of a leader inside its loop.
        #[arg(long)]
        relaxed: bool,
    },
    /// Run the randomized property checks.
    Fuzz(FuzzArgs),
    /// Exhaustively check that pop and push are mutually inverse on small cells.
    Oracle(OracleArgs),
    /// Evaluate a program and print the state after every atomic step.
    Trace(Exec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    N,
    A,
    R,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::N => Semantics::N,
            SemanticsArg::A => Semantics::A,
            SemanticsArg::R => Semantics::R,
        }
    }
}

#[derive(Debug, Args)]
pub struct Exec {
    #[arg(long, value_enum, default_value = "r")]
    pub semantics: SemanticsArg,
    /// Run the inverse program instead.
    #[arg(long)]
    pub backward: bool,
    pub program: PathBuf,
    /// Initial state; every variable defaults to 0, [], 0.
    pub state: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 10_000)]
    pub cases: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 4)]
    pub max_vars: usize,
    #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
    pub value_min: i64,
    #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
    pub value_max: i64,
    #[arg(long, default_value_t = 4)]
    pub max_stack_len: usize,
    #[arg(long, default_value_t = 2)]
    pub max_counter: u64,
    /// Constructor weights as skip,inc,dec,push,pop,seq,for.
    #[arg(long, value_parser = parse_weights, default_value = "1,1,1,1,1,1,1")]
    pub weights: Weights,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

fn parse_weights(s: &str) -> Result<Weights, String> {
    let w: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    let [skip, inc, dec, push, pop, seq, for_loop] = w[..] else {
        return Err(format!("expected 7 comma-separated weights, got {}", w.len()));
    };
    Ok(Weights { skip, inc, dec, push, pop, seq, for_loop })
}

impl FuzzArgs {
    pub fn config(&self) -> GenConfig {
        GenConfig {
            seed: self.seed,
            max_depth: self.max_depth,
            max_vars: self.max_vars,
            value_min: self.value_min,
            value_max: self.value_max,
            max_stack_len: self.max_stack_len,
            max_counter: self.max_counter,
            weights: self.weights.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Largest |value|.
    #[arg(long, default_value_t = 2)]
    pub value: u32,
    #[arg(long, default_value_t = 3)]
    pub stack_len: usize,
    /// Largest |stack element|.
    #[arg(long, default_value_t = 1)]
    pub elem: u32,
    #[arg(long, default_value_t = 2)]
    pub counter: u32,
    /// Also scan pop and push for collisions.
    #[arg(long)]
    pub injectivity: bool,
}

/// A failure that ends the command with a message on stderr.
struct Fail {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Fail {
    Fail { code: EXIT_USAGE, message: message.into() }
}

type Out<'a> = &'a mut dyn Write;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "score: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command, out: Out) -> Result<i32, Fail> {
    match cmd {
        Command::Run(e) => cmd_run(e, out),
        Command::Trace(e) => cmd_trace(e, out),
        Command::Invert { program } => cmd_invert(program, out),
        Command::Check { program, relaxed } => cmd_check(program, *relaxed, out),
        Command::Fuzz(f) => cmd_fuzz(f, out),
        Command::Oracle(o) => cmd_oracle(o, out),
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Term, Fail> {
    parse(&read(path)?).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn load_state(path: Option<&Path>) -> Result<(State, BTreeSet<Identifier>), Fail> {
    match path {
        None => Ok((State::new(), BTreeSet::new())),
        Some(p) => {
            parse_state_bindings(&read(p)?).map_err(|e| usage(format!("{}:{e}", p.display())))
        }
    }
}

fn write(out: Out, text: &str) -> Result<(), Fail> {
    out.write_all(text.as_bytes()).map_err(|e| usage(format!("write failed: {e}")))
}

struct Prepared {
    program: Term,
    state: State,
    vars: BTreeSet<Identifier>,
    semantics: Semantics,
}

fn prepare(e: &Exec) -> Result<Prepared, Fail> {
    let mut program = load_program(&e.program)?;
    let (state, mut vars) = load_state(e.state.as_deref())?;
    if e.backward {
        program = invert(&program);
    }
    vars.extend(variables_of(&program));
    Ok(Prepared { program, state, vars, semantics: e.semantics.into() })
}

fn cmd_run(e: &Exec, out: Out) -> Result<i32, Fail> {
    let p = prepare(e)?;
    let outcome = eval(&p.program, &p.state, p.semantics).map_err(|e| usage(e.to_string()))?;
    let direction = if e.backward { "backward" } else { "forward" };
    match outcome {
        RunOutcome::Final(s) => {
            write(out, &format!("# final state ({}-semantics, {direction})\n", p.semantics))?;
            write(out, &dump_state(&s, &p.vars))?;
            Ok(EXIT_OK)
        }
        RunOutcome::Aborted(rec) => {
            write(out, &format!("ABORT {rec}\n"))?;
            Ok(EXIT_ABORT)
        }
    }
}

fn cmd_trace(e: &Exec, out: Out) -> Result<i32, Fail> {
    let p = prepare(e)?;
    let trace = eval_traced(&p.program, &p.state, p.semantics).map_err(|e| usage(e.to_string()))?;
    write(out, &render_trace(&trace, &p.vars))?;
    Ok(if trace.outcome.is_aborted() { EXIT_ABORT } else { EXIT_OK })
}

fn cmd_invert(path: &Path, out: Out) -> Result<i32, Fail> {
    let p = load_program(path)?;
    write(out, &format!("{}\n", pretty(&invert(&p))))?;
    Ok(EXIT_OK)
}

fn cmd_check(path: &Path, relaxed: bool, out: Out) -> Result<i32, Fail> {
    let p = load_program(path)?;
    let mode = if relaxed { ProvisoMode::Relaxed } else { ProvisoMode::Strict };
    match check_well_formed_with(&p, mode) {
        Ok(()) => {
            write(out, "ok\n")?;
            Ok(EXIT_OK)
        }
        Err(violations) => {
            for v in violations {
                write(out, &format!("{v}\n"))?;
            }
            Ok(EXIT_PROPERTY)
        }
    }
}

fn cmd_fuzz(f: &FuzzArgs, out: Out) -> Result<i32, Fail> {
    let cfg = f.config();
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let report = run_campaign(&cfg, f.cases);
    if f.json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| usage(e.to_string()))?;
        write(out, &format!("{text}\n"))?;
    } else {
        write(out, &report.render_text())?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_PROPERTY })
}

fn cmd_oracle(o: &OracleArgs, out: Out) -> Result<i32, Fail> {
    let bounds = OracleBounds { value: o.value, stack_len: o.stack_len, elem: o.elem, counter: o.counter };
    let report = exhaustive_pop_push_inverse(bounds);
    write(out, &format!("{} cells checked\n", report.cells_checked))?;
    let mut code = EXIT_OK;
    if let Some((cell, law, got)) = &report.failure {
        write(out, &format!("FAIL {law:?} at ({cell}): got ({got})\n"))?;
        code = EXIT_PROPERTY;
    }
    if o.injectivity {
        for (name, f) in [("pop", pop_r as fn(_) -> _), ("push", push_r)] {
            let found = collisions(bounds, f);
            write(out, &format!("{name}: {} collisions\n", found.len()))?;
            if let Some((a, b)) = found.first() {
                write(out, &format!("  ({a}) and ({b})\n"))?;
                code = EXIT_PROPERTY;
            }
        }
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse() {
        assert_eq!(parse_weights("1,1,1,1,1,1,1").unwrap(), Weights::uniform());
        assert_eq!(parse_weights("1, 0,0,0,0,0,0").unwrap(), Weights::only_skip());
        assert!(parse_weights("1,1,1").is_err());
        assert!(parse_weights("1,1,1,1,1,1,x").is_err());
    }

    #[test]
    fn fuzz_defaults_match_generator_defaults() {
        let cli = Cli::try_parse_from(["score", "fuzz"]).unwrap();
        let Command::Fuzz(f) = cli.command else { panic!() };
        assert_eq!(f.config(), GenConfig::default());
        assert_eq!(f.cases, 10_000);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["score", "--help"], &mut out, &mut err), EXIT_OK);
        assert!(String::from_utf8(out).unwrap().contains("oracle"));
    }
}
