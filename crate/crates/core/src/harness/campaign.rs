//! Batch runs of the randomized checks over a generated corpus.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    check_agreement_a_r, check_failure_correspondence, check_strong_reversibility,
    check_weak_reversibility_a, Direction, Failure, Verdict,
};
use super::gen::{GenConfig, Generator};
use super::shrink::minimize;
use crate::parser::parse;
use crate::state::{dump_state, Cell, State};
use crate::syntax::{variables_of, Term};

/// Witnesses of the "only if" discrepancy kept in a report, beyond the seeded one.
pub const MAX_WITNESSES: usize = 10;

/// The `index`-th case of the corpus for `cfg`. The state covers the program's
/// variables and may hold nonzero counters.
pub fn corpus_case(cfg: &GenConfig, index: u64) -> (Term, State) {
    let mut g = Generator::for_case(cfg, index);
    let p = g.term();
    let s = g.state(&variables_of(&p));
    (p, s)
}

pub fn corpus(cfg: &GenConfig, cases: u64) -> impl Iterator<Item = (Term, State)> + '_ {
    (0..cases).map(move |i| corpus_case(cfg, i))
}

/// The hand-found "only if" witness: `POP x; PUSH x` from `x = (5, [2], 0)`.
pub fn seeded_witness() -> (Term, State) {
    let p = parse("POP x; PUSH x").expect("witness program parses");
    (p, State::new().with("x", Cell::of(5, &[2], 0)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: u64,
    pub vacuous: u64,
    pub fail: u64,
}

impl Tally {
    fn add(&mut self, v: &Verdict) {
        match v {
            Verdict::Pass { vacuous, .. } if *vacuous > 0 => self.vacuous += 1,
            Verdict::Pass { .. } => self.pass += 1,
            Verdict::Fail(_) => self.fail += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceTally {
    pub a_aborted: u64,
    pub r_final_broken: u64,
    pub only_if_witnesses: u64,
    pub if_witnesses: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub check: String,
    pub case: Option<u64>,
    pub program: String,
    pub state: String,
    pub details: String,
    pub minimized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: GenConfig,
    pub cases: u64,
    pub strong_reversibility: Tally,
    pub weak_reversibility_a: Tally,
    pub agreement_a_r: Tally,
    pub failure_correspondence: CorrespondenceTally,
    pub seeded_witness_confirmed: bool,
    pub failures: Vec<CaseRecord>,
    pub witnesses: Vec<CaseRecord>,
}

impl CampaignReport {
    /// No asserted property failed. "Only if" witnesses are expected and do not count.
    pub fn passed(&self) -> bool {
        self.strong_reversibility.fail == 0
            && self.weak_reversibility_a.fail == 0
            && self.agreement_a_r.fail == 0
            && self.failure_correspondence.if_witnesses == 0
    }

    pub fn render_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "fuzz: {} cases, seed {}, depth {}, vars {}, values {}..={}, stack {}, counter {}\n",
            self.cases,
            c.seed,
            c.max_depth,
            c.max_vars,
            c.value_min,
            c.value_max,
            c.max_stack_len,
            c.max_counter
        );
        for (name, t) in [
            ("strong-reversibility (R)", &self.strong_reversibility),
            ("weak-reversibility (A)", &self.weak_reversibility_a),
            ("agreement (A vs R)", &self.agreement_a_r),
        ] {
            out.push_str(&format!(
                "{name}: pass {} vacuous {} fail {}\n",
                t.pass, t.vacuous, t.fail
            ));
        }
        let fc = &self.failure_correspondence;
        out.push_str(&format!(
            "failure-correspondence: a-aborted {} r-broken {} if-witnesses {} only-if-witnesses {}\n",
            fc.a_aborted, fc.r_final_broken, fc.if_witnesses, fc.only_if_witnesses
        ));
        out.push_str(&format!(
            "seeded only-if witness (POP x; PUSH x from x = 5, [2], 0): {}\n",
            if self.seeded_witness_confirmed { "confirmed" } else { "not reproduced" }
        ));
        for f in &self.failures {
            out.push_str(&render_record("FAIL", f));
        }
        for w in &self.witnesses {
            out.push_str(&render_record("WITNESS", w));
        }
        out.push_str(if self.passed() { "result: ok\n" } else { "result: FAILED\n" });
        out
    }
}

fn render_record(tag: &str, r: &CaseRecord) -> String {
    let case = r.case.map_or("seeded".to_string(), |i| format!("case {i}"));
    let mut out = format!("{tag} {} ({case}): {}\n  program: {}\n", r.check, r.details, r.program);
    for line in r.state.lines() {
        out.push_str(&format!("  state: {line}\n"));
    }
    out
}

fn record(check: &str, case: Option<u64>, program: &Term, state: &State, details: String, minimized: bool) -> CaseRecord {
    let mut vars = variables_of(program);
    vars.extend(state.support().cloned());
    CaseRecord {
        check: check.to_string(),
        case,
        program: program.to_string(),
        state: dump_state(state, &vars),
        details,
        minimized,
    }
}

type Check = fn(&Term, &State) -> Verdict;

/// Minimizes a failing case against its check.
pub fn minimize_failure(f: &Failure, check: Check) -> Failure {
    let (program, initial) = minimize(&f.program, &f.initial, |p, s| !check(p, s).is_pass());
    let details = match check(&program, &initial) {
        Verdict::Fail(g) => g.details,
        Verdict::Pass { .. } => unreachable!("minimized case still fails"),
    };
    Failure { program, initial, details, minimized: true }
}

struct CaseResult {
    index: u64,
    program: Term,
    strong: Verdict,
    weak: Verdict,
    agree: Verdict,
    correspondence: Option<Direction>,
    a_aborted: bool,
    r_broken: bool,
}

fn run_case(cfg: &GenConfig, index: u64) -> CaseResult {
    let (program, sigma) = corpus_case(cfg, index);
    let sigma0 = sigma.without_counters();
    let strong = check_strong_reversibility(&program, &sigma);
    let weak = check_weak_reversibility_a(&program, &sigma0);
    let agree = check_agreement_a_r(&program, &sigma0);
    let corr = check_failure_correspondence(&program, &sigma0);
    CaseResult {
        index,
        program,
        strong,
        weak,
        agree,
        correspondence: corr.as_ref().and_then(|c| c.direction_witness),
        a_aborted: corr.as_ref().is_some_and(|c| c.a_aborted),
        r_broken: corr.as_ref().is_some_and(|c| c.r_final_broken),
    }
}

/// Runs all four checks on `cases` generated cases. Results are merged in case
/// order, so the report is deterministic in `cfg`.
pub fn run_campaign(cfg: &GenConfig, cases: u64) -> CampaignReport {
    let results: Vec<CaseResult> = (0..cases).into_par_iter().map(|i| run_case(cfg, i)).collect();

    let mut report = CampaignReport {
        config: cfg.clone(),
        cases,
        strong_reversibility: Tally::default(),
        weak_reversibility_a: Tally::default(),
        agreement_a_r: Tally::default(),
        failure_correspondence: CorrespondenceTally::default(),
        seeded_witness_confirmed: false,
        failures: Vec::new(),
        witnesses: Vec::new(),
    };

    let (wp, ws) = seeded_witness();
    if let Some(c) = check_failure_correspondence(&wp, &ws) {
        report.seeded_witness_confirmed = c.direction_witness == Some(Direction::OnlyIf);
        if report.seeded_witness_confirmed {
            report.witnesses.push(record(
                "failure-correspondence",
                None,
                &wp,
                &ws,
                "only-if: A aborts, R ends with no broken variable".into(),
                false,
            ));
        }
    }

    let checks: [(&str, Check); 3] = [
        ("strong-reversibility", check_strong_reversibility),
        ("weak-reversibility-a", check_weak_reversibility_a),
        ("agreement-a-r", check_agreement_a_r),
    ];
    let mut generated_witnesses = 0;
    for r in results {
        report.strong_reversibility.add(&r.strong);
        report.weak_reversibility_a.add(&r.weak);
        report.agreement_a_r.add(&r.agree);
        for ((name, check), v) in checks.iter().zip([&r.strong, &r.weak, &r.agree]) {
            if let Verdict::Fail(f) = v {
                let m = minimize_failure(f, *check);
                report.failures.push(record(name, Some(r.index), &m.program, &m.initial, m.details, true));
            }
        }

        let fc = &mut report.failure_correspondence;
        fc.a_aborted += u64::from(r.a_aborted);
        fc.r_final_broken += u64::from(r.r_broken);
        match r.correspondence {
            Some(Direction::If) => {
                fc.if_witnesses += 1;
                let (_, sigma) = corpus_case(cfg, r.index);
                report.failures.push(record(
                    "failure-correspondence",
                    Some(r.index),
                    &r.program,
                    &sigma.without_counters(),
                    "if: R ends broken but A completed".into(),
                    false,
                ));
            }
            Some(Direction::OnlyIf) => {
                fc.only_if_witnesses += 1;
                if generated_witnesses < MAX_WITNESSES {
                    generated_witnesses += 1;
                    let (_, sigma) = corpus_case(cfg, r.index);
                    report.witnesses.push(record(
                        "failure-correspondence",
                        Some(r.index),
                        &r.program,
                        &sigma.without_counters(),
                        "only-if: A aborts, R ends with no broken variable".into(),
                        false,
                    ));
                }
            }
            None => {}
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_campaign() {
        let r = run_campaign(&GenConfig::default(), 0);
        assert!(r.passed());
        assert_eq!(r.strong_reversibility, Tally::default());
        assert!(r.seeded_witness_confirmed);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn small_campaign_is_deterministic() {
        let cfg = GenConfig { seed: 9, ..GenConfig::default() };
        let a = run_campaign(&cfg, 300);
        let b = run_campaign(&cfg, 300);
        assert_eq!(a, b);
        assert_eq!(a.render_text(), b.render_text());
        assert!(a.passed(), "{}", a.render_text());
        let t = a.strong_reversibility;
        assert_eq!(t.pass + t.vacuous + t.fail, 300);
    }

    #[test]
    fn corpus_cases_are_replayable() {
        let cfg = GenConfig::default();
        let first: Vec<_> = corpus(&cfg, 5).collect();
        for (i, case) in first.iter().enumerate() {
            assert_eq!(&corpus_case(&cfg, i as u64), case);
        }
    }

    #[test]
    fn minimize_failure_keeps_failing() {
        // a check that fails whenever the program pops
        fn pops(p: &Term, s: &State) -> Verdict {
            if p.to_string().contains("POP") {
                Verdict::Fail(Box::new(Failure {
                    program: p.clone(),
                    initial: s.clone(),
                    details: "pops".into(),
                    minimized: false,
                }))
            } else {
                Verdict::Pass { cases_run: 1, vacuous: 0 }
            }
        }
        let p = parse("INC x; FOR y { POP z; DEC x }").unwrap();
        let s = State::new().with("y", Cell::of(3, &[1], 1));
        let Verdict::Fail(f) = pops(&p, &s) else { panic!() };
        let m = minimize_failure(&f, pops);
        assert!(m.minimized);
        assert_eq!(m.program, parse("POP z").unwrap());
        assert_eq!(m.initial, State::new());
        assert!(!pops(&m.program, &m.initial).is_pass());
    }
}
