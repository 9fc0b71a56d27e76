//! Random generation, property checks and counterexample minimization.

pub mod campaign;
pub mod checks;
pub mod gen;
pub mod shrink;

pub use campaign::{corpus, corpus_case, run_campaign, seeded_witness, CampaignReport, Tally};
pub use checks::{
    check_agreement_a_r, check_failure_correspondence, check_strong_reversibility,
    check_weak_reversibility_a, collisions, enumerate_cells, exhaustive_pop_push_inverse,
    Correspondence, Direction, Failure, OracleBounds, OracleReport, Verdict,
};
pub use gen::{gen_state, gen_term, pool_var, ConfigError, GenConfig, Generator, Weights};
pub use shrink::minimize;
