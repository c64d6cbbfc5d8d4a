//! Randomized and exhaustive checks of the algebraic identities and the
//! rewrite rules against the reference semantics.

pub mod axioms;
pub mod corpus;
pub mod gen;
pub mod oracle;
pub mod probe;
pub mod report;
pub mod rules;

pub use axioms::{check_bialgebra_axioms, check_hierarchy_axioms, check_polynomial_embedding};
pub use corpus::{check_normalization, CorpusOutcome};
pub use gen::{parse_strategy, Gen, TrialConfig};
pub use oracle::{apply, apply_word};
pub use rules::{check_rule, check_rules};
pub use probe::{probe_confluence, ProbeReport};
pub use report::{CheckResult, Failure, Report};
