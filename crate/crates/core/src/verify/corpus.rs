//! End-to-end normalization checks on random words.

use super::gen::{Gen, TrialConfig};
use super::oracle::apply;
use super::report::{CheckResult, Failure};
use crate::opring::{is_normal_form, normalize, EngineError, NormalizeOptions, OperatorExpr, Strategy};
use crate::syntax::render::{expr_text, function_text, word_text};
use rayon::prelude::*;

const SUITE: &str = "normalize";
pub const FUNCTIONS_PER_WORD: usize = 3;

/// Outcome of the corpus: one result per property plus step statistics.
#[derive(Debug, Clone)]
pub struct CorpusOutcome {
    pub sound: CheckResult,
    pub shape: CheckResult,
    pub idempotent: CheckResult,
    pub measure: CheckResult,
    pub budget: CheckResult,
    pub total_steps: usize,
    pub max_steps: usize,
    pub per_rule: [usize; 9],
}

impl CorpusOutcome {
    pub fn results(&self) -> Vec<CheckResult> {
        vec![self.sound.clone(), self.shape.clone(), self.idempotent.clone(), self.measure.clone(), self.budget.clone()]
    }
}

struct Trial {
    sound: Result<(), Failure>,
    shape: Result<(), Failure>,
    idempotent: Result<(), Failure>,
    measure: Result<(), Failure>,
    budget: Result<(), Failure>,
    steps: usize,
    per_rule: [usize; 9],
}

fn fail(trial: usize, instance: &str, detail: String) -> Failure {
    Failure { trial, instance: instance.to_string(), function: String::new(), detail }
}

fn run_trial(cfg: &TrialConfig, t: usize) -> Trial {
    let mut g = Gen::new(cfg, 500, t);
    let n = g.axis();
    let word = g.word(n, cfg.max_word_len);
    let text = word_text(&word);
    let expr = OperatorExpr::word(word.clone());
    let opts = NormalizeOptions { max_steps: cfg.budget, strategy: Strategy::Priority, check_measure: true };
    let skipped = |why: &str| Err(fail(t, &text, format!("not reached: {why}")));
    let nf = match normalize(&expr, &opts) {
        Ok(nf) => nf,
        Err(e) => {
            let (measure, budget) = match &e {
                EngineError::BudgetExhausted { .. } => (Ok(()), Err(fail(t, &text, e.to_string()))),
                EngineError::MeasureNotDecreasing { .. } => (Err(fail(t, &text, e.to_string())), Ok(())),
                EngineError::MalformedRedex { .. } => (Err(fail(t, &text, e.to_string())), Ok(())),
            };
            return Trial {
                sound: skipped("normalization failed"),
                shape: skipped("normalization failed"),
                idempotent: skipped("normalization failed"),
                measure,
                budget,
                steps: 0,
                per_rule: [0; 9],
            };
        }
    };
    let mut sound = Ok(());
    for _ in 0..FUNCTIONS_PER_WORD {
        let f = g.function(n);
        let (l, r) = (apply(&expr, &f), apply(&nf.expr, &f));
        if l != r {
            sound = Err(Failure {
                trial: t,
                instance: format!("{text} -> {}", expr_text(&nf.expr)),
                function: function_text(&f),
                detail: format!("{} != {}", function_text(&l), function_text(&r)),
            });
            break;
        }
    }
    let shape = match nf.expr.terms().keys().find(|w| is_normal_form(w).is_none()) {
        None => Ok(()),
        Some(w) => Err(fail(t, &text, format!("not a normal monomial: {}", word_text(w)))),
    };
    let idempotent = match normalize(&nf.expr, &opts) {
        Ok(again) if again.expr == nf.expr && again.stats.steps == 0 => Ok(()),
        Ok(again) => Err(fail(t, &text, format!("renormalized to {}", expr_text(&again.expr)))),
        Err(e) => Err(fail(t, &text, e.to_string())),
    };
    Trial { sound, shape, idempotent, measure: Ok(()), budget: Ok(()), steps: nf.stats.steps, per_rule: nf.stats.per_rule }
}

/// Normalizes `cfg.trials` random words with the default strategy.
pub fn check_normalization(cfg: &TrialConfig) -> CorpusOutcome {
    let trials: Vec<Trial> = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect();
    let mut per_rule = [0; 9];
    for tr in &trials {
        for (acc, k) in per_rule.iter_mut().zip(tr.per_rule) {
            *acc += k;
        }
    }
    let total_steps = trials.iter().map(|t| t.steps).sum();
    let max_steps = trials.iter().map(|t| t.steps).max().unwrap_or(0);
    let mut sound = Vec::new();
    let mut shape = Vec::new();
    let mut idempotent = Vec::new();
    let mut measure = Vec::new();
    let mut budget = Vec::new();
    for tr in trials {
        sound.push(tr.sound);
        shape.push(tr.shape);
        idempotent.push(tr.idempotent);
        measure.push(tr.measure);
        budget.push(tr.budget);
    }
    CorpusOutcome {
        sound: CheckResult::from_outcomes(SUITE, "sound", sound),
        shape: CheckResult::from_outcomes(SUITE, "normal-shape", shape),
        idempotent: CheckResult::from_outcomes(SUITE, "idempotent", idempotent),
        measure: CheckResult::from_outcomes(SUITE, "measure-decreasing", measure),
        budget: CheckResult::from_outcomes(SUITE, "within-budget", budget),
        total_steps,
        max_steps,
        per_rule,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_corpus() {
        let cfg = TrialConfig { trials: 30, ..Default::default() };
        let out = check_normalization(&cfg);
        for r in out.results() {
            assert!(r.ok(), "{}: {:#?}", r.name, r.failures.first());
        }
    }
}
