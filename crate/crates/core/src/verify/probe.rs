//! Confluence probe: normalize the same word under several strategies and
//! compare digests of the canonical results.

use super::gen::{Gen, TrialConfig};
use crate::opring::{normalize, NormalizeOptions, OperatorExpr};
use crate::syntax::json::expr_to_json;
use crate::syntax::render::word_text;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const PROBE_SCHEMA: &str = "rbhier/probe-report/v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyDigest {
    pub strategy: String,
    pub digest: String,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeTrial {
    pub trial: usize,
    pub word: String,
    pub digests: Vec<StrategyDigest>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub pass: usize,
    pub fail: usize,
    pub agree_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub schema: String,
    pub config: TrialConfig,
    pub results: Vec<ProbeTrial>,
    pub summary: ProbeSummary,
    /// Words whose strategies disagreed, ready to paste into `normalize`.
    pub disagreements: Vec<String>,
}

impl ProbeReport {
    pub fn all_agree(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn digest(e: &OperatorExpr) -> String {
    hex::encode(Sha256::digest(expr_to_json(e).as_bytes()))
}

fn probe_trial(cfg: &TrialConfig, t: usize) -> ProbeTrial {
    let mut g = Gen::new(cfg, 700, t);
    let n = g.axis();
    let w = g.word(n, cfg.max_word_len);
    let expr = OperatorExpr::word(w.clone());
    let digests: Vec<StrategyDigest> = cfg
        .strategies_for(t)
        .into_iter()
        .map(|strategy| {
            let name = strategy.name();
            let opts = NormalizeOptions { max_steps: cfg.budget, strategy, check_measure: true };
            match normalize(&expr, &opts) {
                Ok(nf) => StrategyDigest { strategy: name, digest: digest(&nf.expr), steps: nf.stats.steps },
                Err(e) => StrategyDigest { strategy: name, digest: format!("error: {e}"), steps: 0 },
            }
        })
        .collect();
    let agree = digests.windows(2).all(|p| p[0].digest == p[1].digest);
    ProbeTrial { trial: t, word: word_text(&w), digests, agree }
}

/// Runs `cfg.trials` random words under every configured strategy.
pub fn probe_confluence(cfg: &TrialConfig) -> ProbeReport {
    let results: Vec<ProbeTrial> = (0..cfg.trials).into_par_iter().map(|t| probe_trial(cfg, t)).collect();
    let pass = results.iter().filter(|r| r.agree).count();
    let fail = results.len() - pass;
    let agree_rate = if results.is_empty() { 1.0 } else { pass as f64 / results.len() as f64 };
    let disagreements = results.iter().filter(|r| !r.agree).map(|r| r.word.clone()).collect();
    ProbeReport {
        schema: PROBE_SCHEMA.into(),
        config: cfg.clone(),
        results,
        summary: ProbeSummary { pass, fail, agree_rate },
        disagreements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_probe() {
        let cfg = TrialConfig { trials: 0, ..Default::default() };
        let r = probe_confluence(&cfg);
        assert!(r.results.is_empty());
        assert_eq!(r.summary.agree_rate, 1.0);
    }

    #[test]
    fn deterministic_report() {
        let cfg = TrialConfig { trials: 20, seed: 9, ..Default::default() };
        assert_eq!(probe_confluence(&cfg).to_json(), probe_confluence(&cfg).to_json());
    }
}
