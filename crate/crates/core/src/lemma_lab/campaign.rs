//! Seeded fuzz campaigns. Trial `t` draws from the ChaCha stream `t` of
//! the campaign seed, so results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    check_lemma_diagramme, check_lemma_equiv_divisibilite, check_lemma_pasinjectif, sample_diagram, DiagramInstance,
    Lemma, LemmaReport, OracleCache, Sampler,
};
use crate::abelian::random::{random_element, random_embedding, random_hom, random_torsion_group};
use crate::abelian::oracle::MAX_ORDER;
use crate::error::{Error, Result};
use crate::modmat::ring::divisors;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub lemma: Lemma,
    pub trials: u64,
    pub seed: u64,
    pub max_order: u64,
    pub n: u64,
    #[serde(default)]
    pub sampler: Sampler,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("n: must be at least 1".into()));
        }
        if self.max_order == 0 || self.max_order as u128 > MAX_ORDER {
            return Err(Error::Invalid(format!("max_order: must lie in 1..={MAX_ORDER}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: u64,
    /// Whether the sampler produced an instance.
    pub accepted: bool,
    pub applicable: bool,
    pub holds: bool,
    /// Exactness of the top row, for diagram trials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub trials: Vec<TrialOutcome>,
    pub accepted: u64,
    pub applicable: u64,
    pub violations: u64,
    /// Applicable instances per trial.
    pub yield_rate: f64,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub fn run_campaign(config: &CampaignConfig, cache: &OracleCache) -> Result<CampaignReport> {
    config.validate()?;
    let trials: Vec<TrialOutcome> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t, cache))
        .collect();
    let accepted = trials.iter().filter(|t| t.accepted).count() as u64;
    let applicable = trials.iter().filter(|t| t.applicable).count() as u64;
    let violations = trials.iter().filter(|t| !t.holds).count() as u64;
    Ok(CampaignReport {
        config: config.clone(),
        yield_rate: if config.trials == 0 {
            0.0
        } else {
            applicable as f64 / config.trials as f64
        },
        trials,
        accepted,
        applicable,
        violations,
    })
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(config: &CampaignConfig, trial: u64, cache: &OracleCache) -> TrialOutcome {
    let mut rng = trial_rng(config.seed, trial);
    let (n, max_order) = (config.n, config.max_order);
    let (report, exact) = match config.lemma {
        Lemma::SummandCriterion => {
            let b = random_torsion_group(max_order, n, &mut rng);
            let (_, f) = random_embedding(&b, &mut rng);
            (Some(check_lemma_equiv_divisibilite(&f, n, cache)), None)
        }
        Lemma::DiagramSummand => match sample_diagram(&mut rng, max_order, n, config.sampler) {
            Some(d) => {
                let report = check_lemma_diagramme(&d, cache);
                let recheck = recheck_diagram(&d, &report, cache);
                let exact = d.is_exact_at_b();
                let exact_ok = config.sampler != Sampler::S2 || exact;
                let report = if recheck && exact_ok {
                    report
                } else {
                    sampler_failure(report, &d)
                };
                (Some(report), Some(exact))
            }
            None => (None, None),
        },
        Lemma::NotSummand => {
            let a = random_torsion_group(max_order, n, &mut rng);
            let b = random_torsion_group(max_order, n, &mut rng);
            let f = random_hom(&a, &b, &mut rng);
            let m = *divisors(n).choose(&mut rng).expect("n >= 1");
            let p = random_element(&a, &mut rng);
            (Some(check_lemma_pasinjectif(&f, n, m, &p, cache)), None)
        }
    };
    match report {
        Some(r) => {
            let r = r.with_seed(config.seed);
            TrialOutcome {
                trial,
                accepted: true,
                applicable: r.applicable,
                holds: r.holds,
                exact,
                counterexample: r.counterexample,
            }
        }
        None => TrialOutcome {
            trial,
            accepted: false,
            applicable: false,
            holds: true,
            exact: None,
            counterexample: None,
        },
    }
}

/// Rebuilds the instance from its JSON form, which re-validates the maps
/// and commutativity, and checks the report comes out the same.
fn recheck_diagram(d: &DiagramInstance, report: &LemmaReport, cache: &OracleCache) -> bool {
    let Ok(text) = serde_json::to_string(d) else {
        return false;
    };
    let Ok(back) = serde_json::from_str::<DiagramInstance>(&text) else {
        return false;
    };
    report.applicable && check_lemma_diagramme(&back, cache) == *report
}

fn sampler_failure(mut report: LemmaReport, d: &DiagramInstance) -> LemmaReport {
    report.holds = false;
    report.counterexample = Some(serde_json::json!({
        "instance": { "diagram": d },
        "failed": ["sampler re-check"],
    }));
    report
}
