//! Executable checks of the divisibility lemmas on concrete finite
//! instances. Each check evaluates the hypotheses literally, and only when
//! all of them hold asserts the conclusion against the subgroup-lattice
//! oracle, so that a vacuous instance is distinguishable from a false one.

pub mod campaign;
pub mod sampler;
pub mod sweep;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abelian::oracle::{SummandOracle, MAX_ORDER};
use crate::abelian::{
    is_direct_summand, is_divisible, preserves_divisibility, preserves_n_divisibility, quotient,
    torsion_subgroup, AbHom, FinAbGroup, GroupElement, Subgroup,
};
use crate::error::{Error, Result};

pub use campaign::{run_campaign, CampaignConfig, CampaignReport, TrialOutcome};
pub use sampler::{sample_diagram, Sampler};

/// Which lemma a report or campaign is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lemma {
    /// Embeddings of torsion groups: summand iff divisibility is preserved.
    #[serde(rename = "2.2")]
    SummandCriterion,
    /// The commutative square forcing `β(B)` to be a summand.
    #[serde(rename = "2.3")]
    DiagramSummand,
    /// Conditions forcing `f(A)` not to be a summand.
    #[serde(rename = "3.1")]
    NotSummand,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

fn check(name: &str, holds: bool) -> Check {
    Check {
        name: name.to_string(),
        holds,
    }
}

fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}

/// Outcome of one lemma check. `observations` are evaluated statements,
/// `assertions` the implications the lemma guarantees; `holds` is false
/// exactly when an assertion failed, and then `counterexample` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub hypotheses: Vec<Check>,
    pub applicable: bool,
    pub observations: Vec<Check>,
    pub assertions: Vec<Check>,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl LemmaReport {
    fn not_applicable(lemma: Lemma, hypotheses: Vec<Check>) -> LemmaReport {
        LemmaReport {
            lemma,
            hypotheses,
            applicable: false,
            observations: vec![],
            assertions: vec![],
            holds: true,
            counterexample: None,
            seed: None,
        }
    }

    fn finish(lemma: Lemma, hypotheses: Vec<Check>, observations: Vec<Check>, assertions: Vec<Check>, instance: Value) -> LemmaReport {
        let holds = all_hold(&assertions);
        let counterexample = (!holds).then(|| {
            json!({
                "instance": instance,
                "failed": assertions.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect::<Vec<_>>(),
            })
        });
        LemmaReport {
            lemma,
            hypotheses,
            applicable: true,
            observations,
            assertions,
            holds,
            counterexample,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> LemmaReport {
        self.seed = Some(seed);
        if let Some(Value::Object(map)) = self.counterexample.as_mut() {
            map.insert("seed".into(), json!(seed));
        }
        self
    }

    pub fn observation(&self, name: &str) -> Option<bool> {
        self.observations.iter().find(|c| c.name == name).map(|c| c.holds)
    }

    pub fn hypothesis(&self, name: &str) -> Option<bool> {
        self.hypotheses.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

/// Subgroup lattices shared across threads, keyed by group.
#[derive(Default)]
pub struct OracleCache {
    oracles: Mutex<HashMap<FinAbGroup, Arc<SummandOracle>>>,
}

impl OracleCache {
    pub fn new() -> OracleCache {
        OracleCache::default()
    }

    pub fn get(&self, b: &FinAbGroup) -> Result<Arc<SummandOracle>> {
        if let Some(o) = self.oracles.lock().expect("oracle cache").get(b) {
            return Ok(o.clone());
        }
        let built = Arc::new(SummandOracle::new(b)?);
        Ok(self
            .oracles
            .lock()
            .expect("oracle cache")
            .entry(b.clone())
            .or_insert(built)
            .clone())
    }

    /// Whether `s` is a direct summand of its ambient group, by lattice
    /// search when the group is small enough and otherwise by building and
    /// verifying a complement. The flag says whether the lattice was used.
    pub fn is_summand(&self, s: &Subgroup) -> Result<(bool, bool)> {
        if s.ambient.order() <= MAX_ORDER {
            let oracle = self.get(&s.ambient)?;
            Ok((oracle.complement(s).is_some(), true))
        } else {
            Ok((is_direct_summand(&s.ambient, s)?.is_some(), false))
        }
    }
}

const SUMMAND: &str = "f(A) is a direct summand of B";
const PRESERVES: &str = "f preserves divisibility";
const PRESERVES_N: &str = "f preserves n-divisibility";

/// Embedding of `n`-torsion groups: summand, divisibility preservation
/// and `n`-divisibility preservation must agree.
pub fn check_lemma_equiv_divisibilite(f: &AbHom, n: u64, cache: &OracleCache) -> LemmaReport {
    let hypotheses = vec![
        check("n >= 1", n >= 1),
        check("f is injective", f.is_injective()),
        check("A is n-torsion", n >= 1 && f.domain().is_n_torsion(n)),
        check("B is n-torsion", n >= 1 && f.codomain().is_n_torsion(n)),
    ];
    if !all_hold(&hypotheses) {
        return LemmaReport::not_applicable(Lemma::SummandCriterion, hypotheses);
    }
    let (summand, by_lattice) = match cache.is_summand(&f.image()) {
        Ok(v) => v,
        Err(e) => return oracle_failure(Lemma::SummandCriterion, hypotheses, e),
    };
    let all = preserves_divisibility(f);
    let at_n = preserves_n_divisibility(f, n);
    let observations = vec![
        check(SUMMAND, summand),
        check(PRESERVES, all.preserves),
        check(PRESERVES_N, at_n.preserves),
        check("summand decided by subgroup lattice", by_lattice),
    ];
    let assertions = vec![
        check("summand iff preserves divisibility", summand == all.preserves),
        check("preserves divisibility iff preserves n-divisibility", all.preserves == at_n.preserves),
        check("summand iff preserves n-divisibility", summand == at_n.preserves),
    ];
    let instance = json!({
        "f": f,
        "n": n,
        "divisibility_counterexample": all.counterexample,
        "n_divisibility_counterexample": at_n.counterexample,
    });
    LemmaReport::finish(Lemma::SummandCriterion, hypotheses, observations, assertions, instance)
}

fn oracle_failure(lemma: Lemma, hypotheses: Vec<Check>, e: Error) -> LemmaReport {
    let assertions = vec![check("oracle available", false)];
    LemmaReport::finish(lemma, hypotheses, vec![], assertions, json!({ "error": e.to_string() }))
}

/// `A -f-> B -g-> C` on top, `B' -g'-> C'` below, joined by `β` and `γ`,
/// with `g' ∘ β = γ ∘ g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramLiteral", into = "DiagramLiteral")]
pub struct DiagramInstance {
    n: u64,
    f: AbHom,
    g: AbHom,
    beta: AbHom,
    gamma: AbHom,
    g_prime: AbHom,
}

#[derive(Serialize, Deserialize)]
struct DiagramLiteral {
    n: u64,
    f: AbHom,
    g: AbHom,
    beta: AbHom,
    gamma: AbHom,
    g_prime: AbHom,
}

impl TryFrom<DiagramLiteral> for DiagramInstance {
    type Error = Error;

    fn try_from(d: DiagramLiteral) -> Result<DiagramInstance> {
        DiagramInstance::new(d.n, d.f, d.g, d.beta, d.gamma, d.g_prime)
    }
}

impl From<DiagramInstance> for DiagramLiteral {
    fn from(d: DiagramInstance) -> DiagramLiteral {
        DiagramLiteral {
            n: d.n,
            f: d.f,
            g: d.g,
            beta: d.beta,
            gamma: d.gamma,
            g_prime: d.g_prime,
        }
    }
}

impl DiagramInstance {
    /// Rejects maps that do not compose as drawn or a square that does
    /// not commute.
    pub fn new(n: u64, f: AbHom, g: AbHom, beta: AbHom, gamma: AbHom, g_prime: AbHom) -> Result<DiagramInstance> {
        let fits = f.codomain() == g.domain()
            && f.codomain() == beta.domain()
            && g.codomain() == gamma.domain()
            && beta.codomain() == g_prime.domain()
            && gamma.codomain() == g_prime.codomain();
        if !fits {
            return Err(Error::DimensionMismatch("diagram maps do not compose".into()));
        }
        if n == 0 {
            return Err(Error::Invalid("torsion bound n must be at least 1".into()));
        }
        if beta.then(&g_prime)? != g.then(&gamma)? {
            return Err(Error::Invalid("diagram does not commute".into()));
        }
        Ok(DiagramInstance {
            n,
            f,
            g,
            beta,
            gamma,
            g_prime,
        })
    }

    /// Every group trivial, every map zero.
    pub fn trivial(n: u64) -> DiagramInstance {
        let t = FinAbGroup::trivial();
        let z = AbHom::zero(&t, &t);
        DiagramInstance::new(n.max(1), z.clone(), z.clone(), z.clone(), z.clone(), z).expect("trivial square")
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn f(&self) -> &AbHom {
        &self.f
    }

    pub fn g(&self) -> &AbHom {
        &self.g
    }

    pub fn beta(&self) -> &AbHom {
        &self.beta
    }

    pub fn gamma(&self) -> &AbHom {
        &self.gamma
    }

    pub fn g_prime(&self) -> &AbHom {
        &self.g_prime
    }

    pub fn a(&self) -> &FinAbGroup {
        self.f.domain()
    }

    pub fn b(&self) -> &FinAbGroup {
        self.f.codomain()
    }

    pub fn c(&self) -> &FinAbGroup {
        self.g.codomain()
    }

    pub fn b_prime(&self) -> &FinAbGroup {
        self.beta.codomain()
    }

    pub fn c_prime(&self) -> &FinAbGroup {
        self.gamma.codomain()
    }

    /// Whether the top row is exact at `B`.
    pub fn is_exact_at_b(&self) -> bool {
        self.g.kernel().same_set(&self.f.image())
    }
}

pub const DIAGRAM_HYPOTHESES: [&str; 6] = [
    "(1) B and B' are n-torsion",
    "(2) beta is an embedding",
    "(3) gamma preserves n-divisibility",
    "(4) C[n] is contained in im g",
    "(5) ker g is contained in im f",
    "(6) beta.f preserves n-divisibility",
];

pub const BETA_SUMMAND: &str = "beta(B) is a direct summand of B'";
pub const BETA_PRESERVES_N: &str = "beta preserves n-divisibility";

/// The six hypotheses, in order.
pub fn diagram_hypotheses(d: &DiagramInstance) -> Vec<Check> {
    let n = d.n;
    let beta_f = d.f.then(&d.beta).expect("validated composable");
    let values = [
        d.b().is_n_torsion(n) && d.b_prime().is_n_torsion(n),
        d.beta.is_injective(),
        preserves_n_divisibility(&d.gamma, n).preserves,
        torsion_subgroup(d.c(), n).is_subgroup_of(&d.g.image()),
        d.g.kernel().is_subgroup_of(&d.f.image()),
        preserves_n_divisibility(&beta_f, n).preserves,
    ];
    DIAGRAM_HYPOTHESES
        .iter()
        .zip(values)
        .map(|(name, v)| check(name, v))
        .collect()
}

/// When all six hypotheses hold, `β(B)` must be a summand of `B'` (by the
/// lattice oracle when `|B'| <= 64`) and `β` must preserve `n`-divisibility.
pub fn check_lemma_diagramme(d: &DiagramInstance, cache: &OracleCache) -> LemmaReport {
    let hypotheses = diagram_hypotheses(d);
    if !all_hold(&hypotheses) {
        return LemmaReport::not_applicable(Lemma::DiagramSummand, hypotheses);
    }
    let (summand, by_lattice) = match cache.is_summand(&d.beta.image()) {
        Ok(v) => v,
        Err(e) => return oracle_failure(Lemma::DiagramSummand, hypotheses, e),
    };
    let beta_n = preserves_n_divisibility(&d.beta, d.n);
    let observations = vec![
        check(BETA_SUMMAND, summand),
        check(BETA_PRESERVES_N, beta_n.preserves),
        check("summand decided by subgroup lattice", by_lattice),
    ];
    let assertions = vec![check(BETA_SUMMAND, summand), check(BETA_PRESERVES_N, beta_n.preserves)];
    let instance = json!({ "diagram": d, "beta_counterexample": beta_n.counterexample });
    LemmaReport::finish(Lemma::DiagramSummand, hypotheses, observations, assertions, instance)
}

pub const IMAGE_SUMMAND: &str = "f(A) is a direct summand of B";

/// With `m | n`, (i) `P` not `m`-divisible but `f(P)` is, and (ii) every
/// element of `ker f` `m`-divisible, the image must not be a summand; the
/// induced embedding `A/ker f -> B` must also fail to preserve
/// `m`-divisibility at the image of `P`.
pub fn check_lemma_pasinjectif(f: &AbHom, n: u64, m: u64, p: &GroupElement, cache: &OracleCache) -> LemmaReport {
    let (a, b) = (f.domain(), f.codomain());
    let p_ok = a.contains(p);
    let cond_i = p_ok
        && m >= 1
        && is_divisible(a, p, m).is_none()
        && f.apply(p).is_ok_and(|fp| is_divisible(b, &fp, m).is_some());
    let kernel = f.kernel();
    let cond_ii = m >= 1 && kernel.generators.iter().all(|k| is_divisible(a, k, m).is_some());
    let hypotheses = vec![
        check("A is n-torsion", n >= 1 && a.is_n_torsion(n)),
        check("B is n-torsion", n >= 1 && b.is_n_torsion(n)),
        check("m divides n", m >= 1 && n % m == 0),
        check("P lies in A", p_ok),
        check("(i) P is not m-divisible but f(P) is", cond_i),
        check("(ii) every element of ker f is m-divisible", cond_ii),
    ];
    if !all_hold(&hypotheses) {
        return LemmaReport::not_applicable(Lemma::NotSummand, hypotheses);
    }
    let (summand, by_lattice) = match cache.is_summand(&f.image()) {
        Ok(v) => v,
        Err(e) => return oracle_failure(Lemma::NotSummand, hypotheses, e),
    };
    let mechanism = induced_embedding(f, &kernel).map(|(qa, proj, fbar)| {
        let pbar = proj.apply(p).expect("P lies in A");
        (
            fbar.is_injective(),
            is_divisible(&qa, &pbar, m).is_none(),
            fbar.divisibility_witness(m).is_some(),
        )
    });
    let (injective, pbar_not_div, fbar_fails) = mechanism.unwrap_or((false, false, false));
    let observations = vec![
        check(IMAGE_SUMMAND, summand),
        check("induced map A/ker f -> B is injective", injective),
        check("image of P is not m-divisible in A/ker f", pbar_not_div),
        check("induced map fails to preserve m-divisibility", fbar_fails),
        check("summand decided by subgroup lattice", by_lattice),
    ];
    let assertions = vec![
        check("f(A) is not a direct summand of B", !summand),
        check("induced map A/ker f -> B is injective", injective),
        check("image of P is not m-divisible in A/ker f", pbar_not_div),
        check("induced map fails to preserve m-divisibility", fbar_fails),
    ];
    let instance = json!({ "f": f, "n": n, "m": m, "P": p });
    LemmaReport::finish(Lemma::NotSummand, hypotheses, observations, assertions, instance)
}

/// `A/K` with its projection and the map `A/K -> B` induced by `f`.
fn induced_embedding(f: &AbHom, kernel: &Subgroup) -> Result<(FinAbGroup, AbHom, AbHom)> {
    let (qa, proj) = quotient(f.domain(), kernel)?;
    let images = (0..qa.rank())
        .map(|i| {
            let lift = proj
                .preimage(&qa.generator(i))?
                .ok_or_else(|| Error::Invalid("projection is not surjective".into()))?;
            f.apply(&lift)
        })
        .collect::<Result<Vec<_>>>()?;
    let fbar = AbHom::new(qa.clone(), f.codomain().clone(), images)?;
    Ok((qa, proj, fbar))
}
