use std::sync::Arc;

use h1lab::abelian::oracle::{SummandOracle, MAX_ORDER};
use h1lab::abelian::{is_direct_summand, preserves_n_divisibility, FinAbGroup, GroupElement, Subgroup};
use h1lab::cohomology::{h1, h1_and_h1_cyc, GroupAction};
use h1lab::lemma_lab::sweep::{sweep_homs, sweep_subgroups};
use h1lab::lemma_lab::{run_campaign, CampaignConfig, OracleCache};
use h1lab::matgroup::{build_g2, build_g3, build_h2, build_n};
use h1lab::matgroup::{GModule, GroupSpec, MatGroup};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{ReportBuilder, RunReport};
use crate::reproduce::{cmd_reproduce, ReproduceOptions, MAX_SAFE_PRIME};
use crate::CliError;

/// Parses JSON, naming the offending field on failure.
pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            CliError::Input(format!("{what}: {}", e.inner()))
        } else {
            CliError::Input(format!("{what}: field `{path}`: {}", e.inner()))
        }
    })
}

/// A matrix group given by a JSON spec or by a family keyword.
#[derive(Clone, Debug)]
pub enum GroupInput {
    Spec(GroupSpec),
    Family { name: String, p: u64 },
}

impl GroupInput {
    /// `H2`, `G2`, `N` or `G3` (any case) with the prime; anything else is
    /// read as a JSON group spec.
    pub fn from_arg(arg: &str, text: Option<&str>, p: Option<u64>) -> Result<GroupInput, CliError> {
        let name = arg.to_ascii_uppercase();
        if ["H2", "G2", "N", "G3"].contains(&name.as_str()) {
            let p = p.ok_or_else(|| CliError::Input(format!("p: required with the {name} keyword")))?;
            return Ok(GroupInput::Family { name, p });
        }
        let text = text.ok_or_else(|| CliError::Input(format!("group: cannot read {arg}")))?;
        Ok(GroupInput::Spec(parse(text, "group")?))
    }

    fn describe(&self) -> Value {
        match self {
            GroupInput::Spec(s) => serde_json::to_value(s).expect("spec serializes"),
            GroupInput::Family { name, p } => json!({ "family": name, "p": p }),
        }
    }

    fn build(&self, cap: usize, allow_large: bool) -> Result<MatGroup, CliError> {
        match self {
            GroupInput::Spec(s) => Ok(s.build(cap)?),
            GroupInput::Family { name, p } => {
                let p = *p;
                h1lab::matgroup::check_prime(p).map_err(|e| CliError::Input(format!("p: {e}")))?;
                if p > MAX_SAFE_PRIME && !allow_large {
                    return Err(CliError::Input(format!("p: {p} exceeds the resource guard p <= {MAX_SAFE_PRIME}")));
                }
                Ok(match name.as_str() {
                    "H2" => build_h2(p)?,
                    "G2" => build_g2(p)?,
                    "N" => build_n(p)?,
                    _ => build_g3(p, cap)?,
                })
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct H1Options {
    pub cyc: bool,
    pub cap: usize,
    pub allow_large: bool,
    pub timings: bool,
}

pub fn cmd_h1(group: &GroupInput, module: Option<&GModule>, opts: &H1Options) -> Result<RunReport, CliError> {
    let command = json!({
        "command": "h1",
        "group": group.describe(),
        "module": module,
        "cyc": opts.cyc,
        "cap": opts.cap,
    });
    let mut rb = ReportBuilder::new(command, opts.timings);
    let g = Arc::new(rb.timed("closure", || group.build(opts.cap, opts.allow_large))?);
    let action = match module {
        Some(m) => GroupAction::new(g.clone(), m.clone()).map_err(|e| CliError::Input(format!("module: {e}")))?,
        None => GroupAction::natural(g.clone()),
    };
    let mut details = json!({
        "group": { "order": g.order(), "modulus": g.modulus(), "dim": g.dim() },
        "module": action.module(),
    });
    if opts.cyc {
        let (_, full, cyc) = rb.timed("cohomology", || h1_and_h1_cyc(&action))?;
        details["h1_invariant_factors"] = json!(full.factors());
        details["h1cyc_invariant_factors"] = json!(cyc.factors());
        details["witness_cocycles"] = json!(full.representatives());
        details["h1cyc_witness_cocycles"] = json!(cyc.representatives());
    } else {
        let full = rb.timed("cohomology", || h1(&action))?;
        details["h1_invariant_factors"] = json!(full.factors());
        details["witness_cocycles"] = json!(full.representatives());
    }
    rb.check("first cohomology computed", true, details);
    Ok(rb.finish())
}

/// Subgroup input: generator coordinates in the ambient group.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupInput {
    pub generators: Vec<GroupElement>,
}

pub fn cmd_summand(b: &FinAbGroup, sub: &SubgroupInput, timings: bool) -> Result<RunReport, CliError> {
    let s = Subgroup::new(b.clone(), sub.generators.clone())
        .map_err(|e| CliError::Input(format!("subgroup: field `generators`: {e}")))?;
    let command = json!({ "command": "summand", "group": b, "subgroup": sub.generators });
    let mut rb = ReportBuilder::new(command, timings);
    let complement = rb.timed("complement", || is_direct_summand(b, &s))?;
    let (_, inclusion) = s.abstract_form();
    let verdict = preserves_n_divisibility(&inclusion, b.exponent().max(1));
    let oracle = if b.order() <= MAX_ORDER {
        Some(rb.timed("lattice oracle", || SummandOracle::new(b).map(|o| o.complement(&s).is_some()))?)
    } else {
        None
    };
    let summand = complement.is_some();
    rb.check(
        if summand { "a direct summand" } else { "not a summand" },
        true,
        json!({
            "is_summand": summand,
            "subgroup_order": s.order().to_string(),
            "complement": complement.map(|c| c.generators),
            "divisibility_counterexample": verdict.counterexample,
        }),
    );
    if let Some(o) = oracle {
        rb.check("subgroup-lattice oracle agrees", o == summand, json!({ "oracle_is_summand": o }));
    }
    Ok(rb.finish())
}

pub fn cmd_fuzz(config: &CampaignConfig, timings: bool) -> Result<RunReport, CliError> {
    config.validate().map_err(|e| CliError::Input(format!("config: {e}")))?;
    let mut rb = ReportBuilder::new(json!({ "command": "fuzz", "config": config }), timings);
    let cache = OracleCache::new();
    let report = rb.timed("campaign", || run_campaign(config, &cache))?;
    rb.check(
        "no hypothesis-satisfying instance violates the conclusion",
        report.passed(),
        serde_json::to_value(&report).expect("report serializes"),
    );
    Ok(rb.finish())
}

/// Beyond this the homomorphism count explodes (`2^36` maps of `(Z/2)^6`).
pub const MAX_SWEEP_ORDER: u64 = 32;

pub fn cmd_sweep(max_order: u64, timings: bool) -> Result<RunReport, CliError> {
    if max_order == 0 || max_order > MAX_SWEEP_ORDER {
        return Err(CliError::Input(format!("max_order: must lie in 1..={MAX_SWEEP_ORDER}")));
    }
    let mut rb = ReportBuilder::new(json!({ "command": "sweep", "max_order": max_order }), timings);
    let cache = OracleCache::new();
    let subgroups = rb.timed("subgroups", || sweep_subgroups(max_order, &cache))?;
    rb.check(
        "every subgroup: summand iff divisibility preserved",
        subgroups.passed(),
        serde_json::to_value(&subgroups).expect("serializes"),
    );
    let homs = rb.timed("homomorphisms", || sweep_homs(max_order, &cache))?;
    rb.check(
        "every homomorphism: embeddings agree, (i)+(ii) force a non-summand image",
        homs.passed(),
        serde_json::to_value(&homs).expect("serializes"),
    );
    Ok(rb.finish())
}

/// The reproduction run with per-stage wall-clock times.
pub fn cmd_bench(p: u64, cap: usize, allow_large: bool) -> Result<RunReport, CliError> {
    cmd_reproduce(ReproduceOptions {
        p,
        cap,
        allow_large,
        timings: true,
    })
}
