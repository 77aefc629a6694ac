//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use h1lab::abelian::{AbHom, FinAbGroup, GroupElement};
use h1lab::cohomology::oracle::{expand_to_tables, pairwise_z1};
use h1lab::cohomology::{cocycle_space, cyclic_h1, cyclic_h1_action, h1, GroupAction};
use h1lab::lemma_lab::sweep::{sweep_homs, sweep_subgroups, HomSweep};
use h1lab::lemma_lab::{check_lemma_pasinjectif, CampaignConfig, CampaignReport, Lemma, OracleCache, Sampler};
use h1lab::matgroup::{build_g2, build_g3, build_h2, build_n, closure, h2_element, MatGroup, DEFAULT_CAP};
use h1lab::modmat::ZModMatrix;
use h1lab_cli::commands::cmd_fuzz;
use h1lab_cli::report::{RunReport, Status};
use h1lab_cli::reproduce::{self, cmd_reproduce, ReproduceOptions};

const SEED: u64 = 20240917;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn cyclic(m: u64, rows: &[&[i64]]) -> GroupAction {
    let g = ZModMatrix::from_rows(m, rows).unwrap();
    GroupAction::natural(Arc::new(closure(m, g.rows(), &[g], 256).unwrap()))
}

fn corpus() -> Vec<(String, GroupAction)> {
    let mut out = vec![
        ("-1 on Z/4".to_string(), cyclic(4, &[&[3]])),
        ("3 on Z/8".into(), cyclic(8, &[&[3]])),
        ("5 on Z/8".into(), cyclic(8, &[&[5]])),
        ("2 on Z/9".into(), cyclic(9, &[&[2]])),
        ("4 on Z/9".into(), cyclic(9, &[&[4]])),
        ("7 on Z/25".into(), cyclic(25, &[&[7]])),
        ("rotation on (Z/4)^2".into(), cyclic(4, &[&[0, 3], &[1, 0]])),
        ("unipotent on (Z/8)^2".into(), cyclic(8, &[&[1, 1], &[0, 1]])),
        ("g on (Z/25)^2".into(), cyclic(25, &[&[1, -3], &[1, -2]])),
        (
            "h on (Z/25)^2".into(),
            GroupAction::natural(Arc::new(closure(25, 2, &[h2_element(5, 1, 2).unwrap()], 256).unwrap())),
        ),
    ];
    out.push(("G2 at p=2".into(), GroupAction::natural(Arc::new(build_g2(2).unwrap()))));
    out.push(("N at p=2".into(), GroupAction::natural(Arc::new(build_n(2).unwrap()))));
    out.push(("G3 at p=2".into(), GroupAction::natural(Arc::new(build_g3(2, DEFAULT_CAP).unwrap()))));
    out
}

fn config(lemma: Lemma, trials: u64, max_order: u64, n: u64, sampler: Sampler) -> CampaignConfig {
    CampaignConfig {
        lemma,
        trials,
        seed: SEED,
        max_order,
        n,
        sampler,
    }
}

fn campaign(report: &RunReport) -> CampaignReport {
    serde_json::from_value(report.steps[0].details.clone()).unwrap()
}

fn criterion_1(r5: &RunReport, elapsed: Duration) -> Outcome {
    let claims = [
        reproduce::UNIPOTENT,
        reproduce::NORM,
        reproduce::CYCLIC_H,
        reproduce::CYCLIC_G2,
        reproduce::G2_EQUAL,
        reproduce::N_VANISH,
        reproduce::INFLATION,
        reproduce::FIXED,
    ];
    let mut failed = Vec::new();
    for c in claims {
        if r5.step(c).map(|s| s.status) != Some(Status::Pass) {
            failed.push(c);
        }
    }
    let g2_checked = r5.step(reproduce::CYCLIC_G2).map(|s| s.details["elements_checked"].clone());
    let covered = g2_checked == Some(serde_json::json!(75));
    let pass = failed.is_empty() && covered && r5.overall_pass && elapsed <= Duration::from_secs(300);
    let h1 = r5
        .step(reproduce::G2_EQUAL)
        .map(|s| s.details["h1cyc_invariant_factors"].to_string())
        .unwrap_or_default();
    outcome(
        pass,
        format!("p=5 steps (a)-(h) pass={}, H1_cyc(G2)={h1}, 75 elements of G2={covered}, {}", failed.is_empty(), secs(elapsed)),
    )
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for p in [2u64, 5] {
        let h2 = build_h2(p).unwrap();
        let g2 = build_g2(p).unwrap();
        let n = build_n(p).unwrap();
        let t = Instant::now();
        let g3 = build_g3(p, DEFAULT_CAP).unwrap();
        let g3_time = t.elapsed();
        // independent closure from G2 lifts and N
        let lifts: Vec<ZModMatrix> = g2
            .generators()
            .iter()
            .chain(n.generators())
            .map(|g| g.lift_to(p * p * p).unwrap_or_else(|_| g.clone()))
            .collect();
        let direct: MatGroup = closure(p * p * p, 2, &lifts, DEFAULT_CAP).unwrap();
        let p2 = (p * p) as usize;
        let orders = [h2.order(), g2.order(), n.order(), g3.order()];
        let formula = [p2, 3 * p2, p2 * p2, g2.order() * n.order()];
        let ok = orders == formula && formula[3] == 3 * p2 * p2 * p2 && direct.order() == g3.order();
        let fast = p != 5 || g3_time <= Duration::from_secs(60);
        pass &= ok && fast;
        notes.push(format!("p={p} orders {orders:?} closure {} G3 in {}", direct.order(), secs(g3_time)));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_3_and_4() -> (Outcome, Outcome) {
    let mut z1_ok = 0;
    let mut cyclic_ok = 0;
    let mut cyclic_cases = 0;
    let mut failures = Vec::new();
    let mut count_cases = 0;
    let mut count_failures = Vec::new();
    let mut cases = corpus();
    for p in [5u64] {
        cases.push((format!("G2 at p={p}"), GroupAction::natural(Arc::new(build_g2(p).unwrap()))));
        cases.push((format!("N at p={p}"), GroupAction::natural(Arc::new(build_n(p).unwrap()))));
        cases.push((format!("G3 at p={p}"), GroupAction::natural(Arc::new(build_g3(p, DEFAULT_CAP).unwrap()))));
    }
    let in_corpus = corpus().len();
    for (i, (name, a)) in cases.iter().enumerate() {
        let s = cocycle_space(a).unwrap();
        let h = h1(a).unwrap();
        count_cases += 1;
        if s.z1.order() != s.b1.order() * h.order() {
            count_failures.push(name.clone());
        }
        if i >= in_corpus {
            continue;
        }
        if expand_to_tables(a, &s.z1).unwrap() == pairwise_z1(a).unwrap() {
            z1_ok += 1;
        } else {
            failures.push(format!("Z1 of {name}"));
        }
        if a.group().ngens() == 1 {
            cyclic_cases += 1;
            let c = cyclic_h1_action(a).unwrap();
            if c.cocycles() == h.cocycles() && c.coboundaries() == h.coboundaries() && c.factors() == h.factors() {
                cyclic_ok += 1;
            } else {
                failures.push(format!("cyclic formula on {name}"));
            }
        } else {
            // every cyclic subgroup of the larger groups
            for x in a.group().elements() {
                let sub = GroupAction::natural(Arc::new(closure(a.modulus(), a.rank(), &[x.clone()], 256).unwrap()));
                let c = cyclic_h1(x).unwrap();
                let sh = h1(&sub).unwrap();
                let ss = cocycle_space(&sub).unwrap();
                cyclic_cases += 1;
                count_cases += 1;
                if ss.z1.order() != ss.b1.order() * sh.order() {
                    count_failures.push(format!("<x> in {name}"));
                }
                if c.cocycles() == sh.cocycles() && c.coboundaries() == sh.coboundaries() {
                    cyclic_ok += 1;
                } else {
                    failures.push(format!("cyclic subgroup of {name}"));
                }
            }
        }
    }
    let c3 = outcome(
        failures.is_empty(),
        format!(
            "Z1 equal on {z1_ok}/{in_corpus} groups, cyclic formula equal on {cyclic_ok}/{cyclic_cases} cyclic groups{}",
            if failures.is_empty() { String::new() } else { format!(", failures {failures:?}") }
        ),
    );
    let c4 = outcome(
        count_failures.is_empty(),
        format!("|Z1| = |B1||H1| on {count_cases} instances, {} exceptions", count_failures.len()),
    );
    (c3, c4)
}

fn criterion_5(cache: &OracleCache, homs: &HomSweep, fuzz: &RunReport, elapsed: Duration) -> Outcome {
    let t = Instant::now();
    let subs = sweep_subgroups(32, cache).unwrap();
    let elapsed = elapsed + t.elapsed();
    let c = campaign(fuzz);
    let pass = subs.passed()
        && homs.embedding_violations == 0
        && homs.full_check_violations == 0
        && c.applicable >= 1000
        && c.violations == 0
        && elapsed <= Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "{} subgroups of {} groups ({} violations), {} embeddings ({} violations), {} random embeddings ({} violations), {}",
            subs.subgroups,
            subs.groups,
            subs.violations + subs.purity_disagreements,
            homs.embeddings,
            homs.embedding_violations,
            c.applicable,
            c.violations,
            secs(elapsed)
        ),
    )
}

fn criterion_6(s1: &RunReport, s2: &RunReport) -> Outcome {
    let (a, b) = (campaign(s1), campaign(s2));
    let accepted = a.applicable + b.applicable;
    let violations = a.violations + b.violations;
    outcome(
        accepted >= 100 && violations == 0 && a.applicable > 0 && b.applicable > 0,
        format!(
            "{accepted} hypothesis-satisfying diagrams (S1 {}, S2 {}), {violations} violations",
            a.applicable, b.applicable
        ),
    )
}

fn criterion_7(cache: &OracleCache, homs: &HomSweep, fuzz: &RunReport) -> Outcome {
    let z2 = FinAbGroup::cyclic(2).unwrap();
    let z4 = FinAbGroup::cyclic(4).unwrap();
    let f = AbHom::new(z2, z4, vec![GroupElement(vec![2])]).unwrap();
    let r = check_lemma_pasinjectif(&f, 4, 2, &GroupElement(vec![1]), cache);
    let c = campaign(fuzz);
    let pass = r.applicable
        && r.holds
        && homs.not_summand_applicable > 0
        && homs.not_summand_violations == 0
        && homs.full_check_violations == 0
        && c.violations == 0;
    outcome(
        pass,
        format!(
            "Z/2 -> Z/4 holds={}, {} instances from {} homomorphisms ({} non-injective, {} violations), {} random ({} violations)",
            r.applicable && r.holds,
            homs.not_summand_applicable,
            homs.homs,
            homs.not_summand_non_injective,
            homs.not_summand_violations,
            c.applicable,
            c.violations
        ),
    )
}

fn criterion_8(r2: &RunReport, r5: &RunReport) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (p, r) in [(2, r2), (5, r5)] {
        let s = r.step(reproduce::N_VALUES).unwrap();
        pass &= s.status == Status::Pass;
        notes.push(format!(
            "p={p}: {} cocycles, {} outside p^2 M3",
            s.details["cocycles_checked"], s.details["outside_p2_M3"]
        ));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_9(r5: &RunReport, fuzz: &[(CampaignConfig, RunReport)]) -> Outcome {
    let again = cmd_reproduce(ReproduceOptions::new(5)).unwrap();
    let mut same = usize::from(again.to_json() == r5.to_json());
    for (cfg, first) in fuzz {
        let second = cmd_fuzz(cfg, false).unwrap();
        same += usize::from(second.to_json() == first.to_json());
    }
    let total = 1 + fuzz.len();
    outcome(same == total, format!("{same}/{total} report pairs byte-identical"))
}

fn main() -> ExitCode {
    let t = Instant::now();
    let r5 = cmd_reproduce(ReproduceOptions::new(5)).unwrap();
    let c1 = criterion_1(&r5, t.elapsed());
    let r2 = cmd_reproduce(ReproduceOptions::new(2)).unwrap();
    let c2 = criterion_2();
    let (c3, c4) = criterion_3_and_4();

    let cache = OracleCache::new();
    let t = Instant::now();
    let homs = sweep_homs(32, &cache).unwrap();
    let configs = [
        config(Lemma::SummandCriterion, 1000, 64, 720, Sampler::S2),
        config(Lemma::DiagramSummand, 2000, 16, 4, Sampler::S1),
        config(Lemma::DiagramSummand, 200, 64, 12, Sampler::S2),
        config(Lemma::NotSummand, 1000, 64, 720, Sampler::S2),
    ];
    let fuzz: Vec<(CampaignConfig, RunReport)> = configs
        .into_iter()
        .map(|c| {
            let r = cmd_fuzz(&c, false).unwrap();
            (c, r)
        })
        .collect();
    let c5 = criterion_5(&cache, &homs, &fuzz[0].1, t.elapsed());
    let c6 = criterion_6(&fuzz[1].1, &fuzz[2].1);
    let c7 = criterion_7(&cache, &homs, &fuzz[3].1);
    let c8 = criterion_8(&r2, &r5);
    let c9 = criterion_9(&r5, &fuzz);

    let all = [
        ("reproduction at p=5", c1),
        ("group orders", c2),
        ("cohomology oracles", c3),
        ("cocycle counting", c4),
        ("summand iff divisibility preserved", c5),
        ("diagram summand", c6),
        ("non-injective image not a summand", c7),
        ("values on N in p^2 M3", c8),
        ("determinism", c9),
    ];
    let mut failed = 0;
    for (i, (name, o)) in all.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
