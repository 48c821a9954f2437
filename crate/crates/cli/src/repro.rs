//! The reproduction suite: ten criteria, each a list of named checks.
//!
//! Verdicts and measured values are deterministic; wall-clock times are kept
//! in a separate `timings` object so two reports diff cleanly.

use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Result};
use maxpair_core::catalog::{get_group, list_catalog, CatalogGroup};
use maxpair_core::construct::strip_pair;
use maxpair_core::maximality::{build_group_from_pair, lower_central_term, product_pair, quotient_pair};
use maxpair_core::oracle::{naive_min_generators, naive_subgroups};
use maxpair_core::{all_subgroups, check_pair, is_d_maximal, min_generators, series, structural_report, Outcome};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::sync::Arc;

pub const REPORT_FORMAT: &str = "maxpair-repro-v1";
pub const SUITE_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Outcome,
    pub values: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionRecord {
    pub id: u32,
    pub description: String,
    pub topic: String,
    pub tags: Vec<String>,
    pub verdict: Outcome,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub bound: Duration,
    #[serde(skip)]
    pub check_bound: Option<Duration>,
}

impl CriterionRecord {
    pub fn passed(&self) -> bool {
        self.verdict == Outcome::Pass
    }

    /// Total and per-check runtimes are within their limits.
    pub fn within_bound(&self) -> bool {
        self.elapsed <= self.bound
            && self
                .check_bound
                .is_none_or(|b| self.checks.iter().all(|c| c.elapsed <= b))
    }
}

/// A claim the suite deliberately does not check.
#[derive(Debug, Clone, Serialize)]
pub struct SkipRecord {
    pub id: &'static str,
    pub description: &'static str,
    pub reason: &'static str,
    pub verdict: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproReport {
    pub format: &'static str,
    pub suite_version: &'static str,
    pub filters: Vec<String>,
    pub criteria: Vec<CriterionRecord>,
    pub skipped: Vec<SkipRecord>,
    pub checks_total: usize,
    pub overall_pass: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ReproReport {
    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let mut per = Map::new();
        for c in &self.criteria {
            let checks: Map<String, Value> = c
                .checks
                .iter()
                .map(|k| (k.name.clone(), json!(ms(k.elapsed))))
                .collect();
            per.insert(
                c.id.to_string(),
                json!({
                    "total_ms": ms(c.elapsed),
                    "bound_ms": ms(c.bound),
                    "check_bound_ms": c.check_bound.map(ms),
                    "within_bound": c.within_bound(),
                    "checks": checks,
                }),
            );
        }
        v["timings"] = json!({ "total_ms": ms(self.elapsed), "criteria": per });
        v
    }

    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            let failed = c.checks.iter().filter(|k| k.verdict == Outcome::Fail).count();
            out += &format!(
                "{:>2}  {:<4}  {:>3} checks  {:>3} failed  {:>9.1} ms  {}\n",
                c.id,
                c.verdict.as_str(),
                c.checks.len(),
                failed,
                ms(c.elapsed),
                c.description
            );
        }
        for s in &self.skipped {
            out += &format!(" -  skip  {}: {}\n", s.id, s.description);
        }
        out += &format!(
            "overall: {} ({} checks)\n",
            if self.overall_pass { "pass" } else { "fail" },
            self.checks_total
        );
        out
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub struct Criterion {
    pub id: u32,
    pub description: &'static str,
    pub topic: &'static str,
    pub tags: &'static [&'static str],
    pub bound: Duration,
    /// Limit on each individual check, where one applies.
    pub check_bound: Option<Duration>,
    run: fn() -> Vec<Check>,
}

impl Criterion {
    fn matches(&self, filters: &[String]) -> bool {
        filters.is_empty()
            || filters
                .iter()
                .any(|f| *f == self.id.to_string() || self.tags.contains(&f.as_str()))
    }

    pub fn run(&self) -> CriterionRecord {
        let start = Instant::now();
        let checks = (self.run)();
        let elapsed = start.elapsed();
        let verdict = if checks.iter().any(|c| c.verdict == Outcome::Fail) || checks.is_empty() {
            Outcome::Fail
        } else {
            Outcome::Pass
        };
        CriterionRecord {
            id: self.id,
            description: self.description.to_string(),
            topic: self.topic.to_string(),
            tags: self.tags.iter().map(|t| t.to_string()).collect(),
            verdict,
            checks,
            elapsed,
            bound: self.bound,
            check_bound: self.check_bound,
        }
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub static CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        description: "C_p is 1-maximal for p in {2,3,5,7}; C4 and C9 are not",
        topic: "rank-1 sanity",
        tags: &["rank1", "dmax"],
        bound: secs(1),
        check_bound: None,
        run: criterion_1,
    },
    Criterion {
        id: 2,
        description: "C3 x C3, C5 x C5, Q8 and C7 x| C3 are 2-maximal",
        topic: "minimal non-abelian and rank-2 elementary instances",
        tags: &["rank2", "dmax"],
        bound: secs(4),
        check_bound: Some(secs(1)),
        run: criterion_2,
    },
    Criterion {
        id: 3,
        description: "rank-2 pairs on C_p^2, Heisenberg p^3 and sg-81-10 pass",
        topic: "rank-2 pair classification",
        tags: &["rank2", "pairs"],
        bound: secs(35),
        check_bound: Some(secs(5)),
        run: criterion_3,
    },
    Criterion {
        id: 4,
        description: "(C9 x C3, inversion) and (C9, inversion) fail condition (c) with a witness",
        topic: "rank-2 negatives",
        tags: &["rank2", "pairs", "negative"],
        bound: secs(1),
        check_bound: None,
        run: criterion_4,
    },
    Criterion {
        id: 5,
        description: "every listed 3-maximal group has d = 3 and is 3-maximal",
        topic: "3-maximal list",
        tags: &["rank3", "dmax", "extension"],
        bound: secs(30),
        check_bound: None,
        run: criterion_5,
    },
    Criterion {
        id: 6,
        description: "rank-3 pairs pass; order-p^5 invariants at p = 5",
        topic: "rank-3 pairs",
        tags: &["rank3", "pairs"],
        bound: secs(300),
        check_bound: None,
        run: criterion_6,
    },
    Criterion {
        id: 7,
        description: "building P x| C_q from a pair gives a (d+1)-maximal group that strips back to a pair",
        topic: "pair/group round trip",
        tags: &["extension", "pairs", "roundtrip"],
        bound: secs(60),
        check_bound: None,
        run: criterion_7,
    },
    Criterion {
        id: 8,
        description: "structural assertions A1-A12 hold on every pair of criteria 3 and 6",
        topic: "structure of pair groups",
        tags: &["structural", "pairs"],
        bound: secs(300),
        check_bound: None,
        run: criterion_8,
    },
    Criterion {
        id: 9,
        description: "lattices and d agree with brute force on catalog groups of order <= 200",
        topic: "oracle equivalence",
        tags: &["oracle", "lattice"],
        bound: secs(60),
        check_bound: None,
        run: criterion_9,
    },
    Criterion {
        id: 10,
        description: "quotients by invariant N in Phi and direct products of pairs are pairs of the predicted rank",
        topic: "closure of pairs",
        tags: &["closure", "pairs"],
        bound: secs(10),
        check_bound: None,
        run: criterion_10,
    },
];

pub const SKIPPED: [SkipRecord; 4] = [
    SkipRecord {
        id: "smallgroup-exhaustiveness",
        description: "completeness over all groups of orders 2^8, 3^4, 3^6 and 3^7",
        reason: "needs a small-groups library",
        verdict: "skip",
    },
    SkipRecord {
        id: "sg-243-26",
        description: "claims about the group of order 243 with library number 26",
        reason: "no presentation available",
        verdict: "skip",
    },
    SkipRecord {
        id: "sg-729-148",
        description: "claims about the group of order 729 with library number 148",
        reason: "no presentation available",
        verdict: "skip",
    },
    SkipRecord {
        id: "sg-1458",
        description: "claims about groups of order 1458",
        reason: "no presentation available",
        verdict: "skip",
    },
];

pub fn criterion(id: u32) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

/// Runs the selected criteria in parallel; records come back in id order.
pub fn reproduce(filters: &[String]) -> ReproReport {
    let start = Instant::now();
    let selected: Vec<&Criterion> = CRITERIA.iter().filter(|c| c.matches(filters)).collect();
    let criteria: Vec<CriterionRecord> = selected.par_iter().map(|c| c.run()).collect();
    let checks_total = criteria.iter().map(|c| c.checks.len()).sum();
    let overall_pass = !criteria.is_empty() && criteria.iter().all(CriterionRecord::passed);
    ReproReport {
        format: REPORT_FORMAT,
        suite_version: SUITE_VERSION,
        filters: filters.to_vec(),
        criteria,
        skipped: SKIPPED.to_vec(),
        checks_total,
        overall_pass,
        elapsed: start.elapsed(),
    }
}

/// Times `body`; an error becomes a failing check carrying the message.
fn check(name: impl Into<String>, body: impl FnOnce() -> Result<(bool, Value)>) -> Check {
    let start = Instant::now();
    let (verdict, values) = match body() {
        Ok((ok, v)) => (Outcome::from_bool(ok), v),
        Err(e) => (Outcome::Fail, json!({ "error": format!("{e:#}") })),
    };
    Check {
        name: name.into(),
        verdict,
        values,
        elapsed: start.elapsed(),
    }
}

fn entry(id: &str) -> Result<Arc<CatalogGroup>> {
    Ok(get_group(id)?)
}

/// `(group id, automorphism name, q)`.
type PairRef = (&'static str, &'static str, u64);

const RANK2_PAIRS: [PairRef; 7] = [
    ("ea-3-2", "scalar-2", 2),
    ("ea-5-2", "scalar-4", 2),
    ("ea-7-2", "scalar-2", 3),
    ("heis-3", "scalar-2", 2),
    ("heis-5", "scalar-4", 2),
    ("heis-7", "scalar-2", 3),
    ("sg-81-10", "alpha", 2),
];

const RANK3_PAIRS: [PairRef; 3] = [
    ("c3xsg-81-10", "alpha", 2),
    ("p5-unique-3", "alpha", 2),
    ("p5-unique-5", "alpha", 2),
];

fn pair_name((id, aut, q): PairRef) -> String {
    format!("{id}/{aut}/q{q}")
}

fn dmax_check(id: &'static str, d: usize, expect: bool) -> Check {
    check(format!("dmax {id}"), || {
        let rep = is_d_maximal(&entry(id)?.group);
        let witness = rep.witness.as_ref().map(|w| json!({ "order": w.order, "d": w.rank }));
        let ok = rep.d == d && rep.is_d_maximal == expect && (expect || witness.is_some());
        Ok((ok, json!({ "order": rep.order, "d": rep.d, "d_maximal": rep.is_d_maximal, "witness": witness })))
    })
}

fn criterion_1() -> Vec<Check> {
    let mut out: Vec<Check> = ["c2", "c3", "c5", "c7"].iter().map(|id| dmax_check(id, 1, true)).collect();
    out.extend(["c4", "c9"].iter().map(|id| dmax_check(id, 1, false)));
    out
}

fn criterion_2() -> Vec<Check> {
    ["ea-3-2", "ea-5-2", "q8", "c7-c3"]
        .iter()
        .map(|id| dmax_check(id, 2, true))
        .collect()
}

fn pair_check(pr: PairRef, d: usize) -> Check {
    check(format!("pair {}", pair_name(pr)), || {
        let e = entry(pr.0)?;
        let rep = check_pair(&e.group, e.automorphism(pr.1)?, pr.2)?;
        let ok = rep.verdict && rep.d == d;
        Ok((
            ok,
            json!({
                "order": rep.order,
                "d": rep.d,
                "verdict": rep.verdict,
                "character": rep.character.map(|c| c.value),
            }),
        ))
    })
}

fn criterion_3() -> Vec<Check> {
    RANK2_PAIRS.par_iter().map(|&pr| pair_check(pr, 2)).collect()
}

fn criterion_4() -> Vec<Check> {
    [("c9xc3", "inv", 2), ("c9", "inv", 2)]
        .iter()
        .map(|&pr: &PairRef| {
            check(format!("pair {}", pair_name(pr)), || {
                let e = entry(pr.0)?;
                let rep = check_pair(&e.group, e.automorphism(pr.1)?, pr.2)?;
                let w = rep.cond_c.witness.as_ref();
                let ok = !rep.verdict && !rep.cond_c.holds && w.is_some();
                Ok((
                    ok,
                    json!({
                        "verdict": rep.verdict,
                        "cond_c": rep.cond_c.holds,
                        "witness_order": w.map(|w| w.order),
                        "witness_scalar": rep.cond_c.scalar.map(|c| c.value),
                    }),
                ))
            })
        })
        .collect()
}

fn built_dmax_check(pr: PairRef, t: u32, order: usize) -> Check {
    check(format!("dmax {} t={t}", pair_name(pr)), || {
        let e = entry(pr.0)?;
        let built = build_group_from_pair(&e.group, e.automorphism(pr.1)?, pr.2, t)?;
        let rep = is_d_maximal(&built);
        let ok = rep.d == 3 && rep.is_d_maximal && rep.order == order;
        Ok((ok, json!({ "order": rep.order, "d": rep.d, "d_maximal": rep.is_d_maximal })))
    })
}

fn criterion_5() -> Vec<Check> {
    let plain = ["ea-2-3", "c2xq8", "c4oq8", "g32", "ea-3-3", "ea-5-3", "p4-3", "p4-5", "sg-162-22"];
    let mut out: Vec<Check> = plain.par_iter().map(|id| dmax_check(id, 3, true)).collect();
    let built: Vec<(PairRef, u32, usize)> = RANK2_PAIRS[..6]
        .iter()
        .map(|&pr| (pr, 1, entry(pr.0).map_or(0, |e| e.group.order()) * pr.2 as usize))
        .chain(std::iter::once((("ea-3-2", "inv", 2), 2, 36)))
        .collect();
    out.extend(
        built
            .par_iter()
            .map(|&(pr, t, order)| built_dmax_check(pr, t, order))
            .collect::<Vec<_>>(),
    );
    out
}

fn order_p5_check() -> Check {
    check("order-p^5 invariants at p = 5", || {
        let e = entry("p5-unique-5")?;
        let g = &e.group;
        let p = 5u64;
        let g2 = lower_central_term(g, 2);
        let g3 = lower_central_term(g, 3);
        let omega = series::omega_n(g, 1)?;
        let omega_derived = series::commutator_subgroup(g, &omega, &omega);
        let cent = series::centralizer(g, &g2);
        let cent_inv = series::abelian_invariants(g, &cent, p);
        let q = maxpair_core::actions::map_order(e.automorphism("alpha")?)?;
        let values = json!({
            "gamma_2": g2.order(),
            "gamma_2_exponent": series::exponent_of(g, &g2),
            "gamma_3": g3.order(),
            "omega_1": omega.order(),
            "gamma_2_of_omega_1_is_gamma_2": omega_derived == g2,
            "centralizer_of_gamma_2": { "order": cent.order(), "exponent": series::exponent_of(g, &cent), "invariants": cent_inv },
            "q": q,
        });
        let ok = g2.order() == 25
            && series::exponent_of(g, &g2) == 5
            && g3.order() == 5
            && omega.order() == 625
            && omega_derived == g2
            && cent.order() == 625
            && series::is_abelian_subgroup(g, &cent)
            && cent_inv == vec![25, 5, 5]
            && q == 2;
        Ok((ok, values))
    })
}

fn criterion_6() -> Vec<Check> {
    let mut out: Vec<Check> = RANK3_PAIRS.iter().map(|&pr| pair_check(pr, 3)).collect();
    out.push(order_p5_check());
    out
}

fn criterion_7() -> Vec<Check> {
    let pairs: Vec<(PairRef, usize)> = RANK2_PAIRS
        .iter()
        .map(|&pr| (pr, 2))
        .chain(RANK3_PAIRS.iter().map(|&pr| (pr, 3)))
        .filter(|(pr, _)| entry(pr.0).is_ok_and(|e| e.group.order() <= 243))
        .collect();
    pairs
        .par_iter()
        .map(|&(pr, d)| {
            check(format!("round trip {}", pair_name(pr)), || {
                let e = entry(pr.0)?;
                let (p, _) = e.group.prime_power().ok_or_else(|| anyhow!("not a p-group"))?;
                let built = build_group_from_pair(&e.group, e.automorphism(pr.1)?, pr.2, 1)?;
                let rep = is_d_maximal(&built);
                let stripped = strip_pair(&built, p)?;
                let back = check_pair(&stripped.p_group, &stripped.alpha, stripped.q)?;
                let ok = rep.d == d + 1 && rep.is_d_maximal && back.verdict && back.d == d && stripped.q == pr.2;
                Ok((
                    ok,
                    json!({
                        "built_order": rep.order,
                        "built_d": rep.d,
                        "built_d_maximal": rep.is_d_maximal,
                        "stripped_order": stripped.p_group.order(),
                        "stripped_q": stripped.q,
                        "stripped_verdict": back.verdict,
                    }),
                ))
            })
        })
        .collect()
}

fn criterion_8() -> Vec<Check> {
    let pairs: Vec<PairRef> = RANK2_PAIRS.iter().chain(RANK3_PAIRS.iter()).copied().collect();
    pairs
        .par_iter()
        .map(|&pr| {
            check(format!("structure {}", pair_name(pr)), || {
                let e = entry(pr.0)?;
                let rep = structural_report(&e.group, e.automorphism(pr.1)?, pr.2);
                let mut ok = rep.passed();
                // branches that must actually fire on these inputs
                if pr.0 == "p5-unique-5" {
                    ok &= rep.outcome("A9") == Outcome::Pass;
                }
                if pr.2 == 3 {
                    ok &= rep.outcome("A7") == Outcome::Pass;
                }
                let outcomes: Map<String, Value> = rep
                    .assertions
                    .iter()
                    .map(|a| (a.id.clone(), json!(a.outcome.as_str())))
                    .collect();
                let failures: Vec<String> = rep
                    .assertions
                    .iter()
                    .filter(|a| a.outcome == Outcome::Fail)
                    .map(|a| format!("{}: {}", a.id, a.witness.clone().unwrap_or_default()))
                    .collect();
                Ok((
                    ok,
                    json!({ "class": rep.class, "regular": rep.regular, "outcomes": outcomes, "failures": failures }),
                ))
            })
        })
        .collect()
}

fn criterion_9() -> Vec<Check> {
    let ids: Vec<String> = list_catalog()
        .into_iter()
        .filter(|s| !s.extension_slot)
        .map(|s| s.id)
        .collect();
    let mut out: Vec<Check> = ids
        .par_iter()
        .filter_map(|id| {
            let e = entry(id).ok()?;
            (e.group.order() <= 200).then_some(e)
        })
        .map(|e| {
            check(format!("oracle {}", e.id), || {
                let naive = naive_subgroups(&e.group);
                let lattice = all_subgroups(&e.group);
                let same = naive.len() == lattice.len()
                    && naive.iter().zip(&lattice.subgroups).all(|(a, b)| *a == b.elements());
                let d = min_generators(&e.group);
                let naive_d = naive_min_generators(&e.group);
                Ok((
                    same && d == naive_d,
                    json!({ "order": e.group.order(), "subgroups": lattice.len(), "oracle_subgroups": naive.len(), "d": d, "oracle_d": naive_d }),
                ))
            })
        })
        .collect();
    for (id, count) in [("ea-2-2", 5), ("q8", 6)] {
        out.push(check(format!("subgroup count {id}"), || {
            let n = all_subgroups(&entry(id)?.group).len();
            Ok((n == count, json!({ "subgroups": n, "expected": count })))
        }));
    }
    out
}

fn rank_after(g: &maxpair_core::ConcreteGroup, f: &maxpair_core::GroupMap, q: u64, d: usize) -> Result<(bool, Value)> {
    let rep = check_pair(g, f, q)?;
    Ok((
        rep.verdict && rep.d == d,
        json!({ "order": rep.order, "d": rep.d, "expected_d": d, "verdict": rep.verdict }),
    ))
}

fn criterion_10() -> Vec<Check> {
    let quotients = [("sg-81-10", "alpha", 3usize, 27usize), ("heis-3", "scalar-2", 2, 9)];
    let mut out: Vec<Check> = quotients
        .iter()
        .map(|&(id, aut, i, order)| {
            check(format!("quotient {id} by gamma_{i}"), || {
                let e = entry(id)?;
                let alpha = e.automorphism(aut)?;
                let n = lower_central_term(&e.group, i);
                let (quot, induced) = quotient_pair(&e.group, alpha, 2, &n)?;
                ensure!(quot.order() == order, "quotient has order {}", quot.order());
                rank_after(&quot, &induced, 2, 2)
            })
        })
        .collect();
    let products: [(PairRef, PairRef, usize); 4] = [
        (("c3", "inv", 2), ("c3", "inv", 2), 2),
        (("c3", "inv", 2), ("sg-81-10", "alpha", 2), 3),
        (("ea-3-2", "scalar-2", 2), ("heis-3", "scalar-2", 2), 4),
        (("c5", "inv", 2), ("ea-5-2", "scalar-4", 2), 3),
    ];
    out.extend(products.iter().map(|&(a, b, d)| {
        check(format!("product {} x {}", pair_name(a), pair_name(b)), || {
            let (ea, eb) = (entry(a.0)?, entry(b.0)?);
            let (prod, f) = product_pair((&ea.group, ea.automorphism(a.1)?), (&eb.group, eb.automorphism(b.1)?))?;
            rank_after(&prod, &f, a.2, d)
        })
    }));
    out.push(check("product rejects mixed primes", || {
        let (a, b) = (entry("c3")?, entry("c5")?);
        let res = product_pair((&a.group, a.automorphism("inv")?), (&b.group, b.automorphism("inv")?));
        Ok((res.is_err(), json!({ "rejected": res.is_err() })))
    }));
    out
}
