//! d-maximality, maximal `(p, q)`-pairs and the structural report.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::{
    acts_through_character, frattini_of, frattini_scalar, map_order, subgroup_frattini_scalar, CharacterValue,
    GroupMap,
};
use crate::arith;
use crate::construct::{direct_product, quotient_group, semidirect_product, strip_pair};
use crate::error::{Error, Result};
use crate::group::{closure, ConcreteGroup, SubgroupSet};
use crate::outcome::Outcome;
use crate::series;
use crate::subgroups::{all_subgroups, min_generators};

pub const DMAX_FORMAT: &str = "maxpair-dmax-v1";
pub const PAIR_FORMAT: &str = "maxpair-pair-v1";

/// Largest `|P|` for which the structural report builds `P x| C_q`.
pub const EXTENSION_CHECK_LIMIT: usize = 343;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupWitness {
    pub order: usize,
    pub rank: usize,
    pub elements: Vec<usize>,
}

impl SubgroupWitness {
    fn new(h: &SubgroupSet, rank: usize) -> Self {
        SubgroupWitness {
            order: h.order(),
            rank,
            elements: h.elements(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalityReport {
    pub label: String,
    pub order: usize,
    pub d: usize,
    pub is_d_maximal: bool,
    pub witness: Option<SubgroupWitness>,
    pub subgroups_scanned: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl MaximalityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "format": DMAX_FORMAT,
            "report": self,
            "timings": { "total_ms": self.elapsed.as_secs_f64() * 1e3 },
        })
    }
}

/// Index of the first lattice entry (in lattice order) satisfying `pred`.
fn first_index(n: usize, pred: impl Fn(usize) -> bool + Sync) -> Option<usize> {
    (0..n).into_par_iter().find_first(|&i| pred(i))
}

/// Is `d(H) < d(G)` for every proper subgroup `H`?
pub fn is_d_maximal(g: &ConcreteGroup) -> MaximalityReport {
    let start = Instant::now();
    let d = min_generators(g);
    let lattice = all_subgroups(g);
    let ranks = lattice.ranks(g);
    let proper = lattice.len() - 1;
    let witness = first_index(proper, |i| ranks[i] >= d).map(|i| SubgroupWitness::new(&lattice.subgroups[i], ranks[i]));
    MaximalityReport {
        label: g.label().to_string(),
        order: g.order(),
        d,
        is_d_maximal: witness.is_none(),
        witness,
        subgroups_scanned: proper,
        elapsed: start.elapsed(),
    }
}

/// A condition over subgroups, with its first offender.
#[derive(Debug, Clone, Serialize)]
pub struct SubgroupCondition {
    pub holds: bool,
    pub witness: Option<SubgroupWitness>,
    /// For condition (c): the scalar induced on the offender's Frattini quotient.
    pub scalar: Option<CharacterValue>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarCondition {
    pub holds: bool,
    pub character: Option<CharacterValue>,
    /// An element `x` with `alpha(x)` outside `<x> Phi(P)`.
    pub non_scalar_element: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCheckReport {
    pub label: String,
    pub p: u64,
    pub q: u64,
    pub d: usize,
    pub order: usize,
    pub cond_a: SubgroupCondition,
    pub cond_b: ScalarCondition,
    pub cond_c: SubgroupCondition,
    pub character: Option<CharacterValue>,
    pub verdict: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PairCheckReport {
    pub fn to_json(&self) -> Value {
        json!({
            "format": PAIR_FORMAT,
            "report": self,
            "timings": { "total_ms": self.elapsed.as_secs_f64() * 1e3 },
        })
    }
}

/// Checks that `f` is an automorphism of `g` on every Cayley-graph edge.
fn require_automorphism(g: &ConcreteGroup, f: &GroupMap) -> Result<()> {
    if f.table.len() != g.order() {
        return Err(Error::InvalidPair("map has the wrong domain size".into()));
    }
    if !f.is_bijective() {
        return Err(Error::NotBijective);
    }
    for x in 0..g.order() {
        for &s in g.gens() {
            if f.apply(g.mul(x, s)) != g.mul(f.apply(x), f.apply(s)) {
                return Err(Error::NotHomomorphism { x, y: s });
            }
        }
    }
    Ok(())
}

/// Validates `(P, alpha, q)` and returns `p`.
fn pair_prime(g: &ConcreteGroup, alpha: &GroupMap, q: u64) -> Result<u64> {
    let (p, _) = g
        .prime_power()
        .ok_or_else(|| Error::InvalidPair(format!("P must be a nontrivial p-group, got order {}", g.order())))?;
    require_automorphism(g, alpha)?;
    if !arith::is_prime(q) || (p - 1) % q != 0 {
        return Err(Error::InvalidPair(format!("q = {q} is not a prime dividing p - 1 = {}", p - 1)));
    }
    let ord = map_order(alpha)?;
    if ord != q {
        return Err(Error::InvalidPair(format!("automorphism has order {ord}, expected {q}")));
    }
    Ok(p)
}

fn non_scalar_element(g: &ConcreteGroup, f: &GroupMap, phi: &SubgroupSet) -> Option<usize> {
    (0..g.order()).find(|&x| {
        let fx = f.apply(x);
        let mut y = 0;
        for _ in 0..g.element_order(x) {
            if phi.contains(g.mul(g.inv(y), fx)) {
                return false;
            }
            y = g.mul(y, x);
        }
        true
    })
}

/// Evaluates conditions (a), (b), (c) of a maximal `(p, q)`-pair.
pub fn check_pair(g: &ConcreteGroup, alpha: &GroupMap, q: u64) -> Result<PairCheckReport> {
    let start = Instant::now();
    let p = pair_prime(g, alpha, q)?;
    let d = min_generators(g);
    let lattice = all_subgroups(g);
    let ranks = lattice.ranks(g);
    let proper = lattice.len() - 1;

    let cond_a = match first_index(lattice.len(), |i| ranks[i] > d) {
        Some(i) => SubgroupCondition {
            holds: false,
            witness: Some(SubgroupWitness::new(&lattice.subgroups[i], ranks[i])),
            scalar: None,
        },
        None => SubgroupCondition {
            holds: true,
            witness: None,
            scalar: None,
        },
    };

    let character = frattini_scalar(g, alpha);
    let cond_b = ScalarCondition {
        holds: character.is_some_and(|c| !c.is_trivial()),
        character,
        non_scalar_element: match character {
            Some(_) => None,
            None => non_scalar_element(g, alpha, &frattini_of(g)),
        },
    };

    let offends = |i: usize| -> Option<CharacterValue> {
        let h = &lattice.subgroups[i];
        if ranks[i] != d || !alpha.preserves(h) {
            return None;
        }
        subgroup_frattini_scalar(g, alpha, h).filter(|c| !c.is_trivial())
    };
    let cond_c = match (0..proper).into_par_iter().find_map_first(|i| offends(i).map(|c| (i, c))) {
        Some((i, c)) => SubgroupCondition {
            holds: false,
            witness: Some(SubgroupWitness::new(&lattice.subgroups[i], ranks[i])),
            scalar: Some(c),
        },
        None => SubgroupCondition {
            holds: true,
            witness: None,
            scalar: None,
        },
    };

    Ok(PairCheckReport {
        label: g.label().to_string(),
        p,
        q,
        d,
        order: g.order(),
        verdict: cond_a.holds && cond_b.holds && cond_c.holds,
        cond_a,
        cond_b,
        cond_c,
        character,
        elapsed: start.elapsed(),
    })
}

/// `P x| C_{q^t}` with the cyclic generator acting as `alpha`.
pub fn build_group_from_pair(g: &ConcreteGroup, alpha: &GroupMap, q: u64, t: u32) -> Result<ConcreteGroup> {
    if t == 0 {
        return Err(Error::Precondition("t must be at least 1".into()));
    }
    let ord = map_order(alpha)?;
    if ord != q {
        return Err(Error::OrderMismatch {
            expected: q,
            actual: ord,
        });
    }
    let m = q
        .checked_pow(t)
        .ok_or_else(|| Error::Precondition("q^t overflows".into()))?;
    let built = semidirect_product(g, alpha, m)?;
    Ok(built.with_label(format!("{} x| C{m}", g.label())))
}

/// `(P/N, alpha mod N)` for an invariant normal `N` inside `Phi(P)`.
pub fn quotient_pair(
    g: &ConcreteGroup,
    alpha: &GroupMap,
    q: u64,
    n: &SubgroupSet,
) -> Result<(ConcreteGroup, GroupMap)> {
    if n.parent_order() != g.order() {
        return Err(Error::Precondition("N is not a subgroup of P".into()));
    }
    if !alpha.preserves(n) {
        return Err(Error::Precondition("N is not invariant under the automorphism".into()));
    }
    if !series::is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    if !n.is_subset(&frattini_of(g)) {
        return Err(Error::Precondition("N is not contained in the Frattini subgroup".into()));
    }
    let (quot, proj) = quotient_group(g, n)?;
    let mut preimage = vec![usize::MAX; quot.order()];
    for x in (0..g.order()).rev() {
        preimage[proj.apply(x)] = x;
    }
    let table: Vec<usize> = preimage.iter().map(|&x| proj.apply(alpha.apply(x))).collect();
    let induced = GroupMap::from_table(&quot, table);
    if quot.order() > 1 {
        let ord = map_order(&induced)?;
        if ord != q {
            return Err(Error::InvalidPair(format!("induced automorphism has order {ord}, expected {q}")));
        }
    }
    Ok((quot, induced))
}

/// `(P x Q, (alpha, beta))` for pairs with the same `p`, `q` and character.
pub fn product_pair(
    (g, alpha): (&ConcreteGroup, &GroupMap),
    (h, beta): (&ConcreteGroup, &GroupMap),
) -> Result<(ConcreteGroup, GroupMap)> {
    let pg = g.prime_power().map(|x| x.0);
    let ph = h.prime_power().map(|x| x.0);
    if pg.is_none() || pg != ph {
        return Err(Error::InvalidPair(format!(
            "groups of orders {} and {} are not p-groups for a common p",
            g.order(),
            h.order()
        )));
    }
    let (qa, qb) = (map_order(alpha)?, map_order(beta)?);
    if qa != qb {
        return Err(Error::InvalidPair(format!("automorphism orders differ: {qa} and {qb}")));
    }
    let (ca, cb) = (frattini_scalar(g, alpha), frattini_scalar(h, beta));
    match (ca, cb) {
        (Some(a), Some(b)) if a.value == b.value => {}
        _ => {
            return Err(Error::InvalidPair(format!(
                "characters differ on the Frattini quotients: {:?} and {:?}",
                ca.map(|c| c.value),
                cb.map(|c| c.value)
            )))
        }
    }
    let (prod, _, _) = direct_product(g, h)?;
    let k = h.order();
    let table = (0..prod.order()).map(|x| alpha.apply(x / k) * k + beta.apply(x % k)).collect();
    let map = GroupMap::from_table(&prod, table);
    Ok((prod, map))
}

/// One evaluated assertion of the structural report.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub id: String,
    pub description: String,
    pub outcome: Outcome,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructuralReport {
    pub label: String,
    pub p: u64,
    pub q: u64,
    pub d: usize,
    pub class: usize,
    pub regular: Option<bool>,
    pub assertions: Vec<Assertion>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl StructuralReport {
    /// No assertion failed.
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.outcome.holds())
    }

    pub fn get(&self, id: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.id == id)
    }

    pub fn outcome(&self, id: &str) -> Outcome {
        self.get(id).map_or(Outcome::Skipped, |a| a.outcome)
    }
}

const DESCRIPTIONS: [(&str, &str); 12] = [
    ("A1", "Phi(P) = gamma_2(P)"),
    ("A2", "each gamma_i / gamma_{i+1} is elementary abelian"),
    ("A3", "alpha acts on gamma_i / gamma_{i+1} through chi^i"),
    ("A4", "d(gamma_i / gamma_{i+1}) <= d, with chi^i = 1 on equality for i >= 2"),
    ("A5", "Mho_1(gamma_i) <= gamma_{i+q} gamma_{2i}, and Mho_1(gamma_2) <= gamma_4"),
    ("A6", "class 3 implies exponent != p"),
    ("A7", "q > 2 implies class <= 2"),
    ("A8", "p >= 2d implies P regular"),
    ("A9", "regular of class >= 3: power and commutator laws of the lower central series"),
    ("A10", "small-rank order and class bounds"),
    ("A11", "P x| C_q is (d+1)-maximal and stripping it recovers a pair"),
    ("A12", "q odd implies |P| <= p^(2d-1)"),
];

/// A sub-check result: outcome plus a witness for failures.
struct Check {
    outcome: Outcome,
    witness: Option<String>,
}

impl Check {
    fn vacuous() -> Self {
        Check {
            outcome: Outcome::Vacuous,
            witness: None,
        }
    }

    fn skipped(why: impl Into<String>) -> Self {
        Check {
            outcome: Outcome::Skipped,
            witness: Some(why.into()),
        }
    }

    fn pass() -> Self {
        Check {
            outcome: Outcome::Pass,
            witness: None,
        }
    }

    fn require(ok: bool, why: impl FnOnce() -> String) -> Self {
        if ok {
            Check::pass()
        } else {
            Check {
                outcome: Outcome::Fail,
                witness: Some(why()),
            }
        }
    }

    /// Combines parts: the first failure's witness survives.
    fn all(parts: Vec<Check>) -> Self {
        let outcome = Outcome::all(parts.iter().map(|c| c.outcome));
        let witness = parts
            .iter()
            .find(|c| c.outcome == Outcome::Fail)
            .or_else(|| parts.iter().find(|c| c.outcome == outcome))
            .and_then(|c| c.witness.clone());
        Check { outcome, witness }
    }
}

struct Ctx<'a> {
    g: &'a ConcreteGroup,
    alpha: &'a GroupMap,
    p: u64,
    q: u64,
    d: usize,
    n: u32,
    class: usize,
    chi: CharacterValue,
    lcs: series::Series,
    regular: Option<bool>,
}

impl Ctx<'_> {
    fn gamma(&self, i: usize) -> &SubgroupSet {
        self.lcs.term(i)
    }

    fn mho(&self, h: &SubgroupSet) -> SubgroupSet {
        series::agemo_of(self.g, h, self.p, 1)
    }

    fn log_index(&self, a: &SubgroupSet, b: &SubgroupSet) -> u32 {
        arith::log_exact((a.order() / b.order()) as u64, self.p).unwrap_or(u32::MAX)
    }
}

fn a1(c: &Ctx) -> Check {
    let phi = series::burnside_frattini(c.g, &c.g.whole(), c.p);
    Check::require(&phi == c.gamma(2), || {
        format!("|Phi| = {}, |gamma_2| = {}", phi.order(), c.gamma(2).order())
    })
}

fn a2(c: &Ctx) -> Check {
    Check::all(
        (1..=c.class)
            .map(|i| {
                let (gi, next) = (c.gamma(i), c.gamma(i + 1));
                let ok = c.mho(gi).is_subset(next) && series::commutator_subgroup(c.g, gi, gi).is_subset(next);
                Check::require(ok, || format!("gamma_{i} / gamma_{} is not elementary abelian", i + 1))
            })
            .collect(),
    )
}

fn a3(c: &Ctx) -> Check {
    Check::all(
        (1..=c.class)
            .map(|i| {
                let want = c.chi.pow(i as u64);
                match acts_through_character(c.g, c.alpha, c.gamma(i), c.gamma(i + 1)) {
                    Ok(Some(v)) => Check::require(v.value == want, || {
                        format!("layer {i}: scalar {} but chi^{i} = {want}", v.value)
                    }),
                    Ok(None) => Check::require(false, || format!("layer {i}: action is not scalar")),
                    Err(e) => Check::require(false, || format!("layer {i}: {e}")),
                }
            })
            .collect(),
    )
}

fn a4(c: &Ctx) -> Check {
    Check::all(
        (1..=c.class)
            .map(|i| {
                let k = c.log_index(c.gamma(i), c.gamma(i + 1)) as usize;
                let ok = k <= c.d && (i < 2 || k < c.d || c.chi.pow(i as u64) == 1);
                Check::require(ok, || {
                    format!("layer {i} has rank {k} with chi^{i} = {}", c.chi.pow(i as u64))
                })
            })
            .collect(),
    )
}

fn a5(c: &Ctx) -> Check {
    let q = c.q as usize;
    let mut parts: Vec<Check> = (1..=c.class)
        .map(|i| {
            let bound = c.gamma((i + q).min(2 * i));
            Check::require(c.mho(c.gamma(i)).is_subset(bound), || {
                format!("Mho_1(gamma_{i}) is not inside gamma_{}", (i + q).min(2 * i))
            })
        })
        .collect();
    parts.push(Check::require(c.mho(c.gamma(2)).is_subset(c.gamma(4)), || {
        "Mho_1(gamma_2) is not inside gamma_4".into()
    }));
    Check::all(parts)
}

fn a6(c: &Ctx) -> Check {
    if c.class != 3 {
        return Check::vacuous();
    }
    Check::require(series::exponent(c.g) != c.p, || "class 3 with exponent p".into())
}

fn a7(c: &Ctx) -> Check {
    if c.q <= 2 {
        return Check::vacuous();
    }
    Check::require(c.class <= 2, || format!("q = {} but class {}", c.q, c.class))
}

fn a8(c: &Ctx) -> Check {
    if c.p < 2 * c.d as u64 {
        return Check::vacuous();
    }
    Check::require(c.regular == Some(true), || "P is not regular".into())
}

fn a9(c: &Ctx) -> Check {
    if c.regular != Some(true) || c.class < 3 {
        return Check::vacuous();
    }
    let cl = c.class;
    let mut parts = vec![Check::require(c.mho(&c.g.whole()) == *c.gamma(3), || {
        "Mho_1(P) != gamma_3".into()
    })];
    for i in 1..=cl {
        parts.push(Check::require(c.mho(c.gamma(i)) == *c.gamma(i + 2), || {
            format!("Mho_1(gamma_{i}) != gamma_{}", i + 2)
        }));
    }
    for i in 1..=cl {
        for j in 1..=cl {
            if i % 2 == 0 && j % 2 == 0 {
                continue;
            }
            let comm = series::commutator_subgroup(c.g, c.gamma(i), c.gamma(j));
            parts.push(Check::require(comm == *c.gamma(i + j), || {
                format!("[gamma_{i}, gamma_{j}] != gamma_{}", i + j)
            }));
        }
    }
    for i in 2..=cl {
        let k = c.log_index(c.gamma(i), c.gamma(i + 2)) as usize;
        parts.push(Check::require(k <= c.d, || {
            format!("|gamma_{i} : gamma_{}| = p^{k} > p^{}", i + 2, c.d)
        }));
    }
    for a in 1..=cl.saturating_sub(1) / 2 {
        let (lo, hi) = (1 + 2 * a, 2 + 2 * a);
        if c.log_index(c.gamma(lo), c.gamma(hi)) == 1 {
            parts.push(Check::require(cl == lo, || {
                format!("|gamma_{lo} : gamma_{hi}| = p but class is {cl}")
            }));
        }
    }
    Check::all(parts)
}

fn is_extraspecial(g: &ConcreteGroup, p: u64) -> bool {
    let z = series::center(g);
    z.order() as u64 == p && z == series::derived_subgroup(g) && z == series::burnside_frattini(g, &g.whole(), p)
}

fn a10(c: &Ctx) -> Check {
    let (p, n) = (c.p, c.n);
    let exp = series::exponent(c.g);
    match c.d {
        1 => Check::require(n == 1, || format!("rank 1 with |P| = p^{n}")),
        2 => {
            let mut parts = vec![Check::require(c.class as u32 == n - 1, || {
                format!("class {} on order p^{n}", c.class)
            })];
            if p > 3 {
                parts.push(Check::require(n <= 4, || format!("|P| = p^{n} > p^4")));
                let classified = (n == 2 && exp == p) || (n == 3 && exp == p && is_extraspecial(c.g, p));
                parts.push(Check::require(classified, || {
                    format!("order p^{n}, exponent {exp}: neither C_p^2 nor extraspecial of exponent p")
                }));
            }
            Check::all(parts)
        }
        3 => {
            let mut parts = Vec::new();
            if c.class == 2 {
                let ok = n == 4 && exp == p && c.gamma(2).order() as u64 == p;
                parts.push(Check::require(ok, || {
                    format!("class 2: |P| = p^{n}, exponent {exp}, |gamma_2| = {}", c.gamma(2).order())
                }));
            }
            if p > 3 {
                parts.push(Check::require(n <= 5, || format!("|P| = p^{n} > p^5")));
                if n == 5 {
                    parts.push(order_p5_values(c));
                }
            }
            Check::all(parts)
        }
        _ => Check::vacuous(),
    }
}

/// The shape of a rank-3 pair group of order `p^5` with `p > 3`.
fn order_p5_values(c: &Ctx) -> Check {
    let (g, p) = (c.g, c.p);
    let g2 = c.gamma(2);
    let cent = series::centralizer(g, g2);
    let omega = series::omega_of(g, &g.whole(), p, 1);
    let omega_derived = series::commutator_subgroup(g, &omega, &omega);
    let checks = [
        (g2.order() as u64 == p * p && series::exponent_of(g, g2) == p, "gamma_2 is not C_p x C_p"),
        (c.gamma(3).order() as u64 == p, "|gamma_3| != p"),
        (
            series::abelian_invariants(g, &cent, p) == vec![p * p, p, p] && series::is_abelian_subgroup(g, &cent),
            "C_P(gamma_2) is not C_{p^2} x C_p x C_p",
        ),
        (omega.order() as u64 == p.pow(4), "|Omega_1| != p^4"),
        (omega_derived == *g2, "gamma_2(Omega_1) != gamma_2"),
        (c.q == 2, "q != 2"),
    ];
    Check::all(
        checks
            .iter()
            .map(|&(ok, why)| Check::require(ok, || why.to_string()))
            .collect(),
    )
}

fn a11(c: &Ctx) -> Check {
    if c.g.order() > EXTENSION_CHECK_LIMIT {
        return Check::skipped(format!("|P| = {} exceeds {EXTENSION_CHECK_LIMIT}", c.g.order()));
    }
    let run = || -> Result<Check> {
        let built = build_group_from_pair(c.g, c.alpha, c.q, 1)?;
        let rep = is_d_maximal(&built);
        let stripped = strip_pair(&built, c.p)?;
        let back = check_pair(&stripped.p_group, &stripped.alpha, stripped.q)?;
        Ok(Check::all(vec![
            Check::require(rep.d == c.d + 1 && rep.is_d_maximal, || {
                format!("built group has d = {}, d-maximal = {}", rep.d, rep.is_d_maximal)
            }),
            Check::require(back.verdict && back.d == c.d, || "stripped pair fails check_pair".into()),
        ]))
    };
    run().unwrap_or_else(|e| Check::require(false, || e.to_string()))
}

fn a12(c: &Ctx) -> Check {
    if c.q.is_multiple_of(2) {
        return Check::vacuous();
    }
    let bound = 2 * (c.d + 1) as u32 - 3;
    Check::require(c.n <= bound, || format!("|P| = p^{} with bound p^{bound}", c.n))
}

/// Evaluates A1 to A12 on a pair that passed [`check_pair`].
pub fn structural_report(g: &ConcreteGroup, alpha: &GroupMap, q: u64) -> StructuralReport {
    let start = Instant::now();
    let (p, n) = g.prime_power().unwrap_or((1, 0));
    let d = if p > 1 { min_generators(g) } else { 0 };
    let lcs = series::lower_central_series(g);
    let class = lcs.class().unwrap_or(0);
    let chi = frattini_scalar(g, alpha).filter(|c| !c.is_trivial() && p > 1);
    let mut report = StructuralReport {
        label: g.label().to_string(),
        p,
        q,
        d,
        class,
        regular: None,
        assertions: Vec::new(),
        elapsed: Duration::ZERO,
    };
    let Some(chi) = chi.filter(|_| pair_prime(g, alpha, q).is_ok()) else {
        report.assertions = DESCRIPTIONS
            .iter()
            .map(|(id, text)| Assertion {
                id: id.to_string(),
                description: text.to_string(),
                outcome: Outcome::Skipped,
                witness: Some("input is not a valid pair with a nontrivial character".into()),
            })
            .collect();
        report.elapsed = start.elapsed();
        return report;
    };
    let regular = (p >= 2 * d as u64 || class >= 3)
        .then(|| series::is_regular(g).map(|r| r.regular).ok())
        .flatten();
    let ctx = Ctx {
        g,
        alpha,
        p,
        q,
        d,
        n,
        class,
        chi,
        lcs,
        regular,
    };
    let checks: [fn(&Ctx) -> Check; 12] = [a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, a12];
    let results: Vec<Check> = checks.par_iter().map(|f| f(&ctx)).collect();
    report.regular = regular;
    report.assertions = DESCRIPTIONS
        .iter()
        .zip(results)
        .map(|((id, text), r)| Assertion {
            id: id.to_string(),
            description: text.to_string(),
            outcome: r.outcome,
            witness: r.witness,
        })
        .collect();
    report.elapsed = start.elapsed();
    report
}

/// `N = gamma_i(P)` as a convenience for quotient pairs.
pub fn lower_central_term(g: &ConcreteGroup, i: usize) -> SubgroupSet {
    series::lower_central_series(g).term(i).clone()
}

/// The subgroup generated by `elements`, for witnesses read back from JSON.
pub fn witness_subgroup(g: &ConcreteGroup, w: &SubgroupWitness) -> SubgroupSet {
    closure(g, w.elements.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_group;

    #[test]
    fn cyclic_examples() {
        let c5 = get_group("c5").unwrap();
        let r = is_d_maximal(&c5.group);
        assert!(r.is_d_maximal && r.d == 1 && r.witness.is_none());
        let c4 = get_group("c4").unwrap();
        let r = is_d_maximal(&c4.group);
        assert!(!r.is_d_maximal);
        let w = r.witness.unwrap();
        assert_eq!((w.order, w.rank), (2, 1));
        let q8 = get_group("q8").unwrap();
        let r = is_d_maximal(&q8.group);
        assert!(r.is_d_maximal && r.d == 2);
    }

    #[test]
    fn elementary_pair_and_c9() {
        let e = get_group("ea-3-2").unwrap();
        let r = check_pair(&e.group, e.automorphism("inv").unwrap(), 2).unwrap();
        assert!(r.verdict);
        assert_eq!(r.d, 2);
        let c9 = get_group("c9").unwrap();
        let r = check_pair(&c9.group, c9.automorphism("inv").unwrap(), 2).unwrap();
        assert!(r.cond_a.holds && r.cond_b.holds && !r.cond_c.holds);
        let w = r.cond_c.witness.unwrap();
        assert_eq!((w.order, w.rank), (3, 1));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let e = get_group("ea-3-2").unwrap();
        let inv = e.automorphism("inv").unwrap();
        assert!(matches!(check_pair(&e.group, inv, 3), Err(Error::InvalidPair(_))));
        let id = GroupMap::identity(&e.group);
        assert!(matches!(check_pair(&e.group, &id, 2), Err(Error::InvalidPair(_))));
        let c1 = get_group("c1").unwrap();
        assert!(check_pair(&c1.group, &GroupMap::identity(&c1.group), 2).is_err());
    }

    #[test]
    fn identity_quotient_and_non_invariant_n() {
        let x = get_group("sg-81-10").unwrap();
        let alpha = x.automorphism("alpha").unwrap();
        let (q, f) = quotient_pair(&x.group, alpha, 2, &x.group.trivial()).unwrap();
        assert_eq!(q.order(), 81);
        assert!(check_pair(&q, &f, 2).unwrap().verdict);
        let h = closure(&x.group, [x.group.gens()[0]]);
        assert!(quotient_pair(&x.group, alpha, 2, &h).is_err());
    }
}
