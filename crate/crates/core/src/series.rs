//! Characteristic subgroups and series of enumerated groups.

use std::collections::HashMap;
use std::sync::Mutex;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{closure, generating_set, ConcreteGroup, SubgroupBuilder, SubgroupSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    LowerCentral,
    Derived,
    Custom,
}

/// A descending chain of subgroups, first term first.
#[derive(Debug, Clone)]
pub struct Series {
    pub kind: SeriesKind,
    pub terms: Vec<SubgroupSet>,
    pub labels: Vec<String>,
}

impl Series {
    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(SubgroupSet::order).collect()
    }

    pub fn reaches_trivial(&self) -> bool {
        self.terms.last().is_some_and(SubgroupSet::is_trivial)
    }

    /// Nilpotency class for a lower central series ending at 1.
    pub fn class(&self) -> Option<usize> {
        self.reaches_trivial().then(|| self.terms.len() - 1)
    }

    /// The `i`-th term, 1-based; past the end the series is constant.
    pub fn term(&self, i: usize) -> &SubgroupSet {
        assert!(i >= 1, "series terms are 1-based");
        &self.terms[(i - 1).min(self.terms.len() - 1)]
    }
}

fn seed_normal_closure(g: &ConcreteGroup, seeds: Vec<usize>, conjugators: &[usize]) -> SubgroupSet {
    let mut b = SubgroupBuilder::new(g);
    for s in seeds {
        b.add(g, s);
    }
    loop {
        let gens = b.gens().to_vec();
        let mut grew = false;
        for &k in &gens {
            for &t in conjugators {
                grew |= b.add(g, g.conj(k, t));
            }
        }
        if !grew {
            return b.finish();
        }
    }
}

/// `[A, B]`, generated by all `[a, b]`.
///
/// Computed as the normal closure in `<A, B>` of commutators of generators,
/// which is the same subgroup.
pub fn commutator_subgroup(g: &ConcreteGroup, a: &SubgroupSet, b: &SubgroupSet) -> SubgroupSet {
    let ga = generating_set(g, a);
    let gb = generating_set(g, b);
    let seeds = ga
        .iter()
        .flat_map(|&x| gb.iter().map(move |&y| (x, y)))
        .map(|(x, y)| g.commutator(x, y))
        .collect();
    let conj: Vec<usize> = ga.iter().chain(&gb).copied().collect();
    seed_normal_closure(g, seeds, &conj)
}

pub fn derived_subgroup(g: &ConcreteGroup) -> SubgroupSet {
    let whole = g.whole();
    commutator_subgroup(g, &whole, &whole)
}

pub fn lower_central_series(g: &ConcreteGroup) -> Series {
    let whole = g.whole();
    let mut terms = vec![whole.clone()];
    loop {
        let next = commutator_subgroup(g, terms.last().unwrap(), &whole);
        if next.order() == terms.last().unwrap().order() {
            break;
        }
        terms.push(next);
    }
    let labels = (1..=terms.len()).map(|i| format!("gamma_{i}")).collect();
    Series {
        kind: SeriesKind::LowerCentral,
        terms,
        labels,
    }
}

pub fn derived_series(g: &ConcreteGroup) -> Series {
    let mut terms = vec![g.whole()];
    loop {
        let last = terms.last().unwrap();
        let next = commutator_subgroup(g, last, last);
        if next.order() == last.order() {
            break;
        }
        terms.push(next);
    }
    let labels = (0..terms.len()).map(|i| format!("G^({i})")).collect();
    Series {
        kind: SeriesKind::Derived,
        terms,
        labels,
    }
}

pub fn is_solvable(g: &ConcreteGroup) -> bool {
    derived_series(g).reaches_trivial()
}

pub fn is_nilpotent(g: &ConcreteGroup) -> bool {
    lower_central_series(g).reaches_trivial()
}

pub fn nilpotency_class(g: &ConcreteGroup) -> Option<usize> {
    lower_central_series(g).class()
}

pub fn is_abelian_subgroup(g: &ConcreteGroup, h: &SubgroupSet) -> bool {
    let elems = h.elements();
    elems.iter().all(|&x| elems.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
}

pub fn center(g: &ConcreteGroup) -> SubgroupSet {
    centralizer(g, &g.whole())
}

/// `C_G(A)`.
pub fn centralizer(g: &ConcreteGroup, a: &SubgroupSet) -> SubgroupSet {
    let gens = generating_set(g, a);
    let mut bits = FixedBitSet::with_capacity(g.order());
    for x in 0..g.order() {
        if gens.iter().all(|&y| g.mul(x, y) == g.mul(y, x)) {
            bits.insert(x);
        }
    }
    SubgroupSet::from_bits(bits)
}

/// `N_G(H)`, given generators of `H`.
pub fn normalizer_with_gens(g: &ConcreteGroup, h: &SubgroupSet, gens: &[usize]) -> SubgroupSet {
    let mut bits = FixedBitSet::with_capacity(g.order());
    for x in 0..g.order() {
        if gens.iter().all(|&y| h.contains(g.conj(y, x))) {
            bits.insert(x);
        }
    }
    SubgroupSet::from_bits(bits)
}

pub fn normalizer(g: &ConcreteGroup, h: &SubgroupSet) -> SubgroupSet {
    normalizer_with_gens(g, h, &generating_set(g, h))
}

/// Whether `h` is normalized by every element of `over` (default: the whole group).
pub fn is_normal_in(g: &ConcreteGroup, h: &SubgroupSet, over: &SubgroupSet) -> bool {
    let hg = generating_set(g, h);
    let og = generating_set(g, over);
    og.iter()
        .all(|&t| hg.iter().all(|&y| h.contains(g.conj(y, t))))
}

pub fn is_normal(g: &ConcreteGroup, h: &SubgroupSet) -> bool {
    is_normal_in(g, h, &g.whole())
}

/// Intersection of the maximal subgroups; trivial for the trivial group.
pub fn frattini_subgroup(g: &ConcreteGroup) -> SubgroupSet {
    let lattice = crate::subgroups::all_subgroups(g);
    let mut phi = g.whole();
    for &m in &lattice.maximal {
        phi = phi.intersect(&lattice.subgroups[m]);
    }
    if g.order() == 1 {
        g.trivial()
    } else {
        phi
    }
}

/// `H^p [H, H]`, the Frattini subgroup of a `p`-subgroup `H`.
pub fn burnside_frattini(g: &ConcreteGroup, h: &SubgroupSet, p: u64) -> SubgroupSet {
    let gens = generating_set(g, h);
    let mut b = SubgroupBuilder::new(g);
    for x in h.iter() {
        b.add(g, g.pow(x, p));
        for &t in &gens {
            b.add(g, g.commutator(x, t));
        }
    }
    b.finish()
}

fn require_p_group(g: &ConcreteGroup) -> Result<u64> {
    match g.prime_power() {
        Some((p, _)) => Ok(p),
        None if g.order() == 1 => Ok(1),
        None => Err(Error::NotPGroup { order: g.order() }),
    }
}

/// `Omega_k(H)`: generated by elements of `H` of order dividing `p^k`.
pub fn omega_of(g: &ConcreteGroup, h: &SubgroupSet, p: u64, k: u32) -> SubgroupSet {
    let bound = p.pow(k);
    let orders = g.orders();
    closure(g, h.iter().filter(|&x| bound.is_multiple_of(orders[x] as u64)))
}

/// `Mho_k(H)`: generated by the `p^k`-th powers of elements of `H`.
pub fn agemo_of(g: &ConcreteGroup, h: &SubgroupSet, p: u64, k: u32) -> SubgroupSet {
    let e = p.pow(k);
    closure(g, h.iter().map(|x| g.pow(x, e)))
}

pub fn omega_n(g: &ConcreteGroup, k: u32) -> Result<SubgroupSet> {
    let p = require_p_group(g)?;
    if p == 1 {
        return Ok(g.trivial());
    }
    Ok(omega_of(g, &g.whole(), p, k))
}

pub fn agemo_n(g: &ConcreteGroup, k: u32) -> Result<SubgroupSet> {
    let p = require_p_group(g)?;
    if p == 1 {
        return Ok(g.trivial());
    }
    Ok(agemo_of(g, &g.whole(), p, k))
}

pub fn exponent(g: &ConcreteGroup) -> u64 {
    exponent_of(g, &g.whole())
}

pub fn exponent_of(g: &ConcreteGroup, h: &SubgroupSet) -> u64 {
    let orders = g.orders();
    h.iter().fold(1, |acc, x| arith::lcm(acc, orders[x] as u64))
}

/// Outcome of a regularity test; `witness` is the first failing pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    pub witness: Option<(usize, usize)>,
}

/// Tests `(xy)^p = x^p y^p` modulo `Mho_1(gamma_2(<x, y>))` for all pairs.
pub fn is_regular(g: &ConcreteGroup) -> Result<Regularity> {
    let p = require_p_group(g)?;
    let n = g.order();
    if p == 1 || g.is_abelian() {
        return Ok(Regularity {
            regular: true,
            witness: None,
        });
    }
    let pth: Vec<usize> = (0..n).map(|x| g.pow(x, p)).collect();
    let global = agemo_of(g, &derived_subgroup(g), p, 1);
    let cache: Mutex<HashMap<FixedBitSet, SubgroupSet>> = Mutex::new(HashMap::new());

    let fails = |x: usize, y: usize| -> bool {
        let lhs = pth[g.mul(x, y)];
        let rhs = g.mul(pth[x], pth[y]);
        if lhs == rhs {
            return false;
        }
        let z = g.mul(g.inv(rhs), lhs);
        if !global.contains(z) {
            return true;
        }
        let k = closure(g, [x, y]);
        if let Some(m) = cache.lock().unwrap().get(k.bits()) {
            return !m.contains(z);
        }
        let m = agemo_of(g, &commutator_subgroup(g, &k, &k), p, 1);
        let bad = !m.contains(z);
        cache.lock().unwrap().insert(k.bits().clone(), m);
        bad
    };
    let witness = (0..n)
        .into_par_iter()
        .find_map_first(|x| (0..n).find(|&y| fails(x, y)).map(|y| (x, y)));
    Ok(Regularity {
        regular: witness.is_none(),
        witness,
    })
}

/// Abelian invariants of an abelian `p`-group as descending prime powers,
/// read off from the sizes `|Omega_k|`.
pub fn abelian_invariants(g: &ConcreteGroup, h: &SubgroupSet, p: u64) -> Vec<u64> {
    if h.is_trivial() {
        return Vec::new();
    }
    let mut omegas = vec![1usize];
    let mut k = 1;
    loop {
        let o = omega_of(g, h, p, k).order();
        omegas.push(o);
        if o == h.order() {
            break;
        }
        k += 1;
    }
    // r_k = number of cyclic factors of order >= p^k = log_p |Omega_k / Omega_{k-1}|
    let r: Vec<u32> = omegas
        .windows(2)
        .map(|w| arith::log_exact((w[1] / w[0]) as u64, p).unwrap())
        .collect();
    let mut out = Vec::new();
    for (i, &ri) in r.iter().enumerate() {
        let next = r.get(i + 1).copied().unwrap_or(0);
        for _ in 0..ri - next {
            out.push(p.pow(i as u32 + 1));
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn heis3() -> ConcreteGroup {
        parse_presentation(
            "group heis\ngens 3 x y z\norder x 3\norder y 3\norder z 3\nconj y x : y z\nend",
        )
        .unwrap()
        .build_group()
        .unwrap()
    }

    fn brute_commutator(g: &ConcreteGroup, a: &SubgroupSet, b: &SubgroupSet) -> SubgroupSet {
        let seeds: Vec<usize> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| (x, y)))
            .map(|(x, y)| g.commutator(x, y))
            .collect();
        closure(g, seeds)
    }

    #[test]
    fn heisenberg_series() {
        let g = heis3();
        let lcs = lower_central_series(&g);
        assert_eq!(lcs.orders(), vec![27, 3, 1]);
        assert_eq!(lcs.class(), Some(2));
        assert_eq!(center(&g).order(), 3);
        assert_eq!(exponent(&g), 3);
        let w = g.whole();
        assert_eq!(commutator_subgroup(&g, &w, &w), brute_commutator(&g, &w, &w));
        assert!(is_regular(&g).unwrap().regular);
        assert_eq!(omega_n(&g, 1).unwrap().order(), 27);
        assert_eq!(agemo_n(&g, 1).unwrap().order(), 1);
    }

    #[test]
    fn invariants_of_abelian_groups() {
        // C9 x C3
        let g = parse_presentation(
            "group c9c3\ngens 3 a ap b\norder a 3\norder ap 3\norder b 3\npow a : ap\nend",
        )
        .unwrap()
        .build_group()
        .unwrap();
        assert_eq!(abelian_invariants(&g, &g.whole(), 3), vec![9, 3]);
        assert_eq!(omega_n(&g, 1).unwrap().order(), 9);
        assert_eq!(agemo_n(&g, 1).unwrap().order(), 3);
        assert_eq!(exponent(&g), 9);
    }

    #[test]
    fn non_p_group_rejected() {
        let g = parse_presentation("group c6\ngens 2\norder g1 2\norder g2 3\nend")
            .unwrap()
            .build_group()
            .unwrap();
        assert!(matches!(omega_n(&g, 1), Err(Error::NotPGroup { order: 6 })));
        assert!(is_regular(&g).is_err());
    }
}
