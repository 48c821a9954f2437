//! Homomorphisms, automorphism search and actions through characters.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{closure, ConcreteGroup, SubgroupSet};
use crate::outcome::Outcome;
use crate::series;

const UNSET: usize = usize::MAX;

/// A homomorphism stored as a total element map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMap {
    /// Images of the source group's generators.
    pub images: Vec<usize>,
    pub table: Vec<usize>,
}

impl GroupMap {
    pub fn identity(g: &ConcreteGroup) -> Self {
        GroupMap {
            images: g.gens().to_vec(),
            table: (0..g.order()).collect(),
        }
    }

    /// Builds a map from a table already known to be a homomorphism.
    pub fn from_table(g: &ConcreteGroup, table: Vec<usize>) -> Self {
        GroupMap {
            images: g.gens().iter().map(|&x| table[x]).collect(),
            table,
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.table.len());
        self.table.iter().all(|&y| y < self.table.len() && !seen.put(y))
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        GroupMap {
            images: other.images.iter().map(|&y| self.table[y]).collect(),
            table: other.table.iter().map(|&y| self.table[y]).collect(),
        }
    }

    pub fn inverse(&self, g: &ConcreteGroup) -> Result<GroupMap> {
        if !self.is_bijective() {
            return Err(Error::NotBijective);
        }
        let mut table = vec![0; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Ok(GroupMap::from_table(g, table))
    }

    pub fn power(&self, g: &ConcreteGroup, k: u64) -> GroupMap {
        let mut acc = GroupMap::identity(g);
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// `f(H)` as a subset of the target.
    pub fn image(&self, h: &SubgroupSet) -> SubgroupSet {
        let mut bits = FixedBitSet::with_capacity(h.parent_order());
        for x in h.iter() {
            bits.insert(self.table[x]);
        }
        SubgroupSet::from_bits(bits)
    }

    /// `f(H) = H` as sets.
    pub fn preserves(&self, h: &SubgroupSet) -> bool {
        h.iter().all(|x| h.contains(self.table[x]))
    }
}

/// Extends `pairs` (source element, target element) to a homomorphism on the
/// subgroup they generate, walking its Cayley graph. `Err((x, s))` means the
/// edge `x -> x*s` contradicts an earlier assignment.
pub(crate) fn extend_partial(
    source: &ConcreteGroup,
    target: &ConcreteGroup,
    pairs: &[(usize, usize)],
) -> std::result::Result<Vec<usize>, (usize, usize)> {
    let mut table = vec![UNSET; source.order()];
    table[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let fx = table[x];
        for &(s, t) in pairs {
            let y = source.mul(x, s);
            let fy = target.mul(fx, t);
            if table[y] == UNSET {
                table[y] = fy;
                queue.push_back(y);
            } else if table[y] != fy {
                return Err((x, s));
            }
        }
    }
    Ok(table)
}

/// The unique homomorphism sending `source.gens()[i]` to `images[i]`, if any.
pub fn hom_from_images(source: &ConcreteGroup, target: &ConcreteGroup, images: &[usize]) -> Result<GroupMap> {
    if images.len() != source.gens().len() {
        return Err(Error::ImageCount {
            expected: source.gens().len(),
            got: images.len(),
        });
    }
    let pairs: Vec<(usize, usize)> = source.gens().iter().copied().zip(images.iter().copied()).collect();
    let map = hom_from_pairs(source, target, &pairs)?;
    Ok(GroupMap {
        images: images.to_vec(),
        table: map.table,
    })
}

/// Like [`hom_from_images`] but for any generating set of the source.
pub fn hom_from_pairs(source: &ConcreteGroup, target: &ConcreteGroup, pairs: &[(usize, usize)]) -> Result<GroupMap> {
    if pairs.iter().any(|&(s, t)| s >= source.order() || t >= target.order()) {
        return Err(Error::Precondition("element index out of range".into()));
    }
    let table = extend_partial(source, target, pairs).map_err(|(x, y)| Error::NotHomomorphism { x, y })?;
    if table.contains(&UNSET) {
        return Err(Error::Precondition("mapped elements do not generate the source".into()));
    }
    Ok(GroupMap::from_table(source, table))
}

fn literal_word(g: &ConcreteGroup, text: &str) -> Result<usize> {
    let text = text.trim();
    if text == "1" || text.is_empty() {
        return Ok(0);
    }
    let mut acc = 0;
    for tok in text.split_whitespace() {
        let (name, e) = match tok.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| Error::Precondition(format!("bad exponent in {tok:?}")))?,
            ),
            None => (tok, 1),
        };
        let k = g
            .gen_names()
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Precondition(format!("unknown generator {name:?}")))?;
        acc = g.mul(acc, g.zpow(g.gens()[k], e));
    }
    Ok(acc)
}

/// Parses `"b->b^2 e, c->c^2 e"` into an endomorphism of `g`. The named
/// generators need only generate `g`; other images are forced.
pub fn hom_from_literal(g: &ConcreteGroup, text: &str) -> Result<GroupMap> {
    let mut pairs = Vec::new();
    for clause in text.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        let (lhs, rhs) = clause
            .split_once("->")
            .ok_or_else(|| Error::Precondition(format!("expected `gen->word` in {clause:?}")))?;
        pairs.push((literal_word(g, lhs)?, literal_word(g, rhs)?));
    }
    hom_from_pairs(g, g, &pairs)
}

/// Least `k >= 1` with `f^k = id`.
pub fn map_order(f: &GroupMap) -> Result<u64> {
    if !f.is_bijective() {
        return Err(Error::NotBijective);
    }
    // lcm of the cycle lengths of the permutation
    let n = f.table.len();
    let mut seen = FixedBitSet::with_capacity(n);
    let mut ord = 1u64;
    for start in 0..n {
        if seen.contains(start) {
            continue;
        }
        let mut len = 0u64;
        let mut x = start;
        while !seen.put(x) {
            x = f.table[x];
            len += 1;
        }
        ord = arith::lcm(ord, len);
    }
    Ok(ord)
}

/// A character value `k` acting on a section of exponent `exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterValue {
    pub modulus: u64,
    /// `k mod p`.
    pub value: u64,
    /// Multiplicative order of `value` modulo `modulus`.
    pub order: u64,
    /// Exponent of the section.
    pub exponent: u64,
    /// `k mod exponent`, in `1..exponent` (1 for a trivial section).
    pub power: u64,
}

impl CharacterValue {
    pub fn new(modulus: u64, power: u64, exponent: u64) -> Self {
        let value = power % modulus;
        CharacterValue {
            modulus,
            value,
            order: arith::mult_order(value, modulus).unwrap_or(0),
            exponent,
            power,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.value == 1
    }

    /// `chi^i` reduced mod the prime.
    pub fn pow(&self, i: u64) -> u64 {
        arith::pow_mod(self.value, i, self.modulus)
    }
}

fn order_mod(g: &ConcreteGroup, x: usize, b: &SubgroupSet) -> u64 {
    let mut k = 1;
    let mut y = x;
    while !b.contains(y) {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

/// The `k` with `f(x) = x^k` modulo `B` for all `x` in `A`, least positive on ties.
pub fn acts_through_character(
    g: &ConcreteGroup,
    f: &GroupMap,
    a: &SubgroupSet,
    b: &SubgroupSet,
) -> Result<Option<CharacterValue>> {
    if !b.is_subset(a) {
        return Err(Error::Precondition("B is not contained in A".into()));
    }
    if !f.preserves(a) || !f.preserves(b) {
        return Err(Error::Precondition("the map does not preserve A and B".into()));
    }
    if !series::is_normal_in(g, b, a) {
        return Err(Error::NotNormal);
    }
    let index = (a.order() / b.order()) as u64;
    let p = match arith::prime_power(index) {
        Some((p, _)) => p,
        None if index == 1 => arith::factorize(g.order() as u64).first().map_or(1, |f| f.0),
        None => return Err(Error::Precondition("A/B is not a p-group".into())),
    };
    if index == 1 {
        return Ok(Some(CharacterValue::new(p.max(2), 1, 1)));
    }
    let (x, e) = a
        .iter()
        .map(|x| (x, order_mod(g, x, b)))
        .max_by_key(|&(x, e)| (e, std::cmp::Reverse(x)))
        .unwrap();
    let fx_inv = g.inv(f.apply(x));
    let mut k = None;
    let mut y = 0;
    for c in 1..=e {
        y = g.mul(y, x);
        if b.contains(g.mul(fx_inv, y)) {
            k = Some(c);
            break;
        }
    }
    let Some(k) = k else { return Ok(None) };
    for z in a.iter() {
        if !b.contains(g.mul(g.inv(f.apply(z)), g.pow(z, k))) {
            return Ok(None);
        }
    }
    Ok(Some(CharacterValue::new(p, k, e)))
}

/// Frattini subgroup of a `p`-group, or the lattice intersection otherwise.
pub(crate) fn frattini_of(g: &ConcreteGroup) -> SubgroupSet {
    match g.prime_power() {
        Some((p, _)) => series::burnside_frattini(g, &g.whole(), p),
        None => series::frattini_subgroup(g),
    }
}

/// The scalar by which `f` acts on `G / Phi(G)`, if it acts as one.
pub fn frattini_scalar(g: &ConcreteGroup, f: &GroupMap) -> Option<CharacterValue> {
    let phi = frattini_of(g);
    acts_through_character(g, f, &g.whole(), &phi).ok().flatten()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConstraints {
    /// Required automorphism order.
    pub order: u64,
    /// Required scalar on the Frattini quotient.
    pub scalar: u64,
    pub limit: Option<usize>,
}

/// Greedy generating set whose images span `G / Phi`, longest orders first.
pub(crate) fn frattini_basis(g: &ConcreteGroup, phi: &SubgroupSet) -> Vec<usize> {
    let orders = g.orders();
    let mut elems: Vec<usize> = (0..g.order()).collect();
    elems.sort_by_key(|&x| (std::cmp::Reverse(orders[x]), x));
    let mut b = crate::group::SubgroupBuilder::from_subgroup(phi, &crate::group::generating_set(g, phi));
    let mut basis = Vec::new();
    for x in elems {
        if b.order() == g.order() {
            break;
        }
        if b.add(g, x) {
            basis.push(x);
        }
    }
    basis
}

/// Automorphisms of the `p`-group `g` with the given order and Frattini scalar.
pub fn search_automorphisms(g: &ConcreteGroup, c: SearchConstraints) -> Result<Vec<GroupMap>> {
    let (p, _) = g.prime_power().ok_or(Error::NotPGroup { order: g.order() })?;
    if c.scalar.is_multiple_of(p) {
        return Err(Error::Precondition(format!("scalar {} is not a unit mod {p}", c.scalar)));
    }
    let phi = series::burnside_frattini(g, &g.whole(), p);
    let basis = frattini_basis(g, &phi);
    let orders = g.orders();
    let candidates: Vec<Vec<usize>> = basis
        .iter()
        .map(|&b| {
            let bc_inv = g.inv(g.pow(b, c.scalar));
            (0..g.order())
                .filter(|&y| orders[y] == orders[b] && phi.contains(g.mul(bc_inv, y)))
                .collect()
        })
        .collect();

    fn descend(
        g: &ConcreteGroup,
        basis: &[usize],
        candidates: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        want: u64,
        out: &mut Vec<GroupMap>,
    ) {
        let pairs: Vec<(usize, usize)> = basis.iter().copied().zip(chosen.iter().copied()).collect();
        let Ok(table) = extend_partial(g, g, &pairs) else {
            return;
        };
        if chosen.len() == basis.len() {
            let f = GroupMap::from_table(g, table);
            if f.is_bijective() && map_order(&f).ok() == Some(want) {
                out.push(f);
            }
            return;
        }
        for &y in &candidates[chosen.len()] {
            chosen.push(y);
            descend(g, basis, candidates, chosen, want, out);
            chosen.pop();
        }
    }

    if basis.is_empty() {
        let id = GroupMap::identity(g);
        return Ok(if c.order == 1 { vec![id] } else { Vec::new() });
    }
    let found: Vec<Vec<GroupMap>> = candidates[0]
        .par_iter()
        .map(|&y0| {
            let mut out = Vec::new();
            descend(g, &basis, &candidates, &mut vec![y0], c.order, &mut out);
            out
        })
        .collect();
    let mut all: Vec<GroupMap> = found.into_iter().flatten().collect();
    if let Some(limit) = c.limit {
        all.truncate(limit);
    }
    Ok(all)
}

/// Eigen-subgroups of an involutory automorphism on an abelian group of odd order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusMinusSplit {
    pub plus: SubgroupSet,
    pub minus: SubgroupSet,
}

pub fn plus_minus_split(g: &ConcreteGroup, m: &SubgroupSet, f: &GroupMap) -> Result<PlusMinusSplit> {
    if m.order().is_multiple_of(2) {
        return Err(Error::Precondition("M must have odd order".into()));
    }
    let elems = m.elements();
    if elems.iter().any(|&x| elems.iter().any(|&y| g.mul(x, y) != g.mul(y, x))) {
        return Err(Error::Precondition("M is not abelian".into()));
    }
    if !f.preserves(m) || elems.iter().any(|&x| f.apply(f.apply(x)) != x) {
        return Err(Error::Precondition("the map is not an involution on M".into()));
    }
    let mut plus = FixedBitSet::with_capacity(g.order());
    let mut minus = FixedBitSet::with_capacity(g.order());
    for &x in &elems {
        plus.insert(g.mul(x, f.apply(x)));
        minus.insert(g.mul(x, g.inv(f.apply(x))));
    }
    Ok(PlusMinusSplit {
        plus: SubgroupSet::from_bits(plus),
        minus: SubgroupSet::from_bits(minus),
    })
}

/// If `f` inverts `N` and `P/N`, then `P` is abelian and `f` is inversion.
/// Returns `Vacuous` when the hypothesis fails.
pub fn inversion_forces_abelian(g: &ConcreteGroup, n: &SubgroupSet, f: &GroupMap) -> Outcome {
    let inverts_n = n.iter().all(|x| f.apply(x) == g.inv(x));
    let inverts_quotient = (0..g.order()).all(|x| n.contains(g.mul(f.apply(x), x)));
    if !(inverts_n && inverts_quotient) {
        return Outcome::Vacuous;
    }
    Outcome::from_bool(g.is_abelian() && (0..g.order()).all(|x| f.apply(x) == g.inv(x)))
}

pub fn inversion_forces_abelian_check(g: &ConcreteGroup, n: &SubgroupSet, f: &GroupMap) -> bool {
    inversion_forces_abelian(g, n, f).holds()
}

/// Restriction of `f` to an `f`-invariant subgroup, as a map on the subgroup's own group.
pub fn restrict(
    f: &GroupMap,
    sub: &ConcreteGroup,
    embedding: &[usize],
) -> Result<GroupMap> {
    let mut back = vec![UNSET; f.table.len()];
    for (i, &x) in embedding.iter().enumerate() {
        back[x] = i;
    }
    let table: Vec<usize> = embedding.iter().map(|&x| back[f.apply(x)]).collect();
    if table.contains(&UNSET) {
        return Err(Error::Precondition("subgroup is not invariant".into()));
    }
    Ok(GroupMap::from_table(sub, table))
}

/// Scalar of `f` on `H / Phi(H)` for an invariant `p`-subgroup `H`.
pub fn subgroup_frattini_scalar(g: &ConcreteGroup, f: &GroupMap, h: &SubgroupSet) -> Option<CharacterValue> {
    let p = arith::prime_power(h.order() as u64)?.0;
    let phi = series::burnside_frattini(g, h, p);
    acts_through_character(g, f, h, &phi).ok().flatten()
}

/// Elements of `g` fixed by `f`.
pub fn fixed_points(g: &ConcreteGroup, f: &GroupMap) -> SubgroupSet {
    closure(g, (0..g.order()).filter(|&x| f.apply(x) == x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn build(text: &str) -> ConcreteGroup {
        parse_presentation(text).unwrap().build_group().unwrap()
    }

    fn c3c3() -> ConcreteGroup {
        build("group ea\ngens 2\norder g1 3\norder g2 3\nend")
    }

    #[test]
    fn inversion_on_c3xc3() {
        let g = c3c3();
        let imgs: Vec<usize> = g.gens().iter().map(|&x| g.inv(x)).collect();
        let f = hom_from_images(&g, &g, &imgs).unwrap();
        assert_eq!(map_order(&f).unwrap(), 2);
        let ch = acts_through_character(&g, &f, &g.whole(), &g.trivial()).unwrap().unwrap();
        assert_eq!((ch.value, ch.order), (2, 2));
        let split = plus_minus_split(&g, &g.whole(), &f).unwrap();
        assert_eq!((split.plus.order(), split.minus.order()), (1, 9));
        let id = GroupMap::identity(&g);
        assert_eq!(map_order(&id).unwrap(), 1);
        assert_eq!(frattini_scalar(&g, &id).unwrap().value, 1);
    }

    #[test]
    fn diagonal_is_not_scalar() {
        let g = c3c3();
        let f = hom_from_images(&g, &g, &[g.gens()[0], g.inv(g.gens()[1])]).unwrap();
        assert_eq!(acts_through_character(&g, &f, &g.whole(), &g.trivial()).unwrap(), None);
        assert_eq!(frattini_scalar(&g, &f), None);
    }

    #[test]
    fn wrong_image_count() {
        let g = c3c3();
        assert!(matches!(
            hom_from_images(&g, &g, &[0]),
            Err(Error::ImageCount { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn search_on_c9() {
        let g = build("group c9\ngens 2\norder g1 3\norder g2 3\npow g1 : g2\nend");
        let none = search_automorphisms(&g, SearchConstraints { order: 2, scalar: 1, limit: None }).unwrap();
        assert!(none.is_empty());
        let inv = search_automorphisms(&g, SearchConstraints { order: 2, scalar: 2, limit: None }).unwrap();
        assert_eq!(inv.len(), 1);
        assert!((0..9).all(|x| inv[0].apply(x) == g.inv(x)));
    }
}
