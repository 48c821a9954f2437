//! Subgroup lattices, minimal generator counts and jumps.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{closure, generating_set, ConcreteGroup, SubgroupBuilder, SubgroupSet};
use crate::series;

/// Every subgroup of a group, sorted by `(order, element list)`.
#[derive(Debug)]
pub struct SubgroupLattice {
    pub subgroups: Vec<SubgroupSet>,
    /// A generating set for each subgroup.
    pub gens: Vec<Vec<usize>>,
    /// Indices of the maximal subgroups.
    pub maximal: Vec<usize>,
    pub by_order: BTreeMap<usize, Vec<usize>>,
    index: HashMap<FixedBitSet, usize>,
    ranks: OnceLock<Vec<usize>>,
}

impl SubgroupLattice {
    fn new(g: &ConcreteGroup, found: Vec<(SubgroupSet, Vec<usize>)>) -> Self {
        let mut keyed: Vec<(Vec<usize>, SubgroupSet, Vec<usize>)> = found
            .into_iter()
            .map(|(h, gens)| (h.elements(), h, gens))
            .collect();
        keyed.sort_by(|a, b| (a.1.order(), &a.0).cmp(&(b.1.order(), &b.0)));
        let (subgroups, gens): (Vec<_>, Vec<_>) = keyed.into_iter().map(|(_, h, gs)| (h, gs)).unzip();
        let index = subgroups
            .iter()
            .enumerate()
            .map(|(i, h)| (h.bits().clone(), i))
            .collect();
        let mut by_order: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, h) in subgroups.iter().enumerate() {
            by_order.entry(h.order()).or_default().push(i);
        }
        let mut lattice = SubgroupLattice {
            subgroups,
            gens,
            maximal: Vec::new(),
            by_order,
            index,
            ranks: OnceLock::new(),
        };
        let top = lattice.len() - 1;
        lattice.maximal = lattice.maximal_within(top);
        debug_assert_eq!(lattice.subgroups[top].order(), g.order());
        lattice
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn index_of(&self, h: &SubgroupSet) -> Option<usize> {
        self.index.get(h.bits()).copied()
    }

    /// Indices of the maximal subgroups of the `idx`-th subgroup, ascending.
    pub fn maximal_within(&self, idx: usize) -> Vec<usize> {
        let h = &self.subgroups[idx];
        let mut found: Vec<usize> = Vec::new();
        // A proper subgroup that is not maximal lies in some larger maximal one,
        // already seen when scanning by descending order.
        for j in (0..idx).rev() {
            let k = &self.subgroups[j];
            if k.order() == h.order() || !h.order().is_multiple_of(k.order()) || !k.is_subset(h) {
                continue;
            }
            if found.iter().all(|&m| !k.is_subset(&self.subgroups[m])) {
                found.push(j);
            }
        }
        found.reverse();
        found
    }

    /// `d(H)` for every subgroup, in lattice order.
    pub fn ranks(&self, g: &ConcreteGroup) -> &[usize] {
        self.ranks.get_or_init(|| {
            (0..self.len())
                .into_par_iter()
                .map(|i| self.rank_of_index(g, i))
                .collect()
        })
    }

    fn rank_of_index(&self, g: &ConcreteGroup, idx: usize) -> usize {
        let h = &self.subgroups[idx];
        if let Some(d) = rank_nilpotent(g, h) {
            return d;
        }
        let phi = self
            .maximal_within(idx)
            .iter()
            .fold(h.clone(), |acc, &m| acc.intersect(&self.subgroups[m]));
        rank_over_frattini(g, h, &phi)
    }
}

/// `d(H)` when `H` is nilpotent; `None` otherwise.
fn rank_nilpotent(g: &ConcreteGroup, h: &SubgroupSet) -> Option<usize> {
    if h.is_trivial() {
        return Some(0);
    }
    let factors = arith::factorize(h.order() as u64);
    if let [(p, _)] = factors.as_slice() {
        let phi = series::burnside_frattini(g, h, *p);
        return Some(arith::log_exact((h.order() / phi.order()) as u64, *p).unwrap() as usize);
    }
    let orders = g.orders();
    let mut d = 0;
    for &(p, k) in &factors {
        let sylow: Vec<usize> = h
            .iter()
            .filter(|&x| arith::log_exact(orders[x] as u64, p).is_some())
            .collect();
        if sylow.len() as u64 != p.pow(k) {
            return None;
        }
        let s = closure(g, sylow);
        let phi = series::burnside_frattini(g, &s, p);
        d = d.max(arith::log_exact((s.order() / phi.order()) as u64, p).unwrap() as usize);
    }
    Some(d)
}

/// Least `k` such that `k` elements together with `phi` generate `h`.
fn rank_over_frattini(g: &ConcreteGroup, h: &SubgroupSet, phi: &SubgroupSet) -> usize {
    if h.order() == phi.order() {
        return 0;
    }
    let mut covered = FixedBitSet::with_capacity(g.order());
    let mut reps = Vec::new();
    for x in h.iter() {
        if covered.contains(x) {
            continue;
        }
        reps.push(x);
        for f in phi.iter() {
            covered.insert(g.mul(x, f));
        }
    }
    let phi_gens = generating_set(g, phi);
    let mut level: Vec<SubgroupBuilder> = vec![SubgroupBuilder::from_subgroup(phi, &phi_gens)];
    for k in 1.. {
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut next = Vec::new();
        for s in &level {
            for &x in &reps {
                if s.contains(x) {
                    continue;
                }
                let mut t = s.clone();
                t.add(g, x);
                if t.order() == h.order() {
                    return k;
                }
                let (bits, gens) = t.clone().finish_with_gens();
                if seen.insert(bits.bits().clone()) {
                    next.push(SubgroupBuilder::from_subgroup(&bits, &gens));
                }
            }
        }
        level = next;
    }
    unreachable!()
}

/// The full subgroup lattice, computed once per group.
pub fn all_subgroups(g: &ConcreteGroup) -> Arc<SubgroupLattice> {
    g.lattice
        .get_or_init(|| {
            let found = if series::is_solvable(g) {
                cyclic_extensions(g)
            } else {
                cyclic_joins(g)
            };
            Arc::new(SubgroupLattice::new(g, found))
        })
        .clone()
}

/// Every subgroup `K != 1` of a solvable group has a normal subgroup `H` of
/// prime index, so `K = <H, x>` for some `x` in `N(H)` of prime order mod `H`.
/// Subgroups are discovered level by level in increasing order.
fn cyclic_extensions(g: &ConcreteGroup) -> Vec<(SubgroupSet, Vec<usize>)> {
    let mut all: HashMap<FixedBitSet, Vec<usize>> = HashMap::new();
    let trivial = g.trivial();
    all.insert(trivial.bits().clone(), Vec::new());
    let mut by_order: BTreeMap<usize, Vec<(SubgroupSet, Vec<usize>)>> = BTreeMap::new();
    by_order.insert(1, vec![(trivial, Vec::new())]);

    while let Some((_, level)) = by_order.pop_first() {
        let extensions: Vec<Vec<(SubgroupSet, Vec<usize>)>> = level
            .par_iter()
            .map(|(h, gens)| extend_once(g, h, gens))
            .collect();
        for (k, gens) in extensions.into_iter().flatten() {
            if !all.contains_key(k.bits()) {
                all.insert(k.bits().clone(), gens.clone());
                by_order.entry(k.order()).or_default().push((k, gens));
            }
        }
    }
    all.into_iter()
        .map(|(bits, gens)| (SubgroupSet::from_bits(bits), gens))
        .collect()
}

fn extend_once(g: &ConcreteGroup, h: &SubgroupSet, gens: &[usize]) -> Vec<(SubgroupSet, Vec<usize>)> {
    let norm = series::normalizer_with_gens(g, h, gens);
    let mut covered = h.bits().clone();
    let mut out = Vec::new();
    for x in norm.iter() {
        if covered.contains(x) {
            continue;
        }
        // order of x modulo h
        let mut r = 1;
        let mut y = x;
        while !h.contains(y) {
            y = g.mul(y, x);
            r += 1;
        }
        if !arith::is_prime(r) {
            continue;
        }
        let mut bits = FixedBitSet::with_capacity(g.order());
        let mut coset_rep = 0;
        for _ in 0..r {
            for e in h.iter() {
                bits.insert(g.mul(e, coset_rep));
            }
            coset_rep = g.mul(coset_rep, x);
        }
        covered.union_with(&bits);
        let mut kg = gens.to_vec();
        kg.push(x);
        out.push((SubgroupSet::from_bits(bits), kg));
    }
    out
}

/// Generic enumeration: repeatedly join known subgroups with cyclic subgroups.
fn cyclic_joins(g: &ConcreteGroup) -> Vec<(SubgroupSet, Vec<usize>)> {
    let mut cyclic: HashMap<FixedBitSet, usize> = HashMap::new();
    for x in 0..g.order() {
        let c = closure(g, [x]);
        cyclic.entry(c.bits().clone()).or_insert(x);
    }
    let mut cyc_gens: Vec<usize> = cyclic.values().copied().collect();
    cyc_gens.sort_unstable();

    let mut all: HashMap<FixedBitSet, Vec<usize>> = HashMap::new();
    let mut frontier: Vec<(SubgroupSet, Vec<usize>)> = Vec::new();
    for &x in &cyc_gens {
        let c = closure(g, [x]);
        let gens = if x == 0 { Vec::new() } else { vec![x] };
        all.insert(c.bits().clone(), gens.clone());
        frontier.push((c, gens));
    }
    while !frontier.is_empty() {
        let joins: Vec<Vec<(SubgroupSet, Vec<usize>)>> = frontier
            .par_iter()
            .map(|(h, gens)| {
                cyc_gens
                    .iter()
                    .filter(|&&x| !h.contains(x))
                    .map(|&x| {
                        let mut b = SubgroupBuilder::from_subgroup(h, gens);
                        b.add(g, x);
                        b.finish_with_gens()
                    })
                    .collect()
            })
            .collect();
        frontier = Vec::new();
        for (k, gens) in joins.into_iter().flatten() {
            if !all.contains_key(k.bits()) {
                all.insert(k.bits().clone(), gens.clone());
                frontier.push((k, gens));
            }
        }
    }
    all.into_iter()
        .map(|(bits, gens)| (SubgroupSet::from_bits(bits), gens))
        .collect()
}

pub fn maximal_subgroups(g: &ConcreteGroup) -> Vec<SubgroupSet> {
    let lattice = all_subgroups(g);
    lattice
        .maximal
        .iter()
        .map(|&i| lattice.subgroups[i].clone())
        .collect()
}

/// `d(G)`, the least size of a generating set.
pub fn min_generators(g: &ConcreteGroup) -> usize {
    *g.rank.get_or_init(|| subgroup_rank(g, &g.whole()))
}

/// `d(H)` for a subgroup `H` of `g`.
pub fn subgroup_rank(g: &ConcreteGroup, h: &SubgroupSet) -> usize {
    if let Some(d) = rank_nilpotent(g, h) {
        return d;
    }
    let lattice = all_subgroups(g);
    let idx = lattice.index_of(h).expect("subgroup missing from lattice");
    lattice.rank_of_index(g, idx)
}

/// Indices `j` with `H ∩ gamma_j != H ∩ gamma_{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpSet {
    pub subgroup: SubgroupSet,
    pub jumps: Vec<usize>,
}

pub fn jumps(g: &ConcreteGroup, h: &SubgroupSet) -> Result<JumpSet> {
    let lcs = series::lower_central_series(g);
    jumps_in(&lcs, h)
}

/// Jumps against a precomputed lower central series.
pub fn jumps_in(lcs: &series::Series, h: &SubgroupSet) -> Result<JumpSet> {
    let class = lcs.class().ok_or(Error::NotNilpotent)?;
    let jumps = (1..=class)
        .filter(|&j| h.intersect(lcs.term(j)).order() != h.intersect(lcs.term(j + 1)).order())
        .collect();
    Ok(JumpSet {
        subgroup: h.clone(),
        jumps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn build(text: &str) -> ConcreteGroup {
        parse_presentation(text).unwrap().build_group().unwrap()
    }

    #[test]
    fn klein_four_and_q8() {
        let v4 = build("group v4\ngens 2\norder g1 2\norder g2 2\nend");
        assert_eq!(all_subgroups(&v4).len(), 5);
        assert_eq!(maximal_subgroups(&v4).len(), 3);
        assert_eq!(min_generators(&v4), 2);
        let q8 = build(
            "group q8\ngens 3\norder g1 2\norder g2 2\norder g3 2\npow g1 : g3\npow g2 : g3\nconj g2 g1 : g2 g3\nend",
        );
        let lat = all_subgroups(&q8);
        assert_eq!(lat.len(), 6);
        let maxs = maximal_subgroups(&q8);
        assert_eq!(maxs.len(), 3);
        assert!(maxs.iter().all(|m| m.order() == 4));
        assert_eq!(min_generators(&q8), 2);
    }

    #[test]
    fn lattice_is_sorted_and_indexed() {
        let g = build("group c12\ngens 3\norder g1 2\norder g2 2\norder g3 3\npow g1 : g2\nend");
        let lat = all_subgroups(&g);
        // divisors of 12
        assert_eq!(lat.len(), 6);
        assert!(lat.subgroups.windows(2).all(|w| w[0].order() <= w[1].order()));
        for (i, h) in lat.subgroups.iter().enumerate() {
            assert_eq!(lat.index_of(h), Some(i));
            assert_eq!(closure(&g, lat.gens[i].iter().copied()), *h);
        }
        assert_eq!(min_generators(&g), 1);
    }

    #[test]
    fn non_nilpotent_rank() {
        // S3
        let g = build("group s3\ngens 2\norder g1 2\norder g2 3\nconj g2 g1 : g2^2\nend");
        assert_eq!(all_subgroups(&g).len(), 6);
        assert_eq!(min_generators(&g), 2);
        assert_eq!(series::frattini_subgroup(&g).order(), 1);
    }

    #[test]
    fn heisenberg_jumps() {
        let g = build("group heis\ngens 3 x y z\norder x 3\norder y 3\norder z 3\nconj y x : y z\nend");
        assert_eq!(jumps(&g, &g.whole()).unwrap().jumps, vec![1, 2]);
        let d = series::derived_subgroup(&g);
        assert_eq!(jumps(&g, &d).unwrap().jumps, vec![2]);
    }
}
