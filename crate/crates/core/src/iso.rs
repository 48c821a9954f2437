//! Isomorphism testing by invariant fingerprints and generator backtracking.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::actions::{extend_partial, frattini_of, GroupMap};
use crate::error::Result;
use crate::group::{generating_set, ConcreteGroup};
use crate::series;
use crate::subgroups::min_generators;

/// Cheap isomorphism invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub exponent: u64,
    /// element order -> count
    pub order_histogram: BTreeMap<u32, usize>,
    pub center: usize,
    pub frattini: usize,
    pub derived: usize,
    pub lower_central: Vec<usize>,
    pub rank: usize,
}

pub fn fingerprint(g: &ConcreteGroup) -> Fingerprint {
    let mut order_histogram = BTreeMap::new();
    for &o in g.orders() {
        *order_histogram.entry(o).or_insert(0) += 1;
    }
    Fingerprint {
        order: g.order(),
        exponent: series::exponent(g),
        order_histogram,
        center: series::center(g).order(),
        frattini: frattini_of(g).order(),
        derived: series::derived_subgroup(g).order(),
        lower_central: series::lower_central_series(g).orders(),
        rank: min_generators(g),
    }
}

/// Per-element class: `(order, |C(x)|)`.
fn element_classes(g: &ConcreteGroup) -> Vec<(u32, usize)> {
    let orders = g.orders();
    (0..g.order())
        .map(|x| {
            let c = (0..g.order()).filter(|&y| g.mul(x, y) == g.mul(y, x)).count();
            (orders[x], c)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// An isomorphism `g -> h` when one exists.
    pub map: Option<GroupMap>,
}

pub fn is_isomorphic(g: &ConcreteGroup, h: &ConcreteGroup) -> Result<IsoResult> {
    let no = IsoResult {
        isomorphic: false,
        map: None,
    };
    if g.order() != h.order() || fingerprint(g) != fingerprint(h) {
        return Ok(no);
    }
    let cg = element_classes(g);
    let ch = element_classes(h);
    let mut hist_g: BTreeMap<(u32, usize), usize> = BTreeMap::new();
    let mut hist_h = hist_g.clone();
    cg.iter().for_each(|&k| *hist_g.entry(k).or_default() += 1);
    ch.iter().for_each(|&k| *hist_h.entry(k).or_default() += 1);
    if hist_g != hist_h {
        return Ok(no);
    }
    let gens = generating_set(g, &g.whole());
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (0..h.order()).filter(|&y| ch[y] == cg[s]).collect())
        .collect();

    fn descend(
        g: &ConcreteGroup,
        h: &ConcreteGroup,
        gens: &[usize],
        candidates: &[Vec<usize>],
        chosen: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        let pairs: Vec<(usize, usize)> = gens.iter().copied().zip(chosen.iter().copied()).collect();
        let table = extend_partial(g, h, &pairs).ok()?;
        // the partial map must be injective on the subgroup reached so far
        let reached: Vec<usize> = table.iter().copied().filter(|&y| y != usize::MAX).collect();
        let mut seen = fixedbitset::FixedBitSet::with_capacity(h.order());
        if reached.iter().any(|&y| seen.put(y)) {
            return None;
        }
        if chosen.len() == gens.len() {
            return Some(table);
        }
        for &y in &candidates[chosen.len()] {
            chosen.push(y);
            if let Some(t) = descend(g, h, gens, candidates, chosen) {
                return Some(t);
            }
            chosen.pop();
        }
        None
    }

    let table = descend(g, h, &gens, &candidates, &mut Vec::new());
    Ok(match table {
        Some(t) => IsoResult {
            isomorphic: true,
            map: Some(GroupMap::from_table(g, t)),
        },
        None => no,
    })
}
