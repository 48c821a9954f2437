//! Slow reference implementations used to cross-check the lattice code.
//!
//! Nothing here shares code with [`crate::subgroups`]: subgroups are grown from
//! cyclic ones by adjoining single elements until nothing new appears, and
//! `d(H)` is found by trying generator tuples of increasing length.

use std::collections::{BTreeSet, HashSet};

use crate::group::ConcreteGroup;

/// Closure of `seed` under multiplication, as a sorted element list.
pub fn naive_closure(g: &ConcreteGroup, seed: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut members = vec![0];
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        for &s in seed {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                members.push(y);
            }
        }
        i += 1;
    }
    members.sort_unstable();
    members
}

/// Every subgroup as a sorted element list, sorted by `(order, elements)`.
pub fn naive_subgroups(g: &ConcreteGroup) -> Vec<Vec<usize>> {
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for x in 0..g.order() {
        let h = naive_closure(g, &[x]);
        if found.insert(h.clone()) {
            frontier.push(h);
        }
    }
    while let Some(h) = frontier.pop() {
        let members: BTreeSet<usize> = h.iter().copied().collect();
        for x in 0..g.order() {
            if members.contains(&x) {
                continue;
            }
            let mut seed = h.clone();
            seed.push(x);
            let k = naive_closure(g, &seed);
            if found.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// Least `k` such that some `k` elements of `h` generate it.
///
/// Tuples range over one generator per cyclic subgroup, which loses nothing
/// since replacing an element by another generator of the same cyclic
/// subgroup does not change the subgroup generated.
pub fn naive_rank(g: &ConcreteGroup, h: &[usize]) -> usize {
    if h.len() <= 1 {
        return 0;
    }
    let mut cyclic: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for &x in h {
        let c = naive_closure(g, &[x]);
        if seen.insert(c.clone()) {
            cyclic.push((c, x));
        }
    }
    let reps: Vec<usize> = cyclic.iter().map(|c| c.1).collect();
    for k in 1..=h.len() {
        if tuple_generates(g, h.len(), &reps, k, 0, &mut Vec::new()) {
            return k;
        }
    }
    unreachable!("a subgroup is generated by its own elements")
}

fn tuple_generates(g: &ConcreteGroup, target: usize, reps: &[usize], k: usize, from: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        return naive_closure(g, chosen).len() == target;
    }
    for i in from..reps.len() {
        chosen.push(reps[i]);
        if tuple_generates(g, target, reps, k, i + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// `d(G)` by exhaustive search.
pub fn naive_min_generators(g: &ConcreteGroup) -> usize {
    let all: Vec<usize> = (0..g.order()).collect();
    naive_rank(g, &all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_group;

    #[test]
    fn known_counts() {
        let v4 = get_group("ea-2-2").unwrap();
        assert_eq!(naive_subgroups(&v4.group).len(), 5);
        let q8 = get_group("q8").unwrap();
        assert_eq!(naive_subgroups(&q8.group).len(), 6);
        assert_eq!(naive_min_generators(&q8.group), 2);
        let c12 = get_group("c12").unwrap();
        assert_eq!(naive_subgroups(&c12.group).len(), 6);
        assert_eq!(naive_min_generators(&c12.group), 1);
    }
}
