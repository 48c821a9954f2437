//! Lattice, series and rank computations against brute-force references.

use std::sync::Arc;

use maxpair_core::catalog::{get_group, list_catalog, CatalogGroup};
use maxpair_core::group::ConcreteGroup;
use maxpair_core::oracle::{naive_closure, naive_min_generators, naive_rank, naive_subgroups};
use maxpair_core::series;
use maxpair_core::subgroups::{all_subgroups, jumps, min_generators};

fn catalog_up_to(n: usize) -> Vec<Arc<CatalogGroup>> {
    list_catalog()
        .into_iter()
        .filter(|s| !s.extension_slot)
        .map(|s| get_group(&s.id).unwrap())
        .filter(|e| e.group.order() <= n)
        .collect()
}

fn brute_center(g: &ConcreteGroup) -> Vec<usize> {
    (0..g.order())
        .filter(|&x| (0..g.order()).all(|y| g.mul(x, y) == g.mul(y, x)))
        .collect()
}

/// `[A, G]` for a normal `A`, from every commutator.
fn brute_commutator_with_all(g: &ConcreteGroup, a: &[usize]) -> Vec<usize> {
    let mut comms = Vec::new();
    for &x in a {
        for y in 0..g.order() {
            // x^-1 y^-1 x y
            comms.push(g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y)));
        }
    }
    comms.sort_unstable();
    comms.dedup();
    naive_closure(g, &comms)
}

#[test]
fn lattices_match_brute_force() {
    for e in catalog_up_to(200) {
        let naive = naive_subgroups(&e.group);
        let lattice = all_subgroups(&e.group);
        let ours: Vec<Vec<usize>> = lattice.subgroups.iter().map(|h| h.elements()).collect();
        assert_eq!(naive, ours, "{}", e.id);
        assert_eq!(naive_min_generators(&e.group), min_generators(&e.group), "{}", e.id);
    }
}

#[test]
fn exact_subgroup_counts() {
    assert_eq!(naive_subgroups(&get_group("ea-2-2").unwrap().group).len(), 5);
    assert_eq!(all_subgroups(&get_group("ea-2-2").unwrap().group).len(), 5);
    assert_eq!(all_subgroups(&get_group("q8").unwrap().group).len(), 6);
    let heis = get_group("heis-3").unwrap();
    assert_eq!(all_subgroups(&heis.group).len(), naive_subgroups(&heis.group).len());
}

#[test]
fn every_subgroup_rank_matches() {
    for e in catalog_up_to(64) {
        let lattice = all_subgroups(&e.group);
        let ranks = lattice.ranks(&e.group);
        for (h, &r) in lattice.subgroups.iter().zip(ranks) {
            assert_eq!(naive_rank(&e.group, &h.elements()), r, "{} subgroup of order {}", e.id, h.order());
        }
    }
}

#[test]
fn centers_and_lower_central_series() {
    for e in catalog_up_to(200) {
        let g = &e.group;
        assert_eq!(series::center(g).elements(), brute_center(g), "{}", e.id);
        let lcs = series::lower_central_series(g);
        let mut term: Vec<usize> = (0..g.order()).collect();
        for (i, ours) in lcs.terms.iter().enumerate() {
            assert_eq!(ours.elements(), term, "{} gamma_{}", e.id, i + 1);
            term = brute_commutator_with_all(g, &term);
        }
    }
}

#[test]
fn frattini_is_intersection_of_maximal_subgroups() {
    for e in catalog_up_to(200) {
        let g = &e.group;
        let Some((p, _)) = g.prime_power() else { continue };
        let subs = naive_subgroups(g);
        let proper: Vec<&Vec<usize>> = subs.iter().filter(|h| h.len() < g.order()).collect();
        let maximal: Vec<&&Vec<usize>> = proper
            .iter()
            .filter(|h| !proper.iter().any(|k| k.len() > h.len() && h.iter().all(|x| k.contains(x))))
            .collect();
        let phi: Vec<usize> = (0..g.order())
            .filter(|x| maximal.iter().all(|m| m.contains(x)))
            .collect();
        assert_eq!(series::burnside_frattini(g, &g.whole(), p).elements(), phi, "{}", e.id);
    }
}

#[test]
fn element_orders_by_repeated_multiplication() {
    for e in catalog_up_to(200) {
        let g = &e.group;
        for x in 0..g.order() {
            let mut y = x;
            let mut k = 1;
            while y != 0 {
                y = g.mul(y, x);
                k += 1;
            }
            assert_eq!(g.element_order(x), k, "{}", e.id);
        }
    }
}

#[test]
fn derived_values() {
    let x = get_group("sg-81-10").unwrap();
    let g = &x.group;
    let b = g.gens()[0];
    assert_eq!(x.presentation.as_ref().unwrap().gen_names[0], "b");
    assert_eq!(g.element_order(b), 9);
    assert_eq!(series::exponent(g), 9);
    assert_eq!(series::lower_central_series(g).orders(), vec![81, 9, 3, 1]);
    assert_eq!(brute_center(&get_group("q8").unwrap().group).len(), 2);

    let heis = get_group("heis-3").unwrap();
    let derived = brute_commutator_with_all(&heis.group, &(0..27).collect::<Vec<_>>());
    assert_eq!(derived, brute_center(&heis.group));
    assert_eq!(derived.len(), 3);

    // <x> for x in gamma_2 \ gamma_3 of order 3 has the single jump 2
    let lcs = series::lower_central_series(g);
    let x2 = lcs
        .term(2)
        .iter()
        .find(|&y| !lcs.term(3).contains(y) && g.element_order(y) == 3)
        .unwrap();
    let h = maxpair_core::group::closure(g, [x2]);
    assert_eq!(jumps(g, &h).unwrap().jumps, vec![2]);
    assert_eq!(jumps(&heis.group, &heis.group.whole()).unwrap().jumps, vec![1, 2]);
}
