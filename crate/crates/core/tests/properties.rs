use std::sync::Arc;

use proptest::prelude::*;

use maxpair_core::actions::{
    acts_through_character, frattini_scalar, map_order, plus_minus_split, search_automorphisms, GroupMap,
    SearchConstraints,
};
use maxpair_core::arith;
use maxpair_core::catalog::{get_group, product_map, CatalogGroup};
use maxpair_core::construct::{direct_product, quotient_group};
use maxpair_core::group::ConcreteGroup;
use maxpair_core::maximality::{check_pair, is_d_maximal, quotient_pair};
use maxpair_core::oracle::naive_min_generators;
use maxpair_core::presentation::{parse_presentation, Word};
use maxpair_core::series;
use maxpair_core::subgroups::{all_subgroups, jumps_in, min_generators};
use maxpair_core::{Error, Outcome, PcPresentation};

/// Text of a pc presentation of a `p`-group with random tails.
fn presentation_text(p: u64, n: usize, powers: &[Vec<u64>], conjs: &[Vec<u64>]) -> String {
    let mut s = format!("group rnd\ngens {n}\n");
    for i in 1..=n {
        s += &format!("order g{i} {p}\n");
    }
    let tail = |from: usize, v: &[u64]| -> String {
        (from..n)
            .filter(|&k| !v[k].is_multiple_of(p))
            .map(|k| format!("g{}^{}", k + 1, v[k] % p))
            .collect::<Vec<_>>()
            .join(" ")
    };
    for i in 0..n {
        let t = tail(i + 1, &powers[i]);
        if !t.is_empty() {
            s += &format!("pow g{} : {t}\n", i + 1);
        }
    }
    let mut c = 0;
    for i in 0..n {
        for j in i + 1..n {
            let t = tail(j + 1, &conjs[c]);
            c += 1;
            if !t.is_empty() {
                s += &format!("conj g{} g{} : g{} {t}\n", j + 1, i + 1, j + 1);
            }
        }
    }
    s + "end\n"
}

fn arb_text() -> impl Strategy<Value = String> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..=4).prop_flat_map(|(p, n)| {
        let pairs = n * (n - 1) / 2;
        (
            Just(p),
            Just(n),
            prop::collection::vec(prop::collection::vec(0..p, n), n),
            prop::collection::vec(prop::collection::vec(0..p, n), pairs),
        )
            .prop_map(|(p, n, pw, cj)| presentation_text(p, n, &pw, &cj))
    })
}

fn arb_word(n: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..n, -6i64..6), 0..8).prop_map(Word::new)
}

fn catalog(ids: &[&'static str]) -> impl Strategy<Value = Arc<CatalogGroup>> {
    prop::sample::select(ids.to_vec()).prop_map(|id| get_group(id).unwrap())
}

const P_GROUPS: &[&str] = &[
    "c4", "c8", "c9", "c16", "ea-2-3", "ea-3-2", "ea-3-3", "ea-5-2", "heis-3", "heis-5", "q8", "d8", "c2xq8",
    "c4oq8", "g32", "p4-3", "sg-81-10", "c9xc3",
];

/// Pairs `(id, automorphism, q)` known to pass `check_pair`.
const PAIRS: &[(&str, &str, u64)] = &[
    ("ea-3-2", "inv", 2),
    ("ea-5-2", "scalar-4", 2),
    ("ea-7-2", "scalar-2", 3),
    ("heis-3", "scalar-2", 2),
    ("heis-5", "scalar-4", 2),
    ("heis-7", "scalar-2", 3),
    ("sg-81-10", "alpha", 2),
    ("c3xsg-81-10", "alpha", 2),
    ("p5-unique-3", "alpha", 2),
];

fn built(text: &str) -> Option<(PcPresentation, ConcreteGroup)> {
    let pres = parse_presentation(text).unwrap();
    match pres.build_group() {
        Ok(g) => Some((pres, g)),
        Err(Error::Inconsistent { .. }) => None,
        Err(e) => panic!("unexpected error {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consistent_presentations_are_common(texts in prop::collection::vec(arb_text(), 32)) {
        // guards the other properties against passing on inconsistent input only
        let ok = texts.iter().filter(|t| built(t).is_some()).count();
        prop_assert!(ok >= 2, "only {} of 32 presentations were consistent", ok);
    }

    #[test]
    fn render_round_trips(text in arb_text()) {
        let pres = parse_presentation(&text).unwrap();
        prop_assert_eq!(parse_presentation(&pres.render()).unwrap(), pres);
    }

    #[test]
    fn built_groups_agree_with_collection(text in arb_text(), words in prop::collection::vec(arb_word(4), 6)) {
        if let Some((pres, g)) = built(&text) {
            prop_assert_eq!(g.order() as u128, pres.expected_order());
            for w in words {
                let w = Word::new(w.factors.into_iter().filter(|&(k, _)| k < pres.len()).collect());
                let nf = pres.normal_form(&w);
                prop_assert_eq!(pres.normal_form(&nf), nf.clone());
                prop_assert_eq!(g.eval_word(&w.factors), pres.index_of(&pres.collect(&w)));
            }
        }
    }

    #[test]
    fn lattice_invariants(text in arb_text()) {
        if let Some((_, g)) = built(&text) {
            let lattice = all_subgroups(&g);
            prop_assert!(lattice.subgroups[0].is_trivial());
            prop_assert!(lattice.subgroups.last().unwrap().is_whole());
            let mut seen = std::collections::HashSet::new();
            for h in &lattice.subgroups {
                prop_assert_eq!(g.order() % h.order(), 0);
                prop_assert!(seen.insert(h.elements()));
            }
            if let Some((p, _)) = g.prime_power() {
                for &m in &lattice.maximal {
                    prop_assert_eq!((g.order() / lattice.subgroups[m].order()) as u64, p);
                }
            }
        }
    }

    #[test]
    fn frattini_laws(text in arb_text()) {
        if let Some((_, g)) = built(&text) {
            let Some((p, _)) = g.prime_power() else { return Ok(()) };
            let phi = series::frattini_subgroup(&g);
            let mho = series::agemo_n(&g, 1).unwrap();
            let derived = series::derived_subgroup(&g);
            let product = maxpair_core::group::closure(&g, mho.iter().chain(derived.iter()));
            prop_assert_eq!(&phi, &product);
            prop_assert_eq!(&phi, &series::burnside_frattini(&g, &g.whole(), p));
            let index = (g.order() / phi.order()) as u64;
            prop_assert_eq!(index % p, 0);
            let d = min_generators(&g);
            prop_assert_eq!(arith::log_exact(index, p), Some(d as u32));
            if g.order() <= 81 {
                prop_assert_eq!(naive_min_generators(&g), d);
            }
        }
    }

    #[test]
    fn regular_groups_balance_omega_and_mho(text in arb_text()) {
        if let Some((_, g)) = built(&text) {
            if g.prime_power().is_none() { return Ok(()) }
            let r = series::is_regular(&g).unwrap();
            if r.regular {
                let mho = series::agemo_n(&g, 1).unwrap();
                let omega = series::omega_n(&g, 1).unwrap();
                prop_assert_eq!(mho.order(), g.order() / omega.order());
            }
        }
    }

    #[test]
    fn jumps_stay_within_class(text in arb_text(), pick in any::<prop::sample::Index>()) {
        if let Some((_, g)) = built(&text) {
            let lcs = series::lower_central_series(&g);
            let class = lcs.class().unwrap();
            let lattice = all_subgroups(&g);
            let h = &lattice.subgroups[pick.index(lattice.len())];
            let js = jumps_in(&lcs, h).unwrap();
            prop_assert!(js.jumps.iter().all(|&j| (1..=class).contains(&j)));
            prop_assert!(js.jumps.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(js.jumps.is_empty(), h.is_trivial());
        }
    }

    #[test]
    fn maximality_report_invariant(text in arb_text()) {
        if let Some((_, g)) = built(&text) {
            let r = is_d_maximal(&g);
            prop_assert_eq!(r.is_d_maximal, r.witness.is_none());
            if let Some(w) = r.witness {
                prop_assert!(w.rank >= r.d);
                prop_assert!(w.order < g.order());
            }
        }
    }

    #[test]
    fn quotient_projection_has_kernel_n(e in catalog(P_GROUPS), pick in any::<prop::sample::Index>()) {
        let g = &e.group;
        let lattice = all_subgroups(g);
        let normals: Vec<_> = lattice.subgroups.iter().filter(|h| series::is_normal(g, h)).collect();
        let n = normals[pick.index(normals.len())];
        let (q, proj) = quotient_group(g, n).unwrap();
        prop_assert_eq!(q.order() * n.order(), g.order());
        let kernel: Vec<usize> = (0..g.order()).filter(|&x| proj.apply(x) == 0).collect();
        prop_assert_eq!(kernel, n.elements());
        for x in 0..g.order() {
            for &s in g.gens() {
                prop_assert_eq!(proj.apply(g.mul(x, s)), q.mul(proj.apply(x), proj.apply(s)));
            }
        }
    }

    #[test]
    fn layers_follow_powers_of_the_character(e in catalog(&["ea-3-3", "heis-3", "heis-5", "sg-81-10", "p4-3", "c9xc3", "c9"]), c in 1u64..7) {
        let g = &e.group;
        let p = g.prime_power().unwrap().0;
        let c = c % p;
        if c == 0 { return Ok(()) }
        let order = arith::mult_order(c, p).unwrap();
        let found = search_automorphisms(g, SearchConstraints { order, scalar: c, limit: Some(3) }).unwrap();
        let lcs = series::lower_central_series(g);
        let class = lcs.class().unwrap();
        for f in &found {
            prop_assert_eq!(map_order(f).unwrap(), order);
            prop_assert_eq!(frattini_scalar(g, f).unwrap().value, c);
            let Some(chi) = acts_through_character(g, f, &g.whole(), lcs.term(2)).unwrap() else { continue };
            for i in 1..=class {
                let v = acts_through_character(g, f, lcs.term(i), lcs.term(i + 1)).unwrap();
                // gamma_i / gamma_{i+1} need not be elementary abelian here, so compare mod p
                prop_assert_eq!(v.map(|v| v.value), Some(chi.pow(i as u64)));
            }
        }
    }

    #[test]
    fn quotients_by_frattini_normal_subgroups_keep_the_pair(
        k in 0..PAIRS.len(),
        pick in any::<prop::sample::Index>(),
    ) {
        let (id, aut, q) = PAIRS[k];
        let e = get_group(id).unwrap();
        let (g, alpha) = (&e.group, e.automorphism(aut).unwrap());
        let phi = series::burnside_frattini(g, &g.whole(), g.prime_power().unwrap().0);
        let lattice = all_subgroups(g);
        let candidates: Vec<_> = lattice
            .subgroups
            .iter()
            .filter(|n| n.is_subset(&phi) && alpha.preserves(n) && series::is_normal(g, n))
            .collect();
        let n = candidates[pick.index(candidates.len())];
        let (quot, induced) = quotient_pair(g, alpha, q, n).unwrap();
        let before = check_pair(g, alpha, q).unwrap();
        let after = check_pair(&quot, &induced, q).unwrap();
        prop_assert!(after.verdict);
        prop_assert_eq!(after.d, before.d);
        prop_assert_eq!(after.character.unwrap().value, before.character.unwrap().value);
    }

    #[test]
    fn plus_minus_parts(e in catalog(&["ea-3-2", "ea-3-3", "ea-5-2", "c9xc3", "c9", "c15"]), twist in any::<bool>()) {
        let g = &e.group;
        let inv = e.automorphism("inv").unwrap();
        // either inversion, or inversion on one factor of a direct square
        let (m, f, host) = if twist {
            let (prod, _, _) = direct_product(g, g).unwrap();
            let f = product_map(g, g, &prod, inv, &GroupMap::identity(g));
            (prod.whole(), f, prod)
        } else {
            (g.whole(), inv.clone(), g.clone())
        };
        let split = plus_minus_split(&host, &m, &f).unwrap();
        prop_assert_eq!(split.plus.order() * split.minus.order(), m.order());
        prop_assert!(split.plus.intersect(&split.minus).is_trivial());
        prop_assert!(split.plus.iter().all(|x| f.apply(x) == x));
        prop_assert!(split.minus.iter().all(|x| f.apply(x) == host.inv(x)));
    }

    #[test]
    fn inverse_maps_compose_to_identity(k in 0..PAIRS.len()) {
        let (id, aut, _) = PAIRS[k];
        let e = get_group(id).unwrap();
        let f = e.automorphism(aut).unwrap();
        let inv = f.inverse(&e.group).unwrap();
        prop_assert_eq!(f.compose(&inv), GroupMap::identity(&e.group));
        prop_assert_eq!(f.power(&e.group, map_order(f).unwrap()), GroupMap::identity(&e.group));
    }

    #[test]
    fn outcome_aggregation(parts in prop::collection::vec(prop::sample::select(vec![Outcome::Pass, Outcome::Fail, Outcome::Vacuous, Outcome::Skipped]), 0..6)) {
        let all = Outcome::all(parts.clone());
        prop_assert_eq!(all == Outcome::Fail, parts.contains(&Outcome::Fail));
        if !parts.contains(&Outcome::Fail) {
            prop_assert_eq!(all == Outcome::Pass, parts.contains(&Outcome::Pass));
        }
        prop_assert_eq!(all.holds(), !parts.contains(&Outcome::Fail));
    }
}

/// For `alpha`-invariant `H` on which `x -> x^p` is an endomorphism, every jump
/// of `Mho_1(H)` sits above a jump of `H` in the same class mod `q`.
#[test]
fn jumps_of_pth_powers_are_congruent_mod_q() {
    let mut tested = 0;
    for &(id, aut, q) in PAIRS {
        let e = get_group(id).unwrap();
        let (g, alpha) = (&e.group, e.automorphism(aut).unwrap());
        let p = g.prime_power().unwrap().0;
        let lcs = series::lower_central_series(g);
        for h in all_subgroups(g).subgroups.iter() {
            if !alpha.preserves(h) {
                continue;
            }
            let elems = h.elements();
            let endo = elems
                .iter()
                .all(|&x| elems.iter().all(|&y| g.pow(g.mul(x, y), p) == g.mul(g.pow(x, p), g.pow(y, p))));
            if !endo {
                continue;
            }
            let mho = series::agemo_of(g, h, p, 1);
            let hj = jumps_in(&lcs, h).unwrap().jumps;
            for l in jumps_in(&lcs, &mho).unwrap().jumps {
                tested += 1;
                assert!(
                    hj.iter().any(|&i| i < l && ((l - i) as u64).is_multiple_of(q)),
                    "{id}: jump {l} of Mho_1(H) unmatched in {hj:?}"
                );
            }
        }
    }
    assert!(tested > 0, "no instance exercised the hypothesis");
}
