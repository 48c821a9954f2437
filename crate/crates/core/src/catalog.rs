//! Built-in groups and automorphisms, verified against stored fingerprints.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::actions::{hom_from_literal, hom_from_pairs, map_order, GroupMap};
use crate::arith;
use crate::construct::{direct_product, quotient_group, semidirect_product};
use crate::error::{Error, Result};
use crate::group::{closure, ConcreteGroup};
use crate::presentation::{parse_presentation, PcPresentation};
use crate::series;
use crate::subgroups::min_generators;

const HEIS: &str = include_str!("../catalog/heis.pc");
const P4: &str = include_str!("../catalog/p4.pc");
const P5_UNIQUE: &str = include_str!("../catalog/p5-unique.pc");
const Q8: &str = include_str!("../catalog/q8.pc");
const D8: &str = include_str!("../catalog/d8.pc");
const G32: &str = include_str!("../catalog/g32.pc");
const SG_81_10: &str = include_str!("../catalog/sg-81-10.pc");
const SG_162_22: &str = include_str!("../catalog/sg-162-22.pc");

/// Values every built entry is checked against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub order: usize,
    pub rank: usize,
    /// `None` for non-nilpotent groups.
    pub class: Option<usize>,
    pub exponent: u64,
    pub lower_central: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogSummary {
    pub id: String,
    pub description: String,
    pub order: Option<usize>,
    pub automorphisms: Vec<String>,
    /// True for documented entries without a presentation.
    pub extension_slot: bool,
}

/// A built catalog entry.
#[derive(Debug)]
pub struct CatalogGroup {
    pub id: String,
    pub description: String,
    pub group: ConcreteGroup,
    pub presentation: Option<PcPresentation>,
    pub automorphisms: Vec<(String, GroupMap)>,
    pub expected: Expected,
}

impl CatalogGroup {
    pub fn automorphism(&self, name: &str) -> Result<&GroupMap> {
        self.automorphisms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| Error::UnknownEntry(format!("{}:{name}", self.id)))
    }
}

/// Documented entries with no presentation available.
pub const EXTENSION_SLOTS: &[(&str, &str)] = &[
    ("sg-81-7", "order 81, maximal class; elements of order 3 generate a subgroup of order at least 27"),
    ("sg-81-8", "order 81, maximal class; elements of order 3 generate a subgroup of order at least 27"),
    ("sg-81-9", "order 81, maximal class; elements of order 3 generate a subgroup of order at least 27"),
    ("sg-243-26", "order 243, maximal class, has an involutory automorphism inverting the Frattini quotient; central quotient is sg-81-9"),
    ("sg-729-148", "order 729, class 3; its extension by an involutory automorphism is 4-maximal"),
];

const HEIS_PRIMES: &[u64] = &[3, 5, 7];
const SMALL_PRIMES: &[u64] = &[2, 3, 5, 7];
const P45_PRIMES: &[u64] = &[3, 5];

fn template(text: &str, p: u64) -> String {
    text.replace("{p-1}", &(p - 1).to_string()).replace("{p}", &p.to_string())
}

fn ids() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for m in 1..=16u64 {
        out.push((format!("c{m}"), format!("cyclic group of order {m}")));
    }
    for &p in SMALL_PRIMES {
        for k in 1..=4 {
            out.push((format!("ea-{p}-{k}"), format!("elementary abelian group of order {p}^{k}")));
        }
    }
    for &p in HEIS_PRIMES {
        out.push((format!("heis-{p}"), format!("extraspecial group of order {p}^3 and exponent {p}")));
    }
    for &p in P45_PRIMES {
        out.push((format!("p4-{p}"), format!("3-maximal group of order {p}^4")));
        out.push((format!("p5-unique-{p}"), format!("rank-3 pair group of order {p}^5")));
    }
    let fixed = [
        ("q8", "quaternion group"),
        ("d8", "dihedral group of order 8"),
        ("c2xq8", "C2 x Q8"),
        ("c4oq8", "central product C4 * Q8"),
        ("g32", "3-maximal group of order 32"),
        ("sg-81-10", "rank-2 pair group of order 81, maximal class"),
        ("sg-162-22", "sg-81-10 extended by an involution"),
        ("c3xsg-81-10", "C3 x sg-81-10"),
        ("c7-c3", "C7 x| C3"),
        ("c9xc3", "C9 x C3"),
    ];
    out.extend(fixed.iter().map(|(a, b)| (a.to_string(), b.to_string())));
    out
}

/// All entries, sorted by id.
pub fn list_catalog() -> Vec<CatalogSummary> {
    let mut out: Vec<CatalogSummary> = ids()
        .into_iter()
        .map(|(id, description)| {
            let automorphisms = automorphism_names(&id);
            CatalogSummary {
                id,
                description,
                order: None,
                automorphisms,
                extension_slot: false,
            }
        })
        .collect();
    out.extend(EXTENSION_SLOTS.iter().map(|(id, d)| CatalogSummary {
        id: id.to_string(),
        description: d.to_string(),
        order: None,
        automorphisms: Vec::new(),
        extension_slot: true,
    }));
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

fn parse_family<'a>(id: &'a str, prefix: &str) -> Option<&'a str> {
    id.strip_prefix(prefix)
}

fn units(p: u64) -> Vec<u64> {
    (2..p).collect()
}

fn automorphism_names(id: &str) -> Vec<String> {
    if let Some(m) = parse_family(id, "c").and_then(|m| m.parse::<u64>().ok()) {
        return if m > 2 { vec!["inv".into()] } else { Vec::new() };
    }
    if let Some(rest) = parse_family(id, "ea-") {
        let p: u64 = rest.split('-').next().and_then(|s| s.parse().ok()).unwrap_or(2);
        let mut v = vec!["inv".to_string()];
        v.extend(units(p).into_iter().map(|c| format!("scalar-{c}")));
        v.dedup();
        return if p == 2 { Vec::new() } else { v };
    }
    if let Some(p) = parse_family(id, "heis-").and_then(|s| s.parse::<u64>().ok()) {
        return units(p).into_iter().map(|c| format!("scalar-{c}")).collect();
    }
    match id {
        "sg-81-10" | "c3xsg-81-10" => vec!["alpha".into()],
        "c9xc3" => vec!["inv".into()],
        _ if id.starts_with("p5-unique-") => vec!["alpha".into()],
        _ => Vec::new(),
    }
}

/// Least `c` of multiplicative order `q` modulo `p`.
pub fn scalar_of_order(p: u64, q: u64) -> Option<u64> {
    (2..p).find(|&c| arith::mult_order(c, p) == Some(q))
}

fn cyclic_presentation(m: u64) -> String {
    let primes: Vec<u64> = arith::factorize(m)
        .into_iter()
        .flat_map(|(p, k)| std::iter::repeat_n(p, k as usize))
        .collect();
    let mut s = format!("group c{m}\ngens {}\n", primes.len());
    for (i, p) in primes.iter().enumerate() {
        s += &format!("order g{} {p}\n", i + 1);
    }
    for i in 1..primes.len() {
        s += &format!("pow g{i} : g{}\n", i + 1);
    }
    s + "end\n"
}

fn ea_presentation(p: u64, k: usize) -> String {
    let mut s = format!("group ea-{p}-{k}\ngens {k}\n");
    for i in 1..=k {
        s += &format!("order g{i} {p}\n");
    }
    s + "end\n"
}

fn from_pc(text: &str) -> Result<(ConcreteGroup, PcPresentation)> {
    let pres = parse_presentation(text)?;
    let g = pres.build_group()?;
    Ok((g, pres))
}

fn trivial_group() -> Result<ConcreteGroup> {
    ConcreteGroup::from_table("c1", 1, vec![0], Vec::new(), None)
}

fn inversion(g: &ConcreteGroup) -> Result<GroupMap> {
    let pairs: Vec<(usize, usize)> = g.gens().iter().map(|&x| (x, g.inv(x))).collect();
    hom_from_pairs(g, g, &pairs)
}

fn power_map(g: &ConcreteGroup, c: u64) -> Result<GroupMap> {
    let pairs: Vec<(usize, usize)> = g.gens().iter().map(|&x| (x, g.pow(x, c))).collect();
    hom_from_pairs(g, g, &pairs)
}

/// Direct product of two automorphisms on `G x H`.
pub fn product_map(g: &ConcreteGroup, h: &ConcreteGroup, prod: &ConcreteGroup, f1: &GroupMap, f2: &GroupMap) -> GroupMap {
    let k = h.order();
    let table = (0..g.order() * k)
        .map(|x| f1.apply(x / k) * k + f2.apply(x % k))
        .collect();
    GroupMap::from_table(prod, table)
}

struct Built {
    group: ConcreteGroup,
    presentation: Option<PcPresentation>,
    automorphisms: Vec<(String, GroupMap)>,
    expected: Expected,
}

fn expected(order: usize, rank: usize, class: Option<usize>, exponent: u64, lower_central: Vec<usize>) -> Expected {
    Expected {
        order,
        rank,
        class,
        exponent,
        lower_central,
    }
}

fn abelian_expected(order: usize, rank: usize, exponent: u64) -> Expected {
    let lcs = if order == 1 { vec![1] } else { vec![order, 1] };
    expected(order, rank, Some(if order == 1 { 0 } else { 1 }), exponent, lcs)
}

fn build_entry(id: &str) -> Result<Built> {
    if EXTENSION_SLOTS.iter().any(|(s, _)| *s == id) {
        return Err(Error::ExtensionSlot(id.into()));
    }
    if let Some(m) = id.strip_prefix('c').and_then(|s| s.parse::<u64>().ok()) {
        if !(1..=16).contains(&m) {
            return Err(Error::UnknownEntry(id.into()));
        }
        let (group, presentation) = if m == 1 {
            (trivial_group()?, None)
        } else {
            let (g, p) = from_pc(&cyclic_presentation(m))?;
            (g, Some(p))
        };
        let mut automorphisms = Vec::new();
        if m > 2 {
            automorphisms.push(("inv".into(), inversion(&group)?));
        }
        return Ok(Built {
            group,
            presentation,
            automorphisms,
            expected: abelian_expected(m as usize, usize::from(m > 1), m),
        });
    }
    if let Some(rest) = id.strip_prefix("ea-") {
        let mut it = rest.split('-').map(|s| s.parse::<u64>().ok());
        if let (Some(Some(p)), Some(Some(k)), None) = (it.next(), it.next(), it.next()) {
            if SMALL_PRIMES.contains(&p) && (1..=4).contains(&k) {
                let (group, pres) = from_pc(&ea_presentation(p, k as usize))?;
                let mut automorphisms = Vec::new();
                if p > 2 {
                    automorphisms.push(("inv".to_string(), inversion(&group)?));
                    for c in units(p) {
                        automorphisms.push((format!("scalar-{c}"), power_map(&group, c)?));
                    }
                }
                let order = p.pow(k as u32) as usize;
                return Ok(Built {
                    group,
                    presentation: Some(pres),
                    automorphisms,
                    expected: abelian_expected(order, k as usize, p),
                });
            }
        }
        return Err(Error::UnknownEntry(id.into()));
    }
    if let Some(p) = id.strip_prefix("heis-").and_then(|s| s.parse::<u64>().ok()) {
        if !HEIS_PRIMES.contains(&p) {
            return Err(Error::UnknownEntry(id.into()));
        }
        let (group, pres) = from_pc(&template(HEIS, p))?;
        let mut automorphisms = Vec::new();
        for c in units(p) {
            let lit = format!("x->x^{c}, y->y^{c}, z->z^{}", c * c % p);
            automorphisms.push((format!("scalar-{c}"), hom_from_literal(&group, &lit)?));
        }
        let n = p as usize;
        return Ok(Built {
            group,
            presentation: Some(pres),
            automorphisms,
            expected: expected(n.pow(3), 2, Some(2), p, vec![n.pow(3), n, 1]),
        });
    }
    if let Some(p) = id.strip_prefix("p4-").and_then(|s| s.parse::<u64>().ok()) {
        if !P45_PRIMES.contains(&p) {
            return Err(Error::UnknownEntry(id.into()));
        }
        let (group, pres) = from_pc(&template(P4, p))?;
        let n = p as usize;
        return Ok(Built {
            group,
            presentation: Some(pres),
            automorphisms: Vec::new(),
            expected: expected(n.pow(4), 3, Some(2), p * p, vec![n.pow(4), n, 1]),
        });
    }
    if let Some(p) = id.strip_prefix("p5-unique-").and_then(|s| s.parse::<u64>().ok()) {
        if !P45_PRIMES.contains(&p) {
            return Err(Error::UnknownEntry(id.into()));
        }
        let (group, pres) = from_pc(&template(P5_UNIQUE, p))?;
        // Inverting x1, x2, x3 forces x4 -> x4 x5 and x5 -> x5^-1.
        let alpha = hom_from_literal(&group, "x1->x1^-1, x2->x2^-1, x3->x3^-1")?;
        let n = p as usize;
        return Ok(Built {
            group,
            presentation: Some(pres),
            automorphisms: vec![("alpha".into(), alpha)],
            expected: expected(n.pow(5), 3, Some(3), p * p, vec![n.pow(5), n * n, n, 1]),
        });
    }
    let simple = |text: &str, exp: Expected| -> Result<Built> {
        let (group, pres) = from_pc(text)?;
        Ok(Built {
            group,
            presentation: Some(pres),
            automorphisms: Vec::new(),
            expected: exp,
        })
    };
    match id {
        "q8" => simple(Q8, expected(8, 2, Some(2), 4, vec![8, 2, 1])),
        "d8" => simple(D8, expected(8, 2, Some(2), 4, vec![8, 2, 1])),
        "g32" => simple(G32, expected(32, 3, Some(2), 4, vec![32, 4, 1])),
        "sg-162-22" => simple(SG_162_22, expected(162, 3, None, 18, vec![162, 81])),
        "sg-81-10" => {
            let mut b = simple(SG_81_10, expected(81, 2, Some(3), 9, vec![81, 9, 3, 1]))?;
            // conjugation by the involution of sg-162-22
            let alpha = hom_from_literal(&b.group, "b->b^2 e, c->c^2 e")?;
            b.automorphisms.push(("alpha".into(), alpha));
            Ok(b)
        }
        "c2xq8" => {
            let c2 = get_group("c2")?;
            let q8 = get_group("q8")?;
            let (group, _, _) = direct_product(&c2.group, &q8.group)?;
            Ok(Built {
                group,
                presentation: None,
                automorphisms: Vec::new(),
                expected: expected(16, 3, Some(2), 4, vec![16, 2, 1]),
            })
        }
        "c4oq8" => {
            let c4 = get_group("c4")?;
            let q8 = get_group("q8")?;
            let (prod, left, right) = direct_product(&c4.group, &q8.group)?;
            let c2 = c4.group.pow(c4.group.gens()[0], 2);
            let z = q8.group.pow(q8.group.gens()[0], 2);
            let n = closure(&prod, [prod.mul(left.apply(c2), right.apply(z))]);
            let (group, _) = quotient_group(&prod, &n)?;
            Ok(Built {
                group,
                presentation: None,
                automorphisms: Vec::new(),
                expected: expected(16, 3, Some(2), 4, vec![16, 2, 1]),
            })
        }
        "c3xsg-81-10" => {
            let c3 = get_group("c3")?;
            let x = get_group("sg-81-10")?;
            let (group, _, _) = direct_product(&c3.group, &x.group)?;
            let alpha = product_map(&c3.group, &x.group, &group, c3.automorphism("inv")?, x.automorphism("alpha")?);
            Ok(Built {
                group,
                presentation: None,
                automorphisms: vec![("alpha".into(), alpha)],
                expected: expected(243, 3, Some(3), 9, vec![243, 9, 3, 1]),
            })
        }
        "c9xc3" => {
            let c9 = get_group("c9")?;
            let c3 = get_group("c3")?;
            let (group, _, _) = direct_product(&c9.group, &c3.group)?;
            let inv = inversion(&group)?;
            Ok(Built {
                group,
                presentation: None,
                automorphisms: vec![("inv".into(), inv)],
                expected: abelian_expected(27, 2, 9),
            })
        }
        "c7-c3" => {
            let c7 = get_group("c7")?;
            let beta = power_map(&c7.group, 2)?;
            let group = semidirect_product(&c7.group, &beta, 3)?;
            Ok(Built {
                group,
                presentation: None,
                automorphisms: Vec::new(),
                expected: expected(21, 2, None, 21, vec![21, 7]),
            })
        }
        _ => Err(Error::UnknownEntry(id.into())),
    }
}

fn verify(id: &str, g: &ConcreteGroup, exp: &Expected, auts: &[(String, GroupMap)]) -> Result<()> {
    let lcs = series::lower_central_series(g);
    let found = Expected {
        order: g.order(),
        rank: min_generators(g),
        class: lcs.class(),
        exponent: series::exponent(g),
        lower_central: lcs.orders(),
    };
    if &found != exp {
        return Err(Error::Fingerprint {
            id: id.into(),
            detail: format!("expected {exp:?}, computed {found:?}"),
        });
    }
    for (name, f) in auts {
        if !f.is_bijective() {
            return Err(Error::Fingerprint {
                id: id.into(),
                detail: format!("automorphism {name} is not bijective"),
            });
        }
        map_order(f)?;
    }
    Ok(())
}

fn cache() -> &'static Mutex<HashMap<String, Arc<CatalogGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<CatalogGroup>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Canonical id for a family name plus prime, e.g. `("heis", Some(3))`.
pub fn resolve_id(id: &str, p: Option<u64>) -> String {
    match (id, p) {
        ("heis" | "p4" | "p5-unique", Some(p)) => format!("{id}-{p}"),
        ("ea", Some(p)) => format!("ea-{p}-2"),
        _ => id.to_string(),
    }
}

/// Builds (once) and returns a verified catalog entry.
pub fn get_group(id: &str) -> Result<Arc<CatalogGroup>> {
    if let Some(hit) = cache().lock().unwrap().get(id) {
        return Ok(hit.clone());
    }
    let built = build_entry(id)?;
    verify(id, &built.group, &built.expected, &built.automorphisms)?;
    let description = ids()
        .into_iter()
        .find(|(i, _)| i == id)
        .map(|(_, d)| d)
        .unwrap_or_default();
    let entry = Arc::new(CatalogGroup {
        id: id.to_string(),
        description,
        group: built.group.with_label(id),
        presentation: built.presentation,
        automorphisms: built.automorphisms,
        expected: built.expected,
    });
    cache()
        .lock()
        .unwrap()
        .entry(id.to_string())
        .or_insert_with(|| entry.clone());
    Ok(entry)
}

/// `get_group` with family parameters.
pub fn get_group_with(id: &str, p: Option<u64>) -> Result<Arc<CatalogGroup>> {
    get_group(&resolve_id(id, p))
}
