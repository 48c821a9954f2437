//! Quotients, products, semidirect products and subgroups as standalone groups.

use fixedbitset::FixedBitSet;

use crate::actions::{map_order, GroupMap};
use crate::arith;
use crate::error::{Error, Result};
use crate::group::{check_cap, generating_set, ConcreteGroup, SubgroupSet};
use crate::series;

/// `G / N` on least-index coset representatives, with the projection.
pub fn quotient_group(g: &ConcreteGroup, n: &SubgroupSet) -> Result<(ConcreteGroup, GroupMap)> {
    if !series::is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    let size = g.order() / n.order();
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::with_capacity(size);
    for x in 0..g.order() {
        if coset[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for y in n.iter() {
            coset[g.mul(x, y)] = id;
        }
    }
    let mut table = vec![0; size * size];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * size + j] = coset[g.mul(a, b)];
        }
    }
    let mut gens: Vec<usize> = Vec::new();
    for &s in g.gens() {
        let c = coset[s];
        if c != 0 && !gens.contains(&c) {
            gens.push(c);
        }
    }
    let label = format!("quotient({}, {})", g.label(), n.order());
    let q = ConcreteGroup::from_table(label, size, table, gens, None)?;
    let proj = GroupMap::from_table(g, coset);
    Ok((q, proj))
}

/// `G x H` with index `a * |H| + b`, plus the two embeddings.
pub fn direct_product(g: &ConcreteGroup, h: &ConcreteGroup) -> Result<(ConcreteGroup, GroupMap, GroupMap)> {
    let (m, k) = (g.order(), h.order());
    let n = m.saturating_mul(k);
    check_cap(n)?;
    let mut table = vec![0; n * n];
    for a in 0..m {
        for b in 0..k {
            let x = a * k + b;
            for c in 0..m {
                let ac = g.mul(a, c) * k;
                for d in 0..k {
                    table[x * n + c * k + d] = ac + h.mul(b, d);
                }
            }
        }
    }
    let mut gens: Vec<usize> = g.gens().iter().map(|&a| a * k).collect();
    gens.extend(h.gens().iter().copied());
    let mut names: Vec<String> = g.gen_names().iter().map(|s| format!("{s}.1")).collect();
    names.extend(h.gen_names().iter().map(|s| format!("{s}.2")));
    let label = format!("product({}, {})", g.label(), h.label());
    let prod = ConcreteGroup::from_table(label, n, table, gens, Some(names))?;
    let left = GroupMap::from_table(g, (0..m).map(|a| a * k).collect());
    let right = GroupMap::from_table(h, (0..k).collect());
    Ok((prod, left, right))
}

/// `P x| C_m`: pairs `(x, i)` with `(x, i)(y, j) = (x beta^i(y), i + j)`.
///
/// Element `(x, i)` has index `x + |P| i`. The generator `t = (1, 1)` satisfies
/// `t x t^-1 = beta(x)`.
pub fn semidirect_product(p: &ConcreteGroup, beta: &GroupMap, m: u64) -> Result<ConcreteGroup> {
    let ord = map_order(beta)?;
    if m == 0 || !m.is_multiple_of(ord) {
        return Err(Error::OrderMismatch {
            expected: m,
            actual: ord,
        });
    }
    let np = p.order();
    let m = m as usize;
    let n = np.saturating_mul(m);
    check_cap(n)?;
    let mut powers = vec![GroupMap::identity(p)];
    for i in 1..m {
        powers.push(beta.compose(&powers[i - 1]));
    }
    let mut table = vec![0; n * n];
    for i in 0..m {
        for x in 0..np {
            let row = (x + np * i) * n;
            for j in 0..m {
                let k = (i + j) % m;
                for y in 0..np {
                    table[row + y + np * j] = p.mul(x, powers[i].apply(y)) + np * k;
                }
            }
        }
    }
    let mut gens = p.gens().to_vec();
    let mut names = p.gen_names().to_vec();
    if m > 1 {
        gens.push(np);
        names.push("t".into());
    }
    let label = format!("semidirect({}, {})", p.label(), m);
    ConcreteGroup::from_table(label, n, table, gens, Some(names))
}

/// A subgroup as a group in its own right, with its embedding.
pub fn subgroup_to_group(g: &ConcreteGroup, h: &SubgroupSet, label: impl Into<String>) -> Result<(ConcreteGroup, Vec<usize>)> {
    let elems = h.elements();
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    let n = elems.len();
    let mut table = vec![0; n * n];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            table[i * n + j] = pos[g.mul(a, b)];
        }
    }
    let gens: Vec<usize> = generating_set(g, h).iter().map(|&x| pos[x]).collect();
    let sub = ConcreteGroup::from_table(label, n, table, gens, None)?;
    Ok((sub, elems))
}

/// A built `P x| C` decomposed back into its normal Sylow `p`-subgroup and the
/// automorphism induced by a generator of a Sylow complement.
#[derive(Debug, Clone)]
pub struct StrippedPair {
    pub p_group: ConcreteGroup,
    pub embedding: Vec<usize>,
    pub alpha: GroupMap,
    /// Order of the induced automorphism.
    pub q: u64,
    pub complement_generator: usize,
}

pub fn strip_pair(g: &ConcreteGroup, p: u64) -> Result<StrippedPair> {
    let orders = g.orders();
    let p_elems: Vec<usize> = (0..g.order())
        .filter(|&x| arith::log_exact(orders[x] as u64, p).is_some())
        .collect();
    let p_part = arith::factorize(g.order() as u64)
        .iter()
        .find(|f| f.0 == p)
        .map_or(1, |f| p.pow(f.1));
    if p_elems.len() as u64 != p_part {
        return Err(Error::Precondition(format!("Sylow {p}-subgroup is not normal")));
    }
    let mut bits = FixedBitSet::with_capacity(g.order());
    p_elems.iter().for_each(|&x| bits.insert(x));
    let sylow = SubgroupSet::from_bits(bits);
    // generator of a cyclic Sylow complement: a p'-element of maximal order
    let y = (0..g.order())
        .filter(|&x| arith::gcd(orders[x] as u64, p) == 1)
        .max_by_key(|&x| (orders[x], std::cmp::Reverse(x)))
        .unwrap();
    if (g.order() as u64) / p_part != orders[y] as u64 {
        return Err(Error::Precondition("Sylow complement is not cyclic".into()));
    }
    let (pg, embedding) = subgroup_to_group(g, &sylow, format!("sylow({}, {p})", g.label()))?;
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &x) in embedding.iter().enumerate() {
        pos[x] = i;
    }
    let y_inv = g.inv(y);
    let table: Vec<usize> = embedding
        .iter()
        .map(|&x| pos[g.mul(g.mul(y, x), y_inv)])
        .collect();
    let alpha = GroupMap::from_table(&pg, table);
    let q = map_order(&alpha)?;
    Ok(StrippedPair {
        p_group: pg,
        embedding,
        alpha,
        q,
        complement_generator: y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::hom_from_images;
    use crate::presentation::parse_presentation;

    fn build(text: &str) -> ConcreteGroup {
        parse_presentation(text).unwrap().build_group().unwrap()
    }

    #[test]
    fn quotient_of_q8_by_center() {
        let q8 = build(
            "group q8\ngens 3\norder g1 2\norder g2 2\norder g3 2\npow g1 : g3\npow g2 : g3\nconj g2 g1 : g2 g3\nend",
        );
        let z = series::center(&q8);
        let (q, proj) = quotient_group(&q8, &z).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(series::exponent(&q), 2);
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(proj.apply(q8.mul(x, y)), q.mul(proj.apply(x), proj.apply(y)));
            }
        }
        let kernel: Vec<usize> = (0..8).filter(|&x| proj.apply(x) == 0).collect();
        assert_eq!(kernel, z.elements());
        let (t, _) = quotient_group(&q8, &q8.whole()).unwrap();
        assert_eq!(t.order(), 1);
    }

    #[test]
    fn products() {
        let c3 = build("group c3\ngens 1\norder g1 3\nend");
        let (g, l, r) = direct_product(&c3, &c3).unwrap();
        assert_eq!(g.order(), 9);
        assert!(g.is_abelian());
        assert_eq!(series::exponent(&g), 3);
        assert_eq!(l.apply(1), 3);
        assert_eq!(r.apply(1), 1);
        assert!(g.check_associative().is_none());
    }

    #[test]
    fn semidirect_c3_by_inversion_is_s3() {
        let c3 = build("group c3\ngens 1\norder g1 3\nend");
        let inv = hom_from_images(&c3, &c3, &[c3.inv(c3.gens()[0])]).unwrap();
        let s3 = semidirect_product(&c3, &inv, 2).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert!(s3.check_associative().is_none());
        assert!(matches!(
            semidirect_product(&c3, &inv, 3),
            Err(Error::OrderMismatch { .. })
        ));
        let trivial = semidirect_product(&c3, &GroupMap::identity(&c3), 2).unwrap();
        assert!(trivial.is_abelian());
        let stripped = strip_pair(&s3, 3).unwrap();
        assert_eq!(stripped.q, 2);
        assert_eq!(stripped.p_group.order(), 3);
    }
}
