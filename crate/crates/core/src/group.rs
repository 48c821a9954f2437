//! Fully enumerated finite groups and subgroup bit-sets.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::subgroups::SubgroupLattice;

/// Default ceiling on the number of elements any construction may produce.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

// Tables are stored as u16, so the cap can never exceed this.
const HARD_CAP: usize = u16::MAX as usize;

static ELEMENT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_ELEMENT_CAP);

pub fn element_cap() -> usize {
    ELEMENT_CAP.load(Ordering::Relaxed)
}

/// Sets the process-wide element cap, clamped to what the table layout can index.
pub fn set_element_cap(cap: usize) {
    ELEMENT_CAP.store(cap.clamp(1, HARD_CAP), Ordering::Relaxed);
}

pub(crate) fn check_cap(order: usize) -> Result<()> {
    check_cap_against(order, element_cap())
}

fn check_cap_against(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        Err(Error::CapExceeded { order, cap })
    } else {
        Ok(())
    }
}

/// A finite group given by its full Cayley table. Element 0 is the identity.
#[derive(Clone)]
pub struct ConcreteGroup {
    n: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    gens: Vec<usize>,
    gen_names: Vec<String>,
    label: String,
    orders: OnceLock<Vec<u32>>,
    pub(crate) lattice: OnceLock<Arc<SubgroupLattice>>,
    pub(crate) rank: OnceLock<usize>,
}

impl fmt::Debug for ConcreteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConcreteGroup")
            .field("label", &self.label)
            .field("order", &self.n)
            .field("gens", &self.gens)
            .finish()
    }
}

impl ConcreteGroup {
    /// Builds a group from a row-major table. Checks identity, inverses and
    /// that `gens` generate; associativity is the caller's responsibility
    /// (see [`ConcreteGroup::check_associative`]).
    pub fn from_table(
        label: impl Into<String>,
        n: usize,
        table: Vec<usize>,
        gens: Vec<usize>,
        gen_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let label = label.into();
        check_cap(n)?;
        if n == 0 || table.len() != n * n {
            return Err(Error::Document(format!(
                "table of length {} does not match order {n}",
                table.len()
            )));
        }
        if table.iter().any(|&x| x >= n) || gens.iter().any(|&g| g >= n) {
            return Err(Error::Document("element index out of range".into()));
        }
        for x in 0..n {
            if table[x] != x || table[x * n] != x {
                return Err(Error::Document(format!("element 0 is not a two-sided identity at {x}")));
            }
        }
        let mut inv = vec![u16::MAX; n];
        for x in 0..n {
            let row = &table[x * n..(x + 1) * n];
            let mut seen = FixedBitSet::with_capacity(n);
            for &y in row {
                if seen.put(y) {
                    return Err(Error::Document(format!("row {x} is not a permutation")));
                }
            }
            let y = row.iter().position(|&z| z == 0).unwrap();
            if table[y * n + x] != 0 {
                return Err(Error::Document(format!("element {x} has no two-sided inverse")));
            }
            inv[x] = y as u16;
        }
        let gen_names = match gen_names {
            Some(names) if names.len() == gens.len() => names,
            Some(_) => return Err(Error::Document("generator name count mismatch".into())),
            None => (1..=gens.len()).map(|i| format!("g{i}")).collect(),
        };
        let group = ConcreteGroup {
            n,
            mul: table.into_iter().map(|x| x as u16).collect(),
            inv,
            gens,
            gen_names,
            label,
            orders: OnceLock::new(),
            lattice: OnceLock::new(),
            rank: OnceLock::new(),
        };
        if closure(&group, group.gens.iter().copied()).order() != n {
            return Err(Error::Document("generators do not generate the group".into()));
        }
        Ok(group)
    }

    /// Exhaustive associativity check over all triples; `Some((a, b, c))` on failure.
    pub fn check_associative(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn pow(&self, x: usize, k: u64) -> usize {
        let mut acc = 0;
        let mut base = x;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^k` for a possibly negative exponent.
    pub fn zpow(&self, x: usize, k: i64) -> usize {
        if k >= 0 {
            self.pow(x, k as u64)
        } else {
            self.pow(self.inv(x), k.unsigned_abs())
        }
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    /// `x^g = g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// Element orders, computed once.
    pub fn orders(&self) -> &[u32] {
        self.orders.get_or_init(|| {
            let mut ord = vec![0u32; self.n];
            ord[0] = 1;
            for x in 1..self.n {
                if ord[x] != 0 {
                    continue;
                }
                let mut k = 1;
                let mut y = x;
                while y != 0 {
                    y = self.mul(y, x);
                    k += 1;
                }
                ord[x] = k;
                // powers x^j have order k / gcd(j, k)
                let mut y = x;
                for j in 1..k {
                    if ord[y] == 0 {
                        ord[y] = k / arith::gcd(j as u64, k as u64) as u32;
                    }
                    y = self.mul(y, x);
                }
            }
            ord
        })
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.orders()[x] as usize
    }

    /// `Some((p, k))` when the order is `p^k`, `k >= 1`.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        arith::prime_power(self.n as u64)
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> SubgroupSet {
        SubgroupSet::whole(self.n)
    }

    pub fn trivial(&self) -> SubgroupSet {
        SubgroupSet::trivial(self.n)
    }

    /// Evaluates a product of generator powers, e.g. from an automorphism literal.
    pub fn eval_word(&self, word: &[(usize, i64)]) -> usize {
        word.iter()
            .fold(0, |acc, &(g, e)| self.mul(acc, self.zpow(self.gens[g], e)))
    }

    pub fn to_document(&self) -> GroupDocument {
        GroupDocument {
            format: GROUP_FORMAT.to_string(),
            label: self.label.clone(),
            n: self.n,
            gens: self.gens.clone(),
            mul: self.mul.iter().map(|&x| x as usize).collect(),
        }
    }

    /// Rebuilds a group from a `maxpair-group-v1` document, verifying every axiom.
    pub fn from_document(doc: GroupDocument) -> Result<Self> {
        if doc.format != GROUP_FORMAT {
            return Err(Error::Document(format!("unsupported format {:?}", doc.format)));
        }
        let g = ConcreteGroup::from_table(doc.label, doc.n, doc.mul, doc.gens, None)?;
        if let Some((a, b, c)) = g.check_associative() {
            return Err(Error::Document(format!("table is not associative at ({a}, {b}, {c})")));
        }
        Ok(g)
    }
}

pub const GROUP_FORMAT: &str = "maxpair-group-v1";

/// Serialized form of a construction-born group.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupDocument {
    pub format: String,
    pub label: String,
    pub n: usize,
    pub gens: Vec<usize>,
    /// Row-major multiplication table.
    pub mul: Vec<usize>,
}

/// A subgroup of some parent group, as a membership bit-vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubgroupSet {
    members: FixedBitSet,
    order: usize,
}

impl fmt::Debug for SubgroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupSet(order {}, {:?})", self.order, self.elements())
    }
}

impl SubgroupSet {
    /// Wraps a bit-set already known to be a subgroup.
    pub fn from_bits(members: FixedBitSet) -> Self {
        let order = members.count_ones(..);
        SubgroupSet { members, order }
    }

    pub fn trivial(n: usize) -> Self {
        let mut members = FixedBitSet::with_capacity(n);
        members.insert(0);
        SubgroupSet { members, order: 1 }
    }

    pub fn whole(n: usize) -> Self {
        let mut members = FixedBitSet::with_capacity(n);
        members.insert_range(..);
        SubgroupSet { members, order: n }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn parent_order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn is_subset(&self, other: &SubgroupSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order == self.members.len()
    }

    /// Intersection of two subgroups (always a subgroup).
    pub fn intersect(&self, other: &SubgroupSet) -> SubgroupSet {
        let mut bits = self.members.clone();
        bits.intersect_with(&other.members);
        SubgroupSet::from_bits(bits)
    }

    /// Index `|parent : self|` style ratio of orders, for use with nested subgroups.
    pub fn index_in(&self, over: &SubgroupSet) -> usize {
        over.order / self.order
    }
}

/// Smallest subgroup containing `seed`.
pub fn closure(g: &ConcreteGroup, seed: impl IntoIterator<Item = usize>) -> SubgroupSet {
    let mut b = SubgroupBuilder::new(g);
    for x in seed {
        b.add(g, x);
    }
    b.finish()
}

/// Incremental subgroup closure that keeps a small generating set.
#[derive(Clone)]
pub struct SubgroupBuilder {
    bits: FixedBitSet,
    elems: Vec<usize>,
    gens: Vec<usize>,
}

impl SubgroupBuilder {
    pub fn new(g: &ConcreteGroup) -> Self {
        let mut bits = FixedBitSet::with_capacity(g.order());
        bits.insert(0);
        SubgroupBuilder {
            bits,
            elems: vec![0],
            gens: Vec::new(),
        }
    }

    /// Starts from a known subgroup and generating set.
    pub fn from_subgroup(h: &SubgroupSet, gens: &[usize]) -> Self {
        SubgroupBuilder {
            bits: h.bits().clone(),
            elems: h.elements(),
            gens: gens.to_vec(),
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    /// Adds `x`; returns whether the subgroup grew.
    pub fn add(&mut self, g: &ConcreteGroup, x: usize) -> bool {
        if self.bits.contains(x) {
            return false;
        }
        self.gens.push(x);
        // Old elements are closed under the old generators, so only products
        // with the new generator and products of new elements need visiting.
        let old_len = self.elems.len();
        for k in 0..old_len {
            let y = g.mul(self.elems[k], x);
            if !self.bits.put(y) {
                self.elems.push(y);
            }
        }
        let mut i = old_len;
        while i < self.elems.len() {
            let e = self.elems[i];
            for &s in &self.gens {
                let y = g.mul(e, s);
                if !self.bits.put(y) {
                    self.elems.push(y);
                }
            }
            i += 1;
        }
        true
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn finish(self) -> SubgroupSet {
        SubgroupSet::from_bits(self.bits)
    }

    pub fn finish_with_gens(self) -> (SubgroupSet, Vec<usize>) {
        let gens = self.gens;
        (SubgroupSet::from_bits(self.bits), gens)
    }
}

/// A small generating set of `h`, chosen greedily in element-index order.
pub fn generating_set(g: &ConcreteGroup, h: &SubgroupSet) -> Vec<usize> {
    let mut b = SubgroupBuilder::new(g);
    // prefer elements of large order: fewer generators in practice
    let orders = g.orders();
    let mut elems = h.elements();
    elems.sort_by_key(|&x| (std::cmp::Reverse(orders[x]), x));
    for x in elems {
        if b.order() == h.order() {
            break;
        }
        b.add(g, x);
    }
    b.gens().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(m: usize) -> ConcreteGroup {
        let table = (0..m * m).map(|k| (k / m + k % m) % m).collect();
        ConcreteGroup::from_table(format!("C{m}"), m, table, vec![1], None).unwrap()
    }

    #[test]
    fn cyclic_basics() {
        let g = cyclic(9);
        assert_eq!(g.element_order(0), 1);
        assert_eq!(g.element_order(3), 3);
        assert_eq!(g.element_order(2), 9);
        assert_eq!(g.pow(2, 5), 1);
        assert_eq!(g.zpow(1, -1), 8);
        assert!(g.check_associative().is_none());
    }

    #[test]
    fn closure_edges() {
        let g = cyclic(12);
        assert_eq!(closure(&g, []).order(), 1);
        assert_eq!(closure(&g, [4]).order(), 3);
        assert_eq!(closure(&g, [4, 6]).order(), 6);
        assert_eq!(closure(&g, g.gens().to_vec()).order(), 12);
    }

    #[test]
    fn rejects_non_group_tables() {
        // constant row
        let table = vec![0, 1, 1, 1];
        assert!(ConcreteGroup::from_table("bad", 2, table, vec![1], None).is_err());
    }

    #[test]
    fn document_round_trip() {
        let g = cyclic(6);
        let doc = g.to_document();
        let text = serde_json::to_string(&doc).unwrap();
        let back: GroupDocument = serde_json::from_str(&text).unwrap();
        let h = ConcreteGroup::from_document(back).unwrap();
        assert_eq!(h.order(), 6);
        assert_eq!(h.to_document(), doc);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(check_cap_against(6, 5), Err(Error::CapExceeded { .. })));
        assert!(check_cap_against(5, 5).is_ok());
    }
}
