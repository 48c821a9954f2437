//! Polycyclic presentations: parsing, rendering, collection and enumeration.
//!
//! Relations are stored in conjugate form: `conj j i : w` means
//! `g_j^{g_i} = g_i^-1 g_j g_i = w`. A commutator relation `[g_j, g_i] = c`
//! is therefore written `conj j i : g_j c`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{check_cap, ConcreteGroup};

/// A word over pc generators (0-based indices). The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word {
    pub factors: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn new(factors: Vec<(usize, i64)>) -> Self {
        Word {
            factors: factors.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn generator(k: usize) -> Self {
        Word { factors: vec![(k, 1)] }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Normal-form word for an exponent vector.
    pub fn from_exponents(v: &[u64]) -> Self {
        Word {
            factors: v
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e != 0)
                .map(|(k, &e)| (k, e as i64))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcPresentation {
    pub name: String,
    pub gen_names: Vec<String>,
    /// Prime relative order of each generator.
    pub rel_orders: Vec<u64>,
    /// `g_i^{rel_orders[i]}` as a normal-form word in generators `> i`.
    pub power_rels: Vec<Word>,
    /// `(j, i) -> g_j^{g_i}` for `j > i`; missing entries mean `g_j` is fixed.
    pub conj_rels: BTreeMap<(usize, usize), Word>,
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("g{i}")).collect()
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !s.chars().all(|c| c.is_ascii_digit())
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str, offset: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: &line[s..i],
                    col: offset + s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            text: &line[s..],
            col: offset + s + 1,
        });
    }
    out
}

struct Parser {
    line: usize,
    name: Option<String>,
    names: Vec<String>,
    orders: Vec<u64>,
    power: Vec<Option<Word>>,
    conj: BTreeMap<(usize, usize), Word>,
    ended: bool,
}

impl Parser {
    fn err(&self, col: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: col,
            message: message.into(),
        }
    }

    fn resolve(&self, tok: &Tok) -> Result<usize> {
        if let Some(k) = self.names.iter().position(|n| n == tok.text) {
            return Ok(k);
        }
        if let Ok(i) = tok.text.parse::<usize>() {
            if (1..=self.names.len()).contains(&i) {
                return Ok(i - 1);
            }
        }
        Err(self.err(tok.col, format!("unknown generator {:?}", tok.text)))
    }

    fn require_gens(&self, col: usize) -> Result<()> {
        if self.names.is_empty() && self.name.is_some() && self.orders.is_empty() && self.power.is_empty() {
            return Err(self.err(col, "expected `gens` before relations"));
        }
        Ok(())
    }

    fn word(&self, toks: &[Tok], col: usize, min_index: usize, relation: &str) -> Result<Word> {
        if toks.is_empty() {
            return Err(self.err(col, "missing word after ':'"));
        }
        if toks.len() == 1 && toks[0].text == "1" {
            return Ok(Word::identity());
        }
        let mut factors = Vec::new();
        let mut last: Option<usize> = None;
        for t in toks {
            let (gen, exp) = match t.text.split_once('^') {
                Some((g, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| self.err(t.col, format!("bad exponent in {:?}", t.text)))?;
                    (g, e)
                }
                None => (t.text, 1),
            };
            let k = self.resolve(&Tok { text: gen, col: t.col })?;
            if last.is_some_and(|l| k <= l) {
                return Err(self.err(t.col, "word factors must use ascending generators"));
            }
            if self.orders.len() <= k {
                return Err(self.err(t.col, "generator used before its order is declared"));
            }
            if exp < 1 || exp as u64 >= self.orders[k] {
                return Err(self.err(
                    t.col,
                    format!("exponent {exp} out of range for {} (order {})", gen, self.orders[k]),
                ));
            }
            if k < min_index {
                return Err(Error::Support {
                    line: self.line,
                    relation: relation.to_string(),
                    generator: self.names[k].clone(),
                });
            }
            factors.push((k, exp));
            last = Some(k);
        }
        Ok(Word { factors })
    }

    fn directive(&mut self, raw: &str) -> Result<()> {
        let (head, body) = match raw.find(':') {
            Some(pos) => (&raw[..pos], Some((&raw[pos + 1..], pos + 1))),
            None => (raw, None),
        };
        let toks = tokens(head, 0);
        let Some(first) = toks.first() else {
            return Err(self.err(1, "empty directive"));
        };
        if self.ended {
            return Err(self.err(first.col, "content after `end`"));
        }
        let colon_col = body.map(|(_, c)| c).unwrap_or(raw.len() + 1);
        let body_toks = body.map(|(b, off)| tokens(b, off)).unwrap_or_default();
        let expect_args = |n: usize| -> Result<()> {
            if toks.len() != n {
                Err(self.err(first.col, format!("`{}` takes {} argument(s)", first.text, n - 1)))
            } else {
                Ok(())
            }
        };
        match first.text {
            "group" => {
                if self.name.is_some() {
                    return Err(self.err(first.col, "duplicate `group`"));
                }
                expect_args(2)?;
                self.name = Some(toks[1].text.to_string());
            }
            "gens" => {
                if self.name.is_none() {
                    return Err(self.err(first.col, "expected `group` first"));
                }
                if !self.names.is_empty() {
                    return Err(self.err(first.col, "duplicate `gens`"));
                }
                let n: usize = toks
                    .get(1)
                    .and_then(|t| t.text.parse().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| self.err(first.col, "`gens` needs a positive count"))?;
                let names: Vec<String> = if toks.len() == 2 {
                    default_names(n)
                } else if toks.len() == n + 2 {
                    for t in &toks[2..] {
                        if !is_identifier(t.text) {
                            return Err(self.err(t.col, format!("invalid generator name {:?}", t.text)));
                        }
                    }
                    toks[2..].iter().map(|t| t.text.to_string()).collect()
                } else {
                    return Err(self.err(first.col, format!("`gens {n}` lists {} names", toks.len() - 2)));
                };
                for (i, a) in names.iter().enumerate() {
                    if names[..i].contains(a) {
                        return Err(self.err(first.col, format!("duplicate generator name {a:?}")));
                    }
                }
                self.power = vec![None; n];
                self.names = names;
            }
            "order" => {
                self.require_gens(first.col)?;
                expect_args(3)?;
                let k = self.resolve(&toks[1])?;
                if k != self.orders.len() {
                    return Err(self.err(toks[1].col, "`order` lines must list generators in ascending order"));
                }
                let p: u64 = toks[2]
                    .text
                    .parse()
                    .map_err(|_| self.err(toks[2].col, "order must be an integer"))?;
                if !arith::is_prime(p) {
                    return Err(Error::NonPrimeOrder {
                        line: self.line,
                        generator: self.names[k].clone(),
                        order: p,
                    });
                }
                self.orders.push(p);
            }
            "pow" => {
                self.require_gens(first.col)?;
                expect_args(2)?;
                if body.is_none() {
                    return Err(self.err(first.col, "expected ':'"));
                }
                let i = self.resolve(&toks[1])?;
                if self.power[i].is_some() {
                    return Err(self.err(toks[1].col, "duplicate power relation"));
                }
                let rel = format!("pow {}", self.names[i]);
                let w = self.word(&body_toks, colon_col, i + 1, &rel)?;
                self.power[i] = Some(w);
            }
            "conj" => {
                self.require_gens(first.col)?;
                expect_args(3)?;
                if body.is_none() {
                    return Err(self.err(first.col, "expected ':'"));
                }
                let j = self.resolve(&toks[1])?;
                let i = self.resolve(&toks[2])?;
                if j <= i {
                    return Err(self.err(toks[1].col, "`conj j i` requires j > i"));
                }
                if self.conj.contains_key(&(j, i)) {
                    return Err(self.err(toks[1].col, "duplicate conjugacy relation"));
                }
                let rel = format!("conj {} {}", self.names[j], self.names[i]);
                let w = self.word(&body_toks, colon_col, i + 1, &rel)?;
                if w != Word::generator(j) {
                    self.conj.insert((j, i), w);
                }
            }
            "end" => {
                expect_args(1)?;
                if self.names.is_empty() {
                    return Err(self.err(first.col, "`end` before `gens`"));
                }
                if self.orders.len() != self.names.len() {
                    return Err(self.err(first.col, "missing `order` lines"));
                }
                self.ended = true;
            }
            other => return Err(self.err(first.col, format!("unknown directive {other:?}"))),
        }
        Ok(())
    }
}

/// Parses the line-oriented presentation format.
pub fn parse_presentation(text: &str) -> Result<PcPresentation> {
    let mut p = Parser {
        line: 0,
        name: None,
        names: Vec::new(),
        orders: Vec::new(),
        power: Vec::new(),
        conj: BTreeMap::new(),
        ended: false,
    };
    for (idx, raw) in text.lines().enumerate() {
        p.line = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        p.directive(content)?;
    }
    if !p.ended {
        return Err(Error::Syntax {
            line: p.line.max(1),
            column: 1,
            message: "missing `end`".into(),
        });
    }
    Ok(PcPresentation {
        name: p.name.unwrap_or_default(),
        gen_names: p.names,
        rel_orders: p.orders,
        power_rels: p.power.into_iter().map(Option::unwrap_or_default).collect(),
        conj_rels: p.conj,
    })
}

impl PcPresentation {
    pub fn len(&self) -> usize {
        self.rel_orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rel_orders.is_empty()
    }

    /// Product of the relative orders.
    pub fn expected_order(&self) -> u128 {
        self.rel_orders.iter().map(|&p| p as u128).product()
    }

    /// `g_j^{g_i}` with the implicit default.
    pub fn conjugate(&self, j: usize, i: usize) -> Word {
        self.conj_rels
            .get(&(j, i))
            .cloned()
            .unwrap_or_else(|| Word::generator(j))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".into();
        }
        w.factors
            .iter()
            .map(|&(k, e)| {
                if e == 1 {
                    self.gen_names[k].clone()
                } else {
                    format!("{}^{}", self.gen_names[k], e)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Canonical text form; `parse_presentation(&p.render()) == p`.
    pub fn render(&self) -> String {
        let n = self.len();
        let mut out = String::new();
        writeln!(out, "group {}", self.name).unwrap();
        if self.gen_names == default_names(n) {
            writeln!(out, "gens {n}").unwrap();
        } else {
            writeln!(out, "gens {n} {}", self.gen_names.join(" ")).unwrap();
        }
        for k in 0..n {
            writeln!(out, "order {} {}", self.gen_names[k], self.rel_orders[k]).unwrap();
        }
        for (k, w) in self.power_rels.iter().enumerate() {
            if !w.is_identity() {
                writeln!(out, "pow {} : {}", self.gen_names[k], self.format_word(w)).unwrap();
            }
        }
        for (&(j, i), w) in &self.conj_rels {
            writeln!(
                out,
                "conj {} {} : {}",
                self.gen_names[j],
                self.gen_names[i],
                self.format_word(w)
            )
            .unwrap();
        }
        out.push_str("end\n");
        out
    }

    /// Right-multiplies the exponent vector `v` by `g_k`, collecting from the left.
    fn mul_gen(&self, v: &mut [u64], k: usize) {
        let n = self.len();
        let tail: Vec<u64> = v[k + 1..].to_vec();
        v[k + 1..].iter_mut().for_each(|e| *e = 0);
        v[k] += 1;
        if v[k] == self.rel_orders[k] {
            v[k] = 0;
            let pw = self.power_rels[k].clone();
            self.mul_word(v, &pw);
        }
        // (tail) g_k = g_k (tail)^{g_k}
        for j in k + 1..n {
            let e = tail[j - k - 1];
            if e == 0 {
                continue;
            }
            let w = self.conjugate(j, k);
            for _ in 0..e {
                self.mul_word(v, &w);
            }
        }
    }

    fn mul_word(&self, v: &mut [u64], w: &Word) {
        for &(m, e) in &w.factors {
            debug_assert!(e > 0);
            for _ in 0..e {
                self.mul_gen(v, m);
            }
        }
    }

    /// Exponent vector of `v^-1`.
    fn inverse_vec(&self, v: &[u64]) -> Vec<u64> {
        let n = self.len();
        let mut cur = v.to_vec();
        let mut result = vec![0; n];
        // Kill the leading generator of `cur` repeatedly; each step pushes
        // the leading index strictly to the right.
        while let Some(k) = cur.iter().position(|&e| e != 0) {
            let e = self.rel_orders[k] - cur[k];
            for _ in 0..e {
                self.mul_gen(&mut cur, k);
                self.mul_gen(&mut result, k);
            }
        }
        result
    }

    /// Exponent vector of an arbitrary word (any integer exponents).
    pub fn collect(&self, w: &Word) -> Vec<u64> {
        let n = self.len();
        let mut v = vec![0; n];
        for &(k, e) in &w.factors {
            assert!(k < n, "generator index {k} out of range");
            if e >= 0 {
                for _ in 0..e {
                    self.mul_gen(&mut v, k);
                }
            } else {
                let mut unit = vec![0; n];
                unit[k] = 1;
                let inv = Word::from_exponents(&self.inverse_vec(&unit));
                for _ in 0..e.unsigned_abs() {
                    self.mul_word(&mut v, &inv);
                }
            }
        }
        v
    }

    /// The unique normal-form word equal to `w`.
    pub fn normal_form(&self, w: &Word) -> Word {
        Word::from_exponents(&self.collect(w))
    }

    fn strides(&self) -> Vec<usize> {
        let n = self.len();
        let mut s = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.rel_orders[k + 1] as usize;
        }
        s
    }

    /// Element index of an exponent vector in the enumerated group.
    pub fn index_of(&self, v: &[u64]) -> usize {
        self.strides()
            .iter()
            .zip(v)
            .map(|(&s, &e)| s * e as usize)
            .sum()
    }

    /// Enumerates the group: all exponent vectors, the multiplication table,
    /// and a consistency proof (see module docs on [`build_group`]).
    pub fn build_group(&self) -> Result<ConcreteGroup> {
        build_group(self)
    }
}

/// Enumerates a presentation into a [`ConcreteGroup`].
///
/// Right multiplication by each generator is tabulated by collection, columns
/// from the last generator down so every rewrite step only looks up finished
/// columns. The presentation is consistent iff these permutations satisfy
/// every power and conjugacy relation: their group is then a quotient of the
/// presented group acting transitively on all `prod rel_orders` normal forms.
/// Groups of order at most 1000 additionally get an exhaustive associativity
/// check on the final table.
pub fn build_group(pres: &PcPresentation) -> Result<ConcreteGroup> {
    let n_gens = pres.len();
    let expected = pres.expected_order();
    if expected > usize::MAX as u128 {
        return Err(Error::CapExceeded {
            order: usize::MAX,
            cap: crate::group::element_cap(),
        });
    }
    let order = expected as usize;
    check_cap(order)?;
    let strides = pres.strides();
    let exp_at = |x: usize, k: usize| (x / strides[k]) % pres.rel_orders[k] as usize;
    let inconsistent = |detail: String| Error::Inconsistent {
        name: pres.name.clone(),
        detail,
    };

    // right[x * n_gens + k] = x * g_k
    let mut right = vec![0u32; order * n_gens];
    for k in (0..n_gens).rev() {
        let conj: Vec<Word> = (k + 1..n_gens).map(|j| pres.conjugate(j, k)).collect();
        for x in 0..order {
            let ek = exp_at(x, k);
            let mut base = x;
            for j in k..n_gens {
                base -= exp_at(x, j) * strides[j];
            }
            let p = pres.rel_orders[k] as usize;
            let mut idx = base + ((ek + 1) % p) * strides[k];
            let apply = |idx: &mut usize, w: &Word| {
                for &(m, e) in &w.factors {
                    for _ in 0..e {
                        *idx = right[*idx * n_gens + m] as usize;
                    }
                }
            };
            if ek + 1 == p {
                apply(&mut idx, &pres.power_rels[k]);
            }
            for j in k + 1..n_gens {
                for _ in 0..exp_at(x, j) {
                    apply(&mut idx, &conj[j - k - 1]);
                }
            }
            right[x * n_gens + k] = idx as u32;
        }
    }

    let act = |x: usize, k: usize| right[x * n_gens + k] as usize;
    let act_word = |mut x: usize, w: &Word| {
        for &(m, e) in &w.factors {
            for _ in 0..e {
                x = act(x, m);
            }
        }
        x
    };
    for k in 0..n_gens {
        let p = pres.rel_orders[k];
        for x in 0..order {
            let mut y = x;
            for _ in 0..p {
                y = act(y, k);
            }
            if y != act_word(x, &pres.power_rels[k]) {
                return Err(inconsistent(format!(
                    "power relation of {} fails on element {x}",
                    pres.gen_names[k]
                )));
            }
        }
        for j in k + 1..n_gens {
            let w = pres.conjugate(j, k);
            for x in 0..order {
                if act(act(x, j), k) != act_word(act(x, k), &w) {
                    return Err(inconsistent(format!(
                        "conjugacy relation {}^{} fails on element {x}",
                        pres.gen_names[j], pres.gen_names[k]
                    )));
                }
            }
        }
    }

    let mut table = vec![0usize; order * order];
    for x in 0..order {
        table[x * order] = x;
    }
    for y in 1..order {
        let last = (0..n_gens).rev().find(|&k| exp_at(y, k) != 0).unwrap();
        let prev = y - strides[last];
        for x in 0..order {
            table[x * order + y] = act(table[x * order + prev], last);
        }
    }
    let gens: Vec<usize> = strides.clone();
    let group = ConcreteGroup::from_table(
        pres.name.clone(),
        order,
        table,
        gens,
        Some(pres.gen_names.clone()),
    )
    .map_err(|e| inconsistent(e.to_string()))?;
    if order <= 1000 {
        if let Some((a, b, c)) = group.check_associative() {
            return Err(inconsistent(format!("associativity fails on ({a}, {b}, {c})")));
        }
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS3: &str = "group heis\ngens 3 x y z\norder x 3\norder y 3\norder z 3\nconj y x : y z\nend\n";
    const Q8: &str = "group q8\ngens 3\norder g1 2\norder g2 2\norder g3 2\npow g1 : g3\npow g2 : g3\nconj g2 g1 : g2 g3\nend\n";

    #[test]
    fn parses_cyclic() {
        let p = parse_presentation("group T\ngens 1\norder g1 3\nend").unwrap();
        assert_eq!(p.rel_orders, vec![3]);
        assert!(p.power_rels[0].is_identity());
        assert_eq!(p.build_group().unwrap().order(), 3);
    }

    #[test]
    fn rejects_wrong_conj_order() {
        let text = "group T\ngens 2\norder g1 3\norder g2 3\nconj g1 g2 : g1\nend";
        match parse_presentation(text) {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 5);
                assert_eq!(column, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_support_violation() {
        let text = "group T\ngens 2\norder g1 3\norder g2 3\npow g2 : g1\nend";
        assert!(matches!(parse_presentation(text), Err(Error::Support { line: 5, .. })));
    }

    #[test]
    fn rejects_composite_order_and_bad_exponents() {
        let text = "group T\ngens 1\norder g1 4\nend";
        assert!(matches!(
            parse_presentation(text),
            Err(Error::NonPrimeOrder { order: 4, .. })
        ));
        let text = "group T\ngens 2\norder g1 3\norder g2 3\npow g1 : g2^3\nend";
        assert!(matches!(parse_presentation(text), Err(Error::Syntax { line: 5, .. })));
        let text = "group T\ngens 2\norder g1 3\norder g2 3\npow g1 : h\nend";
        assert!(matches!(parse_presentation(text), Err(Error::Syntax { line: 5, .. })));
    }

    #[test]
    fn bare_indices_and_comments() {
        let text = "# heading\ngroup T # trailing\ngens 2\norder 1 2\norder 2 2\npow 1 : 2\nend\n\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.build_group().unwrap().order(), 4);
    }

    #[test]
    fn collects_heisenberg_by_hand() {
        // y x = x (x^-1 y x) = x y^x = x y z
        let p = parse_presentation(HEIS3).unwrap();
        let w = Word::new(vec![(1, 1), (0, 1)]);
        assert_eq!(p.normal_form(&w), Word::new(vec![(0, 1), (1, 1), (2, 1)]));
        // x^-1 = x^2
        assert_eq!(p.normal_form(&Word::new(vec![(0, -1)])), Word::new(vec![(0, 2)]));
        assert_eq!(p.normal_form(&Word::identity()), Word::identity());
        assert_eq!(p.normal_form(&Word::new(vec![(0, 3)])), Word::identity());
    }

    #[test]
    fn q8_builds() {
        let p = parse_presentation(Q8).unwrap();
        let g = p.build_group().unwrap();
        assert_eq!(g.order(), 8);
        // g1^-1 = g1 g3 in normal form
        assert_eq!(
            p.normal_form(&Word::new(vec![(0, -1)])),
            Word::new(vec![(0, 1), (2, 1)])
        );
    }

    #[test]
    fn corrupted_heisenberg_is_inconsistent() {
        // z^x = z^2 makes x act on <z> by inversion, which has order 2 and
        // cannot be the action of an element with x^3 = 1.
        let text = HEIS3.replace("end", "conj z x : z^2\nend");
        let p = parse_presentation(&text).unwrap();
        assert!(matches!(p.build_group(), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn table_agrees_with_collector() {
        let p = parse_presentation(Q8).unwrap();
        let g = p.build_group().unwrap();
        let n = p.len();
        for x in 0..g.order() {
            let v: Vec<u64> = (0..n)
                .map(|k| ((x / p.strides()[k]) as u64) % p.rel_orders[k])
                .collect();
            for k in 0..n {
                let mut w = Word::from_exponents(&v);
                w.factors.push((k, 1));
                let expect = p.index_of(&p.collect(&w));
                assert_eq!(g.mul(x, g.gens()[k]), expect);
            }
        }
    }

    #[test]
    fn render_round_trip() {
        let p = parse_presentation(HEIS3).unwrap();
        assert_eq!(parse_presentation(&p.render()).unwrap(), p);
        let q = parse_presentation(Q8).unwrap();
        assert_eq!(parse_presentation(&q.render()).unwrap(), q);
    }
}
