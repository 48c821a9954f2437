//! Group and automorphism references.
//!
//! A group reference is tried as a catalog id first (family names such as
//! `heis` take their prime from `--p`), then as a file: a pc presentation, or
//! a `maxpair-group-v1` JSON document written by `semidirect --out`.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use maxpair_core::actions::hom_from_literal;
use maxpair_core::catalog::{get_group, resolve_id, CatalogGroup};
use maxpair_core::group::GroupDocument;
use maxpair_core::presentation::Word;
use maxpair_core::{parse_presentation, ConcreteGroup, Error, GroupMap, PcPresentation};

pub enum Resolved {
    Catalog(Arc<CatalogGroup>),
    File {
        group: Box<ConcreteGroup>,
        presentation: Option<PcPresentation>,
    },
}

impl Resolved {
    pub fn group(&self) -> &ConcreteGroup {
        match self {
            Resolved::Catalog(e) => &e.group,
            Resolved::File { group, .. } => group,
        }
    }

    pub fn presentation(&self) -> Option<&PcPresentation> {
        match self {
            Resolved::Catalog(e) => e.presentation.as_ref(),
            Resolved::File { presentation, .. } => presentation.as_ref(),
        }
    }

    pub fn label(&self) -> &str {
        self.group().label()
    }

    /// Named automorphisms shipped with the entry.
    pub fn automorphism_names(&self) -> Vec<String> {
        match self {
            Resolved::Catalog(e) => e.automorphisms.iter().map(|(n, _)| n.clone()).collect(),
            Resolved::File { .. } => Vec::new(),
        }
    }

    /// Element `x` as a normal-form word when a presentation is known,
    /// otherwise as its table index.
    pub fn format_element(&self, x: usize) -> String {
        let Some(pres) = self.presentation() else {
            return format!("#{x}");
        };
        let mut rest = x;
        let mut exps = vec![0u64; pres.len()];
        for (k, &r) in pres.rel_orders.iter().enumerate().rev() {
            exps[k] = (rest as u64) % r;
            rest /= r as usize;
        }
        pres.format_word(&Word::from_exponents(&exps))
    }

    /// `gen->image` clauses for a map, one per generator of the group.
    pub fn format_map(&self, f: &GroupMap) -> String {
        let g = self.group();
        g.gens()
            .iter()
            .map(|&x| format!("{}->{}", self.format_element(x), self.format_element(f.apply(x))))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn resolve_group(reference: &str, p: Option<u64>) -> Result<Resolved> {
    let id = resolve_id(reference, p);
    match get_group(&id) {
        Ok(entry) => return Ok(Resolved::Catalog(entry)),
        Err(Error::UnknownEntry(_)) => {}
        Err(e) => return Err(e).with_context(|| format!("building catalog entry {id}")),
    }
    let path = Path::new(reference);
    if !path.is_file() {
        bail!("{reference:?} is neither a catalog id nor a readable file");
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let doc: GroupDocument =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let group = ConcreteGroup::from_document(doc)?;
        return Ok(Resolved::File {
            group: Box::new(group),
            presentation: None,
        });
    }
    let pres = parse_presentation(&text).with_context(|| format!("parsing {}", path.display()))?;
    let group = pres.build_group()?;
    Ok(Resolved::File {
        group: Box::new(group),
        presentation: Some(pres),
    })
}

/// An automorphism given by catalog name (optionally prefixed `catalog:`)
/// or as a literal such as `"b->b^2, c->c^2"`.
pub fn resolve_automorphism(group: &Resolved, reference: &str) -> Result<GroupMap> {
    let name = reference.strip_prefix("catalog:").unwrap_or(reference).trim();
    if name.contains("->") {
        return hom_from_literal(group.group(), name).with_context(|| format!("automorphism literal {name:?}"));
    }
    match group {
        Resolved::Catalog(e) => Ok(e.automorphism(name)?.clone()),
        Resolved::File { .. } => bail!("{name:?} is not a literal and file groups carry no named automorphisms"),
    }
}
