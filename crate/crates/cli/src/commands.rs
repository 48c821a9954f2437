//! Subcommand bodies. Each returns the JSON form, a text rendering and
//! whether the command's predicate held (for the exit code).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use maxpair_core::actions::{map_order, search_automorphisms, SearchConstraints};
use maxpair_core::catalog::list_catalog;
use maxpair_core::iso::is_isomorphic;
use maxpair_core::maximality::build_group_from_pair;
use maxpair_core::{all_subgroups, check_pair, is_d_maximal, min_generators, series, structural_report};
use serde_json::{json, Value};

use crate::resolve::{resolve_automorphism, Resolved};

pub struct CommandOutput {
    pub json: Value,
    pub text: String,
    pub success: bool,
}

pub fn catalog() -> CommandOutput {
    let list = list_catalog();
    let mut text = String::new();
    for e in &list {
        let auts = if e.automorphisms.is_empty() {
            "-".to_string()
        } else {
            e.automorphisms.join(",")
        };
        let slot = if e.extension_slot { " [no presentation]" } else { "" };
        let _ = writeln!(text, "{:<14} {:<28} {}{slot}", e.id, auts, e.description);
    }
    CommandOutput {
        json: json!({ "entries": list }),
        text,
        success: true,
    }
}

pub fn info(r: &Resolved, with_series: bool) -> Result<CommandOutput> {
    let g = r.group();
    let lcs = series::lower_central_series(g);
    let derived = series::derived_series(g);
    let class = lcs.class();
    let prime = g.prime_power();
    let regular = match prime {
        Some(_) => Some(series::is_regular(g)?.regular),
        None => None,
    };
    let d = min_generators(g);
    let exponent = series::exponent(g);
    let json = json!({
        "label": r.label(),
        "order": g.order(),
        "prime_power": prime.map(|(p, n)| json!({ "p": p, "n": n })),
        "d": d,
        "exponent": exponent,
        "class": class,
        "center": series::center(g).order(),
        "frattini": series::frattini_subgroup(g).order(),
        "lower_central": lcs.orders(),
        "derived": derived.orders(),
        "regular": regular,
        "automorphisms": r.automorphism_names(),
    });
    let mut text = String::new();
    let _ = writeln!(text, "{}: order {}, d {}, exponent {}", r.label(), g.order(), d, exponent);
    match class {
        Some(c) => {
            let _ = writeln!(text, "nilpotent of class {c}");
        }
        None => {
            let _ = writeln!(text, "not nilpotent");
        }
    }
    if let Some(reg) = regular {
        let _ = writeln!(text, "regular: {reg}");
    }
    if with_series {
        let _ = writeln!(text, "lower central: {:?}", lcs.orders());
        let _ = writeln!(text, "derived: {:?}", derived.orders());
        let _ = writeln!(text, "center {}, frattini {}", json["center"], json["frattini"]);
    }
    Ok(CommandOutput {
        json,
        text,
        success: true,
    })
}

pub fn dmax(r: &Resolved) -> CommandOutput {
    let rep = is_d_maximal(r.group());
    let mut text = format!("{}: d = {}, d-maximal: {}\n", rep.label, rep.d, rep.is_d_maximal);
    if let Some(w) = &rep.witness {
        let _ = writeln!(text, "witness: subgroup of order {} with d = {}", w.order, w.rank);
    }
    CommandOutput {
        json: rep.to_json(),
        text,
        success: rep.is_d_maximal,
    }
}

pub fn pair(r: &Resolved, aut: &str, q: u64, structural: bool) -> Result<CommandOutput> {
    let alpha = resolve_automorphism(r, aut)?;
    let rep = check_pair(r.group(), &alpha, q)?;
    let mut json = rep.to_json();
    let mut text = format!(
        "{}: p = {}, q = {}, d = {}, verdict: {}\n",
        rep.label, rep.p, rep.q, rep.d, rep.verdict
    );
    let line = |name: &str, holds: bool| format!("  ({name}) {}\n", if holds { "holds" } else { "fails" });
    text += &line("a", rep.cond_a.holds);
    text += &line("b", rep.cond_b.holds);
    text += &line("c", rep.cond_c.holds);
    if let Some(w) = rep.cond_c.witness.as_ref().or(rep.cond_a.witness.as_ref()) {
        let _ = writeln!(text, "witness: subgroup of order {} with d = {}", w.order, w.rank);
    }
    let mut success = rep.verdict;
    if structural {
        let s = structural_report(r.group(), &alpha, q);
        for a in &s.assertions {
            let _ = write!(text, "  {:<4} {:<8} {}", a.id, a.outcome.as_str(), a.description);
            if let Some(w) = &a.witness {
                let _ = write!(text, " ({w})");
            }
            text.push('\n');
        }
        success &= s.passed();
        json["structural"] = serde_json::to_value(&s)?;
        json["timings"]["structural_ms"] = json!(s.elapsed.as_secs_f64() * 1e3);
    }
    Ok(CommandOutput { json, text, success })
}

pub fn search_aut(r: &Resolved, order: u64, scalar: u64, limit: Option<usize>) -> Result<CommandOutput> {
    let found = search_automorphisms(r.group(), SearchConstraints { order, scalar, limit })?;
    let maps: Vec<String> = found.iter().map(|f| r.format_map(f)).collect();
    let mut text = format!("{} automorphism(s) of order {order} with scalar {scalar}\n", maps.len());
    for m in &maps {
        let _ = writeln!(text, "  {m}");
    }
    Ok(CommandOutput {
        json: json!({ "label": r.label(), "order": order, "scalar": scalar, "maps": maps }),
        text,
        success: !maps.is_empty(),
    })
}

pub fn semidirect(r: &Resolved, aut: &str, t: u32, out: Option<&Path>) -> Result<CommandOutput> {
    let alpha = resolve_automorphism(r, aut)?;
    let q = map_order(&alpha)?;
    if q < 2 {
        bail!("the automorphism is trivial");
    }
    let built = build_group_from_pair(r.group(), &alpha, q, t)?;
    let doc = built.to_document();
    if let Some(path) = out {
        let body = serde_json::to_string(&doc)?;
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    let text = format!("{}: order {}\n", built.label(), built.order());
    Ok(CommandOutput {
        json: json!({ "label": built.label(), "order": built.order(), "q": q, "t": t, "written": out.map(|p| p.display().to_string()) }),
        text,
        success: true,
    })
}

pub fn subgroups(r: &Resolved, full: bool) -> CommandOutput {
    let g = r.group();
    let lattice = all_subgroups(g);
    let counts: BTreeMap<usize, usize> = lattice.by_order.iter().map(|(&o, v)| (o, v.len())).collect();
    let mut text = format!("{}: {} subgroups, {} maximal\n", r.label(), lattice.len(), lattice.maximal.len());
    for (o, c) in &counts {
        let _ = writeln!(text, "  order {o:>6}: {c}");
    }
    let mut json = json!({
        "label": r.label(),
        "total": lattice.len(),
        "maximal": lattice.maximal.len(),
        "by_order": counts,
    });
    if full {
        let ranks = lattice.ranks(g);
        let dump: Vec<Value> = lattice
            .subgroups
            .iter()
            .zip(&lattice.gens)
            .zip(ranks)
            .map(|((h, gens), &rank)| {
                let bits: String = (0..g.order()).map(|x| if h.contains(x) { '1' } else { '0' }).collect();
                json!({
                    "order": h.order(),
                    "rank": rank,
                    "generators": gens.iter().map(|&x| r.format_element(x)).collect::<Vec<_>>(),
                    "bits": bits,
                })
            })
            .collect();
        for s in &dump {
            let gens: Vec<&str> = s["generators"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
            let _ = writeln!(text, "  {} d={} <{}>", s["order"], s["rank"], gens.join(", "));
        }
        json["subgroups"] = Value::Array(dump);
    }
    CommandOutput {
        json,
        text,
        success: true,
    }
}

pub fn iso(a: &Resolved, b: &Resolved) -> Result<CommandOutput> {
    let res = is_isomorphic(a.group(), b.group())?;
    let map = res.map.as_ref().map(|f| {
        a.group()
            .gens()
            .iter()
            .map(|&x| format!("{}->{}", a.format_element(x), b.format_element(f.apply(x))))
            .collect::<Vec<_>>()
            .join(", ")
    });
    let mut text = format!("{} ~ {}: {}\n", a.label(), b.label(), res.isomorphic);
    if let Some(m) = &map {
        let _ = writeln!(text, "  {m}");
    }
    Ok(CommandOutput {
        json: json!({ "left": a.label(), "right": b.label(), "isomorphic": res.isomorphic, "map": map }),
        text,
        success: res.isomorphic,
    })
}
