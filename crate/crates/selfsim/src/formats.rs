//! JSON and DOT forms of portraits, series and reports, and the triple file.

use std::fmt::Write;

use selfsim_core::adic::{PowerSeries, QuotientElement};
use selfsim_core::closure::{ClosureReport, ModulePresentation};
use selfsim_core::repr::{FgAbelianGroup, Transversal, VirtualEndo};
use selfsim_core::tree::{Portrait, System};
use selfsim_core::{Permutation, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// `{"m", "L", "nodes"}` with one 1-indexed image array per vertex, breadth first.
pub fn portrait_json(p: &Portrait) -> Value {
    let nodes: Vec<Vec<u32>> = p.labels().iter().map(|s| s.images().iter().map(|&i| i + 1).collect()).collect();
    json!({ "m": p.degree(), "L": p.depth(), "nodes": nodes })
}

/// Inverse of [`portrait_json`]; `None` on a malformed value.
pub fn portrait_from_json(v: &Value) -> Option<Portrait> {
    let m = v.get("m")?.as_u64()? as usize;
    let depth = v.get("L")?.as_u64()? as usize;
    let labels = v
        .get("nodes")?
        .as_array()?
        .iter()
        .map(|n| {
            let images =
                n.as_array()?.iter().map(|i| Some(i.as_u64()?.checked_sub(1)? as u32)).collect::<Option<Vec<_>>>()?;
            Permutation::from_images(images).ok()
        })
        .collect::<Option<Vec<_>>>()?;
    Portrait::from_labels(m, depth, labels)
}

/// Graphviz digraph with one vertex per tree vertex, labelled by its permutation.
pub fn portrait_dot(p: &Portrait, name: &str) -> String {
    let m = p.degree();
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", name.replace('"', "'")).unwrap();
    writeln!(out, "  node [shape=box, fontname=monospace];").unwrap();
    for (i, s) in p.labels().iter().enumerate() {
        writeln!(out, "  v{i} [label=\"{s}\"];").unwrap();
        let first_child = i * m + 1;
        if first_child < p.labels().len() {
            for y in 0..m {
                writeln!(out, "  v{i} -> v{} [label=\"{}\"];", first_child + y, y + 1).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Canonical form `{"m", "K", "D", "coeffs": [[digit, ..], ..]}`, digits low first.
pub fn series_json(s: &PowerSeries) -> Value {
    let coeffs: Vec<&[u32]> = s.coeffs().iter().map(|c| c.digits()).collect();
    json!({ "m": s.modulus(), "K": s.precision(), "D": s.degree_bound(), "coeffs": coeffs })
}

/// The digits of a normal form as a polynomial, e.g. `x + x^2`.
pub fn quotient_text(q: &QuotientElement) -> String {
    let mut parts = Vec::new();
    for (i, &d) in q.digits().iter().enumerate() {
        if d == 0 {
            continue;
        }
        let c = if d == 1 && i > 0 {
            String::new()
        } else if i > 0 {
            format!("{d}*")
        } else {
            d.to_string()
        };
        parts.push(match i {
            0 => c,
            1 => format!("{c}x"),
            _ => format!("{c}x^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn closure_json(report: &ClosureReport, system: &System) -> Value {
    let elements: Vec<Value> = report
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "index": i,
                "word": system.show(&e.expr).to_string(),
                "root": e.root.to_string(),
                "states": e.states,
                "distance": e.distance,
                "identity": report.is_identity(i),
            })
        })
        .collect();
    json!({
        "depth": report.depth,
        "size": report.elements.len(),
        "generators": report.generators(),
        "elements": elements,
        "inputs": report.inputs,
        "abelian": report.abelian,
        "orbits": report.orbits,
        "transitive": report.transitive,
        "recurrent_witnessed": report.recurrent_witnessed,
        "precision_margin": report.precision_margin,
    })
}

/// The presentation with one pass/fail entry per defining relation.
pub fn presentation_json(p: &ModulePresentation, system: &System, checks: &[bool]) -> Value {
    let relations: Vec<Vec<String>> =
        p.relations.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
    let checks: Vec<Value> = checks.iter().enumerate().map(|(i, ok)| json!({ "relation": i, "pass": ok })).collect();
    let relator = p.relator().ok().map(|r| json!({ "j": r.j(), "q": r.q().to_string() }));
    json!({
        "generators": p.generators.iter().map(|g| system.show(g).to_string()).collect::<Vec<_>>(),
        "roots": p.roots.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "orders": p.orders,
        "relations": relations,
        "annihilator": p.annihilator.to_string(),
        "relator": relator,
        "depth": p.depth,
        "checks": checks,
    })
}

/// A virtual endomorphism with a transversal, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleFile {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
    #[serde(rename = "H_gens")]
    pub h_gens: Vec<Vec<i64>>,
    pub f_images: Vec<Vec<i64>>,
    pub transversal: Vec<Vec<i64>>,
}

impl TripleFile {
    pub fn build(&self) -> Result<(VirtualEndo, Transversal)> {
        let group = FgAbelianGroup::new(self.free_rank, self.torsion.clone())?;
        let endo = VirtualEndo::new(group, self.h_gens.clone(), self.f_images.clone())?;
        let t = Transversal::new(&endo, self.transversal.clone())?;
        Ok((endo, t))
    }
}
