//! Name resolution: duplicate declarations and dangling references.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::diag::Diagnostic;

fn duplicate(kind: &str, name: &Name) -> Diagnostic {
    Diagnostic::error("E004", name.span, format!("duplicate {kind} '{}'", name.text))
}

fn unresolved(kind: &str, name: &Name) -> Diagnostic {
    Diagnostic::error("E003", name.span, format!("unresolved {kind} '{}'", name.text))
}

/// Reports each repeated name after its first occurrence.
fn unique<'a>(kind: &str, names: impl IntoIterator<Item = &'a Name>, out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.text.as_str()) {
            out.push(duplicate(kind, n));
        }
    }
}

struct WorldNames<'a> {
    atoms: HashSet<&'a str>,
    edges: HashSet<&'a str>,
}

impl WorldNames<'_> {
    fn element(&self, n: &str) -> bool {
        self.atoms.contains(n) || self.edges.contains(n)
    }
}

pub(crate) fn resolve(doc: &Document) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    unique("world", doc.worlds.iter().map(|d| &d.name), &mut out);
    unique("theory", doc.theories.iter().map(|d| &d.name), &mut out);
    unique("map", doc.maps.iter().map(|d| &d.name), &mut out);
    unique("experiment", doc.experiments.iter().map(|d| &d.name), &mut out);
    unique("concept table", doc.concepts.iter().map(|d| &d.name), &mut out);

    let mut worlds: HashMap<&str, WorldNames> = HashMap::new();
    for w in &doc.worlds {
        let names = resolve_world(w, &mut out);
        worlds.entry(w.name.text.as_str()).or_insert(names);
    }
    for t in &doc.theories {
        resolve_theory(t, &worlds, &mut out);
    }

    let mut objects: HashSet<&str> = HashSet::new();
    for w in worlds.values() {
        objects.extend(&w.atoms);
        objects.extend(&w.edges);
    }
    for c in &doc.concepts {
        resolve_concepts(c, &mut out);
        objects.extend(c.concepts.iter().map(|d| d.name.text.as_str()));
    }
    for m in &doc.maps {
        unique("map entry for", m.entries.iter().map(|(k, _)| k), &mut out);
        for (k, v) in &m.entries {
            for n in [k, v] {
                if !objects.contains(n.text.as_str()) {
                    out.push(unresolved("object", n));
                }
            }
        }
    }
    for e in &doc.experiments {
        let mut seen = HashSet::new();
        for s in &e.settings {
            if !seen.insert(s.key) {
                out.push(Diagnostic::error(
                    "E004",
                    s.span,
                    format!("duplicate setting '{}'", s.key.keyword()),
                ));
            }
        }
    }
    out
}

fn resolve_world<'a>(w: &'a WorldDecl, out: &mut Vec<Diagnostic>) -> WorldNames<'a> {
    unique("atom", &w.atoms, out);
    let atoms: HashSet<&str> = w.atoms.iter().map(|a| a.text.as_str()).collect();
    let mut edges = HashSet::new();
    for e in &w.edges {
        if atoms.contains(e.name.text.as_str()) || !edges.insert(e.name.text.as_str()) {
            out.push(duplicate("name", &e.name));
        }
        if !e.ordered {
            unique(&format!("member of edge '{}':", e.name.text), &e.members, out);
        }
        for m in &e.members {
            if !atoms.contains(m.text.as_str()) {
                out.push(unresolved("atom", m));
            }
        }
    }
    let mut attrs = HashSet::new();
    for a in &w.attrs {
        if !edges.contains(a.edge.text.as_str()) {
            out.push(unresolved("edge", &a.edge));
        }
        if !attrs.insert((a.edge.text.as_str(), a.attribute.text.as_str())) {
            out.push(Diagnostic::error(
                "E004",
                a.span,
                format!("duplicate attribute '{}' on edge '{}'", a.attribute.text, a.edge.text),
            ));
        }
    }
    WorldNames { atoms, edges }
}

fn resolve_theory(t: &TheoryDecl, worlds: &HashMap<&str, WorldNames>, out: &mut Vec<Diagnostic>) {
    let mut seen = Vec::new();
    for p in &t.params {
        let key = p.value.key();
        if seen.contains(&key) {
            out.push(Diagnostic::error(
                "E004",
                p.span,
                format!("duplicate parameter '{}'", key.keyword()),
            ));
        }
        seen.push(key);
    }
    let Some(world) = worlds.get(t.world.text.as_str()) else {
        out.push(unresolved("world", &t.world));
        return;
    };
    for p in &t.params {
        match &p.value {
            ParamValue::Q(pred) | ParamValue::QMental(pred) | ParamValue::QMaterial(pred) => {
                if let PredExpr::Edges(edges) = pred {
                    unique("edge", edges, out);
                    for e in edges {
                        if !world.edges.contains(e.text.as_str()) {
                            out.push(unresolved("edge", e));
                        }
                    }
                }
            }
            ParamValue::Mental(names) | ParamValue::Material(names) => {
                unique("element", names, out);
                for n in names {
                    if !world.element(&n.text) {
                        out.push(unresolved("element", n));
                    }
                }
            }
            ParamValue::Links(links) => {
                for (a, b) in links {
                    for n in [a, b] {
                        if !world.element(&n.text) {
                            out.push(unresolved("element", n));
                        }
                    }
                }
            }
            ParamValue::Tau(_) | ParamValue::Phi(_) => {}
        }
    }
}

fn resolve_concepts(c: &ConceptsDecl, out: &mut Vec<Diagnostic>) {
    unique("concept", c.concepts.iter().map(|d| &d.name), out);
    let known: HashSet<&str> = c.concepts.iter().map(|d| d.name.text.as_str()).collect();
    let mut composed = HashSet::new();
    for t in &c.compositions {
        for n in [&t.result, &t.a, &t.b] {
            if !known.contains(n.text.as_str()) {
                out.push(unresolved("concept", n));
            }
        }
        if !composed.insert(t.result.text.as_str()) {
            out.push(Diagnostic::error(
                "E004",
                t.result.span,
                format!("concept '{}' is composed more than once", t.result.text),
            ));
        }
    }
}
