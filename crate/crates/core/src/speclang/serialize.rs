use std::fmt::Write;

use super::ast::*;

fn names(list: &[Name]) -> String {
    list.iter().map(|n| n.text.as_str()).collect::<Vec<_>>().join(" ")
}

fn pred(p: &PredExpr) -> String {
    match p {
        PredExpr::All => "all".into(),
        PredExpr::None => "none".into(),
        PredExpr::Edges(e) => format!("edges({})", names(e)),
        PredExpr::Attr {
            attribute,
            threshold,
        } => format!("attr({} > {threshold})", attribute.text),
    }
}

/// Canonical text: one statement per line, declarations grouped by kind and
/// separated by blank lines, LF line endings.
pub(crate) fn serialize(doc: &Document) -> String {
    let mut blocks: Vec<String> = Vec::new();
    blocks.extend(doc.worlds.iter().map(world));
    blocks.extend(doc.theories.iter().map(theory));
    blocks.extend(doc.maps.iter().map(map));
    blocks.extend(doc.experiments.iter().map(experiment));
    blocks.extend(doc.concepts.iter().map(concepts));
    blocks.join("\n")
}

fn world(w: &WorldDecl) -> String {
    let mut s = format!("world {} {{\n", w.name.text);
    let _ = writeln!(s, "  atoms: {};", names(&w.atoms));
    if !w.edges.is_empty() {
        s.push_str("  edges:");
        for (i, e) in w.edges.iter().enumerate() {
            let body = if e.ordered {
                format!("({})", names(&e.members))
            } else {
                format!("{{{}}}", names(&e.members))
            };
            let end = if i + 1 == w.edges.len() { ";" } else { "" };
            let _ = write!(s, "\n    {} = {body}{end}", e.name.text);
        }
        s.push('\n');
    }
    for a in &w.attrs {
        let _ = writeln!(s, "  attr {}: {} = {};", a.edge.text, a.attribute.text, a.value);
    }
    s.push_str("}\n");
    s
}

fn theory(t: &TheoryDecl) -> String {
    let mut s = format!("theory {} : {} {{\n", t.name.text, t.family.keyword());
    let _ = writeln!(s, "  world: {};", t.world.text);
    for p in &t.params {
        let key = p.value.key().keyword();
        let value = match &p.value {
            ParamValue::Q(e) | ParamValue::QMental(e) | ParamValue::QMaterial(e) => pred(e),
            ParamValue::Tau(v) => v.to_string(),
            ParamValue::Phi(n) => n.text.clone(),
            ParamValue::Mental(l) | ParamValue::Material(l) => names(l),
            ParamValue::Links(l) => l
                .iter()
                .map(|(a, b)| format!("({} {})", a.text, b.text))
                .collect::<Vec<_>>()
                .join(" "),
        };
        if value.is_empty() {
            let _ = writeln!(s, "  {key}:;");
        } else {
            let _ = writeln!(s, "  {key}: {value};");
        }
    }
    s.push_str("}\n");
    s
}

fn map(m: &MapDecl) -> String {
    let mut s = format!("map {} {{\n", m.name.text);
    for (k, v) in &m.entries {
        let _ = writeln!(s, "  {} -> {};", k.text, v.text);
    }
    s.push_str("}\n");
    s
}

fn experiment(e: &ExperimentDecl) -> String {
    let mut s = format!("experiment {} {{\n", e.name.text);
    let mut settings: Vec<&Setting> = e.settings.iter().collect();
    settings.sort_by_key(|s| s.key);
    for st in settings {
        let _ = writeln!(s, "  {} = {};", st.key.keyword(), st.value);
    }
    s.push_str("}\n");
    s
}

fn concepts(c: &ConceptsDecl) -> String {
    let mut s = format!("concepts {} {{\n", c.name.text);
    for d in &c.concepts {
        let neurons: Vec<String> = d.neurons.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "  {} = {{{}}};", d.name.text, neurons.join(" "));
    }
    for t in &c.compositions {
        let _ = writeln!(s, "  compose {} = {} + {};", t.result.text, t.a.text, t.b.text);
    }
    s.push_str("}\n");
    s
}
