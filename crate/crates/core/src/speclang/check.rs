//! Semantic rules applied to a resolved document.

use std::collections::BTreeMap;

use crate::cogmech::functor_check;
use crate::theoryzoo::{violations, Family};

use super::ast::*;
use super::diag::Diagnostic;

/// Parameters a family needs, and those it accepts beyond them.
fn param_rules(family: Family) -> (&'static [ParamKey], &'static [ParamKey]) {
    use ParamKey::*;
    match family {
        Family::Materialism | Family::Idealism => (&[Q], &[]),
        Family::Panpsychism => (&[], &[Q]),
        Family::Iit => (&[Tau], &[Phi]),
        Family::NeutralMonism => (&[QMental, QMaterial], &[]),
        Family::DualismNaive => (&[Mental, Material], &[]),
        Family::DualismInteractionist => (&[Mental, Material], &[Links]),
        Family::Solipsism | Family::IllusionismHard | Family::Russellian => (&[], &[]),
    }
}

pub(crate) fn check(doc: &Document) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for w in &doc.worlds {
        if let Err(e) = w.build(BTreeMap::new()) {
            out.push(Diagnostic::error("E100", w.name.span, format!("world '{}': {e}", w.name.text)));
        }
    }
    for t in &doc.theories {
        check_theory(doc, t, &mut out);
    }
    for e in &doc.experiments {
        check_experiment(e, &mut out);
    }
    for c in &doc.concepts {
        check_concepts(c, &mut out);
    }
    out
}

fn check_theory(doc: &Document, t: &TheoryDecl, out: &mut Vec<Diagnostic>) {
    let before = out.len();
    let (required, optional) = param_rules(t.family);
    for key in required {
        if t.param(*key).is_none() {
            out.push(Diagnostic::error(
                "E101",
                t.name.span,
                format!("{} theory '{}' requires parameter '{}'", t.family, t.name.text, key.keyword()),
            ));
        }
    }
    for p in &t.params {
        let key = p.value.key();
        if !required.contains(&key) && !optional.contains(&key) {
            out.push(Diagnostic::error(
                "E102",
                p.span,
                format!("parameter '{}' does not apply to {}", key.keyword(), t.family),
            ));
        }
    }
    if t.family == Family::Panpsychism {
        if let Some(p @ Param { value: ParamValue::Q(q), .. }) = t.param(ParamKey::Q) {
            if *q != PredExpr::All {
                out.push(Diagnostic::warning(
                    "W001",
                    p.span,
                    "panpsychism requires Q true for all r; the predicate is ignored",
                ));
            }
        }
    }
    if out[before..].iter().any(Diagnostic::is_error) {
        return;
    }
    match doc.theory_instance(&t.name.text) {
        Ok(instance) => {
            for v in violations(&instance) {
                out.push(Diagnostic::error("E104", t.name.span, format!("theory '{}': {v}", t.name.text)));
            }
        }
        Err(e) => out.push(Diagnostic::error("E103", t.name.span, format!("theory '{}': {e}", t.name.text))),
    }
}

fn check_experiment(e: &ExperimentDecl, out: &mut Vec<Diagnostic>) {
    for key in [ExperimentKey::N, ExperimentKey::Alpha, ExperimentKey::Beta] {
        if e.get(key).is_none() {
            out.push(Diagnostic::warning(
                "W002",
                e.name.span,
                format!("experiment '{}' does not set '{}'", e.name.text, key.keyword()),
            ));
        }
    }
    let span_of = |key| e.setting(key).map_or(e.name.span, |s| s.span);
    if e.get(ExperimentKey::N) == Some(0) {
        out.push(Diagnostic::error("E110", span_of(ExperimentKey::N), "N must be positive"));
    }
    if let (Some(alpha), Some(n)) = (e.get(ExperimentKey::Alpha), e.get(ExperimentKey::N)) {
        if alpha > n {
            out.push(Diagnostic::error(
                "E111",
                span_of(ExperimentKey::Alpha),
                format!("alpha = {alpha} exceeds N = {n}"),
            ));
        }
    }
    if let (Some(beta), Some(alpha)) = (e.get(ExperimentKey::Beta), e.get(ExperimentKey::Alpha)) {
        if beta > alpha {
            out.push(Diagnostic::error(
                "E111",
                span_of(ExperimentKey::Beta),
                format!("beta = {beta} exceeds alpha = {alpha}"),
            ));
        }
    }
    if e.get(ExperimentKey::Trials) == Some(0) {
        out.push(Diagnostic::error("E112", span_of(ExperimentKey::Trials), "trials must be at least 1"));
    }
}

fn check_concepts(c: &ConceptsDecl, out: &mut Vec<Diagnostic>) {
    let space = match c.build() {
        Ok(s) => s,
        Err(e) => {
            out.push(Diagnostic::error("E120", c.name.span, format!("concepts '{}': {e}", c.name.text)));
            return;
        }
    };
    let Ok(checks) = functor_check(&space) else {
        return;
    };
    for (t, decl) in checks.iter().zip(&c.compositions) {
        for (part, shared) in [(&t.a, &t.shared_with_a), (&t.b, &t.shared_with_b)] {
            if shared.is_empty() {
                out.push(Diagnostic::warning(
                    "W003",
                    decl.span,
                    format!("'{}' shares no neurons with its component '{part}'", t.composed),
                ));
            }
        }
    }
}
