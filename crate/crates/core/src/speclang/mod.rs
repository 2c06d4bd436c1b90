//! The `.mmk` declaration language.
//!
//! A document declares worlds, theories over those worlds, finite maps,
//! experiment settings and concept tables:
//!
//! ```text
//! world w { atoms: a b; edges: r1 = {a b} r2 = (a b); attr r1: phi = 0.5; }
//! theory t : materialism { world: w; Q: edges(r1); }
//! map F { r1 -> a; }
//! experiment e { N = 1000; alpha = 50; beta = 20; }
//! concepts c { x = {1 2}; y = {2 3}; xy = {1 2 3}; compose xy = x + y; }
//! ```
//!
//! [`parse`] reports lexical, syntax and name-resolution errors; [`check`]
//! adds semantic rules (theory invariants, parameter ranges). [`serialize`]
//! produces the canonical text, which parses back to an equal document.

mod ast;
mod check;
mod diag;
mod lexer;
mod parser;
mod resolve;
mod serialize;

use std::collections::BTreeMap;

use thiserror::Error;

pub use ast::*;
pub use diag::{Diagnostic, LineIndex, Pos, Severity, Span};
pub use lexer::{lex, Tok, Token};

use crate::cogmech::{CogError, ComposeParams, ConceptSpace, NeuronSet};
use crate::theoryzoo::{instantiate_theory, TheoryError, TheoryInstance, TheoryOptions};
use crate::worldmodel::{build_world, Attributes, PredicateDef, RawEdge, World, WorldError};

/// Parses and resolves `src`. On failure every error found is returned,
/// ordered by position.
pub fn parse(src: &str) -> Result<Document, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let toks = lex(src, &mut diags);
    let mut parser = parser::Parser::new(&toks);
    let doc = parser.document();
    diags.append(&mut parser.diags);
    if diags.is_empty() {
        diags = resolve::resolve(&doc);
    }
    if diags.is_empty() {
        Ok(doc)
    } else {
        diags.sort_by_key(|d| d.span.start.offset);
        Err(diags)
    }
}

/// Like [`parse`] for raw bytes; invalid UTF-8 is reported at its offset.
pub fn parse_bytes(bytes: &[u8]) -> Result<Document, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(src) => parse(src),
        Err(e) => {
            let prefix = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let index = LineIndex::new(prefix);
            let at = e.valid_up_to();
            let mut span = index.span(at, at);
            span.end.offset = at + e.error_len().unwrap_or(1);
            span.end.column = span.start.column + 1;
            Err(vec![Diagnostic::error(
                "E001",
                span,
                format!("invalid UTF-8 at byte {at}"),
            )])
        }
    }
}

pub fn serialize(doc: &Document) -> String {
    serialize::serialize(doc)
}

/// Name resolution plus semantic rules. Returns every finding, errors and
/// warnings alike.
pub fn check(doc: &Document) -> Vec<Diagnostic> {
    let mut out = resolve::resolve(doc);
    if out.iter().all(|d| !d.is_error()) {
        out.extend(check::check(doc));
    }
    out.sort_by_key(|d| d.span.start.offset);
    out
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("no {kind} named '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Concept(#[from] CogError),
    #[error("experiment '{experiment}' does not set '{key}'")]
    MissingSetting { experiment: String, key: &'static str },
    #[error("experiment '{experiment}': {key} = {value} does not fit in memory indices")]
    SettingRange {
        experiment: String,
        key: &'static str,
        value: u64,
    },
}

/// Settings of an experiment block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub params: ComposeParams,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

fn unknown(kind: &'static str, name: &str) -> SpecError {
    SpecError::Unknown {
        kind,
        name: name.to_string(),
    }
}

fn pred_def(p: &PredExpr) -> PredicateDef {
    match p {
        PredExpr::All => PredicateDef::AlwaysTrue,
        PredExpr::None => PredicateDef::AlwaysFalse,
        PredExpr::Edges(e) => PredicateDef::EdgeList(e.iter().map(|n| n.text.clone()).collect()),
        PredExpr::Attr {
            attribute,
            threshold,
        } => PredicateDef::AttributeThreshold {
            attribute: attribute.text.clone(),
            threshold: *threshold,
        },
    }
}

fn texts(names: &[Name]) -> Vec<String> {
    names.iter().map(|n| n.text.clone()).collect()
}

impl WorldDecl {
    pub fn build(&self, predicates: BTreeMap<String, PredicateDef>) -> Result<World, WorldError> {
        let edges: Vec<RawEdge> = self
            .edges
            .iter()
            .map(|e| RawEdge {
                id: e.name.text.clone(),
                members: texts(&e.members),
                ordered: e.ordered,
            })
            .collect();
        let mut attributes = Attributes::new();
        for a in &self.attrs {
            attributes
                .entry(a.edge.text.clone())
                .or_default()
                .insert(a.attribute.text.clone(), a.value);
        }
        build_world(texts(&self.atoms), edges, attributes, predicates)
    }
}

impl TheoryDecl {
    /// Predicates registered on the world under their parameter names
    /// (`Q`, `Q_I`, `Q_M`) and the matching options.
    pub fn options(&self) -> (BTreeMap<String, PredicateDef>, TheoryOptions) {
        let mut preds = BTreeMap::new();
        let mut opts = TheoryOptions::default();
        for p in &self.params {
            let key = p.value.key().keyword().to_string();
            match &p.value {
                ParamValue::Q(e) => {
                    preds.insert(key.clone(), pred_def(e));
                    opts.q = Some(key);
                }
                ParamValue::QMental(e) => {
                    preds.insert(key.clone(), pred_def(e));
                    opts.q_mental = Some(key);
                }
                ParamValue::QMaterial(e) => {
                    preds.insert(key.clone(), pred_def(e));
                    opts.q_material = Some(key);
                }
                ParamValue::Tau(v) => opts.tau = Some(*v),
                ParamValue::Phi(n) => opts.phi_attribute = Some(n.text.clone()),
                ParamValue::Mental(l) => opts.mental = texts(l),
                ParamValue::Material(l) => opts.material = texts(l),
                ParamValue::Links(l) => {
                    opts.links = l.iter().map(|(a, b)| (a.text.clone(), b.text.clone())).collect()
                }
            }
        }
        (preds, opts)
    }
}

impl ConceptsDecl {
    /// Neuron universe size: one past the largest index used.
    pub fn neuron_count(&self) -> usize {
        self.concepts
            .iter()
            .filter_map(|c| c.neurons.last())
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn build(&self) -> Result<ConceptSpace, CogError> {
        let mut space = ConceptSpace::new(self.neuron_count());
        for c in &self.concepts {
            space.declare(c.name.text.clone())?;
            space.set_correlates(&c.name.text, c.neurons.iter().copied().collect::<NeuronSet>())?;
        }
        for t in &self.compositions {
            space.record_composition(&t.a.text, &t.b.text, &t.result.text)?;
        }
        Ok(space)
    }
}

impl ExperimentDecl {
    pub fn config(&self) -> Result<ExperimentConfig, SpecError> {
        let get = |key: ExperimentKey| -> Result<usize, SpecError> {
            let value = self.get(key).ok_or_else(|| SpecError::MissingSetting {
                experiment: self.name.text.clone(),
                key: key.keyword(),
            })?;
            usize::try_from(value).map_err(|_| SpecError::SettingRange {
                experiment: self.name.text.clone(),
                key: key.keyword(),
                value,
            })
        };
        let params = ComposeParams::new(
            get(ExperimentKey::N)?,
            get(ExperimentKey::Alpha)?,
            get(ExperimentKey::Beta)?,
        )?;
        Ok(ExperimentConfig {
            params,
            trials: self.get(ExperimentKey::Trials),
            seed: self.get(ExperimentKey::Seed),
        })
    }
}

impl Document {
    pub fn world(&self, name: &str) -> Result<World, SpecError> {
        let decl = self.world_decl(name).ok_or_else(|| unknown("world", name))?;
        Ok(decl.build(BTreeMap::new())?)
    }

    pub fn theory_instance(&self, name: &str) -> Result<TheoryInstance, SpecError> {
        let decl = self.theory_decl(name).ok_or_else(|| unknown("theory", name))?;
        let world_decl = self
            .world_decl(&decl.world.text)
            .ok_or_else(|| unknown("world", &decl.world.text))?;
        let (preds, opts) = decl.options();
        let world = world_decl.build(preds)?;
        Ok(instantiate_theory(decl.family, &world, &opts)?)
    }

    pub fn map_pairs(&self, name: &str) -> Result<Vec<(String, String)>, SpecError> {
        let decl = self.map_decl(name).ok_or_else(|| unknown("map", name))?;
        Ok(decl
            .entries
            .iter()
            .map(|(k, v)| (k.text.clone(), v.text.clone()))
            .collect())
    }

    pub fn concept_space(&self, name: &str) -> Result<ConceptSpace, SpecError> {
        let decl = self
            .concepts_decl(name)
            .ok_or_else(|| unknown("concept table", name))?;
        Ok(decl.build()?)
    }

    pub fn experiment(&self, name: &str) -> Result<ExperimentConfig, SpecError> {
        self.experiment_decl(name)
            .ok_or_else(|| unknown("experiment", name))?
            .config()
    }
}

#[cfg(test)]
mod tests;
