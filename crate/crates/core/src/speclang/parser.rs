//! Recursive descent over the token stream with one token of lookahead.
//!
//! A failed statement inside a block skips to the next `;` or to the `}`
//! closing the block. A failed declaration skips to the next token pair that
//! can start a declaration (`world NAME`, `map NAME`, ...).

use crate::theoryzoo::Family;

use super::ast::*;
use super::diag::{Diagnostic, Span};
use super::lexer::{Tok, Token};

const DECL_KEYWORDS: [&str; 5] = ["world", "theory", "map", "experiment", "concepts"];

/// Marker for a reported syntax error; the diagnostic is already recorded.
struct Failed;

type PResult<T> = Result<T, Failed>;

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    pub diags: Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        debug_assert!(matches!(toks.last(), Some(Token { tok: Tok::Eof, .. })));
        Parser {
            toks,
            pos: 0,
            diags: Vec::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek() == tok
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn error_here(&mut self, expected: &str) -> Failed {
        let found = self.peek().describe();
        let span = self.span();
        self.diags.push(Diagnostic::error(
            "E002",
            span,
            format!("expected {expected}, found {found}"),
        ));
        Failed
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if self.at(&tok) {
            Ok(self.bump().span)
        } else {
            Err(self.error_here(&tok.describe()))
        }
    }

    fn expect_keyword(&mut self, word: &str) -> PResult<Span> {
        if self.at_ident(word) {
            Ok(self.bump().span)
        } else {
            Err(self.error_here(&format!("'{word}'")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.bump().span;
                Ok(Name { text, span })
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn number(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Number(raw) => {
                let span = self.bump().span;
                Ok((raw, span))
            }
            _ => Err(self.error_here("a number")),
        }
    }

    fn float(&mut self) -> PResult<f64> {
        let (raw, span) = self.number()?;
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => {
                self.diags.push(Diagnostic::error(
                    "E005",
                    span,
                    format!("number {raw} is out of range"),
                ));
                Err(Failed)
            }
        }
    }

    fn unsigned(&mut self, what: &str) -> PResult<(u64, Span)> {
        let (raw, span) = self.number()?;
        match raw.parse::<u64>() {
            Ok(v) => Ok((v, span)),
            Err(_) => {
                self.diags.push(Diagnostic::error(
                    "E005",
                    span,
                    format!("{what} must be a non-negative integer, found {raw}"),
                ));
                Err(Failed)
            }
        }
    }

    fn ident_list(&mut self, what: &str) -> PResult<Vec<Name>> {
        let mut out = vec![self.ident(what)?];
        while let Tok::Ident(_) = self.peek() {
            out.push(self.ident(what)?);
        }
        Ok(out)
    }

    /// Skips to the end of the current statement: past the next `;` at
    /// nesting depth zero, or up to (not past) the `}` closing the block.
    fn sync_statement(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Semi if depth == 0 => {
                    self.bump();
                    return;
                }
                Tok::RBrace if depth == 0 => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth -= 1,
                Tok::Ident(_) if self.at_decl_header() => return,
                _ => {}
            }
            self.bump();
        }
    }

    /// `world w {`, `theory t : fam {` and friends.
    fn at_decl_header(&self) -> bool {
        let Tok::Ident(w) = self.peek() else {
            return false;
        };
        if !DECL_KEYWORDS.contains(&w.as_str()) || !matches!(self.peek_at(1), Tok::Ident(_)) {
            return false;
        }
        if w == "theory" {
            matches!(self.peek_at(2), Tok::Colon)
                && matches!(self.peek_at(3), Tok::Ident(_))
                && matches!(self.peek_at(4), Tok::LBrace)
        } else {
            matches!(self.peek_at(2), Tok::LBrace)
        }
    }

    /// Skips to the next token pair that can start a declaration.
    fn sync_decl(&mut self) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Ident(_) if self.at_decl_header() => return,
                _ => {}
            }
            self.bump();
        }
    }

    /// Runs `stmt` for each statement until the closing `}`, recovering from
    /// failed statements, then consumes the `}`.
    fn block_body(&mut self, mut stmt: impl FnMut(&mut Self) -> PResult<()>) -> PResult<()> {
        loop {
            match self.peek() {
                Tok::RBrace => {
                    self.bump();
                    return Ok(());
                }
                Tok::Eof => return Err(self.error_here("'}'")),
                _ => {}
            }
            let before = self.pos;
            if stmt(self).is_err() {
                self.sync_statement();
                if self.at_decl_header() {
                    // The block was never closed; leave the next declaration intact.
                    let span = self.span();
                    self.diags.push(Diagnostic::error(
                        "E002",
                        span,
                        "expected '}' before the next declaration",
                    ));
                    return Err(Failed);
                }
                if self.pos == before {
                    self.bump();
                }
            }
        }
    }

    pub fn document(&mut self) -> Document {
        let mut doc = Document::default();
        while !self.at(&Tok::Eof) {
            let start = self.pos;
            let ok = match self.peek() {
                Tok::Ident(w) if w == "world" => self.world().map(|d| doc.worlds.push(d)),
                Tok::Ident(w) if w == "theory" => self.theory().map(|d| doc.theories.push(d)),
                Tok::Ident(w) if w == "map" => self.map().map(|d| doc.maps.push(d)),
                Tok::Ident(w) if w == "experiment" => {
                    self.experiment().map(|d| doc.experiments.push(d))
                }
                Tok::Ident(w) if w == "concepts" => self.concepts().map(|d| doc.concepts.push(d)),
                _ => Err(self.error_here(
                    "a declaration ('world', 'theory', 'map', 'experiment' or 'concepts')",
                )),
            };
            if ok.is_err() {
                if self.pos == start {
                    self.bump();
                }
                self.sync_decl();
            }
        }
        doc
    }

    fn world(&mut self) -> PResult<WorldDecl> {
        self.expect_keyword("world")?;
        let name = self.ident("a world name")?;
        self.expect(Tok::LBrace)?;
        let mut decl = WorldDecl {
            name,
            atoms: Vec::new(),
            edges: Vec::new(),
            attrs: Vec::new(),
        };
        // 0: expecting atoms, 1: expecting edges or attrs, 2: attrs only.
        let mut stage = 0;
        self.block_body(|p| {
            if stage == 0 {
                p.expect_keyword("atoms")?;
                stage = 1;
                p.expect(Tok::Colon)?;
                decl.atoms = p.ident_list("an atom name")?;
                p.expect(Tok::Semi)?;
                return Ok(());
            }
            if stage == 1 && p.at_ident("edges") && p.peek_at(1) == &Tok::Colon {
                p.bump();
                p.bump();
                stage = 2;
                loop {
                    decl.edges.push(p.edge_decl()?);
                    if !matches!(p.peek(), Tok::Ident(_)) {
                        break;
                    }
                }
                p.expect(Tok::Semi)?;
                return Ok(());
            }
            if p.at_ident("attr") {
                stage = 2;
                let start = p.bump().span;
                let edge = p.ident("an edge name")?;
                p.expect(Tok::Colon)?;
                let attribute = p.ident("an attribute name")?;
                p.expect(Tok::Eq)?;
                let value = p.float()?;
                let end = p.expect(Tok::Semi)?;
                decl.attrs.push(AttrDecl {
                    edge,
                    attribute,
                    value,
                    span: start.to(end),
                });
                return Ok(());
            }
            Err(p.error_here(if stage == 1 { "'edges:', 'attr' or '}'" } else { "'attr' or '}'" }))
        })?;
        Ok(decl)
    }

    fn edge_decl(&mut self) -> PResult<EdgeDecl> {
        let name = self.ident("an edge name")?;
        self.expect(Tok::Eq)?;
        match self.peek() {
            Tok::LBrace => {
                self.bump();
                let mut members = self.ident_list("an atom name")?;
                self.expect(Tok::RBrace)?;
                members.sort();
                Ok(EdgeDecl {
                    name,
                    members,
                    ordered: false,
                })
            }
            Tok::LParen => {
                self.bump();
                let cause = self.ident("a cause atom")?;
                let effect = self.ident("an effect atom")?;
                self.expect(Tok::RParen)?;
                Ok(EdgeDecl {
                    name,
                    members: vec![cause, effect],
                    ordered: true,
                })
            }
            _ => Err(self.error_here("'{' or '('")),
        }
    }

    fn theory(&mut self) -> PResult<TheoryDecl> {
        let start = self.expect_keyword("theory")?;
        let name = self.ident("a theory name")?;
        self.expect(Tok::Colon)?;
        let family_name = self.ident("a theory family")?;
        let Some(family) = Family::from_keyword(&family_name.text) else {
            let known: Vec<&str> = Family::ALL.iter().map(|f| f.keyword()).collect();
            self.diags.push(Diagnostic::error(
                "E002",
                family_name.span,
                format!(
                    "unknown theory family '{}' (expected one of: {})",
                    family_name.text,
                    known.join(", ")
                ),
            ));
            return Err(Failed);
        };
        self.expect(Tok::LBrace)?;
        let mut world: Option<Name> = None;
        let mut params = Vec::new();
        self.block_body(|p| {
            if world.is_none() {
                p.expect_keyword("world")?;
                p.expect(Tok::Colon)?;
                world = Some(p.ident("a world name")?);
                p.expect(Tok::Semi)?;
                return Ok(());
            }
            params.push(p.param()?);
            Ok(())
        })?;
        let end = self.prev_span();
        let Some(world) = world else {
            self.diags.push(Diagnostic::error(
                "E002",
                end,
                format!("theory '{}' must name its world ('world: NAME;')", name.text),
            ));
            return Err(Failed);
        };
        Ok(TheoryDecl {
            name,
            family,
            world,
            params,
            span: start.to(end),
        })
    }

    fn param(&mut self) -> PResult<Param> {
        let key_name = self.ident("a parameter name")?;
        let Some(key) = ParamKey::from_keyword(&key_name.text) else {
            self.diags.push(Diagnostic::error(
                "E002",
                key_name.span,
                format!(
                    "unknown parameter '{}' (expected Q, Q_I, Q_M, tau, phi, mental, material or links)",
                    key_name.text
                ),
            ));
            return Err(Failed);
        };
        self.expect(Tok::Colon)?;
        let value = match key {
            ParamKey::Q => ParamValue::Q(self.pred()?),
            ParamKey::QMental => ParamValue::QMental(self.pred()?),
            ParamKey::QMaterial => ParamValue::QMaterial(self.pred()?),
            ParamKey::Tau => ParamValue::Tau(self.float()?),
            ParamKey::Phi => ParamValue::Phi(self.ident("an attribute name")?),
            ParamKey::Mental => ParamValue::Mental(self.sorted_names()?),
            ParamKey::Material => ParamValue::Material(self.sorted_names()?),
            ParamKey::Links => {
                let mut links = Vec::new();
                while self.at(&Tok::LParen) {
                    self.bump();
                    let a = self.ident("an element name")?;
                    let b = self.ident("an element name")?;
                    self.expect(Tok::RParen)?;
                    links.push((a, b));
                }
                links.sort();
                ParamValue::Links(links)
            }
        };
        let end = self.expect(Tok::Semi)?;
        Ok(Param {
            value,
            span: key_name.span.to(end),
        })
    }

    fn sorted_names(&mut self) -> PResult<Vec<Name>> {
        let mut out = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            out.push(self.ident("a name")?);
        }
        out.sort();
        Ok(out)
    }

    fn pred(&mut self) -> PResult<PredExpr> {
        let word = self.ident("a predicate ('all', 'none', 'edges(..)' or 'attr(..)')")?;
        match word.text.as_str() {
            "all" => Ok(PredExpr::All),
            "none" => Ok(PredExpr::None),
            "edges" => {
                self.expect(Tok::LParen)?;
                let edges = self.sorted_names()?;
                self.expect(Tok::RParen)?;
                Ok(PredExpr::Edges(edges))
            }
            "attr" => {
                self.expect(Tok::LParen)?;
                let attribute = self.ident("an attribute name")?;
                self.expect(Tok::Gt)?;
                let threshold = self.float()?;
                self.expect(Tok::RParen)?;
                Ok(PredExpr::Attr {
                    attribute,
                    threshold,
                })
            }
            other => {
                self.diags.push(Diagnostic::error(
                    "E002",
                    word.span,
                    format!("unknown predicate '{other}' (expected all, none, edges(..) or attr(..))"),
                ));
                Err(Failed)
            }
        }
    }

    fn map(&mut self) -> PResult<MapDecl> {
        self.expect_keyword("map")?;
        let name = self.ident("a map name")?;
        self.expect(Tok::LBrace)?;
        let mut entries = Vec::new();
        let reported = self.diags.len();
        self.block_body(|p| {
            let from = p.ident("a source object")?;
            p.expect(Tok::Arrow)?;
            let to = p.ident("a target object")?;
            p.expect(Tok::Semi)?;
            entries.push((from, to));
            Ok(())
        })?;
        if entries.is_empty() && self.diags.len() == reported {
            let span = self.prev_span();
            self.diags.push(Diagnostic::error(
                "E002",
                span,
                format!("map '{}' needs at least one entry", name.text),
            ));
            return Err(Failed);
        }
        Ok(MapDecl { name, entries })
    }

    fn experiment(&mut self) -> PResult<ExperimentDecl> {
        self.expect_keyword("experiment")?;
        let name = self.ident("an experiment name")?;
        self.expect(Tok::LBrace)?;
        let mut settings = Vec::new();
        let reported = self.diags.len();
        self.block_body(|p| {
            let key_name = p.ident("a setting (N, alpha, beta, trials or seed)")?;
            let Some(key) = ExperimentKey::from_keyword(&key_name.text) else {
                p.diags.push(Diagnostic::error(
                    "E002",
                    key_name.span,
                    format!(
                        "unknown setting '{}' (expected N, alpha, beta, trials or seed)",
                        key_name.text
                    ),
                ));
                return Err(Failed);
            };
            p.expect(Tok::Eq)?;
            let (value, _) = p.unsigned(key.keyword())?;
            let end = p.expect(Tok::Semi)?;
            while p.at(&Tok::Semi) {
                p.bump();
            }
            settings.push(Setting {
                key,
                value,
                span: key_name.span.to(end),
            });
            Ok(())
        })?;
        if settings.is_empty() && self.diags.len() == reported {
            let span = self.prev_span();
            self.diags.push(Diagnostic::error(
                "E002",
                span,
                format!("experiment '{}' needs at least one setting", name.text),
            ));
            return Err(Failed);
        }
        settings.sort_by_key(|s| s.key);
        Ok(ExperimentDecl { name, settings })
    }

    fn concepts(&mut self) -> PResult<ConceptsDecl> {
        self.expect_keyword("concepts")?;
        let name = self.ident("a concept table name")?;
        self.expect(Tok::LBrace)?;
        let mut concepts = Vec::new();
        let mut compositions = Vec::new();
        let reported = self.diags.len();
        self.block_body(|p| {
            if p.at_ident("compose") && matches!(p.peek_at(1), Tok::Ident(_)) {
                if concepts.is_empty() {
                    return Err(p.error_here("a concept definition before 'compose'"));
                }
                let start = p.bump().span;
                let result = p.ident("a concept name")?;
                p.expect(Tok::Eq)?;
                let a = p.ident("a concept name")?;
                p.expect(Tok::Plus)?;
                let b = p.ident("a concept name")?;
                let end = p.expect(Tok::Semi)?;
                compositions.push(ComposeDecl {
                    result,
                    a,
                    b,
                    span: start.to(end),
                });
                return Ok(());
            }
            if !compositions.is_empty() {
                return Err(p.error_here("'compose' or '}'"));
            }
            let cname = p.ident("a concept name")?;
            p.expect(Tok::Eq)?;
            p.expect(Tok::LBrace)?;
            let mut neurons = Vec::new();
            loop {
                let (v, span) = p.unsigned("a neuron index")?;
                let Ok(v) = usize::try_from(v) else {
                    p.diags
                        .push(Diagnostic::error("E005", span, "neuron index is out of range"));
                    return Err(Failed);
                };
                if neurons.contains(&v) {
                    p.diags.push(Diagnostic::error(
                        "E004",
                        span,
                        format!("duplicate neuron {v} in concept '{}'", cname.text),
                    ));
                    return Err(Failed);
                }
                neurons.push(v);
                if !matches!(p.peek(), Tok::Number(_)) {
                    break;
                }
            }
            p.expect(Tok::RBrace)?;
            p.expect(Tok::Semi)?;
            neurons.sort_unstable();
            concepts.push(ConceptDef {
                name: cname,
                neurons,
            });
            Ok(())
        })?;
        if concepts.is_empty() && self.diags.len() == reported {
            let span = self.prev_span();
            self.diags.push(Diagnostic::error(
                "E002",
                span,
                format!("concept table '{}' needs at least one concept", name.text),
            ));
            return Err(Failed);
        }
        Ok(ConceptsDecl {
            name,
            concepts,
            compositions,
        })
    }
}
