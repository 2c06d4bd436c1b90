use crate::theoryzoo::Family;

use super::diag::Span;

/// An identifier with its source span. Equality ignores the span, as it
/// does for every node below.
#[derive(Debug, Clone, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

impl Name {
    pub fn new(text: impl Into<String>) -> Self {
        Name {
            text: text.into(),
            span: Span::default(),
        }
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.text.cmp(&other.text)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub worlds: Vec<WorldDecl>,
    pub theories: Vec<TheoryDecl>,
    pub maps: Vec<MapDecl>,
    pub experiments: Vec<ExperimentDecl>,
    pub concepts: Vec<ConceptsDecl>,
}

impl Document {
    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
            && self.theories.is_empty()
            && self.maps.is_empty()
            && self.experiments.is_empty()
            && self.concepts.is_empty()
    }

    pub fn world_decl(&self, name: &str) -> Option<&WorldDecl> {
        self.worlds.iter().find(|w| w.name.text == name)
    }

    pub fn theory_decl(&self, name: &str) -> Option<&TheoryDecl> {
        self.theories.iter().find(|t| t.name.text == name)
    }

    pub fn map_decl(&self, name: &str) -> Option<&MapDecl> {
        self.maps.iter().find(|m| m.name.text == name)
    }

    pub fn experiment_decl(&self, name: &str) -> Option<&ExperimentDecl> {
        self.experiments.iter().find(|e| e.name.text == name)
    }

    pub fn concepts_decl(&self, name: &str) -> Option<&ConceptsDecl> {
        self.concepts.iter().find(|c| c.name.text == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldDecl {
    pub name: Name,
    pub atoms: Vec<Name>,
    pub edges: Vec<EdgeDecl>,
    pub attrs: Vec<AttrDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDecl {
    pub name: Name,
    /// Sorted for set edges; `[cause, effect]` for ordered edges.
    pub members: Vec<Name>,
    pub ordered: bool,
}

#[derive(Debug, Clone)]
pub struct AttrDecl {
    pub edge: Name,
    pub attribute: Name,
    pub value: f64,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct TheoryDecl {
    pub name: Name,
    pub family: Family,
    pub world: Name,
    pub params: Vec<Param>,
    pub span: Span,
}

impl TheoryDecl {
    pub fn param(&self, key: ParamKey) -> Option<&Param> {
        self.params.iter().find(|p| p.value.key() == key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKey {
    Q,
    QMental,
    QMaterial,
    Tau,
    Phi,
    Mental,
    Material,
    Links,
}

impl ParamKey {
    pub fn keyword(self) -> &'static str {
        match self {
            ParamKey::Q => "Q",
            ParamKey::QMental => "Q_I",
            ParamKey::QMaterial => "Q_M",
            ParamKey::Tau => "tau",
            ParamKey::Phi => "phi",
            ParamKey::Mental => "mental",
            ParamKey::Material => "material",
            ParamKey::Links => "links",
        }
    }

    pub fn from_keyword(s: &str) -> Option<ParamKey> {
        use ParamKey::*;
        [Q, QMental, QMaterial, Tau, Phi, Mental, Material, Links]
            .into_iter()
            .find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Clone)]
pub struct Param {
    pub value: ParamValue,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Q(PredExpr),
    QMental(PredExpr),
    QMaterial(PredExpr),
    Tau(f64),
    Phi(Name),
    /// Sorted.
    Mental(Vec<Name>),
    /// Sorted.
    Material(Vec<Name>),
    /// Sorted.
    Links(Vec<(Name, Name)>),
}

impl ParamValue {
    pub fn key(&self) -> ParamKey {
        match self {
            ParamValue::Q(_) => ParamKey::Q,
            ParamValue::QMental(_) => ParamKey::QMental,
            ParamValue::QMaterial(_) => ParamKey::QMaterial,
            ParamValue::Tau(_) => ParamKey::Tau,
            ParamValue::Phi(_) => ParamKey::Phi,
            ParamValue::Mental(_) => ParamKey::Mental,
            ParamValue::Material(_) => ParamKey::Material,
            ParamValue::Links(_) => ParamKey::Links,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PredExpr {
    All,
    None,
    /// Sorted.
    Edges(Vec<Name>),
    Attr { attribute: Name, threshold: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapDecl {
    pub name: Name,
    pub entries: Vec<(Name, Name)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKey {
    N,
    Alpha,
    Beta,
    Trials,
    Seed,
}

impl ExperimentKey {
    pub const ALL: [ExperimentKey; 5] = [
        ExperimentKey::N,
        ExperimentKey::Alpha,
        ExperimentKey::Beta,
        ExperimentKey::Trials,
        ExperimentKey::Seed,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ExperimentKey::N => "N",
            ExperimentKey::Alpha => "alpha",
            ExperimentKey::Beta => "beta",
            ExperimentKey::Trials => "trials",
            ExperimentKey::Seed => "seed",
        }
    }

    pub fn from_keyword(s: &str) -> Option<ExperimentKey> {
        ExperimentKey::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentDecl {
    pub name: Name,
    /// Sorted by key.
    pub settings: Vec<Setting>,
}

impl ExperimentDecl {
    pub fn get(&self, key: ExperimentKey) -> Option<u64> {
        self.settings.iter().find(|s| s.key == key).map(|s| s.value)
    }

    pub fn setting(&self, key: ExperimentKey) -> Option<&Setting> {
        self.settings.iter().find(|s| s.key == key)
    }
}

#[derive(Debug, Clone)]
pub struct Setting {
    pub key: ExperimentKey,
    pub value: u64,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConceptsDecl {
    pub name: Name,
    pub concepts: Vec<ConceptDef>,
    pub compositions: Vec<ComposeDecl>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConceptDef {
    pub name: Name,
    /// Sorted, duplicate-free.
    pub neurons: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ComposeDecl {
    pub result: Name,
    pub a: Name,
    pub b: Name,
    pub span: Span,
}

/// Field-wise equality that skips the listed span fields.
macro_rules! eq_ignoring_span {
    ($($ty:ident { $($field:ident),* })*) => {$(
        impl PartialEq for $ty {
            fn eq(&self, other: &Self) -> bool {
                true $(&& self.$field == other.$field)*
            }
        }
    )*};
}

eq_ignoring_span! {
    AttrDecl { edge, attribute, value }
    TheoryDecl { name, family, world, params }
    Param { value }
    Setting { key, value }
    ComposeDecl { result, a, b }
}
