//! Finite worlds: atoms, hyperedges over atoms, per-edge attributes and named
//! predicates selecting edges.
//!
//! A [`World`] is validated once at construction and immutable afterwards.
//! Every iteration order (atoms, edges, predicate results) is declaration
//! order, so everything derived from a world is reproducible.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

pub type AtomId = String;
pub type EdgeId = String;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("world declares no atoms")]
    NoAtoms,
    #[error("empty identifier")]
    EmptyId,
    #[error("duplicate atom '{0}'")]
    DuplicateAtom(String),
    #[error("duplicate edge '{0}'")]
    DuplicateEdge(String),
    #[error("edge '{edge}' has no members")]
    EmptyEdge { edge: String },
    #[error("edge '{edge}' references undeclared atom '{atom}'")]
    UndeclaredAtom { edge: String, atom: String },
    #[error("ordered edge '{edge}' must have exactly 2 endpoints, found {arity}")]
    OrderedArity { edge: String, arity: usize },
    #[error("attribute '{attribute}' set on undeclared edge '{edge}'")]
    AttributeOnUnknownEdge { edge: String, attribute: String },
    #[error("attribute '{attribute}' of edge '{edge}' is not finite")]
    NonFiniteAttribute { edge: String, attribute: String },
    #[error("predicate '{predicate}' lists undeclared edge '{edge}'")]
    PredicateUnknownEdge { predicate: String, edge: String },
    #[error("predicate '{0}' has a non-finite threshold")]
    NonFiniteThreshold(String),
    #[error("unknown predicate '{0}'")]
    UnknownPredicate(String),
    #[error("edge '{edge}' has no attribute '{attribute}'")]
    MissingAttribute { edge: String, attribute: String },
}

/// Shape of a hyperedge.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeShape {
    /// Plain hyperedge: a nonempty set of atoms.
    Set(Vec<AtomId>),
    /// Directed pair, `cause -> effect`.
    Ordered { cause: AtomId, effect: AtomId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub shape: EdgeShape,
}

impl Edge {
    pub fn set<I, S>(id: impl Into<String>, members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Edge {
            id: id.into(),
            shape: EdgeShape::Set(members.into_iter().map(Into::into).collect()),
        }
    }

    pub fn ordered(id: impl Into<String>, cause: impl Into<String>, effect: impl Into<String>) -> Self {
        Edge {
            id: id.into(),
            shape: EdgeShape::Ordered {
                cause: cause.into(),
                effect: effect.into(),
            },
        }
    }

    pub fn members(&self) -> Vec<&str> {
        match &self.shape {
            EdgeShape::Set(m) => m.iter().map(String::as_str).collect(),
            EdgeShape::Ordered { cause, effect } => vec![cause.as_str(), effect.as_str()],
        }
    }

    pub fn is_ordered(&self) -> bool {
        matches!(self.shape, EdgeShape::Ordered { .. })
    }

    /// `(cause, effect)` for ordered edges.
    pub fn endpoints(&self) -> Option<(&str, &str)> {
        match &self.shape {
            EdgeShape::Ordered { cause, effect } => Some((cause, effect)),
            EdgeShape::Set(_) => None,
        }
    }
}

/// How a named predicate selects edges.
#[derive(Debug, Clone, PartialEq)]
pub enum PredicateDef {
    EdgeList(Vec<EdgeId>),
    /// Selects edges whose attribute is strictly greater than `threshold`.
    AttributeThreshold { attribute: String, threshold: f64 },
    AlwaysTrue,
    AlwaysFalse,
}

/// An edge declaration whose arity is checked during validation. Used by
/// front ends that cannot guarantee the ordered-pair shape syntactically.
#[derive(Debug, Clone, PartialEq)]
pub struct RawEdge {
    pub id: EdgeId,
    pub members: Vec<AtomId>,
    pub ordered: bool,
}

impl From<Edge> for RawEdge {
    fn from(e: Edge) -> Self {
        let ordered = e.is_ordered();
        let members = e.members().into_iter().map(str::to_string).collect();
        RawEdge {
            id: e.id,
            members,
            ordered,
        }
    }
}

pub type Attributes = BTreeMap<EdgeId, BTreeMap<String, f64>>;

#[derive(Debug, Clone)]
pub struct World {
    atoms: Vec<AtomId>,
    edges: Vec<Edge>,
    attributes: Attributes,
    predicates: BTreeMap<String, PredicateDef>,
    atom_index: HashMap<AtomId, usize>,
    edge_index: HashMap<EdgeId, usize>,
}

impl PartialEq for World {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
            && self.edges == other.edges
            && self.attributes == other.attributes
            && self.predicates == other.predicates
    }
}

/// Validates the declarations and builds a [`World`].
pub fn build_world<E>(
    atoms: Vec<AtomId>,
    edges: Vec<E>,
    attributes: Attributes,
    predicates: BTreeMap<String, PredicateDef>,
) -> Result<World, WorldError>
where
    E: Into<RawEdge>,
{
    if atoms.is_empty() {
        return Err(WorldError::NoAtoms);
    }
    let mut atom_index = HashMap::with_capacity(atoms.len());
    for (i, a) in atoms.iter().enumerate() {
        if a.is_empty() {
            return Err(WorldError::EmptyId);
        }
        if atom_index.insert(a.clone(), i).is_some() {
            return Err(WorldError::DuplicateAtom(a.clone()));
        }
    }

    let mut built = Vec::with_capacity(edges.len());
    let mut edge_index = HashMap::new();
    for raw in edges.into_iter().map(Into::into) {
        if raw.id.is_empty() {
            return Err(WorldError::EmptyId);
        }
        if edge_index.contains_key(&raw.id) {
            return Err(WorldError::DuplicateEdge(raw.id));
        }
        if raw.members.is_empty() {
            return Err(WorldError::EmptyEdge { edge: raw.id });
        }
        if let Some(atom) = raw.members.iter().find(|m| !atom_index.contains_key(*m)) {
            return Err(WorldError::UndeclaredAtom {
                edge: raw.id.clone(),
                atom: atom.clone(),
            });
        }
        let shape = if raw.ordered {
            if raw.members.len() != 2 {
                return Err(WorldError::OrderedArity {
                    edge: raw.id,
                    arity: raw.members.len(),
                });
            }
            let mut it = raw.members.into_iter();
            EdgeShape::Ordered {
                cause: it.next().unwrap(),
                effect: it.next().unwrap(),
            }
        } else {
            EdgeShape::Set(raw.members)
        };
        edge_index.insert(raw.id.clone(), built.len());
        built.push(Edge { id: raw.id, shape });
    }

    for (edge, attrs) in &attributes {
        for (name, value) in attrs {
            if !edge_index.contains_key(edge) {
                return Err(WorldError::AttributeOnUnknownEdge {
                    edge: edge.clone(),
                    attribute: name.clone(),
                });
            }
            if !value.is_finite() {
                return Err(WorldError::NonFiniteAttribute {
                    edge: edge.clone(),
                    attribute: name.clone(),
                });
            }
        }
    }

    let world = World {
        atoms,
        edges: built,
        attributes,
        predicates: BTreeMap::new(),
        atom_index,
        edge_index,
    };
    world.with_predicates(predicates)
}

impl World {
    pub fn atoms(&self) -> &[AtomId] {
        &self.atoms
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn attributes(&self) -> &Attributes {
        &self.attributes
    }

    pub fn predicates(&self) -> &BTreeMap<String, PredicateDef> {
        &self.predicates
    }

    pub fn has_atom(&self, id: &str) -> bool {
        self.atom_index.contains_key(id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i])
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &str> {
        self.edges.iter().map(|e| e.id.as_str())
    }

    pub fn attribute(&self, edge: &str, name: &str) -> Option<f64> {
        self.attributes.get(edge).and_then(|a| a.get(name)).copied()
    }

    /// True when every edge is an ordered pair (vacuously true without edges).
    pub fn is_ordered_graph(&self) -> bool {
        self.edges.iter().all(Edge::is_ordered)
    }

    /// Returns a copy of this world with additional predicates registered.
    /// Existing predicates with the same name are replaced.
    pub fn with_predicates(
        &self,
        extra: BTreeMap<String, PredicateDef>,
    ) -> Result<World, WorldError> {
        for (name, def) in &extra {
            match def {
                PredicateDef::EdgeList(ids) => {
                    if let Some(e) = ids.iter().find(|e| !self.edge_index.contains_key(*e)) {
                        return Err(WorldError::PredicateUnknownEdge {
                            predicate: name.clone(),
                            edge: e.clone(),
                        });
                    }
                }
                PredicateDef::AttributeThreshold { threshold, .. } if !threshold.is_finite() => {
                    return Err(WorldError::NonFiniteThreshold(name.clone()));
                }
                _ => {}
            }
        }
        let mut world = self.clone();
        world.predicates.extend(extra);
        Ok(world)
    }

    /// Edges satisfying the named predicate, in declaration order.
    pub fn eval_predicate(&self, name: &str) -> Result<Vec<EdgeId>, WorldError> {
        let def = self
            .predicates
            .get(name)
            .ok_or_else(|| WorldError::UnknownPredicate(name.to_string()))?;
        self.eval_def(def)
    }

    /// Evaluates a predicate definition that need not be registered.
    pub fn eval_def(&self, def: &PredicateDef) -> Result<Vec<EdgeId>, WorldError> {
        match def {
            PredicateDef::AlwaysTrue => Ok(self.edges.iter().map(|e| e.id.clone()).collect()),
            PredicateDef::AlwaysFalse => Ok(Vec::new()),
            PredicateDef::EdgeList(ids) => {
                let wanted: HashSet<&str> = ids.iter().map(String::as_str).collect();
                if let Some(e) = ids.iter().find(|e| !self.edge_index.contains_key(*e)) {
                    return Err(WorldError::PredicateUnknownEdge {
                        predicate: "<inline>".into(),
                        edge: e.clone(),
                    });
                }
                Ok(self
                    .edges
                    .iter()
                    .filter(|e| wanted.contains(e.id.as_str()))
                    .map(|e| e.id.clone())
                    .collect())
            }
            PredicateDef::AttributeThreshold {
                attribute,
                threshold,
            } => {
                let mut out = Vec::new();
                for e in &self.edges {
                    let value = self.attribute(&e.id, attribute).ok_or_else(|| {
                        WorldError::MissingAttribute {
                            edge: e.id.clone(),
                            attribute: attribute.clone(),
                        }
                    })?;
                    if value > *threshold {
                        out.push(e.id.clone());
                    }
                }
                Ok(out)
            }
        }
    }
}
