//! Theory instances built over a [`World`].
//!
//! Each family derives its mental and material sets from the world in a
//! fixed way: materialism keeps every atom as material and selects mental
//! relations with a predicate, idealism is the mirror image, neutral monism
//! selects both sides with two predicates, and so on. The derived sets are
//! lists of [`Element`]s in world declaration order.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::worldmodel::{AtomId, EdgeId, PredicateDef, World, WorldError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Solipsism,
    Materialism,
    Panpsychism,
    Iit,
    IllusionismHard,
    Idealism,
    NeutralMonism,
    Russellian,
    DualismNaive,
    DualismInteractionist,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Solipsism,
        Family::Materialism,
        Family::Panpsychism,
        Family::Iit,
        Family::IllusionismHard,
        Family::Idealism,
        Family::NeutralMonism,
        Family::Russellian,
        Family::DualismNaive,
        Family::DualismInteractionist,
    ];

    /// Keyword used in `.mmk` documents and CLI output.
    pub fn keyword(self) -> &'static str {
        match self {
            Family::Solipsism => "solipsism",
            Family::Materialism => "materialism",
            Family::Panpsychism => "panpsychism",
            Family::Iit => "iit",
            Family::IllusionismHard => "illusionism",
            Family::Idealism => "idealism",
            Family::NeutralMonism => "neutral_monism",
            Family::Russellian => "russellian",
            Family::DualismNaive => "dualism",
            Family::DualismInteractionist => "interactionist_dualism",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.keyword() == s)
    }

    pub fn is_dualism(self) -> bool {
        matches!(self, Family::DualismNaive | Family::DualismInteractionist)
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.keyword())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Which side of a Russellian ordered graph a view collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aspect {
    /// `V(x)`: relations caused by `x`.
    CausalComplex,
    /// `W(y)`: relations whose effect is at `y`.
    Perspective,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct View {
    pub aspect: Aspect,
    pub anchor: AtomId,
    pub edges: Vec<EdgeId>,
}

impl View {
    pub fn label(&self) -> String {
        match self.aspect {
            Aspect::CausalComplex => format!("V({})", self.anchor),
            Aspect::Perspective => format!("W({})", self.anchor),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Atom(AtomId),
    Edge(EdgeId),
    View(View),
}

impl Element {
    /// Object name used when elements take part in finite maps.
    pub fn label(&self) -> String {
        match self {
            Element::Atom(a) => a.clone(),
            Element::Edge(e) => e.clone(),
            Element::View(v) => v.label(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoryError {
    #[error("{family} requires option '{option}'")]
    MissingOption { family: Family, option: &'static str },
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("edge '{0}' is not an ordered pair")]
    UnorderedEdge(String),
    #[error("non-finite value in threshold comparison")]
    NonFinite,
    #[error("'{0}' is neither an atom nor an edge of the world")]
    UnknownElement(String),
    #[error("link ({0} -> {1}) must connect the mental and material categories")]
    InvalidLink(String, String),
    #[error("naive dualism admits no links")]
    LinksOnNaiveDualism,
    #[error("{0} has no mirror family")]
    NoMirror(Family),
}

/// Per-family inputs. Predicate fields name predicates registered on the world.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TheoryOptions {
    pub q: Option<String>,
    pub q_mental: Option<String>,
    pub q_material: Option<String>,
    pub tau: Option<f64>,
    /// Attribute holding Φ; `phi` when unset.
    pub phi_attribute: Option<String>,
    pub mental: Vec<String>,
    pub material: Vec<String>,
    pub links: Vec<(String, String)>,
}

impl TheoryOptions {
    pub fn with_q(name: impl Into<String>) -> Self {
        TheoryOptions {
            q: Some(name.into()),
            ..Default::default()
        }
    }

    fn phi(&self) -> &str {
        self.phi_attribute.as_deref().unwrap_or(DEFAULT_PHI)
    }
}

pub const DEFAULT_PHI: &str = "phi";

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryInstance {
    pub world: World,
    pub family: Family,
    pub mental: Vec<Element>,
    pub material: Vec<Element>,
    /// Cross-category links as `(from, to)` labels; interactionist dualism only.
    pub links: Vec<(String, String)>,
    /// Φ attribute and τ used by an IIT instance.
    pub threshold: Option<(String, f64)>,
}

/// `phi > tau`, strictly.
pub fn iit_predicate(phi: f64, tau: f64) -> Result<bool, TheoryError> {
    if !phi.is_finite() || !tau.is_finite() {
        return Err(TheoryError::NonFinite);
    }
    Ok(phi > tau)
}

fn atoms_of(world: &World) -> Vec<Element> {
    world.atoms().iter().cloned().map(Element::Atom).collect()
}

fn edges_of(ids: Vec<EdgeId>) -> Vec<Element> {
    ids.into_iter().map(Element::Edge).collect()
}

fn required<'a>(
    family: Family,
    value: &'a Option<String>,
    option: &'static str,
) -> Result<&'a str, TheoryError> {
    value
        .as_deref()
        .ok_or(TheoryError::MissingOption { family, option })
}

fn resolve_elements(world: &World, ids: &[String]) -> Result<Vec<Element>, TheoryError> {
    ids.iter()
        .map(|id| {
            if world.has_atom(id) {
                Ok(Element::Atom(id.clone()))
            } else if world.edge(id).is_some() {
                Ok(Element::Edge(id.clone()))
            } else {
                Err(TheoryError::UnknownElement(id.clone()))
            }
        })
        .collect()
}

pub fn instantiate_theory(
    family: Family,
    world: &World,
    options: &TheoryOptions,
) -> Result<TheoryInstance, TheoryError> {
    let mut instance = TheoryInstance {
        world: world.clone(),
        family,
        mental: Vec::new(),
        material: Vec::new(),
        links: Vec::new(),
        threshold: None,
    };
    match family {
        Family::Solipsism => instance.mental = atoms_of(world),
        Family::IllusionismHard => instance.material = atoms_of(world),
        Family::Materialism => {
            let q = required(family, &options.q, "Q")?;
            instance.material = atoms_of(world);
            instance.mental = edges_of(world.eval_predicate(q)?);
        }
        Family::Idealism => {
            let q = required(family, &options.q, "Q")?;
            instance.mental = atoms_of(world);
            instance.material = edges_of(world.eval_predicate(q)?);
        }
        Family::Panpsychism => {
            instance.material = atoms_of(world);
            instance.mental = edges_of(world.eval_def(&PredicateDef::AlwaysTrue)?);
        }
        Family::Iit => {
            let tau = options.tau.ok_or(TheoryError::MissingOption {
                family,
                option: "tau",
            })?;
            if !tau.is_finite() {
                return Err(TheoryError::NonFinite);
            }
            let attribute = options.phi().to_string();
            instance.material = atoms_of(world);
            instance.mental = edges_of(world.eval_def(&PredicateDef::AttributeThreshold {
                attribute: attribute.clone(),
                threshold: tau,
            })?);
            instance.threshold = Some((attribute, tau));
        }
        Family::NeutralMonism => {
            let qi = required(family, &options.q_mental, "Q_I")?;
            let qm = required(family, &options.q_material, "Q_M")?;
            instance.mental = edges_of(world.eval_predicate(qi)?);
            instance.material = edges_of(world.eval_predicate(qm)?);
        }
        Family::Russellian => {
            let views = russellian_views(world)?;
            instance.mental = views.perspectives.into_iter().map(Element::View).collect();
            instance.material = views.causal_complexes.into_iter().map(Element::View).collect();
        }
        Family::DualismNaive | Family::DualismInteractionist => {
            instance.mental = resolve_elements(world, &options.mental)?;
            instance.material = resolve_elements(world, &options.material)?;
            if family == Family::DualismNaive && !options.links.is_empty() {
                return Err(TheoryError::LinksOnNaiveDualism);
            }
            let mental: HashSet<String> = instance.mental.iter().map(Element::label).collect();
            let material: HashSet<String> = instance.material.iter().map(Element::label).collect();
            for (from, to) in &options.links {
                let crosses = (mental.contains(from) && material.contains(to))
                    || (material.contains(from) && mental.contains(to));
                if !crosses {
                    return Err(TheoryError::InvalidLink(from.clone(), to.clone()));
                }
            }
            instance.links = options.links.clone();
        }
    }
    Ok(instance)
}

/// Causal complexes `V(x)` and perspectives `W(y)`, one per atom in
/// declaration order. Empty views are kept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RussellianViews {
    pub causal_complexes: Vec<View>,
    pub perspectives: Vec<View>,
}

pub fn russellian_views(world: &World) -> Result<RussellianViews, TheoryError> {
    let mut out: BTreeMap<&str, Vec<EdgeId>> = BTreeMap::new();
    let mut inc: BTreeMap<&str, Vec<EdgeId>> = BTreeMap::new();
    for e in world.edges() {
        let (cause, effect) = e
            .endpoints()
            .ok_or_else(|| TheoryError::UnorderedEdge(e.id.clone()))?;
        out.entry(cause).or_default().push(e.id.clone());
        inc.entry(effect).or_default().push(e.id.clone());
    }
    let view = |aspect, anchor: &String, table: &BTreeMap<&str, Vec<EdgeId>>| View {
        aspect,
        anchor: anchor.clone(),
        edges: table.get(anchor.as_str()).cloned().unwrap_or_default(),
    };
    Ok(RussellianViews {
        causal_complexes: world
            .atoms()
            .iter()
            .map(|a| view(Aspect::CausalComplex, a, &out))
            .collect(),
        perspectives: world
            .atoms()
            .iter()
            .map(|a| view(Aspect::Perspective, a, &inc))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualismCheck {
    pub disjoint: bool,
    pub link_count: usize,
}

pub fn check_dualism(instance: &TheoryInstance) -> DualismCheck {
    let mental: HashSet<&Element> = instance.mental.iter().collect();
    DualismCheck {
        disjoint: instance.material.iter().all(|m| !mental.contains(m)),
        link_count: instance.links.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub families: Vec<Family>,
    pub notes: Vec<String>,
}

fn all_atoms(instance: &TheoryInstance, set: &[Element]) -> bool {
    set.len() == instance.world.atoms().len()
        && set
            .iter()
            .zip(instance.world.atoms())
            .all(|(e, a)| matches!(e, Element::Atom(x) if x == a))
}

fn only_edges(set: &[Element]) -> bool {
    set.iter().all(|e| matches!(e, Element::Edge(_)))
}

fn only_atoms(set: &[Element]) -> bool {
    set.iter().all(|e| matches!(e, Element::Atom(_)))
}

fn all_edges(instance: &TheoryInstance, set: &[Element]) -> bool {
    let have: HashSet<&str> = set
        .iter()
        .filter_map(|e| match e {
            Element::Edge(id) => Some(id.as_str()),
            _ => None,
        })
        .collect();
    only_edges(set) && instance.world.edge_ids().all(|id| have.contains(id))
}

/// True when some τ makes `{ r : Φ_r > τ }` equal to the mental set.
fn threshold_separable(instance: &TheoryInstance) -> bool {
    let attribute = instance
        .threshold
        .as_ref()
        .map(|(a, _)| a.as_str())
        .unwrap_or(DEFAULT_PHI);
    let mental: HashSet<&str> = instance
        .mental
        .iter()
        .filter_map(|e| match e {
            Element::Edge(id) => Some(id.as_str()),
            _ => None,
        })
        .collect();
    let mut min_in = f64::INFINITY;
    let mut max_out = f64::NEG_INFINITY;
    for id in instance.world.edge_ids() {
        let Some(phi) = instance.world.attribute(id, attribute) else {
            return false;
        };
        if mental.contains(id) {
            min_in = min_in.min(phi);
        } else {
            max_out = max_out.max(phi);
        }
    }
    !instance.world.edges().is_empty() && min_in > max_out
}

fn russellian_shape(instance: &TheoryInstance) -> bool {
    let Ok(views) = russellian_views(&instance.world) else {
        return false;
    };
    let mental: Vec<Element> = views.perspectives.into_iter().map(Element::View).collect();
    let material: Vec<Element> = views.causal_complexes.into_iter().map(Element::View).collect();
    instance.mental == mental && instance.material == material
}

/// Re-derives the families whose structural invariant the instance satisfies.
pub fn classify_structure(instance: &TheoryInstance) -> Classification {
    let mental = &instance.mental;
    let material = &instance.material;
    let materialist = all_atoms(instance, material) && only_edges(mental);
    let idealist = all_atoms(instance, mental) && only_edges(material);

    let mut families = Vec::new();
    if all_atoms(instance, mental) && material.is_empty() {
        families.push(Family::Solipsism);
    }
    if materialist {
        families.push(Family::Materialism);
        if all_edges(instance, mental) {
            families.push(Family::Panpsychism);
        }
        if threshold_separable(instance) {
            families.push(Family::Iit);
        }
    }
    if all_atoms(instance, material) && mental.is_empty() {
        families.push(Family::IllusionismHard);
    }
    if idealist {
        families.push(Family::Idealism);
    }
    if only_edges(mental) && only_edges(material) && !(mental.is_empty() && material.is_empty()) {
        families.push(Family::NeutralMonism);
    }
    if russellian_shape(instance) {
        families.push(Family::Russellian);
    }
    let substance_dualist = !mental.is_empty()
        && !material.is_empty()
        && only_atoms(mental)
        && only_atoms(material)
        && check_dualism(instance).disjoint;
    if substance_dualist {
        families.push(if instance.links.is_empty() {
            Family::DualismNaive
        } else {
            Family::DualismInteractionist
        });
    }
    families.sort();

    let has = |f| families.contains(&f);
    let mut notes = Vec::new();
    if has(Family::Materialism) && has(Family::Panpsychism) && !instance.world.edges().is_empty() {
        notes.push("structurally panpsychist: Q holds for every relation (R = I)".to_string());
    }
    if has(Family::Materialism) && has(Family::IllusionismHard) {
        notes.push("no relation is selected as mental: coincides with hard illusionism".to_string());
    }
    if has(Family::Idealism) && has(Family::Solipsism) {
        notes.push("no relation is selected as material: coincides with solipsism".to_string());
    }
    if has(Family::Iit) {
        notes.push("mental relations are exactly those above a Φ threshold".to_string());
    }
    if !families.contains(&instance.family) {
        notes.push(format!(
            "declared family '{}' does not match the instance structure",
            instance.family
        ));
    }
    Classification { families, notes }
}

/// Swaps the roles of the mental and material sets, turning a materialism
/// instance into the idealism instance over the same world and predicate,
/// and back.
pub fn mirror(instance: &TheoryInstance) -> Result<TheoryInstance, TheoryError> {
    let family = match instance.family {
        Family::Materialism => Family::Idealism,
        Family::Idealism => Family::Materialism,
        other => return Err(TheoryError::NoMirror(other)),
    };
    Ok(TheoryInstance {
        family,
        mental: instance.material.clone(),
        material: instance.mental.clone(),
        ..instance.clone()
    })
}

/// Family invariants the instance breaks, as human-readable messages.
pub fn violations(instance: &TheoryInstance) -> Vec<String> {
    let mut out = Vec::new();
    let mental = &instance.mental;
    let material = &instance.material;
    match instance.family {
        Family::Panpsychism if !all_edges(instance, mental) => {
            out.push("panpsychism requires Q true for all r (R = I)".into())
        }
        Family::IllusionismHard if !(all_atoms(instance, material) && mental.is_empty()) => {
            out.push("hard illusionism requires U = M and no mental set".into())
        }
        Family::Solipsism if !(all_atoms(instance, mental) && material.is_empty()) => {
            out.push("solipsism requires U = I and no material set".into())
        }
        Family::DualismNaive => {
            let check = check_dualism(instance);
            if !check.disjoint {
                out.push("naive dualism: the intersection of M and I has no members (M ∩ I = ∅) is violated".into());
            }
            if check.link_count > 0 {
                out.push("naive dualism admits no links".into());
            }
        }
        Family::Russellian if !russellian_shape(instance) => {
            out.push("russellian sets must be the V(x) and W(y) view families".into())
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worldmodel::{build_world, Attributes, Edge};

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn world() -> World {
        let mut preds = BTreeMap::new();
        preds.insert("q1".into(), PredicateDef::EdgeList(s(&["r1"])));
        preds.insert("q2".into(), PredicateDef::EdgeList(s(&["r2"])));
        preds.insert("all".into(), PredicateDef::AlwaysTrue);
        let mut attrs = Attributes::new();
        attrs.entry("r1".into()).or_default().insert("phi".into(), 0.7);
        attrs.entry("r2".into()).or_default().insert("phi".into(), 0.2);
        build_world(
            s(&["m1", "m2", "m3"]),
            vec![Edge::set("r1", ["m1", "m2"]), Edge::set("r2", ["m2", "m3"])],
            attrs,
            preds,
        )
        .unwrap()
    }

    fn atoms(v: &[&str]) -> Vec<Element> {
        v.iter().map(|x| Element::Atom(x.to_string())).collect()
    }

    fn edges(v: &[&str]) -> Vec<Element> {
        v.iter().map(|x| Element::Edge(x.to_string())).collect()
    }

    fn ordered(atoms: &[&str], pairs: &[(&str, &str)]) -> World {
        let edges = pairs
            .iter()
            .map(|(a, b)| Edge::ordered(format!("{a}{b}"), *a, *b))
            .collect();
        build_world(s(atoms), edges, Attributes::new(), BTreeMap::new()).unwrap()
    }

    #[test]
    fn materialism_selects_mental_edges() {
        let t = instantiate_theory(Family::Materialism, &world(), &TheoryOptions::with_q("q1")).unwrap();
        assert_eq!(t.material, atoms(&["m1", "m2", "m3"]));
        assert_eq!(t.mental, edges(&["r1"]));
    }

    #[test]
    fn panpsychism_takes_every_edge() {
        let t = instantiate_theory(Family::Panpsychism, &world(), &TheoryOptions::default()).unwrap();
        assert_eq!(t.mental, edges(&["r1", "r2"]));
        assert!(violations(&t).is_empty());
    }

    #[test]
    fn neutral_monism_uses_both_predicates() {
        let opts = TheoryOptions {
            q_mental: Some("q1".into()),
            q_material: Some("q2".into()),
            ..Default::default()
        };
        let w = world();
        let t = instantiate_theory(Family::NeutralMonism, &w, &opts).unwrap();
        assert_eq!(t.mental, edges(&["r1"]));
        assert_eq!(t.material, edges(&["r2"]));
        assert_eq!(t.world.atoms(), w.atoms());
    }

    #[test]
    fn missing_options_are_errors() {
        let w = world();
        assert_eq!(
            instantiate_theory(Family::Materialism, &w, &TheoryOptions::default()),
            Err(TheoryError::MissingOption {
                family: Family::Materialism,
                option: "Q"
            })
        );
        assert!(matches!(
            instantiate_theory(Family::Iit, &w, &TheoryOptions::default()),
            Err(TheoryError::MissingOption { option: "tau", .. })
        ));
        let opts = TheoryOptions {
            tau: Some(0.0),
            phi_attribute: Some("psi".into()),
            ..Default::default()
        };
        assert!(matches!(
            instantiate_theory(Family::Iit, &w, &opts),
            Err(TheoryError::World(WorldError::MissingAttribute { .. }))
        ));
    }

    #[test]
    fn iit_threshold() {
        assert_eq!(iit_predicate(0.7, 0.5), Ok(true));
        assert_eq!(iit_predicate(0.5, 0.5), Ok(false));
        assert_eq!(iit_predicate(0.1, 0.0), Ok(true));
        assert_eq!(iit_predicate(f64::NAN, 0.0), Err(TheoryError::NonFinite));
        let opts = TheoryOptions {
            tau: Some(0.5),
            ..Default::default()
        };
        let t = instantiate_theory(Family::Iit, &world(), &opts).unwrap();
        assert_eq!(t.mental, edges(&["r1"]));
        assert!(classify_structure(&t).families.contains(&Family::Iit));
    }

    #[test]
    fn russellian_views_of_two_cycle() {
        let v = russellian_views(&ordered(&["a", "b"], &[("a", "b"), ("b", "a")])).unwrap();
        assert_eq!(v.causal_complexes[0].edges, s(&["ab"]));
        assert_eq!(v.perspectives[0].edges, s(&["ba"]));
        assert_eq!(v.causal_complexes[1].edges, s(&["ba"]));
        assert_eq!(v.perspectives[1].edges, s(&["ab"]));
        assert_eq!(v.causal_complexes[0].label(), "V(a)");
        assert_eq!(v.perspectives[1].label(), "W(b)");
    }

    #[test]
    fn russellian_source_sink_and_empty() {
        let v = russellian_views(&ordered(&["a", "b"], &[("a", "b")])).unwrap();
        assert!(v.perspectives[0].edges.is_empty());
        assert!(v.causal_complexes[1].edges.is_empty());
        let v = russellian_views(&ordered(&["a"], &[])).unwrap();
        assert!(v.perspectives[0].edges.is_empty() && v.causal_complexes[0].edges.is_empty());
        assert_eq!(
            russellian_views(&world()),
            Err(TheoryError::UnorderedEdge("r1".into()))
        );
    }

    fn dualist(mental: &[&str], material: &[&str], links: &[(&str, &str)]) -> TheoryInstance {
        let w = build_world::<Edge>(s(&["i1", "m1", "x"]), vec![], Attributes::new(), BTreeMap::new()).unwrap();
        let family = if links.is_empty() {
            Family::DualismNaive
        } else {
            Family::DualismInteractionist
        };
        let opts = TheoryOptions {
            mental: s(mental),
            material: s(material),
            links: links.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            ..Default::default()
        };
        instantiate_theory(family, &w, &opts).unwrap()
    }

    #[test]
    fn dualism_checks() {
        let naive = dualist(&["i1"], &["m1"], &[]);
        assert_eq!(
            check_dualism(&naive),
            DualismCheck {
                disjoint: true,
                link_count: 0
            }
        );
        let inter = dualist(&["i1"], &["m1"], &[("m1", "i1")]);
        assert_eq!(check_dualism(&inter).link_count, 1);
        assert_eq!(
            classify_structure(&inter).families,
            vec![Family::DualismInteractionist]
        );
        let overlap = dualist(&["x"], &["x"], &[]);
        assert!(!check_dualism(&overlap).disjoint);
        assert!(violations(&overlap)[0].contains("intersection of M and I has no members"));
    }

    #[test]
    fn links_must_cross_categories() {
        let w = build_world::<Edge>(s(&["i1", "i2", "m1"]), vec![], Attributes::new(), BTreeMap::new()).unwrap();
        let opts = TheoryOptions {
            mental: s(&["i1", "i2"]),
            material: s(&["m1"]),
            links: vec![("i1".into(), "i2".into())],
            ..Default::default()
        };
        assert!(matches!(
            instantiate_theory(Family::DualismInteractionist, &w, &opts),
            Err(TheoryError::InvalidLink(..))
        ));
        assert_eq!(
            instantiate_theory(Family::DualismNaive, &w, &opts),
            Err(TheoryError::LinksOnNaiveDualism)
        );
    }

    #[test]
    fn classify_materialism_with_true_q_is_also_panpsychist() {
        let t = instantiate_theory(Family::Materialism, &world(), &TheoryOptions::with_q("all")).unwrap();
        let c = classify_structure(&t);
        assert!(c.families.contains(&Family::Materialism));
        assert!(c.families.contains(&Family::Panpsychism));
        assert!(c.notes.iter().any(|n| n.contains("structurally panpsychist")));
    }

    #[test]
    fn classify_solipsism_and_illusionism() {
        let w = world();
        let sol = instantiate_theory(Family::Solipsism, &w, &TheoryOptions::default()).unwrap();
        assert!(classify_structure(&sol).families.contains(&Family::Solipsism));
        let ill = instantiate_theory(Family::IllusionismHard, &w, &TheoryOptions::default()).unwrap();
        let c = classify_structure(&ill);
        assert!(c.families.contains(&Family::IllusionismHard));
        assert!(!c.families.contains(&Family::Solipsism));
    }

    #[test]
    fn mismatched_declaration_is_noted() {
        let mut t = instantiate_theory(Family::Materialism, &world(), &TheoryOptions::with_q("q1")).unwrap();
        t.family = Family::Solipsism;
        let c = classify_structure(&t);
        assert!(c.notes.iter().any(|n| n.contains("does not match")));
    }

    #[test]
    fn mirror_round_trip() {
        let w = world();
        let mat = instantiate_theory(Family::Materialism, &w, &TheoryOptions::with_q("q1")).unwrap();
        let ide = instantiate_theory(Family::Idealism, &w, &TheoryOptions::with_q("q1")).unwrap();
        assert_eq!(mirror(&mat).unwrap(), ide);
        assert_eq!(mirror(&ide).unwrap(), mat);
        assert!(mirror(&instantiate_theory(Family::Solipsism, &w, &TheoryOptions::default()).unwrap()).is_err());
    }

    #[test]
    fn family_keywords_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_keyword(f.keyword()), Some(f));
        }
    }
}
