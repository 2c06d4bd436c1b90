//! Object-level maps between finite categories and the equivalence
//! properties read off their round-trip images.
//!
//! Objects are plain string labels. A map `F : I -> M` together with a map
//! `G : M -> I` is classified by comparing `F(G(M))` with `M` and `G(F(I))`
//! with `I` as sets. Composition is `(F ∘ G)(x) = F(G(x))`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::theoryzoo::{russellian_views, Element, Family, TheoryError, TheoryInstance};
use crate::worldmodel::World;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquivalenceError {
    #[error("duplicate object '{0}'")]
    DuplicateObject(String),
    #[error("object '{0}' is mapped more than once")]
    DuplicateMapping(String),
    #[error("'{0}' is not in the source of the map")]
    NotInSource(String),
    #[error("object '{0}' has no image")]
    Unmapped(String),
    #[error("'{from}' maps to '{to}', which is not in the target")]
    UnknownTarget { from: String, to: String },
    #[error("mismatched domains: {0}")]
    MismatchedDomains(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// Read access shared by total and partial object maps.
pub trait ObjectMap {
    fn source(&self) -> &[String];
    fn target(&self) -> &[String];
    /// Image of the `i`-th source object as an index into `target()`.
    fn image_of(&self, i: usize) -> Option<usize>;

    fn source_index(&self, object: &str) -> Option<usize> {
        self.source().iter().position(|s| s == object)
    }
}

fn index_objects(objects: &[String]) -> Result<HashMap<&str, usize>, EquivalenceError> {
    let mut idx = HashMap::with_capacity(objects.len());
    for (i, o) in objects.iter().enumerate() {
        if idx.insert(o.as_str(), i).is_some() {
            return Err(EquivalenceError::DuplicateObject(o.clone()));
        }
    }
    Ok(idx)
}

fn build_images<I>(
    source: &[String],
    target: &[String],
    pairs: I,
) -> Result<Vec<Option<usize>>, EquivalenceError>
where
    I: IntoIterator<Item = (String, String)>,
{
    let src = index_objects(source)?;
    let tgt = index_objects(target)?;
    let mut images = vec![None; source.len()];
    for (from, to) in pairs {
        let i = *src
            .get(from.as_str())
            .ok_or_else(|| EquivalenceError::NotInSource(from.clone()))?;
        let j = *tgt
            .get(to.as_str())
            .ok_or_else(|| EquivalenceError::UnknownTarget {
                from: from.clone(),
                to: to.clone(),
            })?;
        if images[i].replace(j).is_some() {
            return Err(EquivalenceError::DuplicateMapping(from));
        }
    }
    Ok(images)
}

/// A total function from one finite object set to another.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMap {
    source: Vec<String>,
    target: Vec<String>,
    images: Vec<usize>,
}

impl FiniteMap {
    pub fn new<I, A, B>(source: Vec<String>, target: Vec<String>, pairs: I) -> Result<Self, EquivalenceError>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let pairs = pairs.into_iter().map(|(a, b)| (a.into(), b.into()));
        let images = build_images(&source, &target, pairs)?;
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| img.ok_or_else(|| EquivalenceError::Unmapped(source[i].clone())))
            .collect::<Result<_, _>>()?;
        Ok(FiniteMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(objects: Vec<String>) -> Result<Self, EquivalenceError> {
        let pairs: Vec<_> = objects.iter().map(|o| (o.clone(), o.clone())).collect();
        FiniteMap::new(objects.clone(), objects, pairs)
    }

    pub fn apply(&self, object: &str) -> Option<&str> {
        self.source_index(object)
            .map(|i| self.target[self.images[i]].as_str())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.source
            .iter()
            .zip(&self.images)
            .map(|(s, &j)| (s.as_str(), self.target[j].as_str()))
    }
}

impl ObjectMap for FiniteMap {
    fn source(&self) -> &[String] {
        &self.source
    }
    fn target(&self) -> &[String] {
        &self.target
    }
    fn image_of(&self, i: usize) -> Option<usize> {
        Some(self.images[i])
    }
}

/// A map that may leave some source objects without a counterpart.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMap {
    source: Vec<String>,
    target: Vec<String>,
    images: Vec<Option<usize>>,
}

impl PartialMap {
    pub fn new<I>(source: Vec<String>, target: Vec<String>, pairs: I) -> Result<Self, EquivalenceError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let images = build_images(&source, &target, pairs)?;
        Ok(PartialMap {
            source,
            target,
            images,
        })
    }

    pub fn unmapped(&self) -> Vec<&str> {
        self.source
            .iter()
            .zip(&self.images)
            .filter(|(_, img)| img.is_none())
            .map(|(s, _)| s.as_str())
            .collect()
    }
}

impl ObjectMap for PartialMap {
    fn source(&self) -> &[String] {
        &self.source
    }
    fn target(&self) -> &[String] {
        &self.target
    }
    fn image_of(&self, i: usize) -> Option<usize> {
        self.images[i]
    }
}

/// `{ map(x) : x ∈ subset }`, deduplicated, in target order. Objects without
/// an image (partial maps only) contribute nothing.
pub fn image<M: ObjectMap + ?Sized, S: AsRef<str>>(
    map: &M,
    subset: &[S],
) -> Result<Vec<String>, EquivalenceError> {
    let mut hit = vec![false; map.target().len()];
    for x in subset {
        let x = x.as_ref();
        let i = map
            .source_index(x)
            .ok_or_else(|| EquivalenceError::NotInSource(x.to_string()))?;
        if let Some(j) = map.image_of(i) {
            hit[j] = true;
        }
    }
    Ok(map
        .target()
        .iter()
        .zip(hit)
        .filter(|(_, h)| *h)
        .map(|(t, _)| t.clone())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EquivalenceClass {
    FullEquivalence,
    PartialEquivalenceMaterial,
    PartialEquivalenceMental,
    MutualNonEquivalence,
}

impl EquivalenceClass {
    pub const ALL: [EquivalenceClass; 4] = [
        EquivalenceClass::FullEquivalence,
        EquivalenceClass::PartialEquivalenceMaterial,
        EquivalenceClass::PartialEquivalenceMental,
        EquivalenceClass::MutualNonEquivalence,
    ];

    /// `mental_round_trip`: `G(F(I)) = I`; `material_round_trip`: `F(G(M)) = M`.
    pub fn from_round_trips(mental_round_trip: bool, material_round_trip: bool) -> Self {
        match (mental_round_trip, material_round_trip) {
            (true, true) => EquivalenceClass::FullEquivalence,
            (true, false) => EquivalenceClass::PartialEquivalenceMaterial,
            (false, true) => EquivalenceClass::PartialEquivalenceMental,
            (false, false) => EquivalenceClass::MutualNonEquivalence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub class: EquivalenceClass,
    pub mental_objects: Vec<String>,
    pub material_objects: Vec<String>,
    /// `(F ∘ G)(M)`
    pub image_fg: Vec<String>,
    /// `(G ∘ F)(I)`
    pub image_gf: Vec<String>,
    /// `F` and `G` are mutually inverse bijections.
    pub isomorphism: bool,
    pub notes: Vec<String>,
}

fn same_set(a: &[String], b: &[String]) -> bool {
    let a: HashSet<&String> = a.iter().collect();
    let b: HashSet<&String> = b.iter().collect();
    a == b
}

/// Every `x` in the source of `a` comes back to itself through `b`.
fn returns_home<A, B>(a: &A, b: &B) -> bool
where
    A: ObjectMap + ?Sized,
    B: ObjectMap + ?Sized,
{
    (0..a.source().len()).all(|i| {
        let Some(j) = a.image_of(i) else { return false };
        let Some(k) = b.source_index(&a.target()[j]) else {
            return false;
        };
        b.image_of(k).map(|x| &b.target()[x]) == Some(&a.source()[i])
    })
}

/// Classifies `F : I -> M` and `G : M -> I` by their round-trip images.
pub fn classify_equivalence<F, G>(f: &F, g: &G) -> Result<EquivalenceReport, EquivalenceError>
where
    F: ObjectMap + ?Sized,
    G: ObjectMap + ?Sized,
{
    if !same_set(f.source(), g.target()) {
        return Err(EquivalenceError::MismatchedDomains(
            "source of F differs from target of G".into(),
        ));
    }
    if !same_set(f.target(), g.source()) {
        return Err(EquivalenceError::MismatchedDomains(
            "target of F differs from source of G".into(),
        ));
    }
    let mental = f.source().to_vec();
    let material = f.target().to_vec();
    let image_fg = image(f, &image(g, &material)?)?;
    let image_gf = image(g, &image(f, &mental)?)?;
    let class = EquivalenceClass::from_round_trips(
        same_set(&image_gf, &mental),
        same_set(&image_fg, &material),
    );
    let isomorphism = returns_home(f, g) && returns_home(g, f);
    let mut notes = Vec::new();
    if class == EquivalenceClass::FullEquivalence {
        if isomorphism {
            notes.push("F and G are mutually inverse: isomorphic full equivalence (dual-aspect monism or property dualism reading)".into());
        } else {
            notes.push("full equivalence by image; F and G are not mutually inverse".into());
        }
    }
    Ok(EquivalenceReport {
        class,
        mental_objects: mental,
        material_objects: material,
        image_fg,
        image_gf,
        isomorphism,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NeutralCoverage {
    pub covers_material: bool,
    pub covers_mental: bool,
}

/// Whether a neutral category reaches all of `M` through `F'` and all of `I`
/// through `G'`.
pub fn neutral_coverage(fp: &FiniteMap, gp: &FiniteMap) -> Result<NeutralCoverage, EquivalenceError> {
    if !same_set(fp.source(), gp.source()) {
        return Err(EquivalenceError::MismatchedDomains(
            "F' and G' have different sources".into(),
        ));
    }
    let neutral = fp.source().to_vec();
    Ok(NeutralCoverage {
        covers_material: same_set(&image(fp, &neutral)?, fp.target()),
        covers_mental: same_set(&image(gp, &neutral)?, gp.target()),
    })
}

fn neighbours(edges: &[String], world: &World, pick_cause: bool) -> HashSet<String> {
    edges
        .iter()
        .filter_map(|id| world.edge(id).and_then(|e| e.endpoints()))
        .map(|(c, e)| if pick_cause { c } else { e }.to_string())
        .collect()
}

/// The canonical correspondences between the perspectives and causal
/// complexes of an ordered graph. Only nonempty views are objects.
/// `W(y)` corresponds to `V(y)` when the relations arriving at `y` are
/// exactly the reverses of the relations leaving `y`; otherwise it has no
/// counterpart.
pub fn russellian_maps(world: &World) -> Result<(PartialMap, PartialMap), EquivalenceError> {
    let views = russellian_views(world)?;
    let mut mental = Vec::new();
    let mut material = Vec::new();
    let mut f_pairs = Vec::new();
    let mut g_pairs = Vec::new();
    for (v, w) in views.causal_complexes.iter().zip(&views.perspectives) {
        if !v.edges.is_empty() {
            material.push(v.label());
        }
        if !w.edges.is_empty() {
            mental.push(w.label());
        }
        let mirrored = !v.edges.is_empty()
            && neighbours(&w.edges, world, true) == neighbours(&v.edges, world, false);
        if mirrored {
            f_pairs.push((w.label(), v.label()));
            g_pairs.push((v.label(), w.label()));
        }
    }
    let f = PartialMap::new(mental.clone(), material.clone(), f_pairs)?;
    let g = PartialMap::new(material, mental, g_pairs)?;
    Ok((f, g))
}

pub fn russellian_equivalence(world: &World) -> Result<EquivalenceReport, EquivalenceError> {
    let (f, g) = russellian_maps(world)?;
    let mut report = classify_equivalence(&f, &g)?;
    let unmatched: Vec<&str> = f.unmapped().into_iter().chain(g.unmapped()).collect();
    if !unmatched.is_empty() {
        report
            .notes
            .push(format!("views without a mirrored counterpart: {}", unmatched.join(", ")));
    }
    Ok(report)
}

/// Which equivalence classes each family admits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityMatrix {
    pub rows: Vec<(Family, Vec<(EquivalenceClass, bool)>)>,
}

impl CompatibilityMatrix {
    pub fn permits(&self, family: Family, class: EquivalenceClass) -> bool {
        permitted(family, class)
    }
}

fn permitted(family: Family, class: EquivalenceClass) -> bool {
    use EquivalenceClass::*;
    match class {
        FullEquivalence => true,
        PartialEquivalenceMaterial => matches!(
            family,
            Family::Materialism
                | Family::Iit
                | Family::IllusionismHard
                | Family::NeutralMonism
                | Family::Russellian
                | Family::DualismNaive
                | Family::DualismInteractionist
        ),
        PartialEquivalenceMental => matches!(
            family,
            Family::Idealism
                | Family::Solipsism
                | Family::NeutralMonism
                | Family::Russellian
                | Family::DualismNaive
                | Family::DualismInteractionist
        ),
        MutualNonEquivalence => matches!(
            family,
            Family::NeutralMonism
                | Family::Russellian
                | Family::DualismNaive
                | Family::DualismInteractionist
        ),
    }
}

pub fn compatibility_matrix() -> CompatibilityMatrix {
    CompatibilityMatrix {
        rows: Family::ALL
            .into_iter()
            .map(|f| {
                let cells = EquivalenceClass::ALL
                    .into_iter()
                    .map(|c| (c, permitted(f, c)))
                    .collect();
                (f, cells)
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixCheck {
    pub family: Family,
    pub consistent: bool,
    pub class: EquivalenceClass,
    pub report: EquivalenceReport,
}

fn labels(set: &[Element]) -> Vec<String> {
    set.iter().map(Element::label).collect()
}

/// Classifies `F`, `G` over the instance's own mental and material sets and
/// looks the result up in the compatibility matrix.
pub fn check_instance_against_matrix<F, G>(
    instance: &TheoryInstance,
    f: &F,
    g: &G,
) -> Result<MatrixCheck, EquivalenceError>
where
    F: ObjectMap + ?Sized,
    G: ObjectMap + ?Sized,
{
    if !same_set(f.source(), &labels(&instance.mental)) {
        return Err(EquivalenceError::MismatchedDomains(
            "source of F is not the instance's mental set".into(),
        ));
    }
    if !same_set(f.target(), &labels(&instance.material)) {
        return Err(EquivalenceError::MismatchedDomains(
            "target of F is not the instance's material set".into(),
        ));
    }
    let report = classify_equivalence(f, g)?;
    Ok(MatrixCheck {
        family: instance.family,
        consistent: permitted(instance.family, report.class),
        class: report.class,
        report,
    })
}
