//! Activation datasets: concept rows, composition triples, CSV I/O and
//! synthetic generators.
//!
//! Rows CSV: header `concept,neurons`, `neurons` a `;`-separated list of
//! neuron indices. Triples CSV: header `component_a,component_b,composed`.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::cogmech::{sample_base_concept, ComposeParams, Composer, Composition, NeuronSet};
use crate::rng::stream_rng;

#[derive(Debug, Clone, PartialEq)]
pub struct ActivationDataset {
    neuron_count: usize,
    rows: Vec<(String, NeuronSet)>,
    index: HashMap<String, usize>,
    triples: Vec<Composition>,
}

impl ActivationDataset {
    pub fn new(
        neuron_count: usize,
        rows: Vec<(String, NeuronSet)>,
        triples: Vec<Composition>,
    ) -> Result<Self, StatsError> {
        if neuron_count == 0 {
            return Err(StatsError::InvalidParams("N must be positive".into()));
        }
        let mut index = HashMap::with_capacity(rows.len());
        for (i, (concept, set)) in rows.iter().enumerate() {
            if index.insert(concept.clone(), i).is_some() {
                return Err(StatsError::Dataset(format!("duplicate row for concept '{concept}'")));
            }
            if let Some(m) = set.max().filter(|&m| m >= neuron_count) {
                return Err(StatsError::Dataset(format!(
                    "concept '{concept}' activates neuron {m}, outside N = {neuron_count}"
                )));
            }
        }
        for t in &triples {
            for c in [&t.a, &t.b, &t.composed] {
                if !index.contains_key(c) {
                    return Err(StatsError::Dataset(format!("triple references unknown concept '{c}'")));
                }
            }
        }
        Ok(ActivationDataset {
            neuron_count,
            rows,
            index,
            triples,
        })
    }

    pub fn neuron_count(&self) -> usize {
        self.neuron_count
    }

    pub fn rows(&self) -> &[(String, NeuronSet)] {
        &self.rows
    }

    pub fn triples(&self) -> &[Composition] {
        &self.triples
    }

    pub fn activation(&self, concept: &str) -> Option<&NeuronSet> {
        self.index.get(concept).map(|&i| &self.rows[i].1)
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct RowRecord {
    concept: String,
    neurons: String,
}

#[derive(Debug, Deserialize, Serialize)]
struct TripleRecord {
    component_a: String,
    component_b: String,
    composed: String,
}

fn parse_neurons(concept: &str, field: &str) -> Result<NeuronSet, StatsError> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>().map_err(|_| {
                StatsError::Dataset(format!("concept '{concept}': '{s}' is not a neuron index"))
            })
        })
        .collect()
}

pub fn read_rows<R: Read>(reader: R) -> Result<Vec<(String, NeuronSet)>, StatsError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["concept", "neurons"] {
        return Err(StatsError::Dataset("rows file must have header 'concept,neurons'".into()));
    }
    rdr.deserialize::<RowRecord>()
        .map(|rec| {
            let rec = rec?;
            let set = parse_neurons(&rec.concept, &rec.neurons)?;
            Ok((rec.concept, set))
        })
        .collect()
}

pub fn read_triples<R: Read>(reader: R) -> Result<Vec<Composition>, StatsError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["component_a", "component_b", "composed"] {
        return Err(StatsError::Dataset(
            "triples file must have header 'component_a,component_b,composed'".into(),
        ));
    }
    rdr.deserialize::<TripleRecord>()
        .map(|rec| {
            let rec = rec?;
            Ok(Composition {
                a: rec.component_a,
                b: rec.component_b,
                composed: rec.composed,
            })
        })
        .collect()
}

pub fn write_rows<W: Write>(writer: W, dataset: &ActivationDataset) -> Result<(), StatsError> {
    let mut w = csv::Writer::from_writer(writer);
    for (concept, set) in dataset.rows() {
        let neurons = set.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";");
        w.serialize(RowRecord {
            concept: concept.clone(),
            neurons,
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_triples<W: Write>(writer: W, dataset: &ActivationDataset) -> Result<(), StatsError> {
    let mut w = csv::Writer::from_writer(writer);
    for t in dataset.triples() {
        w.serialize(TripleRecord {
            component_a: t.a.clone(),
            component_b: t.b.clone(),
            composed: t.composed.clone(),
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamEstimate {
    pub alpha_hat: f64,
    /// `None` when the dataset has no triples.
    pub beta_hat: Option<f64>,
}

/// Mean active-set size, and mean overlap of composed concepts with each of
/// their components.
pub fn estimate_params(dataset: &ActivationDataset) -> Result<ParamEstimate, StatsError> {
    if dataset.rows().is_empty() {
        return Err(StatsError::EmptyDataset("no rows"));
    }
    let alpha_hat = dataset.rows().iter().map(|(_, s)| s.len() as f64).sum::<f64>()
        / dataset.rows().len() as f64;
    let beta_hat = if dataset.triples().is_empty() {
        None
    } else {
        let total: usize = dataset
            .triples()
            .iter()
            .map(|t| {
                let fd = dataset.activation(&t.composed).expect("validated");
                let fa = dataset.activation(&t.a).expect("validated");
                let fb = dataset.activation(&t.b).expect("validated");
                fd.intersection_len(fa) + fd.intersection_len(fb)
            })
            .sum();
        Some(total as f64 / (2 * dataset.triples().len()) as f64)
    };
    Ok(ParamEstimate { alpha_hat, beta_hat })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKind {
    /// Composed concepts drawn with the composition model.
    Compositional,
    /// Composed concepts drawn independently of their components.
    Independent,
}

/// `triples` fresh triples `(a_i, b_i, d_i)` drawn from one seeded stream.
pub fn synthetic_dataset(
    params: ComposeParams,
    triples: usize,
    seed: u64,
    kind: SyntheticKind,
) -> Result<ActivationDataset, StatsError> {
    let mut rng = stream_rng(seed, 0);
    let mut composer = Composer::new(params)?;
    let mut rows = Vec::with_capacity(3 * triples);
    let mut comps = Vec::with_capacity(triples);
    for i in 0..triples {
        let a = sample_base_concept(&params, &mut rng)?;
        let b = sample_base_concept(&params, &mut rng)?;
        let d = match kind {
            SyntheticKind::Compositional => composer.sample(&a, &b, &mut rng)?.neurons,
            SyntheticKind::Independent => sample_base_concept(&params, &mut rng)?,
        };
        let names = [format!("a{i}"), format!("b{i}"), format!("d{i}")];
        comps.push(Composition {
            a: names[0].clone(),
            b: names[1].clone(),
            composed: names[2].clone(),
        });
        rows.extend(names.into_iter().zip([a, b, d]));
    }
    ActivationDataset::new(params.neuron_count, rows, comps)
}
