//! Wire formats. Every document is a plain JSON object. Exact rationals are
//! `"p/q"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{build_triangulation, Label, Slot, Triangulation, TriangulationError};
use crate::pairing::enumerate::{Catalog, CatalogEntry};
use crate::ribbon::{boundary_cycles, RibbonError, RibbonGraph};

/// Bumped whenever a counting or labelling convention changes; cached
/// catalogs with another stamp are ignored.
pub const CONVENTION_VERSION: &str = "oriented-labelled-chiral/aut-orientation-preserving/phi=sigma.alpha/v1";
pub const CATALOG_SCHEMA: &str = "dt-regge/catalog/v1";
pub const REPORT_SCHEMA: &str = "dt-regge/report/v1";

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationJson {
    pub vertex_count: usize,
    pub faces: Vec<[Label; 3]>,
    pub gluing: Vec<[(usize, u8); 2]>,
}

impl From<&Triangulation> for TriangulationJson {
    fn from(t: &Triangulation) -> Self {
        TriangulationJson {
            vertex_count: t.vertex_count(),
            faces: t.faces().to_vec(),
            gluing: t
                .gluing()
                .iter()
                .map(|(a, b)| [(a.face, a.index), (b.face, b.index)])
                .collect(),
        }
    }
}

impl TryFrom<&TriangulationJson> for Triangulation {
    type Error = SchemaError;

    fn try_from(j: &TriangulationJson) -> Result<Self, SchemaError> {
        let gluing: Vec<(Slot, Slot)> = j
            .gluing
            .iter()
            .map(|[(f, i), (g, k)]| (Slot::new(*f, *i), Slot::new(*g, *k)))
            .collect();
        Ok(build_triangulation(j.vertex_count, j.faces.clone(), &gluing)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RibbonGraphJson {
    pub darts: usize,
    /// Vertex rotations as cycles.
    pub sigma: Vec<Vec<usize>>,
    /// Edges as dart pairs.
    pub alpha: Vec<[usize; 2]>,
    /// Boundary cycle index (cycles ordered by smallest dart) to vertex label.
    pub boundary_labels: BTreeMap<String, Label>,
}

impl From<&RibbonGraph> for RibbonGraphJson {
    fn from(g: &RibbonGraph) -> Self {
        RibbonGraphJson {
            darts: g.dart_count(),
            sigma: g.vertex_cycles(),
            alpha: (0..g.dart_count())
                .filter(|&d| d < g.alpha()[d])
                .map(|d| [d, g.alpha()[d]])
                .collect(),
            boundary_labels: boundary_cycles(g)
                .iter()
                .enumerate()
                .map(|(i, c)| (i.to_string(), c.label))
                .collect(),
        }
    }
}

fn permutation_from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>, SchemaError> {
    let mut p = vec![usize::MAX; n];
    for c in cycles {
        for (i, &d) in c.iter().enumerate() {
            if d >= n || p[d] != usize::MAX {
                return Err(SchemaError::Invalid(format!("dart {d} out of range or repeated in sigma")));
            }
            p[d] = c[(i + 1) % c.len()];
        }
    }
    if p.contains(&usize::MAX) {
        return Err(SchemaError::Invalid("sigma does not cover every dart".into()));
    }
    Ok(p)
}

impl TryFrom<&RibbonGraphJson> for RibbonGraph {
    type Error = SchemaError;

    fn try_from(j: &RibbonGraphJson) -> Result<Self, SchemaError> {
        let n = j.darts;
        let sigma = permutation_from_cycles(n, &j.sigma)?;
        let mut alpha = vec![usize::MAX; n];
        for &[a, b] in &j.alpha {
            if a >= n || b >= n || alpha[a] != usize::MAX || alpha[b] != usize::MAX || a == b {
                return Err(SchemaError::Invalid(format!("bad edge pair [{a}, {b}]")));
            }
            alpha[a] = b;
            alpha[b] = a;
        }
        if alpha.contains(&usize::MAX) {
            return Err(SchemaError::Invalid("alpha does not cover every dart".into()));
        }
        let mut labels = Vec::with_capacity(j.boundary_labels.len());
        for i in 0..j.boundary_labels.len() {
            let l = j
                .boundary_labels
                .get(&i.to_string())
                .ok_or_else(|| SchemaError::Invalid(format!("boundary_labels is missing cycle {i}")))?;
            labels.push(*l);
        }
        Ok(RibbonGraph::new(sigma, alpha, labels)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntryJson {
    pub triangulation: TriangulationJson,
    pub graph: RibbonGraphJson,
    pub aut_order: usize,
    pub code: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogJson {
    pub schema: String,
    pub convention: String,
    pub genus: u32,
    pub vertices: usize,
    pub q: Vec<u32>,
    pub cardinality: usize,
    pub entries: Vec<CatalogEntryJson>,
}

impl From<&Catalog> for CatalogJson {
    fn from(c: &Catalog) -> Self {
        CatalogJson {
            schema: CATALOG_SCHEMA.into(),
            convention: CONVENTION_VERSION.into(),
            genus: c.genus,
            vertices: c.vertices,
            q: c.q.clone(),
            cardinality: c.entries.len(),
            entries: c
                .entries
                .iter()
                .map(|e| CatalogEntryJson {
                    triangulation: (&e.triangulation).into(),
                    graph: (&e.graph).into(),
                    aut_order: e.aut_order,
                    code: e.code.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&CatalogJson> for Catalog {
    type Error = SchemaError;

    /// Structural decoding only; call [`Catalog::validate`] to re-check invariants.
    fn try_from(j: &CatalogJson) -> Result<Self, SchemaError> {
        if j.schema != CATALOG_SCHEMA {
            return Err(SchemaError::Invalid(format!("unknown catalog schema {:?}", j.schema)));
        }
        if j.cardinality != j.entries.len() {
            return Err(SchemaError::Invalid("cardinality does not match entry count".into()));
        }
        let entries = j
            .entries
            .iter()
            .map(|e| {
                Ok(CatalogEntry {
                    triangulation: (&e.triangulation).try_into()?,
                    graph: (&e.graph).try_into()?,
                    aut_order: e.aut_order,
                    code: e.code.clone(),
                })
            })
            .collect::<Result<Vec<_>, SchemaError>>()?;
        Ok(Catalog {
            genus: j.genus,
            vertices: j.vertices,
            q: j.q.clone(),
            entries,
        })
    }
}

pub fn triangulation_to_json(t: &Triangulation) -> String {
    serde_json::to_string_pretty(&TriangulationJson::from(t)).expect("serializable")
}

pub fn triangulation_from_json(s: &str) -> Result<Triangulation, SchemaError> {
    let j: TriangulationJson = serde_json::from_str(s)?;
    (&j).try_into()
}

pub fn ribbon_to_json(g: &RibbonGraph) -> String {
    serde_json::to_string_pretty(&RibbonGraphJson::from(g)).expect("serializable")
}

pub fn ribbon_from_json(s: &str) -> Result<RibbonGraph, SchemaError> {
    let j: RibbonGraphJson = serde_json::from_str(s)?;
    (&j).try_into()
}

pub fn catalog_to_json(c: &Catalog) -> String {
    serde_json::to_string_pretty(&CatalogJson::from(c)).expect("serializable")
}

/// Decode and re-validate a catalog.
pub fn catalog_from_json(s: &str) -> Result<Catalog, SchemaError> {
    let j: CatalogJson = serde_json::from_str(s)?;
    if j.convention != CONVENTION_VERSION {
        return Err(SchemaError::Invalid(format!("stale convention stamp {:?}", j.convention)));
    }
    let c: Catalog = (&j).try_into()?;
    c.validate().map_err(SchemaError::Invalid)?;
    Ok(c)
}

/// Versioned envelope for command output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub pass: bool,
    /// Wall-clock milliseconds per phase; the only nondeterministic field.
    #[serde(default)]
    pub timings_ms: BTreeMap<String, u64>,
}

impl RunReport {
    pub fn new(command: &str, inputs: serde_json::Value, results: serde_json::Value, pass: bool) -> Self {
        RunReport {
            schema: REPORT_SCHEMA.into(),
            command: command.into(),
            inputs,
            results,
            pass,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, SchemaError> {
        let r: RunReport = serde_json::from_str(s)?;
        if r.schema != REPORT_SCHEMA {
            return Err(SchemaError::Invalid(format!("unknown report schema {:?}", r.schema)));
        }
        Ok(r)
    }
}
