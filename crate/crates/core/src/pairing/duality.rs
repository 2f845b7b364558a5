//! The duality pairing: orbifold-weighted Leray volumes of the isoperimetric
//! polytopes of a catalog against the generating function of intersection
//! numbers.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::enumerate::{
    all_trivalent_maps, enumerate_triangulations, label_map, labelling_orbits, Catalog, EnumError, EnumOptions,
};
use super::tau::{generating_f, TauError, TauOptions};
use crate::measure::{incidence_matrix, leray_volume, LerayError};
use crate::numeric::rational::{q, Q};
use crate::ribbon::{aut_boundary, canonical_code, code_hex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Tau(#[from] TauError),
    #[error("volume of entry {index}: {source}")]
    Volume { index: usize, source: LerayError },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingTerm {
    pub code: String,
    #[serde(with = "crate::io::serde_q")]
    pub volume: Q,
    pub aut_order: usize,
    #[serde(with = "crate::io::serde_q")]
    pub contribution: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub genus: u32,
    pub vertices: usize,
    pub q: Vec<u32>,
    /// `2^(2N0+5g-5) Σ Vol / |Aut_∂|`.
    #[serde(with = "crate::io::serde_q")]
    pub lhs: Q,
    /// `F_g(q)`.
    #[serde(with = "crate::io::serde_q")]
    pub rhs: Q,
    pub equal: bool,
    pub breakdown: Vec<PairingTerm>,
    /// Filled when the two sides differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<PairingDiagnostics>,
}

/// The same left-hand side summed over every trivalent cell of the
/// combinatorial moduli space at perimeters `q`, loops and all boundary sizes
/// included, not only the duals of triangulations with curvature `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingDiagnostics {
    #[serde(with = "crate::io::serde_q")]
    pub all_cells_lhs: Q,
    pub all_cells_equal: bool,
    /// Cells outside the catalog with positive volume.
    pub extra_cells: Vec<PairingTerm>,
}

/// `2^(2N0+5g-5)` as a rational (the exponent is positive on every stable key).
pub fn pairing_prefactor(g: u32, n0: usize) -> Q {
    let e = 2 * n0 as i64 + 5 * g as i64 - 5;
    let p = Q::from_integer(num_bigint::BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// Left-hand side terms for an already enumerated catalog.
pub fn volume_terms(cat: &Catalog) -> Result<Vec<PairingTerm>, PairingError> {
    let rhs: Vec<Q> = cat.q.iter().map(|&x| q(x as i64)).collect();
    cat.entries
        .iter()
        .enumerate()
        .map(|(index, e)| {
            let sys = incidence_matrix(&e.graph).with_rhs(rhs.clone());
            let v = leray_volume(&sys).map_err(|source| PairingError::Volume { index, source })?;
            Ok(PairingTerm {
                code: e.code.clone(),
                contribution: &v.volume / q(e.aut_order as i64),
                volume: v.volume,
                aut_order: e.aut_order,
            })
        })
        .collect()
}

/// Volume terms of every labelled trivalent cell with positive volume at perimeters `q`.
pub fn all_cell_terms(g: u32, q_: &[u32], opts: EnumOptions) -> Result<Vec<PairingTerm>, PairingError> {
    let n0 = q_.len();
    let rhs: Vec<Q> = q_.iter().map(|&x| q(x as i64)).collect();
    let mut out = Vec::new();
    for map in all_trivalent_maps(g, n0, opts)? {
        for lab in labelling_orbits(&map, |_, _| true) {
            let graph = label_map(&map, &lab);
            let sys = incidence_matrix(&graph).with_rhs(rhs.clone());
            let index = out.len();
            let v = leray_volume(&sys).map_err(|source| PairingError::Volume { index, source })?;
            if v.volume.is_zero() {
                continue;
            }
            let aut_order = aut_boundary(&graph).order();
            out.push(PairingTerm {
                code: code_hex(&canonical_code(&graph)),
                contribution: &v.volume / q(aut_order as i64),
                volume: v.volume,
                aut_order,
            });
        }
    }
    out.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(out)
}

fn diagnostics(cat: &Catalog, rhs: &Q, opts: EnumOptions) -> Result<PairingDiagnostics, PairingError> {
    let terms = all_cell_terms(cat.genus, &cat.q, opts)?;
    let sum = terms.iter().fold(Q::zero(), |acc, t| acc + &t.contribution);
    let all_cells_lhs = pairing_prefactor(cat.genus, cat.vertices) * sum;
    let known: std::collections::BTreeSet<&str> = cat.entries.iter().map(|e| e.code.as_str()).collect();
    Ok(PairingDiagnostics {
        all_cells_equal: &all_cells_lhs == rhs,
        all_cells_lhs,
        extra_cells: terms.into_iter().filter(|t| !known.contains(t.code.as_str())).collect(),
    })
}

pub fn pairing_from_catalog(cat: &Catalog, opts: EnumOptions, tau: TauOptions) -> Result<PairingReport, PairingError> {
    let breakdown = volume_terms(cat)?;
    let sum = breakdown.iter().fold(Q::zero(), |acc, t| acc + &t.contribution);
    let lhs = pairing_prefactor(cat.genus, cat.vertices) * sum;
    let rhs = generating_f(cat.genus, &cat.q, tau)?;
    let equal = lhs == rhs;
    let diagnostics = if equal { None } else { Some(diagnostics(cat, &rhs, opts)?) };
    Ok(PairingReport {
        genus: cat.genus,
        vertices: cat.vertices,
        q: cat.q.clone(),
        equal,
        lhs,
        rhs,
        breakdown,
        diagnostics,
    })
}

pub fn duality_pairing(
    g: u32,
    n0: usize,
    q_: &[u32],
    opts: EnumOptions,
    tau: TauOptions,
) -> Result<PairingReport, PairingError> {
    let cat = enumerate_triangulations(g, n0, q_, opts)?;
    pairing_from_catalog(&cat, opts, tau)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityReport {
    pub cardinality: usize,
    /// `(1/Card) Σ Vol / |Aut_∂|`.
    #[serde(with = "crate::io::serde_q")]
    pub average_volume: Q,
    /// `Card · ⟨Vol⟩`.
    #[serde(with = "crate::io::serde_q")]
    pub product: Q,
    /// `F_g / 2^(2N0+5g-5)`.
    #[serde(with = "crate::io::serde_q")]
    pub expected: Q,
    pub equal: bool,
}

pub fn cardinality_and_average(
    g: u32,
    n0: usize,
    q_: &[u32],
    opts: EnumOptions,
    tau: TauOptions,
) -> Result<CardinalityReport, PairingError> {
    let cat = enumerate_triangulations(g, n0, q_, opts)?;
    let terms = volume_terms(&cat)?;
    let card = cat.cardinality();
    let product = terms.iter().fold(Q::zero(), |acc, t| acc + &t.contribution);
    let average_volume = if card == 0 { Q::zero() } else { &product / q(card as i64) };
    let expected = generating_f(g, q_, tau)? / pairing_prefactor(g, n0);
    Ok(CardinalityReport {
        cardinality: card,
        equal: product == expected,
        average_volume,
        product,
        expected,
    })
}
