//! JSON output shapes.  Everything is serialized from ordered
//! containers so identical runs print identical bytes.

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use serde::Serialize;

use cubecat_core::complex::CubeComplex;
use cubecat_core::homology::{
    graded_euler_characteristic, poly_map, HomologyEntry, LaurentPoly,
};

/// One homology group in one bidegree.
#[derive(Serialize)]
pub struct EntryDto {
    pub i: i64,
    pub j: i64,
    pub rank: usize,
    pub torsion: Vec<i64>,
}

pub fn entry_dtos(table: &[HomologyEntry]) -> Result<Vec<EntryDto>> {
    table
        .iter()
        .map(|e| {
            let torsion = e
                .torsion
                .iter()
                .map(|f| {
                    f.to_string()
                        .parse::<i64>()
                        .with_context(|| format!("torsion factor {f} exceeds i64"))
                })
                .collect::<Result<Vec<i64>>>()?;
            Ok(EntryDto { i: e.i, j: e.j, rank: e.rank, torsion })
        })
        .collect()
}

pub fn euler_map(p: &LaurentPoly) -> BTreeMap<String, i64> {
    poly_map(p)
}

/// `compute` output.
#[derive(Serialize)]
pub struct ComputeReport {
    pub theory: String,
    pub coefficients: String,
    pub diagram: String,
    pub entries: Vec<EntryDto>,
    pub euler: BTreeMap<String, i64>,
}

/// One diagram's row in `euler` output: the chain-level alternating sum
/// against the independent state sum.
#[derive(Serialize)]
pub struct EulerRow {
    pub diagram: String,
    pub name: String,
    pub theory: String,
    pub chain: BTreeMap<String, i64>,
    pub state_sum: BTreeMap<String, i64>,
    pub equal: bool,
}

#[derive(Serialize)]
pub struct EulerReport {
    pub results: Vec<EulerRow>,
    pub ok: bool,
}

pub fn chain_euler(cx: &CubeComplex) -> BTreeMap<String, i64> {
    euler_map(&graded_euler_characteristic(cx))
}

/// `verify --theorem 1` per-diagram certificate.
#[derive(Serialize)]
pub struct Theorem1Cert {
    pub name: String,
    pub edges_intertwine: bool,
    pub complex_level: bool,
    pub homology_match: [bool; 3],
    pub ok: bool,
}

/// `verify --theorem 2` output.
#[derive(Serialize)]
pub struct Theorem2Report {
    pub tuples_total: usize,
    pub tuples_valid: usize,
    pub expected_valid: usize,
    pub formula_match: bool,
    pub relations_equal_assembly: bool,
    pub orbit_sizes: BTreeMap<String, usize>,
    pub certificates: Vec<Theorem2Cert>,
    pub ok: bool,
}

/// One (diagram, sign tuple) isomorphism certificate.
#[derive(Serialize)]
pub struct Theorem2Cert {
    pub name: String,
    pub params_index: u16,
    pub via_phi: bool,
    pub orbit_consistent: bool,
    pub ok: bool,
}

/// `verify --theorem mod2` per-diagram certificate.
#[derive(Serialize)]
pub struct Mod2Cert {
    pub name: String,
    pub complexes_equal_mod2: bool,
    pub f2_tables_equal: bool,
    pub ok: bool,
}

/// `verify --theorem signs` per-diagram certificate.
#[derive(Serialize)]
pub struct SignsCert {
    pub name: String,
    pub pairs: usize,
    pub pairs_intertwined: usize,
    pub homology_checked: usize,
    pub ok: bool,
}

/// `verify --theorem outerface` per-diagram certificate.
#[derive(Serialize)]
pub struct OuterFaceCert {
    pub name: String,
    pub swept: bool,
    pub faces_checked: BTreeMap<String, usize>,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct VerifyReport<C: Serialize> {
    pub theorem: String,
    pub seed: u64,
    pub certificates: Vec<C>,
    pub ok: bool,
}

/// `verify-relations` per-(diagram, theory) report.
#[derive(Serialize)]
pub struct RelationReport {
    pub name: String,
    pub theory: String,
    pub faces: usize,
    pub class_counts: BTreeMap<String, usize>,
    pub violations: Vec<String>,
    pub three_cube_parities_even: bool,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct RelationsReport {
    pub reports: Vec<RelationReport>,
    pub ok: bool,
}

/// `classify-signs` output.
#[derive(Serialize)]
pub struct ClassifyReport {
    pub tuples_total: usize,
    pub tuples_valid: usize,
    pub expected_valid: usize,
    pub formula_match: bool,
    pub plus_orbit: usize,
    pub minus_orbit: usize,
    pub valid: Vec<ValidTuple>,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct ValidTuple {
    pub index: u16,
    /// Which of the four operation tables are negated relative to the
    /// plain member, in the order unnested merge, unnested split, nested
    /// merge, nested split.
    pub flipped_tables: [bool; 4],
    pub orbit: i8,
}
