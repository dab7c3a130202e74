//! Machine-checked chain isomorphisms between the theories.
//!
//! Everything here reduces a structural claim to finite exact linear
//! algebra over the hypercube:
//!
//! * The nesting-aware complex is isomorphic to the plain one via the
//!   diagonal map that weights an X-label by the parity of its circle's
//!   nesting depth, corrected by one sign per cube vertex
//!   ([`verify_theorem1`]).
//! * Any two edge-sign solutions for one system differ by a vertex-sign
//!   coboundary, recovered and verified explicitly
//!   ([`verify_sign_equivalence`]).
//! * Of the 1024 ways to sprinkle signs over the four surgery tables,
//!   exactly 32 survive the relation checks, and each survivor's complex
//!   is certified isomorphic to the plain one ([`enumerate_sign_systems`],
//!   [`certify_sign_system`]).
//! * All theories collapse to literally equal complexes mod 2
//!   ([`compare_mod2`]), and homology does not depend on which region of
//!   the plane is declared outermost ([`verify_outer_face_invariance`]).
//!
//! The central tool is [`solve_diagonal_chain_map`]: given two signed
//! systems over one cube and a candidate diagonal map per vertex, it
//! compares the two composites over every edge, solves for the vertex
//! sign correction over F2, and then re-verifies the chain identity
//! edge by edge with exact arithmetic.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::complex::{
    assemble_complex, build_hypercube, build_hypercube_with_outer, solve_sign_assignment,
    ComplexError, CubeComplex, CubeEdge, Hypercube, SignAssignment,
};
use crate::diagram::LinkDiagram;
use crate::frobenius::{
    apply_edge_map, builtin_system, check_relations, compare_columns, parametrized_system,
    Element, FaceRelation, SignParams, System, Theory,
};
use crate::homology::{homology_table, Coeff, HomologyEntry};
use crate::matrix::{solve_f2, F2Equation, IntMat};
use crate::resolution::{ResolvedState, Word};
use crate::rng::SplitMix64;

/// The depth-parity sign of a labeling: -1 exactly when an odd number of
/// X-labeled circles sit at odd nesting depth.
pub fn phi_sign(state: &ResolvedState, mask: u64) -> i8 {
    let mut parity = 0usize;
    for (c, d) in state.depths().iter().enumerate() {
        if (mask >> c) & 1 == 1 {
            parity += d;
        }
    }
    if parity.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A vertexwise diagonal +-1 map on the cube's chain groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalMap {
    signs: BTreeMap<Word, Vec<i8>>,
}

impl DiagonalMap {
    pub fn from_fn(cube: &Hypercube, f: impl Fn(&ResolvedState, u64) -> i8) -> Self {
        let signs = cube
            .states()
            .iter()
            .map(|(&w, state)| {
                let per_mask: Vec<i8> = (0..1u64 << state.n_circles())
                    .map(|m| {
                        let s = f(state, m);
                        assert!(s == 1 || s == -1);
                        s
                    })
                    .collect();
                (w, per_mask)
            })
            .collect();
        DiagonalMap { signs }
    }

    pub fn identity(cube: &Hypercube) -> Self {
        Self::from_fn(cube, |_, _| 1)
    }

    pub fn sign(&self, word: Word, mask: u64) -> i8 {
        self.signs[&word][mask as usize]
    }

    /// Post-multiplies by one extra sign per vertex.
    pub fn twisted(&self, vertex: &BTreeMap<Word, i8>) -> DiagonalMap {
        let signs = self
            .signs
            .iter()
            .map(|(&w, per_mask)| {
                let v = vertex[&w];
                (w, per_mask.iter().map(|&s| s * v).collect())
            })
            .collect();
        DiagonalMap { signs }
    }

    fn apply(&self, word: Word, e: &Element) -> Element {
        let mut out = Element::zero();
        for (mask, t_pow, coeff) in e.terms() {
            out.add_term(mask, t_pow, coeff * self.sign(word, mask) as i64);
        }
        out
    }

    /// The diagonal matrix this map induces on one chain group.
    pub fn matrix_for(&self, cx: &CubeComplex, i: i64, j: i64) -> IntMat {
        let gens = cx.group(i, j);
        IntMat::from_triplets(
            gens.len(),
            gens.len(),
            gens.iter().enumerate().map(|(k, &(w, m))| (k, k, self.sign(w, m) as i64)),
        )
    }
}

/// The candidate vertex maps of the depth-parity isomorphism.
pub fn build_phi(cube: &Hypercube) -> DiagonalMap {
    DiagonalMap::from_fn(cube, phi_sign)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivError {
    Complex(ComplexError),
    /// The two composites over an edge are not equal up to one sign, so
    /// no vertex-sign correction of the base map can intertwine them.
    EdgeNotProportional { edge: CubeEdge },
    /// The per-edge sign requirements admit no global vertex assignment.
    NoVertexSigns,
}

impl From<ComplexError> for EquivError {
    fn from(e: ComplexError) -> Self {
        EquivError::Complex(e)
    }
}

impl core::fmt::Display for EquivError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EquivError::Complex(e) => write!(f, "{e}"),
            EquivError::EdgeNotProportional { edge } => {
                write!(f, "edge {edge:?}: composites not proportional")
            }
            EquivError::NoVertexSigns => write!(f, "no consistent vertex signs exist"),
        }
    }
}

impl core::error::Error for EquivError {}

/// One signed system over a cube: the edge maps and their global signs.
pub type Signed<'a> = (&'a System, &'a SignAssignment);

/// The two sides of the chain-map identity over one edge, as columns over
/// the tail basis: `base` after the source edge map, and the target edge
/// map after `base`.
fn edge_columns(
    cube: &Hypercube,
    source: Signed<'_>,
    target: Signed<'_>,
    base: &DiagonalMap,
    edge: CubeEdge,
) -> (Vec<Element>, Vec<Element>) {
    let (word, c) = edge;
    let head = word | (1 << c);
    let tail_state = cube.state(word);
    let saddle = cube.saddle(word, c);
    let n = tail_state.n_circles();
    let mut after_source = Vec::with_capacity(1 << n);
    let mut after_base = Vec::with_capacity(1 << n);
    for mask in 0..1u64 << n {
        let x = Element::basis(mask);
        let src = apply_edge_map(source.0, saddle, tail_state, &x)
            .scaled(source.1.eps(word, c) as i64);
        after_source.push(base.apply(head, &src));
        let bx = base.apply(word, &x);
        after_base
            .push(apply_edge_map(target.0, saddle, tail_state, &bx).scaled(target.1.eps(word, c) as i64));
    }
    (after_source, after_base)
}

/// The sign by which `base` fails to intertwine one edge of the two
/// signed systems: +1 if base o d_src = d_tgt o base on this edge, -1 if
/// they are opposite, `None` if neither (no diagonal correction exists).
pub fn edge_sigma(
    cube: &Hypercube,
    source: Signed<'_>,
    target: Signed<'_>,
    base: &DiagonalMap,
    edge: CubeEdge,
) -> Option<i8> {
    let (a, b) = edge_columns(cube, source, target, base, edge);
    match compare_columns(&a, &b) {
        Some(FaceRelation::Equal) => Some(1),
        Some(FaceRelation::Negated) => Some(-1),
        // an edge map of any system here is never the zero map, but a
        // conservative answer keeps the contract total
        Some(FaceRelation::BothZero) => Some(1),
        None => None,
    }
}

/// Finds vertex signs eta such that `eta * base` is a chain map from the
/// source signed system to the target one, then re-verifies the identity
/// over every edge by exact arithmetic.  Deterministic: free vertex signs
/// resolve to +1 in word order.
pub fn solve_diagonal_chain_map(
    cube: &Hypercube,
    source: Signed<'_>,
    target: Signed<'_>,
    base: &DiagonalMap,
) -> Result<DiagonalMap, EquivError> {
    let n = cube.n_crossings();
    let mut eqs = Vec::new();
    for edge in cube.edges() {
        let sigma = edge_sigma(cube, source, target, base, edge)
            .ok_or(EquivError::EdgeNotProportional { edge })?;
        let (word, c) = edge;
        // eta(tail) * eta(head) must equal sigma
        eqs.push(F2Equation {
            vars: alloc::vec![word as usize, (word | (1 << c)) as usize],
            rhs: sigma < 0,
        });
    }
    let sol = solve_f2(1usize << n, &eqs).ok_or(EquivError::NoVertexSigns)?;
    let vertex: BTreeMap<Word, i8> =
        (0..1u32 << n).map(|w| (w, if sol[w as usize] { -1 } else { 1 })).collect();
    let psi = base.twisted(&vertex);

    // independent re-verification: psi o d_src == d_tgt o psi, column by
    // column, with no sign tolerance
    for edge in cube.edges() {
        let (a, b) = edge_columns(cube, source, target, &psi, edge);
        if a != b {
            return Err(EquivError::NoVertexSigns);
        }
    }
    Ok(psi)
}

/// The complex-level chain-map identity: for every bigrading,
/// d_tgt Psi = Psi d_src as exact integer matrices.
pub fn chain_map_commutes(src: &CubeComplex, tgt: &CubeComplex, psi: &DiagonalMap) -> bool {
    if src.gradings() != tgt.gradings() {
        return false;
    }
    for (i, j) in src.gradings() {
        if src.group(i, j) != tgt.group(i, j) {
            return false;
        }
        let lhs = tgt.diff(i, j).mul(&psi.matrix_for(src, i, j));
        let rhs = psi.matrix_for(src, i + 1, j).mul(&src.diff(i, j));
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Everything one isomorphism certificate asserts; every field must hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    /// The vertex-sign solve succeeded and every edge identity re-verified.
    pub edges_intertwine: bool,
    /// The matrix-level identity d Psi = Psi d holds in every bigrading.
    pub complex_level: bool,
    /// Homology tables agree over Z, Q, and F2.
    pub homology_match: [bool; 3],
}

impl IsoReport {
    pub fn all_ok(&self) -> bool {
        self.edges_intertwine && self.complex_level && self.homology_match.iter().all(|&b| b)
    }
}

fn certify_iso(
    diagram: &LinkDiagram,
    cube: &Hypercube,
    source: Signed<'_>,
    target: Signed<'_>,
    base: &DiagonalMap,
) -> Result<(DiagonalMap, IsoReport), EquivError> {
    let psi = solve_diagonal_chain_map(cube, source, target, base)?;
    let src_cx = assemble_complex(diagram, source.0, cube, source.1);
    let tgt_cx = assemble_complex(diagram, target.0, cube, target.1);
    let complex_level = chain_map_commutes(&src_cx, &tgt_cx, &psi);
    let homology_match = [Coeff::Z, Coeff::Q, Coeff::F2]
        .map(|c| homology_table(&src_cx, c) == homology_table(&tgt_cx, c));
    Ok((psi, IsoReport { edges_intertwine: true, complex_level, homology_match }))
}

/// Certifies that the nesting-aware complex of the diagram is isomorphic
/// to the plain one via depth-parity vertex maps.
pub fn verify_theorem1(diagram: &LinkDiagram) -> Result<IsoReport, EquivError> {
    let cube = build_hypercube(diagram);
    let nested = builtin_system(Theory::Nested);
    let plain = builtin_system(Theory::Khovanov);
    let eps_n = solve_sign_assignment(&nested, &cube)?;
    let eps_k = solve_sign_assignment(&plain, &cube)?;
    let phi = build_phi(&cube);
    let (_, report) = certify_iso(diagram, &cube, (&nested, &eps_n), (&plain, &eps_k), &phi)?;
    Ok(report)
}

/// Multiplies the assignment by the coboundary of random vertex signs;
/// the result satisfies exactly the same face parities.
pub fn random_coboundary_twist(
    cube: &Hypercube,
    eps: &SignAssignment,
    rng: &mut SplitMix64,
) -> SignAssignment {
    let n = cube.n_crossings();
    let mu: BTreeMap<Word, i8> =
        (0..1u32 << n).map(|w| (w, if rng.coin() { -1 } else { 1 })).collect();
    let twisted = cube
        .edges()
        .map(|(w, c)| ((w, c), eps.eps(w, c) * mu[&w] * mu[&(w | (1 << c))]))
        .collect();
    SignAssignment::from_map(twisted)
}

/// Certifies that two edge-sign solutions for one system give isomorphic
/// complexes via a vertex-sign coboundary (recovered by the generic
/// solver with the identity base map).
pub fn verify_sign_equivalence(
    diagram: &LinkDiagram,
    system: &System,
    cube: &Hypercube,
    eps1: &SignAssignment,
    eps2: &SignAssignment,
) -> Result<IsoReport, EquivError> {
    let id = DiagonalMap::identity(cube);
    let (_, report) = certify_iso(diagram, cube, (system, eps1), (system, eps2), &id)?;
    Ok(report)
}

/// The verdict on one sign tuple: whether every square face of every
/// battery cube closes up to sign, and whether complexes then assemble
/// with d^2 = 0 throughout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSystemVerdict {
    pub params: SignParams,
    pub relations_ok: bool,
    pub complexes_ok: bool,
}

impl SignSystemVerdict {
    pub fn valid(&self) -> bool {
        self.relations_ok && self.complexes_ok
    }
}

/// Judges all 1024 sign tuples against a battery of diagrams.  Tuples
/// failing the face relations are not asked to assemble.
pub fn enumerate_sign_systems(battery: &[LinkDiagram]) -> Vec<SignSystemVerdict> {
    (0..1024u16)
        .map(|idx| {
            let params = SignParams::from_index(idx);
            let system = parametrized_system(params);
            let relations_ok = check_relations(&system, battery).is_empty();
            let complexes_ok = relations_ok
                && battery.iter().all(|d| {
                    let cube = build_hypercube(d);
                    match solve_sign_assignment(&system, &cube) {
                        Ok(signs) => {
                            assemble_complex(d, &system, &cube, &signs).d_squared_is_zero()
                        }
                        Err(_) => false,
                    }
                });
            SignSystemVerdict { params, relations_ok, complexes_ok }
        })
        .collect()
}

/// A certificate tying one valid sign tuple to the plain theory on one
/// diagram: which base map worked and the full isomorphism report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSystemCertificate {
    pub params: SignParams,
    /// False: the identity base sufficed (plain-side orbit).  True: the
    /// depth-parity base was required (nested-side orbit).
    pub via_phi: bool,
    pub report: IsoReport,
}

/// Certifies the tuple's complex isomorphic to the plain parametrized
/// member's on the given diagram, trying the identity base first and the
/// depth-parity base second.
pub fn certify_sign_system(
    diagram: &LinkDiagram,
    params: SignParams,
) -> Result<SignSystemCertificate, EquivError> {
    let cube = build_hypercube(diagram);
    let system = parametrized_system(params);
    let plain = parametrized_system(SignParams::khovanov());
    let eps_s = solve_sign_assignment(&system, &cube)?;
    let eps_p = solve_sign_assignment(&plain, &cube)?;
    let id = DiagonalMap::identity(&cube);
    match certify_iso(diagram, &cube, (&system, &eps_s), (&plain, &eps_p), &id) {
        Ok((_, report)) => Ok(SignSystemCertificate { params, via_phi: false, report }),
        Err(EquivError::EdgeNotProportional { .. }) => {
            let phi = build_phi(&cube);
            let (_, report) =
                certify_iso(diagram, &cube, (&system, &eps_s), (&plain, &eps_p), &phi)?;
            Ok(SignSystemCertificate { params, via_phi: true, report })
        }
        Err(e) => Err(e),
    }
}

/// True when both complexes have identical groups and entrywise congruent
/// differentials mod 2.
pub fn compare_mod2(a: &CubeComplex, b: &CubeComplex) -> bool {
    if a.gradings() != b.gradings() {
        return false;
    }
    for (i, j) in a.gradings() {
        if a.group(i, j) != b.group(i, j) {
            return false;
        }
        let reduce = |m: &IntMat| -> BTreeMap<(usize, usize), u8> {
            m.triplets()
                .filter(|&(_, _, v)| v.rem_euclid(2) == 1)
                .map(|(r, c, _)| ((r, c), 1))
                .collect()
        };
        if reduce(&a.diff(i, j)) != reduce(&b.diff(i, j)) {
            return false;
        }
    }
    true
}

/// Outcome of recomputing one theory's homology for every admissible
/// choice of outermost region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterFaceReport {
    pub faces_checked: usize,
    pub tables_match: bool,
}

/// Recomputes homology over Z with each face of a connected diagram
/// declared outermost; split diagrams are checked only at their default
/// (the side-by-side placement fixes the unbounded region).
pub fn verify_outer_face_invariance(
    diagram: &LinkDiagram,
    theory: Theory,
) -> Result<OuterFaceReport, EquivError> {
    let system = builtin_system(theory);
    let table_for = |cube: &Hypercube| -> Result<Vec<HomologyEntry>, EquivError> {
        let signs = solve_sign_assignment(&system, cube)?;
        let cx = assemble_complex(diagram, &system, cube, &signs);
        Ok(homology_table(&cx, Coeff::Z))
    };
    let reference = table_for(&build_hypercube(diagram))?;
    if diagram.graph_components() != 1 || diagram.free_loops() > 0 {
        return Ok(OuterFaceReport { faces_checked: 1, tables_match: true });
    }
    let mut tables_match = true;
    for face in 0..diagram.n_faces() {
        let cube = build_hypercube_with_outer(diagram, face);
        if table_for(&cube)? != reference {
            tables_match = false;
        }
    }
    Ok(OuterFaceReport { faces_checked: diagram.n_faces(), tables_match })
}
