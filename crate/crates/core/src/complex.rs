//! From a diagram to a graded chain complex.
//!
//! The 2^n resolved states of an n-crossing diagram form a hypercube whose
//! edges are saddles.  Each theory turns a saddle into a module map; a
//! square face of the cube either commutes, anticommutes, or has both
//! composites zero.  A global sign `eps` on the edges must make every face
//! anticommute, so that the total map squares to zero; the required parity
//! per face is solved over F2.  The signed maps are then grouped by
//! bigrading into integer matrices.
//!
//! Gradings: an edge raises the cube weight k by one; the homological
//! grading is i = k - n_minus and the internal grading of a labeling is
//! shifted to j = deg + k + n_plus - 2 n_minus, which every edge map
//! preserves (checked during assembly).  The complex keeps t = 0: terms
//! carrying t are dropped when matrices are extracted.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::LinkDiagram;
use crate::frobenius::{
    apply_edge_map, compare_columns, labeling_degree, Element, FaceRelation, System, Theory,
};
use crate::matrix::{solve_f2, F2Equation, IntMat};
use crate::resolution::{
    classify_saddle, resolve, resolve_with_outer, ResolvedState, SaddleData, SaddleKind, Word,
};

/// All resolved states of a diagram and the saddle over every cube edge.
#[derive(Clone, Debug)]
pub struct Hypercube {
    n: usize,
    states: BTreeMap<Word, ResolvedState>,
    saddles: BTreeMap<CubeEdge, SaddleData>,
}

/// A cube edge: the tail word and the crossing being raised.
pub type CubeEdge = (Word, usize);

impl Hypercube {
    pub fn n_crossings(&self) -> usize {
        self.n
    }

    pub fn state(&self, word: Word) -> &ResolvedState {
        &self.states[&word]
    }

    pub fn states(&self) -> &BTreeMap<Word, ResolvedState> {
        &self.states
    }

    /// The saddle over the edge raising `crossing` from the tail `word`.
    pub fn saddle(&self, word: Word, crossing: usize) -> &SaddleData {
        &self.saddles[&(word, crossing)]
    }

    /// Cube edges in lexicographic (word, crossing) order.
    pub fn edges(&self) -> impl Iterator<Item = CubeEdge> + '_ {
        self.saddles.keys().copied()
    }

    /// Square faces (word, low crossing, high crossing), lexicographically.
    pub fn faces(&self) -> Vec<(Word, usize, usize)> {
        let mut out = Vec::new();
        for word in 0..1u32 << self.n {
            for i in 0..self.n {
                if (word >> i) & 1 == 1 {
                    continue;
                }
                for j in i + 1..self.n {
                    if (word >> j) & 1 == 0 {
                        out.push((word, i, j));
                    }
                }
            }
        }
        out
    }
}

fn build_with(diagram: &LinkDiagram, res: impl Fn(Word) -> ResolvedState) -> Hypercube {
    let n = diagram.n_crossings();
    let states: BTreeMap<Word, ResolvedState> = (0..1u32 << n).map(|w| (w, res(w))).collect();
    let mut saddles = BTreeMap::new();
    for word in 0..1u32 << n {
        for c in 0..n {
            if (word >> c) & 1 == 1 {
                continue;
            }
            let head = word | (1 << c);
            let saddle = classify_saddle(&states[&word], &states[&head], c);
            let (tc, hc) = (states[&word].n_circles(), states[&head].n_circles());
            assert_eq!(
                tc.abs_diff(hc),
                1,
                "a saddle changes the circle count by one"
            );
            saddles.insert((word, c), saddle);
        }
    }
    Hypercube { n, states, saddles }
}

/// Resolves every word with the diagram's default outer face.
pub fn build_hypercube(diagram: &LinkDiagram) -> Hypercube {
    build_with(diagram, |w| resolve(diagram, w))
}

/// Resolves every word rooting the nesting forest at the given face.
pub fn build_hypercube_with_outer(diagram: &LinkDiagram, outer: usize) -> Hypercube {
    build_with(diagram, |w| resolve_with_outer(diagram, w, outer))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexError {
    /// The two composites around a face are neither equal nor opposite:
    /// the system does not define a complex on this cube.
    MixedFace { word: Word, crossings: (usize, usize) },
    /// Face parities admit no global edge-sign solution.
    UnsolvableSigns,
}

impl core::fmt::Display for ComplexError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ComplexError::MixedFace { word, crossings } => write!(
                f,
                "face at word {word:#b}, crossings {crossings:?}: composites disagree beyond sign"
            ),
            ComplexError::UnsolvableSigns => write!(f, "no consistent edge signs exist"),
        }
    }
}

impl core::error::Error for ComplexError {}

/// Both composite maps around the face with tail `word` and free crossings
/// `i`, `j`, as columns over the tail basis: first i-then-j, then j-then-i.
pub fn face_maps(
    system: &System,
    cube: &Hypercube,
    word: Word,
    i: usize,
    j: usize,
) -> (Vec<Element>, Vec<Element>) {
    let tail = cube.state(word);
    let route = |first: usize, second: usize| -> Vec<Element> {
        let mid = cube.state(word | (1 << first));
        let s1 = cube.saddle(word, first);
        let s2 = cube.saddle(word | (1 << first), second);
        (0..1u64 << tail.n_circles())
            .map(|mask| {
                let once = apply_edge_map(system, s1, tail, &Element::basis(mask));
                apply_edge_map(system, s2, mid, &once)
            })
            .collect()
    };
    (route(i, j), route(j, i))
}

/// The face's parity requirement: `Some(true)` if the signed edges around
/// it must multiply to -1 (composites equal), `Some(false)` if to +1
/// (composites opposite), `None` if both composites vanish (no
/// constraint).
pub fn face_cocycle(
    system: &System,
    cube: &Hypercube,
    word: Word,
    i: usize,
    j: usize,
) -> Result<Option<bool>, ComplexError> {
    let (fg, gf) = face_maps(system, cube, word, i, j);
    match compare_columns(&fg, &gf) {
        Some(FaceRelation::BothZero) => Ok(None),
        Some(FaceRelation::Equal) => Ok(Some(true)),
        Some(FaceRelation::Negated) => Ok(Some(false)),
        None => Err(ComplexError::MixedFace { word, crossings: (i, j) }),
    }
}

/// The local shape of a square face: how the two surgery arcs meet the
/// circles of the corner state where both crossings are unresolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FaceClass {
    /// Two merge arcs touching four distinct circles.
    DisjointMerges,
    /// A merge arc and a split arc on disjoint circles.
    DisjointMixed,
    /// Two split arcs on distinct circles.
    DisjointSplits,
    /// Two merge arcs sharing one circle: three circles become one.
    Associativity,
    /// Two split arcs on one circle, non-interleaved: one circle becomes
    /// three.
    Coassociativity,
    /// A split arc on a circle joined to another by a merge arc.
    FrobeniusMix,
    /// Two merge arcs between the same two circles; either order merges
    /// and then splits back, and the two splits name the offspring pair
    /// through their pockets in the same order.
    SidewaysAligned,
    /// As [`FaceClass::SidewaysAligned`], but the two splits name the
    /// offspring pair in opposite orders (a planar ladder versus an
    /// annular one).
    SidewaysReversed,
    /// Two interleaved split arcs on one circle; either order splits and
    /// then remerges, through a nested pocket one way and an unnested one
    /// the other.
    Interleaved,
}

/// Classifies the face from the corner saddles alone.
pub fn classify_face(cube: &Hypercube, word: Word, i: usize, j: usize) -> FaceClass {
    let a = cube.saddle(word, i);
    let b = cube.saddle(word, j);
    let shared = a
        .tail_active
        .iter()
        .filter(|c| b.tail_active.contains(c))
        .count();
    match (a.tail_active.len(), b.tail_active.len(), shared) {
        (_, _, 0) => match (&a.kind, &b.kind) {
            (SaddleKind::Merge, SaddleKind::Merge) => FaceClass::DisjointMerges,
            (SaddleKind::Split, SaddleKind::Split) => FaceClass::DisjointSplits,
            _ => FaceClass::DisjointMixed,
        },
        (1, 1, 1) => match cube.saddle(word | (1 << i), j).kind {
            SaddleKind::Merge => FaceClass::Interleaved,
            SaddleKind::Split => FaceClass::Coassociativity,
        },
        (2, 2, 2) => {
            let after_i = &cube.saddle(word | (1 << i), j).head_active;
            let after_j = &cube.saddle(word | (1 << j), i).head_active;
            debug_assert!(
                after_i == after_j
                    || (after_i[0] == after_j[1] && after_i[1] == after_j[0])
            );
            if after_i == after_j {
                FaceClass::SidewaysAligned
            } else {
                FaceClass::SidewaysReversed
            }
        }
        (2, 2, 1) => FaceClass::Associativity,
        _ => FaceClass::FrobeniusMix,
    }
}

/// The face relation each theory's surgery rules force for each face
/// shape: the plain theory always commutes; the nesting-aware one
/// anticommutes exactly on interleaved faces; the exterior one follows
/// its graded commutation pattern, with interleaved composites vanishing.
pub fn expected_face_relation(theory: Theory, class: FaceClass) -> FaceRelation {
    match theory {
        Theory::Khovanov => FaceRelation::Equal,
        Theory::Nested => match class {
            FaceClass::Interleaved => FaceRelation::Negated,
            _ => FaceRelation::Equal,
        },
        Theory::Odd => match class {
            FaceClass::DisjointMerges
            | FaceClass::DisjointMixed
            | FaceClass::Associativity
            | FaceClass::FrobeniusMix
            | FaceClass::SidewaysAligned => FaceRelation::Equal,
            FaceClass::DisjointSplits
            | FaceClass::Coassociativity
            | FaceClass::SidewaysReversed => FaceRelation::Negated,
            FaceClass::Interleaved => FaceRelation::BothZero,
        },
    }
}

/// One audited face: its shape, the relation the theory's tables should
/// produce there, and the relation actually measured from the composites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceAudit {
    pub word: Word,
    pub crossings: (usize, usize),
    pub class: FaceClass,
    pub expected: FaceRelation,
    /// `None` when the two composites are not even proportional.
    pub measured: Option<FaceRelation>,
}

impl FaceAudit {
    pub fn ok(&self) -> bool {
        self.measured == Some(self.expected)
    }
}

/// Measures every face of the cube against the expected sign pattern.
pub fn audit_faces(system: &System, theory: Theory, cube: &Hypercube) -> Vec<FaceAudit> {
    cube.faces()
        .into_iter()
        .map(|(word, i, j)| {
            let class = classify_face(cube, word, i, j);
            let (fg, gf) = face_maps(system, cube, word, i, j);
            FaceAudit {
                word,
                crossings: (i, j),
                class,
                expected: expected_face_relation(theory, class),
                measured: compare_columns(&fg, &gf),
            }
        })
        .collect()
}

/// The number of anticommutative faces on each 3-dimensional subcube.
/// The face record extends to a sign assignment exactly when each count
/// is even (faces with vanishing composites never count).
pub fn three_cube_parities(
    system: &System,
    cube: &Hypercube,
) -> Result<Vec<usize>, ComplexError> {
    let n = cube.n_crossings();
    let mut out = Vec::new();
    for word in 0..1u32 << n {
        for a in 0..n {
            if (word >> a) & 1 == 1 {
                continue;
            }
            for b in a + 1..n {
                if (word >> b) & 1 == 1 {
                    continue;
                }
                for c in b + 1..n {
                    if (word >> c) & 1 == 1 {
                        continue;
                    }
                    let mut anti = 0usize;
                    for (x, y, fixed) in [(a, b, c), (a, c, b), (b, c, a)] {
                        for corner in [word, word | (1 << fixed)] {
                            if face_cocycle(system, cube, corner, x, y)? == Some(false) {
                                anti += 1;
                            }
                        }
                    }
                    out.push(anti);
                }
            }
        }
    }
    Ok(out)
}

/// A sign for every cube edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAssignment {
    eps: BTreeMap<CubeEdge, i8>,
}

impl SignAssignment {
    pub fn eps(&self, word: Word, crossing: usize) -> i8 {
        self.eps[&(word, crossing)]
    }

    pub fn from_map(eps: BTreeMap<CubeEdge, i8>) -> Self {
        assert!(eps.values().all(|&s| s == 1 || s == -1));
        SignAssignment { eps }
    }

    pub fn entries(&self) -> impl Iterator<Item = (CubeEdge, i8)> + '_ {
        self.eps.iter().map(|(&k, &v)| (k, v))
    }
}

/// The classical checkerboard rule: negate for each chosen crossing below
/// the raised one.
pub fn standard_signs(cube: &Hypercube) -> SignAssignment {
    let eps = cube
        .edges()
        .map(|(w, c)| {
            let below = (w & ((1u32 << c) - 1)).count_ones();
            ((w, c), if below.is_multiple_of(2) { 1 } else { -1 })
        })
        .collect();
    SignAssignment { eps }
}

fn face_equations(
    system: &System,
    cube: &Hypercube,
) -> Result<(Vec<CubeEdge>, Vec<F2Equation>), ComplexError> {
    let edge_list: Vec<CubeEdge> = cube.edges().collect();
    let edge_index: BTreeMap<CubeEdge, usize> =
        edge_list.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut eqs = Vec::new();
    for (word, i, j) in cube.faces() {
        let Some(needs_odd) = face_cocycle(system, cube, word, i, j)? else { continue };
        let vars = vec![
            edge_index[&(word, i)],
            edge_index[&(word | (1 << i), j)],
            edge_index[&(word, j)],
            edge_index[&(word | (1 << j), i)],
        ];
        eqs.push(F2Equation { vars, rhs: needs_odd });
    }
    Ok((edge_list, eqs))
}

/// Solves for edge signs making every face anticommute.  Deterministic:
/// free choices resolve to +1 in lexicographic edge order.
pub fn solve_sign_assignment(
    system: &System,
    cube: &Hypercube,
) -> Result<SignAssignment, ComplexError> {
    let (edge_list, eqs) = face_equations(system, cube)?;
    let sol = solve_f2(edge_list.len(), &eqs).ok_or(ComplexError::UnsolvableSigns)?;
    let eps = edge_list
        .into_iter()
        .zip(sol)
        .map(|(e, neg)| (e, if neg { -1 } else { 1 }))
        .collect();
    Ok(SignAssignment { eps })
}

/// Whether the given signs satisfy every face's parity requirement.
pub fn assignment_valid(
    system: &System,
    cube: &Hypercube,
    signs: &SignAssignment,
) -> Result<bool, ComplexError> {
    for (word, i, j) in cube.faces() {
        let Some(needs_odd) = face_cocycle(system, cube, word, i, j)? else { continue };
        let product = signs.eps(word, i)
            * signs.eps(word | (1 << i), j)
            * signs.eps(word, j)
            * signs.eps(word | (1 << j), i);
        if (product < 0) != needs_odd {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A chain generator: a resolved word and the X-labeling of its circles.
pub type Generator = (Word, u64);

/// The assembled bigraded complex: generators grouped by (i, j) and one
/// integer matrix per differential d: (i, j) -> (i+1, j).
#[derive(Clone, Debug)]
pub struct CubeComplex {
    groups: BTreeMap<(i64, i64), Vec<Generator>>,
    index: BTreeMap<Generator, (i64, i64, usize)>,
    diffs: BTreeMap<(i64, i64), IntMat>,
}

impl CubeComplex {
    /// The bigradings carrying at least one generator, sorted.
    pub fn gradings(&self) -> Vec<(i64, i64)> {
        self.groups.keys().copied().collect()
    }

    pub fn group(&self, i: i64, j: i64) -> &[Generator] {
        self.groups.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rank(&self, i: i64, j: i64) -> usize {
        self.group(i, j).len()
    }

    /// The matrix of d: (i, j) -> (i+1, j); rows index the target group.
    pub fn diff(&self, i: i64, j: i64) -> IntMat {
        match self.diffs.get(&(i, j)) {
            Some(m) => m.clone(),
            None => IntMat::zero(self.rank(i + 1, j), self.rank(i, j)),
        }
    }

    pub fn position(&self, g: Generator) -> Option<(i64, i64, usize)> {
        self.index.get(&g).copied()
    }

    /// Exact check that consecutive differentials compose to zero.
    pub fn d_squared_is_zero(&self) -> bool {
        self.gradings().into_iter().all(|(i, j)| {
            let a = self.diff(i, j);
            let b = self.diff(i + 1, j);
            b.mul(&a).is_zero()
        })
    }
}

/// Groups the cube's generators by bigrading and fills in the signed
/// differential matrices (with t = 0).
pub fn assemble_complex(
    diagram: &LinkDiagram,
    system: &System,
    cube: &Hypercube,
    signs: &SignAssignment,
) -> CubeComplex {
    let n_plus = diagram.positive_crossings() as i64;
    let n_minus = diagram.negative_crossings() as i64;
    let grading_of = |word: Word, mask: u64, n_circles: usize| -> (i64, i64) {
        let k = word.count_ones() as i64;
        let deg = labeling_degree(mask, n_circles, 0);
        (k - n_minus, deg + k + n_plus - 2 * n_minus)
    };

    let mut groups: BTreeMap<(i64, i64), Vec<Generator>> = BTreeMap::new();
    for (&word, state) in cube.states() {
        for mask in 0..1u64 << state.n_circles() {
            let key = grading_of(word, mask, state.n_circles());
            groups.entry(key).or_default().push((word, mask));
        }
    }
    let mut index = BTreeMap::new();
    for (&(i, j), gens) in &groups {
        for (pos, &g) in gens.iter().enumerate() {
            index.insert(g, (i, j, pos));
        }
    }

    type Triplets = Vec<(usize, usize, i64)>;
    let mut diffs: BTreeMap<(i64, i64), Triplets> = BTreeMap::new();
    for (word, c) in cube.edges() {
        let tail = cube.state(word);
        let saddle = cube.saddle(word, c);
        let eps = signs.eps(word, c) as i64;
        for mask in 0..1u64 << tail.n_circles() {
            let (i, j, col) = index[&(word, mask)];
            let image = apply_edge_map(system, saddle, tail, &Element::basis(mask));
            for (out_mask, t_pow, coeff) in image.terms() {
                if t_pow != 0 {
                    continue;
                }
                let (ti, tj, row) = index[&(word | (1 << c), out_mask)];
                assert_eq!((ti, tj), (i + 1, j), "edge maps preserve the shifted grading");
                diffs.entry((i, j)).or_default().push((row, col, eps * coeff));
            }
        }
    }

    let diffs = diffs
        .into_iter()
        .map(|((i, j), entries)| {
            let rows = groups.get(&(i + 1, j)).map_or(0, Vec::len);
            let cols = groups[&(i, j)].len();
            ((i, j), IntMat::from_triplets(rows, cols, entries))
        })
        .collect();

    CubeComplex { groups, index, diffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{bundled, by_name};
    use crate::frobenius::{builtin_system, parametrized_system, SignParams, Theory};

    fn complex_for(name: &str, theory: Theory) -> CubeComplex {
        let d = by_name(name).unwrap();
        let system = builtin_system(theory);
        let cube = build_hypercube(&d);
        let signs = solve_sign_assignment(&system, &cube).unwrap();
        assemble_complex(&d, &system, &cube, &signs)
    }

    #[test]
    fn trefoil_chain_ranks() {
        let cx = complex_for("trefoil", Theory::Khovanov);
        let by_i = |i: i64| -> usize {
            cx.gradings().iter().filter(|&&(gi, _)| gi == i).map(|&(gi, gj)| cx.rank(gi, gj)).sum()
        };
        // left-handed: homological gradings -3..0
        assert_eq!(by_i(-3), 8);
        assert_eq!(by_i(-2), 12);
        assert_eq!(by_i(-1), 6);
        assert_eq!(by_i(0), 4);
        assert!(cx.d_squared_is_zero());
    }

    #[test]
    fn standard_rule_fits_the_plain_theory() {
        for name in ["hopf", "trefoil", "fig8", "t2-4"] {
            let d = by_name(name).unwrap();
            let cube = build_hypercube(&d);
            let system = builtin_system(Theory::Khovanov);
            assert_eq!(assignment_valid(&system, &cube, &standard_signs(&cube)), Ok(true));
        }
    }

    #[test]
    fn all_theories_square_to_zero_across_presentations() {
        for name in ["r2-unknot", "hopf", "trefoil", "trefoil-kink", "fig8", "k5-2"] {
            for theory in [Theory::Khovanov, Theory::Nested, Theory::Odd] {
                let cx = complex_for(name, theory);
                assert!(cx.d_squared_is_zero(), "{name} / {theory}");
            }
        }
    }

    #[test]
    fn split_diagrams_assemble() {
        for name in ["unknot", "unlink2", "trefoil+unknot", "unlink-clasp"] {
            let cx = complex_for(name, Theory::Khovanov);
            assert!(cx.d_squared_is_zero(), "{name}");
        }
        let unknot = complex_for("unknot", Theory::Odd);
        assert_eq!(unknot.gradings(), vec![(0, -1), (0, 1)]);
        assert_eq!(unknot.rank(0, -1), 1);
        assert_eq!(unknot.rank(0, 1), 1);
    }

    #[test]
    fn nested_cube_needs_nonstandard_signs() {
        // splitting a circle into a nested pair and merging it back picks
        // up one sign twist, so the clasp presentation of the two-unlink
        // has an anticommuting face and rejects the checkerboard rule
        let d = by_name("unlink-clasp").unwrap();
        let cube = build_hypercube(&d);
        let system = builtin_system(Theory::Nested);
        assert_eq!(face_cocycle(&system, &cube, 0, 0, 1), Ok(Some(false)));
        assert_eq!(assignment_valid(&system, &cube, &standard_signs(&cube)), Ok(false));
        let signs = solve_sign_assignment(&system, &cube).unwrap();
        assert_eq!(assignment_valid(&system, &cube, &signs), Ok(true));
        let cx = assemble_complex(&d, &system, &cube, &signs);
        assert!(cx.d_squared_is_zero());
        // away from such configurations the checkerboard rule still fits
        let trefoil = by_name("trefoil").unwrap();
        let tcube = build_hypercube(&trefoil);
        assert_eq!(assignment_valid(&system, &tcube, &standard_signs(&tcube)), Ok(true));
    }

    #[test]
    fn odd_cube_anticommutes_and_solves() {
        // double splits anticommute in the exterior theory, so the
        // figure-eight cube mixes commuting and anticommuting faces
        let d = by_name("fig8").unwrap();
        let cube = build_hypercube(&d);
        let system = builtin_system(Theory::Odd);
        let mut negated = 0;
        for (w, i, j) in cube.faces() {
            if face_cocycle(&system, &cube, w, i, j).unwrap() == Some(false) {
                negated += 1;
            }
        }
        assert_eq!(negated, 10);
        let signs = solve_sign_assignment(&system, &cube).unwrap();
        let cx = assemble_complex(&d, &system, &cube, &signs);
        assert!(cx.d_squared_is_zero());
    }

    #[test]
    fn odd_zero_faces_leave_signs_free() {
        // a split immediately undone by a merge kills both composites in
        // the exterior theory: the face imposes no sign constraint, and
        // any solution must still square to zero
        let d = by_name("unlink-clasp").unwrap();
        let cube = build_hypercube(&d);
        let system = builtin_system(Theory::Odd);
        assert_eq!(face_cocycle(&system, &cube, 0, 0, 1), Ok(None));
        let signs = solve_sign_assignment(&system, &cube).unwrap();
        let cx = assemble_complex(&d, &system, &cube, &signs);
        assert!(cx.d_squared_is_zero());
        // with the only face unconstrained, flipping one edge sign is
        // also valid and still yields a complex
        let mut eps: alloc::collections::BTreeMap<CubeEdge, i8> =
            signs.entries().collect();
        *eps.get_mut(&(0, 0)).unwrap() *= -1;
        let flipped = SignAssignment::from_map(eps);
        assert_eq!(assignment_valid(&system, &cube, &flipped), Ok(true));
        let cx2 = assemble_complex(&d, &system, &cube, &flipped);
        assert!(cx2.d_squared_is_zero());
    }

    #[test]
    fn mixed_faces_are_reported() {
        let mut p = SignParams::khovanov();
        p.signs[0] = -1; // break merge symmetry
        let d = by_name("trefoil").unwrap();
        let cube = build_hypercube(&d);
        let system = parametrized_system(p);
        assert!(matches!(
            solve_sign_assignment(&system, &cube),
            Err(ComplexError::MixedFace { .. })
        ));
    }

    #[test]
    fn outer_face_choice_still_yields_complexes() {
        let d = by_name("trefoil").unwrap();
        let system = builtin_system(Theory::Nested);
        for outer in 0..d.n_faces() {
            let cube = build_hypercube_with_outer(&d, outer);
            let signs = solve_sign_assignment(&system, &cube).unwrap();
            let cx = assemble_complex(&d, &system, &cube, &signs);
            assert!(cx.d_squared_is_zero(), "outer face {outer}");
        }
    }

    #[test]
    fn face_classes_pin_known_configurations() {
        // the clasp: two interleaved self-arcs on one circle
        let d = by_name("unlink-clasp").unwrap();
        let cube = build_hypercube(&d);
        assert_eq!(classify_face(&cube, 0, 0, 1), FaceClass::Interleaved);
        // an annular ladder: two rungs between concentric circles, where
        // the offspring order reverses between the two routes
        let d = by_name("trefoil-mirror").unwrap();
        let cube = build_hypercube(&d);
        assert_eq!(classify_face(&cube, 0, 0, 1), FaceClass::SidewaysReversed);
        // the other trefoil's zero state has three sibling circles chained
        // by merges
        let d = by_name("trefoil").unwrap();
        let cube = build_hypercube(&d);
        assert_eq!(classify_face(&cube, 0, 0, 1), FaceClass::Associativity);
        // after one merge the remaining two arcs form a planar ladder
        assert_eq!(classify_face(&cube, 0b001, 1, 2), FaceClass::SidewaysAligned);
        // a merge arc hanging off a circle that also carries a split arc
        let d = by_name("r2-unknot").unwrap();
        let cube = build_hypercube(&d);
        assert_eq!(classify_face(&cube, 0, 0, 1), FaceClass::FrobeniusMix);
    }

    #[test]
    fn every_face_of_every_theory_matches_its_class_sign() {
        for (name, d) in bundled() {
            if d.n_crossings() > 5 {
                continue;
            }
            let cube = build_hypercube(&d);
            for theory in [Theory::Khovanov, Theory::Nested, Theory::Odd] {
                let system = builtin_system(theory);
                for audit in audit_faces(&system, theory, &cube) {
                    assert!(
                        audit.ok(),
                        "{name} / {theory}: face {:?} of class {:?} measured {:?}, expected {:?}",
                        (audit.word, audit.crossings),
                        audit.class,
                        audit.measured,
                        audit.expected
                    );
                }
            }
        }
    }

    #[test]
    fn audit_counts_match_the_measured_landscape() {
        let count = |name: &str, theory: Theory, rel: FaceRelation| -> usize {
            let d = by_name(name).unwrap();
            let cube = build_hypercube(&d);
            audit_faces(&builtin_system(theory), theory, &cube)
                .iter()
                .filter(|a| a.measured == Some(rel))
                .count()
        };
        // nesting-aware anticommutation happens exactly once in the corpus
        assert_eq!(count("unlink-clasp", Theory::Nested, FaceRelation::Negated), 1);
        assert_eq!(count("trefoil", Theory::Nested, FaceRelation::Negated), 0);
        assert_eq!(count("fig8", Theory::Nested, FaceRelation::Negated), 0);
        // the exterior theory's pattern on small knots
        assert_eq!(count("trefoil", Theory::Odd, FaceRelation::Equal), 6);
        assert_eq!(count("trefoil-mirror", Theory::Odd, FaceRelation::Negated), 6);
        assert_eq!(count("fig8", Theory::Odd, FaceRelation::Equal), 14);
        assert_eq!(count("fig8", Theory::Odd, FaceRelation::Negated), 10);
        assert_eq!(count("t2-4", Theory::Odd, FaceRelation::Negated), 24);
        assert_eq!(count("unlink-clasp", Theory::Odd, FaceRelation::BothZero), 1);
    }

    #[test]
    fn three_cubes_have_even_anticommutative_parity() {
        for (name, d) in bundled() {
            if d.n_crossings() > 5 {
                continue;
            }
            for theory in [Theory::Khovanov, Theory::Nested, Theory::Odd] {
                let system = builtin_system(theory);
                let cube = build_hypercube(&d);
                for (k, parity) in
                    three_cube_parities(&system, &cube).unwrap().iter().enumerate()
                {
                    assert!(
                        parity.is_multiple_of(2),
                        "{name} / {theory}: 3-cube {k} has odd parity {parity}"
                    );
                }
            }
        }
    }
}
