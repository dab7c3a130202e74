//! The algebraic layer: what a saddle does to the module attached to a
//! state.
//!
//! Each circle carries the rank-2 module with basis {1, X} over Z[t]; a
//! state's module has basis the X-labelings of its circles, encoded as bit
//! masks in canonical circle order.  Three theories are built in:
//!
//! * `Khovanov`: the usual commutative Frobenius structure
//!   (m(X,X) = t, Delta(1) = X(x)1 + 1(x)X, Delta(X) = X(x)X + t 1(x)1),
//!   applied regardless of how the circles sit in the plane.
//! * `Nested`: the same tables for saddles between side-by-side circles,
//!   but sign-twisted tables when one active circle contains the other:
//!   merging with X on the inner circle, or splitting with X landing on
//!   the outer circle, picks up a minus sign (as do the t terms).
//! * `Odd`: the exterior algebra on the circles; merges substitute one
//!   generator for another, splits left-multiply by the difference of the
//!   two offspring generators.  Signs come from reordering wedge factors.
//!
//! A ten-sign parametrized family interpolates the even theories: each
//! table entry of the unnested/nested merge and split gets its own sign.
//! `check_relations` probes a system on every square face of a battery of
//! small cubes and reports faces whose two composites fail to agree up to
//! one overall sign.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::LinkDiagram;
use crate::resolution::{
    classify_saddle, resolve, ResolvedState, SaddleData, SaddleKind, Word,
};

/// An element of a state's module: Z-linear combination of
/// (X-labeling mask, power of t).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<(u64, u32), i64>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    /// The labeling with X exactly on the mask bits (and no t factor).
    pub fn basis(mask: u64) -> Self {
        let mut e = Element::zero();
        e.add_term(mask, 0, 1);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: u64, t_pow: u32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry((mask, t_pow)).or_insert(0);
        *slot = slot.checked_add(coeff).expect("coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&(mask, t_pow));
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        for (&(m, t), &c) in &other.terms {
            self.add_term(m, t, c);
        }
    }

    pub fn negated(&self) -> Element {
        let mut out = Element::zero();
        for (&(m, t), &c) in &self.terms {
            out.add_term(m, t, -c);
        }
        out
    }

    pub fn scaled(&self, k: i64) -> Element {
        let mut out = Element::zero();
        for (&(m, t), &c) in &self.terms {
            out.add_term(m, t, c.checked_mul(k).expect("coefficient overflow"));
        }
        out
    }

    /// Specializes t = 0: keeps only t-free terms.
    pub fn at_t_zero(&self) -> Element {
        let mut out = Element::zero();
        for (&(m, t), &c) in &self.terms {
            if t == 0 {
                out.add_term(m, 0, c);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u32, i64)> + '_ {
        self.terms.iter().map(|(&(m, t), &c)| (m, t, c))
    }

    /// Coefficient of a t-free basis labeling.
    pub fn coeff(&self, mask: u64) -> i64 {
        self.terms.get(&(mask, 0)).copied().unwrap_or(0)
    }
}

/// Internal degree of a labeling: +1 per 1-label, -1 per X-label, -4 per t.
pub fn labeling_degree(mask: u64, n_circles: usize, t_pow: u32) -> i64 {
    n_circles as i64 - 2 * (mask.count_ones() as i64) - 4 * t_pow as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Theory {
    Khovanov,
    Nested,
    Odd,
}

impl core::fmt::Display for Theory {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Theory::Khovanov => write!(f, "khovanov"),
            Theory::Nested => write!(f, "nested"),
            Theory::Odd => write!(f, "odd"),
        }
    }
}

/// The ten signs of the parametrized family, in table order:
///
/// | index | table entry                                   |
/// |-------|-----------------------------------------------|
/// | 0     | unnested merge, 1 (x) 1 -> 1                  |
/// | 1     | unnested merge, X inputs -> X                 |
/// | 2     | unnested split, 1 -> X(x)1 + 1(x)X            |
/// | 3     | unnested split, X -> X(x)X                    |
/// | 4     | nested merge, 1 (x) 1 -> 1                    |
/// | 5     | nested merge, X on the outer circle -> X      |
/// | 6     | nested merge, X on the inner circle -> X      |
/// | 7     | nested split, term with X on the outer circle |
/// | 8     | nested split, term with X on the inner circle |
/// | 9     | nested split, X -> X(x)X                      |
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignParams {
    pub signs: [i8; 10],
}

/// The four surgery operations a sign flip can target as a whole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OpKind {
    MergeUnnested,
    SplitUnnested,
    MergeNested,
    SplitNested,
}

pub const OP_KINDS: [OpKind; 4] = [
    OpKind::MergeUnnested,
    OpKind::SplitUnnested,
    OpKind::MergeNested,
    OpKind::SplitNested,
];

impl SignParams {
    pub fn all_plus() -> Self {
        SignParams { signs: [1; 10] }
    }

    /// The member realizing the plain Khovanov tables.
    pub fn khovanov() -> Self {
        Self::all_plus()
    }

    /// The member realizing the nesting-aware tables: minus on the nested
    /// merge with X inside and on the nested split with X outside.
    pub fn nested() -> Self {
        let mut p = Self::all_plus();
        p.signs[6] = -1;
        p.signs[7] = -1;
        p
    }

    /// Bit k of `i` set means sign k is -1; enumerates all 1024 tuples.
    pub fn from_index(i: u16) -> Self {
        let mut signs = [1i8; 10];
        for (k, s) in signs.iter_mut().enumerate() {
            if (i >> k) & 1 == 1 {
                *s = -1;
            }
        }
        SignParams { signs }
    }

    pub fn to_index(&self) -> u16 {
        self.signs
            .iter()
            .enumerate()
            .map(|(k, &s)| if s < 0 { 1 << k } else { 0 })
            .sum()
    }

    /// The compatibility conditions singling out the well-defined tuples:
    /// merges and splits must treat 1- and X-entries with one sign each
    /// (slots 0=1, 2=3, 4=5, 8=9), and the two routes around an
    /// interleaved reconnection must agree (slot products 6*7 = 4*8).
    pub fn is_valid(&self) -> bool {
        let s = &self.signs;
        s[0] == s[1]
            && s[2] == s[3]
            && s[4] == s[5]
            && s[8] == s[9]
            && s[6] * s[7] == s[4] * s[8]
    }

    /// Negates every sign of one operation's table.
    pub fn flip(&self, op: OpKind) -> Self {
        let mut p = *self;
        let range = match op {
            OpKind::MergeUnnested => 0..2,
            OpKind::SplitUnnested => 2..4,
            OpKind::MergeNested => 4..7,
            OpKind::SplitNested => 7..10,
        };
        for k in range {
            p.signs[k] = -p.signs[k];
        }
        p
    }

    /// Which operations carry a net flip relative to the all-plus tuple,
    /// read off the 1(x)1 -> 1 and X-on-inner-split slots.
    pub fn flips_from_khovanov(&self) -> [bool; 4] {
        [self.signs[0] < 0, self.signs[2] < 0, self.signs[4] < 0, self.signs[8] < 0]
    }

    /// Invariant separating the two orbits of valid tuples under
    /// whole-operation flips: +1 on the Khovanov side, -1 on the nested
    /// side.
    pub fn orbit_invariant(&self) -> i8 {
        self.signs[4] * self.signs[6]
    }
}

/// Coefficient tables for an even (commutative-flavored) system.
///
/// Merge rows are [1*1, 1*X, X*1, X*X -> t]; for the nested table the
/// first slot of a pair is the inner circle.  Split rows are
/// [X-on-first, X-on-second, X -> XX, X -> t*11]; for the nested table
/// "first" is the inner circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenSystem {
    pub merge_unnested: [i64; 4],
    pub split_unnested: [i64; 4],
    pub merge_nested: [i64; 4],
    pub split_nested: [i64; 4],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum System {
    Even(EvenSystem),
    Odd,
}

/// The built-in system for a theory.
pub fn builtin_system(theory: Theory) -> System {
    match theory {
        Theory::Khovanov => System::Even(EvenSystem {
            merge_unnested: [1, 1, 1, 1],
            split_unnested: [1, 1, 1, 1],
            merge_nested: [1, 1, 1, 1],
            split_nested: [1, 1, 1, 1],
        }),
        Theory::Nested => System::Even(EvenSystem {
            merge_unnested: [1, 1, 1, 1],
            split_unnested: [1, 1, 1, 1],
            // X on the inner circle (third slot) and the t term flip
            merge_nested: [1, 1, -1, -1],
            // X landing on the outer circle (second slot) and t flip
            split_nested: [1, -1, 1, -1],
        }),
        Theory::Odd => System::Odd,
    }
}

/// The even system with the given signs on the t = 0 tables.
pub fn parametrized_system(p: SignParams) -> System {
    let s = |k: usize| p.signs[k] as i64;
    System::Even(EvenSystem {
        merge_unnested: [s(0), s(1), s(1), 0],
        split_unnested: [s(2), s(2), s(3), 0],
        merge_nested: [s(4), s(5), s(6), 0],
        // inner-first storage: X-on-inner term is sign slot 8
        split_nested: [s(8), s(7), s(9), 0],
    })
}

/// Applies the saddle's map to `input`, written in the tail state's basis;
/// the result is in the head state's basis (the saddle data already name
/// the head circles involved).
pub fn apply_edge_map(
    system: &System,
    saddle: &SaddleData,
    tail: &ResolvedState,
    input: &Element,
) -> Element {
    match system {
        System::Even(sys) => apply_even(sys, saddle, input),
        System::Odd => apply_odd(saddle, tail, input),
    }
}

fn passive_mask(saddle: &SaddleData, mask: u64) -> u64 {
    let mut out = 0u64;
    for &(t, h) in &saddle.passive {
        if (mask >> t) & 1 == 1 {
            out |= 1 << h;
        }
    }
    out
}

fn apply_even(sys: &EvenSystem, saddle: &SaddleData, input: &Element) -> Element {
    let mut out = Element::zero();
    for (mask, t_pow, coeff) in input.terms() {
        let carried = passive_mask(saddle, mask);
        match saddle.kind {
            SaddleKind::Merge => {
                let table = if saddle.nested { &sys.merge_nested } else { &sys.merge_unnested };
                // read the pair as (inner, outer) when nested
                let (first, second) = if saddle.nested {
                    saddle.inner_outer()
                } else {
                    (saddle.tail_active[0], saddle.tail_active[1])
                };
                let (xf, xs) = ((mask >> first) & 1, (mask >> second) & 1);
                let target = saddle.head_active[0];
                let (c, x_out, dt) = match (xf, xs) {
                    (0, 0) => (table[0], 0u64, 0),
                    (0, 1) => (table[1], 1, 0),
                    (1, 0) => (table[2], 1, 0),
                    _ => (table[3], 0, 1),
                };
                out.add_term(carried | (x_out << target), t_pow + dt, coeff * c);
            }
            SaddleKind::Split => {
                let table = if saddle.nested { &sys.split_nested } else { &sys.split_unnested };
                let (first, second) = if saddle.nested {
                    saddle.inner_outer()
                } else {
                    (saddle.head_active[0], saddle.head_active[1])
                };
                let x_in = (mask >> saddle.tail_active[0]) & 1;
                if x_in == 0 {
                    out.add_term(carried | (1 << first), t_pow, coeff * table[0]);
                    out.add_term(carried | (1 << second), t_pow, coeff * table[1]);
                } else {
                    out.add_term(carried | (1 << first) | (1 << second), t_pow, coeff * table[2]);
                    out.add_term(carried, t_pow + 1, coeff * table[3]);
                }
            }
        }
    }
    out
}

/// Sorts a wedge monomial into ascending order: None if a letter repeats,
/// otherwise the mask and the inversion-count sign.
fn normalize_monomial(letters: &[usize]) -> Option<(u64, i64)> {
    let mut inversions = 0usize;
    let mut mask = 0u64;
    for (i, &a) in letters.iter().enumerate() {
        if (mask >> a) & 1 == 1 {
            return None;
        }
        mask |= 1 << a;
        for &b in &letters[..i] {
            if b > a {
                inversions += 1;
            }
        }
    }
    Some((mask, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

fn apply_odd(saddle: &SaddleData, tail: &ResolvedState, input: &Element) -> Element {
    // where each tail circle's generator goes
    let mut relabel = vec![usize::MAX; tail.n_circles()];
    for &(t, h) in &saddle.passive {
        relabel[t] = h;
    }
    match saddle.kind {
        SaddleKind::Merge => {
            for &t in &saddle.tail_active {
                relabel[t] = saddle.head_active[0];
            }
        }
        SaddleKind::Split => {
            relabel[saddle.tail_active[0]] = saddle.head_active[0];
        }
    }

    let mut out = Element::zero();
    for (mask, t_pow, coeff) in input.terms() {
        debug_assert_eq!(t_pow, 0, "the exterior system has no t terms");
        let letters: Vec<usize> =
            (0..tail.n_circles()).filter(|i| (mask >> i) & 1 == 1).map(|i| relabel[i]).collect();
        match saddle.kind {
            SaddleKind::Merge => {
                if let Some((m, s)) = normalize_monomial(&letters) {
                    out.add_term(m, 0, coeff * s);
                }
            }
            SaddleKind::Split => {
                // left-multiply by (X_first - X_second)
                let (v, w) = (saddle.head_active[0], saddle.head_active[1]);
                for (lead, sign) in [(v, 1i64), (w, -1)] {
                    let mut seq = Vec::with_capacity(letters.len() + 1);
                    seq.push(lead);
                    seq.extend_from_slice(&letters);
                    if let Some((m, s)) = normalize_monomial(&seq) {
                        out.add_term(m, 0, coeff * sign * s);
                    }
                }
            }
        }
    }
    out
}

/// How two maps with the same domain and codomain compare entrywise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceRelation {
    /// Both maps are zero.
    BothZero,
    Equal,
    Negated,
}

/// Compares two maps given as columns over the same basis; `None` when
/// they are neither equal nor opposite.
pub fn compare_columns(f: &[Element], g: &[Element]) -> Option<FaceRelation> {
    debug_assert_eq!(f.len(), g.len());
    let zero = f.iter().all(Element::is_zero) && g.iter().all(Element::is_zero);
    if zero {
        return Some(FaceRelation::BothZero);
    }
    if f == g {
        return Some(FaceRelation::Equal);
    }
    if f.iter().zip(g).all(|(a, b)| *a == b.negated()) {
        return Some(FaceRelation::Negated);
    }
    None
}

/// One square face of a resolution cube: both free crossings of `word`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationViolation {
    pub diagram: usize,
    pub word: Word,
    pub crossings: (usize, usize),
}

/// The two composites around the face (tail `word`; saddles `i` then `j`
/// versus `j` then `i`), as columns over the tail basis.
pub fn face_composites(
    system: &System,
    diagram_states: &BTreeMap<Word, ResolvedState>,
    word: Word,
    i: usize,
    j: usize,
) -> (Vec<Element>, Vec<Element>) {
    let tail = &diagram_states[&word];
    let head_word = word | (1 << i) | (1 << j);
    let route = |first: usize, second: usize| -> Vec<Element> {
        let mid = &diagram_states[&(word | (1 << first))];
        let head = &diagram_states[&head_word];
        let s1 = classify_saddle(tail, mid, first);
        let s2 = classify_saddle(mid, head, second);
        (0..1u64 << tail.n_circles())
            .map(|mask| {
                let once = apply_edge_map(system, &s1, tail, &Element::basis(mask));
                apply_edge_map(system, &s2, mid, &once)
            })
            .collect()
    };
    (route(i, j), route(j, i))
}

/// Checks every square face of every cube in the battery: the two
/// composites must agree up to one overall sign (or both vanish).
pub fn check_relations(system: &System, battery: &[LinkDiagram]) -> Vec<RelationViolation> {
    let mut violations = Vec::new();
    for (d_idx, diagram) in battery.iter().enumerate() {
        let n = diagram.n_crossings();
        let states: BTreeMap<Word, ResolvedState> =
            (0..1u32 << n).map(|w| (w, resolve(diagram, w))).collect();
        for word in 0..1u32 << n {
            for i in 0..n {
                if (word >> i) & 1 == 1 {
                    continue;
                }
                for j in i + 1..n {
                    if (word >> j) & 1 == 1 {
                        continue;
                    }
                    let (fg, gf) = face_composites(system, &states, word, i, j);
                    if compare_columns(&fg, &gf).is_none() {
                        violations.push(RelationViolation {
                            diagram: d_idx,
                            word,
                            crossings: (i, j),
                        });
                    }
                }
            }
        }
    }
    violations
}
