//! Homology of an assembled complex, plus the classical polynomial
//! cross-checks.
//!
//! Three coefficient routes are kept deliberately independent so they can
//! be played against each other: integral homology via Smith normal form,
//! rational ranks via fraction-free elimination, and F2 ranks via bitset
//! elimination.  The graded Euler characteristic is computed at chain
//! level and again from the homology table, and a Kauffman-style state sum
//! recounts circles with a plain union-find, bypassing the whole circle
//! geometry used to build the complex.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::complex::CubeComplex;
use crate::diagram::LinkDiagram;
use crate::matrix::{rank_f2, rank_rational, smith_normal_form};
use crate::resolution::Word;

/// Coefficients for the homology computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Coeff {
    Z,
    Q,
    F2,
}

impl core::fmt::Display for Coeff {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Coeff::Z => write!(f, "Z"),
            Coeff::Q => write!(f, "Q"),
            Coeff::F2 => write!(f, "F2"),
        }
    }
}

/// One nonzero homology group: free rank and invariant factors > 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyEntry {
    pub i: i64,
    pub j: i64,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyEntry {
    fn free(i: i64, j: i64, rank: usize) -> Self {
        HomologyEntry { i, j, rank, torsion: Vec::new() }
    }
}

/// The nonzero homology groups of the complex, sorted by bigrading.
///
/// Over Z the groups are Z^rank plus one cyclic summand per listed
/// invariant factor; over Q and F2 they are vector spaces and `rank` is
/// the dimension.
pub fn homology_table(cx: &CubeComplex, coeff: Coeff) -> Vec<HomologyEntry> {
    let gradings = cx.gradings();
    let mut out = Vec::new();
    for &(i, j) in &gradings {
        let n = cx.rank(i, j);
        let d_out = cx.diff(i, j);
        let d_in = cx.diff(i - 1, j);
        match coeff {
            Coeff::Z => {
                let snf_out = smith_normal_form(&d_out);
                let snf_in = smith_normal_form(&d_in);
                let rank = n - snf_out.rank() - snf_in.rank();
                let torsion = snf_in.torsion();
                if rank > 0 || !torsion.is_empty() {
                    out.push(HomologyEntry { i, j, rank, torsion });
                }
            }
            Coeff::Q => {
                let rank = n - rank_rational(&d_out) - rank_rational(&d_in);
                if rank > 0 {
                    out.push(HomologyEntry::free(i, j, rank));
                }
            }
            Coeff::F2 => {
                let rank = n - rank_f2(&d_out) - rank_f2(&d_in);
                if rank > 0 {
                    out.push(HomologyEntry::free(i, j, rank));
                }
            }
        }
    }
    out
}

/// A Laurent polynomial in q with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn term(coeff: i64, exp: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(coeff, exp);
        p
    }

    /// q + q^-1, the value of one circle.
    pub fn circle() -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(1, 1);
        p.add_term(1, -1);
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert(0);
        *slot = slot.checked_add(coeff).expect("coefficient overflow");
        if *slot == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add_assign(&mut self, other: &LaurentPoly) {
        for (&e, &c) in &other.coeffs {
            self.add_term(c, e);
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                out.add_term(c1.checked_mul(c2).expect("coefficient overflow"), e1 + e2);
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> LaurentPoly {
        let mut out = LaurentPoly::term(1, 0);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }
}

impl core::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = mag != 1 || e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Renders the exponent -> coefficient map, e.g. for JSON output.
pub fn poly_map(p: &LaurentPoly) -> BTreeMap<String, i64> {
    p.terms().map(|(e, c)| (format!("{e}"), c)).collect()
}

/// The alternating sum of chain ranks, (-1)^i q^j per generator.
pub fn graded_euler_characteristic(cx: &CubeComplex) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (i, j) in cx.gradings() {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        out.add_term(sign * cx.rank(i, j) as i64, j);
    }
    out
}

/// The alternating sum of free ranks of a homology table; torsion does
/// not contribute.
pub fn euler_from_homology(table: &[HomologyEntry]) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for e in table {
        let sign = if e.i.rem_euclid(2) == 0 { 1 } else { -1 };
        out.add_term(sign * e.rank as i64, e.j);
    }
    out
}

/// Counts the circles of one resolution by union-find on edges alone.
fn circles_by_union_find(diagram: &LinkDiagram, word: Word) -> usize {
    let n_edges = diagram.n_edges();
    if n_edges == 0 {
        return diagram.free_loops();
    }
    let mut parent: Vec<usize> = (0..n_edges).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            parent[r] = parent[parent[r]];
            r = parent[r];
        }
        r
    }
    for (c, cr) in diagram.crossings().iter().enumerate() {
        let e = |s: usize| (cr.edges[s] - 1) as usize;
        let pairs: [(usize, usize); 2] = if (word >> c) & 1 == 0 {
            [(e(0), e(1)), (e(2), e(3))]
        } else {
            [(e(0), e(3)), (e(1), e(2))]
        };
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut roots = vec![false; n_edges];
    for x in 0..n_edges {
        let r = find(&mut parent, x);
        roots[r] = true;
    }
    roots.iter().filter(|&&b| b).count() + diagram.free_loops()
}

/// The writhe-normalized Kauffman state sum,
/// (-1)^m q^(p - 2m) * sum over words of (-q)^k (q + q^-1)^circles,
/// with p and m the positive and negative crossing counts.  This recounts
/// every resolution with an independent circle counter and must equal the
/// graded Euler characteristic of each theory's complex.
pub fn kauffman_bracket_oracle(diagram: &LinkDiagram) -> LaurentPoly {
    let n = diagram.n_crossings();
    let mut bracket = LaurentPoly::zero();
    for word in 0..1u32 << n {
        let k = word.count_ones() as usize;
        let circles = circles_by_union_find(diagram, word);
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        let term = LaurentPoly::term(sign, k as i64).mul(&LaurentPoly::circle().pow(circles));
        bracket.add_assign(&term);
    }
    let p = diagram.positive_crossings() as i64;
    let m = diagram.negative_crossings() as i64;
    let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
    bracket.mul(&LaurentPoly::term(sign, p - 2 * m))
}

/// Formats a homology table entry's group, e.g. `Z^2 + Z/2`.
pub fn group_string(entry: &HomologyEntry, coeff: Coeff) -> String {
    let mut parts: Vec<String> = Vec::new();
    let field = match coeff {
        Coeff::Z => "Z",
        Coeff::Q => "Q",
        Coeff::F2 => "F2",
    };
    match entry.rank {
        0 => {}
        1 => parts.push(String::from(field)),
        r => parts.push(format!("{field}^{r}")),
    }
    let mut run: Option<(BigInt, usize)> = None;
    let flush = |parts: &mut Vec<String>, run: &mut Option<(BigInt, usize)>| {
        if let Some((f, count)) = run.take() {
            if count == 1 {
                parts.push(format!("Z/{f}"));
            } else {
                parts.push(format!("(Z/{f})^{count}"));
            }
        }
    };
    for f in &entry.torsion {
        match &mut run {
            Some((v, count)) if v == f => *count += 1,
            _ => {
                flush(&mut parts, &mut run);
                run = Some((f.clone(), 1));
            }
        }
    }
    flush(&mut parts, &mut run);
    if parts.is_empty() {
        String::from("0")
    } else {
        parts.join(" + ")
    }
}

/// True when the table is zero except for rank-1 groups in grading
/// (0, +-1) per unlinked component; handy in tests.
pub fn is_unknot_table(table: &[HomologyEntry]) -> bool {
    table.len() == 2
        && table[0] == HomologyEntry::free(0, -1, 1)
        && table[1] == HomologyEntry::free(0, 1, 1)
}

/// The mod-2 dimension predicted by an integral table via universal
/// coefficients: rank plus even torsion in this grading and the next.
pub fn f2_dimension_from_integral(table: &[HomologyEntry], i: i64, j: i64) -> usize {
    let even_torsion = |ti: i64| -> usize {
        table
            .iter()
            .filter(|e| e.i == ti && e.j == j)
            .map(|e| {
                e.torsion.iter().filter(|f| (&**f % 2) == BigInt::ZERO).count()
            })
            .sum()
    };
    let rank: usize = table.iter().filter(|e| e.i == i && e.j == j).map(|e| e.rank).sum();
    rank + even_torsion(i) + even_torsion(i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{assemble_complex, build_hypercube, solve_sign_assignment};
    use crate::corpus::{bundled, by_name};
    use crate::frobenius::{builtin_system, Theory};

    fn complex_for(name: &str, theory: Theory) -> CubeComplex {
        let d = by_name(name).unwrap();
        let system = builtin_system(theory);
        let cube = build_hypercube(&d);
        let signs = solve_sign_assignment(&system, &cube).unwrap();
        assemble_complex(&d, &system, &cube, &signs)
    }

    fn entry(i: i64, j: i64, rank: usize, torsion: &[i64]) -> HomologyEntry {
        let torsion = torsion.iter().map(|&f| BigInt::from(f)).collect();
        HomologyEntry { i, j, rank, torsion }
    }

    #[test]
    fn unknot_homology() {
        let cx = complex_for("unknot", Theory::Khovanov);
        for coeff in [Coeff::Z, Coeff::Q, Coeff::F2] {
            assert!(is_unknot_table(&homology_table(&cx, coeff)));
        }
        assert_eq!(graded_euler_characteristic(&cx), LaurentPoly::circle());
    }

    #[test]
    fn left_trefoil_homology_over_z() {
        let cx = complex_for("trefoil", Theory::Khovanov);
        let table = homology_table(&cx, Coeff::Z);
        assert_eq!(
            table,
            vec![
                entry(-3, -9, 1, &[]),
                entry(-2, -7, 0, &[2]),
                entry(-2, -5, 1, &[]),
                entry(0, -3, 1, &[]),
                entry(0, -1, 1, &[]),
            ]
        );
    }

    #[test]
    fn right_trefoil_homology_over_z() {
        let cx = complex_for("trefoil-mirror", Theory::Khovanov);
        let table = homology_table(&cx, Coeff::Z);
        assert_eq!(
            table,
            vec![
                entry(0, 1, 1, &[]),
                entry(0, 3, 1, &[]),
                entry(2, 5, 1, &[]),
                entry(3, 7, 0, &[2]),
                entry(3, 9, 1, &[]),
            ]
        );
    }

    #[test]
    fn rational_and_f2_routes_agree_with_universal_coefficients() {
        for name in ["trefoil", "hopf", "fig8"] {
            let cx = complex_for(name, Theory::Khovanov);
            let z = homology_table(&cx, Coeff::Z);
            let q = homology_table(&cx, Coeff::Q);
            // Q sees exactly the free parts
            let free: Vec<HomologyEntry> = z
                .iter()
                .filter(|e| e.rank > 0)
                .map(|e| HomologyEntry::free(e.i, e.j, e.rank))
                .collect();
            assert_eq!(q, free, "{name}: rational route");
            // F2 dimensions match rank + even torsion from i and i+1
            let f2 = homology_table(&cx, Coeff::F2);
            for e in &f2 {
                assert_eq!(
                    e.rank,
                    f2_dimension_from_integral(&z, e.i, e.j),
                    "{name}: F2 dimension at ({}, {})",
                    e.i,
                    e.j
                );
            }
            // and nothing extra: total F2 dimension is predicted as well
            let total_f2: usize = f2.iter().map(|e| e.rank).sum();
            let predicted: usize = z
                .iter()
                .map(|e| {
                    let even =
                        e.torsion.iter().filter(|f| (&**f % 2) == BigInt::ZERO).count();
                    e.rank + 2 * even
                })
                .sum();
            assert_eq!(total_f2, predicted, "{name}: total F2 dimension");
        }
    }

    #[test]
    fn figure_eight_is_thin() {
        let cx = complex_for("fig8", Theory::Khovanov);
        let table = homology_table(&cx, Coeff::Z);
        assert_eq!(
            table,
            vec![
                entry(-2, -5, 1, &[]),
                entry(-1, -3, 0, &[2]),
                entry(-1, -1, 1, &[]),
                entry(0, -1, 1, &[]),
                entry(0, 1, 1, &[]),
                entry(1, 1, 1, &[]),
                entry(2, 3, 0, &[2]),
                entry(2, 5, 1, &[]),
            ]
        );
    }

    #[test]
    fn exterior_theory_tables_for_small_knots() {
        // the exterior theory sees no torsion on these knots; where the
        // plain theory had a Z/2, two free classes appear instead, at the
        // exact bigradings the mod-2 dimension count forces
        let cx = complex_for("trefoil-mirror", Theory::Odd);
        assert_eq!(
            homology_table(&cx, Coeff::Z),
            vec![
                entry(0, 1, 1, &[]),
                entry(0, 3, 1, &[]),
                entry(2, 5, 1, &[]),
                entry(2, 7, 1, &[]),
                entry(3, 7, 1, &[]),
                entry(3, 9, 1, &[]),
            ]
        );
        // an amphichiral knot: the table is symmetric under negating both
        // gradings, ten free classes in all
        let cx = complex_for("fig8", Theory::Odd);
        let table = homology_table(&cx, Coeff::Z);
        let expected: Vec<HomologyEntry> = [
            (-2, -5),
            (-2, -3),
            (-1, -3),
            (-1, -1),
            (0, -1),
            (0, 1),
            (1, 1),
            (1, 3),
            (2, 3),
            (2, 5),
        ]
        .iter()
        .map(|&(i, j)| entry(i, j, 1, &[]))
        .collect();
        assert_eq!(table, expected);
        for e in &table {
            assert!(table.iter().any(|o| (o.i, o.j) == (-e.i, -e.j)));
        }
    }

    #[test]
    fn euler_characteristic_matches_the_state_sum() {
        for (name, d) in bundled() {
            if d.n_crossings() > 5 {
                continue;
            }
            let oracle = kauffman_bracket_oracle(&d);
            for theory in [Theory::Khovanov, Theory::Nested, Theory::Odd] {
                let system = builtin_system(theory);
                let cube = build_hypercube(&d);
                let signs = solve_sign_assignment(&system, &cube).unwrap();
                let cx = assemble_complex(&d, &system, &cube, &signs);
                assert_eq!(graded_euler_characteristic(&cx), oracle, "{name} / {theory}");
                let hom = homology_table(&cx, Coeff::Z);
                assert_eq!(euler_from_homology(&hom), oracle, "{name} / {theory} homology");
            }
        }
    }

    #[test]
    fn left_trefoil_jones_polynomial() {
        let d = by_name("trefoil").unwrap();
        let mut expected = LaurentPoly::zero();
        expected.add_term(1, -1);
        expected.add_term(1, -3);
        expected.add_term(1, -5);
        expected.add_term(-1, -9);
        assert_eq!(kauffman_bracket_oracle(&d), expected);
    }

    #[test]
    fn group_strings_render() {
        assert_eq!(group_string(&entry(0, 0, 2, &[2, 2, 4]), Coeff::Z), "Z^2 + (Z/2)^2 + Z/4");
        assert_eq!(group_string(&entry(0, 0, 0, &[]), Coeff::Z), "0");
        assert_eq!(group_string(&entry(0, 0, 1, &[]), Coeff::F2), "F2");
    }

    #[test]
    fn laurent_display() {
        let mut p = LaurentPoly::zero();
        p.add_term(1, 3);
        p.add_term(-2, 0);
        p.add_term(1, -1);
        assert_eq!(format!("{p}"), "q^3 - 2 + q^-1");
        assert_eq!(format!("{}", LaurentPoly::zero()), "0");
    }
}
