//! Exact integer linear algebra.
//!
//! Differentials are stored sparsely ([`IntMat`], machine integers — entries
//! of hypercube differentials are tiny and every product we form is checked).
//! Smith normal form works internally on arbitrary-precision integers, since
//! entry growth during elimination is unbounded in general.  Rank over Q is
//! computed a second time by fraction-free (Bareiss) elimination as an
//! independent route, and rank over F2 by bitset elimination.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Sparse integer matrix with deterministic (row, col)-ordered storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, i64)>>(
        rows: usize,
        cols: usize,
        triplets: I,
    ) -> Self {
        let mut m = IntMat::zero(rows, cols);
        for (r, c, v) in triplets {
            m.add(r, c, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        *self.entries.get(&(r, c)).unwrap_or(&0)
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols, "entry out of bounds");
        if v == 0 {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Adds `v` to the entry at `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        let cur = self.entry(r, c);
        self.set(r, c, cur.checked_add(v).expect("integer overflow in matrix add"));
    }

    /// Iterates entries in (row, col) order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn scaled(&self, s: i64) -> IntMat {
        let mut m = IntMat::zero(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            m.set(r, c, v.checked_mul(s).expect("integer overflow in matrix scale"));
        }
        m
    }

    /// Exact product `self * rhs` with overflow checks.
    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        // group rhs by row for the sparse sweep
        let mut rhs_rows: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
        for (r, c, v) in rhs.triplets() {
            rhs_rows.entry(r).or_default().push((c, v));
        }
        let mut out = IntMat::zero(self.rows, rhs.cols);
        for (r, k, a) in self.triplets() {
            if let Some(row) = rhs_rows.get(&k) {
                for &(c, b) in row {
                    out.add(r, c, a.checked_mul(b).expect("integer overflow in matrix product"));
                }
            }
        }
        out
    }
}

/// Result of a Smith normal form computation.
///
/// `factors` are the nonzero invariant factors, positive and in divisibility
/// order (each divides the next); their count is the rank over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Invariant factors greater than one, as the torsion part of a cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| **d > BigInt::from(1)).cloned().collect()
    }
}

/// Smith normal form over Z by elementary row and column operations.
///
/// Pivot choice is the minimal absolute value in the remaining block, which
/// keeps entries small on the near-unimodular matrices this crate produces.
// Row updates read the pivot row while mutating another, so indexed
// loops are clearer than split borrows here.
#[allow(clippy::needless_range_loop)]
pub fn smith_normal_form(m: &IntMat) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows];
    for (r, c, v) in m.triplets() {
        a[r][c] = BigInt::from(v);
    }

    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // locate the minimal nonzero entry of the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        'reduce: loop {
            // clear the pivot column
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in t..cols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                if !a[i][t].is_zero() {
                    // remainder strictly smaller: promote it to pivot and restart
                    a.swap(t, i);
                    continue 'reduce;
                }
            }
            // clear the pivot row
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for i in t..rows {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                }
                if !a[t][j].is_zero() {
                    // remainder strictly smaller: promote its column and restart
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    continue 'reduce;
                }
            }
            // repair divisibility: the pivot must divide the whole block
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if (&a[i][j] % &a[t][t]).is_zero() {
                        continue;
                    }
                    for jj in t..cols {
                        let v = a[i][jj].clone();
                        a[t][jj] += v;
                    }
                    continue 'reduce;
                }
            }
            break;
        }

        factors.push(a[t][t].abs());
        t += 1;
    }

    SnfResult { factors }
}

/// Rank over Q by fraction-free Bareiss elimination.
///
/// Deliberately shares no code with [`smith_normal_form`]; homology tables
/// over Q are cross-checked against the SNF route.
pub fn rank_rational(m: &IntMat) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows];
    for (r, c, v) in m.triplets() {
        a[r][c] = BigInt::from(v);
    }

    let mut prev = BigInt::from(1);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                let num = &a[row][col] * &a[i][j] - &a[i][col] * &a[row][j];
                let q = &num / &prev;
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[row][col].clone();
        rank += 1;
        row += 1;
    }
    rank
}

/// Rank over F2 by bitset Gaussian elimination.
pub fn rank_f2(m: &IntMat) -> usize {
    let words = m.cols().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    {
        let mut cur = usize::MAX;
        for (r, c, v) in m.triplets() {
            if v % 2 == 0 {
                continue;
            }
            if r != cur {
                rows.push(vec![0u64; words]);
                cur = r;
            }
            let row = rows.last_mut().unwrap();
            row[c / 64] ^= 1u64 << (c % 64);
        }
    }
    let mut rank = 0;
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
    for mut row in rows {
        for (p, prow) in &pivots {
            if row[p / 64] >> (p % 64) & 1 == 1 {
                for (w, pw) in row.iter_mut().zip(prow) {
                    *w ^= pw;
                }
            }
        }
        if let Some(p) = first_set_bit(&row) {
            pivots.push((p, row));
            rank += 1;
        }
    }
    rank
}

fn first_set_bit(row: &[u64]) -> Option<usize> {
    for (i, w) in row.iter().enumerate() {
        if *w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

/// One linear equation over F2: the variables on the left xor to `rhs`.
#[derive(Clone, Debug)]
pub struct F2Equation {
    pub vars: Vec<usize>,
    pub rhs: bool,
}

/// Solves a linear system over F2.
///
/// Returns the particular solution in which every free variable is `false`,
/// with variables eliminated in index order, so the answer is deterministic.
/// `None` means the system is inconsistent.
pub fn solve_f2(num_vars: usize, equations: &[F2Equation]) -> Option<Vec<bool>> {
    let words = num_vars.div_ceil(64);
    // row = coefficient bitset plus rhs bit
    let mut rows: Vec<(Vec<u64>, bool)> = equations
        .iter()
        .map(|eq| {
            let mut bits = vec![0u64; words];
            for &v in &eq.vars {
                assert!(v < num_vars, "variable out of range");
                bits[v / 64] ^= 1u64 << (v % 64);
            }
            (bits, eq.rhs)
        })
        .collect();

    let mut pivot_rows: Vec<(usize, Vec<u64>, bool)> = Vec::new();
    for (mut bits, mut rhs) in rows.drain(..) {
        for (p, pbits, prhs) in &pivot_rows {
            if bits[p / 64] >> (p % 64) & 1 == 1 {
                for (w, pw) in bits.iter_mut().zip(pbits) {
                    *w ^= pw;
                }
                rhs ^= prhs;
            }
        }
        match first_set_bit(&bits) {
            Some(p) => pivot_rows.push((p, bits, rhs)),
            None if rhs => return None,
            None => {}
        }
    }

    // back-substitute with all free variables false
    pivot_rows.sort_by_key(|(p, _, _)| *p);
    let mut solution = vec![false; num_vars];
    for (p, bits, rhs) in pivot_rows.iter().rev() {
        let mut v = *rhs;
        for j in p + 1..num_vars {
            if bits[j / 64] >> (j % 64) & 1 == 1 && solution[j] {
                v = !v;
            }
        }
        solution[*p] = v;
    }
    Some(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn snf_factors(m: &IntMat) -> Vec<i64> {
        use num_traits::ToPrimitive;
        smith_normal_form(m).factors.iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_two_by_two() {
        let m = IntMat::from_triplets(2, 2, [(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        assert_eq!(snf_factors(&m), vec![2, 4]);
    }

    #[test]
    fn snf_four_by_four() {
        let rows = [[2i64, 4, 4, 4], [-6, 6, 12, 12], [10, -4, -16, -16], [4, 2, 2, 8]];
        let mut m = IntMat::zero(4, 4);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        let f = snf_factors(&m);
        assert_eq!(f.len(), 4);
        // every entry is even, so the first factor is the global gcd 2
        assert_eq!(f[0], 2);
        for w in f.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn snf_diagonal_gcd_chain() {
        let m = IntMat::from_triplets(3, 3, [(0, 0, 6), (1, 1, 10), (2, 2, 15)]);
        assert_eq!(snf_factors(&m), vec![1, 30, 30]);
    }

    #[test]
    fn snf_zero_and_identity() {
        assert_eq!(snf_factors(&IntMat::zero(3, 5)), Vec::<i64>::new());
        assert_eq!(snf_factors(&IntMat::identity(3)), vec![1, 1, 1]);
    }

    #[test]
    fn product_and_rank() {
        let a = IntMat::from_triplets(2, 3, [(0, 0, 1), (0, 2, 2), (1, 1, -1)]);
        let b = IntMat::from_triplets(3, 2, [(0, 0, 3), (1, 0, 1), (2, 1, 5)]);
        let p = a.mul(&b);
        assert_eq!(p.entry(0, 0), 3);
        assert_eq!(p.entry(0, 1), 10);
        assert_eq!(p.entry(1, 0), -1);
        assert_eq!(rank_rational(&p), 2);
        assert_eq!(smith_normal_form(&p).rank(), 2);
    }

    #[test]
    fn f2_rank_drops_even_entries() {
        let m = IntMat::from_triplets(2, 2, [(0, 0, 2), (1, 1, 3)]);
        assert_eq!(rank_f2(&m), 1);
        assert_eq!(rank_rational(&m), 2);
    }

    #[test]
    fn f2_solver_picks_lex_least_solution() {
        // x0 + x1 = 1, x1 + x2 = 0 has free x2; expect x2 = false, so x1 = 0, x0 = 1
        let eqs = vec![
            F2Equation { vars: vec![0, 1], rhs: true },
            F2Equation { vars: vec![1, 2], rhs: false },
        ];
        assert_eq!(solve_f2(3, &eqs), Some(vec![true, false, false]));
    }

    #[test]
    fn f2_solver_detects_inconsistency() {
        let eqs = vec![
            F2Equation { vars: vec![0], rhs: true },
            F2Equation { vars: vec![0], rhs: false },
        ];
        assert_eq!(solve_f2(1, &eqs), None);
    }

    proptest! {
        #[test]
        fn snf_chain_and_rank_agree(entries in proptest::collection::vec((0usize..4, 0usize..4, -9i64..10), 0..12)) {
            let m = IntMat::from_triplets(4, 4, entries);
            let snf = smith_normal_form(&m);
            // invariant factors form a divisibility chain
            for w in snf.factors.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            // the two rational rank routes agree
            prop_assert_eq!(snf.rank(), rank_rational(&m));
            // rank over F2 counts odd invariant factors
            let odd = snf.factors.iter().filter(|d| !(&**d % BigInt::from(2)).is_zero()).count();
            prop_assert_eq!(rank_f2(&m), odd);
        }

        #[test]
        fn f2_solutions_satisfy_equations(
            eqs in proptest::collection::vec(
                (proptest::collection::vec(0usize..6, 1..4), any::<bool>()), 1..8)
        ) {
            let eqs: Vec<F2Equation> = eqs.into_iter()
                .map(|(vars, rhs)| F2Equation { vars, rhs })
                .collect();
            if let Some(sol) = solve_f2(6, &eqs) {
                for eq in &eqs {
                    let mut v = false;
                    for &x in &eq.vars { v ^= sol[x]; }
                    prop_assert_eq!(v, eq.rhs);
                }
            }
        }
    }
}
