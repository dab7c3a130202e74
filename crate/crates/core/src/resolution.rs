//! Resolutions of a diagram: smoothed states, their circles, and the
//! nesting structure of the circles in the plane.
//!
//! A word assigns each crossing a bit.  Bit 0 joins slots {0,1} and {2,3}
//! (the a-b and c-d pockets), bit 1 joins {0,3} and {1,2}.  Circles are the
//! closed curves that remain; they are traced as alternating sequences of
//! arcs (diagram edges) and joins (smoothed crossings).
//!
//! Smoothing a crossing merges two of the four sectors around it into one
//! region.  Propagating those merges through the faces of the original map
//! yields the regions of the smoothed diagram.  Regions and circles form a
//! bipartite tree (each circle separates the sphere); rooting it at the
//! outer region gives every circle a nesting depth, with depth 0 for
//! outermost circles.  Components of split diagrams are placed side by side
//! in the outer region, as are `U` loops.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::{Dart, EdgeId, LinkDiagram};

/// A vertex of the resolution hypercube: bit i is crossing i's smoothing.
pub type Word = u32;

/// A traced circle before canonicalization: its arcs and its joins.
type RawCircle = (Vec<EdgeId>, Vec<(usize, u8)>);

pub fn word_bit(word: Word, crossing: usize) -> u8 {
    ((word >> crossing) & 1) as u8
}

/// The slot paired with `slot` under smoothing `bit`.
fn paired_slot(slot: usize, bit: u8) -> usize {
    match bit {
        0 => [1, 0, 3, 2][slot],
        _ => [3, 2, 1, 0][slot],
    }
}

/// Pocket index of a join: pocket 0 contains slot 0.
fn pocket_of_slot(slot: usize, bit: u8) -> u8 {
    match (bit, slot) {
        (0, 0) | (0, 1) => 0,
        (0, _) => 1,
        (_, 0) | (_, 3) => 0,
        _ => 1,
    }
}

/// The sector a join's smoothing arc hugs, as a quadrant of the crossing.
fn pocket_quadrant(pocket: u8, bit: u8) -> usize {
    match (bit, pocket) {
        (0, 0) => 0,
        (0, _) => 2,
        (_, 0) => 3,
        _ => 1,
    }
}

/// One of the two sectors merged by the smoothing (they become one region).
fn channel_quadrant(bit: u8) -> usize {
    if bit == 0 {
        1
    } else {
        0
    }
}

/// A circle of a resolved state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    /// Arcs in traversal order; `arcs[k]` runs between `joins[k]` and
    /// `joins[k+1]`.  Free loops carry one synthetic arc id past the real
    /// range and no joins.
    pub arcs: Vec<EdgeId>,
    /// (crossing, pocket) in traversal order.
    pub joins: Vec<(usize, u8)>,
    /// Nesting depth: 0 for circles adjacent to the outer region.
    pub depth: usize,
    /// Canonical index of the immediately containing circle.
    pub parent: Option<usize>,
    /// Adjacent regions as [side toward the outer region, inner side].
    pub sides: [usize; 2],
}

impl Circle {
    pub fn min_arc(&self) -> EdgeId {
        *self.arcs.iter().min().expect("circles have at least one arc")
    }
}

/// A fully resolved state of the diagram.
#[derive(Clone, Debug)]
pub struct ResolvedState {
    pub word: Word,
    /// Circles sorted by (depth, least arc).
    pub circles: Vec<Circle>,
    /// Regions of the smoothed diagram.
    pub n_regions: usize,
    /// Region id of the outer region.
    pub outer_region: usize,
    join_circle: BTreeMap<(usize, u8), usize>,
}

impl ResolvedState {
    pub fn n_circles(&self) -> usize {
        self.circles.len()
    }

    /// The circle passing through a join.
    pub fn circle_at_join(&self, crossing: usize, pocket: u8) -> usize {
        self.join_circle[&(crossing, pocket)]
    }

    pub fn depths(&self) -> Vec<usize> {
        self.circles.iter().map(|c| c.depth).collect()
    }

    /// True if `anc` is a strict ancestor of `idx` in the containment tree.
    pub fn is_ancestor(&self, anc: usize, idx: usize) -> bool {
        let mut cur = self.circles[idx].parent;
        while let Some(p) = cur {
            if p == anc {
                return true;
            }
            cur = self.circles[p].parent;
        }
        false
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Resolves `word` with the default outer face.
pub fn resolve(diagram: &LinkDiagram, word: Word) -> ResolvedState {
    resolve_with_outer(diagram, word, diagram.default_outer_face())
}

/// Resolves `word` with an explicit outer face of the original map.
pub fn resolve_with_outer(diagram: &LinkDiagram, word: Word, outer: usize) -> ResolvedState {
    let n_cross = diagram.n_crossings();
    assert!(outer < diagram.n_faces(), "outer face out of range");

    // --- trace circles ------------------------------------------------
    // One step: enter a crossing at a dart, cross to the paired slot, walk
    // the edge there.  Each circle is two reversed orbits; visiting a dart
    // and its pair marks both directions.
    let mut visited = vec![false; 4 * n_cross];
    let mut raw_circles: Vec<RawCircle> = Vec::new();
    for c in 0..n_cross {
        for s in 0..4 {
            if visited[c * 4 + s] {
                continue;
            }
            let start = Dart::new(c, s);
            let mut arcs = Vec::new();
            let mut joins = Vec::new();
            let mut cur = start;
            loop {
                let bit = word_bit(word, cur.crossing);
                let partner = Dart::new(cur.crossing, paired_slot(cur.slot, bit));
                visited[cur.crossing * 4 + cur.slot] = true;
                visited[partner.crossing * 4 + partner.slot] = true;
                joins.push((cur.crossing, pocket_of_slot(cur.slot, bit)));
                arcs.push(diagram.edge_at(partner));
                cur = diagram.other_end(partner);
                if cur == start {
                    break;
                }
            }
            raw_circles.push(canonicalize_circle(arcs, joins));
        }
    }
    for k in 0..diagram.free_loops() {
        let synthetic = (diagram.n_edges() + k + 1) as EdgeId;
        raw_circles.push((vec![synthetic], Vec::new()));
    }

    // --- merge faces into regions --------------------------------------
    let n_faces = diagram.n_faces();
    let mut uf = UnionFind::new(n_faces + diagram.free_loops());
    for c in 0..n_cross {
        let bit = word_bit(word, c);
        let q = channel_quadrant(bit);
        uf.union(diagram.face_of_quadrant(c, q), diagram.face_of_quadrant(c, (q + 2) % 4));
    }
    // split components sit side by side in the chosen outer region
    let face_component: Vec<Option<usize>> = {
        let mut fc = vec![None; n_faces];
        for c in 0..n_cross {
            for q in 0..4 {
                fc[diagram.face_of_quadrant(c, q)] = Some(diagram.component_of_crossing(c));
            }
        }
        fc
    };
    for (g, &f) in diagram.component_outer_faces().iter().enumerate() {
        if face_component[outer] != Some(g) {
            uf.union(outer, f);
        }
    }

    // compact region ids, ordered by least original face in the class
    let mut region_id: BTreeMap<usize, usize> = BTreeMap::new();
    for f in 0..n_faces + diagram.free_loops() {
        let root = uf.find(f);
        let next = region_id.len();
        region_id.entry(root).or_insert(next);
    }
    let n_regions = region_id.len();
    let outer_region = region_id[&uf.find(outer)];

    // --- sides of each circle -------------------------------------------
    // At any join the smoothing arc separates its pocket sector from the
    // channel; those are the two regions along the whole circle.
    let mut sides: Vec<[usize; 2]> = Vec::with_capacity(raw_circles.len());
    for (idx, (_, joins)) in raw_circles.iter().enumerate() {
        if joins.is_empty() {
            // free loop: fresh region inside, outer region outside
            let loop_idx = idx - (raw_circles.len() - diagram.free_loops());
            let fresh = region_id[&uf.find(n_faces + loop_idx)];
            sides.push([outer_region, fresh]);
            continue;
        }
        let mut pair: Option<[usize; 2]> = None;
        for &(c, p) in joins {
            let bit = word_bit(word, c);
            let pocket_face = diagram.face_of_quadrant(c, pocket_quadrant(p, bit));
            let channel_face = diagram.face_of_quadrant(c, channel_quadrant(bit));
            let got = [
                region_id[&uf.find(pocket_face)],
                region_id[&uf.find(channel_face)],
            ];
            let norm = [got[0].min(got[1]), got[0].max(got[1])];
            match pair {
                None => pair = Some(norm),
                Some(prev) => debug_assert_eq!(prev, norm, "circle sides disagree across joins"),
            }
        }
        let pair = pair.unwrap();
        assert_ne!(pair[0], pair[1], "a circle must separate two distinct regions");
        sides.push(pair);
    }

    // --- containment tree -------------------------------------------------
    // nodes: regions 0..n_regions, then circles
    let n_circ = raw_circles.len();
    assert_eq!(
        n_regions,
        n_circ + 1,
        "regions of a smoothed planar diagram exceed circles by one"
    );
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_regions + n_circ];
    for (i, s) in sides.iter().enumerate() {
        for &f in s {
            adj[f].push(n_regions + i);
            adj[n_regions + i].push(f);
        }
    }
    let mut level = vec![usize::MAX; n_regions + n_circ];
    let mut bfs_parent = vec![usize::MAX; n_regions + n_circ];
    let mut queue = vec![outer_region];
    level[outer_region] = 0;
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                bfs_parent[w] = v;
                queue.push(w);
            }
        }
    }
    assert!(
        level.iter().all(|&l| l != usize::MAX),
        "region-circle incidence graph must be connected"
    );

    let mut depths = Vec::with_capacity(n_circ);
    let mut parents_raw: Vec<Option<usize>> = Vec::with_capacity(n_circ);
    let mut oriented_sides: Vec<[usize; 2]> = Vec::with_capacity(n_circ);
    for (i, side) in sides.iter().enumerate().take(n_circ) {
        let node = n_regions + i;
        debug_assert_eq!(level[node] % 2, 1);
        depths.push((level[node] - 1) / 2);
        let outer_side = bfs_parent[node];
        let inner_side = if side[0] == outer_side { side[1] } else { side[0] };
        oriented_sides.push([outer_side, inner_side]);
        let up = bfs_parent[outer_side];
        parents_raw.push(if up == usize::MAX { None } else { Some(up - n_regions) });
    }

    // --- canonical order ---------------------------------------------------
    let mut order: Vec<usize> = (0..n_circ).collect();
    order.sort_by_key(|&i| {
        (depths[i], *raw_circles[i].0.iter().min().expect("nonempty circle"))
    });
    let mut rank = vec![0usize; n_circ];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let circles: Vec<Circle> = order
        .iter()
        .map(|&old| Circle {
            arcs: raw_circles[old].0.clone(),
            joins: raw_circles[old].1.clone(),
            depth: depths[old],
            parent: parents_raw[old].map(|p| rank[p]),
            sides: oriented_sides[old],
        })
        .collect();
    let mut join_circle = BTreeMap::new();
    for (i, c) in circles.iter().enumerate() {
        for &j in &c.joins {
            join_circle.insert(j, i);
        }
    }

    ResolvedState { word, circles, n_regions, outer_region, join_circle }
}

/// Rotates/reflects a traced circle to its lexicographically least form.
fn canonicalize_circle(
    arcs: Vec<EdgeId>,
    joins: Vec<(usize, u8)>,
) -> (Vec<EdgeId>, Vec<(usize, u8)>) {
    let l = arcs.len();
    debug_assert_eq!(l, joins.len());
    if l <= 1 {
        return (arcs, joins);
    }
    // reversed traversal: after join[k] comes arc[k-1]
    let rev_arcs: Vec<EdgeId> = (0..l).map(|i| arcs[(2 * l - 2 - i) % l]).collect();
    let rev_joins: Vec<(usize, u8)> = (0..l).map(|i| joins[l - 1 - i]).collect();
    let mut best: Option<RawCircle> = None;
    for (a, j) in [(&arcs, &joins), (&rev_arcs, &rev_joins)] {
        for r in 0..l {
            let cand_a: Vec<EdgeId> = (0..l).map(|i| a[(r + i) % l]).collect();
            let cand_j: Vec<(usize, u8)> = (0..l).map(|i| j[(r + i) % l]).collect();
            let cand = (cand_a, cand_j);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// Convenience: nesting depths of the circles of `resolve(diagram, word)`.
pub fn nesting_depths(diagram: &LinkDiagram, word: Word) -> Vec<usize> {
    resolve(diagram, word).depths()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleKind {
    Merge,
    Split,
}

/// The local shape of the saddle along one hypercube edge.
#[derive(Clone, Debug)]
pub struct SaddleData {
    pub crossing: usize,
    pub kind: SaddleKind,
    /// The active circles are nested (one contains the other).
    pub nested: bool,
    /// Merge: tail circles as [through pocket 0, through pocket 1].
    /// Split: the lone tail circle.
    pub tail_active: Vec<usize>,
    /// Merge: the lone head circle.
    /// Split: head circles as [through pocket 0, through pocket 1].
    pub head_active: Vec<usize>,
    /// When nested: position (0/1) of the inner circle in the active pair.
    pub inner: Option<usize>,
    /// Untouched circles, matched (tail index, head index).
    pub passive: Vec<(usize, usize)>,
}

impl SaddleData {
    /// Active pair reordered (inner, outer); merge reads the tail pair,
    /// split the head pair.  Panics when not nested.
    pub fn inner_outer(&self) -> (usize, usize) {
        let pair = match self.kind {
            SaddleKind::Merge => &self.tail_active,
            SaddleKind::Split => &self.head_active,
        };
        match self.inner.expect("inner_outer on an unnested saddle") {
            0 => (pair[0], pair[1]),
            _ => (pair[1], pair[0]),
        }
    }
}

/// Classifies the saddle from `tail` to `head` at `crossing` (tail has bit
/// 0 there, head bit 1; the states differ only in that bit).
pub fn classify_saddle(
    tail: &ResolvedState,
    head: &ResolvedState,
    crossing: usize,
) -> SaddleData {
    debug_assert_eq!(word_bit(tail.word, crossing), 0);
    debug_assert_eq!(head.word, tail.word | (1 << crossing));

    let t0 = tail.circle_at_join(crossing, 0);
    let t1 = tail.circle_at_join(crossing, 1);
    let h0 = head.circle_at_join(crossing, 0);
    let h1 = head.circle_at_join(crossing, 1);

    let (kind, tail_active, head_active) = if t0 != t1 {
        debug_assert_eq!(h0, h1, "merge must close into one circle");
        (SaddleKind::Merge, vec![t0, t1], vec![h0])
    } else {
        debug_assert_ne!(h0, h1, "split must open into two circles");
        (SaddleKind::Split, vec![t0], vec![h0, h1])
    };

    // nesting of the active pair; saddles only relate a circle to its
    // parent, its child, or a sibling
    let (state, pair) = match kind {
        SaddleKind::Merge => (tail, &tail_active),
        SaddleKind::Split => (head, &head_active),
    };
    let (a, b) = (pair[0], pair[1]);
    let (da, db) = (state.circles[a].depth, state.circles[b].depth);
    let nested = da != db;
    let inner = if nested {
        let (deep, shallow) = if da > db { (a, b) } else { (b, a) };
        assert_eq!(
            state.circles[deep].depth,
            state.circles[shallow].depth + 1,
            "saddle circles must be parent and child when nested"
        );
        assert_eq!(state.circles[deep].parent, Some(shallow));
        Some(if deep == pair[0] { 0 } else { 1 })
    } else {
        assert_eq!(state.circles[a].parent, state.circles[b].parent);
        None
    };

    // passive matching by identical arc sets
    let mut head_by_min: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (i, c) in head.circles.iter().enumerate() {
        if !head_active.contains(&i) {
            head_by_min.insert(c.min_arc(), i);
        }
    }
    let mut passive = Vec::new();
    for (i, c) in tail.circles.iter().enumerate() {
        if tail_active.contains(&i) {
            continue;
        }
        let j = *head_by_min
            .get(&c.min_arc())
            .expect("passive circle must persist across the saddle");
        assert_eq!(tail.circles[i].arcs, head.circles[j].arcs);
        passive.push((i, j));
    }
    assert_eq!(passive.len() + tail_active.len(), tail.n_circles());
    assert_eq!(passive.len() + head_active.len(), head.n_circles());

    SaddleData { crossing, kind, nested, tail_active, head_active, inner, passive }
}
