//! Planar link diagrams as PD codes.
//!
//! A crossing `X[a,b,c,d]` lists its four edges counterclockwise, starting
//! from the incoming under-strand:
//!
//! ```text
//!         c
//!         |
//!    d ---+--- b         slot 0 = a (under, in)   slot 1 = b
//!         |              slot 2 = c (under, out)  slot 3 = d
//!         a
//! ```
//!
//! The 0-smoothing joins a-b and c-d; the 1-smoothing joins a-d and b-c.
//! A crossing is positive when its over-strand runs d -> b (enters at slot
//! 3), negative when it runs b -> d.  Orientations are not part of the code:
//! they are recovered by walking strands out of the under-slots.  Components
//! that pass over at every crossing have no forced orientation; parsing such
//! a diagram is an error unless an explicit choice is supplied.
//!
//! `U` tokens denote crossing-free unknot components.  The rotation system
//! implied by the slot order is validated against Euler's formula, so
//! non-planar codes are rejected.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// 1-based edge identifier from the PD code.
pub type EdgeId = u32;

/// One end of an edge: a slot of a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Dart {
    pub crossing: usize,
    pub slot: usize,
}

impl Dart {
    pub fn new(crossing: usize, slot: usize) -> Self {
        Dart { crossing, slot }
    }
}

/// A crossing with its four edges in slot order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub edges: [EdgeId; 4],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramError {
    /// No tokens at all.
    Empty,
    /// Unexpected character at byte offset.
    Syntax { offset: usize, found: char },
    /// A crossing token without exactly four edges.
    Arity { token: usize },
    /// Edge id 0 is reserved.
    ZeroEdge { token: usize },
    /// An edge id must occur exactly twice.
    EdgeCount { edge: EdgeId, count: usize },
    /// Edge ids must form the contiguous range 1..=2c.
    NonContiguous { missing: EdgeId },
    /// Strand walking assigned both directions to one edge end.
    InconsistentOrientation { crossing: usize },
    /// Components passing over at every crossing need an explicit choice.
    AmbiguousOrientation { components: usize },
    /// Fewer orientation choices supplied than ambiguous components.
    OrientationOverride { expected: usize, got: usize },
    /// The rotation system fails Euler's formula, so the code is not planar.
    NonPlanar { component: usize },
}

impl core::fmt::Display for DiagramError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DiagramError::Empty => write!(f, "empty diagram: no X or U tokens"),
            DiagramError::Syntax { offset, found } => {
                write!(f, "unexpected character {found:?} at offset {offset}")
            }
            DiagramError::Arity { token } => {
                write!(f, "crossing token {token} does not have exactly four edges")
            }
            DiagramError::ZeroEdge { token } => {
                write!(f, "crossing token {token} uses edge id 0 (ids are 1-based)")
            }
            DiagramError::EdgeCount { edge, count } => {
                write!(f, "edge {edge} occurs {count} times (every edge occurs exactly twice)")
            }
            DiagramError::NonContiguous { missing } => {
                write!(f, "edge ids are not contiguous: {missing} is missing")
            }
            DiagramError::InconsistentOrientation { crossing } => {
                write!(f, "strand walk assigns two directions at crossing {crossing}")
            }
            DiagramError::AmbiguousOrientation { components } => {
                write!(
                    f,
                    "{components} component(s) pass over at every crossing; \
                     supply an orientation override"
                )
            }
            DiagramError::OrientationOverride { expected, got } => {
                write!(f, "orientation override needs {expected} signs, got {got}")
            }
            DiagramError::NonPlanar { component } => {
                write!(f, "diagram component {component} fails Euler's formula (not planar)")
            }
        }
    }
}

impl core::error::Error for DiagramError {}

/// A validated, oriented planar link diagram.
#[derive(Clone, Debug)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    n_edges: usize,
    /// Edge id - 1 -> its two ends, lexicographic.
    occ: Vec<[Dart; 2]>,
    /// Edge id - 1 -> (tail, head): the edge runs tail -> head.
    dir: Vec<(Dart, Dart)>,
    /// Per crossing: +1 or -1.
    signs: Vec<i8>,
    /// Link components, free loops included.
    components: usize,
    /// Connected components of the underlying 4-valent graph.
    graph_components: usize,
    component_of_crossing: Vec<usize>,
    /// Quadrant (crossing, q) -> face id.  Quadrant q is the sector between
    /// slot q and slot q+1.
    face_of_quadrant: Vec<[usize; 4]>,
    n_faces: usize,
    /// Per graph component: its default outer face (left of its least edge).
    component_outer: Vec<usize>,
}

impl LinkDiagram {
    /// Builds and validates a diagram.  `orient` supplies directions for
    /// orientation-ambiguous components, in order of their least edge id:
    /// `true` directs the least edge from its lexicographically first end.
    pub fn from_crossings(
        crossings: Vec<[EdgeId; 4]>,
        free_loops: usize,
        orient: Option<&[bool]>,
    ) -> Result<Self, DiagramError> {
        if crossings.is_empty() && free_loops == 0 {
            return Err(DiagramError::Empty);
        }
        let crossings: Vec<Crossing> = crossings.into_iter().map(|edges| Crossing { edges }).collect();
        let n_cross = crossings.len();

        // collect edge occurrences
        let mut occ_map: BTreeMap<EdgeId, Vec<Dart>> = BTreeMap::new();
        for (ci, x) in crossings.iter().enumerate() {
            for (s, &e) in x.edges.iter().enumerate() {
                occ_map.entry(e).or_default().push(Dart::new(ci, s));
            }
        }
        for (&e, ends) in &occ_map {
            if ends.len() != 2 {
                return Err(DiagramError::EdgeCount { edge: e, count: ends.len() });
            }
        }
        let n_edges = 2 * n_cross;
        for e in 1..=n_edges as EdgeId {
            if !occ_map.contains_key(&e) {
                return Err(DiagramError::NonContiguous { missing: e });
            }
        }
        let occ: Vec<[Dart; 2]> =
            occ_map.values().map(|ends| [ends[0], ends[1]]).collect();

        let diagram = DiagramBuilder { crossings, free_loops, n_edges, occ };
        diagram.finish(orient)
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn edge_at(&self, d: Dart) -> EdgeId {
        self.crossings[d.crossing].edges[d.slot]
    }

    /// The other end of the edge at `d`.
    pub fn other_end(&self, d: Dart) -> Dart {
        let [p, q] = self.occ[(self.edge_at(d) - 1) as usize];
        if p == d {
            q
        } else {
            p
        }
    }

    /// (tail, head) of an edge: it is directed tail -> head.
    pub fn edge_dir(&self, e: EdgeId) -> (Dart, Dart) {
        self.dir[(e - 1) as usize]
    }

    pub fn sign(&self, crossing: usize) -> i8 {
        self.signs[crossing]
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn positive_crossings(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn negative_crossings(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn n_faces(&self) -> usize {
        self.n_faces
    }

    pub fn face_of_quadrant(&self, crossing: usize, quadrant: usize) -> usize {
        self.face_of_quadrant[crossing][quadrant]
    }

    pub fn graph_components(&self) -> usize {
        self.graph_components
    }

    pub fn component_of_crossing(&self, crossing: usize) -> usize {
        self.component_of_crossing[crossing]
    }

    /// Default outer faces, one per graph component: the face on the left of
    /// the component's least edge, at that edge's tail.
    pub fn component_outer_faces(&self) -> &[usize] {
        &self.component_outer
    }

    /// The default global outer face (component 0's default).
    pub fn default_outer_face(&self) -> usize {
        self.component_outer.first().copied().unwrap_or(0)
    }

    /// Canonical serialization: `X[..]` tokens then `U` tokens, `;`-joined.
    pub fn pd_string(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X[{},{},{},{}]", x.edges[0], x.edges[1], x.edges[2], x.edges[3]))
            .collect();
        for _ in 0..self.free_loops {
            parts.push(String::from("U"));
        }
        parts.join(";")
    }

    /// FNV-1a hash of the canonical serialization, as fixed-width hex.
    pub fn hash_hex(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.pd_string().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    /// The same diagram with every strand reversed: `X[a,b,c,d] -> X[c,d,a,b]`.
    pub fn reversed(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|x| [x.edges[2], x.edges[3], x.edges[0], x.edges[1]])
            .collect();
        LinkDiagram::from_crossings(crossings, self.free_loops, None)
            .or_else(|_| {
                // ambiguous components stay ambiguous after reversal; any
                // choice keeps signs intact
                let crossings = self
                    .crossings
                    .iter()
                    .map(|x| [x.edges[2], x.edges[3], x.edges[0], x.edges[1]])
                    .collect();
                LinkDiagram::from_crossings(crossings, self.free_loops, Some(&[true; 64]))
            })
            .expect("reversal of a valid diagram is valid")
    }
}

struct DiagramBuilder {
    crossings: Vec<Crossing>,
    free_loops: usize,
    n_edges: usize,
    occ: Vec<[Dart; 2]>,
}

impl DiagramBuilder {
    fn edge_at(&self, d: Dart) -> EdgeId {
        self.crossings[d.crossing].edges[d.slot]
    }

    fn other_end(&self, d: Dart) -> Dart {
        let [p, q] = self.occ[(self.edge_at(d) - 1) as usize];
        if p == d {
            q
        } else {
            p
        }
    }

    fn finish(self, orient: Option<&[bool]>) -> Result<LinkDiagram, DiagramError> {
        let n_cross = self.crossings.len();
        let dart_id = |d: Dart| d.crossing * 4 + d.slot;

        // --- orientation walk -------------------------------------------
        // incoming[dart] = Some(true) if the edge at the dart points into the
        // crossing there.  Under-slots are forced; the rest propagates.
        let mut incoming: Vec<Option<bool>> = vec![None; 4 * n_cross];
        let mut queue: Vec<Dart> = Vec::new();
        let assign = |inc: &mut Vec<Option<bool>>,
                          queue: &mut Vec<Dart>,
                          d: Dart,
                          v: bool|
         -> Result<(), DiagramError> {
            match inc[dart_id(d)] {
                None => {
                    inc[dart_id(d)] = Some(v);
                    queue.push(d);
                    Ok(())
                }
                Some(old) if old == v => Ok(()),
                Some(_) => Err(DiagramError::InconsistentOrientation { crossing: d.crossing }),
            }
        };
        for c in 0..n_cross {
            assign(&mut incoming, &mut queue, Dart::new(c, 0), true)?;
            assign(&mut incoming, &mut queue, Dart::new(c, 2), false)?;
        }
        let mut head = 0;
        let propagate = |incoming: &mut Vec<Option<bool>>,
                             queue: &mut Vec<Dart>,
                             head: &mut usize|
         -> Result<(), DiagramError> {
            while *head < queue.len() {
                let d = queue[*head];
                *head += 1;
                let v = incoming[dart_id(d)].unwrap();
                // the other end of the same edge points the other way
                let o = self.other_end(d);
                match incoming[dart_id(o)] {
                    None => {
                        incoming[dart_id(o)] = Some(!v);
                        queue.push(o);
                    }
                    Some(x) if x == !v => {}
                    Some(_) => {
                        return Err(DiagramError::InconsistentOrientation { crossing: o.crossing })
                    }
                }
                // an over-strand enters one of slots 1/3 and leaves the other
                if d.slot == 1 || d.slot == 3 {
                    let p = Dart::new(d.crossing, 4 - d.slot);
                    match incoming[dart_id(p)] {
                        None => {
                            incoming[dart_id(p)] = Some(!v);
                            queue.push(p);
                        }
                        Some(x) if x == !v => {}
                        Some(_) => {
                            return Err(DiagramError::InconsistentOrientation {
                                crossing: d.crossing,
                            })
                        }
                    }
                }
            }
            Ok(())
        };
        propagate(&mut incoming, &mut queue, &mut head)?;

        // components passing over everywhere are still unoriented: group the
        // undetermined darts into strands, least edge first
        let mut ambiguous: Vec<(EdgeId, Dart)> = Vec::new();
        let mut seen = vec![false; 4 * n_cross];
        for c in 0..n_cross {
            for s in [1usize, 3] {
                let d = Dart::new(c, s);
                if incoming[dart_id(d)].is_some() || seen[dart_id(d)] {
                    continue;
                }
                // walk the strand, recording its least edge
                let mut least = self.edge_at(d);
                let mut cur = d;
                loop {
                    seen[dart_id(cur)] = true;
                    let o = self.other_end(cur);
                    seen[dart_id(o)] = true;
                    least = least.min(self.edge_at(cur));
                    cur = Dart::new(o.crossing, 4 - o.slot);
                    if cur == d {
                        break;
                    }
                }
                ambiguous.push((least, d));
            }
        }
        ambiguous.sort();
        if !ambiguous.is_empty() {
            let Some(orient) = orient else {
                return Err(DiagramError::AmbiguousOrientation { components: ambiguous.len() });
            };
            if orient.len() < ambiguous.len() {
                return Err(DiagramError::OrientationOverride {
                    expected: ambiguous.len(),
                    got: orient.len(),
                });
            }
            for ((least, _), &fwd) in ambiguous.iter().zip(orient) {
                let [p, _] = self.occ[(*least - 1) as usize];
                // `true`: the least edge leaves from its first-listed end
                assign(&mut incoming, &mut queue, p, !fwd)?;
                propagate(&mut incoming, &mut queue, &mut head)?;
            }
        }

        // record edge directions and crossing signs
        let mut dir = Vec::with_capacity(self.n_edges);
        for e in 1..=self.n_edges as EdgeId {
            let [p, q] = self.occ[(e - 1) as usize];
            let p_in = incoming[dart_id(p)].expect("all darts oriented");
            dir.push(if p_in { (q, p) } else { (p, q) });
        }
        let signs: Vec<i8> = (0..n_cross)
            .map(|c| {
                if incoming[c * 4 + 3] == Some(true) {
                    1
                } else {
                    -1
                }
            })
            .collect();

        // link components: follow strands through crossings
        let mut comp_seen = vec![false; 4 * n_cross];
        let mut components = self.free_loops;
        for c in 0..n_cross {
            for s in 0..4 {
                let d = Dart::new(c, s);
                if comp_seen[dart_id(d)] || incoming[dart_id(d)] != Some(true) {
                    continue;
                }
                components += 1;
                let mut cur = d;
                loop {
                    comp_seen[dart_id(cur)] = true;
                    let out = Dart::new(cur.crossing, (cur.slot + 2) % 4);
                    comp_seen[dart_id(out)] = true;
                    cur = self.other_end(out);
                    if cur == d {
                        break;
                    }
                }
            }
        }

        // graph components of the 4-valent map
        let mut component_of_crossing = vec![usize::MAX; n_cross];
        let mut graph_components = 0;
        for start in 0..n_cross {
            if component_of_crossing[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            component_of_crossing[start] = graph_components;
            while let Some(c) = stack.pop() {
                for s in 0..4 {
                    let o = self.other_end(Dart::new(c, s));
                    if component_of_crossing[o.crossing] == usize::MAX {
                        component_of_crossing[o.crossing] = graph_components;
                        stack.push(o.crossing);
                    }
                }
            }
            graph_components += 1;
        }

        // --- faces of the 4-valent map -----------------------------------
        // quadrant (c, q) is the sector between slots q and q+1; the face
        // walk leaves along slot q+1 and re-enters at the far end's sector
        let mut face_of_quadrant = vec![[usize::MAX; 4]; n_cross];
        let mut n_faces = 0;
        for c in 0..n_cross {
            for q in 0..4 {
                if face_of_quadrant[c][q] != usize::MAX {
                    continue;
                }
                let (mut cc, mut cq) = (c, q);
                loop {
                    face_of_quadrant[cc][cq] = n_faces;
                    let far = self.other_end(Dart::new(cc, (cq + 1) % 4));
                    (cc, cq) = (far.crossing, far.slot);
                    if face_of_quadrant[cc][cq] != usize::MAX {
                        break;
                    }
                }
                n_faces += 1;
            }
        }
        if n_cross == 0 {
            n_faces = 1; // the bare sphere
        }

        // Euler check per graph component: V - 2V + F = 2
        for g in 0..graph_components {
            let v = component_of_crossing.iter().filter(|&&x| x == g).count();
            let mut faces_here = vec![false; n_faces];
            for c in 0..n_cross {
                if component_of_crossing[c] == g {
                    for q in 0..4 {
                        faces_here[face_of_quadrant[c][q]] = true;
                    }
                }
            }
            let f = faces_here.iter().filter(|&&x| x).count();
            if f != v + 2 {
                return Err(DiagramError::NonPlanar { component: g });
            }
        }

        // default outer face per graph component: left of its least edge
        let mut component_outer = vec![usize::MAX; graph_components.max(1)];
        if n_cross == 0 {
            component_outer[0] = 0;
        }
        for e in 1..=self.n_edges as EdgeId {
            let (tail, _) = dir[(e - 1) as usize];
            let g = component_of_crossing[tail.crossing];
            if component_outer[g] == usize::MAX {
                // walking out of the tail, the left side is the CCW sector
                // at the tail slot
                component_outer[g] = face_of_quadrant[tail.crossing][tail.slot];
            }
        }

        Ok(LinkDiagram {
            crossings: self.crossings,
            free_loops: self.free_loops,
            n_edges: self.n_edges,
            occ: self.occ,
            dir,
            signs,
            components,
            graph_components,
            component_of_crossing,
            face_of_quadrant,
            n_faces,
            component_outer,
        })
    }
}

/// Parses PD text: `X[a,b,c,d]` and `U` tokens separated by `;`, `,` or
/// whitespace, with an optional `PD[ ... ]` wrapper.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    parse_pd_oriented(text, None)
}

/// [`parse_pd`] with an orientation override for ambiguous components.
pub fn parse_pd_oriented(
    text: &str,
    orient: Option<&[bool]>,
) -> Result<LinkDiagram, DiagramError> {
    let (crossings, free_loops) = parse_tokens(text)?;
    LinkDiagram::from_crossings(crossings, free_loops, orient)
}

/// Token-level parse: crossings plus the number of `U` tokens.
pub fn parse_tokens(text: &str) -> Result<(Vec<[EdgeId; 4]>, usize), DiagramError> {
    let mut body = text.trim();
    let lower = body.to_ascii_lowercase();
    if lower.starts_with("pd[") && body.ends_with(']') {
        body = body[3..body.len() - 1].trim();
    }

    let bytes = body.as_bytes();
    let base_offset = text.len() - text.trim_start().len();
    let mut i = 0;
    let mut crossings = Vec::new();
    let mut free_loops = 0;
    let mut token = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_whitespace() || ch == ';' || ch == ',' {
            i += 1;
            continue;
        }
        token += 1;
        if ch == 'U' || ch == 'u' {
            free_loops += 1;
            i += 1;
            continue;
        }
        if ch != 'X' && ch != 'x' {
            return Err(DiagramError::Syntax { offset: base_offset + i, found: ch });
        }
        i += 1;
        while i < bytes.len() && (bytes[i] as char).is_whitespace() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != b'[' {
            let found = if i < bytes.len() { bytes[i] as char } else { ' ' };
            return Err(DiagramError::Syntax { offset: base_offset + i, found });
        }
        i += 1;
        let close = body[i..]
            .find(']')
            .ok_or(DiagramError::Syntax { offset: base_offset + body.len() - 1, found: ' ' })?;
        let inner = &body[i..i + close];
        let mut edges = [0 as EdgeId; 4];
        let mut count = 0;
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            if count == 4 {
                return Err(DiagramError::Arity { token });
            }
            edges[count] = part
                .parse::<EdgeId>()
                .map_err(|_| DiagramError::Syntax { offset: base_offset + i, found: '?' })?;
            count += 1;
        }
        if count != 4 {
            return Err(DiagramError::Arity { token });
        }
        if edges.contains(&0) {
            return Err(DiagramError::ZeroEdge { token });
        }
        crossings.push(edges);
        i += close + 1;
    }
    if crossings.is_empty() && free_loops == 0 {
        return Err(DiagramError::Empty);
    }
    Ok((crossings, free_loops))
}

/// The bundled 3-crossing (left-handed) trefoil.
pub fn trefoil_pd() -> LinkDiagram {
    LinkDiagram::from_crossings(
        vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]],
        0,
        None,
    )
    .expect("bundled trefoil is valid")
}
