//! Combinatorial ideal triangulations of punctured surfaces.
//!
//! A triangulation is a gluing table: every side `(triangle, side)` is paired
//! with exactly one other side. Sides of a triangle are numbered
//! counterclockwise, side `k` running from vertex `k` to vertex `k + 1`, and
//! every gluing reverses orientation. Edges are the orbits of the gluing and
//! are labelled in the order they are first met while scanning the table.
//!
//! Closed curves are stored as cyclic corner words: each [`Step`] records the
//! triangle a curve passes through together with the side it enters by and
//! the side it leaves by.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("triangulation has no triangles")]
    Empty,
    #[error("side {0} is glued outside the triangle table")]
    OutOfRange(Slot),
    #[error("side {0} is glued to itself")]
    SelfGluedSide(Slot),
    #[error("gluing is not an involution at side {0}")]
    NonInvolutiveGluing(Slot),
    #[error("triangulation is disconnected: triangle {0} is unreachable from triangle 0")]
    Disconnected(usize),
    #[error("surface has non-negative Euler characteristic {0}")]
    NonHyperbolic(i64),
    #[error("unknown surface name `{0}`")]
    UnknownName(String),
    #[error("curve word is empty")]
    EmptyCurve,
    #[error("curve cancels completely")]
    TrivialCurve,
    #[error("step {index} does not match the gluing: {reason}")]
    IncompatibleStep { index: usize, reason: String },
    #[error("step {0} enters and exits through the same side")]
    Backtrack(usize),
}

/// A side of a triangle, or (depending on context) a corner of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub triangle: usize,
    pub side: u8,
}

impl Slot {
    pub fn new(triangle: usize, side: u8) -> Self {
        Slot { triangle, side }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.triangle, self.side)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

pub(crate) fn next_side(s: u8) -> u8 {
    (s + 1) % 3
}

pub(crate) fn prev_side(s: u8) -> u8 {
    (s + 2) % 3
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealTriangulation {
    gluing: Vec<[Slot; 3]>,
    edge_of: Vec<[EdgeId; 3]>,
    edges: Vec<(Slot, Slot)>,
}

impl IdealTriangulation {
    /// Builds and validates a triangulation from its gluing table.
    pub fn new(gluing: Vec<[Slot; 3]>) -> Result<Self, TopologyError> {
        validate_table(&gluing)?;
        let mut edge_of = vec![[EdgeId(usize::MAX); 3]; gluing.len()];
        let mut edges = Vec::with_capacity(gluing.len() * 3 / 2);
        for t in 0..gluing.len() {
            for s in 0..3u8 {
                if edge_of[t][s as usize].0 != usize::MAX {
                    continue;
                }
                let id = EdgeId(edges.len());
                let other = gluing[t][s as usize];
                edge_of[t][s as usize] = id;
                edge_of[other.triangle][other.side as usize] = id;
                edges.push((Slot::new(t, s), other));
            }
        }
        let tri = IdealTriangulation { gluing, edge_of, edges };
        let chi = tri.euler_characteristic();
        if chi >= 0 {
            return Err(TopologyError::NonHyperbolic(chi));
        }
        Ok(tri)
    }

    pub fn from_pairs(table: &[[(usize, u8); 3]]) -> Result<Self, TopologyError> {
        Self::new(table.iter().map(|row| row.map(|(t, s)| Slot::new(t, s))).collect())
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<(), TopologyError> {
        validate_table(&self.gluing)
    }

    pub fn triangle_count(&self) -> usize {
        self.gluing.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn glued(&self, slot: Slot) -> Slot {
        self.gluing[slot.triangle][slot.side as usize]
    }

    pub fn gluing_table(&self) -> &[[Slot; 3]] {
        &self.gluing
    }

    pub fn edge(&self, slot: Slot) -> EdgeId {
        self.edge_of[slot.triangle][slot.side as usize]
    }

    /// The two sides making up an edge, in discovery order.
    pub fn edge_sides(&self, e: EdgeId) -> (Slot, Slot) {
        self.edges[e.0]
    }

    /// F - E, ideal vertices excluded.
    pub fn euler_characteristic(&self) -> i64 {
        self.triangle_count() as i64 - self.edge_count() as i64
    }

    /// Corner cycles around the punctures.
    ///
    /// Corner `(t, j)` sits at vertex `j`, between sides `j - 1` and `j`. The
    /// walk crosses side `j` and continues with the counterclockwise-adjacent
    /// corner of the neighbouring triangle.
    pub fn cusps(&self) -> Vec<CuspCycle> {
        let mut seen = vec![[false; 3]; self.triangle_count()];
        let mut out = Vec::new();
        for t in 0..self.triangle_count() {
            for j in 0..3u8 {
                if seen[t][j as usize] {
                    continue;
                }
                let mut corners = Vec::new();
                let mut cur = Slot::new(t, j);
                while !seen[cur.triangle][cur.side as usize] {
                    seen[cur.triangle][cur.side as usize] = true;
                    corners.push(cur);
                    let across = self.glued(cur);
                    cur = Slot::new(across.triangle, next_side(across.side));
                }
                out.push(CuspCycle { corners });
            }
        }
        out
    }
}

fn validate_table(gluing: &[[Slot; 3]]) -> Result<(), TopologyError> {
    if gluing.is_empty() {
        return Err(TopologyError::Empty);
    }
    let n = gluing.len();
    for (t, row) in gluing.iter().enumerate() {
        for (s, &other) in row.iter().enumerate() {
            let me = Slot::new(t, s as u8);
            if other.triangle >= n || other.side > 2 {
                return Err(TopologyError::OutOfRange(me));
            }
            if other == me {
                return Err(TopologyError::SelfGluedSide(me));
            }
            if gluing[other.triangle][other.side as usize] != me {
                return Err(TopologyError::NonInvolutiveGluing(me));
            }
        }
    }
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        for other in &gluing[t] {
            if !reached[other.triangle] {
                reached[other.triangle] = true;
                queue.push_back(other.triangle);
            }
        }
    }
    if let Some(t) = reached.iter().position(|r| !r) {
        return Err(TopologyError::Disconnected(t));
    }
    Ok(())
}

/// Corners around one puncture, in walking order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspCycle {
    pub corners: Vec<Slot>,
}

impl CuspCycle {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    /// Edges crossed while walking once around the puncture, with multiplicity.
    pub fn edges(&self, tri: &IdealTriangulation) -> Vec<EdgeId> {
        self.corners.iter().map(|&c| tri.edge(c)).collect()
    }

    /// The loop around the puncture as a corner word.
    pub fn peripheral_word(&self, tri: &IdealTriangulation) -> CurveWord {
        let steps = self
            .corners
            .iter()
            .map(|c| Step::new(c.triangle, prev_side(c.side), c.side))
            .collect();
        CurveWord::new(tri, steps).expect("corner cycles are closed walks")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Turn {
    /// Exit side is `entry - 1`; the curve turns around the right-hand
    /// vertex of the entry side as seen from inside the triangle.
    Left,
    /// Exit side is `entry + 1`.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub triangle: usize,
    pub entry: u8,
    pub exit: u8,
}

impl Step {
    pub fn new(triangle: usize, entry: u8, exit: u8) -> Self {
        Step { triangle, entry, exit }
    }

    /// `None` for a U-turn (entry equals exit).
    pub fn turn(&self) -> Option<Turn> {
        if self.exit == next_side(self.entry) {
            Some(Turn::Right)
        } else if self.exit == prev_side(self.entry) {
            Some(Turn::Left)
        } else {
            None
        }
    }

    /// Vertex index of the corner the step turns around.
    pub fn corner(&self) -> u8 {
        match self.turn() {
            Some(Turn::Right) => next_side(self.entry),
            _ => self.entry,
        }
    }

    pub fn reversed(&self) -> Step {
        Step::new(self.triangle, self.exit, self.entry)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}>{}", self.triangle, self.entry, self.exit)
    }
}

/// Reduced cyclic corner word of a closed curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveWord {
    steps: Vec<Step>,
}

pub(crate) fn check_closed(tri: &IdealTriangulation, steps: &[Step]) -> Result<(), TopologyError> {
    if steps.is_empty() {
        return Err(TopologyError::EmptyCurve);
    }
    let n = steps.len();
    for (i, st) in steps.iter().enumerate() {
        if st.triangle >= tri.triangle_count() || st.entry > 2 || st.exit > 2 {
            return Err(TopologyError::IncompatibleStep {
                index: i,
                reason: format!("{st} is outside the triangulation"),
            });
        }
        let next = steps[(i + 1) % n];
        let across = tri.glued(Slot::new(st.triangle, st.exit));
        if across != Slot::new(next.triangle, next.entry) {
            return Err(TopologyError::IncompatibleStep {
                index: i,
                reason: format!(
                    "side {}.{} is glued to {across}, not {}.{}",
                    st.triangle, st.exit, next.triangle, next.entry
                ),
            });
        }
    }
    Ok(())
}

impl CurveWord {
    /// Checks gluing compatibility and the absence of U-turns.
    pub fn new(tri: &IdealTriangulation, steps: Vec<Step>) -> Result<Self, TopologyError> {
        check_closed(tri, &steps)?;
        if let Some(i) = steps.iter().position(|s| s.entry == s.exit) {
            return Err(TopologyError::Backtrack(i));
        }
        Ok(CurveWord { steps })
    }

    /// Follows a cyclic sequence of exit edges starting inside `start`.
    ///
    /// Fails when an edge is not a side of the current triangle, when the
    /// choice of side is ambiguous, or when the walk does not close up.
    pub fn from_edge_path(tri: &IdealTriangulation, start: usize, exits: &[EdgeId]) -> Result<Self, TopologyError> {
        if exits.is_empty() {
            return Err(TopologyError::EmptyCurve);
        }
        if start >= tri.triangle_count() {
            return Err(TopologyError::IncompatibleStep {
                index: 0,
                reason: format!("triangle {start} does not exist"),
            });
        }
        let side_of = |t: usize, e: EdgeId, index: usize| -> Result<u8, TopologyError> {
            let sides: Vec<u8> = (0..3u8).filter(|&s| tri.edge(Slot::new(t, s)) == e).collect();
            match sides.as_slice() {
                [s] => Ok(*s),
                [] => Err(TopologyError::IncompatibleStep {
                    index,
                    reason: format!("{e} is not a side of triangle {t}"),
                }),
                _ => Err(TopologyError::IncompatibleStep {
                    index,
                    reason: format!("{e} appears twice in triangle {t}"),
                }),
            }
        };
        let mut exit_slots = Vec::with_capacity(exits.len());
        let mut t = start;
        for (i, &e) in exits.iter().enumerate() {
            let s = side_of(t, e, i)?;
            exit_slots.push(Slot::new(t, s));
            t = tri.glued(Slot::new(t, s)).triangle;
        }
        let n = exits.len();
        let steps: Vec<Step> = (0..n)
            .map(|i| {
                let prev = exit_slots[(i + n - 1) % n];
                let entry = tri.glued(prev);
                Step::new(exit_slots[i].triangle, entry.side, exit_slots[i].side)
            })
            .collect();
        CurveWord::new(tri, steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Edge crossed when entering each step.
    pub fn entry_edges(&self, tri: &IdealTriangulation) -> Vec<EdgeId> {
        self.steps
            .iter()
            .map(|s| tri.edge(Slot::new(s.triangle, s.entry)))
            .collect()
    }

    /// Peripheral words turn the same way at every step.
    pub fn is_peripheral(&self) -> bool {
        let first = self.steps[0].turn();
        self.steps.iter().all(|s| s.turn() == first)
    }

    pub fn rotated(&self, k: usize) -> CurveWord {
        let mut steps = self.steps.clone();
        let n = steps.len();
        steps.rotate_left(k % n);
        CurveWord { steps }
    }

    pub fn reversed(&self) -> CurveWord {
        CurveWord {
            steps: self.steps.iter().rev().map(Step::reversed).collect(),
        }
    }

    /// The word traversed `k` times.
    pub fn power(&self, k: usize) -> CurveWord {
        CurveWord {
            steps: self
                .steps
                .iter()
                .copied()
                .cycle()
                .take(self.steps.len() * k.max(1))
                .collect(),
        }
    }

    /// Same unoriented free homotopy class. Reduced cyclic words in the dual
    /// graph are unique up to rotation, so this is a combinatorial test.
    pub fn same_class(&self, other: &CurveWord) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let rev = other.reversed();
        (0..self.len()).any(|k| {
            let r = self.rotated(k);
            r.steps == other.steps || r.steps == rev.steps
        })
    }
}

impl fmt::Display for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Cancels U-turn steps of a gluing-compatible cyclic word until none remain.
///
/// A U-turn step means the curve enters a triangle and leaves it at once
/// through the same side; its two neighbours then live in the same triangle
/// and merge into one step.
pub fn reduce(tri: &IdealTriangulation, raw: Vec<Step>) -> Result<CurveWord, TopologyError> {
    check_closed(tri, &raw)?;
    let mut steps = raw;
    while let Some(i) = steps.iter().position(|s| s.entry == s.exit) {
        let n = steps.len();
        if n <= 2 {
            return Err(TopologyError::TrivialCurve);
        }
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        let merged = Step::new(steps[prev].triangle, steps[prev].entry, steps[next].exit);
        // remove indices prev, i, next (cyclically) and put the merged step in their place
        let mut out = Vec::with_capacity(n - 2);
        let mut k = (next + 1) % n;
        while k != prev {
            out.push(steps[k]);
            k = (k + 1) % n;
        }
        out.push(merged);
        steps = out;
    }
    if steps.is_empty() {
        return Err(TopologyError::TrivialCurve);
    }
    CurveWord::new(tri, steps)
}

/// Every non-peripheral reduced closed word of at most `max_len` steps, one
/// per unoriented free homotopy class of words (powers included).
pub fn closed_words(tri: &IdealTriangulation, max_len: usize) -> Vec<CurveWord> {
    fn key(steps: &[Step]) -> Vec<(usize, u8, u8)> {
        steps.iter().map(|s| (s.triangle, s.entry, s.exit)).collect()
    }
    fn canonical(w: &CurveWord) -> Vec<(usize, u8, u8)> {
        let rev = w.reversed();
        (0..w.len())
            .flat_map(|k| [key(w.rotated(k).steps()), key(rev.rotated(k).steps())])
            .min()
            .expect("non-empty word")
    }
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut stack: Vec<(Slot, Vec<Step>)> = Vec::new();
    for t in 0..tri.triangle_count() {
        for side in 0..3u8 {
            stack.push((Slot::new(t, side), Vec::new()));
        }
    }
    while let Some((at, steps)) = stack.pop() {
        let start = steps
            .first()
            .map(|s: &Step| Slot::new(s.triangle, s.entry))
            .unwrap_or(at);
        if !steps.is_empty() && at == start {
            let w = CurveWord { steps: steps.clone() };
            if !w.is_peripheral() && seen.insert(canonical(&w)) {
                out.push(w);
            }
        }
        if steps.len() == max_len {
            continue;
        }
        for exit in [next_side(at.side), prev_side(at.side)] {
            let mut next = steps.clone();
            next.push(Step::new(at.triangle, at.side, exit));
            stack.push((tri.glued(Slot::new(at.triangle, exit)), next));
        }
    }
    out.sort_by_key(|w| (w.len(), key(w.steps())));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StandardSurface {
    OncePuncturedTorus,
    ThricePuncturedSphere,
    FourPuncturedSphere,
    TwicePuncturedTorus,
}

impl StandardSurface {
    pub const ALL: [StandardSurface; 4] = [
        StandardSurface::OncePuncturedTorus,
        StandardSurface::ThricePuncturedSphere,
        StandardSurface::FourPuncturedSphere,
        StandardSurface::TwicePuncturedTorus,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StandardSurface::OncePuncturedTorus => "once_punctured_torus",
            StandardSurface::ThricePuncturedSphere => "thrice_punctured_sphere",
            StandardSurface::FourPuncturedSphere => "four_punctured_sphere",
            StandardSurface::TwicePuncturedTorus => "twice_punctured_torus",
        }
    }
}

impl FromStr for StandardSurface {
    type Err = TopologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StandardSurface::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| TopologyError::UnknownName(s.to_string()))
    }
}

/// Named triangulations.
///
/// * once-punctured torus: side `k` of triangle 0 glued to side `k` of
///   triangle 1; edges `e0, e1, e2` are the sides `0, 1, 2`.
/// * thrice-punctured sphere: side `k` of triangle 0 glued to side `-k`
///   of triangle 1.
/// * four-punctured sphere: boundary of a tetrahedron.
/// * twice-punctured torus: a 2x1 grid of squares cut along diagonals.
pub fn standard_surface(kind: StandardSurface) -> IdealTriangulation {
    let table: Vec<[(usize, u8); 3]> = match kind {
        StandardSurface::OncePuncturedTorus => vec![[(1, 0), (1, 1), (1, 2)], [(0, 0), (0, 1), (0, 2)]],
        StandardSurface::ThricePuncturedSphere => vec![[(1, 0), (1, 2), (1, 1)], [(0, 0), (0, 2), (0, 1)]],
        StandardSurface::FourPuncturedSphere => vec![
            [(3, 1), (1, 1), (2, 1)],
            [(2, 2), (0, 1), (3, 0)],
            [(3, 2), (0, 2), (1, 0)],
            [(1, 2), (0, 0), (2, 0)],
        ],
        StandardSurface::TwicePuncturedTorus => vec![
            [(1, 1), (3, 2), (1, 0)],
            [(0, 2), (0, 0), (2, 1)],
            [(3, 1), (1, 2), (3, 0)],
            [(2, 2), (2, 0), (0, 1)],
        ],
    };
    IdealTriangulation::from_pairs(&table).expect("standard tables are valid")
}

/// Looks a surface up by name.
pub fn standard_surface_by_name(name: &str) -> Result<IdealTriangulation, TopologyError> {
    Ok(standard_surface(name.parse()?))
}
