//! Stairstep representatives of closed curves.
//!
//! A stairstep path follows the triangle sequence of a reduced word. In each
//! triangle it runs along one horocyclic leaf across the spike it turns
//! around, at some depth `d >= 0` (arc length `e^{-d}`), and between two
//! triangles it slides along the common edge by a signed span. Positions on
//! an edge are measured from the foot of the triangle one is in, positive
//! toward that triangle's left-hand vertex; a spike crossing at depth `d`
//! enters at `σd` and leaves at `-σd`, with `σ = +1` for a right turn. The
//! span between stages `i` and `i + 1` is therefore
//! `σ_{i+1} d_{i+1} - σ_i d_i - x_i`, where `x_i` is the shear of the edge.
//!
//! The good representative minimises the total span `I`; among minimisers the
//! depths are pushed as deep as they go. Both problems are linear programs.

mod lp;

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{curve_length, leaf_transfer, GeometryError, ShearPoint};
use crate::numeric::{exact_sum, log_add_exp};
use crate::topology::{
    check_closed, next_side, prev_side, reduce, CurveWord, EdgeId, IdealTriangulation, Slot, Step, TopologyError,
};

/// Relative tolerance below which spans and depths count as zero.
const ZERO_TOL: f64 = 1e-11;
/// Absolute tolerance for a traced leaf to hit a distinguished point.
pub const FOOT_TOL: f64 = 1e-9;
/// Leaves are traced for at most this many crossings per edge.
pub const TRACE_CAP_PER_EDGE: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HorogeodesicError {
    #[error("curve is peripheral")]
    PeripheralCurve,
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("depth program is unbounded")]
    Unbounded,
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    step: Step,
    entry_sign: f64,
    exit_sign: f64,
    depth: f64,
    reference_depth: f64,
    arc_pieces: u32,
    edge: EdgeId,
    shear: f64,
    base_span: f64,
    span_pieces: u32,
}

impl Stage {
    pub fn step(&self) -> Step {
        self.step
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    /// Edge crossed when leaving this stage.
    pub fn edge(&self) -> EdgeId {
        self.edge
    }

    pub fn shear(&self) -> f64 {
        self.shear
    }

    fn is_u_turn(&self) -> bool {
        self.step.entry == self.step.exit
    }

    fn arc_length(&self) -> f64 {
        if self.is_u_turn() {
            0.0
        } else {
            (-self.depth).exp()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftRectangle {
    pub edge: EdgeId,
    pub span: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpikeCrossing {
    pub triangle: usize,
    pub corner: u8,
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Piece {
    Geodesic(ShiftRectangle),
    Horocyclic(Vec<SpikeCrossing>),
}

/// Local defect that lets a path be shortened or simplified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// The path leaves a triangle through the side it entered by.
    MuBacktrack { stage: usize },
    /// One spike crossing sits on a geodesic excursion that returns along itself.
    Needle { stage: usize },
    /// A run of stages bounds a disc with a leaf of the foliation.
    FDisc { start: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Goodness {
    pub good: bool,
    pub witness: Option<Violation>,
}

/// Moves one spike crossing to another leaf; the neighbouring geodesic
/// pieces stretch along their edges to keep the path connected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PushMove {
    pub stage: usize,
    pub new_depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StairstepPath {
    stages: Vec<Stage>,
    tol: f64,
}

fn turn_sign(s: &Step) -> f64 {
    if s.exit == next_side(s.entry) {
        1.0
    } else {
        -1.0
    }
}

fn shear_after(h: &ShearPoint, steps: &[Step], i: usize) -> (EdgeId, f64) {
    let next = steps[(i + 1) % steps.len()];
    let slot = Slot::new(next.triangle, next.entry);
    (h.triangulation().edge(slot), h.shear_at(slot))
}

/// Builds the good stairstep representative of `curve`.
pub fn stairstep(h: &ShearPoint, curve: &CurveWord) -> Result<StairstepPath, HorogeodesicError> {
    if curve.is_peripheral() {
        return Err(HorogeodesicError::PeripheralCurve);
    }
    let steps = curve.steps();
    let n = steps.len();
    let sigma: Vec<f64> = steps.iter().map(turn_sign).collect();
    let x: Vec<f64> = (0..n).map(|i| shear_after(h, steps, i).1).collect();
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = ZERO_TOL * scale;
    let mut depths = if scale == 0.0 {
        vec![0.0; n]
    } else {
        optimal_depths(&sigma, &x, scale)?
    };
    for d in depths.iter_mut() {
        if *d <= tol {
            *d = 0.0;
        }
    }
    let stages = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let (edge, shear) = shear_after(h, steps, i);
            let mut span = sigma[j] * depths[j] - sigma[i] * depths[i] - shear;
            if span.abs() <= tol {
                span = 0.0;
            }
            Stage {
                step: steps[i],
                entry_sign: sigma[i],
                exit_sign: -sigma[i],
                depth: depths[i],
                reference_depth: depths[i],
                arc_pieces: 1,
                edge,
                shear,
                base_span: span,
                span_pieces: 1,
            }
        })
        .collect();
    Ok(StairstepPath { stages, tol })
}

/// Minimises total span, then maximises total depth among the minimisers.
fn optimal_depths(sigma: &[f64], x: &[f64], scale: f64) -> Result<Vec<f64>, HorogeodesicError> {
    let n = sigma.len();
    let mut rows = Vec::with_capacity(n);
    let mut basis = Vec::with_capacity(n);
    // columns: d (n), p (n), q (n); row i: σ_{i+1} d_{i+1} - σ_i d_i - p_i + q_i = x_i
    for i in 0..n {
        let mut row = vec![0.0; 3 * n + 1];
        row[(i + 1) % n] += sigma[(i + 1) % n];
        row[i] -= sigma[i];
        row[n + i] = -1.0;
        row[2 * n + i] = 1.0;
        row[3 * n] = x[i] / scale;
        if row[3 * n] < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
            basis.push(n + i);
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
    }
    let mut tab = lp::Tableau::new(rows, basis);
    let mut span_cost = vec![0.0; n];
    span_cost.extend(std::iter::repeat_n(1.0, 2 * n));
    tab.minimize(&span_cost, &vec![true; 3 * n])
        .map_err(|_| HorogeodesicError::Unbounded)?;
    let allowed: Vec<bool> = tab
        .reduced_costs(&span_cost)
        .iter()
        .map(|r| *r <= lp::COST_TOL)
        .collect();
    let mut depth_cost = vec![-1.0; n];
    depth_cost.extend(std::iter::repeat_n(0.0, 2 * n));
    tab.minimize(&depth_cost, &allowed)
        .map_err(|_| HorogeodesicError::Unbounded)?;
    Ok(tab.solution()[..n].iter().map(|d| d * scale).collect())
}

impl StairstepPath {
    /// A path with prescribed depths along a gluing-compatible step sequence,
    /// which may contain U-turns. Mostly useful for exercising [`is_good`].
    pub fn from_depths(h: &ShearPoint, steps: Vec<Step>, depths: Vec<f64>) -> Result<Self, HorogeodesicError> {
        check_closed(h.triangulation(), &steps)?;
        if depths.len() != steps.len() {
            return Err(HorogeodesicError::InvalidMove(format!(
                "{} depths for {} steps",
                depths.len(),
                steps.len()
            )));
        }
        if let Some(d) = depths.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(HorogeodesicError::InvalidMove(format!("depth {d}")));
        }
        let n = steps.len();
        let signs: Vec<(f64, f64)> = steps
            .iter()
            .map(|s| {
                if s.entry == s.exit {
                    (1.0, 1.0)
                } else {
                    (turn_sign(s), -turn_sign(s))
                }
            })
            .collect();
        let mut scale = 0.0f64;
        let stages = (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                let (edge, shear) = shear_after(h, &steps, i);
                scale = scale.max(shear.abs());
                Stage {
                    step: steps[i],
                    entry_sign: signs[i].0,
                    exit_sign: signs[i].1,
                    depth: depths[i],
                    reference_depth: depths[i],
                    arc_pieces: 1,
                    edge,
                    shear,
                    base_span: signs[j].0 * depths[j] + signs[i].1 * depths[i] - shear,
                    span_pieces: 1,
                }
            })
            .collect();
        Ok(StairstepPath {
            stages,
            tol: ZERO_TOL * scale,
        })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn depths(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.depth).collect()
    }

    /// Signed span along the edge between stage `i` and the next one.
    pub fn span(&self, i: usize) -> f64 {
        let n = self.stages.len();
        let (a, b) = (&self.stages[i], &self.stages[(i + 1) % n]);
        if n == 1 {
            return a.base_span;
        }
        a.base_span + b.entry_sign * (b.depth - b.reference_depth) + a.exit_sign * (a.depth - a.reference_depth)
    }

    pub fn spans(&self) -> Vec<f64> {
        (0..self.stages.len()).map(|i| self.span(i)).collect()
    }

    /// Total length of the geodesic pieces.
    pub fn intersection_i(&self) -> f64 {
        exact_sum(self.stages.iter().enumerate().flat_map(|(i, s)| {
            let k = s.span_pieces;
            std::iter::repeat_n(self.span(i).abs() / k as f64, k as usize)
        }))
    }

    /// Total length of the horocyclic pieces.
    pub fn horo_length_l(&self) -> f64 {
        exact_sum(self.stages.iter().flat_map(|s| {
            let k = s.arc_pieces;
            std::iter::repeat_n(s.arc_length() / k as f64, k as usize)
        }))
    }

    /// `L` split as `count + exp(log_rest)`: the number of depth-zero
    /// crossings and the log of the remaining arc lengths. Unlike
    /// [`StairstepPath::horo_length_l`] this keeps resolving changes in deep
    /// crossings after their arcs underflow.
    pub fn horo_length_parts(&self) -> (usize, f64) {
        let mut count = 0;
        let mut log_rest = f64::NEG_INFINITY;
        for s in self.stages.iter().filter(|s| !s.is_u_turn()) {
            if s.depth == 0.0 {
                count += 1;
            } else {
                log_rest = log_add_exp(log_rest, -s.depth);
            }
        }
        (count, log_rest)
    }

    /// Decomposition into alternating geodesic and horocyclic pieces. A
    /// path with no geodesic part is a single horocyclic cycle.
    pub fn pieces(&self) -> Vec<Piece> {
        let n = self.stages.len();
        let spans = self.spans();
        let crossing = |s: &Stage| SpikeCrossing {
            triangle: s.step.triangle,
            corner: s.step.corner(),
            depth: s.depth,
        };
        let Some(start) = (0..n).find(|&i| spans[(i + n - 1) % n] != 0.0) else {
            return vec![Piece::Horocyclic(self.stages.iter().map(crossing).collect())];
        };
        let mut out = Vec::new();
        let mut run = Vec::new();
        for k in 0..n {
            let i = (start + k) % n;
            run.push(crossing(&self.stages[i]));
            if spans[i] != 0.0 {
                out.push(Piece::Horocyclic(std::mem::take(&mut run)));
                out.push(Piece::Geodesic(ShiftRectangle {
                    edge: self.stages[i].edge,
                    span: spans[i],
                }));
            }
        }
        out
    }

    /// Splits the arc of `stage` into `arc_pieces` and the following span
    /// into `span_pieces` equal parts. Power-of-two splits leave `I` and `L`
    /// bit-identical.
    pub fn refine(&self, stage: usize, arc_pieces: u32, span_pieces: u32) -> Result<Self, HorogeodesicError> {
        if stage >= self.stages.len() || arc_pieces == 0 || span_pieces == 0 {
            return Err(HorogeodesicError::InvalidMove(format!(
                "cannot split stage {stage} into {arc_pieces}/{span_pieces} pieces"
            )));
        }
        let mut out = self.clone();
        let s = &mut out.stages[stage];
        s.arc_pieces *= arc_pieces;
        s.span_pieces *= span_pieces;
        Ok(out)
    }

    /// Checks for backtracking; a path is good when no run of stages can be
    /// slid to shorten its geodesic part.
    pub fn is_good(&self) -> Goodness {
        let bad = |v| Goodness {
            good: false,
            witness: Some(v),
        };
        if let Some(stage) = self.stages.iter().position(Stage::is_u_turn) {
            return bad(Violation::MuBacktrack { stage });
        }
        let n = self.stages.len();
        let spans = self.spans();
        let tol = self.tol;
        for len in 1..n {
            for start in 0..n {
                let a = spans[(start + n - 1) % n];
                let b = spans[(start + len - 1) % n];
                let members = || (start..start + len).map(|i| &self.stages[i % n]);
                let up = a < -tol && b > tol && members().all(|s| s.entry_sign > 0.0 || s.depth > tol);
                let down = a > tol && b < -tol && members().all(|s| s.entry_sign < 0.0 || s.depth > tol);
                if up || down {
                    let needle = len == 1 && (a + b).abs() <= tol + 1e-12 * a.abs();
                    return bad(if needle {
                        Violation::Needle { stage: start }
                    } else {
                        Violation::FDisc { start, len }
                    });
                }
            }
        }
        Goodness {
            good: true,
            witness: None,
        }
    }

    /// Depths to which `stage` can be pushed without changing `I`, assuming
    /// the path is good.
    pub fn good_push_range(&self, stage: usize) -> Result<(f64, f64), HorogeodesicError> {
        let n = self.stages.len();
        if stage >= n {
            return Err(HorogeodesicError::InvalidMove(format!("no stage {stage}")));
        }
        if n == 1 {
            return Ok((0.0, f64::INFINITY));
        }
        let s = &self.stages[stage];
        let a = self.span((stage + n - 1) % n);
        let b = self.span(stage);
        // moving the crossing by Δ along the edges adds Δ to a and removes it from b
        let (lo, hi) = if a >= 0.0 && b >= 0.0 {
            (-a, b)
        } else if a <= 0.0 && b <= 0.0 {
            (b, -a)
        } else {
            (0.0, 0.0)
        };
        let (lo, hi) = if s.entry_sign > 0.0 {
            (s.depth + lo, s.depth + hi)
        } else {
            (s.depth - hi, s.depth - lo)
        };
        Ok((lo.max(0.0), hi))
    }

    pub fn apply_push(&self, m: PushMove) -> Result<Self, HorogeodesicError> {
        if m.stage >= self.stages.len() {
            return Err(HorogeodesicError::InvalidMove(format!("no stage {}", m.stage)));
        }
        if !(m.new_depth.is_finite() && m.new_depth >= 0.0) {
            return Err(HorogeodesicError::InvalidMove(format!("depth {}", m.new_depth)));
        }
        let mut out = self.clone();
        out.stages[m.stage].depth = m.new_depth;
        Ok(out)
    }
}

pub fn intersection_i(p: &StairstepPath) -> f64 {
    p.intersection_i()
}

pub fn horo_length_l(p: &StairstepPath) -> f64 {
    p.horo_length_l()
}

pub fn apply_push(p: &StairstepPath, m: PushMove) -> Result<StairstepPath, HorogeodesicError> {
    p.apply_push(m)
}

pub fn is_good(p: &StairstepPath) -> Goodness {
    p.is_good()
}

/// Compares horocyclic lengths exactly, including differences hidden below
/// the resolution of the plain sum.
pub fn horo_length_cmp(a: &StairstepPath, b: &StairstepPath) -> Ordering {
    let (ka, la) = a.horo_length_parts();
    let (kb, lb) = b.horo_length_parts();
    let (va, vb) = (ka as f64 + la.exp(), kb as f64 + lb.exp());
    match va.partial_cmp(&vb) {
        Some(Ordering::Equal) if ka == kb => la.total_cmp(&lb),
        Some(o) => o,
        None => Ordering::Equal,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    pub i: f64,
    pub length: f64,
    pub l: f64,
    pub ok: bool,
}

/// Checks `I <= length <= I + L` to within `1e-9` relative.
pub fn sandwich_check(h: &ShearPoint, curve: &CurveWord) -> Result<SandwichReport, HorogeodesicError> {
    let length = curve_length(h, curve)?;
    let p = stairstep(h, curve)?;
    let (i, l) = (p.intersection_i(), p.horo_length_l());
    let ok = i <= length + 1e-9 * length.max(i) && length <= (i + l) * (1.0 + 1e-9);
    Ok(SandwichReport { i, length, l, ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GraphEdgeKind {
    /// One of the three unit arcs bounding a non-foliated region.
    BoundaryArc,
    /// A leaf segment through spikes joining two distinguished points.
    Leaf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub kind: GraphEdgeKind,
    pub length: f64,
    start: Slot,
    end: Slot,
    /// Sides exited, in order.
    crossings: Vec<Slot>,
}

/// Leaves of the horocyclic foliation joining distinguished points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularGraph {
    /// Feet making up each vertex (two feet merge when their shear vanishes).
    pub vertices: Vec<Vec<Slot>>,
    pub edges: Vec<GraphEdge>,
    /// Leaves abandoned at the crossing cap.
    pub capped_leaves: usize,
    pub crossing_cap: usize,
    /// Essential, non-peripheral curve classes carried by the graph.
    pub essential_cycles: Vec<CurveWord>,
}

impl SingularGraph {
    /// True when every cycle of the graph is trivial or peripheral.
    pub fn is_empty(&self) -> bool {
        self.essential_cycles.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind == GraphEdgeKind::Leaf).count()
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

pub fn singular_graph(h: &ShearPoint) -> SingularGraph {
    let tri = h.triangulation();
    let f = tri.triangle_count();
    let foot = |s: Slot| 3 * s.triangle + s.side as usize;
    let mut parent: Vec<usize> = (0..3 * f).collect();
    for t in 0..f {
        for side in 0..3u8 {
            let s = Slot::new(t, side);
            if h.shear_at(s).abs() <= FOOT_TOL {
                let (a, b) = (find(&mut parent, foot(s)), find(&mut parent, foot(tri.glued(s))));
                parent[a] = b;
            }
        }
    }
    let mut id = HashMap::new();
    let mut vertices: Vec<Vec<Slot>> = Vec::new();
    let mut vertex_of = vec![0; 3 * f];
    for t in 0..f {
        for side in 0..3u8 {
            let s = Slot::new(t, side);
            let r = find(&mut parent, foot(s));
            let v = *id.entry(r).or_insert_with(|| {
                vertices.push(Vec::new());
                vertices.len() - 1
            });
            vertices[v].push(s);
            vertex_of[foot(s)] = v;
        }
    }
    let mut edges = Vec::new();
    for t in 0..f {
        for corner in 0..3u8 {
            let (a, b) = (Slot::new(t, prev_side(corner)), Slot::new(t, corner));
            edges.push(GraphEdge {
                from: vertex_of[foot(a)],
                to: vertex_of[foot(b)],
                kind: GraphEdgeKind::BoundaryArc,
                length: 1.0,
                start: a,
                end: b,
                crossings: Vec::new(),
            });
        }
    }
    let cap = TRACE_CAP_PER_EDGE * tri.edge_count();
    let mut capped = 0;
    for t in 0..f {
        for side in 0..3u8 {
            let start = Slot::new(t, side);
            if h.shear_at(start).abs() <= FOOT_TOL {
                continue;
            }
            match trace_leaf(h, start, cap) {
                Some((end, crossings, length)) => {
                    // the same leaf is traced again from its other end
                    if start <= end {
                        edges.push(GraphEdge {
                            from: vertex_of[foot(start)],
                            to: vertex_of[foot(end)],
                            kind: GraphEdgeKind::Leaf,
                            length,
                            start,
                            end,
                            crossings,
                        });
                    }
                }
                None => capped += 1,
            }
        }
    }
    let essential_cycles = essential_cycles(tri, vertices.len(), &edges);
    SingularGraph {
        vertices,
        edges,
        capped_leaves: capped,
        crossing_cap: cap,
        essential_cycles,
    }
}

/// Follows the leaf leaving the foot `start` outward until it reaches another
/// foot. Returns the landing slot, the sides exited and the leaf length.
fn trace_leaf(h: &ShearPoint, start: Slot, cap: usize) -> Option<(Slot, Vec<Slot>, f64)> {
    let tri = h.triangulation();
    let mut crossings = vec![start];
    let mut u = 0.0;
    let mut length = Vec::new();
    loop {
        let out = *crossings.last().expect("non-empty");
        let at = tri.glued(out);
        u = leaf_transfer(h, out, u);
        if u.abs() <= FOOT_TOL {
            return Some((at, crossings, exact_sum(length)));
        }
        if crossings.len() >= cap {
            return None;
        }
        let exit = if u > 0.0 {
            next_side(at.side)
        } else {
            prev_side(at.side)
        };
        length.push((-u.abs()).exp());
        u = -u;
        crossings.push(Slot::new(at.triangle, exit));
    }
}

#[derive(Clone, Copy)]
struct Traversal {
    edge: usize,
    forward: bool,
}

fn closed_walk_word(tri: &IdealTriangulation, edges: &[GraphEdge], walk: &[Traversal]) -> Option<CurveWord> {
    let mut crossings = Vec::new();
    let ends = |t: &Traversal| {
        let e = &edges[t.edge];
        if t.forward {
            (e.start, e.end)
        } else {
            (e.end, e.start)
        }
    };
    for (k, t) in walk.iter().enumerate() {
        let e = &edges[t.edge];
        if t.forward {
            crossings.extend_from_slice(&e.crossings);
        } else {
            crossings.extend(e.crossings.iter().rev().map(|&s| tri.glued(s)));
        }
        let arrive = ends(t).1;
        let depart = ends(&walk[(k + 1) % walk.len()]).0;
        if arrive != depart {
            debug_assert_eq!(tri.glued(arrive), depart);
            crossings.push(arrive);
        }
    }
    if crossings.is_empty() {
        return None;
    }
    let m = crossings.len();
    let raw: Vec<Step> = (0..m)
        .map(|i| {
            let inside = tri.glued(crossings[(i + m - 1) % m]);
            Step::new(inside.triangle, inside.side, crossings[i].side)
        })
        .collect();
    reduce(tri, raw).ok().filter(|w| !w.is_peripheral())
}

/// Essential classes among fundamental cycles and their pairwise products.
fn essential_cycles(tri: &IdealTriangulation, nv: usize, edges: &[GraphEdge]) -> Vec<CurveWord> {
    let mut adj: Vec<Vec<Traversal>> = vec![Vec::new(); nv];
    for (k, e) in edges.iter().enumerate() {
        adj[e.from].push(Traversal { edge: k, forward: true });
        adj[e.to].push(Traversal {
            edge: k,
            forward: false,
        });
    }
    let head = |t: &Traversal| {
        if t.forward {
            edges[t.edge].to
        } else {
            edges[t.edge].from
        }
    };
    let mut found: Vec<CurveWord> = Vec::new();
    let mut seen = vec![false; nv];
    for root in 0..nv {
        if seen[root] {
            continue;
        }
        // BFS tree with the path from the root to each vertex
        let mut path: Vec<Option<Vec<Traversal>>> = vec![None; nv];
        let mut tree_edge = vec![false; edges.len()];
        path[root] = Some(Vec::new());
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for t in &adj[v] {
                let w = head(t);
                if !seen[w] {
                    seen[w] = true;
                    tree_edge[t.edge] = true;
                    let mut p = path[v].clone().expect("visited");
                    p.push(*t);
                    path[w] = Some(p);
                    queue.push_back(w);
                }
            }
        }
        let reverse = |p: &[Traversal]| -> Vec<Traversal> {
            p.iter()
                .rev()
                .map(|t| Traversal {
                    edge: t.edge,
                    forward: !t.forward,
                })
                .collect()
        };
        let mut loops: Vec<Vec<Traversal>> = Vec::new();
        for (k, e) in edges.iter().enumerate() {
            if tree_edge[k] {
                continue;
            }
            let (Some(pu), Some(pv)) = (&path[e.from], &path[e.to]) else {
                continue;
            };
            let mut walk = pu.clone();
            walk.push(Traversal { edge: k, forward: true });
            walk.extend(reverse(pv));
            loops.push(walk);
        }
        let mut candidates: Vec<Vec<Traversal>> = loops.clone();
        for i in 0..loops.len() {
            for j in i + 1..loops.len() {
                let mut w = loops[i].clone();
                w.extend_from_slice(&loops[j]);
                candidates.push(w);
                let mut w = loops[i].clone();
                w.extend(reverse(&loops[j]));
                candidates.push(w);
            }
        }
        for walk in candidates {
            if walk.is_empty() {
                continue;
            }
            if let Some(word) = closed_walk_word(tri, edges, &walk) {
                if !found.iter().any(|w| w.same_class(&word)) {
                    found.push(word);
                }
            }
        }
    }
    found.sort_by_key(|w| w.len());
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laminations::{closed_leaf_shears, MultiCurve};
    use crate::topology::{standard_surface, StandardSurface};
    use std::sync::Arc;

    fn torus() -> Arc<IdealTriangulation> {
        Arc::new(standard_surface(StandardSurface::OncePuncturedTorus))
    }

    fn gen_a(tri: &IdealTriangulation) -> CurveWord {
        CurveWord::new(tri, vec![Step::new(0, 0, 1), Step::new(1, 1, 0)]).unwrap()
    }

    fn gen_b(tri: &IdealTriangulation) -> CurveWord {
        CurveWord::new(tri, vec![Step::new(0, 0, 2), Step::new(1, 2, 0)]).unwrap()
    }

    fn base() -> ShearPoint {
        ShearPoint::complete(torus(), vec![0.5, 0.3, -0.8]).unwrap()
    }

    #[test]
    fn generator_a_at_base_point() {
        let h = base();
        let p = stairstep(&h, &gen_a(h.triangulation())).unwrap();
        assert!((p.intersection_i() - 0.8).abs() < 1e-15);
        assert_eq!(p.depths(), vec![0.5, 0.0]);
        assert!(p.is_good().good);
        let l = curve_length(&h, &gen_a(h.triangulation())).unwrap();
        assert!(p.intersection_i() <= l && l <= p.intersection_i() + p.horo_length_l());
    }

    #[test]
    fn generator_b_sits_on_the_feet() {
        let h = base();
        let p = stairstep(&h, &gen_b(h.triangulation())).unwrap();
        assert!((p.intersection_i() - 1.3).abs() < 1e-15);
        assert_eq!(p.depths(), vec![0.0, 0.0]);
        assert_eq!(p.horo_length_l(), 2.0);
    }

    #[test]
    fn peripheral_is_rejected() {
        let h = base();
        let tri = h.triangulation();
        let per = tri.cusps()[0].peripheral_word(tri);
        assert_eq!(stairstep(&h, &per), Err(HorogeodesicError::PeripheralCurve));
    }

    #[test]
    fn closed_leaf_path_is_all_horocyclic() {
        let tri = torus();
        let a = gen_a(&tri);
        let x = closed_leaf_shears(&tri, &MultiCurve::single(a.clone()).unwrap());
        let h = ShearPoint::complete(tri.clone(), x).unwrap();
        let p = stairstep(&h, &a).unwrap();
        assert_eq!(p.intersection_i(), 0.0);
        assert_eq!(p.pieces().len(), 1);
        assert!(matches!(p.pieces()[0], Piece::Horocyclic(ref c) if c.len() == 2));
        let r = sandwich_check(&h, &a).unwrap();
        assert!(r.ok && r.i == 0.0 && r.length <= r.l);
    }

    #[test]
    fn pieces_alternate() {
        let h = base();
        let p = stairstep(&h, &gen_a(h.triangulation()).power(3)).unwrap();
        let pieces = p.pieces();
        assert_eq!(pieces.len() % 2, 0);
        for w in pieces.windows(2) {
            assert_ne!(matches!(w[0], Piece::Geodesic(_)), matches!(w[1], Piece::Geodesic(_)));
        }
    }

    #[test]
    fn horocyclic_length_examples() {
        let tri = torus();
        let h = ShearPoint::complete(tri.clone(), vec![0.0; 3]).unwrap();
        let steps = gen_a(&tri).steps().to_vec();
        let p = StairstepPath::from_depths(&h, steps, vec![2f64.ln(), 4f64.ln()]).unwrap();
        assert_eq!(p.horo_length_l(), 0.75);
        let q = StairstepPath::from_depths(&h, gen_a(&tri).steps().to_vec(), vec![0.0, 0.0]).unwrap();
        assert_eq!(q.horo_length_l(), 2.0);
    }

    #[test]
    fn stretching_scales_spans_and_depths() {
        let h = base();
        let a = gen_a(h.triangulation());
        let p = stairstep(&h, &a).unwrap();
        let q = stairstep(&crate::geometry::stretch(&h, 2.0), &a).unwrap();
        let e2 = 2f64.exp();
        assert!((q.intersection_i() - e2 * p.intersection_i()).abs() < 1e-12 * q.intersection_i());
        for (d, e) in p.depths().iter().zip(q.depths()) {
            assert!((e - e2 * d).abs() < 1e-12 * e.max(1.0));
        }
        let kinds = |p: &StairstepPath| {
            p.pieces()
                .iter()
                .map(|x| match x {
                    Piece::Geodesic(r) => (0, r.edge.0),
                    Piece::Horocyclic(c) => (1, c.len()),
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(kinds(&p), kinds(&q));
        assert_eq!(horo_length_cmp(&q, &p), Ordering::Less);
    }

    #[test]
    fn pushes() {
        let h = base();
        let p = stairstep(&h, &gen_a(h.triangulation())).unwrap();
        let same = p
            .apply_push(PushMove {
                stage: 0,
                new_depth: p.depths()[0],
            })
            .unwrap();
        assert_eq!(same, p);
        let (lo, hi) = p.good_push_range(0).unwrap();
        assert!(lo <= p.depths()[0] && p.depths()[0] <= hi);
        let mid = (lo + p.depths()[0]) / 2.0;
        let q = p
            .apply_push(PushMove {
                stage: 0,
                new_depth: mid,
            })
            .unwrap();
        assert!(q.is_good().good);
        assert!((q.intersection_i() - p.intersection_i()).abs() <= 1e-12);
        let back = q
            .apply_push(PushMove {
                stage: 0,
                new_depth: p.depths()[0],
            })
            .unwrap();
        assert_eq!(back, p);
        assert!(matches!(
            p.apply_push(PushMove {
                stage: 0,
                new_depth: -1.0
            }),
            Err(HorogeodesicError::InvalidMove(_))
        ));
        assert!(matches!(
            p.apply_push(PushMove {
                stage: 9,
                new_depth: 1.0
            }),
            Err(HorogeodesicError::InvalidMove(_))
        ));
    }

    #[test]
    fn needle_is_detected() {
        let tri = torus();
        let a = gen_a(&tri);
        let x = closed_leaf_shears(&tri, &MultiCurve::single(a.clone()).unwrap());
        let h = ShearPoint::complete(tri.clone(), x).unwrap();
        let p = stairstep(&h, &a).unwrap();
        let d = p.depths()[0];
        let q = p
            .apply_push(PushMove {
                stage: 0,
                new_depth: d + 0.3,
            })
            .unwrap();
        assert_eq!(q.is_good().witness, Some(Violation::Needle { stage: 0 }));
        assert!(q.intersection_i() > 0.5);
    }

    #[test]
    fn u_turn_is_a_backtrack() {
        let tri = torus();
        let h = ShearPoint::complete(tri.clone(), vec![0.5, 0.3, -0.8]).unwrap();
        // leave triangle 0 through side 1 and come straight back
        let steps = vec![
            Step::new(0, 0, 1),
            Step::new(1, 1, 1),
            Step::new(0, 1, 2),
            Step::new(1, 2, 0),
        ];
        let p = StairstepPath::from_depths(&h, steps, vec![0.0; 4]).unwrap();
        assert_eq!(p.is_good().witness, Some(Violation::MuBacktrack { stage: 1 }));
    }

    #[test]
    fn disc_is_detected() {
        let h = base();
        let a = gen_a(h.triangulation()).power(2);
        let p = stairstep(&h, &a).unwrap();
        let d = p.depths();
        // lift two neighbouring crossings together off their optimum
        let q = StairstepPath::from_depths(&h, a.steps().to_vec(), vec![d[0] + 0.2, d[1] + 0.2, d[2], d[3]]).unwrap();
        assert!(q.intersection_i() > p.intersection_i());
        assert!(!q.is_good().good);
    }

    #[test]
    fn refinement_is_exact() {
        let h = base();
        let p = stairstep(&h, &gen_a(h.triangulation()).power(2)).unwrap();
        let q = p.refine(1, 8, 4).unwrap().refine(3, 2, 16).unwrap();
        assert_eq!(q.intersection_i(), p.intersection_i());
        assert_eq!(q.horo_length_l(), p.horo_length_l());
        assert!(p.refine(0, 0, 1).is_err());
    }

    #[test]
    fn generic_singular_graph_is_empty() {
        let (a, b) = (2f64.sqrt() / 2.0, std::f64::consts::PI / 10.0);
        let h = ShearPoint::complete(torus(), vec![a, b, -(a + b)]).unwrap();
        let g = singular_graph(&h);
        assert_eq!(g.vertices.len(), 6);
        // besides the boundary arcs, only the outermost horocycle around the
        // cusp meets distinguished points, and it is peripheral
        assert!(g.leaf_count() > 0);
        assert!(g.is_empty());
        let stretched = singular_graph(&crate::geometry::stretch(&h, 1.5));
        assert_eq!(stretched.leaf_count(), g.leaf_count());
        assert!(stretched.is_empty());
    }

    #[test]
    fn rational_shears_close_leaves() {
        // at rational shears every leaf through a foot closes up
        let g = singular_graph(&base());
        assert_eq!(g.leaf_count(), 3);
        assert!(!g.is_empty());
    }

    #[test]
    fn zero_shears_merge_feet() {
        let h = ShearPoint::complete(torus(), vec![0.0; 3]).unwrap();
        let g = singular_graph(&h);
        assert_eq!(g.vertices.len(), 3);
        assert!(!g.is_empty());
    }
}
