//! Hyperbolic structures in shear coordinates.
//!
//! A point of Teichmüller space is a real shear on every edge of an ideal
//! triangulation. The shear of an edge is the signed distance between the two
//! distinguished feet on it (one from each adjacent triangle), positive when
//! the foot of the far triangle lies toward the left-hand vertex of the edge
//! as seen from the near triangle. The structure is complete when the shears
//! around every puncture add up to zero.
//!
//! Holonomy convention: entering a triangle across an edge of shear `x`
//! contributes `D(x) = diag(e^{-x/2}, e^{x/2})`, followed by
//! `[[1,1],[0,1]]` for a left turn or `[[1,0],[1,1]]` for a right turn; steps
//! multiply on the left. All factors are non-negative, so traces are sums of
//! positive exponential monomials and never suffer cancellation.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::numeric::{exact_sum, log_add_exp};
use crate::topology::{CurveWord, EdgeId, IdealTriangulation, Slot, Step, Turn};

/// Tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for comparisons involving transcendental functions.
pub const TRANSCENDENTAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("expected {expected} shears, got {got}")]
    WrongEdgeCount { expected: usize, got: usize },
    #[error("shear on {0} is not finite")]
    NonFinite(EdgeId),
    #[error("structure is incomplete at cusp {cusp}: residual {residual}")]
    IncompleteStructure { cusp: usize, residual: f64 },
    #[error("curve is peripheral or trivial (|trace| = {trace})")]
    PeripheralOrTrivial { trace: f64 },
    #[error("negative depth {0}")]
    NegativeDepth(f64),
    #[error("numerical overflow: {0}; use extended precision")]
    NumericalOverflow(String),
    #[error("precision exhausted while resolving a near-parabolic trace")]
    PrecisionLoss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Precision {
    /// Plain double-precision matrix products.
    Double,
    /// Log-scaled products, with an exact monomial expansion near parabolic traces.
    #[default]
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(format!("unknown precision `{other}`")),
        }
    }
}

/// A point of Teichmüller space: base shears times `exp(log_scale)`.
///
/// Keeping the scale separate makes the stretch flow an exact addition on
/// `log_scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearPoint {
    tri: Arc<IdealTriangulation>,
    base: Vec<f64>,
    log_scale: f64,
}

impl ShearPoint {
    pub fn new(tri: Arc<IdealTriangulation>, shears: Vec<f64>) -> Result<Self, GeometryError> {
        if shears.len() != tri.edge_count() {
            return Err(GeometryError::WrongEdgeCount {
                expected: tri.edge_count(),
                got: shears.len(),
            });
        }
        if let Some(i) = shears.iter().position(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite(EdgeId(i)));
        }
        Ok(ShearPoint {
            tri,
            base: shears,
            log_scale: 0.0,
        })
    }

    /// [`ShearPoint::new`] followed by [`check_complete`].
    pub fn complete(tri: Arc<IdealTriangulation>, shears: Vec<f64>) -> Result<Self, GeometryError> {
        let h = Self::new(tri, shears)?;
        check_complete(&h)?;
        Ok(h)
    }

    pub fn triangulation(&self) -> &IdealTriangulation {
        &self.tri
    }

    pub fn triangulation_arc(&self) -> &Arc<IdealTriangulation> {
        &self.tri
    }

    pub fn base_shears(&self) -> &[f64] {
        &self.base
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    fn factor(&self) -> f64 {
        if self.log_scale == 0.0 {
            1.0
        } else {
            self.log_scale.exp()
        }
    }

    pub fn shear(&self, e: EdgeId) -> f64 {
        self.base[e.0] * self.factor()
    }

    pub fn shears(&self) -> Vec<f64> {
        let f = self.factor();
        self.base.iter().map(|x| x * f).collect()
    }

    pub fn shear_at(&self, slot: Slot) -> f64 {
        self.shear(self.tri.edge(slot))
    }

    pub fn max_abs_shear(&self) -> f64 {
        self.base.iter().fold(0.0f64, |m, x| m.max(x.abs())) * self.factor()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Matrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn scaled(&self, s: f64) -> Matrix2 {
        Matrix2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn inverse(&self) -> Matrix2 {
        let det = self.det();
        Matrix2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }
}

impl std::ops::Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub(crate) fn turn_matrix(turn: Turn) -> Matrix2 {
    match turn {
        Turn::Left => Matrix2::new(1.0, 1.0, 0.0, 1.0),
        Turn::Right => Matrix2::new(1.0, 0.0, 1.0, 1.0),
    }
}

fn step_factor(h: &ShearPoint, step: &Step) -> Matrix2 {
    let x = h.shear_at(Slot::new(step.triangle, step.entry));
    let turn = step.turn().expect("curve words carry no U-turns");
    let t = turn_matrix(turn);
    // T * diag(e^{-x/2}, e^{x/2})
    let (p, q) = ((-x / 2.0).exp(), (x / 2.0).exp());
    Matrix2::new(t.a * p, t.b * q, t.c * p, t.d * q)
}

/// Holonomy of a closed curve, in plain double precision.
pub fn holonomy(h: &ShearPoint, curve: &CurveWord) -> Result<Matrix2, GeometryError> {
    let m = curve
        .steps()
        .iter()
        .fold(Matrix2::IDENTITY, |m, s| step_factor(h, s) * m);
    if !m.is_finite() {
        return Err(GeometryError::NumericalOverflow(
            "holonomy entries exceed double range".into(),
        ));
    }
    Ok(m)
}

/// Entrywise logarithms of a matrix with non-negative entries.
type LogMatrix = [[f64; 2]; 2];

/// Holonomy entrywise in the log domain. Every factor has non-negative
/// entries, so products are sums of positive terms and nothing cancels.
fn log_holonomy(h: &ShearPoint, curve: &CurveWord) -> LogMatrix {
    const NEG: f64 = f64::NEG_INFINITY;
    let mut m: LogMatrix = [[0.0, NEG], [NEG, 0.0]];
    for s in curve.steps() {
        let x = h.shear_at(Slot::new(s.triangle, s.entry));
        let (p, q) = (-x / 2.0, x / 2.0);
        // T * diag(e^{-x/2}, e^{x/2})
        let f: LogMatrix = match s.turn().expect("curve words carry no U-turns") {
            Turn::Left => [[p, q], [NEG, q]],
            Turn::Right => [[p, NEG], [p, q]],
        };
        let mut out = [[NEG; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = log_add_exp(f[i][0] + m[0][j], f[i][1] + m[1][j]);
            }
        }
        m = out;
    }
    m
}

/// Holonomy as `exp(log_scale) * matrix` with `matrix` normalised to unit
/// max-norm. Never overflows or underflows.
pub fn log_scaled_holonomy(h: &ShearPoint, curve: &CurveWord) -> (Matrix2, f64) {
    let l = log_holonomy(h, curve);
    let s = l.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let e = |v: f64| (v - s).exp();
    (Matrix2::new(e(l[0][0]), e(l[0][1]), e(l[1][0]), e(l[1][1])), s)
}

/// `ln |trace|` of the holonomy; never overflows.
pub fn log_trace(h: &ShearPoint, curve: &CurveWord) -> f64 {
    let l = log_holonomy(h, curve);
    log_add_exp(l[0][0], l[1][1])
}

/// Checks that every cusp has zero shear sum and parabolic peripheral holonomy.
pub fn check_complete(h: &ShearPoint) -> Result<(), GeometryError> {
    let tri = h.triangulation();
    for (i, cusp) in tri.cusps().iter().enumerate() {
        let terms: Vec<f64> = cusp.edges(tri).iter().map(|&e| h.shear(e)).collect();
        let residual = exact_sum(terms.iter().copied());
        let scale = terms.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        if residual.abs() > ALGEBRAIC_TOL * scale {
            return Err(GeometryError::IncompleteStructure { cusp: i, residual });
        }
        let word = cusp.peripheral_word(tri);
        let tr = log_trace(h, &word).exp();
        if (tr - 2.0).abs() > TRANSCENDENTAL_TOL {
            return Err(GeometryError::IncompleteStructure { cusp: i, residual });
        }
    }
    Ok(())
}

/// Orthogonal projection of raw edge values onto the complete structures.
pub fn project_complete(tri: &IdealTriangulation, raw: &[f64]) -> Vec<f64> {
    let cusps = tri.cusps();
    let k = cusps.len();
    let e = tri.edge_count();
    let mut a = vec![vec![0.0; e]; k];
    for (i, c) in cusps.iter().enumerate() {
        for edge in c.edges(tri) {
            a[i][edge.0] += 1.0;
        }
    }
    // solve (A A^T) y = A x, then x - A^T y
    let mut g = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = (0..e).map(|m| a[i][m] * a[j][m]).sum();
        }
        g[i][k] = (0..e).map(|m| a[i][m] * raw[m]).sum();
    }
    let y = solve_dense(g);
    // components that cancel up to round-off are exactly zero
    let floor = 64.0 * f64::EPSILON * raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (0..e)
        .map(|m| raw[m] - (0..k).map(|i| a[i][m] * y[i]).sum::<f64>())
        .map(|v| if v.abs() <= floor { 0.0 } else { v })
        .collect()
}

/// Gaussian elimination with partial pivoting on an augmented matrix;
/// singular directions get a zero solution component.
fn solve_dense(mut g: Vec<Vec<f64>>) -> Vec<f64> {
    let k = g.len();
    let mut pivot_col = vec![usize::MAX; k];
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..k).max_by(|&i, &j| g[i][col].abs().total_cmp(&g[j][col].abs())) else {
            break;
        };
        if g[p][col].abs() < 1e-12 {
            continue;
        }
        g.swap(row, p);
        let pivot = g[row].clone();
        for (i, r) in g.iter_mut().enumerate() {
            if i != row {
                let f = r[col] / pivot[col];
                for (v, p) in r[col..].iter_mut().zip(&pivot[col..]) {
                    *v -= f * p;
                }
            }
        }
        pivot_col[row] = col;
        row += 1;
    }
    let mut y = vec![0.0; k];
    for r in 0..row {
        let c = pivot_col[r];
        y[c] = g[r][k] / g[r][c];
    }
    y
}

/// Natural log of the length of the closed geodesic in the class of `curve`.
pub fn curve_log_length(h: &ShearPoint, curve: &CurveWord, precision: Precision) -> Result<f64, GeometryError> {
    match precision {
        Precision::Double => {
            let tr = holonomy(h, curve)?.trace().abs();
            if tr <= 2.0 + TRANSCENDENTAL_TOL {
                return Err(GeometryError::PeripheralOrTrivial { trace: tr });
            }
            Ok((2.0 * (tr / 2.0).acosh()).ln())
        }
        Precision::Extended => {
            if curve.is_peripheral() {
                let lt = log_trace(h, curve);
                return Err(GeometryError::PeripheralOrTrivial { trace: lt.exp() });
            }
            let lt = log_trace(h, curve);
            if lt > (2.0f64 + 2e-3).ln() {
                Ok(log_length_from_log_trace(lt))
            } else {
                let log_half_excess = near_parabolic_log_half_excess(h, curve)?;
                Ok(log_length_from_log_half_excess(log_half_excess))
            }
        }
    }
}

/// Length of the closed geodesic in the class of `curve` (extended precision).
pub fn curve_length(h: &ShearPoint, curve: &CurveWord) -> Result<f64, GeometryError> {
    curve_length_with(h, curve, Precision::Extended)
}

pub fn curve_length_with(h: &ShearPoint, curve: &CurveWord, precision: Precision) -> Result<f64, GeometryError> {
    Ok(curve_log_length(h, curve, precision)?.exp())
}

/// Translation length `2 acosh(|tr| / 2)` from `ln |tr|`.
fn log_length_from_log_trace(lt: f64) -> f64 {
    if lt < 700.0 {
        let tr = lt.exp();
        (2.0 * (tr / 2.0).acosh()).ln()
    } else {
        // acosh(y) = ln(2y) + ln((1 + sqrt(1 - 1/y^2)) / 2), y = tr / 2
        let corr = ((1.0 + (1.0 - (-2.0 * (lt - LN_2)).exp()).sqrt()) / 2.0).ln();
        (2.0 * (lt + corr)).ln()
    }
}

/// Length from `ln y` where `|tr| = 2 + 2y`: `2 acosh(1 + y)`.
fn log_length_from_log_half_excess(log_y: f64) -> f64 {
    if log_y > -600.0 {
        let y = log_y.exp();
        (2.0 * (y + (y * (y + 2.0)).sqrt()).ln_1p()).ln()
    } else {
        // acosh(1 + y) = sqrt(2y) (1 + O(y))
        LN_2 + 0.5 * (LN_2 + log_y)
    }
}

const EXPANSION_TERM_CAP: usize = 1 << 16;

type Monomials = BTreeMap<Vec<i32>, u64>;

/// `ln((|tr| - 2) / 2)` from the exact monomial expansion of the trace.
///
/// Exponents are kept as integer vectors over edges (units of half a shear),
/// so monomials that are identically constant combine exactly.
fn near_parabolic_log_half_excess(h: &ShearPoint, curve: &CurveWord) -> Result<f64, GeometryError> {
    let tri = h.triangulation();
    let ne = tri.edge_count();
    let mut unit = Monomials::new();
    unit.insert(vec![0; ne], 1);
    let mut m: [Monomials; 4] = [unit.clone(), Monomials::new(), Monomials::new(), unit];
    for s in curve.steps() {
        let e = tri.edge(Slot::new(s.triangle, s.entry)).0;
        let shift = |src: &Monomials, delta: i32| -> Monomials {
            src.iter()
                .map(|(k, &c)| {
                    let mut k = k.clone();
                    k[e] += delta;
                    (k, c)
                })
                .collect()
        };
        // D * M: row 0 gets e^{-x/2}, row 1 gets e^{x/2}
        let r0 = [shift(&m[0], -1), shift(&m[1], -1)];
        let r1 = [shift(&m[2], 1), shift(&m[3], 1)];
        let add = |a: &Monomials, b: &Monomials| -> Monomials {
            let mut out = a.clone();
            for (k, &c) in b {
                *out.entry(k.clone()).or_insert(0) += c;
            }
            out
        };
        m = match s.turn().expect("no U-turns") {
            Turn::Left => [add(&r0[0], &r1[0]), add(&r0[1], &r1[1]), r1[0].clone(), r1[1].clone()],
            Turn::Right => [r0[0].clone(), r0[1].clone(), add(&r0[0], &r1[0]), add(&r0[1], &r1[1])],
        };
        if m.iter().map(|x| x.len()).sum::<usize>() > EXPANSION_TERM_CAP {
            return Err(GeometryError::PrecisionLoss);
        }
    }
    let mut trace = m[0].clone();
    for (k, c) in &m[3] {
        *trace.entry(k.clone()).or_insert(0) += c;
    }
    let shears = h.shears();
    let mut constant: i64 = -2;
    let mut linear = Vec::new();
    let mut log_small = f64::NEG_INFINITY;
    for (k, &c) in &trace {
        let v = exact_sum(k.iter().enumerate().map(|(i, &n)| n as f64 * shears[i] / 2.0));
        if v.abs() <= 1.0 {
            constant += c as i64;
            linear.push(c as f64 * v.exp_m1());
        } else {
            log_small = log_add_exp(log_small, (c as f64).ln() + v);
        }
    }
    linear.push(constant as f64);
    let a = exact_sum(linear);
    let log_excess = if a > 0.0 {
        log_add_exp(a.ln(), log_small)
    } else if log_small > f64::NEG_INFINITY && -a < 0.5 * log_small.exp() {
        log_small + (a * (-log_small).exp()).ln_1p()
    } else if log_small > f64::NEG_INFINITY && log_small < -700.0 {
        // rounding noise in the constant part dominates an underflowing excess
        log_small
    } else {
        return Err(GeometryError::PrecisionLoss);
    };
    Ok(log_excess - LN_2)
}

/// One stretch: every shear multiplied by `e^t`.
pub fn stretch(h: &ShearPoint, t: f64) -> ShearPoint {
    ShearPoint {
        tri: h.tri.clone(),
        base: h.base.clone(),
        log_scale: h.log_scale + t,
    }
}

/// Area of one spike: the horoball sector above height 1 between two
/// vertical geodesics a unit apart.
pub const SPIKE_AREA: f64 = 1.0;

/// Total area of the foliated part of the surface: surface area minus the
/// non-foliated regions, `2 pi |chi| - F (pi - 3)`.
pub fn foliated_area(tri: &IdealTriangulation) -> f64 {
    let chi = tri.euler_characteristic().unsigned_abs() as f64;
    let f = tri.triangle_count() as f64;
    2.0 * PI * chi - f * (PI - 3.0)
}

/// Length of the horocyclic arc crossing a spike at depth `d`.
pub fn spike_arc_length(d: f64) -> Result<f64, GeometryError> {
    if d < 0.0 || d.is_nan() {
        return Err(GeometryError::NegativeDepth(d));
    }
    Ok((-d).exp())
}

/// Moves an edge position from the frame of one adjacent triangle to the
/// frame of the other.
///
/// Positions are signed distances from the triangle's own foot, positive
/// toward the left-hand vertex seen from that triangle.
pub fn leaf_transfer(h: &ShearPoint, from: Slot, u: f64) -> f64 {
    -(u - h.shear_at(from))
}

/// Metric data of the horocyclic foliation: feet on every edge and the
/// three unit boundary arcs of each non-foliated region.
#[derive(Debug, Clone, Serialize)]
pub struct FoliationChart {
    /// Per edge: position of the second side's foot, in the first side's frame.
    pub foot_separation: Vec<f64>,
    /// Per triangle: its three distinguished points, one on each side.
    pub distinguished_points: Vec<[Slot; 3]>,
}

impl FoliationChart {
    pub const BOUNDARY_ARC_LENGTH: f64 = 1.0;

    pub fn new(h: &ShearPoint) -> Self {
        let tri = h.triangulation();
        FoliationChart {
            foot_separation: h.shears(),
            distinguished_points: (0..tri.triangle_count())
                .map(|t| [0u8, 1, 2].map(|s| Slot::new(t, s)))
                .collect(),
        }
    }

    /// Arc length of the leaf crossing a spike at `depth`.
    pub fn spike_arc(&self, depth: f64) -> Result<f64, GeometryError> {
        spike_arc_length(depth)
    }
}

/// A point of the boundary circle of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum IdealPoint {
    Finite(f64),
    Infinity,
}

impl IdealPoint {
    fn from_homogeneous(v: [f64; 2]) -> Self {
        if v[1].abs() <= 1e-300 * v[0].abs() {
            IdealPoint::Infinity
        } else {
            IdealPoint::Finite(v[0] / v[1])
        }
    }
}

/// Lift of a closed curve into the upper half-plane.
#[derive(Debug, Clone, Serialize)]
pub struct Development {
    /// Endpoints (right, left) of each edge crossed, in the order crossed.
    pub crossings: Vec<(IdealPoint, IdealPoint)>,
    /// Repelling and attracting fixed points of the deck transformation.
    pub axis: (IdealPoint, IdealPoint),
    /// Deck transformation taking the first lifted triangle to the last.
    pub deck: Matrix2,
    pub translation_length: f64,
}

fn det2(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

fn normalize(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

/// Möbius map sending 0, ∞, 1 to `p`, `q`, `r` (homogeneous vectors).
fn frame(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> Matrix2 {
    // columns c0 * q and c1 * p with c0 q + c1 p = r
    let d = det2(q, p);
    let c0 = det2(r, p) / d;
    let c1 = det2(q, r) / d;
    Matrix2::new(c0 * q[0], c1 * p[0], c0 * q[1], c1 * p[1])
}

/// Develops one period of `curve` triangle by triangle.
///
/// Each new triangle's third vertex is placed by the shear of the edge
/// crossed (in the frame sending the edge to `[0, ∞]` and the old triangle to
/// `(0, ∞, -1)` the new vertex is `e^x`). This is independent of the
/// holonomy matrices and serves as their oracle.
pub fn develop(h: &ShearPoint, curve: &CurveWord) -> Result<Development, GeometryError> {
    let tri = h.triangulation();
    let start = [[0.0, 1.0], [1.0, 1.0], [1.0, 0.0]];
    let mut v = start;
    let mut crossings = Vec::with_capacity(curve.len());
    for s in curve.steps() {
        let exit = Slot::new(s.triangle, s.exit);
        let x = h.shear_at(exit);
        if x.abs() > 700.0 {
            return Err(GeometryError::NumericalOverflow(format!(
                "shear {x} too large to develop"
            )));
        }
        let b = s.exit as usize;
        let rt = v[b];
        let lf = v[(b + 1) % 3];
        let o = v[(b + 2) % 3];
        let k = x.exp() * det2(o, rt) / det2(o, lf);
        let q = normalize([rt[0] + k * lf[0], rt[1] + k * lf[1]]);
        if !(q[0].is_finite() && q[1].is_finite()) {
            return Err(GeometryError::NumericalOverflow(
                "developing map left double range".into(),
            ));
        }
        crossings.push((IdealPoint::from_homogeneous(rt), IdealPoint::from_homogeneous(lf)));
        let entry = tri.glued(exit).side as usize;
        let mut nv = [[0.0; 2]; 3];
        nv[entry] = lf;
        nv[(entry + 1) % 3] = rt;
        nv[(entry + 2) % 3] = q;
        v = nv;
    }
    let a = frame(start[0], start[1], start[2]);
    let b = frame(v[0], v[1], v[2]);
    let g = b * a.inverse();
    if !g.is_finite() {
        return Err(GeometryError::NumericalOverflow(
            "deck transformation not finite".into(),
        ));
    }
    let det = g.det();
    let g = g.scaled(1.0 / det.abs().sqrt());
    let tr = g.trace().abs();
    if tr <= 2.0 + TRANSCENDENTAL_TOL {
        return Err(GeometryError::PeripheralOrTrivial { trace: tr });
    }
    // fixed points of z -> (az + b)/(cz + d): c z^2 + (d - a) z - b = 0
    let disc = ((g.d - g.a).powi(2) + 4.0 * g.b * g.c).max(0.0).sqrt();
    let fixed = |sgn: f64| {
        if g.c.abs() < 1e-300 {
            if sgn > 0.0 {
                IdealPoint::Infinity
            } else {
                IdealPoint::Finite(g.b / (g.d - g.a))
            }
        } else {
            IdealPoint::Finite((g.a - g.d + sgn * disc) / (2.0 * g.c))
        }
    };
    let attracting_sign = if g.a + g.d > 0.0 { 1.0 } else { -1.0 };
    Ok(Development {
        crossings,
        axis: (fixed(-attracting_sign), fixed(attracting_sign)),
        deck: g,
        translation_length: 2.0 * (tr / 2.0).acosh(),
    })
}
