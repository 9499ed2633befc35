//! Weighted multicurves and their dual-track weights.

use std::ops::Add;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{curve_length, GeometryError, ShearPoint};
use crate::topology::{next_side, prev_side, CurveWord, IdealTriangulation, Slot};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LaminationError {
    #[error("switch condition fails in triangle {0}")]
    SwitchViolation(usize),
    #[error("expected {expected} edge weights, got {got}")]
    WrongEdgeCount { expected: usize, got: usize },
    #[error("weight {0} is not a positive finite number")]
    BadWeight(f64),
    #[error("component {0} is peripheral")]
    PeripheralComponent(usize),
    #[error("components {0} and {1} are homotopic")]
    DuplicateComponent(usize, usize),
}

/// Weights on the branches of the track dual to the triangulation, one per edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackWeights(pub Vec<f64>);

impl TrackWeights {
    pub fn zero(tri: &IdealTriangulation) -> Self {
        TrackWeights(vec![0.0; tri.edge_count()])
    }

    pub fn scaled(&self, c: f64) -> Self {
        TrackWeights(self.0.iter().map(|w| w * c).collect())
    }

    /// Measures `(w_b + w_c - w_a) / 2` of the three corners of triangle `t`,
    /// indexed by corner vertex.
    pub fn corner_measures(&self, tri: &IdealTriangulation, t: usize) -> [f64; 3] {
        let w = |s: u8| self.0[tri.edge(Slot::new(t, s)).0];
        // corner j sits between sides j - 1 and j, opposite side j + 1
        [0u8, 1, 2].map(|j| (w(prev_side(j)) + w(j) - w(next_side(j))) / 2.0)
    }
}

impl Add for &TrackWeights {
    type Output = TrackWeights;

    fn add(self, o: &TrackWeights) -> TrackWeights {
        TrackWeights(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

/// Number of times `curve` crosses each edge.
pub fn curve_to_weights(tri: &IdealTriangulation, curve: &CurveWord) -> TrackWeights {
    let mut w = TrackWeights::zero(tri);
    for e in curve.entry_edges(tri) {
        w.0[e.0] += 1.0;
    }
    w
}

pub fn check_switch(tri: &IdealTriangulation, w: &TrackWeights) -> Result<(), LaminationError> {
    if w.0.len() != tri.edge_count() {
        return Err(LaminationError::WrongEdgeCount {
            expected: tri.edge_count(),
            got: w.0.len(),
        });
    }
    if let Some(&bad) = w.0.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(LaminationError::BadWeight(bad));
    }
    for t in 0..tri.triangle_count() {
        let m = w.corner_measures(tri, t);
        let scale = [0u8, 1, 2]
            .map(|s| w.0[tri.edge(Slot::new(t, s)).0])
            .iter()
            .sum::<f64>()
            .max(1.0);
        if m.iter().any(|&x| x < -1e-12 * scale) {
            return Err(LaminationError::SwitchViolation(t));
        }
    }
    Ok(())
}

/// Positively weighted, pairwise non-homotopic essential curves.
///
/// Disjointness of the components is not checked.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiCurve {
    components: Vec<(CurveWord, f64)>,
}

impl MultiCurve {
    pub fn new(components: Vec<(CurveWord, f64)>) -> Result<Self, LaminationError> {
        for (i, (c, w)) in components.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(LaminationError::BadWeight(*w));
            }
            if c.is_peripheral() {
                return Err(LaminationError::PeripheralComponent(i));
            }
            if let Some(j) = components[..i].iter().position(|(d, _)| d.same_class(c)) {
                return Err(LaminationError::DuplicateComponent(j, i));
            }
        }
        Ok(MultiCurve { components })
    }

    pub fn single(curve: CurveWord) -> Result<Self, LaminationError> {
        Self::new(vec![(curve, 1.0)])
    }

    pub fn components(&self) -> &[(CurveWord, f64)] {
        &self.components
    }

    pub fn weights(&self, tri: &IdealTriangulation) -> TrackWeights {
        self.components.iter().fold(TrackWeights::zero(tri), |acc, (c, w)| {
            &acc + &curve_to_weights(tri, c).scaled(*w)
        })
    }

    pub fn scaled(&self, c: f64) -> Result<Self, LaminationError> {
        Self::new(self.components.iter().map(|(k, w)| (k.clone(), w * c)).collect())
    }
}

/// `Σ weight · length` over the components.
pub fn multicurve_length(h: &ShearPoint, mc: &MultiCurve) -> Result<f64, GeometryError> {
    mc.components.iter().map(|(c, w)| Ok(w * curve_length(h, c)?)).sum()
}

/// Shears at which the horocyclic foliation has each component of `mc` as a
/// closed leaf family carrying its weight.
///
/// Each passage from one triangle to the next shears the edge by the change
/// of side of the curve relative to the spike it turns around: half the
/// weight, with sign given by whether the curve switches from turning right
/// to turning left or back. The result is complete.
pub fn closed_leaf_shears(tri: &IdealTriangulation, mc: &MultiCurve) -> Vec<f64> {
    let mut x = vec![0.0; tri.edge_count()];
    for (curve, w) in &mc.components {
        let steps = curve.steps();
        let n = steps.len();
        let sigma = |i: usize| {
            if steps[i % n].exit == next_side(steps[i % n].entry) {
                1.0
            } else {
                -1.0
            }
        };
        for i in 0..n {
            let next = &steps[(i + 1) % n];
            let e = tri.edge(Slot::new(next.triangle, next.entry));
            x[e.0] += w * (sigma(i + 1) - sigma(i)) / 2.0;
        }
    }
    x
}
