#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use horostretch::geometry::{project_complete, ShearPoint};
use horostretch::topology::{
    closed_words, standard_surface, CurveWord, IdealTriangulation, Slot, StandardSurface, Turn,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub const MAX_WORD: usize = 12;

pub fn surface(kind: StandardSurface) -> Arc<IdealTriangulation> {
    static CACHE: OnceLock<Vec<Arc<IdealTriangulation>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        StandardSurface::ALL
            .iter()
            .map(|k| Arc::new(standard_surface(*k)))
            .collect()
    });
    all[StandardSurface::ALL.iter().position(|k| *k == kind).unwrap()].clone()
}

/// Every essential class of at most [`MAX_WORD`] steps.
pub fn words(kind: StandardSurface) -> &'static [CurveWord] {
    static CACHE: OnceLock<Vec<Vec<CurveWord>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        StandardSurface::ALL
            .iter()
            .map(|k| closed_words(&standard_surface(*k), MAX_WORD))
            .collect()
    });
    &all[StandardSurface::ALL.iter().position(|k| *k == kind).unwrap()]
}

pub fn random_word(rng: &mut TestRng, kind: StandardSurface) -> CurveWord {
    let ws = words(kind);
    let w = &ws[rng.gen_range(0..ws.len())];
    w.rotated(rng.gen_range(0..w.len()))
}

/// Complete shears with entries of size about `scale`.
pub fn random_point(rng: &mut TestRng, tri: &Arc<IdealTriangulation>, scale: f64) -> ShearPoint {
    let raw: Vec<f64> = (0..tri.edge_count()).map(|_| rng.gen_range(-scale..scale)).collect();
    ShearPoint::complete(tri.clone(), project_complete(tri, &raw)).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

type Trop = [[f64; 2]; 2];
const NEG: f64 = f64::NEG_INFINITY;

fn trop_mul(a: &Trop, b: &Trop) -> Trop {
    let mut c = [[NEG; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] + b[0][j]).max(a[i][1] + b[1][j]);
        }
    }
    c
}

/// Intersection with the horocyclic foliation from the tropical limit of
/// the holonomy: every entry of the holonomy is a positive sum of
/// exponentials of half-shears, so `e^{-t} log |trace|` tends to the max-plus
/// trace and `I` is twice that.
pub fn tropical_i(h: &ShearPoint, curve: &CurveWord) -> f64 {
    let mut m: Trop = [[0.0, NEG], [NEG, 0.0]];
    for s in curve.steps() {
        let x = h.shear_at(Slot::new(s.triangle, s.entry));
        let boost: Trop = [[-x / 2.0, NEG], [NEG, x / 2.0]];
        let turn: Trop = match s.turn().expect("reduced words have no U-turns") {
            Turn::Left => [[0.0, 0.0], [NEG, 0.0]],
            Turn::Right => [[0.0, NEG], [0.0, 0.0]],
        };
        m = trop_mul(&trop_mul(&turn, &boost), &m);
    }
    2.0 * m[0][0].max(m[1][1]).max(0.0)
}

/// Area of one spike, `∫ e^{-x} dx` over `[0, ∞)`, by quadrature on `[0, 50]`
/// plus the analytic tail.
pub fn spike_area_numeric() -> f64 {
    let n = 200_000;
    let b = 50.0;
    let dx = b / n as f64;
    // midpoint rule at two resolutions, one Richardson step
    let mid: f64 = (0..n).map(|k| (-(k as f64 + 0.5) * dx).exp()).sum::<f64>() * dx;
    let half: f64 = (0..2 * n).map(|k| (-(k as f64 + 0.5) * dx / 2.0).exp()).sum::<f64>() * dx / 2.0;
    (4.0 * half - mid) / 3.0 + (-b).exp()
}
