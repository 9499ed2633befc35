//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::cmp::Ordering;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use horostretch::geometry::{
    check_complete, curve_length, curve_log_length, develop, foliated_area, log_trace, stretch, Precision, ShearPoint,
};
use horostretch::harness::{self, Class, Grid, NamedCurve, StretchExperiment, SurfaceSource};
use horostretch::horogeodesic::{horo_length_cmp, sandwich_check, singular_graph, stairstep, PushMove};
use horostretch::laminations::{closed_leaf_shears, MultiCurve};
use horostretch::numeric::ls_slope;
use horostretch::topology::{CurveWord, StandardSurface, Step};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn grid() -> Vec<f64> {
    Grid::default().points()
}

fn word(kind: StandardSurface, steps: &[(usize, u8, u8)]) -> CurveWord {
    let tri = surface(kind);
    CurveWord::new(&tri, steps.iter().map(|&(t, a, b)| Step::new(t, a, b)).collect()).unwrap()
}

fn foliation_length() -> Outcome {
    let spike = spike_area_numeric();
    let mut worst = Vec::new();
    let mut ok = true;
    for (kind, expected) in [
        (StandardSurface::OncePuncturedTorus, 3.0),
        (StandardSurface::FourPuncturedSphere, 6.0),
    ] {
        let tri = surface(kind);
        assert_eq!(3.0 * tri.euler_characteristic().unsigned_abs() as f64, expected);
        let closed = foliated_area(&tri);
        let numeric = 3.0 * tri.triangle_count() as f64 * spike;
        ok &= (closed - expected).abs() <= 1e-12 && (numeric - expected).abs() <= 1e-9;
        worst.push(format!(
            "{}: closed form {closed}, quadrature {numeric:.12}, target {expected}",
            kind.name()
        ));
    }
    check(ok, worst.join("; "))
}

fn divergent_regime() -> Outcome {
    let kind = StandardSurface::OncePuncturedTorus;
    let h0 = ShearPoint::complete(surface(kind), vec![0.5, 0.3, -0.8]).unwrap();
    let a = word(kind, &[(0, 0, 1), (1, 1, 0)]);
    let i = stairstep(&h0, &a).unwrap().intersection_i();
    if i <= 0.0 {
        return Err(format!("generator has I = {i}"));
    }
    let ts = grid();
    let mut logs = Vec::new();
    let mut sandwich = true;
    let mut l12 = 0.0;
    for &t in &ts {
        let h = stretch(&h0, t);
        let log_len = curve_log_length(&h, &a, Precision::Extended).unwrap();
        let len = log_len.exp();
        let l = stairstep(&h, &a).unwrap().horo_length_l();
        let lower = i * t.exp();
        sandwich &= lower <= len * (1.0 + 1e-9) && len <= (lower + l) * (1.0 + 1e-9);
        logs.push(log_len);
        l12 = l;
    }
    let k = ts.iter().position(|&t| t >= 8.0).unwrap();
    let slope = ls_slope(&ts[k..], &logs[k..]);
    let estimate = (logs[logs.len() - 1] - 12.0).exp();
    let envelope = (-12f64).exp() * l12;
    let ok = sandwich && (slope - 1.0).abs() <= 0.01 && (estimate - i).abs() <= envelope;
    check(
        ok,
        format!(
            "I = {i}, sandwich on grid {sandwich}, slope over [8,12] {slope:.6}, |e^-12 l(12) - I| = {:.3e} <= {envelope:.3e}",
            (estimate - i).abs()
        ),
    )
}

fn shrinking_regime() -> Outcome {
    let kind = StandardSurface::OncePuncturedTorus;
    let tri = surface(kind);
    let gamma = word(kind, &[(0, 0, 1), (1, 1, 0)]);
    let mc = MultiCurve::single(gamma.clone()).unwrap();
    let h0 = ShearPoint::complete(tri.clone(), closed_leaf_shears(&tri, &mc)).unwrap();
    let graph = singular_graph(&h0);
    let carried = graph.essential_cycles.iter().any(|c| c.same_class(&gamma));
    let chi = tri.euler_characteristic().unsigned_abs() as f64;
    let mut bound_ok = true;
    let mut last = f64::NAN;
    for t in grid() {
        let log_len = curve_log_length(&stretch(&h0, t), &gamma, Precision::Extended).unwrap();
        bound_ok &= log_len <= (3.0 * chi).ln() - t;
        last = log_len;
    }
    let ok = carried && bound_ok && last < 1e-3f64.ln();
    check(
        ok,
        format!(
            "shears {:?}, gamma carried by leaves {carried}, l <= 3|chi|e^-t on grid {bound_ok}, ln l(12) = {last:.1}",
            h0.shears()
        ),
    )
}

fn bounded_regime() -> Outcome {
    let kind = StandardSurface::TwicePuncturedTorus;
    let tri = surface(kind);
    let gamma = word(kind, &[(1, 0, 1), (0, 0, 2)]);
    let alpha = word(kind, &[(2, 0, 2), (3, 0, 1)]);
    let mc = MultiCurve::single(gamma.clone()).unwrap();
    let h0 = ShearPoint::complete(tri.clone(), closed_leaf_shears(&tri, &mc)).unwrap();
    let p0 = stairstep(&h0, &alpha).unwrap();
    let (i0, l0) = (p0.intersection_i(), p0.horo_length_l());
    let len0 = curve_length(&h0, &alpha).unwrap();
    let lens: Vec<f64> = grid()
        .iter()
        .map(|&t| curve_length(&stretch(&h0, t), &alpha).unwrap())
        .collect();
    let max = lens.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = lens.iter().copied().fold(f64::INFINITY, f64::min);
    let e = StretchExperiment::new(
        SurfaceSource::Standard(kind),
        h0.clone(),
        vec![NamedCurve {
            name: "alpha".into(),
            word: alpha.clone(),
        }],
    )
    .unwrap();
    let class = harness::run(&e).curves[0].class;
    let ok = tri.euler_characteristic() == -2
        && i0 == 0.0
        && !alpha.same_class(&gamma)
        && max <= len0 + l0
        && min >= 0.01
        && class == Some(Class::Bounded);
    check(
        ok,
        format!(
            "chi = -2, I = {i0}, l in [{min:.7}, {max:.7}], l(0) + L(0) = {:.7}, class {class:?}",
            len0 + l0
        ),
    )
}

fn monotone_horocyclic_length() -> Outcome {
    let mut rng = TestRng::seed_from_u64(5);
    let kinds = [
        StandardSurface::OncePuncturedTorus,
        StandardSurface::FourPuncturedSphere,
        StandardSurface::TwicePuncturedTorus,
    ];
    let (mut found, mut skipped, mut failures) = (0, 0, Vec::new());
    while found < 20 {
        let kind = kinds[found % kinds.len()];
        let h0 = random_point(&mut rng, &surface(kind), 2.0);
        let w = random_word(&mut rng, kind);
        let paths: Vec<_> = grid()
            .iter()
            .map(|&t| stairstep(&stretch(&h0, t), &w).unwrap())
            .collect();
        if paths[0].depths().iter().all(|d| *d == 0.0) {
            // every arc sits on a spike boundary and L is the constant arc count
            skipped += 1;
            continue;
        }
        if let Some(k) = paths
            .windows(2)
            .position(|p| horo_length_cmp(&p[1], &p[0]) != Ordering::Less)
        {
            failures.push(format!("instance {found} at t = {}", grid()[k + 1]));
        }
        found += 1;
    }
    check(
        failures.is_empty(),
        format!("20 instances strictly decreasing unless listed {failures:?}; {skipped} all-zero-depth draws skipped"),
    )
}

fn sandwich_suite() -> Outcome {
    let mut rng = TestRng::seed_from_u64(6);
    let mut bad = Vec::new();
    let mut widest: f64 = 0.0;
    for n in 0..100 {
        let kind = if n % 2 == 0 {
            StandardSurface::OncePuncturedTorus
        } else {
            StandardSurface::FourPuncturedSphere
        };
        let scale = rng.gen_range(0.1..4.0);
        let h = random_point(&mut rng, &surface(kind), scale);
        let w = random_word(&mut rng, kind);
        let r = sandwich_check(&h, &w).unwrap();
        widest = widest.max((r.length - r.i) / r.l);
        if !r.ok {
            bad.push(n);
        }
    }
    check(
        bad.is_empty(),
        format!("100 instances, failures {bad:?}, max (l - I) / L = {widest:.4}"),
    )
}

fn push_invariance() -> Outcome {
    let mut rng = TestRng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut not_good = 0;
    let mut nontrivial = 0;
    for n in 0..50 {
        let kind = if n % 2 == 0 {
            StandardSurface::OncePuncturedTorus
        } else {
            StandardSurface::TwicePuncturedTorus
        };
        let h = random_point(&mut rng, &surface(kind), 2.0);
        let mut p = stairstep(&h, &random_word(&mut rng, kind)).unwrap();
        if !p.is_good().good {
            not_good += 1;
        }
        let i0 = p.intersection_i();
        for _ in 0..10 {
            let stage = rng.gen_range(0..p.len());
            let (lo, hi) = p.good_push_range(stage).unwrap();
            let hi = if hi.is_finite() { hi } else { lo + 5.0 };
            let new_depth = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
            if new_depth != p.stages()[stage].depth() {
                nontrivial += 1;
            }
            p = p.apply_push(PushMove { stage, new_depth }).unwrap();
            if !p.is_good().good {
                not_good += 1;
            }
            worst = worst.max((p.intersection_i() - i0).abs() / i0.max(1.0));
        }
    }
    check(
        worst <= 1e-12 && not_good == 0,
        format!(
            "500 pushes ({nontrivial} moved a crossing), max |dI| = {worst:.3e}, paths left good: {}",
            not_good == 0
        ),
    )
}

fn holonomy_soundness() -> Outcome {
    let mut rng = TestRng::seed_from_u64(8);
    let mut trace_err: f64 = 0.0;
    for kind in StandardSurface::ALL {
        let tri = surface(kind);
        for _ in 0..10 {
            let h0 = random_point(&mut rng, &tri, 2.0);
            for t in [0.0, 4.0, 8.0, 12.0] {
                let h = stretch(&h0, t);
                if check_complete(&h).is_err() {
                    return Err(format!("{} stretched to t = {t} is incomplete", kind.name()));
                }
                for cusp in tri.cusps() {
                    let tr = log_trace(&h, &cusp.peripheral_word(&tri)).exp();
                    trace_err = trace_err.max((tr - 2.0).abs());
                }
            }
        }
    }
    let mut dev_err: f64 = 0.0;
    for n in 0..100 {
        let kind = StandardSurface::ALL[n % 4];
        let h = random_point(&mut rng, &surface(kind), 1.5);
        let w = random_word(&mut rng, kind);
        let d = develop(&h, &w).unwrap();
        let l = curve_length(&h, &w).unwrap();
        dev_err = dev_err.max((d.translation_length - l).abs() / l.max(1.0));
    }
    check(
        trace_err <= 1e-9 && dev_err <= 1e-9,
        format!("max ||tr| - 2| over cusps = {trace_err:.3e}, max develop/trace length gap = {dev_err:.3e}"),
    )
}

fn scaling_identities() -> Outcome {
    let mut rng = TestRng::seed_from_u64(9);
    let mut semigroup = true;
    let mut worst: f64 = 0.0;
    for n in 0..100 {
        let kind = StandardSurface::ALL[n % 4];
        let tri: Arc<_> = surface(kind);
        let h = random_point(&mut rng, &tri, 2.0);
        let (a, b) = (rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0));
        semigroup &= stretch(&stretch(&h, a), b) == stretch(&h, a + b);
        let w = random_word(&mut rng, kind);
        let t = rng.gen_range(0.0..12.0);
        let i0 = stairstep(&h, &w).unwrap().intersection_i();
        let it = stairstep(&stretch(&h, t), &w).unwrap().intersection_i();
        let expected = t.exp() * i0;
        if expected > 0.0 {
            worst = worst.max((it - expected).abs() / expected);
        } else if it != 0.0 {
            worst = f64::INFINITY;
        }
    }
    check(
        semigroup && worst <= 1e-12,
        format!("semigroup law exact: {semigroup}, max relative I(h_t) / e^t I(h) error {worst:.3e}"),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("horocyclic foliation length", foliation_length),
        ("divergent regime", divergent_regime),
        ("shrinking regime", shrinking_regime),
        ("bounded regime", bounded_regime),
        ("monotone horocyclic length", monotone_horocyclic_length),
        ("sandwich suite", sandwich_suite),
        ("push invariance", push_invariance),
        ("holonomy soundness", holonomy_soundness),
        ("scaling identities", scaling_identities),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} {}. {name} ({:.2}s): {detail}",
            n + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
