//! Stretch-ray experiments: length series, regime classification and
//! intersection estimates.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{check_complete, curve_log_length, stretch, GeometryError, Precision, ShearPoint};
use crate::horogeodesic::{stairstep, HorogeodesicError};
use crate::numeric::{format_real, ls_slope};
use crate::topology::{CurveWord, IdealTriangulation, StandardSurface};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("grid {0}")]
    BadGrid(String),
    #[error("classified as {class} but {check}")]
    Inconsistent { class: Class, check: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Horogeodesic(#[from] HorogeodesicError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Diverges,
    Shrinks,
    Bounded,
    Peripheral,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Diverges => "diverges",
            Class::Shrinks => "shrinks",
            Class::Bounded => "bounded",
            Class::Peripheral => "peripheral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Stairstep intersection above which a curve must diverge.
    pub epsilon_i: f64,
    /// Final length below which a curve may shrink.
    pub epsilon_length: f64,
    pub slope_min: f64,
    pub slope_max: f64,
    /// Largest max/min length ratio on the top half of a bounded series.
    pub bounded_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            epsilon_i: 1e-8,
            epsilon_length: 1e-3,
            slope_min: 0.9,
            slope_max: 1.1,
            bounded_ratio: 1.5,
        }
    }
}

/// Evenly spaced times `t0, t0 + step, ...` up to `t1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            t0: 0.0,
            t1: 12.0,
            step: 0.5,
        }
    }
}

impl Grid {
    pub fn new(t0: f64, t1: f64, step: f64) -> Result<Self, HarnessError> {
        if !(t0.is_finite() && t1.is_finite() && step.is_finite()) {
            return Err(HarnessError::BadGrid("bounds must be finite".into()));
        }
        if step <= 0.0 || t1 < t0 {
            return Err(HarnessError::BadGrid(format!("{t0}:{t1}:{step} is not increasing")));
        }
        if (t1 - t0) / step > 1e6 {
            return Err(HarnessError::BadGrid("too many points".into()));
        }
        Ok(Grid { t0, t1, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.t1 - self.t0) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.t0 + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceSource {
    Standard(StandardSurface),
    Inline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedCurve {
    pub name: String,
    pub word: CurveWord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StretchExperiment {
    pub source: SurfaceSource,
    pub base: ShearPoint,
    pub curves: Vec<NamedCurve>,
    pub grid: Grid,
    pub tolerances: Tolerances,
    pub precision: Precision,
}

impl StretchExperiment {
    pub fn new(source: SurfaceSource, base: ShearPoint, curves: Vec<NamedCurve>) -> Result<Self, HarnessError> {
        check_complete(&base)?;
        Ok(StretchExperiment {
            source,
            base,
            curves,
            grid: Grid::default(),
            tolerances: Tolerances::default(),
            precision: Precision::default(),
        })
    }

    pub fn triangulation(&self) -> &Arc<IdealTriangulation> {
        self.base.triangulation_arc()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub t: f64,
    pub length: f64,
    pub log_length: f64,
    pub i: f64,
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveReport {
    pub name: String,
    pub series: Vec<SeriesPoint>,
    pub class: Option<Class>,
    /// Least-squares slope of `log length` over the top third of the grid.
    pub slope: Option<f64>,
    /// `e^{-t_max} length(t_max)`.
    pub estimate_i: Option<f64>,
    /// Stairstep intersection at the base point.
    pub stairstep_i: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BehaviorReport {
    pub grid: Vec<f64>,
    pub curves: Vec<CurveReport>,
}

/// Evaluates every curve along the ray; curves fail independently.
pub fn run(e: &StretchExperiment) -> BehaviorReport {
    let grid = e.grid.points();
    let curves = e.curves.par_iter().map(|c| curve_report(e, &grid, c)).collect();
    BehaviorReport { grid, curves }
}

fn curve_report(e: &StretchExperiment, grid: &[f64], c: &NamedCurve) -> CurveReport {
    let mut report = CurveReport {
        name: c.name.clone(),
        series: Vec::new(),
        class: None,
        slope: None,
        estimate_i: None,
        stairstep_i: None,
        error: None,
    };
    if c.word.is_peripheral() {
        report.class = Some(Class::Peripheral);
        return report;
    }
    match evaluate(e, grid, &c.word) {
        Ok(series) => {
            let ts: Vec<f64> = series.iter().map(|p| p.t).collect();
            let logs: Vec<f64> = series.iter().map(|p| p.log_length).collect();
            let i0 = series[0].i;
            let last = series[series.len() - 1];
            report.slope = top_third_slope(&ts, &logs);
            report.estimate_i = Some((last.log_length - last.t).exp());
            report.stairstep_i = Some(i0);
            match classify(&ts, &logs, i0, &e.tolerances) {
                Ok(class) => report.class = Some(class),
                Err(err) => report.error = Some(err.to_string()),
            }
            report.series = series;
        }
        Err(err) => report.error = Some(err.to_string()),
    }
    report
}

fn evaluate(e: &StretchExperiment, grid: &[f64], word: &CurveWord) -> Result<Vec<SeriesPoint>, HarnessError> {
    grid.iter()
        .map(|&t| {
            let h = stretch(&e.base, t);
            let log_length = curve_log_length(&h, word, e.precision)?;
            let path = stairstep(&h, word)?;
            Ok(SeriesPoint {
                t,
                length: log_length.exp(),
                log_length,
                i: path.intersection_i(),
                l: path.horo_length_l(),
            })
        })
        .collect()
}

fn top_third_slope(ts: &[f64], logs: &[f64]) -> Option<f64> {
    let t_max = *ts.last()?;
    let cut = t_max - (t_max - ts[0]) / 3.0;
    let k = ts.iter().position(|&t| t >= cut - 1e-12)?;
    (ts.len() - k >= 2).then(|| ls_slope(&ts[k..], &logs[k..]))
}

/// Decides the regime of a length series given as `log length` over `ts`,
/// with `i` the stairstep intersection at the start of the ray.
///
/// The combinatorial verdict is cross-checked against the numbers and any
/// disagreement is an error.
pub fn classify(ts: &[f64], log_lengths: &[f64], i: f64, tol: &Tolerances) -> Result<Class, HarnessError> {
    if ts.is_empty() || ts.len() != log_lengths.len() {
        return Err(HarnessError::BadGrid("series does not match the grid".into()));
    }
    if i > tol.epsilon_i {
        let slope = top_third_slope(ts, log_lengths).unwrap_or(f64::NAN);
        if !(tol.slope_min..=tol.slope_max).contains(&slope) {
            return Err(HarnessError::Inconsistent {
                class: Class::Diverges,
                check: format!("slope of log length is {slope}"),
            });
        }
        return Ok(Class::Diverges);
    }
    let t_max = ts[ts.len() - 1];
    let half = ts.iter().position(|&t| t >= (ts[0] + t_max) / 2.0 - 1e-12).unwrap_or(0);
    let top = &log_lengths[half..];
    let last = top[top.len() - 1];
    let decreasing = top.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs());
    if last < tol.epsilon_length.ln() && decreasing {
        return Ok(Class::Shrinks);
    }
    let max = top.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = top.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = (max - min).exp();
    if ratio > tol.bounded_ratio {
        return Err(HarnessError::Inconsistent {
            class: Class::Bounded,
            check: format!("max/min length ratio on the top half is {ratio}"),
        });
    }
    Ok(Class::Bounded)
}

/// `e^{-t_max} length(t_max)`; lies in `[I, I + e^{-t_max} L(t_max)]`.
pub fn estimate_i(h0: &ShearPoint, curve: &CurveWord, t_max: f64, precision: Precision) -> Result<f64, GeometryError> {
    let log_length = curve_log_length(&stretch(h0, t_max), curve, precision)?;
    Ok((log_length - t_max).exp())
}

pub fn to_csv(report: &BehaviorReport) -> String {
    let mut out = String::from("curve_id,t,length,I,L,class\n");
    for c in &report.curves {
        let class = c.class.map(|k| k.to_string()).unwrap_or_default();
        for p in &c.series {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.name,
                format_real(p.t),
                format_real(p.length),
                format_real(p.i),
                format_real(p.l),
                class
            ));
        }
    }
    out
}

#[derive(Serialize)]
struct SummaryEntry<'a> {
    curve_id: &'a str,
    class: Option<Class>,
    slope: Option<f64>,
    estimate_i: Option<f64>,
    stairstep_i: Option<f64>,
    final_log_length: Option<f64>,
    error: Option<&'a str>,
}

pub fn summary_json(report: &BehaviorReport) -> String {
    let entries: Vec<SummaryEntry> = report
        .curves
        .iter()
        .map(|c| SummaryEntry {
            curve_id: &c.name,
            class: c.class,
            slope: c.slope,
            estimate_i: c.estimate_i,
            stairstep_i: c.stairstep_i,
            final_log_length: c.series.last().map(|p| p.log_length),
            error: c.error.as_deref(),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&entries).expect("summary serializes");
    s.push('\n');
    s
}

/// Writes the CSV to `path` and the summary next to it as `<path>.summary.json`.
pub fn export(report: &BehaviorReport, path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, to_csv(report))?;
    let mut summary = path.as_os_str().to_owned();
    summary.push(".summary.json");
    std::fs::write(summary, summary_json(report))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{standard_surface, Step};

    fn torus_experiment() -> StretchExperiment {
        let tri = Arc::new(standard_surface(StandardSurface::OncePuncturedTorus));
        let a = CurveWord::new(&tri, vec![Step::new(0, 0, 1), Step::new(1, 1, 0)]).unwrap();
        let base = ShearPoint::new(tri, vec![0.5, 0.3, -0.8]).unwrap();
        StretchExperiment::new(
            SurfaceSource::Standard(StandardSurface::OncePuncturedTorus),
            base,
            vec![NamedCurve {
                name: "A".into(),
                word: a,
            }],
        )
        .unwrap()
    }

    #[test]
    fn default_grid() {
        let g = Grid::default().points();
        assert_eq!(g.len(), 25);
        assert_eq!(g[24], 12.0);
        assert!(Grid::new(1.0, 0.0, 0.5).is_err());
        assert!(Grid::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn divergent_generator() {
        let e = torus_experiment();
        let r = run(&e);
        let c = &r.curves[0];
        assert_eq!(c.class, Some(Class::Diverges), "{:?}", c.error);
        assert!((c.slope.unwrap() - 1.0).abs() < 0.01);
        let last = c.series.last().unwrap();
        assert!((c.estimate_i.unwrap() - 0.8).abs() <= (-12f64).exp() * last.l);
    }

    #[test]
    fn decision_rules() {
        let tol = Tolerances::default();
        let ts: Vec<f64> = (0..25).map(|k| k as f64 * 0.5).collect();
        let decaying: Vec<f64> = ts.iter().map(|t| 0.5 - t).collect();
        assert_eq!(classify(&ts, &decaying, 0.0, &tol).unwrap(), Class::Shrinks);
        let flat: Vec<f64> = ts.iter().map(|t| 0.7f64.ln() + 0.01 * (t * 3.0).sin()).collect();
        assert_eq!(classify(&ts, &flat, 0.0, &tol).unwrap(), Class::Bounded);
        let linear: Vec<f64> = ts.iter().map(|t| t + (0.8f64).ln()).collect();
        assert_eq!(classify(&ts, &linear, 0.8, &tol).unwrap(), Class::Diverges);
        assert!(matches!(
            classify(&ts, &flat, 0.8, &tol),
            Err(HarnessError::Inconsistent {
                class: Class::Diverges,
                ..
            })
        ));
        assert!(matches!(
            classify(&ts, &linear, 0.0, &tol),
            Err(HarnessError::Inconsistent {
                class: Class::Bounded,
                ..
            })
        ));
    }

    #[test]
    fn csv_export() {
        let mut e = torus_experiment();
        e.grid = Grid::new(0.0, 1.0, 0.5).unwrap();
        e.tolerances.slope_min = f64::NEG_INFINITY;
        let r = run(&e);
        let csv = to_csv(&r);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("curve_id,t,length,I,L,class\nA,0,"));
        let empty = BehaviorReport {
            grid: vec![0.0],
            curves: vec![],
        };
        assert_eq!(to_csv(&empty), "curve_id,t,length,I,L,class\n");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        export(&r, &path).unwrap();
        let first = std::fs::read(&path).unwrap();
        export(&r, &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), first);
        assert!(dir.path().join("r.csv.summary.json").exists());
    }

    #[test]
    fn estimate_at_zero_is_the_length() {
        let e = torus_experiment();
        let w = &e.curves[0].word;
        let l = crate::geometry::curve_length(&e.base, w).unwrap();
        assert!((estimate_i(&e.base, w, 0.0, Precision::Extended).unwrap() - l).abs() < 1e-14);
    }
}
