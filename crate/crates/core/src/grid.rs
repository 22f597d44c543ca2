//! Floating-point sweep of the weighted bottleneck distance over a grid of
//! line angles and offsets. Used as an independent lower bound for the exact
//! engine and to produce heatmaps.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::exact::weighted_bottleneck;
use crate::geometry::{line_through, Line, Point};
use crate::module::{lub_closure, TwoParamModule};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub theta_steps: usize,
    pub offset_steps: usize,
    /// Offset interval; derived from the critical values when `None`.
    pub offset_range: Option<(f64, f64)>,
}

impl GridSpec {
    pub fn new(theta_steps: usize, offset_steps: usize) -> Self {
        GridSpec { theta_steps, offset_steps, offset_range: None }
    }

    pub fn with_range(mut self, low: f64, high: f64) -> Self {
        self.offset_range = Some((low, high));
        self
    }

    /// Angles `(i + 1) / (n + 1) · π/2`, strictly inside `(0, π/2)`.
    pub fn thetas(&self) -> Vec<f64> {
        let n = self.theta_steps.max(2);
        (0..n).map(|i| (i + 1) as f64 / (n + 1) as f64 * FRAC_PI_2).collect()
    }

    /// `offset_steps` evenly spaced values covering `range`, endpoints included.
    pub fn offsets(&self, range: (f64, f64)) -> Vec<f64> {
        linspace(range, self.offset_steps.max(2))
    }
}

/// One grid sample: the line at angle `theta` with offset `b2 − b1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatmapRow {
    pub theta: f64,
    pub offset: f64,
    pub weighted_cost: f64,
}

#[derive(Clone, Debug)]
pub struct Scan {
    pub max: f64,
    pub argmax: (f64, f64),
    pub rows: Vec<HeatmapRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineFamily {
    DiagonalOnly,
    CriticalPairsOnly,
}

fn linspace((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
}

/// Offsets reached by lines through the bounding box of the critical values,
/// padded on both sides by the box diameter.
pub fn default_offset_range(critical: &[Point<f64>]) -> (f64, f64) {
    if critical.is_empty() {
        return (-1.0, 1.0);
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in critical {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    let diam = (xmax - xmin).hypot(ymax - ymin).max(1.0);
    let lo = (-2.0 * xmax).min(2.0 * ymin).min(ymin - xmax);
    let hi = (-2.0 * xmin).max(2.0 * ymax).max(ymax - xmin);
    (lo - diam, hi + diam)
}

/// The normalized line with direction `(cos θ, sin θ)` and offset `b2 − b1`.
pub fn grid_line(theta: f64, offset: f64) -> Line<f64> {
    Line::from_direction_and_offset((theta.cos(), theta.sin()), offset).expect("angle inside (0, π/2)")
}

fn lowered<T: Scalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>) -> (TwoParamModule<f64>, TwoParamModule<f64>, Vec<Point<f64>>) {
    let (mf, nf) = (m.to_f64(), n.to_f64());
    let mut critical = mf.critical_values();
    critical.extend(nf.critical_values());
    (mf, nf, critical)
}

fn cost(m: &TwoParamModule<f64>, n: &TwoParamModule<f64>, line: &Line<f64>) -> f64 {
    weighted_bottleneck(m, n, line).0.as_f64()
}

fn sample_rows(m: &TwoParamModule<f64>, n: &TwoParamModule<f64>, thetas: &[f64], offsets: &[f64]) -> Vec<Vec<HeatmapRow>> {
    thetas
        .par_iter()
        .map(|&theta| {
            offsets
                .iter()
                .map(|&offset| HeatmapRow { theta, offset, weighted_cost: cost(m, n, &grid_line(theta, offset)) })
                .collect()
        })
        .collect()
}

/// Samples every grid line, rows in `(θ, offset)` order. The first maximal
/// sample is the argmax.
pub fn scan<T: Scalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, g: &GridSpec) -> Scan {
    let (mf, nf, critical) = lowered(m, n);
    let range = g.offset_range.unwrap_or_else(|| default_offset_range(&critical));
    let rows: Vec<HeatmapRow> = sample_rows(&mf, &nf, &g.thetas(), &g.offsets(range)).into_iter().flatten().collect();
    let mut best = (f64::NEG_INFINITY, (f64::NAN, f64::NAN));
    for r in &rows {
        if r.weighted_cost > best.0 {
            best = (r.weighted_cost, (r.theta, r.offset));
        }
    }
    Scan { max: best.0, argmax: best.1, rows }
}

/// Maximum and argmax of [`scan`] without keeping the samples.
pub fn scan_max<T: Scalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, g: &GridSpec) -> (f64, (f64, f64)) {
    let (mf, nf, critical) = lowered(m, n);
    let range = g.offset_range.unwrap_or_else(|| default_offset_range(&critical));
    let offsets = g.offsets(range);
    g.thetas()
        .par_iter()
        .map(|&theta| {
            let mut best = (f64::NEG_INFINITY, (theta, f64::NAN));
            for &offset in &offsets {
                let v = cost(&mf, &nf, &grid_line(theta, offset));
                if v > best.0 {
                    best = (v, (theta, offset));
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::NEG_INFINITY, (f64::NAN, f64::NAN)), |acc, b| if b.0 > acc.0 { b } else { acc })
}

/// Maximum over a restricted family of lines: diagonal lines sampled over the
/// offset grid, or every line through two points of the lub closure of the
/// critical values.
pub fn restricted_max<T: Scalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, g: &GridSpec, family: LineFamily) -> f64 {
    let (mf, nf, critical) = lowered(m, n);
    let lines: Vec<Line<f64>> = match family {
        LineFamily::DiagonalOnly => {
            let range = g.offset_range.unwrap_or_else(|| default_offset_range(&critical));
            g.offsets(range).into_iter().map(|o| Line::from_direction_and_offset((1.0, 1.0), o).expect("diagonal")).collect()
        }
        LineFamily::CriticalPairsOnly => {
            let pts = lub_closure(&critical);
            let mut lines = Vec::new();
            for (i, p) in pts.iter().enumerate() {
                for q in &pts[i + 1..] {
                    lines.extend(line_through(p, q));
                }
            }
            lines
        }
    };
    lines.par_iter().map(|l| cost(&mf, &nf, l)).reduce(|| 0.0, f64::max)
}

/// Writes `theta,offset,weighted_bottleneck` rows, with `inf` for infinite
/// costs.
pub fn write_csv<W: Write>(rows: &[HeatmapRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "offset", "weighted_bottleneck"])?;
    for r in rows {
        let cost = if r.weighted_cost.is_infinite() { "inf".to_string() } else { r.weighted_cost.to_string() };
        w.write_record([r.theta.to_string(), r.offset.to_string(), cost])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::Rect;
    use crate::scalar::Extended;

    fn rect(x1: f64, y1: f64, x2: f64, y2: f64) -> Rect<f64> {
        let e = |v: f64| if v.is_infinite() { Extended::Infinite } else { Extended::Finite(v) };
        Rect::new(Point::new(x1, y1), (e(x2), e(y2))).unwrap()
    }

    fn need_omega() -> (TwoParamModule<f64>, TwoParamModule<f64>) {
        (
            TwoParamModule::Rectangles(vec![rect(0., 0., 7., 8.), rect(0., 4., 7., 11.)]),
            TwoParamModule::Rectangles(vec![rect(0., 4., 7., 8.), rect(0., 0., 7., 11.)]),
        )
    }

    fn diag_not_suff() -> (TwoParamModule<f64>, TwoParamModule<f64>) {
        (
            TwoParamModule::Rectangles(vec![rect(0., 0., 7., 7.), rect(0., 4., 7., 11.)]),
            TwoParamModule::Rectangles(vec![rect(0., 0., 7., 11.), rect(0., 4., 7., 7.)]),
        )
    }

    #[test]
    fn thetas_stay_inside_the_quadrant() {
        let t = GridSpec::new(3, 2).thetas();
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|&x| x > 0.0 && x < FRAC_PI_2));
        assert!((t[1] - FRAC_PI_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn grid_line_offset_round_trips() {
        let l = grid_line(0.3, 2.5);
        assert!((l.scalar_offset() - 2.5).abs() < 1e-12);
        assert!((l.m1().max(*l.m2()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn need_omega_sweep() {
        let (m, n) = need_omega();
        let (max, _) = scan_max(&m, &n, &GridSpec::new(400, 400));
        assert!((max - 2.1).abs() < 0.02, "{max}");
        let g = GridSpec::new(2, 10_001);
        let diag = restricted_max(&m, &n, &g, LineFamily::DiagonalOnly);
        assert!((diag - 1.5).abs() < 0.01, "{diag}");
        let pairs = restricted_max(&m, &n, &g, LineFamily::CriticalPairsOnly);
        assert!((pairs - 21.0 / 11.0).abs() < 1e-9, "{pairs}");
        assert!(max > diag && max > pairs);
    }

    #[test]
    fn diagonal_slice_of_first_example() {
        let (m, n) = diag_not_suff();
        let diag = restricted_max(&m, &n, &GridSpec::new(2, 10_001), LineFamily::DiagonalOnly);
        assert!((diag - 2.0).abs() < 0.01, "{diag}");
    }

    #[test]
    fn trivial_modules_give_zero_rows() {
        let t = TwoParamModule::<f64>::trivial();
        let s = scan(&t, &t, &GridSpec::new(5, 7));
        assert_eq!(s.rows.len(), 35);
        assert!(s.rows.iter().all(|r| r.weighted_cost == 0.0));
    }

    #[test]
    fn scan_and_scan_max_agree() {
        let (m, n) = need_omega();
        let g = GridSpec::new(30, 40);
        let s = scan(&m, &n, &g);
        assert_eq!((s.max, s.argmax), scan_max(&m, &n, &g));
        assert!(s.rows.windows(2).all(|w| (w[0].theta, w[0].offset) < (w[1].theta, w[1].offset)));
    }

    #[test]
    fn csv_format() {
        let rows = [
            HeatmapRow { theta: 0.5, offset: -1.0, weighted_cost: 2.0 },
            HeatmapRow { theta: 0.5, offset: 1.0, weighted_cost: f64::INFINITY },
        ];
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "theta,offset,weighted_bottleneck\n0.5,-1,2\n0.5,1,inf\n");
    }
}
