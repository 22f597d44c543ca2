//! Exact matching distance by maximization over a finite set of candidate
//! lines, plus the vertical and horizontal limit costs.

use std::cmp::Ordering;

use num_integer::Integer;

use crate::barcode::restrict_module;
use crate::bottleneck::{bottleneck, MatchingWitness};
use crate::error::{Error, Result};
use crate::geometry::{line_through, line_with_direction, Line, Point};
use crate::module::{lub_closure, sort_dedup, TwoParamModule};
use crate::scalar::{ExactScalar, Extended, Scalar};
use crate::scaled::{integer_direction, scale_points};
use crate::switch::{pruned_switch_points, switch_points, SwitchPointSet};

/// Which switch-point construction feeds the candidate lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SwitchPolicy {
    /// Every formula over every ordered quadruple of critical values.
    Exhaustive,
    /// Only realizable cost-term pairs with a realizable side configuration.
    #[default]
    Pruned,
}

#[derive(Clone, Debug)]
pub struct CandidateOptions<T> {
    pub policy: SwitchPolicy,
    /// Extra proper points added to the switch-point set.
    pub extra_points: Vec<Point<T>>,
    /// Extra positive directions added to the points at infinity.
    pub extra_directions: Vec<(T, T)>,
    /// Evaluate every candidate exactly instead of screening in `f64` first.
    pub exact_screening: bool,
}

impl<T> Default for CandidateOptions<T> {
    fn default() -> Self {
        CandidateOptions {
            policy: SwitchPolicy::Pruned,
            extra_points: Vec::new(),
            extra_directions: Vec::new(),
            exact_screening: false,
        }
    }
}

/// Anchor points and directions of the candidate lines, and the lines
/// themselves in [`Line::tie_key`] order.
#[derive(Clone, Debug)]
pub struct CandidateSet<T> {
    pub points: Vec<Point<T>>,
    pub directions: Vec<(T, T)>,
    lines: LineList<T>,
}

#[derive(Clone, Debug)]
enum LineList<T> {
    Exact(Vec<Line<T>>),
    /// Keys `[d1, d2, c]` of the lines `d2·x − d1·y = c / denom`, with
    /// `(d1, d2)` coprime and positive.
    Scaled { denom: i128, keys: Vec<[i128; 3]> },
}

impl<T: ExactScalar> CandidateSet<T> {
    /// Lines through two of `points` and through one of `points` in one of
    /// `directions`, deduplicated.
    pub fn new(points: Vec<Point<T>>, directions: Vec<(T, T)>) -> Self {
        let lines = match scaled_keys(&points, &directions) {
            Some((denom, keys)) => LineList::Scaled { denom, keys },
            None => LineList::Exact(lines_through_points(&points, &directions)),
        };
        CandidateSet { points, directions, lines }
    }

    /// Same as [`CandidateSet::new`] but always in exact arithmetic.
    pub fn new_exact(points: Vec<Point<T>>, directions: Vec<(T, T)>) -> Self {
        let lines = LineList::Exact(lines_through_points(&points, &directions));
        CandidateSet { points, directions, lines }
    }

    pub fn len(&self) -> usize {
        match &self.lines {
            LineList::Exact(lines) => lines.len(),
            LineList::Scaled { keys, .. } => keys.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn line(&self, i: usize) -> Line<T> {
        match &self.lines {
            LineList::Exact(lines) => lines[i].clone(),
            LineList::Scaled { denom, keys } => {
                let [a, b, c] = keys[i];
                let b1 = T::from_ratio(c, denom * (a + b));
                Line::normalize((T::from_ratio(a, 1), T::from_ratio(b, 1)), &Point::new(b1.clone(), -b1))
                    .expect("positive direction")
            }
        }
    }

    /// The `i`-th line rounded to `f64`.
    pub fn float_line(&self, i: usize) -> Line<f64> {
        match &self.lines {
            LineList::Exact(lines) => lines[i].map(|v| v.as_f64()),
            LineList::Scaled { denom, keys } => {
                let [a, b, c] = keys[i];
                let b1 = c as f64 / (denom * (a + b)) as f64;
                Line::normalize((a as f64, b as f64), &Point::new(b1, -b1)).expect("positive direction")
            }
        }
    }

    pub fn lines(&self) -> Vec<Line<T>> {
        (0..self.len()).map(|i| self.line(i)).collect()
    }

    /// Keeps only the lines of slope 1.
    pub fn retain_diagonal(&mut self) {
        match &mut self.lines {
            LineList::Exact(lines) => lines.retain(|l| l.is_diagonal()),
            LineList::Scaled { keys, .. } => keys.retain(|[a, b, _]| a == b),
        }
    }
}

fn scaled_keys<T: ExactScalar>(points: &[Point<T>], directions: &[(T, T)]) -> Option<(i128, Vec<[i128; 3]>)> {
    let (denom, pts) = scale_points(points)?;
    let dirs = directions.iter().map(integer_direction).collect::<Option<Vec<_>>>()?;
    let mut keys = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            let (mut a, mut b) = (q.x - p.x, q.y - p.y);
            if a < 0 && b < 0 {
                a = -a;
                b = -b;
            }
            if a > 0 && b > 0 {
                let g = a.gcd(&b);
                let (a, b) = (a / g, b / g);
                keys.push([a, b, b * p.x - a * p.y]);
            }
        }
        for &(a, b) in &dirs {
            keys.push([a, b, b * p.x - a * p.y]);
        }
    }
    keys.sort_by(|k, l| (k[0] * l[1]).cmp(&(l[0] * k[1])).then_with(|| (k[2] * (l[0] + l[1])).cmp(&(l[2] * (k[0] + k[1])))));
    keys.dedup();
    Some((denom, keys))
}

#[derive(Clone, Debug)]
pub struct DistanceResult<T> {
    pub value: Extended<T>,
    pub witness_line: Option<Line<T>>,
    pub witness: Option<MatchingWitness<T>>,
    pub candidate_count: usize,
}

impl<T: Scalar> DistanceResult<T> {
    fn trivial() -> Self {
        DistanceResult { value: Extended::zero(), witness_line: None, witness: None, candidate_count: 0 }
    }
}

/// `weight(L) · d_B(M|L, N|L)` with the optimal matching on `L`.
pub fn weighted_bottleneck<T: Scalar>(
    m: &TwoParamModule<T>,
    n: &TwoParamModule<T>,
    line: &Line<T>,
) -> (Extended<T>, MatchingWitness<T>) {
    let w = bottleneck(&restrict_module(m, line), &restrict_module(n, line));
    (w.cost.scale(&line.weight()), w)
}

/// Switch points of the pair under `policy`.
pub fn switch_set<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, policy: SwitchPolicy) -> SwitchPointSet<T> {
    match policy {
        SwitchPolicy::Exhaustive => {
            let mut c = m.critical_values();
            c.extend(n.critical_values());
            switch_points(&c)
        }
        SwitchPolicy::Pruned => pruned_switch_points(m, n),
    }
}

fn sort_lines<T: ExactScalar>(lines: Vec<Line<T>>) -> Vec<Line<T>> {
    let mut keyed: Vec<((T, T), Line<T>)> = lines.into_iter().map(|l| (l.tie_key(), l)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, l)| l).collect()
}

/// Lines through two points of `points`, and through a point of `points` in
/// one of `directions`, deduplicated and sorted by tie key.
pub fn lines_through_points<T: ExactScalar>(points: &[Point<T>], directions: &[(T, T)]) -> Vec<Line<T>> {
    let mut lines = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            lines.extend(line_through(p, q));
        }
        for d in directions {
            lines.extend(line_with_direction(p, d));
        }
    }
    sort_lines(lines)
}

/// The candidate lines: lines through two points of the lub-closed critical
/// values of either module and the proper switch points, and lines through one
/// such point in a switch direction.
pub fn candidate_lines<T: ExactScalar>(
    m: &TwoParamModule<T>,
    n: &TwoParamModule<T>,
    opts: &CandidateOptions<T>,
) -> Result<CandidateSet<T>> {
    if m.is_trivial() && n.is_trivial() {
        return Err(Error::BothTrivial);
    }
    let omega = switch_set(m, n, opts.policy);
    let mut points = lub_closure(&m.critical_values());
    points.extend(lub_closure(&n.critical_values()));
    points.extend(omega.proper.iter().cloned());
    points.extend(opts.extra_points.iter().cloned());
    sort_dedup(&mut points);

    let mut directions = omega.directions();
    for (d1, d2) in &opts.extra_directions {
        if d1.strictly_positive() && d2.strictly_positive() {
            let top = T::max_of(d1, d2);
            directions.push((d1.clone() / top.clone(), d2.clone() / top));
        }
    }
    let mut directions: Vec<(T, T)> = directions
        .into_iter()
        .map(|(a, b)| {
            let top = T::max_of(&a, &b);
            (a / top.clone(), b / top)
        })
        .collect();
    directions.sort();
    directions.dedup();

    Ok(CandidateSet::new(points, directions))
}

/// Exact matching distance with the default candidate construction.
pub fn matching_distance<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>) -> DistanceResult<T> {
    matching_distance_with(m, n, &CandidateOptions::default())
}

pub fn matching_distance_with<T: ExactScalar>(
    m: &TwoParamModule<T>,
    n: &TwoParamModule<T>,
    opts: &CandidateOptions<T>,
) -> DistanceResult<T> {
    match candidate_lines(m, n, opts) {
        Ok(set) => maximize(m, n, &set, opts.exact_screening),
        Err(_) => DistanceResult::trivial(),
    }
}

/// Line families used to show that neither suffices on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// Candidate lines of slope 1.
    DiagonalOnly,
    /// Lines through two points of the lub closure of all critical values.
    CriticalPairsOnly,
}

/// Maximum of the weighted bottleneck distance over a restricted line family.
pub fn restricted_distance<T: ExactScalar>(
    m: &TwoParamModule<T>,
    n: &TwoParamModule<T>,
    restriction: Restriction,
) -> DistanceResult<T> {
    let set = match restriction {
        Restriction::DiagonalOnly => match candidate_lines(m, n, &CandidateOptions::default()) {
            Ok(mut set) => {
                set.retain_diagonal();
                set
            }
            Err(_) => return DistanceResult::trivial(),
        },
        Restriction::CriticalPairsOnly => {
            let mut c = m.critical_values();
            c.extend(n.critical_values());
            CandidateSet::new(lub_closure(&c), Vec::new())
        }
    };
    maximize(m, n, &set, false)
}

/// Maximum of the weighted bottleneck distance over the candidate lines; the
/// first maximizer in tie-key order wins ties.
///
/// Unless `exact_all` is set, every line is first evaluated in `f64` and only
/// lines within a small margin of the floating-point maximum are evaluated
/// exactly. The weighted cost is continuous in the line and the margin is far
/// above the rounding error, so an exact maximizer always survives.
pub fn maximize<T: ExactScalar>(
    m: &TwoParamModule<T>,
    n: &TwoParamModule<T>,
    set: &CandidateSet<T>,
    exact_all: bool,
) -> DistanceResult<T> {
    let shortlist: Vec<usize> = if exact_all { (0..set.len()).collect() } else { screen(m, n, set) };
    let mut best: Option<(Extended<T>, Line<T>, MatchingWitness<T>)> = None;
    for i in shortlist {
        let line = set.line(i);
        let (value, witness) = weighted_bottleneck(m, n, &line);
        if best.as_ref().map_or(true, |(b, _, _)| value.cmp_total(b) == Ordering::Greater) {
            let done = value.is_infinite();
            best = Some((value, line, witness));
            if done {
                break;
            }
        }
    }
    match best {
        Some((value, line, witness)) => DistanceResult {
            value,
            witness_line: Some(line),
            witness: Some(witness),
            candidate_count: set.len(),
        },
        None => DistanceResult { candidate_count: set.len(), ..DistanceResult::trivial() },
    }
}

fn screen<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, set: &CandidateSet<T>) -> Vec<usize> {
    let (mf, nf) = (m.to_f64(), n.to_f64());
    let scale = m
        .critical_values()
        .iter()
        .chain(n.critical_values().iter())
        .map(|p| p.x.as_f64().abs().max(p.y.as_f64().abs()))
        .fold(1.0, f64::max);
    if !set.is_empty() && weighted_bottleneck(&mf, &nf, &set.float_line(0)).0.is_infinite() {
        return vec![0];
    }
    let values: Vec<f64> = (0..set.len()).map(|i| weighted_bottleneck(&mf, &nf, &set.float_line(i)).0.as_f64()).collect();
    let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let margin = 1e-7 * scale;
    (0..set.len())
        .filter(|&i| {
            let v = values[i];
            if top.is_infinite() {
                v.is_infinite()
            } else {
                v.is_nan() || v >= top - margin
            }
        })
        .collect()
}

/// Limit of the weighted bottleneck distance along lines through `(x0, y)`
/// turning towards the vertical, with `y` above every candidate point.
pub fn vertical_cost<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, x0: &T) -> Result<Extended<T>> {
    let (points, directions) = limit_frame(m, n)?;
    let anchor = frame_top(&points) + T::one();
    vertical_limit(m, n, &points, &directions, x0, &anchor)
}

/// Largest second coordinate of a candidate point; admissible anchors for
/// [`vertical_cost_at`] lie strictly above it.
pub fn vertical_anchor_floor<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>) -> Result<T> {
    Ok(frame_top(&limit_frame(m, n)?.0))
}

/// Largest first coordinate of a candidate point; admissible anchors for
/// [`horizontal_cost_at`] lie strictly to its right.
pub fn horizontal_anchor_floor<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>) -> Result<T> {
    vertical_anchor_floor(&m.swap_axes(), &n.swap_axes())
}

fn frame_top<T: ExactScalar>(points: &[Point<T>]) -> T {
    points.iter().map(|p| p.y.clone()).reduce(|a, b| T::max_of(&a, &b)).unwrap_or_else(T::zero)
}

/// [`vertical_cost`] with an explicit anchor height `y`.
pub fn vertical_cost_at<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, x0: &T, y: &T) -> Result<Extended<T>> {
    let (points, directions) = limit_frame(m, n)?;
    if let Some(p) = points.iter().find(|p| p.y >= *y) {
        return Err(Error::InvalidAnchor(format!("{y} (point {p})")));
    }
    vertical_limit(m, n, &points, &directions, x0, y)
}

/// Limit cost as lines through `(x, y0)` turn towards the horizontal.
pub fn horizontal_cost<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, y0: &T) -> Result<Extended<T>> {
    vertical_cost(&m.swap_axes(), &n.swap_axes(), y0)
}

pub fn horizontal_cost_at<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>, y0: &T, x: &T) -> Result<Extended<T>> {
    vertical_cost_at(&m.swap_axes(), &n.swap_axes(), y0, x)
}

/// Points and directions whose lines bound the equivalence classes of lines:
/// the closures of the critical values (separately and jointly) and the
/// switch points.
fn limit_frame<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>) -> Result<(Vec<Point<T>>, Vec<(T, T)>)> {
    if m.is_trivial() && n.is_trivial() {
        return Err(Error::BothTrivial);
    }
    let omega = pruned_switch_points(m, n);
    let mut all = m.critical_values();
    all.extend(n.critical_values());
    let mut points = lub_closure(&all);
    points.extend(lub_closure(&m.critical_values()));
    points.extend(lub_closure(&n.critical_values()));
    points.extend(omega.proper.iter().cloned());
    sort_dedup(&mut points);
    Ok((points, omega.directions()))
}

fn vertical_limit<T: ExactScalar>(
    m: &TwoParamModule<T>,
    n: &TwoParamModule<T>,
    points: &[Point<T>],
    directions: &[(T, T)],
    x0: &T,
    y: &T,
) -> Result<Extended<T>> {
    // Below this slope parameter no line through the anchor crosses a frame
    // point or is parallel to a frame direction.
    let mut eps = T::one();
    for p in points {
        if p.x < *x0 {
            let e = (x0.clone() - p.x.clone()) / (y.clone() - p.y.clone());
            eps = T::min_of(&eps, &e);
        }
    }
    for (d1, d2) in directions {
        eps = T::min_of(&eps, &(d1.clone() / d2.clone()));
    }

    let anchor = Point::new(x0.clone(), y.clone());
    let cost = |e: &T| -> Extended<T> {
        let line = Line::normalize((e.clone(), T::one()), &anchor).expect("positive direction");
        weighted_bottleneck(m, n, &line).0
    };

    let two = T::two();
    let mut e1 = eps / two.clone();
    for _ in 0..32 {
        let e2 = e1.clone() / two.clone();
        let e3 = e2.clone() / two.clone();
        let (f1, f2, f3) = (cost(&e1), cost(&e2), cost(&e3));
        let (f1, f2, f3) = match (f1, f2, f3) {
            (Extended::Finite(a), Extended::Finite(b), Extended::Finite(c)) => (a, b, c),
            _ => return Ok(Extended::Infinite),
        };
        let slope = (f1.clone() - f2.clone()) / (e1.clone() - e2.clone());
        if (f2.clone() - f3.clone()) / (e2.clone() - e3.clone()) == slope {
            return Ok(Extended::Finite(f2 - e2 * slope));
        }
        e1 = e2;
    }
    Err(Error::NonAffineLimit)
}
