//! Switch points: the points of the projective plane where two weighted
//! push differences `|p(u) − p(v)| / δ` and `|p(w) − p(x)| / η` can exchange
//! order as the line rotates.
//!
//! [`switch_points`] applies every formula to every ordered quadruple of
//! critical values and every weight pair. [`pruned_switch_points`] applies the
//! same formulas only to pairs of cost terms that can actually occur in a
//! matching, and keeps a point only if some positive-slope line through it
//! realizes the side configuration the formula was derived for.

use std::collections::HashSet;
use std::hash::Hash;

use num_integer::Integer;

use crate::geometry::{Point, ProjPoint, Side};
use crate::module::{sort_dedup, TwoParamModule};
use crate::scalar::{ExactScalar, Scalar};
use crate::scaled::{common_denominator, scale_point, scale_points};

/// Proper and at-infinity switch points. The diagonal direction `[0:1:1]` is
/// always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchPointSet<T> {
    pub proper: Vec<Point<T>>,
    pub at_infinity: Vec<ProjPoint<T>>,
}

impl<T: ExactScalar> SwitchPointSet<T> {
    fn from_sets(proper: HashSet<Point<T>>, mut at_infinity: HashSet<ProjPoint<T>>) -> Self {
        at_infinity.insert(ProjPoint::diagonal());
        let mut proper: Vec<Point<T>> = proper.into_iter().collect();
        sort_dedup(&mut proper);
        let mut at_infinity: Vec<ProjPoint<T>> = at_infinity.into_iter().collect();
        at_infinity.sort_by(|a, b| {
            let (x, y) = (a.coords(), b.coords());
            (x[2].clone() * y[1].clone()).cmp(&(y[2].clone() * x[1].clone()))
        });
        SwitchPointSet { proper, at_infinity }
    }

    /// Directions `(h1, h2)` of the points at infinity.
    pub fn directions(&self) -> Vec<(T, T)> {
        self.at_infinity.iter().filter_map(|p| p.direction()).collect()
    }
}

/// A candidate switch point in homogeneous coordinates together with the weak
/// side of the line required of `u, v, w, x` for the formula to apply.
struct Omega<T> {
    h: [T; 3],
    sides: [Side; 4],
}

const LLRR: [Side; 4] = [Side::Left, Side::Left, Side::Right, Side::Right];
const LRLR: [Side; 4] = [Side::Left, Side::Right, Side::Left, Side::Right];
const LLLR: [Side; 4] = [Side::Left, Side::Left, Side::Left, Side::Right];
const RRRL: [Side; 4] = [Side::Right, Side::Right, Side::Right, Side::Left];

fn omega_formulas<T: Scalar>(u: &Point<T>, v: &Point<T>, w: &Point<T>, x: &Point<T>, d: &T, e: &T) -> Vec<Omega<T>> {
    let c = |t: &T| t.clone();
    let mut out = Vec::with_capacity(8);
    out.push(Omega { h: [T::zero(), c(d) * (c(&w.x) - c(&x.x)), c(e) * (c(&u.y) - c(&v.y))], sides: LLRR });
    if d == e {
        out.push(Omega { h: [T::zero(), c(&v.x) - c(&x.x), c(&u.y) - c(&w.y)], sides: LRLR });
    }
    out.push(Omega { h: [c(d), c(d) * c(&x.x), c(e) * (c(&v.y) - c(&u.y)) + c(d) * c(&w.y)], sides: LLLR });
    out.push(Omega { h: [c(d), c(e) * (c(&v.x) - c(&u.x)) + c(d) * c(&w.x), c(d) * c(&x.y)], sides: RRRL });
    out.push(Omega { h: [c(d), c(d) * c(&x.x), c(e) * (c(&u.y) - c(&v.y)) + c(d) * c(&w.y)], sides: LLLR });
    out.push(Omega { h: [c(d), c(e) * (c(&u.x) - c(&v.x)) + c(d) * c(&w.x), c(d) * c(&x.y)], sides: RRRL });
    if d != e {
        out.push(Omega {
            h: [c(e) - c(d), c(e) * c(&v.x) - c(d) * c(&x.x), c(e) * c(&u.y) - c(d) * c(&w.y)],
            sides: LRLR,
        });
    }
    out.push(Omega {
        h: [c(e) + c(d), c(d) * c(&x.x) + c(e) * c(&v.x), c(d) * c(&w.y) + c(e) * c(&u.y)],
        sides: LRLR,
    });
    out
}

fn distinct_count<T: PartialEq>(pts: [&Point<T>; 4]) -> usize {
    let mut n = 0;
    for i in 0..4 {
        if !pts[..i].contains(&pts[i]) {
            n += 1;
        }
    }
    n
}

/// Positive direction of an at-infinity formula value, if it has one.
fn positive_direction<T: Scalar>(a: &T, b: &T) -> Option<(T, T)> {
    if a.strictly_positive() && b.strictly_positive() {
        Some((a.clone(), b.clone()))
    } else if a.strictly_negative() && b.strictly_negative() {
        Some((-a.clone(), -b.clone()))
    } else {
        None
    }
}

/// Canonical representatives of switch points over the arithmetic type used
/// for enumeration.
trait Canonical: Scalar + Hash + Eq {
    /// Representative of the proper point `[h0 : h1 : h2]`; it has `h0 > 0`.
    fn proper(h: [Self; 3]) -> [Self; 3];

    /// Representative of a positive direction.
    fn direction(d: (Self, Self)) -> (Self, Self);
}

impl<T: ExactScalar> Canonical for T {
    fn proper([h0, h1, h2]: [T; 3]) -> [T; 3] {
        [T::one(), h1 / h0.clone(), h2 / h0]
    }

    fn direction((a, b): (T, T)) -> (T, T) {
        (T::one(), b / a)
    }
}

impl Canonical for i128 {
    fn proper([h0, h1, h2]: [i128; 3]) -> [i128; 3] {
        let g = h0.gcd(&h1).gcd(&h2) * h0.signum();
        [h0 / g, h1 / g, h2 / g]
    }

    fn direction((a, b): (i128, i128)) -> (i128, i128) {
        let g = a.gcd(&b);
        (a / g, b / g)
    }
}

enum Candidate<S> {
    Proper([S; 3]),
    Direction((S, S)),
}

fn classify<S: Canonical>([h0, h1, h2]: [S; 3]) -> Option<Candidate<S>> {
    if h0.is_zero() {
        positive_direction(&h1, &h2).map(|d| Candidate::Direction(S::direction(d)))
    } else {
        Some(Candidate::Proper(S::proper([h0, h1, h2])))
    }
}

struct Found<S> {
    proper: HashSet<[S; 3]>,
    directions: HashSet<(S, S)>,
}

impl<S: Canonical> Found<S> {
    fn new() -> Self {
        Found { proper: HashSet::new(), directions: HashSet::new() }
    }

    fn contains(&self, c: &Candidate<S>) -> bool {
        match c {
            Candidate::Proper(h) => self.proper.contains(h),
            Candidate::Direction(d) => self.directions.contains(d),
        }
    }

    fn insert(&mut self, c: Candidate<S>) {
        match c {
            Candidate::Proper(h) => self.proper.insert(h),
            Candidate::Direction(d) => self.directions.insert(d),
        };
    }
}

fn exact_set<T: ExactScalar>(found: Found<T>) -> SwitchPointSet<T> {
    SwitchPointSet::from_sets(
        found.proper.into_iter().map(|[_, x, y]| Point::new(x, y)).collect(),
        found.directions.into_iter().map(|(a, b)| infinite_point((a, b))).collect(),
    )
}

/// Converts points found in coordinates scaled by `denom` back to `T`.
fn scaled_set<T: ExactScalar>(found: Found<i128>, denom: i128) -> SwitchPointSet<T> {
    SwitchPointSet::from_sets(
        found
            .proper
            .into_iter()
            .map(|[h0, x, y]| Point::new(T::from_ratio(x, h0 * denom), T::from_ratio(y, h0 * denom)))
            .collect(),
        found
            .directions
            .into_iter()
            .map(|(a, b)| infinite_point((T::from_ratio(a, 1), T::from_ratio(b, 1))))
            .collect(),
    )
}

fn infinite_point<T: Scalar>(dir: (T, T)) -> ProjPoint<T> {
    ProjPoint::new(T::zero(), dir.0, dir.1).expect("nonzero direction")
}

/// Literal enumeration over ordered quadruples of `critical` (the union of
/// the critical values of both modules) and all weights `δ, η ∈ {1, 2}`.
pub fn switch_points<T: ExactScalar>(critical: &[Point<T>]) -> SwitchPointSet<T> {
    let mut pts = critical.to_vec();
    sort_dedup(&mut pts);
    match scale_points(&pts) {
        Some((denom, scaled)) => scaled_set(literal(&scaled), denom),
        None => exact_set(literal(&pts)),
    }
}

fn literal<S: Canonical>(pts: &[Point<S>]) -> Found<S> {
    let weights = [S::one(), S::two()];
    let mut found = Found::new();
    for u in pts {
        for v in pts {
            if u == v {
                continue;
            }
            for w in pts {
                for x in pts {
                    if w == x || distinct_count([u, v, w, x]) < 3 {
                        continue;
                    }
                    for d in &weights {
                        for e in &weights {
                            for omega in omega_formulas(u, v, w, x, d, e) {
                                if let Some(c) = classify(omega.h) {
                                    found.insert(c);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    found
}

type Requirements<T> = Vec<(Point<T>, Side)>;

/// A weighted push difference `|p(u) − p(v)| / delta` that can appear in a
/// matching cost, valid only on lines meeting `requires`.
#[derive(Clone, Debug)]
struct CostTerm<T> {
    u: Point<T>,
    v: Point<T>,
    delta: T,
    requires: Requirements<T>,
}

/// Push sources of one module: generator grades (bar births), relation
/// grades (bar deaths) and the birth/death pairs of single bars, each with the
/// side conditions under which it is realized.
struct Sources<T> {
    births: Vec<(Point<T>, Requirements<T>)>,
    deaths: Vec<(Point<T>, Requirements<T>)>,
    bars: Vec<(Point<T>, Point<T>, Requirements<T>)>,
}

fn sources<T: Scalar>(m: &TwoParamModule<T>) -> Sources<T> {
    let mut s = Sources { births: Vec::new(), deaths: Vec::new(), bars: Vec::new() };
    match m {
        TwoParamModule::Rectangles(rects) => {
            for r in rects {
                // The bar is non-empty iff the top relator lies left of the
                // line and the right relator lies right of it.
                let mut nonempty = Vec::new();
                if let Some(top) = r.top_relator() {
                    nonempty.push((top, Side::Left));
                }
                if let Some(right) = r.right_relator() {
                    nonempty.push((right, Side::Right));
                }
                s.births.push((r.lower().clone(), nonempty.clone()));
                let upper = r.finite_upper();
                // The right relator kills the bar when the upper corner lies
                // left of the line, the top relator when it lies right.
                let mut deaths = Vec::new();
                if let Some(right) = r.right_relator() {
                    let mut req = nonempty.clone();
                    req.extend(upper.clone().map(|c| (c, Side::Left)));
                    deaths.push((right, req));
                }
                if let Some(top) = r.top_relator() {
                    let mut req = nonempty.clone();
                    req.extend(upper.clone().map(|c| (c, Side::Right)));
                    deaths.push((top, req));
                }
                for (d, req) in &deaths {
                    s.bars.push((r.lower().clone(), d.clone(), req.clone()));
                }
                s.deaths.extend(deaths);
            }
        }
        TwoParamModule::Presented(p) => {
            s.births = p.generators().iter().map(|g| (g.grade.clone(), Vec::new())).collect();
            s.deaths = p.relations().iter().map(|r| (r.grade.clone(), Vec::new())).collect();
            for g in p.generators() {
                for r in p.relations() {
                    s.bars.push((g.grade.clone(), r.grade.clone(), Vec::new()));
                }
            }
        }
    }
    s
}

fn cost_terms<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>) -> Vec<CostTerm<T>> {
    let sm = sources(m);
    let sn = sources(n);
    let mut terms = Vec::new();
    let mut cross = |a: &[(Point<T>, Requirements<T>)], b: &[(Point<T>, Requirements<T>)]| {
        for (p, rp) in a {
            for (q, rq) in b {
                let mut requires = rp.clone();
                requires.extend(rq.iter().cloned());
                terms.push(CostTerm { u: p.clone(), v: q.clone(), delta: T::one(), requires });
            }
        }
    };
    cross(&sm.births, &sn.births);
    cross(&sm.deaths, &sn.deaths);
    for s in [&sm, &sn] {
        for (g, r, req) in &s.bars {
            terms.push(CostTerm { u: g.clone(), v: r.clone(), delta: T::two(), requires: req.clone() });
        }
    }
    terms.retain(|t| t.u != t.v);
    let reversed: Vec<CostTerm<T>> = terms
        .iter()
        .map(|t| CostTerm { u: t.v.clone(), v: t.u.clone(), delta: t.delta.clone(), requires: t.requires.clone() })
        .collect();
    terms.extend(reversed);
    let mut seen = HashSet::new();
    terms.retain(|t| {
        let mut key = t.requires.iter().map(|(p, s)| (p.clone(), *s == Side::Left)).collect::<Vec<_>>();
        key.sort();
        key.dedup();
        seen.insert((t.u.clone(), t.v.clone(), t.delta.clone(), key))
    });
    terms
}

/// Whether some line of positive slope through the proper point
/// `[h0 : h1 : h2]` (with `h0 > 0`) has every point of `reqs` on its required
/// weak side.
///
/// With direction `(1, t)` the side test of `p` reads `t·a − b ≥ 0` (right)
/// or `≤ 0` (left) for `(a, b) = h0·p − (h1, h2)`, so the admissible `t` form
/// an interval. Bounds are kept as fractions with positive denominators.
fn admits_proper<S: Scalar>(h: &[S; 3], reqs: &[(Point<S>, Side)]) -> bool {
    let [h0, h1, h2] = h;
    let mut lo = (S::zero(), S::one());
    let mut hi: Option<(S, S)> = None;
    for (p, side) in reqs {
        let mut a = h0.clone() * p.x.clone() - h1.clone();
        let mut b = h0.clone() * p.y.clone() - h2.clone();
        if *side == Side::Left {
            a = -a;
            b = -b;
        }
        if a.strictly_positive() {
            if b.clone() * lo.1.clone() > lo.0.clone() * a.clone() {
                lo = (b, a);
            }
        } else if a.strictly_negative() {
            let bound = (-b, -a);
            let tighter = match &hi {
                Some((n, d)) => bound.0.clone() * d.clone() < n.clone() * bound.1.clone(),
                None => true,
            };
            if tighter {
                hi = Some(bound);
            }
        } else if b.strictly_positive() {
            return false;
        }
    }
    match hi {
        None => true,
        Some((n, d)) => n.strictly_positive() && lo.0 * d <= n * lo.1,
    }
}

/// Whether some line with direction `d` has every point of `reqs` on its
/// required side.
fn admits_direction<S: Scalar>(d: &(S, S), reqs: &[(Point<S>, Side)]) -> bool {
    let value = |p: &Point<S>| d.1.clone() * p.x.clone() - d.0.clone() * p.y.clone();
    let mut max_left: Option<S> = None;
    let mut min_right: Option<S> = None;
    for (p, side) in reqs {
        let v = value(p);
        match side {
            Side::Left => {
                if max_left.as_ref().map_or(true, |m| v > *m) {
                    max_left = Some(v);
                }
            }
            Side::Right => {
                if min_right.as_ref().map_or(true, |m| v < *m) {
                    min_right = Some(v);
                }
            }
        }
    }
    match (max_left, min_right) {
        (Some(l), Some(r)) => l <= r,
        _ => true,
    }
}

/// Switch points restricted to pairs of realizable cost terms, each kept only
/// when its side configuration is realized by a positive-slope line.
pub fn pruned_switch_points<T: ExactScalar>(m: &TwoParamModule<T>, n: &TwoParamModule<T>) -> SwitchPointSet<T> {
    let terms = cost_terms(m, n);
    match scale_terms(&terms) {
        Some((denom, scaled)) => scaled_set(pruned(&scaled), denom),
        None => exact_set(pruned(&terms)),
    }
}

fn scale_terms<T: ExactScalar>(terms: &[CostTerm<T>]) -> Option<(i128, Vec<CostTerm<i128>>)> {
    let coords = terms.iter().flat_map(|t| {
        [&t.u, &t.v].into_iter().chain(t.requires.iter().map(|(p, _)| p)).flat_map(|p| [&p.x, &p.y])
    });
    let denom = common_denominator(coords)?;
    terms
        .iter()
        .map(|t| {
            Some(CostTerm {
                u: scale_point(&t.u, denom)?,
                v: scale_point(&t.v, denom)?,
                delta: i128::from(t.delta.to_ratio()?.0),
                requires: t
                    .requires
                    .iter()
                    .map(|(p, s)| Some((scale_point(p, denom)?, *s)))
                    .collect::<Option<Vec<_>>>()?,
            })
        })
        .collect::<Option<Vec<_>>>()
        .map(|scaled| (denom, scaled))
}

fn pruned<S: Canonical>(terms: &[CostTerm<S>]) -> Found<S> {
    let mut found = Found::new();
    let mut reqs: Requirements<S> = Vec::new();
    for t1 in terms {
        for t2 in terms {
            let (u, v, w, x) = (&t1.u, &t1.v, &t2.u, &t2.v);
            if distinct_count([u, v, w, x]) < 3 {
                continue;
            }
            for omega in omega_formulas(u, v, w, x, &t1.delta, &t2.delta) {
                let Some(candidate) = classify(omega.h) else { continue };
                if found.contains(&candidate) {
                    continue;
                }
                reqs.clear();
                reqs.extend([u, v, w, x].into_iter().cloned().zip(omega.sides));
                reqs.extend(t1.requires.iter().cloned());
                reqs.extend(t2.requires.iter().cloned());
                let admitted = match &candidate {
                    Candidate::Proper(h) => admits_proper(h, &reqs),
                    Candidate::Direction(d) => admits_direction(d, &reqs),
                };
                if admitted {
                    found.insert(candidate);
                }
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::line_through;
    use crate::module::Rect;
    use crate::scalar::Extended;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn z(n: i64) -> Rational {
        q(n, 1)
    }

    fn pt(x: i64, y: i64) -> Point<Rational> {
        Point::new(z(x), z(y))
    }

    fn rect(x1: i64, y1: i64, x2: i64, y2: i64) -> Rect<Rational> {
        Rect::bounded(z(x1), z(y1), z(x2), z(y2)).unwrap()
    }

    fn need_omega() -> (TwoParamModule<Rational>, TwoParamModule<Rational>) {
        (
            TwoParamModule::Rectangles(vec![rect(0, 0, 7, 8), rect(0, 4, 7, 11)]),
            TwoParamModule::Rectangles(vec![rect(0, 4, 7, 8), rect(0, 0, 7, 11)]),
        )
    }

    #[test]
    fn sum_formula_reproduces_the_known_point() {
        let one = z(1);
        let formulas = omega_formulas(&pt(0, 4), &pt(0, 0), &pt(0, 8), &pt(7, 0), &one, &one);
        let last = formulas.last().unwrap();
        assert_eq!(ProjPoint::new(last.h[0].clone(), last.h[1].clone(), last.h[2].clone()).unwrap().to_point(), Some(Point::new(q(7, 2), z(6))));
    }

    #[test]
    fn difference_formula_at_infinity() {
        let one = z(1);
        let formulas = omega_formulas(&pt(0, 4), &pt(0, 0), &pt(7, 0), &pt(0, 0), &one, &one);
        let h = &formulas[0].h;
        let p = ProjPoint::new(h[0].clone(), h[1].clone(), h[2].clone()).unwrap();
        assert_eq!(p.to_string(), "[0:7:4]");
    }

    #[test]
    fn literal_set_contains_known_points() {
        let (m, n) = need_omega();
        let mut c = m.critical_values();
        c.extend(n.critical_values());
        let omega = switch_points(&c);
        assert!(omega.proper.contains(&Point::new(q(7, 2), z(6))));
        assert!(omega.at_infinity.contains(&ProjPoint::diagonal()));
        assert!(omega.at_infinity.iter().all(|p| p.direction().is_some()));
    }

    #[test]
    fn pruned_set_contains_known_point_and_is_smaller() {
        let (m, n) = need_omega();
        let pruned = pruned_switch_points(&m, &n);
        assert!(pruned.proper.contains(&Point::new(q(7, 2), z(6))));
        assert!(pruned.at_infinity.contains(&ProjPoint::diagonal()));
        let mut c = m.critical_values();
        c.extend(n.critical_values());
        let literal = switch_points(&c);
        assert!(pruned.proper.len() < literal.proper.len());
    }

    #[test]
    fn degenerate_quadruples_contribute_nothing() {
        // Two distinct points only: every quadruple has fewer than three.
        let omega = switch_points(&[pt(0, 0), pt(1, 3)]);
        assert!(omega.proper.is_empty());
        assert_eq!(omega.at_infinity, vec![ProjPoint::diagonal()]);
    }

    #[test]
    fn side_feasibility() {
        // Through the origin: (0, 1) is left of every positive-slope line and
        // (1, 0) is right of every one.
        let origin = pt(0, 0);
        let origin_h = [z(1), z(0), z(0)];
        assert!(admits_proper(&origin_h, &[(pt(0, 1), Side::Left), (pt(1, 0), Side::Right)]));
        assert!(!admits_proper(&origin_h, &[(pt(0, 1), Side::Right)]));
        // (1, 1) right and (2, 3) left forces slope >= 1 and <= 3/2.
        assert!(admits_proper(&origin_h, &[(pt(1, 1), Side::Right), (pt(2, 3), Side::Left)]));
        assert!(!admits_proper(&origin_h, &[(pt(1, 1), Side::Left), (pt(2, 3), Side::Right)]));
        assert!(!admits_proper(&origin_h, &[(pt(1, 2), Side::Right), (pt(2, 3), Side::Left)]));
        let l = line_through(&origin, &pt(4, 5)).unwrap();
        assert!(l.satisfies(&pt(1, 1), Side::Right) && l.satisfies(&pt(2, 3), Side::Left));

        let diag = (z(1), z(1));
        assert!(admits_direction(&diag, &[(pt(0, 5), Side::Left), (pt(5, 0), Side::Right)]));
        assert!(!admits_direction(&diag, &[(pt(0, 5), Side::Right), (pt(5, 0), Side::Left)]));
    }

    #[test]
    fn integer_and_rational_enumerations_agree() {
        let (m, n) = need_omega();
        let terms = cost_terms(&m, &n);
        let (denom, scaled) = scale_terms(&terms).unwrap();
        assert_eq!(scaled_set::<Rational>(pruned(&scaled), denom), exact_set(pruned(&terms)));

        let m = TwoParamModule::Rectangles(vec![
            Rect::bounded(q(1, 2), q(3, 4), q(9, 2), z(5)).unwrap(),
            Rect::new(Point::new(q(5, 3), z(1)), (Extended::Infinite, Extended::Finite(z(6)))).unwrap(),
        ]);
        let n = TwoParamModule::Rectangles(vec![Rect::bounded(z(0), q(1, 3), q(7, 2), q(11, 4)).unwrap()]);
        let terms = cost_terms(&m, &n);
        let (denom, scaled) = scale_terms(&terms).unwrap();
        assert_eq!(scaled_set::<Rational>(pruned(&scaled), denom), exact_set(pruned(&terms)));

        let mut c = m.critical_values();
        c.extend(n.critical_values());
        let (denom, pts) = scale_points(&c).unwrap();
        assert_eq!(scaled_set::<Rational>(literal(&pts), denom), exact_set(literal(&c)));
    }

    #[test]
    fn rectangle_terms_carry_realization_constraints() {
        let r = Rect::new(pt(0, 0), (Extended::Finite(z(7)), Extended::Finite(z(7)))).unwrap();
        let s = sources(&TwoParamModule::Rectangles(vec![r]));
        assert_eq!(s.births.len(), 1);
        assert_eq!(s.births[0].1, vec![(pt(0, 7), Side::Left), (pt(7, 0), Side::Right)]);
        assert_eq!(s.deaths.len(), 2);
        assert_eq!(s.deaths[0].0, pt(7, 0));
        assert!(s.deaths[0].1.contains(&(pt(7, 7), Side::Left)));
        assert_eq!(s.bars.len(), 2);
    }
}
