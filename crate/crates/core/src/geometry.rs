//! Plane geometry of positive-slope lines: standard normalization, pushes,
//! pulls and reciprocal positions, plus homogeneous points of the projective
//! completion.
//!
//! A line is stored as `s ↦ b + s·m` with `m1, m2 > 0`, `max(m1, m2) = 1` and
//! `b1 + b2 = 0`. With that normalization the parameter difference between two
//! pushed points equals the difference of their second coordinates when the
//! slope exceeds 1, and of their first coordinates otherwise.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Extended, Scalar};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    /// Componentwise order `self ⪯ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    /// Least upper bound (componentwise maximum).
    pub fn lub(&self, other: &Self) -> Self {
        Point::new(T::max_of(&self.x, &other.x), T::max_of(&self.y, &other.y))
    }

    pub fn translate(&self, dx: &T, dy: &T) -> Self {
        Point::new(self.x.clone() + dx.clone(), self.y.clone() + dy.clone())
    }

    pub fn scale(&self, factor: &T) -> Self {
        Point::new(self.x.clone() * factor.clone(), self.y.clone() * factor.clone())
    }

    pub fn swapped(&self) -> Self {
        Point::new(self.y.clone(), self.x.clone())
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Point<U> {
        Point { x: f(&self.x), y: f(&self.y) }
    }

    pub(crate) fn cmp_total(&self, other: &Self) -> Ordering {
        self.x.cmp_total(&other.x).then_with(|| self.y.cmp_total(&other.y))
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Face of the boundary of the positive cone of `u` that a line meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PushRegion {
    /// `{1}`: `u` strictly right of (below) the line; the push moves up.
    Right,
    /// `{2}`: `u` strictly left of (above) the line; the push moves right.
    Left,
    /// `{1,2}`: `u` lies on the line.
    On,
}

impl PushRegion {
    pub fn indices(self) -> &'static [u8] {
        match self {
            PushRegion::Right => &[1],
            PushRegion::Left => &[2],
            PushRegion::On => &[1, 2],
        }
    }
}

impl fmt::Display for PushRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PushRegion::Right => "{1}",
            PushRegion::Left => "{2}",
            PushRegion::On => "{1,2}",
        })
    }
}

/// Weak side requirement of a point relative to a line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// On or left of (above) the line.
    Left,
    /// On or right of (below) the line.
    Right,
}

/// A positive-slope line in standard normalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line<T> {
    dir: (T, T),
    offset: (T, T),
}

impl<T: Scalar> Line<T> {
    /// The unique normalized line through `through` with the given direction.
    pub fn normalize(direction: (T, T), through: &Point<T>) -> Result<Self> {
        let (d1, d2) = direction;
        if !d1.strictly_positive() || !d2.strictly_positive() {
            return Err(Error::NonPositiveDirection);
        }
        let top = T::max_of(&d1, &d2);
        let m1 = d1 / top.clone();
        let m2 = d2 / top;
        let s = (through.x.clone() + through.y.clone()) / (m1.clone() + m2.clone());
        let b1 = through.x.clone() - s.clone() * m1.clone();
        let b2 = through.y.clone() - s * m2.clone();
        Ok(Line { dir: (m1, m2), offset: (b1, b2) })
    }

    /// Normalized line with direction `m` crossing the anti-diagonal at
    /// `(−o/2, o/2)`; `o = b2 − b1` is the intercept `q` of `y = x + q` for
    /// diagonal lines.
    pub fn from_direction_and_offset(direction: (T, T), offset: T) -> Result<Self> {
        let half = offset / T::two();
        Self::normalize(direction, &Point::new(-half.clone(), half))
    }

    pub fn m1(&self) -> &T {
        &self.dir.0
    }

    pub fn m2(&self) -> &T {
        &self.dir.1
    }

    pub fn b1(&self) -> &T {
        &self.offset.0
    }

    pub fn b2(&self) -> &T {
        &self.offset.1
    }

    /// `b2 − b1`, the scalar offset used by the sampling grid.
    pub fn scalar_offset(&self) -> T {
        self.offset.1.clone() - self.offset.0.clone()
    }

    /// The minimal coordinate of the direction vector, in `(0, 1]`.
    pub fn weight(&self) -> T {
        T::min_of(&self.dir.0, &self.dir.1)
    }

    pub fn point_at(&self, s: &T) -> Point<T> {
        Point::new(
            self.offset.0.clone() + s.clone() * self.dir.0.clone(),
            self.offset.1.clone() + s.clone() * self.dir.1.clone(),
        )
    }

    pub fn is_diagonal(&self) -> bool {
        self.dir.0 == self.dir.1
    }

    /// Sign of `m2·(u1 − b1) − m1·(u2 − b2)`: positive right of the line.
    fn side_value(&self, u: &Point<T>) -> T {
        self.dir.1.clone() * (u.x.clone() - self.offset.0.clone())
            - self.dir.0.clone() * (u.y.clone() - self.offset.1.clone())
    }

    pub fn reciprocal_position(&self, u: &Point<T>) -> PushRegion {
        let v = self.side_value(u);
        if v.strictly_positive() {
            PushRegion::Right
        } else if v.strictly_negative() {
            PushRegion::Left
        } else {
            PushRegion::On
        }
    }

    pub fn contains(&self, u: &Point<T>) -> bool {
        self.side_value(u).is_zero()
    }

    /// Weak side test used by switch-point bookkeeping.
    pub fn satisfies(&self, u: &Point<T>, side: Side) -> bool {
        let v = self.side_value(u);
        match side {
            Side::Left => !v.strictly_positive(),
            Side::Right => !v.strictly_negative(),
        }
    }

    /// Parameter of `push_L(u)`, the entry point of the line into the
    /// positive cone of `u`.
    pub fn push_param(&self, u: &Point<T>) -> T {
        match self.reciprocal_position(u) {
            PushRegion::Left => (u.y.clone() - self.offset.1.clone()) / self.dir.1.clone(),
            PushRegion::Right | PushRegion::On => (u.x.clone() - self.offset.0.clone()) / self.dir.0.clone(),
        }
    }

    pub fn push(&self, u: &Point<T>) -> Point<T> {
        self.point_at(&self.push_param(u))
    }

    /// Parameter at which the line leaves the lower set of `v`.
    pub fn pull_param(&self, v: &(Extended<T>, Extended<T>)) -> Extended<T> {
        let first = v.0.map(|v1| (v1.clone() - self.offset.0.clone()) / self.dir.0.clone());
        let second = v.1.map(|v2| (v2.clone() - self.offset.1.clone()) / self.dir.1.clone());
        first.min(second)
    }

    /// Sort key used to break ties between equally good lines.
    pub fn tie_key(&self) -> (T, T) {
        (self.dir.0.clone() / self.dir.1.clone(), self.offset.0.clone())
    }

    pub fn map<U: Scalar, F: Fn(&T) -> U>(&self, f: F) -> Line<U> {
        Line {
            dir: (f(&self.dir.0), f(&self.dir.1)),
            offset: (f(&self.offset.0), f(&self.offset.1)),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Line<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m=({}, {}) b=({}, {})", self.dir.0, self.dir.1, self.offset.0, self.offset.1)
    }
}

/// The normalized line through two finite points, if its slope is positive.
pub fn line_through<T: Scalar>(p: &Point<T>, q: &Point<T>) -> Option<Line<T>> {
    let d1 = q.x.clone() - p.x.clone();
    let d2 = q.y.clone() - p.y.clone();
    let positive = d1.strictly_positive() && d2.strictly_positive();
    let negative = d1.strictly_negative() && d2.strictly_negative();
    if positive {
        Line::normalize((d1, d2), p).ok()
    } else if negative {
        Line::normalize((-d1, -d2), p).ok()
    } else {
        None
    }
}

/// The normalized line through `p` with direction `(d1, d2)`, if positive.
pub fn line_with_direction<T: Scalar>(p: &Point<T>, direction: &(T, T)) -> Option<Line<T>> {
    Line::normalize(direction.clone(), p).ok()
}

/// The normalized line through `p` and the point at infinity `d`.
pub fn line_through_infinite<T: Scalar>(p: &Point<T>, d: &ProjPoint<T>) -> Option<Line<T>> {
    d.direction().and_then(|dir| line_with_direction(p, &dir))
}

/// A point of the projective plane `[h0 : h1 : h2]`.
///
/// Stored in a canonical representative: the first nonzero coordinate is 1.
/// Points at infinity have `h0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint<T> {
    h: [T; 3],
}

impl<T: Scalar> ProjPoint<T> {
    /// Returns `None` when all coordinates vanish.
    pub fn new(h0: T, h1: T, h2: T) -> Option<Self> {
        let lead = [&h0, &h1, &h2].into_iter().find(|v| !v.is_zero())?.clone();
        Some(ProjPoint { h: [h0 / lead.clone(), h1 / lead.clone(), h2 / lead] })
    }

    pub fn from_point(p: &Point<T>) -> Self {
        ProjPoint { h: [T::one(), p.x.clone(), p.y.clone()] }
    }

    /// The diagonal direction `[0:1:1]`.
    pub fn diagonal() -> Self {
        ProjPoint { h: [T::zero(), T::one(), T::one()] }
    }

    pub fn coords(&self) -> &[T; 3] {
        &self.h
    }

    pub fn is_at_infinity(&self) -> bool {
        self.h[0].is_zero()
    }

    /// Dehomogenized point, for proper points.
    pub fn to_point(&self) -> Option<Point<T>> {
        if self.is_at_infinity() {
            None
        } else {
            Some(Point::new(self.h[1].clone(), self.h[2].clone()))
        }
    }

    /// Direction `(h1, h2)` of a point at infinity, when both are positive.
    pub fn direction(&self) -> Option<(T, T)> {
        if self.is_at_infinity() && self.h[1].strictly_positive() && self.h[2].strictly_positive() {
            Some((self.h[1].clone(), self.h[2].clone()))
        } else {
            None
        }
    }
}

impl ProjPoint<Rational> {
    /// Integer homogeneous coordinates with gcd 1 and a positive first
    /// nonzero entry.
    pub fn integer_coords(&self) -> [BigInt; 3] {
        let lcm = self.h.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = self.h.iter().map(|v| (v * Rational::from(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let sign = if ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        [&ints[0] / &g * &sign, &ints[1] / &g * &sign, &ints[2] / &g * &sign]
    }
}

impl fmt::Display for ProjPoint<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.integer_coords();
        write!(f, "[{a}:{b}:{c}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn z(n: i64) -> Rational {
        q(n, 1)
    }

    fn pt(x: Rational, y: Rational) -> Point<Rational> {
        Point::new(x, y)
    }

    fn steep() -> Line<Rational> {
        Line::normalize((z(7), z(11)), &pt(z(0), z(0))).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let l = steep();
        assert_eq!((l.m1(), l.m2(), l.b1(), l.b2()), (&q(7, 11), &z(1), &z(0), &z(0)));

        let d = Line::normalize((z(1), z(1)), &pt(z(2), z(2))).unwrap();
        assert_eq!((d.m1(), d.m2(), d.b1(), d.b2()), (&z(1), &z(1), &z(0), &z(0)));

        let shallow = Line::normalize((z(2), z(1)), &pt(z(0), z(3))).unwrap();
        assert_eq!(
            (shallow.m1(), shallow.m2(), shallow.b1(), shallow.b2()),
            (&z(1), &q(1, 2), &z(-2), &z(2))
        );
    }

    #[test]
    fn normalize_rejects_non_positive_direction() {
        assert!(matches!(
            Line::normalize((z(0), z(1)), &pt(z(0), z(0))),
            Err(Error::NonPositiveDirection)
        ));
        assert!(Line::normalize((z(-1), z(2)), &pt(z(0), z(0))).is_err());
        assert!(Line::normalize((1.0, 0.0), &Point::new(0.0, 0.0)).is_err());
        assert!(Line::normalize((-0.0, 1.0), &Point::new(0.0, 0.0)).is_err());
        assert!(line_through(&Point::new(0.0, 4.0), &Point::new(7.0, 4.0)).is_none());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(steep().weight(), q(7, 11));
        assert_eq!(Line::normalize((z(1), z(1)), &pt(z(0), z(0))).unwrap().weight(), z(1));
        assert_eq!(Line::normalize((z(3), z(1)), &pt(z(0), z(0))).unwrap().weight(), q(1, 3));
    }

    #[test]
    fn reciprocal_position_examples() {
        let l = steep();
        assert_eq!(l.reciprocal_position(&pt(z(0), z(4))), PushRegion::Left);
        assert_eq!(l.reciprocal_position(&pt(z(0), z(0))), PushRegion::On);
        assert_eq!(l.reciprocal_position(&pt(z(7), z(0))), PushRegion::Right);
        assert_eq!(PushRegion::On.to_string(), "{1,2}");
    }

    #[test]
    fn push_param_examples() {
        let l = steep();
        assert_eq!(l.push_param(&pt(z(0), z(4))), z(4));
        assert_eq!(l.push_param(&pt(z(0), z(0))), z(0));
        assert_eq!(l.push_param(&pt(z(7), z(0))), z(11));
        assert_eq!(l.push(&pt(z(0), z(4))), pt(q(28, 11), z(4)));
    }

    #[test]
    fn pull_param_examples() {
        let l = steep();
        let fin = |v: Rational| Extended::Finite(v);
        assert_eq!(l.pull_param(&(fin(z(7)), fin(z(7)))), fin(z(7)));
        assert_eq!(l.pull_param(&(Extended::Infinite, fin(z(11)))), fin(z(11)));
        assert_eq!(l.pull_param(&(Extended::Infinite, Extended::Infinite)), Extended::Infinite);
    }

    #[test]
    fn line_through_examples() {
        let l = line_through(&pt(z(0), z(0)), &pt(z(7), z(11))).unwrap();
        assert_eq!(l, steep());
        let l2 = line_through(&pt(q(7, 2), z(6)), &pt(z(7), z(11))).unwrap();
        assert_eq!(l2.m1(), &q(7, 10));
        assert_eq!(l2.weight(), q(7, 10));
        // Point order does not matter.
        assert_eq!(line_through(&pt(z(7), z(11)), &pt(q(7, 2), z(6))).unwrap(), l2);
        assert!(line_through(&pt(z(0), z(0)), &pt(z(0), z(5))).is_none());
        assert!(line_through(&pt(z(0), z(0)), &pt(z(5), z(0))).is_none());
        assert!(line_through(&pt(z(0), z(3)), &pt(z(5), z(0))).is_none());
    }

    #[test]
    fn line_through_infinite_examples() {
        let diag = ProjPoint::new(z(0), z(1), z(1)).unwrap();
        let l = line_through_infinite(&pt(z(2), z(2)), &diag).unwrap();
        assert_eq!((l.m1(), l.m2(), l.b1(), l.b2()), (&z(1), &z(1), &z(0), &z(0)));
        let d = ProjPoint::new(z(0), z(7), z(11)).unwrap();
        assert_eq!(line_through_infinite(&pt(z(0), z(0)), &d).unwrap(), steep());
        let vertical = ProjPoint::new(z(0), z(0), z(1)).unwrap();
        assert!(line_through_infinite(&pt(z(5), z(5)), &vertical).is_none());
        let proper = ProjPoint::new(z(1), z(1), z(1)).unwrap();
        assert!(line_through_infinite(&pt(z(5), z(5)), &proper).is_none());
    }

    #[test]
    fn projective_canonical_form() {
        let a = ProjPoint::new(z(0), z(-7), z(-4)).unwrap();
        let b = ProjPoint::new(z(0), z(14), z(8)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[0:7:4]");
        let p = ProjPoint::new(z(2), z(7), z(12)).unwrap();
        assert_eq!(p.to_point().unwrap(), pt(q(7, 2), z(6)));
        assert_eq!(p.to_string(), "[2:7:12]");
        assert!(ProjPoint::new(z(0), z(0), z(0)).is_none());
        let again = ProjPoint::new(p.coords()[0].clone(), p.coords()[1].clone(), p.coords()[2].clone()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn float_lines_share_the_code_path() {
        let l = Line::normalize((7.0f64, 11.0), &Point::new(0.0, 0.0)).unwrap();
        assert!((l.weight() - 7.0 / 11.0).abs() < 1e-15);
        assert!((l.push_param(&Point::new(7.0, 0.0)) - 11.0).abs() < 1e-12);
    }
}
