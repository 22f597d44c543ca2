//! Points with small rational coordinates rescaled to a common integer
//! denominator, so that hot loops can run exactly on `i128`.
//!
//! Scaled coordinates are bounded by [`LIMIT`]; every product formed by the
//! callers then stays far below `i128::MAX`.

use num_integer::Integer;

use crate::geometry::Point;
use crate::scalar::ExactScalar;

pub(crate) const LIMIT: i128 = 1 << 36;

pub(crate) type IntPoint = Point<i128>;

/// Least common denominator of `values`, if all are small.
pub(crate) fn common_denominator<'a, T: ExactScalar + 'a>(values: impl IntoIterator<Item = &'a T>) -> Option<i128> {
    let mut denom: i128 = 1;
    for v in values {
        let (_, d) = v.to_ratio()?;
        denom = denom.lcm(&i128::from(d));
        if denom > LIMIT {
            return None;
        }
    }
    Some(denom)
}

pub(crate) fn scale_value<T: ExactScalar>(v: &T, denom: i128) -> Option<i128> {
    let (n, d) = v.to_ratio()?;
    let scaled = i128::from(n) * (denom / i128::from(d));
    (scaled.abs() <= LIMIT && denom % i128::from(d) == 0).then_some(scaled)
}

pub(crate) fn scale_point<T: ExactScalar>(p: &Point<T>, denom: i128) -> Option<IntPoint> {
    Some(Point { x: scale_value(&p.x, denom)?, y: scale_value(&p.y, denom)? })
}

/// Scales all points by their common denominator.
pub(crate) fn scale_points<T: ExactScalar>(points: &[Point<T>]) -> Option<(i128, Vec<IntPoint>)> {
    let denom = common_denominator(points.iter().flat_map(|p| [&p.x, &p.y]))?;
    let scaled = points.iter().map(|p| scale_point(p, denom)).collect::<Option<Vec<_>>>()?;
    Some((denom, scaled))
}

/// A positive direction as a coprime integer pair.
pub(crate) fn integer_direction<T: ExactScalar>(d: &(T, T)) -> Option<(i128, i128)> {
    let denom = common_denominator([&d.0, &d.1])?;
    let (a, b) = (scale_value(&d.0, denom)?, scale_value(&d.1, denom)?);
    let g = a.gcd(&b);
    (a > 0 && b > 0).then(|| (a / g, b / g))
}
