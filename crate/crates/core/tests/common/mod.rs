#![allow(dead_code)]

use matchdist::{Extended, Generator, Line, Point, Presentation, Rational, Rect, Relation, TwoParamModule};
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn z(n: i64) -> Rational {
    q(n, 1)
}

pub fn rect(x1: i64, y1: i64, x2: Option<i64>, y2: Option<i64>) -> Rect<Rational> {
    let e = |v: Option<i64>| v.map_or(Extended::Infinite, |x| Extended::Finite(z(x)));
    Rect::new(Point::new(z(x1), z(y1)), (e(x2), e(y2))).unwrap()
}

pub fn rects(rs: Vec<Rect<Rational>>) -> TwoParamModule<Rational> {
    TwoParamModule::Rectangles(rs)
}

pub fn diag_not_suff() -> (TwoParamModule<Rational>, TwoParamModule<Rational>) {
    (
        rects(vec![rect(0, 0, Some(7), Some(7)), rect(0, 4, Some(7), Some(11))]),
        rects(vec![rect(0, 0, Some(7), Some(11)), rect(0, 4, Some(7), Some(7))]),
    )
}

pub fn need_omega() -> (TwoParamModule<Rational>, TwoParamModule<Rational>) {
    (
        rects(vec![rect(0, 0, Some(7), Some(8)), rect(0, 4, Some(7), Some(11))]),
        rects(vec![rect(0, 4, Some(7), Some(8)), rect(0, 0, Some(7), Some(11))]),
    )
}

pub fn need_diag() -> (TwoParamModule<Rational>, TwoParamModule<Rational>) {
    (rects(vec![rect(2, 2, None, Some(7))]), rects(vec![rect(2, 2, None, Some(10))]))
}

/// Multiples of `1/denom` in `[0, max]`.
pub fn arb_grid_value(max: i64, denom: i64) -> impl Strategy<Value = Rational> {
    (0..=max * denom).prop_map(move |k| q(k, denom))
}

/// Rectangles with corners on the `1/denom` grid of `[0, max]`; upper corners
/// are infinite with probability about 1/8 per coordinate.
pub fn arb_rect(max: i64, denom: i64) -> impl Strategy<Value = Rect<Rational>> {
    let upper = prop_oneof![7 => (1..=max * denom).prop_map(Some), 1 => Just(None)];
    (arb_grid_value(max, denom), arb_grid_value(max, denom), upper.clone(), upper).prop_map(move |(x, y, w, h)| {
        let up = |base: &Rational, d: Option<i64>| match d {
            Some(d) => Extended::Finite(base + q(d, denom)),
            None => Extended::Infinite,
        };
        let upper = (up(&x, w), up(&y, h));
        Rect::new(Point::new(x, y), upper).unwrap()
    })
}

pub fn arb_rect_module(count: std::ops::RangeInclusive<usize>, max: i64, denom: i64) -> impl Strategy<Value = TwoParamModule<Rational>> {
    prop::collection::vec(arb_rect(max, denom), count).prop_map(TwoParamModule::Rectangles)
}

/// Presentations with up to `gens` generators on the half-integer grid of
/// `[0, 6]` and relations above the join of their column.
pub fn arb_presentation(gens: usize, rels: usize) -> impl Strategy<Value = TwoParamModule<Rational>> {
    let grades = prop::collection::vec((arb_grid_value(6, 2), arb_grid_value(6, 2)), 1..=gens);
    let relations = prop::collection::vec((0i64..=8, 0i64..=8, prop::collection::vec(any::<bool>(), gens)), 0..=rels);
    (grades, relations).prop_map(|(grades, relations)| {
        let generators: Vec<Generator<Rational>> = grades
            .into_iter()
            .enumerate()
            .map(|(i, (x, y))| Generator { name: format!("g{i}"), grade: Point::new(x, y) })
            .collect();
        let relations = relations
            .into_iter()
            .enumerate()
            .map(|(i, (dx, dy, mask))| {
                let column: Vec<usize> = (0..generators.len()).filter(|&j| mask[j]).collect();
                let base = column
                    .iter()
                    .map(|&j| generators[j].grade.clone())
                    .reduce(|a, b| a.lub(&b))
                    .unwrap_or_else(|| generators[0].grade.clone());
                Relation { name: format!("r{i}"), grade: base.translate(&q(dx, 2), &q(dy, 2)), column }
            })
            .collect();
        TwoParamModule::Presented(Presentation::new(generators, relations).unwrap())
    })
}

/// Positive-slope lines with rational direction and offset.
pub fn arb_line() -> impl Strategy<Value = Line<Rational>> {
    (1i64..=12, 1i64..=12, -60i64..=60).prop_map(|(a, b, o)| Line::from_direction_and_offset((z(a), z(b)), q(o, 3)).unwrap())
}
