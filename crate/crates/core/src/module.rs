//! Two-parameter persistence modules: rectangle-decomposable modules and
//! graded presentations over the two-element field.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::{Extended, Scalar};

/// Support `[lower.x, upper.0) × [lower.y, upper.1)` of a rectangle module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect<T> {
    lower: Point<T>,
    upper: (Extended<T>, Extended<T>),
}

impl<T: Scalar> Rect<T> {
    pub fn new(lower: Point<T>, upper: (Extended<T>, Extended<T>)) -> Result<Self> {
        let below = |lo: &T, hi: &Extended<T>| match hi {
            Extended::Finite(h) => lo < h,
            Extended::Infinite => true,
        };
        if !below(&lower.x, &upper.0) || !below(&lower.y, &upper.1) {
            return Err(Error::InvalidRect(format!(
                "lower corner {} is not strictly below upper corner ({}, {})",
                lower, upper.0, upper.1
            )));
        }
        Ok(Rect { lower, upper })
    }

    /// Bounded rectangle `[x1, x2) × [y1, y2)`.
    pub fn bounded(x1: T, y1: T, x2: T, y2: T) -> Result<Self> {
        Self::new(Point::new(x1, y1), (Extended::Finite(x2), Extended::Finite(y2)))
    }

    pub fn lower(&self) -> &Point<T> {
        &self.lower
    }

    pub fn upper(&self) -> &(Extended<T>, Extended<T>) {
        &self.upper
    }

    /// Relator grade `(upper.x, lower.y)` when the right edge is finite.
    pub fn right_relator(&self) -> Option<Point<T>> {
        self.upper.0.finite().map(|x| Point::new(x.clone(), self.lower.y.clone()))
    }

    /// Relator grade `(lower.x, upper.y)` when the top edge is finite.
    pub fn top_relator(&self) -> Option<Point<T>> {
        self.upper.1.finite().map(|y| Point::new(self.lower.x.clone(), y.clone()))
    }

    /// Upper corner when both coordinates are finite.
    pub fn finite_upper(&self) -> Option<Point<T>> {
        match (&self.upper.0, &self.upper.1) {
            (Extended::Finite(x), Extended::Finite(y)) => Some(Point::new(x.clone(), y.clone())),
            _ => None,
        }
    }

    pub fn relators(&self) -> impl Iterator<Item = Point<T>> {
        self.right_relator().into_iter().chain(self.top_relator())
    }

    /// Canonical free presentation: one generator at the lower corner and one
    /// relation per finite edge of the upper corner.
    pub fn as_presentation(&self) -> Presentation<T> {
        let generators = vec![Generator { name: "g".into(), grade: self.lower.clone() }];
        let relations = self
            .relators()
            .enumerate()
            .map(|(i, grade)| Relation { name: format!("r{i}"), grade, column: vec![0] })
            .collect();
        Presentation { generators, relations }
    }

    fn map_corners<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Rect<U> {
        Rect { lower: self.lower.map(&f), upper: (self.upper.0.map(&f), self.upper.1.map(&f)) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator<T> {
    pub name: String,
    pub grade: Point<T>,
}

/// A relation; `column` lists the generator indices with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation<T> {
    pub name: String,
    pub grade: Point<T>,
    pub column: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation<T> {
    generators: Vec<Generator<T>>,
    relations: Vec<Relation<T>>,
}

impl<T: Scalar> Presentation<T> {
    /// Validates column indices and that every relation grade dominates the
    /// grades of the generators in its column.
    pub fn new(generators: Vec<Generator<T>>, mut relations: Vec<Relation<T>>) -> Result<Self> {
        for rel in &mut relations {
            rel.column.sort_unstable();
            rel.column.dedup();
            for &g in &rel.column {
                let gen = generators.get(g).ok_or_else(|| {
                    Error::InvalidPresentation(format!("relation {} references generator index {g}", rel.name))
                })?;
                if !gen.grade.le(&rel.grade) {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {} at {} is not above generator {} at {}",
                        rel.name, rel.grade, gen.name, gen.grade
                    )));
                }
            }
        }
        Ok(Presentation { generators, relations })
    }

    /// Builds a presentation from generator names; columns list names.
    pub fn from_named(
        generators: Vec<(String, Point<T>)>,
        relations: Vec<(String, Point<T>, Vec<String>)>,
    ) -> Result<Self> {
        let gens: Vec<Generator<T>> = generators.into_iter().map(|(name, grade)| Generator { name, grade }).collect();
        let mut rels = Vec::with_capacity(relations.len());
        for (name, grade, names) in relations {
            let mut column = Vec::with_capacity(names.len());
            for n in names {
                let idx = gens
                    .iter()
                    .position(|g| g.name == n)
                    .ok_or_else(|| Error::InvalidPresentation(format!("relation {name} references unknown generator {n}")))?;
                column.push(idx);
            }
            rels.push(Relation { name, grade, column });
        }
        Self::new(gens, rels)
    }

    pub fn generators(&self) -> &[Generator<T>] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation<T>] {
        &self.relations
    }

    fn map_grades<U: Scalar>(&self, f: impl Fn(&Point<T>) -> Point<U>) -> Presentation<U> {
        Presentation {
            generators: self.generators.iter().map(|g| Generator { name: g.name.clone(), grade: f(&g.grade) }).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation { name: r.name.clone(), grade: f(&r.grade), column: r.column.clone() })
                .collect(),
        }
    }
}

/// A finitely presented two-parameter persistence module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwoParamModule<T> {
    Rectangles(Vec<Rect<T>>),
    Presented(Presentation<T>),
}

impl<T: Scalar> TwoParamModule<T> {
    pub fn trivial() -> Self {
        TwoParamModule::Rectangles(Vec::new())
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            TwoParamModule::Rectangles(r) => r.is_empty(),
            TwoParamModule::Presented(p) => p.generators.is_empty(),
        }
    }

    pub fn generator_grades(&self) -> Vec<Point<T>> {
        match self {
            TwoParamModule::Rectangles(rs) => rs.iter().map(|r| r.lower.clone()).collect(),
            TwoParamModule::Presented(p) => p.generators.iter().map(|g| g.grade.clone()).collect(),
        }
    }

    pub fn relation_grades(&self) -> Vec<Point<T>> {
        match self {
            TwoParamModule::Rectangles(rs) => rs.iter().flat_map(|r| r.relators()).collect(),
            TwoParamModule::Presented(p) => p.relations.iter().map(|r| r.grade.clone()).collect(),
        }
    }

    /// Grades of generators and relations, deduplicated and sorted.
    pub fn critical_values(&self) -> Vec<Point<T>> {
        let mut pts = self.generator_grades();
        pts.extend(self.relation_grades());
        sort_dedup(&mut pts);
        pts
    }

    /// The same module as a presentation (rectangles become a direct sum of
    /// their canonical presentations).
    pub fn to_presentation(&self) -> Presentation<T> {
        match self {
            TwoParamModule::Presented(p) => p.clone(),
            TwoParamModule::Rectangles(rs) => {
                let mut generators = Vec::new();
                let mut relations = Vec::new();
                for (i, r) in rs.iter().enumerate() {
                    let g = generators.len();
                    generators.push(Generator { name: format!("g{i}"), grade: r.lower.clone() });
                    for (j, grade) in r.relators().enumerate() {
                        relations.push(Relation { name: format!("r{i}_{j}"), grade, column: vec![g] });
                    }
                }
                Presentation { generators, relations }
            }
        }
    }

    pub fn translate(&self, dx: &T, dy: &T) -> Self {
        let shift = |v: &Extended<T>, d: &T| v.map(|x| x.clone() + d.clone());
        match self {
            TwoParamModule::Rectangles(rs) => TwoParamModule::Rectangles(
                rs.iter()
                    .map(|r| Rect { lower: r.lower.translate(dx, dy), upper: (shift(&r.upper.0, dx), shift(&r.upper.1, dy)) })
                    .collect(),
            ),
            TwoParamModule::Presented(p) => TwoParamModule::Presented(p.map_grades(|g| g.translate(dx, dy))),
        }
    }

    /// Scales every grade by `factor > 0`.
    pub fn scale(&self, factor: &T) -> Self {
        assert!(factor.strictly_positive(), "scale factor must be positive");
        match self {
            TwoParamModule::Rectangles(rs) => {
                TwoParamModule::Rectangles(rs.iter().map(|r| r.map_corners(|x| x.clone() * factor.clone())).collect())
            }
            TwoParamModule::Presented(p) => TwoParamModule::Presented(p.map_grades(|g| g.scale(factor))),
        }
    }

    /// Exchanges the two parameters.
    pub fn swap_axes(&self) -> Self {
        match self {
            TwoParamModule::Rectangles(rs) => TwoParamModule::Rectangles(
                rs.iter()
                    .map(|r| Rect { lower: r.lower.swapped(), upper: (r.upper.1.clone(), r.upper.0.clone()) })
                    .collect(),
            ),
            TwoParamModule::Presented(p) => TwoParamModule::Presented(p.map_grades(|g| g.swapped())),
        }
    }

    /// Converts every grade with `f`, e.g. to lower an exact module to `f64`.
    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TwoParamModule<U> {
        match self {
            TwoParamModule::Rectangles(rs) => TwoParamModule::Rectangles(rs.iter().map(|r| r.map_corners(&f)).collect()),
            TwoParamModule::Presented(p) => TwoParamModule::Presented(p.map_grades(|g| g.map(&f))),
        }
    }

    pub fn to_f64(&self) -> TwoParamModule<f64> {
        self.map_scalar(|v| v.as_f64())
    }
}

pub(crate) fn sort_dedup<T: Scalar>(pts: &mut Vec<Point<T>>) {
    pts.sort_by(|a, b| a.cmp_total(b));
    pts.dedup();
}

/// Closure of a finite point set under pairwise least upper bounds.
pub fn lub_closure<T: Scalar>(points: &[Point<T>]) -> Vec<Point<T>> {
    let mut closed: Vec<Point<T>> = points.to_vec();
    sort_dedup(&mut closed);
    loop {
        let mut next = closed.clone();
        for (i, a) in closed.iter().enumerate() {
            for b in &closed[i + 1..] {
                next.push(a.lub(b));
            }
        }
        sort_dedup(&mut next);
        if next.len() == closed.len() {
            return closed;
        }
        closed = next;
    }
}
