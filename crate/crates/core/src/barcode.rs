//! Barcodes of restrictions of a two-parameter module to positive-slope lines.

use std::cmp::Ordering;
use std::fmt;

use crate::geometry::Line;
use crate::module::{Presentation, Rect, TwoParamModule};
use crate::scalar::{Extended, Scalar};

/// Interval `[birth, death)` in line parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bar<T> {
    pub birth: T,
    pub death: Extended<T>,
}

impl<T: Scalar> Bar<T> {
    pub fn new(birth: T, death: Extended<T>) -> Self {
        Bar { birth, death }
    }

    pub fn finite(birth: T, death: T) -> Self {
        Bar { birth, death: Extended::Finite(death) }
    }

    pub fn essential(birth: T) -> Self {
        Bar { birth, death: Extended::Infinite }
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    fn cmp_total(&self, other: &Self) -> Ordering {
        self.birth.cmp_total(&other.birth).then_with(|| self.death.cmp_total(&other.death))
    }
}

impl<T: fmt::Display> fmt::Display for Bar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.birth, self.death)
    }
}

/// A multiset of bars, kept sorted so that equality is multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Diagram<T> {
    bars: Vec<Bar<T>>,
}

impl<T: Scalar> Diagram<T> {
    pub fn new(mut bars: Vec<Bar<T>>) -> Self {
        bars.sort_by(|a, b| a.cmp_total(b));
        Diagram { bars }
    }

    pub fn empty() -> Self {
        Diagram { bars: Vec::new() }
    }

    pub fn bars(&self) -> &[Bar<T>] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Finite bars as `(birth, death)` pairs.
    pub fn finite_pairs(&self) -> Vec<(T, T)> {
        self.bars
            .iter()
            .filter_map(|b| b.death.finite().map(|d| (b.birth.clone(), d.clone())))
            .collect()
    }

    /// Births of the essential bars, sorted.
    pub fn essential_births(&self) -> Vec<T> {
        self.bars.iter().filter(|b| b.is_essential()).map(|b| b.birth.clone()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Diagram<U> {
        Diagram::new(self.bars.iter().map(|b| Bar { birth: f(&b.birth), death: b.death.map(&f) }).collect())
    }
}

impl<T: fmt::Display> fmt::Display for Diagram<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.bars.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Restriction of a single rectangle module: the line enters at the push of
/// the lower corner and leaves at the pull of the upper corner.
pub fn restrict_rect<T: Scalar>(rect: &Rect<T>, line: &Line<T>) -> Option<Bar<T>> {
    let birth = line.push_param(rect.lower());
    let death = line.pull_param(rect.upper());
    (Extended::Finite(birth.clone()) < death).then(|| Bar { birth, death })
}

/// Barcode of the one-parameter presentation obtained by pushing every grade
/// onto the line, computed by column reduction over the two-element field.
pub fn restrict_presentation<T: Scalar>(pres: &Presentation<T>, line: &Line<T>) -> Diagram<T> {
    let gens = pres.generators();
    let rels = pres.relations();

    let gen_params: Vec<T> = gens.iter().map(|g| line.push_param(&g.grade)).collect();
    let mut gen_order: Vec<usize> = (0..gens.len()).collect();
    gen_order.sort_by(|&a, &b| gen_params[a].cmp_total(&gen_params[b]));
    let mut rank = vec![0; gens.len()];
    for (pos, &g) in gen_order.iter().enumerate() {
        rank[g] = pos;
    }

    let rel_params: Vec<T> = rels.iter().map(|r| line.push_param(&r.grade)).collect();
    let mut rel_order: Vec<usize> = (0..rels.len()).collect();
    rel_order.sort_by(|&a, &b| rel_params[a].cmp_total(&rel_params[b]));

    // Columns hold sorted generator ranks; the pivot is the last entry.
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(rels.len());
    let mut pivot_owner: Vec<Option<usize>> = vec![None; gens.len()];
    let mut paired = vec![false; gens.len()];
    let mut bars = Vec::new();

    for &r in &rel_order {
        let mut col: Vec<usize> = rels[r].column.iter().map(|&g| rank[g]).collect();
        col.sort_unstable();
        while let Some(&pivot) = col.last() {
            match pivot_owner[pivot] {
                Some(owner) => col = symmetric_difference(&col, &columns[owner]),
                None => break,
            }
        }
        if let Some(&pivot) = col.last() {
            pivot_owner[pivot] = Some(columns.len());
            paired[pivot] = true;
            let birth = gen_params[gen_order[pivot]].clone();
            let death = rel_params[r].clone();
            if birth < death {
                bars.push(Bar::finite(birth, death));
            }
        }
        columns.push(col);
    }

    for (pos, &g) in gen_order.iter().enumerate() {
        if !paired[pos] {
            bars.push(Bar::essential(gen_params[g].clone()));
        }
    }
    Diagram::new(bars)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// The fibered barcode of `module` along `line`.
pub fn restrict_module<T: Scalar>(module: &TwoParamModule<T>, line: &Line<T>) -> Diagram<T> {
    match module {
        TwoParamModule::Rectangles(rs) => Diagram::new(rs.iter().filter_map(|r| restrict_rect(r, line)).collect()),
        TwoParamModule::Presented(p) => restrict_presentation(p, line),
    }
}
