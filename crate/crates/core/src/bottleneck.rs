//! Exact bottleneck distance between one-parameter persistence diagrams.

use std::cmp::Ordering;

use crate::barcode::{Bar, Diagram};
use crate::error::{Error, Result};
use crate::scalar::{Extended, Scalar};

/// Largest total number of bars accepted by [`bottleneck_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 8;

/// Parameter values attaining a bottleneck cost as `|s − t| / delta`, with
/// `delta = 1` for a matched pair and `delta = 2` for a bar sent to the
/// diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Realizer<T> {
    pub s: T,
    pub t: T,
    pub delta: u8,
}

impl<T: Scalar> Realizer<T> {
    pub fn value(&self) -> T {
        let diff = (self.s.clone() - self.t.clone()).abs();
        if self.delta == 2 {
            diff / T::two()
        } else {
            diff
        }
    }
}

/// An optimal matching. Indices refer to the sorted bars of each diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingWitness<T> {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_left: Vec<usize>,
    pub unmatched_right: Vec<usize>,
    pub cost: Extended<T>,
    /// Absent when both diagrams are empty or the cost is infinite.
    pub realizer: Option<Realizer<T>>,
}

/// Bottleneck distance together with an optimal matching.
///
/// Essential bars are matched in order of birth; finite bars by binary search
/// over the candidate costs with a perfect-matching feasibility test.
pub fn bottleneck<T: Scalar>(d1: &Diagram<T>, d2: &Diagram<T>) -> MatchingWitness<T> {
    let (ess1, fin1) = split(d1);
    let (ess2, fin2) = split(d2);

    if ess1.len() != ess2.len() {
        return MatchingWitness {
            pairs: Vec::new(),
            unmatched_left: (0..d1.len()).collect(),
            unmatched_right: (0..d2.len()).collect(),
            cost: Extended::Infinite,
            realizer: None,
        };
    }

    let mut pairs = Vec::new();
    let mut best: Option<(T, Realizer<T>)> = None;
    let mut consider = |value: T, r: Realizer<T>| {
        if best.as_ref().map_or(true, |(b, _)| value > *b) {
            best = Some((value, r));
        }
    };

    // Bars are sorted by birth, so essential bars appear in birth order.
    for (&i, &j) in ess1.iter().zip(&ess2) {
        let (s, t) = (d1.bars()[i].birth.clone(), d2.bars()[j].birth.clone());
        consider((s.clone() - t.clone()).abs(), Realizer { s, t, delta: 1 });
        pairs.push((i, j));
    }

    let a: Vec<(T, T)> = fin1.iter().map(|&i| finite_point(&d1.bars()[i])).collect();
    let b: Vec<(T, T)> = fin2.iter().map(|&j| finite_point(&d2.bars()[j])).collect();
    let matching = optimal_finite_matching(&a, &b);

    let mut unmatched_left = Vec::new();
    let mut unmatched_right = Vec::new();
    for (i, m) in matching.iter().enumerate() {
        match m {
            Some(j) => {
                let (r, v) = pair_realizer(&a[i], &b[*j]);
                consider(v, r);
                pairs.push((fin1[i], fin2[*j]));
            }
            None => {
                let (r, v) = diagonal_realizer(&a[i]);
                consider(v, r);
                unmatched_left.push(fin1[i]);
            }
        }
    }
    let mut right_matched = vec![false; b.len()];
    for j in matching.iter().flatten() {
        right_matched[*j] = true;
    }
    for (j, matched) in right_matched.iter().enumerate() {
        if !matched {
            let (r, v) = diagonal_realizer(&b[j]);
            consider(v, r);
            unmatched_right.push(fin2[j]);
        }
    }

    pairs.sort_unstable();
    let (cost, realizer) = match best {
        Some((v, r)) => (Extended::Finite(v), Some(r)),
        None => (Extended::zero(), None),
    };
    MatchingWitness { pairs, unmatched_left, unmatched_right, cost, realizer }
}

/// The bottleneck distance alone.
pub fn bottleneck_distance<T: Scalar>(d1: &Diagram<T>, d2: &Diagram<T>) -> Extended<T> {
    bottleneck(d1, d2).cost
}

fn split<T: Scalar>(d: &Diagram<T>) -> (Vec<usize>, Vec<usize>) {
    (0..d.len()).partition(|&i| d.bars()[i].is_essential())
}

fn finite_point<T: Scalar>(bar: &Bar<T>) -> (T, T) {
    (bar.birth.clone(), bar.death.finite().expect("finite bar").clone())
}

fn linf<T: Scalar>(p: &(T, T), q: &(T, T)) -> T {
    T::max_of(&(p.0.clone() - q.0.clone()).abs(), &(p.1.clone() - q.1.clone()).abs())
}

fn half_persistence<T: Scalar>(p: &(T, T)) -> T {
    (p.1.clone() - p.0.clone()) / T::two()
}

fn pair_realizer<T: Scalar>(p: &(T, T), q: &(T, T)) -> (Realizer<T>, T) {
    let db = (p.0.clone() - q.0.clone()).abs();
    let dd = (p.1.clone() - q.1.clone()).abs();
    if db >= dd {
        (Realizer { s: p.0.clone(), t: q.0.clone(), delta: 1 }, db)
    } else {
        (Realizer { s: p.1.clone(), t: q.1.clone(), delta: 1 }, dd)
    }
}

fn diagonal_realizer<T: Scalar>(p: &(T, T)) -> (Realizer<T>, T) {
    (Realizer { s: p.1.clone(), t: p.0.clone(), delta: 2 }, half_persistence(p))
}

/// For each point of `a`, the index of its partner in `b` (or `None` for the
/// diagonal) in a matching of minimal bottleneck cost.
fn optimal_finite_matching<T: Scalar>(a: &[(T, T)], b: &[(T, T)]) -> Vec<Option<usize>> {
    if a.is_empty() {
        return Vec::new();
    }
    let dist: Vec<Vec<T>> = a.iter().map(|p| b.iter().map(|q| linf(p, q)).collect()).collect();
    let half_a: Vec<T> = a.iter().map(half_persistence).collect();
    let half_b: Vec<T> = b.iter().map(half_persistence).collect();

    let mut candidates: Vec<T> = vec![T::zero()];
    candidates.extend(dist.iter().flatten().cloned());
    candidates.extend(half_a.iter().cloned());
    candidates.extend(half_b.iter().cloned());
    candidates.sort_by(|x, y| x.cmp_total(y));
    candidates.dedup();

    let matcher = Matcher { dist: &dist, half_a: &half_a, half_b: &half_b };
    // The largest candidate is always feasible: every bar can go to the diagonal.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let mut best = matcher.perfect_matching(&candidates[hi]).expect("largest candidate is feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match matcher.perfect_matching(&candidates[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    best
}

/// Feasibility graph on `a ∪ diag(b)` versus `b ∪ diag(a)`. Left vertices
/// `0..n` are points of `a`, `n..n+m` diagonal copies of `b`; right vertices
/// `0..m` are points of `b`, `m..m+n` diagonal copies of `a`.
struct Matcher<'a, T> {
    dist: &'a [Vec<T>],
    half_a: &'a [T],
    half_b: &'a [T],
}

impl<T: Scalar> Matcher<'_, T> {
    fn perfect_matching(&self, c: &T) -> Option<Vec<Option<usize>>> {
        let n = self.half_a.len();
        let m = self.half_b.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
        for i in 0..n {
            for j in 0..m {
                if self.dist[i][j] <= *c {
                    adj[i].push(j);
                }
            }
            if self.half_a[i] <= *c {
                adj[i].push(m + i);
            }
        }
        for j in 0..m {
            if self.half_b[j] <= *c {
                adj[n + j].push(j);
            }
            adj[n + j].extend(m..m + n);
        }

        let mut match_right: Vec<Option<usize>> = vec![None; n + m];
        for left in 0..n + m {
            let mut seen = vec![false; n + m];
            if !augment(left, &adj, &mut match_right, &mut seen) {
                return None;
            }
        }
        let mut result = vec![None; n];
        for (j, left) in match_right.iter().enumerate().take(m) {
            if let Some(i) = left {
                if *i < n {
                    result[*i] = Some(j);
                }
            }
        }
        Some(result)
    }
}

fn augment(left: usize, adj: &[Vec<usize>], match_right: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &right in &adj[left] {
        if seen[right] {
            continue;
        }
        seen[right] = true;
        if match_right[right].map_or(true, |other| augment(other, adj, match_right, seen)) {
            match_right[right] = Some(left);
            return true;
        }
    }
    false
}

/// Exhaustive minimum over all partial matchings; a test oracle for
/// [`bottleneck`] on tiny diagrams.
pub fn bottleneck_bruteforce<T: Scalar>(d1: &Diagram<T>, d2: &Diagram<T>) -> Result<Extended<T>> {
    let points = d1.len() + d2.len();
    if points > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge { points, limit: BRUTEFORCE_LIMIT });
    }
    let mut used = vec![false; d2.len()];
    let mut best = Extended::Infinite;
    search(d1.bars(), d2.bars(), 0, &mut used, Extended::zero(), &mut best);
    Ok(best)
}

fn bar_distance<T: Scalar>(x: &Bar<T>, y: &Bar<T>) -> Extended<T> {
    let births = Extended::Finite((x.birth.clone() - y.birth.clone()).abs());
    births.max(x.death.abs_diff(&y.death))
}

fn diagonal_distance<T: Scalar>(x: &Bar<T>) -> Extended<T> {
    match &x.death {
        Extended::Finite(d) => Extended::Finite((d.clone() - x.birth.clone()) / T::two()),
        Extended::Infinite => Extended::Infinite,
    }
}

fn search<T: Scalar>(
    left: &[Bar<T>],
    right: &[Bar<T>],
    i: usize,
    used: &mut [bool],
    cost: Extended<T>,
    best: &mut Extended<T>,
) {
    if best.is_finite() && cost.cmp_total(best) != Ordering::Less {
        return;
    }
    if i == left.len() {
        let mut total = cost;
        for (j, y) in right.iter().enumerate() {
            if !used[j] {
                total = total.max(diagonal_distance(y));
            }
        }
        if total.cmp_total(best) == Ordering::Less {
            *best = total;
        }
        return;
    }
    search(left, right, i + 1, used, cost.clone().max(diagonal_distance(&left[i])), best);
    for j in 0..right.len() {
        if !used[j] {
            used[j] = true;
            let next = cost.clone().max(bar_distance(&left[i], &right[j]));
            search(left, right, i + 1, used, next, best);
            used[j] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn z(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn diag(bars: &[(i64, Option<i64>)]) -> Diagram<Rational> {
        Diagram::new(
            bars.iter()
                .map(|&(b, d)| Bar::new(z(b), d.map_or(Extended::Infinite, |d| Extended::Finite(z(d)))))
                .collect(),
        )
    }

    #[test]
    fn crossed_pairs_cost_four() {
        let w = bottleneck(&diag(&[(0, Some(7)), (4, Some(11))]), &diag(&[(0, Some(11)), (4, Some(7))]));
        assert_eq!(w.cost, Extended::Finite(z(4)));
        assert_eq!(w.realizer.unwrap().value(), z(4));
    }

    #[test]
    fn shifted_pairs_cost_three() {
        let d1 = diag(&[(1, Some(8)), (4, Some(11))]);
        let d2 = diag(&[(4, Some(8)), (1, Some(11))]);
        assert_eq!(bottleneck_distance(&d1, &d2), Extended::Finite(z(3)));
    }

    #[test]
    fn single_bar_to_diagonal() {
        let w = bottleneck(&diag(&[(3, Some(6))]), &Diagram::empty());
        assert_eq!(w.cost, Extended::Finite(Rational::new(3.into(), 2.into())));
        assert_eq!(w.unmatched_left, vec![0]);
        assert_eq!(w.realizer, Some(Realizer { s: z(6), t: z(3), delta: 2 }));
    }

    #[test]
    fn essential_count_mismatch_is_infinite() {
        let w = bottleneck(&diag(&[(0, None)]), &Diagram::empty());
        assert_eq!(w.cost, Extended::Infinite);
        assert!(w.realizer.is_none());
    }

    #[test]
    fn essential_bars_match_in_birth_order() {
        let w = bottleneck(&diag(&[(0, None), (5, None)]), &diag(&[(1, None), (7, None)]));
        assert_eq!(w.cost, Extended::Finite(z(2)));
        assert_eq!(w.pairs, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn empty_diagrams() {
        let w = bottleneck::<Rational>(&Diagram::empty(), &Diagram::empty());
        assert_eq!(w.cost, Extended::zero());
        assert!(w.realizer.is_none());
        assert_eq!(bottleneck_bruteforce::<Rational>(&Diagram::empty(), &Diagram::empty()), Ok(Extended::zero()));
    }

    #[test]
    fn bruteforce_examples() {
        let d1 = diag(&[(0, Some(7)), (4, Some(11))]);
        let d2 = diag(&[(0, Some(11)), (4, Some(7))]);
        assert_eq!(bottleneck_bruteforce(&d1, &d2), Ok(Extended::Finite(z(4))));
        let same = diag(&[(0, Some(2))]);
        assert_eq!(bottleneck_bruteforce(&same, &same), Ok(Extended::zero()));
        let big = diag(&[(0, Some(1)); 5]);
        assert_eq!(bottleneck_bruteforce(&big, &big), Err(Error::TooLarge { points: 10, limit: 8 }));
    }

    #[test]
    fn float_diagrams() {
        let d1 = Diagram::new(vec![Bar::finite(0.0, 7.0), Bar::finite(4.0, 11.0)]);
        let d2 = Diagram::new(vec![Bar::finite(0.0, 11.0), Bar::finite(4.0, 7.0)]);
        assert_eq!(bottleneck_distance(&d1, &d2), Extended::Finite(4.0));
    }

    fn arb_bar() -> impl Strategy<Value = (i64, Option<i64>)> {
        (-6i64..6, prop::option::weighted(0.8, 1i64..8)).prop_map(|(b, len)| (b, len.map(|l| b + l)))
    }

    fn arb_diagram(max: usize) -> impl Strategy<Value = Diagram<Rational>> {
        prop::collection::vec(arb_bar(), 0..=max).prop_map(|bars| diag(&bars))
    }

    proptest! {
        #[test]
        fn agrees_with_bruteforce(d1 in arb_diagram(4), d2 in arb_diagram(4)) {
            prop_assert_eq!(bottleneck_distance(&d1, &d2), bottleneck_bruteforce(&d1, &d2).unwrap());
        }

        #[test]
        fn realizer_is_sound(d1 in arb_diagram(4), d2 in arb_diagram(4)) {
            let w = bottleneck(&d1, &d2);
            if let (Extended::Finite(c), Some(r)) = (&w.cost, &w.realizer) {
                prop_assert_eq!(&r.value(), c);
                let values: Vec<Rational> = d1.bars().iter().chain(d2.bars())
                    .flat_map(|b| std::iter::once(b.birth.clone()).chain(b.death.finite().cloned()))
                    .collect();
                prop_assert!(values.contains(&r.s) && values.contains(&r.t));
            }
        }

        #[test]
        fn witness_cost_matches_its_pairs(d1 in arb_diagram(4), d2 in arb_diagram(4)) {
            let w = bottleneck(&d1, &d2);
            prop_assume!(w.cost.is_finite());
            let mut cost = Extended::zero();
            for &(i, j) in &w.pairs {
                cost = cost.max(bar_distance(&d1.bars()[i], &d2.bars()[j]));
            }
            for &i in &w.unmatched_left {
                cost = cost.max(diagonal_distance(&d1.bars()[i]));
            }
            for &j in &w.unmatched_right {
                cost = cost.max(diagonal_distance(&d2.bars()[j]));
            }
            prop_assert_eq!(cost, w.cost);
            prop_assert_eq!(w.pairs.len() + w.unmatched_left.len(), d1.len());
            prop_assert_eq!(w.pairs.len() + w.unmatched_right.len(), d2.len());
        }

        #[test]
        fn metric_axioms(d1 in arb_diagram(3), d2 in arb_diagram(3), d3 in arb_diagram(3)) {
            prop_assert_eq!(bottleneck_distance(&d1, &d2), bottleneck_distance(&d2, &d1));
            prop_assert_eq!(bottleneck_distance(&d1, &d1), Extended::zero());
            let ab = bottleneck_distance(&d1, &d2);
            let bc = bottleneck_distance(&d2, &d3);
            let ac = bottleneck_distance(&d1, &d3);
            if let (Extended::Finite(x), Extended::Finite(y)) = (&ab, &bc) {
                prop_assert!(ac <= Extended::Finite(x.clone() + y.clone()));
            }
        }

        #[test]
        fn in_order_essential_matching_is_optimal(births1 in prop::collection::vec(-10i64..10, 0..=4), shift in prop::collection::vec(-10i64..10, 0..=4)) {
            let n = births1.len().min(shift.len());
            let d1 = diag(&births1[..n].iter().map(|&b| (b, None)).collect::<Vec<_>>());
            let d2 = diag(&shift[..n].iter().map(|&b| (b, None)).collect::<Vec<_>>());
            prop_assert_eq!(bottleneck_distance(&d1, &d2), bottleneck_bruteforce(&d1, &d2).unwrap());
        }
    }
}
