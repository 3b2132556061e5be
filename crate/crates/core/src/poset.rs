//! Finite strict partial orders on points `0..n`.
//!
//! A [`Poset`] stores one successor bitmask per point. The relation is the
//! strict order `<` and is kept transitively closed at all times, so every
//! query is a bit test.

use std::fmt;

use crate::error::{Error, Result};
use crate::points::{PointSet, MAX_POINTS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    succ: Vec<u64>,
}

impl Poset {
    /// Transitive closure of `pairs` on `size` points.
    ///
    /// Fails if an index is out of range or the closure relates a point to
    /// itself.
    pub fn new(size: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        if size > MAX_POINTS {
            return Err(Error::TooManyPoints { size, max: MAX_POINTS });
        }
        let mut succ = vec![0u64; size];
        for &(x, y) in pairs {
            for p in [x, y] {
                if p >= size {
                    return Err(Error::PointOutOfRange { point: p, size });
                }
            }
            succ[x] |= 1 << y;
        }
        Self::close(succ)
    }

    /// The discrete poset `[n]`.
    pub fn discrete(n: usize) -> Poset {
        assert!(n <= MAX_POINTS);
        Poset { succ: vec![0; n] }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Poset {
        assert!(n <= MAX_POINTS);
        let succ = (0..n).map(|i| PointSet::full(n).0 & !PointSet::full(i + 1).0).collect();
        Poset { succ }
    }

    pub fn empty() -> Poset {
        Poset { succ: Vec::new() }
    }

    /// Warshall closure over successor rows.
    pub(crate) fn close(mut succ: Vec<u64>) -> Result<Poset> {
        let n = succ.len();
        for k in 0..n {
            let row = succ[k];
            for i in 0..n {
                if succ[i] >> k & 1 == 1 {
                    succ[i] |= row;
                }
            }
        }
        if let Some(point) = (0..n).find(|&i| succ[i] >> i & 1 == 1) {
            return Err(Error::Cycle { point });
        }
        Ok(Poset { succ })
    }

    /// Wraps rows that are already a closed strict order.
    pub(crate) fn from_closed_rows(succ: Vec<u64>) -> Poset {
        let p = Poset { succ };
        debug_assert!(p.is_valid(), "rows are not a closed strict order");
        p
    }

    /// Irreflexive and transitive.
    pub fn is_valid(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| {
            !self.lt(x, x)
                && self
                    .successors(x)
                    .iter()
                    .all(|y| self.successors(y).is_subset(self.successors(x)))
        }) && self.succ.iter().all(|&r| r & !PointSet::full(n).0 == 0)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.succ[x] >> y & 1 == 1
    }

    /// Neither `x < y` nor `y < x` (and `x != y`).
    #[inline]
    pub fn incomparable(&self, x: usize, y: usize) -> bool {
        x != y && !self.lt(x, y) && !self.lt(y, x)
    }

    #[inline]
    pub fn successors(&self, x: usize) -> PointSet {
        PointSet(self.succ[x])
    }

    pub fn predecessors(&self, y: usize) -> PointSet {
        (0..self.size()).filter(|&x| self.lt(x, y)).collect()
    }

    pub(crate) fn rows(&self) -> &[u64] {
        &self.succ
    }

    /// Predecessor rows, `pred[y]` has bit `x` iff `x < y`.
    pub(crate) fn pred_rows(&self) -> Vec<u64> {
        let mut pred = vec![0u64; self.size()];
        for (x, &row) in self.succ.iter().enumerate() {
            for y in PointSet(row).iter() {
                pred[y] |= 1 << x;
            }
        }
        pred
    }

    pub fn points(&self) -> PointSet {
        PointSet::full(self.size())
    }

    /// All pairs `(x, y)` with `x < y`, sorted.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        (0..self.size())
            .flat_map(|x| self.successors(x).iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn relation_len(&self) -> usize {
        self.succ.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Covering pairs (the Hasse diagram), sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.relation()
            .into_iter()
            .filter(|&(x, y)| self.successors(x).iter().all(|z| !self.lt(z, y)))
            .collect()
    }

    pub fn minima(&self) -> PointSet {
        let pred = self.pred_rows();
        (0..self.size()).filter(|&y| pred[y] == 0).collect()
    }

    pub fn maxima(&self) -> PointSet {
        (0..self.size()).filter(|&x| self.succ[x] == 0).collect()
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        (0..self.size()).all(|y| !self.lt(y, x))
    }

    pub fn is_maximal(&self, x: usize) -> bool {
        self.succ[x] == 0
    }

    pub fn is_antichain(&self, set: PointSet) -> bool {
        set.iter().all(|x| self.succ[x] & set.0 == 0)
    }

    /// Down-closed: every predecessor of a member is a member.
    pub fn is_down_set(&self, set: PointSet) -> bool {
        let pred = self.pred_rows();
        set.iter().all(|x| PointSet(pred[x]).is_subset(set))
    }

    /// Serial composition: `self` entirely below `other`.
    pub fn serial(&self, other: &Poset) -> Poset {
        let n = self.size();
        let m = other.size();
        assert!(n + m <= MAX_POINTS, "serial composition exceeds {MAX_POINTS} points");
        let upper = PointSet::full(n + m).0 & !PointSet::full(n).0;
        let mut succ: Vec<u64> = self.succ.iter().map(|&r| r | upper).collect();
        succ.extend(other.succ.iter().map(|&r| r << n));
        Poset::from_closed_rows(succ)
    }

    /// Parallel composition: disjoint union without cross arrows.
    pub fn parallel(&self, other: &Poset) -> Poset {
        let n = self.size();
        assert!(
            n + other.size() <= MAX_POINTS,
            "parallel composition exceeds {MAX_POINTS} points"
        );
        let mut succ = self.succ.clone();
        succ.extend(other.succ.iter().map(|&r| r << n));
        Poset::from_closed_rows(succ)
    }

    /// Relabels point `x` as `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let n = self.size();
        assert_eq!(perm.len(), n);
        let mut succ = vec![0u64; n];
        for x in 0..n {
            let mut row = 0u64;
            for y in self.successors(x).iter() {
                row |= 1 << perm[y];
            }
            succ[perm[x]] = row;
        }
        Poset::from_closed_rows(succ)
    }

    /// Induced subposet on `points`, with `points[i]` becoming point `i`.
    pub fn induced(&self, points: &[usize]) -> Poset {
        let succ = points
            .iter()
            .map(|&x| {
                points
                    .iter()
                    .enumerate()
                    .filter(|&(_, &y)| self.lt(x, y))
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Poset::from_closed_rows(succ)
    }

    /// Weak components: classes of the symmetric closure of `<`, each sorted,
    /// ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.component_sets().into_iter().map(PointSet::to_vec).collect()
    }

    pub(crate) fn component_sets(&self) -> Vec<PointSet> {
        let n = self.size();
        let pred = self.pred_rows();
        let mut seen = PointSet::EMPTY;
        let mut comps = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = PointSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = 0u64;
                for x in frontier.iter() {
                    next |= self.succ[x] | pred[x];
                }
                frontier = PointSet(next).difference(comp);
                comp = comp.union(frontier);
            }
            seen = seen.union(comp);
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_sets().len() <= 1
    }

    /// A linear extension, choosing the smallest available index first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.size();
        let pred = self.pred_rows();
        let mut placed = PointSet::EMPTY;
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let x = (0..n)
                .find(|&x| !placed.contains(x) && PointSet(pred[x]).is_subset(placed))
                .expect("strict order has a minimal element");
            placed.insert(x);
            order.push(x);
        }
        order
    }

    /// Every down-closed subset, in a fixed deterministic order.
    pub fn down_sets(&self) -> Vec<PointSet> {
        let order = self.linear_extension();
        let pred = self.pred_rows();
        let mut out = Vec::new();
        fn rec(i: usize, order: &[usize], pred: &[u64], cur: PointSet, out: &mut Vec<PointSet>) {
            if i == order.len() {
                out.push(cur);
                return;
            }
            let x = order[i];
            rec(i + 1, order, pred, cur, out);
            if PointSet(pred[x]).is_subset(cur) {
                let mut with = cur;
                with.insert(x);
                rec(i + 1, order, pred, with, out);
            }
        }
        rec(0, &order, &pred, PointSet::EMPTY, &mut out);
        out
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({}, {:?})", self.size(), self.covers())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        Poset::new(4, &[(0, 1), (2, 1), (2, 3)]).unwrap()
    }

    #[test]
    fn construction_closes_relation() {
        let p = Poset::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.lt(0, 2));
        assert_eq!(p.relation(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn cycle_is_rejected() {
        let err = Poset::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert!(matches!(err, Error::Cycle { .. }));
        assert!(matches!(Poset::new(2, &[(1, 1)]), Err(Error::Cycle { point: 1 })));
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert_eq!(
            Poset::new(2, &[(0, 2)]).unwrap_err(),
            Error::PointOutOfRange { point: 2, size: 2 }
        );
    }

    #[test]
    fn two_chain() {
        let p = Poset::new(2, &[(0, 1)]).unwrap();
        assert_eq!(p, Poset::chain(2));
        assert_eq!(p.minima().to_vec(), vec![0]);
        assert_eq!(p.maxima().to_vec(), vec![1]);
    }

    #[test]
    fn extremes_of_n() {
        let n = n_poset();
        // a=0, b=1, c=2, d=3
        assert_eq!(n.minima().to_vec(), vec![0, 2]);
        assert_eq!(n.maxima().to_vec(), vec![1, 3]);
        assert_eq!(Poset::discrete(3).maxima().to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn serial_and_parallel() {
        let one = Poset::discrete(1);
        assert_eq!(one.serial(&one), Poset::chain(2));
        assert_eq!(one.parallel(&one), Poset::discrete(2));
        let n = n_poset();
        assert_eq!(Poset::empty().serial(&n), n);
        assert_eq!(n.serial(&Poset::empty()), n);
        assert_eq!(n.parallel(&Poset::empty()), n);
        let cross = Poset::discrete(2).serial(&Poset::discrete(2));
        assert_eq!(cross.relation(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(Poset::discrete(3).parallel(&Poset::discrete(2)), Poset::discrete(5));
    }

    #[test]
    fn components() {
        assert_eq!(
            Poset::discrete(3).connected_components(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(n_poset().connected_components(), vec![vec![0, 1, 2, 3]]);
        let p = n_poset().parallel(&Poset::chain(2));
        assert_eq!(p.connected_components().len(), 2);
        assert!(Poset::empty().connected_components().is_empty());
    }

    #[test]
    fn induced_and_relabel() {
        let n = n_poset();
        let sub = n.induced(&[2, 3]);
        assert_eq!(sub, Poset::chain(2));
        let r = n.relabel(&[3, 2, 1, 0]);
        assert!(r.lt(3, 2) && r.lt(1, 2) && r.lt(1, 0));
        assert_eq!(r.relation_len(), 3);
    }

    #[test]
    fn down_sets_of_n() {
        let n = n_poset();
        let ds = n.down_sets();
        // {}, {a}, {c}, {a,c}, {c,d}, {a,c,d}, {a,b,c}, all
        assert_eq!(ds.len(), 8);
        assert!(ds.iter().all(|&d| n.is_down_set(d)));
    }
}
