//! Posets with interfaces.
//!
//! An [`Iposet`] is a poset together with an ordered source interface (distinct
//! minimal points) and an ordered target interface (distinct maximal points).
//! Gluing identifies the left operand's targets with the right operand's
//! sources position by position and puts everything else on the left below
//! everything else on the right; parallel composition is the disjoint union
//! with the interfaces concatenated.

use std::fmt;

use crate::canon::{automorphism_group, canonize, CanonForm};
use crate::error::{Error, Result, Side};
use crate::points::{PointSet, MAX_POINTS};
use crate::poset::Poset;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Iposet {
    poset: Poset,
    source: Vec<usize>,
    target: Vec<usize>,
}

impl Iposet {
    pub fn new(poset: Poset, source: Vec<usize>, target: Vec<usize>) -> Result<Iposet> {
        let n = poset.size();
        for (side, seq) in [(Side::Source, &source), (Side::Target, &target)] {
            let mut seen = PointSet::EMPTY;
            for &x in seq {
                if x >= n {
                    return Err(Error::PointOutOfRange { point: x, size: n });
                }
                if seen.contains(x) {
                    return Err(Error::DuplicateInterface { side, point: x });
                }
                seen.insert(x);
            }
        }
        if let Some(&point) = source.iter().find(|&&x| !poset.is_minimal(x)) {
            return Err(Error::SourceNotMinimal { point });
        }
        if let Some(&point) = target.iter().find(|&&x| !poset.is_maximal(x)) {
            return Err(Error::TargetNotMaximal { point });
        }
        Ok(Iposet { poset, source, target })
    }

    fn new_unchecked(poset: Poset, source: Vec<usize>, target: Vec<usize>) -> Iposet {
        let p = Iposet { poset, source, target };
        debug_assert!(Iposet::new(p.poset.clone(), p.source.clone(), p.target.clone()).is_ok());
        p
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn source_arity(&self) -> usize {
        self.source.len()
    }

    pub fn target_arity(&self) -> usize {
        self.target.len()
    }

    pub fn source_set(&self) -> PointSet {
        self.source.iter().copied().collect()
    }

    pub fn target_set(&self) -> PointSet {
        self.target.iter().copied().collect()
    }

    /// Discrete order.
    pub fn is_discrete(&self) -> bool {
        self.poset.relation_len() == 0
    }

    /// `[n]` with the first `k` points as sources and the first `l` as
    /// targets.
    pub fn idpos(k: usize, l: usize, n: usize) -> Result<Iposet> {
        for arity in [k, l] {
            if arity > n {
                return Err(Error::Arity { arity, points: n });
            }
        }
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints {
                size: n,
                max: MAX_POINTS,
            });
        }
        Ok(Iposet::new_unchecked(
            Poset::discrete(n),
            (0..k).collect(),
            (0..l).collect(),
        ))
    }

    pub fn identity(n: usize) -> Iposet {
        Iposet::idpos(n, n, n).expect("identity arities are in range")
    }

    pub fn empty() -> Iposet {
        Iposet::identity(0)
    }

    /// The four one-point iposets, ordered by (has source, has target).
    pub fn singletons() -> [Iposet; 4] {
        [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(k, l)| Iposet::idpos(k, l, 1).unwrap())
    }

    /// Discrete `[n]` with sources in index order and targets in `perm` order.
    pub fn symmetry(perm: &[usize]) -> Result<Iposet> {
        let n = perm.len();
        let image: PointSet = perm.iter().copied().filter(|&x| x < n).collect();
        if image.len() != n || n > MAX_POINTS {
            return Err(Error::InvalidPermutation { size: n });
        }
        Ok(Iposet::new_unchecked(
            Poset::discrete(n),
            (0..n).collect(),
            perm.to_vec(),
        ))
    }

    /// The poset with empty interfaces.
    pub fn embed(p: &Poset) -> Iposet {
        Iposet::new_unchecked(p.clone(), Vec::new(), Vec::new())
    }

    pub fn forget(&self) -> Poset {
        self.poset.clone()
    }

    /// Gluing composition `self * other`.
    pub fn glue(&self, other: &Iposet) -> Result<Iposet> {
        Ok(self.glue_with_map(other)?.0)
    }

    /// Gluing, also returning where each point of `other` lands. Points of
    /// `self` keep their indices; the non-source points of `other` follow in
    /// ascending order.
    pub(crate) fn glue_with_map(&self, other: &Iposet) -> Result<(Iposet, Vec<usize>)> {
        let m = self.target_arity();
        if other.source_arity() != m {
            return Err(Error::InterfaceMismatch {
                left_targets: m,
                right_sources: other.source_arity(),
            });
        }
        let n1 = self.size();
        let n = n1 + other.size() - m;
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints {
                size: n,
                max: MAX_POINTS,
            });
        }
        let mut map = vec![usize::MAX; other.size()];
        for (i, &y) in other.source.iter().enumerate() {
            map[y] = self.target[i];
        }
        let mut next = n1;
        for slot in map.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        let upper = PointSet::full(n).difference(PointSet::full(n1));
        let left_targets = self.target_set();
        let mut rows: Vec<u64> = (0..n1)
            .map(|x| {
                let r = self.poset.rows()[x];
                if left_targets.contains(x) {
                    r
                } else {
                    r | upper.0
                }
            })
            .chain(std::iter::repeat_n(0, n - n1))
            .collect();
        for y in 0..other.size() {
            let mut r = 0u64;
            for z in other.poset.successors(y).iter() {
                r |= 1 << map[z];
            }
            rows[map[y]] |= r;
        }
        let poset = Poset::from_closed_rows(rows);
        let target = other.target.iter().map(|&y| map[y]).collect();
        Ok((Iposet::new_unchecked(poset, self.source.clone(), target), map))
    }

    /// Parallel composition `self ⊗ other`: the points of `other` are shifted
    /// by `self.size()`.
    pub fn par(&self, other: &Iposet) -> Iposet {
        let off = self.size();
        let poset = self.poset.parallel(&other.poset);
        let source = self
            .source
            .iter()
            .copied()
            .chain(other.source.iter().map(|&x| x + off))
            .collect();
        let target = self
            .target
            .iter()
            .copied()
            .chain(other.target.iter().map(|&x| x + off))
            .collect();
        Iposet::new_unchecked(poset, source, target)
    }

    /// Relabels point `x` as `perm[x]`, carrying the interfaces along.
    pub fn relabel(&self, perm: &[usize]) -> Iposet {
        Iposet::new_unchecked(
            self.poset.relabel(perm),
            self.source.iter().map(|&x| perm[x]).collect(),
            self.target.iter().map(|&x| perm[x]).collect(),
        )
    }

    /// Induced sub-iposet on `points` (point `points[i]` becomes `i`) with
    /// the given interface sequences, expressed in the original indices.
    pub(crate) fn sub(&self, points: &[usize], source: &[usize], target: &[usize]) -> Iposet {
        let mut index = vec![usize::MAX; self.size()];
        for (i, &x) in points.iter().enumerate() {
            index[x] = i;
        }
        Iposet::new_unchecked(
            self.poset.induced(points),
            source.iter().map(|&x| index[x]).collect(),
            target.iter().map(|&x| index[x]).collect(),
        )
    }

    pub fn canonical_form(&self) -> CanonForm {
        canonize(&self.poset, &self.source, &self.target).0
    }

    /// The canonical form together with the relabeling `old -> new` that
    /// produces the canonical representative.
    pub fn canonize(&self) -> (CanonForm, Vec<usize>) {
        canonize(&self.poset, &self.source, &self.target)
    }

    /// Isomorphism of iposets: an order bijection that maps the `i`-th
    /// source to the `i`-th source and the `j`-th target to the `j`-th target.
    pub fn iso(&self, other: &Iposet) -> bool {
        self.size() == other.size()
            && self.source_arity() == other.source_arity()
            && self.target_arity() == other.target_arity()
            && self.poset.relation_len() == other.poset.relation_len()
            && self.canonical_form() == other.canonical_form()
    }

    /// Interface-preserving automorphisms.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        automorphism_group(&self.poset, &self.source, &self.target)
    }

    /// Subsumption `self ≼ other`: some interface-preserving point bijection
    /// maps every arrow of `other` onto an arrow of `self`.
    pub fn subsumes(&self, other: &Iposet) -> bool {
        self.subsumption_witness(other).is_some()
    }

    /// A bijection `f` from the points of `other` to the points of `self`
    /// with `x < y ⇒ f(x) < f(y)` that fixes interface positions.
    pub fn subsumption_witness(&self, other: &Iposet) -> Option<Vec<usize>> {
        let n = self.size();
        if other.size() != n
            || other.source_arity() != self.source_arity()
            || other.target_arity() != self.target_arity()
            || other.poset.relation_len() > self.poset.relation_len()
        {
            return None;
        }
        let mut f = vec![usize::MAX; n];
        let mut used = PointSet::EMPTY;
        let pins = other
            .source
            .iter()
            .zip(&self.source)
            .chain(other.target.iter().zip(&self.target));
        for (&x, &y) in pins {
            if f[x] == usize::MAX {
                if used.contains(y) {
                    return None;
                }
                f[x] = y;
                used.insert(y);
            } else if f[x] != y {
                return None;
            }
        }
        // Interface points of `self` may only receive interface points of
        // `other` at the same positions, which the pins above already fix.
        if used != self.source_set().union(self.target_set()) {
            return None;
        }
        if !other.arrows_preserved(self, &f, PointSet::full(n).difference(free_points(&f))) {
            return None;
        }
        let free: Vec<usize> = (0..n).filter(|&x| f[x] == usize::MAX).collect();
        if extend_subsumption(other, self, &mut f, &mut used, &free, 0) {
            Some(f)
        } else {
            None
        }
    }

    /// Whether `f` maps every arrow of `self` among `assigned` to an arrow of
    /// `host`.
    fn arrows_preserved(&self, host: &Iposet, f: &[usize], assigned: PointSet) -> bool {
        assigned.iter().all(|x| {
            self.poset
                .successors(x)
                .intersection(assigned)
                .iter()
                .all(|y| host.poset.lt(f[x], f[y]))
        })
    }
}

fn free_points(f: &[usize]) -> PointSet {
    (0..f.len()).filter(|&x| f[x] == usize::MAX).collect()
}

fn extend_subsumption(
    pattern: &Iposet,
    host: &Iposet,
    f: &mut Vec<usize>,
    used: &mut PointSet,
    free: &[usize],
    i: usize,
) -> bool {
    let Some(&x) = free.get(i) else {
        return true;
    };
    let n = host.size();
    let pinned = host.source_set().union(host.target_set());
    for y in 0..n {
        if used.contains(y) || pinned.contains(y) {
            continue;
        }
        let ok = (0..n).all(|z| {
            let fz = f[z];
            if fz == usize::MAX {
                return true;
            }
            (!pattern.poset.lt(x, z) || host.poset.lt(y, fz)) && (!pattern.poset.lt(z, x) || host.poset.lt(fz, y))
        });
        if !ok {
            continue;
        }
        f[x] = y;
        used.insert(y);
        if extend_subsumption(pattern, host, f, used, free, i + 1) {
            return true;
        }
        f[x] = usize::MAX;
        used.remove(y);
    }
    false
}

impl fmt::Debug for Iposet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Iposet({}, {:?}, s={:?}, t={:?})",
            self.size(),
            self.poset.covers(),
            self.source,
            self.target
        )
    }
}
