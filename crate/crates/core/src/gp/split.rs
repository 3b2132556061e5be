//! Binary parallel and gluing factorizations of an iposet.

use crate::iposet::Iposet;
use crate::points::PointSet;

/// Calls `f(a, b)` for every factorization `p ≅ a ⊗ b` with both factors
/// nonempty, in a fixed order, until `f` returns `true`. Returns whether it did.
pub fn par_splits(p: &Iposet, mut f: impl FnMut(Iposet, Iposet) -> bool) -> bool {
    let comps = p.poset().component_sets();
    let c = comps.len();
    if c < 2 {
        return false;
    }
    for mask in 1u64..(1u64 << c) - 1 {
        let block: PointSet = comps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(PointSet::EMPTY, |acc, (_, s)| acc.union(*s));
        if !is_prefix(p.source(), block) || !is_prefix(p.target(), block) {
            continue;
        }
        let rest = p.poset().points().difference(block);
        let (a, b) = (restrict(p, block), restrict(p, rest));
        if f(a, b) {
            return true;
        }
    }
    false
}

/// Whether the members of `block` form a prefix of `seq`.
fn is_prefix(seq: &[usize], block: PointSet) -> bool {
    let k = seq.iter().take_while(|&&x| block.contains(x)).count();
    seq[k..].iter().all(|&x| !block.contains(x))
}

/// The sub-iposet on `block` keeping the interface entries inside it.
fn restrict(p: &Iposet, block: PointSet) -> Iposet {
    let keep = |seq: &[usize]| -> Vec<usize> { seq.iter().copied().filter(|&x| block.contains(x)).collect() };
    p.sub(&block.to_vec(), &keep(p.source()), &keep(p.target()))
}

/// Calls `f(a, b)` for every factorization `p ≅ a * b` in which `a` has a
/// non-target point and `b` a non-source point, in a fixed order, until `f`
/// returns `true`.
///
/// The points of `p` split into a down-set `L` (non-targets of `a`), an
/// up-set `R` (non-sources of `b`) lying entirely above `L`, and the antichain
/// `M` between them that forms the shared interface, in every order.
pub fn glue_splits(p: &Iposet, mut f: impl FnMut(Iposet, Iposet) -> bool) -> bool {
    let q = p.poset();
    let all = q.points();
    let sources = p.source_set();
    let targets = p.target_set();
    let downs = q.down_sets();
    for &lower in &downs {
        if lower.is_empty() || !lower.intersection(targets).is_empty() {
            continue;
        }
        let above = lower.iter().fold(all, |acc, x| acc.intersection(q.successors(x)));
        for &closed in &downs {
            if closed == all || !lower.is_subset(closed) {
                continue;
            }
            let upper = all.difference(closed);
            let middle = closed.difference(lower);
            if !upper.is_subset(above) || !upper.intersection(sources).is_empty() || !q.is_antichain(middle) {
                continue;
            }
            let left_points = lower.union(middle).to_vec();
            let right_points = middle.union(upper).to_vec();
            for order in permutations(&middle.to_vec()) {
                let a = p.sub(&left_points, p.source(), &order);
                let b = p.sub(&right_points, &order, p.target());
                if f(a, b) {
                    return true;
                }
            }
        }
    }
    false
}

/// All orderings of `items`, lexicographic in positions.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    let mut out = vec![items.to_vec()];
    loop {
        let Some(i) = (1..idx.len()).rev().find(|&i| idx[i - 1] < idx[i]) else {
            return out;
        };
        let j = (i..idx.len()).rev().find(|&j| idx[j] > idx[i - 1]).unwrap();
        idx.swap(i - 1, j);
        idx[i..].reverse();
        out.push(idx.iter().map(|&k| items[k]).collect());
    }
}
