//! Algebraic laws of gluing and parallel composition, as executable checks.
//!
//! Every checker returns whether its law holds on one instance; equality means
//! isomorphism. [`run_laws`] applies them to every applicable tuple of small
//! iposets.

use std::fmt;

use rayon::prelude::*;

use crate::enumerate::all_iposets;
use crate::error::{Error, Result};
use crate::gp::split::{glue_splits, permutations};
use crate::iposet::Iposet;
use crate::points::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Glue,
    Par,
}

impl Op {
    pub fn apply(self, a: &Iposet, b: &Iposet) -> Result<Iposet> {
        match self {
            Op::Glue => a.glue(b),
            Op::Par => Ok(a.par(b)),
        }
    }
}

/// Two instances where `p □ q ≅ u □ v` but no interpolant exists: a fork
/// split at either top, and a chain beside a point in either order.
pub fn levi_counterexamples() -> Vec<(Iposet, Iposet, Iposet, Iposet, Op)> {
    let mk = |n: usize, pairs: &[(usize, usize)], s: &[usize], t: &[usize]| {
        Iposet::new(crate::poset::Poset::new(n, pairs).unwrap(), s.to_vec(), t.to_vec()).unwrap()
    };
    let top = mk(2, &[(0, 1)], &[], &[1]);
    let chain = mk(2, &[(0, 1)], &[], &[]);
    let point = mk(1, &[], &[], &[]);
    vec![
        (
            top.clone(),
            mk(2, &[], &[0], &[0]),
            top,
            mk(2, &[], &[1], &[0]),
            Op::Glue,
        ),
        (chain.clone(), point.clone(), point, chain, Op::Par),
    ]
}

/// Which way an interpolant sits between two factorizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeviSide {
    /// `p = u □ r` and `r □ q = v`.
    AfterU,
    /// `u = p □ r` and `r □ v = q`.
    AfterP,
}

fn same(a: &Iposet, b: &Iposet) -> bool {
    a == b || a.iso(b)
}

/// Every factorization `p ≅ a * b` with both factors of at most `max_factor`
/// points, trivial ones included.
pub fn glue_factorizations(p: &Iposet, max_factor: usize) -> Vec<(Iposet, Iposet)> {
    let q = p.poset();
    let all = q.points();
    let sources = p.source_set();
    let targets = p.target_set();
    let downs = q.down_sets();
    let mut out = Vec::new();
    for &lower in &downs {
        if !lower.intersection(targets).is_empty() {
            continue;
        }
        let above = lower.iter().fold(all, |acc, x| acc.intersection(q.successors(x)));
        for &closed in &downs {
            if !lower.is_subset(closed) {
                continue;
            }
            let upper = all.difference(closed);
            let middle = closed.difference(lower);
            if closed.len() > max_factor
                || all.difference(lower).len() > max_factor
                || !upper.is_subset(above)
                || !upper.intersection(sources).is_empty()
                || !q.is_antichain(middle)
            {
                continue;
            }
            let left = closed.to_vec();
            let right = all.difference(lower).to_vec();
            for order in permutations(&middle.to_vec()) {
                out.push((p.sub(&left, p.source(), &order), p.sub(&right, &order, p.target())));
            }
        }
    }
    out
}

/// Every factorization `p ≅ a ⊗ b`, empty factors included.
pub fn par_factorizations(p: &Iposet) -> Vec<(Iposet, Iposet)> {
    let comps = p.poset().component_sets();
    let mut out = Vec::new();
    for mask in 0u64..1 << comps.len() {
        let block = comps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(PointSet::EMPTY, |acc, (_, s)| acc.union(*s));
        let split = |seq: &[usize]| {
            let k = seq.iter().take_while(|&&x| block.contains(x)).count();
            seq[k..].iter().all(|&x| !block.contains(x))
        };
        if !split(p.source()) || !split(p.target()) {
            continue;
        }
        let keep =
            |set: PointSet, seq: &[usize]| -> Vec<usize> { seq.iter().copied().filter(|&x| set.contains(x)).collect() };
        let rest = p.poset().points().difference(block);
        let a = p.sub(&block.to_vec(), &keep(block, p.source()), &keep(block, p.target()));
        let b = p.sub(&rest.to_vec(), &keep(rest, p.source()), &keep(rest, p.target()));
        out.push((a, b));
    }
    out
}

fn factorizations(op: Op, p: &Iposet) -> Vec<(Iposet, Iposet)> {
    match op {
        Op::Glue => glue_factorizations(p, p.size()),
        Op::Par => par_factorizations(p),
    }
}

/// An interpolant for two factorizations `p □ q ≅ u □ v`.
pub fn levi_factor(p: &Iposet, q: &Iposet, u: &Iposet, v: &Iposet, op: Op) -> Result<(Iposet, LeviSide)> {
    let x = op.apply(p, q).map_err(|_| Error::NotComposable)?;
    let y = op.apply(u, v).map_err(|_| Error::NotComposable)?;
    if !same(&x, &y) {
        return Err(Error::NotComposable);
    }
    let attempts = [(p, u, q, v, LeviSide::AfterU), (u, p, v, q, LeviSide::AfterP)];
    for (outer, inner, tail, expect, side) in attempts {
        if inner.size() > outer.size() {
            continue;
        }
        for (a, r) in factorizations(op, outer) {
            if !same(&a, inner) {
                continue;
            }
            if let Ok(z) = op.apply(&r, tail) {
                if same(&z, expect) {
                    return Ok((r, side));
                }
            }
        }
    }
    Err(Error::NoInterpolant)
}

/// Associativity of gluing on a composable triple, and the identities as
/// units on `p`.
pub fn check_category(p: &Iposet, q: &Iposet, r: &Iposet) -> Result<bool> {
    let left = p.glue(q)?.glue(r)?;
    let right = p.glue(&q.glue(r)?)?;
    let right_unit = p.glue(&Iposet::identity(p.target_arity()))?;
    let left_unit = Iposet::identity(p.source_arity()).glue(p)?;
    Ok(same(&left, &right) && same(&right_unit, p) && same(&left_unit, p))
}

/// Associativity of parallel composition, with the empty iposet as unit.
pub fn check_monoid(p: &Iposet, q: &Iposet, r: &Iposet) -> bool {
    let e = Iposet::empty();
    same(&p.par(q).par(r), &p.par(&q.par(r))) && same(&p.par(&e), p) && same(&e.par(p), p)
}

/// `(p ⊗ p2) * (q ⊗ q2) ≼ (p * q) ⊗ (p2 * q2)`, witnessed by the point
/// correspondence that follows each operand's points through both sides.
pub fn check_lax_interchange(p: &Iposet, p2: &Iposet, q: &Iposet, q2: &Iposet) -> Result<bool> {
    let (pq, g1) = p.glue_with_map(q)?;
    let (pq2, g2) = p2.glue_with_map(q2)?;
    let (lhs, m) = p.par(p2).glue_with_map(&q.par(q2))?;
    let rhs = pq.par(&pq2);
    let off = pq.size();
    let mut f = vec![usize::MAX; rhs.size()];
    for x in 0..p.size() {
        f[x] = x;
    }
    for x in 0..p2.size() {
        f[off + x] = p.size() + x;
    }
    for (y, &g) in g1.iter().enumerate() {
        f[g] = m[y];
    }
    for (y, &g) in g2.iter().enumerate() {
        f[off + g] = m[q.size() + y];
    }
    let image: PointSet = f.iter().copied().filter(|&x| x < lhs.size()).collect();
    if lhs.size() != rhs.size() || image.len() != lhs.size() {
        return Ok(false);
    }
    let interfaces_kept = rhs.source().iter().map(|&x| f[x]).eq(lhs.source().iter().copied())
        && rhs.target().iter().map(|&x| f[x]).eq(lhs.target().iter().copied());
    let arrows_kept = rhs
        .poset()
        .relation()
        .into_iter()
        .all(|(a, b)| lhs.poset().lt(f[a], f[b]));
    Ok(interfaces_kept && arrows_kept)
}

/// `(idpos(k,1,1) ⊗ p) * (idpos(1,l,1) ⊗ q) ≅ idpos(k,l,1) ⊗ (p * q)`.
pub fn check_interchange_eq(p: &Iposet, q: &Iposet, k: usize, l: usize) -> Result<bool> {
    let left = Iposet::idpos(k, 1, 1)?.par(p).glue(&Iposet::idpos(1, l, 1)?.par(q))?;
    let right = Iposet::idpos(k, l, 1)?.par(&p.glue(q)?);
    Ok(same(&left, &right))
}

/// If `p1 ⊗ p2 ≅ q1 * q2` with both parallel factors nonempty, `q1` having a
/// non-target point and `q2` a non-source point, then a parallel factor is
/// discrete. Instances outside these conditions hold vacuously.
pub fn check_decomposition(p1: &Iposet, p2: &Iposet, q1: &Iposet, q2: &Iposet) -> bool {
    let applicable = p1.size() > 0
        && p2.size() > 0
        && q1.target_arity() < q1.size()
        && q2.source_arity() < q2.size()
        && q1.glue(q2).is_ok_and(|g| same(&g, &p1.par(p2)));
    !applicable || p1.is_discrete() || p2.is_discrete()
}

/// The four-point instance on which strict interchange fails:
/// `((Q ⊗ Q) * (Q ⊗ Q), (Q * Q) ⊗ (Q * Q))` for the plain point `Q`.
pub fn strict_interchange_counterexample() -> (Iposet, Iposet) {
    let q = Iposet::idpos(0, 0, 1).unwrap();
    let lhs = q.par(&q).glue(&q.par(&q)).unwrap();
    let rhs = q.glue(&q).unwrap().par(&q.glue(&q).unwrap());
    (lhs, rhs)
}

/// Outcome of one law over all instances tried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub name: &'static str,
    pub checked: u64,
    pub failed: u64,
    /// The first few failing instances.
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "ok" } else { "FAILED" };
        write!(
            f,
            "{:<28} {:>10} instances  {} ({} violations)",
            self.name, self.checked, verdict, self.failed
        )
    }
}

fn report(name: &'static str, results: Vec<(u64, Vec<String>)>) -> LawReport {
    let mut r = LawReport {
        name,
        checked: 0,
        failed: 0,
        violations: Vec::new(),
    };
    for (n, v) in results {
        r.checked += n;
        r.failed += v.len() as u64;
        r.violations.extend(v);
    }
    r.violations.truncate(20);
    r
}

/// Runs every law on all applicable tuples of iposets with at most
/// `max_points` points each.
pub fn run_laws(max_points: usize) -> Result<Vec<LawReport>> {
    let mut small = Vec::new();
    for n in 0..=max_points {
        small.extend(all_iposets(n, true)?.into_iter().map(|c| c.to_iposet()));
    }
    let pairs: Vec<(&Iposet, &Iposet)> = small
        .iter()
        .flat_map(|p| {
            small
                .iter()
                .filter(|q| q.source_arity() == p.target_arity())
                .map(move |q| (p, q))
        })
        .collect();
    let glued: Vec<(&Iposet, &Iposet, Iposet)> = pairs
        .par_iter()
        .map(|&(p, q)| (p, q, p.glue(q).expect("arities match")))
        .collect();

    let mut reports = Vec::new();

    reports.push(report(
        "glue category",
        glued
            .par_iter()
            .map(|(p, q, _)| {
                let mut bad = Vec::new();
                let mut n = 0;
                for r in small.iter().filter(|r| r.source_arity() == q.target_arity()) {
                    n += 1;
                    if !check_category(p, q, r).unwrap_or(false) {
                        bad.push(format!("{p:?} {q:?} {r:?}"));
                    }
                }
                (n, bad)
            })
            .collect(),
    ));

    reports.push(report(
        "par monoid",
        small
            .par_iter()
            .map(|p| {
                let mut bad = Vec::new();
                let mut n = 0;
                for q in &small {
                    for r in &small {
                        n += 1;
                        if !check_monoid(p, q, r) {
                            bad.push(format!("{p:?} {q:?} {r:?}"));
                        }
                    }
                }
                (n, bad)
            })
            .collect(),
    ));

    reports.push(report(
        "interchange equation",
        glued
            .par_iter()
            .map(|(p, q, _)| {
                let mut bad = Vec::new();
                for (k, l) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    if !check_interchange_eq(p, q, k, l).unwrap_or(false) {
                        bad.push(format!("k={k} l={l} {p:?} {q:?}"));
                    }
                }
                (4, bad)
            })
            .collect(),
    ));

    reports.push(report(
        "lax interchange",
        pairs
            .par_iter()
            .map(|&(p, q)| {
                let mut bad = Vec::new();
                let mut n = 0;
                for &(p2, q2) in &pairs {
                    n += 1;
                    if !check_lax_interchange(p, p2, q, q2).unwrap_or(false) {
                        bad.push(format!("{p:?} {p2:?} {q:?} {q2:?}"));
                    }
                }
                (n, bad)
            })
            .collect(),
    ));

    let (lhs, rhs) = strict_interchange_counterexample();
    let strict_fails = !lhs.iso(&rhs);
    let lax_holds = lhs.subsumes(&rhs);
    let mut v = Vec::new();
    if !strict_fails {
        v.push("strict interchange unexpectedly holds".to_string());
    }
    if !lax_holds {
        v.push("counterexample is not subsumed".to_string());
    }
    reports.push(LawReport {
        name: "strict interchange fails",
        checked: 1,
        failed: v.len() as u64,
        violations: v,
    });

    reports.push(report(
        "levi (glue)",
        glued
            .par_iter()
            .map(|(p, q, x)| {
                let mut bad = Vec::new();
                let mut n = 0;
                for (u, v) in glue_factorizations(x, max_points) {
                    n += 1;
                    if levi_factor(p, q, &u, &v, Op::Glue).is_err() {
                        bad.push(format!("{p:?} {q:?} / {u:?} {v:?}"));
                    }
                }
                (n, bad)
            })
            .collect(),
    ));

    reports.push(report(
        "levi (par)",
        small
            .par_iter()
            .map(|p| {
                let mut bad = Vec::new();
                let mut n = 0;
                for q in &small {
                    let x = p.par(q);
                    for (u, v) in par_factorizations(&x) {
                        if u.size() > max_points || v.size() > max_points {
                            continue;
                        }
                        n += 1;
                        if levi_factor(p, q, &u, &v, Op::Par).is_err() {
                            bad.push(format!("{p:?} {q:?} / {u:?} {v:?}"));
                        }
                    }
                }
                (n, bad)
            })
            .collect(),
    ));

    reports.push(report(
        "decomposition",
        small
            .par_iter()
            .filter(|p| p.size() > 0)
            .map(|p1| {
                let mut bad = Vec::new();
                let mut n = 0;
                for p2 in small.iter().filter(|p| p.size() > 0) {
                    let x = p1.par(p2);
                    glue_splits(&x, |q1, q2| {
                        if q1.size() <= max_points && q2.size() <= max_points {
                            n += 1;
                            if !check_decomposition(p1, p2, &q1, &q2) {
                                bad.push(format!("{p1:?} {p2:?} / {q1:?} {q2:?}"));
                            }
                        }
                        false
                    });
                }
                (n, bad)
            })
            .collect(),
    ));

    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::n;
    use crate::poset::Poset;

    fn ip(n: usize, pairs: &[(usize, usize)], s: &[usize], t: &[usize]) -> Iposet {
        Iposet::new(Poset::new(n, pairs).unwrap(), s.to_vec(), t.to_vec()).unwrap()
    }

    #[test]
    fn strict_interchange_fails_but_is_subsumed() {
        let (lhs, rhs) = strict_interchange_counterexample();
        assert_eq!(lhs.poset().relation_len(), 4);
        assert_eq!(rhs.poset().relation_len(), 2);
        assert!(!lhs.iso(&rhs));
        assert!(lhs.subsumes(&rhs));
        assert!(!rhs.subsumes(&lhs));
        let q = Iposet::idpos(0, 0, 1).unwrap();
        assert!(check_lax_interchange(&q, &q, &q, &q).unwrap());
    }

    #[test]
    fn two_decompositions_of_n_interpolate() {
        // left: isolated point, and a 2-chain whose top is target 1;
        // right: isolated point, and source 1.
        let p = ip(3, &[(1, 2)], &[], &[2]);
        let q = ip(2, &[], &[1], &[]);
        // left: target 1 on top, isolated point below;
        // right: source 1 below a point, and an isolated point.
        let u = ip(2, &[], &[], &[0]);
        let v = ip(3, &[(0, 1)], &[0], &[]);
        let x = p.glue(&q).unwrap();
        assert!(x.iso(&Iposet::embed(&n())));
        assert!(u.glue(&v).unwrap().iso(&x));
        let (r, side) = levi_factor(&p, &q, &u, &v, Op::Glue).unwrap();
        match side {
            LeviSide::AfterU => {
                assert!(u.glue(&r).unwrap().iso(&p));
                assert!(r.glue(&q).unwrap().iso(&v));
            }
            LeviSide::AfterP => {
                assert!(p.glue(&r).unwrap().iso(&u));
                assert!(r.glue(&v).unwrap().iso(&q));
            }
        }
    }

    #[test]
    fn levi_on_equal_factorizations_gives_identity() {
        let p = Iposet::embed(&Poset::chain(2));
        let q = Iposet::embed(&Poset::discrete(1));
        let (r, _) = levi_factor(&p, &q, &p, &q, Op::Glue).unwrap();
        assert!(r.iso(&Iposet::identity(0)));
        let a = Iposet::identity(1);
        let (r, _) = levi_factor(&a, &a, &a, &a, Op::Par).unwrap();
        assert!(r.iso(&Iposet::empty()));
        let other = Iposet::embed(&Poset::discrete(2));
        assert_eq!(levi_factor(&p, &q, &other, &q, Op::Glue), Err(Error::NotComposable));
    }

    #[test]
    fn literal_decomposition_conditions_admit_a_symmetry() {
        // Two sourced 2-chains, glued behind a swap symmetry: neither
        // parallel factor is discrete, and neither gluing factor has the
        // form idpos(k,n,n) / idpos(n,k,n).
        let c = ip(2, &[(0, 1)], &[0], &[]);
        let swapped = ip(4, &[(0, 1), (2, 3)], &[2, 0], &[]);
        let swap = Iposet::symmetry(&[1, 0]).unwrap();
        assert!(swap.glue(&swapped).unwrap().iso(&c.par(&c)));
        assert!(!c.is_discrete());
        // The proof's condition (a non-target point in the left factor)
        // excludes it.
        assert!(check_decomposition(&c, &c, &swap, &swapped));
    }

    #[test]
    fn interchange_equation_instance() {
        let p = Iposet::embed(&Poset::chain(2));
        for (k, l) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!(check_interchange_eq(&p, &p, k, l).unwrap());
        }
        let q = Iposet::identity(1);
        assert!(check_interchange_eq(&p, &q, 0, 0).is_err());
    }

    #[test]
    fn factorization_counts() {
        let x = Iposet::embed(&Poset::chain(2));
        // (empty, x), (point, point), (x, empty), plus the splits with the
        // interface in the middle.
        let f = glue_factorizations(&x, 2);
        assert!(f.iter().all(|(a, b)| a.glue(b).unwrap().iso(&x)));
        assert_eq!(par_factorizations(&Iposet::embed(&Poset::discrete(2))).len(), 4);
    }

    #[test]
    fn levi_fails_up_to_iso() {
        for (p, q, u, v, op) in levi_counterexamples() {
            assert!(op.apply(&p, &q).unwrap().iso(&op.apply(&u, &v).unwrap()));
            assert_eq!(levi_factor(&p, &q, &u, &v, op), Err(Error::NoInterpolant));
        }
    }

    #[test]
    fn suite_on_two_points() {
        for r in run_laws(2).unwrap() {
            eprintln!("{r}");
            assert!(r.checked > 0, "{r}");
            if !r.name.starts_with("levi") {
                assert!(r.passed(), "{r}: {:?}", r.violations);
            }
        }
    }
}
