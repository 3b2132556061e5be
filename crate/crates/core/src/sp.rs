//! Series-parallel recognition and decomposition.

use std::fmt;

use crate::patterns::{self, find_induced, Embedding};
use crate::points::PointSet;
use crate::poset::Poset;

/// Expression over the one-point poset with serial and parallel nodes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SpTerm {
    Empty,
    Point,
    Serial(Vec<SpTerm>),
    Parallel(Vec<SpTerm>),
}

impl SpTerm {
    pub fn eval(&self) -> Poset {
        match self {
            SpTerm::Empty => Poset::empty(),
            SpTerm::Point => Poset::discrete(1),
            SpTerm::Serial(ts) => ts.iter().fold(Poset::empty(), |acc, t| acc.serial(&t.eval())),
            SpTerm::Parallel(ts) => ts.iter().fold(Poset::empty(), |acc, t| acc.parallel(&t.eval())),
        }
    }
}

impl fmt::Display for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpTerm::Empty => f.write_str("()"),
            SpTerm::Point => f.write_str("."),
            SpTerm::Serial(ts) | SpTerm::Parallel(ts) => {
                let sep = if matches!(self, SpTerm::Serial(_)) {
                    " ; "
                } else {
                    " || "
                };
                f.write_str("(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// N-freeness.
pub fn is_sp(p: &Poset) -> bool {
    n_witness(p).is_none()
}

/// The least induced copy of N, if any.
pub fn n_witness(p: &Poset) -> Option<Embedding> {
    find_induced(p, &patterns::n())
}

/// Splits `p` into weak components (parallel) or into the components of its
/// incomparability graph (serial), recursively. Fails when a connected piece
/// of two or more points has a connected incomparability graph.
pub fn sp_decompose(p: &Poset) -> Option<SpTerm> {
    if p.is_empty() {
        return Some(SpTerm::Empty);
    }
    decompose_on(p, p.points())
}

fn decompose_on(p: &Poset, set: PointSet) -> Option<SpTerm> {
    if set.len() == 1 {
        return Some(SpTerm::Point);
    }
    let comps = blocks(set, |x, y| p.lt(x, y) || p.lt(y, x));
    if comps.len() > 1 {
        let parts = comps
            .into_iter()
            .map(|c| decompose_on(p, c))
            .collect::<Option<Vec<_>>>()?;
        return Some(SpTerm::Parallel(parts));
    }
    let mut layers = blocks(set, |x, y| p.incomparable(x, y));
    if layers.len() == 1 {
        return None;
    }
    // Different layers are pairwise comparable; order them bottom-up and
    // make sure the layering really is a serial composition.
    layers.sort_by(|a, b| {
        let (x, y) = (a.first().unwrap(), b.first().unwrap());
        if p.lt(x, y) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    for (i, lo) in layers.iter().enumerate() {
        for hi in &layers[i + 1..] {
            if !lo.iter().all(|x| hi.iter().all(|y| p.lt(x, y))) {
                return None;
            }
        }
    }
    let parts = layers
        .into_iter()
        .map(|l| decompose_on(p, l))
        .collect::<Option<Vec<_>>>()?;
    Some(SpTerm::Serial(parts))
}

/// Connected components of `set` under the symmetric relation `adj`.
fn blocks(set: PointSet, adj: impl Fn(usize, usize) -> bool) -> Vec<PointSet> {
    let mut rest = set;
    let mut out = Vec::new();
    while let Some(start) = rest.first() {
        let mut comp = PointSet::singleton(start);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for y in rest.difference(comp).iter() {
                if adj(x, y) {
                    comp.insert(y);
                    frontier.push(y);
                }
            }
        }
        rest = rest.difference(comp);
        out.push(comp);
    }
    out
}
