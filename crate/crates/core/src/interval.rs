//! Interval orders, interval sequences and the gluing-chain construction.
//!
//! An interval sequence is a word of `Begin(x)` / `End(x)` events; positions in
//! the word serve as the linear order the intervals live in. A sequence
//! induces the order `x < y ⇔ End(x)` precedes `Begin(y)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gp::GpTerm;
use crate::iposet::Iposet;
use crate::patterns::{find_induced, two_two};
use crate::points::PointSet;
use crate::poset::Poset;

/// Largest poset handed to [`all_sequences`].
pub const MAX_BRUTE_FORCE: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Event {
    Begin(usize),
    End(usize),
}

impl Event {
    pub fn point(self) -> usize {
        match self {
            Event::Begin(x) | Event::End(x) => x,
        }
    }

    pub fn is_begin(self) -> bool {
        matches!(self, Event::Begin(_))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Begin(x) => write!(f, "b{x}"),
            Event::End(x) => write!(f, "e{x}"),
        }
    }
}

/// A word of begin/end events in which every point begins exactly once and
/// ends at most once, after its begin.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalSeq {
    events: Vec<Event>,
}

impl IntervalSeq {
    pub fn new(events: Vec<Event>) -> Result<IntervalSeq> {
        let mut begun = PointSet::EMPTY;
        let mut ended = PointSet::EMPTY;
        for &ev in &events {
            let x = ev.point();
            if x >= crate::points::MAX_POINTS {
                return Err(Error::InvalidSequence(format!("point {x} out of range")));
            }
            match ev {
                Event::Begin(_) if begun.contains(x) => {
                    return Err(Error::InvalidSequence(format!("b{x} occurs twice")))
                }
                Event::Begin(_) => begun.insert(x),
                Event::End(_) if !begun.contains(x) => return Err(Error::InvalidSequence(format!("e{x} before b{x}"))),
                Event::End(_) if ended.contains(x) => return Err(Error::InvalidSequence(format!("e{x} occurs twice"))),
                Event::End(_) => ended.insert(x),
            }
        }
        Ok(IntervalSeq { events })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn begun(&self) -> PointSet {
        self.events.iter().filter(|e| e.is_begin()).map(|e| e.point()).collect()
    }

    fn ended(&self) -> PointSet {
        self.events
            .iter()
            .filter(|e| !e.is_begin())
            .map(|e| e.point())
            .collect()
    }

    /// First point that begins but never ends.
    pub fn open_point(&self) -> Option<usize> {
        self.begun().difference(self.ended()).first()
    }

    pub fn is_closed(&self) -> bool {
        self.open_point().is_none()
    }

    /// Sorts every maximal run of begins, and every maximal run of ends, by
    /// point index. Two sequences are trace-equivalent iff their normal forms
    /// coincide.
    pub fn normal_form(&self) -> IntervalSeq {
        let mut events = self.events.clone();
        let mut i = 0;
        while i < events.len() {
            let kind = events[i].is_begin();
            let mut j = i;
            while j < events.len() && events[j].is_begin() == kind {
                j += 1;
            }
            events[i..j].sort();
            i = j;
        }
        IntervalSeq { events }
    }
}

impl fmt::Display for IntervalSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntervalSeq({self})")
    }
}

impl FromStr for IntervalSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<IntervalSeq> {
        let events = s
            .split_whitespace()
            .map(|tok| {
                let (kind, num) = tok.split_at(tok.char_indices().nth(1).map_or(tok.len(), |(i, _)| i));
                let x: usize = num
                    .parse()
                    .map_err(|_| Error::InvalidSequence(format!("bad token `{tok}`")))?;
                match kind {
                    "b" => Ok(Event::Begin(x)),
                    "e" => Ok(Event::End(x)),
                    _ => Err(Error::InvalidSequence(format!("bad token `{tok}`"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        IntervalSeq::new(events)
    }
}

/// Endpoint positions of each point's interval within a `2n`-point linear
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalRep {
    pub begin: Vec<usize>,
    pub end: Vec<usize>,
}

impl IntervalRep {
    /// Whether the endpoints are distinct, every interval is proper, and
    /// disjointness of intervals matches the order of `p`.
    pub fn represents(&self, p: &Poset) -> bool {
        let n = p.size();
        if self.begin.len() != n || self.end.len() != n {
            return false;
        }
        let positions: BTreeSet<usize> = self.begin.iter().chain(&self.end).copied().collect();
        positions.len() == 2 * n
            && (0..n).all(|x| self.begin[x] < self.end[x])
            && (0..n).all(|x| (0..n).all(|y| p.lt(x, y) == (self.end[x] < self.begin[y])))
    }
}

/// Fishburn's condition: `w < y` and `x < z` imply `w < z` or `x < y`.
pub fn is_interval_order(p: &Poset) -> bool {
    let n = p.size();
    let result = (0..n).all(|w| {
        (0..n).all(|x| {
            let (sw, sx) = (p.successors(w), p.successors(x));
            sw.iter().all(|y| sx.iter().all(|z| sw.contains(z) || sx.contains(y)))
        })
    });
    debug_assert_eq!(result, find_induced(p, &two_two()).is_none());
    result
}

/// All maximal antichains, ascending by bitmask.
pub fn all_max_antichains(p: &Poset) -> Vec<PointSet> {
    let n = p.size();
    let all = p.points();
    let incomparable: Vec<PointSet> = (0..n)
        .map(|x| {
            all.difference(p.successors(x))
                .difference(p.predecessors(x))
                .difference(PointSet::singleton(x))
        })
        .collect();
    let mut out = Vec::new();
    if n == 0 {
        out.push(PointSet::EMPTY);
        return out;
    }
    bron_kerbosch(&incomparable, PointSet::EMPTY, all, PointSet::EMPTY, &mut out);
    out.sort();
    out
}

fn bron_kerbosch(adj: &[PointSet], clique: PointSet, mut cand: PointSet, mut excl: PointSet, out: &mut Vec<PointSet>) {
    if cand.is_empty() {
        if excl.is_empty() {
            out.push(clique);
        }
        return;
    }
    let pivot = cand
        .union(excl)
        .iter()
        .max_by_key(|&u| adj[u].intersection(cand).len())
        .unwrap();
    for v in cand.difference(adj[pivot]).iter() {
        let mut next = clique;
        next.insert(v);
        bron_kerbosch(adj, next, cand.intersection(adj[v]), excl.intersection(adj[v]), out);
        cand.remove(v);
        excl.insert(v);
    }
}

/// `a ⊏ b`: every point only in `a` is below every point only in `b`.
pub fn antichain_precedes(p: &Poset, a: PointSet, b: PointSet) -> bool {
    if a == b {
        return false;
    }
    let only_b = b.difference(a);
    a.difference(b).iter().all(|x| only_b.is_subset(p.successors(x)))
}

/// The maximal antichains sorted by the transitive closure of `⊏`, or a pair
/// of antichains that closure leaves unordered (or orders both ways).
pub fn max_antichains(p: &Poset) -> Result<Vec<PointSet>> {
    let chains = all_max_antichains(p);
    let k = chains.len();
    let mut rel: Vec<Vec<bool>> = chains
        .iter()
        .map(|&a| chains.iter().map(|&b| antichain_precedes(p, a, b)).collect())
        .collect();
    for m in 0..k {
        for i in 0..k {
            if rel[i][m] {
                for j in 0..k {
                    if rel[m][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if rel[i][j] == rel[j][i] {
                return Err(Error::NotLinear {
                    first: chains[i].to_vec(),
                    second: chains[j].to_vec(),
                });
            }
        }
    }
    let mut ranked: Vec<(usize, PointSet)> = (0..k)
        .map(|j| ((0..k).filter(|&i| rel[i][j]).count(), chains[j]))
        .collect();
    ranked.sort();
    Ok(ranked.into_iter().map(|(_, a)| a).collect())
}

/// The interval sequence read off the `⊏`-sorted maximal antichains: at each
/// step the points leaving end, then the points entering begin, each in
/// ascending order.
pub fn canonical_trace(p: &Poset) -> Result<IntervalSeq> {
    let chains = max_antichains(p).map_err(|_| Error::NotIntervalOrder)?;
    let mut events = Vec::with_capacity(2 * p.size());
    let mut prev = PointSet::EMPTY;
    for &a in &chains {
        events.extend(prev.difference(a).iter().map(Event::End));
        events.extend(a.difference(prev).iter().map(Event::Begin));
        prev = a;
    }
    events.extend(prev.iter().map(Event::End));
    let s = IntervalSeq { events };
    debug_assert!(order_of_sequence(&s).is_ok_and(|q| q == *p));
    Ok(s)
}

pub fn interval_rep(p: &Poset) -> Result<IntervalRep> {
    let s = canonical_trace(p)?;
    let n = p.size();
    let mut rep = IntervalRep {
        begin: vec![0; n],
        end: vec![0; n],
    };
    for (i, e) in s.events.iter().enumerate() {
        match *e {
            Event::Begin(x) => rep.begin[x] = i,
            Event::End(x) => rep.end[x] = i,
        }
    }
    Ok(rep)
}

/// The order induced by a closed sequence over points `0..k`.
pub fn order_of_sequence(s: &IntervalSeq) -> Result<Poset> {
    if let Some(point) = s.open_point() {
        return Err(Error::NotClosed { point });
    }
    let begun = s.begun();
    let n = begun.len();
    if begun != PointSet::full(n) {
        return Err(Error::InvalidSequence(format!("points are not numbered 0..{n}")));
    }
    let mut rows = vec![0u64; n];
    let mut ended = PointSet::EMPTY;
    for e in &s.events {
        match *e {
            Event::Begin(y) => {
                for x in ended.iter() {
                    rows[x] |= 1 << y;
                }
            }
            Event::End(x) => ended.insert(x),
        }
    }
    Ok(Poset::from_closed_rows(rows))
}

/// Every sequence one commuting swap away: two adjacent begins or two
/// adjacent ends exchanged.
pub fn approx_neighbors(s: &IntervalSeq) -> BTreeSet<IntervalSeq> {
    let mut out = BTreeSet::new();
    for i in 0..s.events.len().saturating_sub(1) {
        let (a, b) = (s.events[i], s.events[i + 1]);
        if a.is_begin() == b.is_begin() && a != b {
            let mut events = s.events.clone();
            events.swap(i, i + 1);
            out.insert(IntervalSeq { events });
        }
    }
    out
}

pub fn same_trace(a: &IntervalSeq, b: &IntervalSeq) -> bool {
    a.normal_form() == b.normal_form()
}

/// Every sequence in the trace class of `s`, by breadth-first closure under
/// [`approx_neighbors`].
pub fn trace_class(s: &IntervalSeq) -> BTreeSet<IntervalSeq> {
    let mut seen = BTreeSet::new();
    seen.insert(s.clone());
    let mut frontier = vec![s.clone()];
    while let Some(t) = frontier.pop() {
        for u in approx_neighbors(&t) {
            if seen.insert(u.clone()) {
                frontier.push(u);
            }
        }
    }
    seen
}

/// All closed sequences over the points of `p` whose induced order is `p`
/// itself, by exhaustive search.
pub fn all_sequences(p: &Poset) -> Result<BTreeSet<IntervalSeq>> {
    if p.size() > MAX_BRUTE_FORCE {
        return Err(Error::TooLarge {
            size: p.size(),
            max: MAX_BRUTE_FORCE,
        });
    }
    if !is_interval_order(p) {
        return Err(Error::NotIntervalOrder);
    }
    let mut out = BTreeSet::new();
    let mut events = Vec::with_capacity(2 * p.size());
    extend_sequences(p, &mut events, PointSet::EMPTY, PointSet::EMPTY, &mut out);
    Ok(out)
}

fn extend_sequences(
    p: &Poset,
    events: &mut Vec<Event>,
    begun: PointSet,
    ended: PointSet,
    out: &mut BTreeSet<IntervalSeq>,
) {
    if ended.len() == p.size() {
        out.insert(IntervalSeq { events: events.clone() });
        return;
    }
    // `y` may begin exactly when the ended points are its predecessors.
    for y in p.points().difference(begun).iter() {
        if p.predecessors(y) == ended {
            events.push(Event::Begin(y));
            let mut b = begun;
            b.insert(y);
            extend_sequences(p, events, b, ended, out);
            events.pop();
        }
    }
    for x in begun.difference(ended).iter() {
        events.push(Event::End(x));
        let mut e = ended;
        e.insert(x);
        extend_sequences(p, events, begun, e, out);
        events.pop();
    }
}

/// Concatenates the sequences of two glued operands. The `i`-th left target
/// and `i`-th right source become one interval: its end is dropped from the
/// left part and its begin from the right part. Points are named as in
/// [`Iposet::glue`]: left points keep their indices, the remaining right
/// points follow in ascending order.
pub fn glue_sequences(
    left: &IntervalSeq,
    right: &IntervalSeq,
    left_targets: &[usize],
    right_sources: &[usize],
) -> Result<IntervalSeq> {
    if left_targets.len() != right_sources.len() {
        return Err(Error::InterfaceMismatch {
            left_targets: left_targets.len(),
            right_sources: right_sources.len(),
        });
    }
    for s in [left, right] {
        if let Some(point) = s.open_point() {
            return Err(Error::NotClosed { point });
        }
    }
    let left_points = left.begun();
    let right_points = right.begun();
    if let Some(&x) = left_targets.iter().find(|&&x| !left_points.contains(x)) {
        return Err(Error::InvalidSequence(format!("left sequence has no point {x}")));
    }
    if let Some(&x) = right_sources.iter().find(|&&x| !right_points.contains(x)) {
        return Err(Error::InvalidSequence(format!("right sequence has no point {x}")));
    }
    let offset = left_points.len();
    let glued: PointSet = right_sources.iter().copied().collect();
    let mut rename = vec![usize::MAX; right_points.iter().max().map_or(0, |m| m + 1)];
    for (&t, &s) in left_targets.iter().zip(right_sources) {
        rename[s] = t;
    }
    for (rank, y) in right_points.difference(glued).iter().enumerate() {
        rename[y] = offset + rank;
    }
    let dropped_ends: PointSet = left_targets.iter().copied().collect();
    let mut events: Vec<Event> = left
        .events
        .iter()
        .copied()
        .filter(|e| !matches!(*e, Event::End(x) if dropped_ends.contains(x)))
        .collect();
    events.extend(right.events.iter().filter_map(|e| match *e {
        Event::Begin(y) if glued.contains(y) => None,
        Event::Begin(y) => Some(Event::Begin(rename[y])),
        Event::End(y) => Some(Event::End(rename[y])),
    }));
    IntervalSeq::new(events)
}

/// Writes an interval iposet as a gluing chain of discrete iposets, one per
/// maximal antichain, each interface being the overlap of neighbouring
/// antichains.
///
/// Points within each factor are listed in one global order that extends both
/// interface orders; if the source and target sequences order two points
/// inconsistently, no such chain exists.
pub fn c2_decompose(p: &Iposet) -> Result<GpTerm> {
    let q = p.poset();
    if q.is_empty() {
        return Ok(GpTerm::Empty);
    }
    let chains = max_antichains(q).map_err(|_| Error::NotIntervalOrder)?;
    let order = interface_order(p)?;
    let position = {
        let mut pos = vec![0; q.size()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        pos
    };
    let source = p.source_set();
    let target = p.target_set();
    let k = chains.len();
    let mut factors = Vec::with_capacity(k);
    for (i, &a) in chains.iter().enumerate() {
        let incoming = if i == 0 { source } else { chains[i - 1].intersection(a) };
        let outgoing = if i + 1 == k {
            target
        } else {
            chains[i + 1].intersection(a)
        };
        let mut members = a.to_vec();
        members.sort_by_key(|&x| position[x]);
        let leaves = members
            .into_iter()
            .map(|x| GpTerm::leaf(incoming.contains(x), outgoing.contains(x)));
        factors.push(GpTerm::par_all(leaves));
    }
    Ok(if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        GpTerm::Glue(factors)
    })
}

/// A linear order of all points extending the source sequence and the target
/// sequence, ties broken by least index.
fn interface_order(p: &Iposet) -> Result<Vec<usize>> {
    let n = p.size();
    let mut before = vec![PointSet::EMPTY; n];
    for seq in [p.source(), p.target()] {
        for (i, &x) in seq.iter().enumerate() {
            for &y in &seq[i + 1..] {
                before[y].insert(x);
            }
        }
    }
    let mut placed = PointSet::EMPTY;
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&y| !placed.contains(y) && before[y].is_subset(placed));
        match next {
            Some(y) => {
                placed.insert(y);
                order.push(y);
            }
            None => {
                let (first, second) = crossing_pair(p);
                return Err(Error::InterfaceCrossing { first, second });
            }
        }
    }
    Ok(order)
}

fn crossing_pair(p: &Iposet) -> (usize, usize) {
    let pos_in = |seq: &[usize], x: usize| seq.iter().position(|&z| z == x);
    for &x in p.source() {
        for &y in p.source() {
            if let (Some(i), Some(j), Some(k), Some(l)) = (
                pos_in(p.source(), x),
                pos_in(p.source(), y),
                pos_in(p.target(), x),
                pos_in(p.target(), y),
            ) {
                if i < j && k > l {
                    return (x, y);
                }
            }
        }
    }
    unreachable!("two total orders on the same points can only conflict pairwise")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::n;

    fn seq(s: &str) -> IntervalSeq {
        s.parse().unwrap()
    }

    #[test]
    fn recognition() {
        assert!(is_interval_order(&n()));
        assert!(!is_interval_order(&two_two()));
        assert!(is_interval_order(&Poset::empty()));
    }

    #[test]
    fn antichains_of_n() {
        let (a, b, c, d) = (0, 1, 2, 3);
        let expect: Vec<PointSet> = vec![
            [a, c].into_iter().collect(),
            [a, d].into_iter().collect(),
            [b, d].into_iter().collect(),
        ];
        assert_eq!(max_antichains(&n()).unwrap(), expect);
        assert_eq!(
            max_antichains(&Poset::chain(2)).unwrap(),
            vec![PointSet::singleton(0), PointSet::singleton(1)]
        );
        assert!(matches!(max_antichains(&two_two()), Err(Error::NotLinear { .. })));
    }

    #[test]
    fn trace_of_n() {
        // a=0 b=1 c=2 d=3: b(a) b(c) e(c) b(d) e(a) b(b) e(b) e(d)
        assert_eq!(canonical_trace(&n()).unwrap(), seq("b0 b2 e2 b3 e0 b1 e1 e3"));
        assert_eq!(canonical_trace(&Poset::discrete(1)).unwrap(), seq("b0 e0"));
        assert_eq!(canonical_trace(&Poset::discrete(2)).unwrap(), seq("b0 b1 e0 e1"));
        assert_eq!(canonical_trace(&two_two()), Err(Error::NotIntervalOrder));
        assert!(interval_rep(&n()).unwrap().represents(&n()));
    }

    #[test]
    fn sequence_orders() {
        assert_eq!(order_of_sequence(&seq("b0 e0 b1 e1")).unwrap(), Poset::chain(2));
        assert_eq!(order_of_sequence(&seq("b0 b1 e0 e1")).unwrap(), Poset::discrete(2));
        assert_eq!(order_of_sequence(&seq("b0 b1 e0")), Err(Error::NotClosed { point: 1 }));
        assert!(order_of_sequence(&seq("b0 e0 b2 e2")).is_err());
    }

    #[test]
    fn invalid_sequences() {
        assert!("e0 b0".parse::<IntervalSeq>().is_err());
        assert!("b0 b0".parse::<IntervalSeq>().is_err());
        assert!("b0 e0 e0".parse::<IntervalSeq>().is_err());
        assert!("x0".parse::<IntervalSeq>().is_err());
        assert!("b".parse::<IntervalSeq>().is_err());
        assert_eq!(seq("b0  b1 e0 e1").to_string(), "b0 b1 e0 e1");
    }

    #[test]
    fn traces() {
        let s = seq("b0 b1 e0 e1");
        assert!(same_trace(&s, &seq("b1 b0 e0 e1")));
        assert!(!same_trace(&seq("b0 e0 b1 e1"), &seq("b1 b0 e0 e1")));
        assert!(same_trace(&s, &s));
        assert_eq!(approx_neighbors(&s).len(), 2);
        assert_eq!(trace_class(&s).len(), 4);
    }

    #[test]
    fn brute_force_sequences() {
        let one = all_sequences(&Poset::discrete(1)).unwrap();
        assert_eq!(one.into_iter().collect::<Vec<_>>(), vec![seq("b0 e0")]);
        let two = all_sequences(&Poset::discrete(2)).unwrap();
        assert_eq!(two, trace_class(&seq("b0 b1 e0 e1")));
        assert_eq!(two.len(), 4);
        assert!(matches!(
            all_sequences(&Poset::discrete(6)),
            Err(Error::TooLarge { size: 6, max: 5 })
        ));
    }

    #[test]
    fn gluing_with_empty_interface_is_serial() {
        let l = canonical_trace(&Poset::discrete(2)).unwrap();
        let r = canonical_trace(&Poset::chain(2)).unwrap();
        let g = glue_sequences(&l, &r, &[], &[]).unwrap();
        let expect = Poset::discrete(2).serial(&Poset::chain(2));
        assert_eq!(order_of_sequence(&g).unwrap(), expect);
        assert!(glue_sequences(&l, &r, &[0], &[]).is_err());
    }

    #[test]
    fn c2_chain_for_n() {
        let t = c2_decompose(&Iposet::embed(&n())).unwrap();
        // {a,c} -> {a,d} -> {b,d}, overlaps {a} then {d}
        assert_eq!(t.to_string(), "(.> || .) * (>. || .>) * (. || >.)");
        assert!(t.eval().unwrap().iso(&Iposet::embed(&n())));
        let one = c2_decompose(&Iposet::embed(&Poset::discrete(1))).unwrap();
        assert_eq!(one, GpTerm::leaf(false, false));
        assert_eq!(c2_decompose(&Iposet::embed(&two_two())), Err(Error::NotIntervalOrder));
    }

    #[test]
    fn c2_respects_interfaces() {
        let id = Iposet::identity(2);
        let t = c2_decompose(&id).unwrap();
        assert_eq!(t.eval().unwrap(), id);
        let swap = Iposet::symmetry(&[1, 0]).unwrap();
        assert!(matches!(c2_decompose(&swap), Err(Error::InterfaceCrossing { .. })));
    }
}
