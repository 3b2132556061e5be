//! Canonical labelings of posets and iposets.
//!
//! Points are first split into cells by an invariant key (interface
//! positions, up- and down-degree), then the partition is refined by counting
//! neighbours per cell until it stabilises. Non-singleton cells are broken by
//! individualizing each member in turn and refining again; every leaf of that
//! search tree is a full relabeling, and the canonical one is the leaf whose
//! relabeled successor rows are lexicographically least. Automorphisms found
//! along the way prune sibling branches that lie in the same orbit.

use std::fmt;

use crate::error::{Error, Result};
use crate::iposet::Iposet;
use crate::points::PointSet;
use crate::poset::Poset;

/// Byte encoding that is equal for two (i)posets exactly when they are
/// isomorphic.
///
/// Layout: `[n, #sources, #targets, sources.., targets.., rows..]` where every
/// row is the successor set of one point in little-endian bytes of width
/// `ceil(n / 8)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonForm(Vec<u8>);

impl CanonForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<CanonForm> {
        let c = CanonForm(bytes);
        let (_, source, target, rows) = c.decode()?;
        let poset = Poset::close(rows).map_err(|_| Error::MalformedCanon)?;
        Iposet::new(poset, source, target).map_err(|_| Error::MalformedCanon)?;
        Ok(c)
    }

    /// Number of points of the encoded (i)poset.
    pub fn size(&self) -> usize {
        self.0[0] as usize
    }

    fn encode(n: usize, source: &[usize], target: &[usize], rows: &[u64]) -> CanonForm {
        let width = n.div_ceil(8);
        let mut bytes = Vec::with_capacity(3 + source.len() + target.len() + n * width);
        bytes.push(n as u8);
        bytes.push(source.len() as u8);
        bytes.push(target.len() as u8);
        bytes.extend(source.iter().map(|&x| x as u8));
        bytes.extend(target.iter().map(|&x| x as u8));
        for &r in rows {
            bytes.extend_from_slice(&r.to_le_bytes()[..width]);
        }
        CanonForm(bytes)
    }

    fn decode(&self) -> Result<(usize, Vec<usize>, Vec<usize>, Vec<u64>)> {
        let b = &self.0;
        if b.len() < 3 {
            return Err(Error::MalformedCanon);
        }
        let (n, ns, nt) = (b[0] as usize, b[1] as usize, b[2] as usize);
        let width = n.div_ceil(8);
        if b.len() != 3 + ns + nt + n * width {
            return Err(Error::MalformedCanon);
        }
        let source = b[3..3 + ns].iter().map(|&x| x as usize).collect();
        let target = b[3 + ns..3 + ns + nt].iter().map(|&x| x as usize).collect();
        let rows = b[3 + ns + nt..]
            .chunks(width.max(1))
            .take(n)
            .map(|c| {
                let mut w = [0u8; 8];
                w[..c.len()].copy_from_slice(c);
                u64::from_le_bytes(w)
            })
            .collect();
        Ok((n, source, target, rows))
    }

    /// The canonical representative as an iposet.
    pub fn to_iposet(&self) -> Iposet {
        let (_, source, target, rows) = self.decode().expect("validated on construction");
        Iposet::new(Poset::close(rows).expect("canonical rows are acyclic"), source, target)
            .expect("canonical interfaces are valid")
    }

    /// The canonical representative's underlying poset.
    pub fn to_poset(&self) -> Poset {
        let (_, _, _, rows) = self.decode().expect("validated on construction");
        Poset::close(rows).expect("canonical rows are acyclic")
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonForm({})", self.to_hex())
    }
}

impl fmt::Display for CanonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Ranks `keys` into dense colours `0..k`, returning the colours and `k`.
fn rank<K: Ord + Clone>(keys: &[K]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let colors = keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect();
    (colors, sorted.len())
}

struct Engine<'a> {
    succ: &'a [u64],
    pred: Vec<u64>,
    n: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
    prune: bool,
    optimal: Vec<Vec<usize>>,
}

impl<'a> Engine<'a> {
    fn new(succ: &'a [u64], prune: bool) -> Self {
        let n = succ.len();
        let mut pred = vec![0u64; n];
        for (x, &row) in succ.iter().enumerate() {
            for y in PointSet(row).iter() {
                pred[y] |= 1 << x;
            }
        }
        Engine {
            succ,
            pred,
            n,
            best: None,
            generators: Vec::new(),
            prune,
            optimal: Vec::new(),
        }
    }

    /// Refines `colors` to the coarsest equitable partition below it.
    fn refine(&self, colors: &mut Vec<u32>, mut cells: usize) {
        let n = self.n;
        loop {
            let mut sigs: Vec<Vec<u32>> = Vec::with_capacity(n);
            for x in 0..n {
                let mut sig = vec![0u32; 1 + 2 * cells];
                sig[0] = colors[x];
                for y in PointSet(self.succ[x]).iter() {
                    sig[1 + colors[y] as usize] += 1;
                }
                for y in PointSet(self.pred[x]).iter() {
                    sig[1 + cells + colors[y] as usize] += 1;
                }
                sigs.push(sig);
            }
            let (next, k) = rank(&sigs);
            *colors = next;
            if k == cells {
                return;
            }
            cells = k;
        }
    }

    fn relabeled_rows(&self, lab: &[usize]) -> Vec<u64> {
        let mut rows = vec![0u64; self.n];
        for x in 0..self.n {
            let mut r = 0u64;
            for y in PointSet(self.succ[x]).iter() {
                r |= 1 << lab[y];
            }
            rows[lab[x]] = r;
        }
        rows
    }

    fn leaf(&mut self, colors: &[u32]) {
        let lab: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let rows = self.relabeled_rows(&lab);
        match &self.best {
            None => {
                self.best = Some((rows, lab.clone()));
                self.optimal = vec![lab];
            }
            Some((best_rows, best_lab)) => match rows.cmp(best_rows) {
                std::cmp::Ordering::Less => {
                    self.best = Some((rows, lab.clone()));
                    self.optimal = vec![lab];
                }
                std::cmp::Ordering::Equal => {
                    let mut inv = vec![0usize; self.n];
                    for (x, &l) in best_lab.iter().enumerate() {
                        inv[l] = x;
                    }
                    let g: Vec<usize> = lab.iter().map(|&l| inv[l]).collect();
                    if g.iter().enumerate().any(|(i, &gi)| i != gi) {
                        self.generators.push(g);
                    }
                    self.optimal.push(lab);
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Closure of `seed` under the found automorphisms that fix `path`.
    fn orbit_of(&self, seed: PointSet, path: &[usize]) -> PointSet {
        let gens: Vec<&Vec<usize>> = self
            .generators
            .iter()
            .filter(|g| path.iter().all(|&v| g[v] == v))
            .collect();
        let mut orbit = seed;
        loop {
            let mut next = orbit;
            for g in &gens {
                for x in orbit.iter() {
                    next.insert(g[x]);
                }
            }
            if next == orbit {
                return orbit;
            }
            orbit = next;
        }
    }

    fn visit(&mut self, mut colors: Vec<u32>, cells: usize, path: &mut Vec<usize>) {
        self.refine(&mut colors, cells);
        let k = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
        if k == self.n {
            self.leaf(&colors);
            return;
        }
        let mut counts = vec![0usize; k];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        let target = counts.iter().position(|&c| c > 1).unwrap() as u32;
        let members: Vec<usize> = (0..self.n).filter(|&x| colors[x] == target).collect();
        let mut explored = PointSet::EMPTY;
        for &x in &members {
            if self.prune && !explored.is_empty() && self.orbit_of(explored, path).contains(x) {
                continue;
            }
            let keys: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(y, &c)| 2 * c + u32::from(c == target && y != x))
                .collect();
            let (split, k2) = rank(&keys);
            path.push(x);
            self.visit(split, k2, path);
            path.pop();
            explored.insert(x);
        }
    }
}

fn run<'a>(succ: &'a [u64], keys: &[u64], prune: bool) -> Engine<'a> {
    let mut engine = Engine::new(succ, prune);
    let (colors, cells) = rank(keys);
    if succ.is_empty() {
        engine.best = Some((Vec::new(), Vec::new()));
        engine.optimal = vec![Vec::new()];
        return engine;
    }
    engine.visit(colors, cells, &mut Vec::new());
    engine
}

/// Invariant starting key of every point: interface positions first, then
/// degrees.
fn initial_keys(p: &Poset, source: &[usize], target: &[usize]) -> Vec<u64> {
    let n = p.size();
    let mut s_pos = vec![0xffffu64; n];
    let mut t_pos = vec![0xffffu64; n];
    for (i, &x) in source.iter().enumerate() {
        s_pos[x] = i as u64;
    }
    for (i, &x) in target.iter().enumerate() {
        t_pos[x] = i as u64;
    }
    let pred = p.pred_rows();
    (0..n)
        .map(|x| {
            s_pos[x] << 48 | t_pos[x] << 32 | (p.rows()[x].count_ones() as u64) << 16 | pred[x].count_ones() as u64
        })
        .collect()
}

/// Canonical labeling `old -> new` and the resulting form.
pub(crate) fn canonize(p: &Poset, source: &[usize], target: &[usize]) -> (CanonForm, Vec<usize>) {
    let keys = initial_keys(p, source, target);
    let engine = run(p.rows(), &keys, true);
    let (rows, lab) = engine.best.expect("search visits at least one leaf");
    let s: Vec<usize> = source.iter().map(|&x| lab[x]).collect();
    let t: Vec<usize> = target.iter().map(|&x| lab[x]).collect();
    (CanonForm::encode(p.size(), &s, &t, &rows), lab)
}

/// Every automorphism, as maps `x -> g[x]`, sorted.
pub(crate) fn automorphism_group(p: &Poset, source: &[usize], target: &[usize]) -> Vec<Vec<usize>> {
    let keys = initial_keys(p, source, target);
    let engine = run(p.rows(), &keys, false);
    let (_, best_lab) = engine.best.expect("search visits at least one leaf");
    let n = p.size();
    let mut inv = vec![0usize; n];
    for (x, &l) in best_lab.iter().enumerate() {
        inv[l] = x;
    }
    let mut group: Vec<Vec<usize>> = engine
        .optimal
        .iter()
        .map(|lab| lab.iter().map(|&l| inv[l]).collect())
        .collect();
    group.sort();
    group.dedup();
    group
}

impl Poset {
    pub fn canonical_form(&self) -> CanonForm {
        canonize(self, &[], &[]).0
    }

    /// Relabeling `old -> new` that takes this poset to its canonical
    /// representative.
    pub fn canonical_labeling(&self) -> Vec<usize> {
        canonize(self, &[], &[]).1
    }

    pub fn isomorphic(&self, other: &Poset) -> bool {
        self.size() == other.size()
            && self.relation_len() == other.relation_len()
            && self.canonical_form() == other.canonical_form()
    }

    /// The full automorphism group as point maps, sorted; the identity comes
    /// first.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        automorphism_group(self, &[], &[])
    }
}
