//! Exhaustive generation of posets, iposets and gluing-parallel iposets up to
//! isomorphism, and the count tables built from them.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::canon::CanonForm;
use crate::error::{Error, Result};
use crate::gp::{gp_decompose, is_gp_poset, GpTerm};
use crate::iposet::Iposet;
use crate::points::PointSet;
use crate::poset::Poset;
use crate::sp::is_sp;

/// Largest size the enumerators accept unless told otherwise.
pub const DEFAULT_BOUND: usize = 8;

/// Environment variable overriding the per-cell time budget, in seconds.
pub const BUDGET_ENV: &str = "IPOSET_CELL_BUDGET_SECS";

const DEFAULT_CELL_SECS: u64 = 900;

/// A cooperative wall-clock deadline.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    seconds: u64,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget {
            deadline: None,
            seconds: 0,
        }
    }

    pub fn seconds(seconds: u64) -> Budget {
        Budget {
            deadline: Some(Instant::now() + Duration::from_secs(seconds)),
            seconds,
        }
    }

    /// The per-cell budget, from [`BUDGET_ENV`] if set.
    pub fn per_cell() -> Budget {
        let secs = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_CELL_SECS);
        Budget::seconds(secs)
    }

    pub fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExhausted { seconds: self.seconds }),
            _ => Ok(()),
        }
    }
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        Err(Error::BoundExceeded { points: n, bound })
    } else {
        Ok(())
    }
}

fn poset_cache() -> &'static Mutex<HashMap<usize, Vec<CanonForm>>> {
    static CACHE: std::sync::OnceLock<Mutex<HashMap<usize, Vec<CanonForm>>>> = std::sync::OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// One canonical form per isomorphism class of posets on `n` points, sorted.
pub fn all_posets(n: usize) -> Result<Vec<CanonForm>> {
    all_posets_bounded(n, DEFAULT_BOUND)
}

pub fn all_posets_bounded(n: usize, bound: usize) -> Result<Vec<CanonForm>> {
    check_bound(n, bound)?;
    if let Some(hit) = poset_cache().lock().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let out = if n == 0 {
        vec![Poset::empty().canonical_form()]
    } else {
        let smaller = all_posets_bounded(n - 1, bound)?;
        let found: HashSet<CanonForm> = smaller
            .par_iter()
            .flat_map_iter(|c| {
                let p = c.to_poset();
                p.down_sets()
                    .into_iter()
                    .map(move |d| extend_by_maximal(&p, d).canonical_form())
            })
            .collect();
        let mut v: Vec<CanonForm> = found.into_iter().collect();
        v.sort();
        v
    };
    poset_cache().lock().unwrap().insert(n, out.clone());
    Ok(out)
}

/// `p` with one new point whose strict down-set is `below`.
pub fn extend_by_maximal(p: &Poset, below: PointSet) -> Poset {
    let n = p.size();
    let mut rows = p.rows().to_vec();
    for x in below.iter() {
        rows[x] |= 1 << n;
    }
    rows.push(0);
    Poset::from_closed_rows(rows)
}

/// Number of injective sequences drawn from `k` items.
fn arrangements(k: usize) -> u64 {
    let mut total = 0u64;
    let mut term = 1u64;
    for j in 0..=k {
        total += term;
        term *= (k - j) as u64;
    }
    total
}

/// All injective sequences over `items`, shortest first.
fn sequences(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..items.len() {
        let mut next = Vec::new();
        for s in &layer {
            for &x in items {
                if !s.contains(&x) {
                    let mut t: Vec<usize> = s.clone();
                    t.push(x);
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// One canonical form per isomorphism class of iposets on `n` points, sorted.
/// With `targets_allowed == false` every target interface is empty.
pub fn all_iposets(n: usize, targets_allowed: bool) -> Result<Vec<CanonForm>> {
    all_iposets_with(n, targets_allowed, DEFAULT_BOUND, Budget::unlimited())
}

pub fn all_iposets_with(n: usize, targets_allowed: bool, bound: usize, budget: Budget) -> Result<Vec<CanonForm>> {
    let posets = all_posets_bounded(n, bound)?;
    let per_poset: Vec<Vec<CanonForm>> = posets
        .par_iter()
        .map(|c| {
            budget.check()?;
            let p = c.to_poset();
            let srcs = sequences(&p.minima().to_vec());
            let tgts = if targets_allowed {
                sequences(&p.maxima().to_vec())
            } else {
                vec![Vec::new()]
            };
            let mut seen = HashSet::new();
            for s in &srcs {
                for t in &tgts {
                    let ip = Iposet::new(p.clone(), s.clone(), t.clone()).expect("interfaces drawn from extrema");
                    seen.insert(ip.canonical_form());
                }
                budget.check()?;
            }
            Ok(seen.into_iter().collect())
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<CanonForm> = per_poset.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

/// Number of iposet classes on `n` points by Burnside's lemma: decorations of
/// each poset counted as orbits of its automorphism group.
pub fn burnside_count(n: usize, targets_allowed: bool) -> Result<u64> {
    let posets = all_posets(n)?;
    let total: u64 = posets
        .par_iter()
        .map(|c| {
            let p = c.to_poset();
            let (minima, maxima) = (p.minima(), p.maxima());
            let group = p.automorphisms();
            let fixed: u64 = group
                .iter()
                .map(|g| {
                    let fixed_in = |set: PointSet| set.iter().filter(|&x| g[x] == x).count();
                    let t = if targets_allowed {
                        arrangements(fixed_in(maxima))
                    } else {
                        1
                    };
                    arrangements(fixed_in(minima)) * t
                })
                .sum();
            debug_assert_eq!(fixed % group.len() as u64, 0);
            fixed / group.len() as u64
        })
        .sum();
    Ok(total)
}

/// Every gluing-parallel iposet with at most `n` points, as sorted canonical
/// forms: the closure of the empty iposet and the four singletons under
/// gluing and parallel composition. Factors never have more points than
/// their product, so capping intermediate results at `n` loses nothing.
pub fn gp_closure(n: usize) -> Result<Vec<CanonForm>> {
    gp_closure_with(n, DEFAULT_BOUND, Budget::unlimited())
}

pub fn gp_closure_with(n: usize, bound: usize, budget: Budget) -> Result<Vec<CanonForm>> {
    check_bound(n, bound)?;
    let mut items: Vec<Iposet> = Vec::new();
    let mut known: HashSet<CanonForm> = HashSet::new();
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut by_target: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];

    let mut add = |p: Iposet,
                   form: CanonForm,
                   items: &mut Vec<Iposet>,
                   by_source: &mut HashMap<usize, Vec<usize>>,
                   by_target: &mut HashMap<usize, Vec<usize>>,
                   by_size: &mut Vec<Vec<usize>>| {
        if known.insert(form) {
            let i = items.len();
            by_source.entry(p.source_arity()).or_default().push(i);
            by_target.entry(p.target_arity()).or_default().push(i);
            by_size[p.size()].push(i);
            items.push(p);
        }
    };

    let mut seeds = vec![Iposet::empty()];
    if n >= 1 {
        seeds.extend(Iposet::singletons());
    }
    for s in seeds {
        let f = s.canonical_form();
        add(
            f.to_iposet(),
            f,
            &mut items,
            &mut by_source,
            &mut by_target,
            &mut by_size,
        );
    }

    let mut i = 0;
    while i < items.len() {
        budget.check()?;
        let x = items[i].clone();
        let mut partners: Vec<(usize, bool)> = Vec::new();
        // (j, glue?) for every earlier-or-equal partner that fits the cap;
        // both operand orders are tried below.
        for size in 0..=n.saturating_sub(x.size()) {
            partners.extend(by_size[size].iter().filter(|&&j| j <= i).map(|&j| (j, false)));
        }
        for (arity_map, want) in [(&by_source, x.target_arity()), (&by_target, x.source_arity())] {
            if let Some(js) = arity_map.get(&want) {
                partners.extend(js.iter().filter(|&&j| j <= i).map(|&j| (j, true)));
            }
        }
        let products: Vec<(Iposet, CanonForm)> = partners
            .par_iter()
            .flat_map_iter(|&(j, glue)| {
                let y = &items[j];
                let mut out = Vec::with_capacity(2);
                if glue {
                    for (a, b) in [(&x, y), (y, &x)] {
                        if a.target_arity() == b.source_arity() && a.size() + b.size() - a.target_arity() <= n {
                            out.push(a.glue(b).expect("arities checked"));
                        }
                    }
                } else {
                    out.push(x.par(y));
                    out.push(y.par(&x));
                }
                out.into_iter().map(|p| {
                    let f = p.canonical_form();
                    (f.to_iposet(), f)
                })
            })
            .collect();
        for (p, f) in products {
            add(p, f, &mut items, &mut by_source, &mut by_target, &mut by_size);
        }
        i += 1;
    }
    let mut out: Vec<CanonForm> = known.into_iter().collect();
    out.sort();
    Ok(out)
}

/// One row of the count table; `None` marks a cell that was not computed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountsRow {
    pub n: usize,
    pub posets: Option<u64>,
    pub sp: Option<u64>,
    pub gp: Option<u64>,
    pub gp_connected: Option<u64>,
    pub sip: Option<u64>,
    pub ip: Option<u64>,
    pub gpi: Option<u64>,
}

impl CountsRow {
    pub const COLUMNS: [&'static str; 7] = ["P", "SP", "GP", "GPC", "SIP", "IP", "GPI"];

    pub fn cells(&self) -> [Option<u64>; 7] {
        [
            self.posets,
            self.sp,
            self.gp,
            self.gp_connected,
            self.sip,
            self.ip,
            self.gpi,
        ]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    /// Also compute IP(5), SIP(6) and IP(6).
    pub stretch: bool,
    /// Largest `n` for which IP is computed without `stretch`.
    pub ip_limit: usize,
    /// Largest `n` for which SIP is computed without `stretch`.
    pub sip_limit: usize,
}

impl Default for TableOptions {
    fn default() -> TableOptions {
        TableOptions {
            stretch: false,
            ip_limit: 4,
            sip_limit: 5,
        }
    }
}

/// Counts of posets, series-parallel posets, gp-posets, connected gp-posets,
/// iposets with sources only, iposets and gp-iposets for `0..=max_n` points.
pub fn counts_table(max_n: usize, opts: TableOptions) -> Vec<CountsRow> {
    let (ip_limit, sip_limit) = if opts.stretch {
        (opts.ip_limit.max(6), opts.sip_limit.max(6))
    } else {
        (opts.ip_limit, opts.sip_limit)
    };
    let mut rows: Vec<CountsRow> = (0..=max_n)
        .map(|n| CountsRow {
            n,
            ..CountsRow::default()
        })
        .collect();
    for row in rows.iter_mut() {
        let n = row.n;
        let budget = Budget::per_cell();
        let Ok(posets) = all_posets(n) else { continue };
        row.posets = Some(posets.len() as u64);
        let reps: Vec<Poset> = posets.iter().map(CanonForm::to_poset).collect();
        row.sp = Some(reps.par_iter().filter(|p| is_sp(p)).count() as u64);
        let gp: Option<Vec<bool>> = reps
            .par_iter()
            .map(|p| budget.check().ok().map(|_| is_gp_poset(p)))
            .collect();
        if let Some(gp) = gp {
            row.gp = Some(gp.iter().filter(|&&b| b).count() as u64);
            row.gp_connected = Some(reps.iter().zip(&gp).filter(|(p, &g)| g && p.is_connected()).count() as u64);
        }
        if n <= sip_limit {
            row.sip = all_iposets_with(n, false, DEFAULT_BOUND, Budget::per_cell())
                .ok()
                .map(|v| v.len() as u64);
        }
        if n <= ip_limit {
            row.ip = all_iposets_with(n, true, DEFAULT_BOUND, Budget::per_cell())
                .ok()
                .map(|v| v.len() as u64);
        }
    }
    if let Ok(closure) = gp_closure_with(max_n, DEFAULT_BOUND, Budget::per_cell()) {
        for row in rows.iter_mut() {
            row.gpi = Some(closure.iter().filter(|c| c.size() == row.n).count() as u64);
        }
    } else {
        // Fill what fits: smaller caps are cheaper.
        for cap in (0..max_n).rev() {
            if let Ok(closure) = gp_closure_with(cap, DEFAULT_BOUND, Budget::per_cell()) {
                for row in rows.iter_mut().take(cap + 1) {
                    row.gpi = Some(closure.iter().filter(|c| c.size() == row.n).count() as u64);
                }
                break;
            }
        }
    }
    rows
}

/// A gluing-parallel term, or `None`, for every (connected) poset on `n`
/// points, ordered by canonical form.
pub fn decomposition_table(n: usize, connected_only: bool) -> Result<Vec<(CanonForm, Option<GpTerm>)>> {
    decomposition_table_bounded(n, connected_only, 6)
}

pub fn decomposition_table_bounded(
    n: usize,
    connected_only: bool,
    bound: usize,
) -> Result<Vec<(CanonForm, Option<GpTerm>)>> {
    check_bound(n, bound)?;
    let posets = all_posets(n)?;
    Ok(posets
        .into_par_iter()
        .filter_map(|c| {
            let p = c.to_poset();
            if connected_only && !p.is_connected() {
                return None;
            }
            let t = gp_decompose(&Iposet::embed(&p));
            Some((c, t))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| all_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
        assert!(matches!(
            all_posets_bounded(4, 3),
            Err(Error::BoundExceeded { points: 4, bound: 3 })
        ));
    }

    #[test]
    fn small_iposet_counts() {
        assert_eq!(all_iposets(1, true).unwrap().len(), 4);
        assert_eq!(all_iposets(2, true).unwrap().len(), 17);
        assert_eq!(all_iposets(2, false).unwrap().len(), 5);
        assert_eq!(all_iposets(0, true).unwrap().len(), 1);
    }

    #[test]
    fn burnside_matches_dedupe() {
        for n in 0..=3 {
            for t in [false, true] {
                assert_eq!(burnside_count(n, t).unwrap(), all_iposets(n, t).unwrap().len() as u64);
            }
        }
    }

    #[test]
    fn arrangement_counts() {
        assert_eq!(arrangements(0), 1);
        assert_eq!(arrangements(2), 5);
        assert_eq!(arrangements(3), 16);
        assert_eq!(sequences(&[3, 5, 8]).len(), 16);
    }

    #[test]
    fn closure_misses_only_the_crossing() {
        let closure = gp_closure(2).unwrap();
        let two: HashSet<CanonForm> = closure.iter().filter(|c| c.size() == 2).cloned().collect();
        assert_eq!(two.len(), 16);
        let all: HashSet<CanonForm> = all_iposets(2, true).unwrap().into_iter().collect();
        let missing: Vec<&CanonForm> = all.difference(&two).collect();
        assert_eq!(missing.len(), 1);
        assert!(missing[0].to_iposet().iso(&Iposet::symmetry(&[1, 0]).unwrap()));
    }

    #[test]
    fn table_to_three() {
        let rows = counts_table(3, TableOptions::default());
        let row = |n: usize| rows[n].cells().map(|c| c.unwrap());
        assert_eq!(row(0), [1; 7]);
        assert_eq!(row(3), [5, 5, 5, 3, 16, 86, 74]);
    }

    #[test]
    fn decomposition_rows() {
        let rows = decomposition_table(4, true).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|(_, t)| t.is_some()));
        assert!(decomposition_table(7, false).is_err());
    }
}
