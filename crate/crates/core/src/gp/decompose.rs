//! Memoized search for gluing-parallel terms.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use super::split::{glue_splits, par_splits};
use super::term::GpTerm;
use crate::canon::CanonForm;
use crate::iposet::Iposet;
use crate::patterns::{find_induced, Forbidden};
use crate::poset::Poset;

/// Search results keyed by canonical form, failures included.
#[derive(Default)]
pub struct DecompCache {
    map: RwLock<HashMap<CanonForm, Option<GpTerm>>>,
}

impl DecompCache {
    pub fn get(&self, key: &CanonForm) -> Option<Option<GpTerm>> {
        self.map.read().unwrap().get(key).cloned()
    }

    /// Inserts unless present; returns the stored value.
    pub fn insert(&self, key: CanonForm, value: Option<GpTerm>) -> Option<GpTerm> {
        self.map.write().unwrap().entry(key).or_insert(value).clone()
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().unwrap().clear();
    }
}

/// Gluing-parallel decomposition search with a shared cache.
///
/// The search works on canonical representatives, so its answer depends only
/// on the isomorphism class of the input and never on thread scheduling.
#[derive(Default)]
pub struct Decomposer {
    cache: DecompCache,
    use_filter: bool,
}

impl Decomposer {
    pub fn new() -> Decomposer {
        Decomposer::default()
    }

    /// Rejects inputs containing a forbidden subposet before searching.
    pub fn with_filter(mut self, on: bool) -> Decomposer {
        self.use_filter = on;
        self
    }

    pub fn cache(&self) -> &DecompCache {
        &self.cache
    }

    /// A term evaluating to an iposet isomorphic to `p`, if one exists.
    pub fn decompose(&self, p: &Iposet) -> Option<GpTerm> {
        let t = self.lookup(p);
        if let Some(t) = &t {
            let back = t.eval().expect("search produces well-formed terms");
            assert!(back.iso(p), "term {t} does not evaluate to its input");
        }
        t
    }

    fn lookup(&self, p: &Iposet) -> Option<GpTerm> {
        let key = p.canonical_form();
        if let Some(hit) = self.cache.get(&key) {
            return hit;
        }
        let rep = key.to_iposet();
        let found = self.search(&rep);
        self.cache.insert(key, found)
    }

    fn search(&self, p: &Iposet) -> Option<GpTerm> {
        match p.size() {
            0 => return Some(GpTerm::Empty),
            1 => {
                return Some(GpTerm::leaf(p.source_arity() == 1, p.target_arity() == 1));
            }
            _ => {}
        }
        if self.use_filter && forbidden_filter(p.poset()).is_some() {
            return None;
        }
        let mut found = None;
        let mut try_pair = |a: Iposet, b: Iposet, glue: bool| {
            let Some(ta) = self.lookup(&a) else { return false };
            let Some(tb) = self.lookup(&b) else { return false };
            found = Some(if glue {
                GpTerm::glue(ta, tb)
            } else {
                GpTerm::par(ta, tb)
            });
            true
        };
        if par_splits(p, |a, b| try_pair(a, b, false)) {
            return found;
        }
        if glue_splits(p, |a, b| try_pair(a, b, true)) {
            return found;
        }
        None
    }
}

fn shared() -> &'static Decomposer {
    static SHARED: OnceLock<Decomposer> = OnceLock::new();
    SHARED.get_or_init(Decomposer::new)
}

/// Decomposition with a process-wide cache and no forbidden-pattern filter.
pub fn gp_decompose(p: &Iposet) -> Option<GpTerm> {
    shared().decompose(p)
}

pub fn is_gp_poset(p: &Poset) -> bool {
    gp_decompose(&Iposet::embed(p)).is_some()
}

/// The first forbidden pattern occurring as an induced subposet of `p`.
pub fn forbidden_filter(p: &Poset) -> Option<Forbidden> {
    Forbidden::ALL
        .into_iter()
        .find(|f| find_induced(p, &f.poset()).is_some())
}

/// `P_1` is the 2-chain, `P_{n+1}` a point below two copies of `P_n`.
pub fn witness_pn(n: usize) -> Poset {
    assert!(n >= 1, "witness family starts at 1");
    let mut p = Poset::chain(2);
    for _ in 1..n {
        p = Poset::discrete(1).serial(&p.parallel(&p));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{n, nn, two_two};
    use crate::sp::is_sp;

    #[test]
    fn n_is_gp() {
        let t = gp_decompose(&Iposet::embed(&n())).unwrap();
        assert!(t.eval().unwrap().iso(&Iposet::embed(&n())));
    }

    #[test]
    fn crossing_symmetry_is_not_gp() {
        assert_eq!(gp_decompose(&Iposet::symmetry(&[1, 0]).unwrap()), None);
        assert!(gp_decompose(&Iposet::identity(2)).is_some());
    }

    #[test]
    fn forbidden_posets_are_not_gp() {
        for f in Forbidden::ALL {
            assert!(!is_gp_poset(&f.poset()), "{}", f.name());
        }
        let filtered = Decomposer::new().with_filter(true);
        assert_eq!(filtered.decompose(&Iposet::embed(&nn())), None);
        assert!(filtered.decompose(&Iposet::embed(&n())).is_some());
    }

    #[test]
    fn two_two_is_parallel() {
        let t = gp_decompose(&Iposet::embed(&two_two())).unwrap();
        assert!(matches!(t, GpTerm::Par(_)));
        assert!(is_gp_poset(&Poset::empty()));
    }

    #[test]
    fn filter_hits() {
        assert_eq!(forbidden_filter(&nn()), Some(Forbidden::NN));
        assert_eq!(forbidden_filter(&n()), None);
        for f in Forbidden::ALL {
            assert_eq!(forbidden_filter(&f.poset()), Some(f));
        }
    }

    #[test]
    fn witness_sizes() {
        assert_eq!(witness_pn(1), Poset::chain(2));
        let p2 = witness_pn(2);
        assert_eq!(p2.size(), 5);
        assert_eq!(p2.minima().len(), 1);
        assert_eq!(p2.maxima().len(), 2);
        let sizes: Vec<usize> = (1..=4).map(|k| witness_pn(k).size()).collect();
        assert_eq!(sizes, vec![2, 5, 11, 23]);
        assert!((1..=4).all(|k| is_sp(&witness_pn(k))));
    }
}
