use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::collection::vec;
use proptest::prelude::*;

use iposet::enumerate::{all_iposets, burnside_count, extend_by_maximal, gp_closure};
use iposet::gp::{forbidden_filter, gp_decompose, is_gp_poset, level_membership, Tower};
use iposet::interval::{
    all_sequences, c2_decompose, canonical_trace, interval_rep, is_interval_order, max_antichains, order_of_sequence,
    trace_class,
};
use iposet::patterns::{find_induced, two_two};
use iposet::{CanonForm, Forbidden, Iposet, PointSet, Poset};

const CASES: u32 = 10_000;

fn closure_to_five() -> &'static [CanonForm] {
    static CLOSURE: OnceLock<Vec<CanonForm>> = OnceLock::new();
    CLOSURE.get_or_init(|| gp_closure(5).unwrap())
}

/// All iposets (or source-only iposets) on `0..=4` points, by size.
fn iposets_to_four(targets: bool) -> &'static [Vec<CanonForm>] {
    static ALL: OnceLock<[Vec<Vec<CanonForm>>; 2]> = OnceLock::new();
    let all = ALL.get_or_init(|| [false, true].map(|t| (0..=4).map(|n| all_iposets(n, t).unwrap()).collect()));
    &all[usize::from(targets)]
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        ..ProptestConfig::default()
    }
}

/// Random order on `n` points: `i < j` for `i < j` in index order when the
/// matching bit is set, then scrambled by `perm`.
fn build_poset(n: usize, bits: &[bool], perm: &[usize]) -> Poset {
    let mut pairs = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits[k] {
                pairs.push((perm[i], perm[j]));
            }
            k += 1;
        }
    }
    Poset::new(n, &pairs).unwrap()
}

/// Picks the extremal points whose key is odd, ordered by key.
fn pick(extremal: PointSet, keys: &[u8]) -> Vec<usize> {
    let mut chosen: Vec<usize> = extremal.iter().filter(|&x| keys[x] % 2 == 1).collect();
    chosen.sort_by_key(|&x| (keys[x], x));
    chosen
}

fn poset_upto(max: usize) -> impl Strategy<Value = Poset> {
    (0..=max).prop_flat_map(|n| {
        (
            Just(n),
            vec(any::<bool>(), n * n.saturating_sub(1) / 2),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(|(n, bits, perm)| build_poset(n, &bits, &perm))
    })
}

fn iposet_upto(max: usize) -> impl Strategy<Value = Iposet> {
    (0..=max).prop_flat_map(|n| {
        (
            Just(n),
            vec(any::<bool>(), n * n.saturating_sub(1) / 2),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            vec(any::<u8>(), n),
            vec(any::<u8>(), n),
        )
            .prop_map(|(n, bits, perm, s, t)| {
                let p = build_poset(n, &bits, &perm);
                let (source, target) = (pick(p.minima(), &s), pick(p.maxima(), &t));
                Iposet::new(p, source, target).unwrap()
            })
    })
}

/// An iposet together with a permutation of its points.
fn relabeled(max: usize) -> impl Strategy<Value = (Iposet, Vec<usize>)> {
    iposet_upto(max).prop_flat_map(|p| {
        let n = p.size();
        (Just(p), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// Same points and order as `q`, with exactly `k` sources: the existing ones
/// first, then further minima, then fresh isolated points.
fn with_sources(q: &Iposet, k: usize) -> Iposet {
    let mut order: Vec<usize> = q.source().to_vec();
    order.extend(q.poset().minima().iter().filter(|x| !q.source().contains(x)));
    let extra = k.saturating_sub(order.len());
    let poset = q.poset().parallel(&Poset::discrete(extra));
    order.extend(q.size()..q.size() + extra);
    order.truncate(k);
    Iposet::new(poset, order, q.target().to_vec()).unwrap()
}

fn composable(max: usize) -> impl Strategy<Value = (Iposet, Iposet)> {
    (iposet_upto(max), iposet_upto(max)).prop_map(|(p, q)| {
        let q = with_sources(&q, p.target_arity());
        (p, q)
    })
}

/// Isomorphism by trying every bijection.
fn brute_iso(a: &Iposet, b: &Iposet) -> bool {
    fn go(a: &Iposet, b: &Iposet, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = perm.len();
        if k == a.size() {
            return a.relabel(perm) == *b;
        }
        for y in 0..a.size() {
            if used[y] {
                continue;
            }
            perm.push(y);
            used[y] = true;
            if go(a, b, perm, used) {
                return true;
            }
            used[y] = false;
            perm.pop();
        }
        false
    }
    a.size() == b.size() && go(a, b, &mut Vec::new(), &mut vec![false; a.size()])
}

/// A weaker order on the same points: a random subset of the relation,
/// closed again.
fn weaken(p: &Iposet, keep: &[bool]) -> Iposet {
    let pairs: Vec<(usize, usize)> = p
        .poset()
        .relation()
        .into_iter()
        .zip(keep.iter().cycle())
        .filter(|(_, &k)| k)
        .map(|(e, _)| e)
        .collect();
    let q = Poset::new(p.size(), &pairs).unwrap();
    Iposet::new(q, p.source().to_vec(), p.target().to_vec()).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn canonical_form_is_relabeling_invariant((p, perm) in relabeled(7)) {
        let q = p.relabel(&perm);
        prop_assert_eq!(p.canonical_form(), q.canonical_form());
        prop_assert!(q.iso(&p));
        prop_assert!(p.canonical_form().to_iposet().iso(&p));
    }

    #[test]
    fn canonical_form_separates_classes(a in iposet_upto(4), b in iposet_upto(4)) {
        prop_assert_eq!(a.canonical_form() == b.canonical_form(), brute_iso(&a, &b));
    }

    #[test]
    fn canonical_form_bytes_round_trip(p in iposet_upto(7)) {
        let c = p.canonical_form();
        let back = CanonForm::from_bytes(c.as_bytes().to_vec()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_iposet().canonical_form(), c);
    }

    #[test]
    fn composition_respects_iso((p, q, sp, sq) in composable(4).prop_flat_map(|(p, q)| {
        let (m, n) = (p.size(), q.size());
        (
            Just(p),
            Just(q),
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
    })) {
        let (p2, q2) = (p.relabel(&sp), q.relabel(&sq));
        prop_assert!(p.glue(&q).unwrap().iso(&p2.glue(&q2).unwrap()));
        prop_assert!(p.par(&q).iso(&p2.par(&q2)));
    }

    #[test]
    fn glue_is_associative_with_units((p, q) in composable(3), r in iposet_upto(3)) {
        let r = with_sources(&r, q.target_arity());
        let left = p.glue(&q).unwrap().glue(&r).unwrap();
        let right = p.glue(&q.glue(&r).unwrap()).unwrap();
        prop_assert!(left.iso(&right));
        prop_assert!(Iposet::identity(p.source_arity()).glue(&p).unwrap().iso(&p));
        prop_assert!(p.glue(&Iposet::identity(p.target_arity())).unwrap().iso(&p));
    }

    #[test]
    fn par_is_associative_and_commutes_on_orders(p in iposet_upto(3), q in iposet_upto(3), r in iposet_upto(3)) {
        prop_assert!(p.par(&q).par(&r).iso(&p.par(&q.par(&r))));
        prop_assert!(p.par(&Iposet::empty()).iso(&p) && Iposet::empty().par(&p).iso(&p));
        prop_assert!(p.par(&q).forget().isomorphic(&q.par(&p).forget()));
    }

    #[test]
    fn subsumption_is_a_preorder(
        p in iposet_upto(6),
        k1 in vec(any::<bool>(), 1..8),
        k2 in vec(any::<bool>(), 1..8),
        perm_seed in any::<u64>(),
    ) {
        let q = weaken(&p, &k1);
        let r = weaken(&q, &k2);
        let mut perm: Vec<usize> = (0..p.size()).collect();
        perm.rotate_left(if p.size() == 0 { 0 } else { (perm_seed % p.size() as u64) as usize });
        let r = r.relabel(&perm);
        prop_assert!(p.subsumes(&p));
        prop_assert!(p.subsumes(&q));
        prop_assert!(q.subsumes(&r));
        prop_assert!(p.subsumes(&r));
        if r.subsumes(&p) {
            prop_assert!(r.iso(&p));
        }
    }

    #[test]
    fn subsumption_is_antisymmetric(a in iposet_upto(4), b in iposet_upto(4)) {
        if a.subsumes(&b) && b.subsumes(&a) {
            prop_assert!(a.iso(&b));
        }
    }

    #[test]
    fn forbidden_pattern_blocks_gp(
        which in 0..5usize,
        below in any::<u64>(),
        perm in Just((0..7).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let f = Forbidden::ALL[which].poset();
        let down = PointSet(below & 0x3f);
        let closed = down.iter().fold(down, |acc, x| acc.union(f.predecessors(x)));
        let host = extend_by_maximal(&f, closed).relabel(&perm);
        prop_assert!(forbidden_filter(&host).is_some());
        prop_assert!(!is_gp_poset(&host));
    }

    #[test]
    fn gp_posets_on_six_points_avoid_exactly_the_patterns(p in poset_upto(6)) {
        prop_assert_eq!(is_gp_poset(&p), forbidden_filter(&p).is_none());
    }

    #[test]
    fn decomposition_terms_evaluate_back(p in iposet_upto(5)) {
        if let Some(t) = gp_decompose(&p) {
            prop_assert!(t.eval().unwrap().iso(&p));
            let reparsed: iposet::GpTerm = t.to_string().parse().unwrap();
            prop_assert!(reparsed.eval().unwrap().iso(&p));
        }
    }

    #[test]
    fn interval_characterizations_agree(p in poset_upto(6)) {
        let interval = is_interval_order(&p);
        prop_assert_eq!(interval, find_induced(&p, &two_two()).is_none());
        prop_assert_eq!(interval, interval_rep(&p).map(|r| r.represents(&p)).unwrap_or(false));
        prop_assert_eq!(interval, max_antichains(&p).is_ok());
    }

    #[test]
    fn trace_round_trips(p in poset_upto(6)) {
        if let Ok(seq) = canonical_trace(&p) {
            prop_assert!(order_of_sequence(&seq).unwrap().isomorphic(&p));
            prop_assert_eq!(seq.normal_form(), seq.clone());
        }
    }

    #[test]
    fn sequences_of_an_order_form_one_trace(p in poset_upto(4)) {
        if let Ok(seq) = canonical_trace(&p) {
            prop_assert_eq!(all_sequences(&p).unwrap(), trace_class(&seq));
        } else {
            prop_assert!(all_sequences(&p).is_err());
        }
    }

    #[test]
    fn c2_on_posets_is_interval(p in poset_upto(6)) {
        let e = Iposet::embed(&p);
        let t = c2_decompose(&e);
        prop_assert_eq!(t.is_ok(), is_interval_order(&p));
        prop_assert_eq!(t.is_ok(), level_membership(&e, 2, Tower::C));
        if let Ok(t) = t {
            prop_assert!(t.eval().unwrap().iso(&e));
        }
    }

    #[test]
    fn c2_on_iposets_is_level_two(p in iposet_upto(4)) {
        let t = c2_decompose(&p);
        prop_assert_eq!(t.is_ok(), level_membership(&p, 2, Tower::C));
        if let Ok(t) = t {
            prop_assert!(t.eval().unwrap().iso(&p));
            prop_assert!(t.alternation_depth() <= 2);
        }
    }

    #[test]
    fn enumeration_contains_every_iposet(p in iposet_upto(4)) {
        let form = p.canonical_form();
        prop_assert!(iposets_to_four(true)[p.size()].binary_search(&form).is_ok());
        if p.target_arity() == 0 {
            prop_assert!(iposets_to_four(false)[p.size()].binary_search(&form).is_ok());
        }
    }

    #[test]
    fn search_agrees_with_closure(p in iposet_upto(5)) {
        let found = closure_to_five().binary_search(&p.canonical_form()).is_ok();
        prop_assert_eq!(gp_decompose(&p).is_some(), found);
    }
}

#[test]
fn burnside_matches_dedupe() {
    for n in 0..=4 {
        for targets in [false, true] {
            assert_eq!(
                burnside_count(n, targets).unwrap(),
                all_iposets(n, targets).unwrap().len() as u64,
                "n={n} targets={targets}"
            );
        }
    }
}

#[test]
fn closure_is_the_searchable_fragment() {
    let closure: HashSet<CanonForm> = gp_closure(4).unwrap().into_iter().collect();
    for n in 0..=4 {
        for c in all_iposets(n, true).unwrap() {
            assert_eq!(gp_decompose(&c.to_iposet()).is_some(), closure.contains(&c), "{c}");
        }
    }
}
