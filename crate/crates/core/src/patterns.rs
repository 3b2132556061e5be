//! Induced-subposet search and the named fixture posets.

use crate::points::PointSet;
use crate::poset::Poset;

/// Injective map from pattern points to host points with
/// `x < y ⇔ map[x] < map[y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn is_valid(&self, host: &Poset, pattern: &Poset) -> bool {
        let k = pattern.size();
        let image: PointSet = self.map.iter().copied().collect();
        self.map.len() == k
            && image.len() == k
            && self.map.iter().all(|&h| h < host.size())
            && (0..k).all(|x| (0..k).all(|y| pattern.lt(x, y) == host.lt(self.map[x], self.map[y])))
    }
}

/// The lexicographically least induced embedding of `pattern` into `host`,
/// assigning pattern points in index order and host points in ascending
/// order.
pub fn find_induced(host: &Poset, pattern: &Poset) -> Option<Embedding> {
    let k = pattern.size();
    if k > host.size() {
        return None;
    }
    let mut map = Vec::with_capacity(k);
    if extend(host, pattern, &mut map, PointSet::EMPTY) {
        Some(Embedding { map })
    } else {
        None
    }
}

fn extend(host: &Poset, pattern: &Poset, map: &mut Vec<usize>, used: PointSet) -> bool {
    let x = map.len();
    if x == pattern.size() {
        return true;
    }
    for h in 0..host.size() {
        if used.contains(h) {
            continue;
        }
        let consistent = map
            .iter()
            .enumerate()
            .all(|(z, &hz)| pattern.lt(z, x) == host.lt(hz, h) && pattern.lt(x, z) == host.lt(h, hz));
        if !consistent {
            continue;
        }
        map.push(h);
        let mut next = used;
        next.insert(h);
        if extend(host, pattern, map, next) {
            return true;
        }
        map.pop();
    }
    false
}

/// `a < b`, `c < b`, `c < d` as points `a=0, b=1, c=2, d=3`.
pub fn n() -> Poset {
    Poset::new(4, &[(0, 1), (2, 1), (2, 3)]).unwrap()
}

/// Two disjoint 2-chains `0 < 1`, `2 < 3`.
pub fn two_two() -> Poset {
    Poset::new(4, &[(0, 1), (2, 3)]).unwrap()
}

/// Three stacked N's: rows `(0,1)`, `(2,3)`, `(4,5)` with `2 < 1` and `4 < 3`.
pub fn nn() -> Poset {
    Poset::new(6, &[(0, 1), (2, 3), (2, 1), (4, 5), (4, 3)]).unwrap()
}

/// An N whose top chain is extended below: `2 < 0 < 1`, `2 < 3`, `4 < 3`,
/// `4 < 5`.
pub fn n_plus() -> Poset {
    Poset::new(6, &[(0, 1), (2, 3), (2, 0), (4, 5), (4, 3)]).unwrap()
}

/// `0 < 1`, `2 < 3`, `2 < 1`, `4 < 5 < 3`.
pub fn n_minus() -> Poset {
    Poset::new(6, &[(0, 1), (2, 3), (2, 1), (4, 5), (5, 3)]).unwrap()
}

/// The 3-crown: `0 < 1`, `0 < 5`, `2 < 3`, `2 < 1`, `4 < 5`, `4 < 3`.
pub fn tc() -> Poset {
    Poset::new(6, &[(0, 1), (0, 5), (2, 3), (2, 1), (4, 5), (4, 3)]).unwrap()
}

/// Two 3-chains `0 < 1 < 2`, `3 < 4 < 5` with `3 < 2`.
pub fn ln() -> Poset {
    Poset::new(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (3, 2)]).unwrap()
}

/// Named six-point posets that no gluing-parallel poset contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Forbidden {
    NN,
    NPlus,
    NMinus,
    TC,
    LN,
}

impl Forbidden {
    pub const ALL: [Forbidden; 5] = [
        Forbidden::NN,
        Forbidden::NPlus,
        Forbidden::NMinus,
        Forbidden::TC,
        Forbidden::LN,
    ];

    pub fn poset(self) -> Poset {
        match self {
            Forbidden::NN => nn(),
            Forbidden::NPlus => n_plus(),
            Forbidden::NMinus => n_minus(),
            Forbidden::TC => tc(),
            Forbidden::LN => ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Forbidden::NN => "NN",
            Forbidden::NPlus => "N+",
            Forbidden::NMinus => "N-",
            Forbidden::TC => "TC",
            Forbidden::LN => "LN",
        }
    }
}

/// Producer-consumer order on `2n` points: producers `0..n`, consumers
/// `n..2n`, with `p_i < p_{i+1}`, `c_i < c_{i+1}` and `p_i < c_i`.
pub fn prodcon(n: usize) -> Poset {
    assert!(n >= 1, "prodcon needs at least one producer");
    let mut pairs = Vec::new();
    for i in 0..n {
        pairs.push((i, n + i));
        if i + 1 < n {
            pairs.push((i, i + 1));
            pairs.push((n + i, n + i + 1));
        }
    }
    Poset::new(2 * n, &pairs).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_is_an_interval_order() {
        assert_eq!(find_induced(&n(), &two_two()), None);
    }

    #[test]
    fn self_embedding_is_identity() {
        for p in [n(), two_two(), nn(), tc(), ln(), prodcon(3)] {
            let e = find_induced(&p, &p).unwrap();
            assert_eq!(e.map, (0..p.size()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn prodcon_contains_n() {
        let p = prodcon(4);
        let e = find_induced(&p, &n()).unwrap();
        assert!(e.is_valid(&p, &n()));
        // The copy spanned by c1, c2, p2, p3: a=c1, b=c2, c=p2, d=p3.
        let (p2, p3, c1, c2) = (1, 2, 4, 5);
        let figure = Embedding {
            map: vec![c1, c2, p2, p3],
        };
        assert!(figure.is_valid(&p, &n()));
        assert!(e.map <= figure.map);
    }

    #[test]
    fn pattern_shapes() {
        assert_eq!(two_two().size(), 4);
        assert_eq!(two_two().relation_len(), 2);
        let expect_nn = Poset::new(6, &[(0, 1), (2, 3), (2, 1), (4, 5), (4, 3)]).unwrap();
        assert_eq!(nn(), expect_nn);
        for f in Forbidden::ALL {
            assert_eq!(f.poset().size(), 6);
            assert!(f.poset().is_connected());
        }
        // pairwise non-isomorphic
        for a in Forbidden::ALL {
            for b in Forbidden::ALL {
                assert_eq!(a == b, a.poset().isomorphic(&b.poset()));
            }
        }
    }

    #[test]
    fn n_does_not_contain_six_point_patterns() {
        for f in Forbidden::ALL {
            assert_eq!(find_induced(&n(), &f.poset()), None);
        }
    }
}
