//! Membership in the alternation levels `C_n` and `D_n`.
//!
//! Both towers start from the four one-point iposets. `C` closes under
//! parallel composition at odd levels and gluing at even ones; `D` the other
//! way round. A parallel closure contains the empty iposet, a gluing closure
//! only products of at least one factor.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use super::split::{glue_splits, par_splits};
use crate::canon::CanonForm;
use crate::iposet::Iposet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tower {
    C,
    D,
}

impl Tower {
    /// Whether level `n ≥ 1` of this tower is a parallel closure.
    fn parallel_at(self, n: usize) -> bool {
        (n % 2 == 1) == (self == Tower::C)
    }
}

impl std::str::FromStr for Tower {
    type Err = String;

    fn from_str(s: &str) -> Result<Tower, String> {
        match s {
            "C" | "c" => Ok(Tower::C),
            "D" | "d" => Ok(Tower::D),
            _ => Err(format!("unknown tower `{s}`, expected C or D")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    tower: Tower,
    level: usize,
}

/// Memoized level membership.
#[derive(Default)]
pub struct LevelSearch {
    cache: RwLock<HashMap<(CanonForm, Key), bool>>,
}

impl LevelSearch {
    pub fn new() -> LevelSearch {
        LevelSearch::default()
    }

    pub fn contains(&self, p: &Iposet, level: usize, tower: Tower) -> bool {
        self.member(p, Key { tower, level })
    }

    fn member(&self, p: &Iposet, key: Key) -> bool {
        let form = p.canonical_form();
        if let Some(&hit) = self.cache.read().unwrap().get(&(form.clone(), key)) {
            return hit;
        }
        let rep = form.to_iposet();
        let result = if key.level == 0 {
            rep.size() == 1
        } else {
            self.closure_member(&rep, key)
        };
        *self.cache.write().unwrap().entry((form, key)).or_insert(result)
    }

    /// `p` is in the level below, or a product `a □ rest` with `a` in the
    /// level below and `rest` in this level.
    fn closure_member(&self, p: &Iposet, key: Key) -> bool {
        let below = Key {
            tower: key.tower,
            level: key.level - 1,
        };
        let again = key;
        if self.member(p, below) {
            return true;
        }
        if key.tower.parallel_at(key.level) {
            p.size() == 0 || par_splits(p, |a, b| self.member(&a, below) && self.member(&b, again))
        } else {
            glue_splits(p, |a, b| self.member(&a, below) && self.member(&b, again))
        }
    }
}

fn shared() -> &'static LevelSearch {
    static SHARED: OnceLock<LevelSearch> = OnceLock::new();
    SHARED.get_or_init(LevelSearch::new)
}

/// Membership of `p` in `C_level` or `D_level`.
pub fn level_membership(p: &Iposet, level: usize, tower: Tower) -> bool {
    shared().contains(p, level, tower)
}

/// The least level of `tower` containing `p`, searching up to `max_level`.
pub fn least_level(p: &Iposet, tower: Tower, max_level: usize) -> Option<usize> {
    (0..=max_level).find(|&n| level_membership(p, n, tower))
}
