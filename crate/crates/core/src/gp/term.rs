//! Gluing-parallel expressions and their text syntax.
//!
//! Leaves are the four one-point iposets, written `.` (no interface), `>.`
//! (source), `.>` (target) and `>.>` (both), plus `()` for the empty iposet.
//! `*` is gluing and binds tighter than `||`, parallel composition. Nested
//! nodes of the same kind are parenthesized, so printing and parsing are exact
//! inverses on terms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::iposet::Iposet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum GpTerm {
    Empty,
    Leaf { source: bool, target: bool },
    Glue(Vec<GpTerm>),
    Par(Vec<GpTerm>),
}

impl GpTerm {
    pub fn leaf(source: bool, target: bool) -> GpTerm {
        GpTerm::Leaf { source, target }
    }

    /// Gluing of two terms, flattening nested gluings.
    pub fn glue(a: GpTerm, b: GpTerm) -> GpTerm {
        let mut children = Vec::new();
        for t in [a, b] {
            match t {
                GpTerm::Glue(ts) => children.extend(ts),
                t => children.push(t),
            }
        }
        GpTerm::Glue(children)
    }

    /// Parallel composition of two terms, flattening nested parallels and
    /// dropping empty operands.
    pub fn par(a: GpTerm, b: GpTerm) -> GpTerm {
        let mut children = Vec::new();
        for t in [a, b] {
            match t {
                GpTerm::Par(ts) => children.extend(ts),
                GpTerm::Empty => {}
                t => children.push(t),
            }
        }
        match children.len() {
            0 => GpTerm::Empty,
            1 => children.pop().unwrap(),
            _ => GpTerm::Par(children),
        }
    }

    /// Parallel composition of many terms.
    pub fn par_all(terms: impl IntoIterator<Item = GpTerm>) -> GpTerm {
        terms.into_iter().fold(GpTerm::Empty, GpTerm::par)
    }

    pub fn eval(&self) -> Result<Iposet> {
        match self {
            GpTerm::Empty => Ok(Iposet::empty()),
            GpTerm::Leaf { source, target } => Iposet::idpos(usize::from(*source), usize::from(*target), 1),
            GpTerm::Glue(ts) => {
                let mut iter = ts.iter();
                let first = iter.next().map_or(Ok(Iposet::empty()), GpTerm::eval)?;
                iter.try_fold(first, |acc, t| acc.glue(&t.eval()?))
            }
            GpTerm::Par(ts) => ts.iter().try_fold(Iposet::empty(), |acc, t| Ok(acc.par(&t.eval()?))),
        }
    }

    /// Number of points of the evaluated iposet.
    pub fn points(&self) -> usize {
        match self {
            GpTerm::Empty => 0,
            GpTerm::Leaf { .. } => 1,
            GpTerm::Par(ts) => ts.iter().map(GpTerm::points).sum(),
            GpTerm::Glue(_) => self.eval().map_or(0, |p| p.size()),
        }
    }

    /// Number of alternations between gluing and parallel nodes along the
    /// deepest root-to-leaf path; leaves have depth 0.
    pub fn alternation_depth(&self) -> usize {
        fn depth(t: &GpTerm, parent_is_glue: Option<bool>) -> usize {
            match t {
                GpTerm::Empty | GpTerm::Leaf { .. } => 0,
                GpTerm::Glue(ts) | GpTerm::Par(ts) => {
                    let is_glue = matches!(t, GpTerm::Glue(_));
                    let here = usize::from(parent_is_glue != Some(is_glue));
                    let below = ts.iter().map(|c| depth(c, Some(is_glue))).max().unwrap_or(0);
                    // Same-kind nesting is reassociation, not a new level.
                    if parent_is_glue == Some(is_glue) {
                        below
                    } else {
                        here + below
                    }
                }
            }
        }
        depth(self, None)
    }
}

fn write_leaf(f: &mut fmt::Formatter<'_>, source: bool, target: bool) -> fmt::Result {
    if source {
        f.write_str(">")?;
    }
    f.write_str(".")?;
    if target {
        f.write_str(">")?;
    }
    Ok(())
}

impl fmt::Display for GpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GpTerm::Empty => f.write_str("()"),
            GpTerm::Leaf { source, target } => write_leaf(f, *source, *target),
            GpTerm::Par(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" || ")?;
                    }
                    if matches!(t, GpTerm::Par(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
            GpTerm::Glue(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    if matches!(t, GpTerm::Par(_) | GpTerm::Glue(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for GpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GpTerm({self})")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn par(&mut self) -> Result<GpTerm> {
        let mut items = vec![self.glue()?];
        while self.eat("||") {
            items.push(self.glue()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            GpTerm::Par(items)
        })
    }

    fn glue(&mut self) -> Result<GpTerm> {
        let mut items = vec![self.atom()?];
        while self.eat("*") {
            items.push(self.atom()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            GpTerm::Glue(items)
        })
    }

    fn atom(&mut self) -> Result<GpTerm> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                if self.eat(")") {
                    return Ok(GpTerm::Empty);
                }
                let inner = self.par()?;
                if !self.eat(")") {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(b'>') | Some(b'.') => {
                let source = self.eat(">");
                if !self.eat(".") {
                    return self.err("expected `.` after `>`");
                }
                // A target marker must hug the dot.
                let target = self.src.get(self.pos) == Some(&b'>');
                if target {
                    self.pos += 1;
                }
                Ok(GpTerm::Leaf { source, target })
            }
            Some(_) => self.err("expected a leaf or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

impl FromStr for GpTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<GpTerm> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let t = p.par()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(t)
    }
}
