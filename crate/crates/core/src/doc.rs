//! The JSON document format for iposets and Graphviz export.
//!
//! A document lists `size`, the strict relation as `[i, j]` pairs meaning
//! `i < j`, and optional `source` and `target` sequences. Relations need not
//! be transitively closed. Printing emits the covering pairs, sorted, so that
//! printing a parsed document is canonical.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iposet::Iposet;
use crate::poset::Poset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDocument {
    pub size: usize,
    #[serde(default)]
    pub relation: Vec<[usize; 2]>,
    #[serde(default)]
    pub source: Vec<usize>,
    #[serde(default)]
    pub target: Vec<usize>,
}

impl PosetDocument {
    pub fn parse(text: &str) -> Result<PosetDocument> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_iposet(&self) -> Result<Iposet> {
        let pairs: Vec<(usize, usize)> = self.relation.iter().map(|&[a, b]| (a, b)).collect();
        Iposet::new(Poset::new(self.size, &pairs)?, self.source.clone(), self.target.clone())
    }

    pub fn from_iposet(p: &Iposet) -> PosetDocument {
        let mut relation: Vec<[usize; 2]> = p.poset().covers().into_iter().map(|(a, b)| [a, b]).collect();
        relation.sort_unstable();
        PosetDocument {
            size: p.size(),
            relation,
            source: p.source().to_vec(),
            target: p.target().to_vec(),
        }
    }

    /// Compact single-line JSON.
    pub fn print(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }
}

/// Reads an iposet from document text.
pub fn parse_iposet(text: &str) -> Result<Iposet> {
    PosetDocument::parse(text)?.to_iposet()
}

/// The normalized document text of `p`.
pub fn print_iposet(p: &Iposet) -> String {
    PosetDocument::from_iposet(p).print()
}

/// Hasse diagram in DOT. Sources are drawn as boxes, targets as diamonds,
/// points in both interfaces as double octagons; interface positions are
/// shown in the labels.
pub fn to_dot(p: &Iposet) -> String {
    let mut out = String::from("digraph iposet {\n  rankdir=LR;\n");
    for x in 0..p.size() {
        let s = p.source().iter().position(|&y| y == x);
        let t = p.target().iter().position(|&y| y == x);
        let shape = match (s, t) {
            (Some(_), Some(_)) => "doubleoctagon",
            (Some(_), None) => "box",
            (None, Some(_)) => "diamond",
            (None, None) => "circle",
        };
        let mut label = x.to_string();
        if let Some(i) = s {
            let _ = write!(label, " s{i}");
        }
        if let Some(i) = t {
            let _ = write!(label, " t{i}");
        }
        let _ = writeln!(out, "  {x} [shape={shape}, label=\"{label}\"];");
    }
    for (a, b) in p.poset().covers() {
        let _ = writeln!(out, "  {a} -> {b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loader_closes_relation() {
        let p = parse_iposet(r#"{"size":3,"relation":[[0,1],[1,2]],"source":[0]}"#).unwrap();
        assert!(p.poset().lt(0, 2));
        assert_eq!(
            print_iposet(&p),
            r#"{"size":3,"relation":[[0,1],[1,2]],"source":[0],"target":[]}"#
        );
    }

    #[test]
    fn printing_drops_implied_pairs() {
        let text = r#"{"size":3,"relation":[[1,2],[0,2],[0,1]]}"#;
        let doc = PosetDocument::from_iposet(&parse_iposet(text).unwrap());
        assert_eq!(doc.relation, vec![[0, 1], [1, 2]]);
    }

    #[test]
    fn invalid_documents() {
        assert!(matches!(
            parse_iposet(r#"{"size":2,"relation":[[0,1],[1,0]]}"#),
            Err(Error::Cycle { .. })
        ));
        assert!(matches!(
            parse_iposet(r#"{"size":2,"relation":[[0,1]],"source":[1]}"#),
            Err(Error::SourceNotMinimal { point: 1 })
        ));
        assert!(matches!(
            parse_iposet(r#"{"size":2,"target":[1,1]}"#),
            Err(Error::DuplicateInterface { point: 1, .. })
        ));
        assert!(matches!(
            parse_iposet(r#"{"size":2,"relation":[[0,5]]}"#),
            Err(Error::PointOutOfRange { .. })
        ));
        assert!(matches!(parse_iposet("{"), Err(Error::Document(_))));
        assert!(matches!(
            parse_iposet(r#"{"size":1,"extra":1}"#),
            Err(Error::Document(_))
        ));
    }

    #[test]
    fn dot_marks_interfaces() {
        let p = parse_iposet(r#"{"size":2,"relation":[[0,1]],"source":[0],"target":[1]}"#).unwrap();
        let dot = to_dot(&p);
        assert!(dot.contains("0 [shape=box, label=\"0 s0\"]"));
        assert!(dot.contains("1 [shape=diamond, label=\"1 t0\"]"));
        assert!(dot.contains("0 -> 1;"));
    }
}
