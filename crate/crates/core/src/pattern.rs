//! Multiplicity patterns: finite compositions of positive integers, the
//! merge and insert operations on them, and the order they generate.
//!
//! A pattern `(w_1, ..., w_q)` records the multiplicities of the real roots of
//! a real polynomial in root order. The empty pattern `()` stands for a
//! polynomial without real roots.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A multiplicity pattern. Entries are always >= 1.
///
/// Patterns order by `(reduced_norm, norm, entries)`; this is the basis order
/// of every matrix built from them.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Pattern(Vec<u32>);

impl Pattern {
    /// The empty pattern `()`.
    pub fn empty() -> Self {
        Pattern(Vec::new())
    }

    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if let Some(position) = entries.iter().position(|&e| e == 0) {
            return Err(Error::Parse {
                position,
                message: "pattern entries must be positive".into(),
            });
        }
        Ok(Pattern(entries))
    }

    /// The pattern `(1, ..., 1)` with `len` entries.
    pub fn ones(len: usize) -> Self {
        Pattern(vec![1; len])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of entries.
    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sum of `(entry - 1)`; the codimension of the stratum.
    pub fn reduced_norm(&self) -> u32 {
        self.0.iter().map(|e| e - 1).sum()
    }

    /// Number of entries, `norm - reduced_norm`.
    pub fn support(&self) -> usize {
        self.0.len()
    }

    pub fn max_entry(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }

    /// Sums entries `i` and `i + 1` (1-based, `1 <= i <= support - 1`).
    pub fn merge_at(&self, i: usize) -> Result<Pattern> {
        let s = self.support();
        if s < 2 || i < 1 || i > s - 1 {
            return Err(Error::IndexOutOfRange {
                op: "merge",
                pattern: self.clone(),
                index: i,
                min: 1,
                max: s.saturating_sub(1),
            });
        }
        Ok(self.merge_unchecked(i))
    }

    /// Places a new entry 2 after position `i` (`0 <= i <= support`).
    pub fn insert_at(&self, i: usize) -> Result<Pattern> {
        let s = self.support();
        if i > s {
            return Err(Error::IndexOutOfRange {
                op: "insert",
                pattern: self.clone(),
                index: i,
                min: 0,
                max: s,
            });
        }
        Ok(self.insert_unchecked(i))
    }

    pub(crate) fn merge_unchecked(&self, i: usize) -> Pattern {
        let mut entries = Vec::with_capacity(self.0.len() - 1);
        entries.extend_from_slice(&self.0[..i - 1]);
        entries.push(self.0[i - 1] + self.0[i]);
        entries.extend_from_slice(&self.0[i + 1..]);
        Pattern(entries)
    }

    pub(crate) fn insert_unchecked(&self, i: usize) -> Pattern {
        let mut entries = Vec::with_capacity(self.0.len() + 1);
        entries.extend_from_slice(&self.0[..i]);
        entries.push(2);
        entries.extend_from_slice(&self.0[i..]);
        Pattern(entries)
    }

    /// All patterns one merge or one insert away, with inserts dropped once
    /// they would exceed norm `d`. Equal results from distinct positions are
    /// reported once.
    pub fn elementary_successors(&self, d: u32) -> BTreeSet<Pattern> {
        let s = self.support();
        let mut out: BTreeSet<Pattern> = (1..s).map(|i| self.merge_unchecked(i)).collect();
        if self.norm() + 2 <= d {
            out.extend((0..=s).map(|i| self.insert_unchecked(i)));
        }
        out
    }

    /// True iff `self` is reachable from `upper` by merges and inserts
    /// (reflexive). Written `self ⪯ upper`.
    ///
    /// Norms never decrease along the operations, so intermediate norms are
    /// bounded by `self.norm()`; `d` only has to admit both endpoints.
    pub fn order_leq(&self, upper: &Pattern, _d: u32) -> bool {
        let target_norm = self.norm();
        let target_reduced = self.reduced_norm();
        if upper.norm() > target_norm
            || upper.reduced_norm() > target_reduced
            || (target_norm - upper.norm()) % 2 != 0
        {
            return false;
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([upper.clone()]);
        seen.insert(upper.clone());
        while let Some(p) = queue.pop_front() {
            if &p == self {
                return true;
            }
            for next in p.elementary_successors(target_norm) {
                if next.reduced_norm() <= target_reduced && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        false
    }
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.reduced_norm(), self.norm(), &self.0).cmp(&(other.reduced_norm(), other.norm(), &other.0))
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Accepts `()`, `(a,b,...)` with decimal entries, and the compact form
    /// `1221` (no parentheses, one digit per entry).
    fn from_str(text: &str) -> Result<Self> {
        let err = |position: usize, message: &str| Error::Parse {
            position,
            message: message.to_string(),
        };
        let bytes = text.as_bytes();
        if bytes.is_empty() {
            return Err(err(0, "empty input"));
        }
        if bytes[0] != b'(' {
            if let Some(pos) = bytes.iter().position(|b| !(b'1'..=b'9').contains(b)) {
                return Err(err(pos, "expected '(' or a digit 1-9"));
            }
            return Ok(Pattern(bytes.iter().map(|b| u32::from(b - b'0')).collect()));
        }
        if bytes.len() == 2 && bytes[1] == b')' {
            return Ok(Pattern::empty());
        }
        let mut entries = Vec::new();
        let mut pos = 1;
        loop {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == start {
                return Err(err(pos, "expected a positive integer"));
            }
            let value: u32 = text[start..pos]
                .parse()
                .map_err(|_| err(start, "entry does not fit in 32 bits"))?;
            if value == 0 {
                return Err(err(start, "pattern entries must be positive"));
            }
            entries.push(value);
            match bytes.get(pos) {
                Some(b',') => pos += 1,
                Some(b')') if pos + 1 == bytes.len() => return Ok(Pattern(entries)),
                Some(b')') => return Err(err(pos + 1, "trailing characters after ')'")),
                Some(_) => return Err(err(pos, "expected ',' or ')'")),
                None => return Err(err(pos, "unterminated pattern, expected ')'")),
            }
        }
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// All compositions of `n` in lexicographic order of entries.
pub fn compositions(n: u32) -> Vec<Pattern> {
    fn rec(rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Pattern>) {
        if rest == 0 {
            out.push(Pattern(prefix.clone()));
            return;
        }
        for first in 1..=rest {
            prefix.push(first);
            rec(rest - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn norms() {
        let w = p("(1,2,1)");
        assert_eq!(w.norm(), 4);
        assert_eq!(w.reduced_norm(), 1);
        assert_eq!(w.support(), 3);
        assert_eq!(Pattern::empty().norm(), 0);
    }

    #[test]
    fn merges() {
        assert_eq!(p("(1,2,1)").merge_at(1).unwrap(), p("(3,1)"));
        assert_eq!(p("(1,2,1)").merge_at(2).unwrap(), p("(1,3)"));
        assert_eq!(p("(2,2)").merge_at(1).unwrap(), p("(4)"));
    }

    #[test]
    fn merge_rejects_bad_index() {
        assert!(matches!(p("(1,2,1)").merge_at(0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(p("(1,2,1)").merge_at(3), Err(Error::IndexOutOfRange { .. })));
        assert!(p("(4)").merge_at(1).is_err());
        assert!(Pattern::empty().merge_at(1).is_err());
    }

    #[test]
    fn inserts() {
        assert_eq!(p("(1,2,1)").insert_at(0).unwrap(), p("(2,1,2,1)"));
        assert_eq!(p("(1,2,1)").insert_at(3).unwrap(), p("(1,2,1,2)"));
        assert_eq!(Pattern::empty().insert_at(0).unwrap(), p("(2)"));
        assert!(p("(1,2,1)").insert_at(4).is_err());
    }

    #[test]
    fn successors() {
        let got: Vec<_> = p("(4)").elementary_successors(6).into_iter().collect();
        assert_eq!(got, vec![p("(2,4)"), p("(4,2)")]);

        let got = p("(1,2,1)").elementary_successors(4);
        assert_eq!(got, [p("(3,1)"), p("(1,3)")].into_iter().collect());

        // I_1 and I_2 both give (1,2,2,1).
        let got = p("(1,2,1)").elementary_successors(6);
        let want: BTreeSet<_> = ["(3,1)", "(1,3)", "(2,1,2,1)", "(1,2,2,1)", "(1,2,1,2)"]
            .into_iter()
            .map(p)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn order() {
        assert!(p("(3,1)").order_leq(&p("(1,2,1)"), 6));
        assert!(!p("(1,3)").order_leq(&p("(3,1)"), 6));
        assert!(p("(2)").order_leq(&Pattern::empty(), 6));
        assert!(p("(1,2,1)").order_leq(&p("(1,2,1)"), 6));
        // Inserts never create an entry 1.
        assert!(!p("(1,1)").order_leq(&Pattern::empty(), 6));
        assert!(p("(8)").order_leq(&p("(6)"), 8));
    }

    #[test]
    fn codec() {
        assert_eq!(p("(1,2,1)").entries(), &[1, 2, 1]);
        assert_eq!(p("()"), Pattern::empty());
        assert_eq!(p("(12)").entries(), &[12]);
        assert_eq!(p("1221").entries(), &[1, 2, 2, 1]);
        assert_eq!(p("(1,2,1)").to_string(), "(1,2,1)");
        assert_eq!(Pattern::empty().to_string(), "()");
    }

    #[test]
    fn codec_errors_carry_position() {
        let pos = |s: &str| match s.parse::<Pattern>() {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        };
        assert_eq!(pos(""), 0);
        assert_eq!(pos("(1,,2)"), 3);
        assert_eq!(pos("(1,2"), 4);
        assert_eq!(pos("(1;2)"), 2);
        assert_eq!(pos("(0)"), 1);
        assert_eq!(pos("(1) "), 3);
        assert_eq!(pos("12a"), 2);
        assert_eq!(pos("(1, 2)"), 3);
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![p("(4)"), p("(1,3)"), p("()"), p("(2)"), p("(1,1)"), p("(3,1)")];
        v.sort();
        let got: Vec<String> = v.iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["()", "(1,1)", "(2)", "(1,3)", "(3,1)", "(4)"]);
    }

    #[test]
    fn composition_counts() {
        for n in 1..=10 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
        }
        assert_eq!(compositions(0), vec![Pattern::empty()]);
    }
}
