//! Formal integer combinations of patterns.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::pattern::Pattern;
use crate::scalar::Coefficient;

/// A finite sum `sum c_w * w`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain<T> {
    terms: BTreeMap<Pattern, T>,
}

impl<T> Default for Chain<T> {
    fn default() -> Self {
        Chain { terms: BTreeMap::new() }
    }
}

impl<T: Coefficient> Chain<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(w: Pattern, c: T) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    /// Adds `c * w`, collecting like terms.
    pub fn add_term(&mut self, w: Pattern, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn coefficient(&self, w: &Pattern) -> T {
        self.terms.get(w).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pattern, &T)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Pattern> {
        self.terms.keys()
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Keeps only the terms whose pattern satisfies `keep`.
    pub fn retain<F: FnMut(&Pattern) -> bool>(mut self, mut keep: F) -> Self {
        self.terms.retain(|w, _| keep(w));
        self
    }

    /// Extends a map on patterns linearly.
    pub fn apply<F: FnMut(&Pattern) -> Chain<T>>(&self, mut f: F) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            for (v, e) in f(w).terms {
                out.add_term(v, e * c.clone());
            }
        }
        out
    }
}

impl<T: Coefficient> FromIterator<(Pattern, T)> for Chain<T> {
    fn from_iter<I: IntoIterator<Item = (Pattern, T)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in iter {
            out.add_term(w, c);
        }
        out
    }
}

impl<T: Coefficient> Add for Chain<T> {
    type Output = Chain<T>;

    fn add(mut self, rhs: Chain<T>) -> Chain<T> {
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<T: Coefficient> Neg for Chain<T> {
    type Output = Chain<T>;

    fn neg(self) -> Chain<T> {
        Chain {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl<T: Coefficient> Sub for Chain<T> {
    type Output = Chain<T>;

    fn sub(self, rhs: Chain<T>) -> Chain<T> {
        self + (-rhs)
    }
}

impl<T: Coefficient> fmt::Display for Chain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{w}")?;
            } else {
                write!(f, "{sign}{mag}{w}")?;
            }
        }
        Ok(())
    }
}

impl<T: Coefficient> fmt::Debug for Chain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as `[["(3,1)", 1], ["(1,3)", -1]]` in canonical pattern order.
/// Coefficients go through their decimal form so arbitrary precision survives.
impl<T: Coefficient> Serialize for Chain<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            match c.to_i64() {
                Some(small) => seq.serialize_element(&(w, small))?,
                None => seq.serialize_element(&(w, c.to_string()))?,
            }
        }
        seq.end()
    }
}

impl<'de, T: Coefficient> Deserialize<'de> for Chain<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Small(i64),
            Text(String),
        }
        let raw: Vec<(Pattern, Coeff)> = Vec::deserialize(deserializer)?;
        raw.into_iter()
            .map(|(w, c)| {
                let value = match c {
                    Coeff::Small(v) => T::from_small(v),
                    Coeff::Text(s) => {
                        let big: num_bigint::BigInt = s.parse().map_err(serde::de::Error::custom)?;
                        T::from_bigint(&big).ok_or_else(|| serde::de::Error::custom("coefficient out of range"))?
                    }
                };
                Ok((w, value))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn like_terms_collect_and_cancel() {
        let mut c: Chain<i64> = Chain::zero();
        c.add_term(p("(1,2,2,1)"), 1);
        c.add_term(p("(3,1)"), 1);
        c.add_term(p("(1,2,2,1)"), -1);
        assert_eq!(c, Chain::single(p("(3,1)"), 1));
        c.add_term(p("(3,1)"), 1);
        assert_eq!(c.coefficient(&p("(3,1)")), 2);
        assert_eq!(c.to_string(), "+2(3,1)");
    }

    #[test]
    fn json_form() {
        let c: Chain<i64> = [(p("(3,1)"), 1), (p("(1,3)"), -1)].into_iter().collect();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"[["(1,3)",-1],["(3,1)",1]]"#);
        let back: Chain<num_bigint::BigInt> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.len(), 2);
    }
}
