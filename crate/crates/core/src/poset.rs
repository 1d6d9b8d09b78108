//! Finite closed subposets of the truncated pattern universe.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{compositions, Pattern};

/// Which norms belong to the truncated universe at level `d`.
///
/// Cells of the space of degree-`d` polynomials are labelled only by patterns
/// with `norm = d (mod 2)`; `All` keeps every norm `<= d` and exists to compare
/// against counts that mix parities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityPolicy {
    #[default]
    Matched,
    All,
}

impl ParityPolicy {
    pub fn admits(self, norm: u32, d: u32) -> bool {
        norm <= d && (self == ParityPolicy::All || norm % 2 == d % 2)
    }
}

impl fmt::Display for ParityPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityPolicy::Matched => "matched",
            ParityPolicy::All => "all",
        })
    }
}

/// Named infinite closed posets, truncated at build time.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    /// `|w|' >= k` and `|w| >= q`.
    ReducedNormAtLeast {
        k: u32,
        #[serde(default)]
        q: u32,
    },
    /// Some entry `>= k`.
    MaxEntryAtLeast { k: u32 },
    /// Everything except patterns with entries in {1, 2} and at most one 2.
    #[serde(rename = "entries_le2_at_most_one_2_complement")]
    FreeGroupComplement,
    /// Patterns strictly below `omega`.
    StrictlyBelow { omega: Pattern },
    /// Patterns below or equal to `omega`.
    AtOrBelow { omega: Pattern },
    Full,
}

impl Family {
    /// Membership for the families defined by a predicate.
    fn predicate(&self, w: &Pattern) -> Option<bool> {
        match self {
            Family::ReducedNormAtLeast { k, q } => Some(w.reduced_norm() >= *k && w.norm() >= *q),
            Family::MaxEntryAtLeast { k } => Some(w.max_entry().is_some_and(|m| m >= *k)),
            Family::FreeGroupComplement => {
                let small = w.entries().iter().all(|&e| e <= 2)
                    && w.entries().iter().filter(|&&e| e == 2).count() <= 1;
                Some(!small)
            }
            Family::Full => Some(true),
            Family::StrictlyBelow { .. } | Family::AtOrBelow { .. } => None,
        }
    }
}

/// How a closed poset is described: by generators or by a named family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosetSpec {
    Generators(Vec<Pattern>),
    Family(Family),
}

impl PosetSpec {
    pub fn generators<I: IntoIterator<Item = Pattern>>(gens: I) -> Self {
        PosetSpec::Generators(gens.into_iter().collect())
    }

    /// Whether the infinite poset has finitely many members of each bounded
    /// reduced norm.
    ///
    /// Generator closures always are: every operation raises `|w|'` by one,
    /// so the members with `|w|' <= t` lie within finitely many steps. The
    /// predicate families contain `(1,...,1,x)` for unboundedly many ones,
    /// all with the same reduced norm.
    pub fn is_profinite(&self) -> bool {
        match self {
            PosetSpec::Generators(_) => true,
            PosetSpec::Family(Family::StrictlyBelow { .. } | Family::AtOrBelow { .. }) => true,
            PosetSpec::Family(_) => false,
        }
    }

    /// An infinite family of members sharing one reduced norm, for specs that
    /// are not profinite: the first `count` members with `m = 0, 1, ...`
    /// leading ones.
    pub fn profinite_witness(&self, count: usize) -> Option<Vec<Pattern>> {
        let tail = match self {
            PosetSpec::Family(Family::ReducedNormAtLeast { k, .. }) => vec![k + 1],
            PosetSpec::Family(Family::MaxEntryAtLeast { k }) => vec![(*k).max(1)],
            PosetSpec::Family(Family::FreeGroupComplement) => vec![3],
            PosetSpec::Family(Family::Full) => vec![],
            _ => return None,
        };
        Some(
            (0..count)
                .map(|m| {
                    let mut e = vec![1; m];
                    e.extend(&tail);
                    Pattern::new(e).expect("positive entries")
                })
                .collect(),
        )
    }
}

/// A poset request as it appears in JSON: `{"d": 6, "family": {...}}` or
/// `{"d": 6, "generators": ["(3,3)"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetQuery {
    pub d: u32,
    #[serde(flatten)]
    pub spec: PosetSpec,
    #[serde(default)]
    pub parity_policy: ParityPolicy,
}

impl PosetQuery {
    pub fn build(&self) -> Result<ClosedPoset> {
        build_poset(&self.spec, self.d, self.parity_policy)
    }
}

pub fn check_degree(d: u32) -> Result<()> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::InvalidDegree(d));
    }
    Ok(())
}

/// The truncated universe at level `d`, in canonical order.
pub fn universe(d: u32, policy: ParityPolicy) -> Vec<Pattern> {
    let mut all: Vec<Pattern> = (0..=d)
        .filter(|&n| policy.admits(n, d))
        .flat_map(compositions)
        .collect();
    all.sort();
    all
}

/// Smallest set containing `seeds` and closed under successors at level `d`.
pub fn closure<I: IntoIterator<Item = Pattern>>(seeds: I, d: u32) -> BTreeSet<Pattern> {
    let mut members = BTreeSet::new();
    let mut stack: Vec<Pattern> = Vec::new();
    for s in seeds {
        if members.insert(s.clone()) {
            stack.push(s);
        }
    }
    while let Some(w) = stack.pop() {
        for next in w.elementary_successors(d) {
            if !members.contains(&next) {
                members.insert(next.clone());
                stack.push(next);
            }
        }
    }
    members
}

/// First member (in canonical order) with a successor outside the set.
pub fn closure_violation(members: &BTreeSet<Pattern>, d: u32) -> Option<(Pattern, Pattern)> {
    members.iter().find_map(|w| {
        w.elementary_successors(d)
            .into_iter()
            .find(|s| !members.contains(s))
            .map(|s| (w.clone(), s))
    })
}

pub fn is_closed(members: &BTreeSet<Pattern>, d: u32) -> bool {
    closure_violation(members, d).is_none()
}

fn check_member(w: &Pattern, d: u32, policy: ParityPolicy) -> Result<()> {
    let norm = w.norm();
    if norm > d {
        return Err(Error::NormTooLarge { pattern: w.clone(), norm, d });
    }
    if !policy.admits(norm, d) {
        return Err(Error::ParityMismatch { pattern: w.clone(), norm: norm % 2, d });
    }
    Ok(())
}

/// A closed subposet of the truncated universe at level `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedPoset {
    d: u32,
    policy: ParityPolicy,
    members: BTreeSet<Pattern>,
    spec: PosetSpec,
}

pub fn build_poset(spec: &PosetSpec, d: u32, policy: ParityPolicy) -> Result<ClosedPoset> {
    check_degree(d)?;
    let members = match spec {
        PosetSpec::Generators(gens) => {
            for g in gens {
                check_member(g, d, policy)?;
            }
            closure(gens.iter().cloned(), d)
        }
        PosetSpec::Family(Family::StrictlyBelow { omega }) => {
            check_member(omega, d, policy)?;
            closure(omega.elementary_successors(d), d)
        }
        PosetSpec::Family(Family::AtOrBelow { omega }) => {
            check_member(omega, d, policy)?;
            closure([omega.clone()], d)
        }
        PosetSpec::Family(family) => universe(d, policy)
            .into_iter()
            .filter(|w| family.predicate(w) == Some(true))
            .collect(),
    };
    Ok(ClosedPoset {
        d,
        policy,
        members,
        spec: spec.clone(),
    })
}

impl ClosedPoset {
    /// Wraps an explicit member set, rejecting it if it is not closed.
    pub fn from_members(members: BTreeSet<Pattern>, d: u32, policy: ParityPolicy) -> Result<Self> {
        check_degree(d)?;
        for w in &members {
            check_member(w, d, policy)?;
        }
        if let Some((member, missing)) = closure_violation(&members, d) {
            return Err(Error::NotClosed { member, missing });
        }
        let spec = PosetSpec::Generators(maximal_of(&members, d));
        Ok(ClosedPoset { d, policy, members, spec })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn policy(&self) -> ParityPolicy {
        self.policy
    }

    pub fn spec(&self) -> &PosetSpec {
        &self.spec
    }

    pub fn members(&self) -> &BTreeSet<Pattern> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Pattern) -> bool {
        self.members.contains(w)
    }

    /// Members that are not a successor of any other member.
    pub fn maximal_elements(&self) -> Vec<Pattern> {
        maximal_of(&self.members, self.d)
    }

    /// Closure of the members inside the universe at level `d_prime`.
    pub fn lift(&self, d_prime: u32) -> Result<ClosedPoset> {
        if d_prime < self.d || d_prime % 2 != self.d % 2 {
            return Err(Error::InvalidLift { from: self.d, to: d_prime });
        }
        if d_prime == self.d {
            return Ok(self.clone());
        }
        let maximal = self.maximal_elements();
        Ok(ClosedPoset {
            d: d_prime,
            policy: self.policy,
            members: closure(maximal.iter().cloned(), d_prime),
            spec: PosetSpec::Generators(maximal),
        })
    }

    /// True iff the empty pattern is not a member.
    pub fn satisfies_lambda(&self) -> bool {
        !self.members.contains(&Pattern::empty())
    }

    /// Universe members outside the poset, in canonical order.
    pub fn complement(&self) -> Vec<Pattern> {
        universe(self.d, self.policy)
            .into_iter()
            .filter(|w| !self.members.contains(w))
            .collect()
    }
}

fn maximal_of(members: &BTreeSet<Pattern>, d: u32) -> Vec<Pattern> {
    let reached: BTreeSet<Pattern> = members.iter().flat_map(|w| w.elementary_successors(d)).collect();
    members.iter().filter(|w| !reached.contains(*w)).cloned().collect()
}
