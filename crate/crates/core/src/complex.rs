//! The merge/insert differential complexes and their duals.
//!
//! For a pattern `w` with `s` entries,
//!
//! ```text
//! dM(w) = sum_{k=1}^{s-1} (-1)^(k+1) M_k(w)
//! dI(w) = sum_{k=0}^{s}   (-1)^k     I_k(w)
//! ```
//!
//! and `d = dM + dI`. Inserts whose norm would exceed the level are dropped.
//! A pattern sits in homological degree `level - |w|'`, so both parts lower
//! the degree by one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::pattern::Pattern;
use crate::poset::{check_degree, universe, ClosedPoset, ParityPolicy};
use crate::scalar::Coefficient;

/// Which part of the boundary to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryVariant {
    MergeOnly,
    InsertOnly,
    /// `dM + dI`.
    Full,
    /// `dM - dI`, the opposite insert sign convention. Conjugate to `Full`
    /// under `w -> (-1)^(|w|/2) w`.
    Twisted,
}

/// Homological degree `d - |w|'` of a pattern admitted at level `d`.
pub fn degree_of(w: &Pattern, d: u32) -> usize {
    (d - w.reduced_norm()) as usize
}

pub(crate) fn boundary_terms<T: Coefficient>(w: &Pattern, d: u32, variant: BoundaryVariant) -> Chain<T> {
    let s = w.support();
    let mut out = Chain::zero();
    if variant != BoundaryVariant::InsertOnly {
        for k in 1..s {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out.add_term(w.merge_unchecked(k), T::from_small(sign));
        }
    }
    if variant != BoundaryVariant::MergeOnly && w.norm() + 2 <= d {
        let flip = if variant == BoundaryVariant::Twisted { -1 } else { 1 };
        for k in 0..=s {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out.add_term(w.insert_unchecked(k), T::from_small(sign * flip));
        }
    }
    out
}

/// The signed boundary of a single pattern at level `d`.
pub fn boundary_chain<T: Coefficient>(w: &Pattern, d: u32, variant: BoundaryVariant) -> Result<Chain<T>> {
    let norm = w.norm();
    if norm > d {
        return Err(Error::NormTooLarge { pattern: w.clone(), norm, d });
    }
    if norm % 2 != d % 2 {
        return Err(Error::ParityMismatch {
            pattern: w.clone(),
            norm: norm % 2,
            d,
        });
    }
    Ok(boundary_terms(w, d, variant))
}

/// Applies the boundary linearly to a chain.
pub fn boundary_of<T: Coefficient>(c: &Chain<T>, d: u32, variant: BoundaryVariant) -> Chain<T> {
    c.apply(|w| boundary_terms(w, d, variant))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ComplexKind {
    /// Generated by a closed poset.
    Sub,
    /// Universe modulo a closed poset.
    Quotient,
    Full,
    Dual(Box<ComplexKind>),
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexKind::Sub => f.write_str("sub"),
            ComplexKind::Quotient => f.write_str("quotient"),
            ComplexKind::Full => f.write_str("full"),
            ComplexKind::Dual(inner) => write!(f, "dual({inner})"),
        }
    }
}

/// Whether the maps lower degree (chain complex) or raise it (cochains).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Lowering,
    Raising,
}

/// Bases per degree and sparse maps between adjacent degrees.
///
/// `maps[n]` has source degree `n`: columns index `basis[n]`, rows index
/// `basis[n - 1]` (lowering) or `basis[n + 1]` (raising). Degrees with an
/// empty basis are absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex<T> {
    d: u32,
    policy: ParityPolicy,
    kind: ComplexKind,
    direction: Direction,
    basis: BTreeMap<usize, Vec<Pattern>>,
    maps: BTreeMap<usize, SparseMatrix<T>>,
}

impl<T: Coefficient> GradedComplex<T> {
    /// Assembles the complex on `cells`; boundary terms outside `cells` are
    /// deleted.
    fn assemble<I>(cells: I, d: u32, policy: ParityPolicy, kind: ComplexKind, variant: BoundaryVariant) -> Self
    where
        I: IntoIterator<Item = Pattern>,
    {
        let mut basis: BTreeMap<usize, Vec<Pattern>> = BTreeMap::new();
        for w in cells {
            basis.entry(degree_of(&w, d)).or_default().push(w);
        }
        for b in basis.values_mut() {
            b.sort();
            b.dedup();
        }
        let index: HashMap<&Pattern, usize> = basis
            .values()
            .flat_map(|b| b.iter().enumerate().map(|(i, w)| (w, i)))
            .collect();
        let maps = basis
            .par_iter()
            .filter_map(|(&n, cols)| {
                let rows = basis.get(&(n - 1))?;
                let triplets: Vec<(usize, usize, T)> = cols
                    .iter()
                    .enumerate()
                    .flat_map(|(c, w)| {
                        boundary_terms::<T>(w, d, variant)
                            .iter()
                            .filter_map(|(v, coeff)| index.get(v).map(|&r| (r, c, coeff.clone())))
                            .collect::<Vec<_>>()
                    })
                    .collect();
                Some((n, SparseMatrix::from_triplets(rows.len(), cols.len(), triplets)))
            })
            .collect();
        GradedComplex {
            d,
            policy,
            kind,
            direction: Direction::Lowering,
            basis,
            maps,
        }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn policy(&self) -> ParityPolicy {
        self.policy
    }

    pub fn kind(&self) -> &ComplexKind {
        &self.kind
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn basis(&self) -> &BTreeMap<usize, Vec<Pattern>> {
        &self.basis
    }

    pub fn basis_in(&self, degree: usize) -> &[Pattern] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn rank_in(&self, degree: usize) -> usize {
        self.basis_in(degree).len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Target degree of a map with source degree `n`.
    pub fn target_degree(&self, n: usize) -> Option<usize> {
        match self.direction {
            Direction::Lowering => n.checked_sub(1),
            Direction::Raising => Some(n + 1),
        }
    }

    /// The map out of degree `n`, if both ends are nonempty.
    pub fn map_from(&self, n: usize) -> Option<&SparseMatrix<T>> {
        self.maps.get(&n)
    }

    /// The map into degree `n`.
    pub fn map_into(&self, n: usize) -> Option<&SparseMatrix<T>> {
        match self.direction {
            Direction::Lowering => self.maps.get(&(n + 1)),
            Direction::Raising => n.checked_sub(1).and_then(|m| self.maps.get(&m)),
        }
    }

    pub fn maps(&self) -> &BTreeMap<usize, SparseMatrix<T>> {
        &self.maps
    }

    /// Sum of `(-1)^n * rank C_n`.
    pub fn euler_characteristic(&self) -> i64 {
        self.basis
            .iter()
            .map(|(n, b)| if n % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }

    /// Fails with the first source degree whose map composes nontrivially with the next.
    pub fn check_square_zero(&self) -> Result<()> {
        for (&n, first) in &self.maps {
            let Some(m) = self.target_degree(n) else { continue };
            if let Some(second) = self.maps.get(&m) {
                if !second.mul(first).is_zero() {
                    return Err(Error::NonzeroSquare { degree: n });
                }
            }
        }
        Ok(())
    }

    /// Same bases, transposed maps, opposite direction. Involutive.
    pub fn dualize(&self) -> Self {
        let maps = self
            .maps
            .iter()
            .filter_map(|(&n, m)| self.target_degree(n).map(|t| (t, m.transpose())))
            .collect();
        let kind = match &self.kind {
            ComplexKind::Dual(inner) => (**inner).clone(),
            other => ComplexKind::Dual(Box::new(other.clone())),
        };
        let direction = match self.direction {
            Direction::Lowering => Direction::Raising,
            Direction::Raising => Direction::Lowering,
        };
        GradedComplex {
            d: self.d,
            policy: self.policy,
            kind,
            direction,
            basis: self.basis.clone(),
            maps,
        }
    }

    /// Reorders each degree's basis: `perms[n][i]` is the new position of the
    /// old `i`-th basis element. Degrees without a permutation are unchanged.
    pub fn reorder(&self, perms: &BTreeMap<usize, Vec<usize>>) -> Self {
        let identity = |n: usize| (0..self.rank_in(n)).collect::<Vec<_>>();
        let perm = |n: usize| perms.get(&n).cloned().unwrap_or_else(|| identity(n));
        let basis = self
            .basis
            .iter()
            .map(|(&n, b)| {
                let p = perm(n);
                let mut out = b.clone();
                for (i, w) in b.iter().enumerate() {
                    out[p[i]] = w.clone();
                }
                (n, out)
            })
            .collect();
        let maps = self
            .maps
            .iter()
            .map(|(&n, m)| {
                let t = self.target_degree(n).expect("stored maps have a target");
                (n, m.permute(&perm(t), &perm(n)))
            })
            .collect();
        GradedComplex {
            basis,
            maps,
            kind: self.kind.clone(),
            ..*self
        }
    }

    /// Coordinates of a chain in the basis of `degree`; `None` if the chain
    /// has a term outside that basis.
    pub fn coordinates(&self, degree: usize, chain: &Chain<T>) -> Option<Vec<T>> {
        let basis = self.basis_in(degree);
        let mut out = vec![T::zero(); basis.len()];
        for (w, c) in chain.iter() {
            let i = basis.binary_search(w).ok()?;
            out[i] = c.clone();
        }
        Some(out)
    }

    /// The chain with given coordinates in the basis of `degree`.
    pub fn chain_from(&self, degree: usize, coords: &[T]) -> Chain<T> {
        self.basis_in(degree)
            .iter()
            .zip(coords)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }

    /// JSON dump: `{"d", "kind", "direction", "degrees", "boundaries"}` with
    /// boundary triplets `[row, col, coeff]` in column-major order.
    pub fn to_json(&self) -> Value {
        let degrees: BTreeMap<usize, Vec<String>> = self
            .basis
            .iter()
            .map(|(n, b)| (*n, b.iter().map(ToString::to_string).collect()))
            .collect();
        let boundaries: BTreeMap<usize, Vec<Value>> = self
            .maps
            .iter()
            .map(|(n, m)| (*n, m.triplets().map(|(r, c, v)| json!([r, c, int_json(v)])).collect()))
            .collect();
        json!({
            "d": self.d,
            "parity_policy": self.policy,
            "kind": self.kind.to_string(),
            "direction": self.direction,
            "degrees": degrees,
            "boundaries": boundaries,
        })
    }

    /// SHA-256 of the compact JSON dump.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(&self.to_json()).expect("complex dump serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// An integer as a JSON number when it fits in `i64`, else as a decimal string.
pub fn int_json<T: Coefficient>(v: &T) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

pub fn build_sub_complex<T: Coefficient>(theta: &ClosedPoset) -> GradedComplex<T> {
    GradedComplex::assemble(
        theta.members().iter().cloned(),
        theta.d(),
        theta.policy(),
        ComplexKind::Sub,
        BoundaryVariant::Full,
    )
}

/// Checks closedness before building; for sets that did not come from a
/// [`ClosedPoset`].
pub fn build_sub_complex_checked<T: Coefficient>(
    members: std::collections::BTreeSet<Pattern>,
    d: u32,
    policy: ParityPolicy,
) -> Result<GradedComplex<T>> {
    let theta = ClosedPoset::from_members(members, d, policy)?;
    Ok(build_sub_complex(&theta))
}

pub fn build_quotient_complex<T: Coefficient>(theta: &ClosedPoset) -> GradedComplex<T> {
    GradedComplex::assemble(
        theta.complement(),
        theta.d(),
        theta.policy(),
        ComplexKind::Quotient,
        BoundaryVariant::Full,
    )
}

pub fn build_full_complex<T: Coefficient>(d: u32, policy: ParityPolicy) -> Result<GradedComplex<T>> {
    check_degree(d)?;
    Ok(full_with_variant(d, policy, BoundaryVariant::Full))
}

/// The full complex under an arbitrary boundary variant (e.g. `Twisted`).
pub fn full_with_variant<T: Coefficient>(d: u32, policy: ParityPolicy, variant: BoundaryVariant) -> GradedComplex<T> {
    GradedComplex::assemble(universe(d, policy), d, policy, ComplexKind::Full, variant)
}

/// Outcome of one differential identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub pass: bool,
    /// First generator whose image is nonzero, with that image.
    pub witness: Option<(Pattern, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub d: u32,
    pub parity_policy: ParityPolicy,
    pub generators: usize,
    pub checks: Vec<IdentityCheck>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Checks `dM^2 = 0`, `dI^2 = 0`, `dM dI + dI dM = 0` and `d^2 = 0` on every
/// generator of the full complex at level `d`, truncation included.
pub fn verify_complex(d: u32, policy: ParityPolicy) -> Result<VerifyReport> {
    use BoundaryVariant::*;
    check_degree(d)?;
    let gens = universe(d, policy);
    let apply = |c: &Chain<i64>, v| boundary_of(c, d, v);
    type Identity = (&'static str, fn(&Chain<i64>, &dyn Fn(&Chain<i64>, BoundaryVariant) -> Chain<i64>) -> Chain<i64>);
    let identities: [Identity; 4] = [
        ("dM^2 = 0", |c, f| f(&f(c, MergeOnly), MergeOnly)),
        ("dI^2 = 0", |c, f| f(&f(c, InsertOnly), InsertOnly)),
        ("dM dI + dI dM = 0", |c, f| f(&f(c, InsertOnly), MergeOnly) + f(&f(c, MergeOnly), InsertOnly)),
        ("d^2 = 0", |c, f| f(&f(c, Full), Full)),
    ];
    let checks = identities
        .iter()
        .map(|(identity, compose)| {
            let witness = gens.par_iter().find_map_first(|w| {
                let image = compose(&Chain::single(w.clone(), 1), &apply);
                (!image.is_zero()).then(|| (w.clone(), image.to_string()))
            });
            IdentityCheck {
                identity,
                pass: witness.is_none(),
                witness,
            }
        })
        .collect();
    Ok(VerifyReport {
        d,
        parity_policy: policy,
        generators: gens.len(),
        checks,
    })
}
