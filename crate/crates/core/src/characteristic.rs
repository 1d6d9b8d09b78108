//! Characteristic chains of single patterns and the graded ring on `e_m`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::chain::Chain;
use crate::complex::{boundary_chain, build_quotient_complex, build_sub_complex, degree_of, int_json, BoundaryVariant};
use crate::error::{Error, Result};
use crate::homology::smith_form_promoting;
use crate::invariants::complement_cohomology;
use crate::matrix::SparseMatrix;
use crate::pattern::Pattern;
use crate::poset::{build_poset, check_degree, ClosedPoset, Family, ParityPolicy, PosetSpec};
use crate::report::Verdict;
use crate::scalar::Coefficient;
use crate::snf::SnfConfig;

/// Order of a homology class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassOrder {
    Zero,
    Finite(BigInt),
    Infinite,
}

impl ClassOrder {
    pub fn is_nontrivial(&self) -> bool {
        *self != ClassOrder::Zero
    }
}

impl Serialize for ClassOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ClassOrder::Zero => s.serialize_str("zero"),
            ClassOrder::Infinite => s.serialize_str("infinite"),
            ClassOrder::Finite(n) => int_json(n).serialize(s),
        }
    }
}

/// Order of `v` modulo the column span of `incoming` (assumed to be a cycle).
///
/// With `L` the image lattice and `L' = L + Zv`: equal ranks mean `v` is
/// torsion of order `[L' : L]`, which is the ratio of the products of the
/// invariant factors.
pub fn class_order<T: Coefficient>(incoming: Option<&SparseMatrix<T>>, v: &[T], config: &SnfConfig) -> Result<ClassOrder> {
    if v.iter().all(Zero::is_zero) {
        return Ok(ClassOrder::Zero);
    }
    let Some(b) = incoming.filter(|b| !b.is_zero()) else {
        return Ok(ClassOrder::Infinite);
    };
    let mut augmented = SparseMatrix::from_triplets(
        b.rows(),
        b.cols() + 1,
        b.triplets().map(|(r, c, x)| (r, c, x.clone())),
    );
    for (r, x) in v.iter().enumerate() {
        augmented.add_to(r, b.cols(), x.clone());
    }
    let plain = smith_form_promoting(b, config)?;
    let wide = smith_form_promoting(&augmented, config)?;
    if wide.rank() > plain.rank() {
        return Ok(ClassOrder::Infinite);
    }
    let prod = |xs: &[BigInt]| xs.iter().fold(BigInt::one(), |a, x| a * x);
    let index = prod(&plain.invariants) / prod(&wide.invariants);
    Ok(if index.is_one() { ClassOrder::Zero } else { ClassOrder::Finite(index) })
}

fn check_theta_input(w: &Pattern, d: u32) -> Result<()> {
    check_degree(d)?;
    if w.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if w.reduced_norm() == 0 {
        return Err(Error::InvalidParameter(format!("{w} has reduced norm 0")));
    }
    Ok(())
}

/// The boundary of a single cell, viewed as a cycle among the patterns
/// strictly below it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaDatum<T: Coefficient> {
    pub omega: Pattern,
    pub d: u32,
    pub boundary: Chain<T>,
    /// Patterns strictly below `omega`.
    pub ambient: ClosedPoset,
    /// Degree of the boundary cycle, `d - |w|' - 1`.
    pub witness_class_degree: usize,
    /// The boundary is a cycle of the ambient sub-complex.
    pub is_cycle: bool,
    /// The boundary is the image of `omega` in the sub-complex below-or-at `omega`.
    pub is_boundary_of_generator: bool,
    /// Nothing of the ambient poset sits above the boundary's degree, so a
    /// nonzero cycle there cannot be a boundary.
    pub top_grading: bool,
    pub class: ClassOrder,
}

pub fn theta_chain<T: Coefficient>(w: &Pattern, d: u32, config: &SnfConfig) -> Result<ThetaDatum<T>> {
    check_theta_input(w, d)?;
    let boundary = boundary_chain::<T>(w, d, BoundaryVariant::Full)?;
    let policy = ParityPolicy::Matched;
    let ambient = build_poset(&PosetSpec::Family(Family::StrictlyBelow { omega: w.clone() }), d, policy)?;
    let closed = build_poset(&PosetSpec::Family(Family::AtOrBelow { omega: w.clone() }), d, policy)?;
    let n = degree_of(w, d);
    let below = build_sub_complex::<T>(&ambient);
    let at_or_below = build_sub_complex::<T>(&closed);

    let coords = below.coordinates(n - 1, &boundary);
    let is_cycle = coords.as_ref().is_some_and(|v| match below.map_from(n - 1) {
        Some(m) => m.apply(v).iter().all(Zero::is_zero),
        None => true,
    });
    let is_boundary_of_generator = {
        let e = at_or_below
            .coordinates(n, &Chain::single(w.clone(), T::one()))
            .expect("generator is a member");
        let image = at_or_below.map_from(n).map(|m| m.apply(&e)).unwrap_or_default();
        at_or_below.chain_from(n - 1, &image) == boundary
    };
    let top_grading = below.basis().keys().all(|&m| m < n);
    let class = match &coords {
        Some(v) => class_order(below.map_into(n - 1), v, config)?,
        None => ClassOrder::Zero,
    };
    Ok(ThetaDatum {
        omega: w.clone(),
        d,
        boundary,
        ambient,
        witness_class_degree: n - 1,
        is_cycle,
        is_boundary_of_generator,
        top_grading,
        class,
    })
}

/// The generator `omega` as a class of the quotient complex modulo the
/// patterns strictly below it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualClass {
    pub omega: Pattern,
    pub d: u32,
    pub degree: usize,
    /// Representative: the generator itself.
    pub representative: Chain<BigInt>,
    pub is_cycle: bool,
    pub class: ClassOrder,
}

pub fn theta_dual_class(w: &Pattern, d: u32, config: &SnfConfig) -> Result<DualClass> {
    check_theta_input(w, d)?;
    boundary_chain::<i64>(w, d, BoundaryVariant::Full)?;
    let ambient = build_poset(&PosetSpec::Family(Family::StrictlyBelow { omega: w.clone() }), d, ParityPolicy::Matched)?;
    let q = build_quotient_complex::<i64>(&ambient);
    let n = degree_of(w, d);
    let e = q
        .coordinates(n, &Chain::single(w.clone(), 1))
        .expect("generator lies outside the poset strictly below it");
    let is_cycle = q.map_from(n).is_none_or(|m| m.apply(&e).iter().all(Zero::is_zero));
    Ok(DualClass {
        omega: w.clone(),
        d,
        degree: n,
        representative: Chain::single(w.clone(), BigInt::one()),
        is_cycle,
        class: class_order(q.map_into(n), &e, config)?,
    })
}

/// Evaluates a cocycle of the quotient complex (modulo the patterns strictly
/// below `omega`) on the generator class. Rejects chains that are not
/// cocycles or use patterns outside the quotient basis in that degree.
pub fn theta_pairing<T: Coefficient>(w: &Pattern, d: u32, cocycle: &Chain<T>) -> Result<T> {
    check_theta_input(w, d)?;
    let ambient = build_poset(&PosetSpec::Family(Family::StrictlyBelow { omega: w.clone() }), d, ParityPolicy::Matched)?;
    let dual = build_quotient_complex::<T>(&ambient).dualize();
    let n = degree_of(w, d);
    let phi = dual
        .coordinates(n, cocycle)
        .ok_or_else(|| Error::InvalidParameter(format!("cochain has terms outside degree {n} of the quotient")))?;
    if let Some(m) = dual.map_from(n) {
        if !m.apply(&phi).iter().all(Zero::is_zero) {
            return Err(Error::InvalidParameter("cochain is not a cocycle".into()));
        }
    }
    Ok(cocycle.coefficient(w))
}

/// `(1, 2, ..., 2, 1)` with `n` twos.
pub fn pattern_1221(n: usize) -> Pattern {
    let mut e = vec![1];
    e.extend(std::iter::repeat(2).take(n));
    e.push(1);
    Pattern::new(e).expect("positive entries")
}

/// The alternating sum of merges of `(1, 2^n, 1)` at `d = 2n + 2`, where
/// every insert is truncated.
pub fn chain_1221<T: Coefficient>(n: usize) -> Result<Chain<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let w = pattern_1221(n);
    let out: Chain<T> = (1..=n + 1)
        .map(|k| {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            (w.merge_unchecked(k), T::from_small(sign))
        })
        .collect();
    debug_assert_eq!(Ok(&out), boundary_chain::<T>(&w, 2 * n as u32 + 2, BoundaryVariant::Full).as_ref());
    Ok(out)
}

/// An element of the truncated graded ring with basis `e_0 = 1, e_1, ...,
/// e_{d/k}`, where `e_m` has degree `m (k - 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VassilievElement {
    d: u32,
    k: u32,
    coeffs: BTreeMap<u32, BigInt>,
}

impl VassilievElement {
    pub fn zero(d: u32, k: u32) -> Result<Self> {
        check_degree(d)?;
        if k < 3 {
            return Err(Error::InvalidParameter(format!("need k >= 3, got {k}")));
        }
        Ok(VassilievElement {
            d,
            k,
            coeffs: BTreeMap::new(),
        })
    }

    /// `e_m`; zero when `m` exceeds `d / k`.
    pub fn basis(d: u32, k: u32, m: u32) -> Result<Self> {
        let mut out = Self::zero(d, k)?;
        out.add_term(m, BigInt::one());
        Ok(out)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn top_index(&self) -> u32 {
        self.d / self.k
    }

    pub fn degree_of(&self, m: u32) -> u32 {
        m * (self.k - 2)
    }

    pub fn coefficient(&self, m: u32) -> BigInt {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, BigInt> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, m: u32, c: BigInt) {
        if m > self.top_index() || c.is_zero() {
            return;
        }
        let sum = self.coefficient(m) + c;
        if sum.is_zero() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if (self.d, self.k) != (other.d, other.k) {
            return Err(Error::RingMismatch(self.d, self.k, other.d, other.k));
        }
        Ok(())
    }
}

impl Serialize for VassilievElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: BTreeMap<String, Value> = self.coeffs.iter().map(|(m, c)| (m.to_string(), int_json(c))).collect();
        let mut st = s.serialize_struct("VassilievElement", 3)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// `e_l * e_m` as `(coefficient, index)`, before truncation.
///
/// Even `k`: `C(l+m, l) e_{l+m}`. Odd `k`: odd times odd is zero,
/// `e_{2l} e_{2m} = C(l+m, l) e_{2l+2m}` and
/// `e_{2l+1} e_{2m} = C(l+m, l) e_{2l+2m+1}`.
pub fn basis_product(k: u32, l: u32, m: u32) -> Option<(BigInt, u32)> {
    let choose = |a: u32, b: u32| binomial(BigInt::from(a + b), BigInt::from(a));
    if k % 2 == 0 {
        return Some((choose(l, m), l + m));
    }
    if l % 2 == 1 && m % 2 == 1 {
        return None;
    }
    Some((choose(l / 2, m / 2), l + m))
}

pub fn vassiliev_mul(a: &VassilievElement, b: &VassilievElement) -> Result<VassilievElement> {
    a.check_same_ring(b)?;
    let mut out = VassilievElement::zero(a.d, a.k)?;
    for (l, x) in &a.coeffs {
        for (m, y) in &b.coeffs {
            if let Some((c, idx)) = basis_product(a.k, *l, *m) {
                out.add_term(idx, c * x * y);
            }
        }
    }
    Ok(out)
}

/// Complement cohomology of `max entry >= k` against the additive degrees of
/// the ring: `Z` in each degree `(k-2) m`, `1 <= m <= d/k`, zero elsewhere.
pub fn arnold_crosscheck(d: u32, k: u32, config: &SnfConfig) -> Result<Verdict> {
    check_degree(d)?;
    if k < 3 || k > d {
        return Err(Error::InvalidParameter(format!("need 3 <= k <= d, got k = {k}, d = {d}")));
    }
    let theta = build_poset(&PosetSpec::Family(Family::MaxEntryAtLeast { k }), d, ParityPolicy::Matched)?;
    let co = complement_cohomology(&theta, config)?;
    let expected: Vec<usize> = (1..=d / k).map(|m| (m * (k - 2)) as usize).collect();
    let per_degree: Vec<Value> = (0..=d as usize)
        .map(|j| {
            let want = usize::from(expected.contains(&j));
            let got = co.group(j);
            json!({"j": j, "expected_rank": want, "group": got.to_string(), "match": got.rank == want && got.is_free()})
        })
        .collect();
    let pass = per_degree.iter().all(|v| v["match"] == json!(true));
    Ok(Verdict::new(
        format!("max-entry >= {k} complement at d = {d} has Z exactly in degrees (k-2)m"),
        json!(expected),
        pass,
        json!({"d": d, "k": k, "degrees": per_degree, "cohomology": co}),
    ))
}
