//! Derived quantities: Euler numbers, stabilization data, complement
//! (co)homology, bouquet and stabilization checks.
//!
//! Complement groups are read off the quotient complex `Q` (universe modulo
//! `Theta`) at level `d`:
//!
//! ```text
//! H~^j(complement) = H_{d-j}(Q)        H~_j(complement) = H^{d-j}(Q)
//! ```
//!
//! At `j = 0` the right-hand sides are unreduced, so one copy of `Z` is
//! removed whenever `Q` is nonempty.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{build_quotient_complex, build_sub_complex, GradedComplex};
use crate::error::{Error, Result};
use crate::homology::{complex_homology, HomologyGroup, HomologyTable};
use crate::pattern::Pattern;
use crate::poset::{build_poset, check_degree, ClosedPoset, Family, ParityPolicy, PosetSpec};
use crate::report::{serialize_rational, Verdict};
use crate::snf::SnfConfig;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerNumber {
    pub d: u32,
    pub parity_policy: ParityPolicy,
    /// `sum (-1)^(d - |w|') ` over members.
    pub chi: i64,
    /// `|chi|`.
    pub a: u64,
    /// Euler characteristic of the one-point compactification, `chi + 1`.
    pub compactification_chi: i64,
    /// Member count per degree.
    pub census: BTreeMap<usize, usize>,
}

pub fn euler_number(theta: &ClosedPoset) -> EulerNumber {
    let d = theta.d();
    let mut census = BTreeMap::new();
    for w in theta.members() {
        *census.entry((d - w.reduced_norm()) as usize).or_insert(0) += 1;
    }
    let chi: i64 = census
        .iter()
        .map(|(n, c)| if n % 2 == 0 { *c as i64 } else { -(*c as i64) })
        .sum();
    EulerNumber {
        d,
        parity_policy: theta.policy(),
        chi,
        a: chi.unsigned_abs(),
        compactification_chi: chi + 1,
        census,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityQuantities {
    pub d: u32,
    /// Max of `|w| - 2|w|'` over maximal elements.
    pub eta: i64,
    /// `(d + eta) / 2`.
    #[serde(serialize_with = "serialize_rational")]
    pub psi: Ratio<i64>,
    /// `d - psi`.
    #[serde(serialize_with = "serialize_rational")]
    pub xi: Ratio<i64>,
    pub maximal_elements_used: Vec<Pattern>,
}

pub fn stability_quantities(theta: &ClosedPoset) -> Result<StabilityQuantities> {
    let maximal = theta.maximal_elements();
    let eta = maximal
        .iter()
        .map(|w| i64::from(w.norm()) - 2 * i64::from(w.reduced_norm()))
        .max()
        .ok_or(Error::EmptyPoset("stability_quantities"))?;
    let d = i64::from(theta.d());
    let psi = Ratio::new(d + eta, 2);
    Ok(StabilityQuantities {
        d: theta.d(),
        eta,
        psi,
        xi: Ratio::from_integer(d) - psi,
        maximal_elements_used: maximal,
    })
}

/// Reduced homology of the one-point compactification of the union of strata.
pub fn sub_complex_homology(theta: &ClosedPoset, config: &SnfConfig) -> Result<HomologyTable> {
    complex_homology(&build_sub_complex::<i64>(theta), config)
}

/// Re-indexes a quotient table by `j = d - n` and reduces at `j = 0`.
fn complement_table(table: HomologyTable, d: u32, nonempty: bool) -> HomologyTable {
    let d = d as usize;
    let mut out = HomologyTable {
        groups: BTreeMap::new(),
        fingerprint: table.fingerprint,
    };
    for (n, mut g) in table.groups {
        let j = d - n;
        if j == 0 && nonempty {
            g.rank = g.rank.saturating_sub(1);
        }
        out.insert(j, g);
    }
    out
}

/// `H~^j` of the complement, indexed by `j`.
pub fn complement_cohomology(theta: &ClosedPoset, config: &SnfConfig) -> Result<HomologyTable> {
    let q = build_quotient_complex::<i64>(theta);
    let h = complex_homology(&q, config)?;
    Ok(complement_table(h, theta.d(), !q.is_empty()))
}

/// `H~_j` of the complement, indexed by `j`.
pub fn complement_homology(theta: &ClosedPoset, config: &SnfConfig) -> Result<HomologyTable> {
    let q = build_quotient_complex::<i64>(theta);
    let h = complex_homology(&q.dualize(), config)?;
    Ok(complement_table(h, theta.d(), !q.is_empty()))
}

/// Universal coefficients between the two complement tables: ranks agree in
/// each degree and the torsion of `H~_j` is that of `H~^(j+1)`.
pub fn uct_check(theta: &ClosedPoset, config: &SnfConfig) -> Result<Verdict> {
    let co = complement_cohomology(theta, config)?;
    let ho = complement_homology(theta, config)?;
    let d = theta.d() as usize;
    let bad: Vec<Value> = (0..=d)
        .filter(|&j| co.rank(j) != ho.rank(j) || ho.group(j).torsion != co.group(j + 1).torsion)
        .map(|j| json!({"j": j, "cohomology": co.group(j), "homology": ho.group(j), "cohomology_next": co.group(j + 1)}))
        .collect();
    Ok(Verdict::new(
        "complement cohomology and homology satisfy universal coefficients",
        json!([0, d]),
        bad.is_empty(),
        json!({"d": d, "spec": theta.spec(), "cohomology": co, "homology": ho, "violations": bad}),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub lower: HomologyGroup,
    pub upper: HomologyGroup,
    pub agree: bool,
    pub in_range: bool,
}

/// One `e -> e + 2` step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizationStep {
    pub from: u32,
    pub to: u32,
    pub quantities: StabilityQuantities,
    /// Complement degrees `j <= to - psi(to)` must agree.
    #[serde(serialize_with = "serialize_rational")]
    pub complement_bound: Ratio<i64>,
    /// `H_j(from)` vs `H_(j+2)(to)` of the compactification must agree for
    /// `j >= psi(to) - 1`.
    #[serde(serialize_with = "serialize_rational")]
    pub compactification_bound: Ratio<i64>,
    pub complement: Vec<DegreeComparison>,
    pub compactification: Vec<DegreeComparison>,
    /// Lowest complement degree that disagrees, in range or not.
    pub first_disagreement: Option<usize>,
    pub pass: bool,
    /// Full complexes at both levels, attached when the step fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizationReport {
    pub spec: PosetSpec,
    pub parity_policy: ParityPolicy,
    pub d: u32,
    pub d_prime: u32,
    pub steps: Vec<StabilizationStep>,
    pub pass: bool,
}

impl StabilizationReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::new(
            "complement homology stabilizes in the certified range",
            json!([self.d, self.d_prime]),
            self.pass,
            serde_json::to_value(self).expect("report serializes"),
        )
    }

    /// In-range disagreements as `(from, to, kind, degree)`.
    pub fn findings(&self) -> Vec<(u32, u32, &'static str, usize)> {
        let mut out = Vec::new();
        for s in &self.steps {
            for c in s.complement.iter().filter(|c| c.in_range && !c.agree) {
                out.push((s.from, s.to, "complement", c.degree));
            }
            for c in s.compactification.iter().filter(|c| c.in_range && !c.agree) {
                out.push((s.from, s.to, "compactification", c.degree));
            }
        }
        out
    }
}

struct Level {
    theta: ClosedPoset,
    sub: GradedComplex<i64>,
    quotient: GradedComplex<i64>,
    sub_h: HomologyTable,
    complement_h: HomologyTable,
}

impl Level {
    fn new(theta: ClosedPoset, config: &SnfConfig) -> Result<Self> {
        let sub = build_sub_complex::<i64>(&theta);
        let quotient = build_quotient_complex::<i64>(&theta);
        let sub_h = complex_homology(&sub, config)?;
        let complement_h = complement_table(complex_homology(&quotient.dualize(), config)?, theta.d(), !quotient.is_empty());
        Ok(Level {
            theta,
            sub,
            quotient,
            sub_h,
            complement_h,
        })
    }
}

/// Compares complement homology and compactification homology across each
/// step `e -> e + 2` from `d` to `d_prime`. Generator specs are lifted;
/// families are rebuilt at each level.
pub fn stabilization_report(
    spec: &PosetSpec,
    d: u32,
    d_prime: u32,
    policy: ParityPolicy,
    config: &SnfConfig,
) -> Result<StabilizationReport> {
    check_degree(d)?;
    check_degree(d_prime)?;
    if d_prime < d {
        return Err(Error::InvalidLift { from: d, to: d_prime });
    }
    let base = build_poset(spec, d, policy)?;
    let mut thetas = vec![base];
    for e in (d + 2..=d_prime).step_by(2) {
        let next = match spec {
            PosetSpec::Generators(_) => thetas.last().expect("nonempty").lift(e)?,
            PosetSpec::Family(_) => build_poset(spec, e, policy)?,
        };
        thetas.push(next);
    }
    let levels = thetas
        .into_par_iter()
        .map(|t| Level::new(t, config))
        .collect::<Result<Vec<_>>>()?;
    let steps = levels
        .windows(2)
        .map(|pair| compare_levels(&pair[0], &pair[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizationReport {
        spec: spec.clone(),
        parity_policy: policy,
        d,
        d_prime,
        pass: steps.iter().all(|s| s.pass),
        steps,
    })
}

fn compare_levels(lower: &Level, upper: &Level) -> Result<StabilizationStep> {
    let (from, to) = (lower.theta.d(), upper.theta.d());
    let quantities = stability_quantities(&upper.theta)?;
    let complement_bound = Ratio::from_integer(i64::from(to)) - quantities.psi;
    let compactification_bound = quantities.psi - 1;
    let complement: Vec<DegreeComparison> = (0..=to as usize)
        .map(|j| {
            let (a, b) = (lower.complement_h.group(j), upper.complement_h.group(j));
            DegreeComparison {
                degree: j,
                agree: a == b,
                in_range: Ratio::from_integer(j as i64) <= complement_bound,
                lower: a,
                upper: b,
            }
        })
        .collect();
    let compactification: Vec<DegreeComparison> = (0..=from as usize)
        .map(|j| {
            let (a, b) = (lower.sub_h.group(j), upper.sub_h.group(j + 2));
            DegreeComparison {
                degree: j,
                agree: a == b,
                in_range: Ratio::from_integer(j as i64) >= compactification_bound,
                lower: a,
                upper: b,
            }
        })
        .collect();
    let pass = complement
        .iter()
        .chain(&compactification)
        .all(|c| c.agree || !c.in_range);
    let first_disagreement = complement.iter().find(|c| !c.agree).map(|c| c.degree);
    let matrices = (!pass).then(|| {
        json!({
            "lower": {"d": from, "members": lower.theta.members(), "sub": lower.sub.to_json(), "quotient": lower.quotient.to_json()},
            "upper": {"d": to, "members": upper.theta.members(), "sub": upper.sub.to_json(), "quotient": upper.quotient.to_json()},
        })
    });
    Ok(StabilizationStep {
        from,
        to,
        quantities,
        complement_bound,
        compactification_bound,
        complement,
        compactification,
        first_disagreement,
        pass,
        matrices,
    })
}

/// Sphere counts stated for small cases in the literature, kept for
/// comparison only.
pub fn published_sphere_count(d: u32, k: u32, q: u32) -> Option<u64> {
    match (d, k, q) {
        (6, 4, 0) => Some(4),
        (6, 3, 0) => Some(10),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BouquetReport {
    pub d: u32,
    pub k: u32,
    pub q: u32,
    pub parity_policy: ParityPolicy,
    /// Expected sphere dimension `d - k`.
    pub degree: usize,
    pub euler: EulerNumber,
    pub homology: HomologyTable,
    pub free: bool,
    pub concentrated: bool,
    /// Rank of the homology in degree `d - k`.
    pub rank: usize,
    pub pass: bool,
    /// Census Euler number of the same family with every norm parity admitted.
    pub all_parity_chi: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published_count: Option<u64>,
    /// `Some(false)` flags a computed count that differs from the published one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published_count_matches: Option<bool>,
}

impl BouquetReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::new(
            format!(
                "reduced-norm >= {} family at d = {} is a bouquet of {}-spheres",
                self.k, self.d, self.degree
            ),
            json!([self.d, self.k, self.q]),
            self.pass,
            serde_json::to_value(self).expect("report serializes"),
        )
    }
}

/// Checks that `|w|' >= k, |w| >= q` has free homology concentrated in
/// degree `d - k` of rank `|chi|`.
pub fn bouquet_check(d: u32, k: u32, q: u32, policy: ParityPolicy, config: &SnfConfig) -> Result<BouquetReport> {
    check_degree(d)?;
    if k == 0 || k >= d {
        return Err(Error::InvalidParameter(format!("need 1 <= k < d, got k = {k}, d = {d}")));
    }
    if q > d || (policy == ParityPolicy::Matched && q % 2 != d % 2) {
        return Err(Error::InvalidParameter(format!("need q <= d and q = d mod 2, got q = {q}, d = {d}")));
    }
    let spec = PosetSpec::Family(Family::ReducedNormAtLeast { k, q });
    let theta = build_poset(&spec, d, policy)?;
    let euler = euler_number(&theta);
    let homology = sub_complex_homology(&theta, config)?;
    let all_parity_chi = euler_number(&build_poset(&spec, d, ParityPolicy::All)?).chi;
    let degree = (d - k) as usize;
    let free = homology.groups.values().all(HomologyGroup::is_free);
    let concentrated = homology.groups.keys().all(|&n| n == degree);
    let rank = homology.rank(degree);
    let published_count = published_sphere_count(d, k, q);
    Ok(BouquetReport {
        d,
        k,
        q,
        parity_policy: policy,
        degree,
        pass: free && concentrated && rank as u64 == euler.a,
        euler,
        homology,
        free,
        concentrated,
        rank,
        all_parity_chi,
        published_count,
        published_count_matches: published_count.map(|c| c == rank as u64),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodimensionReport {
    pub min_reduced_norm: u32,
    pub max_reduced_norm_maximal: u32,
    pub max_reduced_norm: u32,
}

/// Both readings of the codimension of the union of strata: the minimum of
/// `|w|'` and the maxima over maximal elements and over all members.
pub fn codimension_report(theta: &ClosedPoset) -> Result<CodimensionReport> {
    let rn = |w: &Pattern| w.reduced_norm();
    let min = theta.members().iter().map(rn).min().ok_or(Error::EmptyPoset("codimension_report"))?;
    Ok(CodimensionReport {
        min_reduced_norm: min,
        max_reduced_norm_maximal: theta.maximal_elements().iter().map(rn).max().unwrap_or(min),
        max_reduced_norm: theta.members().iter().map(rn).max().unwrap_or(min),
    })
}
