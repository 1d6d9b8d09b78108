//! Integer homology of graded complexes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::complex::{int_json, GradedComplex};
use crate::error::Result;
use crate::matrix::SparseMatrix;
use crate::scalar::Coefficient;
use crate::snf::{smith_normal_form, SmithForm, SnfConfig, SnfError};

/// `Z^rank + Z/t_1 + ... + Z/t_m` with `t_1 | ... | t_m`, all `t_i > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup { rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Nonzero groups by degree; absent degrees are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyTable {
    pub groups: BTreeMap<usize, HomologyGroup>,
    /// SHA-256 of the source complex dump.
    pub fingerprint: String,
}

impl HomologyTable {
    pub fn group(&self, degree: usize) -> HomologyGroup {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.groups.get(&degree).map_or(0, |g| g.rank)
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(n, g)| if n % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }

    /// Degrees with a nonzero group.
    pub fn support(&self) -> Vec<usize> {
        self.groups.keys().copied().collect()
    }

    pub(crate) fn insert(&mut self, degree: usize, group: HomologyGroup) {
        if group.is_zero() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, group);
        }
    }
}

impl Serialize for HomologyGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("HomologyGroup", 2)?;
        s.serialize_field("rank", &self.rank)?;
        s.serialize_field("torsion", &self.torsion.iter().map(int_json).collect::<Vec<_>>())?;
        s.end()
    }
}

/// `{"fingerprint": ..., "groups": [{"degree", "rank", "torsion"}, ...]}`.
impl Serialize for HomologyTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let groups: Vec<_> = self
            .groups
            .iter()
            .map(|(n, g)| json!({"degree": n, "rank": g.rank, "torsion": g.torsion.iter().map(int_json).collect::<Vec<_>>()}))
            .collect();
        let mut s = serializer.serialize_struct("HomologyTable", 2)?;
        s.serialize_field("fingerprint", &self.fingerprint)?;
        s.serialize_field("groups", &groups)?;
        s.end()
    }
}

/// Smith form with an `i64` fast path; promotes to `BigInt` on overflow.
pub fn smith_form_promoting<T: Coefficient>(m: &SparseMatrix<T>, config: &SnfConfig) -> Result<SmithForm<BigInt>> {
    if let Some(small) = m.try_convert::<i64>() {
        match smith_normal_form(&small, config) {
            Ok(form) => {
                return Ok(SmithForm {
                    invariants: form.invariants.into_iter().map(BigInt::from).collect(),
                })
            }
            Err(SnfError::Overflow) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let wide = m.try_convert::<BigInt>().expect("BigInt holds every coefficient");
    Ok(smith_normal_form(&wide, config)?)
}

/// Homology of a chain complex, or cohomology when the maps raise degree.
///
/// `rank H_n = dim C_n - rank(out of n) - rank(into n)`; torsion of `H_n`
/// is the nontrivial invariant factors of the map into degree `n`.
pub fn complex_homology<T: Coefficient>(c: &GradedComplex<T>, config: &SnfConfig) -> Result<HomologyTable> {
    c.check_square_zero()?;
    let forms: BTreeMap<usize, SmithForm<BigInt>> = c
        .maps()
        .par_iter()
        .map(|(&n, m)| smith_form_promoting(m, config).map(|f| (n, f)))
        .collect::<Result<_>>()?;
    let mut table = HomologyTable {
        groups: BTreeMap::new(),
        fingerprint: c.fingerprint(),
    };
    for (&n, basis) in c.basis() {
        let out_rank = forms.get(&n).map_or(0, SmithForm::rank);
        let incoming = match c.direction() {
            crate::complex::Direction::Lowering => forms.get(&(n + 1)),
            crate::complex::Direction::Raising => n.checked_sub(1).and_then(|m| forms.get(&m)),
        };
        let in_rank = incoming.map_or(0, SmithForm::rank);
        let torsion = incoming.map_or_else(Vec::new, |f| f.torsion().cloned().collect());
        table.insert(
            n,
            HomologyGroup {
                rank: basis.len() - out_rank - in_rank,
                torsion,
            },
        );
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_full_complex, build_quotient_complex, build_sub_complex};
    use crate::pattern::Pattern;
    use crate::poset::{build_poset, Family, ParityPolicy, PosetSpec};

    fn hom(spec: PosetSpec, d: u32) -> HomologyTable {
        let theta = build_poset(&spec, d, ParityPolicy::Matched).unwrap();
        complex_homology(&build_sub_complex::<i64>(&theta), &SnfConfig::default()).unwrap()
    }

    #[test]
    fn bouquet_of_four_two_spheres() {
        let h = hom(PosetSpec::Family(Family::ReducedNormAtLeast { k: 4, q: 0 }), 6);
        assert_eq!(h.groups, BTreeMap::from([(2, HomologyGroup::free(4))]));
    }

    #[test]
    fn empty_and_single_cell() {
        assert!(hom(PosetSpec::generators([]), 6).is_zero());
        let h = hom(PosetSpec::generators(["(6)".parse::<Pattern>().unwrap()]), 6);
        assert_eq!(h.groups, BTreeMap::from([(1, HomologyGroup::free(1))]));
    }

    #[test]
    fn full_complex_is_reduced_sphere() {
        for d in [2, 4, 6] {
            let c = build_full_complex::<i64>(d, ParityPolicy::Matched).unwrap();
            let h = complex_homology(&c, &SnfConfig::default()).unwrap();
            assert_eq!(h.groups, BTreeMap::from([(d as usize, HomologyGroup::free(1))]));
        }
    }

    #[test]
    fn cohomology_of_dual_shifts_torsion() {
        // A single map of multiplication by 2: H_0 = Z/2, H^1 = Z/2.
        let theta = build_poset(&PosetSpec::Family(Family::MaxEntryAtLeast { k: 3 }), 6, ParityPolicy::Matched).unwrap();
        let q = build_quotient_complex::<i64>(&theta);
        let h = complex_homology(&q, &SnfConfig::default()).unwrap();
        let co = complex_homology(&q.dualize(), &SnfConfig::default()).unwrap();
        for n in 0..=7 {
            assert_eq!(h.rank(n), co.rank(n));
            assert_eq!(co.group(n).torsion, h.group(n.wrapping_sub(1)).torsion);
        }
    }

    #[test]
    fn display() {
        let g = HomologyGroup {
            rank: 2,
            torsion: vec![BigInt::from(2)],
        };
        assert_eq!(g.to_string(), "Z^2 + Z/2");
        assert_eq!(HomologyGroup::default().to_string(), "0");
    }
}
