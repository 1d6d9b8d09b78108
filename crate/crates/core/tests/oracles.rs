//! Library results against brute-force reference computations.

mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use omega_core::complex::{boundary_chain, build_full_complex, build_quotient_complex, build_sub_complex, GradedComplex};
use omega_core::poset::universe;
use omega_core::*;

fn p(s: &str) -> Pattern {
    s.parse().unwrap()
}

#[test]
fn universe_matches_brute_force() {
    for d in (2..=10).step_by(2) {
        let got: Vec<Vec<u32>> = universe(d, ParityPolicy::Matched).iter().map(|w| w.entries().to_vec()).collect();
        let mut want = common::brute_universe(d);
        let mut got_sorted = got.clone();
        got_sorted.sort();
        want.sort();
        assert_eq!(got_sorted, want, "d = {d}");
    }
}

#[test]
fn boundary_matches_definition() {
    for d in (2..=10).step_by(2) {
        for w in universe(d, ParityPolicy::Matched) {
            let got: BTreeMap<Vec<u32>, i64> = boundary_chain::<i64>(&w, d, BoundaryVariant::Full)
                .unwrap()
                .iter()
                .map(|(v, c)| (v.entries().to_vec(), *c))
                .collect();
            assert_eq!(got, common::brute_boundary(w.entries(), d), "{w} at d = {d}");
        }
    }
}

/// `dim H_n(F_p) = rank H_n + #{p | t in torsion H_n} + #{p | t in torsion H_(n-1)}`.
fn check_against_fields(c: &GradedComplex<i64>, label: &str) {
    let table = complex_homology(c, &SnfConfig::default()).unwrap();
    let dims: BTreeMap<usize, usize> = c.basis().iter().map(|(n, b)| (*n, b.len())).collect();
    for prime in [0i64, 2, 3, 5, 7] {
        let field = common::betti_mod(&dims, c.maps(), prime);
        let divisible = |n: Option<usize>| {
            n.map_or(0, |n| {
                table
                    .group(n)
                    .torsion
                    .iter()
                    .filter(|t| prime > 0 && (*t % BigInt::from(prime)) == BigInt::from(0))
                    .count()
            })
        };
        let predicted: BTreeMap<usize, usize> = dims
            .keys()
            .map(|&n| (n, table.rank(n) + divisible(Some(n)) + divisible(n.checked_sub(1))))
            .filter(|(_, b)| *b > 0)
            .collect();
        assert_eq!(predicted, field, "{label}, p = {prime}");
    }
}

#[test]
fn homology_agrees_with_field_ranks() {
    for d in [4u32, 6, 8] {
        let full = build_full_complex::<i64>(d, ParityPolicy::Matched).unwrap();
        check_against_fields(&full, &format!("full d={d}"));
        let families = [
            Family::ReducedNormAtLeast { k: 2, q: 0 },
            Family::ReducedNormAtLeast { k: 3, q: 2 },
            Family::MaxEntryAtLeast { k: 3 },
            Family::MaxEntryAtLeast { k: 4 },
            Family::FreeGroupComplement,
            Family::StrictlyBelow { omega: p("(1,2,1)") },
            Family::AtOrBelow { omega: p("(2,2)") },
        ];
        for f in families {
            let theta = build_poset(&PosetSpec::Family(f.clone()), d, ParityPolicy::Matched).unwrap();
            check_against_fields(&build_sub_complex(&theta), &format!("sub {f:?} d={d}"));
            check_against_fields(&build_quotient_complex(&theta), &format!("quotient {f:?} d={d}"));
        }
    }
}

#[test]
fn census_examples() {
    let theta = build_poset(&PosetSpec::Family(Family::ReducedNormAtLeast { k: 4, q: 0 }), 6, ParityPolicy::Matched).unwrap();
    let cells: Vec<String> = theta.members().iter().map(ToString::to_string).collect();
    assert_eq!(cells, ["(1,5)", "(2,4)", "(3,3)", "(4,2)", "(5,1)", "(6)"]);
}
