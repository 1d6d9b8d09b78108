//! Algebraic properties checked over generated or exhaustive inputs.

use std::collections::{BTreeMap, BTreeSet};

use omega_core::chain::Chain as GenericChain;
use omega_core::characteristic::{basis_product, chain_1221, pattern_1221, ClassOrder};
use omega_core::complex::{boundary_chain, boundary_of, build_full_complex, build_sub_complex, full_with_variant, GradedComplex};
use omega_core::invariants::{sub_complex_homology, uct_check};
use omega_core::poset::{closure_violation, universe};
use omega_core::*;
use proptest::prelude::*;

fn p(s: &str) -> Pattern {
    s.parse().unwrap()
}

fn cfg() -> SnfConfig {
    SnfConfig::default()
}

fn built_in_families(d: u32) -> Vec<PosetSpec> {
    let mut out = vec![
        PosetSpec::Family(Family::Full),
        PosetSpec::Family(Family::FreeGroupComplement),
        PosetSpec::generators([]),
    ];
    for k in 1..d {
        out.push(PosetSpec::Family(Family::ReducedNormAtLeast { k, q: 0 }));
    }
    for k in 2..=d {
        out.push(PosetSpec::Family(Family::MaxEntryAtLeast { k }));
    }
    out
}

fn pattern_strategy(max_norm: u32) -> impl Strategy<Value = Pattern> {
    prop::collection::vec(1u32..=4, 0..=6).prop_filter_map("norm bound", move |e| {
        let w = Pattern::new(e).ok()?;
        (w.norm() <= max_norm).then_some(w)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boundary_squares_to_zero(w in pattern_strategy(12), extra in 0u32..4) {
        let d = w.norm() + w.norm() % 2 + 2 * extra;
        let d = d.max(2);
        prop_assume!(w.norm() % 2 == d % 2);
        let once: GenericChain<i64> = boundary_chain(&w, d, BoundaryVariant::Full).unwrap();
        prop_assert!(boundary_of(&once, d, BoundaryVariant::Full).is_zero());
        let merges: GenericChain<i64> = boundary_chain(&w, d, BoundaryVariant::MergeOnly).unwrap();
        let inserts: GenericChain<i64> = boundary_chain(&w, d, BoundaryVariant::InsertOnly).unwrap();
        prop_assert!(boundary_of(&merges, d, BoundaryVariant::MergeOnly).is_zero());
        prop_assert!(boundary_of(&inserts, d, BoundaryVariant::InsertOnly).is_zero());
        let anti = boundary_of(&merges, d, BoundaryVariant::InsertOnly) + boundary_of(&inserts, d, BoundaryVariant::MergeOnly);
        prop_assert!(anti.is_zero());
    }

    #[test]
    fn pattern_text_roundtrip(w in pattern_strategy(30)) {
        let back: Pattern = w.to_string().parse().unwrap();
        prop_assert_eq!(&back, &w);
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<Pattern>(&json).unwrap(), w);
    }

    #[test]
    fn generated_posets_are_closed(gens in prop::collection::vec(pattern_strategy(8), 0..4)) {
        let gens: Vec<Pattern> = gens.into_iter().filter(|w| w.norm() % 2 == 0).collect();
        let theta = build_poset(&PosetSpec::generators(gens.clone()), 8, ParityPolicy::Matched).unwrap();
        prop_assert!(closure_violation(theta.members(), 8).is_none());
        for g in &gens {
            prop_assert!(theta.contains(g));
        }
        for w in theta.members() {
            prop_assert!(gens.iter().any(|g| w.order_leq(g, 8)));
        }
        let lifted = theta.lift(10).unwrap();
        let (twice, once) = (lifted.lift(12).unwrap(), theta.lift(12).unwrap());
        prop_assert_eq!(twice.members(), once.members());
        prop_assert!(theta.members().iter().all(|w| lifted.contains(w)));
    }

    #[test]
    fn homology_ignores_basis_order(k in 1u32..6, perm_seed in prop::collection::vec(any::<prop::sample::Index>(), 8)) {
        let theta = build_poset(&PosetSpec::Family(Family::ReducedNormAtLeast { k, q: 0 }), 6, ParityPolicy::Matched).unwrap();
        let c = build_sub_complex::<i64>(&theta);
        let perms: BTreeMap<usize, Vec<usize>> = c
            .basis()
            .iter()
            .map(|(&n, b)| {
                let mut perm: Vec<usize> = (0..b.len()).collect();
                for (i, idx) in perm_seed.iter().enumerate().take(b.len()) {
                    let j = idx.index(b.len());
                    perm.swap(i % b.len(), j);
                }
                (n, perm)
            })
            .collect();
        let shuffled = c.reorder(&perms);
        let a = complex_homology(&c, &cfg()).unwrap();
        let b = complex_homology(&shuffled, &cfg()).unwrap();
        prop_assert_eq!(a.groups, b.groups);
    }
}

#[test]
fn twisted_convention_is_conjugate() {
    for d in [2u32, 4, 6, 8] {
        let full: GradedComplex<i64> = build_full_complex(d, ParityPolicy::Matched).unwrap();
        let twisted: GradedComplex<i64> = full_with_variant(d, ParityPolicy::Matched, BoundaryVariant::Twisted);
        for (n, m) in full.maps() {
            let sign = |w: &Pattern| if (w.norm() / 2) % 2 == 0 { 1 } else { -1 };
            let conj = omega_core::matrix::SparseMatrix::from_triplets(
                m.rows(),
                m.cols(),
                m.triplets().map(|(r, c, v)| {
                    (r, c, v * sign(&full.basis_in(n - 1)[r]) * sign(&full.basis_in(*n)[c]))
                }),
            );
            assert_eq!(&conj, twisted.map_from(*n).unwrap(), "d = {d}, degree {n}");
        }
        assert_eq!(
            complex_homology(&full, &cfg()).unwrap().groups,
            complex_homology(&twisted, &cfg()).unwrap().groups
        );
    }
}

#[test]
fn euler_number_is_homological() {
    for d in [2u32, 4, 6, 8] {
        for spec in built_in_families(d) {
            let theta = build_poset(&spec, d, ParityPolicy::Matched).unwrap();
            let h = sub_complex_homology(&theta, &cfg()).unwrap();
            assert_eq!(euler_number(&theta).chi, h.euler_characteristic(), "{spec:?} at d = {d}");
        }
    }
}

#[test]
fn universal_coefficients_on_built_ins() {
    for d in [2u32, 4, 6, 8] {
        for spec in built_in_families(d) {
            let theta = build_poset(&spec, d, ParityPolicy::Matched).unwrap();
            let v = uct_check(&theta, &cfg()).unwrap();
            assert!(v.pass, "{spec:?} at d = {d}: {}", v.details["violations"]);
        }
    }
}

#[test]
fn dualize_is_an_involution_and_dump_is_stable() {
    let theta = build_poset(&PosetSpec::Family(Family::MaxEntryAtLeast { k: 3 }), 8, ParityPolicy::Matched).unwrap();
    let c = build_sub_complex::<i64>(&theta);
    assert_eq!(c.dualize().dualize(), c);
    assert_eq!(c.fingerprint(), build_sub_complex::<i64>(&theta).fingerprint());
    assert_ne!(c.fingerprint(), c.dualize().fingerprint());
}

#[test]
fn theta_invariants_through_d10() {
    for d in (2u32..=10).step_by(2) {
        for w in universe(d, ParityPolicy::Matched) {
            if w.reduced_norm() == 0 {
                continue;
            }
            let t = characteristic::theta_chain::<i64>(&w, d, &cfg()).unwrap();
            assert!(t.is_cycle && t.is_boundary_of_generator && t.top_grading, "{w} at d = {d}");
            assert_eq!(t.class.is_nontrivial(), !t.boundary.is_zero(), "{w} at d = {d}");
            let dual = theta_dual_class(&w, d, &cfg()).unwrap();
            assert!(dual.is_cycle, "{w} at d = {d}");
        }
    }
}

#[test]
fn chain_1221_matches_boundary() {
    for n in 1..=5 {
        let w = pattern_1221(n);
        let d = 2 * n as u32 + 2;
        assert_eq!(chain_1221::<i64>(n).unwrap(), boundary_chain(&w, d, BoundaryVariant::Full).unwrap());
        let t = characteristic::theta_chain::<i64>(&w, d, &cfg()).unwrap();
        assert_eq!(t.class, ClassOrder::Infinite);
    }
}

#[test]
fn ring_is_associative_and_graded_commutative() {
    for d in (6u32..=12).step_by(2) {
        for k in 3..=6u32 {
            let top = d / k;
            let e = |m| VassilievElement::basis(d, k, m).unwrap();
            for a in 0..=top {
                for b in 0..=top {
                    let ab = vassiliev_mul(&e(a), &e(b)).unwrap();
                    let ba = vassiliev_mul(&e(b), &e(a)).unwrap();
                    let sign = if (a * (k - 2)) % 2 == 1 && (b * (k - 2)) % 2 == 1 { -1 } else { 1 };
                    let mut signed = VassilievElement::zero(d, k).unwrap();
                    for (m, c) in ba.coeffs() {
                        signed.add_term(*m, c * sign);
                    }
                    assert_eq!(ab, signed, "e{a} e{b}, d = {d}, k = {k}");
                    for c in 0..=top {
                        let left = vassiliev_mul(&ab, &e(c)).unwrap();
                        let right = vassiliev_mul(&e(a), &vassiliev_mul(&e(b), &e(c)).unwrap()).unwrap();
                        assert_eq!(left, right, "(e{a} e{b}) e{c}, d = {d}, k = {k}");
                    }
                }
            }
        }
    }
    assert_eq!(basis_product(4, 1, 1).map(|(c, m)| (c.to_string(), m)), Some(("2".into(), 2)));
    assert_eq!(basis_product(3, 1, 1), None);
}

#[test]
fn order_matches_closure() {
    let d = 8;
    for upper in universe(d, ParityPolicy::Matched) {
        let below: BTreeSet<Pattern> = build_poset(&PosetSpec::generators([upper.clone()]), d, ParityPolicy::Matched)
            .unwrap()
            .members()
            .clone();
        for w in universe(d, ParityPolicy::Matched) {
            assert_eq!(w.order_leq(&upper, d), below.contains(&w), "{w} vs {upper}");
        }
    }
    assert!(p("(3,2,1)").order_leq(&p("(1,2,2,1)"), 6));
}
