//! Randomized invariants over generated instances and raw relations.

use std::collections::BTreeSet;

use num::{BigInt, One, Zero};
use proptest::prelude::*;

use qvar::generate::{generate, Profile};
use qvar::instance::{parse_instance, serialize_instance, Instance};
use qvar::oracle::enumerate_ekeland;
use qvar::order::{leq_phi, lower_section, minimal_element, Objective};
use qvar::rational::{ExtendedRational, Finite, Rat};
use qvar::relation::{compose, invert, Relation};
use qvar::space::{
    gauge_compatibility, symmetrize, validate_quasi_pseudometric, FQuasiGauge,
    QuasiPseudometric, TriangleMode,
};
use qvar::topology::{separation_class, specialization_preorder};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn profile_strategy() -> impl Strategy<Value = Profile> {
    prop_oneof![
        Just(Profile::T1),
        Just(Profile::T0NotT1),
        Just(Profile::Chain),
        Just(Profile::TakahashiValid),
        Just(Profile::CaristiValid),
    ]
}

fn finite_instance_parts(inst: &Instance) -> (Objective, FQuasiGauge) {
    let f = inst.as_finite().unwrap();
    (f.objective("f").unwrap(), f.gauge.clone())
}

fn relation_strategy(n: usize) -> impl Strategy<Value = Relation> {
    prop::collection::btree_set((0..n, 0..n), 0..=n * n).prop_map(move |pairs| Relation {
        n,
        pairs: pairs.into_iter().collect::<BTreeSet<_>>(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_is_transitive(profile in profile_strategy(), n in 2usize..7, seed in 0u64..10_000) {
        let inst = generate(profile, n, 3, seed).unwrap();
        let (phi, gauge) = finite_instance_parts(&inst);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if leq_phi(&phi, &gauge, x, y).unwrap()
                        && leq_phi(&phi, &gauge, y, z).unwrap()
                    {
                        prop_assert!(leq_phi(&phi, &gauge, x, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn order_is_antisymmetric_on_separated_instances(
        profile in prop_oneof![Just(Profile::T1), Just(Profile::T0NotT1)],
        n in 2usize..7,
        seed in 0u64..10_000,
    ) {
        let inst = generate(profile, n, 3, seed).unwrap();
        let (phi, gauge) = finite_instance_parts(&inst);
        prop_assert!(separation_class(&gauge).unwrap().at_least_t0());
        for x in 0..n {
            for y in 0..n {
                if x != y
                    && leq_phi(&phi, &gauge, x, y).unwrap()
                    && leq_phi(&phi, &gauge, y, x).unwrap()
                {
                    prop_assert!(false, "distinct mutually comparable pair ({x}, {y})");
                }
            }
        }
    }

    #[test]
    fn strict_value_drop_below_on_t1(n in 2usize..7, seed in 0u64..10_000) {
        let inst = generate(Profile::T1, n, 3, seed).unwrap();
        let (phi, gauge) = finite_instance_parts(&inst);
        for x in 0..n {
            for y in 0..n {
                if x != y && leq_phi(&phi, &gauge, x, y).unwrap() {
                    prop_assert!(phi.values[y] < phi.values[x]);
                }
            }
        }
    }

    #[test]
    fn minimal_element_has_singleton_section(
        profile in prop_oneof![Just(Profile::T1), Just(Profile::Chain), Just(Profile::TakahashiValid)],
        n in 2usize..7,
        seed in 0u64..10_000,
    ) {
        let inst = generate(profile, n, 3, seed).unwrap();
        let (phi, gauge) = finite_instance_parts(&inst);
        let (z, trace) = minimal_element(&phi, &gauge, 0).unwrap();
        prop_assert_eq!(lower_section(&phi, &gauge, z).unwrap(), vec![z]);
        prop_assert!(leq_phi(&phi, &gauge, 0, z).unwrap());
        prop_assert_eq!(trace.chain[0], 0);
        prop_assert_eq!(*trace.chain.last().unwrap(), z);
    }

    #[test]
    fn t1_specialization_is_the_diagonal(n in 1usize..7, seed in 0u64..10_000) {
        let inst = generate(Profile::T1, n, 3, seed).unwrap();
        let (_, gauge) = finite_instance_parts(&inst);
        prop_assert_eq!(specialization_preorder(&gauge).unwrap(), Relation::diagonal(n));
    }

    #[test]
    fn invert_is_an_involution(n in 1usize..6, r in (1usize..6).prop_flat_map(relation_strategy)) {
        let _ = n;
        prop_assert_eq!(invert(&invert(&r)), r);
    }

    #[test]
    fn compose_is_associative(
        (r, s, t) in (2usize..6).prop_flat_map(|n| {
            (relation_strategy(n), relation_strategy(n), relation_strategy(n))
        }),
    ) {
        let left = compose(&compose(&r, &s).unwrap(), &t).unwrap();
        let right = compose(&r, &compose(&s, &t).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn generated_instances_round_trip(
        profile in profile_strategy(),
        n in 2usize..7,
        seed in 0u64..10_000,
    ) {
        let inst = generate(profile, n, 3, seed).unwrap();
        let text = serialize_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn symmetrization_preserves_the_strict_triangle(
        entries in prop::collection::vec((0i64..20, 1i64..5), 9..=9),
    ) {
        // Force the strict triangle by clamping into [1, 2]: any three such
        // values satisfy a + b >= 2 >= c.
        let n = 3;
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rat::zero()
                        } else {
                            let (p, q) = entries[i * n + j];
                            Rat::one() + rat(p, 20 * q)
                        }
                    })
                    .collect()
            })
            .collect();
        let d = QuasiPseudometric::matrix("d", rows);
        let report = validate_quasi_pseudometric(&d, n, TriangleMode::Strict).unwrap();
        prop_assert!(report.violations.is_empty());
        let sym = symmetrize(&d).unwrap();
        let sym_report = validate_quasi_pseudometric(&sym, n, TriangleMode::Strict).unwrap();
        prop_assert!(sym_report.violations.is_empty());
        for i in 0..n {
            for j in 0..n {
                prop_assert!(sym.at(i, j).unwrap() >= d.at(i, j).unwrap());
                prop_assert_eq!(sym.at(i, j).unwrap(), sym.at(j, i).unwrap());
            }
        }
    }

    #[test]
    fn gauge_compatibility_survives_gauge_enlargement(
        n in 2usize..6,
        seed in 0u64..10_000,
    ) {
        let inst = generate(Profile::T1, n, 2, seed).unwrap();
        let f = inst.as_finite().unwrap();
        let d = f.gauge.members[0].clone();
        let small = f.gauge.clone();
        if gauge_compatibility(&d, &small).unwrap() {
            let bigger = generate(Profile::T1, n, 3, seed.wrapping_add(1)).unwrap();
            let extra = bigger.as_finite().unwrap().gauge.members[0].clone();
            let mut enlarged = small.clone();
            enlarged.members.push(extra);
            // Keep every old relax witness and let the newcomer relax
            // through the existing constant cap, which dominates it only if
            // it is pointwise below; fall back to self-relaxation otherwise.
            enlarged.relax.push(enlarged.members.len() - 1);
            prop_assert!(gauge_compatibility(&d, &enlarged).unwrap());
        }
    }

    #[test]
    fn ekeland_set_is_invariant_under_uniform_rescaling(
        n in 2usize..6,
        seed in 0u64..10_000,
        scale in (1i64..8, 1i64..8),
    ) {
        let inst = generate(Profile::T1, n, 3, seed).unwrap();
        let (phi, gauge) = finite_instance_parts(&inst);
        let c = rat(scale.0, scale.1);
        // Rescale the objective and every member by the same positive
        // constant; the descent inequalities scale through, so the exact
        // solution set is unchanged.
        let scaled_phi = Objective::new(
            "f",
            phi.values
                .iter()
                .map(|v| match v {
                    Finite(r) => Finite(r * &c),
                    other => other.clone(),
                })
                .collect::<Vec<ExtendedRational>>(),
        )
        .unwrap();
        let scaled_members: Vec<QuasiPseudometric> = gauge
            .members
            .iter()
            .map(|d| {
                let rows = d
                    .rows()
                    .unwrap()
                    .iter()
                    .map(|row| row.iter().map(|v| v * &c).collect())
                    .collect();
                QuasiPseudometric::matrix(&d.name, rows)
            })
            .collect();
        let scaled_gauge = FQuasiGauge {
            members: scaled_members,
            relax: gauge.relax.clone(),
            symmetric: gauge.symmetric,
        };
        let a = enumerate_ekeland(&phi, &gauge, 0).unwrap();
        let b = enumerate_ekeland(&scaled_phi, &scaled_gauge, 0).unwrap();
        prop_assert_eq!(a, b);
    }
}
