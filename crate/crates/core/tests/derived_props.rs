use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;

use derived_hall::complex::{self, ChainMap, Complex, HomotopyClasses};
use derived_hall::graded::{derived_hom_dim, graded_aut_order, graded_objects, GradedObject};
use derived_hall::hall_derived::{shift_action, DerivedHall};
use derived_hall::heart::{Heart, IsoClass};
use derived_hall::label::{graded_label, heart_label, parse_graded_label, parse_heart_label};

const LIMIT: u64 = 1 << 16;

fn small_hearts() -> Vec<Heart> {
    vec![Heart::linear_a(1, 2).unwrap(), Heart::linear_a(2, 2).unwrap()]
}

#[test]
fn cone_classes_partition_hom() {
    for h in small_hearts() {
        let objs = graded_objects(&h, 0..=1, 1);
        for x in &objs {
            for z in &objs {
                let tally = complex::cone_tally(&h, x, z).unwrap();
                let total: u64 = tally.values().sum();
                let expected = (h.p() as u64).pow(derived_hom_dim(&h, x, z, 0) as u32);
                assert_eq!(total, expected, "{x:?} → {z:?}");
            }
        }
    }
}

#[test]
fn aut_formula_matches_oracle() {
    for h in small_hearts() {
        for x in graded_objects(&h, 0..=1, 2) {
            let counted = complex::aut_order_by_enumeration(&h, &x).unwrap();
            assert_eq!(graded_aut_order(&h, &x), BigUint::from(counted), "{x:?}");
        }
    }
}

#[test]
fn cone_class_is_a_homotopy_invariant() {
    let h = Heart::linear_a(2, 2).unwrap();
    // Null-homotopic maps need a target like X12[1], through which the
    // resolution differential factors nontrivially.
    let sources = graded_objects(&h, 0..=1, 1);
    let targets = graded_objects(&h, 0..=1, 2);
    let mut nontrivial = 0;
    for x in &sources {
        let px = complex::projective_model(&h, x);
        for z in &targets {
            let mz = Complex::zero_differential(&h, z);
            let classes = HomotopyClasses::compute(&px, &mz).unwrap();
            for f in classes.enumerate(LIMIT).unwrap() {
                let expected = complex::cone_class(&h, &f).unwrap();
                let class = classes.homotopy_class(&f, LIMIT).unwrap();
                nontrivial += usize::from(class.len() > 1);
                for g in class {
                    assert_eq!(complex::cone_class(&h, &g).unwrap(), expected);
                }
            }
        }
    }
    assert!(nontrivial > 0, "no homotopy class had more than one member");
}

#[test]
fn cones_commute_with_shift() {
    let h = Heart::linear_a(2, 2).unwrap();
    let objs = graded_objects(&h, 0..=1, 1);
    for x in &objs {
        let px = complex::projective_model(&h, x);
        for z in &objs {
            let mz = Complex::zero_differential(&h, z);
            for f in HomotopyClasses::compute(&px, &mz).unwrap().enumerate(LIMIT).unwrap() {
                let shifted: ChainMap = f.shift(1);
                assert_eq!(
                    complex::cone_class(&h, &shifted).unwrap(),
                    complex::cone_class(&h, &f).unwrap().shift(1)
                );
            }
        }
    }
}

#[test]
fn model_cohomology_recovers_the_object() {
    let h = Heart::linear_a(3, 2).unwrap();
    for x in graded_objects(&h, -1..=1, 1) {
        let model = complex::projective_model(&h, &x);
        assert_eq!(complex::cohomology(&h, &model).unwrap(), x);
    }
}

#[test]
fn shift_action_is_multiplicative() {
    let d = DerivedHall::new(Arc::new(Heart::linear_a(2, 2).unwrap()));
    let objs = graded_objects(d.heart(), 0..=1, 1);
    for x in &objs {
        for y in &objs {
            let prod = d.basis_product(x, y).unwrap();
            for n in [-1, 2] {
                let shifted = d.basis_product(&x.shift(n), &y.shift(n)).unwrap();
                assert_eq!(shift_action(&prod, n), shifted);
            }
        }
    }
}

#[test]
fn a3_rewriting_matches_oracle_on_simples() {
    let d = DerivedHall::new(Arc::new(Heart::linear_a(3, 2).unwrap()));
    let simples: Vec<GradedObject> = (0..3)
        .flat_map(|i| [0, 1].map(|n| GradedObject::shifted(IsoClass::indecomposable(i), n)))
        .collect();
    for x in &simples {
        for y in &simples {
            assert_eq!(d.basis_product(x, y).unwrap(), d.oracle_product(x, y).unwrap(), "{x:?} {y:?}");
        }
    }
}

fn graded_object(n_indec: usize) -> impl Strategy<Value = GradedObject> {
    prop::collection::vec((-3i64..=3, 0..n_indec, 1u32..=3), 0..5)
        .prop_map(|terms| GradedObject::from_components(terms.into_iter().map(|(n, i, m)| (n, IsoClass::from_parts([(i, m)])))))
}

proptest! {
    #[test]
    fn graded_labels_round_trip(x in graded_object(6)) {
        let h = Heart::linear_a(3, 2).unwrap();
        let label = graded_label(&h, &x);
        let back = parse_graded_label(&h, &label).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(graded_label(&h, &back), label);
    }

    #[test]
    fn heart_labels_round_trip(parts in prop::collection::vec((0usize..6, 1u32..=4), 0..5)) {
        let h = Heart::linear_a(3, 3).unwrap();
        let x = IsoClass::from_parts(parts);
        prop_assert_eq!(parse_heart_label(&h, &heart_label(&h, &x)).unwrap(), x);
    }

    #[test]
    fn derived_hom_is_shift_invariant(x in graded_object(3), z in graded_object(3), i in -2i64..=2, n in -2i64..=2) {
        let h = Heart::linear_a(2, 2).unwrap();
        prop_assert_eq!(derived_hom_dim(&h, &x, &z, i), derived_hom_dim(&h, &x.shift(n), &z.shift(n), i));
        prop_assert_eq!(derived_hom_dim(&h, &x, &z.shift(i), 0), derived_hom_dim(&h, &x, &z, i));
    }
}
