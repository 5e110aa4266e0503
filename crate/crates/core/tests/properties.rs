mod common;

use num_traits::Zero;
use quiverlab::kp::verify_class_quiver;
use quiverlab::rational::rat;
use quiverlab::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

#[test]
fn sigma_points_are_nonempty_with_dimension_2p() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut hits = 0;
    for _ in 0..60 {
        let q = random_quiver(&mut rng, 3, 4);
        let n = q.vertex_count();
        for alpha in sincere_vectors(n, 5) {
            let lambda = Weight::zeros(n);
            if !in_sigma(&q, &lambda, &alpha).unwrap() {
                continue;
            }
            hits += 1;
            assert!(is_nonempty(&q, &lambda, &alpha).unwrap());
            let two_p = 2 * q.p(&alpha).unwrap();
            assert_eq!(
                dim_N(&q, &lambda, &alpha).unwrap(),
                Dimension::Dim(two_p),
                "{q:?} {alpha}"
            );
            let r = geometry_report(&q, &lambda, &alpha).unwrap();
            assert!(r.irreducible && r.normal);
        }
    }
    assert!(hits > 50);
}

#[test]
fn class_quivers_verify() {
    for n in 1..=4 {
        for c in all_classes(n, 3) {
            let data = class_to_quiver(&c).unwrap();
            let check = verify_class_quiver(&c, &data).unwrap();
            assert!(check.holds(), "{c}: {check:?}");
            assert!(data.lambda.dot(&data.alpha).unwrap().is_zero());
        }
    }
}

#[test]
fn star_and_leg_weights_track_traces() {
    let classes: Vec<ConjugacyClass> = all_classes(3, 3);
    for (i, a) in classes.iter().enumerate().step_by(3) {
        for b in classes.iter().skip(i).step_by(4) {
            let pair = [a.clone(), b.clone()];
            let star = classes_to_star(&pair).unwrap();
            let trace = a.trace() + b.trace();
            assert_eq!(star.trace_sum, trace);
            assert_eq!(
                star.data.lambda.dot(&star.data.alpha).unwrap(),
                -trace.clone()
            );
            if !trace.is_zero() {
                assert!(!star.nonempty);
            }

            let q = Quiver::kronecker(1);
            let alpha = DimVector::new(vec![3, 3]).unwrap();
            let legs = attach_legs(&q, &alpha, &pair).unwrap();
            assert_eq!(legs.lambda.dot(&legs.alpha).unwrap(), trace);
            assert_eq!(&legs.alpha.entries()[..2], &[3, 3]);
        }
    }
}

#[test]
fn scalar_legs_attach_nothing() {
    let q = Quiver::bouquet(2);
    let c = ConjugacyClass::scalar(rat(3), 2).unwrap();
    let legs = attach_legs(&q, &DimVector::new(vec![2]).unwrap(), &[c]).unwrap();
    assert_eq!(legs.quiver.vertex_count(), 1);
    assert_eq!(legs.lambda, Weight::from_integers(&[3]));
}

#[test]
fn quiver_quadruples_have_darboux_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let q = random_quiver(&mut rng, 3, 3);
        let alpha = DimVector::new(vec![1; q.vertex_count()]).unwrap();
        let quad = Quadruple::from_quiver(&q, &alpha, &Weight::zeros(q.vertex_count())).unwrap();
        let s = maximal_isotropic(&quad.module, &quad.form);
        assert_eq!(2 * s.dim(), quad.module.dim());
        let d = darboux(&quad.module, &quad.form, &s).unwrap();
        assert!(d.is_certified(&quad.form));
    }
}

#[test]
fn all_quivers_counts_orientations() {
    // one vertex: 0..=2 loops; two vertices with one edge: both directions
    assert_eq!(all_quivers(1, 2).len(), 3);
    let two = all_quivers(2, 1);
    assert_eq!(two.len(), 1 + 2 + 2);
    assert!(two.iter().all(|q| q.arrows().len() <= 1));
}

#[test]
fn root_oracle_matches_known_kronecker_roots() {
    let roots = root_oracle(&Quiver::kronecker(2), &[2, 2]);
    let mut keys: Vec<_> = roots.keys().cloned().collect();
    keys.sort();
    assert_eq!(
        keys,
        vec![
            vec![0, 1],
            vec![1, 0],
            vec![1, 1],
            vec![1, 2],
            vec![2, 1],
            vec![2, 2]
        ]
    );
    assert!(!roots[&vec![1, 1]] && roots[&vec![1, 2]]);
}

#[test]
fn dual_partition_oracle_on_regular_nilpotent() {
    let c = ConjugacyClass::new(vec![(rat(0), vec![4])]).unwrap();
    assert_eq!(dual_partition_dim(&c), 12);
    assert_eq!(class_dim(&c), 12);
}
