//! Randomized property tests over the public API: canonical text forms
//! round-trip, the join is a semilattice operation, signatures multiply
//! under tensor, the signed delta is the plain delta up to sign, exact
//! inverses invert, and saturation is a closure operator.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use wgcalc::monomial::{saturate, Permutation};
use wgcalc::partitions::Partition;
use wgcalc::ratmat::{PivotStrategy, RationalMatrix};

/// A random two-row partition: shape plus arbitrary block values, routed
/// through the kernel constructor so labels are canonicalized.
fn partitions() -> impl Strategy<Value = Partition> {
    (0usize..=3, 1usize..=4)
        .prop_flat_map(|(upper, lower)| {
            (
                Just(upper),
                Just(lower),
                prop::collection::vec(0u32..4, upper + lower),
            )
        })
        .prop_map(|(upper, lower, values)| {
            Partition::kernel(upper, lower, &values).expect("length matches")
        })
}

/// A random one-row pairing of `2m` points from a shuffled partner layout.
fn pairings() -> impl Strategy<Value = Partition> {
    (1usize..=4)
        .prop_flat_map(|m| Just((0..2 * m).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|order| {
            let mut partner = vec![0usize; order.len()];
            for pair in order.chunks(2) {
                partner[pair[0]] = pair[1];
                partner[pair[1]] = pair[0];
            }
            Partition::from_partner_array(&partner).expect("valid partner array")
        })
}

fn permutations(k_range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Permutation> {
    k_range
        .prop_flat_map(|k| Just((0..k).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|images| {
            let one_based: Vec<usize> = images.into_iter().map(|v| v + 1).collect();
            Permutation::from_images(&one_based).expect("shuffle is a permutation")
        })
}

proptest! {
    #[test]
    fn partition_text_round_trips(p in partitions()) {
        let text = p.to_string();
        let back: Partition = text.parse().expect("canonical text parses");
        prop_assert_eq!(p, back);
    }

    #[test]
    fn permutation_text_round_trips(sigma in permutations(1..=7)) {
        let back: Permutation = sigma.to_string().parse().expect("parses");
        prop_assert_eq!(sigma, back);
    }

    #[test]
    fn join_is_commutative_and_idempotent(p in partitions(), q in partitions()) {
        if p.upper_count() == q.upper_count() && p.lower_count() == q.lower_count() {
            let (j1, b1) = p.join(&q).unwrap();
            let (j2, b2) = q.join(&p).unwrap();
            prop_assert_eq!(&j1, &j2);
            prop_assert_eq!(b1, b2);
            prop_assert!(b1 <= p.block_count().min(q.block_count()));
            // Joining again is a no-op once coarsened.
            let (jj, bb) = j1.join(&q).unwrap();
            prop_assert_eq!(jj, j1);
            prop_assert_eq!(bb, b1);
        }
        let (self_join, blocks) = p.join(&p).unwrap();
        prop_assert_eq!(self_join, p.clone());
        prop_assert_eq!(blocks, p.block_count());
    }

    #[test]
    fn signature_multiplies_under_tensor(p in pairings(), q in pairings()) {
        let ts = p.tensor(&q).signature().unwrap();
        prop_assert_eq!(ts, p.signature().unwrap() * q.signature().unwrap());
    }

    #[test]
    fn signed_delta_is_plain_delta_up_to_sign(
        p in pairings(),
        seed in prop::collection::vec(1u32..=3, 8),
    ) {
        let values = &seed[..p.total_legs()];
        let plain = p.delta(values).unwrap();
        let signed = p.delta_bar(values).unwrap();
        prop_assert_eq!(signed.abs(), plain);
        prop_assert!(plain == 0 || plain == 1);
    }

    #[test]
    fn inverse_round_trips(
        entries in prop::collection::vec(-5i64..=5, 16),
    ) {
        // Strict diagonal dominance forces invertibility.
        let m = RationalMatrix::from_fn(4, 4, |r, c| {
            let x = entries[4 * r + c];
            BigRational::from_integer(BigInt::from(if r == c { x.abs() + 21 } else { x }))
        });
        let inv = m
            .inverse(PivotStrategy::MaxMagnitude)
            .unwrap()
            .expect("diagonally dominant matrices are invertible");
        prop_assert_eq!(m.mul(&inv).unwrap(), RationalMatrix::identity(4));
        prop_assert_eq!(inv.mul(&m).unwrap(), RationalMatrix::identity(4));
    }
}

proptest! {
    // Saturations are comparatively heavy; fewer cases suffice.
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn saturate_is_a_closure_operator(
        sigma in permutations(2..=4),
        tau in permutations(2..=4),
    ) {
        let horizon = sigma.size().max(tau.size()) + 1;
        let first = saturate(&[sigma.clone(), tau.clone()], horizon).unwrap();
        // Contains its generators...
        prop_assert!(first.truncation.contains(&sigma));
        prop_assert!(first.truncation.contains(&tau));
        // ...and is a fixed point: regenerating from every member changes
        // nothing and applies no productive rules.
        let members: Vec<Permutation> = (1..=horizon)
            .flat_map(|k| first.truncation.level(k).iter().cloned().collect::<Vec<_>>())
            .collect();
        let second = saturate(&members, horizon).unwrap();
        prop_assert_eq!(&second.truncation, &first.truncation);
        prop_assert_eq!(second.stats.total(), 0);
    }
}
