//! Exact Haar-state moments: quantum-group coordinates and sphere
//! coordinates, in the untwisted and twisted (signed) variants.
//!
//! The core formula expresses a joint moment of coordinates as
//! `Σ_{π,σ} δ_π(i) δ_σ(j) W(π,σ)` over the family's pairings, with the
//! signed symbols `δ̄` replacing `δ` in the twisted case — the Weingarten
//! matrix itself is the same for both. Sphere moments are the `i = (1,…,1)`
//! row specialization `Σ_σ δ_σ(j) · w_σ` with weights `w = W·1`.
//!
//! When the Gram matrix is singular (small `N`), the Weingarten matrix does
//! not exist, but the moment is still well defined: both delta vectors lie
//! in the column space of the Gram matrix, so `aᵀ G⁺ b` is independent of
//! the choice of generalized inverse and equals `aᵀ c` for any exact
//! solution of `G c = b`. We solve that system directly instead of erroring,
//! which keeps every moment computable down to `N = 1`; requesting the
//! Weingarten matrix itself at such sizes still fails loudly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::oracles;
use crate::par;
use crate::partitions::{PairingFamily, Partition};
use crate::ratmat::PivotStrategy;
use crate::weingarten::{Cache, GramData};

fn validate_tuple(values: &[u32], n: u32) -> Result<()> {
    if let Some(&bad) = values.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::Invalid(format!(
            "tuple entry {bad} out of range 1..={n}"
        )));
    }
    Ok(())
}

/// `δ` or `δ̄` of a one-row pairing on a tuple, as a rational.
fn delta_value(p: &Partition, values: &[u32], twisted: bool) -> Result<BigRational> {
    let v = if twisted {
        p.delta_bar(values)?
    } else {
        p.delta(values)?
    };
    Ok(BigRational::from_integer(BigInt::from(v)))
}

/// `aᵀ W b` when the Weingarten matrix exists, else `aᵀ c` for an exact
/// solution of `G c = b` (see the module notes on why this is well defined).
fn pair_with_weingarten(
    entry: &GramData,
    a: &[BigRational],
    b: &[BigRational],
) -> Result<BigRational> {
    let order = entry.basis.len();
    match &entry.weingarten {
        Some(w) => {
            let mut total = BigRational::zero();
            for r in 0..order {
                if a[r].is_zero() {
                    continue;
                }
                let mut row = BigRational::zero();
                for c in 0..order {
                    if !b[c].is_zero() {
                        row += w.get(r, c) * &b[c];
                    }
                }
                total += &a[r] * row;
            }
            Ok(total)
        }
        None => {
            let c = entry
                .gram
                .solve(b, PivotStrategy::MaxMagnitude)?
                .ok_or_else(|| {
                    Error::Invalid(
                        "delta vector outside the Gram column space (internal invariant broken)"
                            .into(),
                    )
                })?;
            Ok(a.iter()
                .zip(&c)
                .map(|(x, y)| x * y)
                .fold(BigRational::zero(), |acc, v| acc + v))
        }
    }
}

/// Joint Haar moment `∫ u_{i₁j₁} ⋯ u_{i_kj_k}` for the family's quantum
/// group, twisted or not. Odd `k` gives exactly 0.
pub fn haar_integral(
    cache: &Cache,
    family: PairingFamily,
    twisted: bool,
    n: u32,
    i_tuple: &[u32],
    j_tuple: &[u32],
) -> Result<BigRational> {
    if i_tuple.len() != j_tuple.len() {
        return Err(Error::LengthMismatch {
            want: i_tuple.len(),
            got: j_tuple.len(),
        });
    }
    validate_tuple(i_tuple, n)?;
    validate_tuple(j_tuple, n)?;
    let k = i_tuple.len();
    if k % 2 == 1 {
        return Ok(BigRational::from_integer(BigInt::from(0)));
    }
    if k == 0 {
        return Ok(BigRational::one());
    }
    let entry = cache.entry(family, k, n)?;
    let a: Vec<BigRational> = entry
        .basis
        .iter()
        .map(|p| delta_value(p, i_tuple, twisted))
        .collect::<Result<_>>()?;
    let b: Vec<BigRational> = entry
        .basis
        .iter()
        .map(|p| delta_value(p, j_tuple, twisted))
        .collect::<Result<_>>()?;
    pair_with_weingarten(&entry, &a, &b)
}

/// The weight vector `w = W·1` (row sums), or the solution of `G w = 1`
/// when the Gram matrix is singular. Sphere moments are `Σ_σ δ_σ(i) w_σ`.
pub fn sphere_weights(
    cache: &Cache,
    family: PairingFamily,
    k: usize,
    n: u32,
) -> Result<Vec<BigRational>> {
    let entry = cache.entry(family, k, n)?;
    let order = entry.basis.len();
    match &entry.weingarten {
        Some(w) => Ok((0..order)
            .map(|r| (0..order).map(|c| w.get(r, c).clone()).sum())
            .collect()),
        None => {
            let ones = vec![BigRational::one(); order];
            entry
                .gram
                .solve(&ones, PivotStrategy::MaxMagnitude)?
                .ok_or_else(|| {
                    Error::Invalid(
                        "all-ones vector outside the Gram column space (internal invariant broken)"
                            .into(),
                    )
                })
        }
    }
}

/// Sphere moment `∫ x_{i₁} ⋯ x_{i_k}` with `x_i = u_{1i}`, twisted or not.
/// Zero whenever some index occurs an odd number of times.
pub fn sphere_moment(
    cache: &Cache,
    family: PairingFamily,
    twisted: bool,
    n: u32,
    i_tuple: &[u32],
) -> Result<BigRational> {
    let tuples = [i_tuple.to_vec()];
    let values = sphere_moment_batch(cache, family, twisted, n, &tuples)?;
    Ok(values.into_iter().next().expect("one query, one value"))
}

/// Batch sphere moments: tuples are grouped by length so the weight vector
/// for each (family, k, N) is assembled once, then the per-tuple sums run in
/// parallel.
pub fn sphere_moment_batch(
    cache: &Cache,
    family: PairingFamily,
    twisted: bool,
    n: u32,
    tuples: &[Vec<u32>],
) -> Result<Vec<BigRational>> {
    use std::collections::BTreeMap;
    for t in tuples {
        validate_tuple(t, n)?;
    }
    let zero = BigRational::zero();
    let mut weights_by_k: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
    let mut bases_by_k: BTreeMap<usize, std::sync::Arc<GramData>> = BTreeMap::new();
    for t in tuples {
        let k = t.len();
        if k == 0 || k % 2 == 1 || weights_by_k.contains_key(&k) {
            continue;
        }
        weights_by_k.insert(k, sphere_weights(cache, family, k, n)?);
        bases_by_k.insert(k, cache.entry(family, k, n)?);
    }
    let results = par::map_items(tuples, |t| -> Result<BigRational> {
        let k = t.len();
        if k == 0 {
            return Ok(BigRational::one());
        }
        if k % 2 == 1 {
            return Ok(zero.clone());
        }
        let weights = &weights_by_k[&k];
        let entry = &bases_by_k[&k];
        let mut acc = zero.clone();
        for (p, w) in entry.basis.iter().zip(weights) {
            let d = if twisted {
                p.delta_bar(t)?
            } else {
                p.delta(t)?
            };
            match d {
                1 => acc += w,
                -1 => acc -= w,
                _ => {}
            }
        }
        Ok(acc)
    });
    results.into_iter().collect()
}

/// Even moments `m_{2l} = N^l · ∫ x₁^{2l}` of the rescaled coordinate
/// `√N·x₁`, for `l = 1..=l_max` (odd moments vanish and are not listed).
pub fn law_moments(
    cache: &Cache,
    family: PairingFamily,
    twisted: bool,
    n: u32,
    l_max: usize,
) -> Result<Vec<BigRational>> {
    let tuples: Vec<Vec<u32>> = (1..=l_max).map(|l| vec![1u32; 2 * l]).collect();
    let values = sphere_moment_batch(cache, family, twisted, n, &tuples)?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(idx, v)| BigRational::from_integer(BigInt::from(n).pow(idx as u32 + 1)) * v)
        .collect())
}

/// Limit of `N^l · m'_{2l}` as `N → ∞`: the number of family pairings of
/// `2l` points.
pub fn asymptotic_reference(family: PairingFamily, l: u64) -> BigInt {
    oracles::reference_counts(family, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{classical_sphere_integral, half_liberated_integral_sum};
    use crate::ratmat::RationalMatrix;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn mem() -> Cache {
        Cache::in_memory()
    }

    #[test]
    fn haar_two_point_examples() {
        let cache = mem();
        for family in PairingFamily::ALL {
            for twisted in [false, true] {
                let v = haar_integral(&cache, family, twisted, 4, &[1, 1], &[1, 1]).unwrap();
                assert_eq!(v, rat(1, 4), "{family} twisted={twisted}");
                let v = haar_integral(&cache, family, twisted, 4, &[1, 1], &[1, 2]).unwrap();
                assert_eq!(v, rat(0, 1));
            }
        }
    }

    #[test]
    fn haar_free_fourth_power() {
        let cache = mem();
        for n in 2..=6u32 {
            let v = haar_integral(
                &cache,
                PairingFamily::Free,
                false,
                n,
                &[1, 1, 1, 1],
                &[1, 1, 1, 1],
            )
            .unwrap();
            assert_eq!(v, rat(2, (n * (n + 1)) as i64), "N={n}");
        }
    }

    #[test]
    fn haar_odd_length_is_zero() {
        let cache = mem();
        let v = haar_integral(&cache, PairingFamily::Classical, false, 3, &[1, 2, 1], &[1, 2, 1])
            .unwrap();
        assert_eq!(v, rat(0, 1));
        let v = haar_integral(&cache, PairingFamily::Classical, false, 3, &[], &[]).unwrap();
        assert_eq!(v, rat(1, 1));
    }

    #[test]
    fn haar_rejects_bad_tuples() {
        let cache = mem();
        assert!(haar_integral(&cache, PairingFamily::Free, false, 3, &[1, 4], &[1, 1]).is_err());
        assert!(haar_integral(&cache, PairingFamily::Free, false, 3, &[1, 0], &[1, 1]).is_err());
        assert!(haar_integral(&cache, PairingFamily::Free, false, 3, &[1], &[1, 1]).is_err());
    }

    #[test]
    fn sphere_moment_examples() {
        let cache = mem();
        for n in 2..=5u32 {
            let v = sphere_moment(&cache, PairingFamily::Classical, false, n, &[1, 1, 2, 2])
                .unwrap();
            assert_eq!(v, rat(1, (n * (n + 2)) as i64), "N={n}");
            let v = sphere_moment(&cache, PairingFamily::Free, false, n, &[1, 1, 1, 1]).unwrap();
            assert_eq!(v, rat(2, (n * (n + 1)) as i64));
        }
        let v = sphere_moment(&cache, PairingFamily::Classical, false, 4, &[1, 1, 1, 2]).unwrap();
        assert_eq!(v, rat(0, 1));
        assert_eq!(
            sphere_moment(&cache, PairingFamily::Classical, false, 2, &[1, 1, 2, 2]).unwrap(),
            rat(1, 8)
        );
    }

    #[test]
    fn all_families_agree_at_two_points() {
        let cache = mem();
        for family in PairingFamily::ALL {
            for n in 2..=4u32 {
                for i in 1..=n {
                    for j in 1..=n {
                        let v = sphere_moment(&cache, family, false, n, &[i, j]).unwrap();
                        let want = if i == j { rat(1, n as i64) } else { rat(0, 1) };
                        assert_eq!(v, want, "{family} N={n} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_equals_untwisted_on_single_coordinate() {
        let cache = mem();
        for family in PairingFamily::ALL {
            for k in [2usize, 4, 6] {
                for n in 2..=4u32 {
                    let t = vec![1u32; k];
                    let a = sphere_moment(&cache, family, false, n, &t).unwrap();
                    let b = sphere_moment(&cache, family, true, n, &t).unwrap();
                    assert_eq!(a, b, "{family} k={k} N={n}");
                }
            }
        }
    }

    #[test]
    fn singular_gram_cells_still_integrate_exactly() {
        let cache = mem();
        // (classical, 6, 2) has Gram rank 10 < 15; values must match the
        // independent closed form regardless.
        let v = sphere_moment(&cache, PairingFamily::Classical, false, 2, &[1; 6]).unwrap();
        assert_eq!(v, classical_sphere_integral(&[6], 2).unwrap());
        assert_eq!(v, rat(5, 16));
        let v =
            sphere_moment(&cache, PairingFamily::Classical, false, 2, &[1, 1, 2, 2, 1, 1]).unwrap();
        assert_eq!(v, classical_sphere_integral(&[4, 2], 2).unwrap());
        assert_eq!(v, rat(1, 16));
        // (classical, 8, 2): rank 35 of 105.
        let v = sphere_moment(&cache, PairingFamily::Classical, false, 2, &[1; 8]).unwrap();
        assert_eq!(v, classical_sphere_integral(&[8], 2).unwrap());
        assert_eq!(v, rat(35, 128));
        // (half, 6, 2) is singular as well; compare with the binomial sum
        // for the balanced monomial x₁⁶ (common count 3).
        let v = sphere_moment(&cache, PairingFamily::Half, false, 2, &[1; 6]).unwrap();
        assert_eq!(v, half_liberated_integral_sum(&[3], 2).unwrap());
        // Even N = 1 works: the sphere is {±1}^-like and x₁⁴ integrates to 1.
        let v = sphere_moment(&cache, PairingFamily::Classical, false, 1, &[1; 4]).unwrap();
        assert_eq!(v, rat(1, 1));
    }

    #[test]
    fn batch_matches_single_queries() {
        let cache = mem();
        let tuples: Vec<Vec<u32>> = vec![
            vec![1, 1],
            vec![1, 2],
            vec![1, 2, 2, 1],
            vec![1, 1, 1],
            vec![],
            vec![2, 2, 1, 1, 2, 2],
        ];
        for twisted in [false, true] {
            let batch =
                sphere_moment_batch(&cache, PairingFamily::Half, twisted, 3, &tuples).unwrap();
            for (t, b) in tuples.iter().zip(&batch) {
                let single = sphere_moment(&cache, PairingFamily::Half, twisted, 3, t).unwrap();
                assert_eq!(single, *b, "tuple {t:?}");
            }
        }
    }

    #[test]
    fn law_moments_examples() {
        let cache = mem();
        for n in 2..=6u32 {
            let m = law_moments(&cache, PairingFamily::Classical, false, n, 1).unwrap();
            assert_eq!(m, vec![rat(1, 1)], "m2 at N={n}");
        }
        // Free m4 = N² · 2/(N(N+1)) = 2N/(N+1) → 2 = Catalan(2).
        let m = law_moments(&cache, PairingFamily::Free, false, 6, 2).unwrap();
        assert_eq!(m[1], rat(12, 7));
        assert_eq!(
            asymptotic_reference(PairingFamily::Free, 2),
            BigInt::from(2)
        );
        assert_eq!(
            asymptotic_reference(PairingFamily::Classical, 3),
            BigInt::from(15)
        );
        assert_eq!(asymptotic_reference(PairingFamily::Half, 2), BigInt::from(2));
    }

    #[test]
    fn scalar_product_matrix_is_invertible_at_small_n() {
        // Matrix ⟨x_a x_b, x_i x_j⟩ over the twisted classical sphere,
        // indexed by a ≤ b and i ≤ j; must have full rank for N = 3, 4.
        let cache = mem();
        for n in [3u32, 4] {
            let pairs: Vec<(u32, u32)> = (1..=n)
                .flat_map(|a| (a..=n).map(move |b| (a, b)))
                .collect();
            let m = RationalMatrix::from_fn(pairs.len(), pairs.len(), |r, c| {
                let (a, b) = pairs[r];
                let (i, j) = pairs[c];
                sphere_moment(&cache, PairingFamily::Classical, true, n, &[a, b, j, i])
                    .expect("moment")
            });
            assert_eq!(m.rank(), pairs.len(), "N={n}");
        }
    }

    #[test]
    fn vanishing_for_odd_occurrence_monomials() {
        let cache = mem();
        let n = 3u32;
        for twisted in [false, true] {
            for family in PairingFamily::ALL {
                // all tuples of length 4 over {1,2,3} with an odd count
                for a in 1..=n {
                    for b in 1..=n {
                        for c in 1..=n {
                            for d in 1..=n {
                                let t = [a, b, c, d];
                                let mut counts = [0usize; 4];
                                for &v in &t {
                                    counts[v as usize] += 1;
                                }
                                if counts.iter().all(|&x| x % 2 == 0) {
                                    continue;
                                }
                                let v = sphere_moment(&cache, family, twisted, n, &t).unwrap();
                                assert_eq!(v, rat(0, 1), "{family} {t:?} twisted={twisted}");
                            }
                        }
                    }
                }
            }
        }
    }
}
