//! Dense integer matrices for the linear maps attached to partitions.
//!
//! A partition `π` with `k` upper and `l` lower legs induces a map
//! `T_π : (C^N)^{⊗k} → (C^N)^{⊗l}` with entries `δ_π(i, j)` (upper tuple `i`,
//! lower tuple `j`), and a signed variant `T̄_π` with entries `δ̄_π(i, j)`.
//! Tensor factors are indexed row-major: the tuple `(j_1, ..., j_l)` over
//! `1..=N` maps to `Σ (j_t − 1) N^{l−t}`.
//!
//! Entries of these maps and of everything we build from them (products,
//! adjoints, Kronecker products) stay integral, so the matrices hold `i64`.
//! Dimensions are guarded by an entry budget to keep accidental `N^{k+l}`
//! blowups from allocating unbounded memory.

use crate::error::{Error, Result};
use crate::par;
use crate::partitions::Partition;

/// Maximum number of entries a dense matrix may hold.
pub const ENTRY_BUDGET: u128 = 10_000_000;

/// Dense row-major `i64` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl TensorMatrix {
    pub fn zero(rows: usize, cols: usize) -> Result<TensorMatrix> {
        let entries = rows as u128 * cols as u128;
        if entries > ENTRY_BUDGET {
            return Err(Error::SizeBound {
                entries,
                bound: ENTRY_BUDGET,
            });
        }
        Ok(TensorMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<TensorMatrix> {
        let mut m = TensorMatrix::zero(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &TensorMatrix) -> Result<TensorMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "product of {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self.rows as u128 * rhs.cols as u128;
        if entries > ENTRY_BUDGET {
            return Err(Error::SizeBound {
                entries,
                bound: ENTRY_BUDGET,
            });
        }
        let cols = rhs.cols;
        let data: Vec<i64> = par::map_indexed(self.rows, |r| {
            let mut row = vec![0i64; cols];
            for m in 0..self.cols {
                let a = self.get(r, m);
                if a == 0 {
                    continue;
                }
                for (c, cell) in row.iter_mut().enumerate() {
                    *cell += a * rhs.get(m, c);
                }
            }
            row
        })
        .into_iter()
        .flatten()
        .collect();
        Ok(TensorMatrix {
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &TensorMatrix) -> Result<TensorMatrix> {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = TensorMatrix::zero(rows, cols)?;
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a == 0 {
                    continue;
                }
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        let v = a * rhs.get(r2, c2);
                        if v != 0 {
                            out.set(r1 * rhs.rows + r2, c1 * rhs.cols + c2, v);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Transpose (the adjoint: all entries are integers).
    pub fn adjoint(&self) -> TensorMatrix {
        let mut out = TensorMatrix {
            rows: self.cols,
            cols: self.rows,
            data: vec![0; self.data.len()],
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn scale(&self, factor: i64) -> TensorMatrix {
        TensorMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * factor).collect(),
        }
    }
}

/// `N^e` as usize, guarded against overflow of the entry budget.
fn power_dim(n: u32, e: usize) -> Result<usize> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= n as u128;
        if acc > ENTRY_BUDGET {
            return Err(Error::SizeBound {
                entries: acc,
                bound: ENTRY_BUDGET,
            });
        }
    }
    Ok(acc as usize)
}

/// Decodes a row-major flat index into a tuple over `1..=N`.
fn decode_tuple(mut index: usize, n: u32, len: usize, out: &mut [u32]) {
    for t in (0..len).rev() {
        out[t] = (index % n as usize) as u32 + 1;
        index /= n as usize;
    }
}

fn delta_matrix(p: &Partition, n: u32, signed: bool) -> Result<TensorMatrix> {
    let k = p.upper_count();
    let l = p.lower_count();
    let rows = power_dim(n, l)?;
    let cols = power_dim(n, k)?;
    let entries = rows as u128 * cols as u128;
    if entries > ENTRY_BUDGET {
        return Err(Error::SizeBound {
            entries,
            bound: ENTRY_BUDGET,
        });
    }
    if signed && !p.is_even() {
        return Err(Error::OddBlock);
    }
    let data: Vec<i64> = par::map_indexed(rows, |r| {
        let mut tuple = vec![0u32; k + l];
        decode_tuple(r, n, l, &mut tuple[k..]);
        let mut row = vec![0i64; cols];
        for (c, cell) in row.iter_mut().enumerate() {
            decode_tuple(c, n, k, &mut tuple[..k]);
            let v = if signed {
                p.delta_bar(&tuple).expect("shape checked") as i64
            } else {
                p.delta(&tuple).expect("shape checked") as i64
            };
            *cell = v;
        }
        row
    })
    .into_iter()
    .flatten()
    .collect();
    Ok(TensorMatrix { rows, cols, data })
}

/// The map `T_π : (C^N)^{⊗k} → (C^N)^{⊗l}` with entries `δ_π`.
pub fn t_map(p: &Partition, n: u32) -> Result<TensorMatrix> {
    delta_matrix(p, n, false)
}

/// The signed map `T̄_π` with entries `δ̄_π`; requires all blocks even.
pub fn t_bar_map(p: &Partition, n: u32) -> Result<TensorMatrix> {
    delta_matrix(p, n, true)
}

/// A vector in `(C^N)^{⊗k}` with integer entries, indexed row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedVector {
    len: usize,
    data: Vec<i64>,
}

impl FixedVector {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        self.data[i]
    }

    /// Euclidean inner product (all entries are integers).
    pub fn dot(&self, other: &FixedVector) -> Result<i64> {
        if self.len != other.len {
            return Err(Error::ShapeMismatch(format!(
                "dot of vectors of length {} and {}",
                self.len, other.len
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a * b)
            .sum())
    }
}

/// The vector `ξ_π ∈ (C^N)^{⊗k}` of a one-row partition (entries `δ_π`), or
/// its signed version `ξ̄_π` (entries `δ̄_π`) when `signed` is set.
pub fn xi_vector(p: &Partition, n: u32, signed: bool) -> Result<FixedVector> {
    if p.upper_count() != 0 {
        return Err(Error::ShapeMismatch(format!(
            "xi vector needs a one-row partition, got ({},{})",
            p.upper_count(),
            p.lower_count()
        )));
    }
    if signed && !p.is_even() {
        return Err(Error::OddBlock);
    }
    let k = p.lower_count();
    let len = power_dim(n, k)?;
    let data: Vec<i64> = par::map_indexed(len, |i| {
        let mut tuple = vec![0u32; k];
        decode_tuple(i, n, k, &mut tuple);
        if signed {
            p.delta_bar(&tuple).expect("shape checked") as i64
        } else {
            p.delta(&tuple).expect("shape checked") as i64
        }
    });
    Ok(FixedVector { len, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_pairings, enumerate_pairings_shape, PairingFamily};

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn identity_and_mul() {
        let id = TensorMatrix::identity(3).unwrap();
        let mut a = TensorMatrix::zero(3, 3).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                a.set(r, c, (r * 3 + c) as i64);
            }
        }
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
    }

    #[test]
    fn size_budget_is_enforced() {
        assert!(matches!(
            TensorMatrix::zero(100_000, 101),
            Err(Error::SizeBound { .. })
        ));
        let p = part("0,8:[1,2|3,4|5,6|7,8]");
        assert!(matches!(t_map(&p, 10), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn crossing_map_swaps_factors() {
        // T of the crossing is the flip a⊗b -> b⊗a.
        let cross = Partition::from_permutation(&[1, 0]).unwrap();
        let n = 3u32;
        let t = t_map(&cross, n).unwrap();
        for a in 0..n as usize {
            for b in 0..n as usize {
                let col = a * n as usize + b;
                let row = b * n as usize + a;
                for r in 0..(n * n) as usize {
                    assert_eq!(t.get(r, col), i64::from(r == row));
                }
            }
        }
    }

    #[test]
    fn signed_crossing_map_has_off_diagonal_signs() {
        // T̄ of the crossing sends e_i⊗e_j to −e_j⊗e_i for i ≠ j and to
        // e_i⊗e_i on the diagonal.
        let cross = Partition::from_permutation(&[1, 0]).unwrap();
        let n = 3u32;
        let t = t_bar_map(&cross, n).unwrap();
        for i in 0..n as usize {
            for j in 0..n as usize {
                let col = i * n as usize + j;
                let row = j * n as usize + i;
                let want = if i == j { 1 } else { -1 };
                for r in 0..(n * n) as usize {
                    assert_eq!(t.get(r, col), if r == row { want } else { 0 });
                }
            }
        }
    }

    #[test]
    fn signed_three_string_mirror_signs() {
        // T̄ of the mirror permutation on three strings: e_i⊗e_j⊗e_k goes to
        // ±e_k⊗e_j⊗e_i, with sign −1 exactly when i, j, k are distinct.
        let mirror = Partition::from_permutation(&[2, 1, 0]).unwrap();
        let n = 3u32;
        let t = t_bar_map(&mirror, n).unwrap();
        let nn = n as usize;
        for i in 0..nn {
            for j in 0..nn {
                for k in 0..nn {
                    let col = (i * nn + j) * nn + k;
                    let row = (k * nn + j) * nn + i;
                    let want = if i != j && j != k && i != k { -1 } else { 1 };
                    assert_eq!(t.get(row, col), want, "i={i} j={j} k={k}");
                    let total: i64 = (0..nn * nn * nn).map(|r| t.get(r, col).abs()).sum();
                    assert_eq!(total, 1);
                }
            }
        }
    }

    #[test]
    fn semicircle_map_is_the_duality_vector() {
        let cap = Partition::semicircle();
        let n = 4u32;
        let t = t_map(&cap, n).unwrap();
        assert_eq!(t.rows(), 16);
        assert_eq!(t.cols(), 1);
        for a in 0..n as usize {
            for b in 0..n as usize {
                assert_eq!(t.get(a * n as usize + b, 0), i64::from(a == b));
            }
        }
    }

    #[test]
    fn tensor_of_partitions_is_kron_of_maps() {
        let n = 2u32;
        let parts = [
            part("1,1:[1,2]"),
            Partition::from_permutation(&[1, 0]).unwrap(),
            Partition::semicircle(),
        ];
        for p in &parts {
            for q in &parts {
                let lhs = t_map(&p.tensor(q), n).unwrap();
                let rhs = t_map(p, n).unwrap().kron(&t_map(q, n).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "tensor map mismatch for {p} ⊗ {q}");
            }
        }
    }

    #[test]
    fn composition_of_partitions_is_product_of_maps() {
        // T_{πσ} · N^{loops} accounting: T_π T_σ = N^loops T_{π∘σ}.
        let n = 3u32;
        let cap = Partition::semicircle(); // 0 -> 2
        let cup = cap.involution(); // 2 -> 0
        let (comp, loops) = cup.compose(&cap).unwrap();
        assert_eq!(loops, 1);
        let lhs = t_map(&cup, n).unwrap().mul(&t_map(&cap, n).unwrap()).unwrap();
        let rhs = t_map(&comp, n)
            .unwrap()
            .scale((n as i64).pow(loops as u32));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn involution_is_adjoint() {
        let n = 2u32;
        for p in enumerate_pairings_shape(1, 3, PairingFamily::Classical) {
            let t = t_map(&p, n).unwrap();
            let ti = t_map(&p.involution(), n).unwrap();
            assert_eq!(ti, t.adjoint());
        }
    }

    #[test]
    fn xi_matches_t_map_on_one_row_partitions() {
        let n = 3u32;
        for p in enumerate_pairings(4, PairingFamily::Classical) {
            let t = t_map(&p, n).unwrap();
            let xi = xi_vector(&p, n, false).unwrap();
            assert_eq!(t.cols(), 1);
            for i in 0..xi.len() {
                assert_eq!(xi.get(i), t.get(i, 0));
            }
        }
    }

    #[test]
    fn xi_gram_equals_power_of_join_blocks() {
        // <ξ_π, ξ_σ> = N^{|π ∨ σ|}, signed or not.
        for n in [2u32, 3] {
            for p in enumerate_pairings(4, PairingFamily::Classical) {
                for q in enumerate_pairings(4, PairingFamily::Classical) {
                    let (_, blocks) = p.join(&q).unwrap();
                    let want = (n as i64).pow(blocks as u32);
                    let plain = xi_vector(&p, n, false)
                        .unwrap()
                        .dot(&xi_vector(&q, n, false).unwrap())
                        .unwrap();
                    let signed = xi_vector(&p, n, true)
                        .unwrap()
                        .dot(&xi_vector(&q, n, true).unwrap())
                        .unwrap();
                    assert_eq!(plain, want, "plain gram at {p}, {q}");
                    assert_eq!(signed, want, "signed gram at {p}, {q}");
                }
            }
        }
    }
}
