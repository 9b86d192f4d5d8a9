//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Gram matrices of pairing families are integer matrices whose inverses we
//! need exactly, so everything here avoids floating point. The workhorse is
//! fraction-free (Bareiss) forward elimination: the input is scaled to an
//! integer matrix by the least common multiple of its denominators, row
//! operations keep every intermediate entry an integer (each step divides
//! exactly by the previous pivot), and only the final back-substitution
//! returns to rationals. This bounds intermediate growth by minor sizes
//! instead of letting gcd-reduction churn on huge fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Pivot row selection during elimination. Both strategies are exact; they
/// only differ in intermediate entry growth, so agreement between the two is
/// a useful self-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotStrategy {
    /// First row with a nonzero entry in the pivot column.
    FirstNonZero,
    /// Row with the largest absolute entry in the pivot column.
    MaxMagnitude,
}

/// Dense row-major matrix of arbitrary-precision rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> RationalMatrix {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    /// Builds a matrix by evaluating `f` at every (row, column) pair.
    pub fn from_fn<F: FnMut(usize, usize) -> BigRational>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> RationalMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn from_integer_entries(rows: usize, cols: usize, entries: &[i64]) -> RationalMatrix {
        assert_eq!(entries.len(), rows * cols);
        RationalMatrix {
            rows,
            cols,
            data: entries
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "product of {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RationalMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for m in 0..self.cols {
                let a = self.get(r, m);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let term = a * rhs.get(m, c);
                    let cell = &mut out.data[r * rhs.cols + c];
                    *cell = &*cell + term;
                }
            }
        }
        Ok(out)
    }

    /// Least common multiple of all entry denominators.
    fn denominator_lcm(&self) -> BigInt {
        self.data
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }

    /// Integer matrix `L · self` where `L` is [`denominator_lcm`].
    fn scaled_integer_rows(&self, extra_cols: usize) -> (Vec<Vec<BigInt>>, BigInt) {
        let l = self.denominator_lcm();
        let rows = (0..self.rows)
            .map(|r| {
                let mut row: Vec<BigInt> = Vec::with_capacity(self.cols + extra_cols);
                for c in 0..self.cols {
                    let v = self.get(r, c);
                    row.push(v.numer() * (&l / v.denom()));
                }
                row.resize(self.cols + extra_cols, BigInt::zero());
                row
            })
            .collect();
        (rows, l)
    }

    /// Exact rank via fraction-free elimination with column skipping; works
    /// for rectangular matrices.
    pub fn rank(&self) -> usize {
        let (rows, _) = self.scaled_integer_rows(0);
        let elim = bareiss_eliminate(rows, self.cols, PivotStrategy::MaxMagnitude);
        elim.pivot_cols.len()
    }

    /// Exact inverse, or `None` when the matrix is singular.
    pub fn inverse(&self, strategy: PivotStrategy) -> Result<Option<RationalMatrix>> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "inverse of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        // Scale to integers B = L·A and augment with L·I, so that solving
        // U x = (row-reduced L·I) yields A⁻¹ = L·B⁻¹ column by column.
        let (mut rows, l) = self.scaled_integer_rows(n);
        for (i, row) in rows.iter_mut().enumerate() {
            row[n + i] = l.clone();
        }
        let elim = bareiss_eliminate(rows, n, strategy);
        if elim.pivot_cols.len() < n {
            return Ok(None);
        }
        let mut out = RationalMatrix::zero(n, n);
        for b in 0..n {
            let col = back_substitute(&elim, n, n + b, n)
                .expect("full-rank square system is consistent");
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, b, v);
            }
        }
        Ok(Some(out))
    }

    /// One exact solution of `self · x = rhs` with free variables set to
    /// zero, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[BigRational], strategy: PivotStrategy) -> Result<Option<Vec<BigRational>>> {
        if rhs.len() != self.rows {
            return Err(Error::LengthMismatch {
                want: self.rows,
                got: rhs.len(),
            });
        }
        // A common scale for the matrix and the right-hand side keeps the
        // solution set unchanged (every row is multiplied by the same L).
        let l_rhs = rhs
            .iter()
            .fold(self.denominator_lcm(), |acc, v| acc.lcm(v.denom()));
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let mut row: Vec<BigInt> = Vec::with_capacity(self.cols + 1);
                for c in 0..self.cols {
                    let v = self.get(r, c);
                    row.push(v.numer() * (&l_rhs / v.denom()));
                }
                let b = &rhs[r];
                row.push(b.numer() * (&l_rhs / b.denom()));
                row
            })
            .collect();
        let elim = bareiss_eliminate(std::mem::take(&mut rows), self.cols, strategy);
        Ok(back_substitute(&elim, self.cols, self.cols, self.cols))
    }
}

/// Result of fraction-free forward elimination: the reduced rows and the
/// pivot column of each pivot row.
struct Eliminated {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
}

/// Bareiss fraction-free elimination over the first `coeff_cols` columns;
/// later columns ride along as augmented data. Rows are swapped for pivoting;
/// every division is exact.
fn bareiss_eliminate(
    mut rows: Vec<Vec<BigInt>>,
    coeff_cols: usize,
    strategy: PivotStrategy,
) -> Eliminated {
    let n_rows = rows.len();
    let total_cols = rows.first().map_or(0, |r| r.len());
    let mut pivot_cols = Vec::new();
    let mut prev = BigInt::one();
    let mut t = 0usize; // next pivot row
    for c in 0..coeff_cols {
        if t == n_rows {
            break;
        }
        let pivot_row = match strategy {
            PivotStrategy::FirstNonZero => (t..n_rows).find(|&r| !rows[r][c].is_zero()),
            PivotStrategy::MaxMagnitude => (t..n_rows)
                .filter(|&r| !rows[r][c].is_zero())
                .max_by_key(|&r| rows[r][c].abs()),
        };
        let Some(pr) = pivot_row else { continue };
        rows.swap(t, pr);
        let pivot = rows[t][c].clone();
        for i in t + 1..n_rows {
            if rows[i][c].is_zero() {
                // Still renormalize by pivot/prev to keep the Bareiss
                // invariant (entries are minors of the original matrix).
                for j in c + 1..total_cols {
                    if !rows[i][j].is_zero() {
                        let v = &pivot * &rows[i][j];
                        rows[i][j] = exact_div(v, &prev);
                    }
                }
                continue;
            }
            let factor = rows[i][c].clone();
            for j in c + 1..total_cols {
                let v = &pivot * &rows[i][j] - &factor * &rows[t][j];
                rows[i][j] = exact_div(v, &prev);
            }
            rows[i][c] = BigInt::zero();
        }
        prev = pivot;
        pivot_cols.push(c);
        t += 1;
    }
    Eliminated { rows, pivot_cols }
}

fn exact_div(v: BigInt, d: &BigInt) -> BigInt {
    debug_assert!(!d.is_zero());
    let (q, r) = v.div_rem(d);
    debug_assert!(r.is_zero(), "Bareiss division left a remainder");
    q
}

/// Solves the row-echelon system for one augmented column with free
/// variables fixed at zero. Returns `None` when the system is inconsistent.
fn back_substitute(
    elim: &Eliminated,
    coeff_cols: usize,
    aug_col: usize,
    n_vars: usize,
) -> Option<Vec<BigRational>> {
    let pivots = elim.pivot_cols.len();
    // Rows below the last pivot have zero coefficients everywhere; a nonzero
    // right-hand side there means no solution.
    for row in elim.rows.iter().skip(pivots) {
        if !row[aug_col].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n_vars];
    for r in (0..pivots).rev() {
        let pc = elim.pivot_cols[r];
        let mut acc = BigRational::from_integer(elim.rows[r][aug_col].clone());
        for j in pc + 1..coeff_cols {
            if !elim.rows[r][j].is_zero() && !x[j].is_zero() {
                acc -= BigRational::from_integer(elim.rows[r][j].clone()) * &x[j];
            }
        }
        x[pc] = acc / BigRational::from_integer(elim.rows[r][pc].clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn inverse_of_small_integer_matrix() {
        let a = RationalMatrix::from_integer_entries(2, 2, &[2, 1, 1, 1]);
        let inv = a.inverse(PivotStrategy::FirstNonZero).unwrap().unwrap();
        let expect = RationalMatrix::from_integer_entries(2, 2, &[1, -1, -1, 2]);
        assert_eq!(inv, expect);
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
    }

    #[test]
    fn inverse_with_fractional_entries() {
        let mut a = RationalMatrix::zero(2, 2);
        a.set(0, 0, rat(1, 2));
        a.set(0, 1, rat(1, 3));
        a.set(1, 0, rat(1, 5));
        a.set(1, 1, rat(1, 4));
        let inv = a.inverse(PivotStrategy::MaxMagnitude).unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
        assert_eq!(inv.mul(&a).unwrap(), RationalMatrix::identity(2));
    }

    #[test]
    fn singular_matrix_has_no_inverse_and_low_rank() {
        let a = RationalMatrix::from_integer_entries(3, 3, &[1, 2, 3, 2, 4, 6, 1, 0, 1]);
        assert!(a.inverse(PivotStrategy::FirstNonZero).unwrap().is_none());
        assert!(a.inverse(PivotStrategy::MaxMagnitude).unwrap().is_none());
        assert_eq!(a.rank(), 2);
        let wide = RationalMatrix::from_integer_entries(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(wide.rank(), 1);
        assert_eq!(RationalMatrix::zero(3, 4).rank(), 0);
        assert_eq!(RationalMatrix::identity(5).rank(), 5);
    }

    #[test]
    fn strategies_agree_on_a_grid_of_matrices() {
        // Small deterministic pseudo-random integer matrices.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 11) as i64 - 5
        };
        for n in 1..=6usize {
            for _ in 0..8 {
                let entries: Vec<i64> = (0..n * n).map(|_| next()).collect();
                let a = RationalMatrix::from_integer_entries(n, n, &entries);
                let inv1 = a.inverse(PivotStrategy::FirstNonZero).unwrap();
                let inv2 = a.inverse(PivotStrategy::MaxMagnitude).unwrap();
                assert_eq!(inv1.is_some(), inv2.is_some());
                if let (Some(i1), Some(i2)) = (&inv1, &inv2) {
                    assert_eq!(i1, i2);
                    assert_eq!(a.mul(i1).unwrap(), RationalMatrix::identity(n));
                }
            }
        }
    }

    #[test]
    fn solve_consistent_singular_system() {
        // Rank-1 system with a right-hand side in the column space.
        let a = RationalMatrix::from_integer_entries(3, 3, &[1, 2, 3, 2, 4, 6, 3, 6, 9]);
        let rhs = vec![rat(1, 1), rat(2, 1), rat(3, 1)];
        let x = a.solve(&rhs, PivotStrategy::FirstNonZero).unwrap().unwrap();
        // verify A x = rhs exactly
        for r in 0..3 {
            let mut acc = BigRational::zero();
            for c in 0..3 {
                acc += a.get(r, c) * &x[c];
            }
            assert_eq!(acc, rhs[r]);
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = RationalMatrix::from_integer_entries(2, 2, &[1, 1, 1, 1]);
        let rhs = vec![rat(1, 1), rat(2, 1)];
        assert!(a.solve(&rhs, PivotStrategy::FirstNonZero).unwrap().is_none());
        assert!(a.solve(&rhs, PivotStrategy::MaxMagnitude).unwrap().is_none());
    }

    #[test]
    fn solve_full_rank_matches_inverse() {
        let a = RationalMatrix::from_integer_entries(3, 3, &[2, 0, 1, 1, 3, 0, 0, 1, 4]);
        let rhs = vec![rat(5, 2), rat(-1, 3), rat(7, 1)];
        let x = a.solve(&rhs, PivotStrategy::MaxMagnitude).unwrap().unwrap();
        let inv = a.inverse(PivotStrategy::MaxMagnitude).unwrap().unwrap();
        for r in 0..3 {
            let mut acc = BigRational::zero();
            for c in 0..3 {
                acc += inv.get(r, c) * &rhs[c];
            }
            assert_eq!(acc, x[r]);
        }
    }
}
