//! Independent reference formulas for sphere integrals and pairing counts.
//!
//! Everything in this module is computed without touching partitions or
//! Weingarten matrices, so it can serve as an oracle for the diagrammatic
//! route: a classical closed form in double factorials, a binomial expansion
//! over the real sphere for the half-liberated case, and a q-series for the
//! free hyperspherical law. Results are exact rationals except for the
//! q-series, which is evaluated exactly in terms of a rational approximation
//! of q carrying a requested number of decimal digits.
//!
//! Note the double-factorial convention used throughout: `m!!` is the
//! product `(m−1)(m−3)(m−5)⋯` stopping above zero, with the empty product
//! equal to 1 — so `6!! = 5·3·1 = 15` and `0!! = 1!! = 2!! = 1`. This is the
//! convention the closed forms below are stated in; it is shifted by one
//! from the more common one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partitions::PairingFamily;

/// `m!! = (m−1)(m−3)⋯` (see the module notes; empty product = 1).
pub fn double_factorial(m: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut f = m as i64 - 1;
    while f > 1 {
        acc *= f;
        f -= 2;
    }
    acc
}

pub fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, v| acc * v)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn catalan(l: u64) -> BigInt {
    binomial(2 * l, l) / BigInt::from(l + 1)
}

/// Number of pairings of `2l` points in the family: `(2l)!!` (our
/// convention, i.e. the product of odd numbers up to `2l−1`), `l!`, or the
/// Catalan number.
pub fn reference_counts(family: PairingFamily, l: u64) -> BigInt {
    match family {
        PairingFamily::Classical => double_factorial(2 * l),
        PairingFamily::Half => factorial(l),
        PairingFamily::Free => catalan(l),
    }
}

/// Classical sphere integral of a monomial in which coordinate `a` appears
/// `profile[a]` times, over the real `(N−1)`-sphere with its uniform
/// probability measure:
///
/// `(N−1)!! · l_1!! ⋯ l_N!! / (N + Σl_a − 1)!!`
///
/// for all-even occurrence counts, and 0 otherwise.
pub fn classical_sphere_integral(profile: &[u64], n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Invalid("sphere dimension N must be positive".into()));
    }
    if profile.len() > n as usize {
        return Err(Error::Invalid(format!(
            "profile touches {} coordinates but N = {n}",
            profile.len()
        )));
    }
    if profile.iter().any(|&l| l % 2 == 1) {
        return Ok(BigRational::zero());
    }
    let total: u64 = profile.iter().sum();
    let mut numer = double_factorial(n as u64 - 1);
    for &l in profile {
        numer *= double_factorial(l);
    }
    let denom = double_factorial(n as u64 + total - 1);
    Ok(BigRational::new(numer, denom))
}

/// Half-liberated sphere integral of a balanced monomial with common
/// occurrence counts `l_a` (coordinate `a` appears `l_a` times at odd and
/// `l_a` times at even positions), via the binomial expansion over the real
/// `(2N−1)`-sphere:
///
/// `Σ_{r_1..r_N} binom(l_1, r_1)⋯binom(l_N, r_N) ∫ y_1^{2(l_1−r_1)} y_2^{2r_1} ⋯`
///
/// with each term evaluated by [`classical_sphere_integral`] in dimension
/// `2N`. This is the ground-truth route for the half-liberated case.
pub fn half_liberated_integral_sum(profile: &[u64], n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Invalid("sphere dimension N must be positive".into()));
    }
    if profile.len() > n as usize {
        return Err(Error::Invalid(format!(
            "profile touches {} coordinates but N = {n}",
            profile.len()
        )));
    }
    let mut total = BigRational::zero();
    let mut r = vec![0u64; profile.len()];
    loop {
        let mut coeff = BigInt::one();
        let mut real_profile = Vec::with_capacity(2 * profile.len());
        for (&l, &ra) in profile.iter().zip(&r) {
            coeff *= binomial(l, ra);
            real_profile.push(2 * (l - ra));
            real_profile.push(2 * ra);
        }
        total += BigRational::from_integer(coeff)
            * classical_sphere_integral(&real_profile, 2 * n)?;
        // odometer over 0..=l_a
        let mut pos = 0;
        loop {
            if pos == r.len() {
                return Ok(total);
            }
            if r[pos] < profile[pos] {
                r[pos] += 1;
                break;
            }
            r[pos] = 0;
            pos += 1;
        }
    }
}

/// Literal evaluation of the closed form
/// `4^{Σl_a} · (2N−1)! · l_1! ⋯ l_N! / (2N + Σl_a − 1)!` for the
/// half-liberated integral. Kept only for the documented comparison report:
/// it disagrees with [`half_liberated_integral_sum`] (which matches the
/// diagrammatic route and the N = 1 hand value), so it is never used as
/// ground truth.
pub fn half_liberated_integral_stated(profile: &[u64], n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Invalid("sphere dimension N must be positive".into()));
    }
    let total: u64 = profile.iter().sum();
    let mut numer = BigInt::from(4u32).pow(total as u32) * factorial(2 * n as u64 - 1);
    for &l in profile {
        numer *= factorial(l);
    }
    let denom = factorial(2 * n as u64 + total - 1);
    Ok(BigRational::new(numer, denom))
}

/// The deformation parameter `q ∈ [−1, 0)` with `q + 1/q = −N`, carried as a
/// rational approximation accurate to the requested number of decimal
/// digits (at least 40, so the defining identity holds to 10⁻³⁰).
#[derive(Clone, Debug)]
pub struct QParameter {
    n: u32,
    digits: usize,
    q: BigRational,
}

impl QParameter {
    pub fn new(n: u32, digits: usize) -> Result<QParameter> {
        if n < 3 {
            return Err(Error::Invalid(format!(
                "q-parameter needs N ≥ 3 (q = −1 at N = 2 makes the series singular), got {n}"
            )));
        }
        let digits = digits.max(40);
        // q = (−N + √(N²−4)) / 2 via an integer square root of the scaled
        // radicand: floor(√((N²−4)·10^{2d})) / 10^d approximates √(N²−4)
        // with error below 10^{−d}.
        let scale = BigInt::from(10u32).pow(digits as u32);
        let radicand = BigInt::from(n as u64 * n as u64 - 4) * &scale * &scale;
        let root = radicand.sqrt();
        let q = BigRational::new(
            root - BigInt::from(n) * &scale,
            BigInt::from(2) * scale,
        );
        Ok(QParameter { n, digits, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    /// The defect `q + 1/q + N`, exactly; zero for the true root.
    pub fn defect(&self) -> BigRational {
        &self.q + self.q.recip() + BigRational::from_integer(BigInt::from(self.n))
    }
}

/// Even moment `∫ x_1^{2l}` of the free hyperspherical law via the q-series
///
/// `1/(N+2)^l · (q+1)/(q−1) · 1/(l+1) · Σ_{r=−l−1}^{l+1} (−1)^r binom(2l+2, l+r+1) · r/(1+q^r)`
///
/// evaluated exactly at the rational approximation of `q`. The `r = 0` term
/// contributes nothing. Needs `N ≥ 3`.
///
/// The prefactor here is `1/(N+2)^l`; evaluating the same series with
/// `1/(N+1)^l` fails every independent check (`l = 1` must give `1/N`), so
/// that variant is rejected by the tests below.
pub fn free_moment(l: u64, n: u32, digits: usize) -> Result<BigRational> {
    let qp = QParameter::new(n, digits)?;
    let q = qp.q();
    let mut sum = BigRational::zero();
    for r in -(l as i64 + 1)..=(l as i64 + 1) {
        if r == 0 {
            continue;
        }
        let binom = binomial(2 * l + 2, (l as i64 + r + 1) as u64);
        let q_pow = if r > 0 {
            pow_rational(q, r as u32)
        } else {
            pow_rational(&q.recip(), (-r) as u32)
        };
        let term = BigRational::from_integer(binom * BigInt::from(r))
            / (BigRational::one() + q_pow);
        if r % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let prefactor = BigRational::new(
        BigInt::one(),
        BigInt::from(n as u64 + 2).pow(l as u32) * BigInt::from(l + 1),
    );
    let ratio = (q + BigRational::one()) / (q - BigRational::one());
    Ok(prefactor * ratio * sum)
}

fn pow_rational(q: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Fixed-point decimal rendering of a rational, rounded half away from zero.
pub fn decimal_string(x: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = x.numer() * &scale;
    // round(|scaled| / den) half away from zero, in unsigned arithmetic
    let den = x.denom();
    let twice = scaled.magnitude() * 2u32;
    let q = (&twice / den.magnitude() + 1u32) / 2u32;
    let mut digits_str = q.to_string();
    if digits_str.len() <= digits {
        let pad = "0".repeat(digits + 1 - digits_str.len());
        digits_str = format!("{pad}{digits_str}");
    }
    let split = digits_str.len() - digits;
    let (int_part, frac_part) = digits_str.split_at(split);
    let sign = if x.is_negative() && digits_str.bytes().any(|b| b != b'0') {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Adaptive Simpson quadrature, used only to cross-check closed forms
/// against a measure-theoretic computation at N = 2. The interval is first
/// split into nine panels so that integrands vanishing at the quarter-period
/// sample points of trigonometric monomials cannot fool the error estimate.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, left, tol / 2.0, depth - 1) + rec(f, m, b, right, tol / 2.0, depth - 1)
        }
    }
    const PANELS: usize = 9;
    let width = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = lo + width;
            rec(f, lo, hi, simpson(f, lo, hi), tol / PANELS as f64, 40)
        })
        .sum()
}

/// `f64` value of a rational (used only in tolerance comparisons).
pub fn to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn double_factorial_convention() {
        let values: Vec<BigInt> = (0..=8).map(double_factorial).collect();
        let expect: Vec<BigInt> = [1i64, 1, 1, 2, 3, 8, 15, 48, 105]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(values, expect);
    }

    #[test]
    fn counting_helpers() {
        assert_eq!(catalan(3), BigInt::from(5));
        let cats: Vec<BigInt> = (0..=5).map(catalan).collect();
        assert_eq!(
            cats,
            [1i64, 1, 2, 5, 14, 42]
                .iter()
                .map(|&v| BigInt::from(v))
                .collect::<Vec<_>>()
        );
        for (l, c, h, f) in [
            (0u64, 1i64, 1i64, 1i64),
            (1, 1, 1, 1),
            (2, 3, 2, 2),
            (3, 15, 6, 5),
            (4, 105, 24, 14),
        ] {
            assert_eq!(reference_counts(PairingFamily::Classical, l), BigInt::from(c));
            assert_eq!(reference_counts(PairingFamily::Half, l), BigInt::from(h));
            assert_eq!(reference_counts(PairingFamily::Free, l), BigInt::from(f));
        }
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn classical_integral_values() {
        for n in 2..=6u32 {
            assert_eq!(
                classical_sphere_integral(&[4], n).unwrap(),
                rat(3, (n * (n + 2)) as i64),
                "x^4 moment at N={n}"
            );
            assert_eq!(
                classical_sphere_integral(&[2], n).unwrap(),
                rat(1, n as i64)
            );
        }
        assert_eq!(classical_sphere_integral(&[2, 2], 2).unwrap(), rat(1, 8));
        assert_eq!(classical_sphere_integral(&[1, 1], 4).unwrap(), rat(0, 1));
        assert_eq!(classical_sphere_integral(&[3], 3).unwrap(), rat(0, 1));
        assert_eq!(classical_sphere_integral(&[], 5).unwrap(), rat(1, 1));
        assert_eq!(classical_sphere_integral(&[6], 3).unwrap(), rat(1, 7));
        assert_eq!(classical_sphere_integral(&[4], 1).unwrap(), rat(1, 1));
    }

    #[test]
    fn classical_integral_matches_circle_quadrature() {
        // At N = 2 the uniform sphere measure is the circle; integrate
        // cos^p sin^q directly.
        use std::f64::consts::PI;
        for p in [0u64, 2, 4, 6] {
            for q in [0u64, 2, 4] {
                let exact = to_f64(&classical_sphere_integral(&[p, q], 2).unwrap());
                let f = |t: f64| t.cos().powi(p as i32) * t.sin().powi(q as i32);
                let numeric = adaptive_simpson(&f, 0.0, 2.0 * PI, 1e-12) / (2.0 * PI);
                assert!(
                    (exact - numeric).abs() < 1e-9,
                    "p={p} q={q}: {exact} vs {numeric}"
                );
            }
        }
    }

    #[test]
    fn quarter_circle_double_factorial_identity() {
        // ∫₀^{π/2} cos^p sin^q = (π/2)^{[p,q both even]} p!! q!! / (p+q+1)!!
        use std::f64::consts::PI;
        for p in 0..=5u64 {
            for q in 0..=5u64 {
                let f = |t: f64| t.cos().powi(p as i32) * t.sin().powi(q as i32);
                let numeric = adaptive_simpson(&f, 0.0, PI / 2.0, 1e-12);
                let base = to_f64(&BigRational::new(
                    double_factorial(p) * double_factorial(q),
                    double_factorial(p + q + 1),
                ));
                let closed = if p % 2 == 0 && q % 2 == 0 {
                    base * PI / 2.0
                } else {
                    base
                };
                assert!(
                    (closed - numeric).abs() < 1e-9,
                    "p={p} q={q}: {closed} vs {numeric}"
                );
            }
        }
    }

    #[test]
    fn half_liberated_sum_values() {
        assert_eq!(half_liberated_integral_sum(&[2], 1).unwrap(), rat(1, 1));
        assert_eq!(half_liberated_integral_sum(&[2], 2).unwrap(), rat(1, 3));
        assert_eq!(half_liberated_integral_sum(&[1, 1], 2).unwrap(), rat(1, 6));
        assert_eq!(half_liberated_integral_sum(&[1], 3).unwrap(), rat(1, 3));
        assert_eq!(half_liberated_integral_sum(&[], 2).unwrap(), rat(1, 1));
    }

    #[test]
    fn stated_closed_form_disagrees() {
        assert_eq!(half_liberated_integral_stated(&[2], 1).unwrap(), rat(16, 3));
        assert_eq!(half_liberated_integral_stated(&[2], 2).unwrap(), rat(8, 5));
        assert_eq!(
            half_liberated_integral_stated(&[0, 0], 3).unwrap(),
            rat(1, 1)
        );
        // The two routes differ; the sum is the one matching hand values.
        assert_ne!(
            half_liberated_integral_stated(&[2], 1).unwrap(),
            half_liberated_integral_sum(&[2], 1).unwrap()
        );
    }

    #[test]
    fn q_parameter_properties() {
        let qp = QParameter::new(3, 50).unwrap();
        let tol = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(30));
        assert!(qp.defect().abs() < tol, "defect {}", qp.defect());
        // q ≈ (−3+√5)/2 = −0.3819660113...
        let q = to_f64(qp.q());
        assert!((q + 0.3819660113).abs() < 1e-9, "q = {q}");
        assert!(QParameter::new(2, 50).is_err());
        for n in 3..=6u32 {
            let qp = QParameter::new(n, 50).unwrap();
            assert!(qp.defect().abs() < tol, "defect at N={n}");
            let q = to_f64(qp.q());
            assert!((-1.0..0.0).contains(&q), "q out of range at N={n}");
        }
    }

    #[test]
    fn free_moment_reference_values() {
        // l = 1 must give 1/N (the coordinates' squares sum to 1 and are
        // exchangeable), pinning the prefactor base N+2.
        for n in 3..=6u32 {
            let v = to_f64(&free_moment(1, n, 50).unwrap());
            assert!((v - 1.0 / n as f64).abs() < 1e-9, "l=1 N={n}: {v}");
        }
        let v = to_f64(&free_moment(2, 3, 50).unwrap());
        assert!((v - 1.0 / 6.0).abs() < 1e-9, "l=2 N=3: {v}");
        let v = to_f64(&free_moment(1, 4, 50).unwrap());
        assert!((v - 0.25).abs() < 1e-9);
        assert!(free_moment(1, 2, 50).is_err());
    }

    #[test]
    fn free_moment_rejects_the_misprinted_prefactor() {
        // With base N+1 instead of N+2 the l = 1 value is off by the factor
        // (N+2)/(N+1); make sure we would catch such a regression.
        for n in 3..=5u32 {
            let v = to_f64(&free_moment(1, n, 50).unwrap());
            let wrong = v * (n as f64 + 2.0) / (n as f64 + 1.0);
            assert!((wrong - 1.0 / n as f64).abs() > 1e-3);
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(1, 3), 5), "0.33333");
        assert_eq!(decimal_string(&rat(-1, 8), 3), "-0.125");
        assert_eq!(decimal_string(&rat(1, 8), 2), "0.13");
        assert_eq!(decimal_string(&rat(1, 2), 0), "1");
        assert_eq!(decimal_string(&rat(0, 1), 4), "0.0000");
        assert_eq!(decimal_string(&rat(7, 1), 2), "7.00");
        assert_eq!(decimal_string(&rat(-1, 1000000), 3), "0.000");
    }
}
