//! Distance matrices of arithmetic progressions and their closed-form data.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{int, QuadSurd, Rational, Scalar, SymMatrix};
use crate::error::{Error, Result};

/// `A_n` with `(i, j)` entry `(j - i)^2`.
pub fn build_an(n: usize) -> Result<SymMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("A_n needs n >= 2, got {n}")));
    }
    Ok(an_unchecked(n))
}

pub(crate) fn an_unchecked(n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |i, j| Scalar::from_int(((j - i) * (j - i)) as i64))
}

/// `B_n = A_n + f(n) I`.
pub fn build_bn(n: usize) -> Result<SymMatrix> {
    Ok(build_an(n)?.add_diagonal(&Scalar::from(f_min(n))))
}

/// Squared-difference matrix of distinct points on the line.
pub fn build_edm(points: &[Rational]) -> Result<SymMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    for i in 0..points.len() {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(Error::InvalidArgument(format!(
                    "duplicate point {}",
                    points[i]
                )));
            }
        }
    }
    Ok(SymMatrix::from_fn(points.len(), |i, j| {
        let d = &points[j] - &points[i];
        Scalar::from(&d * &d)
    }))
}

/// Nonzero eigenvalues of `A_n` and the dimension of its kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTriple {
    pub lambda1: QuadSurd,
    pub lambda2: QuadSurd,
    pub lambda3: Rational,
    pub nullity: usize,
}

pub fn spectrum(n: usize) -> Result<SpectrumTriple> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "closed-form spectrum needs n >= 3 (A_2 has only two nonzero eigenvalues), got {n}"
        )));
    }
    let nn = BigInt::from(n);
    let n2 = &nn * &nn;
    let base = Rational::new(&nn * (&n2 - 1), BigInt::from(12));
    let under = Rational::new(&n2 * (&n2 - 1) * (&n2 * 3 - 7), BigInt::from(240));
    let root = QuadSurd::sqrt_rational(&under).ok_or_else(|| {
        Error::InternalContradiction("eigenvalue discriminant out of range".into())
    })?;
    let base = QuadSurd::from(base);
    Ok(SpectrumTriple {
        lambda1: &base + &root,
        lambda2: &base - &root,
        lambda3: -f_min(n),
        nullity: n - 3,
    })
}

/// Eigenvector for the most negative eigenvalue: `w_i = n + 1 - 2i`.
pub fn w_vector(n: usize) -> Vec<Scalar> {
    w_vector_i64(n).into_iter().map(Scalar::from_int).collect()
}

pub fn w_vector_i64(n: usize) -> Vec<i64> {
    (1..=n as i64).map(|i| n as i64 + 1 - 2 * i).collect()
}

/// Kernel basis of `A_n`: shifted third differences `(1, -3, 3, -1)`.
pub fn null_basis(n: usize) -> Vec<Vec<Scalar>> {
    if n < 4 {
        return Vec::new();
    }
    (0..n - 3)
        .map(|j| {
            let mut v = vec![Scalar::zero(); n];
            for (k, c) in [1, -3, 3, -1].into_iter().enumerate() {
                v[j + k] = Scalar::from_int(c);
            }
            v
        })
        .collect()
}

/// Anti-diagonal permutation `K_n`.
pub fn reversal(n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |i, j| Scalar::from_int((i + j + 1 == n) as i64))
}

/// `f(n) = n(n^2 - 1)/6`, the minimal shift making `A_n` positive semidefinite.
pub fn f_min(n: usize) -> Rational {
    let n = n as i64;
    int(n * (n * n - 1) / 6)
}

pub fn f_min_u128(n: u64) -> u128 {
    let n = n as u128;
    n * (n * n - 1) / 6
}

/// `g_D(n) = 1^2 + ... + (n-1)^2`, the minimal diagonally dominant shift.
pub fn g_diag(n: usize) -> Rational {
    let n = n as i64;
    int(n * (n - 1) * (2 * n - 1) / 6)
}

/// Jordan totient `J_2(k) = k^2 prod_{p | k} (1 - p^-2)` by trial division.
pub fn jordan_totient2(k: u64) -> u64 {
    assert!(k >= 1, "J_2 is defined for k >= 1");
    let mut rest = k;
    let mut out = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            out *= p.pow(2 * (e - 1)) * (p * p - 1);
        }
        p += 1;
    }
    if rest > 1 {
        out *= rest * rest - 1;
    }
    out
}

/// Number of divisors of `k`.
pub fn divisor_count(k: u64) -> u64 {
    (1..=k).filter(|d| k.is_multiple_of(*d)).count() as u64
}

/// `g_J(n) = J_2(1) + ... + J_2(n - 1)`.
pub fn g_jordan(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(g_jordan_u128(n as u64)))
}

pub fn g_jordan_u128(n: u64) -> u128 {
    (1..n).map(|k| jordan_totient2(k) as u128).sum()
}
