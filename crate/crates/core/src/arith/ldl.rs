//! Exact symmetric pivoted `LDL^T` with indefiniteness witnesses.
//!
//! Elimination runs on a permuted copy of the matrix. At every step the
//! trailing Schur complement is scanned first for a negative diagonal entry,
//! then for a zero diagonal entry in a nonzero row; either yields a vector
//! `v` with `v^T A v < 0`. Otherwise the first positive diagonal entry is the
//! pivot. When only zero rows remain the factorization is complete.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{dot, SymMatrix};
use crate::arith::Scalar;

/// Factors `P A P^T = L D L^T` of a positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdlFactors {
    /// `perm[k]` is the original index eliminated at step `k`.
    pub perm: Vec<usize>,
    /// Unit lower-triangular factor in pivot order, row-major `n x n`.
    pub lower: Vec<Vec<Scalar>>,
    /// Diagonal of `D`: `rank` positive entries followed by zeros.
    pub pivots: Vec<Scalar>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdCertificate {
    Psd(LdlFactors),
    /// `witness^T A witness = value < 0`.
    Indefinite {
        witness: Vec<Scalar>,
        value: Scalar,
    },
}

impl PsdCertificate {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCertificate::Psd(_))
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            PsdCertificate::Psd(f) => Some(f.rank),
            PsdCertificate::Indefinite { .. } => None,
        }
    }
}

impl LdlFactors {
    /// Rebuilds the original matrix from the factors.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.perm.len();
        let mut permuted = SymMatrix::zeros(n);
        for (k, d) in self.pivots.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let col: Vec<Scalar> = (0..n).map(|i| self.lower[i][k].clone()).collect();
            permuted.add_rank_one(d, &col);
        }
        permuted.permuted(&self.perm)
    }
}

pub fn ldl_certify(a: &SymMatrix) -> PsdCertificate {
    let n = a.dim();
    let mut s: Vec<Vec<Scalar>> = a.rows().map(|r| r.to_vec()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut lower = vec![vec![Scalar::zero(); n]; n];
    for (i, row) in lower.iter_mut().enumerate() {
        row[i] = Scalar::from_int(1);
    }
    let mut pivots = Vec::with_capacity(n);

    for k in 0..n {
        if let Some(p) = (k..n).find(|&p| s[p][p].is_negative()) {
            let mut y = vec![Scalar::zero(); n];
            y[p] = Scalar::from_int(1);
            return indefinite(a, &lower, &perm, y);
        }
        for p in k..n {
            if !s[p][p].is_zero() {
                continue;
            }
            if let Some(q) = (k..n).find(|&q| q != p && !s[p][q].is_zero()) {
                let mut y = vec![Scalar::zero(); n];
                if s[q][q].is_zero() {
                    // (e_p - sign e_q)^T S (e_p - sign e_q) = -2 |S_pq|
                    y[p] = Scalar::from_int(1);
                    y[q] = Scalar::from_int(-(s[p][q].signum() as i64));
                } else {
                    // (a e_p + e_q)^T S (a e_p + e_q) = 2 a S_pq + S_qq = -1
                    y[p] = -(&s[q][q] + &Scalar::from_int(1)) / (&Scalar::from_int(2) * &s[p][q]);
                    y[q] = Scalar::from_int(1);
                }
                return indefinite(a, &lower, &perm, y);
            }
        }
        let Some(p) = (k..n).find(|&p| s[p][p].is_positive()) else {
            break;
        };
        if p != k {
            s.swap(p, k);
            for row in s.iter_mut() {
                row.swap(p, k);
            }
            perm.swap(p, k);
            for c in 0..k {
                let tmp = lower[p][c].clone();
                lower[p][c] = lower[k][c].clone();
                lower[k][c] = tmp;
            }
        }
        let d = s[k][k].clone();
        for i in k + 1..n {
            if s[i][k].is_zero() {
                continue;
            }
            let l = &s[i][k] / &d;
            for j in k + 1..n {
                if !s[k][j].is_zero() {
                    let delta = &l * &s[k][j];
                    s[i][j] -= delta;
                }
            }
            lower[i][k] = l;
        }
        for i in k + 1..n {
            s[i][k] = Scalar::zero();
            s[k][i] = Scalar::zero();
        }
        pivots.push(d);
    }
    let rank = pivots.len();
    pivots.resize(n, Scalar::zero());
    PsdCertificate::Psd(LdlFactors {
        perm,
        lower,
        pivots,
        rank,
    })
}

/// Lifts a trailing-block direction `y` (pivot coordinates) to a witness for `a`
/// by solving `L^T z = y` and undoing the permutation.
fn indefinite(
    a: &SymMatrix,
    lower: &[Vec<Scalar>],
    perm: &[usize],
    y: Vec<Scalar>,
) -> PsdCertificate {
    let n = y.len();
    let mut z = y;
    for i in (0..n).rev() {
        let mut acc = z[i].clone();
        for j in i + 1..n {
            if !lower[j][i].is_zero() && !z[j].is_zero() {
                acc -= &lower[j][i] * &z[j];
            }
        }
        z[i] = acc;
    }
    let mut witness = vec![Scalar::zero(); n];
    for (k, &orig) in perm.iter().enumerate() {
        witness[orig] = z[k].clone();
    }
    let value = dot(&witness, &a.mul_vec(&witness));
    debug_assert!(value.is_negative(), "witness must certify indefiniteness");
    PsdCertificate::Indefinite { witness, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_one_all_ones() {
        let m = SymMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap();
        let PsdCertificate::Psd(f) = ldl_certify(&m) else {
            panic!("expected psd")
        };
        assert_eq!(f.rank, 1);
        assert_eq!(f.pivots, vec![Scalar::from_int(1), Scalar::zero()]);
        assert_eq!(f.reconstruct(), m);
    }

    #[test]
    fn zero_diagonal_gives_two_by_two_witness() {
        let m = SymMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let PsdCertificate::Indefinite { witness, value } = ldl_certify(&m) else {
            panic!("indefinite")
        };
        assert!(value.is_negative());
        assert_eq!(m.quad_form(&witness), value);
        assert_eq!(witness, vec![Scalar::from_int(1), Scalar::from_int(-1)]);
        assert_eq!(value, Scalar::from_int(-2));
    }

    #[test]
    fn negative_after_elimination() {
        let m = SymMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]).unwrap();
        let PsdCertificate::Indefinite { witness, value } = ldl_certify(&m) else {
            panic!()
        };
        assert_eq!(m.quad_form(&witness), value);
        assert!(value.is_negative());
    }

    #[test]
    fn pivoting_past_zero_rows() {
        let m = SymMatrix::from_i64_rows(&[&[0, 0, 0], &[0, 2, 1], &[0, 1, 1]]).unwrap();
        let cert = ldl_certify(&m);
        assert_eq!(cert.rank(), Some(2));
        let PsdCertificate::Psd(f) = cert else {
            unreachable!()
        };
        assert_eq!(f.reconstruct(), m);
    }

    #[test]
    fn surd_entries() {
        let r = Scalar::sqrt_rational(&crate::arith::rational(7, 5)).unwrap();
        let m = SymMatrix::from_fn(2, |i, j| {
            if i == j {
                r.clone()
            } else {
                Scalar::from_int(1)
            }
        });
        let PsdCertificate::Psd(f) = ldl_certify(&m) else {
            panic!()
        };
        assert_eq!(f.rank, 2);
        assert_eq!(f.reconstruct(), m);
    }

    proptest! {
        #[test]
        fn certificate_is_always_checkable(n in 1usize..=8,
                                          entries in prop::collection::vec((-4i64..=4, 1i64..=3), 36),
                                          gram in any::<bool>()) {
            let base = SymMatrix::from_fn(n, |i, j| {
                let (p, q) = entries[(i * 8 + j) % 36];
                Scalar::from_ratio(p, q)
            });
            // Half the cases are Gram matrices, so PSD verdicts get exercised too.
            let m = if gram {
                let mut g = SymMatrix::zeros(n);
                for r in base.rows().take(n.min(3)) {
                    g.add_rank_one(&Scalar::from_int(1), r);
                }
                g
            } else {
                base
            };
            match ldl_certify(&m) {
                PsdCertificate::Psd(f) => {
                    prop_assert!(f.pivots.iter().all(Scalar::is_nonnegative));
                    prop_assert_eq!(f.reconstruct(), m.clone());
                    prop_assert_eq!(f.rank, m.rank());
                }
                PsdCertificate::Indefinite { witness, value } => {
                    prop_assert!(!gram);
                    prop_assert!(value.is_negative());
                    prop_assert_eq!(m.quad_form(&witness), value);
                }
            }
        }
    }
}
