use alloc::vec::Vec;

use num_traits::Zero;

use super::model::{gram, CpFactorization};
use crate::arith::{dot, ldl_certify, PsdCertificate, Scalar, SymMatrix};
use crate::error::{Error, Result};

/// First entry where the Gram matrix and the target disagree (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub row: usize,
    pub col: usize,
    pub expected: Scalar,
    pub got: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub gram_matches: bool,
    pub columns_nonneg: bool,
    pub kernel_orthogonal: bool,
    /// Set when the factorization claims integrality but some atom is not weight-one integer.
    pub integrality_ok: bool,
    pub first_discrepancy: Option<Discrepancy>,
    /// `(atom, kernel vector)` of the first non-orthogonal pair.
    pub first_kernel_violation: Option<(usize, usize)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.gram_matches && self.columns_nonneg && self.kernel_orthogonal && self.integrality_ok
    }
}

/// Checks `gram(f) = a` exactly, atom nonnegativity, and orthogonality of every
/// atom support to every vector in `kernel`.
pub fn verify(
    a: &SymMatrix,
    f: &CpFactorization,
    kernel: &[Vec<Scalar>],
) -> Result<VerificationReport> {
    if a.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: f.dim(),
        });
    }
    if let Some(v) = kernel.iter().find(|v| v.len() != a.dim()) {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: v.len(),
        });
    }
    let g = gram(f);
    let mut first_discrepancy = None;
    'outer: for i in 0..a.dim() {
        for j in i..a.dim() {
            if a.get(i, j) != g.get(i, j) {
                first_discrepancy = Some(Discrepancy {
                    row: i,
                    col: j,
                    expected: a.get(i, j).clone(),
                    got: g.get(i, j).clone(),
                });
                break 'outer;
            }
        }
    }
    let columns_nonneg = f.atoms().iter().all(|at| at.is_nonnegative());
    let mut first_kernel_violation = None;
    'kernel: for (ai, at) in f.atoms().iter().enumerate() {
        for (ki, v) in kernel.iter().enumerate() {
            if !dot(at.support(), v).is_zero() {
                first_kernel_violation = Some((ai, ki));
                break 'kernel;
            }
        }
    }
    let integrality_ok = !f.is_integral() || f.atoms().iter().all(|at| at.is_integral());
    Ok(VerificationReport {
        gram_matches: first_discrepancy.is_none(),
        columns_nonneg,
        kernel_orthogonal: first_kernel_violation.is_none(),
        integrality_ok,
        first_discrepancy,
        first_kernel_violation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DnnVerdict {
    Dnn,
    /// First negative entry in row-major order over the upper triangle (0-based).
    NotNonneg(usize, usize),
    NotPsd {
        witness: Vec<Scalar>,
        value: Scalar,
    },
}

impl DnnVerdict {
    pub fn is_dnn(&self) -> bool {
        matches!(self, DnnVerdict::Dnn)
    }
}

pub fn dnn_check(a: &SymMatrix) -> DnnVerdict {
    for i in 0..a.dim() {
        for j in i..a.dim() {
            if a.get(i, j).is_negative() {
                return DnnVerdict::NotNonneg(i, j);
            }
        }
    }
    match ldl_certify(a) {
        PsdCertificate::Psd(_) => DnnVerdict::Dnn,
        PsdCertificate::Indefinite { witness, value } => DnnVerdict::NotPsd { witness, value },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edm::{build_an, build_bn, w_vector};
    use crate::factor::Atom;
    use alloc::vec;
    use num_traits::One;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn b2_with_kernel() {
        let f =
            CpFactorization::from_atoms(2, vec![Atom::new(Scalar::one(), ints(&[1, 1])).unwrap()])
                .unwrap();
        let r = verify(&build_bn(2).unwrap(), &f, &[w_vector(2)]).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn wrong_matrix_is_located() {
        let f = CpFactorization::from_atoms(
            3,
            vec![Atom::new(Scalar::one(), ints(&[1, 1, 1])).unwrap()],
        )
        .unwrap();
        let r = verify(&build_bn(3).unwrap(), &f, &[]).unwrap();
        assert!(!r.gram_matches);
        let d = r.first_discrepancy.unwrap();
        assert_eq!((d.row, d.col), (0, 0));
        assert_eq!(d.expected, Scalar::from_int(4));
        assert_eq!(d.got, Scalar::from_int(1));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f = CpFactorization::new(5);
        assert!(matches!(
            verify(&build_bn(6).unwrap(), &f, &[]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_violation_detected() {
        let f =
            CpFactorization::from_atoms(2, vec![Atom::new(Scalar::one(), ints(&[1, 0])).unwrap()])
                .unwrap();
        let r = verify(
            &SymMatrix::from_i64_rows(&[&[1, 0], &[0, 0]]).unwrap(),
            &f,
            &[ints(&[1, 1])],
        )
        .unwrap();
        assert!(r.gram_matches);
        assert!(!r.kernel_orthogonal);
        assert_eq!(r.first_kernel_violation, Some((0, 0)));
    }

    #[test]
    fn dnn_verdicts() {
        assert!(matches!(
            dnn_check(&build_an(6).unwrap()),
            DnnVerdict::NotPsd { .. }
        ));
        assert_eq!(dnn_check(&build_bn(6).unwrap()), DnnVerdict::Dnn);
        let m = SymMatrix::from_i64_rows(&[&[1, -1], &[-1, 1]]).unwrap();
        assert_eq!(dnn_check(&m), DnnVerdict::NotNonneg(0, 1));
    }
}
