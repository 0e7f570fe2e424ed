use alloc::format;

use num_traits::Zero;

use crate::arith::{Scalar, SymMatrix};
use crate::error::{Error, Result};
use crate::factor::{Atom, CpFactorization};

/// Edge-plus-diagonal factorization of a nonnegative diagonally dominant matrix.
///
/// One atom `(a_ij, e_i + e_j)` per positive off-diagonal pair and one atom
/// `(a_ii - sum_j a_ij, e_i)` per row with a strictly positive surplus.
pub fn dd_factorize(a: &SymMatrix) -> Result<CpFactorization> {
    let n = a.dim();
    let mut f = CpFactorization::new(n);
    let mut surplus = (0..n)
        .map(|i| a.get(i, i).clone())
        .collect::<alloc::vec::Vec<_>>();
    for i in 0..n {
        for j in i + 1..n {
            let v = a.get(i, j);
            if v.is_negative() {
                return Err(Error::InvalidArgument(format!(
                    "negative entry at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if v.is_zero() {
                continue;
            }
            surplus[i] -= v;
            surplus[j] -= v;
            f.push(Atom::sparse(
                n,
                v.clone(),
                &[(i, Scalar::from_int(1)), (j, Scalar::from_int(1))],
            )?)?;
        }
    }
    for (i, s) in surplus.into_iter().enumerate() {
        if s.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "row {} is not diagonally dominant (deficit {})",
                i + 1,
                -s
            )));
        }
        if !s.is_zero() {
            f.push(Atom::diagonal(n, i, s)?)?;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edm::{build_an, g_diag};
    use crate::factor::gram;

    #[test]
    fn two_by_two() {
        let a = SymMatrix::from_i64_rows(&[&[2, 1], &[1, 2]]).unwrap();
        let f = dd_factorize(&a).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(
            f.atoms()[0].support(),
            &[Scalar::from_int(1), Scalar::from_int(1)]
        );
        assert_eq!(gram(&f), a);
    }

    #[test]
    fn a4_plus_gd() {
        let a = build_an(4).unwrap().add_diagonal(&Scalar::from(g_diag(4)));
        let f = dd_factorize(&a).unwrap();
        // Rows 1 and 4 have zero surplus, so only two diagonal atoms are stored.
        assert_eq!(f.len(), 6 + 2);
        assert_eq!(gram(&f), a);
    }

    #[test]
    fn zero_diagonal_fails() {
        let err = dd_factorize(&build_an(4).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(ref m) if m.contains("row 1")));
    }
}
