use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{Scalar, SymMatrix};
use crate::error::{Error, Result};
use crate::factor::{gram, special_hypothesis_check, Atom, CpFactorization};

/// Completely positive factorization of `[D1 C; C^T D2]` from a sign-split eigenvector.
///
/// With `a w = lambda w`, `w = (w1, -w2)`, `w1, w2 > 0`, each positive `C_xy`
/// gives the atom `(C_xy w1_x w2_y, e_x / w1_x + e_{split+y} / w2_y)`, and
/// `lambda > 0` adds `(lambda, e_i)` for every `i`. The eigen-equations make the
/// diagonals match; the result is still checked entrywise before returning.
pub fn bipartite_edge_factorize(
    a: &SymMatrix,
    split: usize,
    w: &[Scalar],
    lambda: &Scalar,
) -> Result<CpFactorization> {
    if !special_hypothesis_check(a, split, w, lambda) {
        return Err(Error::InvalidArgument(
            "matrix is not a bipartite block with a sign-split eigenvector for a nonnegative eigenvalue".into(),
        ));
    }
    let n = a.dim();
    let w2: Vec<Scalar> = w[split..].iter().map(|v| -v.clone()).collect();
    let mut f = CpFactorization::new(n);
    for x in 0..split {
        for y in 0..n - split {
            let c = a.get(x, split + y);
            if c.is_zero() {
                continue;
            }
            let weight = c * &w[x] * &w2[y];
            let one = Scalar::from_int(1);
            f.push(Atom::sparse(
                n,
                weight,
                &[(x, &one / &w[x]), (split + y, &one / &w2[y])],
            )?)?;
        }
    }
    if lambda.is_positive() {
        for i in 0..n {
            f.push(Atom::diagonal(n, i, lambda.clone())?)?;
        }
    }
    if gram(&f) != *a {
        return Err(Error::InternalContradiction(
            "edge atoms do not reproduce the bipartite block".into(),
        ));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn single_edge() {
        let a = SymMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap();
        let f = bipartite_edge_factorize(&a, 1, &ints(&[1, -1]), &Scalar::zero()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.atoms()[0].weight(), &Scalar::from_int(1));
        assert_eq!(f.atoms()[0].support(), ints(&[1, 1]).as_slice());
    }

    #[test]
    fn lambda_surplus() {
        let a = SymMatrix::from_i64_rows(&[&[2, 1], &[1, 2]]).unwrap();
        let f = bipartite_edge_factorize(&a, 1, &ints(&[1, -1]), &Scalar::from_int(1)).unwrap();
        let supports: Vec<_> = f
            .atoms()
            .iter()
            .map(|a| (a.weight().clone(), a.support().to_vec()))
            .collect();
        assert_eq!(
            supports,
            vec![
                (Scalar::from_int(1), ints(&[1, 1])),
                (Scalar::from_int(1), ints(&[1, 0])),
                (Scalar::from_int(1), ints(&[0, 1])),
            ]
        );
    }

    #[test]
    fn rejects_bad_sign_pattern() {
        let a = SymMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert!(bipartite_edge_factorize(&a, 1, &ints(&[1, 1]), &Scalar::zero()).is_err());
    }

    #[test]
    fn unequal_eigenvector_weights() {
        // w = (1, 2, -1, -3): D1 w1 = C w2, D2 w2 = C^T w1
        let c = [[2i64, 1], [1, 2]];
        let w1 = [1i64, 2];
        let w2 = [1i64, 3];
        let d1: Vec<Scalar> = (0..2)
            .map(|x| Scalar::from_ratio(c[x][0] * w2[0] + c[x][1] * w2[1], w1[x]))
            .collect();
        let d2: Vec<Scalar> = (0..2)
            .map(|y| Scalar::from_ratio(c[0][y] * w1[0] + c[1][y] * w1[1], w2[y]))
            .collect();
        let a = SymMatrix::from_fn(4, |i, j| match (i < 2, j < 2) {
            (true, true) => {
                if i == j {
                    d1[i].clone()
                } else {
                    Scalar::zero()
                }
            }
            (false, false) => {
                if i == j {
                    d2[i - 2].clone()
                } else {
                    Scalar::zero()
                }
            }
            _ => Scalar::from_int(c[i.min(j)][i.max(j) - 2]),
        });
        let f = bipartite_edge_factorize(&a, 2, &ints(&[1, 2, -1, -3]), &Scalar::zero()).unwrap();
        assert_eq!(gram(&f), a);
        assert_eq!(f.len(), 4);
    }
}
