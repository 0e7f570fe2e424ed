use alloc::format;
use alloc::vec::Vec;

use crate::arith::{Scalar, SymMatrix};
use crate::error::{Error, Result};

/// The `n`-independent middle factor of `A_n = L R L^T`.
pub const LRL_R: [[i64; 3]; 3] = [[0, 1, 1], [1, -6, 1], [1, 1, 0]];

/// `A_n = L R L^T` with `L` the last three columns of `(I - J)^{-3}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrlPair {
    /// `n` rows of three nonnegative integers.
    pub l: Vec<[i128; 3]>,
    pub r: [[i64; 3]; 3],
}

fn binom2(k: i128) -> i128 {
    if k < 2 {
        0
    } else {
        k * (k - 1) / 2
    }
}

/// Entry `(i, j)` of `(I - J)^{-3}` (0-based): `C(j - i + 2, 2)` above the diagonal.
pub fn inverse_cube_entry(i: usize, j: usize) -> i128 {
    if j < i {
        0
    } else {
        binom2((j - i) as i128 + 2)
    }
}

pub fn lrl_factorize(n: usize) -> Result<LrlPair> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "L R L^T needs n >= 3, got {n}"
        )));
    }
    let l = (0..n)
        .map(|i| [n - 3, n - 2, n - 1].map(|j| inverse_cube_entry(i, j)))
        .collect();
    Ok(LrlPair { l, r: LRL_R })
}

impl LrlPair {
    pub fn dim(&self) -> usize {
        self.l.len()
    }

    /// `L R L^T` computed in exact integer arithmetic.
    pub fn reconstruct(&self) -> SymMatrix {
        let lr: Vec<[i128; 3]> = self
            .l
            .iter()
            .map(|row| {
                let mut out = [0i128; 3];
                for (c, o) in out.iter_mut().enumerate() {
                    *o = (0..3).map(|k| row[k] * self.r[k][c] as i128).sum();
                }
                out
            })
            .collect();
        SymMatrix::from_fn(self.dim(), |i, j| {
            let v: i128 = (0..3).map(|k| lr[i][k] * self.l[j][k]).sum();
            Scalar::from_int(v as i64)
        })
    }

    /// Checks `(I - J)^3 L` equals the last three columns of the identity.
    pub fn check_inverse(&self) -> bool {
        let n = self.dim();
        // (I - J)^3 is upper triangular with bands 1, -3, 3, -1.
        let band = [1i128, -3, 3, -1];
        (0..n).all(|i| {
            (0..3).all(|c| {
                let v: i128 = (0..4)
                    .filter(|d| i + d < n)
                    .map(|d| band[d] * self.l[i + d][c])
                    .sum();
                v == (i == n - 3 + c) as i128
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edm::build_an;

    #[test]
    fn n4_layout() {
        let p = lrl_factorize(4).unwrap();
        assert_eq!(p.l, vec![[3, 6, 10], [1, 3, 6], [0, 1, 3], [0, 0, 1]]);
        assert_eq!(p.reconstruct(), build_an(4).unwrap());
        // spot check (1,4): row1 R row4^T = 9
        assert_eq!(p.reconstruct().get(0, 3), &Scalar::from_int(9));
        assert!(p.check_inverse());
    }

    #[test]
    fn r_is_fixed_and_diagonal_zero() {
        for n in 3..=12 {
            assert_eq!(lrl_factorize(n).unwrap().r, LRL_R);
        }
        let p = lrl_factorize(10).unwrap();
        assert_eq!(p.reconstruct().get(0, 0), &Scalar::from_int(0));
    }

    #[test]
    fn degenerate_three() {
        let p = lrl_factorize(3).unwrap();
        assert_eq!(p.reconstruct(), build_an(3).unwrap());
        assert!(lrl_factorize(2).is_err());
    }
}
