use alloc::format;
use alloc::vec::Vec;

use super::four_squares;
use crate::arith::{Scalar, SymMatrix};
use crate::edm::build_bn;
use crate::error::{Error, Result};
use crate::factor::{Atom, CpFactorization};

/// Hard-coded integer certificate for `B_2, ..., B_5` and `B_6 + I_6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallnCertificate {
    pub matrix: SymMatrix,
    /// Atoms as displayed, with multipliers 3, 8, 2, 6 kept as weights.
    pub weighted: CpFactorization,
    /// Every weighted atom split into weight-one integer atoms.
    pub integral: CpFactorization,
}

type Block = (u64, &'static [&'static [i64]]);

const B2: &[Block] = &[(1, &[&[1, 1]])];
const B3: &[Block] = &[(1, &[&[1, 1, 1]]), (3, &[&[1, 0, 1], &[0, 1, 0]])];
const B4: &[Block] = &[
    (1, &[&[1, 1, 1, 1], &[1, 0, 3, 0], &[0, 3, 0, 1]]),
    (8, &[&[1, 0, 0, 1]]),
];
const B5: &[Block] = &[
    (
        1,
        &[
            &[1, 1, 1, 1, 1],
            &[2, 0, 0, 4, 0],
            &[0, 4, 0, 0, 2],
            &[0, 0, 4, 0, 0],
        ],
    ),
    (3, &[&[1, 0, 1, 0, 1], &[0, 1, 0, 1, 0], &[2, 0, 0, 0, 2]]),
];
const B6_PLUS_I: &[Block] = &[
    (1, &[&[1, 1, 1, 1, 1, 1]]),
    (
        2,
        &[
            &[1, 0, 0, 4, 0, 0],
            &[0, 0, 4, 0, 0, 1],
            &[0, 2, 0, 0, 2, 0],
        ],
    ),
    (3, &[&[1, 0, 1, 0, 1, 0], &[0, 1, 0, 1, 0, 1]]),
    (
        6,
        &[
            &[1, 0, 0, 0, 2, 0],
            &[0, 2, 0, 0, 0, 1],
            &[2, 0, 0, 0, 0, 2],
        ],
    ),
];

fn column(c: &[i64], scale: u64) -> Vec<Scalar> {
    c.iter()
        .map(|&v| Scalar::from_int(v * scale as i64))
        .collect()
}

pub fn smalln_certificate(n: usize) -> Result<SmallnCertificate> {
    let blocks = match n {
        2 => B2,
        3 => B3,
        4 => B4,
        5 => B5,
        6 => B6_PLUS_I,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "certificates exist for 2 <= n <= 6, got {n}"
            )))
        }
    };
    let mut matrix = build_bn(n)?;
    if n == 6 {
        matrix = matrix.add_diagonal(&Scalar::from_int(1));
    }
    let mut weighted = CpFactorization::new(n);
    let mut integral = CpFactorization::new(n);
    for &(w, cols) in blocks {
        for c in cols {
            weighted.push(Atom::new(Scalar::from_int(w as i64), column(c, 1))?)?;
            for s in four_squares(w) {
                integral.push(Atom::new(Scalar::from_int(1), column(c, s))?)?;
            }
        }
    }
    integral.mark_integral()?;
    Ok(SmallnCertificate {
        matrix,
        weighted,
        integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edm::w_vector;
    use crate::factor::{gram, verify};

    #[test]
    fn all_certificates_verify() {
        for n in 2..=6 {
            let c = smalln_certificate(n).unwrap();
            assert_eq!(gram(&c.weighted), c.matrix);
            let kernel = if n < 6 {
                alloc::vec![w_vector(n)]
            } else {
                Vec::new()
            };
            assert!(
                verify(&c.matrix, &c.integral, &kernel).unwrap().passed(),
                "n={n}"
            );
            assert!(c.integral.is_integral());
        }
    }

    #[test]
    fn b4_eight_block() {
        let c = smalln_certificate(4).unwrap();
        assert_eq!(c.weighted.atoms()[3].weight(), &Scalar::from_int(8));
        // 8 = 2^2 + 2^2
        assert_eq!(c.integral.len(), 5);
        assert_eq!(c.matrix.get(0, 0), &Scalar::from_int(10));
    }

    #[test]
    fn diagonals() {
        assert_eq!(
            smalln_certificate(5).unwrap().matrix.get(2, 2),
            &Scalar::from_int(20)
        );
        assert_eq!(
            smalln_certificate(6).unwrap().matrix.get(2, 2),
            &Scalar::from_int(36)
        );
        assert!(smalln_certificate(7).is_err());
        assert!(smalln_certificate(1).is_err());
    }
}
