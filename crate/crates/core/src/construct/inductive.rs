use alloc::format;
use alloc::vec::Vec;

use num_traits::One;

use super::{build_qn, double_arrow_factorize, optimal_factorize};
use crate::arith::Scalar;
use crate::edm::f_min;
use crate::error::{Error, Result};
use crate::factor::{Atom, CpFactorization};

/// Factorization of `A_n + q f(n) I` by the step-two recursion through `Q_n`.
///
/// Bases `n <= 5` use the optimal factorization plus `(q - 1) f(n)` on every
/// diagonal. Each step embeds the `n - 2` factorization in the middle indices
/// and appends the double-arrow factorization of `Q_n`.
pub fn inductive_factorize(n: usize, q: &Scalar) -> Result<CpFactorization> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if *q < Scalar::one() {
        return Err(Error::InvalidArgument(format!(
            "scale q = {q} must be at least 1"
        )));
    }
    let g = |k: usize| q * &Scalar::from(f_min(k));
    if n <= 5 {
        let mut f = optimal_factorize(n)?;
        let surplus = &g(n) - &Scalar::from(f_min(n));
        if surplus.is_positive() {
            for i in 0..n {
                f.push(Atom::diagonal(n, i, surplus.clone())?)?;
            }
        }
        return Ok(f);
    }
    let inner = inductive_factorize(n - 2, q)?;
    let map: Vec<usize> = (1..n - 1).collect();
    let mut f = inner.embed(n, &map);
    f.extend(double_arrow_factorize(&build_qn(n, g)?)?.into_atoms())?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::edm::build_an;
    use crate::factor::verify;

    fn target(n: usize, q: &Scalar) -> crate::SymMatrix {
        build_an(n)
            .unwrap()
            .add_diagonal(&(q * &Scalar::from(f_min(n))))
    }

    #[test]
    fn n2_root_seven_fifths() {
        let q = Scalar::sqrt_rational(&rational(7, 5)).unwrap();
        let f = inductive_factorize(2, &q).unwrap();
        assert_eq!(f.len(), 3);
        assert!(verify(&target(2, &q), &f, &[]).unwrap().passed());
    }

    #[test]
    fn n10_root_seven_fifths() {
        let q = Scalar::sqrt_rational(&rational(7, 5)).unwrap();
        let f = inductive_factorize(10, &q).unwrap();
        assert_eq!(f.radicand().unwrap(), 35);
        assert!(verify(&target(10, &q), &f, &[]).unwrap().passed());
    }

    #[test]
    fn q_just_above_one() {
        let q = Scalar::from_ratio(21, 20);
        let f = inductive_factorize(10, &q).unwrap();
        assert!(verify(&target(10, &q), &f, &[]).unwrap().passed());
        assert!(inductive_factorize(32, &q).is_ok());
        let err = inductive_factorize(33, &q).unwrap_err();
        assert!(matches!(err, Error::NotCpCertified { .. }), "{err}");
    }

    #[test]
    fn q_below_one_rejected() {
        assert!(inductive_factorize(6, &Scalar::from_ratio(1, 2)).is_err());
    }
}
