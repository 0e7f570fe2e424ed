use alloc::format;
use alloc::vec::Vec;

use super::four_squares;
use crate::arith::{Scalar, SymMatrix};
use crate::edm::{divisor_count, jordan_totient2};
use crate::error::{Error, Result};
use crate::factor::{Atom, CpFactorization};

/// How a multiplier `a` of `E_i` is turned into weight-one atoms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Compression {
    /// At most four scaled copies, from a four-square decomposition of `a`.
    #[default]
    FourSquares,
    /// `a` unscaled copies.
    Repetition,
}

fn check_range(n: usize, i: usize) -> Result<()> {
    if i < 1 || i >= n {
        return Err(Error::InvalidArgument(format!(
            "E_i needs 1 <= i <= n - 1, got i = {i}, n = {n}"
        )));
    }
    Ok(())
}

/// `E_i`: entry `(a, b)` is 1 iff `a = b (mod i)`.
pub fn build_ei(n: usize, i: usize) -> Result<SymMatrix> {
    check_range(n, i)?;
    Ok(SymMatrix::from_fn(n, |a, b| {
        Scalar::from_int(((b - a) % i == 0) as i64)
    }))
}

fn class_support(n: usize, i: usize, class: usize, scale: u64) -> Vec<Scalar> {
    (0..n)
        .map(|a| Scalar::from_int(if a % i == class { scale as i64 } else { 0 }))
        .collect()
}

/// One 0/1 atom per residue class mod `i`.
pub fn ei_factor(n: usize, i: usize) -> Result<CpFactorization> {
    check_range(n, i)?;
    scaled_ei_atoms(n, i, 1, Compression::FourSquares)
}

fn scaled_ei_atoms(n: usize, i: usize, a: u64, mode: Compression) -> Result<CpFactorization> {
    let scales = match mode {
        Compression::FourSquares => four_squares(a),
        Compression::Repetition => alloc::vec![1; a as usize],
    };
    let mut f = CpFactorization::new(n);
    for &s in &scales {
        for class in 0..i {
            f.push(Atom::new(
                Scalar::from_int(1),
                class_support(n, i, class, s),
            )?)?;
        }
    }
    f.mark_integral()?;
    Ok(f)
}

/// Integer factorization of `A_n + g_J(n) I = sum_i J_2(i) E_i`.
pub fn jordan_sum_factorize(n: usize, mode: Compression) -> Result<CpFactorization> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n must be at least 2, got {n}"
        )));
    }
    let mut f = CpFactorization::new(n);
    for i in 1..n {
        f.extend(scaled_ei_atoms(n, i, jordan_totient2(i as u64), mode)?.into_atoms())?;
    }
    f.mark_integral()?;
    Ok(f)
}

/// `E_1 + ... + E_{n-1}` with the concatenated `E_i` factors.
pub fn tau_sum_example(n: usize) -> Result<(SymMatrix, CpFactorization)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n must be at least 2, got {n}"
        )));
    }
    let m = SymMatrix::from_fn(n, |a, b| {
        if a == b {
            Scalar::from_int(n as i64 - 1)
        } else {
            Scalar::from_int(divisor_count((b - a) as u64) as i64)
        }
    });
    let mut f = CpFactorization::new(n);
    for i in 1..n {
        f.extend(ei_factor(n, i)?.into_atoms())?;
    }
    f.mark_integral()?;
    Ok((m, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edm::{build_an, g_jordan};
    use crate::factor::gram;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn patterns() {
        assert_eq!(
            build_ei(3, 1).unwrap(),
            SymMatrix::from_fn(3, |_, _| Scalar::from_int(1))
        );
        let e = build_ei(4, 3).unwrap();
        let mut want = SymMatrix::identity(4);
        want.set(0, 3, Scalar::from_int(1));
        assert_eq!(e, want);
        let p = build_ei(5, 2).unwrap();
        assert_eq!(p.get(0, 4), &Scalar::from_int(1));
        assert_eq!(p.get(1, 4), &Scalar::from_int(0));
        assert!(build_ei(4, 4).is_err());
        assert!(build_ei(4, 0).is_err());
    }

    #[test]
    fn parity_factor() {
        let f = ei_factor(5, 2).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.atoms()[0].support(), ints(&[1, 0, 1, 0, 1]).as_slice());
        assert_eq!(f.atoms()[1].support(), ints(&[0, 1, 0, 1, 0]).as_slice());
        assert_eq!(gram(&ei_factor(7, 3).unwrap()), build_ei(7, 3).unwrap());
        assert_eq!(ei_factor(3, 1).unwrap().len(), 1);
    }

    #[test]
    fn jordan_sum_three_and_six() {
        let f = jordan_sum_factorize(3, Compression::FourSquares).unwrap();
        assert_eq!(
            gram(&f),
            SymMatrix::from_i64_rows(&[&[4, 1, 4], &[1, 4, 1], &[4, 1, 4]]).unwrap()
        );
        let g6 = gram(&jordan_sum_factorize(6, Compression::FourSquares).unwrap());
        assert_eq!(g6.get(2, 2), &Scalar::from_int(48));
    }

    #[test]
    fn repetition_agrees() {
        for n in 2..=9 {
            let want = build_an(n)
                .unwrap()
                .add_diagonal(&Scalar::from(g_jordan(n)));
            let rep = jordan_sum_factorize(n, Compression::Repetition).unwrap();
            let sq = jordan_sum_factorize(n, Compression::FourSquares).unwrap();
            assert_eq!(gram(&rep), want);
            assert_eq!(gram(&sq), want);
            assert!(sq.len() <= rep.len());
        }
    }

    #[test]
    fn tau_sum() {
        let (m, f) = tau_sum_example(3).unwrap();
        assert_eq!(
            m,
            SymMatrix::from_i64_rows(&[&[2, 1, 2], &[1, 2, 1], &[2, 1, 2]]).unwrap()
        );
        assert_eq!(gram(&f), m);
        let (m, f) = tau_sum_example(13).unwrap();
        assert_eq!(gram(&f), m);
        assert_eq!(m.get(0, 12), &Scalar::from_int(6));
        assert_eq!(m.get(5, 5), &Scalar::from_int(12));
    }
}
