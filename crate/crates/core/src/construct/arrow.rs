use alloc::format;

use num_traits::{One, Zero};

use crate::arith::{Scalar, SymMatrix};
use crate::error::{Error, Result};
use crate::factor::{Atom, CpFactorization};

fn sq(k: usize) -> Scalar {
    Scalar::from_int((k * k) as i64)
}

/// `R_n`: `(g(n) - g(n-1)) I_{n-1}` with last column `((n-1)^2, ..., 1)` and corner `g(n)`.
pub fn build_rn(n: usize, g: impl Fn(usize) -> Scalar) -> Result<SymMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("R_n needs n >= 2, got {n}")));
    }
    let gn = g(n);
    let d = &gn - &g(n - 1);
    Ok(SymMatrix::from_fn(n, |i, j| match (i == j, j == n - 1) {
        (true, true) => gn.clone(),
        (true, false) => d.clone(),
        (false, true) => sq(n - 1 - i),
        (false, false) => Scalar::zero(),
    }))
}

/// `Q_n`: hubs `1` and `n` with corners `g(n)`, middle diagonal `g(n) - g(n-2)`,
/// arms `(i-1)^2` and `(n-i)^2`, and `(n-1)^2` joining the hubs.
pub fn build_qn(n: usize, g: impl Fn(usize) -> Scalar) -> Result<SymMatrix> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("Q_n needs n >= 3, got {n}")));
    }
    let gn = g(n);
    let delta = &gn - &g(n - 2);
    Ok(SymMatrix::from_fn(n, |i, j| {
        let hub_i = i == 0 || i == n - 1;
        let hub_j = j == 0 || j == n - 1;
        match (i == j, hub_i, hub_j) {
            (true, true, _) => gn.clone(),
            (true, false, _) => delta.clone(),
            (false, false, false) => Scalar::zero(),
            _ => sq(j - i),
        }
    }))
}

fn require_zero_outside(
    a: &SymMatrix,
    allowed: impl Fn(usize, usize) -> bool,
    shape: &str,
) -> Result<()> {
    let n = a.dim();
    for i in 0..n {
        for j in i + 1..n {
            if !allowed(i, j) && !a.get(i, j).is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "not in {shape} form: entry ({}, {}) is nonzero",
                    i + 1,
                    j + 1
                )));
            }
            if a.get(i, j).is_negative() {
                return Err(Error::InvalidArgument(format!(
                    "negative entry at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Factorization of an arrow matrix with the hub in the last position.
pub fn arrow_factorize(r: &SymMatrix) -> Result<CpFactorization> {
    let n = r.dim();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "arrow matrix needs dimension >= 2".into(),
        ));
    }
    let hub = n - 1;
    require_zero_outside(r, |_, j| j == hub, "arrow")?;
    let mut f = CpFactorization::new(n);
    let mut rest = r.get(hub, hub).clone();
    for i in 0..hub {
        let d = r.get(i, i);
        if !d.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "arrow diagonal entry {} is not positive",
                i + 1
            )));
        }
        let v = r.get(i, hub);
        let ratio = v / d;
        rest -= &ratio * v;
        f.push(Atom::sparse(
            n,
            d.clone(),
            &[(i, Scalar::one()), (hub, ratio)],
        )?)?;
    }
    if rest.is_negative() {
        return Err(Error::NotDnn {
            context: "arrow Schur remainder".into(),
            value: rest,
        });
    }
    if !rest.is_zero() {
        f.push(Atom::diagonal(n, hub, rest)?)?;
    }
    Ok(f)
}

/// Factorization of a double-arrow matrix with hubs in the first and last positions.
///
/// Each middle index `i` takes the atom `(d_i, (u_i/d_i) e_1 + e_i + (v_i/d_i) e_n)`;
/// the remaining `2 x 2` block on the hubs is split by pivoting on hub 1.
pub fn double_arrow_factorize(q: &SymMatrix) -> Result<CpFactorization> {
    let n = q.dim();
    if n < 3 {
        return Err(Error::InvalidArgument(
            "double arrow matrix needs dimension >= 3".into(),
        ));
    }
    let last = n - 1;
    require_zero_outside(q, |i, j| i == 0 || j == last, "double arrow")?;
    let mut f = CpFactorization::new(n);
    let mut p = q.get(0, 0).clone();
    let mut r = q.get(0, last).clone();
    let mut s = q.get(last, last).clone();
    for i in 1..last {
        let d = q.get(i, i);
        if !d.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "middle diagonal entry {} is not positive",
                i + 1
            )));
        }
        let (u, v) = (q.get(0, i), q.get(i, last));
        let (a, b) = (u / d, v / d);
        p -= &a * u;
        r -= &a * v;
        s -= &b * v;
        f.push(Atom::sparse(
            n,
            d.clone(),
            &[(0, a), (i, Scalar::one()), (last, b)],
        )?)?;
    }
    if r.is_negative() {
        return Err(Error::NotCpCertified {
            context: "off-diagonal of the hub remainder".into(),
            value: r,
        });
    }
    if p.is_negative() {
        return Err(Error::NotCpCertified {
            context: "first hub remainder".into(),
            value: p,
        });
    }
    if s.is_negative() {
        return Err(Error::NotCpCertified {
            context: "last hub remainder".into(),
            value: s,
        });
    }
    let det = &p * &s - &r * &r;
    if det.is_negative() {
        return Err(Error::NotCpCertified {
            context: "determinant of the hub remainder".into(),
            value: det,
        });
    }
    let tail = if p.is_zero() {
        s
    } else {
        let ratio = &r / &p;
        f.push(Atom::sparse(
            n,
            p.clone(),
            &[(0, Scalar::one()), (last, ratio)],
        )?)?;
        det / p
    };
    if !tail.is_zero() {
        f.push(Atom::diagonal(n, last, tail)?)?;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{dot, ldl_certify, rational};
    use crate::edm::f_min;
    use crate::factor::{dnn_check, gram};
    use alloc::vec::Vec;

    /// `u^T u = v^T v` and `v^T u` for the arms of `Q_n`, as closed forms.
    fn qn_arm_products(n: usize) -> (Scalar, Scalar) {
        let n = n as i64;
        let uu = Scalar::from_ratio(
            (n - 1) * (n - 2) * (2 * n - 3) * (3 * n * n - 9 * n + 5),
            30,
        );
        let vu = Scalar::from_ratio(n * (n - 1) * (n - 2) * (n * n - 2 * n + 2), 30);
        (uu, vu)
    }

    fn scaled_f(q: Scalar) -> impl Fn(usize) -> Scalar {
        move |k| &q * &Scalar::from(f_min(k))
    }

    #[test]
    fn small_arrow() {
        let r = SymMatrix::from_i64_rows(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 3]]).unwrap();
        let f = arrow_factorize(&r).unwrap();
        let got: Vec<_> = f
            .atoms()
            .iter()
            .map(|a| (a.weight().to_i64().unwrap(), a.support().to_vec()))
            .collect();
        let e = |v: [i64; 3]| v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>();
        assert_eq!(
            got,
            vec![(1, e([1, 0, 1])), (1, e([0, 1, 1])), (1, e([0, 0, 1]))]
        );
    }

    #[test]
    fn rn_at_two_root_three_fifths() {
        let q = &Scalar::from_int(2) * &Scalar::sqrt_rational(&rational(3, 5)).unwrap();
        for n in 3..=30 {
            let r = build_rn(n, scaled_f(q.clone())).unwrap();
            let f = arrow_factorize(&r).unwrap_or_else(|e| panic!("n={n}: {e}"));
            assert_eq!(gram(&f), r);
        }
    }

    #[test]
    fn rn_at_nine_tenths_fails() {
        let q = Scalar::from_ratio(9, 10);
        let first = (3..=10)
            .find(|&n| arrow_factorize(&build_rn(n, scaled_f(q.clone())).unwrap()).is_err());
        assert!(first.is_some());
    }

    #[test]
    fn arm_products_match_sums() {
        for n in 4..=50usize {
            let u: Vec<Scalar> = (1..=n - 2).map(sq).collect();
            let v: Vec<Scalar> = u.iter().rev().cloned().collect();
            let (uu, vu) = qn_arm_products(n);
            assert_eq!(dot(&u, &u), uu, "n={n}");
            assert_eq!(dot(&v, &v), uu);
            assert_eq!(dot(&v, &u), vu);
        }
    }

    #[test]
    fn qn_at_root_seven_fifths() {
        let q = Scalar::sqrt_rational(&rational(7, 5)).unwrap();
        for n in 4..=30 {
            let m = build_qn(n, scaled_f(q.clone())).unwrap();
            assert!(dnn_check(&m).is_dnn(), "n={n}");
            assert!(ldl_certify(&m).is_psd());
            let f = double_arrow_factorize(&m).unwrap_or_else(|e| panic!("n={n}: {e}"));
            assert_eq!(gram(&f), m);
        }
    }

    #[test]
    fn qn_layout() {
        let m = build_qn(5, |k| Scalar::from_int(k as i64 * 10)).unwrap();
        assert_eq!(m.get(0, 0), &Scalar::from_int(50));
        assert_eq!(m.get(2, 2), &Scalar::from_int(20));
        assert_eq!(m.get(0, 4), &Scalar::from_int(16));
        assert_eq!(m.get(0, 3), &Scalar::from_int(9));
        assert_eq!(m.get(1, 4), &Scalar::from_int(9));
        assert!(m.get(1, 2).is_zero());
    }
}
