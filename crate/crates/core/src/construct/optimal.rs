use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::bipartite_edge_factorize;
use crate::arith::{Scalar, SymMatrix};
use crate::edm::{build_bn, f_min, w_vector};
use crate::error::{Error, Result};
use crate::factor::{gram, Atom, CpFactorization};

/// Rank-one pieces of `B_n` and the bipartite residual left after removing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalPieces {
    pub n: usize,
    /// Atoms `(1, u_ij)` in lexicographic `(i, j)` order.
    pub atoms_v: Vec<Atom>,
    /// Index-reversed copies of `atoms_v`.
    pub atoms_vprime: Vec<Atom>,
    /// Odd `n` with `m >= 2` only.
    pub atom_t: Option<Atom>,
    /// Atoms `(1, z_i)`, odd `n` only.
    pub atoms_z: Vec<Atom>,
    /// Middle diagonal slot of the residual, odd `n` only.
    pub alpha: Option<Scalar>,
    /// `B_n` minus all atoms above; block diagonal plus an off-diagonal block `C`.
    pub bipartite_residual: SymMatrix,
}

impl OptimalPieces {
    pub fn m(&self) -> usize {
        self.n / 2
    }

    /// The `m x m` block `C` in the upper-right corner of the residual.
    pub fn c_block(&self) -> Vec<Vec<Scalar>> {
        let m = self.m();
        let off = self.n - m;
        (0..m)
            .map(|x| {
                (0..m)
                    .map(|y| self.bipartite_residual.get(x, off + y).clone())
                    .collect()
            })
            .collect()
    }

    fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms_v
            .iter()
            .chain(&self.atoms_vprime)
            .chain(&self.atom_t)
            .chain(&self.atoms_z)
    }
}

fn u_atom(n: usize, i: usize, j: usize, target: usize, alpha: Scalar) -> Result<Atom> {
    let s = Scalar::from_int((j - i) as i64);
    Atom::sparse(
        n,
        Scalar::one(),
        &[
            (i - 1, s.clone()),
            (j - 1, s.clone()),
            (target - 1, s * alpha),
        ],
    )
}

fn reversed(a: &Atom) -> Atom {
    let n = a.dim();
    let map: Vec<usize> = (0..n).rev().collect();
    a.embed(n, &map)
}

/// Checks the residual shape: zero inside the diagonal blocks (off the
/// diagonal), nonnegative diagonal and `C`, and zero middle row in the odd case.
fn check_residual(r: &SymMatrix, m: usize) -> Result<()> {
    let n = r.dim();
    let block = |i: usize| {
        if i < m {
            0
        } else if i >= n - m {
            2
        } else {
            1
        }
    };
    for i in 0..n {
        for j in i..n {
            let v = r.get(i, j);
            let allowed = i == j || (block(i) == 0 && block(j) == 2);
            if (!allowed && !v.is_zero()) || v.is_negative() {
                return Err(Error::InternalContradiction(format!(
                    "residual entry ({}, {}) = {v} breaks the bipartite block form",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn residual(n: usize, atoms: impl IntoIterator<Item = Atom>) -> Result<SymMatrix> {
    let mut f = CpFactorization::new(n);
    f.extend(atoms)?;
    build_bn(n)?.checked_sub(&gram(&f))
}

pub fn optimal_even(m: usize) -> Result<OptimalPieces> {
    if m < 1 {
        return Err(Error::InvalidArgument("even pipeline needs m >= 1".into()));
    }
    let n = 2 * m;
    let mut atoms_v = Vec::new();
    for i in 1..m {
        for j in i + 1..=m {
            let k = (m + j) / 2 + 1 - i;
            if k < 1 || k > m {
                return Err(Error::InternalContradiction(format!(
                    "k = {k} outside 1..={m} for ({i}, {j})"
                )));
            }
            let alpha = Scalar::from_ratio(2 * (2 * m - i - j + 1) as i64, (2 * k - 1) as i64);
            atoms_v.push(u_atom(n, i, j, m + k, alpha)?);
        }
    }
    let atoms_vprime: Vec<Atom> = atoms_v.iter().map(reversed).collect();
    let r = residual(n, atoms_v.iter().chain(&atoms_vprime).cloned())?;
    check_residual(&r, m)?;
    Ok(OptimalPieces {
        n,
        atoms_v,
        atoms_vprime,
        atom_t: None,
        atoms_z: Vec::new(),
        alpha: None,
        bipartite_residual: r,
    })
}

/// Odd pipeline for `n = 2m + 1`. The `t` atom needs `m >= 2`; for `m = 1`
/// the `z` atom alone leaves a valid residual.
pub fn optimal_odd(m: usize) -> Result<OptimalPieces> {
    if m < 1 {
        return Err(Error::InvalidArgument("odd pipeline needs m >= 1".into()));
    }
    let n = 2 * m + 1;
    let mut atoms_v = Vec::new();
    for i in 1..=m.saturating_sub(2) {
        for j in i + 1..=m {
            let k = (m + j).div_ceil(2) - i;
            if k < 1 || k > m {
                return Err(Error::InternalContradiction(format!(
                    "k = {k} outside 1..={m} for ({i}, {j})"
                )));
            }
            let alpha = Scalar::from_ratio((2 * m + 2 - i - j) as i64, k as i64);
            atoms_v.push(u_atom(n, i, j, m + 1 + k, alpha)?);
        }
    }
    let atoms_vprime: Vec<Atom> = atoms_v.iter().map(reversed).collect();
    let atom_t = if m >= 2 {
        let one = Scalar::one();
        Some(Atom::sparse(
            n,
            one.clone(),
            &[m - 2, m - 1, m + 1, m + 2].map(|p| (p, one.clone())),
        )?)
    } else {
        None
    };
    let atoms_z = (1..=m)
        .map(|i| {
            let s = Scalar::from_int((m + 1 - i) as i64);
            Atom::sparse(
                n,
                Scalar::one(),
                &[(i - 1, s.clone()), (m, s.clone()), (2 * m + 1 - i, s)],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let beta = Scalar::from_ratio((m * (m + 1) * (2 * m + 1) / 6) as i64, 1);
    let alpha = Scalar::from(f_min(n)) - beta;
    if !alpha.is_positive() {
        return Err(Error::InternalContradiction(format!(
            "middle slot alpha = {alpha} is not positive"
        )));
    }
    let r = residual(
        n,
        atoms_v
            .iter()
            .chain(&atoms_vprime)
            .chain(&atom_t)
            .chain(&atoms_z)
            .cloned(),
    )?;
    check_residual(&r, m)?;
    if *r.get(m, m) != alpha {
        return Err(Error::InternalContradiction(
            "middle residual differs from f(n) - beta".into(),
        ));
    }
    Ok(OptimalPieces {
        n,
        atoms_v,
        atoms_vprime,
        atom_t,
        atoms_z,
        alpha: Some(alpha),
        bipartite_residual: r,
    })
}

/// Exact completely positive factorization of `B_n`, every atom orthogonal to `w(n)`.
pub fn optimal_factorize(n: usize) -> Result<CpFactorization> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("B_n needs n >= 2, got {n}")));
    }
    let m = n / 2;
    let pieces = if n.is_multiple_of(2) {
        optimal_even(m)?
    } else {
        optimal_odd(m)?
    };
    let mut f = CpFactorization::new(n);
    f.extend(pieces.atoms().cloned())?;
    let w = w_vector(n);
    let r = &pieces.bipartite_residual;
    if n.is_multiple_of(2) {
        f.extend(bipartite_edge_factorize(r, m, &w, &Scalar::zero())?.into_atoms())?;
    } else {
        let idx: Vec<usize> = (0..n).filter(|&i| i != m).collect();
        let sub = r.principal(&idx);
        let wsub: Vec<Scalar> = idx.iter().map(|&i| w[i].clone()).collect();
        let edges = bipartite_edge_factorize(&sub, m, &wsub, &Scalar::zero())?;
        f.extend(edges.embed(n, &idx).into_atoms())?;
        f.push(Atom::diagonal(
            n,
            m,
            pieces.alpha.clone().expect("odd pieces carry alpha"),
        )?)?;
    }
    Ok(f)
}
