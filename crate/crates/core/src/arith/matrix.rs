use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::Scalar;
use crate::error::{Error, Result};

/// Dense symmetric matrix over [`Scalar`], stored row-major.
///
/// Every mutator writes both `(i, j)` and `(j, i)`, so symmetry holds by
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<Scalar>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![Scalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| Scalar::from_int((i == j) as i64))
    }

    /// Builds a matrix from the entries on and above the diagonal.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from explicit rows, rejecting anything not exactly symmetric.
    pub fn try_from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }
        for i in 0..dim {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "entries ({}, {}) and ({}, {}) differ",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(SymMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::try_from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[j * self.dim + i] = v.clone();
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks(self.dim.max(1))
    }

    /// Common radicand of all entries.
    pub fn radicand(&self) -> Result<u64> {
        super::common_radicand(&self.data)
    }

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(Scalar::is_integer)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim, "vector length");
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `v^T A v`.
    pub fn quad_form(&self, v: &[Scalar]) -> Scalar {
        dot(v, &self.mul_vec(v))
    }

    /// Adds `weight * c c^T`, touching only the nonzero pattern of `c`.
    pub fn add_rank_one(&mut self, weight: &Scalar, c: &[Scalar]) {
        let nz: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
        for (a, &i) in nz.iter().enumerate() {
            let wi = weight * &c[i];
            for &j in &nz[a..] {
                let v = self.get(i, j) + &wi * &c[j];
                self.set(i, j, v);
            }
        }
    }

    pub fn add_diagonal(&self, shift: &Scalar) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            let v = m.get(i, i) + shift;
            m.set(i, i, v);
        }
        m
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(SymMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// `P A P^T` for the permutation sending index `i` to `perm[i]`:
    /// the result has `(perm[i], perm[j])` entry equal to `A[i][j]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                out.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        out
    }

    /// Principal submatrix on `idx`, in the given order.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]).clone())
    }

    /// Congruence `S A S` by the diagonal sign matrix with `-1` on indices `>= split`.
    pub fn signed_split(&self, split: usize) -> Self {
        Self::from_fn(self.dim, |i, j| {
            if (i < split) != (j < split) {
                -self.get(i, j).clone()
            } else {
                self.get(i, j).clone()
            }
        })
    }

    /// Rank via exact row reduction.
    pub fn rank(&self) -> usize {
        let (_, pivots) = row_reduce(self);
        pivots.len()
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<_> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn unit_vector(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[i] = Scalar::from_int(1);
    v
}

/// Exact entrywise comparison; dimensions must agree.
pub fn mat_equal(a: &SymMatrix, b: &SymMatrix) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a == b)
}

/// Reduced row echelon form of a square matrix, and its pivot columns.
fn row_reduce(a: &SymMatrix) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let n = a.dim();
    let mut m: Vec<Vec<Scalar>> = a.rows().map(|r| r.to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::from_int(1) / &m[r][c];
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for k in c..n {
                    let sub = &factor * &m[r][k];
                    m[i][k] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == n {
            break;
        }
    }
    (m, pivots)
}

/// Basis of the null space, one vector per free column of the echelon form.
pub fn kernel_basis(a: &SymMatrix) -> Vec<Vec<Scalar>> {
    let n = a.dim();
    let (m, pivots) = row_reduce(a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::from_int(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}
