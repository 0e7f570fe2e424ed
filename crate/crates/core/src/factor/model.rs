use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{common_radicand, Scalar, SymMatrix};
use crate::error::{Error, Result};

/// Weighted rank-one term `weight * support * support^T`.
///
/// The completely positive column it stands for is `sqrt(weight) * support`;
/// keeping the weight separate keeps the Gram matrix inside the scalar field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    weight: Scalar,
    support: Vec<Scalar>,
}

impl Atom {
    /// Rejects zero or negative weights, negative entries and empty supports.
    pub fn new(weight: Scalar, support: Vec<Scalar>) -> Result<Self> {
        if !weight.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "atom weight must be positive, got {weight}"
            )));
        }
        if let Some((i, v)) = support.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(Error::InvalidArgument(format!(
                "negative support entry {v} at {}",
                i + 1
            )));
        }
        if support.iter().all(Zero::is_zero) {
            return Err(Error::InvalidArgument("atom support is zero".into()));
        }
        common_radicand(core::iter::once(&weight).chain(&support))?;
        Ok(Atom { weight, support })
    }

    /// Builds an atom without checks, for verifying externally supplied data.
    pub fn new_unchecked(weight: Scalar, support: Vec<Scalar>) -> Self {
        Atom { weight, support }
    }

    /// `weight * sum_k coef_k e_{idx_k}` in dimension `dim`.
    pub fn sparse(dim: usize, weight: Scalar, entries: &[(usize, Scalar)]) -> Result<Self> {
        let mut support = vec![Scalar::zero(); dim];
        for (i, v) in entries {
            if *i >= dim {
                return Err(Error::InvalidArgument(format!(
                    "index {} outside dimension {dim}",
                    i + 1
                )));
            }
            support[*i] += v;
        }
        Self::new(weight, support)
    }

    /// `weight * e_i e_i^T`.
    pub fn diagonal(dim: usize, i: usize, weight: Scalar) -> Result<Self> {
        Self::sparse(dim, weight, &[(i, Scalar::one())])
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn support(&self) -> &[Scalar] {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weight.is_nonnegative() && self.support.iter().all(Scalar::is_nonnegative)
    }

    /// Weight one with integer support.
    pub fn is_integral(&self) -> bool {
        self.weight.is_one() && self.support.iter().all(Scalar::is_integer)
    }

    /// Re-indexes the support into dimension `dim`, coordinate `i` going to `map[i]`.
    pub fn embed(&self, dim: usize, map: &[usize]) -> Atom {
        let mut support = vec![Scalar::zero(); dim];
        for (i, v) in self.support.iter().enumerate() {
            support[map[i]] = v.clone();
        }
        Atom {
            weight: self.weight.clone(),
            support,
        }
    }
}

/// Collection of atoms whose Gram sum is the factorized matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpFactorization {
    dim: usize,
    atoms: Vec<Atom>,
    integral: bool,
}

impl CpFactorization {
    pub fn new(dim: usize) -> Self {
        CpFactorization {
            dim,
            atoms: Vec::new(),
            integral: false,
        }
    }

    pub fn from_atoms(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        let mut f = Self::new(dim);
        for a in atoms {
            f.push(a)?;
        }
        Ok(f)
    }

    pub fn push(&mut self, atom: Atom) -> Result<()> {
        if atom.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: atom.dim(),
            });
        }
        if self.integral && !atom.is_integral() {
            self.integral = false;
        }
        self.atoms.push(atom);
        Ok(())
    }

    pub fn extend(&mut self, atoms: impl IntoIterator<Item = Atom>) -> Result<()> {
        for a in atoms {
            self.push(a)?;
        }
        Ok(())
    }

    /// Sets the integrality flag after checking every atom qualifies.
    pub fn mark_integral(&mut self) -> Result<()> {
        if let Some(k) = self.atoms.iter().position(|a| !a.is_integral()) {
            return Err(Error::InvalidArgument(format!(
                "atom {} is not weight-one integer",
                k + 1
            )));
        }
        self.integral = true;
        Ok(())
    }

    /// Sets the flag as read from an external file; [`verify`](super::verify) rechecks it.
    pub fn set_integral_unchecked(&mut self, integral: bool) {
        self.integral = integral;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Common radicand of all weights and supports.
    pub fn radicand(&self) -> Result<u64> {
        common_radicand(
            self.atoms
                .iter()
                .flat_map(|a| core::iter::once(&a.weight).chain(&a.support)),
        )
    }

    /// Lifts all atoms into a larger dimension (see [`Atom::embed`]).
    pub fn embed(&self, dim: usize, map: &[usize]) -> CpFactorization {
        CpFactorization {
            dim,
            atoms: self.atoms.iter().map(|a| a.embed(dim, map)).collect(),
            integral: self.integral,
        }
    }

    pub fn into_atoms(self) -> Vec<Atom> {
        self.atoms
    }
}

/// Exact sum of `weight * support * support^T` over all atoms.
pub fn gram(f: &CpFactorization) -> SymMatrix {
    let mut m = SymMatrix::zeros(f.dim);
    for a in &f.atoms {
        m.add_rank_one(&a.weight, &a.support);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::unit_vector;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn gram_of_b2() {
        let f =
            CpFactorization::from_atoms(2, vec![Atom::new(Scalar::one(), ints(&[1, 1])).unwrap()])
                .unwrap();
        assert_eq!(
            gram(&f),
            SymMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap()
        );
    }

    #[test]
    fn empty_gram_is_zero() {
        assert_eq!(gram(&CpFactorization::new(3)), SymMatrix::zeros(3));
    }

    #[test]
    fn displayed_b4_factorization() {
        let cols = [[1, 1, 1, 1], [1, 0, 3, 0], [0, 3, 0, 1]];
        let mut f = CpFactorization::new(4);
        for c in cols {
            f.push(Atom::new(Scalar::one(), ints(&c)).unwrap()).unwrap();
        }
        f.push(Atom::new(Scalar::from_int(8), ints(&[1, 0, 0, 1])).unwrap())
            .unwrap();
        let g = gram(&f);
        assert_eq!(g, crate::edm::build_bn(4).unwrap());
        assert_eq!(g.get(0, 0), &Scalar::from_int(10));
    }

    #[test]
    fn atom_validation() {
        assert!(Atom::new(Scalar::zero(), ints(&[1])).is_err());
        assert!(Atom::new(Scalar::one(), ints(&[0, 0])).is_err());
        assert!(Atom::new(Scalar::one(), ints(&[1, -1])).is_err());
        assert!(Atom::diagonal(2, 5, Scalar::one()).is_err());
        let mut f = CpFactorization::new(2);
        assert!(f
            .push(Atom::new(Scalar::one(), unit_vector(3, 0)).unwrap())
            .is_err());
    }

    #[test]
    fn integral_flag() {
        let mut f = CpFactorization::new(2);
        f.push(Atom::new(Scalar::from_int(2), ints(&[1, 0])).unwrap())
            .unwrap();
        assert!(f.mark_integral().is_err());
        let mut g = CpFactorization::new(2);
        g.push(Atom::new(Scalar::one(), ints(&[1, 2])).unwrap())
            .unwrap();
        g.mark_integral().unwrap();
        assert!(g.is_integral());
    }
}
