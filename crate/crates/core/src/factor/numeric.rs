use alloc::vec::Vec;

use super::model::{gram, CpFactorization};

/// Floating-point export of a factorization: `B` with `B B^T` close to the exact Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericFactor {
    /// `dim x atoms`, row-major; column `k` is `sqrt(weight_k) * support_k` rounded.
    pub rows: Vec<Vec<f64>>,
    pub decimal_digits: u32,
    /// Largest `|gram - B B^T|` entry.
    pub max_residual: f64,
}

fn round_to(x: f64, digits: u32) -> f64 {
    let scale = libm::pow(10.0, digits as f64);
    libm::round(x * scale) / scale
}

pub fn to_numeric(f: &CpFactorization, decimal_digits: u32) -> NumericFactor {
    let n = f.dim();
    let cols: Vec<Vec<f64>> = f
        .atoms()
        .iter()
        .map(|a| {
            let s = libm::sqrt(a.weight().to_f64());
            a.support()
                .iter()
                .map(|v| round_to(s * v.to_f64(), decimal_digits))
                .collect()
        })
        .collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let exact = gram(f);
    let mut max_residual = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let approx: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
            let r = libm::fabs(exact.get(i, j).to_f64() - approx);
            max_residual = max_residual.max(r);
        }
    }
    NumericFactor {
        rows,
        decimal_digits,
        max_residual,
    }
}
