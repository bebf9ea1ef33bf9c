//! Block-tridiagonal direct solver (block Thomas with pivoted dense LU per block).

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Result, StripError};

/// Row block `k` reads `lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k]`.
/// `lower[0]` and the last `upper` are ignored.
#[derive(Debug, Clone)]
pub struct BlockTridiagonal<T: ComplexField> {
    pub lower: Vec<DMatrix<T>>,
    pub diag: Vec<DMatrix<T>>,
    pub upper: Vec<DMatrix<T>>,
}

impl<T: ComplexField + Copy> BlockTridiagonal<T> {
    pub fn zeros(blocks: usize, size: usize) -> Self {
        Self {
            lower: vec![DMatrix::zeros(size, size); blocks],
            diag: vec![DMatrix::zeros(size, size); blocks],
            upper: vec![DMatrix::zeros(size, size); blocks],
        }
    }

    pub fn blocks(&self) -> usize {
        self.diag.len()
    }

    /// Applies the operator to `x`.
    pub fn apply(&self, x: &[DVector<T>]) -> Vec<DVector<T>> {
        let n = self.blocks();
        (0..n)
            .map(|k| {
                let mut r = &self.diag[k] * &x[k];
                if k > 0 {
                    r += &self.lower[k] * &x[k - 1];
                }
                if k + 1 < n {
                    r += &self.upper[k] * &x[k + 1];
                }
                r
            })
            .collect()
    }

    pub fn solve(self, rhs: &[DVector<T>]) -> Result<Vec<DVector<T>>> {
        let n = self.blocks();
        let BlockTridiagonal { lower, mut diag, upper } = self;
        let mut xs: Vec<DMatrix<T>> = Vec::with_capacity(n);
        let mut ys: Vec<DVector<T>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut r = rhs[k].clone();
            if k > 0 {
                diag[k] -= &lower[k] * &xs[k - 1];
                r -= &lower[k] * &ys[k - 1];
            }
            let lu = std::mem::replace(&mut diag[k], DMatrix::zeros(0, 0)).lu();
            if !lu.is_invertible() {
                return Err(StripError::Singular { block: k });
            }
            if k + 1 < n {
                xs.push(lu.solve(&upper[k]).ok_or(StripError::Singular { block: k })?);
            }
            ys.push(lu.solve(&r).ok_or(StripError::Singular { block: k })?);
        }
        for k in (0..n - 1).rev() {
            let next = ys[k + 1].clone();
            ys[k] -= &xs[k] * next;
        }
        Ok(ys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn solves_random_diagonally_dominant_system() {
        let n = 6;
        let b = 3;
        let mut m = BlockTridiagonal::<f64>::zeros(n, b);
        let mut seed = 1u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for k in 0..n {
            for i in 0..b {
                for j in 0..b {
                    m.lower[k][(i, j)] = rnd();
                    m.upper[k][(i, j)] = rnd();
                    m.diag[k][(i, j)] = rnd() + if i == j { 4.0 } else { 0.0 };
                }
            }
        }
        let x: Vec<DVector<f64>> = (0..n).map(|_| DVector::from_fn(b, |_, _| rnd())).collect();
        let rhs = m.apply(&x);
        let sol = m.solve(&rhs).unwrap();
        for k in 0..n {
            assert!((&sol[k] - &x[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_blocks() {
        let mut m = BlockTridiagonal::<Complex64>::zeros(3, 1);
        for k in 0..3 {
            m.diag[k][(0, 0)] = Complex64::new(2.0, 1.0);
            m.lower[k][(0, 0)] = Complex64::new(-1.0, 0.0);
            m.upper[k][(0, 0)] = Complex64::new(-1.0, 0.0);
        }
        let x: Vec<DVector<Complex64>> = (0..3).map(|k| DVector::from_element(1, Complex64::new(k as f64, 1.0))).collect();
        let rhs = m.apply(&x);
        let sol = m.solve(&rhs).unwrap();
        for k in 0..3 {
            assert!((sol[k][0] - x[k][0]).norm() < 1e-13);
        }
    }
}
