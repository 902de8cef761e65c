//! Small dense matrices and vectors over [`Scalar`], with exact Gaussian
//! elimination for rank and null-space computations.
//!
//! Representation matrices of Schürmann triples are stored in this form so
//! that catalog triples with rational matrix entries keep algebraic checks
//! (Itô homomorphism, bracket identities) exact. An optional diagonal Gram
//! weight supports unnormalized bases, where e.g. lowest-weight operators
//! have rational entries instead of square roots.

use crate::scalar::Scalar;
use ndarray::Array2;
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct SVec(pub Vec<Scalar>);

impl SVec {
    pub fn zeros(n: usize) -> Self {
        SVec(vec![Scalar::zero(); n])
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = SVec::zeros(n);
        v.0[k] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, c: &Scalar) -> SVec {
        SVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &SVec) -> SVec {
        SVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &SVec) -> SVec {
        SVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .map(|x| x.abs().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.0.iter().map(|x| x.to_c64()).collect()
    }
}

/// Dense row-major matrix over [`Scalar`].
#[derive(Clone, Debug, PartialEq)]
pub struct SMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl SMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SMat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut m = SMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &SMat) -> SMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SMat) -> SMat {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> SMat {
        SMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn matmul(&self, other: &SMat) -> SMat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = SMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    *out.at_mut(i, j) = out.at(i, j) + &(a * b);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        assert_eq!(self.cols, v.dim());
        let mut out = SVec::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = Scalar::zero();
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !a.is_zero() {
                    acc += a * &v.0[j];
                }
            }
            out.0[i] = acc;
        }
        out
    }

    pub fn transpose(&self) -> SMat {
        SMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    /// Conjugate transpose (plain, without Gram weights).
    pub fn adjoint(&self) -> SMat {
        SMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    /// Adjoint with respect to the weighted inner product
    /// `⟨x,y⟩ = Σ conj(x_i) w_i y_i`: `A^† = W^{-1} A^H W`.
    pub fn adjoint_weighted(&self, gram: &[Scalar]) -> SMat {
        assert_eq!(self.rows, self.cols);
        SMat::from_fn(self.rows, self.cols, |i, j| {
            &(&self.at(j, i).conj() * &gram[j]) / &gram[i]
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn to_c64(&self) -> Array2<Complex64> {
        Array2::from_shape_fn((self.rows, self.cols), |(i, j)| self.at(i, j).to_c64())
    }
}

/// Weighted inner product `⟨x,y⟩ = Σ conj(x_i) w_i y_i`; plain when `gram` is `None`.
pub fn inner(gram: Option<&[Scalar]>, x: &SVec, y: &SVec) -> Scalar {
    let mut acc = Scalar::zero();
    for i in 0..x.dim() {
        let mut t = &x.0[i].conj() * &y.0[i];
        if let Some(w) = gram {
            t = &t * &w[i];
        }
        acc += t;
    }
    acc
}

/// Row echelon reduction in place; returns pivot column indices.
///
/// Exact when all entries are exact; float entries use a relative threshold.
fn row_echelon(m: &mut SMat, tol: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        // find best pivot in column
        let mut best: Option<(usize, f64)> = None;
        for r in row..m.rows {
            let a = m.at(r, col).abs();
            if a > tol && best.map_or(true, |(_, b)| a > b) {
                best = Some((r, a));
            }
        }
        let Some((p, _)) = best else { continue };
        if p != row {
            for j in 0..m.cols {
                let tmp = m.at(row, j).clone();
                *m.at_mut(row, j) = m.at(p, j).clone();
                *m.at_mut(p, j) = tmp;
            }
        }
        let inv = m.at(row, col).inv();
        for j in col..m.cols {
            *m.at_mut(row, j) = m.at(row, j) * &inv;
        }
        for r in 0..m.rows {
            if r != row && !m.at(r, col).is_zero() {
                let f = m.at(r, col).clone();
                for j in col..m.cols {
                    *m.at_mut(r, j) = m.at(r, j) - &(&f * m.at(row, j));
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.rows {
            break;
        }
    }
    pivots
}

/// Rank of the matrix; exact for exact entries.
pub fn rank(m: &SMat, tol: f64) -> usize {
    let mut work = m.clone();
    row_echelon(&mut work, tol).len()
}

/// Basis of the null space `{x : Mx = 0}` as column vectors.
pub fn null_space(m: &SMat, tol: f64) -> Vec<SVec> {
    let mut work = m.clone();
    let pivots = row_echelon(&mut work, tol);
    let mut basis = Vec::new();
    let mut pivot_set = vec![false; m.cols];
    for &p in &pivots {
        pivot_set[p] = true;
    }
    for free in 0..m.cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = SVec::zeros(m.cols);
        v.0[free] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            v.0[p] = -work.at(r, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve `Mx = b` exactly (square, invertible); `None` when singular.
pub fn solve(m: &SMat, b: &SVec, tol: f64) -> Option<SVec> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = SMat::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            *aug.at_mut(i, j) = m.at(i, j).clone();
        }
        *aug.at_mut(i, n) = b.0[i].clone();
    }
    let pivots = row_echelon(&mut aug, tol);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = SVec::zeros(n);
    for (r, &p) in pivots.iter().enumerate() {
        x.0[p] = aug.at(r, n).clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_nullspace_dimension() {
        // rank-1 matrix [[1,2],[2,4]] has 1-dimensional kernel
        let m = SMat::from_fn(2, 2, |i, j| Scalar::int(((i + 1) * (j + 1)) as i64));
        let ns = null_space(&m, 0.0);
        assert_eq!(ns.len(), 1);
        assert!(m.apply(&ns[0]).is_zero());
    }

    #[test]
    fn weighted_adjoint_reproduces_star_relation() {
        // lowest-weight sl2 raising operator in the unnormalized basis:
        // B+ e_n = e_{n+1}, B- e_n = n(n+1) e_{n-1}, gram w_n = n!(n+1)!
        let d = 4;
        let mut bp = SMat::zeros(d, d);
        for n in 0..d - 1 {
            *bp.at_mut(n + 1, n) = Scalar::one();
        }
        let mut gram = vec![Scalar::one()];
        for n in 1..d {
            let prev = gram[n - 1].clone();
            gram.push(&prev * &Scalar::int((n * (n + 1)) as i64));
        }
        let bm = bp.adjoint_weighted(&gram);
        for n in 1..d {
            assert!(bm.at(n - 1, n).eq_scalar(&Scalar::int((n * (n + 1)) as i64)));
        }
    }

    #[test]
    fn exact_solve() {
        let m = SMat::from_fn(2, 2, |i, j| Scalar::int([[2, 1], [1, 3]][i][j]));
        let b = SVec(vec![Scalar::int(5), Scalar::int(10)]);
        let x = solve(&m, &b, 0.0).unwrap();
        assert!(x.0[0].eq_scalar(&Scalar::int(1)));
        assert!(x.0[1].eq_scalar(&Scalar::int(3)));
    }
}
