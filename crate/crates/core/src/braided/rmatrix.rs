//! R-matrices: Yang-Baxter, bi-invertibility and real type I checks in
//! exact arithmetic, plus the standard examples.

use crate::scalar::Scalar;
use crate::smat::{solve, SMat, SVec};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BraidedError {
    #[error("R is singular: ordinary inverse does not exist")]
    NotInvertible,
    #[error("second inverse R̃ does not exist (defect dimension {0})")]
    NoSecondInverse(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// R-matrix with entries R^i_k^j_l; stored row-major over (i,k,j,l).
#[derive(Clone, Debug)]
pub struct RMatrix {
    pub n: usize,
    entries: Vec<Scalar>,
}

impl RMatrix {
    pub fn new(n: usize) -> Self {
        RMatrix {
            n,
            entries: vec![Scalar::zero(); n * n * n * n],
        }
    }

    #[inline]
    fn idx(&self, i: usize, k: usize, j: usize, l: usize) -> usize {
        ((i * self.n + k) * self.n + j) * self.n + l
    }

    pub fn get(&self, i: usize, k: usize, j: usize, l: usize) -> &Scalar {
        &self.entries[self.idx(i, k, j, l)]
    }

    pub fn set(&mut self, i: usize, k: usize, j: usize, l: usize, v: Scalar) {
        let p = self.idx(i, k, j, l);
        self.entries[p] = v;
    }

    /// View as the matrix M[(i,j), (k,l)] = R^i_k^j_l on C^n ⊗ C^n.
    pub fn as_matrix(&self) -> SMat {
        let n = self.n;
        SMat::from_fn(n * n, n * n, |row, col| {
            let (i, j) = (row / n, row % n);
            let (k, l) = (col / n, col % n);
            self.get(i, k, j, l).clone()
        })
    }

    fn from_matrix(n: usize, m: &SMat) -> RMatrix {
        let mut r = RMatrix::new(n);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        r.set(i, k, j, l, m.at(i * n + j, k * n + l).clone());
                    }
                }
            }
        }
        r
    }

    /// Quantum Yang-Baxter residual
    /// Σ R^i_a^k_b R^a_j^d_c R^b_l^c_r - Σ R^k_b^d_c R^i_a^c_r R^a_j^b_l.
    pub fn qybe_residual(&self) -> Scalar {
        let n = self.n;
        let mut worst = Scalar::zero();
        let mut worst_abs = 0.0f64;
        for d in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            for r in 0..n {
                                let mut acc = Scalar::zero();
                                for a in 0..n {
                                    for b in 0..n {
                                        for c in 0..n {
                                            acc += &(self.get(i, a, k, b)
                                                * self.get(a, j, d, c))
                                                * self.get(b, l, c, r);
                                            acc -= &(self.get(k, b, d, c)
                                                * self.get(i, a, c, r))
                                                * self.get(a, j, b, l);
                                        }
                                    }
                                }
                                if acc.abs() > worst_abs {
                                    worst_abs = acc.abs();
                                    worst = acc;
                                }
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// Real type I residual: conj(R^i_k^j_l) - R^l_j^k_i.
    pub fn type_i_residual(&self) -> Scalar {
        let n = self.n;
        let mut worst = Scalar::zero();
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let d = &self.get(i, k, j, l).conj() - self.get(l, j, k, i);
                        if d.abs() > worst.abs() {
                            worst = d;
                        }
                    }
                }
            }
        }
        worst
    }

    /// Ordinary inverse: (R⁻¹)^i_k^j_l with R⁻¹R = RR⁻¹ = δδ.
    pub fn inverse(&self) -> Result<RMatrix, BraidedError> {
        let n = self.n;
        let m = self.as_matrix();
        let mut inv = SMat::zeros(n * n, n * n);
        for col in 0..n * n {
            let b = SVec::basis(n * n, col);
            let x = solve(&m, &b, 1e-12).ok_or(BraidedError::NotInvertible)?;
            for row in 0..n * n {
                *inv.at_mut(row, col) = x.0[row].clone();
            }
        }
        Ok(RMatrix::from_matrix(n, &inv))
    }

    /// Second inverse R̃ with R̃^i_k^j_l R^k_p^q_j = δ^i_p δ^q_l.
    pub fn second_inverse(&self) -> Result<RMatrix, BraidedError> {
        let n = self.n;
        // unknowns X[(i,l),(k,j)] = R̃^i_k^j_l; coefficient A[(k,j),(p,q)] =
        // R^k_p^q_j; want X·A = Id over index pairs
        let a = SMat::from_fn(n * n, n * n, |row, col| {
            let (k, j) = (row / n, row % n);
            let (p, q) = (col / n, col % n);
            self.get(k, p, q, j).clone()
        });
        // X = A^{-1} read through the pairings: solve Aᵀ Xᵀ = Id
        let at = a.transpose();
        let mut xt = SMat::zeros(n * n, n * n);
        let mut defect = 0usize;
        for col in 0..n * n {
            let b = SVec::basis(n * n, col);
            match solve(&at, &b, 1e-12) {
                Some(x) => {
                    for row in 0..n * n {
                        *xt.at_mut(row, col) = x.0[row].clone();
                    }
                }
                None => defect += 1,
            }
        }
        if defect > 0 {
            return Err(BraidedError::NoSecondInverse(defect));
        }
        let x = xt.transpose();
        let mut r = RMatrix::new(n);
        for i in 0..n {
            for l in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        r.set(i, k, j, l, x.at(i * n + l, k * n + j).clone());
                    }
                }
            }
        }
        Ok(r)
    }

    /// One-dimensional R-matrix (q).
    pub fn one_dim(q: Scalar) -> Self {
        let mut r = RMatrix::new(1);
        r.set(0, 0, 0, 0, q);
        r
    }

    /// The sl2 R-matrix R_2 (standard two-dimensional quantum plane).
    pub fn sl2(q: &Scalar) -> Self {
        let n = 2;
        let mut r = RMatrix::new(n);
        let q2 = q * q;
        // M[(i,j),(k,l)] layout: diag(q², q, q, q²) + (q²-1) at ((1,2),(2,1))
        r.set(0, 0, 0, 0, q2.clone());
        r.set(0, 0, 1, 1, q.clone());
        r.set(1, 1, 0, 0, q.clone());
        r.set(1, 1, 1, 1, q2.clone());
        r.set(0, 1, 1, 0, &q2 - &Scalar::one());
        r
    }

    /// The sl3 R-matrix R_3.
    pub fn sl3(q: &Scalar) -> Self {
        let n = 3;
        let mut r = RMatrix::new(n);
        let q2 = q * q;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    r.set(i, i, i, i, q2.clone());
                } else {
                    r.set(i, i, j, j, q.clone());
                }
            }
        }
        // off-diagonal (q²-1) entries at M[(i,j),(j,i)] for i < j
        for i in 0..n {
            for j in i + 1..n {
                r.set(i, j, j, i, &q2 - &Scalar::one());
            }
        }
        r
    }

    /// Rescale R -> t·R.
    pub fn scale(&self, t: &Scalar) -> RMatrix {
        RMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x * t).collect(),
        }
    }
}

/// Report of [`check_r_matrix`].
#[derive(Debug)]
pub struct RMatrixReport {
    pub qybe_residual: f64,
    pub type_i_residual: f64,
    pub invertible: bool,
    pub second_invertible: bool,
    pub exact: bool,
}

impl RMatrixReport {
    pub fn pass(&self) -> bool {
        self.qybe_residual == 0.0
            && self.type_i_residual == 0.0
            && self.invertible
            && self.second_invertible
    }
}

pub fn check_r_matrix(r: &RMatrix) -> RMatrixReport {
    RMatrixReport {
        qybe_residual: r.qybe_residual().abs(),
        type_i_residual: r.type_i_residual().abs(),
        invertible: r.inverse().is_ok(),
        second_invertible: r.second_inverse().is_ok(),
        exact: true,
    }
}

#[derive(Deserialize)]
struct RJson {
    n: usize,
    entries: Vec<(usize, usize, usize, usize, serde_json::Value, serde_json::Value)>,
}

impl RMatrix {
    /// Load from JSON `{n, entries: [[i,k,j,l,re,im], ...]}` with rational
    /// strings or numbers.
    pub fn from_json(text: &str) -> Result<Self, BraidedError> {
        let raw: RJson =
            serde_json::from_str(text).map_err(|e| BraidedError::Invalid(e.to_string()))?;
        let mut r = RMatrix::new(raw.n);
        let part = |v: &serde_json::Value| -> Result<Scalar, BraidedError> {
            match v {
                serde_json::Value::Number(x) => Ok(x
                    .as_i64()
                    .map(Scalar::int)
                    .unwrap_or_else(|| Scalar::from_f64(x.as_f64().unwrap()))),
                serde_json::Value::String(s) => {
                    let (num, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
                    let n: i64 = num
                        .trim()
                        .parse()
                        .map_err(|_| BraidedError::Invalid(format!("bad rational {s}")))?;
                    let d: i64 = den
                        .trim()
                        .parse()
                        .map_err(|_| BraidedError::Invalid(format!("bad rational {s}")))?;
                    Ok(Scalar::rational(n, d))
                }
                _ => Err(BraidedError::Invalid("entry must be number or p/q".into())),
            }
        };
        for (i, k, j, l, re, im) in &raw.entries {
            let v = &part(re)? + &(&Scalar::i() * &part(im)?);
            if *i >= raw.n || *k >= raw.n || *j >= raw.n || *l >= raw.n {
                return Err(BraidedError::Invalid("index out of range".into()));
            }
            r.set(*i, *k, *j, *l, v);
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dim_rational_q_passes() {
        let r = RMatrix::one_dim(Scalar::rational(3, 2));
        let rep = check_r_matrix(&r);
        assert!(rep.pass());
    }

    #[test]
    fn imaginary_q_fails_type_i() {
        let r = RMatrix::one_dim(Scalar::i());
        let rep = check_r_matrix(&r);
        assert!(rep.type_i_residual > 0.0);
        assert_eq!(rep.qybe_residual, 0.0);
    }

    #[test]
    fn sl2_rescaled_passes_exactly() {
        let r = RMatrix::sl2(&Scalar::int(2)).scale(&Scalar::one());
        let rep = check_r_matrix(&r);
        assert!(rep.pass());
        // second inverse contracts correctly: R̃^i_k^j_l R^k_p^q_j = δδ
        let tilde = r.second_inverse().unwrap();
        let n = 2;
        for i in 0..n {
            for p in 0..n {
                for q in 0..n {
                    for l in 0..n {
                        let mut acc = Scalar::zero();
                        for k in 0..n {
                            for j in 0..n {
                                acc += tilde.get(i, k, j, l) * r.get(k, p, q, j);
                            }
                        }
                        let expect = if i == p && q == l {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        };
                        assert!(acc.eq_scalar(&expect));
                    }
                }
            }
        }
    }

    #[test]
    fn sl3_passes() {
        for q in [Scalar::int(2), Scalar::rational(-3, 2)] {
            let r = RMatrix::sl3(&q).scale(&Scalar::rational(1, 2));
            let rep = check_r_matrix(&r);
            assert!(rep.pass());
        }
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"n": 1, "entries": [[0,0,0,0,"1/2",0]]}"#;
        let r = RMatrix::from_json(text).unwrap();
        assert!(r.get(0, 0, 0, 0).eq_scalar(&Scalar::rational(1, 2)));
    }
}
