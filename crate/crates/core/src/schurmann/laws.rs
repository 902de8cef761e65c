//! Classical marginal laws of hermitian one-dimensional components:
//! classification by the three-term recurrence of their orthogonal
//! polynomials and an exact Jacobi-matrix moment oracle.

use super::TripleError;
use crate::scalar::Scalar;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum LawKind {
    Gaussian,
    Poisson,
    Gamma,
    MeixnerPollaczek,
    MeixnerPascal,
    CompoundPoisson,
}

/// A classical law stored through the Jacobi coefficients of its orthogonal
/// polynomials; `a[k]` is the diagonal, `b2[k]` the squared off-diagonal
/// (exact when the defining parameters are exact).
#[derive(Clone, Debug)]
pub struct ClassicalLawSpec {
    pub kind: LawKind,
    /// Human-readable derived parameters.
    pub params: Vec<(String, f64)>,
    /// Jacobi diagonal a_k as a function of k.
    jacobi_a: JacobiRule,
    /// Squared off-diagonal b_k² as a function of k.
    jacobi_b2: JacobiRule,
    /// Atom list (position, weight) for purely discrete branches.
    pub atoms: Option<Vec<(f64, f64)>>,
}

#[derive(Clone, Debug)]
enum JacobiRule {
    /// affine_k + constant: value = lin·k + cst
    Affine { lin: Scalar, cst: Scalar },
    /// quadratic in k: q2·k² + q1·k + q0
    Quadratic { q2: Scalar, q1: Scalar, q0: Scalar },
}

impl JacobiRule {
    fn eval(&self, k: usize) -> Scalar {
        let kk = Scalar::int(k as i64);
        match self {
            JacobiRule::Affine { lin, cst } => &(lin * &kk) + cst,
            JacobiRule::Quadratic { q2, q1, q0 } => {
                &(&(&(q2 * &kk) * &kk) + &(q1 * &kk)) + q0
            }
        }
    }
}

impl ClassicalLawSpec {
    pub fn jacobi_a(&self, k: usize) -> Scalar {
        self.jacobi_a.eval(k)
    }

    pub fn jacobi_b2(&self, k: usize) -> Scalar {
        self.jacobi_b2.eval(k)
    }

    /// Standard Gaussian with the given mean and variance.
    pub fn gaussian(mean: Scalar, variance: Scalar) -> Self {
        ClassicalLawSpec {
            kind: LawKind::Gaussian,
            params: vec![
                ("mean".into(), mean.to_c64().re),
                ("variance".into(), variance.to_c64().re),
            ],
            jacobi_a: JacobiRule::Affine {
                lin: Scalar::zero(),
                cst: mean,
            },
            jacobi_b2: JacobiRule::Affine {
                lin: variance.clone(),
                cst: variance,
            },
            atoms: None,
        }
    }

    /// Poisson with intensity λ, jump size α and drift δ: x = α·N + δ.
    pub fn poisson(intensity: Scalar, jump: Scalar, drift: Scalar) -> Self {
        let a_lin = jump.clone();
        let a_cst = &(&jump * &intensity) + &drift;
        let b_fac = &(&jump * &jump) * &intensity;
        let lam = intensity.to_c64().re;
        let al = jump.to_c64().re;
        let dr = drift.to_c64().re;
        let mut atoms = Vec::new();
        let mut logw = -lam;
        let mut cum = 0.0;
        let mut n = 0usize;
        while cum < 1.0 - 1e-12 && n < 500 {
            let w = logw.exp();
            atoms.push((al * n as f64 + dr, w));
            cum += w;
            n += 1;
            logw += lam.ln() - (n as f64).ln();
        }
        ClassicalLawSpec {
            kind: LawKind::Poisson,
            params: vec![
                ("intensity".into(), lam),
                ("jump".into(), al),
                ("drift".into(), dr),
            ],
            jacobi_a: JacobiRule::Affine {
                lin: a_lin,
                cst: a_cst,
            },
            jacobi_b2: JacobiRule::Affine {
                lin: b_fac.clone(),
                cst: b_fac,
            },
            atoms: Some(atoms),
        }
    }

    /// Density of the continuous branches (unnormalized for Meixner-Pollaczek
    /// until [`Self::normalized_density`] is used).
    pub fn density(&self, x: f64) -> Option<f64> {
        let get = |name: &str| {
            self.params
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
        };
        match self.kind {
            LawKind::Gaussian => {
                let m = get("mean")?;
                let v = get("variance")?;
                Some((-((x - m) * (x - m)) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt())
            }
            LawKind::Gamma => {
                let shape = get("shape")?;
                let sign = get("sign")?;
                let y = sign * x;
                if y <= 0.0 {
                    return Some(0.0);
                }
                Some((-(ln_gamma_real(shape)) + (shape - 1.0) * y.ln() - y).exp())
            }
            LawKind::MeixnerPollaczek => {
                let m0 = get("m0")?;
                let scale = get("scale")?; // 2√(1-β²)
                let beta = get("beta")?;
                let u = x / scale;
                let slope = (std::f64::consts::PI - 2.0 * beta.acos()) * u;
                let g = ln_gamma_complex(Complex64::new(m0 / 2.0, u));
                Some((slope + 2.0 * g.re).exp())
            }
            _ => None,
        }
    }
}

/// Classify the marginal law of Y_β = B⁺ + B⁻ + βM in the lowest-weight
/// representation of weight m0: Gamma for |β| = 1, Meixner-Pollaczek for
/// |β| < 1, Pascal (discrete Meixner) atoms for |β| > 1.
pub fn classify_marginal(beta: &Scalar, m0: &Scalar) -> Result<ClassicalLawSpec, TripleError> {
    let b = beta.to_c64().re;
    let m = m0.to_c64().re;
    if m <= 0.0 {
        return Err(TripleError::InvalidParameter("m0 must be > 0".into()));
    }
    // shared Jacobi recurrence: a_k = β(2k+m0), b_k² = (k+1)(k+m0)
    let jacobi_a = JacobiRule::Affine {
        lin: &Scalar::int(2) * beta,
        cst: beta * m0,
    };
    let jacobi_b2 = JacobiRule::Quadratic {
        q2: Scalar::one(),
        q1: &Scalar::one() + m0,
        q0: m0.clone(),
    };
    if b.abs() == 1.0 {
        Ok(ClassicalLawSpec {
            kind: LawKind::Gamma,
            params: vec![("shape".into(), m), ("sign".into(), b)],
            jacobi_a,
            jacobi_b2,
            atoms: None,
        })
    } else if b.abs() < 1.0 {
        Ok(ClassicalLawSpec {
            kind: LawKind::MeixnerPollaczek,
            params: vec![
                ("m0".into(), m),
                ("beta".into(), b),
                ("scale".into(), 2.0 * (1.0 - b * b).sqrt()),
            ],
            jacobi_a,
            jacobi_b2,
            atoms: None,
        })
    } else {
        // Pascal atoms x_n = (n + m0/2)(1/c - c)·sgn β with
        // weights (1-c²)^{m0} c^{2n} (m0)_n / n!, c = |β| - √(β²-1)
        let c = b.abs() - (b * b - 1.0).sqrt();
        let gap = (1.0 / c - c) * b.signum();
        let mut atoms = Vec::new();
        let norm = (1.0 - c * c).powf(m);
        let mut w = norm;
        let mut cum = 0.0;
        let mut n = 0usize;
        while cum < 1.0 - 1e-12 && n < 10_000 {
            atoms.push(((n as f64 + m / 2.0) * gap, w));
            cum += w;
            w *= c * c * (m + n as f64) / (n as f64 + 1.0);
            n += 1;
        }
        Ok(ClassicalLawSpec {
            kind: LawKind::MeixnerPascal,
            params: vec![("m0".into(), m), ("beta".into(), b), ("c".into(), c)],
            jacobi_a,
            jacobi_b2,
            atoms: Some(atoms),
        })
    }
}

/// Moments m_0..m_n of the orthogonality measure via powers of the
/// truncated Jacobi matrix, exact for exact Jacobi coefficients.
///
/// Uses the similarity-transformed tridiagonal with entries (1, a_k, b_k²),
/// which avoids square roots: m_j = ⟨e0, J^j e0⟩.
pub fn law_moments(law: &ClassicalLawSpec, n: usize) -> Vec<Scalar> {
    let levels = n + 2;
    let mut v = vec![Scalar::zero(); levels];
    v[0] = Scalar::one();
    let mut out = Vec::with_capacity(n + 1);
    out.push(Scalar::one());
    for _ in 1..=n {
        let mut next = vec![Scalar::zero(); levels];
        for k in 0..levels {
            let mut acc = &law.jacobi_a(k) * &v[k];
            if k >= 1 {
                acc += &law.jacobi_b2(k - 1) * &v[k - 1];
            }
            if k + 1 < levels {
                acc += v[k + 1].clone();
            }
            next[k] = acc;
        }
        v = next;
        out.push(v[0].clone());
    }
    out
}

/// Log-gamma for real positive argument (Lanczos approximation).
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma_complex(Complex64::new(x, 0.0)).re
}

/// Principal branch of log Γ(z) for Re z > 0 (Lanczos approximation).
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    // g = 7, n = 9 Lanczos coefficients
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    let zm1 = z - Complex64::new(1.0, 0.0);
    let mut x = Complex64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        x += Complex64::new(c, 0.0) / (zm1 + Complex64::new(i as f64, 0.0));
    }
    let t = zm1 + Complex64::new(G + 0.5, 0.0);
    let half_log_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    Complex64::new(half_log_2pi, 0.0) + (zm1 + Complex64::new(0.5, 0.0)) * t.ln() - t + x.ln()
}
