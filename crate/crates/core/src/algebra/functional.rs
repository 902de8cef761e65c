//! Linear functionals on an algebra context: convolution, the convolution
//! exponential, and the Schoenberg-side generator test.

use crate::algebra::ctx::{AlgebraCtx, AlgebraError, AlgebraKind};
use crate::algebra::word::{FreePolynomial, FreeWord};
use crate::linalg;
use crate::scalar::Scalar;
use ndarray::Array2;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// A linear functional stored by its values on canonical monomials up to a
/// degree cutoff.
#[derive(Clone, Debug)]
pub struct Functional {
    pub values: BTreeMap<FreeWord, Scalar>,
    pub degree: usize,
    pub unital: bool,
}

impl Functional {
    pub fn zero(degree: usize) -> Self {
        Functional {
            values: BTreeMap::new(),
            degree,
            unital: false,
        }
    }

    /// The counit as a functional.
    pub fn counit(ctx: &AlgebraCtx, degree: usize) -> Self {
        let mut values = BTreeMap::new();
        for w in ctx.basis(degree) {
            let v = ctx.counit_word(&w);
            if !v.is_zero() {
                values.insert(w, v);
            }
        }
        Functional {
            values,
            degree,
            unital: true,
        }
    }

    pub fn set(&mut self, w: FreeWord, v: Scalar) {
        if v.is_zero() {
            self.values.remove(&w);
        } else {
            self.values.insert(w, v);
        }
    }

    pub fn value(&self, w: &FreeWord) -> Result<Scalar, AlgebraError> {
        if w.len() > self.degree {
            return Err(AlgebraError::DegreeOverflow(w.len(), self.degree));
        }
        Ok(self.values.get(w).cloned().unwrap_or_else(Scalar::zero))
    }

    pub fn eval(&self, p: &FreePolynomial) -> Result<Scalar, AlgebraError> {
        let mut acc = Scalar::zero();
        for (w, c) in &p.terms {
            acc += c * &self.value(w)?;
        }
        Ok(acc)
    }

    /// Evaluate on a not necessarily canonical polynomial.
    pub fn eval_in(&self, ctx: &AlgebraCtx, p: &FreePolynomial) -> Result<Scalar, AlgebraError> {
        self.eval(&ctx.normalize(p))
    }

    /// Hermitian ⇔ φ(u*) = conj(φ(u)) on all stored monomials.
    pub fn hermitian_defect(&self, ctx: &AlgebraCtx) -> f64 {
        let mut worst: f64 = 0.0;
        for w in ctx.basis(self.degree) {
            let starred = ctx.star(&FreePolynomial::word(w.clone()));
            let lhs = match self.eval(&starred) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let rhs = self.value(&w).unwrap().conj();
            worst = worst.max((&lhs - &rhs).abs());
        }
        worst
    }

    pub fn sup_distance(&self, other: &Functional) -> f64 {
        let mut worst: f64 = 0.0;
        let keys: std::collections::BTreeSet<_> =
            self.values.keys().chain(other.values.keys()).collect();
        for w in keys {
            let a = self.values.get(w).cloned().unwrap_or_else(Scalar::zero);
            let b = other.values.get(w).cloned().unwrap_or_else(Scalar::zero);
            worst = worst.max((&a - &b).abs());
        }
        worst
    }
}

/// Convolution (φ ⋆ ψ)(m) = (φ⊗ψ)(Δm) on all monomials of degree ≤ N.
pub fn convolve(
    ctx: &AlgebraCtx,
    phi: &Functional,
    psi: &Functional,
) -> Result<Functional, AlgebraError> {
    if phi.degree != psi.degree {
        return Err(AlgebraError::DegreeMismatch(phi.degree, psi.degree));
    }
    let mut out = Functional::zero(phi.degree);
    out.unital = phi.unital && psi.unital;
    for w in ctx.basis(phi.degree) {
        let mut acc = Scalar::zero();
        for ((w1, w2), c) in ctx.coproduct_word(&w) {
            let a = phi.value(&w1)?;
            if a.is_zero() {
                continue;
            }
            let b = psi.value(&w2)?;
            acc += &(&a * &b) * &c;
        }
        out.set(w, acc);
    }
    Ok(out)
}

/// Convolution exponential φ_t = exp_⋆(tL).
///
/// On primitively generated (graded connected) contexts the convolution
/// operator is nilpotent on the degree filtration, so the series terminates
/// and the result is exact for exact inputs. For group-like contexts
/// (unitary group coefficients, Azéma) a float matrix exponential of the
/// convolution operator is used instead.
pub fn conv_exp(ctx: &AlgebraCtx, gen: &Functional, t: &Scalar) -> Result<Functional, AlgebraError> {
    let n = gen.degree;
    let basis = ctx.basis(n);
    let nilpotent = matches!(
        ctx.kind,
        AlgebraKind::Free { .. } | AlgebraKind::Enveloping(_)
    );

    if nilpotent {
        // exp_⋆(tL) = Σ_k t^k L^{⋆k} / k!, terminating at k = N
        let mut acc = Functional::counit(ctx, n);
        let mut power = Functional::counit(ctx, n);
        let mut factorial = Scalar::one();
        for k in 1..=n {
            power = convolve(ctx, &power, gen)?;
            factorial = &factorial * &Scalar::int(k as i64);
            let coeff = &t.pow(k as u32) / &factorial;
            for w in &basis {
                let add = &power.value(w)? * &coeff;
                if !add.is_zero() {
                    let cur = acc.value(w)?;
                    acc.set(w.clone(), &cur + &add);
                }
            }
        }
        acc.unital = true;
        return Ok(acc);
    }

    // build the matrix of φ ↦ φ⋆L on the monomial basis and exponentiate
    let dim = basis.len();
    let index: BTreeMap<&FreeWord, usize> = basis.iter().zip(0..).collect();
    let mut m = Array2::<Complex64>::zeros((dim, dim));
    for (row, w) in basis.iter().enumerate() {
        for ((w1, w2), c) in ctx.coproduct_word(w) {
            let lv = gen.value(&w2)?;
            if lv.is_zero() {
                continue;
            }
            let col = *index
                .get(&w1)
                .ok_or_else(|| AlgebraError::MissingValue(format!("{w1}")))?;
            m[(row, col)] += (&lv * &c).to_c64();
        }
    }
    let e = linalg::expm(&m.mapv(|z| z * t.to_c64()));
    let mut out = Functional::zero(n);
    out.unital = true;
    let eps = Functional::counit(ctx, n);
    for (row, w) in basis.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (col, b) in basis.iter().enumerate() {
            let ev = eps.value(b)?;
            if !ev.is_zero() {
                acc += e[(row, col)] * ev.to_c64();
            }
        }
        out.set(w.clone(), Scalar::from_c64(acc));
    }
    Ok(out)
}

/// Report from the generator (Schoenberg) test.
#[derive(Clone, Debug)]
pub struct GeneratorReport {
    pub hermitian: bool,
    pub unit: bool,
    pub cond_positive: bool,
    pub min_eigenvalue: f64,
    pub hermitian_defect: f64,
}

/// Check hermitian / unital / conditionally positive for a candidate
/// generator `L` defined to degree 2N. The Gram matrix is built over
/// monomials m - ε(m)1 of degree 1..N.
pub fn check_generator(
    ctx: &AlgebraCtx,
    gen: &Functional,
    half_degree: usize,
    tol: f64,
) -> Result<GeneratorReport, AlgebraError> {
    let unit = gen.value(&FreeWord::unit())?.abs() <= tol;
    let hermitian_defect = gen.hermitian_defect(ctx);
    let hermitian = hermitian_defect <= tol.max(1e-12);

    let basis: Vec<FreeWord> = ctx
        .basis(half_degree)
        .into_iter()
        .filter(|w| !w.is_unit())
        .collect();
    let dim = basis.len();
    let mut gram = Array2::<Complex64>::zeros((dim, dim));
    for (i, u) in basis.iter().enumerate() {
        let ue = ctx.counit_word(u);
        let up = FreePolynomial::word(u.clone())
            .sub(&FreePolynomial::monomial(FreeWord::unit(), ue));
        let ustar = ctx.star(&up);
        for (j, v) in basis.iter().enumerate() {
            let ve = ctx.counit_word(v);
            let vp = FreePolynomial::word(v.clone())
                .sub(&FreePolynomial::monomial(FreeWord::unit(), ve));
            let prod = ctx.mul(&ustar, &vp);
            gram[(i, j)] = gen.eval(&prod)?.to_c64();
        }
    }
    // force exact hermiticity before the eigenvalue sweep
    let gram_h = (gram.clone() + linalg::adjoint(&gram)).mapv(|z| z * 0.5);
    let min_eigenvalue = if dim == 0 {
        0.0
    } else {
        linalg::min_eigenvalue(&gram_h)
    };
    Ok(GeneratorReport {
        hermitian,
        unit,
        cond_positive: min_eigenvalue >= -tol,
        min_eigenvalue,
        hermitian_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lie::LieAlgebraSpec;
    use crate::algebra::word::Letter;

    fn hw_gaussian(ctx: &AlgebraCtx, degree: usize) -> Functional {
        // L from the triple with v1 = (1), v2 = 0, z = 0 on hw (A+=0, A-=1, E=2):
        // L(E) = 1, L(A- A+) = ⟨η((A-)*),η(A+)⟩ = ⟨v1,v1⟩ = 1, L(A+ A-) = ⟨v2,v2⟩ = 0
        // stored on PBW monomials: L(A+A-) = 0, and L(E)=1 handles the reordering.
        let mut l = Functional::zero(degree);
        l.set(FreeWord::gen(2), Scalar::one());
        let _ = ctx;
        l
    }

    #[test]
    fn counit_is_neutral() {
        let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::hw(), 4);
        let eps = Functional::counit(&ctx, 4);
        let mut phi = Functional::zero(4);
        phi.set(FreeWord::unit(), Scalar::one());
        phi.set(FreeWord::gen(0), Scalar::rational(2, 3));
        phi.set(
            FreeWord(vec![Letter::new(0), Letter::new(1)]),
            Scalar::rational(-1, 7),
        );
        let conv = convolve(&ctx, &eps, &phi).unwrap();
        assert_eq!(conv.sup_distance(&phi), 0.0);
    }

    #[test]
    fn hw_gaussian_second_and_fourth_moment() {
        // Y = A+ + A-; φ_t(Y^2) = t and φ_t(Y^4) = 3t^2 (Gaussian moments)
        let degree = 6;
        let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::hw(), degree);
        let l = hw_gaussian(&ctx, degree);
        let t = Scalar::one();
        let phi = conv_exp(&ctx, &l, &t).unwrap();
        let y = FreePolynomial::word(FreeWord::gen(0))
            .add(&FreePolynomial::word(FreeWord::gen(1)));
        let y2 = ctx.mul(&y, &y);
        let y4 = ctx.mul(&y2, &y2);
        assert!(phi.eval(&y2).unwrap().eq_scalar(&Scalar::one()));
        assert!(phi.eval(&y4).unwrap().eq_scalar(&Scalar::int(3)));
    }

    #[test]
    fn semigroup_law_exact() {
        let degree = 5;
        let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::hw(), degree);
        let l = hw_gaussian(&ctx, degree);
        let s = Scalar::rational(1, 4);
        let t = Scalar::rational(1, 2);
        let phi_s = conv_exp(&ctx, &l, &s).unwrap();
        let phi_t = conv_exp(&ctx, &l, &t).unwrap();
        let phi_st = conv_exp(&ctx, &l, &(&s + &t)).unwrap();
        let conv = convolve(&ctx, &phi_s, &phi_t).unwrap();
        assert_eq!(conv.sup_distance(&phi_st), 0.0);
    }

    #[test]
    fn variances_add_under_convolution() {
        let degree = 4;
        let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::hw(), degree);
        let l = hw_gaussian(&ctx, degree);
        let phi = conv_exp(&ctx, &l, &Scalar::rational(1, 3)).unwrap();
        let psi = conv_exp(&ctx, &l, &Scalar::rational(2, 3)).unwrap();
        let conv = convolve(&ctx, &phi, &psi).unwrap();
        let y = FreePolynomial::word(FreeWord::gen(0))
            .add(&FreePolynomial::word(FreeWord::gen(1)));
        let y2 = ctx.mul(&y, &y);
        let var = conv.eval(&y2).unwrap();
        assert!(var.eq_scalar(&Scalar::one()));
    }

    #[test]
    fn group_like_convolution_multiplies() {
        // Azéma y is group-like: (φ⋆ψ)(y) = φ(y)ψ(y)
        let ctx = AlgebraCtx::azema(Scalar::rational(1, 2), 3);
        let mut phi = Functional::zero(3);
        phi.set(FreeWord::unit(), Scalar::one());
        phi.set(FreeWord::gen(1), Scalar::rational(2, 5));
        let mut psi = Functional::zero(3);
        psi.set(FreeWord::unit(), Scalar::one());
        psi.set(FreeWord::gen(1), Scalar::rational(3, 7));
        let conv = convolve(&ctx, &phi, &psi).unwrap();
        assert!(conv
            .value(&FreeWord::gen(1))
            .unwrap()
            .eq_scalar(&Scalar::rational(6, 35)));
    }

    #[test]
    fn generator_checks() {
        let degree = 3;
        let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::hw(), 2 * degree);
        let mut l = hw_gaussian(&ctx, 2 * degree);
        let rep = check_generator(&ctx, &l, degree, 1e-10).unwrap();
        assert!(rep.hermitian && rep.unit && rep.cond_positive);

        // zero functional passes trivially
        let zero = Functional::zero(2 * degree);
        let rep = check_generator(&ctx, &zero, degree, 1e-10).unwrap();
        assert!(rep.hermitian && rep.unit && rep.cond_positive);

        // L(x^2) = -1 on one hermitian primitive generator fails
        let free = AlgebraCtx::free(1, false, 2 * degree);
        let mut bad = Functional::zero(2 * degree);
        bad.set(
            FreeWord(vec![Letter::new(0), Letter::new(0)]),
            Scalar::int(-1),
        );
        let rep = check_generator(&free, &bad, degree, 1e-10).unwrap();
        assert!(!rep.cond_positive);

        // Schoenberg direction: conv_exp of hw-Gaussian is a state at t ∈ {0.1, 1}
        l.unital = false;
        for t in [Scalar::rational(1, 10), Scalar::one()] {
            let phi = conv_exp(&ctx, &l, &t).unwrap();
            assert!(phi.value(&FreeWord::unit()).unwrap().eq_scalar(&Scalar::one()));
            let rep = check_generator(&ctx, &phi, degree, 1e-10).unwrap();
            // states have PSD Gram matrices over ker ε too (positivity)
            assert!(rep.min_eigenvalue >= -1e-10);
        }
    }
}
