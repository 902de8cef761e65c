//! The p-extension of states and generators and the reduction identity
//! that turns boolean/monotone/anti-monotone convolutions into tensor
//! convolutions on the extended bialgebra.

use super::products::{product_functional, MixedWord, ProductKind, StateSpec};
use crate::algebra::{
    AlgebraCtx, AlgebraError, AlgebraKind, FreePolynomial, FreeWord, Functional, Letter, PFlavor,
};
use crate::scalar::Scalar;

/// Decomposition of a canonical B̃ monomial into p^α b_1 p b_2 … b_n p^ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PWord {
    pub alpha: bool,
    pub blocks: Vec<FreeWord>,
    pub omega: bool,
}

/// Parse a canonical p-extension word (letters < gens are B-generators,
/// letter == gens is p) into its block shape.
pub fn p_word(ctx: &AlgebraCtx, w: &FreeWord) -> PWord {
    let AlgebraKind::PExtension { gens, .. } = &ctx.kind else {
        panic!("p_word needs a p-extension context");
    };
    let pg = *gens as u32;
    let mut blocks = Vec::new();
    let mut alpha = false;
    let mut omega = false;
    let mut current: Vec<Letter> = Vec::new();
    for (k, l) in w.0.iter().enumerate() {
        if l.gen == pg {
            if k == 0 {
                alpha = true;
            }
            if !current.is_empty() {
                blocks.push(FreeWord(current.clone()));
                current.clear();
            }
            if k == w.0.len() - 1 {
                omega = true;
            }
        } else {
            current.push(*l);
        }
    }
    if !current.is_empty() {
        blocks.push(FreeWord(current));
    }
    PWord {
        alpha,
        blocks,
        omega,
    }
}

/// p-extension of a unital functional: φ̃(p^α b_1 p … b_n p^ω) = ∏ φ(b_i).
pub fn p_extension(
    ctx: &AlgebraCtx,
    phi: &StateSpec,
    degree: usize,
) -> Result<Functional, AlgebraError> {
    let mut out = Functional::zero(degree);
    out.unital = true;
    for w in ctx.basis(degree) {
        let pw = p_word(ctx, &w);
        let mut acc = Scalar::one();
        for b in &pw.blocks {
            acc = &acc * &phi.value(b)?;
        }
        out.set(w, acc);
    }
    Ok(out)
}

/// ψ̂ on B̃: ψ on single blocks, zero on longer words and on p.
pub fn psi_hat(
    ctx: &AlgebraCtx,
    psi: &Functional,
    degree: usize,
) -> Result<Functional, AlgebraError> {
    let mut out = Functional::zero(degree);
    for w in ctx.basis(degree) {
        let pw = p_word(ctx, &w);
        let v = match pw.blocks.len() {
            1 => psi.value(&pw.blocks[0])?,
            _ => Scalar::zero(),
        };
        out.set(w, v);
    }
    Ok(out)
}

fn flavor_kind(flavor: PFlavor) -> ProductKind {
    match flavor {
        PFlavor::Boolean => ProductKind::Boolean,
        PFlavor::Monotone => ProductKind::Monotone,
        PFlavor::AntiMonotone => ProductKind::AntiMonotone,
    }
}

/// Residual of the reduction identity
/// tilde((φ1 ◊ φ2) ∘ Δ) = (φ̃1 ⊗ φ̃2) ∘ Δ̄ on a B-monomial `b`
/// (generators primitive in the dual semigroup: Δb = i1(b) + i2(b)).
///
/// Exact rational arithmetic throughout; returns the sup over the checked
/// word of the difference.
pub fn reduction_check(
    flavor: PFlavor,
    phi1: &StateSpec,
    phi2: &StateSpec,
    b: &FreeWord,
    degree: usize,
) -> Result<Scalar, AlgebraError> {
    let gens = phi1.ctx.n_gens();
    let ctx = AlgebraCtx::p_extension(gens, flavor, degree);
    // LHS: (φ1 ◊ φ2)(Δ b) via the mixed-word expansion of ∏(i1(x)+i2(x))
    let mut lhs = Scalar::zero();
    let k = b.len();
    for mask in 0..(1u32 << k) {
        let letters: Vec<(usize, FreeWord)> = b
            .0
            .iter()
            .enumerate()
            .map(|(pos, l)| {
                let label = if mask & (1 << pos) == 0 { 1 } else { 2 };
                (label, FreeWord(vec![*l]))
            })
            .collect();
        let w = MixedWord::new(letters);
        lhs += product_functional(flavor_kind(flavor), phi1, phi2, &w)?;
    }
    // RHS: (φ̃1 ⊗ φ̃2)(Δ̄ b) on the p-extension bialgebra
    let phi1_t = p_extension(&ctx, phi1, degree)?;
    let phi2_t = p_extension(&ctx, phi2, degree)?;
    let mut rhs = Scalar::zero();
    for ((w1, w2), c) in ctx.coproduct_word(b) {
        rhs += &(&phi1_t.value(&w1)? * &phi2_t.value(&w2)?) * &c;
    }
    Ok(&lhs - &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_generator, conv_exp};

    fn state(values: &[(&[u32], Scalar)], degree: usize) -> StateSpec {
        let ctx = AlgebraCtx::free(1, false, degree);
        let mut moments = Functional::zero(degree);
        moments.unital = true;
        for (word, v) in values {
            moments.set(
                FreeWord(word.iter().map(|&g| Letter::new(g)).collect()),
                v.clone(),
            );
        }
        StateSpec {
            ctx,
            moments,
            realization: None,
        }
    }

    #[test]
    fn p_word_shapes() {
        let ctx = AlgebraCtx::p_extension(1, PFlavor::Boolean, 6);
        let p = Letter::new(1);
        let x = Letter::new(0);
        let w = FreeWord(vec![p, x, p, x, x, p]);
        let pw = p_word(&ctx, &w);
        assert!(pw.alpha && pw.omega);
        assert_eq!(pw.blocks.len(), 2);
        assert_eq!(pw.blocks[1].len(), 2);
    }

    #[test]
    fn p_extension_values() {
        let degree = 6;
        let phi = state(
            &[(&[0], Scalar::rational(1, 2)), (&[0, 0], Scalar::int(2))],
            degree,
        );
        let ctx = AlgebraCtx::p_extension(1, PFlavor::Boolean, degree);
        let tilde = p_extension(&ctx, &phi, degree).unwrap();
        let p = Letter::new(1);
        let x = Letter::new(0);
        // φ̃(p) = 1
        assert!(tilde.value(&FreeWord(vec![p])).unwrap().eq_scalar(&Scalar::one()));
        // φ̃(b1 p b2) = φ(b1)φ(b2)
        let w = FreeWord(vec![x, p, x]);
        assert!(tilde
            .value(&w)
            .unwrap()
            .eq_scalar(&Scalar::rational(1, 4)));
        // pure p word
        assert!(tilde
            .value(&FreeWord(vec![p]))
            .unwrap()
            .eq_scalar(&Scalar::one()));
    }

    #[test]
    fn psi_hat_rules() {
        let degree = 6;
        let mut psi = Functional::zero(degree);
        psi.set(FreeWord(vec![Letter::new(0), Letter::new(0)]), Scalar::one());
        let ctx = AlgebraCtx::p_extension(1, PFlavor::Boolean, degree);
        let hat = psi_hat(&ctx, &psi, degree).unwrap();
        let p = Letter::new(1);
        let x = Letter::new(0);
        // ψ̂(p b p) = ψ(b) for the single block b = x²
        assert!(hat
            .value(&FreeWord(vec![p, x, x, p]))
            .unwrap()
            .eq_scalar(&Scalar::one()));
        // ψ̂(b1 p b2) = 0
        assert!(hat.value(&FreeWord(vec![x, p, x])).unwrap().is_zero());
        // ψ̂(1) = 0, ψ̂(p) = 0
        assert!(hat.value(&FreeWord::unit()).unwrap().is_zero());
        assert!(hat.value(&FreeWord(vec![p])).unwrap().is_zero());
    }

    #[test]
    fn reduction_identity_exact() {
        let degree = 5;
        let phi1 = state(
            &[
                (&[0], Scalar::rational(1, 3)),
                (&[0, 0], Scalar::int(1)),
                (&[0, 0, 0], Scalar::rational(2, 5)),
                (&[0, 0, 0, 0], Scalar::int(3)),
                (&[0, 0, 0, 0, 0], Scalar::int(1)),
            ],
            degree,
        );
        let phi2 = state(
            &[
                (&[0], Scalar::int(-1)),
                (&[0, 0], Scalar::int(2)),
                (&[0, 0, 0], Scalar::zero()),
                (&[0, 0, 0, 0], Scalar::rational(7, 2)),
                (&[0, 0, 0, 0, 0], Scalar::int(-2)),
            ],
            degree,
        );
        for flavor in [PFlavor::Boolean, PFlavor::Monotone, PFlavor::AntiMonotone] {
            for deg in 1..=degree {
                let b = FreeWord(vec![Letter::new(0); deg]);
                let residual = reduction_check(flavor, &phi1, &phi2, &b, degree).unwrap();
                assert!(residual.is_zero(), "{flavor:?} degree {deg}: {residual}");
            }
        }
    }

    #[test]
    fn psi_hat_passes_generator_test() {
        // quadratic ψ on one hermitian generator (Gaussian-type): ψ(x²) = 1
        let degree = 3;
        let ctx_b = AlgebraCtx::free(1, false, 2 * degree);
        let mut psi = Functional::zero(2 * degree);
        psi.set(FreeWord(vec![Letter::new(0), Letter::new(0)]), Scalar::one());
        let rep = check_generator(&ctx_b, &psi, degree, 1e-10).unwrap();
        assert!(rep.cond_positive && rep.hermitian && rep.unit);
        for flavor in [PFlavor::Boolean, PFlavor::Monotone, PFlavor::AntiMonotone] {
            let ctx = AlgebraCtx::p_extension(1, flavor, 2 * degree);
            let hat = psi_hat(&ctx, &psi, 2 * degree).unwrap();
            let rep = check_generator(&ctx, &hat, degree, 1e-10).unwrap();
            assert!(rep.cond_positive, "{flavor:?}: min eig {}", rep.min_eigenvalue);
            assert!(rep.hermitian && rep.unit);
        }
    }

    #[test]
    fn p_invariance_of_convolution_exponential() {
        // φ_t = exp_⋆(t ψ̂) satisfies φ_t(p^α b_1 p … b_n p^ω) = ∏ φ_t(b_i)
        let degree = 4;
        let ctx = AlgebraCtx::p_extension(1, PFlavor::Boolean, degree);
        let mut psi = Functional::zero(degree);
        psi.set(FreeWord(vec![Letter::new(0), Letter::new(0)]), Scalar::one());
        let hat = psi_hat(&ctx, &psi, degree).unwrap();
        let phi = conv_exp(&ctx, &hat, &Scalar::from_f64(0.7)).unwrap();
        let p = Letter::new(1);
        let x = Letter::new(0);
        // φ_t(x p x) = φ_t(x)²
        let lhs = phi.value(&FreeWord(vec![x, p, x])).unwrap().to_c64();
        let fx = phi.value(&FreeWord(vec![x])).unwrap().to_c64();
        assert!((lhs - fx * fx).norm() < 1e-10);
        // φ_t(p x x p) = φ_t(x x)
        let lhs = phi.value(&FreeWord(vec![p, x, x, p])).unwrap().to_c64();
        let fxx = phi.value(&FreeWord(vec![x, x])).unwrap().to_c64();
        assert!((lhs - fxx).norm() < 1e-10);
    }
}
