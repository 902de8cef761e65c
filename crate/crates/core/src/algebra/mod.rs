//! Free *-algebras, Lie algebras and enveloping algebras with primitive
//! coproduct, linear functionals, convolution and the convolution
//! exponential.

pub mod ctx;
pub mod functional;
pub mod lie;
pub mod word;

pub use ctx::{AlgebraCtx, AlgebraError, AlgebraKind, PFlavor, TensorPoly};
pub use functional::{check_generator, conv_exp, convolve, Functional, GeneratorReport};
pub use lie::{LieAlgebraSpec, LieError};
pub use word::{FreePolynomial, FreeWord, Letter};

/// An element of the enveloping algebra in PBW canonical form.
///
/// Thin wrapper around [`FreePolynomial`] whose words are guaranteed
/// non-decreasing in the basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopingElement {
    pub poly: FreePolynomial,
}

impl EnvelopingElement {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// PBW multi-indices with coefficients: exponent vectors over the basis.
    pub fn multi_indices(&self, dim: usize) -> Vec<(Vec<u32>, crate::scalar::Scalar)> {
        self.poly
            .terms
            .iter()
            .map(|(w, c)| {
                let mut exp = vec![0u32; dim];
                for l in &w.0 {
                    exp[l.gen as usize] += 1;
                }
                (exp, c.clone())
            })
            .collect()
    }
}

/// PBW normal ordering: rewrite a free polynomial modulo the ideal
/// {XY - YX - [X,Y]} of the enveloping algebra.
pub fn normal_order(
    p: &FreePolynomial,
    lie: &LieAlgebraSpec,
) -> Result<EnvelopingElement, AlgebraError> {
    for w in p.terms.keys() {
        for l in &w.0 {
            if l.gen as usize >= lie.dim {
                return Err(AlgebraError::IndexOutOfRange(l.gen));
            }
        }
    }
    let ctx = AlgebraCtx::enveloping(lie.clone(), usize::MAX);
    Ok(EnvelopingElement {
        poly: ctx.normalize(p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn normal_order_rejects_bad_index() {
        let lie = LieAlgebraSpec::hw();
        let p = FreePolynomial::word(FreeWord::gen(7));
        assert!(normal_order(&p, &lie).is_err());
    }

    #[test]
    fn pbw_confluence_under_permuted_rewrites() {
        // Normal ordering a random degree-5 sl2 word must not depend on the
        // rewrite order; compare against normalizing (w'·w'') split at every
        // position, which forces different rewrite sequences.
        let lie = LieAlgebraSpec::sl2();
        let ctx = AlgebraCtx::enveloping(lie.clone(), 10);
        let word = FreeWord(vec![
            Letter::new(1),
            Letter::new(2),
            Letter::new(0),
            Letter::new(1),
            Letter::new(0),
        ]);
        let direct = ctx.normalize(&FreePolynomial::word(word.clone()));
        for split in 1..word.0.len() {
            let left = ctx.normalize(&FreePolynomial::word(FreeWord(word.0[..split].to_vec())));
            let right = ctx.normalize(&FreePolynomial::word(FreeWord(word.0[split..].to_vec())));
            let recomposed = ctx.mul(&left, &right);
            assert_eq!(direct, recomposed);
        }
    }

    #[test]
    fn multi_index_extraction() {
        let lie = LieAlgebraSpec::hw();
        let p = FreePolynomial::word(FreeWord(vec![Letter::new(1), Letter::new(0)]));
        let e = normal_order(&p, &lie).unwrap();
        let idx = e.multi_indices(3);
        // A+A- term and E term
        assert!(idx
            .iter()
            .any(|(v, c)| v == &vec![1, 1, 0] && c.eq_scalar(&Scalar::one())));
        assert!(idx
            .iter()
            .any(|(v, c)| v == &vec![0, 0, 1] && c.eq_scalar(&Scalar::one())));
    }
}
