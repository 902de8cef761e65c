//! Free *-algebra words and polynomials.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// One letter of a free word: a generator index with a star flag.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub gen: u32,
    pub star: bool,
}

impl Letter {
    pub fn new(gen: u32) -> Self {
        Letter { gen, star: false }
    }

    pub fn starred(gen: u32) -> Self {
        Letter { gen, star: true }
    }
}

/// A monomial in the free *-algebra; the empty word is the unit.
///
/// The involution reverses the letter order and flips star flags, so
/// `(w*)* = w` holds by construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FreeWord(pub Vec<Letter>);

impl FreeWord {
    pub fn unit() -> Self {
        FreeWord(Vec::new())
    }

    pub fn gen(i: u32) -> Self {
        FreeWord(vec![Letter::new(i)])
    }

    pub fn gen_star(i: u32) -> Self {
        FreeWord(vec![Letter::starred(i)])
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        FreeWord(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FreeWord(v)
    }

    pub fn star(&self) -> FreeWord {
        FreeWord(
            self.0
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    star: !l.star,
                })
                .collect(),
        )
    }

    pub fn power(&self, n: usize) -> FreeWord {
        let mut v = Vec::with_capacity(self.0.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        FreeWord(v)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "g{}{}", l.gen, if l.star { "*" } else { "" })?;
        }
        Ok(())
    }
}

/// Linear combination of free words; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FreePolynomial {
    pub terms: BTreeMap<FreeWord, Scalar>,
}

impl FreePolynomial {
    pub fn zero() -> Self {
        FreePolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        FreePolynomial::monomial(FreeWord::unit(), Scalar::one())
    }

    pub fn monomial(w: FreeWord, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        FreePolynomial { terms }
    }

    pub fn word(w: FreeWord) -> Self {
        FreePolynomial::monomial(w, Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: FreeWord, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &FreePolynomial) -> FreePolynomial {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FreePolynomial) -> FreePolynomial {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> FreePolynomial {
        if c.is_zero() {
            return FreePolynomial::zero();
        }
        FreePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a * c))
                .collect(),
        }
    }

    /// Product in the free algebra (concatenation, no relations applied).
    pub fn free_mul(&self, other: &FreePolynomial) -> FreePolynomial {
        let mut out = FreePolynomial::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Involution: anti-linear, anti-multiplicative.
    pub fn star(&self) -> FreePolynomial {
        let mut out = FreePolynomial::zero();
        for (w, c) in &self.terms {
            out.add_term(w.star(), c.conj());
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, w: &FreeWord) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_is_involutive_and_antimultiplicative() {
        let w = FreeWord(vec![Letter::new(0), Letter::starred(1), Letter::new(2)]);
        assert_eq!(w.star().star(), w);
        let p = FreePolynomial::monomial(FreeWord::gen(0), Scalar::gaussian(1, 1, 2, 1));
        let q = FreePolynomial::word(FreeWord::gen_star(1));
        let lhs = p.free_mul(&q).star();
        let rhs = q.star().free_mul(&p.star());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_coefficients_dropped() {
        let mut p = FreePolynomial::zero();
        p.add_term(FreeWord::gen(0), Scalar::int(2));
        p.add_term(FreeWord::gen(0), Scalar::int(-2));
        assert!(p.is_zero());
    }
}
