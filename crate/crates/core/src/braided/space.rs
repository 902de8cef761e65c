//! The free braided *-space V(tR): braiding on words, the braided tensor
//! product, primitive braided coproduct and its convolution exponential,
//! and the FRT representation matrices.

use super::rmatrix::{BraidedError, RMatrix};
use crate::algebra::{FreePolynomial, FreeWord, Letter};
use crate::scalar::Scalar;
use crate::smat::SMat;
use std::collections::BTreeMap;

/// Letters: `Letter::new(i)` is x_i, `Letter::starred(i)` is v^i = (x_i)*.
#[derive(Clone, Debug)]
pub struct BraidedSpaceSpec {
    pub r: RMatrix,
    pub t: Scalar,
    pub r_inv: RMatrix,
    pub r_tilde: RMatrix,
}

pub type Tensor2 = BTreeMap<(FreeWord, FreeWord), Scalar>;

fn tensor_add(t: &mut Tensor2, key: (FreeWord, FreeWord), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key.clone()).or_insert_with(Scalar::zero);
    *e = &*e + &c;
    if e.is_zero() {
        t.remove(&key);
    }
}

impl BraidedSpaceSpec {
    pub fn new(r: RMatrix, t: Scalar) -> Result<Self, BraidedError> {
        let r_inv = r.inverse()?;
        let r_tilde = r.second_inverse()?;
        Ok(BraidedSpaceSpec {
            r,
            t,
            r_inv,
            r_tilde,
        })
    }

    pub fn n(&self) -> usize {
        self.r.n
    }

    /// Braiding on a pair of generator letters:
    ///  Ψ(x_i⊗x_j) = t·R^k_i^l_j x_l⊗x_k,
    ///  Ψ(x_i⊗v^j) = t·R^j_l^k_i v^l⊗x_k,
    ///  Ψ(v^i⊗x_j) = t⁻¹·R̃^i_k^l_j x_l⊗v^k,
    ///  Ψ(v^i⊗v^j) = t⁻¹·(R⁻¹)^j_l^i_k v^l⊗v^k.
    pub fn psi_letters(&self, a: &Letter, b: &Letter) -> Tensor2 {
        let n = self.n();
        let (i, j) = (a.gen as usize, b.gen as usize);
        let mut out = Tensor2::new();
        let t_inv = self.t.inv();
        match (a.star, b.star) {
            (false, false) => {
                for k in 0..n {
                    for l in 0..n {
                        let c = &self.t * self.r.get(k, i, l, j);
                        tensor_add(
                            &mut out,
                            (FreeWord::gen(l as u32), FreeWord::gen(k as u32)),
                            c,
                        );
                    }
                }
            }
            (false, true) => {
                for k in 0..n {
                    for l in 0..n {
                        let c = &self.t * self.r.get(j, l, k, i);
                        tensor_add(
                            &mut out,
                            (FreeWord::gen_star(l as u32), FreeWord::gen(k as u32)),
                            c,
                        );
                    }
                }
            }
            (true, false) => {
                for k in 0..n {
                    for l in 0..n {
                        let c = &t_inv * self.r_tilde.get(i, k, l, j);
                        tensor_add(
                            &mut out,
                            (FreeWord::gen(l as u32), FreeWord::gen_star(k as u32)),
                            c,
                        );
                    }
                }
            }
            (true, true) => {
                for k in 0..n {
                    for l in 0..n {
                        let c = &t_inv * self.r_inv.get(j, l, i, k);
                        tensor_add(
                            &mut out,
                            (FreeWord::gen_star(l as u32), FreeWord::gen_star(k as u32)),
                            c,
                        );
                    }
                }
            }
        }
        out
    }

    /// Braiding Ψ(u ⊗ w) of arbitrary words via the hexagon extensions.
    pub fn psi_words(&self, u: &FreeWord, w: &FreeWord) -> Tensor2 {
        let mut out = Tensor2::new();
        if u.is_unit() {
            tensor_add(&mut out, (w.clone(), FreeWord::unit()), Scalar::one());
            return out;
        }
        if w.is_unit() {
            tensor_add(&mut out, (FreeWord::unit(), u.clone()), Scalar::one());
            return out;
        }
        if u.len() == 1 && w.len() == 1 {
            return self.psi_letters(&u.0[0], &w.0[0]);
        }
        if u.len() > 1 {
            // Ψ(u1·u2 ⊗ w) = (Ψ ⊗ id)(u1 ⊗ Ψ(u2 ⊗ w))
            let u1 = FreeWord(u.0[..1].to_vec());
            let u2 = FreeWord(u.0[1..].to_vec());
            for ((w1, rest2), c) in self.psi_words(&u2, w) {
                for ((w2, rest1), c2) in self.psi_words(&u1, &w1) {
                    tensor_add(&mut out, (w2, rest1.concat(&rest2)), &c * &c2);
                }
            }
            return out;
        }
        // u single letter, w = w1·w2: Ψ(u ⊗ w1·w2) = (id ⊗ Ψ)(Ψ(u⊗w1) ⊗ w2)
        let w1 = FreeWord(w.0[..1].to_vec());
        let w2 = FreeWord(w.0[1..].to_vec());
        for ((a, b), c) in self.psi_words(u, &w1) {
            for ((a2, b2), c2) in self.psi_words(&b, &w2) {
                tensor_add(&mut out, (a.concat(&a2), b2), &c * &c2);
            }
        }
        out
    }

    /// Ψ applied to a tensor (linear extension).
    pub fn psi_tensor(&self, t: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::new();
        for ((u, w), c) in t {
            for (key, c2) in self.psi_words(u, w) {
                tensor_add(&mut out, key, c * &c2);
            }
        }
        out
    }

    /// Multiplication in the braided tensor square:
    /// (a⊗b)(c⊗d) = Σ a·Ψ(b⊗c)_1 ⊗ Ψ(b⊗c)_2·d.
    pub fn tensor_mul(&self, s: &Tensor2, t: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::new();
        for ((a, b), c1) in s {
            for ((cw, d), c2) in t {
                for ((b1, c3), cc) in self.psi_words(b, cw) {
                    tensor_add(
                        &mut out,
                        (a.concat(&b1), c3.concat(d)),
                        &(c1 * c2) * &cc,
                    );
                }
            }
        }
        out
    }

    /// Braided primitive coproduct of a word (multiplicative through the
    /// braided tensor product).
    pub fn coproduct(&self, w: &FreeWord) -> Tensor2 {
        let mut acc = Tensor2::new();
        tensor_add(&mut acc, (FreeWord::unit(), FreeWord::unit()), Scalar::one());
        for l in &w.0 {
            let mut letter = Tensor2::new();
            tensor_add(
                &mut letter,
                (FreeWord(vec![*l]), FreeWord::unit()),
                Scalar::one(),
            );
            tensor_add(
                &mut letter,
                (FreeWord::unit(), FreeWord(vec![*l])),
                Scalar::one(),
            );
            acc = self.tensor_mul(&acc, &letter);
        }
        acc
    }

    /// Convolution φ⋆ψ through the braided coproduct.
    pub fn convolve(
        &self,
        phi: &BTreeMap<FreeWord, Scalar>,
        psi: &BTreeMap<FreeWord, Scalar>,
        w: &FreeWord,
    ) -> Scalar {
        // missing entries count as zero: functionals store all their values
        let mut acc = Scalar::zero();
        for ((w1, w2), c) in self.coproduct(w) {
            let a = phi.get(&w1).cloned().unwrap_or_else(Scalar::zero);
            if a.is_zero() {
                continue;
            }
            let b = psi.get(&w2).cloned().unwrap_or_else(Scalar::zero);
            acc += &(&a * &b) * &c;
        }
        acc
    }

    /// exp_⋆(time·L) on all words of degree ≤ degree; exact for exact input
    /// (the reduced coproduct is nilpotent on the grading).
    pub fn conv_exp(
        &self,
        gen: &BTreeMap<FreeWord, Scalar>,
        time: &Scalar,
        degree: usize,
    ) -> BTreeMap<FreeWord, Scalar> {
        let words = self.words(degree);
        let mut acc: BTreeMap<FreeWord, Scalar> = BTreeMap::new();
        for w in &words {
            acc.insert(w.clone(), unit_value(w));
        }
        let mut power: BTreeMap<FreeWord, Scalar> = acc.clone();
        let mut factorial = Scalar::one();
        for k in 1..=degree {
            let mut next: BTreeMap<FreeWord, Scalar> = BTreeMap::new();
            for w in &words {
                next.insert(w.clone(), self.convolve(&power, gen, w));
            }
            power = next;
            factorial = &factorial * &Scalar::int(k as i64);
            let coeff = &time.pow(k as u32) / &factorial;
            for w in &words {
                let add = &power[w] * &coeff;
                let e = acc.get_mut(w).unwrap();
                *e = &*e + &add;
            }
        }
        acc
    }

    /// All words in x_i, v^i of length ≤ degree.
    pub fn words(&self, degree: usize) -> Vec<FreeWord> {
        let n = self.n();
        let letters: Vec<Letter> = (0..n as u32)
            .map(Letter::new)
            .chain((0..n as u32).map(Letter::starred))
            .collect();
        let mut out = vec![FreeWord::unit()];
        let mut layer = vec![FreeWord::unit()];
        for _ in 0..degree {
            let mut next = Vec::new();
            for w in &layer {
                for l in &letters {
                    next.push(FreeWord(
                        w.0.iter().cloned().chain(std::iter::once(*l)).collect(),
                    ));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// FRT representation on C^n: ρ(a^j_l)v^i = tR^i_k^j_l v^k (matrix
    /// entry [k][i]).
    pub fn rho_a(&self, j: usize, l: usize) -> SMat {
        let n = self.n();
        SMat::from_fn(n, n, |k, i| &self.t * self.r.get(i, k, j, l))
    }

    /// ρ(b^j_l)v^i = tR^j_l^i_k v^k.
    pub fn rho_b(&self, j: usize, l: usize) -> SMat {
        let n = self.n();
        SMat::from_fn(n, n, |k, i| &self.t * self.r.get(j, l, i, k))
    }

    /// FRT exchange relation residual:
    /// R^i_p^k_q ρ(a^p_j)ρ(a^q_l) - ρ(a^k_q)ρ(a^i_p)R^p_j^q_l.
    pub fn frt_relation_residual(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut lhs = SMat::zeros(n, n);
                        let mut rhs = SMat::zeros(n, n);
                        for p in 0..n {
                            for q in 0..n {
                                lhs = lhs.add(
                                    &self
                                        .rho_a(p, j)
                                        .matmul(&self.rho_a(q, l))
                                        .scale(self.r.get(i, p, k, q)),
                                );
                                rhs = rhs.add(
                                    &self
                                        .rho_a(k, q)
                                        .matmul(&self.rho_a(i, p))
                                        .scale(self.r.get(p, j, q, l)),
                                );
                            }
                        }
                        worst = worst.max(lhs.sub(&rhs).max_abs());
                    }
                }
            }
        }
        worst
    }
}

fn unit_value(w: &FreeWord) -> Scalar {
    if w.is_unit() {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}
