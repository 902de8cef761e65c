//! Algebra contexts: the involutive bialgebras the toolkit works over,
//! together with canonical forms, coproducts and counits.
//!
//! All four kinds share [`FreeWord`] monomials as the carrier; the context
//! decides which words are canonical and how products rewrite:
//!
//! * `Free` — the free *-algebra (tensor algebra) with primitive coproduct;
//! * `Enveloping` — U(g) with the PBW basis and primitive coproduct;
//! * `UnitaryGroup` — the non-commutative coefficient algebra of the unitary
//!   group, with the matrix coproduct and the unitarity reduction pass;
//! * `Azema` — the q-deformed bialgebra behind the quantum Azéma martingale.

use crate::algebra::lie::LieAlgebraSpec;
use crate::algebra::word::{FreePolynomial, FreeWord, Letter};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("generator index {0} out of range")]
    IndexOutOfRange(u32),
    #[error("degree {0} exceeds the configured cutoff {1}")]
    DegreeOverflow(usize, usize),
    #[error("functionals have mismatched degree cutoffs {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("functional not defined on monomial {0}")]
    MissingValue(String),
}

#[derive(Clone, Debug)]
pub enum AlgebraKind {
    /// Free *-algebra on `gens` generators; `starred` adds the adjoint letters.
    Free { gens: usize, starred: bool },
    /// Universal enveloping algebra of a Lie algebra, PBW ordered.
    Enveloping(LieAlgebraSpec),
    /// Coefficient algebra of the unitary group on d dimensions; letter
    /// `i*d+j` is u_{ij}, starred letters its adjoint.
    UnitaryGroup { d: usize },
    /// Generators x (0) and y (1) with yx = q xy, x*y = q y x*,
    /// Δx = x⊗y + 1⊗x, Δy = y⊗y.
    Azema { q: Scalar },
    /// p-extension B̃ = B ∐ CM of the free algebra on `gens` hermitian
    /// generators: extra idempotent hermitian letter p (index = gens) with
    /// p² = p, ε(p) = 1, Δp = p⊗p, and the flavor-dependent coproduct on
    /// generators: boolean x⊗p + p⊗x, monotone x⊗p + 1⊗x,
    /// anti-monotone x⊗1 + p⊗x.
    PExtension { gens: usize, flavor: PFlavor },
}

/// Which universal independence the p-extension coproduct encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PFlavor {
    Boolean,
    Monotone,
    AntiMonotone,
}

/// Tensor-square elements, used for coproducts.
pub type TensorPoly = BTreeMap<(FreeWord, FreeWord), Scalar>;

#[derive(Clone, Debug)]
pub struct AlgebraCtx {
    pub kind: AlgebraKind,
    /// Global filtration cutoff N; functionals are stored up to this degree.
    pub degree: usize,
}

fn tensor_add(t: &mut TensorPoly, key: (FreeWord, FreeWord), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key.clone()).or_insert_with(Scalar::zero);
    *e = &*e + &c;
    if e.is_zero() {
        t.remove(&key);
    }
}

impl AlgebraCtx {
    pub fn new(kind: AlgebraKind, degree: usize) -> Self {
        AlgebraCtx { kind, degree }
    }

    pub fn free(gens: usize, starred: bool, degree: usize) -> Self {
        AlgebraCtx::new(AlgebraKind::Free { gens, starred }, degree)
    }

    pub fn enveloping(lie: LieAlgebraSpec, degree: usize) -> Self {
        AlgebraCtx::new(AlgebraKind::Enveloping(lie), degree)
    }

    pub fn unitary_group(d: usize, degree: usize) -> Self {
        AlgebraCtx::new(AlgebraKind::UnitaryGroup { d }, degree)
    }

    pub fn azema(q: Scalar, degree: usize) -> Self {
        AlgebraCtx::new(AlgebraKind::Azema { q }, degree)
    }

    pub fn p_extension(gens: usize, flavor: PFlavor, degree: usize) -> Self {
        AlgebraCtx::new(AlgebraKind::PExtension { gens, flavor }, degree)
    }

    pub fn n_gens(&self) -> usize {
        match &self.kind {
            AlgebraKind::Free { gens, .. } => *gens,
            AlgebraKind::Enveloping(lie) => lie.dim,
            AlgebraKind::UnitaryGroup { d } => d * d,
            AlgebraKind::Azema { .. } => 2,
            AlgebraKind::PExtension { gens, .. } => gens + 1,
        }
    }

    /// Rewrite a polynomial to the canonical form of this algebra.
    pub fn normalize(&self, p: &FreePolynomial) -> FreePolynomial {
        match &self.kind {
            AlgebraKind::Free { starred: true, .. } => p.clone(),
            AlgebraKind::Free { starred: false, .. } => {
                // hermitian generators: x_i^* = x_i
                let mut out = FreePolynomial::zero();
                for (w, c) in &p.terms {
                    let unstarred = FreeWord(
                        w.0.iter()
                            .map(|l| Letter::new(l.gen))
                            .collect(),
                    );
                    out.add_term(unstarred, c.clone());
                }
                out
            }
            AlgebraKind::Enveloping(lie) => {
                let mut out = FreePolynomial::zero();
                for (w, c) in &p.terms {
                    out = out.add(&pbw_word(lie, w).scale(c));
                }
                out
            }
            AlgebraKind::UnitaryGroup { d } => unitary_reduce(*d, p),
            AlgebraKind::PExtension { gens, .. } => {
                let pg = *gens as u32;
                let mut out = FreePolynomial::zero();
                for (w, c) in &p.terms {
                    let mut letters: Vec<Letter> = Vec::with_capacity(w.len());
                    for l in &w.0 {
                        let l = Letter::new(l.gen); // all generators hermitian
                        if l.gen == pg && letters.last().map_or(false, |prev| prev.gen == pg) {
                            continue; // p·p = p
                        }
                        letters.push(l);
                    }
                    out.add_term(FreeWord(letters), c.clone());
                }
                out
            }
            AlgebraKind::Azema { q } => {
                let mut out = FreePolynomial::zero();
                for (w, c) in &p.terms {
                    out = out.add(&azema_word(q, w).scale(c));
                }
                out
            }
        }
    }

    /// Canonical product.
    pub fn mul(&self, p: &FreePolynomial, q: &FreePolynomial) -> FreePolynomial {
        self.normalize(&p.free_mul(q))
    }

    /// Canonical involution.
    pub fn star(&self, p: &FreePolynomial) -> FreePolynomial {
        self.normalize(&p.star())
    }

    /// Counit on a canonical monomial.
    pub fn counit_word(&self, w: &FreeWord) -> Scalar {
        match &self.kind {
            AlgebraKind::Free { .. } | AlgebraKind::Enveloping(_) => {
                if w.is_unit() {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
            AlgebraKind::UnitaryGroup { d } => {
                // ε(u_ij) = δ_ij
                for l in &w.0 {
                    let (i, j) = ((l.gen as usize) / d, (l.gen as usize) % d);
                    if i != j {
                        return Scalar::zero();
                    }
                }
                Scalar::one()
            }
            AlgebraKind::Azema { .. } => {
                // ε(x) = 0, ε(y) = 1
                if w.0.iter().all(|l| l.gen == 1) {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
            AlgebraKind::PExtension { gens, .. } => {
                // ε(p) = 1, ε vanishes on the other generators
                if w.0.iter().all(|l| l.gen == *gens as u32) {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
        }
    }

    pub fn counit(&self, p: &FreePolynomial) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, c) in &p.terms {
            acc += c * &self.counit_word(w);
        }
        acc
    }

    /// Coproduct of a canonical monomial; legs are canonical.
    pub fn coproduct_word(&self, w: &FreeWord) -> TensorPoly {
        let mut acc: TensorPoly = BTreeMap::new();
        tensor_add(&mut acc, (FreeWord::unit(), FreeWord::unit()), Scalar::one());
        for l in &w.0 {
            let letter_cop = self.coproduct_letter(l);
            let mut next: TensorPoly = BTreeMap::new();
            for ((a1, a2), c1) in &acc {
                for ((b1, b2), c2) in &letter_cop {
                    tensor_add(&mut next, (a1.concat(b1), a2.concat(b2)), c1 * c2);
                }
            }
            acc = next;
        }
        // normalize both legs
        let mut out: TensorPoly = BTreeMap::new();
        for ((w1, w2), c) in acc {
            let p1 = self.normalize(&FreePolynomial::word(w1));
            let p2 = self.normalize(&FreePolynomial::word(w2));
            for (u1, c1) in &p1.terms {
                for (u2, c2) in &p2.terms {
                    tensor_add(&mut out, (u1.clone(), u2.clone()), &(&c * c1) * c2);
                }
            }
        }
        out
    }

    fn coproduct_letter(&self, l: &Letter) -> TensorPoly {
        let mut t: TensorPoly = BTreeMap::new();
        let lw = FreeWord(vec![*l]);
        match &self.kind {
            AlgebraKind::Free { .. } | AlgebraKind::Enveloping(_) => {
                tensor_add(&mut t, (lw.clone(), FreeWord::unit()), Scalar::one());
                tensor_add(&mut t, (FreeWord::unit(), lw), Scalar::one());
            }
            AlgebraKind::UnitaryGroup { d } => {
                let d = *d;
                let (i, j) = ((l.gen as usize) / d, (l.gen as usize) % d);
                for k in 0..d {
                    let a = Letter {
                        gen: (i * d + k) as u32,
                        star: l.star,
                    };
                    let b = Letter {
                        gen: (k * d + j) as u32,
                        star: l.star,
                    };
                    tensor_add(
                        &mut t,
                        (FreeWord(vec![a]), FreeWord(vec![b])),
                        Scalar::one(),
                    );
                }
            }
            AlgebraKind::PExtension { gens, flavor } => {
                let p_letter = FreeWord(vec![Letter::new(*gens as u32)]);
                let lw_single = FreeWord(vec![Letter::new(l.gen)]);
                if l.gen == *gens as u32 {
                    tensor_add(&mut t, (p_letter.clone(), p_letter), Scalar::one());
                } else {
                    let (left, right) = match flavor {
                        PFlavor::Boolean => (p_letter.clone(), p_letter),
                        PFlavor::Monotone => (FreeWord::unit(), p_letter),
                        PFlavor::AntiMonotone => (p_letter, FreeWord::unit()),
                    };
                    tensor_add(&mut t, (lw_single.clone(), right), Scalar::one());
                    tensor_add(&mut t, (left, lw_single), Scalar::one());
                }
            }
            AlgebraKind::Azema { .. } => {
                let y = Letter {
                    gen: 1,
                    star: l.star,
                };
                if l.gen == 1 {
                    tensor_add(
                        &mut t,
                        (FreeWord(vec![*l]), FreeWord(vec![y])),
                        Scalar::one(),
                    );
                } else {
                    // Δ(x) = x⊗y + 1⊗x and the starred version
                    tensor_add(
                        &mut t,
                        (FreeWord(vec![*l]), FreeWord(vec![y])),
                        Scalar::one(),
                    );
                    tensor_add(&mut t, (FreeWord::unit(), FreeWord(vec![*l])), Scalar::one());
                }
            }
        }
        t
    }

    pub fn coproduct(&self, p: &FreePolynomial) -> TensorPoly {
        let mut out: TensorPoly = BTreeMap::new();
        for (w, c) in &p.terms {
            for (key, v) in self.coproduct_word(w) {
                tensor_add(&mut out, key, &v * c);
            }
        }
        out
    }

    /// All canonical monomials of degree ≤ `max_deg`, unit first,
    /// ordered by (degree, word order).
    pub fn basis(&self, max_deg: usize) -> Vec<FreeWord> {
        let letters = self.letters();
        let mut out = vec![FreeWord::unit()];
        let mut layer = vec![FreeWord::unit()];
        for _ in 0..max_deg {
            let mut next = Vec::new();
            for w in &layer {
                for l in &letters {
                    let cand = FreeWord(
                        w.0.iter()
                            .cloned()
                            .chain(std::iter::once(*l))
                            .collect(),
                    );
                    if self.is_canonical(&cand) {
                        next.push(cand);
                    }
                }
            }
            next.sort();
            next.dedup();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn letters(&self) -> Vec<Letter> {
        match &self.kind {
            AlgebraKind::Free { gens, starred } => {
                let mut v: Vec<Letter> = (0..*gens as u32).map(Letter::new).collect();
                if *starred {
                    v.extend((0..*gens as u32).map(Letter::starred));
                }
                v
            }
            AlgebraKind::Enveloping(lie) => (0..lie.dim as u32).map(Letter::new).collect(),
            AlgebraKind::UnitaryGroup { d } => {
                let n = (d * d) as u32;
                (0..n)
                    .map(Letter::new)
                    .chain((0..n).map(Letter::starred))
                    .collect()
            }
            AlgebraKind::Azema { .. } => vec![
                Letter::new(0),
                Letter::new(1),
                Letter::starred(0),
                Letter::starred(1),
            ],
            AlgebraKind::PExtension { gens, .. } => {
                (0..=*gens as u32).map(Letter::new).collect()
            }
        }
    }

    fn is_canonical(&self, w: &FreeWord) -> bool {
        match &self.kind {
            AlgebraKind::Free { .. } | AlgebraKind::UnitaryGroup { .. } => true,
            AlgebraKind::Enveloping(_) => {
                w.0.iter().all(|l| !l.star)
                    && w.0.windows(2).all(|p| p[0].gen <= p[1].gen)
            }
            AlgebraKind::Azema { .. } => {
                w.0.windows(2).all(|p| !azema_pattern(&p[0], &p[1]).is_some())
            }
            AlgebraKind::PExtension { gens, .. } => {
                let pg = *gens as u32;
                w.0.iter().all(|l| !l.star)
                    && w.0.windows(2).all(|q| !(q[0].gen == pg && q[1].gen == pg))
            }
        }
    }
}

/// PBW normal ordering of one free word (stars resolved first).
fn pbw_word(lie: &LieAlgebraSpec, w: &FreeWord) -> FreePolynomial {
    // resolve stars: X_i^* = Σ_j s_ij X_j (anti-linear; coefficients stored)
    let mut poly = FreePolynomial::one();
    for l in &w.0 {
        let gen_poly = if l.star {
            let mut p = FreePolynomial::zero();
            for (j, c) in lie.star_gen(l.gen as usize).iter().enumerate() {
                p.add_term(FreeWord::gen(j as u32), c.clone());
            }
            p
        } else {
            FreePolynomial::word(FreeWord::gen(l.gen))
        };
        poly = poly.free_mul(&gen_poly);
    }
    // bubble-sort letters into non-decreasing order, inserting brackets
    let mut result = FreePolynomial::zero();
    let mut stack: Vec<(FreeWord, Scalar)> =
        poly.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((w, c)) = stack.pop() {
        if c.is_zero() {
            continue;
        }
        match w.0.windows(2).position(|p| p[0].gen > p[1].gen) {
            None => result.add_term(w, c),
            Some(pos) => {
                let i = w.0[pos].gen as usize;
                let j = w.0[pos + 1].gen as usize;
                // X_i X_j = X_j X_i + [X_i, X_j]
                let mut swapped = w.0.clone();
                swapped.swap(pos, pos + 1);
                stack.push((FreeWord(swapped), c.clone()));
                let bracket = lie.bracket(i, j);
                for (k, bc) in bracket.iter().enumerate() {
                    if bc.is_zero() {
                        continue;
                    }
                    let mut shorter: Vec<Letter> = w.0[..pos].to_vec();
                    shorter.push(Letter::new(k as u32));
                    shorter.extend_from_slice(&w.0[pos + 2..]);
                    stack.push((FreeWord(shorter), &c * bc));
                }
            }
        }
    }
    result
}

/// Azéma rewrite pattern: returns the replacement coefficient when the
/// adjacent pair (a, b) rewrites to coefficient × (b', a') swapped.
fn azema_pattern(a: &Letter, b: &Letter) -> Option<AzemaSwap> {
    match ((a.gen, a.star), (b.gen, b.star)) {
        // y x -> q x y
        ((1, false), (0, false)) => Some(AzemaSwap::Q),
        // y* x -> conj(q) x y*
        ((1, true), (0, false)) => Some(AzemaSwap::QConj),
        // x* y -> q y x*
        ((0, true), (1, false)) => Some(AzemaSwap::Q),
        // x* y* -> conj(q) y* x*
        ((0, true), (1, true)) => Some(AzemaSwap::QConj),
        // y normal (needed for Δ to be multiplicative): y* y -> y y*
        ((1, true), (1, false)) => Some(AzemaSwap::One),
        _ => None,
    }
}

enum AzemaSwap {
    Q,
    QConj,
    One,
}

fn azema_word(q: &Scalar, w: &FreeWord) -> FreePolynomial {
    let mut result = FreePolynomial::zero();
    let mut stack = vec![(w.clone(), Scalar::one())];
    while let Some((w, c)) = stack.pop() {
        let pos = w
            .0
            .windows(2)
            .position(|p| azema_pattern(&p[0], &p[1]).is_some());
        match pos {
            None => result.add_term(w, c),
            Some(pos) => {
                let coeff = match azema_pattern(&w.0[pos], &w.0[pos + 1]).unwrap() {
                    AzemaSwap::Q => q.clone(),
                    AzemaSwap::QConj => q.conj(),
                    AzemaSwap::One => Scalar::one(),
                };
                let mut swapped = w.0.clone();
                swapped.swap(pos, pos + 1);
                stack.push((FreeWord(swapped), &c * &coeff));
            }
        }
    }
    result
}

/// Unitarity reduction pass for the coefficient algebra of the unitary
/// group: complete sums Σ_j u_{kj}u*_{lj} and Σ_j u*_{jk}u_{jl} collapse to
/// δ_{kl}, scanning adjacent positions left-innermost first.
fn unitary_reduce(d: usize, p: &FreePolynomial) -> FreePolynomial {
    let mut cur = p.clone();
    loop {
        match unitary_reduce_step(d, &cur) {
            Some(next) => cur = next,
            None => return cur,
        }
    }
}

fn unitary_reduce_step(d: usize, p: &FreePolynomial) -> Option<FreePolynomial> {
    let words: Vec<(FreeWord, Scalar)> =
        p.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    for (w, c) in &words {
        for pos in 0..w.len().saturating_sub(1) {
            let a = w.0[pos];
            let b = w.0[pos + 1];
            let (ai, aj) = ((a.gen as usize) / d, (a.gen as usize) % d);
            let (bi, bj) = ((b.gen as usize) / d, (b.gen as usize) % d);
            // pattern u_{kj} u*_{lj}: same second index, star pattern (false, true)
            let row_pattern = !a.star && b.star && aj == bj;
            // pattern u*_{jk} u_{jl}: same first index, star pattern (true, false)
            let col_pattern = a.star && !b.star && ai == bi;
            if !row_pattern && !col_pattern {
                continue;
            }
            // try to collect the full sum over the contracted index
            let mut members = Vec::with_capacity(d);
            let mut complete = true;
            for s in 0..d {
                let (la, lb) = if row_pattern {
                    (
                        Letter::new((ai * d + s) as u32),
                        Letter::starred((bi * d + s) as u32),
                    )
                } else {
                    (
                        Letter::starred((s * d + aj) as u32),
                        Letter::new((s * d + bj) as u32),
                    )
                };
                let mut cand = w.0.clone();
                cand[pos] = la;
                cand[pos + 1] = lb;
                let cand = FreeWord(cand);
                if p.coefficient(&cand).approx_eq(c, 1e-12 * (1.0 + c.abs())) {
                    members.push(cand);
                } else {
                    complete = false;
                    break;
                }
            }
            if !complete {
                continue;
            }
            // replace the d member terms by δ · prefix·suffix
            let mut out = p.clone();
            for m in &members {
                let coeff = out.coefficient(m);
                out.add_term(m.clone(), -coeff);
            }
            let delta = if row_pattern { ai == bi } else { aj == bj };
            if delta {
                let mut reduced: Vec<Letter> = w.0[..pos].to_vec();
                reduced.extend_from_slice(&w.0[pos + 2..]);
                out.add_term(FreeWord(reduced), c.clone());
            }
            return Some(out);
        }
    }
    None
}
