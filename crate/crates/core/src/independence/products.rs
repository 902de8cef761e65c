//! Mixed words on free products and the five universal product formulas,
//! with their GNS representations.

use crate::algebra::{AlgebraCtx, AlgebraError, FreePolynomial, FreeWord, Functional};
use crate::linalg::{self, CMat, CVec};
use ndarray::Array2;
use num_complex::Complex64;
use crate::scalar::Scalar;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductKind {
    TensorUniversal,
    Free,
    Boolean,
    Monotone,
    AntiMonotone,
}

impl ProductKind {
    pub fn all() -> [ProductKind; 5] {
        [
            ProductKind::TensorUniversal,
            ProductKind::Free,
            ProductKind::Boolean,
            ProductKind::Monotone,
            ProductKind::AntiMonotone,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProductKind::TensorUniversal => "tensor",
            ProductKind::Free => "free",
            ProductKind::Boolean => "boolean",
            ProductKind::Monotone => "monotone",
            ProductKind::AntiMonotone => "anti-monotone",
        }
    }
}

/// A word in a free product: letters carry the algebra label and a monomial
/// of that algebra; adjacent letters with equal labels are merged at
/// construction (alternation).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedWord(pub Vec<(usize, FreeWord)>);

impl MixedWord {
    pub fn new(letters: Vec<(usize, FreeWord)>) -> Self {
        let mut merged: Vec<(usize, FreeWord)> = Vec::with_capacity(letters.len());
        for (label, mono) in letters {
            if mono.is_unit() {
                continue;
            }
            match merged.last_mut() {
                Some((last, acc)) if *last == label => {
                    *acc = acc.concat(&mono);
                }
                _ => merged.push((label, mono)),
            }
        }
        MixedWord(merged)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A moment table on one leg of the free product, with an optional concrete
/// realization for positivity tests.
#[derive(Clone, Debug)]
pub struct StateSpec {
    pub ctx: AlgebraCtx,
    pub moments: Functional,
    pub realization: Option<GnsRealization>,
}

/// Concrete realization: generator matrices and a unit cyclic vector.
#[derive(Clone, Debug)]
pub struct GnsRealization {
    pub ops: Vec<CMat>,
    pub cyclic: CVec,
}

impl GnsRealization {
    pub fn dim(&self) -> usize {
        self.cyclic.len()
    }

    /// π(word) as a matrix.
    pub fn op_word(&self, w: &FreeWord) -> CMat {
        let n = self.dim();
        let mut m = linalg::identity(n);
        for l in &w.0 {
            let g = &self.ops[l.gen as usize];
            let g = if l.star { linalg::adjoint(g) } else { g.clone() };
            m = m.dot(&g);
        }
        m
    }

    /// ⟨ξ, π(w) ξ⟩.
    pub fn moment(&self, w: &FreeWord) -> Complex64 {
        let v = self.op_word(w).dot(&self.cyclic);
        self.cyclic.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

impl StateSpec {
    /// Build the moment table from a concrete realization.
    pub fn from_realization(ctx: AlgebraCtx, real: GnsRealization, degree: usize) -> Self {
        let mut moments = Functional::zero(degree);
        moments.unital = true;
        for w in ctx.basis(degree) {
            moments.set(w.clone(), Scalar::from_c64(real.moment(&w)));
        }
        StateSpec {
            ctx,
            moments,
            realization: Some(real),
        }
    }

    pub fn value(&self, w: &FreeWord) -> Result<Scalar, AlgebraError> {
        if w.is_unit() {
            return Ok(Scalar::one());
        }
        self.moments.value(w)
    }
}

/// Evaluate the `kind`-product of φ1, φ2 on a mixed word.
pub fn product_functional(
    kind: ProductKind,
    phi1: &StateSpec,
    phi2: &StateSpec,
    w: &MixedWord,
) -> Result<Scalar, AlgebraError> {
    let mut memo = HashMap::new();
    product_eval(kind, [phi1, phi2], w, &mut memo)
}

fn leg_value(states: [&StateSpec; 2], label: usize, w: &FreeWord) -> Result<Scalar, AlgebraError> {
    states[label - 1].value(w)
}

fn product_eval(
    kind: ProductKind,
    states: [&StateSpec; 2],
    w: &MixedWord,
    memo: &mut HashMap<MixedWord, Scalar>,
) -> Result<Scalar, AlgebraError> {
    if w.is_empty() {
        return Ok(Scalar::one());
    }
    if w.len() == 1 {
        let (label, mono) = &w.0[0];
        return leg_value(states, *label, mono);
    }
    match kind {
        ProductKind::Boolean => {
            let mut acc = Scalar::one();
            for (label, mono) in &w.0 {
                acc = &acc * &leg_value(states, *label, mono)?;
            }
            Ok(acc)
        }
        ProductKind::TensorUniversal => {
            let mut w1 = FreeWord::unit();
            let mut w2 = FreeWord::unit();
            for (label, mono) in &w.0 {
                if *label == 1 {
                    w1 = w1.concat(mono);
                } else {
                    w2 = w2.concat(mono);
                }
            }
            Ok(&leg_value(states, 1, &w1)? * &leg_value(states, 2, &w2)?)
        }
        ProductKind::Monotone => {
            // φ1(→∏_{ε=1} a)·∏_{ε=2} φ2(a)
            let mut w1 = FreeWord::unit();
            let mut acc = Scalar::one();
            for (label, mono) in &w.0 {
                if *label == 1 {
                    w1 = w1.concat(mono);
                } else {
                    acc = &acc * &leg_value(states, 2, mono)?;
                }
            }
            Ok(&acc * &leg_value(states, 1, &w1)?)
        }
        ProductKind::AntiMonotone => {
            let mut w2 = FreeWord::unit();
            let mut acc = Scalar::one();
            for (label, mono) in &w.0 {
                if *label == 2 {
                    w2 = w2.concat(mono);
                } else {
                    acc = &acc * &leg_value(states, 1, mono)?;
                }
            }
            Ok(&acc * &leg_value(states, 2, &w2)?)
        }
        ProductKind::Free => {
            if let Some(v) = memo.get(w) {
                return Ok(v.clone());
            }
            // (φ1*φ2)(a_1…a_m) = Σ_{I ⊊ {1..m}} (-1)^{m-#I+1}
            //                    (φ1*φ2)(∏_{k∈I} a_k) ∏_{k∉I} φ_{ε_k}(a_k)
            let m = w.len();
            let mut acc = Scalar::zero();
            for mask in 0..(1u32 << m) - 1 {
                let mut sub = Vec::new();
                let mut factor = Scalar::one();
                for (k, letter) in w.0.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        sub.push(letter.clone());
                    } else {
                        factor = &factor * &leg_value(states, letter.0, &letter.1)?;
                    }
                }
                if factor.is_zero() {
                    continue;
                }
                let sub_word = MixedWord::new(sub);
                let inner = product_eval(kind, states, &sub_word, memo)?;
                let size = mask.count_ones() as usize;
                let sign = if (m - size + 1) % 2 == 0 {
                    Scalar::one()
                } else {
                    Scalar::int(-1)
                };
                acc += &(&sign * &inner) * &factor;
            }
            memo.insert(w.clone(), acc.clone());
            Ok(acc)
        }
    }
}

/// GNS representation of the boolean/monotone/anti-monotone product on
/// H1 ⊗ H2 with cyclic vector ξ1 ⊗ ξ2. Returns the generator matrices for
/// leg-1 generators followed by leg-2 generators.
pub fn gns_product_rep(
    kind: ProductKind,
    rep1: &GnsRealization,
    rep2: &GnsRealization,
) -> GnsRealization {
    let n1 = rep1.dim();
    let n2 = rep2.dim();
    let p1 = projector(&rep1.cyclic);
    let p2 = projector(&rep2.cyclic);
    let id1 = linalg::identity(n1);
    let id2 = linalg::identity(n2);
    let (r1, r2): (CMat, CMat) = match kind {
        ProductKind::Boolean => (p1, p2),
        ProductKind::Monotone => (id1.clone(), p2),
        ProductKind::AntiMonotone => (p1, id2.clone()),
        ProductKind::TensorUniversal | ProductKind::Free => (id1.clone(), id2.clone()),
    };
    // leg 1 generators act as π1(a) ⊗ r2; leg 2 as r1 ⊗ π2(a)
    let mut ops = Vec::new();
    for g in &rep1.ops {
        ops.push(linalg::kron(g, &r2));
    }
    for g in &rep2.ops {
        ops.push(linalg::kron(&r1, g));
    }
    let mut cyclic = ndarray::Array1::zeros(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            cyclic[i * n2 + j] = rep1.cyclic[i] * rep2.cyclic[j];
        }
    }
    GnsRealization { ops, cyclic }
}

fn projector(v: &CVec) -> CMat {
    let n = v.len();
    Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj())
}

/// Vacuum expectation of a mixed word in the GNS product representation,
/// with leg-2 generator indices offset by the leg-1 generator count.
pub fn gns_mixed_moment(
    rep: &GnsRealization,
    gens_leg1: usize,
    w: &MixedWord,
) -> Complex64 {
    let mut full = FreeWord::unit();
    for (label, mono) in &w.0 {
        let shifted = FreeWord(
            mono.0
                .iter()
                .map(|l| crate::algebra::Letter {
                    gen: if *label == 1 {
                        l.gen
                    } else {
                        l.gen + gens_leg1 as u32
                    },
                    star: l.star,
                })
                .collect(),
        );
        full = full.concat(&shifted);
    }
    rep.moment(&full)
}
