//! Realization of Lévy processes on the truncated symmetric Fock space:
//! j_{st}(X) = Λ_{st}(ρ(X)) + A*_{st}(η(X)) + A_{st}(η(X*)) + L(X)(t-s).

use super::space::{FockError, FockSpace, StepFn};
use crate::algebra::{conv_exp, FreePolynomial, FreeWord, Functional};
use crate::linalg::{self, CMat, CVec};
use crate::scalar::Scalar;
use crate::schurmann::SchurmannTriple;
use crate::smat::inner;
use ndarray::Array1;
use num_complex::Complex64;

/// A Lévy process increment realized on a truncated Fock space.
pub struct Realized<'a> {
    pub space: &'a FockSpace,
    pub triple: &'a SchurmannTriple,
    pub s: f64,
    pub t: f64,
    bins: std::ops::Range<usize>,
}

/// Coefficient data of one realized generator letter.
struct LetterOp {
    f: CMat,
    u: CVec,
    v: CVec,
    tau: Complex64,
}

/// Realize the process of a Schürmann triple on primitively generated
/// contexts. The Fock multiplicity must match the triple space dimension.
pub fn realize_process<'a>(
    triple: &'a SchurmannTriple,
    space: &'a FockSpace,
    s: f64,
    t: f64,
) -> Result<Realized<'a>, FockError> {
    if space.multiplicity != triple.dim {
        return Err(FockError::MultiplicityMismatch(triple.dim, space.multiplicity));
    }
    let bins = space.bin_range(s, t)?;
    Ok(Realized {
        space,
        triple,
        s,
        t,
        bins,
    })
}

impl<'a> Realized<'a> {
    fn letter_op(&self, l: &crate::algebra::Letter) -> LetterOp {
        let f = self.triple.rho_letter_orthonormal(l);
        let u = Array1::from_vec(self.triple.eta_letter_orthonormal(l));
        let lw = FreePolynomial::word(FreeWord(vec![*l]));
        let star = self.triple.ctx.star(&lw);
        let v = Array1::from_vec(self.triple.eta_poly_orthonormal(&star));
        let tau = self.triple.gen_letter(l).to_c64();
        LetterOp { f, u, v, tau }
    }

    /// Apply j_{st}(letter) to a state vector (matrix-free).
    fn apply_letter(&self, op: &LetterOp, vec: &CVec) -> CVec {
        let space = self.space;
        let d = space.multiplicity;
        let mut out = vec.mapv(|z| z * (op.tau * Complex64::new(self.t - self.s, 0.0)));
        // conservation Σ_{b} Σ_{c,c'} F_{cc'} a†_{b,c} a_{b,c'}
        for b in self.bins.clone() {
            for cp in 0..d {
                let lower = space.apply_annihilation_mode(space.mode(b, cp), vec);
                for c in 0..d {
                    if op.f[(c, cp)].norm_sqr() == 0.0 {
                        continue;
                    }
                    let raised = space.apply_creation_mode(space.mode(b, c), &lower);
                    out = out + raised.mapv(|z| z * op.f[(c, cp)]);
                }
            }
            let sdt = space.bin_length(b).sqrt();
            for c in 0..d {
                if op.u[c].norm_sqr() != 0.0 {
                    let raised = space.apply_creation_mode(space.mode(b, c), vec);
                    out = out + raised.mapv(|z| z * (op.u[c] * sdt));
                }
                if op.v[c].norm_sqr() != 0.0 {
                    let lowered = space.apply_annihilation_mode(space.mode(b, c), vec);
                    out = out + lowered.mapv(|z| z * (op.v[c].conj() * sdt));
                }
            }
        }
        out
    }

    /// j_{st}(p) applied to a vector, p a canonical polynomial.
    pub fn apply(&self, p: &FreePolynomial, vec: &CVec) -> CVec {
        let p = self.triple.ctx.normalize(p);
        let mut out = Array1::zeros(self.space.dim);
        for (w, c) in &p.terms {
            let mut cur = vec.clone();
            for l in w.0.iter().rev() {
                cur = self.apply_letter(&self.letter_op(l), &cur);
            }
            out = out + cur.mapv(|z| z * c.to_c64());
        }
        out
    }

    /// Dense operator matrix of j_{st}(p).
    pub fn op_dense(&self, p: &FreePolynomial) -> CMat {
        let mut m = ndarray::Array2::zeros((self.space.dim, self.space.dim));
        for j in 0..self.space.dim {
            let mut e = Array1::zeros(self.space.dim);
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.apply(p, &e);
            for i in 0..self.space.dim {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    /// Vacuum moments ⟨Ω, j_{st}(y)^k Ω⟩ for k = 1..n.
    pub fn vacuum_moments(&self, y: &FreePolynomial, n: usize) -> Vec<Complex64> {
        let omega = self.space.vacuum();
        let mut cur = omega.clone();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            cur = self.apply(y, &cur);
            let m: Complex64 = omega.iter().zip(cur.iter()).map(|(a, b)| a.conj() * b).sum();
            out.push(m);
        }
        out
    }

    /// ⟨E(k·1_{[0,T)}), j_{st}(b)Ω⟩ computed on the Fock space.
    pub fn exp_vector_matrix_element(
        &self,
        k: &CVec,
        b: &FreePolynomial,
    ) -> Result<Complex64, FockError> {
        let t_end = *self.space.grid.last().unwrap();
        let f = StepFn::indicator(self.space, 0.0, t_end, k)?;
        let ek = self.space.exp_vector(&f);
        let jb = self.apply(b, &self.space.vacuum());
        Ok(ek.iter().zip(jb.iter()).map(|(a, c)| a.conj() * c).sum())
    }
}

/// The convolution-exponential side of the exponential-vector matrix
/// element: exp_⋆(t-s)(⟨k, η(·)⟩ + L(·)) evaluated at b.
pub fn exp_vector_matrix_element_algebraic(
    triple: &SchurmannTriple,
    k: &[Scalar],
    b: &FreePolynomial,
    t: &Scalar,
    degree: usize,
) -> Result<Scalar, crate::algebra::AlgebraError> {
    let ctx = &triple.ctx;
    let psi = eta_pairing_functional(triple, k, degree);
    let phi = conv_exp(ctx, &psi, t)?;
    phi.eval_in(ctx, b)
}

/// The functional u ↦ ⟨k, η(u)⟩ + L(u) on monomials up to the degree cutoff.
fn eta_pairing_functional(triple: &SchurmannTriple, k: &[Scalar], degree: usize) -> Functional {
    let ctx = &triple.ctx;
    let kvec = crate::smat::SVec(k.to_vec());
    let mut f = Functional::zero(degree);
    for w in ctx.basis(degree) {
        if w.is_unit() {
            continue;
        }
        let eta = triple.eta_word(&w);
        let val = &inner(Some(triple.gram()), &kvec, &eta) + &triple.gen_word(&w);
        f.set(w, val);
    }
    f
}

/// Distances ‖Π^n_{[s,t]}(b)Ω - E(η(b)1_{[s,t)})‖ for the product
/// approximants Π^n(b) = Π_i j_{bin i}(1+b)·e^{-(t-s)L(b)}, computed
/// per bin and combined by the factorization of inner products across
/// disjoint bins, together with the algebraic closed evaluation.
pub struct CyclicityProbe {
    pub steps: Vec<usize>,
    pub fock_distance_sq: Vec<f64>,
    pub closed_distance_sq: Vec<f64>,
}

pub fn cyclicity_probe(
    triple: &SchurmannTriple,
    b: &FreePolynomial,
    interval: (f64, f64),
    steps: &[usize],
    cutoff: usize,
    degree: usize,
) -> Result<CyclicityProbe, FockError> {
    let (s, t) = interval;
    let len = t - s;
    let eta_b = triple.eta_poly(b);
    let eta_norm2 = inner(Some(triple.gram()), &eta_b, &eta_b);
    let l_b = triple.gen_poly(b);
    let bstar = triple.ctx.star(b);
    let l_b_star = triple.gen_poly(&bstar);

    let mut fock_distance_sq = Vec::new();
    let mut closed_distance_sq = Vec::new();
    for &n in steps {
        let delta = len / n as f64;
        let delta_s = Scalar::from_f64(delta);
        // one-bin Fock space of length δ
        let space = FockSpace::with_grid(vec![0.0, delta], triple.dim, cutoff)?;
        let r = realize_process(triple, &space, 0.0, delta)?;
        let omega = space.vacuum();
        let damp = (-(delta) * l_b.to_c64()).exp();
        let chi = {
            let jb = r.apply(b, &omega);
            (omega.clone() + jb).mapv(|z| z * damp)
        };
        // E(η(b)1_bin) on the one-bin space (orthonormal coordinates)
        let eta_on = Array1::from_vec(triple.eta_poly_orthonormal(b));
        let f = StepFn::indicator(&space, 0.0, delta, &eta_on)?;
        let e_bin = space.exp_vector(&f);
        let a_term: f64 = chi.iter().map(|z| z.norm_sqr()).sum();
        let b_term: Complex64 = e_bin.iter().zip(chi.iter()).map(|(a, c)| a.conj() * c).sum();
        let c_term = (delta * eta_norm2.to_c64().re).exp();
        let dist2 = a_term.powi(n as i32) - 2.0 * b_term.powu(n as u32).re
            + c_term.powi(n as i32);
        fock_distance_sq.push(dist2);

        // closed evaluation through the convolution exponential
        let ctx = &triple.ctx;
        let mut gen = Functional::zero(degree);
        for w in ctx.basis(degree) {
            if !w.is_unit() {
                gen.set(w.clone(), triple.gen_word(&w));
            }
        }
        let phi = conv_exp(ctx, &gen, &delta_s).map_err(|_| FockError::FlavorMismatch("degree".into()))?;
        let damp2 = (-(delta) * (l_b.to_c64() + l_b_star.to_c64()).re).exp();
        let phi_b = phi.eval_in(ctx, b).unwrap().to_c64();
        let phi_bstar = phi.eval_in(ctx, &bstar).unwrap().to_c64();
        let phi_bb = phi.eval_in(ctx, &ctx.mul(&bstar, b)).unwrap().to_c64();
        let a_cf = (1.0 + phi_bstar.re + phi_b.re + phi_bb.re) * damp2;
        // ⟨E, Π⟩ per bin: exp_⋆δ(⟨η(b),η(·)⟩ + L(·)) at (1+b), damped
        let k: Vec<Scalar> = eta_b.0.clone();
        let psi = eta_pairing_functional(triple, &k, degree);
        let phi_k = conv_exp(ctx, &psi, &delta_s)
            .map_err(|_| FockError::FlavorMismatch("degree".into()))?;
        let one_plus_b = FreePolynomial::one().add(b);
        let b_cf = phi_k.eval_in(ctx, &one_plus_b).unwrap().to_c64() * damp;
        let c_cf = (len * eta_norm2.to_c64().re).exp();
        closed_distance_sq
            .push(a_cf.powi(n as i32) - 2.0 * b_cf.powu(n as u32).re + c_cf);
    }
    Ok(CyclicityProbe {
        steps: steps.to_vec(),
        fock_distance_sq,
        closed_distance_sq,
    })
}

/// Convolution-exponential marginal φ_t of a triple's generator, stored to
/// the given degree (helper shared by independence and braided checks).
pub fn marginal_functional(
    triple: &SchurmannTriple,
    t: &Scalar,
    degree: usize,
) -> Result<Functional, crate::algebra::AlgebraError> {
    let ctx = &triple.ctx;
    let mut gen = Functional::zero(degree);
    for w in ctx.basis(degree) {
        if !w.is_unit() {
            gen.set(w.clone(), triple.gen_word(&w));
        }
    }
    conv_exp(ctx, &gen, t)
}

/// Helper: vacuum state functional consistency check between the Fock
/// realization and the algebraic convolution exponential.
pub fn vacuum_vs_convexp(
    triple: &SchurmannTriple,
    space: &FockSpace,
    y: &FreePolynomial,
    n: usize,
    s: f64,
    t: f64,
    ctx_degree: usize,
) -> Result<Vec<(Complex64, Complex64)>, FockError> {
    let r = realize_process(triple, space, s, t)?;
    let fock = r.vacuum_moments(y, n);
    let phi = marginal_functional(triple, &Scalar::from_f64(t - s), ctx_degree)
        .map_err(|_| FockError::FlavorMismatch("degree".into()))?;
    let mut alg = Vec::with_capacity(n);
    let mut pow = FreePolynomial::one();
    let ctx = &triple.ctx;
    for _ in 0..n {
        pow = ctx.mul(&pow, y);
        alg.push(phi.eval(&pow).unwrap().to_c64());
    }
    Ok(fock.into_iter().zip(alg).collect())
}
