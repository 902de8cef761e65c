//! Braided Brownian motion: QSDE coefficients of the right symmetrization
//! and its realization on the truncated symmetric Fock space.
//!
//! For the standard generator (b = 1, c = 0), the symmetrized process obeys
//! dX_i = Σ_j X_j dΛ(ρ(a^j_i) - δ^j_i) + dA_i with the FRT matrices
//! ρ(a^j_i) built from tR. The a^i_j-part of the process is realized
//! exactly by threading the FRT matrix through the particles in time order;
//! the x-part uses a first-order bin-product scheme.

use super::rmatrix::BraidedError;
use super::space::BraidedSpaceSpec;
use crate::algebra::{FreeWord, Letter};
use crate::fock::{FockError, FockSpace, StepFn};
use crate::linalg::{self, CMat};
use crate::scalar::Scalar;
use crate::smat::SMat;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Coefficient tables of the symmetrized QSDE.
pub struct BraidedQsde {
    pub n: usize,
    /// dΛ coefficient of dX_i against X_j: ρ(a^j_i) - δ^j_i.
    pub lambda_x: Vec<Vec<SMat>>,
    /// creation vectors of dX*_i (standard basis e_i).
    pub creation: Vec<usize>,
    /// ρ(a^i_j) matrices.
    pub rho_a: Vec<Vec<SMat>>,
    /// ρ(b^i_j) matrices.
    pub rho_b: Vec<Vec<SMat>>,
}

/// QSDE coefficients of the braided Brownian motion with generator
/// b = 1, c = 0 (the quantum Azéma family for n = 1).
pub fn braided_bm_qsde(space: &BraidedSpaceSpec) -> BraidedQsde {
    let n = space.n();
    let mut lambda_x = Vec::new();
    let mut rho_a = Vec::new();
    let mut rho_b = Vec::new();
    for i in 0..n {
        let mut row = Vec::new();
        let mut arow = Vec::new();
        let mut brow = Vec::new();
        for j in 0..n {
            let a = space.rho_a(j, i);
            let delta = if i == j {
                SMat::identity(n)
            } else {
                SMat::zeros(n, n)
            };
            row.push(a.sub(&delta));
            arow.push(space.rho_a(i, j));
            brow.push(space.rho_b(i, j));
        }
        lambda_x.push(row);
        rho_a.push(arow);
        rho_b.push(brow);
    }
    BraidedQsde {
        n,
        lambda_x,
        creation: (0..n).collect(),
        rho_a,
        rho_b,
    }
}

/// Realization of the right-symmetrization process on a truncated
/// symmetric Fock space with multiplicity n.
pub struct SymmetrizedProcess<'a> {
    pub space: &'a FockSpace,
    pub braided: &'a BraidedSpaceSpec,
}

impl<'a> SymmetrizedProcess<'a> {
    pub fn new(
        space: &'a FockSpace,
        braided: &'a BraidedSpaceSpec,
    ) -> Result<Self, FockError> {
        if space.multiplicity != braided.n() {
            return Err(FockError::MultiplicityMismatch(
                braided.n(),
                space.multiplicity,
            ));
        }
        Ok(SymmetrizedProcess { space, braided })
    }

    /// j_{st}(a^i_j) (kind a) or j_{st}(b^i_j) (kind b): thread the FRT
    /// matrix through the particles inside [s, t) in time order; exact for
    /// at most one particle per bin, canonical mode order within a bin.
    pub fn conservation_word(
        &self,
        kind_a: bool,
        i: usize,
        j: usize,
        s: f64,
        t: f64,
    ) -> Result<CMat, FockError> {
        let n = self.braided.n();
        let range = self.space.bin_range(s, t)?;
        let rho: Vec<Vec<CMat>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let m = if kind_a {
                            self.braided.rho_a(a, b)
                        } else {
                            self.braided.rho_b(a, b)
                        };
                        m.to_c64()
                    })
                    .collect()
            })
            .collect();
        let dim = self.space.dim;
        let mut out = Array2::<Complex64>::zeros((dim, dim));
        for col in 0..dim {
            let occ = self.space.basis_occupation(col).to_vec();
            // particle list inside [s,t) in (bin, component) order
            let mut particles = Vec::new();
            for b in range.clone() {
                for c in 0..n {
                    for _ in 0..occ[self.space.mode(b, c)] {
                        particles.push((b, c));
                    }
                }
            }
            // outer transfer: start at index i, end at j, emitting new
            // components per particle
            // states: map (outer index, new components so far) -> amplitude
            let mut states: Vec<(usize, Vec<usize>, Complex64)> =
                vec![(i, Vec::new(), Complex64::new(1.0, 0.0))];
            for &(_b, c_in) in &particles {
                let mut next = Vec::new();
                for (outer, comps, amp) in &states {
                    for mid in 0..n {
                        for c_out in 0..n {
                            let f = rho[*outer][mid][(c_out, c_in)];
                            if f.norm_sqr() == 0.0 {
                                continue;
                            }
                            let mut nc = comps.clone();
                            nc.push(c_out);
                            next.push((mid, nc, amp * f));
                        }
                    }
                }
                states = next;
            }
            for (outer, comps, amp) in states {
                if outer != j {
                    continue;
                }
                // rebuild the occupation vector with replaced components
                let mut new_occ = occ.clone();
                // remove original particles, insert new components in order
                let mut norm = Complex64::new(1.0, 0.0);
                for (k, &(b, c_in)) in particles.iter().enumerate() {
                    let m_in = self.space.mode(b, c_in);
                    // normalization: occupation amplitudes are symmetric;
                    // sequential component moves carry √(n)·/√(n') factors
                    norm *= Complex64::new((new_occ[m_in] as f64).sqrt(), 0.0);
                    new_occ[m_in] -= 1;
                    let m_out = self.space.mode(b, comps[k]);
                    new_occ[m_out] += 1;
                    norm /= Complex64::new((new_occ[m_out] as f64).sqrt(), 0.0);
                }
                let row = (0..dim)
                    .find(|&r| self.space.basis_occupation(r) == new_occ.as_slice());
                if let Some(row) = row {
                    out[(row, col)] += amp / norm.conj() * Complex64::new(1.0, 0.0);
                }
            }
        }
        Ok(out)
    }

    /// j_{st}(x_i) through the first-order bin-product scheme of the QSDE
    /// dX_i = Σ_j X_j dΛ(ρ(a^j_i) - δ) + dA(e_i).
    pub fn position_word(&self, i: usize, s: f64, t: f64) -> Result<CMat, FockError> {
        let range = self.space.bin_range(s, t)?;
        let n = self.braided.n();
        let dim = self.space.dim;
        let mut x: Vec<CMat> = (0..n).map(|_| Array2::zeros((dim, dim))).collect();
        for b in range {
            let (bs, bt) = self.space.bins[b];
            // X_i(k+1) = Σ_j X_j(k)·j_bin(a^j_i) + A(e_i 1_bin)
            let mut next: Vec<CMat> = Vec::with_capacity(n);
            for ii in 0..n {
                let mut acc: CMat = Array2::zeros((dim, dim));
                for (jj, xj) in x.iter().enumerate() {
                    let thread = self.conservation_word(true, jj, ii, bs, bt)?;
                    acc = acc + xj.dot(&thread);
                }
                let mut e = Array1::zeros(n);
                e[ii] = Complex64::new(1.0, 0.0);
                let f = StepFn::indicator(self.space, bs, bt, &e)?;
                acc = acc + self.space.annihilation_op(&f);
                next.push(acc);
            }
            x = next;
        }
        Ok(x.swap_remove(i))
    }

    /// ĵ_{st}(w) for a word w in x_i, v^i: expand the right coaction
    /// γ_R(w) letterwise (x_i ↦ x_j⊗a^j_i, v^i ↦ v^j⊗b^i_j) and evaluate
    /// j^H_{st} on the V-leg, j^H_{0s} on the A-leg.
    pub fn hat_op(&self, w: &FreeWord, s: f64, t: f64) -> Result<CMat, FockError> {
        let n = self.braided.n();
        let dim = self.space.dim;
        let mut out: CMat = Array2::zeros((dim, dim));
        // legs: vector of (V-letters with indices, A-letters (kind, i, j))
        let mut legs: Vec<(Vec<Letter>, Vec<(bool, usize, usize)>, Complex64)> =
            vec![(Vec::new(), Vec::new(), Complex64::new(1.0, 0.0))];
        for l in &w.0 {
            let mut next = Vec::new();
            for (vl, al, amp) in &legs {
                for j in 0..n {
                    let mut nv = vl.clone();
                    let mut na = al.clone();
                    if !l.star {
                        // γ_R(x_i) = x_j ⊗ a^j_i
                        nv.push(Letter::new(j as u32));
                        na.push((true, j, l.gen as usize));
                    } else {
                        // γ_R(v^i) = v^j ⊗ b^i_j
                        nv.push(Letter::starred(j as u32));
                        na.push((false, l.gen as usize, j));
                    }
                    next.push((nv, na, *amp));
                }
            }
            legs = next;
        }
        for (vl, al, amp) in legs {
            // V-leg on [s, t)
            let mut vop = linalg::identity(dim);
            for l in &vl {
                let m = if !l.star {
                    self.position_word(l.gen as usize, s, t)?
                } else {
                    linalg::adjoint(&self.position_word(l.gen as usize, s, t)?)
                };
                vop = vop.dot(&m);
            }
            // A-leg on [0, s)
            let mut aop = linalg::identity(dim);
            for &(kind_a, i, j) in &al {
                aop = aop.dot(&self.conservation_word(kind_a, i, j, 0.0, s)?);
            }
            out = out + vop.dot(&aop).mapv(|z| z * amp);
        }
        Ok(out)
    }
}

/// Residual of the symmetrization identity: vacuum moments of ĵ_{st}(b)
/// against the braided convolution exponential of the standard generator
/// (b = 1, c = 0), i.e. L(x_i v^j) = δ_ij.
pub fn symmetrization_check(
    braided: &BraidedSpaceSpec,
    space: &FockSpace,
    s: f64,
    t: f64,
    word: &FreeWord,
) -> Result<(Complex64, Complex64), BraidedError> {
    let proc = SymmetrizedProcess::new(space, braided)
        .map_err(|e| BraidedError::Invalid(e.to_string()))?;
    let op = proc
        .hat_op(word, s, t)
        .map_err(|e| BraidedError::Invalid(e.to_string()))?;
    let omega = space.vacuum();
    let ov = op.dot(&omega);
    let fock: Complex64 = omega.iter().zip(ov.iter()).map(|(a, b)| a.conj() * b).sum();
    // braided marginal
    let n = braided.n();
    let mut gen: BTreeMap<FreeWord, Scalar> = BTreeMap::new();
    for i in 0..n {
        gen.insert(
            FreeWord(vec![Letter::new(i as u32), Letter::starred(i as u32)]),
            Scalar::one(),
        );
    }
    let phi = braided.conv_exp(&gen, &Scalar::from_f64(t - s), word.len());
    let algebraic = phi
        .get(word)
        .cloned()
        .unwrap_or_else(Scalar::zero)
        .to_c64();
    Ok((fock, algebraic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::rmatrix::RMatrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn azema_qsde_coefficient() {
        // n = 1: dX = X dΛ(q - 1) + dA
        let q = Scalar::int(3);
        let space = BraidedSpaceSpec::new(RMatrix::one_dim(q.clone()), Scalar::one()).unwrap();
        let qsde = braided_bm_qsde(&space);
        assert!(qsde.lambda_x[0][0]
            .at(0, 0)
            .eq_scalar(&(&q - &Scalar::one())));
    }

    #[test]
    fn tr2_qsde_blocks() {
        // dΛ blocks diag(tq²-1, tq-1) and off-diagonal coupling t(q²-1)
        let q = Scalar::int(2);
        let t = Scalar::rational(1, 3);
        let space = BraidedSpaceSpec::new(RMatrix::sl2(&q), t.clone()).unwrap();
        let qsde = braided_bm_qsde(&space);
        let tq2 = &t * &(&q * &q);
        let tq = &t * &q;
        // X_1 coefficient of dX_1: diag(tq²-1, tq-1)
        let g11 = &qsde.lambda_x[0][0];
        assert!(g11.at(0, 0).eq_scalar(&(&tq2 - &Scalar::one())));
        assert!(g11.at(1, 1).eq_scalar(&(&tq - &Scalar::one())));
        assert!(g11.at(0, 1).is_zero() && g11.at(1, 0).is_zero());
        // X_2 coefficient of dX_1: off-diagonal t(q²-1)
        let g21 = &qsde.lambda_x[0][1];
        let coupling = &t * &(&(&q * &q) - &Scalar::one());
        assert!(g21.at(1, 0).eq_scalar(&coupling), "got {}", g21.at(1, 0));
        // X_2 equation: diag(tq-1, tq²-1), no coupling
        let g22 = &qsde.lambda_x[1][1];
        assert!(g22.at(0, 0).eq_scalar(&(&tq - &Scalar::one())));
        assert!(g22.at(1, 1).eq_scalar(&(&tq2 - &Scalar::one())));
        assert!(qsde.lambda_x[1][0].is_zero());
    }

    #[test]
    fn azema_structure_relation_at_t_inverse_q() {
        // dZ₂ = Z₂·dΛ(G) + dA*(e₂) + dA(e₂) with G = diag(tq-1, tq²-1);
        // the Itô square is dt + Z₂·(dA* + dA)(Ge₂) + Z₂²·dΛ(G²). The
        // closed relation dZ₂·dZ₂ = dt + (q-1)Z₂dZ₂ holds exactly iff
        // G² = (q-1)·G and Ge₂ = (q-1)e₂, which happens at t = 1/q.
        use crate::smat::SVec;
        let q = Scalar::int(3);
        let t = Scalar::rational(1, 3);
        let space = BraidedSpaceSpec::new(RMatrix::sl2(&q), t).unwrap();
        let qsde = braided_bm_qsde(&space);
        let g = &qsde.lambda_x[1][1];
        let qm1 = &q - &Scalar::one();
        let g2 = g.matmul(g);
        assert!(g2.sub(&g.scale(&qm1)).is_zero(), "G² = (q-1)G at t = 1/q");
        let mut e2 = SVec::zeros(2);
        e2.0[1] = Scalar::one();
        let ge2 = g.apply(&e2);
        assert!(ge2.0[0].is_zero());
        assert!(ge2.0[1].eq_scalar(&qm1));
        // away from t = 1/q the relation fails
        let off = BraidedSpaceSpec::new(RMatrix::sl2(&q), Scalar::one()).unwrap();
        let goff = &braided_bm_qsde(&off).lambda_x[1][1];
        assert!(!goff.matmul(goff).sub(&goff.scale(&qm1)).is_zero());
    }

    #[test]
    fn symmetrization_first_order_n1() {
        // b = x x*: both sides equal (t-s) at first order
        let q = Scalar::rational(3, 2);
        let braided =
            BraidedSpaceSpec::new(RMatrix::one_dim(q), Scalar::one()).unwrap();
        let space = FockSpace::new(4, 0.2, 1, 3).unwrap();
        let w = FreeWord(vec![Letter::new(0), Letter::starred(0)]);
        let (fock, alg) = symmetrization_check(&braided, &space, 0.0, 0.2, &w).unwrap();
        assert_abs_diff_eq!(alg.re, fock.re, epsilon = 2e-3);
        assert_abs_diff_eq!(fock.re, 0.2, epsilon = 2e-3);
    }

    #[test]
    fn symmetrization_equal_times_is_counit() {
        let braided =
            BraidedSpaceSpec::new(RMatrix::one_dim(Scalar::int(2)), Scalar::one()).unwrap();
        let space = FockSpace::new(2, 1.0, 1, 3).unwrap();
        let w = FreeWord(vec![Letter::new(0), Letter::starred(0)]);
        let (fock, alg) = symmetrization_check(&braided, &space, 0.5, 0.5, &w).unwrap();
        assert_abs_diff_eq!(fock.norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(alg.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetrization_tr2_one_bin() {
        let q = Scalar::int(2);
        let braided =
            BraidedSpaceSpec::new(RMatrix::sl2(&q), Scalar::rational(1, 2)).unwrap();
        let space = FockSpace::new(2, 0.25, 2, 3).unwrap();
        let w = FreeWord(vec![Letter::new(1), Letter::starred(1)]);
        let (fock, alg) = symmetrization_check(&braided, &space, 0.0, 0.25, &w).unwrap();
        assert_abs_diff_eq!(fock.re, alg.re, epsilon = 5e-3);
        assert_abs_diff_eq!(fock.im, alg.im, epsilon = 5e-3);
    }
}
