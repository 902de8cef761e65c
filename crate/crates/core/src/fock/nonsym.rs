//! Boolean and monotone Fock spaces over the bin grid, their fundamental
//! noises, and the isometric embeddings into the symmetric Fock space.

use super::space::{FockError, FockSpace, StepFn};
use crate::linalg::{self, CMat, CVec};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::collections::HashMap;

/// Boolean Fock space C ⊕ L²(grid, C^d): vacuum plus one-particle modes.
#[derive(Clone, Debug)]
pub struct BooleanFock {
    pub grid: Vec<f64>,
    pub bins: Vec<(f64, f64)>,
    pub multiplicity: usize,
    pub dim: usize,
}

impl BooleanFock {
    pub fn new(bins: usize, t_end: f64, multiplicity: usize) -> Self {
        let grid: Vec<f64> = (0..=bins).map(|i| t_end * i as f64 / bins as f64).collect();
        let bin_list: Vec<(f64, f64)> = grid.windows(2).map(|w| (w[0], w[1])).collect();
        BooleanFock {
            dim: 1 + bin_list.len() * multiplicity,
            grid,
            bins: bin_list,
            multiplicity,
        }
    }

    fn slot(&self, bin: usize, comp: usize) -> usize {
        1 + bin * self.multiplicity + comp
    }

    pub fn bin_length(&self, b: usize) -> f64 {
        self.bins[b].1 - self.bins[b].0
    }

    fn bin_range(&self, s: f64, t: f64) -> Result<std::ops::Range<usize>, FockError> {
        let eps = 1e-9;
        let lo = self.grid.iter().position(|&g| (g - s).abs() < eps);
        let hi = self.grid.iter().position(|&g| (g - t).abs() < eps);
        match (lo, hi) {
            (Some(a), Some(b)) if a <= b => Ok(a..b),
            _ => Err(FockError::NotBinAligned(s, t)),
        }
    }

    /// Boolean creation A^{B+}_{st}(u): (λ, f) ↦ (0, λ·u·1_{[s,t)}).
    pub fn creation(&self, s: f64, t: f64, u: &CVec) -> Result<CMat, FockError> {
        let range = self.bin_range(s, t)?;
        let mut m = Array2::zeros((self.dim, self.dim));
        for b in range {
            let sdt = self.bin_length(b).sqrt();
            for c in 0..self.multiplicity {
                m[(self.slot(b, c), 0)] = u[c] * sdt;
            }
        }
        Ok(m)
    }

    /// Boolean annihilation A^B_{st}(u) = (A^{B+}_{st}(u))†.
    pub fn annihilation(&self, s: f64, t: f64, u: &CVec) -> Result<CMat, FockError> {
        Ok(linalg::adjoint(&self.creation(s, t, u)?))
    }

    /// Boolean conservation Λ^B_{st}(F): f ↦ 1_{[s,t)} F f.
    pub fn conservation(&self, s: f64, t: f64, f: &CMat) -> Result<CMat, FockError> {
        let range = self.bin_range(s, t)?;
        let mut m = Array2::zeros((self.dim, self.dim));
        for b in range {
            for c in 0..self.multiplicity {
                for cp in 0..self.multiplicity {
                    m[(self.slot(b, c), self.slot(b, cp))] = f[(c, cp)];
                }
            }
        }
        Ok(m)
    }

    /// Isometric embedding θ_B into a symmetric Fock space on the same grid.
    pub fn theta(&self, sym: &FockSpace) -> Result<CMat, FockError> {
        if sym.multiplicity != self.multiplicity || sym.bins.len() != self.bins.len() {
            return Err(FockError::FlavorMismatch(
                "θ_B needs matching grid and multiplicity".into(),
            ));
        }
        let mut m = Array2::zeros((sym.dim, self.dim));
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        for b in 0..self.bins.len() {
            for c in 0..self.multiplicity {
                // symmetric basis index of the one-particle state
                let mut occ = vec![0u16; self.bins.len() * self.multiplicity];
                occ[sym.mode(b, c)] = 1;
                let idx = (0..sym.dim)
                    .find(|&i| sym.basis_occupation(i) == occ.as_slice())
                    .expect("one-particle state present for cutoff >= 1");
                m[(idx, self.slot(b, c))] = Complex64::new(1.0, 0.0);
            }
        }
        Ok(m)
    }
}

/// Monotone Fock space: span of weakly increasing bin tuples with per-slot
/// multiplicity components (the bin-resolved time simplex).
#[derive(Clone, Debug)]
pub struct MonotoneFock {
    pub grid: Vec<f64>,
    pub bins: Vec<(f64, f64)>,
    pub multiplicity: usize,
    pub cutoff: usize,
    pub dim: usize,
    /// Basis tuples ((bin, comp) per slot), bins weakly increasing.
    basis: Vec<Vec<(usize, usize)>>,
    index: HashMap<Vec<(usize, usize)>, usize>,
}

impl MonotoneFock {
    pub fn new(bins: usize, t_end: f64, multiplicity: usize, cutoff: usize) -> Self {
        let grid: Vec<f64> = (0..=bins).map(|i| t_end * i as f64 / bins as f64).collect();
        let bin_list: Vec<(f64, f64)> = grid.windows(2).map(|w| (w[0], w[1])).collect();
        let mut basis: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut layer: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for _ in 1..=cutoff {
            let mut next = Vec::new();
            for t in &layer {
                let min_bin = t.last().map(|&(b, _)| b).unwrap_or(0);
                for b in min_bin..bin_list.len() {
                    for c in 0..multiplicity {
                        let mut s = t.clone();
                        s.push((b, c));
                        next.push(s);
                    }
                }
            }
            basis.extend(next.iter().cloned());
            layer = next;
        }
        let dim = basis.len();
        let index = basis.iter().cloned().zip(0..).collect();
        MonotoneFock {
            grid,
            bins: bin_list,
            multiplicity,
            cutoff,
            dim,
            basis,
            index,
        }
    }

    pub fn bin_length(&self, b: usize) -> f64 {
        self.bins[b].1 - self.bins[b].0
    }

    fn bin_range(&self, s: f64, t: f64) -> Result<std::ops::Range<usize>, FockError> {
        let eps = 1e-9;
        let lo = self.grid.iter().position(|&g| (g - s).abs() < eps);
        let hi = self.grid.iter().position(|&g| (g - t).abs() < eps);
        match (lo, hi) {
            (Some(a), Some(b)) if a <= b => Ok(a..b),
            _ => Err(FockError::NotBinAligned(s, t)),
        }
    }

    fn bin_count(tuple: &[(usize, usize)], b: usize) -> usize {
        tuple.iter().filter(|&&(bb, _)| bb == b).count()
    }

    /// Monotone creation A^{M+}_{st}(u): appends the latest time slot.
    pub fn creation(&self, s: f64, t: f64, u: &CVec) -> Result<CMat, FockError> {
        let range = self.bin_range(s, t)?;
        let mut m = Array2::zeros((self.dim, self.dim));
        for (i, tuple) in self.basis.iter().enumerate() {
            if tuple.len() >= self.cutoff {
                continue;
            }
            let min_bin = tuple.last().map(|&(b, _)| b).unwrap_or(0);
            for b in range.clone() {
                if b < min_bin {
                    continue;
                }
                let mb = Self::bin_count(tuple, b) as f64;
                let amp = (self.bin_length(b) / (mb + 1.0)).sqrt();
                for c in 0..self.multiplicity {
                    if u[c].norm_sqr() == 0.0 {
                        continue;
                    }
                    let mut up = tuple.clone();
                    up.push((b, c));
                    let j = self.index[&up];
                    m[(j, i)] += u[c] * amp;
                }
            }
        }
        Ok(m)
    }

    /// Monotone annihilation, the adjoint of the creation.
    pub fn annihilation(&self, s: f64, t: f64, u: &CVec) -> Result<CMat, FockError> {
        Ok(linalg::adjoint(&self.creation(s, t, u)?))
    }

    /// Monotone conservation Λ^M_{st}(F): acts on the latest slot.
    pub fn conservation(&self, s: f64, t: f64, f: &CMat) -> Result<CMat, FockError> {
        let range = self.bin_range(s, t)?;
        let mut m = Array2::zeros((self.dim, self.dim));
        for (i, tuple) in self.basis.iter().enumerate() {
            let Some(&(b, c)) = tuple.last() else { continue };
            if !range.contains(&b) {
                continue;
            }
            for cp in 0..self.multiplicity {
                if f[(cp, c)].norm_sqr() == 0.0 {
                    continue;
                }
                let mut repl = tuple.clone();
                let n = repl.len();
                repl[n - 1] = (b, cp);
                let j = self.index[&repl];
                m[(j, i)] += f[(cp, c)];
            }
        }
        Ok(m)
    }

    /// Anti-monotone creation: prepends the earliest time slot.
    pub fn creation_am(&self, s: f64, t: f64, u: &CVec) -> Result<CMat, FockError> {
        let range = self.bin_range(s, t)?;
        let mut m = Array2::zeros((self.dim, self.dim));
        for (i, tuple) in self.basis.iter().enumerate() {
            if tuple.len() >= self.cutoff {
                continue;
            }
            let max_bin = tuple.first().map(|&(b, _)| b).unwrap_or(usize::MAX);
            for b in range.clone() {
                if b > max_bin {
                    continue;
                }
                let mb = Self::bin_count(tuple, b) as f64;
                let amp = (self.bin_length(b) / (mb + 1.0)).sqrt();
                for c in 0..self.multiplicity {
                    if u[c].norm_sqr() == 0.0 {
                        continue;
                    }
                    let mut up = vec![(b, c)];
                    up.extend(tuple.iter().cloned());
                    let j = self.index[&up];
                    m[(j, i)] += u[c] * amp;
                }
            }
        }
        Ok(m)
    }

    pub fn annihilation_am(&self, s: f64, t: f64, u: &CVec) -> Result<CMat, FockError> {
        Ok(linalg::adjoint(&self.creation_am(s, t, u)?))
    }

    /// Anti-monotone conservation: acts on the earliest slot.
    pub fn conservation_am(&self, s: f64, t: f64, f: &CMat) -> Result<CMat, FockError> {
        let range = self.bin_range(s, t)?;
        let mut m = Array2::zeros((self.dim, self.dim));
        for (i, tuple) in self.basis.iter().enumerate() {
            let Some(&(b, c)) = tuple.first() else { continue };
            if !range.contains(&b) {
                continue;
            }
            for cp in 0..self.multiplicity {
                if f[(cp, c)].norm_sqr() == 0.0 {
                    continue;
                }
                let mut repl = tuple.clone();
                repl[0] = (b, cp);
                let j = self.index[&repl];
                m[(j, i)] += f[(cp, c)];
            }
        }
        Ok(m)
    }

    /// Time reversal R: reverses tuples and reflects bins, R² = id.
    pub fn time_reversal(&self) -> CMat {
        let nb = self.bins.len();
        let mut m = Array2::zeros((self.dim, self.dim));
        for (i, tuple) in self.basis.iter().enumerate() {
            let reflected: Vec<(usize, usize)> = tuple
                .iter()
                .rev()
                .map(|&(b, c)| (nb - 1 - b, c))
                .collect();
            let j = self.index[&reflected];
            m[(j, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Unitary θ_M into the symmetric space (multiplicity 1 at bin
    /// resolution: weakly increasing bin tuples map onto occupation states).
    pub fn theta(&self, sym: &FockSpace) -> Result<CMat, FockError> {
        if self.multiplicity != 1 {
            return Err(FockError::FlavorMismatch(
                "θ_M at bin resolution is implemented for multiplicity 1".into(),
            ));
        }
        if sym.multiplicity != 1 || sym.bins.len() != self.bins.len() || sym.cutoff < self.cutoff {
            return Err(FockError::FlavorMismatch(
                "θ_M needs matching grid, multiplicity 1 and cutoff".into(),
            ));
        }
        let mut m = Array2::zeros((sym.dim, self.dim));
        for (i, tuple) in self.basis.iter().enumerate() {
            let mut occ = vec![0u16; self.bins.len()];
            for &(b, _) in tuple {
                occ[b] += 1;
            }
            let idx = (0..sym.dim)
                .find(|&k| sym.basis_occupation(k) == occ.as_slice())
                .expect("occupation state in range");
            m[(idx, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }
}

/// The q = 0 Azéma creation X*_{st} at bin resolution on the symmetric
/// space: Σ_b A*(1_b)·(N_b + 1)^{-1}·Γ(0_{[end_b, t)}).
pub fn azema_q0_creation(space: &FockSpace, s: f64, t: f64) -> Result<CMat, FockError> {
    assert_eq!(space.multiplicity, 1);
    let range = space.bin_range(s, t)?;
    let mut out: CMat = Array2::zeros((space.dim, space.dim));
    let one = Array1::from_vec(vec![Complex64::new(1.0, 0.0)]);
    for b in range {
        let f = StepFn::indicator(space, space.bins[b].0, space.bins[b].1, &one)?;
        let create = space.creation_op(&f);
        // (N_b + 1)^{-1}
        let mut dress = Array2::zeros((space.dim, space.dim));
        for i in 0..space.dim {
            let nb = space.basis_occupation(i)[space.mode(b, 0)] as f64;
            dress[(i, i)] = Complex64::new(1.0 / (nb + 1.0), 0.0);
        }
        let blocker = space.gamma_kill(space.bins[b].1, t)?;
        out = out + create.dot(&dress).dot(&blocker);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(vals: &[f64]) -> CVec {
        Array1::from_vec(vals.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    #[test]
    fn boolean_creation_action() {
        // A^{B+}(u)(λ, f) = (0, λ u 1_{[s,t)})
        let space = BooleanFock::new(2, 1.0, 2);
        let u = cv(&[1.0, 2.0]);
        let a = space.creation(0.0, 0.5, &u).unwrap();
        // acting on the vacuum produces the one-particle state u·1_{[0,.5)}
        let mut vac = Array1::zeros(space.dim);
        vac[0] = Complex64::new(1.0, 0.0);
        let out = a.dot(&vac);
        let sdt = 0.5f64.sqrt();
        assert!((out[1] - Complex64::new(sdt, 0.0)).norm() < 1e-12);
        assert!((out[2] - Complex64::new(2.0 * sdt, 0.0)).norm() < 1e-12);
        // on one-particle states it vanishes
        let mut one = Array1::zeros(space.dim);
        one[1] = Complex64::new(1.0, 0.0);
        assert!(a.dot(&one).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn boolean_intertwining_with_symmetric_realization() {
        // k^B_{st}(b) = θ_B* j^B_{st}(b) θ_B for the fundamental noises,
        // with j^B(u) = A*(u 1_{st})Γ(0_{0T}), j^B(ū) = Γ(0_{0T})A(u 1_{st}),
        // j^B(|u⟩⟨v|) = A*(u 1_{st})Γ(0_{0T})A(v 1_{st}) / normalization
        let bins = 2;
        let d = 2;
        let bool_space = BooleanFock::new(bins, 1.0, d);
        let sym = FockSpace::new(bins, 1.0, d, 2).unwrap();
        let theta = bool_space.theta(&sym).unwrap();
        let theta_star = linalg::adjoint(&theta);
        let u = cv(&[0.7, -0.3]);
        let v = cv(&[0.2, 1.1]);
        let (s, t) = (0.0, 0.5);
        let kill_all = sym.gamma_kill(0.0, 1.0).unwrap();
        let fu = StepFn::indicator(&sym, s, t, &u).unwrap();
        let fv = StepFn::indicator(&sym, s, t, &v).unwrap();
        // creation
        let jb = sym.creation_op(&fu).dot(&kill_all);
        let lhs = theta_star.dot(&jb).dot(&theta);
        let rhs = bool_space.creation(s, t, &u).unwrap();
        assert!(linalg::max_abs(&(&lhs - &rhs)) < 1e-12);
        // annihilation
        let jb = kill_all.dot(&sym.annihilation_op(&fu));
        let lhs = theta_star.dot(&jb).dot(&theta);
        let rhs = bool_space.annihilation(s, t, &u).unwrap();
        assert!(linalg::max_abs(&(&lhs - &rhs)) < 1e-12);
        // conservation with F = |u⟩⟨v|
        let f = Array2::from_shape_fn((d, d), |(i, j)| u[i] * v[j].conj());
        let jb = sym.conservation_op(sym.bin_range(s, t).unwrap(), &f);
        let lhs = theta_star.dot(&jb).dot(&theta);
        let rhs = bool_space.conservation(s, t, &f).unwrap();
        assert!(linalg::max_abs(&(&lhs - &rhs)) < 1e-12);
    }

    #[test]
    fn monotone_dimensions() {
        // dim = Σ_n C(B+n-1, n) d^n
        let space = MonotoneFock::new(3, 1.0, 2, 2);
        // n=0: 1; n=1: 3·2 = 6; n=2: C(4,2)=6 tuples · 4 = 24
        assert_eq!(space.dim, 1 + 6 + 24);
    }

    #[test]
    fn monotone_creation_respects_time_order() {
        let space = MonotoneFock::new(2, 1.0, 1, 2);
        let u = cv(&[1.0]);
        let a = space.creation(0.0, 0.5, &u).unwrap();
        // on a state with a particle in the later bin, appending an earlier
        // slot is forbidden
        let idx_late = space.index[&vec![(1usize, 0usize)]];
        let mut late = Array1::zeros(space.dim);
        late[idx_late] = Complex64::new(1.0, 0.0);
        assert!(a.dot(&late).iter().all(|z| z.norm() < 1e-14));
        // on the vacuum it creates in [0, 0.5)
        let mut vac = Array1::zeros(space.dim);
        vac[0] = Complex64::new(1.0, 0.0);
        let out = a.dot(&vac);
        let idx_early = space.index[&vec![(0usize, 0usize)]];
        assert!((out[idx_early] - Complex64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn time_reversal_intertwines_monotone_and_antimonotone() {
        // R k^M_{st} R = k^{AM}_{T-t,T-s} on creation and conservation
        let space = MonotoneFock::new(4, 1.0, 1, 3);
        let r = space.time_reversal();
        let u = cv(&[1.0]);
        let f = Array2::from_shape_fn((1, 1), |_| Complex64::new(0.8, 0.1));
        let (s, t) = (0.25, 0.75);
        let lhs = r.dot(&space.creation(s, t, &u).unwrap()).dot(&r);
        let rhs = space.creation_am(1.0 - t, 1.0 - s, &u).unwrap();
        assert!(linalg::max_abs(&(&lhs - &rhs)) < 1e-12);
        let lhs = r.dot(&space.conservation(s, t, &f).unwrap()).dot(&r);
        let rhs = space.conservation_am(1.0 - t, 1.0 - s, &f).unwrap();
        assert!(linalg::max_abs(&(&lhs - &rhs)) < 1e-12);
        // R² = id
        assert!(linalg::max_abs(&(&r.dot(&r) - &linalg::identity(space.dim))) < 1e-14);
    }

    #[test]
    fn monotone_azema_link_at_q_zero() {
        // θ_M A^{M+}_{st}(1) θ_M* = X*_{st} Γ(0_{tT}) with the q = 0 pair
        let bins = 4;
        let cutoff = 3;
        let mono = MonotoneFock::new(bins, 1.0, 1, cutoff);
        let sym = FockSpace::new(bins, 1.0, 1, cutoff).unwrap();
        let theta = mono.theta(&sym).unwrap();
        // θ_M is unitary between the bin-resolved spaces of equal cutoff
        let tt = linalg::adjoint(&theta).dot(&theta);
        assert!(linalg::max_abs(&(&tt - &linalg::identity(mono.dim))) < 1e-12);
        let (s, t) = (0.25, 0.75);
        let u = cv(&[1.0]);
        let lhs = theta
            .dot(&mono.creation(s, t, &u).unwrap())
            .dot(&linalg::adjoint(&theta));
        let x_star = azema_q0_creation(&sym, s, t).unwrap();
        let rhs = x_star.dot(&sym.gamma_kill(t, 1.0).unwrap());
        // compare on the range of θ_M θ_M* (states reachable at this cutoff)
        let proj = theta.dot(&linalg::adjoint(&theta));
        let lhs_p = proj.dot(&lhs).dot(&proj);
        let rhs_p = proj.dot(&rhs).dot(&proj);
        assert!(linalg::max_abs(&(&lhs_p - &rhs_p)) < 1e-12);
    }
}
