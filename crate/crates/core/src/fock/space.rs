//! Truncated symmetric Fock space over a time-binned one-particle space.
//!
//! The one-particle space is L²(grid) ⊗ C^d discretized into modes
//! (bin, component); states are occupation vectors with total particle
//! number ≤ N. All operators are dense complex matrices.

use crate::linalg::{self, CMat, CVec};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("state space dimension {0} exceeds the desk-scale limit {1}")]
    DimensionTooLarge(usize, usize),
    #[error("interval [{0}, {1}] is not aligned with the bin grid")]
    NotBinAligned(f64, f64),
    #[error("multiplicity mismatch: expected {0}, got {1}")]
    MultiplicityMismatch(usize, usize),
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
}

pub const DIM_LIMIT: usize = 20_000;

/// Step function on the bin grid with values in C^d.
#[derive(Clone, Debug)]
pub struct StepFn(pub Vec<CVec>);

impl StepFn {
    pub fn zero(bins: usize, d: usize) -> Self {
        StepFn(vec![Array1::zeros(d); bins])
    }

    /// Constant value `v` on the bins of `[s, t)`, zero elsewhere.
    pub fn indicator(space: &FockSpace, s: f64, t: f64, v: &CVec) -> Result<Self, FockError> {
        let range = space.bin_range(s, t)?;
        let mut f = StepFn::zero(space.bins.len(), space.multiplicity);
        for b in range {
            f.0[b] = v.clone();
        }
        Ok(f)
    }

    pub fn conj(&self) -> StepFn {
        StepFn(self.0.iter().map(|v| v.mapv(|z| z.conj())).collect())
    }

    pub fn scale(&self, c: Complex64) -> StepFn {
        StepFn(self.0.iter().map(|v| v.mapv(|z| z * c)).collect())
    }

    pub fn add(&self, other: &StepFn) -> StepFn {
        StepFn(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// L² inner product Σ_b ⟨f_b, g_b⟩ Δt_b (conjugate-linear first slot).
    pub fn inner(&self, other: &StepFn, space: &FockSpace) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, (f, g)) in self.0.iter().zip(&other.0).enumerate() {
            let dt = space.bin_length(b);
            for c in 0..space.multiplicity {
                acc += f[c].conj() * g[c] * dt;
            }
        }
        acc
    }
}

/// Truncated symmetric Fock space Γ(L²(grid) ⊗ C^d), total occupation ≤ N.
#[derive(Clone, Debug)]
pub struct FockSpace {
    /// Bin boundaries t_0 < t_1 < … < t_B.
    pub grid: Vec<f64>,
    /// Bin intervals [t_i, t_{i+1}).
    pub bins: Vec<(f64, f64)>,
    pub multiplicity: usize,
    pub cutoff: usize,
    pub dim: usize,
    basis: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, usize>,
}

impl FockSpace {
    /// Uniform grid on [0, t_end) with `bins` bins.
    pub fn new(bins: usize, t_end: f64, multiplicity: usize, cutoff: usize) -> Result<Self, FockError> {
        let grid: Vec<f64> = (0..=bins).map(|i| t_end * i as f64 / bins as f64).collect();
        FockSpace::with_grid(grid, multiplicity, cutoff)
    }

    pub fn with_grid(grid: Vec<f64>, multiplicity: usize, cutoff: usize) -> Result<Self, FockError> {
        let bins: Vec<(f64, f64)> = grid.windows(2).map(|w| (w[0], w[1])).collect();
        let modes = bins.len() * multiplicity;
        // enumerate occupation vectors with total ≤ cutoff, graded order
        let mut basis: Vec<Vec<u16>> = Vec::new();
        let mut layer: Vec<Vec<u16>> = vec![vec![0; modes]];
        basis.push(vec![0; modes]);
        for _ in 1..=cutoff {
            let mut next: Vec<Vec<u16>> = Vec::new();
            for state in &layer {
                // raise the first nonzero-able mode ≥ the last raised one to
                // enumerate each multiset once: raise mode m only if all
                // modes < m are unchanged... simpler: raise any mode ≥ the
                // highest occupied mode index of the increments — instead use
                // dedup below (desk scale).
                for m in 0..modes {
                    let mut s = state.clone();
                    s[m] += 1;
                    next.push(s);
                }
            }
            next.sort();
            next.dedup();
            if basis.len() + next.len() > DIM_LIMIT {
                return Err(FockError::DimensionTooLarge(
                    basis.len() + next.len(),
                    DIM_LIMIT,
                ));
            }
            basis.extend(next.iter().cloned());
            layer = next;
        }
        let dim = basis.len();
        let index = basis
            .iter()
            .cloned()
            .zip(0..)
            .collect::<HashMap<_, _>>();
        Ok(FockSpace {
            grid,
            bins,
            multiplicity,
            cutoff,
            dim,
            basis,
            index,
        })
    }

    pub fn bin_length(&self, b: usize) -> f64 {
        self.bins[b].1 - self.bins[b].0
    }

    pub fn mode(&self, bin: usize, comp: usize) -> usize {
        bin * self.multiplicity + comp
    }

    /// Contiguous bin indices covering [s, t); error when not aligned.
    pub fn bin_range(&self, s: f64, t: f64) -> Result<std::ops::Range<usize>, FockError> {
        let eps = 1e-9 * (1.0 + self.grid.last().unwrap().abs());
        let lo = self.grid.iter().position(|&g| (g - s).abs() < eps);
        let hi = self.grid.iter().position(|&g| (g - t).abs() < eps);
        match (lo, hi) {
            (Some(a), Some(b)) if a <= b => Ok(a..b),
            _ => Err(FockError::NotBinAligned(s, t)),
        }
    }

    pub fn vacuum(&self) -> CVec {
        let mut v = Array1::zeros(self.dim);
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn basis_occupation(&self, i: usize) -> &[u16] {
        &self.basis[i]
    }

    pub fn total_occupation(&self, i: usize) -> usize {
        self.basis[i].iter().map(|&n| n as usize).sum()
    }

    /// Apply the mode creation operator a†_m (√(n+1) amplitude) to a vector.
    pub fn apply_creation_mode(&self, m: usize, v: &CVec) -> CVec {
        let mut out = Array1::zeros(self.dim);
        for (i, amp) in v.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut occ = self.basis[i].clone();
            occ[m] += 1;
            if let Some(&j) = self.index.get(&occ) {
                out[j] += amp * ((self.basis[i][m] as f64) + 1.0).sqrt();
            }
        }
        out
    }

    pub fn apply_annihilation_mode(&self, m: usize, v: &CVec) -> CVec {
        let mut out = Array1::zeros(self.dim);
        for (i, amp) in v.iter().enumerate() {
            if amp.norm_sqr() == 0.0 || self.basis[i][m] == 0 {
                continue;
            }
            let mut occ = self.basis[i].clone();
            occ[m] -= 1;
            let j = self.index[&occ];
            out[j] += amp * (self.basis[i][m] as f64).sqrt();
        }
        out
    }

    /// Creation operator A*(f) = Σ_modes √Δt f_{b,c} a†_{(b,c)} as a matrix.
    pub fn creation_op(&self, f: &StepFn) -> CMat {
        let mut m = Array2::zeros((self.dim, self.dim));
        for (i, occ) in self.basis.iter().enumerate() {
            for b in 0..self.bins.len() {
                let sdt = self.bin_length(b).sqrt();
                for c in 0..self.multiplicity {
                    let amp = f.0[b][c] * sdt;
                    if amp.norm_sqr() == 0.0 {
                        continue;
                    }
                    let mode = self.mode(b, c);
                    let mut up = occ.clone();
                    up[mode] += 1;
                    if let Some(&j) = self.index.get(&up) {
                        m[(j, i)] += amp * ((occ[mode] as f64) + 1.0).sqrt();
                    }
                }
            }
        }
        m
    }

    pub fn annihilation_op(&self, f: &StepFn) -> CMat {
        linalg::adjoint(&self.creation_op(f))
    }

    /// Conservation Λ(1_bins ⊗ F) = Σ_{b ∈ bins} Σ_{c,c'} F_{cc'} a†_{b,c} a_{b,c'}.
    pub fn conservation_op(&self, bins: std::ops::Range<usize>, f: &CMat) -> CMat {
        let d = self.multiplicity;
        assert_eq!(f.nrows(), d);
        let mut m = Array2::zeros((self.dim, self.dim));
        for (i, occ) in self.basis.iter().enumerate() {
            for b in bins.clone() {
                for c in 0..d {
                    for cp in 0..d {
                        let coeff = f[(c, cp)];
                        if coeff.norm_sqr() == 0.0 {
                            continue;
                        }
                        let lower = self.mode(b, cp);
                        if occ[lower] == 0 {
                            continue;
                        }
                        let raise = self.mode(b, c);
                        let mut s = occ.clone();
                        s[lower] -= 1;
                        let down_amp = (occ[lower] as f64).sqrt();
                        let up_amp = ((s[raise] as f64) + 1.0).sqrt();
                        s[raise] += 1;
                        if let Some(&j) = self.index.get(&s) {
                            m[(j, i)] += coeff * down_amp * up_amp;
                        }
                    }
                }
            }
        }
        m
    }

    /// Number operator over a bin range (identity multiplicity matrix).
    pub fn number_op(&self, bins: std::ops::Range<usize>) -> CMat {
        self.conservation_op(bins, &linalg::identity(self.multiplicity))
    }

    /// Second quantization Γ(m) of multiplication by a per-bin scalar.
    pub fn gamma_mult(&self, per_bin: &[Complex64]) -> CMat {
        let mut m = Array2::zeros((self.dim, self.dim));
        for (i, occ) in self.basis.iter().enumerate() {
            let mut amp = Complex64::new(1.0, 0.0);
            for b in 0..self.bins.len() {
                let count: u32 = (0..self.multiplicity)
                    .map(|c| occ[self.mode(b, c)] as u32)
                    .sum();
                amp *= per_bin[b].powu(count);
            }
            m[(i, i)] = amp;
        }
        m
    }

    /// Γ(0_{st}): second quantization of killing particles inside [s, t).
    pub fn gamma_kill(&self, s: f64, t: f64) -> Result<CMat, FockError> {
        let range = self.bin_range(s, t)?;
        let per_bin: Vec<Complex64> = (0..self.bins.len())
            .map(|b| {
                if range.contains(&b) {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .collect();
        Ok(self.gamma_mult(&per_bin))
    }

    /// Truncated exponential vector E(f) = Σ f^{⊗n}/√(n!).
    pub fn exp_vector(&self, f: &StepFn) -> CVec {
        let mut v = Array1::zeros(self.dim);
        for (i, occ) in self.basis.iter().enumerate() {
            let mut amp = Complex64::new(1.0, 0.0);
            for b in 0..self.bins.len() {
                let sdt = self.bin_length(b).sqrt();
                for c in 0..self.multiplicity {
                    let n = occ[self.mode(b, c)] as u32;
                    if n > 0 {
                        let xi = f.0[b][c] * sdt;
                        amp *= xi.powu(n);
                        let mut fact = 1.0;
                        for k in 1..=n {
                            fact *= k as f64;
                        }
                        amp /= fact.sqrt();
                    }
                }
            }
            v[i] = amp;
        }
        v
    }

    /// Upper bound for ‖E(f) - E_N(f)‖² from the exponential tail.
    pub fn exp_vector_truncation_bound(&self, f: &StepFn) -> f64 {
        let norm2 = f.inner(f, self).re;
        let mut partial = 0.0;
        let mut term = 1.0;
        for n in 0..=self.cutoff {
            if n > 0 {
                term *= norm2 / n as f64;
            }
            partial += term;
        }
        (norm2.exp() - partial).max(0.0)
    }

    /// E⁰_t(X) = Γ(0_{tT}) X Γ(0_{tT}).
    pub fn cond_exp0(&self, t: f64, x: &CMat) -> Result<CMat, FockError> {
        let t_end = *self.grid.last().unwrap();
        let g = self.gamma_kill(t, t_end)?;
        Ok(g.dot(x).dot(&g))
    }

    /// E¹_t(X): compress to the past factor tensored with the future
    /// identity, ⟨u, E¹_t(X)v⟩ = ⟨u_past ⊗ Ω, X v_past ⊗ Ω⟩⟨u_fut, v_fut⟩.
    pub fn cond_exp1(&self, t: f64, x: &CMat) -> Result<CMat, FockError> {
        let split = self.bin_range(0.0, t)?.end;
        let d = self.multiplicity;
        let past_modes = split * d;
        let mut m = Array2::zeros((self.dim, self.dim));
        // group basis states by (past part, future part)
        let part = |occ: &[u16]| -> (Vec<u16>, Vec<u16>) {
            (occ[..past_modes].to_vec(), occ[past_modes..].to_vec())
        };
        // index of the "past ⊗ Ω" embedding of each past pattern
        for (i, occ_i) in self.basis.iter().enumerate() {
            let (pi, fi) = part(occ_i);
            let mut full_i = pi.clone();
            full_i.extend(vec![0u16; occ_i.len() - past_modes]);
            let Some(&ei) = self.index.get(&full_i) else { continue };
            for (j, occ_j) in self.basis.iter().enumerate() {
                let (pj, fj) = part(occ_j);
                if fi != fj {
                    continue;
                }
                let mut full_j = pj.clone();
                full_j.extend(vec![0u16; occ_j.len() - past_modes]);
                let Some(&ej) = self.index.get(&full_j) else { continue };
                m[(i, j)] = x[(ei, ej)];
            }
        }
        Ok(m)
    }
}
