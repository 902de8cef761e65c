//! Generators on the coefficient algebra of the unitary group, HP cocycles
//! on C^d ⊗ truncated Fock space, Lindblad semigroups, dilation checks and
//! Bhat minimality.

use crate::algebra::{AlgebraCtx, Letter};
use crate::fock::{FockError, FockSpace, StepFn};
use crate::linalg::{self, CMat, CVec};
use crate::scalar::Scalar;
use crate::schurmann::{CocycleMap, RepMatrixSet, SchurmannTriple};
use crate::smat::{rank, SMat, SVec};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DilationError {
    #[error("matrix is not unitary (residual {0})")]
    NotUnitary(f64),
    #[error("matrix is not hermitian (residual {0})")]
    NotHermitian(f64),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Parameter families for generators on the unitary-group coefficients.
#[derive(Clone, Debug)]
pub enum UdGeneratorSpec {
    /// One-dimensional representation family: ρ(u_jk) = w_jk on D = C,
    /// η(u_jk) = ℓ_jk, L(u_jk) = -½(ℓ*ℓ)_jk.
    OneDimensional { w: CMat, l: CMat },
    /// Gaussian family: ρ = ε·id on C^n, η(u_jk) = Σ_ν L^ν_jk e_ν,
    /// η(u*_jk) = -η(u_kj), L(u_jk) = iM_jk - ½Σ_ν((L^ν)*L^ν)_jk.
    Gaussian { m: CMat, ls: Vec<CMat> },
    /// General family: ρ(u_jk) = P_j U P*_k on H = C^h with U unitary on
    /// H ⊗ C^d, η(u_jk) = a_jk ∈ H, L(u_jk - u*_kj) = 2iλ_jk.
    General {
        d: usize,
        u: CMat,
        a: Vec<Vec<CVec>>,
        lambda: CMat,
    },
}

impl UdGeneratorSpec {
    pub fn d(&self) -> usize {
        match self {
            UdGeneratorSpec::OneDimensional { w, .. } => w.nrows(),
            UdGeneratorSpec::Gaussian { m, .. } => m.nrows(),
            UdGeneratorSpec::General { d, .. } => *d,
        }
    }

    /// Fock multiplicity of the triple space.
    pub fn multiplicity(&self) -> usize {
        match self {
            UdGeneratorSpec::OneDimensional { .. } => 1,
            UdGeneratorSpec::Gaussian { ls, .. } => ls.len(),
            UdGeneratorSpec::General { u, d, .. } => u.nrows() / d,
        }
    }

    pub fn validate(&self) -> Result<(), DilationError> {
        match self {
            UdGeneratorSpec::OneDimensional { w, .. } => {
                let wd = linalg::adjoint(w).dot(w);
                let res = linalg::max_abs(&(&wd - &linalg::identity(w.nrows())));
                if res > 1e-10 {
                    return Err(DilationError::NotUnitary(res));
                }
            }
            UdGeneratorSpec::Gaussian { m, .. } => {
                let res = linalg::max_abs(&(m - &linalg::adjoint(m)));
                if res > 1e-10 {
                    return Err(DilationError::NotHermitian(res));
                }
            }
            UdGeneratorSpec::General { u, lambda, .. } => {
                let ud = linalg::adjoint(u).dot(u);
                let res = linalg::max_abs(&(&ud - &linalg::identity(u.nrows())));
                if res > 1e-10 {
                    return Err(DilationError::NotUnitary(res));
                }
                let res = linalg::max_abs(&(lambda - &linalg::adjoint(lambda)));
                if res > 1e-10 {
                    return Err(DilationError::NotHermitian(res));
                }
            }
        }
        Ok(())
    }
}

fn smat_from_cmat(m: &CMat) -> SMat {
    SMat::from_fn(m.nrows(), m.ncols(), |i, j| Scalar::from_c64(m[(i, j)]))
}

/// Build the Schürmann triple on the unitary-group coefficient algebra.
pub fn build_ud_triple(
    spec: &UdGeneratorSpec,
    degree: usize,
) -> Result<SchurmannTriple, DilationError> {
    spec.validate()?;
    let d = spec.d();
    let ctx = AlgebraCtx::unitary_group(d, degree);
    let h = spec.multiplicity();
    let mut matrices = BTreeMap::new();
    let mut vectors = BTreeMap::new();
    let mut gen_values = BTreeMap::new();
    match spec {
        UdGeneratorSpec::OneDimensional { w, l } => {
            let lsl = linalg::adjoint(l).dot(l);
            let wsl = linalg::adjoint(w).dot(l);
            for j in 0..d {
                for k in 0..d {
                    let letter = Letter::new((j * d + k) as u32);
                    let star = Letter::starred((j * d + k) as u32);
                    let mut rho = SMat::zeros(1, 1);
                    *rho.at_mut(0, 0) = Scalar::from_c64(w[(j, k)]);
                    let mut rho_star = SMat::zeros(1, 1);
                    *rho_star.at_mut(0, 0) = Scalar::from_c64(w[(j, k)].conj());
                    matrices.insert(letter, rho);
                    matrices.insert(star, rho_star);
                    vectors.insert(letter, SVec(vec![Scalar::from_c64(l[(j, k)])]));
                    // η(u*_jk) = -(w*ℓ)_kj
                    vectors.insert(star, SVec(vec![Scalar::from_c64(-wsl[(k, j)])]));
                    gen_values.insert(letter, Scalar::from_c64(-0.5 * lsl[(j, k)]));
                    gen_values.insert(star, Scalar::from_c64((-0.5 * lsl[(j, k)]).conj()));
                }
            }
        }
        UdGeneratorSpec::Gaussian { m, ls } => {
            let mut lsl: CMat = Array2::zeros((d, d));
            for lm in ls {
                lsl = lsl + linalg::adjoint(lm).dot(lm);
            }
            for j in 0..d {
                for k in 0..d {
                    let letter = Letter::new((j * d + k) as u32);
                    let star = Letter::starred((j * d + k) as u32);
                    let mut delta = SMat::zeros(h, h);
                    if j == k {
                        delta = SMat::identity(h);
                    }
                    matrices.insert(letter, delta.clone());
                    matrices.insert(star, delta);
                    let eta = SVec(
                        (0..h)
                            .map(|nu| Scalar::from_c64(ls[nu][(j, k)]))
                            .collect(),
                    );
                    let eta_star = SVec(
                        (0..h)
                            .map(|nu| Scalar::from_c64(-ls[nu][(k, j)]))
                            .collect(),
                    );
                    vectors.insert(letter, eta);
                    vectors.insert(star, eta_star);
                    let lv = Complex64::new(0.0, 1.0) * m[(j, k)] - 0.5 * lsl[(j, k)];
                    gen_values.insert(letter, Scalar::from_c64(lv));
                    gen_values.insert(star, Scalar::from_c64(lv.conj()));
                }
            }
        }
        UdGeneratorSpec::General { d, u, a, lambda } => {
            let dd = *d;
            // blocks of U as operators on H
            let block = |j: usize, k: usize| -> CMat {
                Array2::from_shape_fn((h, h), |(r, s)| u[(j * h + r, k * h + s)])
            };
            // η(u*_ki) = -a_ik - Σ_j ρ(û_ji)* a_jk  (û = u - δ)
            for j in 0..dd {
                for k in 0..dd {
                    let letter = Letter::new((j * dd + k) as u32);
                    matrices.insert(letter, smat_from_cmat(&block(j, k)));
                    let star = Letter::starred((j * dd + k) as u32);
                    matrices.insert(star, smat_from_cmat(&linalg::adjoint(&block(k, j))));
                    vectors.insert(
                        letter,
                        SVec(a[j][k].iter().map(|z| Scalar::from_c64(*z)).collect()),
                    );
                }
            }
            for i in 0..dd {
                for k in 0..dd {
                    // η(u*_ki) = -a_ik - Σ_j (ρ(u_ji) - δ_ji)† a_jk
                    let mut acc = Array1::<Complex64>::zeros(h);
                    acc = acc - &a[i][k];
                    for j in 0..dd {
                        let mut rho_hat = block(j, i);
                        if j == i {
                            rho_hat = rho_hat - linalg::identity(h);
                        }
                        acc = acc - linalg::adjoint(&rho_hat).dot(&a[j][k]);
                    }
                    vectors.insert(
                        Letter::starred((k * dd + i) as u32),
                        SVec(acc.iter().map(|z| Scalar::from_c64(*z)).collect()),
                    );
                }
            }
            for j in 0..dd {
                for k in 0..dd {
                    // L(u_jk) = iλ_jk - ½Σ_l ⟨a_lj, a_lk⟩
                    let mut ip = Complex64::new(0.0, 0.0);
                    for l in 0..dd {
                        ip += a[l][j]
                            .iter()
                            .zip(a[l][k].iter())
                            .map(|(x, y)| x.conj() * y)
                            .sum::<Complex64>();
                    }
                    let lv = Complex64::new(0.0, 1.0) * lambda[(j, k)] - 0.5 * ip;
                    gen_values.insert(Letter::new((j * dd + k) as u32), Scalar::from_c64(lv));
                    gen_values.insert(
                        Letter::starred((k * dd + j) as u32),
                        Scalar::from_c64((Complex64::new(0.0, -1.0) * lambda[(j, k)] - 0.5 * ip).conj().conj()),
                    );
                }
            }
            // L(u*_kj) = -iλ_jk - ½Σ⟨a_lj, a_lk⟩ stored above
        }
    }
    Ok(SchurmannTriple {
        name: "ud".into(),
        ctx,
        dim: h,
        rep: RepMatrixSet {
            matrices,
            gram: vec![Scalar::one(); h],
            band: 0,
            truncated_bottom: false,
        },
        cocycle: CocycleMap { vectors },
        gen_values,
        trivial_cocycle: None,
    })
}

/// Lindblad superoperator of ℒ(X) = i[M,X] + Σ_k (L^k)*XL^k - ½{X,(L^k)*L^k}
/// acting on column-stacked X.
pub struct LindbladGenerator {
    pub d: usize,
    pub superop: CMat,
}

pub fn lindblad_generator(m: &CMat, ls: &[CMat]) -> LindbladGenerator {
    let d = m.nrows();
    let id = linalg::identity(d);
    let i = Complex64::new(0.0, 1.0);
    // vec(AXB) = (Bᵀ ⊗ A) vec X
    let mut superop = linalg::kron(&id.mapv(|z| z), &m.mapv(|z| z * i))
        - linalg::kron(&m.t().mapv(|z| z * i), &id);
    for l in ls {
        let lsl = linalg::adjoint(l).dot(l);
        superop = superop
            + linalg::kron(&l.t().to_owned(), &linalg::adjoint(l))
            - linalg::kron(&lsl.t().mapv(|z| z * 0.5), &id)
            - linalg::kron(&id.mapv(|z| z * 0.5), &lsl);
    }
    LindbladGenerator { d, superop }
}

impl LindbladGenerator {
    /// τ_t(X) by the superoperator exponential.
    pub fn semigroup(&self, t: f64, x: &CMat) -> CMat {
        let e = linalg::expm(&self.superop.mapv(|z| z * t));
        let v = e.dot(&linalg::vec_mat(x));
        linalg::unvec_mat(&v, self.d)
    }

    /// Choi matrix of τ_t.
    pub fn choi(&self, t: f64) -> CMat {
        let d = self.d;
        let mut choi = Array2::zeros((d * d, d * d));
        for i in 0..d {
            for j in 0..d {
                let mut e = Array2::zeros((d, d));
                e[(i, j)] = Complex64::new(1.0, 0.0);
                let te = self.semigroup(t, &e);
                for r in 0..d {
                    for s in 0..d {
                        choi[(i * d + r, j * d + s)] = te[(r, s)];
                    }
                }
            }
        }
        choi
    }
}

/// HP cocycle on C^d ⊗ Γ: exact per-bin product of unitaries
/// expm(ℓ⊗A*(1_b) - ℓ†⊗A(1_b) + iM⊗Δt)·(w-thread)^{N_b}, satisfying the
/// increment identity by construction and reproducing the Lindblad
/// generator to first order in the bin width.
///
/// Each bin unitary is block diagonal over the occupation pattern of the
/// other bins and is stored in that block form.
pub struct BinUnitary {
    groups: Vec<(Vec<usize>, CMat)>,
    d: usize,
    fdim: usize,
}

impl BinUnitary {
    pub fn apply(&self, v: &CVec) -> CVec {
        let mut out = Array1::zeros(v.len());
        for (members, block) in &self.groups {
            let k = members.len();
            for r in 0..self.d {
                for (a_idx, &ia) in members.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..self.d {
                        for (b_idx, &ib) in members.iter().enumerate() {
                            acc += block[(r * k + a_idx, c * k + b_idx)]
                                * v[c * self.fdim + ib];
                        }
                    }
                    out[r * self.fdim + ia] = acc;
                }
            }
        }
        out
    }

    pub fn apply_adjoint(&self, v: &CVec) -> CVec {
        let mut out = Array1::zeros(v.len());
        for (members, block) in &self.groups {
            let k = members.len();
            for r in 0..self.d {
                for (a_idx, &ia) in members.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..self.d {
                        for (b_idx, &ib) in members.iter().enumerate() {
                            acc += block[(c * k + b_idx, r * k + a_idx)].conj()
                                * v[c * self.fdim + ib];
                        }
                    }
                    out[r * self.fdim + ia] = acc;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMat {
        let full = self.d * self.fdim;
        let mut m = Array2::zeros((full, full));
        for (members, block) in &self.groups {
            let k = members.len();
            for (a_idx, &ia) in members.iter().enumerate() {
                for (b_idx, &ib) in members.iter().enumerate() {
                    for r in 0..self.d {
                        for c in 0..self.d {
                            m[(r * self.fdim + ia, c * self.fdim + ib)] =
                                block[(r * k + a_idx, c * k + b_idx)];
                        }
                    }
                }
            }
        }
        m
    }
}

pub struct HpCocycle<'a> {
    pub spec: &'a UdGeneratorSpec,
    pub space: &'a FockSpace,
    bin_ops: Vec<BinUnitary>,
}

pub fn hp_cocycle<'a>(
    spec: &'a UdGeneratorSpec,
    space: &'a FockSpace,
) -> Result<HpCocycle<'a>, DilationError> {
    spec.validate()?;
    let d = spec.d();
    let mult = spec.multiplicity();
    if space.multiplicity != mult {
        return Err(DilationError::Fock(FockError::MultiplicityMismatch(
            mult,
            space.multiplicity,
        )));
    }
    let fdim = space.dim;
    let mut bin_ops = Vec::new();
    for b in 0..space.bins.len() {
        let (bs, bt) = space.bins[b];
        let dt = bt - bs;
        let ls: Vec<CMat> = match spec {
            UdGeneratorSpec::OneDimensional { l, .. } => vec![l.clone()],
            UdGeneratorSpec::Gaussian { ls, .. } => ls.clone(),
            UdGeneratorSpec::General { .. } => Vec::new(),
        };
        // the generator only touches the modes of bin b, so exponentiate on
        // the small factor C^d ⊗ Fock(bin b) separately for each pattern of
        // the remaining occupations (the total cutoff ties the factors)
        let bin_modes: Vec<usize> = (0..mult).map(|c| space.mode(b, c)).collect();
        let mut groups: std::collections::HashMap<Vec<u16>, Vec<usize>> =
            std::collections::HashMap::new();
        for i in 0..fdim {
            let occ = space.basis_occupation(i);
            let mut rest = occ.to_vec();
            for &m in &bin_modes {
                rest[m] = 0;
            }
            groups.entry(rest).or_default().push(i);
        }
        let sdt = dt.sqrt();
        let mut blocks: Vec<(Vec<usize>, CMat)> = Vec::new();
        for (_rest, members) in groups {
            let k = members.len();
            // local creation amplitudes between member states
            let mut local: CMat = Array2::zeros((d * k, d * k));
            for (a_idx, &ia) in members.iter().enumerate() {
                for (b_idx, &ib) in members.iter().enumerate() {
                    // ⟨ia| a†_(b,ν) |ib⟩ pattern per component
                    for (nu, l) in ls.iter().enumerate() {
                        let mode = bin_modes[nu];
                        let oa = space.basis_occupation(ia);
                        let ob = space.basis_occupation(ib);
                        let mut same = true;
                        for &m in &bin_modes {
                            if m != mode && oa[m] != ob[m] {
                                same = false;
                            }
                        }
                        if !same {
                            continue;
                        }
                        if oa[mode] == ob[mode] + 1 {
                            let amp = sdt * ((ob[mode] as f64) + 1.0).sqrt();
                            for r in 0..d {
                                for c in 0..d {
                                    // ℓ ⊗ a† - ℓ† ⊗ a
                                    local[(r * k + a_idx, c * k + b_idx)] +=
                                        l[(r, c)] * amp;
                                    local[(c * k + b_idx, r * k + a_idx)] -=
                                        l[(r, c)].conj() * amp;
                                }
                            }
                        }
                    }
                }
            }
            if let UdGeneratorSpec::Gaussian { m, .. } = spec {
                for (a_idx, _) in members.iter().enumerate() {
                    for r in 0..d {
                        for c in 0..d {
                            local[(r * k + a_idx, c * k + a_idx)] +=
                                m[(r, c)] * Complex64::new(0.0, dt);
                        }
                    }
                }
            }
            let e = linalg::expm(&local);
            blocks.push((members, e));
        }
        // conservation part: w^{N_b} per block column
        if let UdGeneratorSpec::OneDimensional { w, .. } = spec {
            for (members, block) in &mut blocks {
                let k = members.len();
                let mut combined = Array2::<Complex64>::zeros((d * k, d * k));
                for (b_idx, &ib) in members.iter().enumerate() {
                    let count: u32 = (0..mult)
                        .map(|c| space.basis_occupation(ib)[space.mode(b, c)] as u32)
                        .sum();
                    let wn = matrix_power(w, count);
                    for (a_idx, _) in members.iter().enumerate() {
                        for r in 0..d {
                            for c in 0..d {
                                let mut acc = Complex64::new(0.0, 0.0);
                                for m in 0..d {
                                    acc += block[(r * k + a_idx, m * k + b_idx)] * wn[(m, c)];
                                }
                                combined[(r * k + a_idx, c * k + b_idx)] = acc;
                            }
                        }
                    }
                }
                *block = combined;
            }
        }
        if matches!(spec, UdGeneratorSpec::General { .. }) {
            unimplemented!("general-family cocycle threading is not wired up");
        }
        bin_ops.push(BinUnitary {
            groups: blocks,
            d,
            fdim,
        });
    }
    Ok(HpCocycle {
        spec,
        space,
        bin_ops,
    })
}

fn matrix_power(m: &CMat, n: u32) -> CMat {
    let mut acc = linalg::identity(m.nrows());
    for _ in 0..n {
        acc = acc.dot(m);
    }
    acc
}

impl<'a> HpCocycle<'a> {
    /// U_{s,t} as the ordered product of the bin unitaries in [s, t)
    /// (dense; intended for small spaces).
    pub fn u(&self, s: f64, t: f64) -> Result<CMat, DilationError> {
        let range = self.space.bin_range(s, t).map_err(DilationError::Fock)?;
        let d = self.spec.d();
        let mut acc = linalg::identity(d * self.space.dim);
        for b in range {
            acc = acc.dot(&self.bin_ops[b].to_dense());
        }
        Ok(acc)
    }

    /// U_{s,t}† applied to a vector.
    pub fn apply_u_adjoint(&self, s: f64, t: f64, v: &CVec) -> Result<CVec, DilationError> {
        let range = self.space.bin_range(s, t).map_err(DilationError::Fock)?;
        let mut v = v.clone();
        for b in range {
            v = self.bin_ops[b].apply_adjoint(&v);
        }
        Ok(v)
    }

    /// Unitarity residual of U_{0,t} on a sample of basis columns.
    pub fn unitarity_residual(&self, t: f64) -> Result<f64, DilationError> {
        let range = self.space.bin_range(0.0, t).map_err(DilationError::Fock)?;
        let full = self.spec.d() * self.space.dim;
        let mut worst: f64 = 0.0;
        for col in (0..full).step_by((full / 64).max(1)) {
            let mut v: CVec = Array1::zeros(full);
            v[col] = Complex64::new(1.0, 0.0);
            let mut w = v.clone();
            for b in range.clone() {
                w = self.bin_ops[b].apply(&w);
            }
            for b in range.clone().rev() {
                w = self.bin_ops[b].apply_adjoint(&w);
            }
            let err: f64 = w
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(err);
        }
        Ok(worst)
    }

    /// E₀(U_t (X⊗1) U_t*): vacuum compression to M_d, computed from the d
    /// vectors U_t†(e_j ⊗ Ω).
    pub fn compress(&self, t: f64, x: &CMat) -> Result<CMat, DilationError> {
        let d = self.spec.d();
        let fdim = self.space.dim;
        let full = d * fdim;
        let mut vs = Vec::with_capacity(d);
        for j in 0..d {
            let mut e: CVec = Array1::zeros(full);
            e[j * fdim] = Complex64::new(1.0, 0.0); // e_j ⊗ Ω
            vs.push(self.apply_u_adjoint(0.0, t, &e)?);
        }
        // ⟨v_i, (X ⊗ 1) v_j⟩
        Ok(Array2::from_shape_fn((d, d), |(i, j)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..d {
                for c in 0..d {
                    if x[(r, c)].norm_sqr() == 0.0 {
                        continue;
                    }
                    for f in 0..fdim {
                        acc += vs[i][r * fdim + f].conj() * x[(r, c)] * vs[j][c * fdim + f];
                    }
                }
            }
            acc
        }))
    }
}

/// ‖E₀(U_t(X⊗1)U_t*) - τ_t(X)‖ for the generator associated to the spec.
pub fn dilation_check(
    spec: &UdGeneratorSpec,
    space: &FockSpace,
    t: f64,
    x: &CMat,
) -> Result<f64, DilationError> {
    let cocycle = hp_cocycle(spec, space)?;
    let compressed = cocycle.compress(t, x)?;
    let lind = lindblad_of_spec(spec);
    let expected = lind.semigroup(t, x);
    Ok(linalg::max_abs(&(&compressed - &expected)))
}

/// The Lindblad generator dilated by the cocycle of the spec.
pub fn lindblad_of_spec(spec: &UdGeneratorSpec) -> LindbladGenerator {
    match spec {
        UdGeneratorSpec::OneDimensional { w, l } => {
            // ℒ(X) = ℓ*wXw*ℓ - ½{X, ℓ*ℓ}: a Lindblad form with L¹ = w*ℓ
            let wl = linalg::adjoint(w).dot(l);
            let zero = Array2::zeros((w.nrows(), w.ncols()));
            lindblad_generator(&zero, &[wl])
        }
        UdGeneratorSpec::Gaussian { m, ls } => lindblad_generator(m, ls),
        UdGeneratorSpec::General { .. } => unimplemented!(),
    }
}

/// Bhat minimality: the dilation is minimal iff {I, L¹, …, Lⁿ} is linearly
/// independent; reports the rank of the span.
pub struct MinimalityReport {
    pub minimal: bool,
    pub rank: usize,
    pub n: usize,
}

pub fn minimality_check(ls: &[CMat]) -> MinimalityReport {
    let n = ls.len();
    let d = ls.first().map(|l| l.nrows()).unwrap_or(1);
    let mut m = SMat::zeros(n + 1, d * d);
    for c in 0..d {
        *m.at_mut(0, c * d + c) = Scalar::one();
    }
    for (r, l) in ls.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                *m.at_mut(r + 1, j * d + i) = Scalar::from_c64(l[(i, j)]);
            }
        }
    }
    let rank = rank(&m, 1e-10);
    MinimalityReport {
        minimal: rank == n + 1,
        rank,
        n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schurmann::verify_triple;
    use approx::assert_abs_diff_eq;

    fn e12(d: usize) -> CMat {
        let mut m = Array2::zeros((d, d));
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        m
    }

    #[test]
    fn lindblad_amplitude_damping() {
        // M = 0, L¹ = E₁₂ (d=2): τ_t(E₂₂) = e^{-t}E₂₂,
        // τ_t(E₁₁) = E₁₁ + (1-e^{-t})E₂₂
        let d = 2;
        let m = Array2::zeros((d, d));
        let lind = lindblad_generator(&m, &[e12(d)]);
        let t = 0.7;
        let mut e22 = Array2::zeros((d, d));
        e22[(1, 1)] = Complex64::new(1.0, 0.0);
        let out = lind.semigroup(t, &e22);
        assert_abs_diff_eq!(out[(1, 1)].re, (-t).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(out[(0, 0)].re, 0.0, epsilon = 1e-12);
        let mut e11 = Array2::zeros((d, d));
        e11[(0, 0)] = Complex64::new(1.0, 0.0);
        let out = lind.semigroup(t, &e11);
        assert_abs_diff_eq!(out[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[(1, 1)].re, 1.0 - (-t).exp(), epsilon = 1e-12);
    }

    #[test]
    fn lindblad_pure_hamiltonian() {
        // L-list empty: τ_t(X) = e^{itM}Xe^{-itM}
        let d = 2;
        let mut m = Array2::zeros((d, d));
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(-1.0, 0.0);
        let lind = lindblad_generator(&m, &[]);
        let x = e12(d);
        let t = 0.3;
        let out = lind.semigroup(t, &x);
        let phase = (Complex64::new(0.0, 2.0 * t)).exp();
        assert!((out[(0, 1)] - phase).norm() < 1e-12);
        // all zero -> identity semigroup
        let zero = Array2::zeros((d, d));
        let lind = lindblad_generator(&zero, &[]);
        let out = lind.semigroup(1.0, &x);
        assert!(linalg::max_abs(&(&out - &x)) < 1e-12);
    }

    #[test]
    fn semigroup_law_and_complete_positivity() {
        let d = 2;
        let mut m = Array2::zeros((d, d));
        m[(0, 1)] = Complex64::new(0.0, 0.5);
        m[(1, 0)] = Complex64::new(0.0, -0.5);
        let lind = lindblad_generator(&m, &[e12(d)]);
        let x = {
            let mut x: CMat = Array2::zeros((d, d));
            x[(0, 0)] = Complex64::new(0.3, 0.0);
            x[(0, 1)] = Complex64::new(0.2, -0.1);
            x[(1, 0)] = Complex64::new(0.2, 0.1);
            x[(1, 1)] = Complex64::new(-1.0, 0.0);
            x
        };
        let (s, t) = (0.4, 0.9);
        let lhs = lind.semigroup(s + t, &x);
        let rhs = lind.semigroup(s, &lind.semigroup(t, &x));
        assert!(linalg::max_abs(&(&lhs - &rhs)) < 1e-10);
        for t in [0.1, 1.0] {
            let choi = lind.choi(t);
            assert!(linalg::min_eigenvalue(&choi) > -1e-10);
        }
    }

    #[test]
    fn ud_triple_trivial_and_values() {
        // w = I, ℓ = 0: trivial triple
        let d = 2;
        let spec = UdGeneratorSpec::OneDimensional {
            w: linalg::identity(d),
            l: Array2::zeros((d, d)),
        };
        let t = build_ud_triple(&spec, 4).unwrap();
        for l in t.ctx.letters() {
            assert!(t.eta_letter(&l).is_zero());
            assert!(t.gen_letter(&l).is_zero());
        }
        let rep = verify_triple(&t, 1e-10);
        assert!(rep.pass(1e-10));
        // (w,ℓ): L(u_ij) = -½(ℓ*ℓ)_ij and the relations hold
        let mut w: CMat = Array2::zeros((d, d));
        w[(0, 0)] = Complex64::new(1.0, 0.0);
        w[(1, 1)] = Complex64::new(-1.0, 0.0);
        let spec = UdGeneratorSpec::OneDimensional { w, l: e12(d) };
        let t = build_ud_triple(&spec, 4).unwrap();
        let rep = verify_triple(&t, 1e-10);
        assert!(
            rep.pass(1e-10),
            "residuals {:?} {:?} {:?} {:?}",
            rep.rep_residual,
            rep.cocycle_residual,
            rep.coboundary_residual,
            rep.hermitian_residual
        );
        // L(u_12): ℓ*ℓ = E₂₂: L(u_22) = -1/2
        let l22 = t.gen_letter(&Letter::new(3));
        assert!(l22.eq_scalar(&Scalar::rational(-1, 2)));
    }

    #[test]
    fn gaussian_ud_triple_verifies() {
        let d = 2;
        let mut m: CMat = Array2::zeros((d, d));
        m[(0, 1)] = Complex64::new(0.3, 0.4);
        m[(1, 0)] = Complex64::new(0.3, -0.4);
        let spec = UdGeneratorSpec::Gaussian {
            m,
            ls: vec![e12(d), linalg::identity(d).mapv(|z| z * Complex64::new(0.0, 1.0))],
        };
        let t = build_ud_triple(&spec, 4).unwrap();
        let rep = verify_triple(&t, 1e-10);
        assert!(
            rep.pass(1e-10),
            "residuals {} {} {} {}",
            rep.rep_residual,
            rep.cocycle_residual,
            rep.coboundary_residual,
            rep.hermitian_residual
        );
    }

    #[test]
    fn cocycle_increment_and_unitarity() {
        let d = 2;
        let spec = UdGeneratorSpec::OneDimensional {
            w: linalg::identity(d),
            l: e12(d),
        };
        let space = FockSpace::new(4, 1.0, 1, 3).unwrap();
        let c = hp_cocycle(&spec, &space).unwrap();
        // increment identity exact by construction
        let lhs = c.u(0.0, 0.5).unwrap().dot(&c.u(0.5, 1.0).unwrap());
        let rhs = c.u(0.0, 1.0).unwrap();
        assert!(linalg::max_abs(&(&lhs - &rhs)) < 1e-13);
        // ℓ = 0 gives the identity cocycle
        let trivial = UdGeneratorSpec::OneDimensional {
            w: linalg::identity(d),
            l: Array2::zeros((d, d)),
        };
        let c0 = hp_cocycle(&trivial, &space).unwrap();
        let u = c0.u(0.0, 1.0).unwrap();
        assert!(linalg::max_abs(&(&u - &linalg::identity(u.nrows()))) < 1e-12);
        // the per-bin exponential construction is exactly unitary at every
        // cutoff (the truncated generator stays anti-hermitian), so the
        // reported residual is pinned at rounding scale and cannot grow
        let mut prev = f64::INFINITY;
        for n in [2usize, 4] {
            let space = FockSpace::new(4, 1.0, 1, n).unwrap();
            let c = hp_cocycle(&spec, &space).unwrap();
            let res = c.unitarity_residual(1.0).unwrap();
            assert!(res <= prev.max(1e-12));
            assert!(res < 1e-10, "unitarity residual {res}");
            prev = res;
        }
    }

    #[test]
    fn amplitude_damping_dilation_converges() {
        let d = 2;
        let spec = UdGeneratorSpec::OneDimensional {
            w: linalg::identity(d),
            l: e12(d),
        };
        let t = 0.25;
        let x = {
            let mut x: CMat = Array2::zeros((d, d));
            x[(1, 1)] = Complex64::new(1.0, 0.0);
            x[(0, 1)] = Complex64::new(0.5, 0.2);
            x[(1, 0)] = Complex64::new(0.5, -0.2);
            x
        };
        let mut errors = Vec::new();
        for bins in [8usize, 16] {
            let space = FockSpace::new(bins, t, 1, 3).unwrap();
            errors.push(dilation_check(&spec, &space, t, &x).unwrap());
        }
        assert!(errors[0] <= 5e-2, "8-bin residual {}", errors[0]);
        let ratio = errors[0] / errors[1];
        assert!(
            (1.6..=2.4).contains(&ratio),
            "halving ratio {ratio} from {errors:?}"
        );
        // t = 0: exact
        let space = FockSpace::new(8, t, 1, 3).unwrap();
        let c = hp_cocycle(&spec, &space).unwrap();
        let compressed = c.compress(0.0, &x).unwrap();
        assert!(linalg::max_abs(&(&compressed - &x)) < 1e-14);
    }

    #[test]
    fn rotated_damping_generator_matches_lemma() {
        // w = diag(1,-1), ℓ = E₁₂: generator ℓ*wXw*ℓ - ½{X, ℓ*ℓ}
        let d = 2;
        let mut w: CMat = Array2::zeros((d, d));
        w[(0, 0)] = Complex64::new(1.0, 0.0);
        w[(1, 1)] = Complex64::new(-1.0, 0.0);
        let spec = UdGeneratorSpec::OneDimensional { w: w.clone(), l: e12(d) };
        let t = 0.25;
        let x = {
            let mut x: CMat = Array2::zeros((d, d));
            x[(0, 0)] = Complex64::new(0.7, 0.0);
            x[(0, 1)] = Complex64::new(0.1, -0.3);
            x[(1, 0)] = Complex64::new(0.1, 0.3);
            x[(1, 1)] = Complex64::new(-0.2, 0.0);
            x
        };
        let space = FockSpace::new(16, t, 1, 3).unwrap();
        let err = dilation_check(&spec, &space, t, &x).unwrap();
        assert!(err < 3e-2, "residual {err}");
    }

    #[test]
    fn minimality_rules() {
        let d = 2;
        // ℓ = λ·I with w = I: not minimal
        let r = minimality_check(&[linalg::identity(d).mapv(|z| z * Complex64::new(0.7, 0.0))]);
        assert!(!r.minimal);
        assert_eq!(r.rank, 1);
        // L¹ = E₁₂: minimal
        let r = minimality_check(&[e12(d)]);
        assert!(r.minimal);
        assert_eq!(r.rank, 2);
        // empty list: rank 1, n + 1 = 1: degenerate case flagged minimal
        let r = minimality_check(&[]);
        assert_eq!(r.rank, 1);
        assert!(r.minimal);
        // random 10-fold check against direct linear independence
        let mut seed = 1234u64;
        let mut rand_mat = |deps: Option<(usize, usize)>| -> Vec<CMat> {
            let mut ls = Vec::new();
            for _ in 0..3 {
                let mut m: CMat = Array2::zeros((d, d));
                for i in 0..d {
                    for j in 0..d {
                        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                        let re = ((seed >> 33) % 17) as f64 - 8.0;
                        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                        let im = ((seed >> 33) % 11) as f64 - 5.0;
                        m[(i, j)] = Complex64::new(re, im);
                    }
                }
                ls.push(m);
            }
            if let Some((a, b)) = deps {
                ls[a] = ls[b].clone() + linalg::identity(d);
            }
            ls
        };
        for trial in 0..10 {
            let dep = trial % 2 == 0;
            let ls = rand_mat(if dep { Some((0, 1)) } else { None });
            let rep = minimality_check(&ls);
            // direct rank via float Gram
            let mut vecs: Vec<CVec> = vec![linalg::vec_mat(&linalg::identity(d))];
            for l in &ls {
                vecs.push(linalg::vec_mat(l));
            }
            let k = vecs.len();
            let mut gram = Array2::zeros((k, k));
            for i in 0..k {
                for j in 0..k {
                    gram[(i, j)] = vecs[i]
                        .iter()
                        .zip(vecs[j].iter())
                        .map(|(a, b)| a.conj() * b)
                        .sum::<Complex64>();
                }
            }
            let eigs = linalg::hermitian_eigenvalues(&gram);
            let scale = eigs.last().copied().unwrap_or(1.0);
            let direct_rank = eigs.iter().filter(|&&e| e > 1e-9 * scale).count();
            assert_eq!(rep.rank, direct_rank, "trial {trial}");
            assert_eq!(rep.minimal, direct_rank == ls.len() + 1);
        }
    }

    #[test]
    fn realized_operators_preserve_ud_relations() {
        // Σ_j j(u_kj) j(u*_lj) = δ_kl on the compressed blocks (vacuum rows)
        let d = 2;
        let mut w: CMat = Array2::zeros((d, d));
        w[(0, 1)] = Complex64::new(1.0, 0.0);
        w[(1, 0)] = Complex64::new(1.0, 0.0);
        let spec = UdGeneratorSpec::OneDimensional { w, l: e12(d) };
        let space = FockSpace::new(2, 0.5, 1, 4).unwrap();
        let c = hp_cocycle(&spec, &space).unwrap();
        let u = c.u(0.0, 0.5).unwrap();
        // U unitary ⇔ the u_ij-blocks satisfy the relations; residual at
        // truncation scale
        let n = u.nrows();
        let res = linalg::max_abs(&(&u.dot(&linalg::adjoint(&u)) - &linalg::identity(n)));
        assert!(res < 1e-6, "relation residual {res}");
    }
}
