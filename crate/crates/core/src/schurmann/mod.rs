//! Schürmann triples: representation matrices, cocycle vectors and
//! generator values on a truncated representation space, together with
//! their extension to algebra monomials, verification, moments and
//! characteristic exponents.

pub mod catalog;
pub mod laws;
pub mod nogo;

pub use catalog::{build_catalog_triple, catalog_entries, CatalogEntry, CatalogParams};
pub use laws::{classify_marginal, law_moments, ClassicalLawSpec, LawKind};
pub use nogo::{no_go_chain, NoGoReport};

use crate::algebra::{AlgebraCtx, AlgebraError, AlgebraKind, FreePolynomial, FreeWord, Letter};
use crate::linalg::{self, CMat};
use crate::scalar::Scalar;
use crate::smat::{inner, SMat, SVec};
use ndarray::Array2;
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TripleError {
    #[error("unknown catalog id {0}")]
    UnknownCatalog(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("truncation too shallow: requested depth {0}, exact depth {1}")]
    TruncationTooShallow(usize, usize),
    #[error("series diverges; estimated radius {0}")]
    SeriesDiverges(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Representation matrices per generator letter on a truncated space.
#[derive(Clone, Debug)]
pub struct RepMatrixSet {
    pub matrices: BTreeMap<Letter, SMat>,
    /// Diagonal Gram weights of the (possibly unnormalized) basis.
    pub gram: Vec<Scalar>,
    /// Largest index shift any generator matrix performs; rows further than
    /// `degree * band` from the truncation edge are exact.
    pub band: usize,
    /// Whether low indices are also truncated (two-sided families).
    pub truncated_bottom: bool,
}

/// Cocycle vectors per generator letter.
#[derive(Clone, Debug)]
pub struct CocycleMap {
    pub vectors: BTreeMap<Letter, SVec>,
}

/// A Schürmann triple (ρ, η, L) over an algebra context.
#[derive(Clone, Debug)]
pub struct SchurmannTriple {
    pub name: String,
    pub ctx: AlgebraCtx,
    pub dim: usize,
    pub rep: RepMatrixSet,
    pub cocycle: CocycleMap,
    pub gen_values: BTreeMap<Letter, Scalar>,
    /// Set when the cocycle is trivial, η(u) = ρ(u)ω: the vector ω.
    pub trivial_cocycle: Option<SVec>,
}

impl SchurmannTriple {
    pub fn gram(&self) -> &[Scalar] {
        &self.rep.gram
    }

    /// Number of leading rows exact for expressions of the given degree.
    pub fn exact_rows(&self, degree: usize) -> usize {
        self.dim.saturating_sub(degree * self.rep.band)
    }

    /// First exact row for two-sided truncations.
    pub fn exact_rows_low(&self, degree: usize) -> usize {
        if self.rep.truncated_bottom {
            (degree * self.rep.band).min(self.dim)
        } else {
            0
        }
    }

    pub fn rho_letter(&self, l: &Letter) -> SMat {
        if let Some(m) = self.rep.matrices.get(l) {
            return m.clone();
        }
        // adjoint of the unstarred letter w.r.t. the weighted inner product
        let base = Letter {
            gen: l.gen,
            star: !l.star,
        };
        self.rep.matrices[&base].adjoint_weighted(&self.rep.gram)
    }

    /// Cocycle value on a letter. Canonical enveloping monomials never carry
    /// starred letters (the involution resolves in the algebra), so for all
    /// kinds this is a plain lookup; missing letters default to zero.
    pub fn eta_letter(&self, l: &Letter) -> SVec {
        self.cocycle
            .vectors
            .get(l)
            .cloned()
            .unwrap_or_else(|| SVec::zeros(self.dim))
    }

    /// Generator value on a letter; starred letters missing from the table
    /// fall back to hermiticity, L(l*) = conj L(l).
    pub fn gen_letter(&self, l: &Letter) -> Scalar {
        if let Some(v) = self.gen_values.get(l) {
            return v.clone();
        }
        if l.star {
            if let Some(v) = self.gen_values.get(&Letter::new(l.gen)) {
                return v.conj();
            }
        }
        Scalar::zero()
    }

    /// ρ extended multiplicatively to a canonical word.
    pub fn rho_word(&self, w: &FreeWord) -> SMat {
        let mut m = SMat::identity(self.dim);
        for l in &w.0 {
            m = m.matmul(&self.rho_letter(l));
        }
        m
    }

    pub fn rho_poly(&self, p: &FreePolynomial) -> SMat {
        let mut acc = SMat::zeros(self.dim, self.dim);
        for (w, c) in &p.terms {
            acc = acc.add(&self.rho_word(w).scale(c));
        }
        acc
    }

    /// η extended by the cocycle rule η(uv) = ρ(u)η(v) + η(u)ε(v).
    pub fn eta_word(&self, w: &FreeWord) -> SVec {
        if w.is_unit() {
            return SVec::zeros(self.dim);
        }
        let mut eta = self.eta_letter(&w.0[0]);
        let mut rho_prefix = self.rho_letter(&w.0[0]);
        for l in &w.0[1..] {
            let eps = self.ctx.counit_word(&FreeWord(vec![*l]));
            eta = rho_prefix
                .apply(&self.eta_letter(l))
                .add(&eta.scale(&eps));
            rho_prefix = rho_prefix.matmul(&self.rho_letter(l));
        }
        eta
    }

    pub fn eta_poly(&self, p: &FreePolynomial) -> SVec {
        let mut acc = SVec::zeros(self.dim);
        for (w, c) in &p.terms {
            acc = acc.add(&self.eta_word(w).scale(c));
        }
        acc
    }

    /// L extended by L(uv) = ε(u)L(v) + ⟨η(u*), η(v)⟩ + L(u)ε(v).
    pub fn gen_word(&self, w: &FreeWord) -> Scalar {
        if w.is_unit() {
            return Scalar::zero();
        }
        if w.len() == 1 {
            return self.gen_letter(&w.0[0]);
        }
        // split w = u·v with v the last letter
        let u = FreeWord(w.0[..w.len() - 1].to_vec());
        let v = FreeWord(vec![w.0[w.len() - 1]]);
        let eps_u = self.ctx.counit_word(&u);
        let eps_v = self.ctx.counit_word(&v);
        let ustar = self.ctx.star(&FreePolynomial::word(u.clone()));
        let eta_ustar = self.eta_poly(&ustar);
        let mut acc = &eps_u * &self.gen_word(&v);
        acc += inner(Some(self.gram()), &eta_ustar, &self.eta_word(&v));
        acc += &self.gen_word(&u) * &eps_v;
        acc
    }

    pub fn gen_poly(&self, p: &FreePolynomial) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, c) in &p.terms {
            acc += c * &self.gen_word(w);
        }
        acc
    }

    /// Weighted inner product of the representation space.
    pub fn inner(&self, x: &SVec, y: &SVec) -> Scalar {
        inner(Some(self.gram()), x, y)
    }

    /// Orthonormalizing change of basis: returns the triple data in an
    /// orthonormal basis as float matrices (e_n = v_n / √w_n).
    pub fn rho_letter_orthonormal(&self, l: &Letter) -> CMat {
        let m = self.rho_letter(l);
        let w: Vec<f64> = self.gram().iter().map(|g| g.to_c64().re).collect();
        Array2::from_shape_fn((self.dim, self.dim), |(i, j)| {
            m.at(i, j).to_c64() * (w[i].sqrt() / w[j].sqrt())
        })
    }

    pub fn eta_letter_orthonormal(&self, l: &Letter) -> Vec<Complex64> {
        let v = self.eta_letter(l);
        self.gram()
            .iter()
            .zip(&v.0)
            .map(|(g, x)| x.to_c64() * g.to_c64().re.sqrt())
            .collect()
    }

    pub fn rho_poly_orthonormal(&self, p: &FreePolynomial) -> CMat {
        let mut acc = Array2::zeros((self.dim, self.dim));
        for (w, c) in &p.terms {
            let mut m = linalg::identity(self.dim);
            for l in &w.0 {
                m = m.dot(&self.rho_letter_orthonormal(l));
            }
            acc = acc + m.mapv(|z| z * c.to_c64());
        }
        acc
    }

    pub fn eta_poly_orthonormal(&self, p: &FreePolynomial) -> Vec<Complex64> {
        let v = self.eta_poly(p);
        self.gram()
            .iter()
            .zip(&v.0)
            .map(|(g, x)| x.to_c64() * g.to_c64().re.sqrt())
            .collect()
    }
}

/// Residual report from [`verify_triple`].
#[derive(Clone, Debug)]
pub struct TripleReport {
    pub rep_residual: f64,
    pub cocycle_residual: f64,
    pub coboundary_residual: f64,
    pub hermitian_residual: f64,
}

impl TripleReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.rep_residual <= tol
            && self.cocycle_residual <= tol
            && self.coboundary_residual <= tol
            && self.hermitian_residual <= tol
    }
}

/// Defining relation pairs (lhs ≡ rhs) of the context's algebra, used to
/// verify that (ρ, η, L) factor through the quotient.
fn relation_pairs(ctx: &AlgebraCtx) -> Vec<(FreePolynomial, FreePolynomial, usize)> {
    let mut out = Vec::new();
    match &ctx.kind {
        AlgebraKind::Enveloping(lie) => {
            for i in 0..lie.dim {
                for j in 0..i {
                    if lie.pair_lossy(i, j) {
                        continue;
                    }
                    // X_i X_j = X_j X_i + [X_i, X_j]
                    let lhs = FreePolynomial::word(FreeWord(vec![
                        Letter::new(i as u32),
                        Letter::new(j as u32),
                    ]));
                    let mut rhs = FreePolynomial::word(FreeWord(vec![
                        Letter::new(j as u32),
                        Letter::new(i as u32),
                    ]));
                    for (k, c) in lie.bracket(i, j).iter().enumerate() {
                        rhs.add_term(FreeWord::gen(k as u32), c.clone());
                    }
                    out.push((lhs, rhs, 2));
                }
            }
        }
        AlgebraKind::UnitaryGroup { d } => {
            let d = *d;
            for k in 0..d {
                for l in 0..d {
                    let mut row = FreePolynomial::zero();
                    let mut col = FreePolynomial::zero();
                    for j in 0..d {
                        row.add_term(
                            FreeWord(vec![
                                Letter::new((k * d + j) as u32),
                                Letter::starred((l * d + j) as u32),
                            ]),
                            Scalar::one(),
                        );
                        col.add_term(
                            FreeWord(vec![
                                Letter::starred((j * d + k) as u32),
                                Letter::new((j * d + l) as u32),
                            ]),
                            Scalar::one(),
                        );
                    }
                    let delta = if k == l {
                        FreePolynomial::one()
                    } else {
                        FreePolynomial::zero()
                    };
                    out.push((row, delta.clone(), 2));
                    out.push((col, delta, 2));
                }
            }
        }
        AlgebraKind::Azema { q } => {
            let pairs: Vec<(Letter, Letter, Scalar)> = vec![
                (Letter::new(1), Letter::new(0), q.clone()),
                (Letter::starred(1), Letter::new(0), q.conj()),
                (Letter::starred(0), Letter::new(1), q.clone()),
                (Letter::starred(0), Letter::starred(1), q.conj()),
                (Letter::starred(1), Letter::new(1), Scalar::one()),
            ];
            for (a, b, c) in pairs {
                let lhs = FreePolynomial::word(FreeWord(vec![a, b]));
                let rhs = FreePolynomial::monomial(FreeWord(vec![b, a]), c);
                out.push((lhs, rhs, 2));
            }
        }
        AlgebraKind::Free { .. } => {}
        AlgebraKind::PExtension { gens, .. } => {
            // p² = p
            let pl = Letter::new(*gens as u32);
            let lhs = FreePolynomial::word(FreeWord(vec![pl, pl]));
            let rhs = FreePolynomial::word(FreeWord(vec![pl]));
            out.push((lhs, rhs, 2));
        }
    }
    out
}

/// Check the triple axioms on the defining relations, restricted to rows
/// that are exact at the current truncation.
pub fn verify_triple(t: &SchurmannTriple, _tol: f64) -> TripleReport {
    let mut rep_residual: f64 = 0.0;
    let mut cocycle_residual: f64 = 0.0;
    let mut coboundary_residual: f64 = 0.0;
    let mut hermitian_residual: f64 = 0.0;

    for (lhs, rhs, deg) in relation_pairs(&t.ctx) {
        let hi = t.exact_rows(deg);
        let lo = t.exact_rows_low(deg);
        let dm = t.rho_poly(&lhs).sub(&t.rho_poly(&rhs));
        for i in lo..hi {
            for j in 0..t.dim {
                rep_residual = rep_residual.max(dm.at(i, j).abs());
            }
        }
        let dv = t.eta_poly(&lhs).sub(&t.eta_poly(&rhs));
        for i in lo..hi {
            cocycle_residual = cocycle_residual.max(dv.0[i].abs());
        }
        if t.exact_rows(deg) == t.dim && t.exact_rows_low(deg) == 0 {
            let dl = &t.gen_poly(&lhs) - &t.gen_poly(&rhs);
            coboundary_residual = coboundary_residual.max(dl.abs());
        }
    }

    // ρ(l*) = ρ(l)^† and hermiticity of L on generators
    for l in t.ctx.letters() {
        let star = t.ctx.star(&FreePolynomial::word(FreeWord(vec![l])));
        let lhs = t.rho_poly(&star);
        let rhs = t.rho_letter(&l).adjoint_weighted(t.gram());
        let hi = t.exact_rows(1);
        let lo = t.exact_rows_low(1);
        let dm = lhs.sub(&rhs);
        for i in lo..hi {
            for j in lo..hi {
                rep_residual = rep_residual.max(dm.at(i, j).abs());
            }
        }
        let dl = &t.gen_poly(&star) - &t.gen_letter(&l).conj();
        hermitian_residual = hermitian_residual.max(dl.abs());
    }

    TripleReport {
        rep_residual,
        cocycle_residual,
        coboundary_residual,
        hermitian_residual,
    }
}

/// L(Y^k) for k = 1..n via the triple, then the marginal moments
/// m_k(t) of the associated classical process by the triangular
/// moment recursion m_k'(t) = Σ_j C(k,j) m_j(t) L(Y^{k-j}).
///
/// Exact (polynomial in t) when the triple data is exact.
pub fn moments_from_triple(
    t: &SchurmannTriple,
    y: &FreePolynomial,
    n: usize,
    time: &Scalar,
) -> Result<Vec<Scalar>, TripleError> {
    let exact_depth = if t.rep.band == 0 {
        usize::MAX
    } else {
        2 * (t.dim / (2 * t.rep.band.max(1)))
    };
    if t.rep.band > 0 && n > exact_depth {
        return Err(TripleError::TruncationTooShallow(n, exact_depth));
    }
    // cumulant values L(Y^k)
    let mut l_pow = Vec::with_capacity(n + 1);
    l_pow.push(Scalar::zero()); // unused L(Y^0)
    let mut y_pow = FreePolynomial::one();
    for _ in 1..=n {
        y_pow = t.ctx.mul(&y_pow, y);
        l_pow.push(t.gen_poly(&y_pow));
    }
    // moment polynomials in t
    let binom = |k: usize, j: usize| -> Scalar {
        let mut acc = Scalar::one();
        for i in 0..j {
            acc = &acc * &Scalar::int((k - i) as i64);
            acc = &acc / &Scalar::int((i + 1) as i64);
        }
        acc
    };
    // m_k stored as coefficient vectors in t
    let mut polys: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
    for k in 1..=n {
        // dm_k/dt = Σ_{j<k} C(k,j) m_j(t) L(Y^{k-j})
        let mut deriv = vec![Scalar::zero(); k];
        for j in 0..k {
            let c = &binom(k, j) * &l_pow[k - j];
            if c.is_zero() {
                continue;
            }
            for (p, coeff) in polys[j].iter().enumerate() {
                deriv[p] = &deriv[p] + &(coeff * &c);
            }
        }
        // integrate with m_k(0) = 0
        let mut poly = vec![Scalar::zero(); k + 1];
        for (p, coeff) in deriv.iter().enumerate() {
            poly[p + 1] = coeff / &Scalar::int((p + 1) as i64);
        }
        polys.push(poly);
    }
    let mut out = Vec::with_capacity(n);
    for poly in polys.iter().skip(1) {
        let mut acc = Scalar::zero();
        let mut tp = Scalar::one();
        for coeff in poly {
            acc += coeff * &tp;
            tp = &tp * time;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Characteristic exponent Ψ(λ) on a grid.
///
/// Uses the series iλL(Y) + Σ_{n≥2} (iλ)^n/n! ⟨η(Y*), ρ(Y)^{n-2} η(Y)⟩;
/// for trivial-cocycle triples the spectral (compound Poisson) form
/// ⟨ω, (e^{iλρ(Y)} - 1)ω⟩ is used instead.
pub fn characteristic_exponent(
    t: &SchurmannTriple,
    y: &FreePolynomial,
    lambdas: &[f64],
    series_order: usize,
) -> Result<Vec<Complex64>, TripleError> {
    let rho_y = t.rho_poly_orthonormal(y);
    if let Some(omega) = &t.trivial_cocycle {
        // spectral form
        let w: Vec<Complex64> = t
            .gram()
            .iter()
            .zip(&omega.0)
            .map(|(g, x)| x.to_c64() * Complex64::new(g.to_c64().re.sqrt(), 0.0))
            .collect();
        let mut out = Vec::with_capacity(lambdas.len());
        for &lam in lambdas {
            let e = linalg::expm(&rho_y.mapv(|z| z * Complex64::new(0.0, lam)));
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..t.dim {
                for j in 0..t.dim {
                    let delta = if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    acc += w[i].conj() * (e[(i, j)] - delta) * w[j];
                }
            }
            out.push(acc);
        }
        return Ok(out);
    }

    let ystar = t.ctx.star(y);
    let eta_ystar = t.eta_poly_orthonormal(&ystar);
    let eta_y = t.eta_poly_orthonormal(y);
    let l_y = t.gen_poly(y).to_c64();
    let mut out = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let il = Complex64::new(0.0, lam);
        let mut acc = il * l_y;
        let mut vec = eta_y.clone();
        let mut coeff = il * il / 2.0;
        let mut prev_term = f64::INFINITY;
        for n in 2..=series_order {
            let term: Complex64 = eta_ystar
                .iter()
                .zip(&vec)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                * coeff;
            acc += term;
            // divergence detection by term growth
            let mag = term.norm();
            if n > series_order / 2 && mag > prev_term && mag > 1e-6 {
                let radius = lam * prev_term / mag.max(1e-300);
                return Err(TripleError::SeriesDiverges(radius));
            }
            prev_term = mag.max(1e-300);
            // advance: vec = ρ(Y) vec, coeff *= iλ/(n+1)
            let mut next = vec![Complex64::new(0.0, 0.0); t.dim];
            for i in 0..t.dim {
                for j in 0..t.dim {
                    next[i] += rho_y[(i, j)] * vec[j];
                }
            }
            vec = next;
            coeff *= il / (n as f64 + 1.0);
        }
        out.push(acc);
    }
    Ok(out)
}

/// GNS-type construction of a Schürmann triple from a generator functional
/// on a context, truncated to monomials of degree ≤ `depth` (float).
pub fn gns_triple_from_generator(
    ctx: &AlgebraCtx,
    gen: &crate::algebra::Functional,
    depth: usize,
    tol: f64,
) -> Result<SchurmannTriple, TripleError> {
    let kere: Vec<FreeWord> = ctx
        .basis(depth)
        .into_iter()
        .filter(|w| !w.is_unit())
        .collect();
    let n = kere.len();
    let centered = |w: &FreeWord| -> FreePolynomial {
        let eps = ctx.counit_word(w);
        FreePolynomial::word(w.clone()).sub(&FreePolynomial::monomial(FreeWord::unit(), eps))
    };
    let mut gram = Array2::<Complex64>::zeros((n, n));
    for (i, u) in kere.iter().enumerate() {
        let us = ctx.star(&centered(u));
        for (j, v) in kere.iter().enumerate() {
            let prod = ctx.mul(&us, &centered(v));
            gram[(i, j)] = gen.eval_in(ctx, &prod)?.to_c64();
        }
    }
    // pivoted Cholesky-style orthogonalization of the Gram matrix
    let mut vectors: Vec<Vec<Complex64>> = Vec::new(); // coords of η(b_i) so far
    let mut coords: Vec<Vec<Complex64>> = vec![Vec::new(); n];
    for i in 0..n {
        // residual norm² of b_i against current basis
        let mut coord = Vec::with_capacity(vectors.len());
        for basis_vec in &vectors {
            // ⟨basis_k, b_i⟩ = Σ_j conj(c_kj) G(j, i)
            let mut ip = Complex64::new(0.0, 0.0);
            for (j, c) in basis_vec.iter().enumerate() {
                ip += c.conj() * gram[(j, i)];
            }
            coord.push(ip);
        }
        let norm2 = gram[(i, i)].re - coord.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if norm2 > tol {
            // new basis direction: b_i minus its projection, normalized
            let scale = 1.0 / norm2.sqrt();
            let mut rep = vec![Complex64::new(0.0, 0.0); n];
            rep[i] = Complex64::new(scale, 0.0);
            for (k, basis_vec) in vectors.iter().enumerate() {
                for (j, c) in basis_vec.iter().enumerate() {
                    rep[j] -= coord[k] * c * scale;
                }
            }
            coord.push(Complex64::new(norm2.sqrt(), 0.0));
            vectors.push(rep);
        }
        coords[i] = coord;
    }
    let d = vectors.len();
    let eta_of = |i: usize| -> SVec {
        let mut v = SVec::zeros(d);
        for (k, c) in coords[i].iter().enumerate() {
            v.0[k] = Scalar::from_c64(*c);
        }
        v
    };
    // ρ(letter) η(b_j) = η(l·b_j) - η(l) ε(b_j); least squares over columns
    let index: BTreeMap<&FreeWord, usize> = kere.iter().zip(0..).collect();
    let mut rep = BTreeMap::new();
    let mut cocycle = BTreeMap::new();
    let mut gen_values = BTreeMap::new();
    for l in ctx.letters() {
        let lw = FreeWord(vec![l]);
        if let Some(&i) = index.get(&lw) {
            cocycle.insert(l, eta_of(i));
            gen_values.insert(l, gen.eval_in(ctx, &centered(&lw))?);
        } else {
            cocycle.insert(l, SVec::zeros(d));
            gen_values.insert(l, Scalar::zero());
        }
        // build ρ(l) as matrix on the GNS basis via its action on η(b_j)
        let mut m = Array2::<Complex64>::zeros((d, d));
        let mut weight = Array2::<Complex64>::zeros((d, d));
        for (j, b) in kere.iter().enumerate() {
            let pb = ctx.mul(&FreePolynomial::word(lw.clone()), &centered(b));
            // η of the product polynomial, expanded over the stored basis
            let mut target = vec![Complex64::new(0.0, 0.0); d];
            let mut ok = true;
            for (w, c) in &pb.terms {
                if w.is_unit() {
                    continue;
                }
                match index.get(w) {
                    Some(&k) => {
                        for (s, v) in coords[k].iter().enumerate() {
                            target[s] += c.to_c64() * v;
                        }
                    }
                    None => {
                        ok = false; // beyond truncation depth
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let source = &coords[j];
            for r in 0..d {
                for s in 0..source.len() {
                    m[(r, s)] += target[r] * source[s].conj();
                    weight[(r, s)] += Complex64::new(source[s].norm_sqr(), 0.0);
                }
            }
        }
        // normal-equation style averaging: ρ[r][s] ≈ Σ target·conj(source) / Σ |source|²
        let mut rho = SMat::zeros(d, d);
        // solve ρ · C = T in least squares where columns of C are coords
        let mut cmat = Array2::<Complex64>::zeros((d, kere.len()));
        let mut tmat = Array2::<Complex64>::zeros((d, kere.len()));
        let mut used = 0usize;
        for (j, b) in kere.iter().enumerate() {
            let pb = ctx.mul(&FreePolynomial::word(lw.clone()), &centered(b));
            let mut target = vec![Complex64::new(0.0, 0.0); d];
            let mut ok = true;
            for (w, c) in &pb.terms {
                if w.is_unit() {
                    continue;
                }
                match index.get(w) {
                    Some(&k) => {
                        for (s, v) in coords[k].iter().enumerate() {
                            target[s] += c.to_c64() * v;
                        }
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            for r in 0..coords[j].len() {
                cmat[(r, used)] = coords[j][r];
            }
            for r in 0..d {
                tmat[(r, used)] = target[r];
            }
            used += 1;
        }
        let _ = (m, weight);
        if used > 0 {
            let c_used = cmat.slice(ndarray::s![.., ..used]).to_owned();
            let t_used = tmat.slice(ndarray::s![.., ..used]).to_owned();
            // ρ = T C^† (C C^†)^{-1}
            let cct = c_used.dot(&linalg::adjoint(&c_used));
            if let Some(inv_rhs) = linalg::solve_multi(&cct, &linalg::identity(d)) {
                let r = t_used.dot(&linalg::adjoint(&c_used)).dot(&inv_rhs);
                for i in 0..d {
                    for j in 0..d {
                        *rho.at_mut(i, j) = Scalar::from_c64(r[(i, j)]);
                    }
                }
            }
        }
        rep.insert(l, rho);
    }
    Ok(SchurmannTriple {
        name: "gns".into(),
        ctx: ctx.clone(),
        dim: d,
        rep: RepMatrixSet {
            matrices: rep,
            gram: vec![Scalar::one(); d],
            band: depth.max(1),
            truncated_bottom: false,
        },
        cocycle: CocycleMap { vectors: cocycle },
        gen_values,
        trivial_cocycle: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebraSpec;

    #[test]
    fn moment_recursion_pure_drift() {
        // η = 0, L(Y) = c: deterministic process, m_k(t) = (tc)^k
        let lie = LieAlgebraSpec::hw();
        let ctx = AlgebraCtx::enveloping(lie, 10);
        let mut gen_values = BTreeMap::new();
        gen_values.insert(Letter::new(2), Scalar::int(3)); // L(E) = 3
        let t = SchurmannTriple {
            name: "drift".into(),
            ctx,
            dim: 1,
            rep: RepMatrixSet {
                matrices: [
                    (Letter::new(0), SMat::zeros(1, 1)),
                    (Letter::new(1), SMat::zeros(1, 1)),
                    (Letter::new(2), SMat::zeros(1, 1)),
                ]
                .into_iter()
                .collect(),
                gram: vec![Scalar::one()],
                band: 0,
                truncated_bottom: false,
            },
            cocycle: CocycleMap {
                vectors: BTreeMap::new(),
            },
            gen_values,
            trivial_cocycle: None,
        };
        let y = FreePolynomial::word(FreeWord::gen(2));
        let m = moments_from_triple(&t, &y, 4, &Scalar::rational(1, 2)).unwrap();
        // E is central hermitian with L(E)=3: m_k(t) = (3t)^k
        for (k, mk) in m.iter().enumerate() {
            let expect = Scalar::rational(3, 2).pow((k + 1) as u32);
            assert!(mk.eq_scalar(&expect), "k={} got {} want {}", k + 1, mk, expect);
        }
    }
}
