//! The catalog of Schürmann triples: Gaussian and Poisson families on hw
//! and osc, the square-of-white-noise family on sl2, lowest-weight and
//! principal-series families, the joint white-noise/square rep on
//! sl2 ⊕ hw, higher-order noises, fd/gl2 processes and the Azéma triple.
//!
//! Representation matrices are stored over unnormalized bases with diagonal
//! Gram weights, so lowest-weight and Fock families have exact rational
//! entries whenever the parameters are rational.

use super::{CocycleMap, RepMatrixSet, SchurmannTriple, TripleError};
use crate::algebra::{AlgebraCtx, LieAlgebraSpec, Letter};
use crate::scalar::Scalar;
use crate::smat::{inner, SMat, SVec};
use std::collections::BTreeMap;

/// Parameter block for [`build_catalog_triple`].
#[derive(Clone, Debug)]
pub enum CatalogParams {
    /// Gaussian triple on hw: η(A+) = v1, η(A-) = v2, L(A+) = z.
    HwGauss {
        v1: Vec<Scalar>,
        v2: Vec<Scalar>,
        z: Scalar,
    },
    /// Triple on osc with ρ(N) = ν·id: for ν = ±1 a nontrivial cocycle
    /// (η(N) = v1, η(A±) = v2), otherwise v2 must vanish; L(N) = b.
    OscPoisson {
        nu: Scalar,
        v1: Vec<Scalar>,
        v2: Vec<Scalar>,
        b: Scalar,
    },
    /// Square of white noise: ρ = ρ+_2 with the nontrivial cocycle
    /// η(B+) = e0; renormalization constant γ (default 1).
    Sl2Swn { gamma: Scalar },
    /// Lowest-weight family ρ+_{m0} with the trivial cocycle η(u) = ρ(u)e0.
    Sl2Lowest { m0: Scalar },
    /// Principal-series family ρ_{c,m0} (no lowest weight) with the trivial
    /// cocycle of the center vector.
    Sl2Principal { c: Scalar, m0: Scalar },
    /// Fock representation of sl2 ⊕ hw with B± = (A±)²/2h, cocycle and
    /// generator of the lowest vector e0.
    Sl2HwFock { h: Scalar },
    /// Higher-order noises B_{n,m} (degree n+m ≤ cutoff) on wn(c).
    Wn { c: Scalar, cutoff: usize },
    /// gl2 = sl2 ⊕ CI with j(I) = λ(t-s)id; m0 > 0 selects the
    /// lowest-weight (trivial-cocycle) family, m0 = 0 the SWN cocycle.
    FdGl2 { lambda: Scalar, m0: Scalar },
    /// Azéma triple: ρ(y) = q, η(x) = 1, L = 0 on D = C.
    Azema { q: Scalar },
}

/// A row of the catalog listing.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub algebra: &'static str,
    pub parameters: &'static str,
    pub domain: &'static str,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "hw-gauss",
            algebra: "hw",
            parameters: "v1, v2 in C^m, z in C",
            domain: "any",
        },
        CatalogEntry {
            name: "osc-poisson",
            algebra: "osc",
            parameters: "nu in R, v1, v2 in C^m, b in R",
            domain: "v2 = 0 unless nu = ±1",
        },
        CatalogEntry {
            name: "sl2-swn",
            algebra: "sl2",
            parameters: "gamma (default 1)",
            domain: "any",
        },
        CatalogEntry {
            name: "sl2-lowest",
            algebra: "sl2",
            parameters: "m0",
            domain: "m0 > 0",
        },
        CatalogEntry {
            name: "sl2-principal",
            algebra: "sl2",
            parameters: "c, m0",
            domain: "c < lambda(lambda+2) for lambda in m0+2Z",
        },
        CatalogEntry {
            name: "sl2hw-fock",
            algebra: "sl2+hw",
            parameters: "h",
            domain: "h > 0",
        },
        CatalogEntry {
            name: "wn",
            algebra: "wn",
            parameters: "c, degree cutoff K (default 4)",
            domain: "c > 0",
        },
        CatalogEntry {
            name: "fd-gl2",
            algebra: "gl2",
            parameters: "lambda, m0",
            domain: "m0 >= 0 (m0 = 0: SWN cocycle)",
        },
        CatalogEntry {
            name: "azema",
            algebra: "azema bialgebra",
            parameters: "q",
            domain: "any",
        },
    ]
}

fn pad(v: &[Scalar], dim: usize) -> SVec {
    let mut out = SVec::zeros(dim);
    for (i, x) in v.iter().enumerate() {
        out.0[i] = x.clone();
    }
    out
}

/// Build a catalog triple truncated to representation dimension `d_trunc`.
pub fn build_catalog_triple(
    params: &CatalogParams,
    d_trunc: usize,
    degree: usize,
) -> Result<SchurmannTriple, TripleError> {
    if d_trunc < 1 {
        return Err(TripleError::InvalidParameter("D_trunc must be >= 1".into()));
    }
    match params {
        CatalogParams::HwGauss { v1, v2, z } => {
            let dim = v1.len().max(v2.len()).max(1);
            let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::hw(), degree);
            let zero = SMat::zeros(dim, dim);
            let matrices: BTreeMap<Letter, SMat> = (0..3u32)
                .map(|g| (Letter::new(g), zero.clone()))
                .collect();
            let eta1 = pad(v1, dim);
            let eta2 = pad(v2, dim);
            let l_e = &inner(None, &eta1, &eta1) - &inner(None, &eta2, &eta2);
            let mut gen_values = BTreeMap::new();
            gen_values.insert(Letter::new(0), z.clone());
            gen_values.insert(Letter::new(1), z.conj());
            gen_values.insert(Letter::new(2), l_e);
            Ok(SchurmannTriple {
                name: "hw-gauss".into(),
                ctx,
                dim,
                rep: RepMatrixSet {
                    matrices,
                    gram: vec![Scalar::one(); dim],
                    band: 0,
                    truncated_bottom: false,
                },
                cocycle: CocycleMap {
                    vectors: [
                        (Letter::new(0), eta1),
                        (Letter::new(1), eta2),
                        (Letter::new(2), SVec::zeros(dim)),
                    ]
                    .into_iter()
                    .collect(),
                },
                gen_values,
                trivial_cocycle: None,
            })
        }
        CatalogParams::OscPoisson { nu, v1, v2, b } => {
            // basis order A+=0, A-=1, E=2, N=3
            let is_plus = nu.eq_scalar(&Scalar::one());
            let is_minus = nu.eq_scalar(&Scalar::int(-1));
            if !(is_plus || is_minus) && v2.iter().any(|x| !x.is_zero()) {
                return Err(TripleError::InvalidParameter(
                    "osc-poisson: v2 must vanish unless nu = ±1".into(),
                ));
            }
            let dim = v1.len().max(v2.len()).max(1);
            let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::osc(), degree);
            let zero = SMat::zeros(dim, dim);
            let nu_id = SMat::identity(dim).scale(nu);
            let matrices: BTreeMap<Letter, SMat> = [
                (Letter::new(0), zero.clone()),
                (Letter::new(1), zero.clone()),
                (Letter::new(2), zero),
                (Letter::new(3), nu_id),
            ]
            .into_iter()
            .collect();
            let eta_n = pad(v1, dim);
            let eta_v2 = pad(v2, dim);
            let mut vectors = BTreeMap::new();
            vectors.insert(Letter::new(3), eta_n.clone());
            vectors.insert(Letter::new(2), SVec::zeros(dim));
            if is_plus {
                vectors.insert(Letter::new(0), eta_v2.clone());
                vectors.insert(Letter::new(1), SVec::zeros(dim));
            } else if is_minus {
                vectors.insert(Letter::new(0), SVec::zeros(dim));
                vectors.insert(Letter::new(1), eta_v2.clone());
            } else {
                vectors.insert(Letter::new(0), SVec::zeros(dim));
                vectors.insert(Letter::new(1), SVec::zeros(dim));
            }
            let mut gen_values = BTreeMap::new();
            gen_values.insert(Letter::new(3), b.clone());
            let l_e = inner(None, &eta_v2, &eta_v2);
            let sign = if is_minus { Scalar::int(-1) } else { Scalar::one() };
            gen_values.insert(Letter::new(2), &sign * &l_e);
            let l_ap = inner(None, &eta_n, &eta_v2);
            if is_plus {
                gen_values.insert(Letter::new(0), l_ap.clone());
                gen_values.insert(Letter::new(1), l_ap.conj());
            } else if is_minus {
                gen_values.insert(Letter::new(1), l_ap.clone());
                gen_values.insert(Letter::new(0), l_ap.conj());
            } else {
                gen_values.insert(Letter::new(0), Scalar::zero());
                gen_values.insert(Letter::new(1), Scalar::zero());
            }
            Ok(SchurmannTriple {
                name: "osc-poisson".into(),
                ctx,
                dim,
                rep: RepMatrixSet {
                    matrices,
                    gram: vec![Scalar::one(); dim],
                    band: 0,
                    truncated_bottom: false,
                },
                cocycle: CocycleMap { vectors },
                gen_values,
                trivial_cocycle: None,
            })
        }
        CatalogParams::Sl2Swn { gamma } => {
            let mut t = sl2_lowest_rep(&Scalar::int(2), d_trunc, degree)?;
            t.name = "sl2-swn".into();
            // nontrivial cocycle η(B+) = e0, η(B-) = η(M) = 0
            t.cocycle.vectors = [
                (Letter::new(0), SVec::basis(d_trunc, 0)),
                (Letter::new(1), SVec::zeros(d_trunc)),
                (Letter::new(2), SVec::zeros(d_trunc)),
            ]
            .into_iter()
            .collect();
            t.gen_values = [
                (Letter::new(0), Scalar::zero()),
                (Letter::new(1), Scalar::zero()),
                (Letter::new(2), gamma.clone()),
            ]
            .into_iter()
            .collect();
            t.trivial_cocycle = None;
            Ok(t)
        }
        CatalogParams::Sl2Lowest { m0 } => {
            if !positive(m0) {
                return Err(TripleError::InvalidParameter(
                    "sl2-lowest requires m0 > 0".into(),
                ));
            }
            let mut t = sl2_lowest_rep(m0, d_trunc, degree)?;
            t.name = "sl2-lowest".into();
            install_trivial_cocycle(&mut t, SVec::basis(d_trunc, 0));
            Ok(t)
        }
        CatalogParams::Sl2Principal { c, m0 } => {
            // two-sided index set -K..K mapped to 0..2K
            let k = d_trunc / 2;
            let dim = 2 * k + 1;
            let idx = |n: i64| (n + k as i64) as usize;
            let coeff = |n: i64| -> Scalar {
                // ((m0+2n+2)(m0+2n) - c)/4
                let two_n = Scalar::int(2 * n);
                let a = &(m0 + &two_n) + &Scalar::int(2);
                let b = m0 + &two_n;
                &(&(&a * &b) - c) / &Scalar::int(4)
            };
            // validity: coeff(n) > 0 on the range used
            for n in -(k as i64)..(k as i64) {
                if !positive(&coeff(n)) {
                    return Err(TripleError::InvalidParameter(format!(
                        "sl2-principal requires c < lambda(lambda+2); fails at n={n}"
                    )));
                }
            }
            let mut bp = SMat::zeros(dim, dim);
            let mut bm = SMat::zeros(dim, dim);
            let mut m = SMat::zeros(dim, dim);
            for n in -(k as i64)..=(k as i64) {
                *m.at_mut(idx(n), idx(n)) = m0 + &Scalar::int(2 * n);
                if n < k as i64 {
                    // ρ(B+)v_n
                    let c_up = if n >= 0 { Scalar::one() } else { coeff(n) };
                    *bp.at_mut(idx(n + 1), idx(n)) = c_up;
                }
                if n > -(k as i64) {
                    let c_dn = if n > 0 { coeff(n - 1) } else { Scalar::one() };
                    *bm.at_mut(idx(n - 1), idx(n)) = c_dn;
                }
            }
            // gram: w_{n+1} = coeff(n) w_n (n≥0), w_{n-1} = coeff(n-1) w_n (n≤0)
            let mut gram = vec![Scalar::one(); dim];
            for n in 0..k as i64 {
                gram[idx(n + 1)] = &gram[idx(n)] * &coeff(n);
            }
            for n in (-(k as i64) + 1..=0).rev() {
                gram[idx(n - 1)] = &gram[idx(n)] * &coeff(n - 1);
            }
            let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::sl2(), degree);
            let mut t = SchurmannTriple {
                name: "sl2-principal".into(),
                ctx,
                dim,
                rep: RepMatrixSet {
                    matrices: [
                        (Letter::new(0), bp),
                        (Letter::new(1), bm),
                        (Letter::new(2), m),
                    ]
                    .into_iter()
                    .collect(),
                    gram,
                    band: 1,
                    truncated_bottom: true,
                },
                cocycle: CocycleMap {
                    vectors: BTreeMap::new(),
                },
                gen_values: BTreeMap::new(),
                trivial_cocycle: None,
            };
            install_trivial_cocycle(&mut t, SVec::basis(dim, k));
            Ok(t)
        }
        CatalogParams::Sl2HwFock { h } => {
            if !positive(h) {
                return Err(TripleError::InvalidParameter("sl2hw-fock: h > 0".into()));
            }
            // basis order B+=0, B-=1, M=2, A+=3, A-=4, E=5
            let dim = d_trunc;
            let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::sl2_hw(), degree);
            let mut ap = SMat::zeros(dim, dim);
            let mut am = SMat::zeros(dim, dim);
            for n in 0..dim - 1 {
                *ap.at_mut(n + 1, n) = Scalar::one();
                *am.at_mut(n, n + 1) = &Scalar::int((n + 1) as i64) * h;
            }
            let e = SMat::identity(dim).scale(h);
            let two_h = &Scalar::int(2) * h;
            let bp = ap.matmul(&ap).scale(&two_h.inv());
            let bm = am.matmul(&am).scale(&two_h.inv());
            let m = ap
                .matmul(&am)
                .add(&am.matmul(&ap))
                .scale(&two_h.inv());
            // gram w_n = n! h^n
            let mut gram = vec![Scalar::one(); dim];
            for n in 1..dim {
                gram[n] = &(&gram[n - 1] * &Scalar::int(n as i64)) * h;
            }
            let mut t = SchurmannTriple {
                name: "sl2hw-fock".into(),
                ctx,
                dim,
                rep: RepMatrixSet {
                    matrices: [
                        (Letter::new(0), bp),
                        (Letter::new(1), bm),
                        (Letter::new(2), m),
                        (Letter::new(3), ap),
                        (Letter::new(4), am),
                        (Letter::new(5), e),
                    ]
                    .into_iter()
                    .collect(),
                    gram,
                    band: 2,
                    truncated_bottom: false,
                },
                cocycle: CocycleMap {
                    vectors: BTreeMap::new(),
                },
                gen_values: BTreeMap::new(),
                trivial_cocycle: None,
            };
            install_trivial_cocycle(&mut t, SVec::basis(dim, 0));
            Ok(t)
        }
        CatalogParams::Wn { c, cutoff } => {
            if !positive(c) {
                return Err(TripleError::InvalidParameter("wn: c > 0".into()));
            }
            let lie = LieAlgebraSpec::wn(c.clone(), *cutoff);
            let gens = lie.dim;
            let dim = d_trunc;
            let ctx = AlgebraCtx::enveloping(lie.clone(), degree);
            let mut ap = SMat::zeros(dim, dim);
            let mut am = SMat::zeros(dim, dim);
            for n in 0..dim - 1 {
                *ap.at_mut(n + 1, n) = Scalar::one();
                *am.at_mut(n, n + 1) = &Scalar::int((n + 1) as i64) * c;
            }
            let mut matrices = BTreeMap::new();
            for g in 0..gens {
                let label = &lie.labels[g];
                // label "Bnm"
                let n: usize = label[1..2].parse().unwrap();
                let m: usize = label[2..3].parse().unwrap();
                let mut mat = SMat::identity(dim);
                for _ in 0..m {
                    mat = am.matmul(&mat);
                }
                for _ in 0..n {
                    mat = ap.matmul(&mat);
                }
                matrices.insert(Letter::new(g as u32), mat);
            }
            let mut gram = vec![Scalar::one(); dim];
            for n in 1..dim {
                gram[n] = &(&gram[n - 1] * &Scalar::int(n as i64)) * c;
            }
            let mut t = SchurmannTriple {
                name: "wn".into(),
                ctx,
                dim,
                rep: RepMatrixSet {
                    matrices,
                    gram,
                    band: *cutoff,
                    truncated_bottom: false,
                },
                cocycle: CocycleMap {
                    vectors: BTreeMap::new(),
                },
                gen_values: BTreeMap::new(),
                trivial_cocycle: None,
            };
            install_trivial_cocycle(&mut t, SVec::basis(dim, 0));
            Ok(t)
        }
        CatalogParams::FdGl2 { lambda, m0 } => {
            // basis order B+=0, B-=1, M=2, I=3
            let swn = m0.is_zero();
            let base = if swn {
                build_catalog_triple(
                    &CatalogParams::Sl2Swn {
                        gamma: Scalar::one(),
                    },
                    d_trunc,
                    degree,
                )?
            } else {
                build_catalog_triple(&CatalogParams::Sl2Lowest { m0: m0.clone() }, d_trunc, degree)?
            };
            let dim = base.dim;
            let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::gl2(), degree);
            let mut matrices = base.rep.matrices.clone();
            matrices.insert(Letter::new(3), SMat::zeros(dim, dim));
            let mut vectors = base.cocycle.vectors.clone();
            vectors.insert(Letter::new(3), SVec::zeros(dim));
            let mut gen_values = base.gen_values.clone();
            gen_values.insert(Letter::new(3), lambda.clone());
            Ok(SchurmannTriple {
                name: "fd-gl2".into(),
                ctx,
                dim,
                rep: RepMatrixSet {
                    matrices,
                    gram: base.rep.gram.clone(),
                    band: 1,
                    truncated_bottom: false,
                },
                cocycle: CocycleMap { vectors },
                gen_values,
                trivial_cocycle: None,
            })
        }
        CatalogParams::Azema { q } => {
            let ctx = AlgebraCtx::azema(q.clone(), degree);
            let one = |s: Scalar| {
                let mut m = SMat::zeros(1, 1);
                *m.at_mut(0, 0) = s;
                m
            };
            let matrices: BTreeMap<Letter, SMat> = [
                (Letter::new(0), one(Scalar::zero())),
                (Letter::new(1), one(q.clone())),
                (Letter::starred(0), one(Scalar::zero())),
                (Letter::starred(1), one(q.conj())),
            ]
            .into_iter()
            .collect();
            let vectors: BTreeMap<Letter, SVec> = [
                (Letter::new(0), SVec(vec![Scalar::one()])),
                (Letter::new(1), SVec::zeros(1)),
                (Letter::starred(0), SVec::zeros(1)),
                (Letter::starred(1), SVec::zeros(1)),
            ]
            .into_iter()
            .collect();
            let gen_values: BTreeMap<Letter, Scalar> = [
                (Letter::new(0), Scalar::zero()),
                (Letter::new(1), Scalar::zero()),
                (Letter::starred(0), Scalar::zero()),
                (Letter::starred(1), Scalar::zero()),
            ]
            .into_iter()
            .collect();
            Ok(SchurmannTriple {
                name: "azema".into(),
                ctx,
                dim: 1,
                rep: RepMatrixSet {
                    matrices,
                    gram: vec![Scalar::one()],
                    band: 0,
                    truncated_bottom: false,
                },
                cocycle: CocycleMap { vectors },
                gen_values,
                trivial_cocycle: None,
            })
        }
    }
}

fn positive(s: &Scalar) -> bool {
    match s.exact_real() {
        Some(r) => r > num_rational::BigRational::from_integer(0.into()),
        None => {
            let z = s.to_c64();
            z.im == 0.0 && z.re > 0.0
        }
    }
}

/// The lowest-weight representation ρ+_{m0} of sl2 in the unnormalized
/// basis v_n = ρ(B+)^n e0: ρ(B+)v_n = v_{n+1}, ρ(B-)v_n = n(n+m0-1)v_{n-1},
/// ρ(M)v_n = (2n+m0)v_n, with Gram weights w_n = n!·(m0)_n.
fn sl2_lowest_rep(
    m0: &Scalar,
    d_trunc: usize,
    degree: usize,
) -> Result<SchurmannTriple, TripleError> {
    if d_trunc < 2 {
        return Err(TripleError::InvalidParameter("D_trunc >= 2 required".into()));
    }
    // (n+1)(n+m0) must stay >= 0 for the inner product to exist
    for n in 0..d_trunc - 1 {
        let norm = &Scalar::int((n + 1) as i64) * &(&Scalar::int(n as i64) + m0);
        if !norm.is_exact_nonneg_real() && norm.to_c64().re < 0.0 {
            return Err(TripleError::InvalidParameter(format!(
                "(n+1)(n+m0) negative at n={n}"
            )));
        }
    }
    let dim = d_trunc;
    let ctx = AlgebraCtx::enveloping(LieAlgebraSpec::sl2(), degree);
    let mut bp = SMat::zeros(dim, dim);
    let mut bm = SMat::zeros(dim, dim);
    let mut m = SMat::zeros(dim, dim);
    for n in 0..dim {
        *m.at_mut(n, n) = &Scalar::int(2 * n as i64) + m0;
        if n + 1 < dim {
            *bp.at_mut(n + 1, n) = Scalar::one();
        }
        if n >= 1 {
            // ρ(B-)v_n = n(n+m0-1)v_{n-1}
            *bm.at_mut(n - 1, n) =
                &Scalar::int(n as i64) * &(&(&Scalar::int(n as i64) + m0) - &Scalar::one());
        }
    }
    let mut gram = vec![Scalar::one(); dim];
    for n in 0..dim - 1 {
        let f = &Scalar::int((n + 1) as i64) * &(&Scalar::int(n as i64) + m0);
        gram[n + 1] = &gram[n] * &f;
    }
    Ok(SchurmannTriple {
        name: "sl2-lowest-rep".into(),
        ctx,
        dim,
        rep: RepMatrixSet {
            matrices: [
                (Letter::new(0), bp),
                (Letter::new(1), bm),
                (Letter::new(2), m),
            ]
            .into_iter()
            .collect(),
            gram,
            band: 1,
            truncated_bottom: false,
        },
        cocycle: CocycleMap {
            vectors: BTreeMap::new(),
        },
        gen_values: BTreeMap::new(),
        trivial_cocycle: None,
    })
}

/// Fill in the trivial cocycle η(u) = ρ(u)ω and generator L(u) = ⟨ω, ρ(u)ω⟩.
fn install_trivial_cocycle(t: &mut SchurmannTriple, omega: SVec) {
    let mut vectors = BTreeMap::new();
    let mut gen_values = BTreeMap::new();
    for l in t.ctx.letters() {
        let rho = t.rho_letter(&l);
        let v = rho.apply(&omega);
        gen_values.insert(l, inner(Some(t.gram()), &omega, &v));
        vectors.insert(l, v);
    }
    t.cocycle.vectors = vectors;
    t.gen_values = gen_values;
    t.trivial_cocycle = Some(omega);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schurmann::verify_triple;

    #[test]
    fn hw_gauss_values() {
        let t = build_catalog_triple(
            &CatalogParams::HwGauss {
                v1: vec![Scalar::one()],
                v2: vec![],
                z: Scalar::zero(),
            },
            1,
            8,
        )
        .unwrap();
        assert!(t.gen_letter(&Letter::new(2)).eq_scalar(&Scalar::one()));
        assert!(t.eta_letter(&Letter::new(0)).0[0].eq_scalar(&Scalar::one()));
        let rep = verify_triple(&t, 1e-12);
        assert!(rep.pass(1e-12));
    }

    #[test]
    fn swn_values_and_verification() {
        let t = build_catalog_triple(&CatalogParams::Sl2Swn { gamma: Scalar::one() }, 6, 8).unwrap();
        // L(M) = 1, L(B±) = 0, η(B+) = e0
        assert!(t.gen_letter(&Letter::new(2)).eq_scalar(&Scalar::one()));
        assert!(t.gen_letter(&Letter::new(0)).is_zero());
        assert!(t.eta_letter(&Letter::new(0)).0[0].eq_scalar(&Scalar::one()));
        let rep = verify_triple(&t, 0.0);
        assert_eq!(rep.rep_residual, 0.0);
        assert_eq!(rep.cocycle_residual, 0.0);
        assert_eq!(rep.hermitian_residual, 0.0);
    }

    #[test]
    fn swn_perturbed_cocycle_fails() {
        let mut t =
            build_catalog_triple(&CatalogParams::Sl2Swn { gamma: Scalar::one() }, 6, 8).unwrap();
        let mut v = t.cocycle.vectors[&Letter::new(0)].clone();
        v.0[1] = Scalar::one();
        t.cocycle.vectors.insert(Letter::new(0), v);
        let rep = verify_triple(&t, 0.0);
        assert!(rep.cocycle_residual > 0.0);
    }

    #[test]
    fn osc_drift_triple() {
        let t = build_catalog_triple(
            &CatalogParams::OscPoisson {
                nu: Scalar::int(2),
                v1: vec![],
                v2: vec![],
                b: Scalar::rational(3, 2),
            },
            1,
            6,
        )
        .unwrap();
        // η = 0, L(N) = b, everything else 0
        assert!(t.eta_letter(&Letter::new(3)).is_zero());
        assert!(t.gen_letter(&Letter::new(3)).eq_scalar(&Scalar::rational(3, 2)));
        assert!(t.gen_letter(&Letter::new(2)).is_zero());
        assert!(verify_triple(&t, 1e-12).pass(1e-12));
    }

    #[test]
    fn lowest_weight_triples_verify_exactly_on_exact_rows() {
        for params in [
            CatalogParams::Sl2Lowest {
                m0: Scalar::rational(1, 2),
            },
            CatalogParams::Sl2Principal {
                c: Scalar::int(-1),
                m0: Scalar::rational(1, 2),
            },
            CatalogParams::Sl2HwFock {
                h: Scalar::rational(1, 3),
            },
            CatalogParams::Wn {
                c: Scalar::int(1),
                cutoff: 3,
            },
            CatalogParams::FdGl2 {
                lambda: Scalar::int(1),
                m0: Scalar::int(2),
            },
        ] {
            let t = build_catalog_triple(&params, 7, 8).unwrap();
            let rep = verify_triple(&t, 0.0);
            assert_eq!(rep.rep_residual, 0.0, "{}", t.name);
            assert_eq!(rep.cocycle_residual, 0.0, "{}", t.name);
            assert_eq!(rep.hermitian_residual, 0.0, "{}", t.name);
        }
    }

    #[test]
    fn lowest_weight_rejects_bad_m0() {
        assert!(build_catalog_triple(
            &CatalogParams::Sl2Lowest {
                m0: Scalar::int(-1)
            },
            4,
            6
        )
        .is_err());
    }

    #[test]
    fn azema_triple() {
        let t = build_catalog_triple(&CatalogParams::Azema { q: Scalar::int(3) }, 1, 6).unwrap();
        assert!(verify_triple(&t, 1e-12).pass(1e-12));
    }
}
