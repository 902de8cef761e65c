//! The no-extension identity chain on sl2 ⊕ hw: a Schürmann triple whose
//! cocycle kills E and A⁻ is forced to vanish on the whole hw part.
//!
//! The chain runs through the bracket identities
//!   η(A⁺) = ρ(A⁻)η(B⁺) - ρ(B⁺)η(A⁻),
//!   -‖η(A⁺)‖² = ⟨η(A⁺), ρ(B⁺)η(A⁻)⟩ = ‖η(A⁻)‖²,
//!   ±L(A±) = ⟨η(M), η(A±)⟩ - ⟨η(A∓), η(M)⟩,
//!   L(E) = ‖η(A⁺)‖² - ‖η(A⁻)‖²,
//! so with η(E) = η(A⁻) = 0 everything on hw collapses.

use crate::algebra::Letter;
use crate::scalar::Scalar;
use crate::schurmann::SchurmannTriple;
use crate::smat::{inner, SVec};

/// Basis order of sl2 ⊕ hw: B+=0, B-=1, M=2, A+=3, A-=4, E=5.
const B_PLUS: u32 = 0;
const B_MINUS: u32 = 1;
const M: u32 = 2;
const A_PLUS: u32 = 3;
const A_MINUS: u32 = 4;

/// Quantities of the no-go chain, all exact for exact triples.
#[derive(Clone, Debug)]
pub struct NoGoReport {
    /// η(A⁺) forced by the bracket identity from η(B⁺) and η(A⁻).
    pub eta_a_plus: SVec,
    /// ‖η(A⁺)‖².
    pub norm_a_plus_sq: Scalar,
    /// middle chain link ⟨η(A⁺), ρ(B⁺)η(A⁻)⟩.
    pub chain_mid: Scalar,
    /// ‖η(A⁻)‖².
    pub norm_a_minus_sq: Scalar,
    /// forced L values on A⁺, A⁻, E.
    pub l_a_plus: Scalar,
    pub l_a_minus: Scalar,
    pub l_e: Scalar,
    /// whether the chain - ‖η(A⁺)‖² = chain_mid = ‖η(A⁻)‖² is consistent;
    /// inconsistency certifies that no Lévy process extends the data.
    pub consistent: bool,
}

/// Run the identity chain for candidate data on sl2 ⊕ hw with
/// η(E) = η(A⁻) = 0 imposed (the eigenvector condition of the corollary).
pub fn no_go_chain(t: &SchurmannTriple) -> NoGoReport {
    let gram = Some(t.gram());
    let eta_b_plus = t.eta_letter(&Letter::new(B_PLUS));
    let eta_a_minus = SVec::zeros(t.dim); // imposed
    // η(A⁺) = -η([B⁺, A⁻]) = ρ(A⁻)η(B⁺) - ρ(B⁺)η(A⁻)
    let eta_a_plus = t
        .rho_letter(&Letter::new(A_MINUS))
        .apply(&eta_b_plus)
        .sub(&t.rho_letter(&Letter::new(B_PLUS)).apply(&eta_a_minus));
    let norm_a_plus_sq = inner(gram, &eta_a_plus, &eta_a_plus);
    let chain_mid = inner(
        gram,
        &eta_a_plus,
        &t.rho_letter(&Letter::new(B_PLUS)).apply(&eta_a_minus),
    );
    let norm_a_minus_sq = inner(gram, &eta_a_minus, &eta_a_minus);
    // ±L(A±) = ⟨η(M), η(A±)⟩ - ⟨η(A∓), η(M)⟩
    let eta_m = t.eta_letter(&Letter::new(M));
    let l_a_plus = &inner(gram, &eta_m, &eta_a_plus) - &inner(gram, &eta_a_minus, &eta_m);
    let l_a_minus = -(&inner(gram, &eta_m, &eta_a_minus) - &inner(gram, &eta_a_plus, &eta_m));
    let l_e = &norm_a_plus_sq - &norm_a_minus_sq;
    // chain: -‖η(A⁺)‖² = ⟨η(A⁺), ρ(B⁺)η(A⁻)⟩ = ‖η(A⁻)‖²
    let consistent = (-norm_a_plus_sq.clone()).eq_scalar(&chain_mid)
        && chain_mid.eq_scalar(&norm_a_minus_sq);
    NoGoReport {
        eta_a_plus,
        norm_a_plus_sq,
        chain_mid,
        norm_a_minus_sq,
        l_a_plus,
        l_a_minus,
        l_e,
        consistent,
    }
}
