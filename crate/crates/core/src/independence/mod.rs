//! The five universal products on free products of algebras, their GNS
//! representations, the p-extension reduction to tensor independence, and
//! the Markov structure of boolean/monotone/anti-monotone processes.

pub mod markov;
pub mod products;
pub mod reduction;

pub use markov::{markov_check, MarkovReport, ToyRealization};
pub use products::{
    gns_product_rep, product_functional, GnsRealization, MixedWord, ProductKind, StateSpec,
};
pub use reduction::{p_extension, p_word, psi_hat, reduction_check, PWord};
