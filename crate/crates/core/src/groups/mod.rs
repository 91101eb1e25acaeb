//! Group elements with exact normal forms for BS(1,m), Γ_M and `Z^d ⋊ Z^k`.
//!
//! Conjugation is `conj(g, u) = g^{-1} u g` throughout.

pub mod config;
pub mod element;
pub mod spectral;
pub mod word;

pub use config::{ConfigDoc, Family, GroupConfig};
pub use element::{Element, GmElement, SdElement};
pub use spectral::{EigenBasis, Spectral};
pub use word::{Letter, Word};
