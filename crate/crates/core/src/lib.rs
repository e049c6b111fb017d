//! Minimal binary linear codes from vectorial Boolean functions.
//!
//! The pipeline: build an (n,m)-function ([`constructions`]), take its
//! component Walsh spectra ([`vectorial`], [`boolfun`]), generate the code
//! `C_F` and its weight distribution ([`codes`]), then decide minimality and
//! the Ashikhmin–Barg ratio by independent routes.
//!
//! ```
//! use mincodes::constructions::{build_family, FamilySpec};
//! use mincodes::codes::{build_code, weight_distribution};
//!
//! let fam = build_family(&FamilySpec::Theorem6 { n: 6, i: 0, complemented: false }).unwrap();
//! let code = build_code(&fam.function, &fam.pairing).unwrap();
//! let dist = weight_distribution(&code).unwrap();
//! assert_eq!(code.parameters(&dist), "[63,8,14]");
//! ```

pub mod bits;
pub mod boolfun;
pub mod codes;
pub mod constructions;
pub mod gf2;
pub mod io;
pub mod vectorial;

pub use bits::Bits;
pub use boolfun::{BooleanFunction, WalshSpectrum};
pub use gf2::{FieldContext, Subspace};
pub use vectorial::{Pairing, VectorialFunction};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/walsh.md")]
    mod walsh {}
    #[doc = include_str!("../../../book/src/vectorial.md")]
    mod vectorial {}
    #[doc = include_str!("../../../book/src/spreads.md")]
    mod spreads {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/minimality.md")]
    mod minimality {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
