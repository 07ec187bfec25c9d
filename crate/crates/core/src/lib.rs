//! Exact-arithmetic kernel for Dehn surgery obstructions.
//!
//! * [`arith`]: rationals, residues, Dedekind sums
//! * [`alexander`]: symmetric Alexander polynomials and torsion coefficients
//! * [`dinv`]: correction terms of lens spaces, knot surgeries and trefoil fillings
//! * [`realize`]: the affine-isomorphism realizability search
//! * [`cw`]: Casson-Walker invariants of surgeries and prism manifolds
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod alexander;
pub mod arith;
pub mod cw;
pub mod dinv;
pub mod error;
pub mod realize;

pub use alexander::{
    cable_alexander, classical_invariants, lspace_check, reconstruct_alexander,
    torsion_coefficients, torus_alexander, ClassicalInvariants, KnotDesc, SymLaurentPoly,
    TorsionSeq,
};
pub use arith::{dedekind_sum, mod_inverse, sawtooth, Rational, Residue};
pub use cw::{lambda_match, lambda_prism, lambda_surgery, PrismDesc};
pub use dinv::{
    conjugation_involutions, d_filling, d_lens, d_surgery, d_torus_closed_form, DVector,
    FillingDesc, LensCache, Orientation,
};
pub use error::{Error, Result};
pub use realize::{check_condition_corr, is_realizable, AffineIso, RealizabilitySolution};
