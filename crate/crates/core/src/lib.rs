//! Exact deciders for stability of iterated antiderivatives.
//!
//! A function is *stable* when it admits an infinite chain of iterated
//! antiderivatives of the same shape. This crate decides stability for the
//! classical fragments where the question is settled — rational functions
//! under `d/dx` and the Eulerian derivation `x*d/dx`, `f(x)*log(x)^m`, and
//! `f(x)*exp(g(x))` — and emits machine-checkable witness chains or concrete
//! obstructions. On the power-series side it certifies eventual stability of
//! D-finite series by guessing and verifying annihilating Ore operators of
//! constant order, and it grounds the underlying dynamical-system notions
//! (Fix/Per/Stab/Attrac) on finite self-maps.
//!
//! Everything runs over exact rational arithmetic; there are no floats and no
//! numeric tolerances anywhere in the crate.

pub mod dfinite;
pub mod dynsys;
pub mod hermite;
pub mod integrate;
pub mod linalg;
pub mod ore;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod roots;
pub mod stability;

pub use dfinite::{Certificate, SequenceRule, TruncSeries};
pub use hermite::{hermite_reduce, HermiteResult};
pub use ore::{OpKind, OreOperator};
pub use poly::{Poly, Q};
pub use ratfunc::{Derivation, RatFunc};
pub use stability::{ElemExpr, ElemSum, StabilityVerdict, WitnessChain};
