//! Finitely presented locales, their one-point compactifications, desk-scale
//! commutative C*-algebras and the non-unital Gelfand correspondence between
//! them. Every relation is decided exactly over rational data.

pub mod cli;
pub mod compactification;
pub mod cstar;
pub mod exact_reals;
pub mod finite_frames;
pub mod locale;
pub mod rational;
pub mod spectrum;
pub mod syntax;
