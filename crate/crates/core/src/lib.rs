//! Torsion subgroups of elliptic curves with good reduction over Q_p and
//! over the cyclotomic tower Q_p(μ_{p^n}), together with the classification
//! lists they are checked against.

pub mod algebra;
pub mod classify;
pub mod dataset;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod finite;
pub mod padic;
pub mod poly;
pub mod ram2;
pub mod residue;
pub mod roots;
pub mod tables;
pub mod torsion;

pub use error::{Error, Result};
pub use padic::PadicNumber;

/// Tower field at arbitrary precision.
pub type Field = field::TowerField<num_bigint::BigInt>;
/// Element of a [`Field`].
pub type Element = field::FieldElement<num_bigint::BigInt>;
/// Tower field with word-sized coordinates, for moduli below 2^40.
pub type FastField = field::TowerField<u64>;
/// Element of a [`FastField`].
pub type FastElement = field::FieldElement<u64>;
