//! Weak-Haagerup kernels on graph products of finite groups.
//!
//! The crate is `no_std` (with `alloc`) and covers the whole pipeline:
//!
//! * [`group`]: finite vertex groups with weak-Haagerup data `(φ, R, S)`;
//! * [`word`]: reduced forms, shuffles, d-tails and coset representatives in `G(Γ)`;
//! * [`walls`]: half-spaces `gW_v`, crossing and separation counts;
//! * [`hilbert`]: exponential-vector calculus and the per-vertex slot vectors;
//! * [`kernel`]: the slot-tensor kernels `ψ_{n,Γ,d}`, `ψ_{n,Γ}`, `σ_{n,Γ}` and `φ_{n,Γ}`;
//! * [`analysis`]: PSD/CND tests and Schur-multiplier norms of kernel matrices.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod hilbert;
pub mod kernel;
mod linalg;
pub mod walls;
pub mod word;

pub use error::{Error, StructuralError};
pub use group::{FiniteGroup, VertexKernelScalars, WeakHaagerupVertexData};
pub use word::{GraphProductContext, Letter, ReducedWord, SimpleGraph};
