//! A computer-algebra engine for categories of correspondences built from
//! Gysin functors on finite G-sets.
//!
//! The pieces, bottom up:
//!
//! - [`group`]: finite groups, G-sets, equivariant maps, and their finite
//!   limits and colimits;
//! - [`burnside`]: the Burnside ring of iso-classes of G-sets over a base
//!   object, with canonical integer normal forms;
//! - [`gysin`]: the Gysin-functor interface (a ring-valued functor with
//!   compatible transfers), the universal map out of the Burnside functor,
//!   and a randomized axiom verifier;
//! - [`fq`] and [`gw`]: exact finite-field arithmetic, classification of
//!   nondegenerate quadratic forms, closed-form transfer maps together with
//!   an independent trace-form oracle, and Grothendieck-Witt instances of
//!   the Gysin interface (finite fields and the real/complex case);
//! - [`corr`]: the category of correspondences itself: hom-groups
//!   `E(Y x X)`, composition, duality, tensor structure, and the R/I/D
//!   generators;
//! - [`rdi`]: a small expression language over those generators with a
//!   rewriting pass to `R f . D a . I g` normal form.

pub mod burnside;
pub mod corr;
pub mod error;
pub mod fq;
pub mod group;
pub mod gw;
pub mod gysin;
pub mod laws;
pub mod presets;
pub mod rdi;
pub mod sample;

pub use burnside::{BurnsideElem, BurnsideFunctor, OrbitKey};
pub use corr::Correspondence;
pub use error::Error;
pub use fq::{FieldEmbedding, FqElem, FqField};
pub use group::{FiniteGroup, GMap, GSet, Group};
pub use gw::{GwClass, GwCyclicFunctor, GwElem, GwRealComplexFunctor, QuadraticSpace};
pub use gysin::{AxiomReport, GysinFunctor, VerifyBudget};
pub use rdi::{Env, MorExpr, NormalForm};

/// Seed used by every randomized suite unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
