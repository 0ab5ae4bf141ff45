//! Exact computation of reduced Borel cohomology, restriction-to-fixed-points
//! maps, and weak/strong h-invariants for algebraic models of finite semi-free
//! circle-equivariant complexes whose fixed points form a sphere.
//!
//! A complex is presented by graded generators over `Z[u]` (`u` in degree 2)
//! split into a *tower* part (the fixed sphere) and a *free* part (free orbit
//! cells), with an integer differential whose `u`-powers are implied by the
//! degrees. All arithmetic is exact: big integers, big rationals, and prime
//! fields; there is no floating point anywhere in this crate.
//!
//! Module map:
//! * [`exactalg`] — integer/field linear algebra kernel (Smith normal form,
//!   ranks, kernels, cokernels).
//! * [`tcomplex`] — the complex data model, validation, and constructors
//!   (spheres, wedge, smash, free-cell attachment, the `X_{a,b}` family).
//! * [`cohomology`] — degreewise cohomology over `Z`/`Q`/`F_p`, restriction
//!   images, tower decompositions, stable (Tate) values.
//! * [`hinv`] — h-invariants per coefficient ring, prime profiles, property
//!   verification, manifold-level normalizations.
//! * [`dual`] — experimental dual complexes and homological h-invariants.
//! * [`bcx`] — the BCX textual file format.
//! * [`corpus`] — the bundled example corpus and the random-complex fuzzer.

pub mod bcx;
pub mod cohomology;
pub mod corpus;
pub mod dual;
pub mod exactalg;
pub mod hinv;
pub mod tcomplex;

mod error;

pub use error::EngineError;
