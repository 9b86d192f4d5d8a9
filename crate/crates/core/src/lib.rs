//! Exact Weingarten calculus for the orthogonal quantum groups
//! `O_N ⊂ O_N^* ⊂ O_N^+` and the noncommutative spheres attached to them.
//!
//! The crate is organised around the combinatorics of pair partitions:
//!
//! * [`partitions`] — two-row partitions/pairings, the three pairing families
//!   (all / balanced / noncrossing), kernels, joins, the crossing signature,
//!   categorical operations and category closure;
//! * [`linmaps`] — the dense linear maps `T_π` and their signed (twisted)
//!   companions `T̄_π`, plus the fixed vectors `ξ_π`;
//! * [`ratmat`] — exact rational matrices with fraction-free elimination;
//! * [`weingarten`] — Gram matrices `G(π,σ) = N^{|π∨σ|}`, their exact
//!   inverses, and a persistent JSON cache;
//! * [`moments`] — Haar integrals of coordinate monomials and sphere moments
//!   through the Weingarten expansion, twisted or not;
//! * [`oracles`] — independent closed forms (classical double-factorial
//!   formula, half-liberated binomial sum, free `q`-series) used to
//!   cross-check the Weingarten route;
//! * [`monomial`] — filtered groups of permutations, saturation/classification
//!   of monomial relations, sign predicates and the nine-sphere table;
//! * [`verify`] — the machine-checkable verification suites shared by the
//!   test harness and the CLI.
//!
//! All arithmetic on the main path is exact (big integers / big rationals);
//! floating point only appears in the numeric quadrature oracle and in the
//! arbitrary-precision evaluation of the free moment series.

pub mod error;
pub mod linmaps;
pub mod moments;
pub mod monomial;
pub mod oracles;
pub(crate) mod par;
pub mod partitions;
pub mod ratmat;
pub mod verify;
pub mod weingarten;

pub use error::{Error, Result};
pub use partitions::{PairingFamily, Partition};
