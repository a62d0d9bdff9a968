//! Exact-arithmetic engine for the generating-function machinery of
//! Hilbert schemes of points on surfaces: the master partition function over
//! Young diagrams, Macdonald-polynomial identities, equivariant localization
//! on toric surfaces, the universal series G₀–G₄ with their closed forms, the
//! Segre–Verlinde change of variables, and the Lagrange-inversion/binomial
//! formulas for B₃ and the conjectural B₄.
//!
//! Everything is exact: big rationals, rational-function fields, truncated
//! power/Laurent series. No floating point anywhere.
//!
//! The library surface is organized bottom-up:
//!
//! * [`ring`] — coefficient arithmetic and series types;
//! * [`partition`] — partitions and box statistics;
//! * [`macdonald`] — symmetric functions, plethysm, modified Macdonald
//!   polynomials and the §-toolkit verifiers;
//! * [`partfun`] — the master partition function Ω, its functional equation,
//!   and the slope-line logarithm expansion H_{d₁,d₂};
//! * [`toric`] — toric surface models, equivariant bundles, localization;
//! * [`universal`] — extraction of the universal series and the
//!   regularity/symmetry calculus;
//! * [`closedform`] — Lagrange inversion, branch power sums, B₃ and B₄;
//! * [`cli`] — the command-line front end (also driven by the `hilbseries`
//!   binary).
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod cli;
pub mod closedform;
pub mod macdonald;
pub mod partfun;
pub mod partition;
pub mod report;
pub mod ring;
pub mod toric;
pub mod universal;
