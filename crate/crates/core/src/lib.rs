//! Numerical Hodge–Arakelov invariants of elliptic fibrations over ℙ¹.
//!
//! The crate is organised around an exact substrate and a thin numeric layer:
//!
//! * [`poly`], [`bipoly`], [`ratfunc`], [`places`] — exact arithmetic over ℚ
//!   (arbitrary-precision rationals), squarefree decomposition, gcd-compatible
//!   place splittings and vanishing orders. Polynomials are generic over the
//!   scalar type; everything exact runs over [`Rat`].
//! * [`weierstrass`], [`kodaira`] — Weierstrass families `y² = 4x³ − g₂x − g₃`,
//!   minimal models, Kodaira fiber classification from vanishing orders, and
//!   the per-surface report (δ, deg J, singular-fiber count, Euler audit).
//! * [`picard_fuchs`] — the only non-exact module: double-precision transport
//!   of the rank-2 Picard–Fuchs system around singular points, recovering
//!   local monodromy and checking it against the Kodaira table.
//! * [`formulas`] — Arakelov degree identities and inequalities for weight-1
//!   and weight-2 variations of Hodge structure, Fujita rank bookkeeping, and
//!   Euler-characteristic formulas for local systems on a curve.
//! * [`triangle`] — the numeric ledger of a triangle fibration X → Y → S:
//!   fixed/variable splits, additivity identities, rank inequalities, and the
//!   degree inequalities tying the weight-2 bundle to the middle curve family.
//! * [`report`] — stable JSON emission for all of the above.
//!
//! Exact quantities never pass through floating point; the monodromy checks
//! are a consistency layer, not a source of truth.

pub mod bipoly;
pub mod error;
pub mod formulas;
pub mod kodaira;
pub mod parse;
pub mod picard_fuchs;
pub mod places;
pub mod poly;
pub mod ratfunc;
pub mod report;
pub mod scalar;
pub mod triangle;
pub mod weierstrass;

pub use error::{Error, Result};

/// Exact scalar: arbitrary-precision rational.
pub type Rat = num_rational::BigRational;
/// Complex double, used only by the Picard–Fuchs transport.
pub type C64 = num_complex::Complex64;

/// Univariate polynomial over ℚ, lowest degree first.
pub type QPoly = poly::Poly<Rat>;
/// Bivariate polynomial in (t, s) over ℚ.
pub type QBiPoly = bipoly::BiPoly<Rat>;
/// Reduced rational function over ℚ.
pub type QRatFunc = ratfunc::RatFunc<Rat>;
/// Univariate polynomial with complex double coefficients.
pub type CPoly = poly::Poly<C64>;
