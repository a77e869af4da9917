//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    // exact algebra
    #[error("operation on the zero polynomial")]
    ZeroPolynomial,
    #[error("degree {degree} exceeds the weighted bound {bound} at infinity")]
    BoundViolation { degree: usize, bound: u32 },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    // weierstrass
    #[error("degenerate family: discriminant is identically zero")]
    DegenerateFamily,
    #[error("degree bound violated: deg {which} = {degree} > {bound} at level {level}")]
    DegreeBound {
        which: &'static str,
        degree: usize,
        bound: u32,
        level: u32,
    },
    #[error("orders ({g2}, {g3}, {delta}) at place {place} match no Kodaira row")]
    UnclassifiableOrders {
        place: String,
        g2: String,
        g3: String,
        delta: u32,
    },
    #[error("all slices degenerate")]
    AllSlicesDegenerate,
    #[error("no strict majority among slice profiles: {0}")]
    GenericAmbiguous(String),

    // picard-fuchs
    #[error("isotrivial family: 3g₃g₂′ − 2g₂g₃′ vanishes identically")]
    IsotrivialFamily,
    #[error("integration path passes within guard distance of a singular point (min distance {min_dist:.3e}, guard {guard:.3e})")]
    SingularOnPath { min_dist: f64, guard: f64 },
    #[error("step-halving residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NoConvergence { residual: f64, tolerance: f64 },
    #[error("failed to isolate roots of {0}")]
    RootIsolationFailure(String),

    // formulas
    #[error("kernel rank exceeds Hodge rank: {h0} > {h}")]
    RankOrder { h: u64, h0: u64 },
    #[error("list {name} has length {len}, expected n_degen = {expected}")]
    LengthMismatch {
        name: &'static str,
        len: usize,
        expected: usize,
    },
    #[error("Higgs field declared maximal but the Arakelov bound is not attained (deg {deg}, bound {bound})")]
    MaximalityViolation { deg: String, bound: String },

    // triangle ledger
    #[error("missing {0}")]
    MissingSlot(String),
    #[error("no identity mentions the unknown field {0}")]
    Underdetermined(String),
    #[error("conflicting solutions for {field}: {values:?}")]
    Overdetermined { field: String, values: Vec<String> },
    #[error("variable part would be negative in field {0}")]
    NegativeVariablePart(String),

    #[error("{0}")]
    Invalid(String),
}
