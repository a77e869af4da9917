//! Kodaira types of singular fibers of a minimal elliptic surface, keyed by
//! the vanishing orders of (g₂, g₃, Δ), with Euler numbers and SL₂(ℤ)
//! monodromy representatives.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::places::Place;

pub type Mat2 = [[i64; 2]; 2];

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum FiberType {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl FiberType {
    pub fn name(&self) -> String {
        match self {
            FiberType::I0 => "I0".into(),
            FiberType::In(n) => format!("I{n}"),
            FiberType::II => "II".into(),
            FiberType::III => "III".into(),
            FiberType::IV => "IV".into(),
            FiberType::I0Star => "I0*".into(),
            FiberType::InStar(n) => format!("I{n}*"),
            FiberType::IVStar => "IV*".into(),
            FiberType::IIIStar => "III*".into(),
            FiberType::IIStar => "II*".into(),
        }
    }

    pub fn euler(&self) -> u32 {
        match self {
            FiberType::I0 => 0,
            FiberType::In(n) => *n,
            FiberType::II => 2,
            FiberType::III => 3,
            FiberType::IV => 4,
            FiberType::I0Star => 6,
            FiberType::InStar(n) => 6 + n,
            FiberType::IVStar => 8,
            FiberType::IIIStar => 9,
            FiberType::IIStar => 10,
        }
    }

    pub fn monodromy(&self) -> Mat2 {
        match self {
            FiberType::I0 => [[1, 0], [0, 1]],
            FiberType::In(n) => [[1, *n as i64], [0, 1]],
            FiberType::II => [[1, 1], [-1, 0]],
            FiberType::III => [[0, 1], [-1, 0]],
            FiberType::IV => [[0, 1], [-1, -1]],
            FiberType::I0Star => [[-1, 0], [0, -1]],
            FiberType::InStar(n) => [[-1, -(*n as i64)], [0, -1]],
            FiberType::IVStar => [[-1, -1], [1, 0]],
            FiberType::IIIStar => [[0, -1], [1, 0]],
            FiberType::IIStar => [[0, -1], [1, 1]],
        }
    }

    /// Nilpotent log of the unipotent part, when that part is nontrivial:
    /// `[[0, n], [0, 0]]` for Iₙ and Iₙ* (n ≥ 1).
    pub fn monodromy_log(&self) -> Option<Mat2> {
        match self {
            FiberType::In(n) | FiberType::InStar(n) if *n > 0 => {
                Some([[0, *n as i64], [0, 0]])
            }
            _ => None,
        }
    }

    pub fn trace(&self) -> i64 {
        let m = self.monodromy();
        m[0][0] + m[1][1]
    }

    /// Multiplicative order of the monodromy; `None` for infinite order
    /// (Iₙ, Iₙ* with n ≥ 1).
    pub fn monodromy_order(&self) -> Option<u32> {
        match self {
            FiberType::I0 => Some(1),
            FiberType::In(_) => None,
            FiberType::II => Some(6),
            FiberType::III => Some(4),
            FiberType::IV => Some(3),
            FiberType::I0Star => Some(2),
            FiberType::InStar(_) => None,
            FiberType::IVStar => Some(3),
            FiberType::IIIStar => Some(4),
            FiberType::IIStar => Some(6),
        }
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self, FiberType::In(n) | FiberType::InStar(n) if *n > 0)
    }
}

/// Order of an identically-zero polynomial; compares above every finite order.
pub const ORD_INFINITE: u32 = u32::MAX;

fn ord_val(o: Option<u32>) -> u32 {
    o.unwrap_or(ORD_INFINITE)
}

/// Classifies a fiber from the vanishing orders of (g₂, g₃, Δ) on a minimal
/// model; `None` orders mean the polynomial is identically zero. Discriminates
/// on ord Δ first, which is unambiguous given minimality.
pub fn classify_orders(
    ord_g2: Option<u32>,
    ord_g3: Option<u32>,
    ord_delta: u32,
) -> Option<FiberType> {
    let a = ord_val(ord_g2);
    let b = ord_val(ord_g3);
    let d = ord_delta;
    match d {
        0 => Some(FiberType::I0),
        _ if a == 0 && b == 0 => Some(FiberType::In(d)),
        2 if a >= 1 && b == 1 => Some(FiberType::II),
        3 if a == 1 && b >= 2 => Some(FiberType::III),
        4 if a >= 2 && b == 2 => Some(FiberType::IV),
        6 if a >= 2 && b >= 3 => Some(FiberType::I0Star),
        _ if d >= 7 && a == 2 && b == 3 => Some(FiberType::InStar(d - 6)),
        8 if a >= 3 && b == 4 => Some(FiberType::IVStar),
        9 if a == 3 && b >= 5 => Some(FiberType::IIIStar),
        10 if a >= 4 && b == 5 => Some(FiberType::IIStar),
        _ => None,
    }
}

/// One singular fiber: the place it sits over, its type, the order triple
/// (`None` = identically-zero polynomial), and the table data.
#[derive(Clone, Debug, PartialEq)]
pub struct KodairaFiber {
    pub place: Place,
    pub fiber_type: FiberType,
    pub ord_g2: Option<u32>,
    pub ord_g3: Option<u32>,
    pub ord_delta: u32,
    pub euler: u32,
    pub monodromy: Mat2,
    pub monodromy_log: Option<Mat2>,
}

impl KodairaFiber {
    pub fn classify(
        place: Place,
        ord_g2: Option<u32>,
        ord_g3: Option<u32>,
        ord_delta: u32,
    ) -> Result<Self> {
        let fiber_type = classify_orders(ord_g2, ord_g3, ord_delta).ok_or_else(|| {
            let fmt = |o: Option<u32>| match o {
                Some(v) => v.to_string(),
                None => "inf".to_string(),
            };
            Error::UnclassifiableOrders {
                place: place.name(),
                g2: fmt(ord_g2),
                g3: fmt(ord_g3),
                delta: ord_delta,
            }
        })?;
        Ok(KodairaFiber {
            place,
            fiber_type,
            ord_g2,
            ord_g3,
            ord_delta,
            euler: fiber_type.euler(),
            monodromy: fiber_type.monodromy(),
            monodromy_log: fiber_type.monodromy_log(),
        })
    }
}
