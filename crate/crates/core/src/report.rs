//! Stable JSON wire types.
//!
//! Exact rationals serialize as `"p"` or `"p/q"` strings; field order is
//! fixed by the struct definitions so identical inputs produce identical
//! bytes. The vanishing order of an identically-zero polynomial is emitted
//! as the sentinel 9999 (effectively infinite, kept integral for the
//! schema).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::kodaira::{KodairaFiber, Mat2};
use crate::picard_fuchs::{ApparentCheck, GlobalCheck, MonodromyCheck};
use crate::scalar::rat_to_string;
use crate::triangle::{IdentityCheck, InequalityCheck, PartialSlot, TriangleLedger};
use crate::weierstrass::{K3Analysis, SliceOutcome, SurfaceReport};

/// Sentinel for the vanishing order of the zero polynomial.
pub const ORD_SENTINEL: i64 = 9999;

#[derive(Clone, Debug, Serialize)]
pub struct FiberJson {
    pub place: String,
    pub degree: u32,
    #[serde(rename = "type")]
    pub fiber_type: String,
    pub orders: [i64; 3],
    pub euler: u32,
    pub monodromy: Mat2,
    pub monodromy_log: Option<Mat2>,
}

impl FiberJson {
    pub fn from_fiber(f: &KodairaFiber, var: char) -> Self {
        let ord = |o: Option<u32>| o.map_or(ORD_SENTINEL, |v| v as i64);
        FiberJson {
            place: f.place.name_var(var),
            degree: f.place.degree(),
            fiber_type: f.fiber_type.name(),
            orders: [ord(f.ord_g2), ord(f.ord_g3), f.ord_delta as i64],
            euler: f.euler,
            monodromy: f.monodromy,
            monodromy_log: f.monodromy_log,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceJson {
    pub delta: String,
    pub deg_j: u64,
    pub n_singular: u64,
    pub level: u32,
    pub semistable: bool,
    pub isotrivial: bool,
    pub euler_total: u64,
    pub fibers: Vec<FiberJson>,
}

impl SurfaceJson {
    pub fn from_report(r: &SurfaceReport, var: char) -> Self {
        SurfaceJson {
            delta: rat_to_string(&r.delta_degree),
            deg_j: r.deg_j,
            n_singular: r.n_singular,
            level: r.level,
            semistable: r.semistable,
            isotrivial: r.isotrivial,
            euler_total: r.euler_total,
            fibers: r
                .fibers
                .iter()
                .map(|f| FiberJson::from_fiber(f, var))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct K3SliceJson {
    pub t: String,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceJson>,
}

pub fn k3_slices_json(analysis: &K3Analysis) -> Vec<K3SliceJson> {
    analysis
        .slices
        .iter()
        .map(|s| match &s.outcome {
            SliceOutcome::Report(r) => K3SliceJson {
                t: rat_to_string(&s.t),
                degenerate: false,
                reason: None,
                surface: Some(SurfaceJson::from_report(r, 's')),
            },
            SliceOutcome::Degenerate(reason) => K3SliceJson {
                t: rat_to_string(&s.t),
                degenerate: true,
                reason: Some(reason.clone()),
                surface: None,
            },
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyJson {
    pub place: String,
    pub predicted: String,
    pub classified: Option<String>,
    pub trace: [f64; 2],
    pub trace_err: f64,
    pub residual: f64,
    pub measured_ord_delta: f64,
    pub n_recovered: Option<i64>,
    pub ok: bool,
}

impl MonodromyJson {
    pub fn from_check(c: &MonodromyCheck, var: char) -> Self {
        MonodromyJson {
            place: c.place.name_var(var),
            predicted: c.predicted.name(),
            classified: c.transport.classified_type.map(|t| t.name()),
            trace: [c.transport.trace.re, c.transport.trace.im],
            trace_err: c.trace_err,
            residual: c.transport.residual,
            measured_ord_delta: c.transport.measured_ord_delta,
            n_recovered: c.transport.n_recovered,
            ok: c.ok,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ApparentJson {
    pub place: String,
    pub deviation: f64,
    pub ok: bool,
}

impl ApparentJson {
    pub fn from_check(c: &ApparentCheck, var: char, tolerance: f64) -> Self {
        ApparentJson {
            place: c.place.name_var(var),
            deviation: c.deviation,
            ok: c.deviation < tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalJson {
    pub residual: f64,
    pub infinity_trace_err: Option<f64>,
    pub loops: usize,
    pub ok: bool,
}

impl GlobalJson {
    pub fn from_check(c: &GlobalCheck, tolerance: f64) -> Self {
        GlobalJson {
            residual: c.residual,
            infinity_trace_err: c.infinity_trace_err,
            loops: c.loops,
            ok: c.residual < tolerance
                && c.infinity_trace_err.map_or(true, |e| e < tolerance),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleCheckJson {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub ok: bool,
}

impl TriangleCheckJson {
    pub fn from_identity(c: &IdentityCheck) -> Self {
        TriangleCheckJson {
            name: c.name.clone(),
            lhs: Some(rat_to_string(&c.lhs)),
            rhs: Some(rat_to_string(&c.rhs)),
            residual: Some(rat_to_string(&(&c.lhs - &c.rhs))),
            ok: c.ok,
        }
    }

    pub fn from_inequality(c: &InequalityCheck) -> Self {
        TriangleCheckJson {
            name: c.name.clone(),
            lhs: None,
            rhs: None,
            residual: Some(rat_to_string(&c.residual)),
            ok: c.ok,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SlotJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h10: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h10_0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_total: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_a: Option<u64>,
}

impl SlotJson {
    pub fn from_partial(s: &PartialSlot) -> Self {
        SlotJson {
            h10: s.h10,
            h10_0: s.h10_0,
            delta: s.delta.as_ref().map(rat_to_string),
            delta0: s.delta0.as_ref().map(rat_to_string),
            nu_total: s.nu_total,
            u: s.u,
            q: s.q,
            rank_a: s.rank_a,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LedgerJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<SlotJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<SlotJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_fix: Option<SlotJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_var: Option<SlotJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<SlotJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta20: Option<String>,
}

impl LedgerJson {
    pub fn from_ledger(l: &TriangleLedger) -> Self {
        LedgerJson {
            f: l.f_slot.as_ref().map(SlotJson::from_partial),
            g: l.g_slot.as_ref().map(SlotJson::from_partial),
            h_fix: l.h_fix_slot.as_ref().map(SlotJson::from_partial),
            h_var: l.h_var_slot.as_ref().map(SlotJson::from_partial),
            h: l.h_full_slot.as_ref().map(SlotJson::from_partial),
            delta20: l.weight2.as_ref().map(|w| rat_to_string(&w.delta20)),
        }
    }
}

/// Top-level report. Sections are present only when the corresponding
/// pipeline ran.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k3_slices: Option<Vec<K3SliceJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<Vec<MonodromyJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy_apparent: Option<Vec<ApparentJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy_global: Option<GlobalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formulas: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangle: Option<Vec<TriangleCheckJson>>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
