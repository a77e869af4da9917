//! Numeric ledger of a triangle fibration X → Y → S.
//!
//! Sheaves never appear here; only ranks and degrees travel. The ledger keeps
//! one slot per fibration (the total family f, the curve family g, and the
//! fixed/variable parts of the fiberwise family h), checks the additivity
//! identities of the fixed/variable split, the Fujita rank inequalities, and
//! the two degree inequalities tying the weight-2 bundle to the middle curve
//! family. Slots ingest with every field optional; a missing participant can
//! be solved for when exactly one is absent.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::formulas::WeightTwoData;
use crate::scalar::{rat_i64, rat_to_string};
use crate::weierstrass::{GenericProfile, K3Analysis};
use crate::Rat;

/// Complete per-fibration invariants.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FibrationSlot {
    pub h10: u64,
    pub h10_0: u64,
    pub delta: Rat,
    pub delta0: Rat,
    pub nu_total: u64,
    /// rank 𝒰 (flat part of the Fujita decomposition)
    pub u: u64,
    /// relative irregularity q_f
    pub q: u64,
    pub rank_a: u64,
}

impl FibrationSlot {
    pub fn validate(&self, name: &str) -> Result<()> {
        if self.h10_0 > self.h10 {
            return Err(Error::Invalid(format!(
                "slot {name}: h10_0 = {} exceeds h10 = {}",
                self.h10_0, self.h10
            )));
        }
        if self.u > self.h10_0 {
            return Err(Error::Invalid(format!(
                "slot {name}: u = {} exceeds h10_0 = {}",
                self.u, self.h10_0
            )));
        }
        if self.rank_a + self.u != self.h10 {
            return Err(Error::Invalid(format!(
                "slot {name}: rank_a + u = {} != h10 = {}",
                self.rank_a + self.u,
                self.h10
            )));
        }
        Ok(())
    }
}

/// A slot with unknowns. Absent = unknown.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartialSlot {
    pub h10: Option<u64>,
    pub h10_0: Option<u64>,
    pub delta: Option<Rat>,
    pub delta0: Option<Rat>,
    pub nu_total: Option<u64>,
    pub u: Option<u64>,
    pub q: Option<u64>,
    pub rank_a: Option<u64>,
}

impl PartialSlot {
    pub fn from_complete(s: &FibrationSlot) -> Self {
        PartialSlot {
            h10: Some(s.h10),
            h10_0: Some(s.h10_0),
            delta: Some(s.delta.clone()),
            delta0: Some(s.delta0.clone()),
            nu_total: Some(s.nu_total),
            u: Some(s.u),
            q: Some(s.q),
            rank_a: Some(s.rank_a),
        }
    }

    pub fn complete(&self, name: &str) -> Result<FibrationSlot> {
        let take_u = |v: Option<u64>, field: &str| {
            v.ok_or_else(|| Error::MissingSlot(format!("{name}.{field}")))
        };
        let take_r = |v: &Option<Rat>, field: &str| {
            v.clone()
                .ok_or_else(|| Error::MissingSlot(format!("{name}.{field}")))
        };
        Ok(FibrationSlot {
            h10: take_u(self.h10, "h10")?,
            h10_0: take_u(self.h10_0, "h10_0")?,
            delta: take_r(&self.delta, "delta")?,
            delta0: take_r(&self.delta0, "delta0")?,
            nu_total: take_u(self.nu_total, "nu_total")?,
            u: take_u(self.u, "u")?,
            q: take_u(self.q, "q")?,
            rank_a: take_u(self.rank_a, "rank_a")?,
        })
    }

    /// Fieldwise difference, for deriving the variable part h_full − h_fix.
    /// Negative differences in the integer fields are rejected.
    pub fn difference(full: &FibrationSlot, fix: &FibrationSlot) -> Result<FibrationSlot> {
        let sub = |a: u64, b: u64, field: &str| {
            a.checked_sub(b)
                .ok_or_else(|| Error::NegativeVariablePart(field.to_string()))
        };
        Ok(FibrationSlot {
            h10: sub(full.h10, fix.h10, "h10")?,
            h10_0: sub(full.h10_0, fix.h10_0, "h10_0")?,
            delta: &full.delta - &fix.delta,
            delta0: &full.delta0 - &fix.delta0,
            nu_total: sub(full.nu_total, fix.nu_total, "nu_total")?,
            u: sub(full.u, fix.u, "u")?,
            q: sub(full.q, fix.q, "q")?,
            rank_a: sub(full.rank_a, fix.rank_a, "rank_a")?,
        })
    }
}

/// Weight-2 section of the ledger: the Hodge data plus the degree δ^{2,0} of
/// the (2,0) bundle, which the formulas cannot derive on their own.
#[derive(Clone, Debug, Default)]
pub struct Weight2Section {
    pub data: WeightTwoData,
    pub delta20: Rat,
}

/// Middle-convolution data: 𝓗 = 𝒱 ⊗ 𝓛 with both weight-1.
#[derive(Clone, Debug, Default)]
pub struct VData {
    pub h10_v: i64,
    pub delta_v: Rat,
    pub rank_l10: u64,
    pub deg_l10: Rat,
}

#[derive(Clone, Debug, Default)]
pub struct TriangleLedger {
    pub f_slot: Option<PartialSlot>,
    pub g_slot: Option<PartialSlot>,
    pub h_fix_slot: Option<PartialSlot>,
    pub h_var_slot: Option<PartialSlot>,
    /// Full h-fibration slot; derived as h_fix + h_var when absent.
    pub h_full_slot: Option<PartialSlot>,
    pub weight2: Option<Weight2Section>,
    pub v_data: Option<VData>,
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Rat,
    pub rhs: Rat,
    pub ok: bool,
}

impl IdentityCheck {
    fn of(name: impl Into<String>, lhs: Rat, rhs: Rat) -> Self {
        let ok = lhs == rhs;
        IdentityCheck {
            name: name.into(),
            lhs,
            rhs,
            ok,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InequalityCheck {
    pub name: String,
    pub ok: bool,
    pub residual: Rat,
}

fn slot(l: &Option<PartialSlot>, name: &str) -> Result<FibrationSlot> {
    l.as_ref()
        .ok_or_else(|| Error::MissingSlot(name.to_string()))?
        .complete(name)
}

impl TriangleLedger {
    /// The full h slot: as supplied, or h_fix + h_var fieldwise.
    pub fn h_full(&self) -> Result<FibrationSlot> {
        if let Some(h) = &self.h_full_slot {
            return h.complete("h");
        }
        let fix = slot(&self.h_fix_slot, "h_fix")?;
        let var = slot(&self.h_var_slot, "h_var")?;
        Ok(FibrationSlot {
            h10: fix.h10 + var.h10,
            h10_0: fix.h10_0 + var.h10_0,
            delta: &fix.delta + &var.delta,
            delta0: &fix.delta0 + &var.delta0,
            nu_total: fix.nu_total + var.nu_total,
            u: fix.u + var.u,
            q: fix.q + var.q,
            rank_a: fix.rank_a + var.rank_a,
        })
    }

    /// Consistency of a supplied full-h slot with fix/var: var must equal
    /// full − fix, with no negative entries.
    pub fn validate_h_family(&self) -> Result<()> {
        if let (Some(full), Some(fix), Some(var)) =
            (&self.h_full_slot, &self.h_fix_slot, &self.h_var_slot)
        {
            let (full, fix, var) = (
                full.complete("h")?,
                fix.complete("h_fix")?,
                var.complete("h_var")?,
            );
            let diff = PartialSlot::difference(&full, &fix)?;
            if diff != var {
                return Err(Error::Invalid(
                    "h_var does not equal h - h_fix fieldwise".to_string(),
                ));
            }
        }
        Ok(())
    }
}

/// The additivity identities of the fixed/variable split: each invariant of
/// the total family equals the curve-family value plus the fixed part of the
/// fiberwise value. The δ identity is also checked in its equivalent
/// var-subtracted form when the variable slot is populated.
pub fn check_prop56(l: &TriangleLedger) -> Result<Vec<IdentityCheck>> {
    let f = slot(&l.f_slot, "f")?;
    let g = slot(&l.g_slot, "g")?;
    let hf = slot(&l.h_fix_slot, "h_fix")?;
    let int = |v: u64| rat_i64(v as i64);
    let mut out = vec![
        IdentityCheck::of("h10_additivity", int(f.h10), int(g.h10 + hf.h10)),
        IdentityCheck::of("h10_0_additivity", int(f.h10_0), int(g.h10_0 + hf.h10_0)),
        IdentityCheck::of("delta0_additivity", f.delta0.clone(), &g.delta0 + &hf.delta0),
        IdentityCheck::of("nu_additivity", int(f.nu_total), int(g.nu_total + hf.nu_total)),
        IdentityCheck::of("delta_additivity", f.delta.clone(), &g.delta + &hf.delta),
        IdentityCheck::of("flat_rank_additivity", int(f.u), int(g.u + hf.u)),
    ];
    if l.h_var_slot.is_some() || l.h_full_slot.is_some() {
        if let (Ok(hfull), Ok(hvar)) = (l.h_full(), slot(&l.h_var_slot, "h_var")) {
            out.push(IdentityCheck::of(
                "delta_additivity_var_form",
                f.delta.clone(),
                &(&g.delta + &hfull.delta) - &hvar.delta,
            ));
            out.push(IdentityCheck::of(
                "flat_rank_additivity_var_form",
                int(f.u),
                int(g.u) + int(hfull.u) - int(hvar.u),
            ));
        }
    }
    Ok(out)
}

/// Fujita rank inequalities across the triangle: the ample, flat and trivial
/// ranks of the total family are bounded by the sums over the two legs.
pub fn check_fujita_ranks(
    l: &TriangleLedger,
    h_full: &FibrationSlot,
) -> Result<Vec<InequalityCheck>> {
    let f = slot(&l.f_slot, "f")?;
    let g = slot(&l.g_slot, "g")?;
    let mk = |name: &str, lhs: u64, rhs: u64| InequalityCheck {
        name: name.to_string(),
        ok: lhs <= rhs,
        residual: rat_i64(rhs as i64) - rat_i64(lhs as i64),
    };
    Ok(vec![
        mk("ample_rank_bound", f.rank_a, g.rank_a + h_full.rank_a),
        mk("flat_rank_bound", f.u, g.u + h_full.u),
        mk("irregularity_bound", f.q, g.q + h_full.q),
    ])
}

#[derive(Clone, Debug)]
pub struct Thm58Check {
    pub lhs: Rat,
    pub rhs: Rat,
    /// lhs − rhs; equals Σν_s of the log-twisted Kodaira–Spencer cokernel
    /// when the data comes from the underlying degree identity.
    pub residual: Rat,
    pub ok: bool,
}

/// Degree inequality for a family of surfaces fibered by curves:
/// δ^{2,0} + 2(δ^{1,0} − (δ¹ + δ²)) ≥ (h^{1,1} − h^{2,0})(2g − 2)² − h^{1,0}(2)_var(2g − 2),
/// with the residual interpreted as Σν ≥ 0.
pub fn check_thm58(l: &TriangleLedger, genus: u64) -> Result<Thm58Check> {
    let f = slot(&l.f_slot, "f")?;
    let g = slot(&l.g_slot, "g")?;
    let h_full = l.h_full()?;
    let h_var = slot(&l.h_var_slot, "h_var")?;
    let w2 = l
        .weight2
        .as_ref()
        .ok_or_else(|| Error::MissingSlot("weight2".to_string()))?;
    let two_g = rat_i64(2 * genus as i64 - 2);
    let lhs = &w2.delta20
        + rat_i64(2) * (&f.delta - &(&g.delta + &h_full.delta));
    let rhs = (rat_i64(w2.data.h11 as i64) - rat_i64(w2.data.h20 as i64)) * (&two_g * &two_g)
        - rat_i64(h_var.h10 as i64) * &two_g;
    let residual = &lhs - &rhs;
    let ok = !residual.is_negative();
    Ok(Thm58Check {
        lhs,
        rhs,
        residual,
        ok,
    })
}

#[derive(Clone, Debug)]
pub struct Thm513Check {
    pub delta20: Rat,
    pub bound: Rat,
    pub ok_main: bool,
    pub ok_corollary: bool,
}

/// Tensor-split bound: δ^{2,0}(𝓗) = δ(𝒱)·rank 𝓛^{1,0} + h^{1,0}(𝒱)·deg 𝓛^{1,0}
/// must dominate ½(h^{1,0}_{X/Y} − h^{1,0}_{0,X/Y})(2g − 2) + h^{1,0}_{X/Y},
/// and in particular δ^{2,0} ≥ δ^{1,0}_{X/Y}.
pub fn check_thm513(l: &TriangleLedger, genus: u64) -> Result<Thm513Check> {
    let v = l
        .v_data
        .as_ref()
        .ok_or_else(|| Error::MissingSlot("v_data".to_string()))?;
    if l.weight2.is_none() {
        return Err(Error::MissingSlot("weight2".to_string()));
    }
    let h = l.h_full()?;
    let delta20 = &v.delta_v * rat_i64(v.rank_l10 as i64) + rat_i64(v.h10_v) * &v.deg_l10;
    let half = Rat::new(1.into(), 2.into());
    let bound = half
        * rat_i64((h.h10 - h.h10_0) as i64)
        * rat_i64(2 * genus as i64 - 2)
        + rat_i64(h.h10 as i64);
    let ok_main = delta20 >= bound;
    let ok_corollary = delta20 >= v.delta_v;
    Ok(Thm513Check {
        delta20,
        bound,
        ok_main,
        ok_corollary,
    })
}

/// Participant fields of the additivity identity system.
const PARTICIPANTS: [&str; 6] = ["h10", "h10_0", "delta", "delta0", "nu_total", "u"];

fn field_of(s: &PartialSlot, field: &str) -> Option<Rat> {
    match field {
        "h10" => s.h10.map(|v| rat_i64(v as i64)),
        "h10_0" => s.h10_0.map(|v| rat_i64(v as i64)),
        "delta" => s.delta.clone(),
        "delta0" => s.delta0.clone(),
        "nu_total" => s.nu_total.map(|v| rat_i64(v as i64)),
        "u" => s.u.map(|v| rat_i64(v as i64)),
        _ => None,
    }
}

/// Solves for the single absent participant field from the linear identity
/// system { f.X = g.X + h_fix.X, h.X = h_fix.X + h_var.X }. Errors when no
/// identity determines the unknown, when more than one field is absent, or
/// when two identities disagree.
pub fn solve_missing(l: &TriangleLedger) -> Result<(String, Rat)> {
    let slots: Vec<(&str, &PartialSlot)> = [
        ("f", &l.f_slot),
        ("g", &l.g_slot),
        ("h_fix", &l.h_fix_slot),
        ("h_var", &l.h_var_slot),
        ("h", &l.h_full_slot),
    ]
    .into_iter()
    .filter_map(|(n, s)| s.as_ref().map(|s| (n, s)))
    .collect();

    let mut missing: Vec<String> = Vec::new();
    for (name, s) in &slots {
        for field in PARTICIPANTS {
            if field_of(s, field).is_none() {
                missing.push(format!("{name}.{field}"));
            }
        }
    }
    match missing.len() {
        0 => return Err(Error::Underdetermined("no field is absent".to_string())),
        1 => {}
        _ => {
            return Err(Error::Underdetermined(format!(
                "more than one unknown: {}",
                missing.join(", ")
            )))
        }
    }
    let unknown = missing.remove(0);
    let (slot_name, field) = unknown.split_once('.').expect("qualified name");

    let get = |n: &str| -> Option<&PartialSlot> {
        slots.iter().find(|(m, _)| *m == n).map(|(_, s)| *s)
    };
    // identity lhs = a + b, encoded as (lhs, a, b)
    let equations: [(&str, &str, &str); 2] = [("f", "g", "h_fix"), ("h", "h_fix", "h_var")];
    let mut candidates: Vec<Rat> = Vec::new();
    for (lhs, a, b) in equations {
        let names = [lhs, a, b];
        if !names.contains(&slot_name) {
            continue;
        }
        let vals: Vec<Option<Rat>> = names
            .iter()
            .map(|n| get(n).and_then(|s| field_of(s, field)))
            .collect();
        let known = |i: usize| vals[i].clone();
        let value = if slot_name == lhs {
            match (known(1), known(2)) {
                (Some(a), Some(b)) => a + b,
                _ => continue,
            }
        } else if slot_name == a {
            match (known(0), known(2)) {
                (Some(l), Some(b)) => l - b,
                _ => continue,
            }
        } else {
            match (known(0), known(1)) {
                (Some(l), Some(a)) => l - a,
                _ => continue,
            }
        };
        candidates.push(value);
    }
    candidates.dedup();
    match candidates.len() {
        0 => Err(Error::Underdetermined(unknown)),
        1 => Ok((unknown, candidates.remove(0))),
        _ => Err(Error::Overdetermined {
            field: unknown,
            values: candidates.iter().map(rat_to_string).collect(),
        }),
    }
}

/// Builds the partially-populated ledger for a two-parameter family of
/// surfaces whose slices are elliptic: the fiberwise weight-1 system is all
/// fixed (𝓗_var = 0), h_fix carries the generic slice profile, f and g are
/// left for completion, and the weight-2 section records δ^{2,0} = deg J.
pub fn ledger_from_k3(analysis: &K3Analysis, base_genus: u64) -> Result<TriangleLedger> {
    let profile: &GenericProfile = &analysis.profile;
    let rep = &profile.representative;
    let nu = if rep.isotrivial {
        0
    } else {
        // residual of the N = 2δ + 2 + Σν bookkeeping, clamped at zero
        let two_delta_plus_2 = &rep.delta_degree * rat_i64(2) + rat_i64(2);
        let res = rat_i64(rep.n_singular as i64) - two_delta_plus_2;
        if res.is_negative() {
            0
        } else {
            (res.numer() / res.denom()).try_into().unwrap_or(0)
        }
    };
    let h_fix = if rep.isotrivial {
        FibrationSlot {
            h10: 1,
            h10_0: 1,
            delta: rep.delta_degree.clone(),
            delta0: rep.delta_degree.clone(),
            nu_total: 0,
            u: 1,
            q: 0,
            rank_a: 0,
        }
    } else {
        FibrationSlot {
            h10: 1,
            h10_0: 0,
            delta: rep.delta_degree.clone(),
            delta0: Rat::zero(),
            nu_total: nu,
            u: 0,
            q: 0,
            rank_a: 1,
        }
    };
    let h_var = FibrationSlot::default();
    let weight2 = Weight2Section {
        data: WeightTwoData {
            h20: 1,
            h11: 20,
            h02: 1,
            h20_0: 0,
            genus: base_genus,
            ..Default::default()
        },
        delta20: rat_i64(profile.deg_j as i64),
    };
    Ok(TriangleLedger {
        f_slot: None,
        g_slot: None,
        h_fix_slot: Some(PartialSlot::from_complete(&h_fix)),
        h_var_slot: Some(PartialSlot::from_complete(&h_var)),
        h_full_slot: Some(PartialSlot::from_complete(&h_fix)),
        weight2: Some(weight2),
        v_data: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn sample_slot(h10: u64, h10_0: u64, delta: Rat, delta0: Rat, nu: u64, u: u64) -> FibrationSlot {
        FibrationSlot {
            h10,
            h10_0,
            delta,
            delta0,
            nu_total: nu,
            u,
            q: 0,
            rank_a: h10 - u,
        }
    }

    fn consistent_ledger() -> TriangleLedger {
        let g = sample_slot(2, 1, rat_i64(3), rat(1, 2), 2, 1);
        let h_fix = sample_slot(3, 1, rat(5, 2), rat(1, 2), 1, 1);
        let h_var = sample_slot(1, 0, rat_i64(1), rat_i64(0), 0, 0);
        let f = FibrationSlot {
            h10: g.h10 + h_fix.h10,
            h10_0: g.h10_0 + h_fix.h10_0,
            delta: &g.delta + &h_fix.delta,
            delta0: &g.delta0 + &h_fix.delta0,
            nu_total: g.nu_total + h_fix.nu_total,
            u: g.u + h_fix.u,
            q: g.q + h_fix.q,
            rank_a: g.rank_a + h_fix.rank_a,
        };
        TriangleLedger {
            f_slot: Some(PartialSlot::from_complete(&f)),
            g_slot: Some(PartialSlot::from_complete(&g)),
            h_fix_slot: Some(PartialSlot::from_complete(&h_fix)),
            h_var_slot: Some(PartialSlot::from_complete(&h_var)),
            h_full_slot: None,
            weight2: None,
            v_data: None,
        }
    }

    #[test]
    fn prop56_consistent_roundtrip() {
        let checks = check_prop56(&consistent_ledger()).unwrap();
        assert!(checks.iter().all(|c| c.ok), "{checks:?}");
    }

    #[test]
    fn prop56_product_family() {
        // trivial second factor: f = g, h_fix = 0
        let g = sample_slot(2, 1, rat_i64(3), rat(1, 2), 2, 1);
        let l = TriangleLedger {
            f_slot: Some(PartialSlot::from_complete(&g)),
            g_slot: Some(PartialSlot::from_complete(&g)),
            h_fix_slot: Some(PartialSlot::from_complete(&FibrationSlot::default())),
            ..Default::default()
        };
        assert!(check_prop56(&l).unwrap().iter().all(|c| c.ok));
    }

    #[test]
    fn prop56_detects_perturbation() {
        let mut l = consistent_ledger();
        let f = l.f_slot.as_mut().unwrap();
        f.h10 = Some(f.h10.unwrap() + 1);
        let checks = check_prop56(&l).unwrap();
        let bad = checks.iter().find(|c| c.name == "h10_additivity").unwrap();
        assert!(!bad.ok);
        assert_eq!(&bad.lhs - &bad.rhs, rat_i64(1));
        assert!(checks.iter().filter(|c| !c.ok).count() == 1);
    }

    #[test]
    fn prop56_missing_slot() {
        let mut l = consistent_ledger();
        l.g_slot = None;
        assert_eq!(
            check_prop56(&l).unwrap_err(),
            Error::MissingSlot("g".to_string())
        );
    }

    #[test]
    fn fujita_ranks_consistent_and_violated() {
        let l = consistent_ledger();
        let h_full = l.h_full().unwrap();
        let checks = check_fujita_ranks(&l, &h_full).unwrap();
        assert!(checks.iter().all(|c| c.ok));

        // force q_f = q_g + q_h + 1
        let mut l2 = consistent_ledger();
        l2.f_slot.as_mut().unwrap().q = Some(1);
        let h_full = l2.h_full().unwrap();
        let checks = check_fujita_ranks(&l2, &h_full).unwrap();
        let q = checks.iter().find(|c| c.name == "irregularity_bound").unwrap();
        assert!(!q.ok);
        assert_eq!(q.residual, rat_i64(-1));

        // all-zero ledger passes with residual 0
        let zero = PartialSlot::from_complete(&FibrationSlot::default());
        let l3 = TriangleLedger {
            f_slot: Some(zero.clone()),
            g_slot: Some(zero.clone()),
            h_fix_slot: Some(zero.clone()),
            h_var_slot: Some(zero.clone()),
            ..Default::default()
        };
        let h_full = l3.h_full().unwrap();
        for c in check_fujita_ranks(&l3, &h_full).unwrap() {
            assert!(c.ok);
            assert!(c.residual.is_zero());
        }
    }

    #[test]
    fn thm58_zero_case_and_genus_one() {
        // all degrees zero, h11 = h20: lhs = rhs = 0
        let zero = PartialSlot::from_complete(&FibrationSlot::default());
        let mut l = TriangleLedger {
            f_slot: Some(zero.clone()),
            g_slot: Some(zero.clone()),
            h_fix_slot: Some(zero.clone()),
            h_var_slot: Some(zero.clone()),
            ..Default::default()
        };
        l.weight2 = Some(Weight2Section {
            data: WeightTwoData {
                h20: 3,
                h02: 3,
                h11: 3,
                ..Default::default()
            },
            delta20: Rat::zero(),
        });
        for genus in [0u64, 1, 2] {
            let c = check_thm58(&l, genus).unwrap();
            assert!(c.ok);
            assert!(c.residual.is_zero());
        }
        // genus 1: rhs = 0, ok iff the degree combination is nonnegative
        let mut l2 = l.clone();
        l2.weight2.as_mut().unwrap().delta20 = rat_i64(-1);
        let c = check_thm58(&l2, 1).unwrap();
        assert!(!c.ok);
        assert!(c.rhs.is_zero());
    }

    #[test]
    fn thm58_residual_is_nu_total() {
        // generate from the degree identity with Σν = 3
        let nu = rat_i64(3);
        let g = sample_slot(2, 1, rat_i64(2), rat_i64(0), 0, 1);
        let h_fix = sample_slot(1, 0, rat_i64(1), rat_i64(0), 0, 0);
        let h_var = sample_slot(2, 1, rat_i64(2), rat_i64(0), 0, 1);
        let f = sample_slot(3, 1, rat_i64(3), rat_i64(0), 0, 1);
        let genus = 2u64;
        let (h20, h11) = (1u64, 4u64);
        let two_g = rat_i64(2 * genus as i64 - 2);
        let h_full_delta = &h_fix.delta + &h_var.delta;
        // δ^{2,0} chosen so lhs − rhs = ν exactly
        let rhs = (rat_i64(h11 as i64) - rat_i64(h20 as i64)) * (&two_g * &two_g)
            - rat_i64(h_var.h10 as i64) * &two_g;
        let delta20 = &rhs + &nu
            - rat_i64(2) * (&f.delta - &(&g.delta + &h_full_delta));
        let l = TriangleLedger {
            f_slot: Some(PartialSlot::from_complete(&f)),
            g_slot: Some(PartialSlot::from_complete(&g)),
            h_fix_slot: Some(PartialSlot::from_complete(&h_fix)),
            h_var_slot: Some(PartialSlot::from_complete(&h_var)),
            h_full_slot: None,
            weight2: Some(Weight2Section {
                data: WeightTwoData {
                    h20,
                    h02: h20,
                    h11,
                    genus,
                    ..Default::default()
                },
                delta20,
            }),
            v_data: None,
        };
        let c = check_thm58(&l, genus).unwrap();
        assert_eq!(c.residual, nu);
        assert!(c.ok);
    }

    #[test]
    fn thm513_cases() {
        let mk = |h10_v: i64, delta_v: Rat, rank_l10: u64, deg_l10: Rat| {
            let h = sample_slot(2, 0, rat_i64(1), rat_i64(0), 0, 0);
            TriangleLedger {
                h_full_slot: Some(PartialSlot::from_complete(&h)),
                weight2: Some(Weight2Section::default()),
                v_data: Some(VData {
                    h10_v,
                    delta_v,
                    rank_l10,
                    deg_l10,
                }),
                ..Default::default()
            }
        };
        // trivial 𝓛: δ^{2,0} = δ_v, corollary tight
        let c = check_thm513(&mk(2, rat_i64(1), 1, rat_i64(0)), 0).unwrap();
        assert_eq!(c.delta20, rat_i64(1));
        assert!(c.ok_corollary);

        // δ^{2,0} = 1·1 + 2·1 = 3 ≥ 1
        let c = check_thm513(&mk(2, rat_i64(1), 1, rat_i64(1)), 0).unwrap();
        assert_eq!(c.delta20, rat_i64(3));
        assert!(c.ok_corollary);
        // bound at genus 0 for h slot (2,0): ½·2·(−2) + 2 = 0, main holds
        assert_eq!(c.bound, rat_i64(0));
        assert!(c.ok_main);

        // negative deg_l10 violates the main bound at higher genus: reported
        let c = check_thm513(&mk(3, rat_i64(0), 1, rat_i64(-5)), 2).unwrap();
        assert!(!c.ok_main);
        assert!(!c.ok_corollary);
    }

    #[test]
    fn solve_h10_of_f() {
        let mut l = consistent_ledger();
        l.h_var_slot = None;
        let f = l.f_slot.as_mut().unwrap();
        f.h10 = None;
        let (field, value) = solve_missing(&l).unwrap();
        assert_eq!(field, "f.h10");
        assert_eq!(value, rat_i64(5));
    }

    #[test]
    fn solve_h_var_delta_by_rearrangement() {
        // δ_hvar = δ_g + δ_h − δ_f
        let g = sample_slot(1, 0, rat_i64(2), rat_i64(0), 0, 0);
        let h_fix = sample_slot(1, 0, rat_i64(1), rat_i64(0), 0, 0);
        let h_var = sample_slot(1, 1, rat_i64(0), rat_i64(0), 0, 0);
        let h = sample_slot(2, 1, rat_i64(1) + rat_i64(0), rat_i64(0), 0, 0);
        let f = sample_slot(2, 0, rat_i64(3), rat_i64(0), 0, 0);
        let mut hv = PartialSlot::from_complete(&h_var);
        hv.delta = None;
        let l = TriangleLedger {
            f_slot: Some(PartialSlot::from_complete(&f)),
            g_slot: Some(PartialSlot::from_complete(&g)),
            h_fix_slot: Some(PartialSlot::from_complete(&h_fix)),
            h_var_slot: Some(hv),
            h_full_slot: Some(PartialSlot::from_complete(&h)),
            ..Default::default()
        };
        let (field, value) = solve_missing(&l).unwrap();
        assert_eq!(field, "h_var.delta");
        assert_eq!(value, rat_i64(0)); // δ_h − δ_hfix = 1 − 1
    }

    #[test]
    fn solve_two_unknowns_underdetermined() {
        let mut l = consistent_ledger();
        l.f_slot.as_mut().unwrap().h10 = None;
        l.g_slot.as_mut().unwrap().delta = None;
        assert!(matches!(
            solve_missing(&l),
            Err(Error::Underdetermined(_))
        ));
    }

    #[test]
    fn solve_conflict_overdetermined() {
        // h_fix.delta appears in both identities with conflicting values
        let g = sample_slot(1, 0, rat_i64(1), rat_i64(0), 0, 0);
        let f = sample_slot(2, 0, rat_i64(4), rat_i64(0), 0, 0);
        let h_var = sample_slot(0, 0, rat_i64(0), rat_i64(0), 0, 0);
        let h = sample_slot(1, 0, rat_i64(7), rat_i64(0), 0, 0);
        let mut hf = PartialSlot::from_complete(&sample_slot(1, 0, rat_i64(0), rat_i64(0), 0, 0));
        hf.delta = None;
        let l = TriangleLedger {
            f_slot: Some(PartialSlot::from_complete(&f)),
            g_slot: Some(PartialSlot::from_complete(&g)),
            h_fix_slot: Some(hf),
            h_var_slot: Some(PartialSlot::from_complete(&h_var)),
            h_full_slot: Some(PartialSlot::from_complete(&h)),
            ..Default::default()
        };
        // identity f: δ_hfix = 4 − 1 = 3; identity h: δ_hfix = 7 − 0 = 7
        match solve_missing(&l) {
            Err(Error::Overdetermined { values, .. }) => {
                assert_eq!(values, vec!["3".to_string(), "7".to_string()]);
            }
            other => panic!("expected Overdetermined, got {other:?}"),
        }
    }

    #[test]
    fn solved_value_makes_identity_hold() {
        let mut l = consistent_ledger();
        l.h_var_slot = None;
        l.g_slot.as_mut().unwrap().delta = None;
        let (field, value) = solve_missing(&l).unwrap();
        assert_eq!(field, "g.delta");
        l.g_slot.as_mut().unwrap().delta = Some(value);
        assert!(check_prop56(&l).unwrap().iter().all(|c| c.ok));
    }

    #[test]
    fn h_var_difference_rejects_negative() {
        let full = sample_slot(1, 0, rat_i64(1), rat_i64(0), 0, 0);
        let fix = sample_slot(2, 0, rat_i64(1), rat_i64(0), 0, 0);
        assert!(matches!(
            PartialSlot::difference(&full, &fix),
            Err(Error::NegativeVariablePart(_))
        ));
    }

    #[test]
    fn k3_ledger_population() {
        use crate::parse::parse_bipoly;
        use crate::scalar::rat_i64 as ri;
        use crate::weierstrass::k3_slice_reports;
        let g2 = parse_bipoly("s").unwrap();
        let g3 = parse_bipoly("1").unwrap();
        let analysis = k3_slice_reports(&g2, &g3, 1, &[ri(0), ri(1)]).unwrap();
        let ledger = ledger_from_k3(&analysis, 0).unwrap();
        let h_fix = ledger.h_fix_slot.as_ref().unwrap();
        assert_eq!(h_fix.h10, Some(1));
        assert_eq!(h_fix.h10_0, Some(0));
        assert_eq!(h_fix.delta, Some(rat_i64(1)));
        assert_eq!(h_fix.nu_total, Some(0)); // N = 4 = 2δ + 2 exactly
        let h_var = ledger.h_var_slot.as_ref().unwrap();
        assert_eq!(h_var.h10, Some(0));
        let w2 = ledger.weight2.as_ref().unwrap();
        assert_eq!(w2.data.h20, 1);
        assert_eq!(w2.delta20, rat_i64(3)); // deg J of the generic slice
        assert!(ledger.f_slot.is_none() && ledger.g_slot.is_none());
    }
}
