//! TOML ingestion of family specs.
//!
//! Three kinds: `weierstrass` (g2/g3/level), `k3_slices` (G2/G3/t_samples/
//! level), `ledger_only` (slot tables and Hodge data). Rationals are strings
//! `"p"` or `"p/q"`. Unknown keys are rejected; fields belonging to another
//! kind are rejected.

use std::collections::BTreeMap;

use arakelov::error::Error;
use arakelov::formulas::{FujitaData, WeightOneData, WeightTwoData};
use arakelov::scalar::rat_from_str;
use arakelov::triangle::{PartialSlot, TriangleLedger, VData, Weight2Section};
use arakelov::Rat;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub kind: String,
    pub g2: Option<String>,
    pub g3: Option<String>,
    #[serde(rename = "G2")]
    pub big_g2: Option<String>,
    #[serde(rename = "G3")]
    pub big_g3: Option<String>,
    pub t_samples: Option<Vec<String>>,
    pub level: Option<u32>,
    pub genus: Option<u64>,
    pub pf_options: Option<PfOptionsToml>,
    pub ledger: Option<LedgerToml>,
    pub formulas: Option<FormulasToml>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PfOptionsToml {
    pub tolerance: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerToml {
    pub slots: Option<SlotsToml>,
    pub weight2: Option<Weight2Toml>,
    pub v_data: Option<VDataToml>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotsToml {
    pub f: Option<SlotToml>,
    pub g: Option<SlotToml>,
    pub h_fix: Option<SlotToml>,
    pub h_var: Option<SlotToml>,
    pub h: Option<SlotToml>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotToml {
    pub h10: Option<u64>,
    pub h10_0: Option<u64>,
    pub delta: Option<String>,
    pub delta0: Option<String>,
    pub nu_total: Option<u64>,
    pub u: Option<u64>,
    pub q: Option<u64>,
    pub rank_a: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weight2Toml {
    pub h20: u64,
    pub h11: u64,
    pub h02: u64,
    #[serde(default)]
    pub h20_0: u64,
    #[serde(default)]
    pub genus: u64,
    pub delta_zero_term: Option<String>,
    pub nu: Option<BTreeMap<String, u64>>,
    #[serde(default)]
    pub n_degen: u64,
    pub lmhs_corrections: Option<Vec<i64>>,
    pub delta20: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VDataToml {
    pub h10_v: i64,
    pub delta_v: String,
    pub rank_l10: u64,
    pub deg_l10: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulasToml {
    pub weight1: Option<Weight1Toml>,
    pub weight2: Option<Weight2Toml>,
    pub fujita: Option<FujitaToml>,
    pub euler: Option<EulerToml>,
    pub graded: Option<GradedToml>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weight1Toml {
    pub h10: u64,
    #[serde(default)]
    pub h10_0: u64,
    #[serde(default)]
    pub genus: u64,
    pub delta0: Option<String>,
    pub nu: Option<BTreeMap<String, u64>>,
    #[serde(default)]
    pub n_degen: u64,
    pub im_nbar_dims: Option<Vec<u64>>,
    pub nu_a: Option<Vec<u64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FujitaToml {
    #[serde(default)]
    pub rank_a: u64,
    #[serde(default)]
    pub rank_uprime: u64,
    #[serde(default)]
    pub q_f: u64,
    pub deg_a: Option<String>,
    pub h_n0: u64,
    #[serde(default)]
    pub h_n0_0: u64,
    pub deg_hn0: Option<String>,
    #[serde(default)]
    pub n_marked: u64,
    #[serde(default)]
    pub higgs_maximal: bool,
    pub weight_n: Option<u64>,
    #[serde(default)]
    pub genus: u64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerToml {
    pub h0v: u64,
    pub h1v: u64,
    pub delta0v: String,
    pub delta1v: String,
    #[serde(default)]
    pub genus: u64,
    #[serde(default)]
    pub nu_total: u64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedToml {
    pub deltas: BTreeMap<String, String>,
    pub hs: BTreeMap<String, u64>,
    #[serde(default)]
    pub genus: u64,
    #[serde(default)]
    pub nu_total: u64,
    pub p_min: i64,
    pub p_max: i64,
}

fn opt_rat(v: &Option<String>, field: &str) -> Result<Rat, Error> {
    match v {
        None => Ok(Rat::from_integer(0.into())),
        Some(s) => rat_from_str(s)
            .map_err(|e| Error::Invalid(format!("field {field}: {e}"))),
    }
}

fn nu_list(m: &Option<BTreeMap<String, u64>>) -> Vec<(String, u64)> {
    m.as_ref()
        .map(|m| m.iter().map(|(k, v)| (k.clone(), *v)).collect())
        .unwrap_or_default()
}

impl SlotToml {
    pub fn to_partial(&self, name: &str) -> Result<PartialSlot, Error> {
        let rat_field = |v: &Option<String>, f: &str| -> Result<Option<Rat>, Error> {
            v.as_ref()
                .map(|s| {
                    rat_from_str(s)
                        .map_err(|e| Error::Invalid(format!("slot {name}.{f}: {e}")))
                })
                .transpose()
        };
        Ok(PartialSlot {
            h10: self.h10,
            h10_0: self.h10_0,
            delta: rat_field(&self.delta, "delta")?,
            delta0: rat_field(&self.delta0, "delta0")?,
            nu_total: self.nu_total,
            u: self.u,
            q: self.q,
            rank_a: self.rank_a,
        })
    }
}

impl Weight2Toml {
    pub fn to_data(&self) -> Result<WeightTwoData, Error> {
        Ok(WeightTwoData {
            h20: self.h20,
            h11: self.h11,
            h02: self.h02,
            h20_0: self.h20_0,
            genus: self.genus,
            delta_zero_term: opt_rat(&self.delta_zero_term, "delta_zero_term")?,
            nu: nu_list(&self.nu),
            n_degen: self.n_degen,
            lmhs_corrections: self.lmhs_corrections.clone().unwrap_or_default(),
        })
    }
}

impl Weight1Toml {
    pub fn to_data(&self) -> Result<WeightOneData, Error> {
        Ok(WeightOneData {
            h10: self.h10,
            h10_0: self.h10_0,
            genus: self.genus,
            delta0: opt_rat(&self.delta0, "delta0")?,
            nu: nu_list(&self.nu),
            n_degen: self.n_degen,
            im_nbar_dims: self.im_nbar_dims.clone().unwrap_or_default(),
            nu_a: self.nu_a.clone().unwrap_or_default(),
        })
    }
}

impl FujitaToml {
    pub fn to_data(&self) -> Result<FujitaData, Error> {
        Ok(FujitaData {
            rank_a: self.rank_a,
            rank_uprime: self.rank_uprime,
            q_f: self.q_f,
            deg_a: opt_rat(&self.deg_a, "deg_a")?,
            h_n0: self.h_n0,
            h_n0_0: self.h_n0_0,
            deg_hn0: opt_rat(&self.deg_hn0, "deg_hn0")?,
            n_marked: self.n_marked,
            higgs_maximal: self.higgs_maximal,
            weight_n: self.weight_n.unwrap_or(1),
            genus: self.genus,
        })
    }
}

impl LedgerToml {
    pub fn to_ledger(&self) -> Result<TriangleLedger, Error> {
        let slots = self.slots.as_ref();
        let conv = |s: Option<&SlotToml>, name: &str| -> Result<Option<PartialSlot>, Error> {
            s.map(|s| s.to_partial(name)).transpose()
        };
        let weight2 = self
            .weight2
            .as_ref()
            .map(|w| -> Result<Weight2Section, Error> {
                Ok(Weight2Section {
                    data: w.to_data()?,
                    delta20: opt_rat(&w.delta20, "delta20")?,
                })
            })
            .transpose()?;
        let v_data = self
            .v_data
            .as_ref()
            .map(|v| -> Result<VData, Error> {
                Ok(VData {
                    h10_v: v.h10_v,
                    delta_v: rat_from_str(&v.delta_v)?,
                    rank_l10: v.rank_l10,
                    deg_l10: rat_from_str(&v.deg_l10)?,
                })
            })
            .transpose()?;
        let ledger = TriangleLedger {
            f_slot: conv(slots.and_then(|s| s.f.as_ref()), "f")?,
            g_slot: conv(slots.and_then(|s| s.g.as_ref()), "g")?,
            h_fix_slot: conv(slots.and_then(|s| s.h_fix.as_ref()), "h_fix")?,
            h_var_slot: conv(slots.and_then(|s| s.h_var.as_ref()), "h_var")?,
            h_full_slot: conv(slots.and_then(|s| s.h.as_ref()), "h")?,
            weight2,
            v_data,
        };
        Ok(ledger)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Weierstrass,
    K3Slices,
    LedgerOnly,
}

impl SpecFile {
    pub fn kind(&self) -> Result<Kind, Error> {
        let kind = match self.kind.as_str() {
            "weierstrass" => Kind::Weierstrass,
            "k3_slices" => Kind::K3Slices,
            "ledger_only" => Kind::LedgerOnly,
            other => {
                return Err(Error::Invalid(format!(
                    "unknown kind {other:?}; expected weierstrass, k3_slices or ledger_only"
                )))
            }
        };
        // exactly the fields of the declared kind
        let reject = |cond: bool, field: &str| -> Result<(), Error> {
            if cond {
                Err(Error::Invalid(format!(
                    "field {field} does not belong to kind {:?}",
                    self.kind
                )))
            } else {
                Ok(())
            }
        };
        match kind {
            Kind::Weierstrass => {
                reject(self.big_g2.is_some() || self.big_g3.is_some(), "G2/G3")?;
                reject(self.t_samples.is_some(), "t_samples")?;
                reject(self.ledger.is_some(), "ledger")?;
                reject(self.formulas.is_some(), "formulas")?;
            }
            Kind::K3Slices => {
                reject(self.g2.is_some() || self.g3.is_some(), "g2/g3")?;
                reject(self.ledger.is_some(), "ledger")?;
                reject(self.formulas.is_some(), "formulas")?;
                reject(self.pf_options.is_some(), "pf_options")?;
            }
            Kind::LedgerOnly => {
                reject(self.g2.is_some() || self.g3.is_some(), "g2/g3")?;
                reject(self.big_g2.is_some() || self.big_g3.is_some(), "G2/G3")?;
                reject(self.t_samples.is_some(), "t_samples")?;
                reject(self.level.is_some(), "level")?;
                reject(self.pf_options.is_some(), "pf_options")?;
            }
        }
        Ok(kind)
    }
}
