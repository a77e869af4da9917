//! Arakelov degree identities and inequalities on user-supplied Hodge data.
//!
//! Every evaluator is a literal transcription of the corresponding degree
//! formula; no sign is "fixed" where the printed variants disagree. The two
//! weight-2 variants differ in the sign of the bracket, and the local-system
//! Euler characteristic keeps its unusual sign pattern; discrepancies are the
//! caller's to report, not ours to resolve.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::rat_i64;
use crate::Rat;

/// Weight-1 Hodge data: ranks, base genus, kernel degree δ₀, rank-drop
/// corrections ν, and per-degeneracy data (dim Im N̄ᵢ and ν(Āᵢ)).
#[derive(Clone, Debug, Default)]
pub struct WeightOneData {
    pub h10: u64,
    pub h10_0: u64,
    pub genus: u64,
    pub delta0: Rat,
    pub nu: Vec<(String, u64)>,
    pub n_degen: u64,
    pub im_nbar_dims: Vec<u64>,
    pub nu_a: Vec<u64>,
}

impl WeightOneData {
    pub fn validate(&self) -> Result<()> {
        if self.h10_0 > self.h10 {
            return Err(Error::RankOrder {
                h: self.h10,
                h0: self.h10_0,
            });
        }
        for &d in &self.im_nbar_dims {
            if d > self.h10 - self.h10_0 {
                return Err(Error::Invalid(format!(
                    "dim Im N̄ = {d} exceeds h10 - h10_0 = {}",
                    self.h10 - self.h10_0
                )));
            }
        }
        Ok(())
    }

    fn nu_sum(&self) -> u64 {
        self.nu.iter().map(|(_, v)| *v).sum()
    }
}

/// Weight-2 Hodge data; `delta_zero_term` is the aggregate δ(0) = a₀+b₀+b₁,
/// accepted as one opaque rational. `lmhs_corrections` are the per-degeneracy
/// ĥᵢ^{2,0} − hᵢ^{2,0} differences of limit Hodge numbers.
#[derive(Clone, Debug, Default)]
pub struct WeightTwoData {
    pub h20: u64,
    pub h11: u64,
    pub h02: u64,
    pub h20_0: u64,
    pub genus: u64,
    pub delta_zero_term: Rat,
    pub nu: Vec<(String, u64)>,
    pub n_degen: u64,
    pub lmhs_corrections: Vec<i64>,
}

impl WeightTwoData {
    pub fn validate(&self) -> Result<()> {
        if self.h20_0 > self.h20 {
            return Err(Error::RankOrder {
                h: self.h20,
                h0: self.h20_0,
            });
        }
        if self.h02 != self.h20 {
            return Err(Error::Invalid(format!(
                "polarized weight-2 symmetry requires h02 = h20, got {} and {}",
                self.h02, self.h20
            )));
        }
        Ok(())
    }

    fn nu_sum(&self) -> u64 {
        self.nu.iter().map(|(_, v)| *v).sum()
    }
}

/// Fujita decomposition bookkeeping for one fibration of `weight_n`-folds
/// over a genus-`genus` base. `u_f = rank_uprime + q_f` is the flat rank.
#[derive(Clone, Debug, Default)]
pub struct FujitaData {
    pub rank_a: u64,
    pub rank_uprime: u64,
    pub q_f: u64,
    pub deg_a: Rat,
    pub h_n0: u64,
    pub h_n0_0: u64,
    pub deg_hn0: Rat,
    pub n_marked: u64,
    pub higgs_maximal: bool,
    pub weight_n: u64,
    pub genus: u64,
}

impl FujitaData {
    pub fn u_f(&self) -> u64 {
        self.rank_uprime + self.q_f
    }
}

fn two_g_minus_2(genus: u64) -> Rat {
    rat_i64(2 * genus as i64 - 2)
}

/// Weight-1 degree formula:
/// δ = ½(h^{1,0} − h₀^{1,0})(2g − 2) + δ₀ − ½·Σν.
pub fn delta_weight1(d: &WeightOneData) -> Result<Rat> {
    d.validate()?;
    let half = Rat::new(1.into(), 2.into());
    let rank_term = rat_i64((d.h10 - d.h10_0) as i64) * two_g_minus_2(d.genus);
    Ok(&half * &rank_term + &d.delta0 - half * rat_i64(d.nu_sum() as i64))
}

/// Weight-1 formula in its degeneracy form:
/// δ = ½[(h^{1,0} − h₀^{1,0})(2g − 2) + Σᵢ dim Im N̄ᵢ]
///   − [(−δ₀) + ½(Σ_s ν_s(θ̄) + Σᵢ ν(Āᵢ))].
pub fn delta_weight1_degenerate(d: &WeightOneData) -> Result<Rat> {
    d.validate()?;
    for (name, len) in [
        ("im_nbar_dims", d.im_nbar_dims.len()),
        ("nu_a", d.nu_a.len()),
    ] {
        if len != d.n_degen as usize {
            return Err(Error::LengthMismatch {
                name: if name == "im_nbar_dims" {
                    "im_nbar_dims"
                } else {
                    "nu_a"
                },
                len,
                expected: d.n_degen as usize,
            });
        }
    }
    let half = Rat::new(1.into(), 2.into());
    let rank_term = rat_i64((d.h10 - d.h10_0) as i64) * two_g_minus_2(d.genus);
    let im_sum = rat_i64(d.im_nbar_dims.iter().sum::<u64>() as i64);
    let nu_sum = rat_i64((d.nu_sum() + d.nu_a.iter().sum::<u64>()) as i64);
    Ok(&half * &(rank_term + im_sum) - (-&d.delta0 + half * nu_sum))
}

/// Weight-2 degree formula. Nondegenerate:
/// δ^{2,0} = (h^{2,0} − h₀^{2,0})(2g − 2) − [δ(0) + Σν];
/// degenerate:
/// δ^{2,0} = (h^{2,0} − h₀^{2,0})(2g − 2 + N) + [δ(0) + Σν + Σ(ĥᵢ − hᵢ)].
/// The bracket changes sign between the two variants, as printed.
pub fn delta_weight2(d: &WeightTwoData, degenerate: bool) -> Result<Rat> {
    d.validate()?;
    let rank = rat_i64((d.h20 - d.h20_0) as i64);
    if !degenerate {
        let bracket = &d.delta_zero_term + rat_i64(d.nu_sum() as i64);
        return Ok(rank * two_g_minus_2(d.genus) - bracket);
    }
    if d.lmhs_corrections.len() != d.n_degen as usize {
        return Err(Error::LengthMismatch {
            name: "lmhs_corrections",
            len: d.lmhs_corrections.len(),
            expected: d.n_degen as usize,
        });
    }
    let bracket = &d.delta_zero_term
        + rat_i64(d.nu_sum() as i64)
        + rat_i64(d.lmhs_corrections.iter().sum::<i64>());
    Ok(rank * (two_g_minus_2(d.genus) + rat_i64(d.n_degen as i64)) + bracket)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArakelovBound {
    pub bound: Rat,
    pub ok: bool,
    pub tight: bool,
}

/// Arakelov inequality deg 𝓗^{n,0} ≤ (n/2)·rank·(2g − 2 + ♯E), with equality
/// forced when the Higgs field is declared maximal.
pub fn arakelov_inequality(
    deg_hn0: &Rat,
    rank_hn0: u64,
    weight_n: u64,
    genus: u64,
    n_marked: u64,
    higgs_maximal: bool,
) -> Result<ArakelovBound> {
    let bound = Rat::new((weight_n as i64).into(), 2.into())
        * rat_i64(rank_hn0 as i64)
        * (two_g_minus_2(genus) + rat_i64(n_marked as i64));
    let ok = deg_hn0 <= &bound;
    let tight = deg_hn0 == &bound;
    if higgs_maximal && !tight {
        return Err(Error::MaximalityViolation {
            deg: crate::scalar::rat_to_string(deg_hn0),
            bound: crate::scalar::rat_to_string(&bound),
        });
    }
    Ok(ArakelovBound { bound, ok, tight })
}

#[derive(Clone, Debug)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub ok: bool,
    pub residual: Rat,
}

/// Fujita decomposition constraints: the flat rank bound u_f ≤ h₀^{n,0}, the
/// ample degree identity deg 𝒜 = deg 𝓗^{n,0}, the rank sum, and the Arakelov
/// bound on deg 𝓗^{n,0}. Violations are reported, never raised.
pub fn fujita_check(d: &FujitaData) -> Vec<ConstraintCheck> {
    let mut out = Vec::new();
    let u_f = d.u_f();
    out.push(ConstraintCheck {
        name: "flat_rank_bound",
        ok: u_f <= d.h_n0_0,
        residual: rat_i64(d.h_n0_0 as i64) - rat_i64(u_f as i64),
    });
    let res_deg = &d.deg_hn0 - &d.deg_a;
    out.push(ConstraintCheck {
        name: "ample_degree_identity",
        ok: res_deg.is_zero(),
        residual: res_deg,
    });
    let res_rank = rat_i64(d.h_n0 as i64) - rat_i64((d.rank_a + u_f) as i64);
    out.push(ConstraintCheck {
        name: "rank_sum_identity",
        ok: res_rank.is_zero(),
        residual: res_rank,
    });
    let bound = arakelov_inequality(&d.deg_hn0, d.h_n0, d.weight_n, d.genus, d.n_marked, false)
        .expect("non-maximal check cannot fail");
    out.push(ConstraintCheck {
        name: "arakelov_bound",
        ok: bound.ok,
        residual: &bound.bound - &d.deg_hn0,
    });
    out
}

/// Euler characteristic of the middle local system on the base curve:
/// χ(S, 𝒱) = δ¹ + h¹(V) − δ⁰ + h⁰(V) − Σν, exactly as printed.
pub fn local_system_euler(
    h0v: u64,
    h1v: u64,
    delta0v: &Rat,
    delta1v: &Rat,
    _genus: u64,
    nu_total: u64,
) -> Rat {
    delta1v + rat_i64(h1v as i64) - delta0v + rat_i64(h0v as i64) - rat_i64(nu_total as i64)
}

/// Graded piece of H¹(S, 𝒱):
/// h^p = −δ^p − (h^p − h^{p−1})(2g − 2) + δ^{p−1} + Σν.
/// `deltas` and `hs` default to zero outside their finite support.
pub fn graded_h1(
    p: i64,
    deltas: &dyn Fn(i64) -> Rat,
    hs: &dyn Fn(i64) -> u64,
    genus: u64,
    nu_total: u64,
) -> Rat {
    let dh = rat_i64(hs(p) as i64) - rat_i64(hs(p - 1) as i64);
    -deltas(p) - dh * two_g_minus_2(genus) + deltas(p - 1) + rat_i64(nu_total as i64)
}
