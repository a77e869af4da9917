//! Weierstrass families y² = 4x³ − g₂(t)x − g₃(t) over ℙ¹, their minimal
//! models, Kodaira fiber inventories and numerical surface reports.
//!
//! A family at level n has deg g₂ ≤ 4n, deg g₃ ≤ 6n; the place at infinity
//! carries the weighted bounds (4n, 6n, 12n). Everything here is exact.


use crate::error::{Error, Result};
use crate::kodaira::KodairaFiber;
use crate::places::{compatible_splitting, ord_at, Place};
use crate::scalar::rat_i64;
use crate::{QBiPoly, QPoly, QRatFunc, Rat};

#[derive(Clone, Debug)]
pub struct WeierstrassFamily {
    g2: QPoly,
    g3: QPoly,
    level: u32,
    delta: QPoly,
    j: QRatFunc,
    /// Variable name used for display (t for base families, s for K3 slices).
    var: char,
}

/// Builds the family, computing Δ = g₂³ − 27g₃² and J = g₂³/Δ exactly.
pub fn build_family(g2: QPoly, g3: QPoly, level: u32) -> Result<WeierstrassFamily> {
    let check = |which: &'static str, p: &QPoly, bound: u32| -> Result<()> {
        if p.deg_or_zero() > bound as usize {
            return Err(Error::DegreeBound {
                which,
                degree: p.deg_or_zero(),
                bound,
                level,
            });
        }
        Ok(())
    };
    check("g2", &g2, 4 * level)?;
    check("g3", &g3, 6 * level)?;
    let g2cubed = g2.pow(3);
    let delta = &g2cubed - &g3.pow(2).scale(&rat_i64(27));
    if delta.is_zero() {
        return Err(Error::DegenerateFamily);
    }
    let j = QRatFunc::new(g2cubed, delta.clone())?;
    Ok(WeierstrassFamily {
        g2,
        g3,
        level,
        delta,
        j,
        var: 't',
    })
}

impl WeierstrassFamily {
    pub fn g2(&self) -> &QPoly {
        &self.g2
    }

    pub fn g3(&self) -> &QPoly {
        &self.g3
    }

    pub fn delta(&self) -> &QPoly {
        &self.delta
    }

    pub fn j(&self) -> &QRatFunc {
        &self.j
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn with_var(mut self, var: char) -> Self {
        self.var = var;
        self
    }

    pub fn is_isotrivial(&self) -> bool {
        self.j.is_constant()
    }

    /// Finite places on which (g₂, g₃, Δ) have well-defined order triples.
    pub fn places(&self) -> Result<Vec<Place>> {
        let inputs: Vec<QPoly> = [&self.g2, &self.g3, &self.delta]
            .into_iter()
            .filter(|p| !p.is_zero())
            .cloned()
            .collect();
        compatible_splitting(&inputs)
    }

    /// (ord g₂, ord g₃, ord Δ) at a place; `None` marks an identically-zero
    /// polynomial (infinite order).
    pub fn orders_at(&self, place: &Place) -> Result<(Option<u32>, Option<u32>, u32)> {
        let bound = |b: u32| -> u32 { b * self.level };
        let ord = |p: &QPoly, b: u32| -> Result<Option<u32>> {
            if p.is_zero() {
                return Ok(None);
            }
            ord_at(p, place, bound(b)).map(Some)
        };
        Ok((
            ord(&self.g2, 4)?,
            ord(&self.g3, 6)?,
            ord_at(&self.delta, place, bound(12))?,
        ))
    }

    fn is_reducible(o: (Option<u32>, Option<u32>, u32)) -> bool {
        o.0.map_or(true, |a| a >= 4) && o.1.map_or(true, |b| b >= 6) && o.2 >= 12
    }

    /// Strips u⁴ | g₂, u⁶ | g₃ at finite places and rebalances the level at
    /// infinity until no place has orders ≥ (4, 6, 12). Returns the minimal
    /// model and the reduction count per place.
    pub fn minimalize(&self) -> Result<(WeierstrassFamily, Vec<(Place, u32)>)> {
        let mut g2 = self.g2.clone();
        let mut g3 = self.g3.clone();
        let mut level = self.level;
        let mut reductions: Vec<(Place, u32)> = Vec::new();
        let record = |place: &Place, reductions: &mut Vec<(Place, u32)>| {
            match reductions.iter_mut().find(|(p, _)| p == place) {
                Some((_, c)) => *c += 1,
                None => reductions.push((place.clone(), 1)),
            }
        };
        loop {
            let family = build_family(g2.clone(), g3.clone(), level)?;
            let mut changed = false;
            for place in family.places()? {
                while Self::is_reducible(
                    build_family(g2.clone(), g3.clone(), level)?.orders_at(&place)?,
                ) {
                    let u = place.min_poly().expect("finite place");
                    if !g2.is_zero() {
                        g2 = g2.exact_div(&u.pow(4)).expect("order >= 4");
                    }
                    if !g3.is_zero() {
                        g3 = g3.exact_div(&u.pow(6)).expect("order >= 6");
                    }
                    record(&place, &mut reductions);
                    changed = true;
                }
            }
            while level > 0
                && Self::is_reducible(
                    build_family(g2.clone(), g3.clone(), level)?.orders_at(&Place::Infinity)?,
                )
            {
                level -= 1;
                record(&Place::Infinity, &mut reductions);
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let minimal = build_family(g2, g3, level)?.with_var(self.var);
        Ok((minimal, reductions))
    }

    /// One [`KodairaFiber`] per place (finite and infinite) with ord Δ > 0.
    /// Requires a minimal model; non-minimal orders surface as
    /// [`Error::UnclassifiableOrders`].
    pub fn classify_fibers(&self) -> Result<Vec<KodairaFiber>> {
        let mut fibers = Vec::new();
        let mut places = self.places()?;
        places.push(Place::Infinity);
        for place in places {
            let (a, b, d) = self.orders_at(&place)?;
            if d == 0 {
                continue;
            }
            fibers.push(KodairaFiber::classify(place, a, b, d)?);
        }
        Ok(fibers)
    }

    /// Aggregates the fiber inventory into the surface-level invariants and
    /// runs the exact audits.
    pub fn surface_report(&self) -> Result<SurfaceReport> {
        let fibers = self.classify_fibers()?;
        let total_ord_delta: u64 = fibers
            .iter()
            .map(|f| f.ord_delta as u64 * f.place.degree() as u64)
            .sum();
        let delta_degree = Rat::new((total_ord_delta).into(), 12.into());
        let euler_total: u64 = fibers
            .iter()
            .map(|f| f.euler as u64 * f.place.degree() as u64)
            .sum();
        let n_singular: u64 = fibers.iter().map(|f| f.place.degree() as u64).sum();
        let deg_j = self.j.map_degree() as u64;
        let isotrivial = self.is_isotrivial();
        let semistable = fibers
            .iter()
            .all(|f| matches!(f.fiber_type, crate::kodaira::FiberType::In(_)));
        let multiplicative_total: u64 = fibers
            .iter()
            .filter(|f| f.fiber_type.is_multiplicative())
            .map(|f| {
                let n = match f.fiber_type {
                    crate::kodaira::FiberType::In(n) | crate::kodaira::FiberType::InStar(n) => n,
                    _ => unreachable!(),
                };
                n as u64 * f.place.degree() as u64
            })
            .sum();
        let delta_audit_ok = total_ord_delta == 12 * self.level as u64;
        let euler_audit_ok = euler_total == 12 * self.level as u64;
        let deg_j_audit_ok = deg_j == multiplicative_total;
        let arakelov_bound_ok = isotrivial || n_singular >= 3;
        let n = rat_i64(n_singular as i64);
        let two_delta = &delta_degree * &rat_i64(2);
        Ok(SurfaceReport {
            level: self.level,
            delta_degree,
            deg_j,
            n_singular,
            semistable,
            isotrivial,
            euler_total,
            fibers,
            delta_audit_ok,
            euler_audit_ok,
            deg_j_audit_ok,
            arakelov_bound_ok,
            nu_residual_stated: &n - &(&two_delta + &rat_i64(1)),
            nu_residual_derived: &n - &(&two_delta + &rat_i64(2)),
        })
    }
}

/// Numerical report for one fibration: δ, deg J, the singular-fiber count N,
/// flags, and the exact audit results. The ν residuals are the two readings
/// of the N = 2δ + c + Σν bookkeeping (c = 1 as stated, c = 2 as derived);
/// both are reported, neither is asserted.
#[derive(Clone, Debug)]
pub struct SurfaceReport {
    pub level: u32,
    pub delta_degree: Rat,
    pub deg_j: u64,
    pub n_singular: u64,
    pub semistable: bool,
    pub isotrivial: bool,
    pub euler_total: u64,
    pub fibers: Vec<KodairaFiber>,
    pub delta_audit_ok: bool,
    pub euler_audit_ok: bool,
    pub deg_j_audit_ok: bool,
    pub arakelov_bound_ok: bool,
    pub nu_residual_stated: Rat,
    pub nu_residual_derived: Rat,
}

impl SurfaceReport {
    pub fn audits_ok(&self) -> bool {
        self.delta_audit_ok && self.euler_audit_ok && self.deg_j_audit_ok
    }

    /// Multiset of (fiber type name, place degree), sorted.
    pub fn fiber_multiset(&self) -> Vec<(String, u32)> {
        let mut v: Vec<(String, u32)> = self
            .fibers
            .iter()
            .map(|f| (f.fiber_type.name(), f.place.degree()))
            .collect();
        v.sort();
        v
    }
}

/// Outcome of specialising the two-parameter family at one t-sample.
#[derive(Clone, Debug)]
pub enum SliceOutcome {
    Report(SurfaceReport),
    Degenerate(String),
}

#[derive(Clone, Debug)]
pub struct K3Slice {
    pub t: Rat,
    pub outcome: SliceOutcome,
}

/// The majority slice profile: ranks are constant on a dense open set, so the
/// strict majority over the samples stands in for the generic value.
#[derive(Clone, Debug)]
pub struct GenericProfile {
    pub delta_degree: Rat,
    pub deg_j: u64,
    pub fiber_multiset: Vec<(String, u32)>,
    pub isotrivial: bool,
    pub representative: SurfaceReport,
}

#[derive(Debug)]
pub struct K3Analysis {
    pub slices: Vec<K3Slice>,
    pub profile: GenericProfile,
}

/// Slices the two-parameter family `y² = 4x³ − G₂(t,s)x − G₃(t,s)` at each
/// t-sample, minimalizes and reports each s-line fibration, and extracts the
/// generic profile. Degenerate slices (Δ ≡ 0) are reported, not fatal.
pub fn k3_slice_reports(
    g2: &QBiPoly,
    g3: &QBiPoly,
    level: u32,
    t_samples: &[Rat],
) -> Result<K3Analysis> {
    let mut slices = Vec::new();
    for t0 in t_samples {
        let s2 = g2.specialize(t0);
        let s3 = g3.specialize(t0);
        let outcome = match build_family(s2, s3, level)
            .and_then(|f| f.minimalize())
            .and_then(|(f, _)| f.with_var('s').surface_report())
        {
            Ok(report) => SliceOutcome::Report(report),
            Err(e) => SliceOutcome::Degenerate(e.to_string()),
        };
        slices.push(K3Slice {
            t: t0.clone(),
            outcome,
        });
    }
    let valid: Vec<&SurfaceReport> = slices
        .iter()
        .filter_map(|s| match &s.outcome {
            SliceOutcome::Report(r) => Some(r),
            SliceOutcome::Degenerate(_) => None,
        })
        .collect();
    if valid.is_empty() {
        return Err(Error::AllSlicesDegenerate);
    }
    // majority vote over the (δ, deg J, fiber multiset) profile
    let keys: Vec<(Rat, u64, Vec<(String, u32)>)> = valid
        .iter()
        .map(|r| (r.delta_degree.clone(), r.deg_j, r.fiber_multiset()))
        .collect();
    let mut grouped: Vec<(usize, usize)> = Vec::new(); // (first occurrence, count)
    for (idx, key) in keys.iter().enumerate() {
        match grouped.iter_mut().find(|(i, _)| &keys[*i] == key) {
            Some((_, c)) => *c += 1,
            None => grouped.push((idx, 1)),
        }
    }
    grouped.sort_by(|a, b| b.1.cmp(&a.1));
    if grouped.len() > 1 && grouped[0].1 == grouped[1].1 {
        return Err(Error::GenericAmbiguous(format!(
            "{} slices each for two distinct profiles",
            grouped[0].1
        )));
    }
    let rep = valid[grouped[0].0].clone();
    let profile = GenericProfile {
        delta_degree: rep.delta_degree.clone(),
        deg_j: rep.deg_j,
        fiber_multiset: rep.fiber_multiset(),
        isotrivial: rep.isotrivial,
        representative: rep,
    };
    Ok(K3Analysis { slices, profile })
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::kodaira::FiberType;
    use crate::parse::{parse_bipoly, parse_poly};

    fn family(g2: &str, g3: &str, level: u32) -> WeierstrassFamily {
        build_family(parse_poly(g2).unwrap(), parse_poly(g3).unwrap(), level).unwrap()
    }

    #[test]
    fn build_computes_delta_and_j() {
        let f = family("t", "1", 1);
        assert_eq!(f.delta(), &parse_poly("t^3 - 27").unwrap());
        assert_eq!(f.j().num(), &parse_poly("t^3").unwrap());
        assert_eq!(f.j().den(), &parse_poly("t^3 - 27").unwrap());
        assert_eq!(f.j().map_degree(), 3);
    }

    #[test]
    fn build_isotrivial_j_zero() {
        let f = family("0", "1", 1);
        assert_eq!(f.delta(), &QPoly::from_i64(&[-27]));
        assert!(f.j().is_zero());
        assert!(f.is_isotrivial());
    }

    #[test]
    fn build_rejects_degenerate() {
        assert_eq!(
            build_family(
                parse_poly("3").unwrap(),
                parse_poly("1").unwrap(),
                1
            )
            .unwrap_err(),
            Error::DegenerateFamily
        );
    }

    #[test]
    fn build_rejects_degree_bound() {
        assert!(matches!(
            build_family(parse_poly("t^5").unwrap(), parse_poly("1").unwrap(), 1),
            Err(Error::DegreeBound { which: "g2", .. })
        ));
    }

    #[test]
    fn minimalize_strips_finite_and_infinite_places() {
        // g2 = 2 t^4, g3 = 3 t^6: one reduction at t, then one at infinity
        let f = family("2*t^4", "3*t^6", 1);
        let (min, reductions) = f.minimalize().unwrap();
        assert_eq!(min.g2(), &QPoly::from_i64(&[2]));
        assert_eq!(min.g3(), &QPoly::from_i64(&[3]));
        assert_eq!(min.level(), 0);
        assert_eq!(reductions.len(), 2);
        assert!(reductions.contains(&(Place::Finite(parse_poly("t").unwrap()), 1)));
        assert!(reductions.contains(&(Place::Infinity, 1)));
    }

    #[test]
    fn minimalize_identity_on_minimal_models() {
        let f = family("t", "1", 1);
        let (min, reductions) = f.minimalize().unwrap();
        assert!(reductions.is_empty());
        assert_eq!(min.g2(), f.g2());
        assert_eq!(min.level(), 1);
        // idempotent
        let (again, r2) = min.minimalize().unwrap();
        assert!(r2.is_empty());
        assert_eq!(again.g2(), min.g2());
    }

    #[test]
    fn minimalize_isotrivial_to_level_zero() {
        let f = family("0", "1", 1);
        let (min, reductions) = f.minimalize().unwrap();
        assert_eq!(min.level(), 0);
        assert_eq!(reductions, vec![(Place::Infinity, 1)]);
        let report = min.surface_report().unwrap();
        assert!(report.delta_degree.is_zero());
        assert_eq!(report.n_singular, 0);
        assert!(report.fibers.is_empty());
    }

    #[test]
    fn classify_three_i1_and_iii_star() {
        // g2 = t, g3 = 1: I1 over the roots of t^3 - 27 (one place of degree
        // 3), III* at infinity; Euler audit 3·1 + 9 = 12.
        let f = family("t", "1", 1);
        let fibers = f.classify_fibers().unwrap();
        assert_eq!(fibers.len(), 2);
        let finite = &fibers[0];
        assert_eq!(finite.place.name(), "t^3 - 27");
        assert_eq!(finite.place.degree(), 3);
        assert_eq!(finite.fiber_type, FiberType::In(1));
        assert_eq!((finite.ord_g2, finite.ord_g3, finite.ord_delta), (Some(0), Some(0), 1));
        let inf = &fibers[1];
        assert!(inf.place.is_infinity());
        assert_eq!(inf.fiber_type, FiberType::IIIStar);
        assert_eq!((inf.ord_g2, inf.ord_g3, inf.ord_delta), (Some(3), Some(6), 9));
        let euler: u32 = fibers.iter().map(|f| f.euler * f.place.degree()).sum();
        assert_eq!(euler, 12);
    }

    #[test]
    fn classify_iv_i1_i0star() {
        // g2 = 3t^2, g3 = t^2: IV at t, I1 over t^2 - 1, I0* at infinity.
        let f = family("3*t^2", "t^2", 1);
        let fibers = f.classify_fibers().unwrap();
        let by_place: Vec<(String, FiberType, u32)> = fibers
            .iter()
            .map(|f| (f.place.name(), f.fiber_type, f.euler * f.place.degree()))
            .collect();
        assert_eq!(
            by_place,
            vec![
                ("t".to_string(), FiberType::IV, 4),
                ("t^2 - 1".to_string(), FiberType::In(1), 2),
                ("infinity".to_string(), FiberType::I0Star, 6),
            ]
        );
    }

    #[test]
    fn classify_smooth_level_zero() {
        let f = family("0", "1", 1);
        let (min, _) = f.minimalize().unwrap();
        assert!(min.classify_fibers().unwrap().is_empty());
    }

    #[test]
    fn report_for_g2_t_g3_1() {
        let report = family("t", "1", 1).surface_report().unwrap();
        assert_eq!(report.delta_degree, rat_i64(1));
        assert_eq!(report.deg_j, 3);
        assert_eq!(report.n_singular, 4);
        assert!(!report.semistable);
        assert!(!report.isotrivial);
        assert!(report.arakelov_bound_ok);
        assert!(report.audits_ok());
        assert_eq!(report.euler_total, 12);
        // ν residuals for the two normalisations: N − 2δ − 1 and N − 2δ − 2
        assert_eq!(report.nu_residual_stated, rat_i64(1));
        assert_eq!(report.nu_residual_derived, rat_i64(0));
    }

    #[test]
    fn report_for_3t2_t2() {
        let report = family("3*t^2", "t^2", 1).surface_report().unwrap();
        assert_eq!(report.delta_degree, rat_i64(1));
        assert_eq!(report.deg_j, 2);
        assert_eq!(report.n_singular, 4);
        assert!(report.audits_ok());
    }

    #[test]
    fn report_isotrivial_with_singular_fibers() {
        // g2 = t^2, g3 = t^3: I0* at 0 and at infinity, J = -1/26 constant.
        let report = family("t^2", "t^3", 1).surface_report().unwrap();
        assert!(report.isotrivial);
        assert_eq!(report.deg_j, 0);
        assert_eq!(report.n_singular, 2);
        assert!(report.arakelov_bound_ok, "bound vacuous for isotrivial");
        assert!(report.audits_ok());
        assert_eq!(
            report.fiber_multiset(),
            vec![("I0*".to_string(), 1), ("I0*".to_string(), 1)]
        );
    }

    #[test]
    fn report_zero_g2_family() {
        // g2 = 0, g3 = t: II at 0, II* at infinity, isotrivial J = 0.
        let report = family("0", "t", 1).surface_report().unwrap();
        assert!(report.isotrivial);
        assert_eq!(report.n_singular, 2);
        assert!(report.audits_ok());
        let types: Vec<String> = report.fibers.iter().map(|f| f.fiber_type.name()).collect();
        assert_eq!(types, vec!["II".to_string(), "II*".to_string()]);
        assert_eq!(report.fibers[0].ord_g2, None);
    }

    #[test]
    fn k3_slices_constant_in_t() {
        // G2 = s (constant in t), G3 = 1: identical reports for every sample.
        let g2 = parse_bipoly("s").unwrap();
        let g3 = parse_bipoly("1").unwrap();
        let samples = vec![rat_i64(0), rat_i64(1), rat_i64(2)];
        let analysis = k3_slice_reports(&g2, &g3, 1, &samples).unwrap();
        assert_eq!(analysis.slices.len(), 3);
        for slice in &analysis.slices {
            match &slice.outcome {
                SliceOutcome::Report(r) => {
                    assert_eq!(r.delta_degree, analysis.profile.delta_degree);
                    assert_eq!(r.deg_j, analysis.profile.deg_j);
                }
                SliceOutcome::Degenerate(_) => panic!("unexpected degenerate slice"),
            }
        }
        assert_eq!(analysis.profile.deg_j, 3);
    }

    #[test]
    fn k3_slices_skip_degenerate() {
        // G2 = (t^2-1)s^2, G3 = 0 degenerates at t = 1 (Δ ≡ 0).
        let g2 = parse_bipoly("(t^2-1)*s^2").unwrap();
        let g3 = parse_bipoly("0").unwrap();
        let analysis =
            k3_slice_reports(&g2, &g3, 1, &[rat_i64(1), rat_i64(2), rat_i64(3)]).unwrap();
        assert!(matches!(
            analysis.slices[0].outcome,
            SliceOutcome::Degenerate(_)
        ));
        assert!(matches!(analysis.slices[1].outcome, SliceOutcome::Report(_)));
    }

    #[test]
    fn k3_all_degenerate_errors() {
        let g2 = parse_bipoly("(t-1)*s").unwrap();
        let g3 = parse_bipoly("0").unwrap();
        assert_eq!(
            k3_slice_reports(&g2, &g3, 1, &[rat_i64(1)]).unwrap_err(),
            Error::AllSlicesDegenerate
        );
    }

    #[test]
    fn k3_tie_is_ambiguous() {
        // t*s + s: slices at t = -1 (Δ degenerates? no: g2 = 0 -> J = 0) —
        // construct a genuine tie: one slice I0*-pair profile, one I1-profile.
        let g2 = parse_bipoly("t*s").unwrap();
        let g3 = parse_bipoly("1").unwrap();
        // t = 0: g2 = 0 (isotrivial, deg J 0); t = 1: g2 = s (deg J 3)
        let e = k3_slice_reports(&g2, &g3, 1, &[rat_i64(0), rat_i64(1)]).unwrap_err();
        assert!(matches!(e, Error::GenericAmbiguous(_)));
    }

    #[test]
    fn slice_var_is_s() {
        let g2 = parse_bipoly("s").unwrap();
        let g3 = parse_bipoly("1").unwrap();
        let analysis = k3_slice_reports(&g2, &g3, 1, &[rat_i64(0)]).unwrap();
        match &analysis.slices[0].outcome {
            SliceOutcome::Report(r) => {
                assert_eq!(r.fibers[0].place.min_poly().unwrap().to_string_var("s"), "s^3 - 27")
            }
            _ => panic!(),
        }
    }
}
