//! Pipeline orchestration behind the subcommands.
//!
//! Exit codes: 0 all checks pass, 1 operational error, 2 at least one
//! identity or bound check failed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use arakelov::error::Error;
use arakelov::formulas::{
    arakelov_inequality, delta_weight1, delta_weight1_degenerate, delta_weight2, fujita_check,
    graded_h1, local_system_euler, WeightOneData,
};
use arakelov::parse::{parse_bipoly, parse_poly};
use arakelov::picard_fuchs::{check_apparent, global_monodromy, verify_monodromy, PfOptions};
use arakelov::report::{
    k3_slices_json, ApparentJson, GlobalJson, LedgerJson, MonodromyJson, Report, SurfaceJson,
    TriangleCheckJson,
};
use arakelov::scalar::{rat_from_str, rat_i64, rat_to_string};
use arakelov::triangle::{
    check_fujita_ranks, check_prop56, check_thm513, check_thm58, ledger_from_k3, solve_missing,
    TriangleLedger,
};
use arakelov::weierstrass::{build_family, k3_slice_reports, SurfaceReport, WeierstrassFamily};
use arakelov::Rat;

use crate::spec::{FormulasToml, Kind, SpecFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

pub struct Outcome {
    pub report: Report,
    pub checks_ok: bool,
}

pub fn load_spec(path: &Path) -> Result<SpecFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    toml::from_str::<SpecFile>(&text).map_err(|e| {
        let offset = e.span().map(|s| s.start).unwrap_or(0);
        Error::Parse {
            offset,
            message: format!("{}: {}", path.display(), e.message()),
        }
    })
}

/// Builds and minimalizes the Weierstrass family of a spec.
fn weierstrass_family(spec: &SpecFile) -> Result<(WeierstrassFamily, usize), Error> {
    let g2 = parse_poly(spec.g2.as_deref().ok_or(Error::MissingSlot("g2".into()))?)?;
    let g3 = parse_poly(spec.g3.as_deref().ok_or(Error::MissingSlot("g3".into()))?)?;
    let level = spec.level.ok_or(Error::MissingSlot("level".into()))?;
    let family = build_family(g2, g3, level)?;
    let (minimal, reductions) = family.minimalize()?;
    Ok((minimal, reductions.len()))
}

/// The unipotent-framed weight-1 instantiation of the surface inventory:
/// h = 1, h₀ = 0, genus 0, δ₀ = 0, one unit im-dim per singular point
/// counted with place degree, ν = ν_a = 0.
fn unipotent_frame_delta(report: &SurfaceReport) -> Result<Rat, Error> {
    let n = report.n_singular;
    let data = WeightOneData {
        h10: 1,
        h10_0: 0,
        genus: 0,
        delta0: rat_i64(0),
        nu: Vec::new(),
        n_degen: n,
        im_nbar_dims: vec![1; n as usize],
        nu_a: vec![0; n as usize],
    };
    delta_weight1_degenerate(&data)
}

fn surface_formulas(report: &SurfaceReport) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    map.insert("delta".into(), rat_to_string(&report.delta_degree));
    map.insert("deg_j".into(), report.deg_j.to_string());
    map.insert(
        "nu_residual_stated".into(),
        rat_to_string(&report.nu_residual_stated),
    );
    map.insert(
        "nu_residual_derived".into(),
        rat_to_string(&report.nu_residual_derived),
    );
    map.insert(
        "n_ge_3_bound".into(),
        if report.isotrivial {
            "vacuous".into()
        } else if report.n_singular >= 3 {
            "ok".into()
        } else {
            "violated".into()
        },
    );
    if let Ok(d) = unipotent_frame_delta(report) {
        map.insert("delta_weight1_unipotent_frame".into(), rat_to_string(&d));
    }
    map
}

fn surface_warnings(report: &SurfaceReport) -> Vec<String> {
    let mut warnings = Vec::new();
    if !report.isotrivial {
        warnings.push(format!(
            "normalization note: delta = {} while deg J = {}; the two printed relations \
             N = 2*delta + 1 + nu and N = 2*delta + 2 + nu give nu residuals {} and {}; \
             only N >= 3 is asserted",
            rat_to_string(&report.delta_degree),
            report.deg_j,
            rat_to_string(&report.nu_residual_stated),
            rat_to_string(&report.nu_residual_derived),
        ));
    }
    warnings
}

/// Checks that decide the exit code of a Weierstrass analysis: the exact
/// audits, the three-fiber bound, and (for semistable inventories) the
/// weight-1 cross-check.
fn surface_checks_ok(report: &SurfaceReport) -> bool {
    let mut ok = report.audits_ok() && report.arakelov_bound_ok;
    if report.semistable && report.n_singular > 0 {
        ok = ok
            && unipotent_frame_delta(report)
                .map(|d| d == report.delta_degree)
                .unwrap_or(false);
    }
    ok
}

pub fn analyze(spec: &SpecFile) -> Result<Outcome, Error> {
    match spec.kind()? {
        Kind::Weierstrass => {
            let (family, _) = weierstrass_family(spec)?;
            let report = family.surface_report()?;
            let ok = surface_checks_ok(&report);
            Ok(Outcome {
                report: Report {
                    surface: Some(SurfaceJson::from_report(&report, family.var())),
                    formulas: Some(surface_formulas(&report)),
                    warnings: surface_warnings(&report),
                    ..Default::default()
                },
                checks_ok: ok,
            })
        }
        Kind::K3Slices => analyze_k3(spec),
        Kind::LedgerOnly => analyze_ledger(spec),
    }
}

fn analyze_k3(spec: &SpecFile) -> Result<Outcome, Error> {
    let g2 = parse_bipoly(
        spec.big_g2
            .as_deref()
            .ok_or(Error::MissingSlot("G2".into()))?,
    )?;
    let g3 = parse_bipoly(
        spec.big_g3
            .as_deref()
            .ok_or(Error::MissingSlot("G3".into()))?,
    )?;
    let level = spec.level.ok_or(Error::MissingSlot("level".into()))?;
    let samples: Vec<Rat> = spec
        .t_samples
        .as_deref()
        .ok_or(Error::MissingSlot("t_samples".into()))?
        .iter()
        .map(|s| rat_from_str(s))
        .collect::<Result<_, _>>()?;
    let analysis = k3_slice_reports(&g2, &g3, level, &samples)?;
    let genus = spec.genus.unwrap_or(0);
    let ledger = ledger_from_k3(&analysis, genus)?;

    let mut warnings = Vec::new();
    let degenerate = analysis
        .slices
        .iter()
        .filter(|s| matches!(s.outcome, arakelov::weierstrass::SliceOutcome::Degenerate(_)))
        .count();
    if degenerate > 0 {
        warnings.push(format!(
            "{degenerate} of {} slices degenerate; excluded from the generic profile",
            analysis.slices.len()
        ));
    }
    warnings.push("ledger slots f and g left for completion from the base fibration".into());
    warnings.extend(surface_warnings(&analysis.profile.representative));

    let mut checks_ok = true;
    for slice in &analysis.slices {
        if let arakelov::weierstrass::SliceOutcome::Report(r) = &slice.outcome {
            checks_ok = checks_ok && surface_checks_ok(r);
        }
    }
    let mut formulas = surface_formulas(&analysis.profile.representative);
    formulas.insert(
        "profile_delta20".into(),
        ledger
            .weight2
            .as_ref()
            .map(|w| rat_to_string(&w.delta20))
            .unwrap_or_default(),
    );
    Ok(Outcome {
        report: Report {
            surface: Some(SurfaceJson::from_report(
                &analysis.profile.representative,
                's',
            )),
            k3_slices: Some(k3_slices_json(&analysis)),
            ledger: Some(LedgerJson::from_ledger(&ledger)),
            formulas: Some(formulas),
            warnings,
            ..Default::default()
        },
        checks_ok,
    })
}

fn eval_formula_tables(
    formulas: &FormulasToml,
    out: &mut BTreeMap<String, String>,
    warnings: &mut Vec<String>,
) -> Result<bool, Error> {
    let mut ok = true;
    if let Some(w1) = &formulas.weight1 {
        let data = w1.to_data()?;
        out.insert("delta_weight1".into(), rat_to_string(&delta_weight1(&data)?));
        if data.im_nbar_dims.len() == data.n_degen as usize
            && data.nu_a.len() == data.n_degen as usize
        {
            out.insert(
                "delta_weight1_degenerate".into(),
                rat_to_string(&delta_weight1_degenerate(&data)?),
            );
        }
    }
    if let Some(w2) = &formulas.weight2 {
        let data = w2.to_data()?;
        out.insert(
            "delta_weight2_nondegenerate".into(),
            rat_to_string(&delta_weight2(&data, false)?),
        );
        if data.lmhs_corrections.len() == data.n_degen as usize {
            out.insert(
                "delta_weight2_degenerate".into(),
                rat_to_string(&delta_weight2(&data, true)?),
            );
        }
        warnings.push(
            "weight-2 variants use opposite bracket signs, as printed; both reported".into(),
        );
    }
    if let Some(fj) = &formulas.fujita {
        let data = fj.to_data()?;
        // surfaces MaximalityViolation as an error when declared maximal
        let bound = arakelov_inequality(
            &data.deg_hn0,
            data.h_n0,
            data.weight_n,
            data.genus,
            data.n_marked,
            data.higgs_maximal,
        )?;
        out.insert("arakelov_bound".into(), rat_to_string(&bound.bound));
        out.insert("arakelov_bound_ok".into(), bound.ok.to_string());
        out.insert("arakelov_bound_tight".into(), bound.tight.to_string());
        for check in fujita_check(&data) {
            out.insert(
                format!("fujita_{}", check.name),
                format!("{} (residual {})", check.ok, rat_to_string(&check.residual)),
            );
            ok = ok && check.ok;
        }
    }
    if let Some(e) = &formulas.euler {
        let chi = local_system_euler(
            e.h0v,
            e.h1v,
            &rat_from_str(&e.delta0v)?,
            &rat_from_str(&e.delta1v)?,
            e.genus,
            e.nu_total,
        );
        out.insert("local_system_euler".into(), rat_to_string(&chi));
    }
    if let Some(g) = &formulas.graded {
        let mut deltas: BTreeMap<i64, Rat> = BTreeMap::new();
        for (k, v) in &g.deltas {
            deltas.insert(
                k.parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("graded p index {k:?}")))?,
                rat_from_str(v)?,
            );
        }
        let mut hs: BTreeMap<i64, u64> = BTreeMap::new();
        for (k, v) in &g.hs {
            hs.insert(
                k.parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("graded p index {k:?}")))?,
                *v,
            );
        }
        let df = |p: i64| deltas.get(&p).cloned().unwrap_or_else(|| rat_i64(0));
        let hf = |p: i64| hs.get(&p).copied().unwrap_or(0);
        let mut total = rat_i64(0);
        for p in g.p_min..=g.p_max {
            let v = graded_h1(p, &df, &hf, g.genus, g.nu_total);
            total = &total + &v;
            out.insert(format!("graded_h1_p{p}"), rat_to_string(&v));
        }
        out.insert("graded_h1_sum".into(), rat_to_string(&total));
        if let Some(e) = &formulas.euler {
            let chi = local_system_euler(
                e.h0v,
                e.h1v,
                &rat_from_str(&e.delta0v)?,
                &rat_from_str(&e.delta1v)?,
                e.genus,
                e.nu_total,
            );
            if chi != total {
                warnings.push(format!(
                    "Euler-characteristic sign pattern and the graded sum disagree \
                     ({} vs {}); both are printed verbatim, neither is adjusted",
                    rat_to_string(&chi),
                    rat_to_string(&total)
                ));
            }
        }
    }
    Ok(ok)
}

fn analyze_ledger(spec: &SpecFile) -> Result<Outcome, Error> {
    let genus = spec.genus.unwrap_or(0);
    let mut formulas_out = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut triangle = Vec::new();
    let mut checks_ok = true;

    let ledger: Option<TriangleLedger> = spec
        .ledger
        .as_ref()
        .map(|l| l.to_ledger())
        .transpose()?;
    if let Some(ledger) = &ledger {
        ledger.validate_h_family()?;
        let have_prop56_slots =
            ledger.f_slot.is_some() && ledger.g_slot.is_some() && ledger.h_fix_slot.is_some();
        if have_prop56_slots {
            match check_prop56(ledger) {
                Ok(checks) => {
                    for c in &checks {
                        checks_ok = checks_ok && c.ok;
                    }
                    triangle.extend(checks.iter().map(TriangleCheckJson::from_identity));
                    if let Ok(h_full) = ledger.h_full() {
                        let ranks = check_fujita_ranks(ledger, &h_full)?;
                        for c in &ranks {
                            checks_ok = checks_ok && c.ok;
                        }
                        triangle.extend(ranks.iter().map(TriangleCheckJson::from_inequality));
                    }
                    if ledger.weight2.is_some() {
                        let t = check_thm58(ledger, genus)?;
                        triangle.push(TriangleCheckJson {
                            name: "surface_by_curves_degree_bound".into(),
                            lhs: Some(rat_to_string(&t.lhs)),
                            rhs: Some(rat_to_string(&t.rhs)),
                            residual: Some(rat_to_string(&t.residual)),
                            ok: t.ok,
                        });
                        checks_ok = checks_ok && t.ok;
                    }
                }
                Err(Error::MissingSlot(which)) => {
                    // exactly-one-unknown ledgers are solved, not failed
                    match solve_missing(ledger) {
                        Ok((field, value)) => {
                            formulas_out.insert(
                                format!("solved_{field}"),
                                rat_to_string(&value),
                            );
                            warnings.push(format!(
                                "field {field} was absent; solved from the additivity \
                                 identities as {}",
                                rat_to_string(&value)
                            ));
                        }
                        Err(_) => return Err(Error::MissingSlot(which)),
                    }
                }
                Err(e) => return Err(e),
            }
        } else if ledger.f_slot.is_some() || ledger.g_slot.is_some() || ledger.h_fix_slot.is_some()
        {
            warnings.push("triangle identities skipped: f, g and h_fix are all required".into());
        }
        if ledger.v_data.is_some() {
            let t = check_thm513(ledger, genus)?;
            triangle.push(TriangleCheckJson {
                name: "tensor_split_degree_bound".into(),
                lhs: Some(rat_to_string(&t.delta20)),
                rhs: Some(rat_to_string(&t.bound)),
                residual: Some(rat_to_string(&(&t.delta20 - &t.bound))),
                ok: t.ok_main,
            });
            triangle.push(TriangleCheckJson {
                name: "weight2_dominates_middle_weight1".into(),
                lhs: Some(rat_to_string(&t.delta20)),
                rhs: None,
                residual: None,
                ok: t.ok_corollary,
            });
            checks_ok = checks_ok && t.ok_main && t.ok_corollary;
        }
    }
    if let Some(formulas) = &spec.formulas {
        let ok = eval_formula_tables(formulas, &mut formulas_out, &mut warnings)?;
        checks_ok = checks_ok && ok;
    }
    Ok(Outcome {
        report: Report {
            ledger: ledger.as_ref().map(LedgerJson::from_ledger),
            formulas: (!formulas_out.is_empty()).then_some(formulas_out),
            triangle: (!triangle.is_empty()).then_some(triangle),
            warnings,
            ..Default::default()
        },
        checks_ok,
    })
}

pub fn monodromy(spec: &SpecFile, opts: &PfOptions) -> Result<Outcome, Error> {
    if spec.kind()? != Kind::Weierstrass {
        return Err(Error::Invalid(
            "monodromy requires a weierstrass family spec".into(),
        ));
    }
    let (family, _) = weierstrass_family(spec)?;
    if family.is_isotrivial() {
        return Err(Error::IsotrivialFamily);
    }
    let var = family.var();
    let checks = verify_monodromy(&family, opts)?;
    let apparent = check_apparent(&family, opts)?;
    let global = global_monodromy(&family, opts)?;
    let global_json = GlobalJson::from_check(&global, 1e-3);
    let mut ok = checks.iter().all(|c| c.ok) && global_json.ok;
    let apparent_json: Vec<ApparentJson> = apparent
        .iter()
        .map(|c| ApparentJson::from_check(c, var, opts.tolerance.max(1e-9)))
        .collect();
    ok = ok && apparent_json.iter().all(|c| c.ok);
    Ok(Outcome {
        report: Report {
            monodromy: Some(
                checks
                    .iter()
                    .map(|c| MonodromyJson::from_check(c, var))
                    .collect(),
            ),
            monodromy_apparent: Some(apparent_json),
            monodromy_global: Some(global_json),
            warnings: Vec::new(),
            ..Default::default()
        },
        checks_ok: ok,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CorpusRow {
    pub file: String,
    pub status: String,
    pub delta: Option<String>,
    pub deg_j: Option<u64>,
    pub n_singular: Option<u64>,
    pub n_ge_3: Option<String>,
    pub euler_audit: Option<bool>,
    pub monodromy_ok: Option<String>,
}

pub struct CorpusOutcome {
    pub rows: Vec<CorpusRow>,
    pub checks_ok: bool,
}

fn corpus_row(path: &Path, opts: &PfOptions) -> CorpusRow {
    let file = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let run = || -> Result<CorpusRow, Error> {
        let spec = load_spec(path)?;
        let (family, _) = weierstrass_family(&spec)?;
        let report = family.surface_report()?;
        let monodromy_ok = if family.is_isotrivial() || report.n_singular == 0 {
            "n/a".to_string()
        } else {
            match verify_monodromy(&family, opts) {
                Ok(checks) => {
                    if checks.iter().all(|c| c.ok) {
                        "ok".to_string()
                    } else {
                        "FAIL".to_string()
                    }
                }
                Err(e) => format!("error: {e}"),
            }
        };
        Ok(CorpusRow {
            file: file.clone(),
            status: "ok".into(),
            delta: Some(rat_to_string(&report.delta_degree)),
            deg_j: Some(report.deg_j),
            n_singular: Some(report.n_singular),
            n_ge_3: Some(
                if report.isotrivial {
                    "vacuous"
                } else if report.n_singular >= 3 {
                    "ok"
                } else {
                    "VIOLATED"
                }
                .to_string(),
            ),
            euler_audit: Some(report.euler_audit_ok && report.delta_audit_ok && report.deg_j_audit_ok),
            monodromy_ok: Some(monodromy_ok),
        })
    };
    run().unwrap_or_else(|e| CorpusRow {
        file,
        status: format!("error: {e}"),
        delta: None,
        deg_j: None,
        n_singular: None,
        n_ge_3: None,
        euler_audit: None,
        monodromy_ok: None,
    })
}

/// Runs every .toml family in the directory (concurrently, output ordered by
/// filename) and aggregates the audit table.
pub fn corpus(dir: &Path, opts: &PfOptions) -> Result<CorpusOutcome, Error> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Invalid(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    let rows: Vec<CorpusRow> = std::thread::scope(|scope| {
        let handles: Vec<_> = paths
            .iter()
            .map(|p| scope.spawn(move || corpus_row(p, opts)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("no panic")).collect()
    });
    let checks_ok = rows.iter().all(|r| {
        r.status != "ok"
            || (r.n_ge_3.as_deref() != Some("VIOLATED")
                && r.euler_audit == Some(true)
                && r.monodromy_ok.as_deref() != Some("FAIL"))
    });
    Ok(CorpusOutcome { rows, checks_ok })
}

pub fn corpus_table(rows: &[CorpusRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<28} {:>7} {:>6} {:>4} {:>8} {:>6} {:>10}  {}\n",
        "family", "delta", "deg_j", "N", "N>=3", "audit", "monodromy", "status"
    ));
    for r in rows {
        let opt = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:<28} {:>7} {:>6} {:>4} {:>8} {:>6} {:>10}  {}\n",
            r.file,
            opt(&r.delta),
            r.deg_j.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            r.n_singular
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into()),
            opt(&r.n_ge_3),
            r.euler_audit
                .map(|v| if v { "ok" } else { "FAIL" }.to_string())
                .unwrap_or_else(|| "-".into()),
            opt(&r.monodromy_ok),
            r.status,
        ));
    }
    out
}
