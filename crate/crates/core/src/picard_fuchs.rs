//! Numerical transport of the Picard–Fuchs system.
//!
//! For y² = 4x³ − g₂(t)x − g₃(t) the period vector (ω, η) satisfies a 2×2
//! trace-free linear system with entries
//!
//! ```text
//!   a11 = −(1/12)·Δ′/Δ     a12 = 3·dee/(2Δ)
//!   a21 = −g₂·dee/(8Δ)     a22 = +(1/12)·Δ′/Δ
//! ```
//!
//! where dee = 3g₃g₂′ − 2g₂g₃′. The system's poles are the zeros of Δ; zeros
//! of dee away from Δ are apparent singularities of the associated scalar
//! equation and must carry trivial monodromy, which `transport` confirms.
//!
//! Everything in this module is double precision: it is a consistency check
//! against the exact Kodaira data, not a source of truth. Monodromy is
//! recovered by fixed-step RK4 around circles (with step-halving for the
//! error estimate) together with a contour measurement of ord Δ from the
//! residue of a11; (trace, ord Δ) pins the fiber type among the Kodaira
//! classes of a minimal model.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kodaira::FiberType;
use crate::places::{ord_at, Place};
use crate::scalar::{rat_i64, rat_to_f64};
use crate::weierstrass::WeierstrassFamily;
use crate::{C64, CPoly, QPoly, QRatFunc};

#[derive(Clone, Debug)]
pub struct PfSystem {
    pub a11: QRatFunc,
    pub a12: QRatFunc,
    pub a21: QRatFunc,
    pub a22: QRatFunc,
    pub dee: QPoly,
    pub singular_support: Vec<Place>,
    pub apparent_support: Vec<Place>,
    compiled: CompiledSystem,
}

/// Constructs the connection matrix exactly and compiles it for evaluation.
/// Errors with [`Error::IsotrivialFamily`] when dee ≡ 0 (constant J).
pub fn build_pf(family: &WeierstrassFamily) -> Result<PfSystem> {
    let g2 = family.g2();
    let g3 = family.g3();
    let delta = family.delta();
    let dee = &g3.scale(&rat_i64(3)) * &g2.derivative()
        - g2.scale(&rat_i64(2)) * g3.derivative();
    if dee.is_zero() {
        return Err(Error::IsotrivialFamily);
    }
    let ddelta = delta.derivative();
    let a11 = QRatFunc::new(
        ddelta.scale(&crate::scalar::rat(-1, 12)),
        delta.clone(),
    )?;
    let a12 = QRatFunc::new(dee.scale(&crate::scalar::rat(3, 2)), delta.clone())?;
    let a21 = QRatFunc::new(
        (g2 * &dee).scale(&crate::scalar::rat(-1, 8)),
        delta.clone(),
    )?;
    let a22 = a11.neg();

    let mut singular_support = Vec::new();
    let mut apparent_support = Vec::new();
    for place in crate::places::compatible_splitting(&[delta.clone(), dee.clone()])? {
        let min_poly = place.min_poly().expect("finite place");
        let in_delta = ord_at(delta, &place, 0)? > 0;
        let in_dee = ord_at(&dee, &place, 0)? > 0;
        if in_delta {
            singular_support.push(Place::Finite(min_poly.clone()));
        } else if in_dee {
            apparent_support.push(place);
        }
    }
    let compiled = CompiledSystem::new(&a11, &a12, &a21);
    Ok(PfSystem {
        a11,
        a12,
        a21,
        a22,
        dee,
        singular_support,
        apparent_support,
        compiled,
    })
}

/// Numeric evaluators for the matrix entries.
#[derive(Clone, Debug)]
struct CompiledSystem {
    a11n: CPoly,
    a11d: CPoly,
    a12n: CPoly,
    a12d: CPoly,
    a21n: CPoly,
    a21d: CPoly,
}

fn to_cpoly(p: &QPoly) -> CPoly {
    p.map(|c| C64::new(rat_to_f64(c), 0.0))
}

impl CompiledSystem {
    fn new(a11: &QRatFunc, a12: &QRatFunc, a21: &QRatFunc) -> Self {
        CompiledSystem {
            a11n: to_cpoly(a11.num()),
            a11d: to_cpoly(a11.den()),
            a12n: to_cpoly(a12.num()),
            a12d: to_cpoly(a12.den()),
            a21n: to_cpoly(a21.num()),
            a21d: to_cpoly(a21.den()),
        }
    }

    fn a11(&self, t: C64) -> C64 {
        self.a11n.eval(&t) / self.a11d.eval(&t)
    }

    /// Full matrix [[a11, a12], [a21, −a11]] at t.
    fn matrix(&self, t: C64) -> M2 {
        let a11 = self.a11(t);
        let a12 = self.a12n.eval(&t) / self.a12d.eval(&t);
        let a21 = self.a21n.eval(&t) / self.a21d.eval(&t);
        M2([[a11, a12], [a21, -a11]])
    }
}

/// Minimal 2×2 complex matrix helper.
#[derive(Clone, Copy, Debug)]
pub struct M2(pub [[C64; 2]; 2]);

impl M2 {
    pub fn identity() -> Self {
        M2([
            [C64::new(1.0, 0.0), C64::zero()],
            [C64::zero(), C64::new(1.0, 0.0)],
        ])
    }

    pub fn mul(&self, rhs: &M2) -> M2 {
        let mut out = [[C64::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        M2(out)
    }

    pub fn scale(&self, c: C64) -> M2 {
        let mut out = self.0;
        for row in &mut out {
            for v in row {
                *v *= c;
            }
        }
        M2(out)
    }

    pub fn add(&self, rhs: &M2) -> M2 {
        let mut out = self.0;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += rhs.0[i][j];
            }
        }
        M2(out)
    }

    pub fn sub(&self, rhs: &M2) -> M2 {
        let mut out = self.0;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] -= rhs.0[i][j];
            }
        }
        M2(out)
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> M2 {
        let d = self.det();
        M2([
            [self.0[1][1] / d, -self.0[0][1] / d],
            [-self.0[1][0] / d, self.0[0][0] / d],
        ])
    }

    /// max |entry|
    pub fn norm_max(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn dist_max(&self, rhs: &M2) -> f64 {
        self.sub(rhs).norm_max()
    }
}

/// One closed circular loop in the t-plane.
#[derive(Clone, Debug)]
pub struct Loop {
    pub center: C64,
    pub radius: f64,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug)]
enum PathSeg {
    /// center, radius, start angle, end angle (radians; end < start runs cw)
    Arc(C64, f64, f64, f64),
    Line(C64, C64),
}

impl PathSeg {
    fn point(&self, tau: f64) -> (C64, C64) {
        match *self {
            PathSeg::Arc(c, r, a0, a1) => {
                let ang = a0 + tau * (a1 - a0);
                let e = C64::new(0.0, ang).exp();
                (c + r * e, C64::new(0.0, r * (a1 - a0)) * e)
            }
            PathSeg::Line(from, to) => (from + tau * (to - from), to - from),
        }
    }

    fn length(&self) -> f64 {
        match *self {
            PathSeg::Arc(_, r, a0, a1) => r * (a1 - a0).abs(),
            PathSeg::Line(from, to) => (to - from).norm(),
        }
    }

    /// Minimum distance from the segment to a point, sampled finely enough
    /// for guard checking.
    fn min_dist(&self, p: C64) -> f64 {
        match *self {
            PathSeg::Arc(c, r, _, _) => ((p - c).norm() - r).abs(),
            PathSeg::Line(from, to) => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (p - from).norm();
                }
                let t = ((p - from).re * d.re + (p - from).im * d.im) / len2;
                let t = t.clamp(0.0, 1.0);
                (p - (from + t * d)).norm()
            }
        }
    }
}

/// Transport along a piecewise path: returns the fundamental-matrix transport
/// and the contour integral of a11.
fn transport_path(sys: &CompiledSystem, segs: &[PathSeg], steps: usize) -> (M2, C64) {
    let total_len: f64 = segs.iter().map(PathSeg::length).sum();
    let mut y = M2::identity();
    let mut q = C64::zero();
    for seg in segs {
        let frac = if total_len > 0.0 {
            seg.length() / total_len
        } else {
            1.0 / segs.len() as f64
        };
        let n = ((steps as f64 * frac).ceil() as usize).max(16);
        let h = 1.0 / n as f64;
        // RK4 on Y' = A(t(τ)) t'(τ) Y and q' = a11(t(τ)) t'(τ)
        let deriv = |tau: f64, y: &M2| -> (M2, C64) {
            let (t, dt) = seg.point(tau);
            (sys.matrix(t).scale(dt).mul(y), sys.a11(t) * dt)
        };
        for k in 0..n {
            let tau = k as f64 * h;
            let (k1, q1) = deriv(tau, &y);
            let (k2, q2) = deriv(tau + h / 2.0, &y.add(&k1.scale(C64::new(h / 2.0, 0.0))));
            let (k3, q3) = deriv(tau + h / 2.0, &y.add(&k2.scale(C64::new(h / 2.0, 0.0))));
            let (k4, q4) = deriv(tau + h, &y.add(&k3.scale(C64::new(h, 0.0))));
            let sum = k1.add(&k2.scale(C64::new(2.0, 0.0)))
                .add(&k3.scale(C64::new(2.0, 0.0)))
                .add(&k4);
            y = y.add(&sum.scale(C64::new(h / 6.0, 0.0)));
            q += (q1 + 2.0 * q2 + 2.0 * q3 + q4) * (h / 6.0);
        }
    }
    (y, q)
}

#[derive(Clone, Debug)]
pub struct TransportResult {
    pub matrix: M2,
    pub trace: C64,
    pub det: C64,
    pub classified_type: Option<FiberType>,
    pub n_recovered: Option<i64>,
    /// Max of |det − 1|, the step-halving difference, and the rounding error
    /// of the measured ord Δ.
    pub residual: f64,
    /// ord Δ measured from the contour residue of a11.
    pub measured_ord_delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PfOptions {
    pub steps: usize,
    pub tolerance: f64,
}

impl Default for PfOptions {
    fn default() -> Self {
        PfOptions {
            steps: 4096,
            tolerance: 1e-6,
        }
    }
}

impl PfSystem {
    /// All numerically isolated roots of the named support places.
    fn support_roots(&self, places: &[Place]) -> Result<Vec<C64>> {
        let mut out = Vec::new();
        for place in places {
            out.extend(roots_of(place.min_poly().expect("finite place"))?);
        }
        Ok(out)
    }

    pub fn all_support_roots(&self) -> Result<Vec<C64>> {
        let mut roots = self.support_roots(&self.singular_support)?;
        roots.extend(self.support_roots(&self.apparent_support)?);
        Ok(roots)
    }

    fn guard_check(&self, segs: &[PathSeg], guard: f64, exclude: Option<C64>) -> Result<()> {
        let mut min_dist = f64::INFINITY;
        for root in self.all_support_roots()? {
            if let Some(e) = exclude {
                if (root - e).norm() < 1e-12 {
                    continue;
                }
            }
            for seg in segs {
                min_dist = min_dist.min(seg.min_dist(root));
            }
        }
        if min_dist < guard {
            return Err(Error::SingularOnPath { min_dist, guard });
        }
        Ok(())
    }

    /// Integrates around the loop at full and half step counts; the residual
    /// combines |det − 1|, the halving difference and the ord-rounding error.
    /// Fails with [`Error::NoConvergence`] when the residual exceeds the
    /// tolerance and with [`Error::SingularOnPath`] when the circle runs too
    /// close to a support root other than the enclosed one.
    pub fn transport(&self, lp: &Loop, tolerance: f64) -> Result<TransportResult> {
        let mut enclosed = None;
        let mut count = 0;
        for root in self.all_support_roots()? {
            if (root - lp.center).norm() <= lp.radius {
                enclosed = Some(root);
                count += 1;
            }
        }
        if count > 1 {
            return Err(Error::Invalid(format!(
                "loop of radius {} at {} encloses {count} support roots",
                lp.radius, lp.center
            )));
        }
        let segs = [PathSeg::Arc(
            lp.center,
            lp.radius,
            0.0,
            2.0 * std::f64::consts::PI,
        )];
        self.guard_check(&segs, lp.radius / 8.0, enclosed)?;
        let (full, q) = transport_path(&self.compiled, &segs, lp.steps);
        let (half, _) = transport_path(&self.compiled, &segs, lp.steps / 2);
        self.finish_transport(full, half, q, tolerance)
    }

    fn finish_transport(
        &self,
        full: M2,
        half: M2,
        q: C64,
        tolerance: f64,
    ) -> Result<TransportResult> {
        let det = full.det();
        let trace = full.trace();
        // q = 2πi · Σ residues(a11) = 2πi · (−ord Δ / 12) for enclosed zeros
        let residue = q / C64::new(0.0, 2.0 * std::f64::consts::PI);
        let measured_ord_delta = -12.0 * residue.re;
        let d_round = measured_ord_delta.round();
        let residual = (det - C64::new(1.0, 0.0))
            .norm()
            .max(full.dist_max(&half))
            .max((measured_ord_delta - d_round).abs() / 12.0);
        if residual > tolerance {
            return Err(Error::NoConvergence {
                residual,
                tolerance,
            });
        }
        let classified_type = classify_transport(&full, d_round as i64, tolerance);
        let n_recovered = match classified_type {
            Some(FiberType::In(n)) => Some(n as i64),
            Some(FiberType::InStar(n)) => Some(n as i64),
            _ => None,
        };
        Ok(TransportResult {
            matrix: full,
            trace,
            det,
            classified_type,
            n_recovered,
            residual,
            measured_ord_delta,
        })
    }
}

/// Pins the Kodaira class from conjugacy data: the trace (rounded to the
/// nearest admissible value) plus the measured ord Δ determine the type.
fn classify_transport(t: &M2, ord_delta: i64, tolerance: f64) -> Option<FiberType> {
    let tr = t.trace();
    if tr.im.abs() > tolerance.max(1e-6) * 100.0 {
        return None;
    }
    let tr_round = tr.re.round() as i64;
    match (tr_round, ord_delta) {
        (2, 0) => Some(FiberType::I0),
        (2, d) if d >= 1 => Some(FiberType::In(d as u32)),
        (-2, 6) => Some(FiberType::I0Star),
        (-2, d) if d >= 7 => Some(FiberType::InStar((d - 6) as u32)),
        (1, 2) => Some(FiberType::II),
        (1, 10) => Some(FiberType::IIStar),
        (0, 3) => Some(FiberType::III),
        (0, 9) => Some(FiberType::IIIStar),
        (-1, 4) => Some(FiberType::IV),
        (-1, 8) => Some(FiberType::IVStar),
        _ => None,
    }
}

/// Numeric roots by Durand–Kerner iteration with Newton polishing. The
/// minimal polynomials of places are squarefree, so all roots are simple and
/// the iteration converges from the standard staggered circle start.
pub fn roots_of(p: &QPoly) -> Result<Vec<C64>> {
    let deg = p.deg().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let monic = p.monic();
    let cpoly = to_cpoly(&monic);
    let n = deg;
    // Cauchy bound: every root has |z| ≤ 1 + max |a_k|
    let bound = 1.0
        + cpoly.coeffs()[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut zs: Vec<C64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.437;
            C64::new(0.0, ang).exp() * (bound * 0.8 + 0.1)
        })
        .collect();
    let mut converged = false;
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= zs[k] - zs[j];
                }
            }
            if denom.norm() < 1e-280 {
                continue;
            }
            let step = cpoly.eval(&zs[k]) / denom;
            zs[k] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 * bound.max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RootIsolationFailure(p.to_string_var("t")));
    }
    let dpoly = cpoly.derivative();
    for z in &mut zs {
        for _ in 0..3 {
            let d = dpoly.eval(z);
            if d.norm() < 1e-280 {
                break;
            }
            *z -= cpoly.eval(z) / d;
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::RootIsolationFailure(p.to_string_var("t")));
        }
    }
    zs.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite")
    });
    Ok(zs)
}

#[derive(Clone, Debug)]
pub struct MonodromyCheck {
    pub place: Place,
    pub predicted: FiberType,
    pub trace_err: f64,
    pub ok: bool,
    pub transport: TransportResult,
}

/// Loop construction rule: half the distance to the nearest other support
/// root, capped at 1.
fn loop_radius(center: C64, others: &[C64]) -> f64 {
    let nearest = others
        .iter()
        .map(|r| (r - center).norm())
        .filter(|d| *d > 1e-12)
        .fold(f64::INFINITY, f64::min);
    if nearest.is_finite() {
        (nearest / 2.0).min(1.0)
    } else {
        1.0
    }
}

/// Transports around one root of each finite singular place and compares the
/// recovered conjugacy data (trace; unipotency class; ord Δ, and through it
/// the Iₙ/Iₙ* index) against the Kodaira-table prediction. Isotrivial
/// families verify vacuously.
pub fn verify_monodromy(
    family: &WeierstrassFamily,
    opts: &PfOptions,
) -> Result<Vec<MonodromyCheck>> {
    let sys = match build_pf(family) {
        Ok(sys) => sys,
        Err(Error::IsotrivialFamily) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let fibers = family.classify_fibers()?;
    let all_roots = sys.all_support_roots()?;
    let mut out = Vec::new();
    for fiber in fibers {
        let Some(min_poly) = fiber.place.min_poly() else {
            continue; // infinity is covered by the global check
        };
        let roots = roots_of(min_poly)?;
        let Some(center) = roots.first().copied() else {
            return Err(Error::RootIsolationFailure(min_poly.to_string_var("t")));
        };
        let lp = Loop {
            center,
            radius: loop_radius(center, &all_roots),
            steps: opts.steps,
        };
        let transport = sys.transport(&lp, opts.tolerance)?;
        let trace_err = (transport.trace - C64::new(fiber.fiber_type.trace() as f64, 0.0)).norm();
        let ok = transport.classified_type == Some(fiber.fiber_type) && trace_err < opts.tolerance;
        out.push(MonodromyCheck {
            place: fiber.place,
            predicted: fiber.fiber_type,
            trace_err,
            ok,
            transport,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ApparentCheck {
    pub place: Place,
    /// ‖T − I‖max around one root of the place.
    pub deviation: f64,
}

/// Apparent singularities (zeros of dee off Δ) must transport to the
/// identity.
pub fn check_apparent(family: &WeierstrassFamily, opts: &PfOptions) -> Result<Vec<ApparentCheck>> {
    let sys = match build_pf(family) {
        Ok(sys) => sys,
        Err(Error::IsotrivialFamily) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let all_roots = sys.all_support_roots()?;
    let mut out = Vec::new();
    for place in sys.apparent_support.clone() {
        let roots = roots_of(place.min_poly().expect("finite"))?;
        let Some(center) = roots.first().copied() else {
            continue;
        };
        let lp = Loop {
            center,
            radius: loop_radius(center, &all_roots),
            steps: opts.steps,
        };
        let transport = sys.transport(&lp, opts.tolerance)?;
        out.push(ApparentCheck {
            place,
            deviation: transport.matrix.dist_max(&M2::identity()),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GlobalCheck {
    /// ‖(∏ lassos)·T_big⁻¹ − I‖max: the monodromy relation of ℙ¹.
    pub residual: f64,
    /// |trace(T_big) − trace predicted at infinity|, when infinity is singular.
    pub infinity_trace_err: Option<f64>,
    pub loops: usize,
}

/// Checks the global monodromy relation: lassos around every finite singular
/// root, composed in fan order from a common base point, must equal the
/// transport around a large circle (the inverse of the loop at infinity).
pub fn global_monodromy(family: &WeierstrassFamily, opts: &PfOptions) -> Result<GlobalCheck> {
    let sys = match build_pf(family) {
        Ok(sys) => sys,
        Err(Error::IsotrivialFamily) => {
            return Ok(GlobalCheck {
                residual: 0.0,
                infinity_trace_err: None,
                loops: 0,
            })
        }
        Err(e) => return Err(e),
    };
    let sing_roots = sys.support_roots(&sys.singular_support)?;
    if sing_roots.is_empty() {
        return Ok(GlobalCheck {
            residual: 0.0,
            infinity_trace_err: None,
            loops: 0,
        });
    }
    let all_roots = sys.all_support_roots()?;
    let max_norm = all_roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let big_r = 2.0 * max_norm + 2.0;

    // pick a base angle whose lasso rays keep clear of every off-target root
    let phis = [0.3779, 1.1173, 1.9391, 2.7217, 3.5561, 4.3127, 5.2103];
    let mut chosen: Option<(C64, Vec<(f64, Vec<PathSeg>, C64)>)> = None;
    'phi: for phi in phis {
        let base = C64::new(0.0, phi).exp() * big_r;
        let mut lassos = Vec::new();
        for &root in &sing_roots {
            let rho = loop_radius(root, &all_roots);
            let dir = (base - root) / (base - root).norm();
            let entry = root + rho * dir;
            let entry_angle = (entry - root).arg();
            let segs = vec![
                PathSeg::Line(base, entry),
                PathSeg::Arc(root, rho, entry_angle, entry_angle + 2.0 * std::f64::consts::PI),
                PathSeg::Line(entry, base),
            ];
            // the approach line must clear every root except the target
            let guard = rho / 8.0;
            if sys.guard_check(&segs, guard, Some(root)).is_err() {
                continue 'phi;
            }
            let angle = (root - base).arg();
            lassos.push((angle, segs, root));
        }
        chosen = Some((base, lassos));
        break;
    }
    let Some((base, mut lassos)) = chosen else {
        return Err(Error::SingularOnPath {
            min_dist: 0.0,
            guard: f64::NAN,
        });
    };
    // fan order: increasing departure angle seen from the base point
    lassos.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));

    let mut product = M2::identity();
    for (_, segs, _) in &lassos {
        let (full, _) = transport_path(&sys.compiled, segs, opts.steps);
        let (half, _) = transport_path(&sys.compiled, segs, opts.steps / 2);
        let res = full.dist_max(&half).max((full.det() - C64::new(1.0, 0.0)).norm());
        if res > opts.tolerance {
            return Err(Error::NoConvergence {
                residual: res,
                tolerance: opts.tolerance,
            });
        }
        // path order: earlier lasso acts first
        product = full.mul(&product);
    }
    let base_angle = base.arg();
    let big = [PathSeg::Arc(
        C64::zero(),
        big_r,
        base_angle,
        base_angle + 2.0 * std::f64::consts::PI,
    )];
    let (t_big, _) = transport_path(&sys.compiled, &big, opts.steps);
    let residual = product.mul(&t_big.inverse()).dist_max(&M2::identity());

    let infinity_trace_err = family
        .classify_fibers()?
        .iter()
        .find(|f| f.place.is_infinity())
        .map(|f| (t_big.trace() - C64::new(f.fiber_type.trace() as f64, 0.0)).norm());
    Ok(GlobalCheck {
        residual,
        infinity_trace_err,
        loops: lassos.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::scalar::rat;
    use crate::weierstrass::build_family;

    fn family(g2: &str, g3: &str, level: u32) -> WeierstrassFamily {
        build_family(parse_poly(g2).unwrap(), parse_poly(g3).unwrap(), level).unwrap()
    }

    #[test]
    fn pf_entries_for_g2_t_g3_1() {
        // dee = 3, a12 = 9/(2(t³−27)), a21 = −3t/(8(t³−27)),
        // a11 = −t²/(4(t³−27)) from the discriminant logarithm
        let sys = build_pf(&family("t", "1", 1)).unwrap();
        assert_eq!(sys.dee, QPoly::from_i64(&[3]));
        assert_eq!(sys.a12.den(), &parse_poly("t^3 - 27").unwrap());
        assert_eq!(sys.a12.num(), &QPoly::constant(rat(9, 2)));
        assert_eq!(sys.a21.num(), &QPoly::from_i64(&[0, 1]).scale(&rat(-3, 8)));
        assert_eq!(sys.a11.num(), &QPoly::from_i64(&[0, 0, 1]).scale(&rat(-1, 4)));
        // trace vanishes identically
        let s = sys.a11.add(&sys.a22).unwrap();
        assert!(s.is_zero());
        assert_eq!(sys.singular_support.len(), 1);
        assert!(sys.apparent_support.is_empty());
    }

    #[test]
    fn pf_rejects_isotrivial() {
        assert_eq!(
            build_pf(&family("0", "1", 1)).unwrap_err(),
            Error::IsotrivialFamily
        );
        // J = const with nonzero g2, g3
        assert_eq!(
            build_pf(&family("t^2", "t^3", 1)).unwrap_err(),
            Error::IsotrivialFamily
        );
    }

    #[test]
    fn pf_trace_free_generic() {
        let sys = build_pf(&family("3*t^2", "t^2", 1)).unwrap();
        assert!(sys.a11.add(&sys.a22).unwrap().is_zero());
    }

    #[test]
    fn apparent_support_detected() {
        // g2 = t^2 + 12, g3 = 1: dee = 6t, Δ(0) ≠ 0, so t = 0 is apparent
        let sys = build_pf(&family("t^2 + 12", "1", 1)).unwrap();
        assert_eq!(sys.apparent_support.len(), 1);
        assert_eq!(
            sys.apparent_support[0].min_poly().unwrap(),
            &QPoly::from_i64(&[0, 1])
        );
    }

    #[test]
    fn roots_of_cubic() {
        let roots = roots_of(&parse_poly("t^3 - 27").unwrap()).unwrap();
        assert_eq!(roots.len(), 3);
        let real_root = roots.iter().find(|r| r.im.abs() < 1e-9).unwrap();
        assert!((real_root.re - 3.0).abs() < 1e-9);
        for r in &roots {
            assert!((r.norm() - 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn loop_with_no_enclosed_root_is_identity() {
        let sys = build_pf(&family("t", "1", 1)).unwrap();
        let lp = Loop {
            center: C64::new(10.0, 10.0),
            radius: 0.5,
            steps: 512,
        };
        let r = sys.transport(&lp, 1e-6).unwrap();
        assert!(r.matrix.dist_max(&M2::identity()) < 1e-9);
        assert_eq!(r.classified_type, Some(FiberType::I0));
    }

    #[test]
    fn transport_around_i1_root() {
        let sys = build_pf(&family("t", "1", 1)).unwrap();
        let lp = Loop {
            center: C64::new(3.0, 0.0),
            radius: 1.0,
            steps: 2048,
        };
        let r = sys.transport(&lp, 1e-6).unwrap();
        assert!((r.trace - C64::new(2.0, 0.0)).norm() < 1e-6, "trace {}", r.trace);
        assert_eq!(r.classified_type, Some(FiberType::In(1)));
        assert_eq!(r.n_recovered, Some(1));
        // (T − I) has rank 1: det(T − I) ≈ 0 but T ≠ I
        let u = r.matrix.sub(&M2::identity());
        assert!(u.det().norm() < 1e-6);
        assert!(u.norm_max() > 1e-3);
    }

    #[test]
    fn transport_detects_singular_path() {
        let sys = build_pf(&family("t", "1", 1)).unwrap();
        // circle through the root at t = 3
        let lp = Loop {
            center: C64::new(3.0 + 1e-4, 0.0),
            radius: 1e-4,
            steps: 64,
        };
        // encloses the root but passes within guard distance of it? no —
        // enclosed root is exempt; instead run a circle nearly through the
        // *other* roots: center between two roots with radius almost touching
        let bad = Loop {
            center: C64::new(3.0, 0.0),
            radius: 5.19, // |3 − ω·3| ≈ 5.196: grazes the complex roots
            steps: 64,
        };
        match sys.transport(&bad, 1e-6) {
            Err(Error::SingularOnPath { .. }) | Err(Error::Invalid(_)) => {}
            other => panic!("expected SingularOnPath, got {other:?}"),
        }
        let _ = lp;
    }

    #[test]
    fn tolerance_floor_unreachable() {
        let sys = build_pf(&family("t", "1", 1)).unwrap();
        let lp = Loop {
            center: C64::new(3.0, 0.0),
            radius: 1.0,
            steps: 256,
        };
        assert!(matches!(
            sys.transport(&lp, 1e-15),
            Err(Error::NoConvergence { .. })
        ));
    }
}
