//! Sign-change scanning with bisection refinement, and the switch-off and
//! zero-ZZ searches built on it.

use rayon::prelude::*;

use crate::analysis::contour::{zero_contour, Contour};
use crate::analysis::sweep::{Base, SweepSpec, SweepVariable};
use crate::circuit::{OperatingPoint, Qubit, Resonator};
use crate::error::Result;
use crate::perturbation::{corrected_coupling_g_cr, effective_coupling_g_d, high_excited_shift};
use crate::zz::{singular_denominators, zz_total, ZzOptions};

/// A root must re-evaluate below this (1 Hz in GHz).
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub location: f64,
    /// Final refined bracket; its ends have opposite signs (or one is zero).
    pub bracket: (f64, f64),
    /// Grid interval that contained the sign change.
    pub grid_bracket: (f64, f64),
    /// |f(location)| from a fresh evaluation.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub roots: Vec<Root>,
    pub method: &'static str,
    pub location_tolerance: f64,
    pub residual_tolerance: f64,
    pub diagnostics: Vec<String>,
    /// The function vanished on every grid point.
    pub degenerate: bool,
}

impl RootReport {
    fn empty(location_tolerance: f64) -> Self {
        RootReport {
            roots: Vec::new(),
            method: "grid sign-change scan + bisection",
            location_tolerance,
            residual_tolerance: RESIDUAL_TOLERANCE,
            diagnostics: Vec::new(),
            degenerate: false,
        }
    }
}

/// True when some denominator changes sign (or is undefined) between the
/// two samples.
pub(crate) fn crosses_pole(a: &[f64], b: &[f64]) -> bool {
    a.len() != b.len()
        || a.iter()
            .zip(b)
            .any(|(x, y)| !x.is_finite() || !y.is_finite() || x.signum() != y.signum())
}

/// Bisects `f` on [lo, hi] where f(lo) and f(hi) have opposite signs.
/// Returns `None` if an interior evaluation fails.
pub(crate) fn bisect(
    f: &impl Fn(f64) -> Option<f64>,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    tol: f64,
) -> Option<(f64, f64)> {
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Some((mid, mid));
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Some((lo, hi))
}

/// Scans `grid` for sign changes of `f` and refines each by bisection.
///
/// `f` returns `None` where it cannot be evaluated (hard poles).
/// `poles` returns signed singular denominators; a bracket across which
/// any of them changes sign is skipped. Every root is re-evaluated at its
/// final location and rejected if the residual exceeds 1 Hz, which also
/// catches sign changes through poles `poles` does not know about.
pub fn find_roots_1d<F, P>(f: F, poles: P, grid: &[f64], tol: f64) -> RootReport
where
    F: Fn(f64) -> Option<f64> + Sync,
    P: Fn(f64) -> Vec<f64> + Sync,
{
    let mut report = RootReport::empty(tol);
    let samples: Vec<(Option<f64>, Vec<f64>)> = grid
        .par_iter()
        .map(|&x| (f(x).filter(|v| v.is_finite()), poles(x)))
        .collect();
    if !samples.is_empty() && samples.iter().all(|(v, _)| *v == Some(0.0)) {
        report.degenerate = true;
        report
            .diagnostics
            .push("function is identically zero on the grid".into());
        return report;
    }
    let mut sign_changes = 0usize;
    let mut poisoned = 0usize;
    for i in 0..grid.len() {
        let Some(a) = samples[i].0 else {
            report.diagnostics.push(format!("no value at {}", grid[i]));
            continue;
        };
        if a == 0.0 {
            report.roots.push(Root {
                location: grid[i],
                bracket: (grid[i], grid[i]),
                grid_bracket: (grid[i], grid[i]),
                residual: 0.0,
            });
            continue;
        }
        if i + 1 == grid.len() {
            break;
        }
        let Some(b) = samples[i + 1].0 else { continue };
        if b == 0.0 || (a > 0.0) == (b > 0.0) {
            continue;
        }
        sign_changes += 1;
        let (lo, hi) = (grid[i], grid[i + 1]);
        if crosses_pole(&samples[i].1, &samples[i + 1].1) {
            poisoned += 1;
            report
                .diagnostics
                .push(format!("bracket [{lo}, {hi}] skipped: contains a pole"));
            continue;
        }
        let Some(bracket) = bisect(&f, lo, hi, a, tol) else {
            poisoned += 1;
            report.diagnostics.push(format!(
                "bracket [{lo}, {hi}] skipped: evaluation failed inside"
            ));
            continue;
        };
        let location = 0.5 * (bracket.0 + bracket.1);
        let residual = f(location).map_or(f64::INFINITY, f64::abs);
        if residual > RESIDUAL_TOLERANCE {
            poisoned += 1;
            report.diagnostics.push(format!(
                "sign change near {location} rejected: residual {residual:.3e} GHz (discontinuity)"
            ));
            continue;
        }
        report.roots.push(Root {
            location,
            bracket,
            grid_bracket: (lo, hi),
            residual,
        });
    }
    if report.roots.is_empty() && sign_changes > 0 && poisoned == sign_changes {
        report
            .diagnostics
            .push("all sign-change brackets were poisoned by poles".into());
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Gd,
    Gcr,
}

impl CouplingKind {
    pub fn name(self) -> &'static str {
        match self {
            CouplingKind::Gd => "g_d",
            CouplingKind::Gcr => "g_cr",
        }
    }

    pub fn evaluate(self, p: &OperatingPoint) -> Option<f64> {
        let r = match self {
            CouplingKind::Gd => effective_coupling_g_d(p),
            CouplingKind::Gcr => corrected_coupling_g_cr(p),
        };
        r.ok().map(|g| g.total)
    }

    /// Denominators of the coupling formula: qubit–resonator detunings at
    /// the bare and, for g_cr, at the corrected qubit frequencies.
    pub fn singular_denominators(self, p: &OperatingPoint) -> Vec<f64> {
        let mut out = Vec::with_capacity(8);
        let corrected = match self {
            CouplingKind::Gd => None,
            CouplingKind::Gcr => Some(high_excited_shift(p).ok()),
        };
        for r in Resonator::ALL {
            for q in Qubit::ALL {
                out.push(p.omega_qubit(q) - p.omega_resonator(r));
                if let Some(s) = corrected {
                    out.push(s.map_or(f64::NAN, |s| s.omega_cr(q) - p.omega_resonator(r)));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SwitchOff {
    Roots(RootReport),
    Contour(Contour),
}

/// Zeros of the effective qubit–qubit coupling along a line, or its zero
/// contour on a 2D grid.
pub fn find_switchoff(base: &Base, spec: &SweepSpec, which: CouplingKind) -> Result<SwitchOff> {
    spec.validate()?;
    let eval = move |p: &OperatingPoint| which.evaluate(p);
    let poles = move |p: &OperatingPoint| which.singular_denominators(p);
    match spec.second {
        None => Ok(SwitchOff::Roots(scan_line(
            base,
            spec.first.variable,
            &spec.first.values(),
            eval,
            poles,
        ))),
        Some(second) => Ok(SwitchOff::Contour(zero_contour(
            base,
            &spec.first,
            &second,
            eval,
            poles,
        ))),
    }
}

/// Zeros of the analytic static ZZ along a line.
pub fn find_zz_zero(base: &Base, spec: &SweepSpec, opts: &ZzOptions) -> Result<RootReport> {
    spec.validate()?;
    if spec.second.is_some() {
        return Err(crate::error::Error::Sweep(
            "zero-ZZ search runs along one axis".into(),
        ));
    }
    let o = *opts;
    let eval = move |p: &OperatingPoint| zz_total(p, &o).ok().map(|b| b.xi_total);
    let poles = move |p: &OperatingPoint| singular_denominators(p, o.include_cross_kerr);
    Ok(scan_line(
        base,
        spec.first.variable,
        &spec.first.values(),
        eval,
        poles,
    ))
}

fn scan_line(
    base: &Base,
    variable: SweepVariable,
    grid: &[f64],
    eval: impl Fn(&OperatingPoint) -> Option<f64> + Sync,
    poles: impl Fn(&OperatingPoint) -> Vec<f64> + Sync,
) -> RootReport {
    find_roots_1d(
        |v| eval(&base.point_at(variable, v)),
        |v| poles(&base.point_at(variable, v)),
        grid,
        variable.root_tolerance(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::sweep::Axis;
    use crate::circuit::CircuitParams;

    #[test]
    fn finds_simple_roots() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let r = find_roots_1d(|x| Some((x - 2.345) * 1e-3), |_| vec![], &grid, 1e-12);
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0].location - 2.345).abs() < 1e-11);
        assert!(r.roots[0].residual < RESIDUAL_TOLERANCE);
        let (lo, hi) = r.roots[0].bracket;
        assert!(hi - lo <= 1e-12 && lo <= 2.345 && 2.345 <= hi);
    }

    #[test]
    fn monotone_positive_has_no_roots() {
        let grid: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let r = find_roots_1d(|x| Some(1.0 + x), |_| vec![], &grid, 1e-9);
        assert!(r.roots.is_empty() && !r.degenerate);
    }

    #[test]
    fn pole_sign_change_is_not_a_root() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1 + 0.05).collect();
        // 1/(x − 1) changes sign at the pole only.
        let f = |x: f64| Some(1e-3 / (x - 1.0));
        let declared = find_roots_1d(f, |x| vec![x - 1.0], &grid, 1e-12);
        assert!(declared.roots.is_empty());
        assert!(declared.diagnostics.iter().any(|d| d.contains("poisoned")));
        let undeclared = find_roots_1d(f, |_| vec![], &grid, 1e-12);
        assert!(undeclared.roots.is_empty());
        assert!(undeclared
            .diagnostics
            .iter()
            .any(|d| d.contains("residual")));
    }

    #[test]
    fn degenerate_function() {
        let grid = [0.0, 1.0, 2.0];
        let r = find_roots_1d(|_| Some(0.0), |_| vec![], &grid, 1e-9);
        assert!(r.degenerate && r.roots.is_empty());
    }

    #[test]
    fn switchoff_without_direct_coupling() {
        let params = CircuitParams {
            g_xy: 0.0,
            ..CircuitParams::reference()
        };
        let base = Base::new(params).with_omega_x(4.56);
        let spec = SweepSpec::line(Axis::new(SweepVariable::OmegaY, 4.2, 5.0, 801));
        let SwitchOff::Roots(r) = find_switchoff(&base, &spec, CouplingKind::Gd).unwrap() else {
            panic!("expected roots")
        };
        assert!(!r.roots.is_empty());
        for root in &r.roots {
            let g = effective_coupling_g_d(&base.point_at(SweepVariable::OmegaY, root.location))
                .unwrap();
            assert!((g.induced_a + g.induced_b).abs() < RESIDUAL_TOLERANCE);
        }
    }

    #[test]
    fn zz_zero_all_couplings_off() {
        let params = CircuitParams {
            g_ax: 0.0,
            g_ay: 0.0,
            g_bx: 0.0,
            g_by: 0.0,
            g_xy: 0.0,
            g_ab: 0.0,
            ..CircuitParams::reference()
        };
        let base = Base::new(params).with_omega_x(4.0);
        let spec = SweepSpec::line(Axis::new(SweepVariable::OmegaY, 4.5, 5.0, 51));
        let r = find_zz_zero(&base, &spec, &ZzOptions::default()).unwrap();
        assert!(r.degenerate);
    }
}
