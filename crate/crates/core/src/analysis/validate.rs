//! Analytic static ZZ against the diagonalized Hamiltonian along an ω_y
//! line, skipping windows around cataloged poles.

use rayon::prelude::*;

use crate::analysis::csv::{format_bool, format_float, Table};
use crate::analysis::sweep::Axis;
use crate::analysis::sweep::SweepVariable;
use crate::circuit::{CircuitParams, OperatingPoint};
use crate::error::Result;
use crate::hamiltonian::{BuildOptions, TruncationScheme};
use crate::spectrum::{spectrum_at, zz_numeric};
use crate::zz::{pole_catalog, zz_total, ZzOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub omega_x: f64,
    pub axis: Axis,
    /// Half-width of the excluded window around each pole (GHz).
    pub pole_margin: f64,
    pub relative_tolerance: f64,
    /// GHz.
    pub absolute_tolerance: f64,
    pub zz: ZzOptions,
    pub truncation: TruncationScheme,
    pub build: BuildOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            omega_x: 4.52,
            axis: Axis::new(SweepVariable::OmegaY, 4.70, 5.00, 301),
            pole_margin: 0.05,
            relative_tolerance: 0.2,
            absolute_tolerance: 30e-6,
            zz: ZzOptions {
                include_cross_kerr: true,
                symmetric_third_order: false,
            },
            truncation: TruncationScheme::default(),
            build: BuildOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSample {
    pub omega_y: f64,
    pub analytic: f64,
    pub numeric: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub numeric_unreliable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub poles: Vec<f64>,
    pub samples: Vec<OracleSample>,
    pub excluded: usize,
}

impl OracleReport {
    pub fn failures(&self) -> usize {
        self.samples.iter().filter(|s| !s.passed).count()
    }

    pub fn passed(&self) -> bool {
        !self.samples.is_empty() && self.failures() == 0
    }

    /// Largest |analytic − numeric| relative to the tolerance of its point.
    pub fn worst(&self) -> Option<&OracleSample> {
        self.samples.iter().max_by(|a, b| {
            let ra = (a.analytic - a.numeric).abs() / a.tolerance;
            let rb = (b.analytic - b.numeric).abs() / b.tolerance;
            ra.total_cmp(&rb)
        })
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "omega_y_ghz",
            "xi_analytic_mhz",
            "xi_numeric_mhz",
            "tolerance_mhz",
            "passed",
            "numeric_unreliable",
        ]);
        for s in &self.samples {
            t.push(vec![
                format_float(s.omega_y),
                format_float(s.analytic * 1e3),
                format_float(s.numeric * 1e3),
                format_float(s.tolerance * 1e3),
                format_bool(s.passed),
                format_bool(s.numeric_unreliable),
            ]);
        }
        t
    }
}

pub fn oracle_equivalence(params: &CircuitParams, opts: &OracleOptions) -> Result<OracleReport> {
    opts.axis.validate()?;
    let at = |w: f64| OperatingPoint::with_qubit_frequencies(params, opts.omega_x, w);
    let poles: Vec<f64> = pole_catalog(
        &at(opts.axis.start),
        opts.axis.start - opts.pole_margin,
        opts.axis.stop + opts.pole_margin,
        opts.zz.include_cross_kerr,
    )
    .iter()
    .map(|p| p.omega_y)
    .collect();
    let (kept, excluded): (Vec<f64>, Vec<f64>) = opts
        .axis
        .values()
        .into_iter()
        .partition(|w| poles.iter().all(|p| (w - p).abs() > opts.pole_margin));
    let samples = kept
        .par_iter()
        .map(|&w| {
            let p = at(w);
            let analytic = zz_total(&p, &opts.zz)?.xi_total;
            let numeric = zz_numeric(&spectrum_at(&p, &opts.truncation, &opts.build)?)?;
            let tolerance =
                (opts.relative_tolerance * numeric.value.abs()).max(opts.absolute_tolerance);
            Ok(OracleSample {
                omega_y: w,
                analytic,
                numeric: numeric.value,
                tolerance,
                passed: (analytic - numeric.value).abs() <= tolerance,
                numeric_unreliable: numeric.unreliable,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport {
        poles,
        samples,
        excluded: excluded.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excludes_pole_windows() {
        let opts = OracleOptions {
            axis: Axis::new(SweepVariable::OmegaY, 4.60, 4.80, 21),
            ..Default::default()
        };
        let r = oracle_equivalence(&CircuitParams::reference(), &opts).unwrap();
        assert!(r.poles.iter().any(|p| (p - 4.715).abs() < 1e-12));
        assert!(r.samples.iter().all(|s| (s.omega_y - 4.715).abs() > 0.05));
        assert_eq!(r.samples.len() + r.excluded, 21);
    }

    #[test]
    fn agrees_far_from_resonators_with_direct_coupling_only() {
        let params = CircuitParams {
            g_ax: 0.0,
            g_ay: 0.0,
            g_bx: 0.0,
            g_by: 0.0,
            g_ab: 0.0,
            g_xy: 0.01,
            ..CircuitParams::reference()
        };
        let opts = OracleOptions {
            axis: Axis::new(SweepVariable::OmegaY, 4.85, 5.0, 4),
            truncation: TruncationScheme::new(2, 3, 3, 2).unwrap(),
            ..Default::default()
        };
        let r = oracle_equivalence(&params, &opts).unwrap();
        assert!(r.passed(), "{:?}", r.worst());
    }
}
