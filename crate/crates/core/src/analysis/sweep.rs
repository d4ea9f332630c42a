//! Grid construction and tabulation of analytic and numeric quantities.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analysis::csv::{format_bool, format_float, Table};
use crate::circuit::{
    flux_for_frequency, flux_tuned_frequency, CircuitParams, OperatingPoint, Qubit,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{BuildOptions, TruncationScheme};
use crate::perturbation::{corrected_coupling_g_cr, decouple, effective_coupling_g_d};
use crate::spectrum::{spectrum_at, zz_numeric};
use crate::zz::{zz_total, ZzOptions};

pub const DEFAULT_POINTS_1D: usize = 1001;
pub const DEFAULT_POINTS_2D: usize = 201;
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    PhiX,
    PhiY,
    OmegaX,
    OmegaY,
}

impl SweepVariable {
    pub fn qubit(self) -> Qubit {
        match self {
            SweepVariable::PhiX | SweepVariable::OmegaX => Qubit::X,
            SweepVariable::PhiY | SweepVariable::OmegaY => Qubit::Y,
        }
    }

    pub fn is_phase(self) -> bool {
        matches!(self, SweepVariable::PhiX | SweepVariable::PhiY)
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::PhiX => "phi_x",
            SweepVariable::PhiY => "phi_y",
            SweepVariable::OmegaX => "omega_x",
            SweepVariable::OmegaY => "omega_y",
        }
    }

    /// CSV columns describing a point on this axis.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            SweepVariable::PhiX => &["phi_x", "omega_x_ghz"],
            SweepVariable::PhiY => &["phi_y", "omega_y_ghz"],
            SweepVariable::OmegaX => &["omega_x_ghz"],
            SweepVariable::OmegaY => &["omega_y_ghz"],
        }
    }

    /// Root refinement width in axis units: 1 Hz for frequencies, and a
    /// phase step that moves the frequency by well under 1 Hz.
    pub fn root_tolerance(self) -> f64 {
        if self.is_phase() {
            1e-10
        } else {
            1e-9
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi_x" => Ok(SweepVariable::PhiX),
            "phi_y" => Ok(SweepVariable::PhiY),
            "omega_x" => Ok(SweepVariable::OmegaX),
            "omega_y" => Ok(SweepVariable::OmegaY),
            _ => Err(Error::Sweep(format!(
                "unknown sweep variable {s:?} (expected phi_x, phi_y, omega_x or omega_y)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(variable: SweepVariable, start: f64, stop: f64, points: usize) -> Self {
        Axis {
            variable,
            start,
            stop,
            points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Sweep(format!("{}: non-finite range", self.variable)));
        }
        match self.points {
            0 => Err(Error::Sweep(format!(
                "{}: at least one point required",
                self.variable
            ))),
            1 if self.start <= self.stop => Ok(()),
            _ if self.start < self.stop => Ok(()),
            _ => Err(Error::Sweep(format!(
                "{}: start {} must be below stop {}",
                self.variable, self.start, self.stop
            ))),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }

    /// Parses `variable:start:stop[:points]`.
    pub fn parse(s: &str, default_points: usize) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Sweep(format!(
                "expected variable:start:stop[:points], got {s:?}"
            )));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Sweep(format!("{t:?} is not a number")))
        };
        let points = match parts.get(3) {
            Some(t) => t
                .trim()
                .parse()
                .map_err(|_| Error::Sweep(format!("{t:?} is not a count")))?,
            None => default_points,
        };
        let axis = Axis::new(
            parts[0].trim().parse()?,
            num(parts[1])?,
            num(parts[2])?,
            points,
        );
        axis.validate()?;
        Ok(axis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub first: Axis,
    pub second: Option<Axis>,
}

impl SweepSpec {
    pub fn line(axis: Axis) -> Self {
        SweepSpec {
            first: axis,
            second: None,
        }
    }

    pub fn grid(first: Axis, second: Axis) -> Self {
        SweepSpec {
            first,
            second: Some(second),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.first.validate()?;
        if let Some(s) = &self.second {
            s.validate()?;
            if s.variable.qubit() == self.first.variable.qubit() {
                return Err(Error::Sweep(format!(
                    "{} and {} both control qubit {}",
                    self.first.variable,
                    s.variable,
                    s.variable.qubit()
                )));
            }
            if self.first.points.saturating_mul(s.points) > MAX_GRID_POINTS {
                return Err(Error::Sweep(format!(
                    "{}×{} grid exceeds {MAX_GRID_POINTS} points",
                    self.first.points, s.points
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.first.points * self.second.map_or(1, |s| s.points)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// How a qubit is placed when it is not swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitSetting {
    Phase(f64),
    Frequency(f64),
}

impl Default for QubitSetting {
    fn default() -> Self {
        QubitSetting::Phase(0.0)
    }
}

/// Circuit parameters plus the placement of both qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Base {
    pub params: CircuitParams,
    pub x: QubitSetting,
    pub y: QubitSetting,
}

impl Base {
    pub fn new(params: CircuitParams) -> Self {
        Base {
            params,
            x: QubitSetting::default(),
            y: QubitSetting::default(),
        }
    }

    pub fn with_omega_x(mut self, w: f64) -> Self {
        self.x = QubitSetting::Frequency(w);
        self
    }

    pub fn with_omega_y(mut self, w: f64) -> Self {
        self.y = QubitSetting::Frequency(w);
        self
    }

    /// Overrides the setting controlled by `variable`.
    pub fn set(mut self, variable: SweepVariable, value: f64) -> Self {
        let s = if variable.is_phase() {
            QubitSetting::Phase(value)
        } else {
            QubitSetting::Frequency(value)
        };
        match variable.qubit() {
            Qubit::X => self.x = s,
            Qubit::Y => self.y = s,
        }
        self
    }

    fn resolve(&self, q: Qubit) -> (f64, f64) {
        let (wmax, a) = (self.params.omega_max(q), self.params.alpha(q));
        let setting = match q {
            Qubit::X => self.x,
            Qubit::Y => self.y,
        };
        match setting {
            QubitSetting::Phase(phi) => (phi, flux_tuned_frequency(wmax, a, phi)),
            QubitSetting::Frequency(w) => (flux_for_frequency(wmax, a, w).unwrap_or(f64::NAN), w),
        }
    }

    pub fn grid_point(&self) -> GridPoint {
        let (phi_x, omega_x) = self.resolve(Qubit::X);
        let (phi_y, omega_y) = self.resolve(Qubit::Y);
        GridPoint {
            phi_x,
            phi_y,
            omega_x,
            omega_y,
            point: OperatingPoint::with_qubit_frequencies(&self.params, omega_x, omega_y),
        }
    }

    pub fn point_at(&self, variable: SweepVariable, value: f64) -> OperatingPoint {
        self.set(variable, value).grid_point().point
    }

    /// Every grid point, first axis varying slowest.
    pub fn grid(&self, spec: &SweepSpec) -> Result<Vec<GridPoint>> {
        spec.validate()?;
        let first = spec.first.values();
        let mut out = Vec::with_capacity(spec.len());
        for &u in &first {
            let b = self.set(spec.first.variable, u);
            match &spec.second {
                None => out.push(b.grid_point()),
                Some(ax) => {
                    for v in ax.values() {
                        out.push(b.set(ax.variable, v).grid_point());
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    /// NaN when a frequency is placed outside the flux branch.
    pub phi_x: f64,
    pub phi_y: f64,
    pub omega_x: f64,
    pub omega_y: f64,
    pub point: OperatingPoint,
}

impl GridPoint {
    pub fn coordinate(&self, variable: SweepVariable) -> f64 {
        match variable {
            SweepVariable::PhiX => self.phi_x,
            SweepVariable::PhiY => self.phi_y,
            SweepVariable::OmegaX => self.omega_x,
            SweepVariable::OmegaY => self.omega_y,
        }
    }

    fn axis_cells(&self, variable: SweepVariable) -> Vec<String> {
        match variable {
            SweepVariable::PhiX => vec![format_float(self.phi_x), format_float(self.omega_x)],
            SweepVariable::PhiY => vec![format_float(self.phi_y), format_float(self.omega_y)],
            SweepVariable::OmegaX => vec![format_float(self.omega_x)],
            SweepVariable::OmegaY => vec![format_float(self.omega_y)],
        }
    }
}

/// Per-point quantities a sweep can tabulate. Columns appear in the order
/// of this enum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    Gd,
    Gcr,
    Induced,
    Shifts,
    Zz,
    ZzCrossKerr,
    NumericZz,
}

impl Quantity {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::Gd => &["g_d_mhz"],
            Quantity::Gcr => &["g_cr_mhz"],
            Quantity::Induced => &["g_in_a_mhz", "g_in_b_mhz"],
            Quantity::Shifts => &[
                "omega_d_x_ghz",
                "omega_d_y_ghz",
                "delta_omega_x_mhz",
                "delta_omega_y_mhz",
                "omega_cr_x_ghz",
                "omega_cr_y_ghz",
            ],
            Quantity::Zz => &[
                "xi2_mhz",
                "xi3_mhz",
                "xi4s_mhz",
                "xi_total_mhz",
                "near_pole",
            ],
            Quantity::ZzCrossKerr => &[
                "xi2_mhz",
                "xi3_mhz",
                "xi4s_mhz",
                "xi4c0_mhz",
                "xi4c1_mhz",
                "xi_total_mhz",
                "near_pole",
            ],
            Quantity::NumericZz => &["xi_numeric_mhz", "numeric_unreliable"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    pub symmetric_third_order: bool,
    pub truncation: TruncationScheme,
    pub build: BuildOptions,
}

fn mhz(v: f64) -> String {
    format_float(v * 1e3)
}

fn nan_cells(n: usize) -> impl Iterator<Item = String> {
    std::iter::repeat_n(format_float(f64::NAN), n)
}

fn quantity_cells(q: Quantity, p: &OperatingPoint, opts: &SweepOptions) -> Vec<String> {
    let width = q.columns().len();
    let cells = match q {
        Quantity::Gd => effective_coupling_g_d(p).map(|g| vec![mhz(g.total)]),
        Quantity::Gcr => corrected_coupling_g_cr(p).map(|g| vec![mhz(g.total)]),
        Quantity::Induced => {
            effective_coupling_g_d(p).map(|g| vec![mhz(g.induced_a), mhz(g.induced_b)])
        }
        Quantity::Shifts => decouple(p).map(|d| {
            vec![
                format_float(d.omega_d_x),
                format_float(d.omega_d_y),
                mhz(d.delta_omega_x),
                mhz(d.delta_omega_y),
                format_float(d.omega_cr_x),
                format_float(d.omega_cr_y),
            ]
        }),
        Quantity::Zz | Quantity::ZzCrossKerr => {
            let ck = q == Quantity::ZzCrossKerr;
            let zo = ZzOptions {
                include_cross_kerr: ck,
                symmetric_third_order: opts.symmetric_third_order,
            };
            match zz_total(p, &zo) {
                Ok(b) => {
                    let mut v = vec![mhz(b.xi2.value), mhz(b.xi3()), mhz(b.xi4s())];
                    if ck {
                        v.push(mhz(b.xi4c0()));
                        v.push(mhz(b.xi4c1()));
                    }
                    v.push(mhz(b.xi_total));
                    v.push(format_bool(b.near_pole()));
                    Ok(v)
                }
                Err(e) => {
                    log::debug!("{e}");
                    return nan_cells(width - 1).chain([format_bool(true)]).collect();
                }
            }
        }
        Quantity::NumericZz => spectrum_at(p, &opts.truncation, &opts.build)
            .and_then(|s| zz_numeric(&s))
            .map(|z| vec![mhz(z.value), format_bool(z.unreliable)]),
    };
    cells.unwrap_or_else(|e| {
        log::debug!("{e}");
        nan_cells(width).collect()
    })
}

/// Tabulates `quantities` over the sweep. Rows follow grid order
/// regardless of how the evaluation is scheduled.
pub fn run_sweep(
    base: &Base,
    spec: &SweepSpec,
    quantities: &[Quantity],
    opts: &SweepOptions,
) -> Result<Table> {
    let mut qs: Vec<Quantity> = quantities.to_vec();
    qs.sort();
    qs.dedup();
    if qs.contains(&Quantity::Zz) && qs.contains(&Quantity::ZzCrossKerr) {
        return Err(Error::Sweep(
            "request either the plain or the cross-Kerr ZZ breakdown".into(),
        ));
    }
    let mut header: Vec<&str> = spec.first.variable.columns().to_vec();
    if let Some(s) = &spec.second {
        header.extend(s.variable.columns());
    }
    for q in &qs {
        header.extend(q.columns());
    }
    let points = base.grid(spec)?;
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|gp| {
            let mut row = gp.axis_cells(spec.first.variable);
            if let Some(s) = &spec.second {
                row.extend(gp.axis_cells(s.variable));
            }
            for &q in &qs {
                row.extend(quantity_cells(q, &gp.point, opts));
            }
            row
        })
        .collect();
    let mut table = Table::new(header);
    for r in rows {
        table.push(r);
    }
    Ok(table)
}
