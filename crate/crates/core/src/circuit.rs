//! Physical circuit description and its reduction to the frequency /
//! anharmonicity / coupling parameters every other module works with.
//!
//! All frequencies are ω/2π in GHz. Capacitances are in farads, inductances
//! in henries and Josephson / charging energies in GHz (E/h).

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix4;

use crate::error::{Error, Result};

pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Ratio below which one capacitance counts as "much smaller" than another
/// in the hierarchy check.
pub const HIERARCHY_RATIO: f64 = 0.2;

/// Below this E_J/E_C the transmon expansion is flagged.
pub const MIN_EJ_EC_RATIO: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resonator {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qubit {
    X,
    Y,
}

impl Resonator {
    pub const ALL: [Resonator; 2] = [Resonator::A, Resonator::B];

    pub fn other(self) -> Resonator {
        match self {
            Resonator::A => Resonator::B,
            Resonator::B => Resonator::A,
        }
    }
}

impl Qubit {
    pub const ALL: [Qubit; 2] = [Qubit::X, Qubit::Y];

    pub fn other(self) -> Qubit {
        match self {
            Qubit::X => Qubit::Y,
            Qubit::Y => Qubit::X,
        }
    }
}

impl fmt::Display for Resonator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resonator::A => "a",
            Resonator::B => "b",
        })
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Qubit::X => "x",
            Qubit::Y => "y",
        })
    }
}

/// Lumped capacitance network of the four-device circuit.
///
/// Each mutual capacitance is stored once, so `C_ηη′ = C_η′η` holds by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitanceNetwork {
    pub c_a: f64,
    pub c_b: f64,
    pub c_x: f64,
    pub c_y: f64,
    pub c_ab: f64,
    pub c_xy: f64,
    pub c_ax: f64,
    pub c_ay: f64,
    pub c_bx: f64,
    pub c_by: f64,
    pub l_a: f64,
    pub l_b: f64,
    /// Josephson energies E_J/h in GHz.
    pub ej_x: f64,
    pub ej_y: f64,
}

impl CapacitanceNetwork {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("C_a", self.c_a),
            ("C_b", self.c_b),
            ("C_x", self.c_x),
            ("C_y", self.c_y),
            ("L_a", self.l_a),
            ("L_b", self.l_b),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        let mutual = [
            ("C_ab", self.c_ab),
            ("C_xy", self.c_xy),
            ("C_ax", self.c_ax),
            ("C_ay", self.c_ay),
            ("C_bx", self.c_bx),
            ("C_by", self.c_by),
        ];
        for (name, v) in mutual {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        for (name, v) in [("EJ_x", self.ej_x), ("EJ_y", self.ej_y)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn self_capacitance_resonator(&self, r: Resonator) -> f64 {
        match r {
            Resonator::A => self.c_a,
            Resonator::B => self.c_b,
        }
    }

    pub fn self_capacitance_qubit(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.c_x,
            Qubit::Y => self.c_y,
        }
    }

    pub fn qubit_resonator_mutual(&self, r: Resonator, q: Qubit) -> f64 {
        match (r, q) {
            (Resonator::A, Qubit::X) => self.c_ax,
            (Resonator::A, Qubit::Y) => self.c_ay,
            (Resonator::B, Qubit::X) => self.c_bx,
            (Resonator::B, Qubit::Y) => self.c_by,
        }
    }

    /// Checks `C_ab ≪ C_xy ≪ C_λβ ≪ C_x, C_y ≪ C_a, C_b` and returns one
    /// message per violated link.
    pub fn hierarchy_warnings(&self) -> Vec<String> {
        let mutual = [self.c_ax, self.c_ay, self.c_bx, self.c_by];
        let min_mutual = mutual.iter().copied().fold(f64::INFINITY, f64::min);
        let max_mutual = mutual.iter().copied().fold(0.0, f64::max);
        let links = [
            ("C_ab", self.c_ab, "C_xy", self.c_xy),
            ("C_xy", self.c_xy, "min C_λβ", min_mutual),
            (
                "max C_λβ",
                max_mutual,
                "min(C_x, C_y)",
                self.c_x.min(self.c_y),
            ),
            (
                "max(C_x, C_y)",
                self.c_x.max(self.c_y),
                "min(C_a, C_b)",
                self.c_a.min(self.c_b),
            ),
        ];
        links
            .iter()
            .filter(|(_, small, _, large)| *small > HIERARCHY_RATIO * *large)
            .map(|(s, sv, l, lv)| {
                format!("hierarchy violated: {s} = {sv:.3e} not ≪ {l} = {lv:.3e}")
            })
            .collect()
    }

    pub fn satisfies_hierarchy(&self) -> bool {
        self.hierarchy_warnings().is_empty()
    }

    /// The Maxwell capacitance matrix in device order (a, b, x, y).
    pub fn capacitance_matrix(&self) -> Matrix4<f64> {
        let c11 = self.c_a + self.c_ab + self.c_ax + self.c_ay;
        let c22 = self.c_ab + self.c_b + self.c_bx + self.c_by;
        let c33 = self.c_ax + self.c_bx + self.c_x + self.c_xy;
        let c44 = self.c_ay + self.c_by + self.c_xy + self.c_y;
        Matrix4::new(
            c11, -self.c_ab, -self.c_ax, -self.c_ay, -self.c_ab, c22, -self.c_bx, -self.c_by,
            -self.c_ax, -self.c_bx, c33, -self.c_xy, -self.c_ay, -self.c_by, -self.c_xy, c44,
        )
    }

    /// Scales every mutual capacitance by `s`, leaving self capacitances,
    /// inductances and junctions untouched.
    pub fn with_mutuals_scaled(&self, s: f64) -> CapacitanceNetwork {
        CapacitanceNetwork {
            c_ab: self.c_ab * s,
            c_xy: self.c_xy * s,
            c_ax: self.c_ax * s,
            c_ay: self.c_ay * s,
            c_bx: self.c_bx * s,
            c_by: self.c_by * s,
            ..*self
        }
    }
}

/// How coupling strengths respond when the qubit frequencies are flux tuned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingModel {
    /// g values stay at their quoted values for every bias.
    #[default]
    Fixed,
    /// g_λβ ∝ √(ω_λ ω_β): applied when the parameters were derived from a
    /// capacitance network.
    Capacitive,
}

/// Frequencies, anharmonicities and couplings of the four devices (GHz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    pub omega_a: f64,
    pub omega_b: f64,
    pub omega_x_max: f64,
    pub omega_y_max: f64,
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub g_ax: f64,
    pub g_ay: f64,
    pub g_bx: f64,
    pub g_by: f64,
    pub g_xy: f64,
    pub g_ab: f64,
    pub coupling_model: CouplingModel,
}

impl CircuitParams {
    /// The parameter set quoted for the energy-level diagram and reused by
    /// every later analysis: ω_a = 4.10, ω_b = 5.20, ω_x^max = 4.56,
    /// ω_y^max = 5.12 GHz, α_x = −175, α_y = −195 MHz, g_aβ = 32, g_bβ = 30,
    /// g_xy = 1.0, g_ab = 0.1 MHz.
    pub fn reference() -> Self {
        CircuitParams {
            omega_a: 4.10,
            omega_b: 5.20,
            omega_x_max: 4.56,
            omega_y_max: 5.12,
            alpha_x: -0.175,
            alpha_y: -0.195,
            g_ax: 0.032,
            g_ay: 0.032,
            g_bx: 0.030,
            g_by: 0.030,
            g_xy: 0.001,
            g_ab: 0.0001,
            coupling_model: CouplingModel::Fixed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("omega_x_max", self.omega_x_max),
            ("omega_y_max", self.omega_y_max),
            ("alpha_x", self.alpha_x),
            ("alpha_y", self.alpha_y),
            ("g_ax", self.g_ax),
            ("g_ay", self.g_ay),
            ("g_bx", self.g_bx),
            ("g_by", self.g_by),
            ("g_xy", self.g_xy),
            ("g_ab", self.g_ab),
        ];
        if let Some((name, v)) = all.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain(format!("{name} is not finite ({v})")));
        }
        for (name, v) in [("alpha_x", self.alpha_x), ("alpha_y", self.alpha_y)] {
            if v >= 0.0 {
                return Err(Error::Domain(format!("{name} must be negative, got {v}")));
            }
        }
        for (name, v) in &all[6..] {
            if *v < 0.0 {
                return Err(Error::Domain(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        for (name, v) in &all[..4] {
            if *v <= 0.0 {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Non-fatal observations: frequency ordering at zero flux and the weak
    /// direct-coupling assumption.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.omega_a < self.omega_x_max
            && self.omega_x_max <= self.omega_y_max
            && self.omega_y_max < self.omega_b)
        {
            out.push(format!(
                "zero-flux ordering ω_a < ω_x ≤ ω_y < ω_b does not hold ({:.4}, {:.4}, {:.4}, {:.4})",
                self.omega_a, self.omega_x_max, self.omega_y_max, self.omega_b
            ));
        }
        let min_g = [self.g_ax, self.g_ay, self.g_bx, self.g_by]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if self.g_xy > HIERARCHY_RATIO * min_g || self.g_ab > HIERARCHY_RATIO * min_g {
            out.push("direct couplings g_xy / g_ab are not ≪ g_λβ".to_string());
        }
        out
    }

    pub fn omega_resonator(&self, r: Resonator) -> f64 {
        match r {
            Resonator::A => self.omega_a,
            Resonator::B => self.omega_b,
        }
    }

    pub fn omega_max(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.omega_x_max,
            Qubit::Y => self.omega_y_max,
        }
    }

    pub fn alpha(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.alpha_x,
            Qubit::Y => self.alpha_y,
        }
    }

    pub fn g(&self, r: Resonator, q: Qubit) -> f64 {
        match (r, q) {
            (Resonator::A, Qubit::X) => self.g_ax,
            (Resonator::A, Qubit::Y) => self.g_ay,
            (Resonator::B, Qubit::X) => self.g_bx,
            (Resonator::B, Qubit::Y) => self.g_by,
        }
    }
}

/// Dimensionless phase parameters controlling the two qubit frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxBias {
    pub phi_x: f64,
    pub phi_y: f64,
}

impl FluxBias {
    pub fn new(phi_x: f64, phi_y: f64) -> Self {
        FluxBias { phi_x, phi_y }
    }

    pub fn phi(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.phi_x,
            Qubit::Y => self.phi_y,
        }
    }
}

/// Charging energy e²/2C in joules.
pub fn charging_energy(capacitance: f64) -> Result<f64> {
    if !(capacitance.is_finite() && capacitance > 0.0) {
        return Err(Error::Domain(format!(
            "capacitance must be positive, got {capacitance}"
        )));
    }
    Ok(ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * capacitance))
}

/// Charging energy E_C/h in GHz.
pub fn charging_energy_ghz(capacitance: f64) -> Result<f64> {
    Ok(charging_energy(capacitance)? / PLANCK * 1e-9)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmonFrequency {
    /// 0→1 transition frequency (GHz).
    pub omega: f64,
    /// Anharmonicity −E_C/h (GHz).
    pub alpha: f64,
    pub warning: Option<String>,
}

/// ω = √(8 E_J E_C) − E_C with both energies in GHz.
pub fn qubit_frequency(ej: f64, ec: f64) -> Result<TransmonFrequency> {
    if !(ej.is_finite() && ec.is_finite()) || ej < 0.0 || ec < 0.0 {
        return Err(Error::Domain(format!(
            "Josephson and charging energies must be non-negative (EJ={ej}, EC={ec})"
        )));
    }
    let omega = (8.0 * ej * ec).sqrt() - ec;
    let warning = if ec == 0.0 {
        None
    } else if ej / ec < MIN_EJ_EC_RATIO {
        Some(format!(
            "EJ/EC = {:.2} is outside the transmon regime (≥ {MIN_EJ_EC_RATIO})",
            ej / ec
        ))
    } else {
        None
    };
    Ok(TransmonFrequency {
        omega,
        alpha: -ec,
        warning,
    })
}

/// Closed-form inverse of [`qubit_frequency`]: the E_J giving `omega` at
/// charging energy `ec`.
pub fn josephson_energy_for(omega: f64, ec: f64) -> Result<f64> {
    if !(ec > 0.0 && ec.is_finite()) || !omega.is_finite() || omega + ec < 0.0 {
        return Err(Error::Domain(format!(
            "no transmon branch for ω={omega}, EC={ec}"
        )));
    }
    Ok((omega + ec).powi(2) / (8.0 * ec))
}

/// 1/(2π√(LC)) in GHz.
pub fn resonator_frequency(inductance: f64, capacitance: f64) -> Result<f64> {
    if !(inductance.is_finite() && inductance > 0.0 && capacitance.is_finite() && capacitance > 0.0)
    {
        return Err(Error::Domain(format!(
            "inductance and capacitance must be positive (L={inductance}, C={capacitance})"
        )));
    }
    Ok(1.0 / (2.0 * PI * (inductance * capacitance).sqrt()) * 1e-9)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    pub params: CircuitParams,
    pub warnings: Vec<String>,
}

/// Frequencies from the LC / transmon relations and couplings from the
/// capacitance ratios, including the enhancement brackets of the direct
/// couplings.
pub fn couplings_from_network(net: &CapacitanceNetwork) -> Result<NetworkParams> {
    net.validate()?;
    let mut warnings = net.hierarchy_warnings();

    let omega_a = resonator_frequency(net.l_a, net.c_a)?;
    let omega_b = resonator_frequency(net.l_b, net.c_b)?;
    let tx = qubit_frequency(net.ej_x, charging_energy_ghz(net.c_x)?)?;
    let ty = qubit_frequency(net.ej_y, charging_energy_ghz(net.c_y)?)?;
    warnings.extend(tx.warning.iter().map(|w| format!("qubit x: {w}")));
    warnings.extend(ty.warning.iter().map(|w| format!("qubit y: {w}")));

    let omega_r = |r| match r {
        Resonator::A => omega_a,
        Resonator::B => omega_b,
    };
    let omega_q = |q| match q {
        Qubit::X => tx.omega,
        Qubit::Y => ty.omega,
    };
    let g_rq = |r: Resonator, q: Qubit| {
        let c_r = net.self_capacitance_resonator(r);
        let c_q = net.self_capacitance_qubit(q);
        0.5 * net.qubit_resonator_mutual(r, q) / (c_r * c_q).sqrt()
            * (omega_r(r) * omega_q(q)).abs().sqrt()
    };

    // Direct couplings carry the enhancement bracket; written in the
    // expanded form so a zero direct capacitance is not a division by zero.
    let g_ab = 0.5 * (net.c_ab + net.c_ax * net.c_bx / net.c_x + net.c_ay * net.c_by / net.c_y)
        / (net.c_a * net.c_b).sqrt()
        * (omega_a * omega_b).sqrt();
    let g_xy = 0.5 * (net.c_xy + net.c_ax * net.c_ay / net.c_a + net.c_bx * net.c_by / net.c_b)
        / (net.c_x * net.c_y).sqrt()
        * (tx.omega * ty.omega).abs().sqrt();

    let params = CircuitParams {
        omega_a,
        omega_b,
        omega_x_max: tx.omega,
        omega_y_max: ty.omega,
        alpha_x: tx.alpha,
        alpha_y: ty.alpha,
        g_ax: g_rq(Resonator::A, Qubit::X),
        g_ay: g_rq(Resonator::A, Qubit::Y),
        g_bx: g_rq(Resonator::B, Qubit::X),
        g_by: g_rq(Resonator::B, Qubit::Y),
        g_xy,
        g_ab,
        coupling_model: CouplingModel::Capacitive,
    };
    warnings.extend(params.warnings());
    Ok(NetworkParams { params, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseMode {
    Exact,
    /// Leading-order adjugate entries over ‖C‖ ≈ C_a C_b C_x C_y, valid
    /// under the capacitance hierarchy.
    Approximate,
}

/// Inverse capacitance matrix in device order (a, b, x, y).
pub fn capacitance_inverse(net: &CapacitanceNetwork, mode: InverseMode) -> Result<Matrix4<f64>> {
    net.validate()?;
    let c = net.capacitance_matrix();
    let sv = c.singular_values();
    let condition = sv.max() / sv.min();
    if !condition.is_finite() || condition > 1e14 {
        return Err(Error::Singular { condition });
    }
    match mode {
        InverseMode::Exact => c.try_inverse().ok_or(Error::Singular { condition }),
        InverseMode::Approximate => {
            let (ca, cb, cx, cy) = (net.c_a, net.c_b, net.c_x, net.c_y);
            let det = ca * cb * cx * cy;
            let a12 = net.c_ab * cx * cy + net.c_ax * net.c_bx * cy + net.c_ay * net.c_by * cx;
            let a13 = cb * cy * net.c_ax;
            let a14 = cb * cx * net.c_ay;
            let a23 = ca * cy * net.c_bx;
            let a24 = ca * cx * net.c_by;
            let a34 = net.c_xy * ca * cb + ca * net.c_bx * net.c_by + cb * net.c_ax * net.c_ay;
            let adj = Matrix4::new(
                cb * cx * cy,
                a12,
                a13,
                a14,
                a12,
                ca * cx * cy,
                a23,
                a24,
                a13,
                a23,
                ca * cb * cy,
                a34,
                a14,
                a24,
                a34,
                ca * cb * cx,
            );
            Ok(adj / det)
        }
    }
}

/// Split-transmon tuning law ω(φ) = (ω_max + |α|)√|cos φ| − |α|.
pub fn flux_tuned_frequency(omega_max: f64, alpha: f64, phi: f64) -> f64 {
    (omega_max + alpha.abs()) * phi.cos().abs().sqrt() - alpha.abs()
}

/// The phase in [0, π/2] at which [`flux_tuned_frequency`] reaches `omega`,
/// or `None` when `omega` is above the sweet spot or below the branch floor.
pub fn flux_for_frequency(omega_max: f64, alpha: f64, omega: f64) -> Option<f64> {
    let top = omega_max + alpha.abs();
    let ratio = (omega + alpha.abs()) / top;
    if !(0.0..=1.0).contains(&ratio) || !ratio.is_finite() {
        return None;
    }
    Some((ratio * ratio).acos())
}

/// Both qubit frequencies at a flux bias.
pub fn qubit_frequencies(params: &CircuitParams, bias: &FluxBias) -> (f64, f64) {
    (
        flux_tuned_frequency(params.omega_x_max, params.alpha_x, bias.phi_x),
        flux_tuned_frequency(params.omega_y_max, params.alpha_y, bias.phi_y),
    )
}

/// A fully resolved working point: qubit frequencies fixed and couplings
/// adjusted to them. Every analytic and numeric routine consumes this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub omega_a: f64,
    pub omega_b: f64,
    pub omega_x: f64,
    pub omega_y: f64,
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub g_ax: f64,
    pub g_ay: f64,
    pub g_bx: f64,
    pub g_by: f64,
    pub g_xy: f64,
    pub g_ab: f64,
}

impl OperatingPoint {
    pub fn from_bias(params: &CircuitParams, bias: &FluxBias) -> Self {
        let (wx, wy) = qubit_frequencies(params, bias);
        Self::with_qubit_frequencies(params, wx, wy)
    }

    /// Places the qubits at explicit frequencies instead of going through the
    /// flux relation.
    pub fn with_qubit_frequencies(params: &CircuitParams, omega_x: f64, omega_y: f64) -> Self {
        let (sx, sy) = match params.coupling_model {
            CouplingModel::Fixed => (1.0, 1.0),
            CouplingModel::Capacitive => (
                (omega_x / params.omega_x_max).abs().sqrt(),
                (omega_y / params.omega_y_max).abs().sqrt(),
            ),
        };
        OperatingPoint {
            omega_a: params.omega_a,
            omega_b: params.omega_b,
            omega_x,
            omega_y,
            alpha_x: params.alpha_x,
            alpha_y: params.alpha_y,
            g_ax: params.g_ax * sx,
            g_ay: params.g_ay * sy,
            g_bx: params.g_bx * sx,
            g_by: params.g_by * sy,
            g_xy: params.g_xy * sx * sy,
            g_ab: params.g_ab,
        }
    }

    pub fn omega_resonator(&self, r: Resonator) -> f64 {
        match r {
            Resonator::A => self.omega_a,
            Resonator::B => self.omega_b,
        }
    }

    pub fn omega_qubit(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.omega_x,
            Qubit::Y => self.omega_y,
        }
    }

    pub fn alpha(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.alpha_x,
            Qubit::Y => self.alpha_y,
        }
    }

    pub fn g(&self, r: Resonator, q: Qubit) -> f64 {
        match (r, q) {
            (Resonator::A, Qubit::X) => self.g_ax,
            (Resonator::A, Qubit::Y) => self.g_ay,
            (Resonator::B, Qubit::X) => self.g_bx,
            (Resonator::B, Qubit::Y) => self.g_by,
        }
    }

    /// Multiplies the four qubit–resonator couplings by `s`.
    pub fn with_qubit_resonator_scale(&self, s: f64) -> Self {
        OperatingPoint {
            g_ax: self.g_ax * s,
            g_ay: self.g_ay * s,
            g_bx: self.g_bx * s,
            g_by: self.g_by * s,
            ..*self
        }
    }

    /// Exchanges the roles of the two qubits.
    pub fn swapped_qubits(&self) -> Self {
        OperatingPoint {
            omega_x: self.omega_y,
            omega_y: self.omega_x,
            alpha_x: self.alpha_y,
            alpha_y: self.alpha_x,
            g_ax: self.g_ay,
            g_ay: self.g_ax,
            g_bx: self.g_by,
            g_by: self.g_bx,
            ..*self
        }
    }

    /// Exchanges the roles of the two resonators.
    pub fn swapped_resonators(&self) -> Self {
        OperatingPoint {
            omega_a: self.omega_b,
            omega_b: self.omega_a,
            g_ax: self.g_bx,
            g_bx: self.g_ax,
            g_ay: self.g_by,
            g_by: self.g_ay,
            ..*self
        }
    }
}
