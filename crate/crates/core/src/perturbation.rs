//! Second-order Schrieffer–Wolff decoupling of the qubit–resonator
//! couplings, the anharmonic corrections on top of it, and the corrected
//! effective qubit–qubit coupling.
//!
//! Detunings follow Δ_λβ = ω_β − ω_λ and Σ_λβ = ω_β + ω_λ with λ a resonator
//! and β a qubit.

use crate::circuit::{OperatingPoint, Qubit, Resonator};
use crate::error::Result;
use crate::pole::{Guarded, PoleGuard};

/// g/|Δ| below this counts as dispersive.
pub const DISPERSIVE_RATIO: f64 = 0.25;

fn ri(r: Resonator) -> usize {
    match r {
        Resonator::A => 0,
        Resonator::B => 1,
    }
}

fn qi(q: Qubit) -> usize {
    match q {
        Qubit::X => 0,
        Qubit::Y => 1,
    }
}

fn label(kind: &str, r: Resonator, q: Qubit) -> String {
    format!("{kind}_{r}{q}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningSet {
    delta: [[f64; 2]; 2],
    sigma: [[f64; 2]; 2],
    dispersive: [[bool; 2]; 2],
    pub delta_xy: f64,
    pub delta_ab: f64,
}

impl DetuningSet {
    pub fn new(p: &OperatingPoint) -> Self {
        Self::with_qubit_frequencies(p, p.omega_x, p.omega_y)
    }

    /// Detunings with the qubit frequencies replaced by `omega_x`, `omega_y`.
    pub fn with_qubit_frequencies(p: &OperatingPoint, omega_x: f64, omega_y: f64) -> Self {
        let wq = [omega_x, omega_y];
        let mut d = DetuningSet {
            delta: [[0.0; 2]; 2],
            sigma: [[0.0; 2]; 2],
            dispersive: [[false; 2]; 2],
            delta_xy: omega_y - omega_x,
            delta_ab: p.omega_b - p.omega_a,
        };
        for r in Resonator::ALL {
            for q in Qubit::ALL {
                let (i, j) = (ri(r), qi(q));
                d.delta[i][j] = wq[j] - p.omega_resonator(r);
                d.sigma[i][j] = wq[j] + p.omega_resonator(r);
                d.dispersive[i][j] = p.g(r, q) < DISPERSIVE_RATIO * d.delta[i][j].abs();
            }
        }
        d
    }

    pub fn delta(&self, r: Resonator, q: Qubit) -> f64 {
        self.delta[ri(r)][qi(q)]
    }

    pub fn sigma(&self, r: Resonator, q: Qubit) -> f64 {
        self.sigma[ri(r)][qi(q)]
    }

    pub fn is_dispersive(&self, r: Resonator, q: Qubit) -> bool {
        self.dispersive[ri(r)][qi(q)]
    }

    pub fn all_dispersive(&self) -> bool {
        self.dispersive.iter().flatten().all(|&d| d)
    }
}

/// g²(1/Δ − 1/Σ) for one pair.
fn pair_shift(
    p: &OperatingPoint,
    d: &DetuningSet,
    r: Resonator,
    q: Qubit,
    guard: &mut PoleGuard,
) -> Result<f64> {
    let g = p.g(r, q);
    let inv_d = guard.inv(d.delta(r, q), &label("Δ", r, q))?;
    let inv_s = guard.inv(d.sigma(r, q), &label("Σ", r, q))?;
    Ok(g * g * (inv_d - inv_s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoupledFrequencies {
    pub omega_d_a: f64,
    pub omega_d_b: f64,
    pub omega_d_x: f64,
    pub omega_d_y: f64,
    pub near_pole: bool,
}

impl DecoupledFrequencies {
    pub fn qubit(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.omega_d_x,
            Qubit::Y => self.omega_d_y,
        }
    }

    pub fn resonator(&self, r: Resonator) -> f64 {
        match r {
            Resonator::A => self.omega_d_a,
            Resonator::B => self.omega_d_b,
        }
    }
}

/// ω_β + Σ_λ g²(1/Δ − 1/Σ) for qubits, ω_λ − Σ_β g²(1/Δ − 1/Σ) for
/// resonators.
pub fn decoupled_frequencies(p: &OperatingPoint) -> Result<DecoupledFrequencies> {
    let d = DetuningSet::new(p);
    let mut guard = PoleGuard::new("decoupled frequency");
    let mut shift = [[0.0; 2]; 2];
    for r in Resonator::ALL {
        for q in Qubit::ALL {
            shift[ri(r)][qi(q)] = pair_shift(p, &d, r, q, &mut guard)?;
        }
    }
    Ok(DecoupledFrequencies {
        omega_d_a: p.omega_a - shift[0][0] - shift[0][1],
        omega_d_b: p.omega_b - shift[1][0] - shift[1][1],
        omega_d_x: p.omega_x + shift[0][0] + shift[1][0],
        omega_d_y: p.omega_y + shift[0][1] + shift[1][1],
        near_pole: guard.near_pole(),
    })
}

/// Effective qubit–qubit coupling with its split by intermediating
/// resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoupling {
    pub total: f64,
    pub induced_a: f64,
    pub induced_b: f64,
    pub near_pole: bool,
}

impl EffectiveCoupling {
    pub fn induced(&self, r: Resonator) -> f64 {
        match r {
            Resonator::A => self.induced_a,
            Resonator::B => self.induced_b,
        }
    }
}

/// g_xy + ½ Σ_λ Σ_β g_λx g_λy (1/Δ_λβ − 1/Σ_λβ), evaluated at the given
/// qubit frequencies.
pub fn effective_coupling_at(
    p: &OperatingPoint,
    omega_x: f64,
    omega_y: f64,
    term: &'static str,
) -> Result<EffectiveCoupling> {
    let d = DetuningSet::with_qubit_frequencies(p, omega_x, omega_y);
    let mut guard = PoleGuard::new(term);
    let mut induced = [0.0; 2];
    for r in Resonator::ALL {
        let gg = p.g(r, Qubit::X) * p.g(r, Qubit::Y);
        for q in Qubit::ALL {
            let inv_d = guard.inv(d.delta(r, q), &label("Δ", r, q))?;
            let inv_s = guard.inv(d.sigma(r, q), &label("Σ", r, q))?;
            induced[ri(r)] += 0.5 * gg * (inv_d - inv_s);
        }
    }
    Ok(EffectiveCoupling {
        total: p.g_xy + induced[0] + induced[1],
        induced_a: induced[0],
        induced_b: induced[1],
        near_pole: guard.near_pole(),
    })
}

pub fn effective_coupling_g_d(p: &OperatingPoint) -> Result<EffectiveCoupling> {
    effective_coupling_at(p, p.omega_x, p.omega_y, "g_d")
}

/// g_ab + ½ Σ_β g_aβ g_bβ (1/Δ_bβ + 1/Δ_aβ − 1/Σ_bβ − 1/Σ_aβ).
pub fn resonator_effective_coupling(p: &OperatingPoint) -> Result<Guarded> {
    let d = DetuningSet::new(p);
    let mut guard = PoleGuard::new("g_d_ab");
    let mut total = p.g_ab;
    for q in Qubit::ALL {
        let gg = p.g(Resonator::A, q) * p.g(Resonator::B, q);
        let mut bracket = 0.0;
        for r in Resonator::ALL {
            bracket += guard.inv(d.delta(r, q), &label("Δ", r, q))?;
            bracket -= guard.inv(d.sigma(r, q), &label("Σ", r, q))?;
        }
        total += 0.5 * gg * bracket;
    }
    Ok(Guarded::new(total, &guard))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighLevelShift {
    pub delta_omega_x: f64,
    pub delta_omega_y: f64,
    pub omega_cr_x: f64,
    pub omega_cr_y: f64,
    pub near_pole: bool,
}

impl HighLevelShift {
    pub fn delta_omega(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.delta_omega_x,
            Qubit::Y => self.delta_omega_y,
        }
    }

    pub fn omega_cr(&self, q: Qubit) -> f64 {
        match q {
            Qubit::X => self.omega_cr_x,
            Qubit::Y => self.omega_cr_y,
        }
    }
}

/// Δω_β = Σ_λ (g²/Δ² + g²/Σ²) α_β, and ω_cr = ω_d + Δω.
pub fn high_excited_shift(p: &OperatingPoint) -> Result<HighLevelShift> {
    let dec = decoupled_frequencies(p)?;
    let d = DetuningSet::new(p);
    let mut guard = PoleGuard::new("high-level shift");
    let mut dw = [0.0; 2];
    for q in Qubit::ALL {
        for r in Resonator::ALL {
            let g2 = p.g(r, q).powi(2);
            let inv_d = guard.inv(d.delta(r, q), &label("Δ", r, q))?;
            let inv_s = guard.inv(d.sigma(r, q), &label("Σ", r, q))?;
            dw[qi(q)] += g2 * (inv_d * inv_d + inv_s * inv_s) * p.alpha(q);
        }
    }
    Ok(HighLevelShift {
        delta_omega_x: dw[0],
        delta_omega_y: dw[1],
        omega_cr_x: dec.omega_d_x + dw[0],
        omega_cr_y: dec.omega_d_y + dw[1],
        near_pole: guard.near_pole() || dec.near_pole,
    })
}

/// The effective coupling re-evaluated with the corrected qubit
/// frequencies in the detunings; resonator frequencies stay bare.
pub fn corrected_coupling_g_cr(p: &OperatingPoint) -> Result<EffectiveCoupling> {
    let s = high_excited_shift(p)?;
    let mut out = effective_coupling_at(p, s.omega_cr_x, s.omega_cr_y, "g_cr")?;
    out.near_pole |= s.near_pole;
    Ok(out)
}

/// Every decoupled quantity at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoupledParams {
    pub omega_d_a: f64,
    pub omega_d_b: f64,
    pub omega_d_x: f64,
    pub omega_d_y: f64,
    pub g_d_xy: f64,
    pub g_in_a: f64,
    pub g_in_b: f64,
    pub g_d_ab: f64,
    pub delta_omega_x: f64,
    pub delta_omega_y: f64,
    pub omega_cr_x: f64,
    pub omega_cr_y: f64,
    pub g_cr_xy: f64,
    pub near_pole: bool,
}

pub fn decouple(p: &OperatingPoint) -> Result<DecoupledParams> {
    let f = decoupled_frequencies(p)?;
    let gd = effective_coupling_g_d(p)?;
    let gab = resonator_effective_coupling(p)?;
    let s = high_excited_shift(p)?;
    let gcr = corrected_coupling_g_cr(p)?;
    Ok(DecoupledParams {
        omega_d_a: f.omega_d_a,
        omega_d_b: f.omega_d_b,
        omega_d_x: f.omega_d_x,
        omega_d_y: f.omega_d_y,
        g_d_xy: gd.total,
        g_in_a: gd.induced_a,
        g_in_b: gd.induced_b,
        g_d_ab: gab.value,
        delta_omega_x: s.delta_omega_x,
        delta_omega_y: s.delta_omega_y,
        omega_cr_x: s.omega_cr_x,
        omega_cr_y: s.omega_cr_y,
        g_cr_xy: gcr.total,
        near_pole: f.near_pole || gd.near_pole || gab.near_pole || s.near_pole || gcr.near_pole,
    })
}

/// Coefficients of one (resonator, qubit) pair in the transformed Duffing
/// term of qubit β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairNonlinearity {
    /// g²α/Σ² − g²α/Δ² on a†a†aa.
    pub self_kerr: f64,
    /// 2g²α/Δ² on c†c a†a.
    pub cross_kerr_normal: f64,
    /// 2g²α/Σ² on c c† a†a.
    pub cross_kerr_anti: f64,
    /// g²α/(2Δ²) on c†c† aa and its conjugate.
    pub two_photon_exchange: f64,
    /// gα/Δ on c† a†aa and its conjugate.
    pub assisted_exchange: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearTerms {
    /// Indexed `[resonator][qubit]` as (a, b) × (x, y).
    pub pairs: [[PairNonlinearity; 2]; 2],
    pub near_pole: bool,
}

impl NonlinearTerms {
    pub fn pair(&self, r: Resonator, q: Qubit) -> &PairNonlinearity {
        &self.pairs[ri(r)][qi(q)]
    }

    /// Total self-Kerr correction of qubit `q`.
    pub fn self_kerr(&self, q: Qubit) -> f64 {
        Resonator::ALL
            .iter()
            .map(|&r| self.pair(r, q).self_kerr)
            .sum()
    }

    /// Qubit frequency shift left by the cross-Kerr terms when the
    /// operators c†c and c c† are replaced by the given expectation values.
    pub fn photon_reduced_shift(&self, q: Qubit, normal: f64, anti: f64) -> f64 {
        Resonator::ALL
            .iter()
            .map(|&r| {
                let c = self.pair(r, q);
                normal * c.cross_kerr_normal + anti * c.cross_kerr_anti
            })
            .sum()
    }
}

pub fn transformed_nonlinear_terms(p: &OperatingPoint) -> Result<NonlinearTerms> {
    let d = DetuningSet::new(p);
    let mut guard = PoleGuard::new("nonlinear terms");
    let zero = PairNonlinearity {
        self_kerr: 0.0,
        cross_kerr_normal: 0.0,
        cross_kerr_anti: 0.0,
        two_photon_exchange: 0.0,
        assisted_exchange: 0.0,
    };
    let mut pairs = [[zero; 2]; 2];
    for r in Resonator::ALL {
        for q in Qubit::ALL {
            let (g, a) = (p.g(r, q), p.alpha(q));
            let inv_d = guard.inv(d.delta(r, q), &label("Δ", r, q))?;
            let inv_s = guard.inv(d.sigma(r, q), &label("Σ", r, q))?;
            let g2a = g * g * a;
            pairs[ri(r)][qi(q)] = PairNonlinearity {
                self_kerr: g2a * (inv_s * inv_s - inv_d * inv_d),
                cross_kerr_normal: 2.0 * g2a * inv_d * inv_d,
                cross_kerr_anti: 2.0 * g2a * inv_s * inv_s,
                two_photon_exchange: 0.5 * g2a * inv_d * inv_d,
                assisted_exchange: g * a * inv_d,
            };
        }
    }
    Ok(NonlinearTerms {
        pairs,
        near_pole: guard.near_pole(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveShift {
    /// Lamb-type shift χ^{j−1,j} of level j (zero for j = 0).
    pub kappa: f64,
    /// ac-Stark shift χ^{j−1,j} − χ^{j,j+1}.
    pub chi: f64,
    pub near_pole: bool,
}

/// χ^{j−1,j} = j g² / (Δ + (j − 1) α) for the transition j−1 → j, or zero
/// when either level lies outside the `n_levels` retained qubit levels.
fn transition_shift(
    p: &OperatingPoint,
    d: &DetuningSet,
    r: Resonator,
    q: Qubit,
    j: usize,
    n_levels: usize,
    guard: &mut PoleGuard,
) -> Result<f64> {
    if j == 0 || j >= n_levels {
        return Ok(0.0);
    }
    let den = d.delta(r, q) + (j as f64 - 1.0) * p.alpha(q);
    let inv = guard.inv(den, &format!("Δ_{r}{q} + {}α_{q}", j - 1))?;
    Ok(j as f64 * p.g(r, q).powi(2) * inv)
}

/// Dispersive shifts of qubit level `j` from resonator `r`, for a qubit
/// modelled with `n_levels` levels (2 gives the two-level limit).
pub fn dispersive_shifts_chi(
    p: &OperatingPoint,
    r: Resonator,
    q: Qubit,
    j: usize,
    n_levels: usize,
) -> Result<DispersiveShift> {
    let d = DetuningSet::new(p);
    let mut guard = PoleGuard::new("dispersive shift");
    let lower = transition_shift(p, &d, r, q, j, n_levels, &mut guard)?;
    let upper = transition_shift(p, &d, r, q, j + 1, n_levels, &mut guard)?;
    Ok(DispersiveShift {
        kappa: lower,
        chi: lower - upper,
        near_pole: guard.near_pole(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitParams;
    use crate::error::Error;

    const MHZ: f64 = 1e-3;

    fn at(wx: f64, wy: f64) -> OperatingPoint {
        OperatingPoint::with_qubit_frequencies(&CircuitParams::reference(), wx, wy)
    }

    fn no_qubit_resonator(p: OperatingPoint) -> OperatingPoint {
        p.with_qubit_resonator_scale(0.0)
    }

    #[test]
    fn zero_coupling_identities() {
        let p = no_qubit_resonator(at(4.56, 4.8));
        let d = decouple(&p).unwrap();
        assert_eq!(d.omega_d_x, p.omega_x);
        assert_eq!(d.omega_d_y, p.omega_y);
        assert_eq!(d.omega_d_a, p.omega_a);
        assert_eq!(d.omega_d_b, p.omega_b);
        assert_eq!(d.delta_omega_x, 0.0);
        assert_eq!(d.g_d_xy, p.g_xy);
        assert_eq!(d.g_cr_xy, p.g_xy);
        assert_eq!(d.g_d_ab, p.g_ab);
    }

    #[test]
    fn single_pair_frequency_shift() {
        // g²_ax(1/Δ_ax − 1/Σ_ax) = 1.024/0.46 − 1.024/8.66 MHz.
        let mut p = no_qubit_resonator(at(4.56, 5.12));
        p.g_ax = 0.032;
        let f = decoupled_frequencies(&p).unwrap();
        let expect = 0.032f64.powi(2) * (1.0 / 0.46 - 1.0 / 8.66);
        assert!((f.omega_d_x - 4.56 - expect).abs() < 1e-15);
        assert!((expect / MHZ - 2.108).abs() < 1e-3);
        // What the qubit gains the resonator loses.
        assert!((f.omega_d_a - 4.10 + expect).abs() < 1e-15);
    }

    #[test]
    fn induced_split_at_equal_frequencies() {
        let p = OperatingPoint {
            g_xy: 0.0,
            ..at(4.56, 4.56)
        };
        let g = effective_coupling_g_d(&p).unwrap();
        assert!(
            (g.induced_a / MHZ - 2.108).abs() < 2e-3,
            "{}",
            g.induced_a / MHZ
        );
        assert!(
            (g.induced_b / MHZ + 1.499).abs() < 2e-3,
            "{}",
            g.induced_b / MHZ
        );
        assert!((g.total / MHZ - 0.61).abs() < 0.01);
        assert!(g.induced_a > 0.0 && g.induced_b < 0.0);
    }

    #[test]
    fn direct_coupling_only() {
        let p = OperatingPoint {
            g_xy: 0.001,
            ..no_qubit_resonator(at(4.56, 4.8))
        };
        assert_eq!(effective_coupling_g_d(&p).unwrap().total, 0.001);
    }

    #[test]
    fn resonator_coupling_is_small_and_symmetric() {
        let p = at(4.56, 5.12);
        let g = resonator_effective_coupling(&p).unwrap().value;
        assert!(g.abs() < 0.01 * (p.omega_b - p.omega_a));
        let s = resonator_effective_coupling(&p.swapped_qubits())
            .unwrap()
            .value;
        assert!((g - s).abs() < 1e-15);
        let bare = resonator_effective_coupling(&no_qubit_resonator(p))
            .unwrap()
            .value;
        assert_eq!(bare, p.g_ab);
    }

    #[test]
    fn high_level_shift_of_y_at_sweet_spot() {
        let p = at(4.56, 5.12);
        let s = high_excited_shift(&p).unwrap();
        let bracket = (0.032f64 / 1.02).powi(2)
            + (0.032f64 / 9.22).powi(2)
            + (0.030f64 / 0.08).powi(2)
            + (0.030f64 / 10.32).powi(2);
        assert!((s.delta_omega_y - (-0.195 * bracket)).abs() < 1e-15);
        assert!((s.delta_omega_y / MHZ + 27.6).abs() < 0.1);
        let harmonic = OperatingPoint {
            alpha_x: 0.0,
            alpha_y: 0.0,
            ..p
        };
        let h = high_excited_shift(&harmonic).unwrap();
        assert_eq!(h.delta_omega_x, 0.0);
        assert_eq!(h.delta_omega_y, 0.0);
    }

    #[test]
    fn g_cr_uses_corrected_frequencies() {
        let p = at(4.56, 4.8);
        let s = high_excited_shift(&p).unwrap();
        let direct = effective_coupling_at(&p, s.omega_cr_x, s.omega_cr_y, "check").unwrap();
        assert_eq!(corrected_coupling_g_cr(&p).unwrap().total, direct.total);
        let harmonic = OperatingPoint {
            alpha_x: 0.0,
            alpha_y: 0.0,
            ..p
        };
        let f = decoupled_frequencies(&harmonic).unwrap();
        let via_d = effective_coupling_at(&harmonic, f.omega_d_x, f.omega_d_y, "check").unwrap();
        assert_eq!(
            corrected_coupling_g_cr(&harmonic).unwrap().total,
            via_d.total
        );
    }

    #[test]
    fn pole_guard_on_resonance() {
        let p = at(4.10, 4.8);
        assert!(matches!(decoupled_frequencies(&p), Err(Error::Pole { .. })));
        let near = at(4.105, 4.8);
        assert!(decoupled_frequencies(&near).unwrap().near_pole);
        assert!(!decoupled_frequencies(&at(4.56, 4.8)).unwrap().near_pole);
    }

    #[test]
    fn nonlinear_terms_vanish_without_anharmonicity() {
        let p = OperatingPoint {
            alpha_x: 0.0,
            alpha_y: 0.0,
            ..at(4.56, 4.8)
        };
        let t = transformed_nonlinear_terms(&p).unwrap();
        for row in t.pairs {
            for c in row {
                assert_eq!(
                    [
                        c.self_kerr,
                        c.cross_kerr_normal,
                        c.cross_kerr_anti,
                        c.two_photon_exchange,
                        c.assisted_exchange
                    ],
                    [0.0; 5]
                );
            }
        }
    }

    #[test]
    fn cross_kerr_reduction_reproduces_high_level_shift() {
        let p = at(4.56, 4.8);
        let t = transformed_nonlinear_terms(&p).unwrap();
        let s = high_excited_shift(&p).unwrap();
        for q in Qubit::ALL {
            let half = t.photon_reduced_shift(q, 0.5, 0.5);
            assert!((half - s.delta_omega(q)).abs() < 1e-15);
            // Literal vacuum (c†c → 0, c c† → 1) keeps only the Σ part.
            let d = DetuningSet::new(&p);
            let vac: f64 = Resonator::ALL
                .iter()
                .map(|&r| 2.0 * p.g(r, q).powi(2) * p.alpha(q) / d.sigma(r, q).powi(2))
                .sum();
            assert!((t.photon_reduced_shift(q, 0.0, 1.0) - vac).abs() < 1e-18);
        }
    }

    #[test]
    fn nonlinear_terms_scale_quadratically() {
        let p = at(4.56, 4.8);
        let a = transformed_nonlinear_terms(&p).unwrap();
        let b = transformed_nonlinear_terms(&p.with_qubit_resonator_scale(2.0)).unwrap();
        for r in Resonator::ALL {
            for q in Qubit::ALL {
                let (x, y) = (a.pair(r, q), b.pair(r, q));
                assert!((y.self_kerr - 4.0 * x.self_kerr).abs() < 1e-15);
                assert!((y.cross_kerr_normal - 4.0 * x.cross_kerr_normal).abs() < 1e-15);
                assert!((y.cross_kerr_anti - 4.0 * x.cross_kerr_anti).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dispersive_shift_examples() {
        let p = at(4.56, 4.8);
        let d = DetuningSet::new(&p);
        let g2 = p.g_ax.powi(2);
        let j0 = dispersive_shifts_chi(&p, Resonator::A, Qubit::X, 0, 3).unwrap();
        assert_eq!(j0.kappa, 0.0);
        assert!((j0.chi + g2 / d.delta(Resonator::A, Qubit::X)).abs() < 1e-15);

        let harmonic = OperatingPoint { alpha_x: 0.0, ..p };
        let j1 = dispersive_shifts_chi(&harmonic, Resonator::A, Qubit::X, 1, 3).unwrap();
        assert!((j1.kappa - g2 / d.delta(Resonator::A, Qubit::X)).abs() < 1e-15);

        let t0 = dispersive_shifts_chi(&p, Resonator::A, Qubit::X, 0, 2).unwrap();
        let t1 = dispersive_shifts_chi(&p, Resonator::A, Qubit::X, 1, 2).unwrap();
        assert!((t0.chi + t1.chi).abs() < 1e-15);

        // Δ_ax + α_x = 0 places the 1→2 transition on resonance.
        let res = OperatingPoint {
            omega_x: 4.10 + 0.175,
            ..p
        };
        assert!(dispersive_shifts_chi(&res, Resonator::A, Qubit::X, 1, 3).is_err());
    }

    #[test]
    fn detuning_flags() {
        let d = DetuningSet::new(&at(4.56, 5.12));
        assert!(d.is_dispersive(Resonator::A, Qubit::X));
        assert!(d.sigma(Resonator::B, Qubit::Y) > 0.0);
        assert!((d.delta_xy - 0.56).abs() < 1e-12);
        assert!((d.delta_ab - 1.1).abs() < 1e-12);
        // g_by/|Δ_by| = 30/80 is not dispersive.
        assert!(!d.is_dispersive(Resonator::B, Qubit::Y));
        assert!(!d.all_dispersive());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn high_level_shift_has_sign_of_alpha(wx in 4.2f64..5.1, wy in 4.2f64..5.1, ax in -0.3f64..-0.05, ay in -0.3f64..-0.05) {
                let p = OperatingPoint { alpha_x: ax, alpha_y: ay, ..at(wx, wy) };
                if let Ok(s) = high_excited_shift(&p) {
                    prop_assert!(s.delta_omega_x < 0.0 && s.delta_omega_y < 0.0);
                    let flipped = OperatingPoint { alpha_x: -ax, alpha_y: -ay, ..p };
                    let f = high_excited_shift(&flipped).unwrap();
                    prop_assert!(f.delta_omega_x > 0.0 && f.delta_omega_y > 0.0);
                }
            }

            #[test]
            fn zero_qubit_resonator_coupling(wx in 3.5f64..5.5, wy in 3.5f64..5.5, gxy in 0.0f64..0.01) {
                let p = OperatingPoint { g_xy: gxy, ..no_qubit_resonator(at(wx, wy)) };
                if let Ok(d) = decouple(&p) {
                    prop_assert_eq!(d.g_d_xy, gxy);
                    prop_assert_eq!(d.g_cr_xy, gxy);
                    prop_assert_eq!(d.omega_d_x, wx);
                    prop_assert_eq!(d.omega_cr_y, wy);
                }
            }

            #[test]
            fn g_d_smooth_between_poles(wy in 4.2f64..5.0, h in 1e-6f64..1e-4) {
                let p = at(4.56, wy);
                let q = at(4.56, wy + h);
                if let (Ok(a), Ok(b)) = (effective_coupling_g_d(&p), effective_coupling_g_d(&q)) {
                    if !a.near_pole && !b.near_pole {
                        prop_assert!(((b.total - a.total) / h).is_finite());
                        prop_assert!((b.total - a.total).abs() < 1e-3 * h / 1e-6);
                    }
                }
            }
        }
    }
}
