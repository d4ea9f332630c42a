//! Closed-form static ZZ coupling: direct-coupling, mixed and
//! self-Kerr ladders, the cross-Kerr level corrections, and the catalog of
//! resonances where these expressions diverge.
//!
//! Values are stored in GHz; the `*_mhz` accessors are for reporting.

use crate::circuit::{OperatingPoint, Qubit, Resonator};
use crate::error::Result;
use crate::pole::{Guarded, PoleGuard};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ZzOptions {
    /// Add the cross-Kerr ground and first-excited level corrections.
    pub include_cross_kerr: bool,
    /// Use 1/Δ_λx instead of 1/Δ_λy in the second group of the mixed
    /// third-order term, making it symmetric under x ↔ y.
    pub symmetric_third_order: bool,
}

fn d_qr(p: &OperatingPoint, r: Resonator, q: Qubit) -> f64 {
    p.omega_qubit(q) - p.omega_resonator(r)
}

/// 2 g_xy² (α_x + α_y) / ((Δ_xy + α_y)(Δ_xy − α_x)).
pub fn zz_second_order(p: &OperatingPoint) -> Result<Guarded> {
    let mut g = PoleGuard::new("xi2");
    let d = p.omega_y - p.omega_x;
    let v = 2.0
        * p.g_xy.powi(2)
        * (p.alpha_x + p.alpha_y)
        * g.inv(d + p.alpha_y, "Δ_xy + α_y")?
        * g.inv(d - p.alpha_x, "Δ_xy − α_x")?;
    Ok(Guarded::new(v, &g))
}

/// Mixed direct/indirect term through resonator `r`.
pub fn zz_third_order(p: &OperatingPoint, r: Resonator, symmetrized: bool) -> Result<Guarded> {
    let mut g = PoleGuard::new("xi3");
    let d = p.omega_y - p.omega_x;
    let inv_d = g.inv(d, "Δ_xy")?;
    let inv_dp = g.inv(d + p.alpha_y, "Δ_xy + α_y")?;
    let inv_dm = g.inv(d - p.alpha_x, "Δ_xy − α_x")?;
    let inv_ly = g.inv(d_qr(p, r, Qubit::Y), &format!("Δ_{r}y"))?;
    let inv_second = if symmetrized {
        g.inv(d_qr(p, r, Qubit::X), &format!("Δ_{r}x"))?
    } else {
        inv_ly
    };
    let v = 2.0
        * p.g_xy
        * p.g(r, Qubit::X)
        * p.g(r, Qubit::Y)
        * (inv_ly * (inv_d - 2.0 * inv_dp) - inv_second * (inv_d - 2.0 * inv_dm));
    Ok(Guarded::new(v, &g))
}

/// Nonlinearity of resonator `r` induced by the dispersive qubit couplings:
/// Σ_β α_β (g_rβ / Δ_rβ)⁴.
pub fn induced_resonator_nonlinearity(p: &OperatingPoint, r: Resonator) -> Result<f64> {
    let mut g = PoleGuard::new("alpha_lambda");
    let mut out = 0.0;
    for q in Qubit::ALL {
        let x = p.g(r, q) * g.inv(d_qr(p, r, q), &format!("Δ_{r}{q}"))?;
        out += p.alpha(q) * x.powi(4);
    }
    Ok(out)
}

/// Fourth-order self-Kerr ladder through resonator `r`.
pub fn zz_fourth_self(p: &OperatingPoint, r: Resonator) -> Result<Guarded> {
    let mut g = PoleGuard::new("xi4s");
    let alpha_r = induced_resonator_nonlinearity(p, r)?;
    let d = p.omega_y - p.omega_x;
    let (dx, dy) = (d_qr(p, r, Qubit::X), d_qr(p, r, Qubit::Y));
    let inv_dx = g.inv(dx, &format!("Δ_{r}x"))?;
    let inv_dy = g.inv(dy, &format!("Δ_{r}y"))?;
    let inv_d = g.inv(d, "Δ_xy")?;
    let inv_dp = g.inv(d + p.alpha_y, "Δ_xy + α_y")?;
    let inv_dm = g.inv(d - p.alpha_x, "Δ_xy − α_x")?;
    let inv_two = g.inv(dx + dy - alpha_r, &format!("Δ_{r}y + Δ_{r}x − α_{r}"))?;
    let gg = (p.g(r, Qubit::X) * p.g(r, Qubit::Y)).powi(2);
    let v = 2.0 * gg * inv_two * (inv_dy + inv_dx).powi(2)
        - gg * inv_dy * inv_dy * (inv_d + inv_dx - 2.0 * inv_dm)
        - gg * inv_dx * inv_dx * (2.0 * inv_dp - inv_d + inv_dy);
    Ok(Guarded::new(v, &g))
}

/// Cross-Kerr correction to the ground level of qubit `q`.
pub fn zz_cross_kerr_ground(p: &OperatingPoint, q: Qubit) -> Result<Guarded> {
    let mut g = PoleGuard::new("xi4c0");
    let w = p.omega_qubit(q);
    let (da, db) = (d_qr(p, Resonator::A, q), d_qr(p, Resonator::B, q));
    let inv_da = g.inv(da, &format!("Δ_a{q}"))?;
    let inv_db = g.inv(db, &format!("Δ_b{q}"))?;
    let inv_w = g.inv(w, &format!("ω_{q}"))?;
    let inv_two = g.inv(
        2.0 * w + p.alpha(q) - p.omega_a - p.omega_b,
        &format!("2ω_{q} + α_{q} − ω_a − ω_b"),
    )?;
    let gg = (p.g(Resonator::A, q) * p.g(Resonator::B, q)).powi(2);
    let v = gg
        * (2.0 * inv_da * inv_db * inv_w
            + inv_two * ((2.0 * w - p.omega_a - p.omega_b) * inv_da * inv_db).powi(2));
    Ok(Guarded::new(v, &g))
}

/// Cross-Kerr correction to the first excited level of qubit `q`.
pub fn zz_cross_kerr_excited(p: &OperatingPoint, q: Qubit) -> Result<Guarded> {
    let mut g = PoleGuard::new("xi4c1");
    let w = p.omega_qubit(q);
    let a = p.alpha(q);
    let (da, db) = (d_qr(p, Resonator::A, q), d_qr(p, Resonator::B, q));
    let inv_w = g.inv(w, &format!("ω_{q}"))?;
    let inv_da = g.inv(da, &format!("Δ_a{q}"))?;
    let inv_db = g.inv(db, &format!("Δ_b{q}"))?;
    let inv_dap = g.inv(da + a, &format!("Δ_a{q} + α_{q}"))?;
    let inv_dbp = g.inv(db + a, &format!("Δ_b{q} + α_{q}"))?;
    let gg = (p.g(Resonator::A, q) * p.g(Resonator::B, q)).powi(2);
    let v = 2.0 * gg * inv_w * inv_dap * inv_dbp + 2.0 * gg * inv_w * inv_da * inv_db;
    Ok(Guarded::new(v, &g))
}

/// Term-by-term static ZZ at one operating point (GHz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZzBreakdown {
    pub xi2: Guarded,
    pub xi3_a: Guarded,
    pub xi3_b: Guarded,
    pub xi4s_a: Guarded,
    pub xi4s_b: Guarded,
    pub xi4c0_x: Guarded,
    pub xi4c0_y: Guarded,
    pub xi4c1_x: Guarded,
    pub xi4c1_y: Guarded,
    pub xi_total: f64,
    pub include_cross_kerr: bool,
}

impl ZzBreakdown {
    pub fn xi3(&self) -> f64 {
        self.xi3_a.value + self.xi3_b.value
    }

    pub fn xi4s(&self) -> f64 {
        self.xi4s_a.value + self.xi4s_b.value
    }

    pub fn xi4c0(&self) -> f64 {
        self.xi4c0_x.value + self.xi4c0_y.value
    }

    pub fn xi4c1(&self) -> f64 {
        self.xi4c1_x.value + self.xi4c1_y.value
    }

    /// ξ2 + ξ3 + ξ4s, the total without cross-Kerr corrections.
    pub fn xi_without_cross_kerr(&self) -> f64 {
        self.xi2.value + self.xi3() + self.xi4s()
    }

    /// Whether any contributing term sits within the soft pole window.
    pub fn near_pole(&self) -> bool {
        let mut terms = vec![self.xi2, self.xi3_a, self.xi3_b, self.xi4s_a, self.xi4s_b];
        if self.include_cross_kerr {
            terms.extend([self.xi4c0_x, self.xi4c0_y, self.xi4c1_x, self.xi4c1_y]);
        }
        terms.iter().any(|t| t.near_pole)
    }

    pub fn xi_total_mhz(&self) -> f64 {
        self.xi_total * 1e3
    }
}

pub fn zz_total(p: &OperatingPoint, opts: &ZzOptions) -> Result<ZzBreakdown> {
    let off = Guarded {
        value: 0.0,
        near_pole: false,
    };
    let (c0x, c0y, c1x, c1y) = if opts.include_cross_kerr {
        (
            zz_cross_kerr_ground(p, Qubit::X)?,
            zz_cross_kerr_ground(p, Qubit::Y)?,
            zz_cross_kerr_excited(p, Qubit::X)?,
            zz_cross_kerr_excited(p, Qubit::Y)?,
        )
    } else {
        (off, off, off, off)
    };
    let mut b = ZzBreakdown {
        xi2: zz_second_order(p)?,
        xi3_a: zz_third_order(p, Resonator::A, opts.symmetric_third_order)?,
        xi3_b: zz_third_order(p, Resonator::B, opts.symmetric_third_order)?,
        xi4s_a: zz_fourth_self(p, Resonator::A)?,
        xi4s_b: zz_fourth_self(p, Resonator::B)?,
        xi4c0_x: c0x,
        xi4c0_y: c0y,
        xi4c1_x: c1x,
        xi4c1_y: c1y,
        xi_total: 0.0,
        include_cross_kerr: opts.include_cross_kerr,
    };
    b.xi_total = b.xi_without_cross_kerr() + b.xi4c0() - b.xi4c1();
    Ok(b)
}

/// A resonance of the analytic ZZ expressions along a qubit-y sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub omega_y: f64,
    pub condition: &'static str,
    pub terms: &'static str,
    pub mechanism: &'static str,
}

struct PoleRule {
    condition: &'static str,
    terms: &'static str,
    mechanism: &'static str,
    cross_kerr: bool,
    /// ω_y solving the condition at fixed ω_x.
    solve: fn(&OperatingPoint) -> f64,
}

const POLE_RULES: [PoleRule; 6] = [
    PoleRule {
        condition: "Δ_xy = 0",
        terms: "xi3,xi4s",
        mechanism: "|0100⟩↔|0010⟩ resonant single-excitation exchange",
        cross_kerr: false,
        solve: |p| p.omega_x,
    },
    PoleRule {
        condition: "Δ_xy = α_x",
        terms: "xi2,xi3,xi4s",
        mechanism: "|0200⟩↔|0110⟩ resonant state exchange",
        cross_kerr: false,
        solve: |p| p.omega_x + p.alpha_x,
    },
    PoleRule {
        condition: "Δ_xy = −α_y",
        terms: "xi2,xi3,xi4s",
        mechanism: "|0020⟩↔|0110⟩ resonant state exchange",
        cross_kerr: false,
        solve: |p| p.omega_x - p.alpha_y,
    },
    PoleRule {
        condition: "ω_y + α_y = ω_a",
        terms: "xi4c1",
        mechanism: "|0020⟩↔|1010⟩ qubit y 1→2 transition resonant with resonator a",
        cross_kerr: true,
        solve: |p| p.omega_a - p.alpha_y,
    },
    PoleRule {
        condition: "ω_y + α_y = ω_b",
        terms: "xi4c1",
        mechanism: "|0020⟩↔|0011⟩ qubit y 1→2 transition resonant with resonator b",
        cross_kerr: true,
        solve: |p| p.omega_b - p.alpha_y,
    },
    PoleRule {
        condition: "2ω_y + α_y = ω_a + ω_b",
        terms: "xi4c0",
        mechanism: "|0020⟩↔|1001⟩ virtual photon exchange between qubit y and both resonators",
        cross_kerr: true,
        solve: |p| 0.5 * (p.omega_a + p.omega_b - p.alpha_y),
    },
];

/// Poles of ξ in ω_y ∈ [lo, hi] at the operating point's ω_x, sorted by
/// location. Cross-Kerr poles are listed only when requested.
pub fn pole_catalog(p: &OperatingPoint, lo: f64, hi: f64, include_cross_kerr: bool) -> Vec<Pole> {
    let mut out: Vec<Pole> = POLE_RULES
        .iter()
        .filter(|r| include_cross_kerr || !r.cross_kerr)
        .map(|r| Pole {
            omega_y: (r.solve)(p),
            condition: r.condition,
            terms: r.terms,
            mechanism: r.mechanism,
        })
        .filter(|pole| pole.omega_y >= lo && pole.omega_y <= hi)
        .collect();
    out.sort_by(|a, b| a.omega_y.total_cmp(&b.omega_y));
    out
}

/// Signed distances to every singular denominator of the ZZ expressions at
/// a point; a sign change between two grid points means a pole lies
/// between them. Includes the catalog conditions (for both qubits) plus the
/// qubit–resonator resonances and the induced two-photon resonance.
pub fn singular_denominators(p: &OperatingPoint, include_cross_kerr: bool) -> Vec<f64> {
    let d = p.omega_y - p.omega_x;
    let mut out = vec![d, d - p.alpha_x, d + p.alpha_y];
    for r in Resonator::ALL {
        let (dx, dy) = (d_qr(p, r, Qubit::X), d_qr(p, r, Qubit::Y));
        out.push(dx);
        out.push(dy);
        let alpha_r = induced_resonator_nonlinearity(p, r).unwrap_or(0.0);
        out.push(dx + dy - alpha_r);
    }
    if include_cross_kerr {
        for q in Qubit::ALL {
            let w = p.omega_qubit(q);
            let a = p.alpha(q);
            out.push(w);
            out.push(2.0 * w + a - p.omega_a - p.omega_b);
            out.push(d_qr(p, Resonator::A, q) + a);
            out.push(d_qr(p, Resonator::B, q) + a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitParams;
    use crate::error::Error;

    const MHZ: f64 = 1e-3;
    const ALL_TERMS: ZzOptions = ZzOptions {
        include_cross_kerr: true,
        symmetric_third_order: false,
    };

    fn at(wx: f64, wy: f64) -> OperatingPoint {
        OperatingPoint::with_qubit_frequencies(&CircuitParams::reference(), wx, wy)
    }

    #[test]
    fn second_order_example() {
        let p = OperatingPoint {
            g_xy: 0.001,
            ..at(4.52, 4.72)
        };
        let v = zz_second_order(&p).unwrap();
        let expect = 2.0 * 1.0 * (-370.0) / ((200.0 - 195.0) * (200.0 + 175.0));
        assert!((v.value / MHZ - expect).abs() < 1e-9);
        assert!((expect + 0.395).abs() < 1e-3);
        assert!(v.near_pole);
        let zero = OperatingPoint { g_xy: 0.0, ..p };
        assert_eq!(zz_second_order(&zero).unwrap().value, 0.0);
        let harmonic = OperatingPoint {
            alpha_x: 0.0,
            alpha_y: 0.0,
            ..p
        };
        assert_eq!(zz_second_order(&harmonic).unwrap().value, 0.0);
    }

    #[test]
    fn third_order_linear_in_direct_coupling() {
        let p = OperatingPoint {
            g_xy: 0.0005,
            ..at(4.52, 4.8)
        };
        for r in Resonator::ALL {
            for sym in [false, true] {
                let a = zz_third_order(&p, r, sym).unwrap().value;
                assert!(a.is_finite() && a != 0.0);
                let twice = zz_third_order(&OperatingPoint { g_xy: 0.001, ..p }, r, sym)
                    .unwrap()
                    .value;
                assert!((twice - 2.0 * a).abs() < 1e-15);
                let zero = zz_third_order(&OperatingPoint { g_xy: 0.0, ..p }, r, sym)
                    .unwrap()
                    .value;
                assert_eq!(zero, 0.0);
            }
        }
    }

    #[test]
    fn fourth_self_examples() {
        let p = at(4.52, 4.8);
        let s = zz_fourth_self(&p, Resonator::A).unwrap().value
            + zz_fourth_self(&p, Resonator::B).unwrap().value;
        assert!(s.is_finite());
        let q = OperatingPoint { g_xy: 0.003, ..p };
        let s2 = zz_fourth_self(&q, Resonator::A).unwrap().value
            + zz_fourth_self(&q, Resonator::B).unwrap().value;
        assert_eq!(s, s2);
        let no_x = OperatingPoint { g_ax: 0.0, ..p };
        assert_eq!(zz_fourth_self(&no_x, Resonator::A).unwrap().value, 0.0);
        let half = OperatingPoint {
            g_ax: p.g_ax / 2.0,
            g_ay: p.g_ay / 2.0,
            ..p
        };
        let ratio = zz_fourth_self(&p, Resonator::A).unwrap().value
            / zz_fourth_self(&half, Resonator::A).unwrap().value;
        assert!((ratio - 16.0).abs() < 16.0 * 1e-3, "{ratio}");
    }

    #[test]
    fn cross_kerr_examples() {
        let p = at(4.52, 4.8);
        for q in Qubit::ALL {
            let no_a = OperatingPoint {
                g_ax: 0.0,
                g_ay: 0.0,
                ..p
            };
            assert_eq!(zz_cross_kerr_ground(&no_a, q).unwrap().value, 0.0);
            assert_eq!(zz_cross_kerr_excited(&no_a, q).unwrap().value, 0.0);
        }
        let harmonic = OperatingPoint { alpha_y: 0.0, ..p };
        let v = zz_cross_kerr_excited(&harmonic, Qubit::Y).unwrap().value;
        let (da, db) = (4.8 - 4.10, 4.8 - 5.20);
        let expect = 4.0 * (0.032f64 * 0.030).powi(2) / (4.8 * da * db);
        assert!((v - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn cross_kerr_ground_pole_is_simple() {
        let pole = 0.5 * (4.10 + 5.20 + 0.195);
        let near = zz_cross_kerr_ground(&at(4.52, pole + 0.001), Qubit::Y).unwrap();
        let nearer = zz_cross_kerr_ground(&at(4.52, pole + 0.0005), Qubit::Y).unwrap();
        assert!(near.near_pole && nearer.near_pole);
        let ratio = nearer.value / near.value;
        assert!((ratio - 2.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn excited_pole_is_guarded() {
        let p = at(4.52, 4.10 + 0.195);
        assert!(matches!(
            zz_cross_kerr_excited(&p, Qubit::Y),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn zero_couplings_give_zero_breakdown() {
        let p = OperatingPoint {
            g_xy: 0.0,
            ..at(4.52, 4.8).with_qubit_resonator_scale(0.0)
        };
        let b = zz_total(&p, &ALL_TERMS).unwrap();
        assert_eq!(b.xi_total, 0.0);
        assert_eq!(b.xi2.value, 0.0);
        assert_eq!(b.xi3(), 0.0);
    }

    #[test]
    fn total_composition() {
        let p = at(4.52, 4.8);
        let b = zz_total(&p, &ALL_TERMS).unwrap();
        let sum = b.xi2.value
            + b.xi3_a.value
            + b.xi3_b.value
            + b.xi4s_a.value
            + b.xi4s_b.value
            + b.xi4c0_x.value
            + b.xi4c0_y.value
            - b.xi4c1_x.value
            - b.xi4c1_y.value;
        assert!((b.xi_total - sum).abs() < 1e-18);
        let plain = zz_total(&p, &ZzOptions::default()).unwrap();
        assert_eq!(plain.xi_total, plain.xi_without_cross_kerr());
        assert_eq!(plain.xi4c0(), 0.0);
    }

    #[test]
    fn suppression_regime_is_sub_mhz() {
        let mut wy = 4.75;
        while wy <= 5.0 {
            let p = OperatingPoint {
                g_xy: 0.0005,
                ..at(4.52, wy)
            };
            let b = zz_total(&p, &ZzOptions::default()).unwrap();
            assert!(b.xi_total.abs() < MHZ, "ω_y = {wy}: {}", b.xi_total_mhz());
            wy += 0.01;
        }
    }

    #[test]
    fn catalog_locations() {
        let p = at(4.52, 4.8);
        let plain: Vec<f64> = pole_catalog(&p, 4.2, 5.0, false)
            .iter()
            .map(|q| q.omega_y)
            .collect();
        let expect = [4.345, 4.52, 4.715];
        assert_eq!(plain.len(), 3);
        for (a, b) in plain.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let all = pole_catalog(&p, 4.2, 5.0, true);
        let locs: Vec<f64> = all.iter().map(|q| q.omega_y).collect();
        let expect = [4.295, 4.345, 4.52, 4.715, 4.7475];
        assert_eq!(locs.len(), 5, "{locs:?}");
        for (a, b) in locs.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(all.iter().any(|q| q.mechanism.contains("|0200⟩↔|0110⟩")));
        assert!(pole_catalog(&p, 4.8, 4.9, true).is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn clear_of_poles(p: &OperatingPoint) -> bool {
            singular_denominators(p, true)
                .iter()
                .all(|d| d.abs() > 0.05)
        }

        proptest! {
            #[test]
            fn cross_kerr_symmetric_under_resonator_swap(wx in 4.2f64..5.0, wy in 4.2f64..5.0) {
                let p = at(wx, wy);
                prop_assume!(clear_of_poles(&p));
                for q in Qubit::ALL {
                    let a = zz_cross_kerr_ground(&p, q).unwrap().value;
                    let b = zz_cross_kerr_ground(&p.swapped_resonators(), q).unwrap().value;
                    prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-15));
                    let a = zz_cross_kerr_excited(&p, q).unwrap().value;
                    let b = zz_cross_kerr_excited(&p.swapped_resonators(), q).unwrap().value;
                    prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-15));
                }
            }

            #[test]
            fn order_scaling(wx in 4.2f64..5.0, wy in 4.2f64..5.0, s in 0.05f64..0.5) {
                let p = at(wx, wy);
                prop_assume!(clear_of_poles(&p));
                let q = p.with_qubit_resonator_scale(s);
                for x in Qubit::ALL {
                    let a = zz_cross_kerr_ground(&p, x).unwrap().value;
                    let b = zz_cross_kerr_ground(&q, x).unwrap().value;
                    prop_assert!((b / a / s.powi(4) - 1.0).abs() < 1e-9);
                    let a = zz_cross_kerr_excited(&p, x).unwrap().value;
                    let b = zz_cross_kerr_excited(&q, x).unwrap().value;
                    prop_assert!((b / a / s.powi(4) - 1.0).abs() < 1e-9);
                }
                for r in Resonator::ALL {
                    let a = zz_fourth_self(&p, r).unwrap().value;
                    let b = zz_fourth_self(&q, r).unwrap().value;
                    prop_assert!((b / a / s.powi(4) - 1.0).abs() < 0.01);
                    let a = zz_third_order(&p, r, false).unwrap().value;
                    let b = zz_third_order(&q, r, false).unwrap().value;
                    prop_assert!((b / a / s.powi(2) - 1.0).abs() < 1e-9);
                }
            }
        }
    }
}
