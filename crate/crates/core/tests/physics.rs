use dualres::circuit::{CircuitParams, OperatingPoint};
use dualres::hamiltonian::{BasisIndex, BuildOptions, TruncationScheme};
use dualres::spectrum::{exchange_gap, spectrum_at, sweep_levels, zz_numeric, SweepPoint};
use dualres::zz::{zz_total, ZzOptions};

fn state(s: &str) -> BasisIndex {
    BasisIndex::parse(s).unwrap()
}

#[test]
fn resonator_cutoff_converged() {
    let p = OperatingPoint::with_qubit_frequencies(&CircuitParams::reference(), 4.52, 4.8);
    let small = spectrum_at(&p, &TruncationScheme::default(), &BuildOptions::default()).unwrap();
    let large = spectrum_at(
        &p,
        &TruncationScheme::new(6, 3, 3, 6).unwrap(),
        &BuildOptions::default(),
    )
    .unwrap();
    for s in ["0000", "0100", "0010", "0110", "1000", "0001"] {
        let d = (small.energy(&state(s)).unwrap() - large.energy(&state(s)).unwrap()).abs();
        assert!(d < 1e-6, "{s}: {} kHz", d * 1e6);
    }
    let dz = zz_numeric(&small).unwrap().value - zz_numeric(&large).unwrap().value;
    assert!(dz.abs() < 1e-6, "{} kHz", dz * 1e6);
}

#[test]
fn vacuum_rabi_gap_at_resonance() {
    let params = CircuitParams::reference();
    let g = params.g_ax;
    let grid: Vec<SweepPoint> = (0..201)
        .map(|i| {
            let w = 4.0 + 0.2 * i as f64 / 200.0;
            SweepPoint {
                phi_x: w,
                phi_y: 0.0,
                point: OperatingPoint::with_qubit_frequencies(&params, w, 4.8),
            }
        })
        .collect();
    let sweep = sweep_levels(
        &grid,
        &TruncationScheme::default(),
        &BuildOptions::default(),
    )
    .unwrap();
    let (gap, i) = sweep.min_gap(&state("1000"), &state("0100")).unwrap();
    assert!(gap > 1.8 * g && gap < 2.2 * g, "gap {} MHz", gap * 1e3);
    assert!((grid[i].phi_x - params.omega_a).abs() < 0.01);

    let p = OperatingPoint::with_qubit_frequencies(&params, params.omega_a, 4.8);
    let s = spectrum_at(&p, &TruncationScheme::default(), &BuildOptions::default()).unwrap();
    let split = exchange_gap(&s, &state("1000"), &state("0100")).unwrap();
    assert!(
        (split - 2.0 * g).abs() < 0.1 * 2.0 * g,
        "{} MHz",
        split * 1e3
    );
}

fn swapped(p: &CircuitParams) -> CircuitParams {
    CircuitParams {
        omega_x_max: p.omega_y_max,
        omega_y_max: p.omega_x_max,
        alpha_x: p.alpha_y,
        alpha_y: p.alpha_x,
        g_ax: p.g_ay,
        g_ay: p.g_ax,
        g_bx: p.g_by,
        g_by: p.g_bx,
        ..*p
    }
}

#[test]
fn zz_symmetric_under_qubit_exchange() {
    let params = CircuitParams {
        g_ay: 0.028,
        g_bx: 0.034,
        ..CircuitParams::reference()
    };
    let opts = ZzOptions {
        include_cross_kerr: true,
        symmetric_third_order: true,
    };
    for (wx, wy) in [(4.52, 4.85), (4.3, 4.9), (4.55, 4.62)] {
        let p = OperatingPoint::with_qubit_frequencies(&params, wx, wy);
        let q = OperatingPoint::with_qubit_frequencies(&swapped(&params), wy, wx);
        let (a, b) = (zz_total(&p, &opts).unwrap(), zz_total(&q, &opts).unwrap());
        assert!(
            (a.xi_total - b.xi_total).abs() < 1e-12,
            "{} {}",
            a.xi_total,
            b.xi_total
        );
        let t = TruncationScheme::default();
        let bo = BuildOptions::default();
        let na = zz_numeric(&spectrum_at(&p, &t, &bo).unwrap())
            .unwrap()
            .value;
        let nb = zz_numeric(&spectrum_at(&q, &t, &bo).unwrap())
            .unwrap()
            .value;
        assert!((na - nb).abs() < 1e-9, "{na} {nb}");
    }
}
