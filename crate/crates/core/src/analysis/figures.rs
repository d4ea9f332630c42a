//! Dataset recipes for the published figure panels. Each recipe starts from
//! the supplied parameters and applies the per-figure overrides (qubit x
//! frequency, direct coupling sets, anharmonicities).

use crate::analysis::contour::{zero_contour, Contour};
use crate::analysis::csv::{format_bool, format_float, Dataset, Table};
use crate::analysis::roots::{find_switchoff, find_zz_zero, CouplingKind, SwitchOff};
use crate::analysis::sweep::{
    run_sweep, Axis, Base, Quantity, SweepOptions, SweepSpec, SweepVariable, DEFAULT_POINTS_1D,
    DEFAULT_POINTS_2D,
};
use crate::circuit::{josephson_energy_for, qubit_frequency, CircuitParams};
use crate::error::{Error, Result};
use crate::hamiltonian::BasisIndex;
use crate::perturbation::decoupled_frequencies;
use crate::spectrum::{sweep_levels, LevelSweep, SweepPoint};
use crate::zz::ZzOptions;

pub const FIGURE_NAMES: [&str; 8] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig9", "fig10",
];

/// Node phases of the 2D recipes span [−PHASE_LIMIT, PHASE_LIMIT].
pub const PHASE_LIMIT: f64 = 1.5;
pub const LEVEL_SURFACE_POINTS: usize = 41;
pub const LEVEL_CURVE_POINTS: usize = 241;

pub const SINGLE_EXCITATIONS: [BasisIndex; 4] = [
    BasisIndex::new(1, 0, 0, 0),
    BasisIndex::new(0, 1, 0, 0),
    BasisIndex::new(0, 0, 1, 0),
    BasisIndex::new(0, 0, 0, 1),
];

pub const DOUBLE_EXCITATIONS: [BasisIndex; 10] = [
    BasisIndex::new(2, 0, 0, 0),
    BasisIndex::new(0, 2, 0, 0),
    BasisIndex::new(0, 0, 2, 0),
    BasisIndex::new(0, 0, 0, 2),
    BasisIndex::new(1, 1, 0, 0),
    BasisIndex::new(1, 0, 1, 0),
    BasisIndex::new(1, 0, 0, 1),
    BasisIndex::new(0, 1, 1, 0),
    BasisIndex::new(0, 1, 0, 1),
    BasisIndex::new(0, 0, 1, 1),
];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FigureOptions {
    /// Overrides the point count of every axis.
    pub grid: Option<usize>,
    pub sweep: SweepOptions,
}

impl FigureOptions {
    fn points(&self, default: usize) -> usize {
        self.grid.unwrap_or(default)
    }
}

pub fn figure(name: &str, params: &CircuitParams, opts: &FigureOptions) -> Result<Vec<Dataset>> {
    match name {
        "fig2" => fig2(params, opts),
        "fig3" => fig3(params, opts),
        "fig4" => fig4(params, opts),
        "fig5" => fig5(params, opts),
        "fig6" => zz_figure("fig6", params, opts, 4.52, &[0.0, 0.5, 1.0, 1.5], false),
        "fig7" => fig7(params, opts),
        "fig9" => zz_figure("fig9", params, opts, 4.52, &[0.2, 1.4, 2.0], true),
        "fig10" => fig10(params, opts),
        _ => Err(Error::Sweep(format!(
            "unknown figure {name:?} (expected one of {})",
            FIGURE_NAMES.join(", ")
        ))),
    }
}

fn dataset(name: impl Into<String>, table: Table) -> Dataset {
    Dataset {
        name: name.into(),
        table,
    }
}

fn with_g_xy(p: &CircuitParams, mhz: f64) -> CircuitParams {
    CircuitParams {
        g_xy: mhz * 1e-3,
        ..*p
    }
}

/// Concatenates tables sharing a header, prefixing each block with the
/// values that distinguish it.
fn stack(prefix: &[&str], blocks: Vec<(Vec<f64>, Table)>) -> Table {
    let mut out: Option<Table> = None;
    for (values, table) in blocks {
        let t = out.get_or_insert_with(|| {
            Table::new(
                prefix
                    .iter()
                    .map(|s| s.to_string())
                    .chain(table.header.iter().cloned()),
            )
        });
        for row in table.rows {
            t.push(values.iter().map(|v| format_float(*v)).chain(row).collect());
        }
    }
    out.unwrap_or_else(|| Table::new(prefix.iter().copied()))
}

pub fn level_sweep(base: &Base, spec: &SweepSpec, opts: &SweepOptions) -> Result<LevelSweep> {
    let grid: Vec<SweepPoint> = base
        .grid(spec)?
        .into_iter()
        .map(|g| SweepPoint {
            phi_x: g.phi_x,
            phi_y: g.phi_y,
            point: g.point,
        })
        .collect();
    sweep_levels(&grid, &opts.truncation, &opts.build)
}

/// One row per (grid point, labelled state) using per-point labels.
pub fn level_table(sweep: &LevelSweep, labels: &[BasisIndex]) -> Result<Table> {
    let mut t = Table::new([
        "phi_x",
        "phi_y",
        "label",
        "energy_ghz",
        "overlap",
        "hybridized",
    ]);
    for (i, &(phi_x, phi_y)) in sweep.coords.iter().enumerate() {
        for l in labels {
            let e = sweep.eigen_for_label(i, l)?;
            let overlap = sweep.overlaps[i][e];
            t.push(vec![
                format_float(phi_x),
                format_float(phi_y),
                l.to_string(),
                format_float(sweep.energies[i][e]),
                format_float(overlap),
                format_bool(overlap < crate::spectrum::HYBRIDIZATION_THRESHOLD),
            ]);
        }
    }
    Ok(t)
}

/// Adiabatic branches named by their label at the first grid point.
pub fn tracked_table(sweep: &LevelSweep, labels: &[BasisIndex]) -> Result<Table> {
    let mut t = Table::new(["phi_x", "phi_y", "label", "energy_ghz", "continuity"]);
    for l in labels {
        let b = sweep.branch_for_label(l)?;
        for (i, &(phi_x, phi_y)) in sweep.coords.iter().enumerate() {
            let e = sweep.branches[b][i];
            t.push(vec![
                format_float(phi_x),
                format_float(phi_y),
                l.to_string(),
                format_float(sweep.energies[i][e]),
                format_float(sweep.continuity[b][i]),
            ]);
        }
    }
    Ok(t)
}

pub fn contour_table(contour: &Contour, first: SweepVariable, second: SweepVariable) -> Table {
    let mut t = Table::new(["chain", "point", first.name(), second.name(), "closed"]);
    for (c, chain) in contour.chains.iter().enumerate() {
        for (k, &(u, v)) in chain.points.iter().enumerate() {
            t.push(vec![
                c.to_string(),
                k.to_string(),
                format_float(u),
                format_float(v),
                format_bool(chain.closed),
            ]);
        }
    }
    t
}

fn fig2(p: &CircuitParams, o: &FigureOptions) -> Result<Vec<Dataset>> {
    let base = Base::new(*p).with_omega_x(4.56);
    let spec = SweepSpec::line(Axis::new(
        SweepVariable::PhiY,
        0.0,
        1.2,
        o.points(LEVEL_CURVE_POINTS),
    ));
    let sweep = level_sweep(&base, &spec, &o.sweep)?;
    Ok(vec![
        dataset("fig2a_levels", level_table(&sweep, &SINGLE_EXCITATIONS)?),
        dataset("fig2a_tracked", tracked_table(&sweep, &SINGLE_EXCITATIONS)?),
        dataset("fig2b_levels", level_table(&sweep, &DOUBLE_EXCITATIONS)?),
        dataset("fig2b_tracked", tracked_table(&sweep, &DOUBLE_EXCITATIONS)?),
    ])
}

fn fig3(p: &CircuitParams, o: &FigureOptions) -> Result<Vec<Dataset>> {
    let n = o.points(DEFAULT_POINTS_2D);
    let ax = Axis::new(SweepVariable::PhiX, -PHASE_LIMIT, PHASE_LIMIT, n);
    let ay = Axis::new(SweepVariable::PhiY, -PHASE_LIMIT, PHASE_LIMIT, n);
    let diagonal = Axis::new(
        SweepVariable::PhiX,
        -PHASE_LIMIT,
        PHASE_LIMIT,
        o.points(DEFAULT_POINTS_1D),
    );
    let mut out = Vec::new();
    for (surface, freqs, g_xy) in [("fig3a", "fig3b", 3.0), ("fig3c", "fig3d", 0.0)] {
        let base = Base::new(with_g_xy(p, g_xy));
        out.push(dataset(
            format!("{surface}_gd"),
            run_sweep(&base, &SweepSpec::grid(ax, ay), &[Quantity::Gd], &o.sweep)?,
        ));
        let contour = zero_contour(
            &base,
            &ax,
            &ay,
            |q| CouplingKind::Gd.evaluate(q),
            |q| CouplingKind::Gd.singular_denominators(q),
        );
        for d in &contour.diagnostics {
            log::warn!("{surface} contour: {d}");
        }
        out.push(dataset(
            format!("{surface}_contour"),
            contour_table(&contour, ax.variable, ay.variable),
        ));
        let mut t = Table::new([
            "phi",
            "omega_x_ghz",
            "omega_y_ghz",
            "omega_d_x_ghz",
            "omega_d_y_ghz",
        ]);
        for phi in diagonal.values() {
            let g = base
                .set(SweepVariable::PhiX, phi)
                .set(SweepVariable::PhiY, phi)
                .grid_point();
            let (dx, dy) = match decoupled_frequencies(&g.point) {
                Ok(d) => (d.omega_d_x, d.omega_d_y),
                Err(e) => {
                    log::debug!("{e}");
                    (f64::NAN, f64::NAN)
                }
            };
            t.push(
                [phi, g.omega_x, g.omega_y, dx, dy]
                    .iter()
                    .map(|v| format_float(*v))
                    .collect(),
            );
        }
        out.push(dataset(format!("{freqs}_diagonal"), t));
    }
    Ok(out)
}

fn fig4(p: &CircuitParams, o: &FigureOptions) -> Result<Vec<Dataset>> {
    let params = with_g_xy(p, 1.0);
    let n = o.points(DEFAULT_POINTS_1D);
    let phi_x = SweepSpec::line(Axis::new(SweepVariable::PhiX, 0.0, 1.2, n));
    let phi_y = SweepSpec::line(Axis::new(SweepVariable::PhiY, 0.0, 1.2, n));
    let omega_y = SweepSpec::line(Axis::new(SweepVariable::OmegaY, 4.2, 5.0, n));
    let base = Base::new(params).with_omega_x(4.56);
    Ok(vec![
        dataset(
            "fig4a",
            run_sweep(&Base::new(params), &phi_x, &[Quantity::Shifts], &o.sweep)?,
        ),
        dataset(
            "fig4b",
            run_sweep(&base, &phi_y, &[Quantity::Shifts], &o.sweep)?,
        ),
        dataset(
            "fig4c",
            run_sweep(&base, &phi_y, &[Quantity::Gd, Quantity::Gcr], &o.sweep)?,
        ),
        dataset(
            "fig4d",
            run_sweep(&base, &omega_y, &[Quantity::Gd, Quantity::Gcr], &o.sweep)?,
        ),
    ])
}

/// Maximum frequency of a transmon with the Josephson energy of
/// (`omega_max`, `alpha`) but anharmonicity `new_alpha`.
fn omega_max_at_fixed_ej(omega_max: f64, alpha: f64, new_alpha: f64) -> Result<f64> {
    let ej = josephson_energy_for(omega_max, -alpha)?;
    Ok(qubit_frequency(ej, -new_alpha)?.omega)
}

fn fig5(p: &CircuitParams, o: &FigureOptions) -> Result<Vec<Dataset>> {
    let n = o.points(DEFAULT_POINTS_1D);
    let omega_y = SweepSpec::line(Axis::new(SweepVariable::OmegaY, 4.2, 5.0, n));
    let mut blocks = Vec::new();
    for omega_x in [4.56, 4.53] {
        for g_xy in [0.0, 0.5, 1.0] {
            let base = Base::new(with_g_xy(p, g_xy)).with_omega_x(omega_x);
            blocks.push((
                vec![omega_x, g_xy],
                run_sweep(&base, &omega_y, &[Quantity::Gcr], &o.sweep)?,
            ));
        }
    }
    let fig5a = stack(&["omega_x_ghz", "g_xy_mhz"], blocks);

    let phi_y = SweepSpec::line(Axis::new(SweepVariable::PhiY, 0.0, 1.2, n));
    let mut blocks = Vec::new();
    for alpha_mhz in [-190.0, -195.0, -200.0] {
        let alpha = alpha_mhz * 1e-3;
        let omega_y_max = omega_max_at_fixed_ej(p.omega_y_max, p.alpha_y, alpha)?;
        let params = CircuitParams {
            alpha_y: alpha,
            omega_y_max,
            ..with_g_xy(p, 0.5)
        };
        let base = Base::new(params).with_omega_x(4.56);
        blocks.push((
            vec![alpha_mhz, omega_y_max],
            run_sweep(&base, &phi_y, &[Quantity::Gcr], &o.sweep)?,
        ));
    }
    let fig5b = stack(&["alpha_y_mhz", "omega_y_max_ghz"], blocks);
    Ok(vec![dataset("fig5a", fig5a), dataset("fig5b", fig5b)])
}

fn zz_figure(
    name: &str,
    p: &CircuitParams,
    o: &FigureOptions,
    omega_x: f64,
    g_xy_set: &[f64],
    cross_kerr: bool,
) -> Result<Vec<Dataset>> {
    let spec = SweepSpec::line(Axis::new(
        SweepVariable::OmegaY,
        4.2,
        5.0,
        o.points(DEFAULT_POINTS_1D),
    ));
    let zz = if cross_kerr {
        Quantity::ZzCrossKerr
    } else {
        Quantity::Zz
    };
    let mut blocks = Vec::new();
    for &g_xy in g_xy_set {
        let base = Base::new(with_g_xy(p, g_xy)).with_omega_x(omega_x);
        blocks.push((
            vec![g_xy],
            run_sweep(&base, &spec, &[Quantity::Gcr, zz], &o.sweep)?,
        ));
    }
    Ok(vec![dataset(name, stack(&["g_xy_mhz"], blocks))])
}

fn fig7(p: &CircuitParams, o: &FigureOptions) -> Result<Vec<Dataset>> {
    let spec = SweepSpec::line(Axis::new(
        SweepVariable::OmegaY,
        3.6,
        4.6,
        o.points(DEFAULT_POINTS_1D),
    ));
    let mut blocks = Vec::new();
    let mut roots = Table::new([
        "omega_x_ghz",
        "g_xy_mhz",
        "kind",
        "omega_y_ghz",
        "residual_mhz",
    ]);
    for omega_x in [4.0, 3.95] {
        for g_xy in [0.9, 1.0, 1.2, 1.6] {
            let base = Base::new(with_g_xy(p, g_xy)).with_omega_x(omega_x);
            blocks.push((
                vec![omega_x, g_xy],
                run_sweep(&base, &spec, &[Quantity::Gcr, Quantity::Zz], &o.sweep)?,
            ));
            let SwitchOff::Roots(off) = find_switchoff(&base, &spec, CouplingKind::Gcr)? else {
                unreachable!("line sweeps give roots")
            };
            let zero = find_zz_zero(&base, &spec, &ZzOptions::default())?;
            for (kind, report) in [("g_cr_zero", off), ("zz_zero", zero)] {
                for r in report.roots {
                    roots.push(vec![
                        format_float(omega_x),
                        format_float(g_xy),
                        kind.to_string(),
                        format_float(r.location),
                        format_float(r.residual * 1e3),
                    ]);
                }
            }
        }
    }
    Ok(vec![
        dataset("fig7", stack(&["omega_x_ghz", "g_xy_mhz"], blocks)),
        dataset("fig7_roots", roots),
    ])
}

fn fig10(p: &CircuitParams, o: &FigureOptions) -> Result<Vec<Dataset>> {
    let n = o.points(LEVEL_SURFACE_POINTS);
    let spec = SweepSpec::grid(
        Axis::new(SweepVariable::PhiX, -PHASE_LIMIT, PHASE_LIMIT, n),
        Axis::new(SweepVariable::PhiY, -PHASE_LIMIT, PHASE_LIMIT, n),
    );
    let sweep = level_sweep(&Base::new(*p), &spec, &o.sweep)?;
    Ok(vec![
        dataset("fig10_single", level_table(&sweep, &SINGLE_EXCITATIONS)?),
        dataset("fig10_double", level_table(&sweep, &DOUBLE_EXCITATIONS)?),
    ])
}
