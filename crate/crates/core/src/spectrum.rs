//! Diagonalization, bare-state labelling, level tracking and numeric ZZ.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use rayon::prelude::*;

use crate::circuit::OperatingPoint;
use crate::error::{Error, Result};
use crate::hamiltonian::{
    build_hamiltonian, max_asymmetry, BasisIndex, BuildOptions, HamiltonianMatrix,
    TruncationScheme, HERMITIAN_TOL,
};

/// Below this overlap a label is ambiguous.
pub const HYBRIDIZATION_THRESHOLD: f64 = 0.5;

pub const GROUND: BasisIndex = BasisIndex::new(0, 0, 0, 0);
pub const X_EXCITED: BasisIndex = BasisIndex::new(0, 1, 0, 0);
pub const Y_EXCITED: BasisIndex = BasisIndex::new(0, 0, 1, 0);
pub const BOTH_EXCITED: BasisIndex = BasisIndex::new(0, 1, 1, 0);

/// Ascending eigenvalues with eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn diagonalize(h: &HamiltonianMatrix) -> Result<Eigenpairs> {
    diagonalize_matrix(&h.matrix)
}

pub fn diagonalize_matrix(m: &DMatrix<f64>) -> Result<Eigenpairs> {
    if !m.is_square() {
        return Err(Error::Domain(format!(
            "matrix is {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let asym = max_asymmetry(m);
    if asym > HERMITIAN_TOL * m.amax().max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.nrows(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigenpairs { values, vectors })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelEnergy {
    pub energy: f64,
    pub overlap: f64,
    pub hybridized: bool,
}

#[derive(Debug, Clone)]
pub struct LabeledSpectrum {
    pub eigen: Eigenpairs,
    pub truncation: TruncationScheme,
    /// Flat bare index assigned to each eigenindex.
    pub label_of: Vec<usize>,
    /// Eigenindex assigned to each flat bare index.
    pub eigen_of: Vec<usize>,
    /// |⟨bare|eigen⟩|² of each assigned pair, indexed by eigenindex.
    pub overlaps: Vec<f64>,
}

impl LabeledSpectrum {
    pub fn level(&self, s: &BasisIndex) -> Result<LevelEnergy> {
        let b = self.truncation.flatten(s)?;
        let e = self.eigen_of[b];
        let overlap = self.overlaps[e];
        Ok(LevelEnergy {
            energy: self.eigen.values[e],
            overlap,
            hybridized: overlap < HYBRIDIZATION_THRESHOLD,
        })
    }

    pub fn energy(&self, s: &BasisIndex) -> Result<f64> {
        Ok(self.level(s)?.energy)
    }

    pub fn label(&self, eigenindex: usize) -> BasisIndex {
        self.truncation
            .unflatten(self.label_of[eigenindex])
            .expect("assignment stays inside the truncation")
    }

    /// Dressed eigenvector carrying the label `s`.
    pub fn vector(&self, s: &BasisIndex) -> Result<nalgebra::DVectorView<'_, f64>> {
        let b = self.truncation.flatten(s)?;
        Ok(self.eigen.vectors.column(self.eigen_of[b]))
    }
}

/// Greedy maximum-overlap assignment: pairs are taken in descending
/// |⟨bare|eigen⟩|² and each bare state and eigenvector is used once.
pub fn label_states(eigen: Eigenpairs, trunc: &TruncationScheme) -> Result<LabeledSpectrum> {
    let n = trunc.dimension();
    if eigen.values.len() != n || eigen.vectors.nrows() != n {
        return Err(Error::Truncation(format!(
            "eigenbasis of size {} does not match truncation dimension {n}",
            eigen.values.len()
        )));
    }
    let (label_of, eigen_of, overlaps) = greedy_match(n, |b, e| eigen.vectors[(b, e)].powi(2));
    Ok(LabeledSpectrum {
        eigen,
        truncation: *trunc,
        label_of,
        eigen_of,
        overlaps,
    })
}

/// Greedy bipartite matching on an n×n weight `w(row, col)`. Returns
/// (row of each col, col of each row, weight of each col's pair).
fn greedy_match(n: usize, w: impl Fn(usize, usize) -> f64) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            pairs.push((w(r, c), r, c));
        }
    }
    pairs.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut row_of = vec![usize::MAX; n];
    let mut col_of = vec![usize::MAX; n];
    let mut weight = vec![0.0; n];
    let mut left = n;
    for (v, r, c) in pairs {
        if col_of[r] != usize::MAX || row_of[c] != usize::MAX {
            continue;
        }
        col_of[r] = c;
        row_of[c] = r;
        weight[c] = v;
        left -= 1;
        if left == 0 {
            break;
        }
    }
    (row_of, col_of, weight)
}

pub fn spectrum_at(
    p: &OperatingPoint,
    trunc: &TruncationScheme,
    opts: &BuildOptions,
) -> Result<LabeledSpectrum> {
    let h = build_hamiltonian(p, trunc, opts)?;
    label_states(diagonalize(&h)?, trunc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericZz {
    /// E(0110) − E(0100) − E(0010) + E(0000) in GHz.
    pub value: f64,
    /// Set when any of the four states is hybridized.
    pub unreliable: bool,
}

pub fn zz_numeric(spec: &LabeledSpectrum) -> Result<NumericZz> {
    let l11 = spec.level(&BOTH_EXCITED)?;
    let l10 = spec.level(&X_EXCITED)?;
    let l01 = spec.level(&Y_EXCITED)?;
    let l00 = spec.level(&GROUND)?;
    let value = l11.energy - l10.energy - l01.energy + l00.energy;
    let unreliable = [l11, l10, l01, l00].iter().any(|l| l.hybridized);
    Ok(NumericZz { value, unreliable })
}

/// Off-diagonal element of the effective 2×2 Hamiltonian for two labelled
/// states. The dressed pair is mapped back onto the bare pair by the
/// closest orthogonal transformation (polar factor of the overlap block),
/// so the result is the exchange coupling between the two labels even far
/// from resonance.
pub fn effective_exchange(spec: &LabeledSpectrum, s1: &BasisIndex, s2: &BasisIndex) -> Result<f64> {
    let b1 = spec.truncation.flatten(s1)?;
    let b2 = spec.truncation.flatten(s2)?;
    let (e1, e2) = (spec.eigen_of[b1], spec.eigen_of[b2]);
    let v = &spec.eigen.vectors;
    let block = Matrix2::new(v[(b1, e1)], v[(b1, e2)], v[(b2, e1)], v[(b2, e2)]);
    let svd = block.svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::Domain("overlap block decomposition failed".into())),
    };
    let q = u * vt;
    let d = Matrix2::new(spec.eigen.values[e1], 0.0, 0.0, spec.eigen.values[e2]);
    let h_eff = q * d * q.transpose();
    Ok(h_eff[(0, 1)])
}

/// Splitting the pair would show at resonance: 2|J| of [`effective_exchange`].
pub fn exchange_gap(spec: &LabeledSpectrum, s1: &BasisIndex, s2: &BasisIndex) -> Result<f64> {
    Ok(2.0 * effective_exchange(spec, s1, s2)?.abs())
}

/// One grid point of a level sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub phi_x: f64,
    pub phi_y: f64,
    pub point: OperatingPoint,
}

/// Per-point labelled spectra plus adiabatic branches.
#[derive(Debug, Clone)]
pub struct LevelSweep {
    pub truncation: TruncationScheme,
    pub coords: Vec<(f64, f64)>,
    pub energies: Vec<Vec<f64>>,
    /// Flat bare label of each eigenindex at each point.
    pub labels: Vec<Vec<usize>>,
    pub overlaps: Vec<Vec<f64>>,
    /// `branches[k][i]`: eigenindex at point `i` of the branch that starts
    /// on eigenindex `k` at the first point.
    pub branches: Vec<Vec<usize>>,
    /// |⟨v_prev|v_next⟩|² of every branch step, indexed like `branches`.
    pub continuity: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
}

/// Points processed per parallel batch (bounds eigenvector memory).
const SWEEP_BATCH: usize = 64;

/// Branch steps whose continuity overlap falls below this are counted as
/// ambiguous; a warning is raised if more than [`COARSE_FRACTION`] of the
/// branches are ambiguous on some step.
const CONTINUITY_THRESHOLD: f64 = 0.5;
const COARSE_FRACTION: f64 = 0.05;

pub fn sweep_levels(
    grid: &[SweepPoint],
    trunc: &TruncationScheme,
    opts: &BuildOptions,
) -> Result<LevelSweep> {
    if grid.is_empty() {
        return Err(Error::Sweep("empty grid".into()));
    }
    let n = trunc.dimension();
    let mut out = LevelSweep {
        truncation: *trunc,
        coords: grid.iter().map(|g| (g.phi_x, g.phi_y)).collect(),
        energies: Vec::with_capacity(grid.len()),
        labels: Vec::with_capacity(grid.len()),
        overlaps: Vec::with_capacity(grid.len()),
        branches: vec![Vec::with_capacity(grid.len()); n],
        continuity: vec![Vec::with_capacity(grid.len()); n],
        warnings: Vec::new(),
    };
    let mut prev: Option<DMatrix<f64>> = None;
    let mut coarse_steps = 0usize;
    for (batch_no, batch) in grid.chunks(SWEEP_BATCH).enumerate() {
        let spectra: Vec<LabeledSpectrum> = batch
            .par_iter()
            .map(|g| spectrum_at(&g.point, trunc, opts))
            .collect::<Result<_>>()?;
        for (k, spec) in spectra.into_iter().enumerate() {
            let idx = batch_no * SWEEP_BATCH + k;
            match &prev {
                None => {
                    for b in 0..n {
                        out.branches[b].push(b);
                        out.continuity[b].push(1.0);
                    }
                }
                Some(pv) => {
                    let ov = pv.transpose() * &spec.eigen.vectors;
                    let (_, next_of, _) = greedy_match(n, |r, c| ov[(r, c)].powi(2));
                    let mut ambiguous = 0;
                    for b in 0..n {
                        let last = out.branches[b][idx - 1];
                        let next = next_of[last];
                        let c = ov[(last, next)].powi(2);
                        if c < CONTINUITY_THRESHOLD {
                            ambiguous += 1;
                        }
                        out.branches[b].push(next);
                        out.continuity[b].push(c);
                    }
                    if ambiguous as f64 > COARSE_FRACTION * n as f64 {
                        coarse_steps += 1;
                    }
                }
            }
            out.energies.push(spec.eigen.values.clone());
            out.overlaps.push(spec.overlaps.clone());
            out.labels.push(spec.label_of.clone());
            prev = Some(spec.eigen.vectors);
        }
    }
    if coarse_steps > 0 {
        let msg = format!(
            "grid step too coarse: {coarse_steps} step(s) with ambiguous eigenvector continuity"
        );
        log::warn!("{msg}");
        out.warnings.push(msg);
    }
    Ok(out)
}

impl LevelSweep {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Eigenindex carrying `label` at point `i` (per-point labels).
    pub fn eigen_for_label(&self, i: usize, label: &BasisIndex) -> Result<usize> {
        let b = self.truncation.flatten(label)?;
        self.labels[i]
            .iter()
            .position(|&l| l == b)
            .ok_or_else(|| Error::MissingState(label.to_string()))
    }

    /// Branch that carries `label` at the first grid point.
    pub fn branch_for_label(&self, label: &BasisIndex) -> Result<usize> {
        self.eigen_for_label(0, label)
    }

    /// Energies along the branch starting on `label`.
    pub fn tracked_energies(&self, label: &BasisIndex) -> Result<Vec<f64>> {
        let b = self.branch_for_label(label)?;
        Ok(self.branches[b]
            .iter()
            .enumerate()
            .map(|(i, &e)| self.energies[i][e])
            .collect())
    }

    /// Smallest separation of two tracked branches and the grid index where
    /// it occurs.
    pub fn min_gap(&self, l1: &BasisIndex, l2: &BasisIndex) -> Result<(f64, usize)> {
        let e1 = self.tracked_energies(l1)?;
        let e2 = self.tracked_energies(l2)?;
        Ok(e1
            .iter()
            .zip(&e2)
            .map(|(a, b)| (a - b).abs())
            .enumerate()
            .fold(
                (f64::INFINITY, 0),
                |acc, (i, g)| if g < acc.0 { (g, i) } else { acc },
            ))
    }
}
