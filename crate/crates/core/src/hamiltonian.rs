//! Truncated Fock-space matrix of the full four-device Hamiltonian.
//!
//! The basis is the product |m_a m_x m_y m_b⟩ with device order (a, x, y, b);
//! the flattened index runs fastest over `m_b`. Each mode carries its bare
//! energy `ω a†a` (plus `α/2 a†a†aa` for the qubits) and every pair is
//! coupled through `g (p†q + p q† − p†q† − p q)`.

use std::fmt;
use std::io::Write;

use nalgebra::DMatrix;

use crate::circuit::OperatingPoint;
use crate::error::{Error, Result};

/// Relative tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    X,
    Y,
    B,
}

impl Mode {
    pub const ORDER: [Mode; 4] = [Mode::A, Mode::X, Mode::Y, Mode::B];

    fn slot(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::X => 1,
            Mode::Y => 2,
            Mode::B => 3,
        }
    }

    pub fn is_qubit(self) -> bool {
        matches!(self, Mode::X | Mode::Y)
    }
}

/// Number of retained levels per device.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationScheme {
    pub n_levels_a: usize,
    pub n_levels_x: usize,
    pub n_levels_y: usize,
    pub n_levels_b: usize,
}

impl Default for TruncationScheme {
    /// Qubits up to their second excited state, resonators up to the third.
    fn default() -> Self {
        TruncationScheme {
            n_levels_a: 4,
            n_levels_x: 3,
            n_levels_y: 3,
            n_levels_b: 4,
        }
    }
}

impl TruncationScheme {
    pub fn new(a: usize, x: usize, y: usize, b: usize) -> Result<Self> {
        let t = TruncationScheme {
            n_levels_a: a,
            n_levels_x: x,
            n_levels_y: y,
            n_levels_b: b,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels().iter().any(|&n| n < 2) {
            return Err(Error::Truncation(format!(
                "every device needs at least 2 levels, got {:?}",
                self.levels()
            )));
        }
        Ok(())
    }

    /// Level counts in device order (a, x, y, b).
    pub fn levels(&self) -> [usize; 4] {
        [
            self.n_levels_a,
            self.n_levels_x,
            self.n_levels_y,
            self.n_levels_b,
        ]
    }

    pub fn n_levels(&self, mode: Mode) -> usize {
        self.levels()[mode.slot()]
    }

    pub fn dimension(&self) -> usize {
        self.levels().iter().product()
    }

    pub fn flatten(&self, s: &BasisIndex) -> Result<usize> {
        let n = self.levels();
        let m = s.occupations();
        if m.iter().zip(n.iter()).any(|(m, n)| m >= n) {
            return Err(Error::IndexOutOfRange(format!(
                "{s} outside truncation {n:?}"
            )));
        }
        Ok(((m[0] * n[1] + m[1]) * n[2] + m[2]) * n[3] + m[3])
    }

    pub fn unflatten(&self, index: usize) -> Result<BasisIndex> {
        if index >= self.dimension() {
            return Err(Error::IndexOutOfRange(format!(
                "flat index {index} ≥ dimension {}",
                self.dimension()
            )));
        }
        let n = self.levels();
        let mut rest = index;
        let mut m = [0usize; 4];
        for k in (0..4).rev() {
            m[k] = rest % n[k];
            rest /= n[k];
        }
        Ok(BasisIndex::from_occupations(m))
    }

    pub fn states(&self) -> impl Iterator<Item = BasisIndex> + '_ {
        (0..self.dimension()).map(move |i| self.unflatten(i).expect("index below dimension"))
    }
}

/// Occupation numbers of the product state |m_a m_x m_y m_b⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub m_a: usize,
    pub m_x: usize,
    pub m_y: usize,
    pub m_b: usize,
}

impl BasisIndex {
    pub const fn new(m_a: usize, m_x: usize, m_y: usize, m_b: usize) -> Self {
        BasisIndex { m_a, m_x, m_y, m_b }
    }

    pub fn from_occupations(m: [usize; 4]) -> Self {
        BasisIndex::new(m[0], m[1], m[2], m[3])
    }

    pub fn occupations(&self) -> [usize; 4] {
        [self.m_a, self.m_x, self.m_y, self.m_b]
    }

    pub fn occupation(&self, mode: Mode) -> usize {
        self.occupations()[mode.slot()]
    }

    pub fn excitations(&self) -> usize {
        self.occupations().iter().sum()
    }

    /// Parses the compact label `0110` or the comma form `0,1,1,0`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s
            .trim()
            .trim_start_matches('|')
            .trim_end_matches(['>', '⟩']);
        let parts: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::IndexOutOfRange(format!("bad state label {s:?}: {e}")))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::IndexOutOfRange(format!("bad state label {s:?}")))?
        };
        let m: [usize; 4] = parts.try_into().map_err(|_| {
            Error::IndexOutOfRange(format!("state label {s:?} needs 4 occupations"))
        })?;
        Ok(BasisIndex::from_occupations(m))
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.occupations();
        if m.iter().all(|&k| k < 10) {
            write!(f, "{}{}{}{}", m[0], m[1], m[2], m[3])
        } else {
            write!(f, "{},{},{},{}", m[0], m[1], m[2], m[3])
        }
    }
}

/// Matrix elements used for the qubit ladder operators. Resonators are
/// always bosonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingConvention {
    /// ⟨n−1|a|n⟩ = √n.
    #[default]
    Bosonic,
    /// ⟨n−1|a|n⟩ = 1 for every transition.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildOptions {
    /// Drop the counter-rotating `p†q† + pq` pieces.
    pub rwa: bool,
    pub convention: CouplingConvention,
}

#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub matrix: DMatrix<f64>,
    pub truncation: TruncationScheme,
    pub point: OperatingPoint,
    pub options: BuildOptions,
}

impl HamiltonianMatrix {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest |H_ij − H_ji|.
    pub fn max_asymmetry(&self) -> f64 {
        max_asymmetry(&self.matrix)
    }

    /// Diagonal total-excitation-number operator in the same basis.
    pub fn excitation_number(&self) -> DMatrix<f64> {
        let d: Vec<f64> = self
            .truncation
            .states()
            .map(|s| s.excitations() as f64)
            .collect();
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
    }

    /// Writes the non-zero entries as `row,col,value` CSV.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "row,col,value")?;
        for i in 0..self.dimension() {
            for j in 0..self.dimension() {
                let v = self.matrix[(i, j)];
                if v != 0.0 {
                    writeln!(w, "{i},{j},{}", crate::analysis::csv::format_float(v))?;
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Σ_λ m_λ ω_λ + Σ_β [m_β ω_β + m_β(m_β − 1) α_β / 2].
pub fn bare_energy(s: &BasisIndex, p: &OperatingPoint) -> f64 {
    let duffing = |m: usize, w: f64, a: f64| {
        let m = m as f64;
        m * w + 0.5 * m * (m - 1.0) * a
    };
    s.m_a as f64 * p.omega_a
        + s.m_b as f64 * p.omega_b
        + duffing(s.m_x, p.omega_x, p.alpha_x)
        + duffing(s.m_y, p.omega_y, p.alpha_y)
}

/// [`bare_energy`] with a range check against a truncation.
pub fn bare_energy_checked(
    s: &BasisIndex,
    p: &OperatingPoint,
    trunc: &TruncationScheme,
) -> Result<f64> {
    trunc.flatten(s)?;
    Ok(bare_energy(s, p))
}

fn lowering_element(mode: Mode, n: usize, convention: CouplingConvention) -> f64 {
    match (mode.is_qubit(), convention) {
        (true, CouplingConvention::Uniform) => 1.0,
        _ => (n as f64).sqrt(),
    }
}

pub fn build_hamiltonian(
    p: &OperatingPoint,
    trunc: &TruncationScheme,
    opts: &BuildOptions,
) -> Result<HamiltonianMatrix> {
    trunc.validate()?;
    let fields = [
        p.omega_a, p.omega_b, p.omega_x, p.omega_y, p.alpha_x, p.alpha_y, p.g_ax, p.g_ay, p.g_bx,
        p.g_by, p.g_xy, p.g_ab,
    ];
    if fields.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(
            "operating point has non-finite entries".into(),
        ));
    }

    let dim = trunc.dimension();
    let levels = trunc.levels();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    let pairs = [
        (Mode::A, Mode::X, p.g_ax),
        (Mode::A, Mode::Y, p.g_ay),
        (Mode::B, Mode::X, p.g_bx),
        (Mode::B, Mode::Y, p.g_by),
        (Mode::A, Mode::B, p.g_ab),
        (Mode::X, Mode::Y, p.g_xy),
    ];

    for col in 0..dim {
        let s = trunc.unflatten(col)?;
        h[(col, col)] = bare_energy(&s, p);
        let m = s.occupations();
        for &(mp, mq, g) in &pairs {
            if g == 0.0 {
                continue;
            }
            let (ip, iq) = (mp.slot(), mq.slot());
            // (dp, dq, sign): change in each occupation and the term's sign.
            let mut terms = vec![(1i32, -1i32, 1.0), (-1, 1, 1.0)];
            if !opts.rwa {
                terms.push((1, 1, -1.0));
                terms.push((-1, -1, -1.0));
            }
            for (dp, dq, sign) in terms {
                let np = m[ip] as i64 + dp as i64;
                let nq = m[iq] as i64 + dq as i64;
                if np < 0 || nq < 0 || np as usize >= levels[ip] || nq as usize >= levels[iq] {
                    continue;
                }
                // Ladder element connecting the lower and upper occupation.
                let amp_p = lowering_element(mp, m[ip].max(np as usize), opts.convention);
                let amp_q = lowering_element(mq, m[iq].max(nq as usize), opts.convention);
                let mut t = m;
                t[ip] = np as usize;
                t[iq] = nq as usize;
                let row = trunc.flatten(&BasisIndex::from_occupations(t))?;
                h[(row, col)] += sign * g * amp_p * amp_q;
            }
        }
    }

    let asym = max_asymmetry(&h);
    let scale = h.amax().max(f64::MIN_POSITIVE);
    if asym > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }
    Ok(HamiltonianMatrix {
        matrix: h,
        truncation: *trunc,
        point: *p,
        options: *opts,
    })
}
