//! N-qubit states, real-plane measurement bases, and Born-rule behavior
//! tables.
//!
//! Measurement bases are parametrized by one angle per (party, setting):
//! the `+` vector is `(cos a, sin a)` and the `-` vector is
//! `(-sin a, cos a)`. There is no azimuthal phase; the whole crate works
//! in the real plane of the Bloch sphere.

mod eigen;
mod states;

pub use states::{named_state, NamedState};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;

use crate::error::Error;
use crate::math;
use crate::{Result, MAX_PARTIES};

/// Unit-norm tolerance for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Smallest admissible density-matrix eigenvalue.
pub const PSD_TOL: f64 = -1e-10;
/// Probability range slack for behavior tables.
pub const PROB_TOL: f64 = 1e-12;
/// Per-setting normalization tolerance for behavior tables.
pub const SETTING_SUM_TOL: f64 = 1e-10;
/// No-signaling check tolerance.
pub const NO_SIGNALING_TOL: f64 = 1e-10;

/// Bit mask of party `j` (0-based) in an N-bit basis/settings/outcome
/// index. Party 0 is the most significant bit.
#[inline(always)]
pub const fn party_bit(num_parties: usize, party: usize) -> usize {
    1 << (num_parties - 1 - party)
}

fn check_num_parties(num_parties: usize) -> Result<()> {
    if num_parties == 0 || num_parties > MAX_PARTIES {
        return Err(Error::InvalidArgument(format!(
            "num_parties must be in 1..={MAX_PARTIES}, got {num_parties}"
        )));
    }
    Ok(())
}

/// Measurement basis for one angle: the `(plus, minus)` pair
/// `((cos a, sin a), (-sin a, cos a))`.
pub fn measurement_basis(alpha: f64) -> Result<([f64; 2], [f64; 2])> {
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument(String::from(
            "measurement angle must be finite",
        )));
    }
    let (c, s) = (math::cos(alpha), math::sin(alpha));
    Ok(([c, s], [-s, c]))
}

/// A normalized N-qubit state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_parties: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from already-normalized amplitudes.
    pub fn new(num_parties: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_num_parties(num_parties)?;
        if amplitudes.len() != 1 << num_parties {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_parties,
                got: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state norm^2 = {norm_sq}, expected 1 within {NORM_TOL}"
            )));
        }
        Ok(Self {
            num_parties,
            amplitudes,
        })
    }

    /// Normalizes an arbitrary nonzero vector; returns the state and the
    /// norm that was divided out.
    pub fn from_unnormalized(num_parties: usize, amplitudes: Vec<Complex64>) -> Result<(Self, f64)> {
        check_num_parties(num_parties)?;
        if amplitudes.len() != 1 << num_parties {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_parties,
                got: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq < 1e-300 {
            return Err(Error::InvalidArgument(String::from(
                "cannot normalize a zero amplitude vector",
            )));
        }
        let norm = math::sqrt(norm_sq);
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok((
            Self {
                num_parties,
                amplitudes,
            },
            norm,
        ))
    }

    pub fn num_parties(&self) -> usize {
        self.num_parties
    }

    pub fn dim(&self) -> usize {
        1 << self.num_parties
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// The rank-one density matrix |psi><psi|.
    pub fn density(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix {
            num_parties: self.num_parties,
            entries,
        }
    }
}

/// A dense N-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_parties: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness
    /// (eigenvalues down to [`PSD_TOL`]).
    pub fn new(num_parties: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_num_parties(num_parties)?;
        let dim = 1 << num_parties;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for i in 0..dim {
            for j in i..dim {
                let d = entries[i * dim + j] - entries[j * dim + i].conj();
                if d.norm_sqr() > DENSITY_TOL * DENSITY_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..dim).map(|i| entries[i * dim + i]).sum();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "trace = {trace}, expected 1 within {DENSITY_TOL}"
            )));
        }
        let rho = Self {
            num_parties,
            entries,
        };
        let min_eig = rho
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix is not positive semidefinite (min eigenvalue {min_eig})"
            )));
        }
        Ok(rho)
    }

    pub fn num_parties(&self) -> usize {
        self.num_parties
    }

    pub fn dim(&self) -> usize {
        1 << self.num_parties
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    /// Eigenvalues of the (Hermitian) matrix, unsorted.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigen::hermitian_eigenvalues(&self.entries, self.dim())
    }
}

/// White-noise mixture `p |psi><psi| + (1 - p) I / 2^N`.
pub fn white_noise_mix(psi: &PureState, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "visibility p must lie in [0, 1], got {p}"
        )));
    }
    let dim = psi.dim();
    let mut rho = psi.density();
    let mixed = (1.0 - p) / dim as f64;
    for i in 0..dim {
        for j in 0..dim {
            let e = &mut rho.entries[i * dim + j];
            *e *= p;
            if i == j {
                *e += mixed;
            }
        }
    }
    Ok(rho)
}

/// A pure or mixed state, dispatched to the cheapest evaluation path.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn num_parties(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.num_parties(),
            QuantumState::Mixed(r) => r.num_parties(),
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(s: PureState) -> Self {
        QuantumState::Pure(s)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(r: DensityMatrix) -> Self {
        QuantumState::Mixed(r)
    }
}

/// Measurement angles, one pair per party: `alpha[party][setting]`.
///
/// Angles are stored normalized to `[0, 2*pi)`; probabilities are
/// invariant under shifts by `pi`, so optimizers report in `[0, pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTable {
    alpha: Vec<[f64; 2]>,
}

impl AngleTable {
    pub fn new(alpha: Vec<[f64; 2]>) -> Result<Self> {
        check_num_parties(alpha.len())?;
        if alpha.iter().flatten().any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument(String::from(
                "angles must be finite",
            )));
        }
        let alpha = alpha
            .into_iter()
            .map(|[a0, a1]| [math::rem_euclid(a0, TAU), math::rem_euclid(a1, TAU)])
            .collect();
        Ok(Self { alpha })
    }

    /// Builds from a flat party-major slice `[a_0^1, a_1^1, a_0^2, ...]`.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() % 2 != 0 {
            return Err(Error::InvalidArgument(String::from(
                "flat angle slice must have even length",
            )));
        }
        Self::new(flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect())
    }

    pub fn num_parties(&self) -> usize {
        self.alpha.len()
    }

    /// Angle of `party` (0-based) at `setting` (0 or 1).
    pub fn get(&self, party: usize, setting: usize) -> f64 {
        self.alpha[party][setting]
    }

    pub fn rows(&self) -> &[[f64; 2]] {
        &self.alpha
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.alpha.iter().flatten().copied().collect()
    }
}

/// The full conditional probability table P(outcomes | settings) over all
/// 2^N settings and 2^N outcome combinations.
///
/// Construction checks the probability range and per-setting
/// normalization. No-signaling holds for every quantum-generated table
/// and is exposed as [`BehaviorTable::no_signaling_violation`]; it is not
/// enforced here because deterministic bipartition-local vertices may
/// correlate parties within one side arbitrarily.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorTable {
    num_parties: usize,
    probabilities: Vec<f64>,
}

impl BehaviorTable {
    pub fn new(num_parties: usize, probabilities: Vec<f64>) -> Result<Self> {
        check_num_parties(num_parties)?;
        let dim = 1 << num_parties;
        if probabilities.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: probabilities.len(),
            });
        }
        for (i, &p) in probabilities.iter().enumerate() {
            if !p.is_finite() || !(-PROB_TOL..=1.0 + PROB_TOL).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "probability out of range at index {i}: {p}"
                )));
            }
        }
        for s in 0..dim {
            let sum: f64 = probabilities[s * dim..(s + 1) * dim].iter().sum();
            if (sum - 1.0).abs() > SETTING_SUM_TOL {
                return Err(Error::InvalidArgument(format!(
                    "outcome probabilities for settings {s:#b} sum to {sum}"
                )));
            }
        }
        Ok(Self {
            num_parties,
            probabilities,
        })
    }

    pub fn num_parties(&self) -> usize {
        self.num_parties
    }

    pub fn dim(&self) -> usize {
        1 << self.num_parties
    }

    /// P(outcomes | settings) with both arguments as bit vectors.
    #[inline]
    pub fn prob(&self, settings: usize, outcomes: usize) -> f64 {
        self.probabilities[settings * self.dim() + outcomes]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Largest deviation of any subset marginal from being independent of
    /// the complementary parties' settings.
    pub fn no_signaling_violation(&self) -> f64 {
        let n = self.num_parties;
        let dim = 1 << n;
        let mut worst = 0.0f64;
        for subset in 1..dim - 1 {
            // marginal over the subset's outcomes, per full settings vector
            let sub_outcomes: Vec<usize> = (0..dim).filter(|o| o & !subset == 0).collect();
            let mut reference: Vec<Option<Vec<f64>>> = vec![None; dim];
            for s in 0..dim {
                let key = s & subset;
                let mut marg = vec![0.0; sub_outcomes.len()];
                for o in 0..dim {
                    let pos = sub_outcomes
                        .iter()
                        .position(|&so| so == o & subset)
                        .expect("subset outcome present");
                    marg[pos] += self.prob(s, o);
                }
                match &reference[key] {
                    None => reference[key] = Some(marg),
                    Some(base) => {
                        for (a, b) in base.iter().zip(&marg) {
                            worst = worst.max((a - b).abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Full correlators E(settings) of the +/-1 outcome products.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTable {
    num_parties: usize,
    values: Vec<f64>,
}

impl CorrelatorTable {
    pub fn new(num_parties: usize, values: Vec<f64>) -> Result<Self> {
        check_num_parties(num_parties)?;
        if values.len() != 1 << num_parties {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_parties,
                got: values.len(),
            });
        }
        if values.iter().any(|e| !e.is_finite() || e.abs() > 1.0 + PROB_TOL) {
            return Err(Error::InvalidArgument(String::from(
                "correlators must lie in [-1, 1]",
            )));
        }
        Ok(Self {
            num_parties,
            values,
        })
    }

    pub fn num_parties(&self) -> usize {
        self.num_parties
    }

    /// E(settings).
    pub fn value(&self, settings: usize) -> f64 {
        self.values[settings]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// E(s) = sum over outcomes of the outcome-product sign times P(o|s).
pub fn correlators(b: &BehaviorTable) -> CorrelatorTable {
    let dim = b.dim();
    let values = (0..dim)
        .map(|s| {
            (0..dim)
                .map(|o| {
                    let sign = if (o as u32).count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    sign * b.prob(s, o)
                })
                .sum()
        })
        .collect();
    CorrelatorTable {
        num_parties: b.num_parties(),
        values,
    }
}

fn basis_vector(alpha: f64, outcome_bit: usize) -> [f64; 2] {
    let (c, s) = (math::cos(alpha), math::sin(alpha));
    if outcome_bit == 0 {
        [c, s]
    } else {
        [-s, c]
    }
}

/// Contracts `<m_1| x ... x <m_N | psi>` without materializing the
/// product vector. `vecs[j]` is party j's (real) bra.
fn contract_pure(psi: &[Complex64], vecs: &[[f64; 2]]) -> Complex64 {
    let mut cur: Vec<Complex64> = psi.to_vec();
    for v in vecs {
        let half = cur.len() / 2;
        for k in 0..half {
            cur[k] = cur[k] * v[0] + cur[k + half] * v[1];
        }
        cur.truncate(half);
    }
    cur[0]
}

/// `v^T rho v` for the real product vector defined by `vecs`.
fn quadratic_form_mixed(rho: &DensityMatrix, vecs: &[[f64; 2]]) -> f64 {
    let n = rho.num_parties();
    let dim = rho.dim();
    let mut v = vec![0.0f64; dim];
    for idx in 0..dim {
        let mut x = 1.0;
        for (j, vec2) in vecs.iter().enumerate() {
            let bit = (idx >> (n - 1 - j)) & 1;
            x *= vec2[bit];
        }
        v[idx] = x;
    }
    let mut acc = Complex64::ZERO;
    for i in 0..dim {
        let mut row = Complex64::ZERO;
        for j in 0..dim {
            row += rho.entries[i * dim + j] * v[j];
        }
        acc += row * v[i];
    }
    acc.re
}

fn party_vectors(
    num_parties: usize,
    settings: usize,
    outcomes: usize,
    lookup: impl Fn(usize, usize) -> f64,
) -> Vec<[f64; 2]> {
    (0..num_parties)
        .map(|j| {
            let bit = party_bit(num_parties, j);
            let setting = usize::from(settings & bit != 0);
            let outcome = usize::from(outcomes & bit != 0);
            basis_vector(lookup(j, setting), outcome)
        })
        .collect()
}

/// Born-rule probability of one (settings, outcomes) pair.
pub fn joint_probability(
    state: &QuantumState,
    settings: usize,
    outcomes: usize,
    angles: &AngleTable,
) -> Result<f64> {
    let n = state.num_parties();
    if angles.num_parties() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: angles.num_parties(),
        });
    }
    if settings >> n != 0 || outcomes >> n != 0 {
        return Err(Error::InvalidArgument(format!(
            "settings/outcomes index out of range for {n} parties"
        )));
    }
    Ok(term_probability_flat(
        state,
        settings,
        outcomes,
        &angles.to_flat(),
    ))
}

/// Unchecked fast path used by the optimizer: `flat` is the party-major
/// angle slice of length 2N.
pub(crate) fn term_probability_flat(
    state: &QuantumState,
    settings: usize,
    outcomes: usize,
    flat: &[f64],
) -> f64 {
    let n = state.num_parties();
    let vecs = party_vectors(n, settings, outcomes, |j, s| flat[2 * j + s]);
    match state {
        QuantumState::Pure(psi) => contract_pure(psi.amplitudes(), &vecs).norm_sqr(),
        QuantumState::Mixed(rho) => quadratic_form_mixed(rho, &vecs),
    }
}

/// Applies the basis rotation of `party` (rows `(c, s)` and `(-s, c)`)
/// to a state vector.
fn rotate_party_pure(amps: &mut [Complex64], num_parties: usize, party: usize, alpha: f64) {
    let (c, s) = (math::cos(alpha), math::sin(alpha));
    let stride = party_bit(num_parties, party);
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = a0 * c + a1 * s;
            amps[i + stride] = a1 * c - a0 * s;
        }
        base += 2 * stride;
    }
}

/// Same rotation applied to a density matrix: `rho -> U rho U^T`
/// (the rotation is real).
fn rotate_party_mixed(entries: &mut [Complex64], dim: usize, num_parties: usize, party: usize, alpha: f64) {
    let (c, s) = (math::cos(alpha), math::sin(alpha));
    let stride = party_bit(num_parties, party);
    // rows
    for col in 0..dim {
        let mut base = 0;
        while base < dim {
            for i in base..base + stride {
                let a0 = entries[i * dim + col];
                let a1 = entries[(i + stride) * dim + col];
                entries[i * dim + col] = a0 * c + a1 * s;
                entries[(i + stride) * dim + col] = a1 * c - a0 * s;
            }
            base += 2 * stride;
        }
    }
    // columns
    for row in 0..dim {
        let r = &mut entries[row * dim..(row + 1) * dim];
        let mut base = 0;
        while base < dim {
            for i in base..base + stride {
                let a0 = r[i];
                let a1 = r[i + stride];
                r[i] = a0 * c + a1 * s;
                r[i + stride] = a1 * c - a0 * s;
            }
            base += 2 * stride;
        }
    }
}

/// Fills the full behavior table by rotating the state into each
/// measurement product basis (one rotation pass per settings vector).
pub fn behavior(state: &QuantumState, angles: &AngleTable) -> Result<BehaviorTable> {
    let n = state.num_parties();
    if angles.num_parties() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: angles.num_parties(),
        });
    }
    let dim = 1 << n;
    let mut probabilities = vec![0.0f64; dim * dim];
    match state {
        QuantumState::Pure(psi) => {
            for s in 0..dim {
                let mut amps = psi.amplitudes().to_vec();
                for j in 0..n {
                    let setting = usize::from(s & party_bit(n, j) != 0);
                    rotate_party_pure(&mut amps, n, j, angles.get(j, setting));
                }
                for o in 0..dim {
                    probabilities[s * dim + o] = amps[o].norm_sqr();
                }
            }
        }
        QuantumState::Mixed(rho) => {
            for s in 0..dim {
                let mut entries = rho.entries.clone();
                for j in 0..n {
                    let setting = usize::from(s & party_bit(n, j) != 0);
                    rotate_party_mixed(&mut entries, dim, n, j, angles.get(j, setting));
                }
                for o in 0..dim {
                    probabilities[s * dim + o] = entries[o * dim + o].re;
                }
            }
        }
    }
    // clamp float dust so the table meets its own invariants exactly
    for p in &mut probabilities {
        *p = p.clamp(0.0, 1.0);
    }
    BehaviorTable::new(n, probabilities)
}

/// Correlator E(settings) straight from the state, without building the
/// behavior table. Used by the Svetlichny search.
pub(crate) fn correlator_flat(state: &QuantumState, settings: usize, flat: &[f64]) -> f64 {
    let n = state.num_parties();
    let dim = 1 << n;
    match state {
        QuantumState::Pure(psi) => {
            let mut amps = psi.amplitudes().to_vec();
            for j in 0..n {
                let setting = usize::from(settings & party_bit(n, j) != 0);
                rotate_party_pure(&mut amps, n, j, flat[2 * j + setting]);
            }
            (0..dim)
                .map(|o| {
                    let sign = if (o as u32).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    sign * amps[o].norm_sqr()
                })
                .sum()
        }
        QuantumState::Mixed(rho) => {
            let mut entries = rho.entries.clone();
            for j in 0..n {
                let setting = usize::from(settings & party_bit(n, j) != 0);
                rotate_party_mixed(&mut entries, dim, n, j, flat[2 * j + setting]);
            }
            (0..dim)
                .map(|o| {
                    let sign = if (o as u32).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    sign * entries[o * dim + o].re
                })
                .sum()
        }
    }
}

#[cfg(test)]
mod tests;
