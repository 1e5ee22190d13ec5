//! Finite-dimensional state vectors, projective observables, Born-rule
//! probabilities, collapse and unitary evolution.
//!
//! Observables are given by their spectral decomposition ([`Pvm`]) rather
//! than as raw Hermitian matrices, so no eigensolver is needed. Every
//! constructor validates its invariants; the rest of the API can then assume
//! them.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{self, Matrix, ONE, ZERO};

/// Tolerance for structural checks (projector algebra, unitarity).
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for unit-norm checks on state vectors.
pub const NORM_TOL: f64 = 1e-12;
/// Branches at or below this probability are treated as impossible outcomes.
pub const IMPOSSIBLE_PROB: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state must be a unit vector (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("state vector must have at least one amplitude")]
    Empty,
    #[error("invalid projective measurement: {0}")]
    InvalidPvm(String),
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("branch {branch} has probability {probability:e}; outcome impossible")]
    ImpossibleOutcome { branch: usize, probability: f64 },
    #[error("branch index {branch} out of range for {count} branches")]
    BranchOutOfRange { branch: usize, count: usize },
    #[error("measurement axis must be a unit vector (norm {norm})")]
    NonUnitAxis { norm: f64 },
    #[error("site {site} out of range for a {sites}-site register")]
    InvalidSite { site: usize, sites: usize },
}

pub type Result<T> = std::result::Result<T, QuantumError>;

/// A unit vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `amplitudes`, which must already have unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QuantumError::Empty);
        }
        let norm = linalg::norm_sqr(&amplitudes).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized { norm });
        }
        Ok(StateVector { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm. Fails on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QuantumError::Empty);
        }
        let norm = linalg::norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QuantumError::NotNormalized { norm });
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        Ok(StateVector {
            amplitudes: amplitudes.into_iter().map(|a| a * inv).collect(),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis vector `index` of a `dim`-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        StateVector { amplitudes }
    }

    /// Spin up, |u⟩.
    pub fn up() -> Self {
        Self::basis(2, 0)
    }

    /// Spin down, |d⟩.
    pub fn down() -> Self {
        Self::basis(2, 1)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes).sqrt()
    }

    /// Number of spin-1/2 sites, if the dimension is a power of two.
    pub fn qubit_count(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }
}

/// One spectral branch of a projective observable.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub eigenvalue: f64,
    pub projector: Matrix,
}

/// Projector-valued measure: an observable given by its distinct eigenvalues
/// and the orthogonal projectors onto their eigenspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Pvm {
    branches: Vec<Branch>,
    dim: usize,
}

impl Pvm {
    pub fn new(branches: Vec<(f64, Matrix)>) -> Result<Self> {
        let Some(first) = branches.first() else {
            return Err(QuantumError::InvalidPvm("no branches".into()));
        };
        let dim = first.1.dim();
        let branches: Vec<Branch> = branches
            .into_iter()
            .map(|(eigenvalue, projector)| Branch {
                eigenvalue,
                projector,
            })
            .collect();
        let pvm = Pvm { branches, dim };
        pvm.validate()?;
        Ok(pvm)
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(QuantumError::InvalidPvm(msg));
        let mut sum = Matrix::zeros(self.dim);
        for (i, b) in self.branches.iter().enumerate() {
            let p = &b.projector;
            if p.dim() != self.dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: self.dim,
                    found: p.dim(),
                });
            }
            if !b.eigenvalue.is_finite() {
                return invalid(format!("branch {i} has a non-finite eigenvalue"));
            }
            if p.max_abs_diff(&p.adjoint()) > STRUCTURAL_TOL {
                return invalid(format!("projector {i} is not Hermitian"));
            }
            if p.max_abs_diff(&(p * p)) > STRUCTURAL_TOL {
                return invalid(format!("projector {i} is not idempotent"));
            }
            for (j, other) in self.branches.iter().enumerate().skip(i + 1) {
                if b.eigenvalue == other.eigenvalue {
                    return invalid(format!("branches {i} and {j} share eigenvalue {}", b.eigenvalue));
                }
                if (p * &other.projector).max_abs() > STRUCTURAL_TOL {
                    return invalid(format!("projectors {i} and {j} are not orthogonal"));
                }
            }
            sum = &sum + p;
        }
        if sum.max_abs_diff(&Matrix::identity(self.dim)) > STRUCTURAL_TOL {
            return invalid("projectors do not sum to the identity".into());
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Lifts a single-site observable to site `site` of an `sites`-site
    /// register, each site having this observable's dimension. Site 0 is the
    /// slowest-varying tensor factor.
    pub fn on_site(&self, site: usize, sites: usize) -> Result<Pvm> {
        if site >= sites {
            return Err(QuantumError::InvalidSite { site, sites });
        }
        let left = Matrix::identity(self.dim.pow(site as u32));
        let right = Matrix::identity(self.dim.pow((sites - site - 1) as u32));
        let branches = self
            .branches
            .iter()
            .map(|b| Branch {
                eigenvalue: b.eigenvalue,
                projector: left.kron(&b.projector).kron(&right),
            })
            .collect();
        Ok(Pvm {
            branches,
            dim: self.dim.pow(sites as u32),
        })
    }
}

/// A unitary operator.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOp {
    matrix: Matrix,
}

impl UnitaryOp {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let deviation = (&matrix.adjoint() * &matrix).max_abs_diff(&Matrix::identity(matrix.dim()));
        if deviation > STRUCTURAL_TOL {
            return Err(QuantumError::NotUnitary { deviation });
        }
        Ok(UnitaryOp { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub eigenvalue: f64,
    pub probability: f64,
}

/// Outcome distribution of one measurement, in branch order.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub outcomes: Vec<Outcome>,
}

impl MeasurementRecord {
    pub fn probability_of(&self, eigenvalue: f64) -> Option<f64> {
        self.outcomes
            .iter()
            .find(|o| o.eigenvalue == eigenvalue)
            .map(|o| o.probability)
    }

    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(QuantumError::DimensionMismatch { expected, found })
    }
}

/// Tensor product; the index of `a` varies slowest.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector { amplitudes }
}

/// Tensor product of a sequence of states, left to right.
pub fn tensor_all<'a>(states: impl IntoIterator<Item = &'a StateVector>) -> Option<StateVector> {
    states.into_iter().fold(None, |acc, s| match acc {
        None => Some(s.clone()),
        Some(a) => Some(tensor(&a, s)),
    })
}

/// Probability amplitude ⟨phi|psi⟩.
pub fn amplitude(phi: &StateVector, psi: &StateVector) -> Result<Complex64> {
    check_dim(phi.dim(), psi.dim())?;
    Ok(linalg::inner(&phi.amplitudes, &psi.amplitudes))
}

/// ⟨psi|P|psi⟩, which equals the squared norm of P|psi⟩ for a projector.
fn branch_probability(projector: &Matrix, psi: &StateVector) -> f64 {
    let projected = projector.apply(&psi.amplitudes);
    linalg::inner(&psi.amplitudes, &projected).re
}

/// Born-rule outcome distribution of `obs` in state `psi`.
pub fn measure_probabilities(obs: &Pvm, psi: &StateVector) -> Result<MeasurementRecord> {
    check_dim(obs.dim(), psi.dim())?;
    let outcomes = obs
        .branches
        .iter()
        .map(|b| Outcome {
            eigenvalue: b.eigenvalue,
            probability: branch_probability(&b.projector, psi),
        })
        .collect();
    Ok(MeasurementRecord { outcomes })
}

/// Post-measurement state for branch `branch`: P|psi⟩, renormalized.
pub fn collapse(obs: &Pvm, branch: usize, psi: &StateVector) -> Result<StateVector> {
    check_dim(obs.dim(), psi.dim())?;
    let b = obs.branches.get(branch).ok_or(QuantumError::BranchOutOfRange {
        branch,
        count: obs.branches.len(),
    })?;
    let projected = b.projector.apply(&psi.amplitudes);
    let probability = linalg::norm_sqr(&projected);
    if probability <= IMPOSSIBLE_PROB {
        return Err(QuantumError::ImpossibleOutcome {
            branch,
            probability,
        });
    }
    StateVector::normalized(projected)
}

pub fn apply_unitary(u: &UnitaryOp, psi: &StateVector) -> Result<StateVector> {
    check_dim(u.dim(), psi.dim())?;
    Ok(StateVector {
        amplitudes: u.matrix.apply(&psi.amplitudes),
    })
}

/// Draws a measurement outcome with Born weights from a generator seeded by
/// `seed`, and returns the branch index with the collapsed state.
pub fn sample_outcome(obs: &Pvm, psi: &StateVector, seed: u64) -> Result<(usize, StateVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(obs, psi, &mut rng)
}

pub(crate) fn sample_with<R: Rng>(
    obs: &Pvm,
    psi: &StateVector,
    rng: &mut R,
) -> Result<(usize, StateVector)> {
    let record = measure_probabilities(obs, psi)?;
    let weights: Vec<f64> = record
        .outcomes
        .iter()
        .map(|o| if o.probability > IMPOSSIBLE_PROB { o.probability } else { 0.0 })
        .collect();
    let total: f64 = weights.iter().sum();
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut chosen = None;
    for (i, w) in weights.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        acc += w;
        chosen = Some(i);
        if target < acc {
            break;
        }
    }
    // probabilities sum to one, so some branch is always possible
    let branch = chosen.expect("at least one branch has positive probability");
    let state = collapse(obs, branch, psi)?;
    Ok((branch, state))
}

/// Pauli matrices σx, σy, σz.
pub fn pauli() -> [Matrix; 3] {
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix::from_rows(vec![ZERO, ONE, ONE, ZERO]).unwrap(),
        Matrix::from_rows(vec![ZERO, -i, i, ZERO]).unwrap(),
        Matrix::from_rows(vec![ONE, ZERO, ZERO, -ONE]).unwrap(),
    ]
}

/// Spin-1/2 observable along `axis`: eigenvalue +1 with projector (I + n·σ)/2
/// and eigenvalue -1 with projector (I - n·σ)/2.
pub fn spin_pvm(axis: [f64; 3]) -> Result<Pvm> {
    let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > STRUCTURAL_TOL {
        return Err(QuantumError::NonUnitAxis { norm });
    }
    let [sx, sy, sz] = pauli();
    let n_sigma = &(&sx.scale(Complex64::new(axis[0], 0.0)) + &sy.scale(Complex64::new(axis[1], 0.0)))
        + &sz.scale(Complex64::new(axis[2], 0.0));
    let id = Matrix::identity(2);
    let half = Complex64::new(0.5, 0.0);
    Pvm::new(vec![
        (1.0, (&id + &n_sigma).scale(half)),
        (-1.0, (&id - &n_sigma).scale(half)),
    ])
}

/// Unit vector at `angle` radians from +z towards +x.
pub fn xz_axis(angle: f64) -> [f64; 3] {
    [angle.sin(), 0.0, angle.cos()]
}
