//! Bell pairs, GHZ states, spin correlations, CHSH sums (quantum and local
//! hidden variable), sequential-measurement EPR runs and a two-qubit
//! which-path eraser.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{self, Matrix, ONE, ZERO};
use crate::quantum::{self, Pvm, QuantumError, StateVector, UnitaryOp, STRUCTURAL_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntanglementError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("state of dimension {0} is not a register of spin-1/2 sites")]
    NotQubits(usize),
    #[error("sites must be distinct and below {sites} (got {a} and {b})")]
    InvalidSites { a: usize, b: usize, sites: usize },
    #[error("at least 2 sites are needed, got {0}")]
    TooFewSites(usize),
    #[error("angle grid step must lie in (0, 5] degrees, got {0}")]
    GridStep(f64),
    #[error("erasure requested without which-path marking: nothing to erase")]
    NothingToErase,
    #[error("eraser needs at least 8 phase samples, got {0}")]
    TooFewPhases(usize),
    #[error("trial count must be at least 1")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, EntanglementError>;

/// Φ⁺ = (|uu⟩ + |dd⟩)/√2 in the basis order uu, ud, du, dd.
pub fn bell_phi_plus() -> StateVector {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(vec![s, ZERO, ZERO, s]).expect("Φ⁺ is normalized")
}

/// (|u…u⟩ + |d…d⟩)/√2 on `n` sites.
pub fn ghz(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(EntanglementError::TooFewSites(n));
    }
    let dim = 1usize << n;
    let mut amps = vec![ZERO; dim];
    amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Ok(StateVector::new(amps)?)
}

/// Pair of spin measurement axes, one per side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationSetting {
    pub axis_a: [f64; 3],
    pub axis_b: [f64; 3],
}

impl CorrelationSetting {
    pub fn new(axis_a: [f64; 3], axis_b: [f64; 3]) -> Result<Self> {
        for axis in [axis_a, axis_b] {
            let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > STRUCTURAL_TOL {
                return Err(QuantumError::NonUnitAxis { norm }.into());
            }
        }
        Ok(CorrelationSetting { axis_a, axis_b })
    }

    /// Both axes in the x–z plane, given as angles from +z in radians.
    pub fn xz(alpha: f64, beta: f64) -> Self {
        CorrelationSetting {
            axis_a: quantum::xz_axis(alpha),
            axis_b: quantum::xz_axis(beta),
        }
    }

    pub fn swapped(self) -> Self {
        CorrelationSetting {
            axis_a: self.axis_b,
            axis_b: self.axis_a,
        }
    }
}

fn sites_of(psi: &StateVector) -> Result<usize> {
    psi.qubit_count().filter(|&n| n >= 1).ok_or(EntanglementError::NotQubits(psi.dim()))
}

fn check_sites(n: usize, a: usize, b: usize) -> Result<()> {
    if a == b || a >= n || b >= n {
        return Err(EntanglementError::InvalidSites { a, b, sites: n });
    }
    Ok(())
}

/// Joint outcome distribution of two single-site observables on distinct
/// sites, as `((outcome_a, outcome_b), probability)` in branch order.
pub fn joint_distribution(
    psi: &StateVector,
    obs_a: &Pvm,
    site_a: usize,
    obs_b: &Pvm,
    site_b: usize,
) -> Result<Vec<((f64, f64), f64)>> {
    let n = sites_of(psi)?;
    check_sites(n, site_a, site_b)?;
    let lifted_a = obs_a.on_site(site_a, n)?;
    let lifted_b = obs_b.on_site(site_b, n)?;
    let mut out = Vec::with_capacity(4);
    for ba in lifted_a.branches() {
        for bb in lifted_b.branches() {
            // local projectors on different sites commute, so the product is a projector
            let joint = &ba.projector * &bb.projector;
            let projected = joint.apply(psi.amplitudes());
            let p = linalg::inner(psi.amplitudes(), &projected).re;
            out.push(((ba.eigenvalue, bb.eigenvalue), p));
        }
    }
    Ok(out)
}

/// Expectation of the product of spin outcomes at `site_a` and `site_b`.
pub fn correlation(psi: &StateVector, s: CorrelationSetting, site_a: usize, site_b: usize) -> Result<f64> {
    let pa = quantum::spin_pvm(s.axis_a)?;
    let pb = quantum::spin_pvm(s.axis_b)?;
    let joint = joint_distribution(psi, &pa, site_a, &pb, site_b)?;
    Ok(joint.iter().map(|((a, b), p)| a * b * p).sum())
}

/// Marginal distribution of `obs_a` at `site_a` read off the joint
/// distribution with `obs_b` measured at `site_b`.
pub fn marginal(
    psi: &StateVector,
    obs_a: &Pvm,
    site_a: usize,
    obs_b: &Pvm,
    site_b: usize,
) -> Result<Vec<(f64, f64)>> {
    let joint = joint_distribution(psi, obs_a, site_a, obs_b, site_b)?;
    let mut out: Vec<(f64, f64)> = obs_a.branches().iter().map(|b| (b.eigenvalue, 0.0)).collect();
    for ((a, _), p) in joint {
        if let Some(slot) = out.iter_mut().find(|(e, _)| *e == a) {
            slot.1 += p;
        }
    }
    Ok(out)
}

/// The four CHSH measurement axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshSettings {
    pub a0: [f64; 3],
    pub a1: [f64; 3],
    pub b0: [f64; 3],
    pub b1: [f64; 3],
}

impl ChshSettings {
    pub fn xz(a0: f64, a1: f64, b0: f64, b1: f64) -> Self {
        ChshSettings {
            a0: quantum::xz_axis(a0),
            a1: quantum::xz_axis(a1),
            b0: quantum::xz_axis(b0),
            b1: quantum::xz_axis(b1),
        }
    }

    fn correlations(&self, psi: &StateVector) -> Result<[f64; 4]> {
        let e = |a, b| correlation(psi, CorrelationSetting { axis_a: a, axis_b: b }, 0, 1);
        Ok([e(self.a0, self.b0)?, e(self.a0, self.b1)?, e(self.a1, self.b0)?, e(self.a1, self.b1)?])
    }
}

/// S = E(a0,b0) + E(a0,b1) + E(a1,b0) - E(a1,b1) on sites 0 and 1.
pub fn chsh(psi: &StateVector, s: &ChshSettings) -> Result<f64> {
    chsh_signed(psi, s, [1.0, 1.0, 1.0, -1.0])
}

/// CHSH-type sum with explicit signs on (E00, E01, E10, E11).
pub fn chsh_signed(psi: &StateVector, s: &ChshSettings, signs: [f64; 4]) -> Result<f64> {
    let e = s.correlations(psi)?;
    Ok(e.iter().zip(signs).map(|(e, s)| e * s).sum())
}

/// Best CHSH value found on an angle grid, with its x–z plane angles in degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshOptimum {
    pub a0_deg: f64,
    pub a1_deg: f64,
    pub b0_deg: f64,
    pub b1_deg: f64,
    pub value: f64,
}

/// Exhaustive grid search of the standard CHSH sum over x–z plane angles in
/// `[0°, 360°)` with spacing `step_deg`.
///
/// For fixed (a0, a1) the sum splits into `E(a0,b0) + E(a1,b0)` and
/// `E(a0,b1) - E(a1,b1)`, so b0 and b1 are maximized independently; this
/// returns the same optimum as the full four-fold grid.
#[allow(clippy::needless_range_loop)]
pub fn maximize_chsh(psi: &StateVector, step_deg: f64) -> Result<ChshOptimum> {
    if !(step_deg > 0.0 && step_deg <= 5.0) {
        return Err(EntanglementError::GridStep(step_deg));
    }
    let count = (360.0 / step_deg + 1e-9).floor() as usize;
    let count = if (count as f64) * step_deg >= 360.0 - 1e-9 { count } else { count + 1 };
    let angles: Vec<f64> = (0..count).map(|k| k as f64 * step_deg).collect();
    let table: Vec<Vec<f64>> = angles
        .par_iter()
        .map(|&a| {
            angles
                .iter()
                .map(|&b| correlation(psi, CorrelationSetting::xz(a.to_radians(), b.to_radians()), 0, 1))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let best_rows: Vec<ChshOptimum> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut best = ChshOptimum {
                a0_deg: angles[i],
                a1_deg: 0.0,
                b0_deg: 0.0,
                b1_deg: 0.0,
                value: f64::NEG_INFINITY,
            };
            for j in 0..count {
                let (mut sum_best, mut sum_arg) = (f64::NEG_INFINITY, 0);
                let (mut diff_best, mut diff_arg) = (f64::NEG_INFINITY, 0);
                for k in 0..count {
                    let sum = table[i][k] + table[j][k];
                    if sum > sum_best {
                        sum_best = sum;
                        sum_arg = k;
                    }
                    let diff = table[i][k] - table[j][k];
                    if diff > diff_best {
                        diff_best = diff;
                        diff_arg = k;
                    }
                }
                let value = sum_best + diff_best;
                if value > best.value {
                    best = ChshOptimum {
                        a0_deg: angles[i],
                        a1_deg: angles[j],
                        b0_deg: angles[sum_arg],
                        b1_deg: angles[diff_arg],
                        value,
                    };
                }
            }
            best
        })
        .collect();
    // sequential reduction keeps the first maximum in index order
    let best = best_rows
        .into_iter()
        .fold(None::<ChshOptimum>, |acc, row| match acc {
            Some(a) if a.value >= row.value => Some(a),
            _ => Some(row),
        })
        .expect("grid is non-empty");
    Ok(best)
}

/// Deterministic local strategy: each side answers ±1 per setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LhvStrategy {
    pub alice: [i8; 2],
    pub bob: [i8; 2],
}

impl LhvStrategy {
    /// All 16 assignments, indexed by the bits of `0..16`.
    pub fn all() -> impl Iterator<Item = LhvStrategy> {
        let bit = |m: u8, k: u8| if m >> k & 1 == 0 { 1 } else { -1 };
        (0u8..16).map(move |m| LhvStrategy {
            alice: [bit(m, 0), bit(m, 1)],
            bob: [bit(m, 2), bit(m, 3)],
        })
    }

    pub fn response(&self, side: Side, setting: usize) -> i8 {
        match side {
            Side::A => self.alice[setting],
            Side::B => self.bob[setting],
        }
    }

    pub fn chsh(&self) -> i32 {
        let e = |x: usize, y: usize| i32::from(self.alice[x]) * i32::from(self.bob[y]);
        e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LhvSummary {
    pub max: i32,
    pub min: i32,
    pub strategies: usize,
}

/// Enumerates every deterministic local strategy. Shared randomness is a
/// convex mixture of these, so it cannot exceed their maximum.
pub fn lhv_chsh() -> LhvSummary {
    let (max, min, strategies) = LhvStrategy::all().fold((i32::MIN, i32::MAX, 0), |(hi, lo, n), s| {
        let v = s.chsh();
        (hi.max(v), lo.min(v), n + 1)
    });
    LhvSummary { max, min, strategies }
}

pub fn lhv_max_chsh() -> f64 {
    f64::from(lhv_chsh().max)
}

/// Sequential measurement on Φ⁺: measure site 0 along `axis_a`, collapse,
/// then site 1 along `axis_b`. Returns the fraction of trials whose outcomes
/// agree. Trial `i` draws from stream `i` of a generator seeded with `seed`.
pub fn epr_agreement(axis_a: [f64; 3], axis_b: [f64; 3], trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(EntanglementError::NoTrials);
    }
    let pa = quantum::spin_pvm(axis_a)?.on_site(0, 2)?;
    let pb = quantum::spin_pvm(axis_b)?.on_site(1, 2)?;
    let bell = bell_phi_plus();
    let agreements = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<usize> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let (first, collapsed) = quantum::sample_with(&pa, &bell, &mut rng)?;
            let (second, _) = quantum::sample_with(&pb, &collapsed, &mut rng)?;
            let agree = pa.branches()[first].eigenvalue == pb.branches()[second].eigenvalue;
            Ok(usize::from(agree))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(agreements as f64 / trials as f64)
}

/// Same-axis agreement rate on Φ⁺.
pub fn epr_consistency(axis: [f64; 3], trials: usize, seed: u64) -> Result<f64> {
    epr_agreement(axis, axis, trials, seed)
}

/// Measures site 0 of `psi` along `axis` and, for every possible outcome,
/// the probability that all remaining sites then give the same outcome
/// along the same axis. Returns the smallest of these conditional
/// probabilities; 1 means a single-site collapse forces unanimity.
pub fn forced_unanimity(psi: &StateVector, axis: [f64; 3]) -> Result<f64> {
    let n = sites_of(psi)?;
    if n < 2 {
        return Err(EntanglementError::TooFewSites(n));
    }
    let local = quantum::spin_pvm(axis)?;
    let first = local.on_site(0, n)?;
    let record = quantum::measure_probabilities(&first, psi)?;
    let mut worst = f64::INFINITY;
    for (branch, outcome) in record.outcomes.iter().enumerate() {
        if outcome.probability <= quantum::IMPOSSIBLE_PROB {
            continue;
        }
        let collapsed = quantum::collapse(&first, branch, psi)?;
        let mut amps = collapsed.amplitudes().to_vec();
        for site in 1..n {
            let lifted = local.on_site(site, n)?;
            amps = lifted.branches()[branch].projector.apply(&amps);
        }
        worst = worst.min(linalg::norm_sqr(&amps));
    }
    Ok(worst)
}

/// Sequential measurement of every site of `psi` along `axis`; the fraction
/// of trials in which all outcomes agree. Trial `i` uses stream `i`.
pub fn unanimity_rate(psi: &StateVector, axis: [f64; 3], trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(EntanglementError::NoTrials);
    }
    let n = sites_of(psi)?;
    let local = quantum::spin_pvm(axis)?;
    let lifted: Vec<Pvm> = (0..n).map(|s| local.on_site(s, n)).collect::<std::result::Result<_, _>>()?;
    let hits = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<usize> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut state = psi.clone();
            let mut seen = None;
            let mut unanimous = true;
            for obs in &lifted {
                let (branch, next) = quantum::sample_with(obs, &state, &mut rng)?;
                state = next;
                match seen {
                    None => seen = Some(branch),
                    Some(b) if b != branch => unanimous = false,
                    _ => {}
                }
            }
            Ok(usize::from(unanimous))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(hits as f64 / trials as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EraserConfig {
    pub marking: bool,
    pub erasure: bool,
    pub phase_samples: usize,
}

impl EraserConfig {
    pub fn validate(&self) -> Result<()> {
        if self.phase_samples < 8 {
            return Err(EntanglementError::TooFewPhases(self.phase_samples));
        }
        if self.erasure && !self.marking {
            return Err(EntanglementError::NothingToErase);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EraserCurve {
    /// Phase φ in radians, sampled uniformly over `[0, 2π)`.
    pub phases: Vec<f64>,
    /// Detection probability per phase (conditional on the marker outcome when erasing).
    pub detection: Vec<f64>,
    pub visibility: f64,
}

/// CNOT with the path qubit (site 0) as control and the marker (site 1) as target.
fn mark_gate() -> UnitaryOp {
    let mut m = Matrix::zeros(4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    UnitaryOp::new(m).expect("CNOT is unitary")
}

/// Path qubit in (|0⟩ + e^{iφ}|1⟩)/√2, optionally copied onto a marker, read
/// out in the interference (x) basis. With erasure the marker is measured in
/// the ± basis and detection is post-selected on its + outcome.
pub fn eraser_curve(cfg: EraserConfig) -> Result<EraserCurve> {
    cfg.validate()?;
    let interference = quantum::spin_pvm([1.0, 0.0, 0.0])?;
    let path_plus = interference.on_site(0, 2)?.branches()[0].projector.clone();
    let marker_plus = interference.on_site(1, 2)?.branches()[0].projector.clone();
    let gate = mark_gate();
    let marker = StateVector::basis(2, 0);

    let mut phases = Vec::with_capacity(cfg.phase_samples);
    let mut detection = Vec::with_capacity(cfg.phase_samples);
    for k in 0..cfg.phase_samples {
        let phi = 2.0 * PI * k as f64 / cfg.phase_samples as f64;
        let s = FRAC_1_SQRT_2;
        let path = StateVector::new(vec![Complex64::new(s, 0.0), Complex64::from_polar(s, phi)])?;
        let mut state = quantum::tensor(&path, &marker);
        if cfg.marking {
            state = quantum::apply_unitary(&gate, &state)?;
        }
        let expect = |p: &Matrix| linalg::inner(state.amplitudes(), &p.apply(state.amplitudes())).re;
        let p = if cfg.erasure {
            expect(&(&path_plus * &marker_plus)) / expect(&marker_plus)
        } else {
            expect(&path_plus)
        };
        phases.push(phi);
        detection.push(p);
    }
    let max = detection.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = detection.iter().copied().fold(f64::INFINITY, f64::min);
    let visibility = (max - min) / (max + min);
    Ok(EraserCurve {
        phases,
        detection,
        visibility,
    })
}

pub fn eraser_visibility(cfg: EraserConfig) -> Result<f64> {
    Ok(eraser_curve(cfg)?.visibility)
}
