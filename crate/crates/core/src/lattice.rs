//! Free massive scalar field on a periodic 1+1 dimensional lattice.
//!
//! The field commutator is a c-number, `[φ(x,t), φ(x',t')] = i·D(x-x', t-t')`
//! with
//!
//! ```text
//! D(dx, dt) = (1/N) Σ_n sin(k_n dx - ω_n dt) / ω_n,   k_n = 2πn/N,
//! ω_n = sqrt(m² + 4 sin²(πn/N)).
//! ```
//!
//! Pairing the modes `n` and `N-n` cancels the `sin(k dx)` part, leaving
//! `D = -(1/N) Σ_n cos(k_n dx) sin(ω_n dt) / ω_n`. That form is evaluated here:
//! it vanishes exactly at `dt = 0` and is exactly odd under
//! `(dx, dt) -> (-dx, -dt)`.

use rayon::prelude::*;
use thiserror::Error;

use crate::topology::CommutationGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("invalid lattice: {0}")]
    InvalidSpec(String),
    #[error("commutation threshold must be positive and finite, got {0}")]
    InvalidEps(f64),
    #[error("cone profile needs at least 8 time steps, got {0}")]
    TooFewTimeSteps(usize),
    #[error("no cone detected: every extent is 0 at eps = {eps}")]
    NoCone { eps: f64 },
}

pub type Result<T> = std::result::Result<T, LatticeError>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSpec {
    pub sites: usize,
    pub mass: f64,
    pub time_steps: usize,
    pub time_step: f64,
}

impl LatticeSpec {
    pub fn new(sites: usize, mass: f64, time_steps: usize) -> Result<Self> {
        Self::with_time_step(sites, mass, time_steps, 1.0)
    }

    pub fn with_time_step(sites: usize, mass: f64, time_steps: usize, time_step: f64) -> Result<Self> {
        let spec = LatticeSpec {
            sites,
            mass,
            time_steps,
            time_step,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LatticeError::InvalidSpec(m));
        if self.sites < 8 {
            return bad(format!("need at least 8 sites, got {}", self.sites));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return bad(format!("mass must be positive, got {}", self.mass));
        }
        if self.time_steps < 2 {
            return bad(format!("need at least 2 time steps, got {}", self.time_steps));
        }
        if !(self.time_step > 0.0 && self.time_step.is_finite()) {
            return bad(format!("time step must be positive, got {}", self.time_step));
        }
        Ok(())
    }
}

/// ω_n = sqrt(m² + 4 sin²(πn/N)).
pub fn dispersion(spec: &LatticeSpec, mode: usize) -> f64 {
    let s = (std::f64::consts::PI * mode as f64 / spec.sites as f64).sin();
    (spec.mass * spec.mass + 4.0 * s * s).sqrt()
}

/// Precomputed mode data for one lattice.
#[derive(Clone, Debug)]
pub struct Modes {
    sites: usize,
    inv_omega: Vec<f64>,
    omega: Vec<f64>,
    // cos(2πj/N), mirrored so that entry N-j is bitwise equal to entry j
    cos: Vec<f64>,
}

impl Modes {
    pub fn new(spec: &LatticeSpec) -> Self {
        let n = spec.sites;
        let omega: Vec<f64> = (0..n).map(|k| dispersion(spec, k)).collect();
        let inv_omega = omega.iter().map(|w| 1.0 / w).collect();
        let mut cos = vec![0.0; n];
        for j in 0..=n / 2 {
            let c = (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos();
            cos[j] = c;
            cos[(n - j) % n] = c;
        }
        Modes {
            sites: n,
            inv_omega,
            omega,
            cos,
        }
    }

    fn phase_index(&self, mode: usize, dx: i64) -> usize {
        let n = self.sites as i64;
        ((mode as i64 * dx.rem_euclid(n)) % n) as usize
    }

    /// D(dx, dt).
    pub fn commutator(&self, dx: i64, dt: f64) -> f64 {
        if dt == 0.0 {
            return 0.0;
        }
        let sum: f64 = (0..self.sites)
            .map(|n| self.cos[self.phase_index(n, dx)] * (self.omega[n] * dt).sin() * self.inv_omega[n])
            .sum();
        -sum / self.sites as f64
    }

    /// -∂D/∂dt at dt = 0, i.e. (1/N) Σ_n cos(k_n dx).
    pub fn canonical(&self, dx: i64) -> f64 {
        let sum: f64 = (0..self.sites).map(|n| self.cos[self.phase_index(n, dx)]).sum();
        sum / self.sites as f64
    }
}

/// Commutator function D(dx, dt); the operator commutator is i·D.
pub fn pauli_jordan(spec: &LatticeSpec, dx: i64, dt: f64) -> f64 {
    Modes::new(spec).commutator(dx, dt)
}

/// Equal-time field–momentum commutator coefficient: 1 when dx ≡ 0 mod N, else 0.
pub fn canonical_check(spec: &LatticeSpec, dx: i64) -> f64 {
    Modes::new(spec).canonical(dx)
}

/// D on every distinct lattice separation: dx in `0..N`, time offsets
/// `-(T-1)..=(T-1)` in units of the time step.
#[derive(Clone, Debug)]
pub struct CommutatorTable {
    spec: LatticeSpec,
    values: Vec<f64>,
}

impl CommutatorTable {
    pub fn new(spec: &LatticeSpec) -> Self {
        let modes = Modes::new(spec);
        let n = spec.sites;
        let span = 2 * spec.time_steps - 1;
        let values = (0..span * n)
            .into_par_iter()
            .map(|idx| {
                let steps = (idx / n) as i64 - (spec.time_steps as i64 - 1);
                let dx = (idx % n) as i64;
                modes.commutator(dx, steps as f64 * spec.time_step)
            })
            .collect();
        CommutatorTable { spec: *spec, values }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// D at spatial offset `dx` (any integer) and `steps` time steps.
    pub fn get(&self, dx: i64, steps: i64) -> f64 {
        let n = self.spec.sites as i64;
        let t = self.spec.time_steps as i64;
        assert!(steps.abs() < t, "time offset {steps} outside table");
        let row = (steps + t - 1) as usize;
        self.values[row * self.spec.sites + dx.rem_euclid(n) as usize]
    }

    /// `(dx, dt, D)` rows ordered by dt then dx, dt in physical units.
    pub fn rows(&self) -> impl Iterator<Item = (i64, f64, f64)> + '_ {
        let n = self.spec.sites;
        let t = self.spec.time_steps as i64;
        self.values.iter().enumerate().map(move |(idx, &d)| {
            let steps = (idx / n) as i64 - (t - 1);
            ((idx % n) as i64, steps as f64 * self.spec.time_step, d)
        })
    }
}

/// Why a thresholded commutation graph carries no structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// Every pair commutes at this threshold.
    Complete,
    /// Only equal-time pairs commute.
    EqualTimeOnly,
}

#[derive(Clone, Debug)]
pub struct LatticeGraph {
    pub graph: CommutationGraph,
    pub degeneracy: Option<Degeneracy>,
}

/// Label of lattice point (x, t).
pub fn point_label(x: usize, t: usize) -> String {
    format!("x{x}t{t}")
}

/// Graph over the N·T spacetime points; an edge means |D| < eps. Vertex
/// `t·N + x` is the point (x, t).
pub fn commutation_graph(spec: &LatticeSpec, eps: f64) -> Result<LatticeGraph> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(LatticeError::InvalidEps(eps));
    }
    let table = CommutatorTable::new(spec);
    Ok(graph_from_table(&table, eps))
}

pub fn graph_from_table(table: &CommutatorTable, eps: f64) -> LatticeGraph {
    let spec = table.spec();
    let (n, t) = (spec.sites, spec.time_steps);
    let labels = (0..t).flat_map(|ti| (0..n).map(move |x| point_label(x, ti))).collect();
    let mut graph = CommutationGraph::new(labels).expect("lattice has at least one point");
    let mut cross_time_edges = 0usize;
    let mut missing = 0usize;
    for a in 0..n * t {
        let (xa, ta) = ((a % n) as i64, (a / n) as i64);
        for b in a + 1..n * t {
            let (xb, tb) = ((b % n) as i64, (b / n) as i64);
            if table.get(xa - xb, ta - tb).abs() < eps {
                graph.add_edge_index(a, b);
                if ta != tb {
                    cross_time_edges += 1;
                }
            } else {
                missing += 1;
            }
        }
    }
    let degeneracy = if missing == 0 {
        Some(Degeneracy::Complete)
    } else if cross_time_edges == 0 {
        Some(Degeneracy::EqualTimeOnly)
    } else {
        None
    };
    if let Some(d) = degeneracy {
        log::warn!("commutation graph at eps = {eps} is degenerate: {d:?}");
    }
    LatticeGraph { graph, degeneracy }
}

/// Largest |dx| ≤ N/2 with |D(dx, dt)| ≥ eps, or 0 if none.
pub fn extent_at(modes: &Modes, sites: usize, eps: f64, dt: f64) -> usize {
    (0..=sites / 2)
        .rev()
        .find(|&dx| modes.commutator(dx as i64, dt).abs() >= eps)
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeProfile {
    /// `(dt, extent)` for dt = 1..=T/2 time steps, dt in physical units.
    pub per_time_extent: Vec<(f64, usize)>,
    /// Least-squares slope of extent against dt.
    pub fitted_speed: f64,
    pub intercept: f64,
    pub threshold: f64,
}

impl ConeProfile {
    /// Largest amount by which an extent exceeds the fitted line.
    pub fn broadening(&self) -> f64 {
        self.per_time_extent
            .iter()
            .map(|&(dt, e)| e as f64 - (self.intercept + self.fitted_speed * dt))
            .fold(0.0, f64::max)
    }
}

/// Ordinary least squares fit `y = slope·x + intercept`.
pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Spatial reach of the non-commuting region per time separation, with a
/// fitted propagation speed.
pub fn cone_profile(spec: &LatticeSpec, eps: f64) -> Result<ConeProfile> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(LatticeError::InvalidEps(eps));
    }
    if spec.time_steps < 8 {
        return Err(LatticeError::TooFewTimeSteps(spec.time_steps));
    }
    let modes = Modes::new(spec);
    let per_time_extent: Vec<(f64, usize)> = (1..=spec.time_steps / 2)
        .into_par_iter()
        .map(|k| {
            let dt = k as f64 * spec.time_step;
            (dt, extent_at(&modes, spec.sites, eps, dt))
        })
        .collect();
    if per_time_extent.iter().all(|&(_, e)| e == 0) {
        return Err(LatticeError::NoCone { eps });
    }
    let pts: Vec<(f64, f64)> = per_time_extent.iter().map(|&(t, e)| (t, e as f64)).collect();
    let (fitted_speed, intercept) = least_squares(&pts);
    Ok(ConeProfile {
        per_time_extent,
        fitted_speed,
        intercept,
        threshold: eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(n: usize, m: f64, t: usize) -> LatticeSpec {
        LatticeSpec::new(n, m, t).unwrap()
    }

    /// The mode sum exactly as written, with no pairing of modes.
    fn literal(spec: &LatticeSpec, dx: i64, dt: f64) -> f64 {
        let n = spec.sites as f64;
        (0..spec.sites)
            .map(|j| {
                let k = 2.0 * PI * j as f64 / n;
                let w = dispersion(spec, j);
                (k * dx as f64 - w * dt).sin() / w
            })
            .sum::<f64>()
            / n
    }

    #[test]
    fn spec_validation() {
        assert!(LatticeSpec::new(7, 1.0, 4).is_err());
        assert!(LatticeSpec::new(8, 0.0, 4).is_err());
        assert!(LatticeSpec::new(8, 1.0, 1).is_err());
        assert!(LatticeSpec::with_time_step(8, 1.0, 4, 0.0).is_err());
    }

    #[test]
    fn dispersion_relation() {
        let s = spec(64, 1.0, 4);
        assert_eq!(dispersion(&s, 0), 1.0);
        assert!((dispersion(&s, 32) - 5.0f64.sqrt()).abs() < 1e-15);
        for n in 1..64 {
            assert!((dispersion(&s, n) - dispersion(&s, 64 - n)).abs() < 1e-14);
            assert!(dispersion(&s, n) > 0.0);
        }
    }

    #[test]
    fn paired_sum_matches_literal_mode_sum() {
        for (n, m) in [(8, 1.0), (64, 1.0), (128, 0.1), (33, 0.7)] {
            let s = spec(n, m, 4);
            for dx in -9..9 {
                for dt in [0.5, 1.0, 2.0, 7.25, -3.0] {
                    let a = pauli_jordan(&s, dx, dt);
                    let b = literal(&s, dx, dt);
                    assert!((a - b).abs() < 1e-13, "n={n} dx={dx} dt={dt}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn equal_time_and_origin_values_vanish() {
        let s = spec(64, 1.0, 4);
        assert_eq!(pauli_jordan(&s, 5, 0.0), 0.0);
        assert_eq!(pauli_jordan(&s, 0, 0.0), 0.0);
        assert!(literal(&s, 5, 0.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_commutator_is_kronecker_delta() {
        let s = spec(64, 1.0, 4);
        assert!((canonical_check(&s, 0) - 1.0).abs() < 1e-12);
        assert!(canonical_check(&s, 3).abs() < 1e-12);
        assert!((canonical_check(&s, 64) - 1.0).abs() < 1e-12);
        // central difference of D in dt agrees with the closed form
        let h = 1e-5;
        for dx in 0..6 {
            let fd = -(pauli_jordan(&s, dx, h) - pauli_jordan(&s, dx, -h)) / (2.0 * h);
            assert!((fd - canonical_check(&s, dx)).abs() < 1e-8, "dx={dx}");
        }
    }

    #[test]
    fn symmetries_are_exact() {
        let s = spec(64, 1.0, 4);
        for dx in -70..70 {
            for dt in [0.3, 1.0, 2.5, 11.0] {
                assert_eq!(pauli_jordan(&s, dx, dt), -pauli_jordan(&s, -dx, -dt));
                assert_eq!(pauli_jordan(&s, dx, dt), pauli_jordan(&s, dx + 64, dt));
            }
        }
    }

    #[test]
    fn table_agrees_with_direct_evaluation() {
        let s = spec(16, 0.5, 5);
        let table = CommutatorTable::new(&s);
        for steps in -4..=4 {
            for dx in -20..20 {
                assert_eq!(table.get(dx, steps), pauli_jordan(&s, dx, steps as f64));
            }
        }
        assert_eq!(table.rows().count(), 16 * 9);
    }

    #[test]
    fn lattice_graph_structure() {
        let s = spec(64, 1.0, 3);
        let lg = commutation_graph(&s, 1e-3).unwrap();
        let g = &lg.graph;
        assert_eq!(g.len(), 192);
        assert_eq!(lg.degeneracy, None);
        for t in 0..3 {
            for a in 0..64 {
                for b in 0..64 {
                    assert!(g.commutes(t * 64 + a, t * 64 + b));
                }
            }
        }
        // (x, t) and (x, t+1) do not commute: |D(0, 1)| ≈ 0.58
        assert!(!g.commutes(5, 64 + 5));
        for a in 0..g.len() {
            for b in 0..g.len() {
                assert_eq!(g.commutes(a, b), g.commutes(b, a));
            }
        }
        assert!(matches!(commutation_graph(&s, 0.0), Err(LatticeError::InvalidEps(_))));
    }

    #[test]
    fn degenerate_thresholds_are_reported() {
        let s = spec(8, 1.0, 3);
        assert_eq!(commutation_graph(&s, 10.0).unwrap().degeneracy, Some(Degeneracy::Complete));
        assert_eq!(commutation_graph(&s, 1e-300).unwrap().degeneracy, Some(Degeneracy::EqualTimeOnly));
    }

    #[test]
    fn cone_profile_errors() {
        assert!(matches!(cone_profile(&spec(16, 1.0, 4), 1e-3), Err(LatticeError::TooFewTimeSteps(4))));
        assert!(matches!(cone_profile(&spec(16, 1.0, 8), 100.0), Err(LatticeError::NoCone { .. })));
    }

    #[test]
    fn nothing_is_outside_the_cone_at_equal_time() {
        let s = spec(128, 0.1, 32);
        assert_eq!(extent_at(&Modes::new(&s), 128, 1e-3, 0.0), 0);
    }

    #[test]
    fn least_squares_recovers_a_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 * i as f64 - 2.0)).collect();
        let (s, c) = least_squares(&pts);
        assert!((s - 3.0).abs() < 1e-12 && (c + 2.0).abs() < 1e-12);
    }
}
