//! Rank conditions, non-controllability certificates and the decision
//! procedure.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    numerical_rank, singular_values, smallest_left_singular, smallest_right_singular,
};
use crate::matlie::{
    default_depth_cap, evaluate_at, lie_closure, LieBasis, LieError, Matrix, Vector, DEFAULT_TOL,
};
use crate::model::{MatrixFamily, SystemKind, SystemSpec};
use crate::reach::{
    coverage, explore_attainable, CoverageGrid, CoverageReport, ExploreConfig, ReachError,
    SamplerConfig,
};
use crate::sphere::{random_unit, rng_for, seeded_unit_points};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("operation needs a bilinear system, {0} is smooth")]
    NotBilinear(String),
    #[error("point has dimension {found}, system has n = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the origin is not in the state space")]
    ZeroPoint,
    #[error("{0}")]
    BadArgument(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Reach(#[from] ReachError),
}

fn family_of(spec: &SystemSpec) -> Result<&MatrixFamily, AnalysisError> {
    spec.family()
        .ok_or_else(|| AnalysisError::NotBilinear(spec.name().to_string()))
}

/// Lie closure of a bilinear system's matrices with the default depth cap.
pub fn closure_of(spec: &SystemSpec, tol: f64) -> Result<LieBasis, AnalysisError> {
    let fam = family_of(spec)?;
    Ok(lie_closure(
        fam.matrices(),
        tol,
        default_depth_cap(fam.n()),
    )?)
}

fn check_point(n: usize, x: &Vector) -> Result<(), AnalysisError> {
    if x.len() != n {
        return Err(AnalysisError::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if x.norm() == 0.0 {
        return Err(AnalysisError::ZeroPoint);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LarcReport {
    pub holds: bool,
    pub dim: usize,
}

pub fn larc_at(spec: &SystemSpec, x: &Vector, tol: f64) -> Result<LarcReport, AnalysisError> {
    let basis = closure_of(spec, tol)?;
    larc_with(&basis, x)
}

/// [`larc_at`] against a precomputed closure.
pub fn larc_with(basis: &LieBasis, x: &Vector) -> Result<LarcReport, AnalysisError> {
    check_point(basis.n(), x)?;
    let dim = evaluate_at(basis, x)?.dim;
    Ok(LarcReport {
        holds: dim == basis.n(),
        dim,
    })
}

/// Whether the orbit through `x` together with the ray `ℝx` spans `ℝⁿ`.
pub fn transversality_at(spec: &SystemSpec, x: &Vector, tol: f64) -> Result<bool, AnalysisError> {
    let basis = closure_of(spec, tol)?;
    transversality_with(&basis, x)
}

pub fn transversality_with(basis: &LieBasis, x: &Vector) -> Result<bool, AnalysisError> {
    check_point(basis.n(), x)?;
    let m = augmented_stack(basis.elements(), x);
    Ok(numerical_rank(&m, basis.tol(), x.norm()) == basis.n())
}

fn stack(mats: &[Matrix], x: &Vector) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(x.len(), mats.len());
    for (k, l) in mats.iter().enumerate() {
        m.set_column(k, &(l * x));
    }
    m
}

fn augmented_stack(mats: &[Matrix], x: &Vector) -> DMatrix<f64> {
    let mut m = stack(mats, x).insert_column(mats.len(), 0.0);
    m.set_column(mats.len(), x);
    m
}

/// Result of [`min_rank_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinRankReport {
    /// Smallest `σₙ` found on the unit sphere.
    pub min_sigma: f64,
    /// `min_sigma / max(σ₁, 1)` at the minimizer.
    pub relative_sigma: f64,
    pub sigma_max: f64,
    pub argmin: Vec<f64>,
    /// Best `σₙ` reached from each start.
    pub per_restart: Vec<f64>,
    /// Starts that hit the iteration cap before stalling.
    pub unconverged: usize,
}

impl MinRankReport {
    /// Whether the minimizer is a rank-drop witness at relative tolerance `tol`.
    pub fn is_witness(&self, tol: f64) -> bool {
        self.relative_sigma <= tol
    }
}

const MIN_RANK_ITERATIONS: usize = 200;

/// Multistart minimization of the `n`-th singular value of `[L₁x … L_dx]`
/// over unit `x`.
pub fn min_rank_search(
    spec: &SystemSpec,
    restarts: usize,
    seed: u64,
) -> Result<MinRankReport, AnalysisError> {
    let basis = closure_of(spec, DEFAULT_TOL)?;
    min_rank_over(basis.elements(), basis.n(), restarts, seed)
}

/// Minimizes `σₙ([M₁x … M_kx])` over the unit sphere of `ℝⁿ`.
///
/// `σₙ(E(x)) = min_u |uᵀE(x)|`, and `uᵀE(x) = R(u)x` with `R(u)` the rows
/// `uᵀMₖ`, so alternating exact minimization over `u` and `x` decreases
/// the objective monotonically. Starts are seeded unit vectors.
pub fn min_rank_over(
    mats: &[Matrix],
    n: usize,
    restarts: usize,
    seed: u64,
) -> Result<MinRankReport, AnalysisError> {
    if restarts == 0 {
        return Err(AnalysisError::BadArgument(
            "restarts must be at least 1".into(),
        ));
    }
    let runs: Vec<(f64, f64, Vector, bool)> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| descend(mats, n, random_unit(&mut rng_for(seed, r), n)))
        .collect();
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let (min_sigma, sigma_max, x, _) = &runs[best];
    Ok(MinRankReport {
        min_sigma: *min_sigma,
        relative_sigma: min_sigma / sigma_max.max(1.0),
        sigma_max: *sigma_max,
        argmin: x.iter().copied().collect(),
        per_restart: runs.iter().map(|r| r.0).collect(),
        unconverged: runs.iter().filter(|r| !r.3).count(),
    })
}

fn sigma_n(mats: &[Matrix], n: usize, x: &Vector) -> (f64, f64) {
    let s = singular_values(&stack(mats, x));
    let top = s.first().copied().unwrap_or(0.0);
    (s.get(n - 1).copied().unwrap_or(0.0), top)
}

fn descend(mats: &[Matrix], n: usize, start: Vector) -> (f64, f64, Vector, bool) {
    let (mut best, mut top) = sigma_n(mats, n, &start);
    let mut x = start;
    if mats.len() < n || best == 0.0 {
        return (best, top, x, true);
    }
    for _ in 0..MIN_RANK_ITERATIONS {
        let (_, u) = smallest_left_singular(&stack(mats, &x));
        let mut r = DMatrix::zeros(mats.len(), n);
        for (k, m) in mats.iter().enumerate() {
            r.set_row(k, &(u.transpose() * m));
        }
        let (_, next) = smallest_right_singular(&r);
        let (s, t) = sigma_n(mats, n, &next);
        if !(s < best - 1e-14 * top.max(1.0)) {
            if s < best {
                best = s;
                top = t;
                x = next;
            }
            return (best, top, x, true);
        }
        best = s;
        top = t;
        x = next;
    }
    (best, top, x, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormDirection {
    Nondecreasing,
    Nonincreasing,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The evaluated Lie algebra has dimension `dim < n` at `x`.
    LarcFailure {
        x: Vec<f64>,
        dim: usize,
        sigma_min: f64,
        sigma_max: f64,
    },
    /// Every symmetric part is semidefinite of one sign, so `|x|` is monotone.
    MonotoneNorm {
        direction: NormDirection,
        /// Ascending eigenvalues of `(M + Mᵀ)/2`, one list per matrix.
        eigenvalues: Vec<Vec<f64>>,
    },
}

const SEMIDEFINITE_SLACK: f64 = 1e-12;

/// Sign test on the symmetric parts of the family.
///
/// Eigenvalues count as nonnegative above `-1e-12 · max(1, max ‖M‖_F)`.
/// Constant takes priority when every symmetric part vanishes.
pub fn monotone_norm_certificate(family: &MatrixFamily) -> Option<Certificate> {
    let scale = family
        .matrices()
        .iter()
        .map(|m| m.norm())
        .fold(1.0, f64::max);
    let slack = SEMIDEFINITE_SLACK * scale;
    let eigenvalues: Vec<Vec<f64>> = family
        .matrices()
        .iter()
        .map(|m| {
            let sym = (m + m.transpose()) * 0.5;
            let mut e: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
            e.sort_by(f64::total_cmp);
            e
        })
        .collect();
    let all = |p: &dyn Fn(f64) -> bool| eigenvalues.iter().flatten().all(|&e| p(e));
    let direction = if all(&|e| e.abs() <= slack) {
        NormDirection::Constant
    } else if all(&|e| e >= -slack) {
        NormDirection::Nondecreasing
    } else if all(&|e| e <= slack) {
        NormDirection::Nonincreasing
    } else {
        return None;
    };
    Some(Certificate::MonotoneNorm {
        direction,
        eigenvalues,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angular {
    Accessible,
    Inaccessible,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularReport {
    pub status: Angular,
    /// Unit point where `[L₁x … L_dx | x]` drops rank.
    pub witness: Option<Vec<f64>>,
    /// Relative smallest singular value of the augmented matrix found by search.
    pub min_sigma: f64,
    pub samples: usize,
}

/// Restarts used by the searches inside [`angular_accessibility`] and
/// [`decide_controllability`].
pub const DEFAULT_RESTARTS: usize = 16;

/// Checks transversality at seeded unit points, then searches for a rank
/// drop of the augmented matrix `[L₁x … L_dx | x]`.
pub fn angular_accessibility(
    spec: &SystemSpec,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<AngularReport, AnalysisError> {
    let basis = closure_of(spec, tol)?;
    angular_with(&basis, samples, seed)
}

pub fn angular_with(
    basis: &LieBasis,
    samples: usize,
    seed: u64,
) -> Result<AngularReport, AnalysisError> {
    if samples == 0 {
        return Err(AnalysisError::BadArgument(
            "samples must be at least 1".into(),
        ));
    }
    let n = basis.n();
    let points = seeded_unit_points(n, samples, seed);
    let failures: Vec<Option<usize>> = points
        .par_iter()
        .enumerate()
        .map(|(i, x)| transversality_with(basis, x).map(|ok| (!ok).then_some(i)))
        .collect::<Result<_, _>>()?;
    if let Some(i) = failures.into_iter().flatten().next() {
        return Ok(AngularReport {
            status: Angular::Inaccessible,
            witness: Some(points[i].iter().copied().collect()),
            min_sigma: 0.0,
            samples,
        });
    }
    let mut mats = basis.elements().to_vec();
    mats.push(Matrix::identity(n, n));
    let search = min_rank_over(&mats, n, DEFAULT_RESTARTS, seed)?;
    let (status, witness) = if search.is_witness(basis.tol()) {
        (Angular::Inaccessible, Some(search.argmin.clone()))
    } else if basis.converged() {
        (Angular::Accessible, None)
    } else {
        (Angular::Unknown, None)
    };
    Ok(AngularReport {
        status,
        witness,
        min_sigma: search.relative_sigma,
        samples,
    })
}

/// Orbit dimensions at seeded unit points.
pub fn orbit_dimension_profile(
    spec: &SystemSpec,
    samples: usize,
    seed: u64,
) -> Result<Vec<usize>, AnalysisError> {
    let basis = closure_of(spec, DEFAULT_TOL)?;
    profile_with(&basis, samples, seed)
}

pub fn profile_with(
    basis: &LieBasis,
    samples: usize,
    seed: u64,
) -> Result<Vec<usize>, AnalysisError> {
    if samples == 0 {
        return Err(AnalysisError::BadArgument(
            "samples must be at least 1".into(),
        ));
    }
    seeded_unit_points(basis.n(), samples, seed)
        .par_iter()
        .map(|x| Ok(evaluate_at(basis, x)?.dim))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    /// Empirical: the sampled attainable set covers the grid.
    Controllable {
        evidence: CoverageReport,
    },
    NotControllable {
        certificate: Certificate,
    },
    Undetermined {
        diagnostics: Vec<String>,
    },
}

impl Conclusion {
    pub fn label(&self) -> &'static str {
        match self {
            Conclusion::Controllable { .. } => "controllable",
            Conclusion::NotControllable { .. } => "not_controllable",
            Conclusion::Undetermined { .. } => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub system: String,
    pub n: usize,
    pub conclusion: Conclusion,
    /// Absent for smooth systems.
    pub lie_dim: Option<usize>,
    pub lie_depth: Option<usize>,
    pub closure_converged: Option<bool>,
    pub orbit_dim_profile: Vec<usize>,
    pub angular: Angular,
    pub angular_report: Option<AngularReport>,
    pub min_rank: Option<MinRankReport>,
    /// Grid coverage of the explored attainable set, when sampling ran.
    pub coverage: Option<CoverageReport>,
    /// Durations were drawn for the family divided by this rate.
    pub time_scale: f64,
}

impl Verdict {
    pub fn coverage_fraction(&self) -> Option<f64> {
        self.coverage.as_ref().map(|c| c.fraction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecideConfig {
    /// Unit points for the orbit profile and transversality checks.
    pub samples: usize,
    pub reach_budget: usize,
    pub coverage_threshold: f64,
    pub tol: f64,
    pub seed: u64,
    pub restarts: usize,
    pub sampler: SamplerConfig,
    pub explore: ExploreConfig,
    pub angular_cells: usize,
    pub radial_bins: usize,
    pub projective: bool,
    /// Sample coverage even after a certificate has settled the verdict.
    pub always_sample: bool,
}

impl Default for DecideConfig {
    fn default() -> Self {
        Self {
            samples: 10_000,
            reach_budget: 100_000,
            coverage_threshold: 0.99,
            tol: DEFAULT_TOL,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
            sampler: SamplerConfig::default(),
            explore: ExploreConfig::default(),
            angular_cells: crate::reach::DEFAULT_ANGULAR_CELLS,
            radial_bins: crate::reach::DEFAULT_RADIAL_BINS,
            projective: false,
            always_sample: false,
        }
    }
}

impl DecideConfig {
    fn validate(&self) -> Result<(), AnalysisError> {
        let bad = |m: String| Err(AnalysisError::BadArgument(m));
        if self.samples == 0 || self.reach_budget == 0 || self.restarts == 0 {
            return bad("samples, budget and restarts must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.coverage_threshold) {
            return bad(format!("coverage threshold {}", self.coverage_threshold));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("tolerance {}", self.tol));
        }
        Ok(())
    }
}

/// Decision procedure.
///
/// Bilinear systems go through closure, a rank-drop search for a LARC
/// failure, the monotone-norm test and finally grid coverage of the
/// explored attainable set from `e₁`. Durations are drawn for the family
/// divided by its largest spectral norm, so `𝓜` and `λ𝓜` are sampled
/// identically. Smooth systems only get the coverage step.
pub fn decide_controllability(
    spec: &SystemSpec,
    config: &DecideConfig,
) -> Result<Verdict, AnalysisError> {
    config.validate()?;
    let n = spec.n();
    let mut verdict = Verdict {
        system: spec.name().to_string(),
        n,
        conclusion: Conclusion::Undetermined {
            diagnostics: Vec::new(),
        },
        lie_dim: None,
        lie_depth: None,
        closure_converged: None,
        orbit_dim_profile: Vec::new(),
        angular: Angular::Unknown,
        angular_report: None,
        min_rank: None,
        coverage: None,
        time_scale: 1.0,
    };
    let mut diagnostics = Vec::new();
    let mut certificate = None;

    if let SystemKind::Bilinear(fam) = spec.kind() {
        let rate = fam.rate();
        if rate > 0.0 {
            verdict.time_scale = rate;
        }
        let basis = lie_closure(fam.matrices(), config.tol, default_depth_cap(n))?;
        verdict.lie_dim = Some(basis.dim());
        verdict.lie_depth = Some(basis.depth());
        verdict.closure_converged = Some(basis.converged());
        verdict.orbit_dim_profile = profile_with(&basis, config.samples, config.seed)?;
        let angular = angular_with(&basis, config.samples, config.seed)?;
        verdict.angular = angular.status;
        verdict.angular_report = Some(angular);

        if !basis.converged() {
            diagnostics.push(format!(
                "Lie closure hit the depth cap {} at dimension {}",
                default_depth_cap(n),
                basis.dim()
            ));
        } else {
            let search = min_rank_over(basis.elements(), n, config.restarts, config.seed)?;
            let profile_drop = verdict.orbit_dim_profile.iter().position(|&d| d < n);
            if search.is_witness(config.tol) {
                let x = Vector::from_column_slice(&search.argmin);
                let rep = evaluate_at(&basis, &x)?;
                if rep.dim < n {
                    certificate = Some(Certificate::LarcFailure {
                        x: search.argmin.clone(),
                        dim: rep.dim,
                        sigma_min: rep.singular_values.get(n - 1).copied().unwrap_or(0.0),
                        sigma_max: rep.singular_values.first().copied().unwrap_or(0.0),
                    });
                }
            }
            if certificate.is_none() {
                if let Some(i) = profile_drop {
                    let x = seeded_unit_points(n, i + 1, config.seed)
                        .pop()
                        .expect("sampled point");
                    let rep = evaluate_at(&basis, &x)?;
                    certificate = Some(Certificate::LarcFailure {
                        x: x.iter().copied().collect(),
                        dim: rep.dim,
                        sigma_min: rep.singular_values.get(n - 1).copied().unwrap_or(0.0),
                        sigma_max: rep.singular_values.first().copied().unwrap_or(0.0),
                    });
                }
            }
            if certificate.is_none() {
                diagnostics.push(format!(
                    "no rank drop found: smallest relative sigma_n {:.3e} over {} starts",
                    search.relative_sigma, config.restarts
                ));
            }
            verdict.min_rank = Some(search);
        }
        if certificate.is_none() {
            certificate = monotone_norm_certificate(fam);
        }
    } else {
        diagnostics.push("smooth system: only coverage evidence is available".into());
    }

    let settled = certificate.is_some() || verdict.closure_converged == Some(false);
    if !settled || config.always_sample {
        let normalized = spec.scaled(1.0 / verdict.time_scale);
        let grid = CoverageGrid::new(
            n,
            config.angular_cells,
            config.radial_bins,
            crate::reach::DEFAULT_R_MIN,
            crate::reach::DEFAULT_R_MAX,
            config.projective,
            config.seed,
        )?;
        let mut x0 = Vector::zeros(n);
        x0[0] = 1.0;
        let explored = explore_attainable(
            &normalized,
            &x0,
            config.reach_budget,
            config.seed,
            &config.sampler,
            &grid,
            &config.explore,
        )?;
        verdict.coverage = Some(coverage(&explored.cloud, &grid));
    }

    verdict.conclusion = if let Some(certificate) = certificate {
        Conclusion::NotControllable { certificate }
    } else {
        match &verdict.coverage {
            Some(c)
                if c.fraction >= config.coverage_threshold
                    && verdict.closure_converged != Some(false) =>
            {
                Conclusion::Controllable {
                    evidence: c.clone(),
                }
            }
            Some(c) => {
                diagnostics.push(format!(
                    "coverage {:.4} below threshold {}",
                    c.fraction, config.coverage_threshold
                ));
                Conclusion::Undetermined { diagnostics }
            }
            None => Conclusion::Undetermined { diagnostics },
        }
    };
    Ok(verdict)
}
