//! Piecewise-constant simulation, attainable-set sampling, grid coverage
//! and targeted reachability tests.

use std::f64::consts::TAU;
use std::io::{self, Write};

use rand::Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matlie::{matrix_exponential, LieError, Vector};
use crate::model::{
    ControlSchedule, MatrixFamily, ModelError, ScheduleMode, SystemKind, SystemSpec,
};
use crate::ode::{self, OdeError};
use crate::sphere::{quasi_uniform_sphere, rng_for};

/// States with a smaller norm are reported as degenerate.
pub const DEGENERATE_NORM: f64 = 1e-300;
/// Smooth integration aborts once the state norm exceeds this.
pub const BLOWUP_NORM: f64 = 1e12;

#[derive(Debug, Error)]
pub enum ReachError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("initial state must be nonzero")]
    ZeroState,
    #[error("state collapsed to norm {norm:e} in segment {segment}")]
    Degenerate { segment: usize, norm: f64 },
    #[error("integration failed in segment {segment}: {source}")]
    Integration {
        segment: usize,
        source: OdeError,
        partial: Box<Trajectory>,
    },
    #[error("operation needs a {0} system")]
    WrongKind(&'static str),
    #[error("invalid coverage grid: {0}")]
    BadGrid(String),
    #[error("invalid argument: {0}")]
    BadArgument(String),
}

/// States at segment boundaries (plus optional dense samples).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vector>,
    pub schedule: ControlSchedule,
}

impl Trajectory {
    pub fn endpoint(&self) -> &Vector {
        self.states
            .last()
            .expect("trajectory has its initial state")
    }
}

fn check_start(n: usize, x0: &Vector) -> Result<(), ReachError> {
    if x0.len() != n {
        return Err(ModelError::VectorLength {
            expected: n,
            found: x0.len(),
        }
        .into());
    }
    if x0.norm() == 0.0 {
        return Err(ReachError::ZeroState);
    }
    Ok(())
}

/// Exact simulation: the endpoint is `exp(t_k M_k)···exp(t₁ M₁) x0`.
pub fn simulate_bilinear(
    family: &MatrixFamily,
    schedule: &ControlSchedule,
    x0: &Vector,
) -> Result<Trajectory, ReachError> {
    simulate_bilinear_sampled(family, schedule, x0, None)
}

/// As [`simulate_bilinear`], additionally recording states every
/// `interval` time units inside segments.
pub fn simulate_bilinear_sampled(
    family: &MatrixFamily,
    schedule: &ControlSchedule,
    x0: &Vector,
    interval: Option<f64>,
) -> Result<Trajectory, ReachError> {
    check_start(family.n(), x0)?;
    schedule.validate(family.len())?;
    if let Some(dt) = interval {
        if !(dt > 0.0) {
            return Err(ReachError::BadArgument(format!("sampling interval {dt}")));
        }
    }
    let mut times = vec![0.0];
    let mut states = vec![x0.clone()];
    let mut t = 0.0;
    let mut x = x0.clone();
    for (segment, seg) in schedule.segments.iter().enumerate() {
        let m = &family.matrices()[seg.field];
        let span = seg.duration.abs();
        if let Some(dt) = interval {
            let sign = seg.duration.signum();
            let mut tau = dt;
            while tau < span {
                let y = matrix_exponential(m, sign * tau)? * &x;
                times.push(t + tau);
                states.push(y);
                tau += dt;
            }
        }
        x = matrix_exponential(m, seg.duration)? * &x;
        let norm = x.norm();
        if norm < DEGENERATE_NORM {
            return Err(ReachError::Degenerate { segment, norm });
        }
        t += span;
        times.push(t);
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        states,
        schedule: schedule.clone(),
    })
}

fn bilinear_endpoint(
    family: &MatrixFamily,
    schedule: &ControlSchedule,
    x0: &Vector,
) -> Result<Vector, ReachError> {
    let mut x = x0.clone();
    for (segment, seg) in schedule.segments.iter().enumerate() {
        x = matrix_exponential(&family.matrices()[seg.field], seg.duration)? * x;
        let norm = x.norm();
        if norm < DEGENERATE_NORM {
            return Err(ReachError::Degenerate { segment, norm });
        }
    }
    Ok(x)
}

/// Adaptive integration of the switched system `ẋ = f_{u(t)}(x)`.
///
/// On failure the error carries the trajectory up to the last completed
/// segment.
pub fn simulate_smooth(
    spec: &SystemSpec,
    schedule: &ControlSchedule,
    x0: &Vector,
    step_tol: f64,
) -> Result<Trajectory, ReachError> {
    if !matches!(spec.kind(), SystemKind::Smooth(_)) {
        return Err(ReachError::WrongKind("smooth"));
    }
    check_start(spec.n(), x0)?;
    schedule.validate(spec.field_count())?;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x0.clone()],
        schedule: schedule.clone(),
    };
    let mut t = 0.0;
    for (segment, seg) in schedule.segments.iter().enumerate() {
        let f = |x: &Vector| spec.eval_field(seg.field, x);
        let x = traj.endpoint().clone();
        match ode::integrate(&f, &x, seg.duration, step_tol, BLOWUP_NORM) {
            Ok((y, _)) => {
                let norm = y.norm();
                if norm < DEGENERATE_NORM {
                    return Err(ReachError::Degenerate { segment, norm });
                }
                t += seg.duration.abs();
                traj.times.push(t);
                traj.states.push(y);
            }
            Err(source) => {
                return Err(ReachError::Integration {
                    segment,
                    source,
                    partial: Box::new(traj),
                })
            }
        }
    }
    Ok(traj)
}

/// Endpoint of `schedule` from `x0` for either kind of system.
pub fn endpoint(
    spec: &SystemSpec,
    schedule: &ControlSchedule,
    x0: &Vector,
    step_tol: f64,
) -> Result<Vector, ReachError> {
    match spec.kind() {
        SystemKind::Bilinear(f) => {
            check_start(f.n(), x0)?;
            schedule.validate(f.len())?;
            bilinear_endpoint(f, schedule, x0)
        }
        SystemKind::Smooth(_) => {
            simulate_smooth(spec, schedule, x0, step_tol).map(|t| t.endpoint().clone())
        }
    }
}

/// Distribution of random schedules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Segment count is uniform on `1..=max_segments`.
    pub max_segments: usize,
    /// Mean of the exponential duration distribution.
    pub duration_scale: f64,
    /// Local error tolerance for smooth systems.
    pub step_tol: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            max_segments: 8,
            duration_scale: 1.0,
            step_tol: 1e-8,
        }
    }
}

impl SamplerConfig {
    fn validate(&self) -> Result<(), ReachError> {
        if self.max_segments == 0 || !(self.duration_scale > 0.0) || !(self.step_tol > 0.0) {
            return Err(ReachError::BadArgument(format!("sampler {self:?}")));
        }
        Ok(())
    }
}

/// Random attainable-mode schedule over `fields` control fields.
pub fn random_schedule<R: Rng + ?Sized>(
    rng: &mut R,
    fields: usize,
    sampler: &SamplerConfig,
) -> ControlSchedule {
    let exp = Exp::new(1.0 / sampler.duration_scale).expect("positive rate");
    let k = rng.random_range(1..=sampler.max_segments);
    ControlSchedule::attainable((0..k).map(|_| (rng.random_range(0..fields), exp.sample(rng))))
}

/// Schedule number `index` of the stream selected by `seed`.
pub fn indexed_schedule(
    seed: u64,
    index: usize,
    fields: usize,
    sampler: &SamplerConfig,
) -> ControlSchedule {
    random_schedule(&mut rng_for(seed, index as u64), fields, sampler)
}

/// Sampled endpoints of the attainable set.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub n: usize,
    pub points: Vec<Vector>,
    /// Schedules whose simulation failed (blow-up, degeneracy).
    pub discarded: usize,
}

impl PointCloud {
    pub fn from_points(n: usize, points: Vec<Vector>) -> Self {
        Self {
            n,
            points,
            discarded: 0,
        }
    }

    /// One point per row, comma separated, with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<String> = (0..self.n).map(|i| format!("x{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Endpoints of `budget` random schedules from `x0`. Schedule `i` depends
/// only on `(seed, i)`, so the cloud is independent of thread scheduling.
pub fn sample_attainable(
    spec: &SystemSpec,
    x0: &Vector,
    budget: usize,
    seed: u64,
    sampler: &SamplerConfig,
) -> Result<PointCloud, ReachError> {
    if budget == 0 {
        return Err(ReachError::BadArgument("budget must be at least 1".into()));
    }
    sampler.validate()?;
    check_start(spec.n(), x0)?;
    let fields = spec.field_count();
    let results: Vec<Option<Vector>> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let s = indexed_schedule(seed, i, fields, sampler);
            endpoint(spec, &s, x0, sampler.step_tol).ok()
        })
        .collect();
    let discarded = results.iter().filter(|r| r.is_none()).count();
    Ok(PointCloud {
        n: spec.n(),
        points: results.into_iter().flatten().collect(),
        discarded,
    })
}

/// Settings for [`explore_attainable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExploreConfig {
    /// Share of the budget spent on independent schedules before guided
    /// extension starts.
    pub warmup_fraction: f64,
    /// Extensions drawn per parent snapshot.
    pub batch: usize,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        Self {
            warmup_fraction: 0.5,
            batch: 1024,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Origin {
    /// Independent schedule number `i` of the seed stream.
    Root(usize),
    /// One segment appended to another point's schedule.
    Extend {
        parent: usize,
        field: usize,
        duration: f64,
    },
}

/// Cloud from [`explore_attainable`], with enough bookkeeping to rebuild
/// the schedule behind every point.
#[derive(Debug, Clone)]
pub struct ExploredCloud {
    pub cloud: PointCloud,
    origins: Vec<Origin>,
    seed: u64,
    fields: usize,
    sampler: SamplerConfig,
}

impl ExploredCloud {
    /// Schedule that steers the start point to `cloud.points[index]`.
    pub fn schedule(&self, index: usize) -> ControlSchedule {
        let mut tail = Vec::new();
        let mut cur = index;
        loop {
            match self.origins[cur] {
                Origin::Root(i) => {
                    let mut s = indexed_schedule(self.seed, i, self.fields, &self.sampler);
                    s.segments.extend(tail.into_iter().rev());
                    return s;
                }
                Origin::Extend {
                    parent,
                    field,
                    duration,
                } => {
                    tail.push(crate::model::Segment { field, duration });
                    cur = parent;
                }
            }
        }
    }
}

const EXTEND_SALT: u64 = 0x6a09_e667_f3bc_c908;

/// Grid-guided sampling of the attainable set.
///
/// The first `warmup_fraction · budget` points are the independent
/// schedules of [`sample_attainable`]. After that each new point extends an
/// existing one by a single random segment (same field and duration law);
/// the parent is drawn uniformly over occupied grid cells and then
/// uniformly within the cell, which pushes samples toward sparsely reached
/// regions. Every point remains the endpoint of an attainable-mode
/// schedule, recoverable with [`ExploredCloud::schedule`].
///
/// Parents are drawn from a snapshot taken once per batch and extension
/// `k` uses randomness from `(seed, k)`, so results do not depend on
/// thread scheduling.
pub fn explore_attainable(
    spec: &SystemSpec,
    x0: &Vector,
    budget: usize,
    seed: u64,
    sampler: &SamplerConfig,
    grid: &CoverageGrid,
    explore: &ExploreConfig,
) -> Result<ExploredCloud, ReachError> {
    if budget == 0 {
        return Err(ReachError::BadArgument("budget must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&explore.warmup_fraction) || explore.batch == 0 {
        return Err(ReachError::BadArgument(format!("explore {explore:?}")));
    }
    if grid.n() != spec.n() {
        return Err(ReachError::BadGrid(format!(
            "grid is for n = {}, system has n = {}",
            grid.n(),
            spec.n()
        )));
    }
    sampler.validate()?;
    check_start(spec.n(), x0)?;
    let fields = spec.field_count();
    let warmup = ((budget as f64 * explore.warmup_fraction).round() as usize).clamp(1, budget);

    let roots: Vec<Option<Vector>> = (0..warmup)
        .into_par_iter()
        .map(|i| {
            let s = indexed_schedule(seed, i, fields, sampler);
            endpoint(spec, &s, x0, sampler.step_tol).ok()
        })
        .collect();
    let mut discarded = 0;
    let mut points = Vec::with_capacity(budget);
    let mut origins = Vec::with_capacity(budget);
    for (i, r) in roots.into_iter().enumerate() {
        match r {
            Some(p) => {
                points.push(p);
                origins.push(Origin::Root(i));
            }
            None => discarded += 1,
        }
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); grid.total_cells()];
    for (i, p) in points.iter().enumerate() {
        if let Some(c) = grid.cell_of(p) {
            buckets[c].push(i);
        }
    }

    let exp = Exp::new(1.0 / sampler.duration_scale).expect("positive rate");
    let mut drawn = warmup;
    let mut extension = 0u64;
    while drawn < budget && !points.is_empty() {
        let occupied: Vec<usize> = (0..buckets.len())
            .filter(|&c| !buckets[c].is_empty())
            .collect();
        let batch = (budget - drawn).min(explore.batch);
        let snapshot = &points;
        let buckets_ref = &buckets;
        let new: Vec<Option<(usize, usize, f64, Vector)>> = (0..batch as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = rng_for(seed ^ EXTEND_SALT, extension + k);
                let parent = if occupied.is_empty() {
                    rng.random_range(0..snapshot.len())
                } else {
                    let cell = &buckets_ref[occupied[rng.random_range(0..occupied.len())]];
                    cell[rng.random_range(0..cell.len())]
                };
                let field = rng.random_range(0..fields);
                let duration = exp.sample(&mut rng);
                let seg = ControlSchedule::attainable([(field, duration)]);
                endpoint(spec, &seg, &snapshot[parent], sampler.step_tol)
                    .ok()
                    .map(|y| (parent, field, duration, y))
            })
            .collect();
        extension += batch as u64;
        drawn += batch;
        for item in new {
            match item {
                Some((parent, field, duration, y)) => {
                    if let Some(c) = grid.cell_of(&y) {
                        buckets[c].push(points.len());
                    }
                    points.push(y);
                    origins.push(Origin::Extend {
                        parent,
                        field,
                        duration,
                    });
                }
                None => discarded += 1,
            }
        }
    }

    Ok(ExploredCloud {
        cloud: PointCloud {
            n: spec.n(),
            points,
            discarded,
        },
        origins,
        seed,
        fields,
        sampler: *sampler,
    })
}

#[derive(Debug, Clone)]
enum Partition {
    Signs,
    Circle { cells: usize },
    Bands { bands: usize, sectors: usize },
    Nearest { centers: Vec<Vector> },
}

/// Annulus grid: an equal-area partition of the unit sphere times uniform
/// bins in `log|x|`.
#[derive(Debug, Clone)]
pub struct CoverageGrid {
    n: usize,
    angular_cells: usize,
    radial_bins: usize,
    r_min: f64,
    r_max: f64,
    projective: bool,
    partition: Partition,
    class_of: Vec<usize>,
    classes: usize,
}

/// Default angular resolution.
pub const DEFAULT_ANGULAR_CELLS: usize = 32;
/// Default number of radial bins.
pub const DEFAULT_RADIAL_BINS: usize = 16;
pub const DEFAULT_R_MIN: f64 = 0.1;
pub const DEFAULT_R_MAX: f64 = 10.0;

impl CoverageGrid {
    /// Grid over `r_min ≤ |x| ≤ r_max`. `seed` only matters for `n > 3`,
    /// where cells are nearest-neighbour regions of seeded centers. In
    /// projective mode `x` and `−x` share a cell.
    pub fn new(
        n: usize,
        angular_cells: usize,
        radial_bins: usize,
        r_min: f64,
        r_max: f64,
        projective: bool,
        seed: u64,
    ) -> Result<Self, ReachError> {
        if n == 0 || angular_cells == 0 || radial_bins == 0 {
            return Err(ReachError::BadGrid(
                "dimensions and resolutions must be positive".into(),
            ));
        }
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(ReachError::BadGrid(format!(
                "radial range [{r_min}, {r_max}]"
            )));
        }
        if projective && n >= 2 && angular_cells % 2 != 0 {
            return Err(ReachError::BadGrid(
                "projective mode needs an even angular resolution".into(),
            ));
        }
        let partition = match n {
            1 => Partition::Signs,
            2 => Partition::Circle {
                cells: angular_cells,
            },
            3 => {
                let bands = (1..=angular_cells)
                    .filter(|b| angular_cells % b == 0)
                    .filter(|b| 2 * b * b <= angular_cells)
                    .filter(|b| !projective || (angular_cells / b) % 2 == 0)
                    .max()
                    .unwrap_or(1);
                Partition::Bands {
                    bands,
                    sectors: angular_cells / bands,
                }
            }
            _ => {
                let half = angular_cells.div_ceil(2);
                let base = quasi_uniform_sphere(n, half, seed);
                let mut centers = base.clone();
                centers.extend(base.iter().map(|c| -c));
                centers.truncate(angular_cells);
                Partition::Nearest { centers }
            }
        };
        let raw = match &partition {
            Partition::Signs => 2,
            _ => angular_cells,
        };
        let mut grid = Self {
            n,
            angular_cells: raw,
            radial_bins,
            r_min,
            r_max,
            projective,
            partition,
            class_of: (0..raw).collect(),
            classes: raw,
        };
        if projective {
            let keys: Vec<usize> = (0..raw).map(|c| c.min(grid.antipode(c))).collect();
            let mut uniq = keys.clone();
            uniq.sort_unstable();
            uniq.dedup();
            grid.class_of = keys
                .iter()
                .map(|k| uniq.binary_search(k).unwrap())
                .collect();
            grid.classes = uniq.len();
        }
        Ok(grid)
    }

    /// 32 angular cells × 16 radial bins on `0.1 ≤ |x| ≤ 10`.
    pub fn default_annulus(n: usize, projective: bool) -> Result<Self, ReachError> {
        Self::new(
            n,
            DEFAULT_ANGULAR_CELLS,
            DEFAULT_RADIAL_BINS,
            DEFAULT_R_MIN,
            DEFAULT_R_MAX,
            projective,
            0,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Angular cells before any quotient (2 when `n = 1`).
    pub fn angular_cells(&self) -> usize {
        self.angular_cells
    }

    /// Angular cells after the antipodal quotient, if any.
    pub fn angular_classes(&self) -> usize {
        self.classes
    }

    pub fn radial_bins(&self) -> usize {
        self.radial_bins
    }

    pub fn total_cells(&self) -> usize {
        self.classes * self.radial_bins
    }

    fn antipode(&self, cell: usize) -> usize {
        match &self.partition {
            Partition::Signs => 1 - cell,
            Partition::Circle { cells } => (cell + cells / 2) % cells,
            Partition::Bands { bands, sectors } => {
                let (b, s) = (cell / sectors, cell % sectors);
                (bands - 1 - b) * sectors + (s + sectors / 2) % sectors
            }
            Partition::Nearest { centers } => (cell + centers.len() / 2) % centers.len(),
        }
    }

    /// Raw angular cell of a unit vector (before any quotient).
    pub fn angular_cell(&self, u: &Vector) -> usize {
        match &self.partition {
            Partition::Signs => usize::from(u[0] < 0.0),
            Partition::Circle { cells } => {
                let a = u[1].atan2(u[0]).rem_euclid(TAU);
                ((a / TAU * *cells as f64) as usize).min(cells - 1)
            }
            Partition::Bands { bands, sectors } => {
                let z = u[2].clamp(-1.0, 1.0);
                let b = (((z + 1.0) / 2.0 * *bands as f64) as usize).min(bands - 1);
                let a = u[1].atan2(u[0]).rem_euclid(TAU);
                let s = ((a / TAU * *sectors as f64) as usize).min(sectors - 1);
                b * sectors + s
            }
            Partition::Nearest { centers } => centers
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.dot(u).total_cmp(&b.1.dot(u)))
                .map(|(i, _)| i)
                .unwrap_or(0),
        }
    }

    /// Flat cell index of `x`, or `None` outside the annulus.
    pub fn cell_of(&self, x: &Vector) -> Option<usize> {
        let r = x.norm();
        if !(r >= self.r_min && r <= self.r_max) {
            return None;
        }
        let span = (self.r_max / self.r_min).ln();
        let bin = (((r / self.r_min).ln() / span * self.radial_bins as f64) as usize)
            .min(self.radial_bins - 1);
        let class = self.class_of[self.angular_cell(&(x / r))];
        Some(bin * self.classes + class)
    }
}

/// Which grid cells a cloud reaches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub n: usize,
    pub angular_cells: usize,
    pub radial_bins: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub projective: bool,
    pub total_cells: usize,
    pub hit_cells: usize,
    pub fraction: f64,
    pub points: usize,
    pub points_in_range: usize,
    /// Row-major over (radial bin, angular cell).
    pub hits: Vec<bool>,
}

impl CoverageReport {
    /// Angular cells hit in radial bin `bin`.
    pub fn angular_hits(&self, bin: usize) -> usize {
        self.hits[bin * self.angular_cells..(bin + 1) * self.angular_cells]
            .iter()
            .filter(|h| **h)
            .count()
    }

    pub fn radial_bin_hit(&self, bin: usize) -> bool {
        self.angular_hits(bin) > 0
    }
}

pub fn coverage(cloud: &PointCloud, grid: &CoverageGrid) -> CoverageReport {
    let mut hits = vec![false; grid.total_cells()];
    let mut in_range = 0;
    for p in &cloud.points {
        if p.len() != grid.n {
            continue;
        }
        if let Some(c) = grid.cell_of(p) {
            hits[c] = true;
            in_range += 1;
        }
    }
    let hit_cells = hits.iter().filter(|h| **h).count();
    CoverageReport {
        n: grid.n,
        angular_cells: grid.classes,
        radial_bins: grid.radial_bins,
        r_min: grid.r_min,
        r_max: grid.r_max,
        projective: grid.projective,
        total_cells: grid.total_cells(),
        hit_cells,
        fraction: hit_cells as f64 / grid.total_cells() as f64,
        points: cloud.points.len(),
        points_in_range: in_range,
        hits,
    }
}

/// Outcome of [`approx_reach_test`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachTest {
    pub hit: bool,
    pub witness: Option<ControlSchedule>,
    /// Distance from the target of the best endpoint found.
    pub distance: f64,
    /// Whether the witness came from duration refinement rather than raw sampling.
    pub refined: bool,
}

/// Candidates passed from raw sampling to duration refinement.
const REFINE_CANDIDATES: usize = 8;
const REFINE_ITERATIONS: usize = 200;

/// Looks for an attainable-mode schedule steering `x0` to within `eps` of
/// `target`.
///
/// `budget` random schedules are simulated first; if none lands within
/// `eps`, the closest few have their durations refined by projected
/// Levenberg–Marquardt (durations stay nonnegative). A reported witness has
/// been replayed from scratch and verified.
pub fn approx_reach_test(
    spec: &SystemSpec,
    x0: &Vector,
    target: &Vector,
    eps: f64,
    budget: usize,
    seed: u64,
    sampler: &SamplerConfig,
) -> Result<ReachTest, ReachError> {
    if !(eps > 0.0) {
        return Err(ReachError::BadArgument(format!("eps = {eps}")));
    }
    if budget == 0 {
        return Err(ReachError::BadArgument("budget must be at least 1".into()));
    }
    sampler.validate()?;
    check_start(spec.n(), x0)?;
    check_start(spec.n(), target).map_err(|_| {
        ReachError::BadArgument("target must be a nonzero vector of matching length".into())
    })?;
    let fields = spec.field_count();

    let scored: Vec<(usize, f64)> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let s = indexed_schedule(seed, i, fields, sampler);
            let d = endpoint(spec, &s, x0, sampler.step_tol)
                .map(|y| (y - target).norm())
                .unwrap_or(f64::INFINITY);
            (i, d)
        })
        .collect();

    let verify = |s: &ControlSchedule| -> Option<f64> {
        endpoint(spec, s, x0, sampler.step_tol)
            .ok()
            .map(|y| (y - target).norm())
            .filter(|d| *d <= eps)
    };

    if let Some(&(i, _)) = scored.iter().find(|(_, d)| *d <= eps) {
        let s = indexed_schedule(seed, i, fields, sampler);
        if let Some(d) = verify(&s) {
            return Ok(ReachTest {
                hit: true,
                witness: Some(s),
                distance: d,
                refined: false,
            });
        }
    }

    let mut ranked: Vec<(usize, f64)> = scored.into_iter().filter(|(_, d)| d.is_finite()).collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut best = ranked.first().map(|r| r.1).unwrap_or(f64::INFINITY);
    let fd_step = match spec.kind() {
        SystemKind::Bilinear(_) => 1e-7,
        SystemKind::Smooth(_) => sampler.step_tol.sqrt().max(1e-6),
    };
    for &(i, _) in ranked.iter().take(REFINE_CANDIDATES) {
        let start = indexed_schedule(seed, i, fields, sampler);
        let (s, d) = refine_durations(spec, x0, target, start, eps, fd_step, sampler.step_tol);
        best = best.min(d);
        if d <= eps {
            if let Some(dv) = verify(&s) {
                return Ok(ReachTest {
                    hit: true,
                    witness: Some(s),
                    distance: dv,
                    refined: true,
                });
            }
        }
    }
    Ok(ReachTest {
        hit: false,
        witness: None,
        distance: best,
        refined: false,
    })
}

fn refine_durations(
    spec: &SystemSpec,
    x0: &Vector,
    target: &Vector,
    mut schedule: ControlSchedule,
    eps: f64,
    fd_step: f64,
    step_tol: f64,
) -> (ControlSchedule, f64) {
    let m = schedule.segments.len();
    let nonneg = schedule.mode == ScheduleMode::Attainable;
    let residual = |s: &ControlSchedule| endpoint(spec, s, x0, step_tol).ok().map(|y| y - target);
    let Some(mut r) = residual(&schedule) else {
        return (schedule, f64::INFINITY);
    };
    let mut mu = 1e-3;
    for _ in 0..REFINE_ITERATIONS {
        if r.norm() <= 0.1 * eps {
            break;
        }
        let mut jac = nalgebra::DMatrix::zeros(r.len(), m);
        for k in 0..m {
            let t = schedule.segments[k].duration;
            let h = fd_step * t.abs().max(1.0);
            let mut plus = schedule.clone();
            plus.segments[k].duration = t + h;
            let col = if nonneg && t < h {
                residual(&plus).map(|rp| (rp - &r) / h)
            } else {
                let mut minus = schedule.clone();
                minus.segments[k].duration = t - h;
                match (residual(&plus), residual(&minus)) {
                    (Some(rp), Some(rm)) => Some((rp - rm) / (2.0 * h)),
                    _ => None,
                }
            };
            match col {
                Some(c) => jac.set_column(k, &c),
                None => return (schedule, r.norm()),
            }
        }
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * &r;
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for k in 0..m {
                a[(k, k)] += mu * (1.0 + jtj[(k, k)]);
            }
            let Some(delta) = a.lu().solve(&(-&g)) else {
                mu *= 4.0;
                continue;
            };
            let mut trial = schedule.clone();
            for k in 0..m {
                let t = trial.segments[k].duration + delta[k];
                trial.segments[k].duration = if nonneg { t.max(0.0) } else { t };
            }
            if let Some(rt) = residual(&trial) {
                if rt.norm() < r.norm() {
                    schedule = trial;
                    r = rt;
                    mu = (mu / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    let d = r.norm();
    (schedule, d)
}
