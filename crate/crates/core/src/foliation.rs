//! Leaves of codimension-one distributions transversal to the radial
//! direction, traced inside planar sections `span{p, θ}` until they come
//! back around to the opposite ray `−ℝ₊p`.

use std::cell::Cell;
use std::io::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{numerical_rank, smallest_left_singular};
use crate::matlie::{LieBasis, Vector};
use crate::ode::Dopri5;
use crate::sphere::quasi_uniform_sphere;

pub type NormalFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;
pub type LevelFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoliationError {
    #[error("distribution needs n >= {min}, got {n}")]
    BadDimension { n: usize, min: usize },
    #[error("theta must be a unit vector orthogonal to the pole")]
    BadTheta,
    #[error("point is not in the section plane (residual {0:e})")]
    NotInPlane(f64),
    #[error("leaf tangent contains the radial direction at {x:?} (cosine {cosine:e})")]
    DegenerateSection { x: Vec<f64>, cosine: f64 },
    #[error("Lie algebra has rank {rank} at the pole, need n - 1 = {expected}")]
    NotCodimensionOne { rank: usize, expected: usize },
    #[error("no return to the opposite ray within arc length {arc_length}")]
    NoReturn { arc_length: f64 },
    #[error("leaf meets the opposite ray tangentially at {x:?}")]
    TangentialCrossing { x: Vec<f64> },
    #[error("step size underflow at arc length {0}")]
    StepUnderflow(f64),
    #[error("theta sample {index}: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<FoliationError>,
    },
    #[error("arc {index} ends {mismatch:e} away from the common return point")]
    EndpointMismatch { index: usize, mismatch: f64 },
    #[error("{0}")]
    BadArgument(String),
}

#[derive(Clone)]
enum Source {
    NormalField {
        normal: NormalFn,
        level: Option<LevelFn>,
    },
    OrbitTangent(LieBasis),
}

/// A homogeneous codimension-one distribution on `ℝⁿ∖{0}`: the leaf
/// tangent at `x` is the orthogonal complement of a normal `N(x)`.
#[derive(Clone)]
pub struct RadialDistribution {
    n: usize,
    name: String,
    source: Source,
}

impl std::fmt::Debug for RadialDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialDistribution")
            .field("n", &self.n)
            .field("name", &self.name)
            .finish()
    }
}

impl RadialDistribution {
    /// Custom normal field, optionally with a function constant on leaves.
    pub fn normal_field(
        name: impl Into<String>,
        n: usize,
        normal: NormalFn,
        level: Option<LevelFn>,
    ) -> Result<Self, FoliationError> {
        if n < 2 {
            return Err(FoliationError::BadDimension { n, min: 2 });
        }
        Ok(Self {
            n,
            name: name.into(),
            source: Source::NormalField { normal, level },
        })
    }

    /// Concentric spheres, `N(x) = x`.
    pub fn sphere(n: usize) -> Result<Self, FoliationError> {
        Self::normal_field(
            "sphere",
            n,
            Arc::new(|x: &Vector| x.clone()),
            Some(Arc::new(|x: &Vector| x.norm().ln())),
        )
    }

    /// Leaves `log|x| = c·σₙ + const` with `σ = x/|x|`, i.e. level sets of
    /// `F(x) = log|x| − c·xₙ/|x|`. The normal `σ − c(eₙ − σₙσ)` has unit
    /// radial component, so transversality holds for every `c`.
    pub fn radial_graph(n: usize, c: f64) -> Result<Self, FoliationError> {
        Self::normal_field(
            format!("radial_graph_c{c}"),
            n,
            Arc::new(move |x: &Vector| {
                let s = x / x.norm();
                let sn = s[s.len() - 1];
                let mut v = &s * (1.0 + c * sn);
                let last = v.len() - 1;
                v[last] -= c;
                v
            }),
            Some(Arc::new(move |x: &Vector| {
                let r = x.norm();
                r.ln() - c * x[x.len() - 1] / r
            })),
        )
    }

    /// Orbits of a matrix Lie algebra of constant rank `n − 1`; the normal is
    /// the left singular vector missing from `[L₁x … L_dx]`.
    pub fn from_lie_basis(
        name: impl Into<String>,
        basis: LieBasis,
    ) -> Result<Self, FoliationError> {
        let n = basis.n();
        if n < 2 {
            return Err(FoliationError::BadDimension { n, min: 2 });
        }
        let mut pole = Vector::zeros(n);
        pole[n - 1] = 1.0;
        let rank = numerical_rank(&basis.stack_at(&pole), basis.tol(), 1.0);
        if rank != n - 1 {
            return Err(FoliationError::NotCodimensionOne {
                rank,
                expected: n - 1,
            });
        }
        Ok(Self {
            n,
            name: name.into(),
            source: Source::OrbitTangent(basis),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Normal at `x`; its sign is arbitrary for orbit distributions.
    pub fn normal(&self, x: &Vector) -> Vector {
        match &self.source {
            Source::NormalField { normal, .. } => normal(x),
            Source::OrbitTangent(basis) => smallest_left_singular(&basis.stack_at(x)).1,
        }
    }

    /// Value of the leaf-defining function, when one was supplied.
    pub fn level(&self, x: &Vector) -> Option<f64> {
        match &self.source {
            Source::NormalField { level: Some(f), .. } => Some(f(x)),
            _ => None,
        }
    }
}

/// The plane `span{p, θ}` with pole `p = eₙ` and `θ ∈ Sⁿ⁻² × {0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSection {
    pub p: Vector,
    pub theta: Vector,
}

impl PlanarSection {
    pub fn new(theta: Vector) -> Result<Self, FoliationError> {
        let n = theta.len();
        if n < 2 || (theta.norm() - 1.0).abs() > 1e-9 || theta[n - 1].abs() > 1e-9 {
            return Err(FoliationError::BadTheta);
        }
        let mut p = Vector::zeros(n);
        p[n - 1] = 1.0;
        Ok(Self { p, theta })
    }

    /// Section through `θ = (θ', 0)` for a unit `θ'` of `ℝⁿ⁻¹`.
    pub fn from_sphere_point(theta: &[f64]) -> Result<Self, FoliationError> {
        let mut t = Vector::zeros(theta.len() + 1);
        t.rows_mut(0, theta.len()).copy_from_slice(theta);
        Self::new(t)
    }

    pub fn point(&self, a: f64, b: f64) -> Vector {
        &self.p * a + &self.theta * b
    }

    /// Coordinates `(⟨x,p⟩, ⟨x,θ⟩)`.
    pub fn coords(&self, x: &Vector) -> (f64, f64) {
        (x.dot(&self.p), x.dot(&self.theta))
    }
}

/// Smallest `|⟨N, x⟩| / (|N||x|)` accepted as transversal.
pub const DEGENERATE_COSINE: f64 = 1e-8;

/// Unit leaf direction in plane coordinates.
///
/// The leaf tangent meets the plane in the line orthogonal to
/// `(N_p, N_θ)`, spanned by `(−N_θ, N_p)`. Its cross product with `x`
/// is `⟨N, x⟩`, which never vanishes under transversality, so multiplying
/// by that sign turns every point the same way: from `p` towards `θ` and on
/// to `−p`.
fn plane_direction(
    distr: &RadialDistribution,
    section: &PlanarSection,
    a: f64,
    b: f64,
) -> Result<(f64, f64), FoliationError> {
    let x = section.point(a, b);
    let normal = distr.normal(&x);
    let np = normal.dot(&section.p);
    let nt = normal.dot(&section.theta);
    let radial = np * a + nt * b;
    let cosine = radial / (normal.norm() * x.norm());
    if !(cosine.abs() >= DEGENERATE_COSINE) {
        return Err(FoliationError::DegenerateSection {
            x: x.iter().copied().collect(),
            cosine,
        });
    }
    let s = radial.signum() / np.hypot(nt);
    Ok((-nt * s, np * s))
}

/// Oriented unit vector spanning (leaf tangent at `x`) ∩ `span{p, θ}`.
pub fn leaf_line_field(
    distr: &RadialDistribution,
    section: &PlanarSection,
    x: &Vector,
) -> Result<Vector, FoliationError> {
    let (a, b) = section.coords(x);
    let off = (x - section.point(a, b)).norm();
    if off > 1e-10 * x.norm() || x.norm() == 0.0 {
        return Err(FoliationError::NotInPlane(off));
    }
    let (va, vb) = plane_direction(distr, section, a, b)?;
    Ok(section.point(va, vb))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstReturnConfig {
    /// Bisection stops once the crossing is this close to the ray.
    pub event_tol: f64,
    /// Relative and absolute local error of the integrator.
    pub step_tol: f64,
    /// Give up after this much arc length, in units of the start radius.
    pub max_arc_length: f64,
    /// Start at `start_scale · p` instead of `p`.
    pub start_scale: f64,
}

impl Default for FirstReturnConfig {
    fn default() -> Self {
        Self {
            event_tol: 1e-10,
            step_tol: 1e-12,
            max_arc_length: 1000.0,
            start_scale: 1.0,
        }
    }
}

/// A planar leaf curve from `p` to its first return on `−ℝ₊p`.
#[derive(Debug, Clone)]
pub struct FirstReturn {
    pub section: PlanarSection,
    /// The return point `−s·p`.
    pub p_theta: Vector,
    /// `s = |p_θ|`.
    pub scale: f64,
    /// θ-coordinate of the located crossing, below the event tolerance.
    pub event_offset: f64,
    /// Accumulated polar angle in the `(p, θ)` plane.
    pub winding: f64,
    pub arc_length: f64,
    /// Accepted integrator states as `(arc length, a, b)`, ending at the event.
    nodes: Vec<(f64, f64, f64)>,
    distr: RadialDistribution,
    config: FirstReturnConfig,
}

impl FirstReturn {
    /// Integrator nodes in `ℝⁿ`, with their arc-length parameter.
    pub fn nodes(&self) -> Vec<(f64, Vector)> {
        self.nodes
            .iter()
            .map(|&(t, a, b)| (t, self.section.point(a, b)))
            .collect()
    }

    /// Point at arc length `t` along the curve, stepped from the nearest
    /// preceding node so accuracy matches the nodes themselves.
    pub fn point_at(&self, t: f64) -> Result<Vector, FoliationError> {
        let t = t.clamp(0.0, self.arc_length);
        let k = self.nodes.partition_point(|node| node.0 <= t).max(1) - 1;
        let (t0, a, b) = self.nodes[k];
        if t == t0 || k + 1 == self.nodes.len() {
            return Ok(self.section.point(a, b));
        }
        let solver = Dopri5::new(self.config.step_tol);
        let (x, _) = step_plane(&solver, &self.distr, &self.section, a, b, t - t0)?;
        Ok(self.section.point(x.0, x.1))
    }

    /// `count ≥ 2` points at uniform arc length from `p` to `p_θ`.
    pub fn resample(&self, count: usize) -> Result<Vec<Vector>, FoliationError> {
        let count = count.max(2);
        (0..count)
            .map(|k| self.point_at(self.arc_length * k as f64 / (count - 1) as f64))
            .collect()
    }
}

/// One Dormand–Prince step in plane coordinates.
fn step_plane(
    solver: &Dopri5,
    distr: &RadialDistribution,
    section: &PlanarSection,
    a: f64,
    b: f64,
    h: f64,
) -> Result<((f64, f64), f64), FoliationError> {
    let failure: Cell<Option<FoliationError>> = Cell::new(None);
    let f = |y: &Vector| match plane_direction(distr, section, y[0], y[1]) {
        Ok((va, vb)) => Vector::from_vec(vec![va, vb]),
        Err(e) => {
            failure.set(Some(e));
            Vector::zeros(2)
        }
    };
    let step = solver.attempt(&f, &Vector::from_vec(vec![a, b]), h);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(((step.x[0], step.x[1]), step.err))
}

/// Traces the leaf curve from `p` at unit speed until it first meets
/// `−ℝ₊p`, locating the crossing by bisection on the last step.
pub fn first_return(
    distr: &RadialDistribution,
    section: &PlanarSection,
    config: &FirstReturnConfig,
) -> Result<FirstReturn, FoliationError> {
    if section.p.len() != distr.n() {
        return Err(FoliationError::BadArgument(format!(
            "section in dimension {}, distribution in {}",
            section.p.len(),
            distr.n()
        )));
    }
    if !(config.event_tol > 0.0
        && config.step_tol > 0.0
        && config.start_scale > 0.0
        && config.max_arc_length > 0.0)
    {
        return Err(FoliationError::BadArgument(format!("{config:?}")));
    }
    let solver = Dopri5::new(config.step_tol);
    let scale = config.start_scale;
    let budget = config.max_arc_length * scale;
    let (mut a, mut b) = (scale, 0.0);
    let mut t = 0.0;
    let mut h = 0.01 * scale;
    let mut angle = 0.0;
    let mut nodes = vec![(0.0, a, b)];
    // the pole is itself on the line b = 0; crossings only count once we have left it
    while t < budget {
        let ((na, nb), err) = step_plane(&solver, distr, section, a, b, h)?;
        if err > 1.0 {
            h = Dopri5::next_h(h, err);
            if h < 1e-14 * scale {
                return Err(FoliationError::StepUnderflow(t));
            }
            continue;
        }
        if b > 0.0 && nb <= 0.0 && na < 0.0 {
            // bisect on the step length for b = 0
            let (mut lo, mut hi) = (0.0, h);
            let (mut ea, mut eb) = (na, nb);
            let mut eh = h;
            for _ in 0..200 {
                if eb.abs() <= config.event_tol * scale {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let ((ma, mb), _) = step_plane(&solver, distr, section, a, b, mid)?;
                (ea, eb, eh) = (ma, mb, mid);
                if mb > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * h {
                    break;
                }
            }
            let (_, vb) = plane_direction(distr, section, ea, eb)?;
            if vb.abs() < DEGENERATE_COSINE {
                return Err(FoliationError::TangentialCrossing {
                    x: section.point(ea, eb).iter().copied().collect(),
                });
            }
            angle += wrap(eb.atan2(ea) - b.atan2(a));
            t += eh;
            nodes.push((t, ea, eb));
            return Ok(FirstReturn {
                section: section.clone(),
                scale: -ea,
                p_theta: &section.p * ea,
                event_offset: eb,
                winding: angle,
                arc_length: t,
                nodes,
                distr: distr.clone(),
                config: *config,
            });
        }
        angle += wrap(nb.atan2(na) - b.atan2(a));
        a = na;
        b = nb;
        t += h;
        nodes.push((t, a, b));
        h = Dopri5::next_h(h, err).min(0.1 * scale.max(a.hypot(b)));
    }
    Err(FoliationError::NoReturn { arc_length: t })
}

fn wrap(d: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut d = d % TAU;
    if d > PI {
        d -= TAU;
    } else if d < -PI {
        d += TAU;
    }
    d
}

/// Quasi-uniform unit `θ` in `Sⁿ⁻² × {0}`.
pub fn theta_samples(n: usize, count: usize, seed: u64) -> Vec<Vector> {
    quasi_uniform_sphere(n - 1, count, seed)
        .into_iter()
        .map(|t| t.insert_row(n - 1, 0.0))
        .collect()
}

fn returns_for(
    distr: &RadialDistribution,
    thetas: &[Vector],
    config: &FirstReturnConfig,
) -> Result<Vec<FirstReturn>, FoliationError> {
    thetas
        .par_iter()
        .enumerate()
        .map(|(index, theta)| {
            PlanarSection::new(theta.clone())
                .and_then(|s| first_return(distr, &s, config))
                .map_err(|e| FoliationError::Sample {
                    index,
                    source: Box::new(e),
                })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiReport {
    pub thetas: Vec<Vec<f64>>,
    /// `|p_θ|` per sample.
    pub values: Vec<f64>,
    pub windings: Vec<f64>,
    pub mean: f64,
    pub max_deviation: f64,
    pub constant: bool,
    /// Largest `|F(p_θ) − F(p)|` when the distribution has a level function.
    pub leaf_residual: Option<f64>,
}

/// Evaluates the return map over `theta_samples` sections and tests it for
/// constancy at relative tolerance `tol`. Needs `n ≥ 3` so that the
/// parameter sphere `Sⁿ⁻²` is connected.
pub fn phi_constancy(
    distr: &RadialDistribution,
    theta_samples_count: usize,
    seed: u64,
    tol: f64,
    config: &FirstReturnConfig,
) -> Result<PhiReport, FoliationError> {
    let n = distr.n();
    if n < 3 {
        return Err(FoliationError::BadDimension { n, min: 3 });
    }
    if theta_samples_count < 2 {
        return Err(FoliationError::BadArgument(
            "at least two theta samples are needed".into(),
        ));
    }
    let thetas = theta_samples(n, theta_samples_count, seed);
    let returns = returns_for(distr, &thetas, config)?;
    let values: Vec<f64> = returns.iter().map(|r| r.scale).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_deviation = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let pole = &returns[0].section.p * config.start_scale;
    let leaf_residual = distr.level(&pole).map(|f0| {
        returns
            .iter()
            .map(|r| (distr.level(&r.p_theta).unwrap_or(f0) - f0).abs())
            .fold(0.0, f64::max)
    });
    Ok(PhiReport {
        thetas: thetas.iter().map(|t| t.iter().copied().collect()).collect(),
        values,
        windings: returns.iter().map(|r| r.winding).collect(),
        mean,
        max_deviation,
        constant: max_deviation <= tol * mean,
        leaf_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcFamily {
    pub thetas: Vec<Vec<f64>>,
    /// Per θ, points at uniform normalized arc length `0, 1/(k−1), …, 1`.
    pub arcs: Vec<Vec<Vec<f64>>>,
    /// Mean return point.
    pub return_point: Vec<f64>,
    /// Largest distance of an arc's end from the mean return point.
    pub endpoint_mismatch: f64,
    pub min_norm: f64,
    pub max_norm: f64,
    /// Largest `|⟨N, ẋ⟩| / |N|` over integrator nodes and samples.
    pub tangency_residual: f64,
    /// Largest distance of a sample from its plane.
    pub planarity_residual: f64,
    /// Largest `|F(x) − F(p)|` over samples, when `F` is known.
    pub leaf_residual: Option<f64>,
}

/// Largest accepted spread of arc endpoints, relative to the start radius.
pub const ENDPOINT_TOL: f64 = 1e-6;

/// Traces one arc per θ and reports how well they close up into a surface.
pub fn arc_family(
    distr: &RadialDistribution,
    theta_samples_count: usize,
    seed: u64,
    points_per_arc: usize,
    config: &FirstReturnConfig,
) -> Result<ArcFamily, FoliationError> {
    let n = distr.n();
    if n < 3 {
        return Err(FoliationError::BadDimension { n, min: 3 });
    }
    if theta_samples_count == 0 {
        return Err(FoliationError::BadArgument(
            "at least one theta sample is needed".into(),
        ));
    }
    let thetas = theta_samples(n, theta_samples_count, seed);
    let returns = returns_for(distr, &thetas, config)?;
    let mut return_point = Vector::zeros(n);
    for r in &returns {
        return_point += &r.p_theta;
    }
    return_point /= returns.len() as f64;
    let mut endpoint_mismatch: f64 = 0.0;
    for (index, r) in returns.iter().enumerate() {
        let d = (&r.p_theta - &return_point).norm();
        endpoint_mismatch = endpoint_mismatch.max(d);
        if d > ENDPOINT_TOL * config.start_scale {
            return Err(FoliationError::EndpointMismatch { index, mismatch: d });
        }
    }
    let arcs: Vec<Vec<Vector>> = returns
        .par_iter()
        .map(|r| r.resample(points_per_arc))
        .collect::<Result<_, _>>()?;

    let pole = &returns[0].section.p * config.start_scale;
    let f0 = distr.level(&pole);
    let (mut min_norm, mut max_norm) = (f64::INFINITY, 0.0f64);
    let (mut tangency, mut planarity, mut leaf) = (0.0f64, 0.0f64, 0.0f64);
    for (r, arc) in returns.iter().zip(&arcs) {
        let nodes = r.nodes().into_iter().map(|(_, x)| x);
        for x in arc.iter().cloned().chain(nodes) {
            let norm = x.norm();
            min_norm = min_norm.min(norm);
            max_norm = max_norm.max(norm);
            let (a, b) = r.section.coords(&x);
            planarity = planarity.max((&x - r.section.point(a, b)).norm());
            let v = leaf_line_field(distr, &r.section, &r.section.point(a, b))?;
            let normal = distr.normal(&x);
            tangency = tangency.max(normal.dot(&v).abs() / normal.norm());
            if let (Some(f0), Some(fx)) = (f0, distr.level(&x)) {
                leaf = leaf.max((fx - f0).abs());
            }
        }
    }
    let to_vec = |x: &Vector| x.iter().copied().collect::<Vec<f64>>();
    Ok(ArcFamily {
        thetas: thetas.iter().map(to_vec).collect(),
        arcs: arcs
            .iter()
            .map(|a| a.iter().map(to_vec).collect())
            .collect(),
        return_point: to_vec(&return_point),
        endpoint_mismatch,
        min_norm,
        max_norm,
        tangency_residual: tangency,
        planarity_residual: planarity,
        leaf_residual: f0.map(|_| leaf),
    })
}

impl ArcFamily {
    /// Rows `theta_index,s,x0,…` with `s ∈ [0, 1]` the normalized arc length.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.return_point.len();
        let cols: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        writeln!(out, "theta_index,s,{}", cols.join(","))?;
        for (i, arc) in self.arcs.iter().enumerate() {
            let last = arc.len().saturating_sub(1).max(1) as f64;
            for (k, x) in arc.iter().enumerate() {
                let coords: Vec<String> = x.iter().map(|c| format!("{c:e}")).collect();
                writeln!(out, "{i},{},{}", k as f64 / last, coords.join(","))?;
            }
        }
        Ok(())
    }
}

impl PhiReport {
    /// Rows `theta_index,theta0,…,p_theta_norm,winding`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.thetas.first().map_or(0, Vec::len);
        let cols: Vec<String> = (0..n).map(|i| format!("theta{i}")).collect();
        writeln!(out, "theta_index,{},p_theta_norm,winding", cols.join(","))?;
        for (i, ((t, v), w)) in self
            .thetas
            .iter()
            .zip(&self.values)
            .zip(&self.windings)
            .enumerate()
        {
            let coords: Vec<String> = t.iter().map(|c| format!("{c:e}")).collect();
            writeln!(out, "{i},{},{v:e},{w:e}", coords.join(","))?;
        }
        Ok(())
    }
}

/// Named distributions used by the command line and examples.
pub const EXAMPLE_NAMES: [&str; 4] = [
    "sphere",
    "radial_graph_h03",
    "flat_radial_graph",
    "so3_orbits",
];

pub fn example_distribution(name: &str, n: usize) -> Result<RadialDistribution, FoliationError> {
    match name {
        "sphere" => RadialDistribution::sphere(n),
        "radial_graph_h03" => RadialDistribution::radial_graph(n, 0.3),
        "flat_radial_graph" => RadialDistribution::radial_graph(n, 0.0),
        "so3_orbits" => {
            if n != 3 {
                return Err(FoliationError::BadDimension { n, min: 3 });
            }
            let basis = crate::matlie::lie_closure(&crate::matlie::so3_generators(), 1e-9, 18)
                .map_err(|e| FoliationError::BadArgument(e.to_string()))?;
            RadialDistribution::from_lie_basis("so3_orbits", basis)
        }
        other => Err(FoliationError::BadArgument(format!(
            "unknown example {other:?}, expected one of {EXAMPLE_NAMES:?}"
        ))),
    }
}
