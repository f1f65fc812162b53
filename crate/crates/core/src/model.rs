//! System definitions: bilinear matrix families and smooth vector-field
//! families, control schedules, the projection onto the unit sphere, the
//! built-in corpus and the JSON system document.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matlie::{so3_generators, Matrix, Vector};
use crate::sphere::rng_for;

/// Names accepted by [`builtin_corpus`].
pub const BUILTIN_NAMES: [&str; 5] = [
    "so3",
    "planar_jd",
    "expanding_pair",
    "identity_only",
    "example1",
];

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("matrix {index} is not square ({rows} rows, row lengths {cols:?})")]
    NonSquare {
        index: usize,
        rows: usize,
        cols: Vec<usize>,
    },
    #[error("matrix {index} is {found}x{found}, system dimension is {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry in matrix {index}")]
    NonFinite { index: usize },
    #[error("unknown system kind {0:?}")]
    UnknownKind(String),
    #[error("unknown built-in system {0:?}")]
    UnknownBuiltin(String),
    #[error("state dimension must be at least 1")]
    ZeroDimension,
    #[error("matrix family is empty")]
    EmptyFamily,
    #[error("{labels} labels for {matrices} matrices")]
    LabelCount { labels: usize, matrices: usize },
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("point must be on the unit sphere, |x| = {0}")]
    NotUnit(f64),
    #[error("vector has length {found}, expected {expected}")]
    VectorLength { expected: usize, found: usize },
    #[error("schedule segment {index} uses field {field}, system has {fields}")]
    BadFieldIndex {
        index: usize,
        field: usize,
        fields: usize,
    },
    #[error("schedule segment {index} has duration {duration} in attainable mode")]
    NegativeDuration { index: usize, duration: f64 },
    #[error("schedule segment {index} has non-finite duration")]
    NonFiniteDuration { index: usize },
    #[error("invalid system document: {0}")]
    Json(#[from] serde_json::Error),
}

/// The control set of a bilinear system `ẋ = M(t) x`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFamily {
    matrices: Vec<Matrix>,
    labels: Option<Vec<String>>,
}

impl MatrixFamily {
    pub fn new(matrices: Vec<Matrix>, labels: Option<Vec<String>>) -> Result<Self, ModelError> {
        let first = matrices.first().ok_or(ModelError::EmptyFamily)?;
        let n = first.nrows();
        for (index, m) in matrices.iter().enumerate() {
            if !m.is_square() {
                return Err(ModelError::NonSquare {
                    index,
                    rows: m.nrows(),
                    cols: vec![m.ncols(); m.nrows()],
                });
            }
            if m.nrows() != n {
                return Err(ModelError::DimensionMismatch {
                    index,
                    expected: n,
                    found: m.nrows(),
                });
            }
            if m.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::NonFinite { index });
            }
        }
        if n == 0 {
            return Err(ModelError::ZeroDimension);
        }
        if let Some(l) = &labels {
            if l.len() != matrices.len() {
                return Err(ModelError::LabelCount {
                    labels: l.len(),
                    matrices: matrices.len(),
                });
            }
        }
        Ok(Self { matrices, labels })
    }

    pub fn n(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Every matrix multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrices: self.matrices.iter().map(|m| m * factor).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Largest spectral norm in the family.
    pub fn rate(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| crate::linalg::kth_singular_value(m, 0))
            .fold(0.0, f64::max)
    }
}

/// Evaluable vector field on `ℝⁿ∖{0}`.
pub type VectorField = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

#[derive(Clone)]
pub struct SmoothFamily {
    pub fields: Vec<VectorField>,
    pub labels: Vec<String>,
    pub homogeneous: bool,
}

impl fmt::Debug for SmoothFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFamily")
            .field("labels", &self.labels)
            .field("homogeneous", &self.homogeneous)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum SystemKind {
    Bilinear(MatrixFamily),
    Smooth(SmoothFamily),
}

#[derive(Debug, Clone)]
pub struct SystemSpec {
    n: usize,
    kind: SystemKind,
    name: String,
    builtin: Option<String>,
}

impl SystemSpec {
    pub fn bilinear(name: impl Into<String>, family: MatrixFamily) -> Self {
        Self {
            n: family.n(),
            kind: SystemKind::Bilinear(family),
            name: name.into(),
            builtin: None,
        }
    }

    pub fn smooth(
        name: impl Into<String>,
        n: usize,
        family: SmoothFamily,
    ) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::ZeroDimension);
        }
        if family.fields.is_empty() {
            return Err(ModelError::EmptyFamily);
        }
        Ok(Self {
            n,
            kind: SystemKind::Smooth(family),
            name: name.into(),
            builtin: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn builtin_name(&self) -> Option<&str> {
        self.builtin.as_deref()
    }

    pub fn family(&self) -> Option<&MatrixFamily> {
        match &self.kind {
            SystemKind::Bilinear(f) => Some(f),
            SystemKind::Smooth(_) => None,
        }
    }

    pub fn field_count(&self) -> usize {
        match &self.kind {
            SystemKind::Bilinear(f) => f.len(),
            SystemKind::Smooth(s) => s.fields.len(),
        }
    }

    /// Value of control field `index` at `x`.
    pub fn eval_field(&self, index: usize, x: &Vector) -> Vector {
        match &self.kind {
            SystemKind::Bilinear(f) => &f.matrices[index] * x,
            SystemKind::Smooth(s) => (s.fields[index])(x),
        }
    }

    /// Same system with every field multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let kind = match &self.kind {
            SystemKind::Bilinear(f) => SystemKind::Bilinear(f.scaled(factor)),
            SystemKind::Smooth(s) => SystemKind::Smooth(SmoothFamily {
                fields: s
                    .fields
                    .iter()
                    .map(|f| {
                        let f = f.clone();
                        Arc::new(move |x: &Vector| f(x) * factor) as VectorField
                    })
                    .collect(),
                labels: s.labels.clone(),
                homogeneous: s.homogeneous,
            }),
        };
        Self {
            n: self.n,
            kind,
            name: format!("{}*{}", self.name, factor),
            builtin: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMode {
    /// Nonnegative durations: trajectories in the attainable set.
    Attainable,
    /// Durations of any sign: trajectories in the orbit.
    Orbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub field: usize,
    pub duration: f64,
}

/// Piecewise-constant control plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSchedule {
    pub segments: Vec<Segment>,
    pub mode: ScheduleMode,
}

impl ControlSchedule {
    pub fn attainable(segments: impl IntoIterator<Item = (usize, f64)>) -> Self {
        Self {
            segments: segments
                .into_iter()
                .map(|(field, duration)| Segment { field, duration })
                .collect(),
            mode: ScheduleMode::Attainable,
        }
    }

    pub fn orbit(segments: impl IntoIterator<Item = (usize, f64)>) -> Self {
        Self {
            mode: ScheduleMode::Orbit,
            ..Self::attainable(segments)
        }
    }

    pub fn empty() -> Self {
        Self::attainable([])
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.duration.abs()).sum()
    }

    /// Concatenation `self ++ other`; orbit mode wins.
    pub fn then(&self, other: &ControlSchedule) -> Self {
        let mode = if self.mode == ScheduleMode::Orbit || other.mode == ScheduleMode::Orbit {
            ScheduleMode::Orbit
        } else {
            ScheduleMode::Attainable
        };
        Self {
            segments: self
                .segments
                .iter()
                .chain(&other.segments)
                .copied()
                .collect(),
            mode,
        }
    }

    pub fn validate(&self, fields: usize) -> Result<(), ModelError> {
        for (index, s) in self.segments.iter().enumerate() {
            if s.field >= fields {
                return Err(ModelError::BadFieldIndex {
                    index,
                    field: s.field,
                    fields,
                });
            }
            if !s.duration.is_finite() {
                return Err(ModelError::NonFiniteDuration { index });
            }
            if self.mode == ScheduleMode::Attainable && s.duration < 0.0 {
                return Err(ModelError::NegativeDuration {
                    index,
                    duration: s.duration,
                });
            }
        }
        Ok(())
    }
}

/// Tangential part `Mx − ⟨x, Mx⟩x` of the linear field `M` at a unit `x`.
pub fn project_sphere(m: &Matrix, x: &Vector) -> Result<Vector, ModelError> {
    if x.len() != m.nrows() {
        return Err(ModelError::VectorLength {
            expected: m.nrows(),
            found: x.len(),
        });
    }
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(ModelError::NotUnit(norm));
    }
    Ok(tangential(&(m * x), x))
}

/// `v − ⟨x, v⟩x`, for unit `x`.
pub(crate) fn tangential(v: &Vector, x: &Vector) -> Vector {
    let mut out = v - x * x.dot(v);
    // one correction pass brings ⟨x, out⟩ to round-off of |out|
    let c = x.dot(&out);
    out -= x * c;
    out
}

/// On-disk system document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin_name: Option<String>,
}

/// Parses and validates a JSON system document.
pub fn parse_system(text: &str) -> Result<SystemSpec, ModelError> {
    let doc: SystemDocument = serde_json::from_str(text)?;
    spec_from_document(&doc)
}

pub fn spec_from_document(doc: &SystemDocument) -> Result<SystemSpec, ModelError> {
    if doc.n == 0 {
        return Err(ModelError::ZeroDimension);
    }
    match doc.kind.as_deref().unwrap_or("bilinear") {
        "bilinear" => {
            let rows = doc
                .matrices
                .as_ref()
                .ok_or(ModelError::MissingField("matrices"))?;
            if rows.is_empty() {
                return Err(ModelError::EmptyFamily);
            }
            let mut matrices = Vec::with_capacity(rows.len());
            for (index, m) in rows.iter().enumerate() {
                let r = m.len();
                if r == 0 || m.iter().any(|row| row.len() != r) {
                    return Err(ModelError::NonSquare {
                        index,
                        rows: r,
                        cols: m.iter().map(Vec::len).collect(),
                    });
                }
                if r != doc.n {
                    return Err(ModelError::DimensionMismatch {
                        index,
                        expected: doc.n,
                        found: r,
                    });
                }
                if m.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(ModelError::NonFinite { index });
                }
                matrices.push(DMatrix::from_row_iterator(
                    r,
                    r,
                    m.iter().flatten().copied(),
                ));
            }
            let family = MatrixFamily::new(matrices, doc.labels.clone())?;
            let name = doc.name.clone().unwrap_or_else(|| "unnamed".to_string());
            Ok(SystemSpec::bilinear(name, family))
        }
        "builtin" => {
            let name = doc
                .builtin_name
                .as_deref()
                .ok_or(ModelError::MissingField("builtin_name"))?;
            let spec = builtin_corpus(name)?;
            if spec.n() != doc.n {
                return Err(ModelError::DimensionMismatch {
                    index: 0,
                    expected: doc.n,
                    found: spec.n(),
                });
            }
            Ok(spec)
        }
        other => Err(ModelError::UnknownKind(other.to_string())),
    }
}

/// Document form of a spec. Smooth systems can only be written when they
/// come from the built-in corpus.
pub fn to_document(spec: &SystemSpec) -> Option<SystemDocument> {
    match spec.kind() {
        SystemKind::Bilinear(f) => Some(SystemDocument {
            n: spec.n(),
            kind: Some("bilinear".into()),
            name: Some(spec.name().to_string()),
            matrices: Some(
                f.matrices()
                    .iter()
                    .map(|m| m.row_iter().map(|r| r.iter().copied().collect()).collect())
                    .collect(),
            ),
            labels: f.labels().map(<[String]>::to_vec),
            builtin_name: None,
        }),
        SystemKind::Smooth(_) => spec.builtin_name().map(|b| SystemDocument {
            n: spec.n(),
            kind: Some("builtin".into()),
            name: None,
            matrices: None,
            labels: None,
            builtin_name: Some(b.to_string()),
        }),
    }
}

pub fn serialize_system(spec: &SystemSpec) -> Option<String> {
    to_document(spec).map(|d| serde_json::to_string_pretty(&d).expect("document serializes"))
}

fn m2(v: [f64; 4]) -> Matrix {
    DMatrix::from_row_slice(2, 2, &v)
}

/// Planar rotation generator `J`.
pub fn rotation_j() -> Matrix {
    m2([0.0, -1.0, 1.0, 0.0])
}

/// `diag(1, −1)`.
pub fn hyperbolic_d() -> Matrix {
    m2([1.0, 0.0, 0.0, -1.0])
}

/// `ρ(y) = exp(−1/y)` for `y > 0`, zero otherwise.
pub fn example1_rho(y: f64) -> f64 {
    if y > 0.0 {
        (-1.0 / y).exp()
    } else {
        0.0
    }
}

/// `φ(x, y) = x² + ρ(y)`: smooth, nonnegative, zero exactly on
/// `{x = 0, y ≤ 0}`.
pub fn example1_phi(x: f64, y: f64) -> f64 {
    x * x + example1_rho(y)
}

fn example1() -> SystemSpec {
    let f1: VectorField = Arc::new(|_x: &Vector| Vector::from_vec(vec![0.0, 1.0]));
    let f2: VectorField =
        Arc::new(|x: &Vector| Vector::from_vec(vec![0.0, -example1_phi(x[0], x[1])]));
    let f3p: VectorField =
        Arc::new(|x: &Vector| Vector::from_vec(vec![example1_phi(x[0], x[1]), 0.0]));
    let f3m: VectorField =
        Arc::new(|x: &Vector| Vector::from_vec(vec![-example1_phi(x[0], x[1]), 0.0]));
    let family = SmoothFamily {
        fields: vec![f1, f2, f3p, f3m],
        labels: vec!["f1".into(), "f2".into(), "f3+".into(), "f3-".into()],
        homogeneous: false,
    };
    SystemSpec::smooth("example1", 2, family).expect("valid built-in")
}

/// Built-in systems; see [`BUILTIN_NAMES`].
pub fn builtin_corpus(name: &str) -> Result<SystemSpec, ModelError> {
    let labelled = |ms: Vec<Matrix>, labels: &[&str]| {
        MatrixFamily::new(ms, Some(labels.iter().map(|s| s.to_string()).collect()))
            .expect("valid built-in")
    };
    let ident = DMatrix::<f64>::identity(2, 2);
    let mut spec = match name {
        "so3" => SystemSpec::bilinear(
            "so3",
            labelled(so3_generators().to_vec(), &["L1", "L2", "L3"]),
        ),
        "planar_jd" => SystemSpec::bilinear(
            "planar_jd",
            labelled(vec![rotation_j(), hyperbolic_d()], &["J", "D"]),
        ),
        "expanding_pair" => SystemSpec::bilinear(
            "expanding_pair",
            labelled(
                vec![&ident + rotation_j(), &ident + hyperbolic_d()],
                &["I+J", "I+D"],
            ),
        ),
        "identity_only" => SystemSpec::bilinear("identity_only", labelled(vec![ident], &["I"])),
        "example1" => example1(),
        other => return Err(ModelError::UnknownBuiltin(other.to_string())),
    };
    spec.builtin = Some(name.to_string());
    Ok(spec)
}

/// `m` matrices of size `n×n` with independent standard normal entries.
/// The output is a function of `(n, m, seed)` alone.
pub fn random_system(n: usize, m: usize, seed: u64) -> Result<SystemSpec, ModelError> {
    if n == 0 {
        return Err(ModelError::ZeroDimension);
    }
    if m == 0 {
        return Err(ModelError::EmptyFamily);
    }
    let mut rng = rng_for(seed, 0);
    let matrices = (0..m)
        .map(|_| DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng)))
        .collect();
    let family = MatrixFamily::new(matrices, None)?;
    Ok(SystemSpec::bilinear(
        format!("random_n{n}_m{m}_s{seed}"),
        family,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_vec(xs.to_vec())
    }

    #[test]
    fn projection_examples() {
        let e1 = v(&[1.0, 0.0]);
        assert_eq!(
            project_sphere(&DMatrix::identity(2, 2), &e1).unwrap(),
            v(&[0.0, 0.0])
        );
        assert_eq!(project_sphere(&rotation_j(), &e1).unwrap(), v(&[0.0, 1.0]));
        let d = v(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let p = project_sphere(&hyperbolic_d(), &d).unwrap();
        assert!((p - v(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2])).norm() < 1e-15);
        assert!(matches!(
            project_sphere(&rotation_j(), &v(&[2.0, 0.0])),
            Err(ModelError::NotUnit(_))
        ));
    }

    #[test]
    fn parse_examples() {
        let spec = parse_system(r#"{"n":2,"matrices":[[[0,-1],[1,0]]]}"#).unwrap();
        assert_eq!(spec.n(), 2);
        assert_eq!(spec.family().unwrap().matrices(), &[rotation_j()]);

        let err = parse_system(r#"{"n":2,"matrices":[[[0,-1],[1,0],[0,0]]]}"#).unwrap_err();
        assert!(matches!(err, ModelError::NonSquare { .. }), "{err}");

        let err = parse_system(r#"{"n":3,"matrices":[[[0,-1],[1,0]]]}"#).unwrap_err();
        assert!(matches!(err, ModelError::DimensionMismatch { .. }), "{err}");

        let err = parse_system(r#"{"n":2,"kind":"polynomial","matrices":[]}"#).unwrap_err();
        assert!(matches!(err, ModelError::UnknownKind(_)));

        // out-of-range literals are rejected by the JSON layer
        assert!(parse_system(r#"{"n":1,"matrices":[[[1e400]]]}"#).is_err());

        let spec =
            parse_system(r#"{"n":2,"matrices":[[[1.5e-3,0],[0,-2E1]]],"labels":["A"]}"#).unwrap();
        assert_eq!(spec.family().unwrap().matrices()[0][(1, 1)], -20.0);
    }

    #[test]
    fn builtin_documents() {
        let spec = parse_system(r#"{"n":2,"kind":"builtin","builtin_name":"example1"}"#).unwrap();
        assert_eq!(spec.field_count(), 4);
        assert!(parse_system(r#"{"n":3,"kind":"builtin","builtin_name":"example1"}"#).is_err());
        assert!(parse_system(r#"{"n":2,"kind":"builtin"}"#).is_err());
        let text = serialize_system(&spec).unwrap();
        assert_eq!(
            parse_system(&text).unwrap().builtin_name(),
            Some("example1")
        );
    }

    #[test]
    fn corpus_contents() {
        let so3 = builtin_corpus("so3").unwrap();
        assert_eq!((so3.n(), so3.field_count()), (3, 3));
        for m in so3.family().unwrap().matrices() {
            assert_eq!(m.transpose(), -m);
        }
        assert!(builtin_corpus("nope").is_err());
        for name in BUILTIN_NAMES {
            assert_eq!(builtin_corpus(name).unwrap().builtin_name(), Some(name));
        }
    }

    #[test]
    fn example1_fields() {
        let spec = builtin_corpus("example1").unwrap();
        assert_eq!(spec.eval_field(2, &v(&[0.0, -1.0])), v(&[0.0, 0.0]));
        for p in [[0.0, -1.0], [3.0, 2.0], [-0.5, 0.1]] {
            assert_eq!(spec.eval_field(0, &v(&p)), v(&[0.0, 1.0]));
        }
        assert_eq!(example1_phi(0.0, 0.0), 0.0);
        assert!((example1_phi(0.0, 1.0) - (-1f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn example1_phi_zero_set() {
        for i in -20..=20 {
            for j in -20..=20 {
                let (x, y) = (i as f64 * 0.1, j as f64 * 0.1);
                let on_half_line = i == 0 && j <= 0;
                let phi = example1_phi(x, y);
                if on_half_line {
                    assert_eq!(phi, 0.0);
                } else {
                    assert!(phi > 0.0, "phi({x},{y}) = {phi}");
                }
            }
        }
    }

    #[test]
    fn random_systems_are_deterministic() {
        let a = serialize_system(&random_system(2, 2, 42).unwrap()).unwrap();
        let b = serialize_system(&random_system(2, 2, 42).unwrap()).unwrap();
        assert_eq!(a.as_bytes(), b.as_bytes());
        let c = random_system(3, 1, 7).unwrap();
        assert_eq!(c.field_count(), 1);
        assert!(c.family().unwrap().matrices()[0]
            .iter()
            .all(|x| x.is_finite()));
        assert_eq!(random_system(1, 1, 0).unwrap().n(), 1);
        assert!(random_system(0, 1, 0).is_err());
    }

    #[test]
    fn schedule_validation() {
        assert!(ControlSchedule::attainable([(0, 1.0), (1, 0.0)])
            .validate(2)
            .is_ok());
        assert!(matches!(
            ControlSchedule::attainable([(0, -1.0)]).validate(2),
            Err(ModelError::NegativeDuration { .. })
        ));
        assert!(ControlSchedule::orbit([(0, -1.0)]).validate(2).is_ok());
        assert!(matches!(
            ControlSchedule::attainable([(2, 1.0)]).validate(2),
            Err(ModelError::BadFieldIndex { .. })
        ));
        assert!(ControlSchedule::attainable([(0, f64::NAN)])
            .validate(1)
            .is_err());
    }
}
