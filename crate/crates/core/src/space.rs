//! Finite metric spaces, objective tables and validated problem instances.
//!
//! A finite metric space is complete, and on it every objective is both
//! monotonically semicontinuous (convergent sequences are eventually
//! constant) and K-bounded (take `M = f(X)`). Those hypotheses therefore need
//! no runtime check; everything else about an instance is verified in
//! [`validate`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::geometry::{self, DirectionSet, NormTag, PolyhedralCone, Scalarizer};
use crate::numeric::{Rational, RationalVector};

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

impl FiniteMetricSpace {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, u: usize, v: usize) -> &Rational {
        &self.dist[u][v]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }
}

/// One value `f(x) ∈ Q^m` per point.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub values: Vec<RationalVector>,
}

impl Objective {
    pub fn value(&self, i: usize) -> &RationalVector {
        &self.values[i]
    }
}

/// Unvalidated instance data, field-for-field the JSON instance schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawInstance {
    pub dim: usize,
    pub labels: Vec<String>,
    pub dist: Vec<Vec<Rational>>,
    pub f: Vec<Vec<Rational>>,
    pub cone_generators: Vec<Vec<Rational>>,
    pub d_vertices: Vec<Vec<Rational>>,
    #[serde(default = "Rational::one")]
    pub epsilon: Rational,
}

/// A validated instance. Immutable; carries the separating functional that
/// certifies `0 ∉ D + K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    space: FiniteMetricSpace,
    objective: Objective,
    cone: PolyhedralCone,
    dset: DirectionSet,
    epsilon: Rational,
    scalarizer: Scalarizer,
    index: HashMap<String, usize>,
}

impl Instance {
    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn f(&self, i: usize) -> &RationalVector {
        self.objective.value(i)
    }

    pub fn cone(&self) -> &PolyhedralCone {
        &self.cone
    }

    pub fn dset(&self) -> &DirectionSet {
        &self.dset
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    /// The functional fixed once per instance and reused by every chain.
    pub fn scalarizer(&self) -> &Scalarizer {
        &self.scalarizer
    }

    pub fn label(&self, i: usize) -> &str {
        &self.space.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        check_index(i, self.len())
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<Rational> {
        self.check_index(u)?;
        self.check_index(v)?;
        Ok(self.space.dist(u, v).clone())
    }

    pub fn to_raw(&self) -> RawInstance {
        let rows = |vs: &[RationalVector]| vs.iter().map(|v| v.components().to_vec()).collect();
        RawInstance {
            dim: self.dim(),
            labels: self.space.labels.clone(),
            dist: self.space.dist.clone(),
            f: rows(&self.objective.values),
            cone_generators: rows(self.cone.generators()),
            d_vertices: rows(self.dset.vertices()),
            epsilon: self.epsilon.clone(),
        }
    }

    /// Same instance with every distance multiplied by `factor > 0`.
    pub fn with_scaled_metric(&self, factor: &Rational) -> Result<Instance> {
        if !factor.is_positive() {
            return Err(Error::NonpositiveScale);
        }
        let mut raw = self.to_raw();
        for row in &mut raw.dist {
            for d in row.iter_mut() {
                *d = &*d * factor;
            }
        }
        validate(&raw).map_err(Error::Invalid)
    }

    /// Same instance with a replacement objective table.
    pub fn with_objective(&self, objective: Objective) -> Result<Instance> {
        let mut raw = self.to_raw();
        raw.f = objective.values.iter().map(|v| v.components().to_vec()).collect();
        validate(&raw).map_err(Error::Invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// JSON path into the instance document, e.g. `$.dist[0][2]`.
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{}: {}", v.path, v.message)?;
        }
        Ok(())
    }
}

/// Checks every instance invariant and returns either a certified
/// [`Instance`] or the full list of violations.
pub fn validate(raw: &RawInstance) -> std::result::Result<Instance, ValidationReport> {
    let mut report = ValidationReport::default();
    let m = raw.dim;
    let n = raw.labels.len();

    if m == 0 {
        report.push("$.dim", "dimension must be positive");
    }
    if !raw.epsilon.is_positive() {
        report.push("$.epsilon", format!("epsilon must be positive, got {}", raw.epsilon));
    }
    if n == 0 {
        report.push("$.labels", "space must contain at least one point");
    }
    let mut index = HashMap::new();
    for (i, l) in raw.labels.iter().enumerate() {
        if let Some(first) = index.insert(l.clone(), i) {
            report.push(format!("$.labels[{i}]"), format!("duplicate label {l:?} (first at {first})"));
        }
    }

    let metric_shape_ok = check_metric_shape(&raw.dist, n, &mut report);
    if metric_shape_ok {
        check_metric_axioms(&raw.dist, &mut report);
    }

    let rows_ok = |name: &str, rows: &[Vec<Rational>], report: &mut ValidationReport| {
        let mut ok = true;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                report.push(format!("$.{name}[{i}]"), format!("expected {m} components, found {}", row.len()));
                ok = false;
            }
        }
        ok
    };

    if raw.f.len() != n {
        report.push("$.f", format!("expected {n} objective values, found {}", raw.f.len()));
    }
    let f_ok = rows_ok("f", &raw.f, &mut report) && raw.f.len() == n;

    if raw.cone_generators.is_empty() {
        report.push("$.cone_generators", "cone needs at least one generator");
    }
    let mut cone_ok = rows_ok("cone_generators", &raw.cone_generators, &mut report) && !raw.cone_generators.is_empty();
    for (j, g) in raw.cone_generators.iter().enumerate() {
        if g.iter().all(Rational::is_zero) {
            report.push(format!("$.cone_generators[{j}]"), "generator is the zero vector");
            cone_ok = false;
        }
    }

    if raw.d_vertices.is_empty() {
        report.push("$.d_vertices", "direction set needs at least one vertex");
    }
    let d_ok = rows_ok("d_vertices", &raw.d_vertices, &mut report) && !raw.d_vertices.is_empty();

    let to_vecs = |rows: &[Vec<Rational>]| -> Vec<RationalVector> {
        rows.iter().map(|r| RationalVector::new(r.clone())).collect()
    };

    let mut geometry = None;
    if m > 0 && cone_ok && d_ok {
        let cone = PolyhedralCone::new(m, to_vecs(&raw.cone_generators)).expect("shape checked");
        let dset = DirectionSet::new(m, to_vecs(&raw.d_vertices)).expect("shape checked");
        let mut inside = true;
        for (i, d) in dset.vertices().iter().enumerate() {
            if !geometry::cone_contains(&cone, d).expect("shape checked") {
                report.push(format!("$.d_vertices[{i}]"), format!("vertex {d} does not lie in K"));
                inside = false;
            }
        }
        let g = geometry::gap(&cone, &dset, NormTag::Inf).expect("shape checked");
        if !g.is_positive() {
            report.push("$.d_vertices", "0 lies in D + K (gap d(D+K, 0) = 0); need 0 ∉ cl(D+K)");
        } else if inside {
            match geometry::separating_functional(&cone, &dset) {
                Ok(s) => geometry = Some((cone, dset, s)),
                Err(e) => report.push("$.d_vertices", e.to_string()),
            }
        }
    }

    if !report.is_empty() {
        return Err(report);
    }
    let (cone, dset, scalarizer) = geometry.expect("no violations implies certified geometry");
    debug_assert!(metric_shape_ok && f_ok);
    Ok(Instance {
        space: FiniteMetricSpace {
            labels: raw.labels.clone(),
            dist: raw.dist.clone(),
        },
        objective: Objective {
            values: to_vecs(&raw.f),
        },
        cone,
        dset,
        epsilon: raw.epsilon.clone(),
        scalarizer,
        index,
    })
}

fn check_metric_shape(dist: &[Vec<Rational>], n: usize, report: &mut ValidationReport) -> bool {
    let mut ok = true;
    if dist.len() != n {
        report.push("$.dist", format!("expected {n} rows, found {}", dist.len()));
        ok = false;
    }
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            report.push(format!("$.dist[{i}]"), format!("expected {n} entries, found {}", row.len()));
            ok = false;
        }
    }
    ok
}

/// Exhaustive O(n³) check of the metric axioms.
fn check_metric_axioms(dist: &[Vec<Rational>], report: &mut ValidationReport) {
    let n = dist.len();
    for i in 0..n {
        if !dist[i][i].is_zero() {
            report.push(format!("$.dist[{i}][{i}]"), format!("diagonal entry must be 0, got {}", dist[i][i]));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if !dist[i][j].is_positive() {
                report.push(
                    format!("$.dist[{i}][{j}]"),
                    format!("distance between distinct points must be positive, got {}", dist[i][j]),
                );
            }
            if j > i && dist[i][j] != dist[j][i] {
                report.push(
                    format!("$.dist[{i}][{j}]"),
                    format!("asymmetric: d({i},{j}) = {} but d({j},{i}) = {}", dist[i][j], dist[j][i]),
                );
            }
        }
    }
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if dist[i][k] > &dist[i][j] + &dist[j][k] {
                    report.push(
                        format!("$.dist[{i}][{k}]"),
                        format!(
                            "triangle inequality violated at ({i},{j},{k}): {} > {} + {}",
                            dist[i][k], dist[i][j], dist[j][k]
                        ),
                    );
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn rows(xs: &[&[&str]]) -> Vec<Vec<Rational>> {
        xs.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect()
    }

    fn scalar_two_point() -> RawInstance {
        RawInstance {
            dim: 1,
            labels: vec!["a".into(), "b".into()],
            dist: rows(&[&["0", "1"], &["1", "0"]]),
            f: rows(&[&["5"], &["3"]]),
            cone_generators: rows(&[&["1"]]),
            d_vertices: rows(&[&["1"]]),
            epsilon: Rational::one(),
        }
    }

    fn chain3() -> RawInstance {
        RawInstance {
            dim: 2,
            labels: vec!["x0".into(), "x1".into(), "x2".into()],
            dist: rows(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]),
            f: rows(&[&["2", "2"], &["1", "1"], &["1", "0"]]),
            cone_generators: rows(&[&["1", "0"], &["0", "1"]]),
            d_vertices: rows(&[&["1", "0"], &["0", "1"]]),
            epsilon: Rational::one(),
        }
    }

    #[test]
    fn single_point_is_valid() {
        let raw = RawInstance {
            dim: 1,
            labels: vec!["only".into()],
            dist: rows(&[&["0"]]),
            f: rows(&[&["-7/3"]]),
            cone_generators: rows(&[&["1"]]),
            d_vertices: rows(&[&["1"]]),
            epsilon: Rational::one(),
        };
        let inst = validate(&raw).unwrap();
        assert_eq!(inst.len(), 1);
        assert_eq!(inst.scalarizer().y_star, RationalVector::from_ints(&[1]));
    }

    #[test]
    fn triangle_violation_is_reported_with_indices() {
        let mut raw = chain3();
        raw.dist = rows(&[&["0", "1", "3"], &["1", "0", "1"], &["3", "1", "0"]]);
        let report = validate(&raw).unwrap_err();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].path, "$.dist[0][2]");
        assert!(report.violations[0].message.contains("(0,1,2)"));
    }

    #[test]
    fn degenerate_direction_set_is_rejected() {
        let mut raw = chain3();
        raw.d_vertices = rows(&[&["0", "0"]]);
        let report = validate(&raw).unwrap_err();
        assert!(report.violations.iter().any(|v| v.message.contains("gap")));
    }

    #[test]
    fn direction_outside_cone_is_rejected() {
        let mut raw = chain3();
        raw.d_vertices = rows(&[&["1", "-1"], &["0", "1"]]);
        let report = validate(&raw).unwrap_err();
        assert!(report.violations.iter().any(|v| v.path == "$.d_vertices[0]"));
    }

    #[test]
    fn every_violation_is_listed() {
        let mut raw = scalar_two_point();
        raw.dist = rows(&[&["1", "0"], &["2", "0"]]);
        raw.f = rows(&[&["1", "2"]]);
        raw.epsilon = q("-1");
        raw.labels[1] = "a".into();
        let report = validate(&raw).unwrap_err();
        let paths: Vec<&str> = report.violations.iter().map(|v| v.path.as_str()).collect();
        for expected in ["$.epsilon", "$.labels[1]", "$.dist[0][0]", "$.dist[0][1]", "$.f", "$.f[0]"] {
            assert!(paths.contains(&expected), "missing {expected} in {paths:?}");
        }
    }

    #[test]
    fn ragged_matrix_is_a_shape_error() {
        let mut raw = scalar_two_point();
        raw.dist = rows(&[&["0", "1"], &["1"]]);
        let report = validate(&raw).unwrap_err();
        assert_eq!(report.violations[0].path, "$.dist[1]");
    }

    #[test]
    fn distances() {
        let inst = validate(&chain3()).unwrap();
        assert_eq!(inst.distance(1, 1).unwrap(), Rational::zero());
        assert_eq!(inst.distance(0, 1).unwrap(), inst.distance(1, 0).unwrap());
        assert_eq!(inst.distance(0, 2).unwrap(), q("2"));
        assert_eq!(
            inst.distance(0, 3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        );
    }

    #[test]
    fn raw_round_trip() {
        let inst = validate(&chain3()).unwrap();
        assert_eq!(inst.to_raw(), chain3());
        assert_eq!(inst.index_of("x2"), Some(2));
        assert_eq!(inst.index_of("nope"), None);
    }
}
