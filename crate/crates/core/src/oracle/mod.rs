//! Independent verification of Ekeland certificates.
//!
//! Nothing in this module calls the simplex solver. Relation systems are
//! rebuilt here from the raw instance data and decided by Fourier–Motzkin
//! elimination; witnesses are rechecked by plain substitution.

mod fm;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use fm::{fm_feasible, FourierMotzkin, BUDGET_ENV, DEFAULT_BUDGET};

use crate::error::{Error, Result};
use crate::numeric::{LinearSystem, Rational, RationalVector};
use crate::principle::{EkelandCertificate, RelationWitness};
use crate::space::Instance;

/// System in `(λ, μ) >= 0` for `f(u) - f(v) = s·d(u,v)·Σλ_i d_i + Σμ_j g_j`,
/// `Σλ_i = 1`.
pub fn relation_system(inst: &Instance, u: usize, v: usize, scale: &Rational) -> LinearSystem {
    let vertices = inst.dset().vertices();
    let gens = inst.cone().generators();
    let (p, q) = (vertices.len(), gens.len());
    let factor = scale * inst.space().dist(u, v);
    let mut rows = Vec::with_capacity(inst.dim() + 1);
    for i in 0..inst.dim() {
        let mut row = Vec::with_capacity(p + q);
        row.extend(vertices.iter().map(|d| &factor * &d[i]));
        row.extend(gens.iter().map(|g| g[i].clone()));
        rows.push((row, &inst.f(u)[i] - &inst.f(v)[i]));
    }
    let convex = (0..p + q)
        .map(|j| if j < p { Rational::one() } else { Rational::zero() })
        .collect();
    rows.push((convex, Rational::one()));
    LinearSystem::from_parts(rows, vec![true; p + q], None)
}

/// `u r v` decided by Fourier–Motzkin.
pub fn related(fm: &FourierMotzkin, inst: &Instance, u: usize, v: usize, scale: &Rational) -> Result<bool> {
    inst.check_index(u)?;
    inst.check_index(v)?;
    Ok(fm.feasible(&relation_system(inst, u, v, scale))?.is_feasible())
}

/// Every point satisfying conclusion (ii): no `z ≠ x` with `x r z`.
/// Returned in increasing index order.
pub fn scan_maximal(inst: &Instance, scale: &Rational) -> Result<Vec<usize>> {
    scan_maximal_with(&FourierMotzkin::default(), inst, scale)
}

pub fn scan_maximal_with(fm: &FourierMotzkin, inst: &Instance, scale: &Rational) -> Result<Vec<usize>> {
    if !scale.is_positive() {
        return Err(Error::NonpositiveScale);
    }
    let mut out = Vec::new();
    'points: for x in 0..inst.len() {
        for z in (0..inst.len()).filter(|&z| z != x) {
            if related(fm, inst, x, z, scale)? {
                continue 'points;
            }
        }
        out.push(x);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl AuditReport {
    fn new() -> Self {
        AuditReport {
            checks: Vec::new(),
            overall: true,
        }
    }

    fn record(&mut self, name: &str, outcome: std::result::Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.overall &= passed;
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "overall: {}", if self.overall { "PASS" } else { "FAIL" })
    }
}

/// Checks that every index, weight vector and value in `cert` has the shape
/// the instance requires. Audit semantics are only meaningful after this.
pub fn check_shape(inst: &Instance, cert: &EkelandCertificate) -> std::result::Result<(), String> {
    let n = inst.len();
    let m = inst.dim();
    let p = inst.dset().vertices().len();
    let q = inst.cone().generators().len();
    let index_ok = |i: usize, what: &str| {
        if i < n {
            Ok(())
        } else {
            Err(format!("{what} index {i} out of range (|X| = {n})"))
        }
    };
    let witness_ok = |w: &RelationWitness, what: &str| {
        if w.lambda.len() != p {
            return Err(format!("{what}: {} convex weights for {p} vertices", w.lambda.len()));
        }
        if w.mu.len() != q {
            return Err(format!("{what}: {} conic weights for {q} generators", w.mu.len()));
        }
        if w.delta.dim() != m || w.k.dim() != m {
            return Err(format!("{what}: vectors must have dimension {m}"));
        }
        Ok(())
    };
    index_ok(cert.start, "start")?;
    index_ok(cert.x_bar, "x_bar")?;
    if cert.scalarizer.y_star.dim() != m {
        return Err(format!(
            "scalarizer has dimension {}, instance has {m}",
            cert.scalarizer.y_star.dim()
        ));
    }
    witness_ok(&cert.start_witness, "start_witness")?;
    for (i, step) in cert.chain.iter().enumerate() {
        index_ok(step.index, &format!("chain[{i}]"))?;
        witness_ok(&step.witness, &format!("chain[{i}]"))?;
    }
    Ok(())
}

/// Substitutes a witness into `f(u) - f(v) = s·d(u,v)·δ + k` and the weight
/// constraints.
fn substitution(inst: &Instance, u: usize, v: usize, scale: &Rational, w: &RelationWitness) -> std::result::Result<(), String> {
    let m = inst.dim();
    let sum: Rational = w.lambda.iter().sum();
    if sum != Rational::one() {
        return Err(format!("convex weights sum to {sum}"));
    }
    if w.lambda.iter().chain(&w.mu).any(Rational::is_negative) {
        return Err("negative weight".into());
    }
    let mut delta = RationalVector::zeros(m);
    for (l, d) in w.lambda.iter().zip(inst.dset().vertices()) {
        delta = delta.add(&d.scale(l));
    }
    let mut k = RationalVector::zeros(m);
    for (mu, g) in w.mu.iter().zip(inst.cone().generators()) {
        k = k.add(&g.scale(mu));
    }
    if delta != w.delta {
        return Err(format!("delta {} differs from Σλd = {delta}", w.delta));
    }
    if k != w.k {
        return Err(format!("k {} differs from Σμg = {k}", w.k));
    }
    let factor = scale * inst.space().dist(u, v);
    let residual = inst.f(u).sub(inst.f(v)).sub(&delta.scale(&factor)).sub(&k);
    if residual.is_zero() {
        Ok(())
    } else {
        Err(format!("residual {residual} for ({u}, {v})"))
    }
}

/// Full certificate audit with the default Fourier–Motzkin budget.
pub fn audit(inst: &Instance, cert: &EkelandCertificate) -> AuditReport {
    audit_with(&FourierMotzkin::default(), inst, cert)
}

pub fn audit_with(fm: &FourierMotzkin, inst: &Instance, cert: &EkelandCertificate) -> AuditReport {
    let mut report = AuditReport::new();
    if let Err(e) = check_shape(inst, cert) {
        report.record("shape", Err(e));
        return report;
    }
    report.record("shape", Ok("indices and dimensions match the instance".into()));

    let scale = &cert.scale;
    if !scale.is_positive() {
        report.record("scale", Err(format!("scale {scale} is not positive")));
        return report;
    }

    let points = cert.points();
    let y = &cert.scalarizer;

    report.record(
        "scalarizer",
        if y.is_valid_for(inst.cone(), inst.dset()) {
            Ok(format!("y* = {} is nonnegative on K and >= 1 on D", y.y_star))
        } else {
            Err(format!("y* = {} violates <y*,g> >= 0 or <y*,d> >= 1", y.y_star))
        },
    );

    let endpoint = *points.last().expect("points include start");
    let mut seen = vec![false; inst.len()];
    let repeated = points.iter().find(|&&i| std::mem::replace(&mut seen[i], true));
    report.record(
        "chain_structure",
        if endpoint != cert.x_bar {
            Err(format!("chain ends at {endpoint}, certificate claims x_bar = {}", cert.x_bar))
        } else if let Some(i) = repeated {
            Err(format!("point {i} appears twice in the chain"))
        } else {
            Ok(format!("{} step(s) from {} to {}", cert.chain.len(), cert.start, cert.x_bar))
        },
    );

    let step_errors: Vec<String> = points
        .windows(2)
        .zip(&cert.chain)
        .filter_map(|(pair, step)| substitution(inst, pair[0], pair[1], scale, &step.witness).err())
        .collect();
    report.record(
        "chain_witnesses",
        if step_errors.is_empty() {
            Ok(format!("{} witness(es) substitute exactly", cert.chain.len()))
        } else {
            Err(step_errors.join("; "))
        },
    );

    let expected: Vec<Rational> = points.iter().map(|&i| y.apply(inst.f(i))).collect();
    let trace_check = if cert.scalar_trace != expected {
        Err("scalar_trace does not match <y*, f> along the chain".to_string())
    } else {
        points
            .windows(2)
            .zip(expected.windows(2))
            .find_map(|(pair, vals)| {
                let drop = &vals[0] - &vals[1];
                let floor = scale * inst.space().dist(pair[0], pair[1]);
                (drop < floor || !drop.is_positive())
                    .then(|| format!("descent {drop} from {} to {} is below s·d = {floor}", pair[0], pair[1]))
            })
            .map_or(Ok("strictly decreasing by at least s·d per step".to_string()), Err)
    };
    report.record("scalar_trace", trace_check);

    report.record(
        "conclusion_i",
        substitution(inst, cert.start, cert.x_bar, scale, &cert.start_witness)
            .map(|_| format!("start {} r x_bar {}", cert.start, cert.x_bar)),
    );

    let mut offenders = Vec::new();
    let mut fm_error = None;
    for z in (0..inst.len()).filter(|&z| z != cert.x_bar) {
        match related(fm, inst, cert.x_bar, z, scale) {
            Ok(true) => offenders.push(z),
            Ok(false) => {}
            Err(e) => {
                fm_error = Some(e);
                break;
            }
        }
    }
    report.record(
        "conclusion_ii",
        match (fm_error, offenders.is_empty()) {
            (Some(e), _) => Err(format!("oracle could not decide: {e}")),
            (None, true) => Ok(format!("no z != {} with x_bar r z ({} checked)", cert.x_bar, inst.len() - 1)),
            (None, false) => Err(format!("x_bar {} relates to {:?}", cert.x_bar, offenders)),
        },
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::principle::ekeland_point;
    use crate::space::{validate, RawInstance};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn rows(xs: &[&[&str]]) -> Vec<Vec<Rational>> {
        xs.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect()
    }

    fn scalar_two_point() -> Instance {
        validate(&RawInstance {
            dim: 1,
            labels: vec!["a".into(), "b".into()],
            dist: rows(&[&["0", "1"], &["1", "0"]]),
            f: rows(&[&["5"], &["3"]]),
            cone_generators: rows(&[&["1"]]),
            d_vertices: rows(&[&["1"]]),
            epsilon: Rational::one(),
        })
        .unwrap()
    }

    fn chain3() -> Instance {
        validate(&RawInstance {
            dim: 2,
            labels: vec!["x0".into(), "x1".into(), "x2".into()],
            dist: rows(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]),
            f: rows(&[&["2", "2"], &["1", "1"], &["1", "0"]]),
            cone_generators: rows(&[&["1", "0"], &["0", "1"]]),
            d_vertices: rows(&[&["1", "0"], &["0", "1"]]),
            epsilon: Rational::one(),
        })
        .unwrap()
    }

    #[test]
    fn scan_examples() {
        let single = validate(&RawInstance {
            dim: 1,
            labels: vec!["p".into()],
            dist: rows(&[&["0"]]),
            f: rows(&[&["1"]]),
            cone_generators: rows(&[&["1"]]),
            d_vertices: rows(&[&["1"]]),
            epsilon: Rational::one(),
        })
        .unwrap();
        assert_eq!(scan_maximal(&single, &Rational::one()).unwrap(), vec![0]);
        assert_eq!(scan_maximal(&scalar_two_point(), &Rational::one()).unwrap(), vec![1]);
        assert_eq!(scan_maximal(&chain3(), &Rational::one()).unwrap(), vec![2]);
    }

    #[test]
    fn genuine_certificates_pass() {
        for inst in [scalar_two_point(), chain3()] {
            for x in 0..inst.len() {
                let cert = ekeland_point(&inst, x, &Rational::one()).unwrap();
                let report = audit(&inst, &cert);
                assert!(report.overall, "{report}");
            }
        }
    }

    #[test]
    fn perturbed_witness_fails() {
        let inst = chain3();
        let mut cert = ekeland_point(&inst, 0, &Rational::one()).unwrap();
        let k = &mut cert.chain[0].witness.k;
        *k = k.add(&RationalVector::from_ints(&[1, 0]));
        let report = audit(&inst, &cert);
        assert!(!report.overall);
        assert!(report.failed().any(|c| c.name == "chain_witnesses"));
    }

    #[test]
    fn interior_x_bar_fails_conclusion_ii() {
        let inst = validate(&RawInstance {
            dim: 1,
            labels: vec!["a".into(), "b".into(), "c".into()],
            dist: rows(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]),
            f: rows(&[&["10"], &["5"], &["0"]]),
            cone_generators: rows(&[&["1"]]),
            d_vertices: rows(&[&["1"]]),
            epsilon: Rational::one(),
        })
        .unwrap();
        let mut cert = ekeland_point(&inst, 0, &Rational::one()).unwrap();
        assert_eq!(cert.x_bar, 2);
        cert.x_bar = 1;
        let report = audit(&inst, &cert);
        assert!(report.failed().any(|c| c.name == "conclusion_ii"));
        assert!(report.failed().any(|c| c.name == "chain_structure"));
    }

    #[test]
    fn shape_errors_short_circuit() {
        let inst = chain3();
        let mut cert = ekeland_point(&inst, 0, &Rational::one()).unwrap();
        cert.scalarizer.y_star = RationalVector::from_ints(&[1]);
        let report = audit(&inst, &cert);
        assert_eq!(report.checks.len(), 1);
        assert!(!report.overall);
    }

    #[test]
    fn relation_system_matches_definition() {
        let inst = chain3();
        let sys = relation_system(&inst, 0, 1, &Rational::one());
        assert_eq!(sys.num_vars(), 4);
        assert!(fm_feasible(&sys).unwrap().is_feasible());
        assert!(!related(&FourierMotzkin::default(), &inst, 2, 0, &Rational::one()).unwrap());
    }
}
