//! Ekeland points for vector-valued objectives.
//!
//! The relation
//!
//! ```text
//! u r v  ⇔  (f(u) - K) ∩ (f(v) + s·d(u,v)·D) ≠ ∅
//!        ⇔  f(u) - f(v) = s·d(u,v)·δ + k   for some δ ∈ D, k ∈ K
//! ```
//!
//! is transitive because `D` is convex and `D ⊂ K`, and a step `u r v` with
//! `u ≠ v` lowers `<y*, f>` by at least `s·d(u,v)`. Following strict
//! `r`-successors from any start therefore ends, after at most `|X|` steps,
//! at a point `x̄` with no strict successor: that is conclusion (ii), and
//! transitivity along the walk gives (i).
//!
//! The scale `s` is the `ε` of the approximate-solution variant (the metric
//! `d` replaced by `ε·d`); `s = 1` is the plain principle.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{self, check_convex_weights, Scalarizer};
use crate::numeric::{lp_feasible, Feasibility, LinearSystem, Rational, RationalVector};
use crate::space::{Instance, Objective};

/// Decomposition `f(u) - f(v) = s·d(u,v)·delta + k` with
/// `delta = Σ λ_i d_i` (convex) and `k = Σ μ_j g_j` (conic).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationWitness {
    pub lambda: Vec<Rational>,
    pub mu: Vec<Rational>,
    pub delta: RationalVector,
    pub k: RationalVector,
}

impl RelationWitness {
    /// Exact check against `diff = factor·delta + k` and the weight
    /// constraints. Returns a description of the first failure.
    pub fn check(&self, inst: &Instance, diff: &RationalVector, factor: &Rational) -> Result<(), String> {
        let m = inst.dim();
        if self.lambda.len() != inst.dset().vertices().len() || self.mu.len() != inst.cone().generators().len() {
            return Err("weight vector length mismatch".into());
        }
        if self.delta.dim() != m || self.k.dim() != m {
            return Err("witness vector dimension mismatch".into());
        }
        check_convex_weights(&self.lambda, self.lambda.len()).map_err(|e| e.to_string())?;
        if self.mu.iter().any(Rational::is_negative) {
            return Err("negative conic weight".into());
        }
        if RationalVector::combination(m, &self.lambda, inst.dset().vertices()) != self.delta {
            return Err("delta is not the stated convex combination".into());
        }
        if RationalVector::combination(m, &self.mu, inst.cone().generators()) != self.k {
            return Err("k is not the stated conic combination".into());
        }
        let rebuilt = self.delta.scale(factor).add(&self.k);
        if &rebuilt != diff {
            return Err(format!("residual {} is nonzero", diff.sub(&rebuilt)));
        }
        Ok(())
    }

    /// Checks the witness for `u r v` at the given scale.
    pub fn verifies(&self, inst: &Instance, u: usize, v: usize, scale: &Rational) -> bool {
        let diff = inst.f(u).sub(inst.f(v));
        let factor = scale * inst.space().dist(u, v);
        self.check(inst, &diff, &factor).is_ok()
    }

    /// Witness for `u r u`: `δ` is the first vertex and `k = 0`.
    fn reflexive(inst: &Instance) -> Self {
        let p = inst.dset().vertices().len();
        let mut lambda = vec![Rational::zero(); p];
        lambda[0] = Rational::one();
        RelationWitness {
            lambda,
            mu: vec![Rational::zero(); inst.cone().generators().len()],
            delta: inst.dset().vertices()[0].clone(),
            k: RationalVector::zeros(inst.dim()),
        }
    }
}

/// One step `previous r index` of an Ekeland chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub index: usize,
    pub witness: RelationWitness,
}

/// Everything needed to recheck conclusions (i) and (ii) for one start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EkelandCertificate {
    pub start: usize,
    pub scale: Rational,
    /// Steps after `start`; empty when `start` already satisfies (ii).
    pub chain: Vec<ChainStep>,
    pub x_bar: usize,
    /// Witness for `start r x_bar`, i.e. conclusion (i).
    pub start_witness: RelationWitness,
    pub scalarizer: Scalarizer,
    /// `<y*, f(x)>` at `start` and after every step.
    pub scalar_trace: Vec<Rational>,
}

impl EkelandCertificate {
    /// `start, chain[0].index, …, x_bar`.
    pub fn points(&self) -> Vec<usize> {
        std::iter::once(self.start).chain(self.chain.iter().map(|s| s.index)).collect()
    }
}

fn check_scale(scale: &Rational) -> Result<()> {
    if scale.is_positive() {
        Ok(())
    } else {
        Err(Error::NonpositiveScale)
    }
}

/// Searches `λ, μ >= 0, Σλ = 1` with `diff = factor·Σ λ_i d_i + Σ μ_j g_j`.
fn decompose(inst: &Instance, diff: &RationalVector, factor: &Rational) -> Result<Option<RelationWitness>> {
    let vertices = inst.dset().vertices();
    let gens = inst.cone().generators();
    let (p, q) = (vertices.len(), gens.len());
    let mut sys = LinearSystem::nonnegative(p + q);
    for i in 0..inst.dim() {
        let row = vertices
            .iter()
            .map(|d| factor * &d[i])
            .chain(gens.iter().map(|g| g[i].clone()))
            .collect();
        sys.add_eq(row, diff[i].clone());
    }
    let mut convex = vec![Rational::one(); p];
    convex.resize(p + q, Rational::zero());
    sys.add_eq(convex, Rational::one());

    Ok(match lp_feasible(&sys)? {
        Feasibility::Infeasible => None,
        Feasibility::Feasible(w) => {
            let mut weights = w.into_inner();
            let mu = weights.split_off(p);
            let lambda = weights;
            let delta = RationalVector::combination(inst.dim(), &lambda, vertices);
            let k = RationalVector::combination(inst.dim(), &mu, gens);
            Some(RelationWitness { lambda, mu, delta, k })
        }
    })
}

/// Decides `u r v` at the given scale, returning the decomposition when it
/// holds.
pub fn relation_r(inst: &Instance, u: usize, v: usize, scale: &Rational) -> Result<Option<RelationWitness>> {
    inst.check_index(u)?;
    inst.check_index(v)?;
    check_scale(scale)?;
    let diff = inst.f(u).sub(inst.f(v));
    let factor = scale * inst.space().dist(u, v);
    decompose(inst, &diff, &factor)
}

/// Decides `(f(u) - K) ∩ (f(v) + s·d(u,v)·(D + K)) ≠ ∅`.
///
/// Solved as its own LP with separate weights for the two cone terms; the
/// returned witness folds them into a single conic weight vector.
pub fn relation_r_dk(inst: &Instance, u: usize, v: usize, scale: &Rational) -> Result<Option<RelationWitness>> {
    inst.check_index(u)?;
    inst.check_index(v)?;
    check_scale(scale)?;
    let vertices = inst.dset().vertices();
    let gens = inst.cone().generators();
    let (p, q) = (vertices.len(), gens.len());
    let factor = scale * inst.space().dist(u, v);
    let diff = inst.f(u).sub(inst.f(v));

    // variables: λ (p), μ for f(u) - K (q), ν for the scaled D + K term (q)
    let mut sys = LinearSystem::nonnegative(p + 2 * q);
    for i in 0..inst.dim() {
        let row = vertices
            .iter()
            .map(|d| &factor * &d[i])
            .chain(gens.iter().map(|g| g[i].clone()))
            .chain(gens.iter().map(|g| &factor * &g[i]))
            .collect();
        sys.add_eq(row, diff[i].clone());
    }
    let mut convex = vec![Rational::one(); p];
    convex.resize(p + 2 * q, Rational::zero());
    sys.add_eq(convex, Rational::one());

    Ok(match lp_feasible(&sys)? {
        Feasibility::Infeasible => None,
        Feasibility::Feasible(w) => {
            let w = w.into_inner();
            let lambda = w[..p].to_vec();
            let mu: Vec<Rational> = (0..q).map(|j| &w[p + j] + &(&factor * &w[p + q + j])).collect();
            let delta = RationalVector::combination(inst.dim(), &lambda, vertices);
            let k = RationalVector::combination(inst.dim(), &mu, gens);
            Some(RelationWitness { lambda, mu, delta, k })
        }
    })
}

/// Constructive Ekeland search with a fixed scale.
///
/// Rows of the relation are computed on demand and cached, so running
/// [`EkelandSolver::solve_from`] for every start costs at most `|X|²` LPs.
pub struct EkelandSolver<'a> {
    inst: &'a Instance,
    scale: Rational,
    rows: Vec<Option<Vec<Option<RelationWitness>>>>,
    /// Conic coefficients of each vertex of `D` (vertices lie in `K`).
    vertex_in_cone: Vec<Vec<Rational>>,
}

impl<'a> EkelandSolver<'a> {
    pub fn new(inst: &'a Instance, scale: &Rational) -> Result<Self> {
        check_scale(scale)?;
        let vertex_in_cone = inst
            .dset()
            .vertices()
            .iter()
            .map(|d| {
                geometry::cone_coefficients(inst.cone(), d)
                    .map(|c| c.expect("validated instances have D ⊂ K"))
            })
            .collect::<Result<_>>()?;
        Ok(EkelandSolver {
            inst,
            scale: scale.clone(),
            rows: vec![None; inst.len()],
            vertex_in_cone,
        })
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// `r`-relation row of `u`: entry `v` holds the witness for `u r v`.
    pub fn row(&mut self, u: usize) -> Result<&[Option<RelationWitness>]> {
        self.inst.check_index(u)?;
        if self.rows[u].is_none() {
            let row = (0..self.inst.len())
                .map(|v| {
                    if v == u {
                        Ok(Some(RelationWitness::reflexive(self.inst)))
                    } else {
                        relation_r(self.inst, u, v, &self.scale)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            self.rows[u] = Some(row);
        }
        Ok(self.rows[u].as_deref().expect("row filled above"))
    }

    /// Among the strict successors of `u`, the one of steepest scalarized
    /// descent (smallest index on ties).
    fn best_successor(&mut self, u: usize) -> Result<Option<usize>> {
        let inst = self.inst;
        let y = inst.scalarizer();
        let here = y.apply(inst.f(u));
        let row = self.row(u)?;
        let mut best: Option<(usize, Rational)> = None;
        for (z, w) in row.iter().enumerate() {
            if z == u || w.is_none() {
                continue;
            }
            let descent = &here - &y.apply(inst.f(z));
            if best.as_ref().is_none_or(|(_, b)| descent > *b) {
                best = Some((z, descent));
            }
        }
        Ok(best.map(|(z, _)| z))
    }

    pub fn solve_from(&mut self, start: usize) -> Result<EkelandCertificate> {
        self.inst.check_index(start)?;
        let inst = self.inst;
        let y = inst.scalarizer().clone();
        let mut chain = Vec::new();
        let mut trace = vec![y.apply(inst.f(start))];
        let mut start_witness = RelationWitness::reflexive(inst);
        let mut current = start;

        while let Some(next) = self.best_successor(current)? {
            let witness = self.row(current)?[next].clone().expect("successor is related");
            start_witness = if current == start {
                witness.clone()
            } else {
                self.compose(start, current, next, &start_witness, &witness)
            };
            let value = y.apply(inst.f(next));
            debug_assert!(value < *trace.last().expect("trace is nonempty"));
            trace.push(value);
            chain.push(ChainStep { index: next, witness });
            current = next;
            assert!(chain.len() < inst.len(), "strict descent cannot revisit a point");
        }

        Ok(EkelandCertificate {
            start,
            scale: self.scale.clone(),
            chain,
            x_bar: current,
            start_witness,
            scalarizer: y,
            scalar_trace: trace,
        })
    }

    /// From `u r v` and `v r z` (with `u ≠ z`) builds a witness for `u r z`.
    ///
    /// With `a = s·d(u,v)`, `b = s·d(v,z)`, `c = s·d(u,z) <= a + b`:
    /// `f(u) - f(z) = (a + b)·δ' + k₁ + k₂` where `δ' = (a·δ₁ + b·δ₂)/(a + b) ∈ D`
    /// by convexity, and `(a + b - c)·δ' ∈ K` because `D ⊂ K`.
    fn compose(&self, u: usize, v: usize, z: usize, uv: &RelationWitness, vz: &RelationWitness) -> RelationWitness {
        let inst = self.inst;
        let d = inst.space();
        let a = &self.scale * d.dist(u, v);
        let b = &self.scale * d.dist(v, z);
        let c = &self.scale * d.dist(u, z);
        let total = &a + &b;
        let lambda: Vec<Rational> = uv
            .lambda
            .iter()
            .zip(&vz.lambda)
            .map(|(l1, l2)| (&a * l1 + &b * l2) / &total)
            .collect();
        let excess = &total - &c;
        let mut mu: Vec<Rational> = uv.mu.iter().zip(&vz.mu).map(|(m1, m2)| m1 + m2).collect();
        for (l, coeffs) in lambda.iter().zip(&self.vertex_in_cone) {
            let w = &excess * l;
            if w.is_zero() {
                continue;
            }
            for (m, cj) in mu.iter_mut().zip(coeffs) {
                *m += &w * cj;
            }
        }
        let delta = RationalVector::combination(inst.dim(), &lambda, inst.dset().vertices());
        let k = RationalVector::combination(inst.dim(), &mu, inst.cone().generators());
        let w = RelationWitness { lambda, mu, delta, k };
        debug_assert!(w.verifies(inst, u, z, &self.scale));
        w
    }
}

/// Runs the greedy chain from `x` and certifies conclusions (i) and (ii).
pub fn ekeland_point(inst: &Instance, x: usize, scale: &Rational) -> Result<EkelandCertificate> {
    EkelandSolver::new(inst, scale)?.solve_from(x)
}

/// `(f(x) - εD - K) ∩ f(X) = ∅`.
pub fn is_approx_solution(inst: &Instance, x: usize, eps: &Rational) -> Result<bool> {
    inst.check_index(x)?;
    check_scale(eps)?;
    for z in 0..inst.len() {
        let diff = inst.f(x).sub(inst.f(z));
        if decompose(inst, &diff, eps)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    /// `x` is `ελ`-approximate and `d(x, x̄) < λ`.
    Holds,
    /// `x` is not `ελ`-approximate; nothing is claimed.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub approximate: bool,
    pub distance: Rational,
    pub lambda: Rational,
    pub status: BoundStatus,
}

/// Ekeland point at scale `eps` plus the localization bound: if `x` is an
/// `eps·lam`-approximate solution then `d(x, x̄) < lam`.
///
/// # Panics
///
/// If the bound fails for an approximate `x`; that cannot happen for a
/// correct certificate.
pub fn ekeland_with_bound(
    inst: &Instance,
    x: usize,
    eps: &Rational,
    lam: &Rational,
) -> Result<(EkelandCertificate, BoundReport)> {
    check_scale(eps)?;
    check_scale(lam)?;
    let cert = ekeland_point(inst, x, eps)?;
    let approximate = is_approx_solution(inst, x, &(eps * lam))?;
    let distance = inst.distance(x, cert.x_bar)?;
    let status = if approximate {
        assert!(
            distance < *lam,
            "localization bound violated: d(x, x̄) = {distance} >= λ = {lam}"
        );
        BoundStatus::Holds
    } else {
        BoundStatus::NotApplicable
    };
    Ok((
        cert,
        BoundReport {
            approximate,
            distance,
            lambda: lam.clone(),
            status,
        },
    ))
}

/// `z ↦ f(z) + s·d(z, x̄)·δ` with `δ = Σ λ_i d_i`.
fn perturb(inst: &Instance, weights: &[Rational], x_bar: usize, scale: &Rational) -> Result<Objective> {
    inst.check_index(x_bar)?;
    let delta = inst.dset().point(weights)?;
    let values = (0..inst.len())
        .map(|z| inst.f(z).add(&delta.scale(&(scale * inst.space().dist(z, x_bar)))))
        .collect();
    Ok(Objective { values })
}

/// `f̃_δ(z) = f(z) + ε·d(z, x̄)·δ` for the instance's `ε`.
pub fn perturbed_objective(inst: &Instance, d_weights: &[Rational], x_bar: usize) -> Result<Objective> {
    perturb(inst, d_weights, x_bar, inst.epsilon())
}

/// `x̄` is the unique `K`-minimal point of the perturbed objective:
/// `f̃_δ(x̄) - f̃_δ(z) ∉ K` for every `z ≠ x̄`.
///
/// The perturbation uses the certificate's own scale.
pub fn check_unique_minimal(inst: &Instance, cert: &EkelandCertificate, d_weights: &[Rational]) -> Result<bool> {
    let x_bar = cert.x_bar;
    let table = perturb(inst, d_weights, x_bar, &cert.scale)?;
    let top = table.value(x_bar);
    check_dim(inst.dim(), top.dim())?;
    for z in (0..inst.len()).filter(|&z| z != x_bar) {
        if geometry::cone_contains(inst.cone(), &top.sub(table.value(z)))? {
            return Ok(false);
        }
    }
    Ok(true)
}
