//! Polyhedral ordering cones, direction polytopes and the separating
//! functional that turns the vector order into strict real descent.
//!
//! Cones are only ever given by generators. Every question below is an exact
//! LP over conic or convex coefficients.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numeric::{lp_feasible, lp_minimize, Feasibility, LinearSystem, Outcome, Rational, RationalVector};

/// `K = { Σ μ_j g_j : μ_j >= 0 }`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    dim: usize,
    generators: Vec<RationalVector>,
}

impl PolyhedralCone {
    pub fn new(dim: usize, generators: Vec<RationalVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedSystem("cone dimension must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::MalformedSystem("cone needs at least one generator".into()));
        }
        for g in &generators {
            check_dim(dim, g.dim())?;
            if g.is_zero() {
                return Err(Error::MalformedSystem("zero vector is not a valid generator".into()));
            }
        }
        Ok(PolyhedralCone { dim, generators })
    }

    /// The nonnegative orthant Q^m_+.
    pub fn orthant(dim: usize) -> Self {
        PolyhedralCone {
            dim,
            generators: (0..dim).map(|i| RationalVector::unit(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RationalVector] {
        &self.generators
    }

    /// True when every generator is componentwise nonnegative, i.e. `K ⊆ Q^m_+`.
    pub fn within_orthant(&self) -> bool {
        self.generators.iter().all(RationalVector::is_nonnegative)
    }
}

/// `D = conv(vertices)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    dim: usize,
    vertices: Vec<RationalVector>,
}

impl DirectionSet {
    /// Shape checks only; membership in `K` and `0 ∉ D + K` are certified by
    /// instance validation.
    pub fn new(dim: usize, vertices: Vec<RationalVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedSystem("direction set dimension must be positive".into()));
        }
        if vertices.is_empty() {
            return Err(Error::MalformedSystem("direction set needs at least one vertex".into()));
        }
        for v in &vertices {
            check_dim(dim, v.dim())?;
        }
        Ok(DirectionSet { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    /// `Σ λ_i d_i`, after checking that `λ` is a convex weight vector.
    pub fn point(&self, weights: &[Rational]) -> Result<RationalVector> {
        check_convex_weights(weights, self.vertices.len())?;
        Ok(RationalVector::combination(self.dim, weights, &self.vertices))
    }
}

pub(crate) fn check_convex_weights(weights: &[Rational], expected: usize) -> Result<()> {
    if weights.len() != expected {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} vertices",
            weights.len(),
            expected
        )));
    }
    if let Some(i) = weights.iter().position(Rational::is_negative) {
        return Err(Error::InvalidWeights(format!("weight {i} is negative")));
    }
    let total: Rational = weights.iter().sum();
    if total != Rational::one() {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// A functional `y*` with `<y*, g_j> >= 0` on the cone generators and
/// `<y*, d_i> >= 1` on the direction vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scalarizer {
    pub y_star: RationalVector,
}

impl Scalarizer {
    pub fn apply(&self, v: &RationalVector) -> Rational {
        self.y_star.dot(v)
    }

    /// Checks both defining inequalities exactly.
    pub fn is_valid_for(&self, cone: &PolyhedralCone, dset: &DirectionSet) -> bool {
        self.y_star.dim() == cone.dim()
            && self.y_star.dim() == dset.dim()
            && cone.generators().iter().all(|g| !self.apply(g).is_negative())
            && dset.vertices().iter().all(|d| self.apply(d) >= Rational::one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormTag {
    One,
    #[default]
    Inf,
}

impl NormTag {
    pub fn norm(self, v: &RationalVector) -> Rational {
        match self {
            NormTag::One => v.norm_one(),
            NormTag::Inf => v.norm_inf(),
        }
    }
}

impl FromStr for NormTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one" | "1" | "l1" => Ok(NormTag::One),
            "inf" | "max" | "linf" => Ok(NormTag::Inf),
            other => Err(format!("unknown norm {other:?} (expected `one` or `inf`)")),
        }
    }
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormTag::One => "one",
            NormTag::Inf => "inf",
        })
    }
}

/// Conic coefficients `μ >= 0` with `y = Σ μ_j g_j`, if any exist.
pub fn cone_coefficients(cone: &PolyhedralCone, y: &RationalVector) -> Result<Option<Vec<Rational>>> {
    check_dim(cone.dim(), y.dim())?;
    let q = cone.generators().len();
    let mut sys = LinearSystem::nonnegative(q);
    for i in 0..cone.dim() {
        let row = cone.generators().iter().map(|g| g[i].clone()).collect();
        sys.add_eq(row, y[i].clone());
    }
    Ok(match lp_feasible(&sys)? {
        Feasibility::Feasible(w) => Some(w.into_inner()),
        Feasibility::Infeasible => None,
    })
}

pub fn cone_contains(cone: &PolyhedralCone, y: &RationalVector) -> Result<bool> {
    Ok(cone_coefficients(cone, y)?.is_some())
}

/// `x <=_K y  ⇔  y - x ∈ K`.
pub fn leq_k(cone: &PolyhedralCone, x: &RationalVector, y: &RationalVector) -> Result<bool> {
    check_dim(cone.dim(), x.dim())?;
    check_dim(cone.dim(), y.dim())?;
    cone_contains(cone, &y.sub(x))
}

/// Finds `y*` separating `D + K` from the origin.
///
/// Among all valid functionals the one of least 1-norm is returned, which
/// makes the result canonical for a given LP pivoting rule.
pub fn separating_functional(cone: &PolyhedralCone, dset: &DirectionSet) -> Result<Scalarizer> {
    check_dim(cone.dim(), dset.dim())?;
    let m = cone.dim();
    // variables: y (free, m), then a_i >= 0 with -a_i <= y_i <= a_i
    let mut sys = LinearSystem::new(2 * m);
    for i in 0..m {
        sys.set_nonnegative(m + i, true);
    }
    let pad = |v: &RationalVector| v.components().to_vec();
    for g in cone.generators() {
        sys.add_ge(pad(g), Rational::zero());
    }
    for d in dset.vertices() {
        sys.add_ge(pad(d), Rational::one());
    }
    for i in 0..m {
        let mut upper = vec![Rational::zero(); 2 * m];
        upper[i] = Rational::one();
        upper[m + i] = -Rational::one();
        let mut lower = upper.clone();
        lower[i] = -Rational::one();
        sys.add_le(upper, Rational::zero());
        sys.add_le(lower, Rational::zero());
    }
    let mut cost = vec![Rational::zero(); 2 * m];
    for c in &mut cost[m..] {
        *c = Rational::one();
    }
    sys.set_objective(cost);
    match lp_minimize(&sys)? {
        Outcome::Optimal { witness, .. } => {
            let y_star: RationalVector = witness.components()[..m].iter().cloned().collect();
            let s = Scalarizer { y_star };
            debug_assert!(s.is_valid_for(cone, dset));
            Ok(s)
        }
        Outcome::Infeasible => Err(Error::NoSeparation),
        Outcome::Unbounded => unreachable!("a norm is bounded below"),
    }
}

/// Exact `min { ‖d + k‖ : d ∈ D, k ∈ K }`.
///
/// `D + K` is polyhedral and therefore closed, so the value is positive
/// exactly when `0 ∉ D + K`.
pub fn gap(cone: &PolyhedralCone, dset: &DirectionSet, norm: NormTag) -> Result<Rational> {
    check_dim(cone.dim(), dset.dim())?;
    let m = cone.dim();
    let p = dset.vertices().len();
    let q = cone.generators().len();
    // variables: λ (p), μ (q), then the norm bounds: one `t` for inf, `s_i` for one
    let bounds = match norm {
        NormTag::Inf => 1,
        NormTag::One => m,
    };
    let n = p + q + bounds;
    let mut sys = LinearSystem::nonnegative(n);
    let mut simplex_row = vec![Rational::zero(); n];
    for w in &mut simplex_row[..p] {
        *w = Rational::one();
    }
    sys.add_eq(simplex_row, Rational::one());
    for i in 0..m {
        let mut z = vec![Rational::zero(); n];
        for (l, d) in dset.vertices().iter().enumerate() {
            z[l] = d[i].clone();
        }
        for (j, g) in cone.generators().iter().enumerate() {
            z[p + j] = g[i].clone();
        }
        let bound = match norm {
            NormTag::Inf => p + q,
            NormTag::One => p + q + i,
        };
        let mut upper = z.clone();
        upper[bound] = -Rational::one();
        let mut lower: Vec<Rational> = z.iter().map(|a| -a).collect();
        lower[bound] = -Rational::one();
        sys.add_le(upper, Rational::zero());
        sys.add_le(lower, Rational::zero());
    }
    let mut cost = vec![Rational::zero(); n];
    for c in &mut cost[p + q..] {
        *c = Rational::one();
    }
    sys.set_objective(cost);
    match lp_minimize(&sys)? {
        Outcome::Optimal { value, .. } => Ok(value),
        other => unreachable!("gap LP is feasible and bounded, got {other:?}"),
    }
}

/// `K ⊆ { z : φ(z) >= α‖z‖ }`, decided on the generators.
///
/// Checking generators suffices: `φ` is linear and the norm is subadditive and
/// positively homogeneous, so the inequality passes to conic combinations.
pub fn bishop_phelps_contains(
    phi: &RationalVector,
    alpha: &Rational,
    cone: &PolyhedralCone,
    norm: NormTag,
) -> Result<bool> {
    check_dim(cone.dim(), phi.dim())?;
    if !alpha.is_positive() {
        return Err(Error::NonpositiveAlpha);
    }
    Ok(cone
        .generators()
        .iter()
        .all(|g| phi.dot(g) >= alpha * &norm.norm(g)))
}

/// Outcome of probing whether a norm is monotone along the cone order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RolewiczVerdict {
    /// `K ⊆ Q^m_+`, where both supported norms are monotone.
    ProvenForOrthant,
    /// `v ∈ K`, `u - v ∈ K` and `‖v‖ > ‖u‖`.
    Falsified { u: RationalVector, v: RationalVector },
    NotFalsified { probes: usize },
}

impl fmt::Display for RolewiczVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RolewiczVerdict::ProvenForOrthant => write!(f, "proven (cone lies in the nonnegative orthant)"),
            RolewiczVerdict::Falsified { u, v } => write!(f, "falsified: u = {u}, v = {v}"),
            RolewiczVerdict::NotFalsified { probes } => write!(f, "not falsified after {probes} probes"),
        }
    }
}

/// Probes `v ∈ K, u - v ∈ K ⇒ ‖v‖ <= ‖u‖`.
///
/// The property is only required for `v ∈ K` (it is applied with `v = d ∈ D`);
/// over all of Q^m it fails for every nontrivial cone (`v = -g`, `u = 0`).
/// Pairs `(g_i, g_i + g_j)` are tried first, then `trials` random conic
/// combinations drawn from a generator seeded with `seed`.
pub fn rolewicz_check(cone: &PolyhedralCone, norm: NormTag, trials: usize, seed: u64) -> RolewiczVerdict {
    if cone.within_orthant() {
        return RolewiczVerdict::ProvenForOrthant;
    }
    let gens = cone.generators();
    let violates = |v: &RationalVector, k: &RationalVector| {
        let u = v.add(k);
        (norm.norm(v) > norm.norm(&u)).then_some(u)
    };
    for gi in gens {
        for gj in gens {
            if let Some(u) = violates(gi, gj) {
                return RolewiczVerdict::Falsified { u, v: gi.clone() };
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        (0..gens.len())
            .map(|_| {
                if rng.gen_bool(0.4) {
                    Rational::zero()
                } else {
                    Rational::new(rng.gen_range(1..=6), rng.gen_range(1..=3))
                }
            })
            .collect()
    };
    for _ in 0..trials {
        let v = RationalVector::combination(cone.dim(), &coeffs(&mut rng), gens);
        let k = RationalVector::combination(cone.dim(), &coeffs(&mut rng), gens);
        if let Some(u) = violates(&v, &k) {
            return RolewiczVerdict::Falsified { u, v };
        }
    }
    RolewiczVerdict::NotFalsified {
        probes: gens.len() * gens.len() + trials,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn v(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    fn simplex_segment() -> DirectionSet {
        DirectionSet::new(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap()
    }

    #[test]
    fn orthant_membership() {
        let k = PolyhedralCone::orthant(2);
        assert!(cone_contains(&k, &v(&[0, 0])).unwrap());
        assert!(!cone_contains(&k, &v(&[-1, 0])).unwrap());
        assert!(matches!(
            cone_contains(&k, &v(&[1, 2, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn skewed_cone_membership() {
        let k = PolyhedralCone::new(2, vec![v(&[1, 1]), v(&[1, 2])]).unwrap();
        let y = RationalVector::new(vec![r(1, 1), r(3, 2)]);
        let mu = cone_coefficients(&k, &y).unwrap().unwrap();
        assert_eq!(mu, vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn cone_order() {
        let k = PolyhedralCone::orthant(2);
        let x = v(&[3, -1]);
        assert!(leq_k(&k, &x, &x).unwrap());
        assert!(leq_k(&k, &v(&[0, 0]), &v(&[1, 2])).unwrap());
        let ray = PolyhedralCone::new(2, vec![v(&[1, 1])]).unwrap();
        assert!(!leq_k(&ray, &v(&[0, 0]), &v(&[1, 2])).unwrap());
    }

    #[test]
    fn cone_rejects_zero_generator() {
        assert!(PolyhedralCone::new(2, vec![v(&[0, 0])]).is_err());
        assert!(PolyhedralCone::new(2, vec![]).is_err());
    }

    #[test]
    fn separation_examples() {
        let k = PolyhedralCone::orthant(2);
        let s = separating_functional(&k, &simplex_segment()).unwrap();
        assert!(s.is_valid_for(&k, &simplex_segment()));
        assert_eq!(s.y_star, v(&[1, 1]));

        let k1 = PolyhedralCone::orthant(1);
        let d1 = DirectionSet::new(1, vec![v(&[1])]).unwrap();
        assert_eq!(separating_functional(&k1, &d1).unwrap().y_star, v(&[1]));

        let origin = DirectionSet::new(2, vec![v(&[0, 0])]).unwrap();
        assert_eq!(separating_functional(&k, &origin), Err(Error::NoSeparation));
    }

    #[test]
    fn gap_examples() {
        let k = PolyhedralCone::orthant(2);
        assert_eq!(gap(&k, &simplex_segment(), NormTag::Inf).unwrap(), r(1, 2));
        assert_eq!(gap(&k, &simplex_segment(), NormTag::One).unwrap(), r(1, 1));
        let origin = DirectionSet::new(2, vec![v(&[0, 0])]).unwrap();
        assert_eq!(gap(&k, &origin, NormTag::Inf).unwrap(), r(0, 1));
        assert_eq!(gap(&k, &origin, NormTag::One).unwrap(), r(0, 1));
    }

    #[test]
    fn gap_zero_when_cone_contains_a_line() {
        // K contains -d, so d + k = 0 is reachable
        let k = PolyhedralCone::new(2, vec![v(&[1, 0]), v(&[-1, 0])]).unwrap();
        let d = DirectionSet::new(2, vec![v(&[1, 0])]).unwrap();
        assert!(gap(&k, &d, NormTag::Inf).unwrap().is_zero());
        assert_eq!(separating_functional(&k, &d), Err(Error::NoSeparation));
    }

    #[test]
    fn bishop_phelps_examples() {
        let k = PolyhedralCone::orthant(2);
        assert!(bishop_phelps_contains(&v(&[1, 1]), &r(1, 1), &k, NormTag::Inf).unwrap());
        assert!(bishop_phelps_contains(&v(&[1, 1]), &r(1, 1), &k, NormTag::One).unwrap());
        assert!(!bishop_phelps_contains(&v(&[1, 0]), &r(1, 2), &k, NormTag::Inf).unwrap());
        assert_eq!(
            bishop_phelps_contains(&v(&[1, 1]), &r(0, 1), &k, NormTag::Inf),
            Err(Error::NonpositiveAlpha)
        );
    }

    #[test]
    fn rolewicz_verdicts() {
        let k = PolyhedralCone::orthant(2);
        assert_eq!(rolewicz_check(&k, NormTag::One, 10, 0), RolewiczVerdict::ProvenForOrthant);

        // a single ray is always monotone along itself
        let ray = PolyhedralCone::new(2, vec![v(&[1, -2])]).unwrap();
        assert!(matches!(
            rolewicz_check(&ray, NormTag::One, 200, 7),
            RolewiczVerdict::NotFalsified { .. }
        ));

        let k = PolyhedralCone::new(2, vec![v(&[1, 0]), v(&[-1, 1])]).unwrap();
        match rolewicz_check(&k, NormTag::One, 200, 7) {
            RolewiczVerdict::Falsified { u, v: lower } => {
                assert!(cone_contains(&k, &lower).unwrap());
                assert!(cone_contains(&k, &u.sub(&lower)).unwrap());
                assert!(lower.norm_one() > u.norm_one());
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn rolewicz_is_seed_deterministic() {
        let k = PolyhedralCone::new(3, vec![v(&[1, -1, 0]), v(&[0, 1, -1]), v(&[2, 0, 1])]).unwrap();
        for seed in 0..5 {
            assert_eq!(
                rolewicz_check(&k, NormTag::Inf, 50, seed),
                rolewicz_check(&k, NormTag::Inf, 50, seed)
            );
        }
    }

    #[test]
    fn norm_tag_parsing() {
        assert_eq!("one".parse::<NormTag>().unwrap(), NormTag::One);
        assert_eq!("inf".parse::<NormTag>().unwrap(), NormTag::Inf);
        assert!("two".parse::<NormTag>().is_err());
    }
}
