//! Seeded generators for random valid instances and linear systems, used by
//! the property and acceptance suites and by the browser demo.

use rand::Rng;

use crate::numeric::{LinearSystem, Rational, RationalVector};
use crate::space::{validate, Instance, RawInstance};

#[derive(Debug, Clone)]
pub struct InstanceParams {
    pub min_points: usize,
    pub max_points: usize,
    pub dim: usize,
    pub max_generators: usize,
    pub max_vertices: usize,
    /// `m = 1`, `K = Q_+`, `D = {1}`; overrides the cone and direction settings.
    pub scalar: bool,
    pub epsilon: Rational,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            min_points: 1,
            max_points: 8,
            dim: 2,
            max_generators: 4,
            max_vertices: 3,
            scalar: false,
            epsilon: Rational::one(),
        }
    }
}

fn small_rational(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    Rational::new(rng.gen_range(lo..=hi), rng.gen_range(1..=4))
}

/// Shortest-path closure of random positive edge weights on the complete
/// graph: always a metric with positive off-diagonal entries.
pub fn random_metric(rng: &mut impl Rng, n: usize) -> Vec<Vec<Rational>> {
    let mut d = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = Rational::new(rng.gen_range(1..=8), rng.gen_range(1..=4));
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn random_cone(rng: &mut impl Rng, m: usize, max_generators: usize) -> Vec<RationalVector> {
    if rng.gen_bool(0.3) {
        return (0..m).map(|i| RationalVector::unit(m, i)).collect();
    }
    let count = rng.gen_range(1..=max_generators.max(1));
    (0..count)
        .map(|_| loop {
            let g: RationalVector = (0..m)
                .map(|_| Rational::from_integer(rng.gen_range(-1..=3)))
                .collect();
            if !g.is_zero() {
                break g;
            }
        })
        .collect()
}

/// Draws until validation succeeds (the direction set must avoid `-K`).
pub fn random_instance(rng: &mut impl Rng, params: &InstanceParams) -> Instance {
    loop {
        let n = rng.gen_range(params.min_points..=params.max_points.max(params.min_points));
        let m = if params.scalar { 1 } else { params.dim };
        let (gens, verts) = if params.scalar {
            (vec![RationalVector::from_ints(&[1])], vec![RationalVector::from_ints(&[1])])
        } else {
            let gens = random_cone(rng, m, params.max_generators);
            let p = rng.gen_range(1..=params.max_vertices.max(1));
            let verts = (0..p)
                .map(|_| {
                    let weights: Vec<Rational> = (0..gens.len())
                        .map(|_| {
                            if rng.gen_bool(0.5) {
                                Rational::zero()
                            } else {
                                Rational::new(rng.gen_range(1..=3), rng.gen_range(1..=2))
                            }
                        })
                        .collect();
                    RationalVector::combination(m, &weights, &gens)
                })
                .collect();
            (gens, verts)
        };
        let rows = |vs: Vec<RationalVector>| vs.into_iter().map(RationalVector::into_inner).collect();
        let raw = RawInstance {
            dim: m,
            labels: (0..n).map(|i| format!("x{i}")).collect(),
            dist: random_metric(rng, n),
            f: (0..n)
                .map(|_| (0..m).map(|_| small_rational(rng, -12, 12)).collect())
                .collect(),
            cone_generators: rows(gens),
            d_vertices: rows(verts),
            epsilon: params.epsilon.clone(),
        };
        if let Ok(inst) = validate(&raw) {
            return inst;
        }
    }
}

/// Random `A x = b` with small integer data and a random sign mask.
pub fn random_system(rng: &mut impl Rng, max_vars: usize, max_rows: usize) -> LinearSystem {
    let n = rng.gen_range(1..=max_vars);
    let rows = rng.gen_range(1..=max_rows);
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let coeffs = (0..n)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    Rational::zero()
                } else {
                    Rational::from_integer(rng.gen_range(-3..=3))
                }
            })
            .collect();
        data.push((coeffs, Rational::from_integer(rng.gen_range(-4..=4))));
    }
    let mask = (0..n).map(|_| rng.gen_bool(0.7)).collect();
    LinearSystem::from_parts(data, mask, None)
}
