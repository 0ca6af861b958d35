//! Fourier–Motzkin feasibility with witness reconstruction.
//!
//! Equalities are used first to substitute variables away (Gaussian steps);
//! the remaining inequalities are projected one variable at a time. The
//! recorded steps are replayed backwards to produce a feasible point.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numeric::{Feasibility, LinearSystem, Rational, RationalVector};

pub const DEFAULT_BUDGET: usize = 12;
pub const BUDGET_ENV: &str = "EVPKIT_FM_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Constraint {
    coeffs: Vec<Rational>,
    rhs: Rational,
    /// `coeffs · x = rhs` when set, `coeffs · x <= rhs` otherwise.
    eq: bool,
}

impl Constraint {
    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    fn constant_holds(&self) -> bool {
        if self.eq {
            self.rhs.is_zero()
        } else {
            !self.rhs.is_negative()
        }
    }

    /// Scales so the first nonzero coefficient has magnitude one (and is
    /// positive, for equalities).
    fn normalize(&mut self) {
        let Some(lead) = self.coeffs.iter().find(|a| !a.is_zero()).cloned() else {
            return;
        };
        let factor = if self.eq { lead.recip() } else { lead.abs().recip() };
        if factor == Rational::one() {
            return;
        }
        for a in &mut self.coeffs {
            *a *= &factor;
        }
        self.rhs *= &factor;
    }
}

enum Step {
    /// `x_var = rhs - Σ_{k≠var} coeffs_k x_k` (with `coeffs[var] = 1`).
    Substitute { var: usize, row: Constraint },
    /// Inequalities that bounded `var` when it was projected out.
    Project { var: usize, bounds: Vec<Constraint> },
}

/// Exact Fourier–Motzkin decision procedure with a variable budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourierMotzkin {
    pub budget: usize,
}

impl Default for FourierMotzkin {
    fn default() -> Self {
        FourierMotzkin { budget: DEFAULT_BUDGET }
    }
}

impl FourierMotzkin {
    pub fn with_budget(budget: usize) -> Self {
        FourierMotzkin { budget }
    }

    /// Budget from `EVPKIT_FM_BUDGET`, falling back to the default when unset
    /// or unparsable.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Self::with_budget)
            .unwrap_or_default()
    }

    pub fn feasible(&self, sys: &LinearSystem) -> Result<Feasibility> {
        sys.validate()?;
        let n = sys.num_vars();
        if n > self.budget {
            return Err(Error::TooLarge { vars: n, budget: self.budget });
        }

        let mut constraints: Vec<Constraint> = sys
            .rows()
            .iter()
            .map(|(row, rhs)| Constraint {
                coeffs: row.clone(),
                rhs: rhs.clone(),
                eq: true,
            })
            .collect();
        for (j, _) in sys.nonneg_mask().iter().enumerate().filter(|(_, &nn)| nn) {
            let mut coeffs = vec![Rational::zero(); n];
            coeffs[j] = -Rational::one();
            constraints.push(Constraint {
                coeffs,
                rhs: Rational::zero(),
                eq: false,
            });
        }

        let mut live: Vec<bool> = vec![true; n];
        let mut steps = Vec::with_capacity(n);
        loop {
            constraints = match simplify(constraints) {
                Some(c) => c,
                None => return Ok(Feasibility::Infeasible),
            };
            if !live.iter().any(|&l| l) {
                break;
            }

            let pick = constraints.iter().enumerate().find_map(|(ci, c)| {
                if !c.eq {
                    return None;
                }
                (0..n).find(|&j| live[j] && !c.coeffs[j].is_zero()).map(|j| (ci, j))
            });
            if let Some((ci, var)) = pick {
                let mut row = constraints.swap_remove(ci);
                let pivot = row.coeffs[var].recip();
                for a in &mut row.coeffs {
                    *a *= &pivot;
                }
                row.rhs *= &pivot;
                for c in &mut constraints {
                    let factor = c.coeffs[var].clone();
                    if factor.is_zero() {
                        continue;
                    }
                    for (a, r) in c.coeffs.iter_mut().zip(&row.coeffs) {
                        *a -= &(&factor * r);
                    }
                    c.rhs -= &(&factor * &row.rhs);
                }
                live[var] = false;
                steps.push(Step::Substitute { var, row });
                continue;
            }

            let var = choose_projection(&constraints, &live);
            let (bounds, rest): (Vec<Constraint>, Vec<Constraint>) =
                constraints.into_iter().partition(|c| !c.coeffs[var].is_zero());
            let mut next = rest;
            for up in bounds.iter().filter(|c| c.coeffs[var].is_positive()) {
                for low in bounds.iter().filter(|c| c.coeffs[var].is_negative()) {
                    let alpha = up.coeffs[var].clone();
                    let beta = -&low.coeffs[var];
                    let coeffs = up
                        .coeffs
                        .iter()
                        .zip(&low.coeffs)
                        .map(|(a, b)| &beta * a + &alpha * b)
                        .collect();
                    next.push(Constraint {
                        coeffs,
                        rhs: &beta * &up.rhs + &alpha * &low.rhs,
                        eq: false,
                    });
                }
            }
            constraints = next;
            live[var] = false;
            steps.push(Step::Project { var, bounds });
        }

        let x = back_substitute(n, &steps);
        debug_assert!(sys.is_satisfied_by(&x), "reconstructed point must satisfy the system");
        Ok(Feasibility::Feasible(x))
    }
}

/// Decides feasibility with the default budget.
pub fn fm_feasible(sys: &LinearSystem) -> Result<Feasibility> {
    FourierMotzkin::default().feasible(sys)
}

/// Drops constant rows (or reports infeasibility), normalizes, and keeps only
/// the tightest copy of parallel inequalities.
fn simplify(constraints: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut out: Vec<Constraint> = Vec::with_capacity(constraints.len());
    let mut seen: HashMap<(Vec<Rational>, bool), usize> = HashMap::new();
    for mut c in constraints {
        if c.is_constant() {
            if !c.constant_holds() {
                return None;
            }
            continue;
        }
        c.normalize();
        let key = (c.coeffs.clone(), c.eq);
        match seen.get(&key) {
            Some(&i) if c.eq => {
                if out[i].rhs != c.rhs {
                    return None;
                }
            }
            Some(&i) => {
                if c.rhs < out[i].rhs {
                    out[i].rhs = c.rhs;
                }
            }
            None => {
                seen.insert(key, out.len());
                out.push(c);
            }
        }
    }
    Some(out)
}

/// Live variable whose projection creates the fewest new rows.
fn choose_projection(constraints: &[Constraint], live: &[bool]) -> usize {
    (0..live.len())
        .filter(|&j| live[j])
        .min_by_key(|&j| {
            let pos = constraints.iter().filter(|c| c.coeffs[j].is_positive()).count();
            let neg = constraints.iter().filter(|c| c.coeffs[j].is_negative()).count();
            pos * neg
        })
        .expect("called with at least one live variable")
}

fn back_substitute(n: usize, steps: &[Step]) -> RationalVector {
    let mut x = vec![Rational::zero(); n];
    let rest_of = |c: &Constraint, var: usize, x: &[Rational]| -> Rational {
        let mut r = c.rhs.clone();
        for (k, (a, v)) in c.coeffs.iter().zip(x).enumerate() {
            if k != var && !a.is_zero() {
                r -= &(a * v);
            }
        }
        r
    };
    for step in steps.iter().rev() {
        match step {
            Step::Substitute { var, row } => {
                x[*var] = rest_of(row, *var, &x);
            }
            Step::Project { var, bounds } => {
                let mut lo: Option<Rational> = None;
                let mut hi: Option<Rational> = None;
                for c in bounds {
                    let a = &c.coeffs[*var];
                    let limit = rest_of(c, *var, &x) / a;
                    if a.is_positive() {
                        hi = Some(match hi {
                            Some(h) => h.min(limit),
                            None => limit,
                        });
                    } else {
                        lo = Some(match lo {
                            Some(l) => l.max(limit),
                            None => limit,
                        });
                    }
                }
                let zero = Rational::zero();
                let zero_ok = lo.as_ref().is_none_or(|l| *l <= zero) && hi.as_ref().is_none_or(|h| zero <= *h);
                x[*var] = if zero_ok {
                    zero
                } else {
                    lo.or(hi).expect("a violated bound exists")
                };
            }
        }
    }
    RationalVector::new(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::lp_feasible;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn trivial_systems() {
        let mut sys = LinearSystem::nonnegative(1);
        sys.add_eq(vec![q(1)], q(1));
        assert_eq!(
            fm_feasible(&sys).unwrap(),
            Feasibility::Feasible(RationalVector::from_ints(&[1]))
        );

        let mut sys = LinearSystem::nonnegative(1);
        sys.add_eq(vec![q(1)], q(-1));
        assert_eq!(fm_feasible(&sys).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn simplex_segment_decomposition() {
        // (1, 1) = 1·(λ1 (1,0) + λ2 (0,1)) + μ1 (1,0) + μ2 (0,1), Σλ = 1
        let mut sys = LinearSystem::nonnegative(4);
        sys.add_eq(vec![q(1), q(0), q(1), q(0)], q(1));
        sys.add_eq(vec![q(0), q(1), q(0), q(1)], q(1));
        sys.add_eq(vec![q(1), q(1), q(0), q(0)], q(1));
        let w = fm_feasible(&sys).unwrap();
        assert!(sys.is_satisfied_by(w.witness().unwrap()));
    }

    #[test]
    fn budget_is_enforced() {
        let sys = LinearSystem::nonnegative(13);
        assert_eq!(
            fm_feasible(&sys),
            Err(Error::TooLarge { vars: 13, budget: 12 })
        );
        assert!(FourierMotzkin::with_budget(13).feasible(&sys).unwrap().is_feasible());
    }

    #[test]
    fn inconsistent_equalities() {
        let mut sys = LinearSystem::new(2);
        sys.add_eq(vec![q(1), q(1)], q(1));
        sys.add_eq(vec![q(2), q(2)], q(3));
        assert_eq!(fm_feasible(&sys).unwrap(), Feasibility::Infeasible);
        assert_eq!(lp_feasible(&sys).unwrap(), Feasibility::Infeasible);
    }

    fn system_strategy() -> impl Strategy<Value = LinearSystem> {
        (1usize..=6, 1usize..=8).prop_flat_map(|(n, rows)| {
            (
                proptest::collection::vec((proptest::collection::vec(-3i64..=3, n), -4i64..=4), rows),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(|(rows, mask)| {
                    let rows = rows
                        .into_iter()
                        .map(|(a, b)| (a.into_iter().map(q).collect(), q(b)))
                        .collect();
                    LinearSystem::from_parts(rows, mask, None)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn agrees_with_simplex(sys in system_strategy()) {
            let fm = fm_feasible(&sys).unwrap();
            let lp = lp_feasible(&sys).unwrap();
            prop_assert_eq!(fm.is_feasible(), lp.is_feasible());
            if let Feasibility::Feasible(w) = &fm {
                prop_assert!(sys.is_satisfied_by(w));
            }
        }
    }
}
