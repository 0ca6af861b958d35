//! Dense two-phase tableau simplex over exact rationals with Bland's rule.

use super::{Feasibility, LinearSystem, Outcome, Rational, RationalVector};
use crate::error::Result;

/// Decides `A x = b, x_j >= 0 (masked)` exactly. Any objective is ignored.
pub fn lp_feasible(sys: &LinearSystem) -> Result<Feasibility> {
    sys.validate()?;
    let tab = match Tableau::phase_one(sys) {
        Some(t) => t,
        None => return Ok(Feasibility::Infeasible),
    };
    let x = tab.extract(sys);
    debug_assert!(sys.is_satisfied_by(&x));
    Ok(Feasibility::Feasible(x))
}

/// Minimizes the system's objective (zero objective when none is set).
pub fn lp_minimize(sys: &LinearSystem) -> Result<Outcome> {
    sys.validate()?;
    let mut tab = match Tableau::phase_one(sys) {
        Some(t) => t,
        None => return Ok(Outcome::Infeasible),
    };
    let cost = tab.split_costs(sys);
    if !tab.phase_two(&cost) {
        return Ok(Outcome::Unbounded);
    }
    let witness = tab.extract(sys);
    debug_assert!(sys.is_satisfied_by(&witness));
    let value = sys.objective_value(&witness).unwrap_or_else(Rational::zero);
    Ok(Outcome::Optimal { value, witness })
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns before this index are structural, the rest artificial.
    structural: usize,
    /// Original variable -> (positive column, optional negative column).
    columns: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    /// Builds the phase-one tableau and drives it to a feasible basis with no
    /// artificial column left in it. Returns `None` when infeasible.
    fn phase_one(sys: &LinearSystem) -> Option<Tableau> {
        let mut columns = Vec::with_capacity(sys.num_vars());
        let mut structural = 0;
        for &nonneg in sys.nonneg_mask() {
            let pos = structural;
            structural += 1;
            let neg = if nonneg {
                None
            } else {
                structural += 1;
                Some(pos + 1)
            };
            columns.push((pos, neg));
        }

        let live: Vec<&(Vec<Rational>, Rational)> = sys
            .rows()
            .iter()
            .filter(|(row, rhs)| {
                !(row.iter().all(Rational::is_zero) && rhs.is_zero())
            })
            .collect();
        if live
            .iter()
            .any(|(row, rhs)| row.iter().all(Rational::is_zero) && !rhs.is_zero())
        {
            return None;
        }

        let m = live.len();
        let width = structural + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (i, (row, rhs)) in live.into_iter().enumerate() {
            let flip = rhs.is_negative();
            let mut t = vec![Rational::zero(); width];
            for (j, a) in row.iter().enumerate() {
                let (pos, neg) = columns[j];
                let a = if flip { -a } else { a.clone() };
                if let Some(neg) = neg {
                    t[neg] = -&a;
                }
                t[pos] = a;
            }
            t[structural + i] = Rational::one();
            t[width - 1] = if flip { -rhs } else { rhs.clone() };
            rows.push(t);
        }

        let mut obj = vec![Rational::zero(); width];
        for row in &rows {
            for j in 0..structural {
                obj[j] -= &row[j];
            }
            obj[width - 1] -= &row[width - 1];
        }

        let mut tab = Tableau {
            rows,
            obj,
            basis: (structural..structural + m).collect(),
            structural,
            columns,
        };
        let bounded = tab.optimize(width - 1);
        debug_assert!(bounded, "phase one is bounded below by zero");
        if !tab.obj[width - 1].is_zero() {
            return None;
        }
        tab.drive_out_artificials();
        Some(tab)
    }

    fn width(&self) -> usize {
        self.obj.len()
    }

    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.structural {
                i += 1;
                continue;
            }
            match (0..self.structural).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    // redundant row
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn split_costs(&self, sys: &LinearSystem) -> Vec<Rational> {
        let mut cost = vec![Rational::zero(); self.structural];
        if let Some(c) = sys.objective() {
            for (j, cj) in c.iter().enumerate() {
                let (pos, neg) = self.columns[j];
                cost[pos] = cj.clone();
                if let Some(neg) = neg {
                    cost[neg] = -cj;
                }
            }
        }
        cost
    }

    /// Returns false when the objective is unbounded below.
    fn phase_two(&mut self, cost: &[Rational]) -> bool {
        let width = self.width();
        let mut obj = vec![Rational::zero(); width];
        obj[..self.structural].clone_from_slice(cost);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(row) {
                *o -= &(cb * a);
            }
        }
        // Artificial columns are never allowed back in.
        for o in &mut obj[self.structural..width - 1] {
            *o = Rational::zero();
        }
        self.obj = obj;
        self.optimize(self.structural)
    }

    /// Bland's rule over columns `0..allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.width() - 1;
        loop {
            let entering = match (0..allowed).find(|&j| self.obj[j].is_negative()) {
                Some(j) => j,
                None => return true,
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / a;
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((i, _)) => self.pivot(i, entering),
                None => return false,
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for a in &mut self.rows[r] {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for row in self.rows.iter_mut().chain(std::iter::once(&mut self.obj)) {
            if row.is_empty() {
                continue;
            }
            let factor = row[c].clone();
            if factor.is_zero() {
                continue;
            }
            for (a, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &(&factor * p);
                }
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn extract(&self, sys: &LinearSystem) -> RationalVector {
        let rhs = self.width() - 1;
        let mut col_values = vec![Rational::zero(); self.structural];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.structural {
                col_values[b] = row[rhs].clone();
            }
        }
        (0..sys.num_vars())
            .map(|j| {
                let (pos, neg) = self.columns[j];
                match neg {
                    Some(neg) => &col_values[pos] - &col_values[neg],
                    None => col_values[pos].clone(),
                }
            })
            .collect()
    }
}
