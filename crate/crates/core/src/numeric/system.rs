use super::{Rational, RationalVector};
use crate::error::{Error, Result};

/// Equality-form linear system `A x = b` with a per-variable sign mask and an
/// optional minimization objective.
///
/// Inequalities are compiled into equalities at construction time by adding
/// a fresh nonnegative slack column; every solver sees only the canonical
/// equality form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearSystem {
    num_vars: usize,
    rows: Vec<(Vec<Rational>, Rational)>,
    nonneg: Vec<bool>,
    objective: Option<Vec<Rational>>,
}

/// Result of a feasibility query.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(RationalVector),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&RationalVector> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

/// Result of an optimization query.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal { value: Rational, witness: RationalVector },
    Unbounded,
    Infeasible,
}

impl LinearSystem {
    /// `num_vars` free variables, no rows.
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            rows: Vec::new(),
            nonneg: vec![false; num_vars],
            objective: None,
        }
    }

    /// `num_vars` variables, all constrained to be nonnegative.
    pub fn nonnegative(num_vars: usize) -> Self {
        LinearSystem {
            nonneg: vec![true; num_vars],
            ..Self::new(num_vars)
        }
    }

    /// Raw constructor; shape is checked by the solvers, not here.
    pub fn from_parts(
        rows: Vec<(Vec<Rational>, Rational)>,
        nonneg: Vec<bool>,
        objective: Option<Vec<Rational>>,
    ) -> Self {
        LinearSystem {
            num_vars: nonneg.len(),
            rows,
            nonneg,
            objective,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[(Vec<Rational>, Rational)] {
        &self.rows
    }

    pub fn nonneg_mask(&self) -> &[bool] {
        &self.nonneg
    }

    pub fn objective(&self) -> Option<&[Rational]> {
        self.objective.as_deref()
    }

    pub fn set_nonnegative(&mut self, var: usize, nonneg: bool) {
        self.nonneg[var] = nonneg;
    }

    /// Adds a variable (with a zero column) and returns its index.
    pub fn add_variable(&mut self, nonneg: bool) -> usize {
        for (row, _) in &mut self.rows {
            row.push(Rational::zero());
        }
        if let Some(c) = &mut self.objective {
            c.push(Rational::zero());
        }
        self.nonneg.push(nonneg);
        self.num_vars += 1;
        self.num_vars - 1
    }

    fn padded(&self, mut coeffs: Vec<Rational>) -> Vec<Rational> {
        assert!(
            coeffs.len() <= self.num_vars,
            "row has {} coefficients for {} variables",
            coeffs.len(),
            self.num_vars
        );
        coeffs.resize(self.num_vars, Rational::zero());
        coeffs
    }

    /// `coeffs · x = rhs`; missing trailing coefficients are zero.
    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        let row = self.padded(coeffs);
        self.rows.push((row, rhs));
    }

    /// `coeffs · x <= rhs`, via a new slack `s >= 0`. Returns the slack index.
    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> usize {
        let mut row = self.padded(coeffs);
        let slack = self.add_variable(true);
        row.push(Rational::one());
        self.rows.push((row, rhs));
        slack
    }

    /// `coeffs · x >= rhs`, via a new surplus `s >= 0`. Returns its index.
    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> usize {
        let mut row = self.padded(coeffs);
        let slack = self.add_variable(true);
        row.push(-Rational::one());
        self.rows.push((row, rhs));
        slack
    }

    pub fn set_objective(&mut self, coeffs: Vec<Rational>) {
        let c = self.padded(coeffs);
        self.objective = Some(c);
    }

    pub fn validate(&self) -> Result<()> {
        if self.nonneg.len() != self.num_vars {
            return Err(Error::MalformedSystem(format!(
                "sign mask has {} entries for {} variables",
                self.nonneg.len(),
                self.num_vars
            )));
        }
        for (i, (row, _)) in self.rows.iter().enumerate() {
            if row.len() != self.num_vars {
                return Err(Error::MalformedSystem(format!(
                    "row {i} has {} coefficients, expected {}",
                    row.len(),
                    self.num_vars
                )));
            }
        }
        if let Some(c) = &self.objective {
            if c.len() != self.num_vars {
                return Err(Error::MalformedSystem(format!(
                    "objective has {} coefficients, expected {}",
                    c.len(),
                    self.num_vars
                )));
            }
        }
        Ok(())
    }

    /// Exact substitution check: every row residual is zero and every masked
    /// variable is nonnegative.
    pub fn is_satisfied_by(&self, x: &RationalVector) -> bool {
        if x.dim() != self.num_vars {
            return false;
        }
        let signs_ok = self
            .nonneg
            .iter()
            .zip(x.iter())
            .all(|(&nn, v)| !nn || !v.is_negative());
        signs_ok
            && self.rows.iter().all(|(row, rhs)| {
                let lhs: Rational = row.iter().zip(x.iter()).map(|(a, v)| a * v).sum();
                &lhs == rhs
            })
    }

    pub fn objective_value(&self, x: &RationalVector) -> Option<Rational> {
        self.objective
            .as_ref()
            .map(|c| c.iter().zip(x.iter()).map(|(a, v)| a * v).sum())
    }
}
