//! Dense two-phase tableau simplex with Bland's rule, generic over the
//! scalar field. The rational instantiation is exact; the binary64 one uses
//! a fixed pivot tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ratio::Rational;
use num_traits::{One, Signed, Zero};

pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn positive(&self) -> bool;
    fn negative(&self) -> bool;
    fn nonzero(&self) -> bool {
        self.positive() || self.negative()
    }
}

impl LpScalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn positive(&self) -> bool {
        self.is_positive()
    }
    fn negative(&self) -> bool {
        self.is_negative()
    }
}

/// Pivot and sign tolerance of the binary64 solver.
pub const F64_TOLERANCE: f64 = 1e-10;

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn positive(&self) -> bool {
        *self > F64_TOLERANCE
    }
    fn negative(&self) -> bool {
        *self < -F64_TOLERANCE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub point: Vec<T>,
    pub value: T,
}

/// `maximize/minimize c·x  s.t.  rows·x ≤ rhs`, `x` free.
pub fn solve<T: LpScalar>(rows: &[Vec<T>], rhs: &[T], objective: &[T], sense: Sense) -> Result<LpSolution<T>> {
    let dim = objective.len();
    if rows.len() != rhs.len() {
        return Err(Error::DimensionMismatch { expected: rows.len(), got: rhs.len() });
    }
    if let Some(row) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
    }
    let cost: Vec<T> = match sense {
        Sense::Maximize => objective.to_vec(),
        Sense::Minimize => objective.iter().map(|c| -c.clone()).collect(),
    };
    let mut tab = Tableau::new(rows, rhs, dim);
    tab.phase_one()?;
    tab.phase_two(&cost)?;
    let point = tab.primal(dim);
    let value = point.iter().zip(objective).fold(T::zero(), |acc, (x, c)| acc + x.clone() * c.clone());
    Ok(LpSolution { point, value })
}

/// Phase one only.
pub fn is_feasible<T: LpScalar>(rows: &[Vec<T>], rhs: &[T], dim: usize) -> bool {
    let mut tab = Tableau::new(rows, rhs, dim);
    tab.phase_one().is_ok()
}

struct Tableau<T> {
    // m rows, each of width `cols`, plus the right-hand side
    a: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    cols: usize,
    first_artificial: usize,
    // reduced costs c_j - z_j and current objective value
    reduced: Vec<T>,
    value: T,
}

impl<T: LpScalar> Tableau<T> {
    // columns: x⁺ (dim), x⁻ (dim), slacks (m), artificials (one per negative rhs)
    fn new(rows: &[Vec<T>], rhs: &[T], dim: usize) -> Self {
        let m = rows.len();
        let negative: Vec<bool> = rhs.iter().map(|h| h.negative()).collect();
        let n_art = negative.iter().filter(|&&n| n).count();
        let first_artificial = 2 * dim + m;
        let cols = first_artificial + n_art;
        let mut a = Vec::with_capacity(m);
        let mut new_rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = first_artificial;
        for i in 0..m {
            let sign = if negative[i] { -T::one() } else { T::one() };
            let mut row = vec![T::zero(); cols];
            for k in 0..dim {
                row[k] = sign.clone() * rows[i][k].clone();
                row[dim + k] = -(sign.clone() * rows[i][k].clone());
            }
            row[2 * dim + i] = sign.clone();
            if negative[i] {
                row[art] = T::one();
                basis.push(art);
                art += 1;
            } else {
                basis.push(2 * dim + i);
            }
            new_rhs.push(sign * rhs[i].clone());
            a.push(row);
        }
        Tableau { a, rhs: new_rhs, basis, cols, first_artificial, reduced: Vec::new(), value: T::zero() }
    }

    fn set_cost(&mut self, cost: &[T]) {
        let mut reduced = cost.to_vec();
        let mut value = T::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = cost[bv].clone();
            if cb.nonzero() {
                for (j, r) in reduced.iter_mut().enumerate() {
                    if self.a[i][j].nonzero() {
                        *r = r.clone() - cb.clone() * self.a[i][j].clone();
                    }
                }
                value = value + cb * self.rhs[i].clone();
            }
        }
        self.reduced = reduced;
        self.value = value;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for j in 0..self.cols {
            if self.a[row][j].nonzero() {
                self.a[row][j] = self.a[row][j].clone() / p.clone();
            }
        }
        self.a[row][col] = T::one();
        self.rhs[row] = self.rhs[row].clone() / p;
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.a.len() {
            if i == row {
                continue;
            }
            let factor = self.a[i][col].clone();
            if !factor.nonzero() {
                continue;
            }
            for (j, pv) in pivot_row.iter().enumerate() {
                if pv.nonzero() {
                    self.a[i][j] = self.a[i][j].clone() - factor.clone() * pv.clone();
                }
            }
            self.a[i][col] = T::zero();
            self.rhs[i] = self.rhs[i].clone() - factor * pivot_rhs.clone();
        }
        let factor = self.reduced[col].clone();
        if factor.nonzero() {
            for (j, pv) in pivot_row.iter().enumerate() {
                if pv.nonzero() {
                    self.reduced[j] = self.reduced[j].clone() - factor.clone() * pv.clone();
                }
            }
            self.reduced[col] = T::zero();
            self.value = self.value.clone() + factor * pivot_rhs;
        }
        self.basis[row] = col;
    }

    fn run(&mut self, allowed: usize) -> Result<()> {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.reduced[j].positive()) else {
                return Ok(());
            };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][col].positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / self.a[i][col].clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let diff = ratio.clone() - br.clone();
                        if diff.negative() || (!diff.positive() && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Err(Error::Unbounded),
            }
        }
    }

    fn phase_one(&mut self) -> Result<()> {
        if self.first_artificial == self.cols {
            return Ok(());
        }
        let mut cost = vec![T::zero(); self.cols];
        for c in cost.iter_mut().skip(self.first_artificial) {
            *c = -T::one();
        }
        self.set_cost(&cost);
        // bounded below by zero, so never unbounded
        self.run(self.cols)?;
        if self.value.negative() {
            return Err(Error::Infeasible);
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| self.a[i][j].nonzero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.a.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        Ok(())
    }

    fn phase_two(&mut self, objective: &[T]) -> Result<()> {
        let dim = objective.len();
        let mut cost = vec![T::zero(); self.cols];
        for k in 0..dim {
            cost[k] = objective[k].clone();
            cost[dim + k] = -objective[k].clone();
        }
        self.set_cost(&cost);
        self.run(self.first_artificial)
    }

    fn primal(&self, dim: usize) -> Vec<T> {
        let mut x = vec![T::zero(); dim];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < dim {
                x[bv] = x[bv].clone() + self.rhs[i].clone();
            } else if bv < 2 * dim {
                x[bv - dim] = x[bv - dim].clone() - self.rhs[i].clone();
            }
        }
        x
    }
}
