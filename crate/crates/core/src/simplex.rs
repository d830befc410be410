//! Dense two-phase simplex method with Bland's rule.
//!
//! Solves `min cᵀx` subject to rows `aᵢᵀx {≤, =, ≥} bᵢ` and `x ≥ 0`. Sized
//! for the tiny minimax programs of the certifier; no sparsity, no
//! refactorization.

use crate::error::{Error, Result};

const EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimizes `cost` over the columns allowed by `allowed`; `Ok(false)` when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) -> Result<bool> {
        let rhs = self.cols;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::LpFailure("pivot limit exceeded".into()));
            }
            // Reduced costs c_j - c_Bᵀ B⁻¹ A_j; Bland: first improving column.
            let entering = (0..self.cols).filter(|&j| allowed(j)).find(|&j| {
                let z: f64 = self.rows.iter().zip(&self.basis).map(|(row, &b)| cost[b] * row[j]).sum();
                cost[j] - z < -EPS
            });
            let Some(c) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > EPS {
                    let ratio = row[rhs] / row[c];
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - EPS || (ratio <= lr + EPS && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, c);
        }
    }
}

/// Solves the program with `n = cost.len()` nonnegative variables.
pub fn solve(cost: &[f64], constraints: &[Constraint]) -> Result<LpOutcome> {
    let n = cost.len();
    for c in constraints {
        if c.coeffs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.coeffs.len() });
        }
    }
    // Flip rows so every right-hand side is nonnegative.
    let normalized: Vec<(Vec<f64>, Relation, f64)> = constraints
        .iter()
        .map(|c| {
            if c.rhs < 0.0 {
                let rel = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), rel, -c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs)
            }
        })
        .collect();

    let m = normalized.len();
    let slacks = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let artificials = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let cols = n + slacks + artificials;
    let first_artificial = n + slacks;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (n, first_artificial);
    for (coeffs, rel, rhs) in &normalized {
        let mut row = vec![0.0; cols + 1];
        row[..n].copy_from_slice(coeffs);
        row[cols] = *rhs;
        match rel {
            Relation::Le => {
                row[s] = 1.0;
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -1.0;
                s += 1;
                row[a] = 1.0;
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = 1.0;
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, cols, pivots: 0 };

    if artificials > 0 {
        let mut phase1 = vec![0.0; cols];
        phase1[first_artificial..].iter_mut().for_each(|v| *v = 1.0);
        tab.optimize(&phase1, &|_| true)?;
        let infeasibility: f64 = tab
            .rows
            .iter()
            .zip(&tab.basis)
            .filter(|(_, &b)| b >= first_artificial)
            .map(|(row, _)| row[cols])
            .sum();
        if infeasibility > 1e-9 {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= first_artificial {
                match (0..first_artificial).find(|&j| tab.rows[r][j].abs() > 1e-9) {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut phase2 = vec![0.0; cols];
    phase2[..n].copy_from_slice(cost);
    if !tab.optimize(&phase2, &|j| j < first_artificial)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        if b < n {
            x[b] = row[cols];
        }
    }
    let objective = x.iter().zip(cost).map(|(a, b)| a * b).sum();
    Ok(LpOutcome::Optimal { x, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(coeffs: &[f64], rhs: f64) -> Constraint {
        Constraint { coeffs: coeffs.to_vec(), relation: Relation::Le, rhs }
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let out = solve(
            &[-3.0, -5.0],
            &[le(&[1.0, 0.0], 4.0), le(&[0.0, 2.0], 12.0), le(&[3.0, 2.0], 18.0)],
        )
        .unwrap();
        let LpOutcome::Optimal { x, objective } = out else { panic!("{out:?}") };
        assert!((objective + 36.0).abs() < 1e-9);
        assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + 2y s.t. x + y = 1, x ≥ 0.25 → x = 1, y = 0
        let out = solve(
            &[1.0, 2.0],
            &[
                Constraint { coeffs: vec![1.0, 1.0], relation: Relation::Eq, rhs: 1.0 },
                Constraint { coeffs: vec![1.0, 0.0], relation: Relation::Ge, rhs: 0.25 },
            ],
        )
        .unwrap();
        let LpOutcome::Optimal { objective, .. } = out else { panic!() };
        assert!((objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let out = solve(
            &[1.0],
            &[
                Constraint { coeffs: vec![1.0], relation: Relation::Ge, rhs: 2.0 },
                le(&[1.0], 1.0),
            ],
        )
        .unwrap();
        assert_eq!(out, LpOutcome::Infeasible);
        assert_eq!(solve(&[-1.0], &[le(&[-1.0], 1.0)]).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let eq = |c: &[f64], r| Constraint { coeffs: c.to_vec(), relation: Relation::Eq, rhs: r };
        let out = solve(&[1.0, 1.0], &[eq(&[1.0, 1.0], 1.0), eq(&[2.0, 2.0], 2.0)]).unwrap();
        let LpOutcome::Optimal { objective, .. } = out else { panic!() };
        assert!((objective - 1.0).abs() < 1e-9);
    }
}
