//! Exact rational linear programming (two-phase primal simplex).
//!
//! Problems are tiny (dozens of variables), so a dense tableau with exact
//! rational arithmetic is both simple and fast enough. Bland's rule is used
//! throughout, which rules out cycling.

use num::{One, Signed, Zero};

use crate::linalg::RationalMatrix;
use crate::rat::Rat;

/// Result of an exact LP solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// Minimizes `c · x` subject to `A x = b`, `x >= 0`, exactly.
pub fn solve_lp(a: &RationalMatrix, b: &[Rat], c: &[Rat]) -> LpOutcome {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    assert_eq!(c.len(), n, "cost length mismatch");

    // Tableau columns: n structural vars, m artificials, then the rhs.
    let mut t = vec![vec![Rat::zero(); n + m + 1]; m];
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            let v = a.get(i, j).clone();
            t[i][j] = if flip { -v } else { v };
        }
        t[i][n + i] = Rat::one();
        t[i][n + m] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut phase1_cost = vec![Rat::zero(); n + m];
    for j in n..n + m {
        phase1_cost[j] = Rat::one();
    }
    if !simplex(&mut t, &mut basis, &phase1_cost, n + m) {
        unreachable!("phase 1 is bounded below by zero");
    }
    let p1_value = objective(&t, &basis, &phase1_cost);
    if !p1_value.is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive lingering artificials out of the basis; rows where that is
    // impossible are redundant constraints and can be ignored (their rhs is
    // zero at this point).
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    // Phase 2 over the structural columns only.
    let mut phase2_cost = vec![Rat::zero(); n + m];
    phase2_cost[..n].clone_from_slice(c);
    // Forbid artificials from re-entering by treating them as absent.
    if !simplex(&mut t, &mut basis, &phase2_cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][n + m].clone();
        }
    }
    let value = c
        .iter()
        .zip(&x)
        .fold(Rat::zero(), |acc, (ci, xi)| acc + ci * xi);
    LpOutcome::Optimal { value, x }
}

/// Whether `A x = b`, `x >= 0` has a solution.
pub fn feasible(a: &RationalMatrix, b: &[Rat]) -> bool {
    let c = vec![Rat::zero(); a.cols()];
    matches!(solve_lp(a, b, &c), LpOutcome::Optimal { .. })
}

fn objective(t: &[Vec<Rat>], basis: &[usize], cost: &[Rat]) -> Rat {
    let rhs = t[0].len() - 1;
    basis
        .iter()
        .enumerate()
        .fold(Rat::zero(), |acc, (i, &bi)| acc + &cost[bi] * &t[i][rhs])
}

/// Runs simplex to optimality over columns `0..active`. Returns `false` on
/// unboundedness. Entering/leaving choices follow Bland's rule.
fn simplex(t: &mut [Vec<Rat>], basis: &mut [usize], cost: &[Rat], active: usize) -> bool {
    let m = t.len();
    let rhs = t[0].len() - 1;
    loop {
        // Reduced cost of column j: c_j - c_B . B^{-1} A_j (tableau form).
        let mut entering = None;
        for j in 0..active {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost[j].clone();
            for i in 0..m {
                if !t[i][j].is_zero() {
                    rc -= &cost[basis[i]] * &t[i][j];
                }
            }
            if rc.is_negative() {
                entering = Some(j);
                break; // Bland: smallest improving index.
            }
        }
        let Some(j) = entering else {
            return true;
        };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][j].is_positive() {
                let ratio = &t[i][rhs] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else {
            return false;
        };
        pivot(t, basis, i, j);
    }
}

fn pivot(t: &mut [Vec<Rat>], basis: &mut [usize], pr: usize, pc: usize) {
    let cols = t[0].len();
    let inv = t[pr][pc].clone().recip();
    for j in 0..cols {
        if !t[pr][j].is_zero() {
            t[pr][j] = &t[pr][j] * &inv;
        }
    }
    for i in 0..t.len() {
        if i == pr || t[i][pc].is_zero() {
            continue;
        }
        let f = t[i][pc].clone();
        for j in 0..cols {
            if !t[pr][j].is_zero() {
                let delta = &t[pr][j] * &f;
                t[i][j] = &t[i][j] - &delta;
            }
        }
    }
    basis[pr] = pc;
}
