//! Small dense linear programming and the minimal-L1 jqpd computation.
//!
//! The solver is a two-phase tableau simplex with Bland's anti-cycling rule.
//! Problems here are tiny (32 variables, at most 16 equations), so a dense
//! tableau with a deterministic pivot rule is the robust choice. The marginal
//! equation system fed to it contains dependent rows (normalization plus
//! no-signaling); phase-1 artificials absorb those without any pre-reduction.

use crate::boxes::{Behavior, PAIRS};
use crate::quasiprob::{atom_bits, Jqpd};
use crate::{Error, Result};

const PIVOT_EPS: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;

/// Minimize `objective . z` subject to `a z = b`, `z >= 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

/// Outcome classification of an LP solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output; `z` and `objective_value` are meaningful only when
/// `status == Optimal`.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub z: Vec<f64>,
    pub objective_value: f64,
}

/// M* and a jqpd attaining it.
#[derive(Debug, Clone)]
pub struct L1Result {
    /// Minimal L1 norm over jqpds reproducing the box; >= 1, and exactly 1
    /// iff the box is local.
    pub m_star: f64,
    /// An optimal jqpd (optimizers are generically non-unique).
    pub jqpd: Jqpd,
}

/// Solves the LP by two-phase simplex. Returns `InvalidArgument` on
/// dimension mismatches; infeasibility and unboundedness are reported in
/// the solution status, not as errors.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    let n = problem.objective.len();
    let m = problem.a.len();
    if problem.b.len() != m {
        return Err(Error::InvalidArgument(format!(
            "{} rows in A but {} entries in b",
            m,
            problem.b.len()
        )));
    }
    for (i, row) in problem.a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidArgument(format!(
                "row {i} has {} columns, expected {n}",
                row.len()
            )));
        }
    }

    let mut tab = Tableau::new(problem);
    if !tab.phase1() {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            z: vec![],
            objective_value: f64::NAN,
        });
    }
    if !tab.phase2() {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            z: vec![],
            objective_value: f64::NAN,
        });
    }
    let z = tab.extract(n);
    let objective_value = problem
        .objective
        .iter()
        .zip(&z)
        .map(|(c, v)| c * v)
        .sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        z,
        objective_value,
    })
}

/// Computes M* for a box: the minimal L1 norm over all jqpds whose
/// marginals reproduce it.
///
/// Each atom weight is split as q = u - v with u,v >= 0 and the LP minimizes
/// the sum of u+v subject to the 16 marginal equations. An infeasible LP
/// means no jqpd exists, which by the no-signaling equivalence means the box
/// is signaling; that is reported as [`Error::NoJqpdExists`].
pub fn min_l1(behavior: &Behavior) -> Result<L1Result> {
    // variables: z[i] = u_i (positive part), z[16+i] = v_i (negative part)
    let objective = vec![1.0; 32];
    let mut a = Vec::with_capacity(16);
    let mut b = Vec::with_capacity(16);
    for (x, y) in PAIRS {
        for (out_a, out_b) in PAIRS {
            let mut row = vec![0.0; 32];
            for i in 0..16 {
                let (a0, a1, b0, b1) = atom_bits(i);
                let av = if x == 0 { a0 } else { a1 };
                let bv = if y == 0 { b0 } else { b1 };
                if av == out_a && bv == out_b {
                    row[i] = 1.0;
                    row[16 + i] = -1.0;
                }
            }
            a.push(row);
            b.push(behavior.prob(out_a, out_b, x, y));
        }
    }
    let sol = solve_lp(&LpProblem { objective, a, b })?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::NoJqpdExists),
        LpStatus::Unbounded => {
            return Err(Error::InvalidArgument(
                "L1 minimization reported unbounded; objective is bounded below by 1".into(),
            ))
        }
    }
    let mut q = [0.0; 16];
    for i in 0..16 {
        q[i] = sol.z[i] - sol.z[16 + i];
    }
    // renormalize away solver dust so the Jqpd invariant holds exactly enough
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > FEAS_TOL {
        return Err(Error::InvalidArgument(format!(
            "optimal atoms sum to {sum}"
        )));
    }
    for v in q.iter_mut() {
        *v /= sum;
    }
    let jqpd = Jqpd::new(q)?;
    Ok(L1Result {
        m_star: sol.objective_value,
        jqpd,
    })
}

struct Tableau {
    /// Rows of [structural columns | artificial columns | rhs].
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row, same width as `rows` entries.
    obj: Vec<f64>,
    /// Basic variable per row.
    basis: Vec<usize>,
    /// Structural variable count.
    n: usize,
    /// Artificial variable count (one per original row).
    n_art: usize,
    cost: Vec<f64>,
}

impl Tableau {
    fn new(problem: &LpProblem) -> Self {
        let n = problem.objective.len();
        let m = problem.a.len();
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = vec![0.0; width];
            let flip = if problem.b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                row[j] = flip * problem.a[i][j];
            }
            row[n + i] = 1.0;
            row[width - 1] = flip * problem.b[i];
            rows.push(row);
        }
        Tableau {
            rows,
            obj: vec![0.0; width],
            basis: (n..n + m).collect(),
            n,
            n_art: m,
            cost: problem.objective.clone(),
        }
    }

    fn width(&self) -> usize {
        self.n + self.n_art + 1
    }

    /// Recomputes the reduced-cost row for the given full cost vector.
    fn price(&mut self, cost: &[f64]) {
        let width = self.width();
        self.obj = vec![0.0; width];
        self.obj[..cost.len()].copy_from_slice(cost);
        for i in 0..self.rows.len() {
            let c = cost[self.basis[i]];
            if c != 0.0 {
                for j in 0..width {
                    self.obj[j] -= c * self.rows[i][j];
                }
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.width();
        let p = self.rows[row][col];
        for j in 0..width {
            self.rows[row][j] /= p;
        }
        for i in 0..self.rows.len() {
            if i != row {
                let f = self.rows[i][col];
                if f != 0.0 {
                    for j in 0..width {
                        self.rows[i][j] -= f * self.rows[row][j];
                    }
                }
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for j in 0..width {
                self.obj[j] -= f * self.rows[row][j];
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations with Bland's rule until optimal or unbounded.
    /// Only structural columns may enter the basis.
    fn iterate(&mut self) -> bool {
        let rhs = self.width() - 1;
        loop {
            // Bland: smallest-index column with negative reduced cost
            let Some(col) = (0..self.n).find(|&j| self.obj[j] < -PIVOT_EPS) else {
                return true;
            };
            // ratio test, ties broken by smallest basis variable index
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > PIVOT_EPS {
                    let ratio = self.rows[i][rhs] / a;
                    let better = match best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br - PIVOT_EPS
                                || (ratio < br + PIVOT_EPS && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = best else {
                return false; // unbounded
            };
            self.pivot(row, col);
        }
    }

    /// Phase 1: drive the artificials to zero. Returns false if infeasible.
    fn phase1(&mut self) -> bool {
        let mut cost = vec![0.0; self.n + self.n_art];
        for c in cost.iter_mut().skip(self.n) {
            *c = 1.0;
        }
        self.price(&cost);
        self.iterate(); // phase 1 cannot be unbounded
        let rhs = self.width() - 1;
        let phase1_obj: f64 = (0..self.rows.len())
            .filter(|&i| self.basis[i] >= self.n)
            .map(|i| self.rows[i][rhs])
            .sum();
        if phase1_obj > FEAS_TOL {
            return false;
        }
        // pivot remaining zero-valued artificials out where possible; rows
        // with no structural pivot are redundant and dropped
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.n {
                if let Some(col) = (0..self.n).find(|&j| self.rows[i][j].abs() > PIVOT_EPS) {
                    self.pivot(i, col);
                    i += 1;
                } else {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
        true
    }

    /// Phase 2 on the original objective. Returns false if unbounded.
    fn phase2(&mut self) -> bool {
        let mut cost = vec![0.0; self.n + self.n_art];
        cost[..self.n].copy_from_slice(&self.cost);
        self.price(&cost);
        self.iterate()
    }

    fn extract(&self, n: usize) -> Vec<f64> {
        let rhs = self.width() - 1;
        let mut z = vec![0.0; n];
        for i in 0..self.rows.len() {
            if self.basis[i] < n {
                z[self.basis[i]] = self.rows[i][rhs];
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::Behavior;

    #[test]
    fn simple_optimal() {
        // minimize z1 s.t. z1 - z2 = 3
        let p = LpProblem {
            objective: vec![1.0, 0.0],
            a: vec![vec![1.0, -1.0]],
            b: vec![3.0],
        };
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value - 3.0).abs() < 1e-12);
        assert!((s.z[0] - 3.0).abs() < 1e-12 && s.z[1].abs() < 1e-12);
    }

    #[test]
    fn infeasible_detected() {
        let p = LpProblem {
            objective: vec![0.0],
            a: vec![vec![1.0], vec![1.0]],
            b: vec![1.0, 0.0],
        };
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // minimize -z1 s.t. z1 - z2 = 0
        let p = LpProblem {
            objective: vec![-1.0, 0.0],
            a: vec![vec![1.0, -1.0]],
            b: vec![0.0],
        };
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn dimension_mismatch() {
        let p = LpProblem {
            objective: vec![1.0],
            a: vec![vec![1.0, 2.0]],
            b: vec![1.0],
        };
        assert!(solve_lp(&p).is_err());
    }

    #[test]
    fn redundant_rows_tolerated() {
        // duplicated constraint
        let p = LpProblem {
            objective: vec![1.0, 1.0],
            a: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            b: vec![1.0, 1.0],
        };
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn m_star_pr_box() {
        let r = min_l1(&Behavior::pr(0).unwrap()).unwrap();
        assert!((r.m_star - 2.0).abs() < 1e-9, "m* = {}", r.m_star);
    }

    #[test]
    fn m_star_deterministic_is_one() {
        let r = min_l1(&Behavior::deterministic(1, 1, 1, 1)).unwrap();
        assert!((r.m_star - 1.0).abs() < 1e-9);
    }

    #[test]
    fn m_star_isotropic_closed_form() {
        for gamma in [0.0f64, 0.25, 0.5, 0.75, 1.0] {
            let expect = 0.5 * (1.0 + 2.0 * gamma + (1.0 - 2.0 * gamma).abs());
            let r = min_l1(&Behavior::isotropic(gamma).unwrap()).unwrap();
            assert!(
                (r.m_star - expect).abs() < 1e-8,
                "gamma {gamma}: {} vs {expect}",
                r.m_star
            );
        }
    }

    #[test]
    fn optimal_jqpd_reproduces_box() {
        let b = Behavior::isotropic(0.83).unwrap();
        let r = min_l1(&b).unwrap();
        let back = r.jqpd.marginals().unwrap();
        for row in 0..4 {
            for col in 0..4 {
                assert!((back.rows()[row][col] - b.rows()[row][col]).abs() < 1e-9);
            }
        }
        assert!((r.jqpd.l1_norm() - r.m_star).abs() < 1e-9);
    }

    #[test]
    fn signaling_box_has_no_jqpd() {
        let p = [
            [1.0, 0.0, 0.0, 0.0],
            [0.25, 0.25, 0.25, 0.25],
            [0.25, 0.25, 0.25, 0.25],
            [0.25, 0.25, 0.25, 0.25],
        ];
        let b = Behavior::from_rows(p).unwrap();
        assert!(matches!(min_l1(&b), Err(Error::NoJqpdExists)));
    }

    #[test]
    fn repeated_solves_bitwise_identical() {
        let b = Behavior::isotropic(0.77).unwrap();
        let r1 = min_l1(&b).unwrap();
        let r2 = min_l1(&b).unwrap();
        assert_eq!(r1.m_star.to_bits(), r2.m_star.to_bits());
        assert_eq!(r1.jqpd, r2.jqpd);
    }
}
