//! Exact sparse rational linear systems.
//!
//! Incremental Gaussian elimination over `Rational` with a fixed pivot rule
//! (first nonzero entry of each row, rows in insertion order), so identical
//! inputs always produce identical results. Infeasibility is a status, not
//! an error, and every reported solution satisfies every row exactly.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::Rational;

type SparseRow = BTreeMap<usize, Rational>;

#[derive(Debug, Clone)]
pub struct LinearSystem {
    num_vars: usize,
    rows: Vec<(SparseRow, Rational)>,
    var_labels: Vec<String>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem { num_vars, rows: Vec::new(), var_labels: Vec::new() }
    }

    pub fn with_labels(var_labels: Vec<String>) -> Self {
        LinearSystem { num_vars: var_labels.len(), rows: Vec::new(), var_labels }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn var_labels(&self) -> &[String] {
        &self.var_labels
    }

    pub fn rows(&self) -> impl Iterator<Item = (&SparseRow, &Rational)> {
        self.rows.iter().map(|(c, r)| (c, r))
    }

    /// Appends the row `Σ coeffs[v]·x_v = rhs`. Zero coefficients are
    /// dropped; indices must be `< num_vars`.
    pub fn add_row(&mut self, coeffs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        let mut row = SparseRow::new();
        for (var, coeff) in coeffs {
            assert!(var < self.num_vars, "variable index {var} out of range");
            if coeff.is_zero() {
                continue;
            }
            let entry = row.entry(var).or_insert_with(Rational::zero);
            *entry += coeff;
            if entry.is_zero() {
                row.remove(&var);
            }
        }
        self.rows.push((row, rhs));
    }

    /// Dense row representation, for callers that need the raw matrix.
    pub fn dense_rows(&self) -> impl Iterator<Item = (Vec<Rational>, Rational)> + '_ {
        self.rows.iter().map(|(coeffs, rhs)| {
            let mut dense = vec![Rational::zero(); self.num_vars];
            for (&var, coeff) in coeffs {
                dense[var] = coeff.clone();
            }
            (dense, rhs.clone())
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Unique,
    Affine,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// A solution with all free variables set to zero; `None` iff infeasible.
    pub particular: Option<Vec<Rational>>,
    /// Basis of the homogeneous nullspace, one vector per free variable in
    /// ascending order, each normalized so its first nonzero coordinate is 1.
    pub nullspace: Vec<Vec<Rational>>,
}

struct Echelon {
    // pivot column -> reduced row (off-pivot entries only, pivot coeff 1)
    // and its rhs
    pivots: BTreeMap<usize, (SparseRow, Rational)>,
    feasible: bool,
}

/// Solves the system exactly. Deterministic for a fixed input.
pub fn solve(sys: &LinearSystem) -> SolveResult {
    let ech = reduce_all(sys);
    let rank = ech.pivots.len();
    let nullspace = nullspace_from(&ech, sys.num_vars);
    if !ech.feasible {
        return SolveResult { status: SolveStatus::Infeasible, particular: None, nullspace };
    }
    let mut particular = vec![Rational::zero(); sys.num_vars];
    for (&col, (_, rhs)) in &ech.pivots {
        particular[col] = rhs.clone();
    }
    let status = if rank == sys.num_vars { SolveStatus::Unique } else { SolveStatus::Affine };
    SolveResult { status, particular: Some(particular), nullspace }
}

/// Dimension of the homogeneous solution space: `num_vars - rank`.
pub fn nullspace_dim(sys: &LinearSystem) -> usize {
    sys.num_vars - rank(sys)
}

/// Row rank of the coefficient matrix.
pub fn rank(sys: &LinearSystem) -> usize {
    reduce_all(sys).pivots.len()
}

fn reduce_all(sys: &LinearSystem) -> Echelon {
    let mut pivots: BTreeMap<usize, (SparseRow, Rational)> = BTreeMap::new();
    let mut feasible = true;
    for (coeffs, rhs) in &sys.rows {
        let mut row = coeffs.clone();
        let mut rhs = rhs.clone();
        reduce_row(&pivots, &mut row, &mut rhs);
        if row.is_empty() {
            if !rhs.is_zero() {
                feasible = false;
            }
            continue;
        }
        let (&lead, _) = row.first_key_value().unwrap();
        let lead_coeff = row.remove(&lead).unwrap();
        for coeff in row.values_mut() {
            *coeff /= &lead_coeff;
        }
        rhs /= lead_coeff;
        pivots.insert(lead, (row, rhs));
    }
    back_substitute(&mut pivots);
    Echelon { pivots, feasible }
}

/// Reduces `row` by every pivot whose column it touches. Pivot rows store
/// their off-pivot entries only (the pivot coefficient is implicitly 1).
fn reduce_row(
    pivots: &BTreeMap<usize, (SparseRow, Rational)>,
    row: &mut SparseRow,
    rhs: &mut Rational,
) {
    loop {
        let hit = row.iter().find_map(|(var, coeff)| {
            pivots.contains_key(var).then(|| (*var, coeff.clone()))
        });
        let Some((col, factor)) = hit else { break };
        row.remove(&col);
        let (prow, prhs) = &pivots[&col];
        for (&var, pc) in prow {
            let entry = row.entry(var).or_insert_with(Rational::zero);
            *entry -= &factor * pc;
            if entry.is_zero() {
                row.remove(&var);
            }
        }
        *rhs -= factor * prhs;
    }
}

/// Brings the echelon form to reduced row echelon form: no pivot row keeps
/// an entry at another pivot column.
fn back_substitute(pivots: &mut BTreeMap<usize, (SparseRow, Rational)>) {
    let cols: Vec<usize> = pivots.keys().copied().collect();
    for &col in cols.iter().rev() {
        let (mut row, mut rhs) = pivots.remove(&col).unwrap();
        let inner: Vec<usize> =
            row.keys().copied().filter(|v| pivots.contains_key(v)).collect();
        for var in inner {
            let factor = row.remove(&var).unwrap();
            let (prow, prhs) = &pivots[&var];
            for (&v2, pc) in prow {
                let entry = row.entry(v2).or_insert_with(Rational::zero);
                *entry -= &factor * pc;
                if entry.is_zero() {
                    row.remove(&v2);
                }
            }
            rhs -= factor * prhs;
        }
        pivots.insert(col, (row, rhs));
    }
}

fn nullspace_from(ech: &Echelon, num_vars: usize) -> Vec<Vec<Rational>> {
    let mut basis = Vec::new();
    for free in (0..num_vars).filter(|v| !ech.pivots.contains_key(v)) {
        let mut v = vec![Rational::zero(); num_vars];
        v[free] = Rational::one();
        for (&col, (row, _)) in &ech.pivots {
            if let Some(c) = row.get(&free) {
                v[col] = -c.clone();
            }
        }
        let first = v.iter().find(|c| !c.is_zero()).unwrap().clone();
        if !first.is_one() {
            for c in &mut v {
                *c /= &first;
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn residual(sys: &LinearSystem, x: &[Rational], homogeneous: bool) -> bool {
        sys.rows().all(|(coeffs, rhs)| {
            let mut acc = Rational::zero();
            for (&var, c) in coeffs {
                acc += c * &x[var];
            }
            if homogeneous {
                acc.is_zero()
            } else {
                acc == *rhs
            }
        })
    }

    #[test]
    fn two_by_two_unique() {
        let mut sys = LinearSystem::new(2);
        sys.add_row([(0, rat(1)), (1, rat(1))], rat(1));
        sys.add_row([(0, rat(1)), (1, rat(-1))], rat(1));
        let res = solve(&sys);
        assert_eq!(res.status, SolveStatus::Unique);
        assert_eq!(res.particular, Some(vec![rat(1), rat(0)]));
        assert!(res.nullspace.is_empty());
    }

    #[test]
    fn witness_matching_subsystem() {
        // alpha_2 + beta_2 = 1, alpha_3 + beta_3 = 1, beta_3 = 0, beta_2 = 2
        // vars: alpha_2, alpha_3, beta_2, beta_3
        let mut sys = LinearSystem::new(4);
        sys.add_row([(0, rat(1)), (2, rat(1))], rat(1));
        sys.add_row([(1, rat(1)), (3, rat(1))], rat(1));
        sys.add_row([(3, rat(1))], rat(0));
        sys.add_row([(2, rat(1))], rat(2));
        let res = solve(&sys);
        assert_eq!(res.status, SolveStatus::Unique);
        assert_eq!(res.particular, Some(vec![rat(-1), rat(1), rat(2), rat(0)]));
    }

    #[test]
    fn inconsistent_row() {
        let mut sys = LinearSystem::new(1);
        sys.add_row([(0, rat(0))], rat(1));
        let res = solve(&sys);
        assert_eq!(res.status, SolveStatus::Infeasible);
        assert!(res.particular.is_none());
    }

    #[test]
    fn nullspace_dims() {
        let sys = LinearSystem::new(3);
        assert_eq!(nullspace_dim(&sys), 3);

        let mut sys = LinearSystem::new(2);
        sys.add_row([(0, rat(1)), (1, rat(-1))], rat(0));
        assert_eq!(nullspace_dim(&sys), 1);
        let res = solve(&sys);
        assert_eq!(res.nullspace, vec![vec![rat(1), rat(1)]]);
    }

    #[test]
    fn deterministic() {
        let mut sys = LinearSystem::new(4);
        sys.add_row([(0, rat(2)), (2, rat(4))], rat(6));
        sys.add_row([(1, rat(3)), (3, rat(1))], rat(0));
        sys.add_row([(0, rat(1)), (1, rat(1))], rat(1));
        assert_eq!(solve(&sys), solve(&sys));
    }

    fn arb_system() -> impl Strategy<Value = LinearSystem> {
        (1usize..6, proptest::collection::vec(
            (proptest::collection::vec((0usize..6, -5i64..=5), 0..5), -4i64..=4),
            0..8,
        ))
            .prop_map(|(nv, rows)| {
                let mut sys = LinearSystem::new(nv);
                for (coeffs, rhs) in rows {
                    let coeffs: Vec<(usize, Rational)> = coeffs
                        .into_iter()
                        .map(|(v, c)| (v % nv, rat(c)))
                        .collect();
                    sys.add_row(coeffs, rat(rhs));
                }
                sys
            })
    }

    proptest! {
        #[test]
        fn solutions_satisfy_rows_exactly(sys in arb_system()) {
            let res = solve(&sys);
            prop_assert_eq!(res.particular.is_none(), res.status == SolveStatus::Infeasible);
            if let Some(p) = &res.particular {
                prop_assert!(residual(&sys, p, false));
            }
            for v in &res.nullspace {
                prop_assert!(residual(&sys, v, true));
                let first = v.iter().find(|c| !c.is_zero()).unwrap();
                prop_assert!(first.is_one());
            }
            prop_assert_eq!(rank(&sys) + nullspace_dim(&sys), sys.num_vars());
            prop_assert_eq!(res.nullspace.len(), nullspace_dim(&sys));
            if res.status == SolveStatus::Unique {
                prop_assert!(res.nullspace.is_empty());
            }
        }
    }
}
