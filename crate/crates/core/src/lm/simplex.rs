//! Dense two-phase simplex over exact rationals, with Bland's rule.
//!
//! Solves `min c·z` subject to `A z ≤ b`, `z ≥ 0`. Sizes here are tiny, so
//! clarity wins over speed.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, z: Vec<Q> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry is minus the objective value.
    cost: Vec<Q>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[j].is_zero() {
                let f = row[j].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        if !self.cost[j].is_zero() {
            let f = self.cost[j].clone();
            for (x, y) in self.cost.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        self.basis[r] = j;
    }

    fn set_cost(&mut self, c: &[Q]) {
        self.cost = c.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if !c[b].is_zero() {
                for (x, y) in self.cost.iter_mut().zip(row) {
                    *x -= &c[b] * y;
                }
            }
        }
    }

    /// Runs to optimality over columns `< allowed`. `false` when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.cost.len() - 1;
        loop {
            let Some(j) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(Q, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[j].is_positive() {
                    let ratio = &row[rhs] / &row[j];
                    let better = match &best {
                        None => true,
                        Some((q, _, b)) => ratio < *q || (ratio == *q && self.basis[i] < *b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                Some((_, i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }
}

pub fn minimize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    let (m, n) = (a.len(), c.len());
    let negative: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let cols = n + m + negative.len();
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Q::zero(); cols + 1];
        let flip = b[i].is_negative();
        let sign = if flip { -Q::from_integer(1.into()) } else { Q::from_integer(1.into()) };
        for j in 0..n {
            row[j] = &a[i][j] * &sign;
        }
        row[n + i] = sign.clone();
        row[cols] = &b[i] * &sign;
        if flip {
            let art = n + m + negative.iter().position(|&k| k == i).unwrap();
            row[art] = Q::from_integer(1.into());
            basis.push(art);
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis,
        cost: Vec::new(),
    };
    if !negative.is_empty() {
        let mut phase1 = vec![Q::zero(); cols + 1];
        for x in &mut phase1[n + m..cols] {
            *x = Q::from_integer(1.into());
        }
        t.set_cost(&phase1);
        t.optimize(cols);
        if !t.cost[cols].is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out where possible
        for r in 0..m {
            if t.basis[r] >= n + m {
                if let Some(j) = (0..n + m).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, j);
                }
            }
        }
    }
    let mut phase2 = vec![Q::zero(); cols + 1];
    phase2[..n].clone_from_slice(c);
    t.set_cost(&phase2);
    if !t.optimize(n + m) {
        return LpOutcome::Unbounded;
    }
    let mut z = vec![Q::zero(); n];
    for (row, &bvar) in t.rows.iter().zip(&t.basis) {
        if bvar < n {
            z[bvar] = row[cols].clone();
        }
    }
    LpOutcome::Optimal {
        value: -t.cost[cols].clone(),
        z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(x: i64) -> Q {
        Q::from_integer(x.into())
    }

    /// Vertex enumeration in two variables: every optimum of a bounded
    /// feasible problem sits where two constraints (or axes) are tight.
    fn oracle(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Option<Q> {
        let mut planes: Vec<(Q, Q, Q)> = a.iter().zip(b).map(|(r, bi)| (r[0].clone(), r[1].clone(), bi.clone())).collect();
        planes.push((q(-1), q(0), q(0)));
        planes.push((q(0), q(-1), q(0)));
        let feasible = |x: &Q, y: &Q| {
            !x.is_negative() && !y.is_negative() && planes.iter().all(|(p, r, s)| p * x + r * y <= *s)
        };
        let mut best: Option<Q> = None;
        for i in 0..planes.len() {
            for j in i + 1..planes.len() {
                let (a1, b1, c1) = &planes[i];
                let (a2, b2, c2) = &planes[j];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    continue;
                }
                let x = (c1 * b2 - c2 * b1) / &det;
                let y = (a1 * c2 - a2 * c1) / &det;
                if feasible(&x, &y) {
                    let v = &c[0] * &x + &c[1] * &y;
                    if best.as_ref().is_none_or(|b| v < *b) {
                        best = Some(v);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let a = vec![vec![q(1), q(0)], vec![q(0), q(2)], vec![q(3), q(2)]];
        let out = minimize(&[q(-3), q(-5)], &a, &[q(4), q(12), q(18)]);
        assert_eq!(out, LpOutcome::Optimal { value: q(-36), z: vec![q(2), q(6)] });
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x ≥ 2 and x ≤ 1
        let a = vec![vec![q(-1)], vec![q(1)]];
        assert_eq!(minimize(&[q(1)], &a, &[q(-2), q(1)]), LpOutcome::Infeasible);
        assert_eq!(minimize(&[q(-1)], &[vec![q(-1)]], &[q(3)]), LpOutcome::Unbounded);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn agrees_with_vertex_enumeration(
            rows in proptest::collection::vec((-4i64..5, -4i64..5, -6i64..10), 1..5),
            c in (-3i64..4, -3i64..4),
        ) {
            // a box keeps every problem bounded
            let mut a: Vec<Vec<Q>> = rows.iter().map(|&(x, y, _)| vec![q(x), q(y)]).collect();
            let mut b: Vec<Q> = rows.iter().map(|&(_, _, s)| q(s)).collect();
            a.push(vec![q(1), q(0)]);
            b.push(q(7));
            a.push(vec![q(0), q(1)]);
            b.push(q(7));
            let c = [q(c.0), q(c.1)];
            match (minimize(&c, &a, &b), oracle(&c, &a, &b)) {
                (LpOutcome::Optimal { value, z }, Some(o)) => {
                    prop_assert_eq!(&value, &o);
                    prop_assert_eq!(&c[0] * &z[0] + &c[1] * &z[1], value);
                    for (row, bi) in a.iter().zip(&b) {
                        prop_assert!(&row[0] * &z[0] + &row[1] * &z[1] <= *bi);
                    }
                }
                (LpOutcome::Infeasible, None) => {}
                (got, want) => prop_assert!(false, "simplex {:?} vs oracle {:?}", got, want),
            }
        }
    }
}
