//! Dense primal simplex for the small linear programs behind stairstep paths.

const PIVOT_TOL: f64 = 1e-12;
pub(crate) const COST_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Unbounded;

/// Equality-form tableau `A z = b, z >= 0` kept in canonical form with
/// respect to `basis`.
pub(crate) struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    /// `rows[i]` holds the coefficients followed by the right-hand side, which
    /// must be non-negative; `basis[i]` must be a unit column for row `i`.
    pub(crate) fn new(rows: Vec<Vec<f64>>, basis: Vec<usize>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len() - 1);
        debug_assert!(rows.iter().all(|r| r[cols] >= 0.0));
        Tableau { rows, basis, cols }
    }

    pub(crate) fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b];
            if cb != 0.0 {
                for (rj, aij) in r.iter_mut().zip(row) {
                    *rj -= cb * aij;
                }
            }
        }
        r
    }

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
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
                // clamp round-off in the right-hand side
                let last = row.len() - 1;
                if row[last] < 0.0 && row[last] > -PIVOT_TOL {
                    row[last] = 0.0;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimises `cost · z` over columns flagged in `allowed` (the others stay
    /// at zero), using Bland's rule so degenerate pivots cannot cycle.
    pub(crate) fn minimize(&mut self, cost: &[f64], allowed: &[bool]) -> Result<(), Unbounded> {
        loop {
            let r = self.reduced_costs(cost);
            let Some(enter) = (0..self.cols).find(|&j| allowed[j] && r[j] < -COST_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[enter];
                if a > PIVOT_TOL {
                    let ratio = row[self.cols] / a;
                    let better = match leave {
                        None => true,
                        Some((k, best)) => {
                            ratio < best - 1e-15 || (ratio <= best + 1e-15 && self.basis[i] < self.basis[k])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (row, _) = leave.ok_or(Unbounded)?;
            self.pivot(row, enter);
        }
    }

    pub(crate) fn solution(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.cols];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            z[b] = row[self.cols].max(0.0);
        }
        z
    }
}
