//! Dense dictionary simplex for `max c.x  s.t.  A x <= b, x >= 0` with
//! `b >= 0`, so the all-slack basis is feasible and no phase one is needed.
//! Bland's rule guards against cycling.

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let cols = c.len();
    let rows = b.len();
    if a.len() != rows || a.iter().any(|r| r.len() != cols) {
        return Err(Error::Domain("LP dimensions do not match".into()));
    }
    if b.iter().any(|&v| v < 0.0) {
        return Err(Error::Domain("LP right-hand side must be non-negative".into()));
    }
    // Variables 0..cols are structural, cols..cols+rows are slacks.
    // Row i reads x_basic[i] = rhs[i] - sum_j t[i][j] x_nonbasic[j].
    let mut t: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    let mut obj = c.to_vec();
    let mut value = 0.0;
    let mut basic: Vec<usize> = (cols..cols + rows).collect();
    let mut nonbasic: Vec<usize> = (0..cols).collect();

    for _ in 0..MAX_PIVOTS {
        let entering = (0..cols)
            .filter(|&j| obj[j] > EPS)
            .min_by_key(|&j| nonbasic[j]);
        let Some(e) = entering else {
            let mut x = vec![0.0; cols];
            for (i, &v) in basic.iter().enumerate() {
                if v < cols {
                    x[v] = rhs[i];
                }
            }
            return Ok(LpSolution { value, x });
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            if t[i][e] > EPS {
                let ratio = rhs[i] / t[i][e];
                let better = match leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < best - EPS || (ratio <= best + EPS && basic[i] < basic[l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            return Err(Error::Numeric("LP is unbounded".into()));
        };

        let piv = t[l][e];
        for j in 0..cols {
            if j != e {
                t[l][j] /= piv;
            }
        }
        t[l][e] = 1.0 / piv;
        rhs[l] /= piv;
        for i in 0..rows {
            if i == l {
                continue;
            }
            let f = t[i][e];
            if f == 0.0 {
                continue;
            }
            for j in 0..cols {
                if j != e {
                    t[i][j] -= f * t[l][j];
                }
            }
            t[i][e] = -f * t[l][e];
            rhs[i] = (rhs[i] - f * rhs[l]).max(0.0);
        }
        let f = obj[e];
        for j in 0..cols {
            if j != e {
                obj[j] -= f * t[l][j];
            }
        }
        obj[e] = -f * t[l][e];
        value += f * rhs[l];
        std::mem::swap(&mut basic[l], &mut nonbasic[e]);
    }
    Err(Error::Numeric(format!("simplex did not converge in {MAX_PIVOTS} pivots")))
}
