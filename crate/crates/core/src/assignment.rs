//! Gated minimum-cost bipartite assignment.
//!
//! Used for data association (track ↔ detection matrices) and for the
//! metric-side matching of reported tracks to ground truth. Semantics: among
//! matchings that use only pairs with `cost <= gate`, pick one of maximum
//! cardinality, and among those one of minimum total cost. Entries that are
//! `NaN` or infinite are treated as gated out.

use alloc::vec;
use alloc::vec::Vec;

/// Dense row-major cost matrix.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(nrows: usize, ncols: usize, data: Vec<f64>) -> CostMatrix {
        assert_eq!(data.len(), nrows * ncols);
        CostMatrix { nrows, ncols, data }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in 0..nrows {
            for c in 0..ncols {
                data.push(f(r, c));
            }
        }
        CostMatrix { nrows, ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.ncols + c]
    }
}

/// Result of one assignment problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Matched `(row, col)` pairs, sorted by row.
    pub matches: Vec<(usize, usize)>,
    pub unmatched_rows: Vec<usize>,
    pub unmatched_cols: Vec<usize>,
    /// Sum of the matched pair costs.
    pub total_cost: f64,
}

impl Assignment {
    fn empty(nrows: usize, ncols: usize) -> Assignment {
        Assignment {
            matches: Vec::new(),
            unmatched_rows: (0..nrows).collect(),
            unmatched_cols: (0..ncols).collect(),
            total_cost: 0.0,
        }
    }

    /// Column matched to `row`, if any.
    pub fn col_of(&self, row: usize) -> Option<usize> {
        self.matches.iter().find(|&&(r, _)| r == row).map(|&(_, c)| c)
    }

    /// Row matched to `col`, if any.
    pub fn row_of(&self, col: usize) -> Option<usize> {
        self.matches.iter().find(|&&(_, c)| c == col).map(|&(r, _)| r)
    }
}

/// Solve the gated assignment problem.
///
/// A pair is feasible when its cost is finite and `<= gate`. The solver
/// maximizes the number of matched feasible pairs and breaks ties by total
/// cost; empty inputs simply leave everything unmatched.
pub fn hungarian_assign(cost: &CostMatrix, gate: f64) -> Assignment {
    let n = cost.nrows();
    let m = cost.ncols();
    if n == 0 || m == 0 {
        return Assignment::empty(n, m);
    }

    // Largest feasible entry, for scaling the dummy costs.
    let mut c_max = 0.0f64;
    let mut any_feasible = false;
    for r in 0..n {
        for c in 0..m {
            let v = cost.at(r, c);
            if v.is_finite() && v <= gate {
                any_feasible = true;
                c_max = c_max.max(v.abs());
            }
        }
    }
    if !any_feasible {
        return Assignment::empty(n, m);
    }

    // Square (n+m) x (n+m) construction: top-left carries the real costs,
    // each row/col owns a dummy slot priced so that feasible matches are
    // always preferred, and infeasible real pairs are priced out entirely.
    let s = n + m;
    let side = n.min(m) as f64;
    let dummy = side * c_max + 1.0;
    let forbidden = 2.0 * dummy * (s as f64) + 1.0;

    let mut a = vec![0.0f64; s * s];
    for r in 0..s {
        for c in 0..s {
            a[r * s + c] = if r < n && c < m {
                let v = cost.at(r, c);
                if v.is_finite() && v <= gate {
                    v
                } else {
                    forbidden
                }
            } else if r < n {
                // Row dummy: col index m + r rejects row r.
                if c == m + r {
                    dummy
                } else {
                    forbidden
                }
            } else if c < m {
                // Col dummy: row index n + c rejects col c.
                if r == n + c {
                    dummy
                } else {
                    forbidden
                }
            } else {
                0.0
            };
        }
    }

    let row_of_col = solve_square(&a, s);

    let mut matches = Vec::new();
    let mut row_used = vec![false; n];
    let mut col_used = vec![false; m];
    let mut total = 0.0;
    for c in 0..m {
        let r = row_of_col[c];
        if r < n {
            let v = cost.at(r, c);
            if v.is_finite() && v <= gate {
                matches.push((r, c));
                row_used[r] = true;
                col_used[c] = true;
                total += v;
            }
        }
    }
    matches.sort_unstable();

    Assignment {
        matches,
        unmatched_rows: (0..n).filter(|&r| !row_used[r]).collect(),
        unmatched_cols: (0..m).filter(|&c| !col_used[c]).collect(),
        total_cost: total,
    }
}

/// Classic O(n³) Hungarian algorithm with potentials on a square matrix.
/// Returns, for every column, the row assigned to it.
fn solve_square(a: &[f64], n: usize) -> Vec<usize> {
    // 1-based arrays; index 0 is the scratch column.
    let inf = f64::INFINITY;
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j] = row matched to col j
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    (1..=n).map(|j| p[j].wrapping_sub(1)).collect()
}
