//! Primal network simplex on the bipartite transportation graph.
//!
//! Nodes `0..rows` are sources and `rows..rows + cols` are sinks. A basis is
//! a spanning tree of `rows + cols - 1` cells; node potentials satisfy
//! `u[i] + v[j] = cost[i][j]` on every tree cell and are the LP duals.
//! Pricing and ratio-test ties both follow Bland's smallest-index rule, so
//! degenerate pivots cannot cycle.

use std::collections::VecDeque;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Flows below this are snapped to zero after each pivot.
const FLOW_SNAP: f64 = 1e-15;

/// Relative reduced-cost threshold for an entering cell.
const PRICING: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub flow: Array2<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub iterations: usize,
}

struct Basis {
    rows: usize,
    cols: usize,
    flow: Array2<f64>,
    in_tree: Array2<bool>,
    /// `adj[node]` lists `(neighbor, row, col)` for tree cells at `node`.
    adj: Vec<Vec<(usize, usize, usize)>>,
}

impl Basis {
    fn add(&mut self, i: usize, j: usize) {
        self.in_tree[[i, j]] = true;
        let (r, c) = (i, self.rows + j);
        self.adj[r].push((c, i, j));
        self.adj[c].push((r, i, j));
    }

    fn remove(&mut self, i: usize, j: usize) {
        self.in_tree[[i, j]] = false;
        let (r, c) = (i, self.rows + j);
        self.adj[r].retain(|&(n, _, _)| n != c);
        self.adj[c].retain(|&(n, _, _)| n != r);
    }

    /// Potentials from a traversal rooted at source 0 with `u[0] = 0`.
    fn potentials(&self, cost: &Array2<f64>) -> (Vec<f64>, Vec<f64>) {
        let total = self.rows + self.cols;
        let mut pot = vec![f64::NAN; total];
        let mut seen = vec![false; total];
        let mut queue = VecDeque::from([0usize]);
        pot[0] = 0.0;
        seen[0] = true;
        while let Some(node) = queue.pop_front() {
            for &(next, i, j) in &self.adj[node] {
                if seen[next] {
                    continue;
                }
                // u[i] + v[j] = c[i][j]
                pot[next] = cost[[i, j]] - pot[node];
                seen[next] = true;
                queue.push_back(next);
            }
        }
        debug_assert!(seen.iter().all(|&s| s), "basis is not a spanning tree");
        let v = pot.split_off(self.rows);
        (pot, v)
    }

    /// Tree path from `from` to `to` as a list of cells.
    fn path(&self, from: usize, to: usize) -> Vec<(usize, usize)> {
        let total = self.rows + self.cols;
        let mut parent: Vec<Option<(usize, usize, usize)>> = vec![None; total];
        let mut seen = vec![false; total];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(node) = queue.pop_front() {
            if node == to {
                break;
            }
            for &(next, i, j) in &self.adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, i, j));
                    queue.push_back(next);
                }
            }
        }
        let mut cells = Vec::new();
        let mut node = to;
        while node != from {
            let (prev, i, j) = parent[node].expect("tree is connected");
            cells.push((i, j));
            node = prev;
        }
        cells.reverse();
        cells
    }
}

/// North-west corner start: exactly `rows + cols - 1` tree cells, some of
/// them possibly carrying zero flow.
fn northwest_corner(supply: &[f64], demand: &[f64]) -> Basis {
    let (rows, cols) = (supply.len(), demand.len());
    let mut basis = Basis {
        rows,
        cols,
        flow: Array2::zeros((rows, cols)),
        in_tree: Array2::from_elem((rows, cols), false),
        adj: vec![Vec::new(); rows + cols],
    };
    let mut s = supply.to_vec();
    let mut d = demand.to_vec();
    let (mut i, mut j) = (0, 0);
    loop {
        if i == rows - 1 && j == cols - 1 {
            // Absorb the tiny imbalance left by round-off in the weights.
            basis.flow[[i, j]] = s[i].max(d[j]).max(0.0);
            basis.add(i, j);
            break;
        }
        let x = s[i].min(d[j]).max(0.0);
        basis.flow[[i, j]] = x;
        basis.add(i, j);
        if (s[i] <= d[j] && i < rows - 1) || j == cols - 1 {
            d[j] -= x;
            s[i] = 0.0;
            i += 1;
        } else {
            s[i] -= x;
            d[j] = 0.0;
            j += 1;
        }
    }
    basis
}

/// Solves `min <cost, x>` over nonnegative `x` with row sums `supply` and
/// column sums `demand`. Both sides must be nonempty with equal totals.
pub(crate) fn solve(cost: &Array2<f64>, supply: &[f64], demand: &[f64]) -> Result<LpSolution> {
    let (rows, cols) = cost.dim();
    assert!(rows == supply.len() && cols == demand.len() && rows > 0 && cols > 0);

    let scale = 1.0 + cost.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let threshold = PRICING * scale;
    let max_pivots = 50 * rows * cols + 1000;

    let mut basis = northwest_corner(supply, demand);
    let mut iterations = 0;
    loop {
        let (u, v) = basis.potentials(cost);

        // Bland: first cell in row-major order with negative reduced cost.
        let entering = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !basis.in_tree[[i, j]] && cost[[i, j]] - u[i] - v[j] < -threshold);

        let Some((ei, ej)) = entering else {
            return Ok(LpSolution { flow: basis.flow, u, v, iterations });
        };
        if iterations >= max_pivots {
            return Err(Error::SolverStalled { iterations });
        }
        iterations += 1;

        // Cycle: entering cell (+), then the tree path from sink ej back to
        // source ei alternating (-), (+), ...
        let path = basis.path(rows + ej, ei);
        let minus: Vec<(usize, usize)> = path.iter().copied().step_by(2).collect();
        let plus: Vec<(usize, usize)> = path.iter().copied().skip(1).step_by(2).collect();

        let theta = minus.iter().map(|&(i, j)| basis.flow[[i, j]]).fold(f64::INFINITY, f64::min);
        let leaving = minus
            .iter()
            .copied()
            .filter(|&(i, j)| basis.flow[[i, j]] <= theta)
            .min_by_key(|&(i, j)| i * cols + j)
            .expect("cycle has a decreasing cell");

        basis.flow[[ei, ej]] = theta;
        for &(i, j) in &plus {
            basis.flow[[i, j]] += theta;
        }
        for &(i, j) in &minus {
            let f = &mut basis.flow[[i, j]];
            *f -= theta;
            if *f < FLOW_SNAP {
                *f = 0.0;
            }
        }
        basis.flow[[leaving.0, leaving.1]] = 0.0;
        basis.remove(leaving.0, leaving.1);
        basis.add(ei, ej);
    }
}
