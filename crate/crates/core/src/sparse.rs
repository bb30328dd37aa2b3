//! Sparse symmetric positive definite solves for finite networks: reverse
//! Cuthill-McKee ordering followed by an envelope (profile) Cholesky.

use std::collections::VecDeque;

/// Symmetric matrix stored as a diagonal plus per-row off-diagonal lists.
#[derive(Debug, Clone)]
pub(crate) struct SymmetricSparse {
    diag: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SymmetricSparse {
    pub(crate) fn new(n: usize) -> Self {
        SymmetricSparse {
            diag: vec![0.0; n],
            rows: vec![Vec::new(); n],
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.diag.len()
    }

    pub(crate) fn add_diagonal(&mut self, i: usize, v: f64) {
        self.diag[i] += v;
    }

    /// Adds `v` at `(i, j)` and `(j, i)`; `i != j`.
    pub(crate) fn add_symmetric(&mut self, i: usize, j: usize, v: f64) {
        debug_assert_ne!(i, j);
        self.rows[i].push((j, v));
        self.rows[j].push((i, v));
    }

    /// Sorts rows and merges duplicate entries.
    pub(crate) fn compress(&mut self) {
        for row in &mut self.rows {
            row.sort_by_key(|&(j, _)| j);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(j, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            *row = merged;
        }
    }

    /// Reverse Cuthill-McKee ordering; `order[new] = old`.
    pub(crate) fn rcm_order(&self) -> Vec<usize> {
        let n = self.dim();
        let degree: Vec<usize> = self.rows.iter().map(Vec::len).collect();
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut by_degree: Vec<usize> = (0..n).collect();
        by_degree.sort_by_key(|&i| (degree[i], i));
        for &seed in &by_degree {
            if visited[seed] {
                continue;
            }
            let root = self.pseudo_peripheral(seed);
            visited[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let mut next: Vec<usize> = self.rows[v]
                    .iter()
                    .map(|&(j, _)| j)
                    .filter(|&j| !visited[j])
                    .collect();
                next.sort_by_key(|&j| (degree[j], j));
                for j in next {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order.reverse();
        order
    }

    fn bfs_levels(&self, root: usize) -> (usize, Vec<usize>) {
        let n = self.dim();
        let mut level = vec![usize::MAX; n];
        level[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut last = vec![root];
        let mut depth = 0;
        while let Some(v) = queue.pop_front() {
            for &(j, _) in &self.rows[v] {
                if level[j] == usize::MAX {
                    level[j] = level[v] + 1;
                    if level[j] > depth {
                        depth = level[j];
                        last.clear();
                    }
                    if level[j] == depth {
                        last.push(j);
                    }
                    queue.push_back(j);
                }
            }
        }
        (depth, last)
    }

    fn pseudo_peripheral(&self, start: usize) -> usize {
        let mut root = start;
        let (mut depth, mut last) = self.bfs_levels(root);
        for _ in 0..8 {
            let candidate = *last
                .iter()
                .min_by_key(|&&j| (self.rows[j].len(), j))
                .unwrap_or(&root);
            let (d2, l2) = self.bfs_levels(candidate);
            if d2 <= depth {
                break;
            }
            root = candidate;
            depth = d2;
            last = l2;
        }
        root
    }
}

/// Lower-triangular Cholesky factor stored row by row over each row's
/// envelope, in a permuted ordering.
#[derive(Debug, Clone)]
pub(crate) struct EnvelopeCholesky {
    order: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors `a` (after [`SymmetricSparse::compress`]). Returns `None` when
    /// the matrix is not numerically positive definite.
    pub(crate) fn factor(a: &SymmetricSparse) -> Option<Self> {
        let n = a.dim();
        let order = a.rcm_order();
        let mut position = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }

        let mut first = vec![0usize; n];
        for new in 0..n {
            let old = order[new];
            first[new] = a.rows[old]
                .iter()
                .map(|&(j, _)| position[j])
                .filter(|&j| j < new)
                .min()
                .unwrap_or(new);
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for new in 0..n {
            let old = order[new];
            data[start[new] + (new - first[new])] = a.diag[old];
            for &(j, v) in &a.rows[old] {
                let pj = position[j];
                if pj < new {
                    data[start[new] + (pj - first[new])] += v;
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            let row_i = start[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let row_j = start[j];
                let mut s = data[row_i + (j - fi)];
                for k in lo..j {
                    s -= data[row_i + (k - fi)] * data[row_j + (k - fj)];
                }
                data[row_i + (j - fi)] = s / data[row_j + (j - fj)];
            }
            let mut d = data[row_i + (i - fi)];
            for k in fi..i {
                let v = data[row_i + (k - fi)];
                d -= v * v;
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            data[row_i + (i - fi)] = d.sqrt();
        }

        Some(EnvelopeCholesky {
            order,
            first,
            start,
            data,
        })
    }

    /// Solves `A x = b` (both in the original ordering).
    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.order.len();
        let mut y: Vec<f64> = self.order.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = self.start[i];
            let mut s = y[i];
            for k in fi..i {
                s -= self.data[row + (k - fi)] * y[k];
            }
            y[i] = s / self.data[row + (i - fi)];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = self.start[i];
            y[i] /= self.data[row + (i - fi)];
            let yi = y[i];
            for k in fi..i {
                y[k] -= self.data[row + (k - fi)] * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.order.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }

    #[cfg(test)]
    fn envelope_size(&self) -> usize {
        self.data.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Path graph Laplacian plus identity, scrambled labels.
    fn scrambled_path(n: usize) -> (SymmetricSparse, Vec<Vec<f64>>) {
        let label = |i: usize| (i * 7) % n;
        let mut a = SymmetricSparse::new(n);
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            a.add_diagonal(label(i), 1.0);
            dense[label(i)][label(i)] += 1.0;
        }
        for i in 0..n - 1 {
            let (p, q) = (label(i), label(i + 1));
            a.add_diagonal(p, 1.0);
            a.add_diagonal(q, 1.0);
            a.add_symmetric(p, q, -1.0);
            dense[p][p] += 1.0;
            dense[q][q] += 1.0;
            dense[p][q] -= 1.0;
            dense[q][p] -= 1.0;
        }
        a.compress();
        (a, dense)
    }

    #[test]
    fn rcm_finds_narrow_band() {
        let (a, _) = scrambled_path(50);
        let f = EnvelopeCholesky::factor(&a).unwrap();
        // A path reordered by RCM is tridiagonal: envelope 2n - 1.
        assert_eq!(f.envelope_size(), 99);
    }

    #[test]
    fn solve_matches_dense_residual() {
        let (a, dense) = scrambled_path(50);
        let f = EnvelopeCholesky::factor(&a).unwrap();
        let b: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = f.solve(&b);
        for i in 0..50 {
            let r: f64 = (0..50).map(|j| dense[i][j] * x[j]).sum::<f64>() - b[i];
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn singular_detected() {
        let mut a = SymmetricSparse::new(2);
        a.add_diagonal(0, 1.0);
        a.add_diagonal(1, 1.0);
        a.add_symmetric(0, 1, -1.0);
        a.compress();
        assert!(EnvelopeCholesky::factor(&a).is_none());
    }
}
