//! Exact resistance on a finite `N_1 x ... x N_d` torus of unit cells.
//!
//! Two independent routes compute the same finite object:
//! the discrete sum over the `N` allowed Bloch vectors, and a direct
//! Kirchhoff solve of the wrapped network in real space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, ResistanceQuery};
use crate::linalg;
use crate::sparse::{EnvelopeCholesky, SymmetricSparse};
use crate::spectral::{self, BlochOperator, PhaseTable};

/// Number of cells along each lattice direction; every size even and >= 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusConfig {
    sizes: Vec<usize>,
}

impl TorusConfig {
    pub fn new(sizes: impl Into<Vec<usize>>) -> Result<Self> {
        let sizes = sizes.into();
        if sizes.is_empty() {
            return Err(Error::InvalidTorus("no sizes given".into()));
        }
        if let Some(&bad) = sizes.iter().find(|&&n| n < 2 || n % 2 != 0) {
            return Err(Error::InvalidTorus(format!(
                "sizes must be even and at least 2, got {bad}"
            )));
        }
        Ok(TorusConfig { sizes })
    }

    /// `n` cells along each of `d` directions.
    pub fn cubic(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![n; d])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_cells(&self) -> usize {
        self.sizes.iter().product()
    }

    fn check(&self, spec: &LatticeSpec) -> Result<()> {
        if self.sizes.len() != spec.dimension() {
            return Err(Error::DimensionMismatch {
                expected: spec.dimension(),
                found: self.sizes.len(),
            });
        }
        Ok(())
    }

    fn cell_index(&self, cell: &[i64]) -> usize {
        let mut idx = 0;
        for (k, &n) in self.sizes.iter().enumerate() {
            idx = idx * n + cell[k].rem_euclid(n as i64) as usize;
        }
        idx
    }

    fn cell_of(&self, mut idx: usize) -> Vec<i64> {
        let mut cell = vec![0i64; self.sizes.len()];
        for k in (0..self.sizes.len()).rev() {
            let n = self.sizes[k];
            cell[k] = (idx % n) as i64;
            idx /= n;
        }
        cell
    }
}

/// Torus resistance from the discrete Bloch sum.
///
/// At `x = 0` the singular `L(0)` is deflated: `(-L(0) + J/p) y = u` has the
/// pseudo-inverse solution because `u` has zero sum there.
pub fn torus_resistance_kspace(
    spec: &LatticeSpec,
    q: &ResistanceQuery,
    t: &TorusConfig,
) -> Result<f64> {
    t.check(spec)?;
    q.validate(spec)?;
    if q.is_trivial() {
        return Ok(0.0);
    }
    let op = BlochOperator::new(spec);
    let p = spec.num_sites();
    let axes: Vec<Vec<f64>> = t
        .sizes
        .iter()
        .map(|&n| {
            (0..n)
                .map(|m| 2.0 * std::f64::consts::PI * m as f64 / n as f64)
                .collect()
        })
        .collect();
    let table = PhaseTable::new(
        &axes,
        spec.bonds()
            .iter()
            .map(|b| b.offset.as_slice())
            .chain(std::iter::once(q.offset.as_slice())),
    );
    let deflate = Complex64::new(1.0 / p as f64, 0.0);
    let sum = spectral::grid_sum(&axes, p, 1, |idx, sc, out| {
        op.fill_negative(|s| table.phase(idx, s), &mut sc.h);
        let at_origin = idx.iter().all(|&i| i == 0);
        if at_origin {
            sc.h.iter_mut().for_each(|v| *v += deflate);
        }
        linalg::cholesky_in_place(&mut sc.h, p, spectral::MAX_CONDITION).map_err(|e| {
            if at_origin {
                Error::DisconnectedLattice("deflated L(0) is singular".into())
            } else {
                Error::SingularPoint {
                    x: sc.x.clone(),
                    condition: e.condition,
                }
            }
        })?;
        spectral::fill_query_vector(q, table.phase(idx, &q.offset).conj(), &mut sc.u);
        linalg::forward_substitute(&sc.h, p, &mut sc.u);
        out[0] = sc.u.iter().map(|v| v.norm_sqr()).sum();
        Ok(())
    })?;
    Ok(sum[0] / t.num_cells() as f64)
}

/// Torus resistance from a real-space Kirchhoff solve, grounding node 0.
pub fn torus_resistance_realspace(
    spec: &LatticeSpec,
    q: &ResistanceQuery,
    t: &TorusConfig,
) -> Result<f64> {
    torus_resistance_realspace_grounded(spec, q, t, 0)
}

/// As [`torus_resistance_realspace`], grounding node `ground`, where node
/// `cell * p + site` numbers cells in row-major order of their coordinates.
pub fn torus_resistance_realspace_grounded(
    spec: &LatticeSpec,
    q: &ResistanceQuery,
    t: &TorusConfig,
    ground: usize,
) -> Result<f64> {
    t.check(spec)?;
    q.validate(spec)?;
    let p = spec.num_sites();
    let nodes = t.num_cells() * p;
    if ground >= nodes {
        return Err(Error::InvalidTorus(format!(
            "ground node {ground} out of range for {nodes} nodes"
        )));
    }
    if q.is_trivial() {
        return Ok(0.0);
    }

    // Kirchhoff matrix -L with the ground node's row and column removed.
    let reduced = |node: usize| -> Option<usize> {
        match node.cmp(&ground) {
            std::cmp::Ordering::Less => Some(node),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(node - 1),
        }
    };
    let mut k = SymmetricSparse::new(nodes - 1);
    for cell in 0..t.num_cells() {
        let here = t.cell_of(cell);
        for bond in spec.bonds() {
            let there: Vec<i64> = here.iter().zip(&bond.offset).map(|(c, s)| c + s).collect();
            let i = cell * p + bond.a;
            let j = t.cell_index(&there) * p + bond.b;
            if i == j {
                continue;
            }
            let g = bond.conductance();
            match (reduced(i), reduced(j)) {
                (Some(ri), Some(rj)) => {
                    k.add_diagonal(ri, g);
                    k.add_diagonal(rj, g);
                    k.add_symmetric(ri, rj, -g);
                }
                (Some(r), None) | (None, Some(r)) => k.add_diagonal(r, g),
                (None, None) => unreachable!(),
            }
        }
    }
    k.compress();
    let factor = EnvelopeCholesky::factor(&k).ok_or_else(|| {
        Error::DisconnectedLattice("wrapped network is not connected".into())
    })?;

    let source = q.from;
    let sink = t.cell_index(&q.offset) * p + q.to;
    let mut current = vec![0.0; nodes - 1];
    if let Some(r) = reduced(source) {
        current[r] += 1.0;
    }
    if let Some(r) = reduced(sink) {
        current[r] -= 1.0;
    }
    let v = factor.solve(&current);
    let potential = |node: usize| reduced(node).map_or(0.0, |r| v[r]);
    Ok(potential(source) - potential(sink))
}

/// Bloch-sum torus resistances for increasing sizes.
pub fn convergence_to_infinite(
    spec: &LatticeSpec,
    q: &ResistanceQuery,
    sizes: &[TorusConfig],
) -> Result<Vec<(TorusConfig, f64)>> {
    if sizes
        .windows(2)
        .any(|w| w[0].num_cells() >= w[1].num_cells())
    {
        return Err(Error::InvalidTorus("sizes must be ascending".into()));
    }
    sizes
        .iter()
        .map(|t| Ok((t.clone(), torus_resistance_kspace(spec, q, t)?)))
        .collect()
}
