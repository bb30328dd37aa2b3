//! Bloch-space Laplacian and the Brillouin-zone integral for the two-point
//! resistance of the infinite lattice.
//!
//! With `x_i = k . a_i` the zone becomes the cube `[-pi, pi]^d` and
//!
//! ```text
//! R_ab(n) = mean over x of  u^H G(x) u,   u = e_a - e_b exp(-i n.x),
//! ```
//!
//! where `G(x) = -L(x)^{-1}`. Each node factors `H = -L(x) = C C^H` and
//! evaluates `|C^{-1} u|^2`, so `G` is never formed on the production path.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, ResistanceQuery};
use crate::linalg::{self, CMatrix};

/// Condition-number cap above which `L(x)` is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Tensor-product midpoint rule settings.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Nodes per axis; must be even so `x = 0` is never sampled.
    pub order: usize,
    /// Number of `M -> 2M` doublings allowed after the first pass.
    pub max_refinements: usize,
    /// Stop refining once `error_estimate <= target_rel_error * |value|`.
    pub target_rel_error: f64,
}

impl QuadratureConfig {
    pub fn for_dimension(d: usize) -> Self {
        let order = match d {
            1 => 4096,
            2 => 256,
            3 => 64,
            _ => 16,
        };
        QuadratureConfig {
            order,
            max_refinements: 3,
            target_rel_error: 1e-5,
        }
    }

    /// A single pass at `order` followed by one doubling for the error
    /// estimate.
    pub fn fixed(order: usize) -> Self {
        QuadratureConfig {
            order,
            max_refinements: 1,
            target_rel_error: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.order % 2 != 0 {
            return Err(Error::InvalidQuadrature(format!(
                "order must be a positive even integer, got {}",
                self.order
            )));
        }
        if !(self.target_rel_error > 0.0) {
            return Err(Error::InvalidQuadrature(format!(
                "target relative error must be positive, got {}",
                self.target_rel_error
            )));
        }
        Ok(())
    }
}

/// Outcome of a Brillouin-zone integration.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceResult {
    /// In the units of the bond resistances.
    pub value: f64,
    /// `|R_M - R_2M|` for the last two orders.
    pub error_estimate: f64,
    pub order_used: usize,
    /// Integrand evaluations over all passes.
    pub evaluations: u64,
    pub converged: bool,
    pub elapsed: Duration,
}

impl ResistanceResult {
    fn exact_zero() -> Self {
        ResistanceResult {
            value: 0.0,
            error_estimate: 0.0,
            order_used: 0,
            evaluations: 0,
            converged: true,
            elapsed: Duration::ZERO,
        }
    }

    /// Turns an unconverged result into [`Error::NoConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                value: self.value,
                error_estimate: self.error_estimate,
                order: self.order_used,
            })
        }
    }
}

/// Flattened bond list used to assemble `-L(x)` quickly.
#[derive(Debug, Clone)]
pub(crate) struct BlochOperator {
    p: usize,
    d: usize,
    degree: Vec<f64>,
    bonds: Vec<(usize, usize, f64, Vec<i64>)>,
}

impl BlochOperator {
    pub(crate) fn new(spec: &LatticeSpec) -> Self {
        let p = spec.num_sites();
        let degree = (0..p).map(|s| spec.weighted_degree(s).unwrap()).collect();
        let bonds = spec
            .bonds()
            .iter()
            .map(|b| (b.a, b.b, b.conductance(), b.offset.clone()))
            .collect();
        BlochOperator {
            p,
            d: spec.dimension(),
            degree,
            bonds,
        }
    }

    /// Writes `H = -L(x)` into `out` given `phase(s) = exp(i x.s)`.
    pub(crate) fn fill_negative(
        &self,
        mut phase: impl FnMut(&[i64]) -> Complex64,
        out: &mut [Complex64],
    ) {
        let p = self.p;
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (s, &deg) in self.degree.iter().enumerate() {
            out[s * p + s] = Complex64::new(deg, 0.0);
        }
        for (a, b, g, offset) in &self.bonds {
            let ph = phase(offset) * *g;
            if a == b {
                out[a * p + a] -= Complex64::new(2.0 * ph.re, 0.0);
            } else {
                out[a * p + b] -= ph;
                out[b * p + a] -= ph.conj();
            }
        }
    }

    fn fill_negative_at(&self, x: &[f64], out: &mut [Complex64]) {
        self.fill_negative(|s| Complex64::cis(dot(x, s)), out);
    }
}

fn dot(x: &[f64], s: &[i64]) -> f64 {
    x.iter().zip(s).map(|(xi, &si)| xi * si as f64).sum()
}

fn check_point(spec: &LatticeSpec, x: &[f64]) -> Result<()> {
    if x.len() != spec.dimension() {
        return Err(Error::DimensionMismatch {
            expected: spec.dimension(),
            found: x.len(),
        });
    }
    Ok(())
}

/// `L(x) = sum_r L(r) exp(-i x.r)`, in conductance units.
pub fn laplacian_at(spec: &LatticeSpec, x: &[f64]) -> Result<CMatrix> {
    check_point(spec, x)?;
    let op = BlochOperator::new(spec);
    let mut m = CMatrix::zeros(op.p);
    op.fill_negative_at(x, m.as_mut_slice());
    Ok(m.scale(-1.0))
}

fn factor_at(op: &BlochOperator, x: &[f64], buf: &mut [Complex64]) -> Result<()> {
    op.fill_negative_at(x, buf);
    linalg::cholesky_in_place(buf, op.p, MAX_CONDITION)
        .map(|_| ())
        .map_err(|e| Error::SingularPoint {
            x: x.to_vec(),
            condition: e.condition,
        })
}

/// Lattice Green's function `G(x) = -L(x)^{-1}`.
pub fn greens_at(spec: &LatticeSpec, x: &[f64]) -> Result<CMatrix> {
    check_point(spec, x)?;
    let op = BlochOperator::new(spec);
    let mut buf = vec![Complex64::new(0.0, 0.0); op.p * op.p];
    factor_at(&op, x, &mut buf)?;
    Ok(linalg::cholesky_inverse(&buf, op.p))
}

/// The query vector `u = e_from - e_to exp(-i n.x)`.
pub(crate) fn fill_query_vector(
    q: &ResistanceQuery,
    phase_to: Complex64,
    u: &mut [Complex64],
) {
    u.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    u[q.from] += Complex64::new(1.0, 0.0);
    u[q.to] -= phase_to;
}

/// `G_aa + G_bb - G_ab exp(-i n.x) - G_ba exp(i n.x)` at a single point.
pub fn resistance_integrand(spec: &LatticeSpec, q: &ResistanceQuery, x: &[f64]) -> Result<f64> {
    check_point(spec, x)?;
    q.validate(spec)?;
    if q.is_trivial() {
        return Ok(0.0);
    }
    let op = BlochOperator::new(spec);
    let p = op.p;
    let mut buf = vec![Complex64::new(0.0, 0.0); p * p];
    factor_at(&op, x, &mut buf)?;
    let mut u = vec![Complex64::new(0.0, 0.0); p];
    fill_query_vector(q, Complex64::cis(-dot(x, &q.offset)), &mut u);
    linalg::forward_substitute(&buf, p, &mut u);
    Ok(u.iter().map(|v| v.norm_sqr()).sum())
}

/// Per-axis tables of `exp(i x_j v)` for integer `v` in a fixed range.
pub(crate) struct PhaseTable {
    lo: Vec<i64>,
    width: Vec<usize>,
    tables: Vec<Vec<Complex64>>,
}

impl PhaseTable {
    pub(crate) fn new<'a>(axes: &[Vec<f64>], offsets: impl Iterator<Item = &'a [i64]>) -> Self {
        let d = axes.len();
        let mut lo = vec![0i64; d];
        let mut hi = vec![0i64; d];
        for s in offsets {
            for k in 0..d {
                lo[k] = lo[k].min(s[k]);
                hi[k] = hi[k].max(s[k]);
            }
        }
        let width: Vec<usize> = (0..d).map(|k| (hi[k] - lo[k] + 1) as usize).collect();
        let tables = (0..d)
            .map(|k| {
                axes[k]
                    .iter()
                    .flat_map(|&x| (lo[k]..=hi[k]).map(move |v| Complex64::cis(x * v as f64)))
                    .collect()
            })
            .collect();
        PhaseTable { lo, width, tables }
    }

    /// `exp(i x.s)` at the grid node with per-axis indices `idx`.
    #[inline]
    pub(crate) fn phase(&self, idx: &[usize], s: &[i64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for k in 0..idx.len() {
            let w = self.width[k];
            acc *= self.tables[k][idx[k] * w + (s[k] - self.lo[k]) as usize];
        }
        acc
    }
}

/// Midpoint nodes `-pi + (j + 1/2) 2pi/M`.
pub(crate) fn midpoint_axis(order: usize) -> Vec<f64> {
    let h = 2.0 * std::f64::consts::PI / order as f64;
    (0..order)
        .map(|j| -std::f64::consts::PI + (j as f64 + 0.5) * h)
        .collect()
}

/// Per-thread scratch for node evaluations.
pub(crate) struct Scratch {
    pub(crate) h: Vec<Complex64>,
    pub(crate) u: Vec<Complex64>,
    pub(crate) x: Vec<f64>,
}

/// Sums `eval` over the tensor grid spanned by `axes`, accumulating `width`
/// values per node.
///
/// Work is split by the first axis index; partial sums are combined in index
/// order so the result is independent of the thread count.
pub(crate) fn grid_sum<F>(axes: &[Vec<f64>], p: usize, width: usize, eval: F) -> Result<Vec<f64>>
where
    F: Fn(&[usize], &mut Scratch, &mut [f64]) -> Result<()> + Sync,
{
    let d = axes.len();
    let partials: Vec<Vec<f64>> = (0..axes[0].len())
        .into_par_iter()
        .map(|i0| {
            let mut scratch = Scratch {
                h: vec![Complex64::new(0.0, 0.0); p * p],
                u: vec![Complex64::new(0.0, 0.0); p],
                x: vec![0.0; d],
            };
            let mut acc = vec![0.0; width];
            let mut node = vec![0.0; width];
            let mut idx = vec![0usize; d];
            idx[0] = i0;
            loop {
                for k in 0..d {
                    scratch.x[k] = axes[k][idx[k]];
                }
                eval(&idx, &mut scratch, &mut node)?;
                for (a, v) in acc.iter_mut().zip(&node) {
                    *a += v;
                }
                // Odometer over axes 1..d.
                let mut k = d;
                loop {
                    if k == 1 {
                        return Ok(acc);
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < axes[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut total = vec![0.0; width];
    for part in partials {
        for (t, v) in total.iter_mut().zip(part) {
            *t += v;
        }
    }
    Ok(total)
}

fn node_count(order: usize, d: usize) -> u64 {
    (order as u64).pow(d as u32)
}

/// Midpoint-rule means of the integrands of all `queries` at one order.
fn midpoint_means(
    op: &BlochOperator,
    queries: &[ResistanceQuery],
    order: usize,
) -> Result<Vec<f64>> {
    let d = op.d;
    let p = op.p;
    let axes: Vec<Vec<f64>> = (0..d).map(|_| midpoint_axis(order)).collect();
    let table = PhaseTable::new(
        &axes,
        op.bonds
            .iter()
            .map(|b| b.3.as_slice())
            .chain(queries.iter().map(|q| q.offset.as_slice())),
    );
    let single = queries.len() == 1;
    let sums = grid_sum(&axes, p, queries.len(), |idx, sc, out| {
        op.fill_negative(|s| table.phase(idx, s), &mut sc.h);
        linalg::cholesky_in_place(&mut sc.h, p, MAX_CONDITION).map_err(|e| {
            Error::SingularPoint {
                x: sc.x.clone(),
                condition: e.condition,
            }
        })?;
        if single {
            let q = &queries[0];
            fill_query_vector(q, table.phase(idx, &q.offset).conj(), &mut sc.u);
            linalg::forward_substitute(&sc.h, p, &mut sc.u);
            out[0] = sc.u.iter().map(|v| v.norm_sqr()).sum();
        } else {
            let g = linalg::cholesky_inverse(&sc.h, p);
            for (o, q) in out.iter_mut().zip(queries) {
                let ph = table.phase(idx, &q.offset).conj();
                *o = g.get(q.from, q.from).re + g.get(q.to, q.to).re
                    - 2.0 * (g.get(q.from, q.to) * ph).re;
            }
        }
        Ok(())
    })?;
    let n = node_count(order, d) as f64;
    Ok(sums.into_iter().map(|s| s / n).collect())
}

fn validate_queries(spec: &LatticeSpec, queries: &[ResistanceQuery]) -> Result<()> {
    queries.iter().try_for_each(|q| q.validate(spec))
}

/// Infinite-lattice resistance for one query, refined until the target
/// relative error or the refinement cap is reached.
///
/// An unconverged result is still returned with `converged == false`.
pub fn resistance(
    spec: &LatticeSpec,
    q: &ResistanceQuery,
    cfg: &QuadratureConfig,
) -> Result<ResistanceResult> {
    Ok(resistance_batch(spec, std::slice::from_ref(q), cfg)?.remove(0))
}

/// Resistances for many queries on one lattice, sharing the grid.
///
/// With more than one query each node forms `G(x)` once; refinement
/// continues until every query meets the target.
pub fn resistance_batch(
    spec: &LatticeSpec,
    queries: &[ResistanceQuery],
    cfg: &QuadratureConfig,
) -> Result<Vec<ResistanceResult>> {
    cfg.validate()?;
    validate_queries(spec, queries)?;
    let start = Instant::now();
    let live: Vec<usize> = (0..queries.len())
        .filter(|&i| !queries[i].is_trivial())
        .collect();
    let mut results = vec![ResistanceResult::exact_zero(); queries.len()];
    if live.is_empty() {
        return Ok(results);
    }
    let subset: Vec<ResistanceQuery> = live.iter().map(|&i| queries[i].clone()).collect();
    let op = BlochOperator::new(spec);

    let mut order = cfg.order;
    let mut evaluations = node_count(order, op.d);
    let mut current = midpoint_means(&op, &subset, order)?;
    let mut errors = vec![f64::INFINITY; subset.len()];
    let within = |v: f64, e: f64| e <= cfg.target_rel_error * v.abs();
    for _ in 0..cfg.max_refinements {
        order *= 2;
        evaluations += node_count(order, op.d);
        let next = midpoint_means(&op, &subset, order)?;
        for ((e, a), b) in errors.iter_mut().zip(&current).zip(&next) {
            *e = (a - b).abs();
        }
        current = next;
        if current.iter().zip(&errors).all(|(&v, &e)| within(v, e)) {
            break;
        }
    }
    let elapsed = start.elapsed();
    for (k, &i) in live.iter().enumerate() {
        results[i] = ResistanceResult {
            value: current[k],
            error_estimate: errors[k],
            order_used: order,
            evaluations,
            converged: within(current[k], errors[k]),
            elapsed,
        };
    }
    Ok(results)
}

/// Resistance at each fixed order, without refinement.
pub fn convergence_study(
    spec: &LatticeSpec,
    q: &ResistanceQuery,
    orders: &[usize],
) -> Result<Vec<(usize, f64)>> {
    q.validate(spec)?;
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidQuadrature(
            "orders must be strictly ascending".into(),
        ));
    }
    let op = BlochOperator::new(spec);
    orders
        .iter()
        .map(|&m| {
            QuadratureConfig::fixed(m).validate()?;
            let v = if q.is_trivial() {
                0.0
            } else {
                midpoint_means(&op, std::slice::from_ref(q), m)?[0]
            };
            Ok((m, v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const X: [f64; 2] = [0.7, -1.9];

    #[test]
    fn kagome_entries() {
        let spec = catalog::builtin("kagome", &[]).unwrap().spec;
        let l = laplacian_at(&spec, &X).unwrap();
        assert!((l.get(0, 1) - (c(1.0, 0.0) + Complex64::cis(-X[0]))).norm() < 1e-14);
        for s in 0..3 {
            assert!((l.get(s, s) - c(-4.0, 0.0)).norm() < 1e-14);
        }
        assert!(l.hermitian_defect() < 1e-14);
    }

    #[test]
    fn dice_entries() {
        let spec = catalog::builtin("dice", &[]).unwrap().spec;
        let l = laplacian_at(&spec, &X).unwrap();
        let a = c(1.0, 0.0) + Complex64::cis(X[0]) + Complex64::cis(X[1]);
        let b = Complex64::cis(X[0]) + Complex64::cis(X[1]) + Complex64::cis(X[0] + X[1]);
        assert!((l.get(0, 1) - a.conj()).norm() < 1e-14);
        assert!((l.get(0, 2) - b.conj()).norm() < 1e-14);
        let diag: Vec<f64> = (0..3).map(|s| l.get(s, s).re).collect();
        assert_eq!(diag, vec![-6.0, -3.0, -3.0]);
    }

    #[test]
    fn zero_row_sums_at_origin() {
        for info in catalog::list_catalog() {
            let spec = catalog::builtin(info.name, &[]).unwrap().spec;
            let l = laplacian_at(&spec, &vec![0.0; info.dimension]).unwrap();
            for i in 0..info.sites {
                let row: Complex64 = (0..info.sites).map(|j| l.get(i, j)).sum();
                assert!(row.norm() < 1e-13, "{}", info.name);
                for j in 0..info.sites {
                    assert_eq!(l.get(i, j).im, 0.0);
                }
            }
        }
    }

    #[test]
    fn chain_greens_function() {
        let (r1, r2) = (2.0, 0.5);
        let spec = catalog::builtin("chain2", &[r1, r2]).unwrap().spec;
        let x = 1.1;
        let g = greens_at(&spec, &[x]).unwrap();
        let pre = 1.0 / (4.0 * (x / 2.0).sin().powi(2));
        assert!((g.get(0, 0).re - pre * (r1 + r2)).abs() < 1e-12);
        assert!((g.get(1, 1).re - pre * (r1 + r2)).abs() < 1e-12);
        let off = (c(r2, 0.0) + Complex64::cis(-x) * r1) * pre;
        assert!((g.get(0, 1) - off).norm() < 1e-12);
        assert!((g.get(1, 0) - off.conj()).norm() < 1e-12);
    }

    #[test]
    fn square_greens_function() {
        let spec = catalog::builtin("square", &[3.0]).unwrap().spec;
        let g = greens_at(&spec, &X).unwrap();
        let expected = 3.0 / (4.0 - 2.0 * X[0].cos() - 2.0 * X[1].cos());
        assert!((g.get(0, 0) - c(expected, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn singular_at_origin() {
        for name in ["square", "kagome", "bcc"] {
            let spec = catalog::builtin(name, &[]).unwrap().spec;
            let zero = vec![0.0; spec.dimension()];
            assert!(matches!(greens_at(&spec, &zero), Err(Error::SingularPoint { .. })));
        }
    }

    #[test]
    fn reference_integrands() {
        let (m, n) = (2i64, -1i64);
        let phase = (m as f64) * X[0] + (n as f64) * X[1];
        let sq = catalog::builtin("square", &[]).unwrap().spec;
        let v = resistance_integrand(&sq, &ResistanceQuery::new(0, 0, [m, n]), &X).unwrap();
        let f = (1.0 - phase.cos()) / (2.0 - X[0].cos() - X[1].cos());
        assert!((v - f).abs() < 1e-13);

        let tri = catalog::builtin("triangular", &[]).unwrap().spec;
        let v = resistance_integrand(&tri, &ResistanceQuery::new(0, 0, [m, n]), &X).unwrap();
        let f = (1.0 - phase.cos()) / (3.0 - X[0].cos() - X[1].cos() - (X[0] - X[1]).cos());
        assert!((v - f).abs() < 1e-13);

        let kag = catalog::builtin("kagome", &[]).unwrap().spec;
        assert_eq!(resistance_integrand(&kag, &ResistanceQuery::new(1, 1, [0, 0]), &X).unwrap(), 0.0);
    }

    #[test]
    fn trivial_query_is_exactly_zero() {
        let spec = catalog::builtin("snub-square", &[]).unwrap().spec;
        let r = resistance(&spec, &ResistanceQuery::new(4, 4, [0, 0]), &QuadratureConfig::for_dimension(2)).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_estimate, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn square_adjacent_study() {
        let spec = catalog::builtin("square", &[]).unwrap().spec;
        let q = ResistanceQuery::new(0, 0, [1, 0]);
        let study = convergence_study(&spec, &q, &[32, 64, 128]).unwrap();
        for (_, v) in study {
            assert!((v - 0.5).abs() < 1e-6, "{v}");
        }
        assert!(convergence_study(&spec, &q, &[64, 32]).is_err());
        assert!(convergence_study(&spec, &q, &[33]).is_err());
    }

    #[test]
    fn batch_matches_single() {
        let spec = catalog::builtin("square-octagon", &[]).unwrap().spec;
        let cfg = QuadratureConfig::fixed(64);
        let queries = vec![ResistanceQuery::new(0, 2, [0, 0]), ResistanceQuery::new(2, 0, [1, 0])];
        let batch = resistance_batch(&spec, &queries, &cfg).unwrap();
        for (q, b) in queries.iter().zip(&batch) {
            let single = resistance(&spec, q, &cfg).unwrap();
            assert!((single.value - b.value).abs() < 1e-13);
        }
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::fixed(31).validate().is_err());
        assert!(QuadratureConfig::fixed(0).validate().is_err());
        let mut cfg = QuadratureConfig::for_dimension(2);
        cfg.target_rel_error = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unconverged_result_flagged() {
        let spec = catalog::builtin("kagome", &[]).unwrap().spec;
        let cfg = QuadratureConfig {
            order: 8,
            max_refinements: 1,
            target_rel_error: 1e-12,
        };
        let r = resistance(&spec, &ResistanceQuery::new(0, 1, [0, 0]), &cfg).unwrap();
        assert!(!r.converged);
        assert!(matches!(r.require_converged(), Err(Error::NoConvergence { .. })));
    }
}
