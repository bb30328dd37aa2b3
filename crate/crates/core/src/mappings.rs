//! Closed-form relations between lattices.
//!
//! Resistances on the kagome and dice networks are finite linear combinations
//! of triangular-lattice resistances `R^tri(m, n)`, and those on the
//! decorated square network combine square-lattice resistances
//! `R^sq(m, n)`. The reference resistances come from the spectral engine and
//! are memoized per offset. The 1D two-resistor chain has fully explicit
//! answers.
//!
//! Site indices are 0-based here.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::catalog;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, ResistanceQuery};
use crate::spectral::{self, QuadratureConfig, ResistanceResult};

/// Resistance between `(alpha, cell 0)` and `(beta, cell m)` on the chain
/// alternating `r1` (inside a cell) and `r2` (between cells).
pub fn chain_resistance(alpha: usize, beta: usize, m: i64, r1: f64, r2: f64) -> Result<f64> {
    let f = |k: i64| k.unsigned_abs() as f64;
    match (alpha, beta) {
        (0, 0) | (1, 1) => Ok((r1 + r2) * f(m)),
        (0, 1) => Ok(r1 * f(m + 1) + r2 * f(m)),
        (1, 0) => Ok(r1 * f(m - 1) + r2 * f(m)),
        _ => Err(Error::UnknownSite(format!("#{}", alpha.max(beta) + 1))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceLattice {
    Triangular,
    Square,
}

impl ReferenceLattice {
    pub fn catalog_name(self) -> &'static str {
        match self {
            ReferenceLattice::Triangular => "triangular",
            ReferenceLattice::Square => "square",
        }
    }

    /// Offsets equivalent to `(m, n)` under the point group of the lattice
    /// in its cell coordinates. For the triangular cell (neighbours `e1`,
    /// `e2`, `e1 - e2`) the group is generated by `(m, n) -> (n, m)`,
    /// `(m, n) -> (m + n, -n)` and `(m, n) -> (-m, -n)`.
    pub fn symmetry_images(self, m: i64, n: i64) -> Vec<(i64, i64)> {
        let generators: &[fn((i64, i64)) -> (i64, i64)] = match self {
            ReferenceLattice::Square => &[|(m, n)| (n, m), |(m, n)| (-m, n), |(m, n)| (-m, -n)],
            ReferenceLattice::Triangular => {
                &[|(m, n)| (n, m), |(m, n)| (m + n, -n), |(m, n)| (-m, -n)]
            }
        };
        let mut orbit = vec![(m, n)];
        let mut i = 0;
        while i < orbit.len() {
            let v = orbit[i];
            for g in generators {
                let w = g(v);
                if !orbit.contains(&w) {
                    orbit.push(w);
                }
            }
            i += 1;
        }
        orbit.sort();
        orbit
    }
}

/// Memoized reference resistances on the triangular or square lattice.
///
/// Lookups are keyed by the smallest symmetry image of the offset, so each
/// orbit is integrated once. Safe to share between threads.
#[derive(Debug)]
pub struct ReferenceResistances {
    lattice: ReferenceLattice,
    spec: LatticeSpec,
    bond_resistance: f64,
    cfg: QuadratureConfig,
    memo: RwLock<HashMap<(i64, i64), ResistanceResult>>,
}

impl ReferenceResistances {
    pub fn new(lattice: ReferenceLattice, bond_resistance: f64, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let spec = catalog::builtin(lattice.catalog_name(), &[bond_resistance])?.spec;
        Ok(ReferenceResistances {
            lattice,
            spec,
            bond_resistance,
            cfg,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn lattice(&self) -> ReferenceLattice {
        self.lattice
    }

    pub fn bond_resistance(&self) -> f64 {
        self.bond_resistance
    }

    fn key(&self, m: i64, n: i64) -> (i64, i64) {
        self.lattice.symmetry_images(m, n)[0]
    }

    /// Computes every missing offset of `offsets` in one shared grid pass.
    pub fn prefetch(&self, offsets: &[(i64, i64)]) -> Result<()> {
        let mut missing: Vec<(i64, i64)> = {
            let memo = self.memo.read().unwrap();
            offsets
                .iter()
                .map(|&(m, n)| self.key(m, n))
                .filter(|k| !memo.contains_key(k))
                .collect()
        };
        missing.sort();
        missing.dedup();
        if missing.is_empty() {
            return Ok(());
        }
        let queries: Vec<ResistanceQuery> = missing
            .iter()
            .map(|&(m, n)| ResistanceQuery::new(0, 0, [m, n]))
            .collect();
        let results = spectral::resistance_batch(&self.spec, &queries, &self.cfg)?;
        let mut memo = self.memo.write().unwrap();
        for (k, r) in missing.into_iter().zip(results) {
            memo.entry(k).or_insert(r);
        }
        Ok(())
    }

    pub fn get(&self, m: i64, n: i64) -> Result<ResistanceResult> {
        let key = self.key(m, n);
        if let Some(r) = self.memo.read().unwrap().get(&key) {
            return Ok(r.clone());
        }
        self.prefetch(&[key])?;
        Ok(self.memo.read().unwrap()[&key].clone())
    }
}

/// `R^tri(m, n)` for unit bonds.
pub fn triangular_resistance(m: i64, n: i64, cfg: &QuadratureConfig) -> Result<ResistanceResult> {
    let spec = catalog::builtin("triangular", &[])?.spec;
    spectral::resistance(&spec, &ResistanceQuery::new(0, 0, [m, n]), cfg)
}

/// `R^sq(m, n)` for unit bonds.
pub fn square_resistance(m: i64, n: i64, cfg: &QuadratureConfig) -> Result<ResistanceResult> {
    let spec = catalog::builtin("square", &[])?.spec;
    spectral::resistance(&spec, &ResistanceQuery::new(0, 0, [m, n]), cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MappedLattice {
    Kagome,
    Dice,
    Decorated,
}

impl MappedLattice {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "kagome" => Some(MappedLattice::Kagome),
            "dice" => Some(MappedLattice::Dice),
            "decorated" => Some(MappedLattice::Decorated),
            _ => None,
        }
    }

    pub fn catalog_name(self) -> &'static str {
        match self {
            MappedLattice::Kagome => "kagome",
            MappedLattice::Dice => "dice",
            MappedLattice::Decorated => "decorated",
        }
    }

    pub fn reference(self) -> ReferenceLattice {
        match self {
            MappedLattice::Kagome | MappedLattice::Dice => ReferenceLattice::Triangular,
            MappedLattice::Decorated => ReferenceLattice::Square,
        }
    }
}

/// A resistance assembled from reference-lattice resistances:
/// `value = constant * R + sum coefficient * R^ref(offset)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedResistance {
    pub lattice: MappedLattice,
    pub alpha: usize,
    pub beta: usize,
    pub m: i64,
    pub n: i64,
    pub value: f64,
    pub error_estimate: f64,
    pub constant: f64,
    pub terms: Vec<((i64, i64), f64)>,
}

/// `R_ab(m, n) = R_ba(-m, -n)`: the index rewrite used for pairs with `a > b`.
pub fn symmetry_complete(alpha: usize, beta: usize, m: i64, n: i64) -> (usize, usize, i64, i64) {
    (beta, alpha, -m, -n)
}

/// Constant term (in units of the bond resistance) and reference terms of
/// the closed form for `alpha <= beta`.
pub fn formula(
    lattice: MappedLattice,
    alpha: usize,
    beta: usize,
    m: i64,
    n: i64,
) -> Result<(f64, Vec<((i64, i64), f64)>)> {
    use MappedLattice::*;
    let at = |dm: i64, dn: i64, c: f64| ((m + dm, n + dn), c);
    let terms = match (lattice, alpha, beta) {
        (Kagome, 0, 0) => (1.0 / 9.0, vec![at(0, 0, 7.0 / 3.0), at(-1, 1, -1.0 / 6.0), at(1, -1, -1.0 / 6.0)]),
        (Kagome, 0, 1) => (
            1.0 / 9.0,
            vec![at(0, 0, 5.0 / 6.0), at(1, 0, 5.0 / 6.0), at(1, -1, 1.0 / 6.0), at(0, 1, 1.0 / 6.0)],
        ),
        (Kagome, 0, 2) => (
            1.0 / 9.0,
            vec![at(0, 0, 5.0 / 6.0), at(0, 1, 5.0 / 6.0), at(1, 0, 1.0 / 6.0), at(-1, 1, 1.0 / 6.0)],
        ),
        (Kagome, 1, 1) => (1.0 / 9.0, vec![at(0, 0, 7.0 / 3.0), at(0, -1, -1.0 / 6.0), at(0, 1, -1.0 / 6.0)]),
        (Kagome, 1, 2) => (
            1.0 / 9.0,
            vec![at(0, 0, 5.0 / 6.0), at(-1, 1, 5.0 / 6.0), at(-1, 0, 1.0 / 6.0), at(0, 1, 1.0 / 6.0)],
        ),
        (Kagome, 2, 2) => (1.0 / 9.0, vec![at(0, 0, 7.0 / 3.0), at(-1, 0, -1.0 / 6.0), at(1, 0, -1.0 / 6.0)]),

        (Dice, 0, 0) => (0.0, vec![at(0, 0, 1.5)]),
        (Dice, 0, 1) => (1.0 / 6.0, vec![at(0, 0, 0.5), at(1, 0, 0.5), at(0, 1, 0.5)]),
        (Dice, 0, 2) => (1.0 / 6.0, vec![at(1, 0, 0.5), at(0, 1, 0.5), at(1, 1, 0.5)]),
        (Dice, 1, 1) | (Dice, 2, 2) => {
            let c = if m == 0 && n == 0 { 0.0 } else { 1.0 };
            (c / 3.0, vec![at(0, 0, 1.5)])
        }
        (Dice, 1, 2) => (
            1.0 / 3.0,
            vec![
                at(0, 0, 1.0 / 3.0),
                at(1, 0, 1.0 / 3.0),
                at(0, 1, 1.0 / 3.0),
                at(-1, 1, 1.0 / 6.0),
                at(1, -1, 1.0 / 6.0),
                at(1, 1, 1.0 / 6.0),
            ],
        ),

        (Decorated, 0, 0) => (0.0, vec![at(0, 0, 2.0)]),
        (Decorated, 0, 1) => (0.25, vec![at(0, 0, 1.0), at(1, 0, 1.0)]),
        (Decorated, 0, 2) => (0.25, vec![at(0, 0, 1.0), at(0, 1, 1.0)]),
        (Decorated, 1, 1) => (0.5, vec![at(0, 0, 3.0), at(0, -1, -0.5), at(0, 1, -0.5)]),
        (Decorated, 1, 2) => (
            0.5,
            vec![at(0, 0, 0.5), at(-1, 0, 0.5), at(-1, 1, 0.5), at(0, 1, 0.5)],
        ),
        (Decorated, 2, 2) => (0.5, vec![at(0, 0, 3.0), at(-1, 0, -0.5), at(1, 0, -0.5)]),

        _ if alpha > beta => {
            return Err(Error::Mapping(format!(
                "formula is stated for alpha <= beta; rewrite ({alpha}, {beta}) with symmetry_complete"
            )))
        }
        _ => return Err(Error::UnknownSite(format!("#{}", alpha.max(beta) + 1))),
    };
    Ok(terms)
}

/// Evaluates the closed form for any site pair, completing `alpha > beta`
/// by symmetry.
pub fn mapped_resistance(
    lattice: MappedLattice,
    alpha: usize,
    beta: usize,
    m: i64,
    n: i64,
    reference: &ReferenceResistances,
) -> Result<MappedResistance> {
    if reference.lattice() != lattice.reference() {
        return Err(Error::Mapping(format!(
            "{} maps onto the {} lattice, not {}",
            lattice.catalog_name(),
            lattice.reference().catalog_name(),
            reference.lattice().catalog_name()
        )));
    }
    let (a, b, mm, nn) = if alpha > beta {
        symmetry_complete(alpha, beta, m, n)
    } else {
        (alpha, beta, m, n)
    };
    let (constant, terms) = formula(lattice, a, b, mm, nn)?;
    let offsets: Vec<(i64, i64)> = terms.iter().map(|t| t.0).collect();
    reference.prefetch(&offsets)?;
    let mut value = constant * reference.bond_resistance();
    let mut error_estimate = 0.0;
    for &((tm, tn), c) in &terms {
        let r = reference.get(tm, tn)?;
        value += c * r.value;
        error_estimate += c.abs() * r.error_estimate;
    }
    Ok(MappedResistance {
        lattice,
        alpha,
        beta,
        m,
        n,
        value,
        error_estimate,
        constant,
        terms,
    })
}

pub fn kagome_via_triangular(
    alpha: usize,
    beta: usize,
    m: i64,
    n: i64,
    reference: &ReferenceResistances,
) -> Result<MappedResistance> {
    mapped_resistance(MappedLattice::Kagome, alpha, beta, m, n, reference)
}

pub fn dice_via_triangular(
    alpha: usize,
    beta: usize,
    m: i64,
    n: i64,
    reference: &ReferenceResistances,
) -> Result<MappedResistance> {
    mapped_resistance(MappedLattice::Dice, alpha, beta, m, n, reference)
}

pub fn decorated_via_square(
    alpha: usize,
    beta: usize,
    m: i64,
    n: i64,
    reference: &ReferenceResistances,
) -> Result<MappedResistance> {
    mapped_resistance(MappedLattice::Decorated, alpha, beta, m, n, reference)
}
