//! Periodic lattice data model.
//!
//! A lattice is a unit cell of `p` sites repeated over `Z^d`, plus a list of
//! bonds. A bond `(a, b, s, R)` is a resistor `R` joining site `a` of some
//! cell `c` to site `b` of cell `c + s`.
//!
//! Every [`LatticeSpec`] value is validated and in canonical form: parallel
//! bonds are merged, each bond has a fixed orientation, and the infinite
//! network is known to be connected.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A resistor between site `a` of cell `c` and site `b` of cell `c + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub offset: Vec<i64>,
    pub resistance: f64,
}

impl Bond {
    pub fn new(a: usize, b: usize, offset: impl Into<Vec<i64>>, resistance: f64) -> Self {
        Bond {
            a,
            b,
            offset: offset.into(),
            resistance,
        }
    }

    pub fn conductance(&self) -> f64 {
        1.0 / self.resistance
    }

    /// The same resistor seen from the other end.
    pub fn reversed(&self) -> Bond {
        Bond {
            a: self.b,
            b: self.a,
            offset: self.offset.iter().map(|v| -v).collect(),
            resistance: self.resistance,
        }
    }

    fn is_canonical_orientation(&self) -> bool {
        match self.a.cmp(&self.b) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            // Lexicographically positive offset.
            std::cmp::Ordering::Equal => self.offset.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0),
        }
    }
}

/// A node of the infinite network: a site inside a given cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeRef {
    pub site: usize,
    pub cell: Vec<i64>,
}

impl NodeRef {
    pub fn new(site: usize, cell: impl Into<Vec<i64>>) -> Self {
        NodeRef {
            site,
            cell: cell.into(),
        }
    }
}

/// Resistance query from `(from, cell 0)` to `(to, cell offset)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResistanceQuery {
    pub from: usize,
    pub to: usize,
    pub offset: Vec<i64>,
}

impl ResistanceQuery {
    pub fn new(from: usize, to: usize, offset: impl Into<Vec<i64>>) -> Self {
        ResistanceQuery {
            from,
            to,
            offset: offset.into(),
        }
    }

    /// Query between two arbitrary nodes, rebased so the source sits in cell 0.
    pub fn between(source: &NodeRef, sink: &NodeRef) -> Result<Self> {
        if source.cell.len() != sink.cell.len() {
            return Err(Error::DimensionMismatch {
                expected: source.cell.len(),
                found: sink.cell.len(),
            });
        }
        let offset = sink
            .cell
            .iter()
            .zip(&source.cell)
            .map(|(t, f)| t - f)
            .collect();
        Ok(ResistanceQuery {
            from: source.site,
            to: sink.site,
            offset,
        })
    }

    /// `R_ab(n) = R_ba(-n)`.
    pub fn swapped(&self) -> Self {
        ResistanceQuery {
            from: self.to,
            to: self.from,
            offset: self.offset.iter().map(|v| -v).collect(),
        }
    }

    /// True when source and sink are the same node.
    pub fn is_trivial(&self) -> bool {
        self.from == self.to && self.offset.iter().all(|&v| v == 0)
    }

    pub fn validate(&self, spec: &LatticeSpec) -> Result<()> {
        for site in [self.from, self.to] {
            if site >= spec.num_sites() {
                return Err(Error::UnknownSite(format!("#{}", site + 1)));
            }
        }
        if self.offset.len() != spec.dimension() {
            return Err(Error::DimensionMismatch {
                expected: spec.dimension(),
                found: self.offset.len(),
            });
        }
        Ok(())
    }
}

/// Validated, canonical description of a periodic resistor network.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    dimension: usize,
    sites: Vec<String>,
    bonds: Vec<Bond>,
}

impl LatticeSpec {
    /// Validates a raw description and returns its canonical form.
    ///
    /// Bonds are reoriented so that `a < b`, or `a == b` with a
    /// lexicographically positive offset; bonds sharing an orientation key are
    /// merged by adding conductances. The result does not depend on the
    /// input order of `bonds`.
    pub fn new(dimension: usize, sites: Vec<String>, bonds: Vec<Bond>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        if sites.is_empty() {
            return Err(Error::EmptyLattice);
        }
        for (i, name) in sites.iter().enumerate() {
            if sites[..i].contains(name) {
                return Err(Error::DuplicateSite(name.clone()));
            }
        }
        let p = sites.len();

        let mut oriented = Vec::with_capacity(bonds.len());
        for (idx, bond) in bonds.into_iter().enumerate() {
            if bond.a >= p || bond.b >= p {
                return Err(Error::UnknownSite(format!("#{}", bond.a.max(bond.b) + 1)));
            }
            if bond.offset.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: bond.offset.len(),
                });
            }
            if !(bond.resistance.is_finite() && bond.resistance > 0.0) {
                return Err(Error::NonPositiveResistance {
                    bond: idx,
                    resistance: bond.resistance,
                });
            }
            if bond.a == bond.b && bond.offset.iter().all(|&v| v == 0) {
                return Err(Error::SelfLoop {
                    bond: idx,
                    site: bond.a,
                });
            }
            oriented.push(if bond.is_canonical_orientation() {
                bond
            } else {
                bond.reversed()
            });
        }

        oriented.sort_by(|x, y| {
            (x.a, x.b, &x.offset)
                .cmp(&(y.a, y.b, &y.offset))
                .then(x.resistance.total_cmp(&y.resistance))
        });

        let mut merged: Vec<Bond> = Vec::with_capacity(oriented.len());
        let mut group: Vec<f64> = Vec::new();
        for bond in oriented {
            let same_key = merged
                .last()
                .is_some_and(|m| m.a == bond.a && m.b == bond.b && m.offset == bond.offset);
            if same_key {
                group.push(bond.resistance);
                let conductance: f64 = group.iter().map(|r| 1.0 / r).sum();
                merged.last_mut().unwrap().resistance = 1.0 / conductance;
            } else {
                group.clear();
                group.push(bond.resistance);
                merged.push(bond);
            }
        }

        let spec = LatticeSpec {
            dimension,
            sites,
            bonds: merged,
        };
        spec.check_connected()?;
        Ok(spec)
    }

    /// Convenience constructor with sites named `"1"`, `"2"`, ...
    pub fn with_numbered_sites(dimension: usize, p: usize, bonds: Vec<Bond>) -> Result<Self> {
        let sites = (1..=p).map(|i| i.to_string()).collect();
        Self::new(dimension, sites, bonds)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[String] {
        &self.sites
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn site_index(&self, name: &str) -> Option<usize> {
        self.sites.iter().position(|s| s == name)
    }

    /// Sum of conductances incident to `site`; a bond from a site to its own
    /// image in another cell counts twice.
    pub fn weighted_degree(&self, site: usize) -> Result<f64> {
        if site >= self.num_sites() {
            return Err(Error::UnknownSite(format!("#{}", site + 1)));
        }
        Ok(self
            .bonds
            .iter()
            .map(|b| {
                let g = b.conductance();
                (if b.a == site { g } else { 0.0 }) + (if b.b == site { g } else { 0.0 })
            })
            .sum())
    }

    /// Real-space Laplacian blocks.
    ///
    /// `L_ab(r)` is the conductance joining site `a` of cell `c` to site `b`
    /// of cell `c - r`, so that `sum_r L(r) V(c - r) = -I(c)` and
    /// `L(k) = sum_r L(r) exp(-i k.r)`. The diagonal block at `r = 0`
    /// carries minus the weighted degrees.
    pub fn real_space_stencil(&self) -> Stencil {
        let p = self.num_sites();
        let d = self.dimension;
        let mut blocks: BTreeMap<Vec<i64>, Vec<f64>> = BTreeMap::new();
        let mut add = |r: Vec<i64>, a: usize, b: usize, g: f64| {
            blocks.entry(r).or_insert_with(|| vec![0.0; p * p])[a * p + b] += g;
        };
        for bond in &self.bonds {
            let g = bond.conductance();
            let neg: Vec<i64> = bond.offset.iter().map(|v| -v).collect();
            add(neg, bond.a, bond.b, g);
            add(bond.offset.clone(), bond.b, bond.a, g);
            add(vec![0; d], bond.a, bond.a, -g);
            add(vec![0; d], bond.b, bond.b, -g);
        }
        blocks.entry(vec![0; d]).or_insert_with(|| vec![0.0; p * p]);
        Stencil { p, blocks }
    }

    /// Multiplies every bond resistance by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                resistance: b.resistance * factor,
                ..b.clone()
            })
            .collect();
        Self::new(self.dimension, self.sites.clone(), bonds)
    }

    /// Renumbers sites: old site `i` becomes new site `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let p = self.num_sites();
        if perm.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: perm.len(),
            });
        }
        let mut sites = vec![String::new(); p];
        for (old, &new) in perm.iter().enumerate() {
            if new >= p {
                return Err(Error::UnknownSite(format!("#{}", new + 1)));
            }
            sites[new] = self.sites[old].clone();
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                a: perm[b.a],
                b: perm[b.b],
                ..b.clone()
            })
            .collect();
        Self::new(self.dimension, sites, bonds)
    }

    /// Moves site `s` from its cell `c` to cell `c + shifts[s]` for every cell.
    ///
    /// The physical network is unchanged; a node `(s, c)` of the original
    /// description is the node `(s, c - shifts[s])` of the result.
    pub fn rebased(&self, shifts: &[Vec<i64>]) -> Result<Self> {
        if shifts.len() != self.num_sites() {
            return Err(Error::DimensionMismatch {
                expected: self.num_sites(),
                found: shifts.len(),
            });
        }
        if let Some(bad) = shifts.iter().find(|s| s.len() != self.dimension) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: bad.len(),
            });
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                offset: b
                    .offset
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v + shifts[b.a][k] - shifts[b.b][k])
                    .collect(),
                ..b.clone()
            })
            .collect();
        Self::new(self.dimension, self.sites.clone(), bonds)
    }

    fn check_connected(&self) -> Result<()> {
        let p = self.num_sites();
        let d = self.dimension;

        // Spanning tree of the quotient graph, tracking the cell each site is
        // placed in so tree bonds have zero net offset.
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p];
        for (i, b) in self.bonds.iter().enumerate() {
            adjacency[b.a].push((i, b.b));
            if b.a != b.b {
                adjacency[b.b].push((i, b.a));
            }
        }
        let mut placement: Vec<Option<Vec<i64>>> = vec![None; p];
        let mut tree_bond = vec![false; self.bonds.len()];
        placement[0] = Some(vec![0; d]);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(site) = queue.pop_front() {
            let here = placement[site].clone().unwrap();
            for &(bi, other) in &adjacency[site] {
                if placement[other].is_some() {
                    continue;
                }
                let bond = &self.bonds[bi];
                let there: Vec<i64> = if bond.a == site {
                    here.iter().zip(&bond.offset).map(|(h, s)| h + s).collect()
                } else {
                    here.iter().zip(&bond.offset).map(|(h, s)| h - s).collect()
                };
                placement[other] = Some(there);
                tree_bond[bi] = true;
                queue.push_back(other);
            }
        }
        if let Some(lost) = placement.iter().position(Option::is_none) {
            return Err(Error::DisconnectedLattice(format!(
                "site `{}` is not reachable from site `{}`",
                self.sites[lost], self.sites[0]
            )));
        }

        let cycles: Vec<Vec<i64>> = self
            .bonds
            .iter()
            .zip(&tree_bond)
            .filter(|(_, &t)| !t)
            .map(|(b, _)| {
                let pa = placement[b.a].as_ref().unwrap();
                let pb = placement[b.b].as_ref().unwrap();
                (0..d).map(|k| pa[k] + b.offset[k] - pb[k]).collect()
            })
            .collect();

        let index = lattice_index(&cycles, d);
        if index != Some(1) {
            let detail = match index {
                None => "bond offsets do not span every lattice direction".to_string(),
                Some(k) => format!("network splits into {k} disjoint copies"),
            };
            return Err(Error::DisconnectedLattice(detail));
        }
        Ok(())
    }
}

/// Index of the sublattice of `Z^d` generated by `vectors`, or `None` when
/// the vectors are not of full rank.
fn lattice_index(vectors: &[Vec<i64>], d: usize) -> Option<u128> {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let mut index: u128 = 1;
    let mut top = 0;
    for col in 0..d {
        // Euclid on the column until a single nonzero entry remains.
        loop {
            let pivot = (top..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].abs());
            let Some(pivot) = pivot else { return None };
            rows.swap(top, pivot);
            let mut done = true;
            for r in top + 1..rows.len() {
                let q = rows[r][col] / rows[top][col];
                if q != 0 {
                    for c in col..d {
                        rows[r][c] -= q * rows[top][c];
                    }
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        index *= rows[top][col].unsigned_abs();
        top += 1;
    }
    Some(index)
}

/// Sparse collection of real `p x p` Laplacian blocks keyed by cell offset.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    p: usize,
    blocks: BTreeMap<Vec<i64>, Vec<f64>>,
}

impl Stencil {
    pub fn num_sites(&self) -> usize {
        self.p
    }

    /// Row-major block at offset `r`, if any bond lands there.
    pub fn block(&self, r: &[i64]) -> Option<&[f64]> {
        self.blocks.get(r).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], &[f64])> {
        self.blocks.iter().map(|(k, v)| (k.as_slice(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}
