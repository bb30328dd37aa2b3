//! Built-in lattices.
//!
//! Bond offsets follow the lattice-model convention (site `b` lives in cell
//! `c + offset` relative to site `a` in cell `c`). With that convention a
//! bond `(a, b, s)` contributes `exp(i x.s) / R` to `L_ab(x)`, which is how
//! the offsets below were read off the explicit Bloch Laplacians each entry
//! carries as its reference.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Bond, LatticeSpec};
use crate::linalg::CMatrix;

type ReferenceFn = Box<dyn Fn(&[f64]) -> CMatrix + Send + Sync>;

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: LatticeSpec,
    reference: ReferenceFn,
}

impl CatalogEntry {
    /// Closed-form Bloch Laplacian `L(x)` written independently of `spec`.
    pub fn reference_laplacian(&self, x: &[f64]) -> CMatrix {
        (self.reference)(x)
    }

    /// Same entry with a different lattice description, keeping the
    /// reference matrix. Used to exercise the reference checks.
    pub fn with_spec(self, spec: LatticeSpec) -> Self {
        CatalogEntry { spec, ..self }
    }
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("description", &self.description)
            .field("spec", &self.spec)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogInfo {
    pub name: &'static str,
    pub dimension: usize,
    pub sites: usize,
    pub description: &'static str,
}

const NAMES: [(&str, usize, usize, &str); 12] = [
    ("chain2", 1, 2, "1D chain alternating resistors R1 and R2"),
    ("square", 2, 1, "square lattice"),
    ("triangular", 2, 1, "triangular lattice, 60 degree cell"),
    ("honeycomb", 2, 2, "honeycomb lattice, brick-wall cell"),
    ("kagome", 2, 3, "kagome lattice of corner-sharing triangles"),
    ("dice", 2, 3, "dice (rhombille) lattice, degrees 6 and 3"),
    ("decorated", 2, 3, "square lattice with a site on every bond midpoint"),
    ("centered-square", 2, 2, "square lattice with face centres joined to corners"),
    ("square-octagon", 2, 4, "tiling by squares and octagons"),
    ("snub-square", 2, 8, "snub square tiling by squares and triangles"),
    ("cubic", 3, 1, "simple cubic lattice"),
    ("bcc", 3, 2, "body-centred cubic: cube edges plus centre-corner bonds"),
];

/// Names, dimensions and site counts of all built-in lattices, in a fixed order.
pub fn list_catalog() -> Vec<CatalogInfo> {
    NAMES
        .iter()
        .map(|&(name, dimension, sites, description)| CatalogInfo {
            name,
            dimension,
            sites,
            description,
        })
        .collect()
}

fn e(theta: f64) -> Complex64 {
    Complex64::cis(theta)
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn matrix(rows: Vec<Vec<Complex64>>, scale: f64) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, |i, j| rows[i][j] * scale)
}

/// Builds a catalog lattice.
///
/// `resistances` may be empty (every bond `1`), a single uniform bond
/// resistance, or for `chain2` the pair `[R1, R2]`.
pub fn builtin(name: &str, resistances: &[f64]) -> Result<CatalogEntry> {
    let &(name, _, _, description) = NAMES
        .iter()
        .find(|(n, ..)| *n == name)
        .ok_or_else(|| Error::UnknownLattice(name.to_string()))?;
    let max_params = if name == "chain2" { 2 } else { 1 };
    if resistances.len() > max_params {
        return Err(Error::InvalidArgument(format!(
            "{name} takes at most {max_params} resistance parameter(s), got {}",
            resistances.len()
        )));
    }
    let r = resistances.first().copied().unwrap_or(1.0);
    let g = 1.0 / r;

    let (dimension, p, bonds, reference): (usize, usize, Vec<(usize, usize, Vec<i64>)>, ReferenceFn) =
        match name {
            "chain2" => {
                let r2 = resistances.get(1).copied().unwrap_or(r);
                let spec = LatticeSpec::with_numbered_sites(
                    1,
                    2,
                    vec![Bond::new(0, 1, [0], r), Bond::new(1, 0, [1], r2)],
                )?;
                let (g1, g2) = (1.0 / r, 1.0 / r2);
                let reference: ReferenceFn = Box::new(move |x| {
                    let diag = re(-g1 - g2);
                    matrix(
                        vec![
                            vec![diag, re(g1) + e(-x[0]) * g2],
                            vec![re(g1) + e(x[0]) * g2, diag],
                        ],
                        1.0,
                    )
                });
                return Ok(CatalogEntry {
                    name,
                    description,
                    spec,
                    reference,
                });
            }
            "square" => (
                2,
                1,
                vec![(0, 0, vec![1, 0]), (0, 0, vec![0, 1])],
                Box::new(move |x| {
                    matrix(vec![vec![re(-4.0 + 2.0 * x[0].cos() + 2.0 * x[1].cos())]], g)
                }),
            ),
            "triangular" => (
                2,
                1,
                vec![(0, 0, vec![1, 0]), (0, 0, vec![0, 1]), (0, 0, vec![1, -1])],
                Box::new(move |x| {
                    let s = x[0].cos() + x[1].cos() + (x[0] - x[1]).cos();
                    matrix(vec![vec![re(-6.0 + 2.0 * s)]], g)
                }),
            ),
            "honeycomb" => (
                2,
                2,
                vec![(0, 1, vec![0, 0]), (0, 1, vec![-1, 0]), (0, 1, vec![0, -1])],
                Box::new(move |x| {
                    let a = re(1.0) + e(x[0]) + e(x[1]);
                    matrix(vec![vec![re(-3.0), a.conj()], vec![a, re(-3.0)]], g)
                }),
            ),
            "kagome" => (
                2,
                3,
                vec![
                    (0, 1, vec![0, 0]),
                    (0, 1, vec![-1, 0]),
                    (0, 2, vec![0, 0]),
                    (0, 2, vec![0, -1]),
                    (1, 2, vec![0, 0]),
                    (1, 2, vec![1, -1]),
                ],
                Box::new(move |x| {
                    let one = re(1.0);
                    matrix(
                        vec![
                            vec![re(-4.0), one + e(-x[0]), one + e(-x[1])],
                            vec![one + e(x[0]), re(-4.0), one + e(x[0] - x[1])],
                            vec![one + e(x[1]), one + e(-(x[0] - x[1])), re(-4.0)],
                        ],
                        g,
                    )
                }),
            ),
            "dice" => (
                2,
                3,
                vec![
                    (0, 1, vec![0, 0]),
                    (0, 1, vec![-1, 0]),
                    (0, 1, vec![0, -1]),
                    (0, 2, vec![-1, 0]),
                    (0, 2, vec![0, -1]),
                    (0, 2, vec![-1, -1]),
                ],
                Box::new(move |x| {
                    let a = re(1.0) + e(x[0]) + e(x[1]);
                    let b = e(x[0]) + e(x[1]) + e(x[0] + x[1]);
                    let z = re(0.0);
                    matrix(
                        vec![
                            vec![re(-6.0), a.conj(), b.conj()],
                            vec![a, re(-3.0), z],
                            vec![b, z, re(-3.0)],
                        ],
                        g,
                    )
                }),
            ),
            "decorated" => (
                2,
                3,
                vec![
                    (0, 1, vec![0, 0]),
                    (0, 1, vec![-1, 0]),
                    (0, 2, vec![0, 0]),
                    (0, 2, vec![0, -1]),
                ],
                Box::new(move |x| {
                    let one = re(1.0);
                    let z = re(0.0);
                    matrix(
                        vec![
                            vec![re(-4.0), one + e(-x[0]), one + e(-x[1])],
                            vec![one + e(x[0]), re(-2.0), z],
                            vec![one + e(x[1]), z, re(-2.0)],
                        ],
                        g,
                    )
                }),
            ),
            "centered-square" => (
                2,
                2,
                vec![
                    (0, 0, vec![1, 0]),
                    (0, 0, vec![0, 1]),
                    (0, 1, vec![0, 0]),
                    (0, 1, vec![-1, 0]),
                    (0, 1, vec![0, -1]),
                    (0, 1, vec![-1, -1]),
                ],
                Box::new(move |x| {
                    let a = re(-8.0 + 2.0 * (x[0].cos() + x[1].cos()));
                    let b = (re(1.0) + e(x[0])) * (re(1.0) + e(x[1]));
                    matrix(vec![vec![a, b.conj()], vec![b, re(-4.0)]], g)
                }),
            ),
            "square-octagon" => (
                2,
                4,
                vec![
                    (0, 1, vec![0, 0]),
                    (0, 2, vec![-1, 0]),
                    (0, 3, vec![0, 0]),
                    (1, 2, vec![0, 0]),
                    (1, 3, vec![0, -1]),
                    (2, 3, vec![0, 0]),
                ],
                Box::new(move |x| {
                    let one = re(1.0);
                    matrix(
                        vec![
                            vec![re(-3.0), one, e(-x[0]), one],
                            vec![one, re(-3.0), one, e(-x[1])],
                            vec![e(x[0]), one, re(-3.0), one],
                            vec![one, e(x[1]), one, re(-3.0)],
                        ],
                        g,
                    )
                }),
            ),
            "snub-square" => (
                2,
                8,
                vec![
                    (0, 1, vec![-1, 0]),
                    (0, 2, vec![0, 0]),
                    (0, 3, vec![0, -1]),
                    (0, 4, vec![0, 0]),
                    (0, 6, vec![0, -1]),
                    (1, 2, vec![1, 0]),
                    (1, 3, vec![1, -1]),
                    (1, 4, vec![0, 0]),
                    (1, 6, vec![0, -1]),
                    (2, 3, vec![0, 0]),
                    (2, 5, vec![-1, 0]),
                    (2, 7, vec![0, 0]),
                    (3, 5, vec![-1, 0]),
                    (3, 7, vec![0, 0]),
                    (4, 5, vec![0, 0]),
                    (4, 6, vec![0, -1]),
                    (4, 7, vec![0, 0]),
                    (5, 6, vec![0, 0]),
                    (5, 7, vec![0, 0]),
                    (6, 7, vec![0, 0]),
                ],
                Box::new(move |x| {
                    let a = e(x[0]);
                    let b = e(x[1]);
                    let c = e(x[1] - x[0]);
                    let (ac, bc, cc) = (a.conj(), b.conj(), c.conj());
                    let o = re(1.0);
                    let z = re(0.0);
                    let f = re(-5.0);
                    matrix(
                        vec![
                            vec![f, ac, o, bc, o, z, bc, z],
                            vec![a, f, a, cc, o, z, bc, z],
                            vec![o, ac, f, o, z, ac, z, o],
                            vec![b, c, o, f, z, ac, z, o],
                            vec![o, o, z, z, f, o, bc, o],
                            vec![z, z, a, a, o, f, o, o],
                            vec![b, b, z, z, b, o, f, o],
                            vec![z, z, o, o, o, o, o, f],
                        ],
                        g,
                    )
                }),
            ),
            "cubic" => (
                3,
                1,
                vec![
                    (0, 0, vec![1, 0, 0]),
                    (0, 0, vec![0, 1, 0]),
                    (0, 0, vec![0, 0, 1]),
                ],
                Box::new(move |x| {
                    let s: f64 = x.iter().map(|v| v.cos()).sum();
                    matrix(vec![vec![re(-6.0 + 2.0 * s)]], g)
                }),
            ),
            "bcc" => {
                let mut bonds = vec![
                    (0, 0, vec![1, 0, 0]),
                    (0, 0, vec![0, 1, 0]),
                    (0, 0, vec![0, 0, 1]),
                ];
                for corner in 0..8i64 {
                    let s = vec![-(corner & 1), -((corner >> 1) & 1), -((corner >> 2) & 1)];
                    bonds.push((0, 1, s));
                }
                (
                    3,
                    2,
                    bonds,
                    Box::new(move |x: &[f64]| {
                        let a = 2.0 * x.iter().map(|v| v.cos()).sum::<f64>();
                        let b = x.iter().fold(re(1.0), |acc, &v| acc * (re(1.0) + e(v)));
                        matrix(vec![vec![re(a - 14.0), b.conj()], vec![b, re(-8.0)]], g)
                    }),
                )
            }
            _ => unreachable!("name checked against NAMES"),
        };

    let spec = LatticeSpec::with_numbered_sites(
        dimension,
        p,
        bonds
            .into_iter()
            .map(|(a, b, s)| Bond::new(a, b, s, r))
            .collect(),
    )?;
    Ok(CatalogEntry {
        name,
        description,
        spec,
        reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_listing() {
        let list = list_catalog();
        assert_eq!(list.len(), 12);
        let snub = list.iter().find(|c| c.name == "snub-square").unwrap();
        assert_eq!((snub.dimension, snub.sites), (2, 8));
        let dice = list.iter().find(|c| c.name == "dice").unwrap();
        assert_eq!((dice.dimension, dice.sites), (2, 3));
        for info in &list {
            let entry = builtin(info.name, &[]).unwrap();
            assert_eq!(entry.spec.dimension(), info.dimension, "{}", info.name);
            assert_eq!(entry.spec.num_sites(), info.sites, "{}", info.name);
        }
    }

    #[test]
    fn degrees() {
        let deg = |name: &str| {
            let spec = builtin(name, &[]).unwrap().spec;
            (0..spec.num_sites())
                .map(|s| spec.weighted_degree(s).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(deg("square-octagon"), vec![3.0; 4]);
        assert_eq!(deg("snub-square"), vec![5.0; 8]);
        assert_eq!(deg("kagome"), vec![4.0; 3]);
        assert_eq!(deg("dice"), vec![6.0, 3.0, 3.0]);
        assert_eq!(deg("bcc"), vec![14.0, 8.0]);
        assert_eq!(deg("centered-square"), vec![8.0, 4.0]);
    }

    #[test]
    fn chain_parameters() {
        let entry = builtin("chain2", &[2.0, 3.0]).unwrap();
        let bonds = entry.spec.bonds();
        assert_eq!(bonds.len(), 2);
        // Canonical orientation stores (2,1,+1) as (1,2,-1).
        assert_eq!(bonds[0], Bond::new(0, 1, [-1], 3.0));
        assert_eq!(bonds[1], Bond::new(0, 1, [0], 2.0));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(builtin("penrose", &[]), Err(Error::UnknownLattice(_))));
        assert!(builtin("square", &[1.0, 2.0]).is_err());
    }

    #[test]
    fn uniform_resistance_scales_reference() {
        let entry = builtin("kagome", &[2.0]).unwrap();
        let l = entry.reference_laplacian(&[0.3, -1.1]);
        assert!((l.get(0, 0).re + 2.0).abs() < 1e-15);
    }
}
