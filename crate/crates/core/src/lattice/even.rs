use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::series::rat::int;
use crate::series::Rat;

/// A positive-definite even lattice given by its integral Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    name: String,
    gram: Vec<Vec<i64>>,
}

/// On-disk form `{"name": "...", "rank": r, "gram": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub name: String,
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
}

const E8_JSON: &str = include_str!("../../fixtures/lattices/E8.json");
const D16PLUS_JSON: &str = include_str!("../../fixtures/lattices/D16plus.json");
const LEECH_JSON: &str = include_str!("../../fixtures/lattices/Leech.json");
const A1_JSON: &str = include_str!("../../fixtures/lattices/A1.json");

impl EvenLattice {
    /// Validates symmetry, even diagonal and positive definiteness.
    pub fn new(name: impl Into<String>, gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Lattice("Gram matrix is not square".into()));
        }
        for i in 0..n {
            if gram[i][i] % 2 != 0 {
                return Err(Error::Lattice(format!("odd diagonal entry at {i}")));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Lattice(format!("Gram matrix not symmetric at ({i},{j})")));
                }
            }
        }
        let lat = EvenLattice { name: name.into(), gram };
        lat.check_positive_definite()?;
        Ok(lat)
    }

    fn check_positive_definite(&self) -> Result<()> {
        for k in 1..=self.rank() {
            let minor = Matrix::from_rows(
                (0..k).map(|i| (0..k).map(|j| int(self.gram[i][j])).collect()).collect(),
            );
            if minor.determinant() <= int(0) {
                return Err(Error::Lattice(format!(
                    "{}: leading principal minor of size {k} is not positive",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(j: &LatticeJson) -> Result<Self> {
        if j.gram.len() != j.rank {
            return Err(Error::Lattice(format!("rank {} but {} Gram rows", j.rank, j.gram.len())));
        }
        Self::new(j.name.clone(), j.gram.clone())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: LatticeJson = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson { name: self.name.clone(), rank: self.rank(), gram: self.gram.clone() }
    }

    /// Built-in lattices: `A1`, `E8`, `E8E8`, `D16plus`, `Leech`, `trivial`.
    pub fn fixture(name: &str) -> Result<Self> {
        match name {
            "A1" => Self::from_json_str(A1_JSON),
            "E8" => Self::from_json_str(E8_JSON),
            "D16plus" | "D16+" => Self::from_json_str(D16PLUS_JSON),
            "Leech" => Self::from_json_str(LEECH_JSON),
            "E8E8" | "E8^2" => {
                let e8 = Self::from_json_str(E8_JSON)?;
                Ok(e8.direct_sum(&e8).renamed("E8E8"))
            }
            "trivial" => Self::new("trivial", Vec::new()),
            _ => Err(Error::Lattice(format!("unknown lattice fixture {name:?}"))),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += xi * self.gram[i][j] * yj;
            }
        }
        acc
    }

    pub fn norm(&self, x: &[i64]) -> i64 {
        self.inner(x, x)
    }

    pub fn gram_times(&self, x: &[i64]) -> Vec<i64> {
        self.gram.iter().map(|row| row.iter().zip(x).map(|(g, v)| g * v).sum()).collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let mut gram = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            gram[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            gram[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        EvenLattice { name: format!("{}+{}", self.name, other.name), gram }
    }

    pub fn determinant(&self) -> Rat {
        Matrix::from_rows(self.gram.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .determinant()
    }

    /// Exact rational Gram–Schmidt data of the lattice basis.
    ///
    /// Returns `(mu, d)` with `Q(x) = Σ_i d_i (x_i + Σ_{j>i} mu[i][j] x_j)^2`,
    /// which is also the orthogonal basis `f_i` used for the Heisenberg modes:
    /// `f_i = e_i - Σ_{j<i} (⟨e_i, f_j⟩ / d_j) f_j` has squared length `d_i`.
    pub fn ldl(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let n = self.rank();
        // Orthogonalise from the last coordinate so that enumeration can fix x_{n-1} first.
        let mut mu = vec![vec![Rat::from_integer(0.into()); n]; n];
        let mut d = vec![Rat::from_integer(0.into()); n];
        let g: Vec<Vec<Rat>> = self.gram.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        // Standard LDL^T with L upper-unit in the coordinates of x.
        for i in 0..n {
            let mut s = g[i][i].clone();
            for k in 0..i {
                s -= &d[k] * &mu[k][i] * &mu[k][i];
            }
            d[i] = s;
            for j in i + 1..n {
                let mut t = g[i][j].clone();
                for k in 0..i {
                    t -= &d[k] * &mu[k][i] * &mu[k][j];
                }
                mu[i][j] = t / &d[i];
            }
            mu[i][i] = int(1);
        }
        (mu, d)
    }

    /// Coordinates (in the lattice basis) of the orthogonal vectors `f_c`, and their norms.
    ///
    /// `f_c = Σ_i coords[c][i] e_i` with `⟨f_a, f_b⟩ = d_a δ_ab`.
    pub fn orthogonal_basis(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let n = self.rank();
        let g: Vec<Vec<Rat>> = self.gram.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let ip = |a: &[Rat], b: &[Rat]| -> Rat {
            let mut acc = int(0);
            for i in 0..n {
                for j in 0..n {
                    acc += &a[i] * &g[i][j] * &b[j];
                }
            }
            acc
        };
        let mut fs: Vec<Vec<Rat>> = Vec::with_capacity(n);
        let mut ds = Vec::with_capacity(n);
        for i in 0..n {
            let mut f: Vec<Rat> = (0..n).map(|j| int((i == j) as i64)).collect();
            for (fj, dj) in fs.iter().zip(&ds) {
                let c = ip(&f, fj) / dj;
                for (x, y) in f.iter_mut().zip(fj) {
                    *x -= &c * y;
                }
            }
            ds.push(ip(&f, &f));
            fs.push(f);
        }
        (fs, ds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for name in ["A1", "E8", "E8E8", "D16plus", "Leech"] {
            let l = EvenLattice::fixture(name).unwrap();
            let det = l.determinant();
            if name == "A1" {
                assert_eq!(det, int(2));
            } else {
                assert_eq!(det, int(1), "{name} is unimodular");
            }
        }
        assert_eq!(EvenLattice::fixture("E8E8").unwrap().rank(), 16);
        assert_eq!(EvenLattice::fixture("trivial").unwrap().rank(), 0);
    }

    #[test]
    fn rejects_bad_grams() {
        assert!(EvenLattice::new("odd", vec![vec![1]]).is_err());
        assert!(EvenLattice::new("indef", vec![vec![2, 3], vec![3, 2]]).is_err());
        assert!(EvenLattice::new("asym", vec![vec![2, 1], vec![0, 2]]).is_err());
        assert!(EvenLattice::from_json_str("{\"name\":\"x\",\"rank\":2,\"gram\":[[2]]}").is_err());
    }

    #[test]
    fn orthogonal_basis_is_orthogonal() {
        let l = EvenLattice::fixture("E8").unwrap();
        let (fs, ds) = l.orthogonal_basis();
        let (_, d) = l.ldl();
        assert_eq!(ds, d);
        let g = l.gram();
        for a in 0..8 {
            for b in 0..8 {
                let mut acc = int(0);
                for i in 0..8 {
                    for j in 0..8 {
                        acc += &fs[a][i] * int(g[i][j]) * &fs[b][j];
                    }
                }
                assert_eq!(acc, if a == b { ds[a].clone() } else { int(0) });
            }
        }
    }
}
