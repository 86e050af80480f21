//! The spherical building of `GL₃(F_q)`: lines and planes of `F_q³` joined
//! by incidence, its integral homology, and the double cone over it.

use std::fmt::Write as _;

use thiserror::Error;

use crate::exactlin::{homology_of_complex, Coefficients, Homology, IntMatrix, LinAlgError};
use crate::finitefield::{Element, FieldSpec, FieldTower, GaloisField};
use crate::prime_power;

/// Largest `q` for which the building is constructed.
pub const MAX_BUILDING_Q: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error("q = {0} is not a supported field size (prime power ≤ 16)")]
    UnsupportedFieldSize(u64),
    #[error("building homology inconsistent: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Clone, Debug)]
pub struct FlagComplex {
    pub q: u64,
    /// Normalized spanning vectors.
    pub lines: Vec<[Element; 3]>,
    /// Normalized covectors; the plane is the kernel.
    pub planes: Vec<[Element; 3]>,
    /// `(line index, plane index)` with the line inside the plane.
    pub edges: Vec<(usize, usize)>,
}

fn normalized_vectors(k: &GaloisField) -> Vec<[Element; 3]> {
    let mut out = Vec::new();
    for a in k.elements() {
        for b in k.elements() {
            for c in k.elements() {
                let v = [a, b, c];
                if v.iter().find(|x| !x.is_zero()).is_some_and(|x| *x == k.one()) {
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    out
}

pub fn build_building(q: u64) -> Result<FlagComplex, BuildingError> {
    let (p, e) = prime_power(q)
        .filter(|_| q <= MAX_BUILDING_Q)
        .ok_or(BuildingError::UnsupportedFieldSize(q))?;
    let spec = FieldSpec::new(p as u32, e).map_err(|_| BuildingError::UnsupportedFieldSize(q))?;
    let tower = FieldTower::new(spec).map_err(|_| BuildingError::UnsupportedFieldSize(q))?;
    let k = tower.base();
    let lines = normalized_vectors(k);
    let planes = lines.clone();
    let mut edges = Vec::new();
    for (i, v) in lines.iter().enumerate() {
        for (j, w) in planes.iter().enumerate() {
            let dot = (0..3).fold(k.zero(), |acc, t| k.add(acc, k.mul(v[t], w[t])));
            if dot.is_zero() {
                edges.push((i, j));
            }
        }
    }
    Ok(FlagComplex {
        q,
        lines,
        planes,
        edges,
    })
}

impl FlagComplex {
    pub fn vertex_count(&self) -> usize {
        self.lines.len() + self.planes.len()
    }

    /// Global vertex indices: lines first, then planes.
    pub fn edge_endpoints(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.lines.len();
        self.edges.iter().map(move |&(l, p)| (l, n + p))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for (u, v) in self.edge_endpoints() {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// `∂(u, v) = v − u`.
    fn edge_boundary(&self) -> IntMatrix {
        IntMatrix::from_triplets(
            self.vertex_count(),
            self.edges.len(),
            self.edge_endpoints()
                .enumerate()
                .flat_map(|(j, (u, v))| [(u, j, -1i64), (v, j, 1i64)]),
        )
    }

    /// Reduced integral homology `H̃_{-1}, H̃_0, H̃_1` via the augmented
    /// complex.
    pub fn reduced_homology(&self) -> Result<Homology, BuildingError> {
        let aug = IntMatrix::from_triplets(1, self.vertex_count(), (0..self.vertex_count()).map(|i| (0, i, 1i64)));
        Ok(homology_of_complex(&[aug, self.edge_boundary()], Coefficients::Integers)?)
    }

    /// Cone over the graph with `cone_points` apexes: vertices, then the
    /// original edges followed by cone edges `(u, c)`, then triangles
    /// `(u, v, c)` with `∂ = (v,c) − (u,c) + (u,v)`.
    pub fn cone_boundaries(&self, cone_points: usize) -> [IntMatrix; 2] {
        let nv = self.vertex_count();
        let ne = self.edges.len();
        let cone_edge = |u: usize, c: usize| ne + c * nv + u;
        let mut d1 = Vec::new();
        for (j, (u, v)) in self.edge_endpoints().enumerate() {
            d1.push((u, j, -1i64));
            d1.push((v, j, 1));
        }
        for c in 0..cone_points {
            for u in 0..nv {
                d1.push((u, cone_edge(u, c), -1));
                d1.push((nv + c, cone_edge(u, c), 1));
            }
        }
        let mut d2 = Vec::new();
        for c in 0..cone_points {
            for (j, (u, v)) in self.edge_endpoints().enumerate() {
                let t = c * ne + j;
                d2.push((cone_edge(v, c), t, 1i64));
                d2.push((cone_edge(u, c), t, -1));
                d2.push((j, t, 1));
            }
        }
        let n_edges = ne + cone_points * nv;
        [
            IntMatrix::from_triplets(nv + cone_points, n_edges, d1),
            IntMatrix::from_triplets(n_edges, cone_points * ne, d2),
        ]
    }

    /// Incidence graph in Graphviz form.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph building {\n");
        let label = |v: &[Element; 3]| format!("{}:{}:{}", v[0].raw(), v[1].raw(), v[2].raw());
        for (i, v) in self.lines.iter().enumerate() {
            let _ = writeln!(out, "  l{i} [label=\"<{}>\", shape=box];", label(v));
        }
        for (i, v) in self.planes.iter().enumerate() {
            let _ = writeln!(out, "  p{i} [label=\"[{}]\", shape=ellipse];", label(v));
        }
        for &(l, p) in &self.edges {
            let _ = writeln!(out, "  l{l} -- p{p};");
        }
        out.push_str("}\n");
        out
    }
}

/// Rank of `H̃₁` of the building, checked to be the only reduced homology,
/// torsion-free, and equal to `E − V + 1`.
pub fn steinberg_rank(q: u64) -> Result<usize, BuildingError> {
    let b = build_building(q)?;
    let h = b.reduced_homology()?;
    let fail = |m: String| Err(BuildingError::InternalInconsistency(m));
    if h.betti[0] != 0 || h.betti[1] != 0 {
        return fail(format!("reduced homology in degrees < 1: {:?}", h.betti));
    }
    if h.torsion.iter().any(|t| !t.is_empty()) {
        return fail(format!("torsion {:?}", h.torsion));
    }
    let rank = h.betti[2];
    if rank + b.vertex_count() != b.edges.len() + 1 {
        return fail(format!(
            "rank {rank} differs from E − V + 1 = {} − {} + 1",
            b.edges.len(),
            b.vertex_count()
        ));
    }
    Ok(rank)
}

/// Integral homology `H₀, H₁, H₂` of the building coned off at
/// `cone_points` apexes (two apexes: the suspension).
pub fn suspension_homology(q: u64, cone_points: usize) -> Result<Homology, BuildingError> {
    let b = build_building(q)?;
    Ok(homology_of_complex(&b.cone_boundaries(cone_points), Coefficients::Integers)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for (q, v, e) in [(2, 14, 21), (3, 26, 52), (4, 42, 105), (5, 62, 186)] {
            let b = build_building(q).unwrap();
            assert_eq!((b.vertex_count(), b.edges.len()), (v, e));
            assert!(b.degrees().iter().all(|&d| d as u64 == q + 1));
        }
    }

    #[test]
    fn unsupported_sizes() {
        assert_eq!(build_building(6).unwrap_err(), BuildingError::UnsupportedFieldSize(6));
        assert_eq!(build_building(17).unwrap_err(), BuildingError::UnsupportedFieldSize(17));
    }

    #[test]
    fn steinberg_small() {
        assert_eq!(steinberg_rank(2).unwrap(), 21 - 14 + 1);
        assert_eq!(steinberg_rank(3).unwrap(), 52 - 26 + 1);
    }

    #[test]
    fn suspension_q2() {
        let h = suspension_homology(2, 2).unwrap();
        assert_eq!(h.betti, vec![1, 0, 8]);
        assert!(h.torsion.iter().all(Vec::is_empty));
        // a single cone is contractible
        assert_eq!(suspension_homology(2, 1).unwrap().betti, vec![1, 0, 0]);
    }
}
