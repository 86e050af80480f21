//! Brute-force group homology used as independent references.
//!
//! Nothing here calls the product formulas of the library: homology is
//! computed either from an explicit free resolution over `F_ℓ[G]`, from the
//! periodic resolution of a cyclic group, or from stable elements for an
//! abelian Sylow subgroup.

#![allow(dead_code)]

use std::collections::HashMap;

use hecke_gl3::exactlin::{homology_of_complex, Coefficients, IntMatrix};

/// A finite group by its multiplication table.
pub struct FiniteGroup {
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order()).find(|&h| self.mul[g][h] == self.identity).unwrap()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul[x][g];
            k += 1;
        }
        k
    }

    pub fn cyclic(m: usize) -> Self {
        FiniteGroup {
            mul: (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect(),
            identity: 0,
        }
    }

    /// `GL_n(F_p)` for a prime `p`, matrices flattened row-major.
    pub fn general_linear(n: usize, p: u32) -> Self {
        let mul = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut c = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    c[i * n + j] = (0..n).map(|k| a[i * n + k] * b[k * n + j]).sum::<u32>() % p;
                }
            }
            c
        };
        Self::matrix_group(n, p.pow((n * n) as u32), |v| digits(v, p, n * n), mul, |m| det_mod(m, n, p) != 0)
    }

    /// `GL_2(F_4)` with `F_4 = F_2[u]/(u² + u + 1)`, elements `0, 1, u, u+1`
    /// encoded as `0..4`.
    pub fn gl2_f4() -> Self {
        fn fmul(a: u32, b: u32) -> u32 {
            // bit 0 = constant, bit 1 = u
            let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
            let c0 = (a0 * b0) ^ (a1 * b1);
            let c1 = (a0 * b1) ^ (a1 * b0) ^ (a1 * b1);
            c0 | (c1 << 1)
        }
        let mul = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut c = vec![0u32; 4];
            for i in 0..2 {
                for j in 0..2 {
                    c[i * 2 + j] = fmul(a[i * 2], b[j]) ^ fmul(a[i * 2 + 1], b[2 + j]);
                }
            }
            c
        };
        let det = |m: &[u32]| fmul(m[0], m[3]) ^ fmul(m[1], m[2]);
        Self::matrix_group(2, 256, |v| digits(v, 4, 4), mul, |m| det(m) != 0)
    }

    fn matrix_group(
        n: usize,
        count: u32,
        decode: impl Fn(u32) -> Vec<u32>,
        mul: impl Fn(&[u32], &[u32]) -> Vec<u32>,
        invertible: impl Fn(&[u32]) -> bool,
    ) -> Self {
        let elems: Vec<Vec<u32>> = (0..count).map(decode).filter(|m| invertible(m)).collect();
        let index: HashMap<Vec<u32>, usize> = elems.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut id = vec![0u32; n * n];
        for i in 0..n {
            id[i * n + i] = 1;
        }
        FiniteGroup {
            mul: elems
                .iter()
                .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
                .collect(),
            identity: index[&id],
        }
    }
}

fn digits(mut v: u32, base: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = v % base;
            v /= base;
            d
        })
        .collect()
}

fn det_mod(m: &[u32], n: usize, p: u32) -> u32 {
    let sub = |a: u32, b: u32| (a % p + p - b % p) % p;
    match n {
        2 => sub(m[0] * m[3], m[1] * m[2]),
        3 => {
            let t = |a: usize, b: usize, c: usize| m[a] * m[b] * m[c];
            sub(t(0, 4, 8) + t(1, 5, 6) + t(2, 3, 7), t(2, 4, 6) + t(0, 5, 7) + t(1, 3, 8))
        }
        _ => unimplemented!(),
    }
}

/// Row-reduced basis of a subspace of `F_ℓ^n`, kept in echelon form.
struct Span {
    ell: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Span {
    fn new(ell: u64) -> Self {
        Span {
            ell,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (self.ell - c) * r) % self.ell;
                }
            }
        }
        v
    }

    /// Adds `v`; returns false if it was already in the span.
    fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = mod_inv(v[p], self.ell);
        for x in v.iter_mut() {
            *x = *x * inv % self.ell;
        }
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            let c = row[p];
            if c != 0 {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = (*x + (self.ell - c) * y) % self.ell;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

fn mod_inv(a: u64, ell: u64) -> u64 {
    (1..ell).find(|&b| a * b % ell == 1).unwrap()
}

/// Kernel basis of the `F_ℓ`-linear map given by `images[j]` = image of
/// basis vector `j`.
fn kernel(images: &[Vec<u64>], ell: u64) -> Vec<Vec<u64>> {
    let n = images.len();
    let m = images.first().map_or(0, Vec::len);
    // Augment each image with the identity and row reduce.
    let mut rows: Vec<Vec<u64>> = images
        .iter()
        .enumerate()
        .map(|(j, img)| {
            let mut r = img.clone();
            r.extend((0..n).map(|k| u64::from(k == j)));
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..m {
        let Some(piv) = (rank..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = mod_inv(rows[rank][col], ell);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % ell;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let c = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (ell - c) * y) % ell;
                }
            }
        }
        rank += 1;
    }
    rows[rank..].iter().map(|r| r[m..].to_vec()).collect()
}

fn rank(rows: &[Vec<u64>], ell: u64) -> usize {
    let mut s = Span::new(ell);
    rows.iter().filter(|r| s.insert((*r).clone())).count()
}

/// `dim H_n(G, F_ℓ)` for `n = 0..=top`, from a free resolution built
/// greedily: at each stage the kernel is covered by translates of chosen
/// kernel vectors.
pub fn resolution_homology(g: &FiniteGroup, ell: u64, top: usize) -> Vec<usize> {
    let n = g.order();
    // Translate of a vector of F[G]^r by h on the left.
    let act = |h: usize, v: &[u64]| -> Vec<u64> {
        let mut out = vec![0; v.len()];
        for (idx, &c) in v.iter().enumerate() {
            if c != 0 {
                let (block, x) = (idx / n, idx % n);
                out[block * n + g.mul[h][x]] = c;
            }
        }
        out
    };
    // d_0 = augmentation F[G] → F.
    let mut images: Vec<Vec<u64>> = (0..n).map(|_| vec![1]).collect();
    // generators[k] = images of the free generators of C_k (k ≥ 1).
    let mut generators: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
    for _ in 0..=top {
        let ker = kernel(&images, ell);
        let mut span = Span::new(ell);
        let mut gens = Vec::new();
        for v in ker {
            if span.insert(v.clone()) {
                gens.push(v.clone());
                for h in 0..n {
                    span.insert(act(h, &v));
                }
            }
        }
        images = gens
            .iter()
            .flat_map(|v| (0..n).map(move |h| (h, v)))
            .map(|(h, v)| act(h, v))
            .collect();
        generators.push(gens);
    }
    // Tensor with F: the generator e_j of C_k maps to Σ_i ε(coefficient block i).
    let rank_of = |k: usize| -> usize {
        let gens = &generators[k];
        if k == 0 || gens.is_empty() {
            return 0;
        }
        let blocks = gens[0].len() / n;
        let cols: Vec<Vec<u64>> = gens
            .iter()
            .map(|v| (0..blocks).map(|b| v[b * n..(b + 1) * n].iter().sum::<u64>() % ell).collect())
            .collect();
        rank(&cols, ell)
    };
    let ranks_of_modules: Vec<usize> =
        std::iter::once(1).chain(generators[1..].iter().map(Vec::len)).collect();
    (0..=top)
        .map(|k| ranks_of_modules[k] - rank_of(k) - rank_of(k + 1))
        .collect()
}

/// `dim H_n(Z/m, F_ℓ)` for `n ≤ top` from the 2-periodic resolution, whose
/// tensor with `F_ℓ` has differentials alternating `0` (odd) and `m` (even).
pub fn cyclic_homology(m: u64, ell: u64, top: usize) -> Vec<usize> {
    let boundaries: Vec<IntMatrix> = (1..=top + 1)
        .map(|k| IntMatrix::from_rows(&[vec![if k % 2 == 1 { 0i64 } else { m as i64 }]]))
        .collect();
    let h = homology_of_complex(&boundaries, Coefficients::Prime(ell)).unwrap();
    h.betti[..=top].to_vec()
}

/// `dim H_n(GL_3(F_2), F_7)` for `n ≤ top` by stable elements: the Sylow
/// 7-subgroup `P` is cyclic, so the answer is the invariants of
/// `H_*(P, F_7)` under `N(P)`. An automorphism `x ↦ x^r` of `P` acts on
/// degrees `2i − 1` and `2i` by `r^i`.
pub fn gl3_f2_mod7_stable_elements(top: usize) -> Vec<usize> {
    let g = FiniteGroup::general_linear(3, 2);
    let x = (0..g.order()).find(|&a| g.element_order(a) == 7).unwrap();
    let powers: Vec<usize> = std::iter::successors(Some(g.identity), |&y| Some(g.mul[y][x]))
        .take(7)
        .collect();
    let mut exponents = Vec::new();
    for n in 0..g.order() {
        let conj = g.mul[g.mul[n][x]][g.inverse(n)];
        if let Some(r) = powers.iter().position(|&y| y == conj) {
            if !exponents.contains(&r) {
                exponents.push(r);
            }
        }
    }
    (0..=top)
        .map(|deg| {
            if deg == 0 {
                return 1;
            }
            let i = (deg as u32).div_ceil(2);
            usize::from(exponents.iter().all(|&r| (r as u64).pow(i) % 7 == 1))
        })
        .collect()
}
