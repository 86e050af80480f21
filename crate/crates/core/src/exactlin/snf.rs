//! Smith normal form over the integers.
//!
//! Two entry points share the same pivoting rule (minimal nonzero absolute
//! value). [`smith_normal_form`] first strips unit pivots on the sparse
//! representation and only densifies the leftover block, which keeps large
//! boundary matrices cheap. [`smith_normal_form_with_transforms`] is fully
//! dense and records `U`, `V` with `D = U·A·V`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Positive divisors `d₁ | d₂ | … | d_r`.
    pub elementary_divisors: Vec<BigInt>,
    pub rank: usize,
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
}

impl SmithForm {
    /// Divisors different from one; these are the torsion coefficients of
    /// the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.elementary_divisors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// The diagonal matrix `D` of the given shape.
    pub fn diagonal(&self, rows: usize, cols: usize) -> IntMatrix {
        IntMatrix::from_triplets(
            rows,
            cols,
            self.elementary_divisors
                .iter()
                .enumerate()
                .map(|(i, d)| (i, i, d.clone())),
        )
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (units, rest) = strip_unit_pivots(a);
    let mut block = DenseSnf::new(rest, false);
    block.run();
    let mut divisors = vec![BigInt::one(); units];
    divisors.extend(block.divisors());
    SmithForm {
        rank: divisors.len(),
        elementary_divisors: divisors,
        left: None,
        right: None,
    }
}

pub fn smith_normal_form_with_transforms(a: &IntMatrix) -> SmithForm {
    let mut calc = DenseSnf::new(a.to_dense(), true);
    calc.run();
    let divisors = calc.divisors();
    let (rows, cols) = a.shape();
    SmithForm {
        rank: divisors.len(),
        elementary_divisors: divisors,
        left: calc.u.map(|u| IntMatrix::from_dense(u, rows)),
        right: calc.v.map(|v| IntMatrix::from_dense(v, cols)),
    }
}

/// Rank over the rationals.
pub fn rank_rational(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank
}

/// Rank over `F_p`. `p` must be prime.
pub fn rank_mod_prime(a: &IntMatrix, p: u64) -> usize {
    let modulus = BigInt::from(p);
    let mut rows: Vec<BTreeMap<usize, u64>> = (0..a.nrows())
        .map(|i| {
            a.row(i)
                .iter()
                .filter_map(|(j, v)| {
                    let r = v.mod_floor(&modulus);
                    (!r.is_zero()).then(|| (*j, u64::try_from(r).unwrap()))
                })
                .collect()
        })
        .collect();
    let mut by_col: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.ncols()];
    for (i, row) in rows.iter().enumerate() {
        for j in row.keys() {
            by_col[*j].insert(i);
        }
    }
    let mut rank = 0;
    for c in 0..a.ncols() {
        let Some(&r) = by_col[c].iter().min_by_key(|&&i| rows[i].len()) else {
            continue;
        };
        let pivot_row = std::mem::take(&mut rows[r]);
        for j in pivot_row.keys() {
            by_col[*j].remove(&r);
        }
        let inv = mod_pow(pivot_row[&c], p - 2, p);
        let others: Vec<usize> = by_col[c].iter().copied().collect();
        for i in others {
            let f = rows[i][&c] * inv % p;
            for (j, v) in &pivot_row {
                let entry = rows[i].entry(*j).or_insert(0);
                let was_zero = *entry == 0;
                *entry = (*entry + p - f * v % p) % p;
                if *entry == 0 {
                    rows[i].remove(j);
                    by_col[*j].remove(&i);
                } else if was_zero {
                    by_col[*j].insert(i);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Eliminates `±1` pivots on the sparse matrix. Each such pivot contributes an
/// elementary divisor 1 and removes its row and column; returns the count and
/// the remaining nonzero block.
fn strip_unit_pivots(a: &IntMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = (0..a.nrows())
        .map(|i| a.row(i).iter().cloned().collect())
        .collect();
    let mut by_col: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.ncols()];
    for (i, row) in rows.iter().enumerate() {
        for j in row.keys() {
            by_col[*j].insert(i);
        }
    }
    let mut units = 0;
    loop {
        let mut progressed = false;
        for c in 0..a.ncols() {
            let pivot = by_col[c]
                .iter()
                .filter(|&&i| rows[i][&c].abs().is_one())
                .min_by_key(|&&i| rows[i].len())
                .copied();
            let Some(r) = pivot else { continue };
            let pivot_row = std::mem::take(&mut rows[r]);
            for j in pivot_row.keys() {
                by_col[*j].remove(&r);
            }
            let sign = &pivot_row[&c];
            let others: Vec<usize> = by_col[c].iter().copied().collect();
            for i in others {
                let f = &rows[i][&c] * sign;
                for (j, v) in &pivot_row {
                    let entry = rows[i].entry(*j).or_default();
                    let was_zero = entry.is_zero();
                    *entry -= &f * v;
                    if entry.is_zero() {
                        rows[i].remove(j);
                        by_col[*j].remove(&i);
                    } else if was_zero {
                        by_col[*j].insert(i);
                    }
                }
            }
            units += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let live_cols: Vec<usize> = (0..a.ncols()).filter(|&j| !by_col[j].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> =
        live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let block = rows
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut dense = vec![BigInt::zero(); live_cols.len()];
            for (j, v) in r {
                dense[col_pos[&j]] = v;
            }
            dense
        })
        .collect();
    (units, block)
}

struct DenseSnf {
    d: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    done: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

impl DenseSnf {
    fn new(d: Vec<Vec<BigInt>>, transforms: bool) -> Self {
        let m = d.len();
        let n = d.first().map_or(0, Vec::len);
        DenseSnf {
            u: transforms.then(|| identity(m)),
            v: transforms.then(|| identity(n)),
            d,
            m,
            n,
            done: 0,
        }
    }

    fn divisors(&self) -> Vec<BigInt> {
        (0..self.done).map(|i| self.d[i][i].clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.d.swap(a, b);
            if let Some(u) = &mut self.u {
                u.swap(a, b);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for row in &mut self.d {
                row.swap(a, b);
            }
            if let Some(v) = &mut self.v {
                for row in v {
                    row.swap(a, b);
                }
            }
        }
    }

    /// row[target] -= f · row[src]
    fn row_axpy(&mut self, target: usize, src: usize, f: &BigInt) {
        fn apply(mat: &mut [Vec<BigInt>], target: usize, src: usize, f: &BigInt) {
            let (t, s) = if target < src {
                let (lo, hi) = mat.split_at_mut(src);
                (&mut lo[target], &hi[0])
            } else {
                let (lo, hi) = mat.split_at_mut(target);
                (&mut hi[0], &lo[src])
            };
            for (x, y) in t.iter_mut().zip(s.iter()) {
                if !y.is_zero() {
                    *x -= f * y;
                }
            }
        }
        apply(&mut self.d, target, src, f);
        if let Some(u) = &mut self.u {
            apply(u, target, src, f);
        }
    }

    /// col[target] -= f · col[src]
    fn col_axpy(&mut self, target: usize, src: usize, f: &BigInt) {
        fn apply(mat: &mut [Vec<BigInt>], target: usize, src: usize, f: &BigInt) {
            for row in mat {
                if !row[src].is_zero() {
                    let delta = f * &row[src];
                    row[target] -= delta;
                }
            }
        }
        apply(&mut self.d, target, src, f);
        if let Some(v) = &mut self.v {
            apply(v, target, src, f);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for x in &mut self.d[r] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[r] {
                *x = -&*x;
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.d[i][j];
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                if best.as_ref().is_none_or(|b| a < b.2) {
                    let unit = a.is_one();
                    best = Some((i, j, a));
                    if unit {
                        return best.map(|b| (b.0, b.1));
                    }
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }

    fn run(&mut self) {
        let steps = self.m.min(self.n);
        while self.done < steps {
            let t = self.done;
            let Some((i, j)) = self.min_entry(t) else { break };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                let pivot = self.d[t][t].clone();
                let mut clean = true;
                for i in t + 1..self.m {
                    if !self.d[i][t].is_zero() {
                        let f = self.d[i][t].div_floor(&pivot);
                        self.row_axpy(i, t, &f);
                        clean &= self.d[i][t].is_zero();
                    }
                }
                for j in t + 1..self.n {
                    if !self.d[t][j].is_zero() {
                        let f = self.d[t][j].div_floor(&pivot);
                        self.col_axpy(j, t, &f);
                        clean &= self.d[t][j].is_zero();
                    }
                }
                if !clean {
                    self.bring_smaller_remainder(t);
                    continue;
                }
                // Row and column cleared; enforce d_t | every remaining entry.
                let offender = (t + 1..self.m).find(|&i| {
                    (t + 1..self.n).any(|j| !self.d[i][j].mod_floor(&pivot).is_zero())
                });
                match offender {
                    Some(i) => self.row_axpy(t, i, &BigInt::from(-1)),
                    None => break,
                }
            }
            if self.d[t][t].is_negative() {
                self.negate_row(t);
            }
            self.done += 1;
        }
    }

    /// Moves the smallest nonzero entry of row `t` / column `t` into the pivot.
    fn bring_smaller_remainder(&mut self, t: usize) {
        let mut best = (t, t, self.d[t][t].abs());
        for i in t + 1..self.m {
            let a = self.d[i][t].abs();
            if !a.is_zero() && a < best.2 {
                best = (i, t, a);
            }
        }
        for j in t + 1..self.n {
            let a = self.d[t][j].abs();
            if !a.is_zero() && a < best.2 {
                best = (t, j, a);
            }
        }
        self.swap_rows(t, best.0);
        self.swap_cols(t, best.1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(a: &IntMatrix) -> Vec<i64> {
        smith_normal_form(a)
            .elementary_divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_two_three() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(divisors(&a), vec![1, 6]);
        let full = smith_normal_form_with_transforms(&a);
        assert_eq!(full.elementary_divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let s = smith_normal_form(&IntMatrix::zeros(3, 3));
        assert_eq!(s.rank, 0);
        assert!(s.elementary_divisors.is_empty());
        assert_eq!(smith_normal_form(&IntMatrix::zeros(0, 0)).rank, 0);
    }

    #[test]
    fn triangle_incidence() {
        // vertices x edges of a 3-cycle; rank 2 by row reduction: the rows sum
        // to zero and any two are independent.
        let a = IntMatrix::from_rows(&[vec![-1, 0, 1], vec![1, -1, 0], vec![0, 1, -1]]);
        assert_eq!(divisors(&a), vec![1, 1]);
        assert_eq!(rank_mod_prime(&a, 2), 2);
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let a = IntMatrix::from_rows(&[vec![4, 6, 2], vec![6, 9, 3], vec![2, 8, 10]]);
        let s = smith_normal_form_with_transforms(&a);
        let d = s.left.as_ref().unwrap().mul(&a).unwrap().mul(s.right.as_ref().unwrap()).unwrap();
        assert_eq!(d, s.diagonal(3, 3));
        assert_eq!(divisors(&a), vec![1, 2]);
    }

    #[test]
    fn non_unit_block_goes_dense() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        // det = -8, gcd of entries 2
        assert_eq!(divisors(&a), vec![2, 4]);
    }

    #[test]
    fn rank_mod_prime_sees_collapse() {
        let a = IntMatrix::from_rows(&[vec![3, 0], vec![0, 1]]);
        assert_eq!(rank_mod_prime(&a, 3), 1);
        assert_eq!(rank_mod_prime(&a, 5), 2);
        assert_eq!(rank_rational(&a), 2);
    }
}
