use num_bigint::BigInt;

use super::matrix::IntMatrix;
use super::snf::{rank_mod_prime, smith_normal_form};
use super::LinAlgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Rationals,
    /// `F_ℓ`; `ℓ` must be prime.
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    /// Betti numbers over the coefficient field (free rank for `Integers`).
    pub betti: Vec<usize>,
    /// Torsion coefficients per degree; only populated for `Integers`.
    pub torsion: Vec<Vec<BigInt>>,
}

impl Homology {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Homology of the chain complex `C_0 ← C_1 ← … ← C_top`.
///
/// `boundaries[i]` is `∂_{i+1}: C_{i+1} → C_i`, an `n_i × n_{i+1}` matrix.
pub fn homology_of_complex(
    boundaries: &[IntMatrix],
    coeff: Coefficients,
) -> Result<Homology, LinAlgError> {
    if boundaries.is_empty() {
        return Ok(Homology {
            betti: Vec::new(),
            torsion: Vec::new(),
        });
    }
    if let Coefficients::Prime(l) = coeff {
        if !crate::is_prime(l) {
            return Err(LinAlgError::NotPrime(l));
        }
    }
    let mut dims = vec![boundaries[0].nrows()];
    for (i, d) in boundaries.iter().enumerate() {
        if d.nrows() != dims[i] {
            return Err(LinAlgError::DimensionMismatch {
                left: boundaries[i - 1].shape(),
                right: d.shape(),
            });
        }
        dims.push(d.ncols());
    }
    for (i, pair) in boundaries.windows(2).enumerate() {
        if !pair[0].mul(&pair[1])?.is_zero() {
            return Err(LinAlgError::CompositionNonzero { degree: i + 1 });
        }
    }

    let mut ranks = vec![0usize; dims.len() + 1];
    let mut torsion = vec![Vec::new(); dims.len()];
    for (i, d) in boundaries.iter().enumerate() {
        ranks[i + 1] = match coeff {
            Coefficients::Prime(l) => rank_mod_prime(d, l),
            Coefficients::Rationals => smith_normal_form(d).rank,
            Coefficients::Integers => {
                let snf = smith_normal_form(d);
                torsion[i] = snf.torsion();
                snf.rank
            }
        };
    }
    let betti = dims
        .iter()
        .enumerate()
        .map(|(i, &n)| n - ranks[i] - ranks[i + 1])
        .collect();
    Ok(Homology { betti, torsion })
}
