//! Homology of `GL₃` over the coordinate ring of an affine elliptic curve
//! over a finite field, computed from the Hecke graph of rank-3 bundles, the
//! spherical building of `GL₃(F_q)`, and finite-group homology.

pub mod assembler;
pub mod building;
pub mod cli;
pub mod ellcurve;
pub mod exactlin;
pub mod finitefield;
pub mod grouphlgy;
pub mod heckegraph;
pub mod moduli;

/// Trial-division primality test for the small moduli used throughout.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}
