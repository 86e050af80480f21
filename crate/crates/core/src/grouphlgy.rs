//! Mod-ℓ and rational Poincaré series of the finite stabilizer groups.
//!
//! Formulas used (all for `ℓ ∤ q`):
//! * cyclic `Z/m`: `1/(1−t)` if `ℓ | m`, else `1`;
//! * `GL_n(F_q)`: `∏_{i=1}^{⌊n/d⌋} (1 + t^{2di−1}) / (1 − t^{2di})` with
//!   `d` the multiplicative order of `q` mod `ℓ` (Quillen's computation);
//! * products by Künneth; normal `p`-subgroups are invisible;
//! * a central subgroup of order prime to `ℓ` is invisible, which is how the
//!   scalar quotients are handled when `ℓ ∤ q − 1`.
//!
//! Over `Q` every finite group has the series `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::PoincareSeries;
use crate::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupHomologyError {
    #[error("ℓ = {ell} divides q = {q}")]
    BadCharacteristic { ell: u64, q: u64 },
    #[error("ℓ = {ell} is not prime")]
    NotPrime { ell: u64 },
    #[error("unsupported coefficients F_{ell} for q = {q}: {reason}")]
    UnsupportedCoefficients { ell: u64, q: u64, reason: String },
    #[error("no central-quotient identity for {0}")]
    NoQuotientIdentity(String),
    #[error("cannot parse group descriptor {0:?}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    GL3,
    GL2,
    PGL3,
    PGL2,
    /// Units of `F_{q^d}`; `Units(1)` is `GL_1(F_q)`.
    Units(u8),
    Cyclic(u64),
}

impl Atom {
    /// Larger pieces first: `GL3, GL2, PGL3, PGL2, U3, U2, U1, C…`.
    fn sort_key(self) -> (u8, std::cmp::Reverse<u64>) {
        use std::cmp::Reverse;
        match self {
            Atom::GL3 => (0, Reverse(0)),
            Atom::GL2 => (1, Reverse(0)),
            Atom::PGL3 => (2, Reverse(0)),
            Atom::PGL2 => (3, Reverse(0)),
            Atom::Units(d) => (4, Reverse(u64::from(d))),
            Atom::Cyclic(m) => (5, Reverse(m)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::GL3 => write!(f, "GL3"),
            Atom::GL2 => write!(f, "GL2"),
            Atom::PGL3 => write!(f, "PGL3"),
            Atom::PGL2 => write!(f, "PGL2"),
            Atom::Units(d) => write!(f, "U{d}"),
            Atom::Cyclic(m) => write!(f, "C{m}"),
        }
    }
}

impl FromStr for Atom {
    type Err = GroupHomologyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupHomologyError::Parse(s.to_string());
        Ok(match s {
            "GL3" => Atom::GL3,
            "GL2" => Atom::GL2,
            "PGL3" => Atom::PGL3,
            "PGL2" => Atom::PGL2,
            "U1" | "GL1" => Atom::Units(1),
            "U2" => Atom::Units(2),
            "U3" => Atom::Units(3),
            _ => match s.strip_prefix('C') {
                Some(m) => Atom::Cyclic(m.parse().ok().filter(|&m| m >= 1).ok_or_else(bad)?),
                None => return Err(bad()),
            },
        })
    }
}

/// A finite group given as a product of standard pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupDescriptor {
    /// Kept in canonical (sorted) order.
    atoms: Vec<Atom>,
    /// Extended by a unipotent (`p`-group) radical.
    pub unipotent: bool,
    /// Read modulo the scalar subgroup `k^×`.
    pub central_quotient: bool,
}

impl GroupDescriptor {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort_by_key(|a| a.sort_key());
        GroupDescriptor {
            atoms,
            unipotent: false,
            central_quotient: false,
        }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn with_unipotent(mut self) -> Self {
        self.unipotent = true;
        self
    }

    pub fn modulo_scalars(mut self) -> Self {
        self.central_quotient = true;
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Explicit group isomorphic to `self / k^×` (scalars embedded
    /// diagonally), dropping the quotient flag.
    pub fn central_quotient(&self, q: u64) -> Result<GroupDescriptor, GroupHomologyError> {
        use Atom::*;
        let atoms: Vec<Atom> = match self.atoms.as_slice() {
            [Units(1)] => vec![],
            [Units(1), Units(1)] => vec![Units(1)],
            [Units(1), Units(1), Units(1)] => vec![Units(1), Units(1)],
            [Units(2), Units(1)] => vec![Units(2)],
            [Units(2)] => vec![Cyclic(q + 1)],
            [Units(3)] => vec![Cyclic(q * q + q + 1)],
            [GL2, Units(1)] => vec![GL2],
            [GL2] => vec![PGL2],
            [GL3] => vec![PGL3],
            _ => {
                let mut plain = self.clone();
                plain.central_quotient = false;
                return Err(GroupHomologyError::NoQuotientIdentity(plain.to_string()));
            }
        };
        let mut out = GroupDescriptor::new(atoms);
        out.unipotent = self.unipotent;
        Ok(out)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.atoms.len() {
            let a = self.atoms[i];
            let run = self.atoms[i..].iter().take_while(|&&b| b == a).count();
            parts.push(if run > 1 { format!("{a}^{run}") } else { a.to_string() });
            i += run;
        }
        let mut body = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
        if self.unipotent {
            body.push_str("+unip");
        }
        if self.central_quotient {
            write!(f, "({body})/Z")
        } else {
            write!(f, "{body}")
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = GroupHomologyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupHomologyError::Parse(s.to_string());
        let (body, central_quotient) = match s.strip_prefix('(').and_then(|r| r.strip_suffix(")/Z")) {
            Some(inner) => (inner, true),
            None => (s, false),
        };
        let (body, unipotent) = match body.strip_suffix("+unip") {
            Some(b) => (b, true),
            None => (body, false),
        };
        let mut atoms = Vec::new();
        if body != "1" {
            for factor in body.split('*') {
                let (name, power) = match factor.split_once('^') {
                    Some((n, k)) => (n, k.parse::<usize>().map_err(|_| bad())?),
                    None => (factor, 1),
                };
                let atom: Atom = name.parse().map_err(|_| bad())?;
                atoms.extend(std::iter::repeat_n(atom, power));
            }
        }
        let mut d = GroupDescriptor::new(atoms);
        d.unipotent = unipotent;
        d.central_quotient = central_quotient;
        Ok(d)
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffField {
    Rational,
    Prime(u64),
}

impl CoeffField {
    /// `F_ℓ`, checked against the base field size `q`.
    pub fn prime(ell: u64, q: u64) -> Result<Self, GroupHomologyError> {
        if !is_prime(ell) {
            return Err(GroupHomologyError::NotPrime { ell });
        }
        if q.is_multiple_of(ell) {
            return Err(GroupHomologyError::BadCharacteristic { ell, q });
        }
        Ok(CoeffField::Prime(ell))
    }

    /// `ℓ | q − 1`, the regime where the scalars `k^×` carry mod-ℓ homology.
    pub fn divides_q_minus_one(self, q: u64) -> bool {
        matches!(self, CoeffField::Prime(l) if (q - 1).is_multiple_of(l))
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Rational => write!(f, "Q"),
            CoeffField::Prime(l) => write!(f, "F_{l}"),
        }
    }
}

impl Serialize for CoeffField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Multiplicative order of `q` modulo `ell`.
pub fn order_mod(q: u64, ell: u64) -> u64 {
    assert!(!q.is_multiple_of(ell));
    let mut x = q % ell;
    let mut k = 1;
    while x != 1 % ell {
        x = x * (q % ell) % ell;
        k += 1;
    }
    k
}

fn cyclic_series(m: u64, ell: u64, maxdeg: usize) -> PoincareSeries {
    if m.is_multiple_of(ell) {
        PoincareSeries::geometric(1, maxdeg)
    } else {
        PoincareSeries::one(maxdeg)
    }
}

fn general_linear_series(
    n: u64,
    q: u64,
    ell: u64,
    maxdeg: usize,
) -> Result<PoincareSeries, GroupHomologyError> {
    let d = order_mod(q, ell);
    let mut s = PoincareSeries::one(maxdeg);
    for i in 1..=n / d {
        let k = (2 * d * i) as usize;
        s = s.mul(&PoincareSeries::exterior_times_polynomial(k - 1, k, maxdeg));
    }
    Ok(s)
}

/// Poincaré series of `H_•(G, coeff)` through degree `maxdeg`.
pub fn series(
    g: &GroupDescriptor,
    q: u64,
    coeff: CoeffField,
    maxdeg: usize,
) -> Result<PoincareSeries, GroupHomologyError> {
    if g.central_quotient {
        let mut plain = g.clone();
        plain.central_quotient = false;
        return central_quotient_series(&plain, q, coeff, maxdeg);
    }
    let ell = match coeff {
        CoeffField::Rational => return Ok(PoincareSeries::one(maxdeg)),
        CoeffField::Prime(l) => {
            CoeffField::prime(l, q)?;
            l
        }
    };
    let mut s = PoincareSeries::one(maxdeg);
    for atom in &g.atoms {
        let factor = match *atom {
            Atom::Units(d) => cyclic_series(q.pow(u32::from(d)) - 1, ell, maxdeg),
            Atom::Cyclic(m) => cyclic_series(m, ell, maxdeg),
            Atom::GL2 => general_linear_series(2, q, ell, maxdeg)?,
            Atom::GL3 => general_linear_series(3, q, ell, maxdeg)?,
            Atom::PGL2 | Atom::PGL3 => {
                if coeff.divides_q_minus_one(q) {
                    return Err(scalar_error(ell, q));
                }
                let n = if *atom == Atom::PGL2 { 2 } else { 3 };
                general_linear_series(n, q, ell, maxdeg)?
            }
        };
        s = s.mul(&factor);
    }
    Ok(s)
}

fn scalar_error(ell: u64, q: u64) -> GroupHomologyError {
    GroupHomologyError::UnsupportedCoefficients {
        ell,
        q,
        reason: "ℓ divides q−1, so the scalar extension is not split off".into(),
    }
}

/// Series of `G / k^×` via the explicit quotient identities.
pub fn central_quotient_series(
    g: &GroupDescriptor,
    q: u64,
    coeff: CoeffField,
    maxdeg: usize,
) -> Result<PoincareSeries, GroupHomologyError> {
    let quotient = g.central_quotient(q)?;
    match coeff {
        CoeffField::Rational => Ok(PoincareSeries::one(maxdeg)),
        CoeffField::Prime(l) => {
            CoeffField::prime(l, q)?;
            if coeff.divides_q_minus_one(q) {
                return Err(scalar_error(l, q));
            }
            series(&quotient, q, coeff, maxdeg)
        }
    }
}
