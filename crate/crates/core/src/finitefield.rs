//! Finite fields `F_q = F_p[t]/(m(t))` and the extensions `F_{q²}`, `F_{q³}`
//! built directly over `F_q`.
//!
//! An element of `F_{q^d}` is stored as the integer `Σ cᵢ·pⁱ` whose base-`p`
//! digits are its coordinates in the tower basis `{uʲ·tᵏ}` (digit `j·e + k`),
//! so `F_q` sits inside every extension as the integers `< q` and
//! "lexicographic order" means numeric order of that integer.
//! Multiplication goes through discrete log/exp tables.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::is_prime;

/// Hard cap on `q^d` for any table-backed field.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0:?} is not a monic irreducible polynomial")]
    ReducibleModulus(Vec<u32>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed fields: degree {left} against degree {right}")]
    MixedFields { left: u8, right: u8 },
    #[error("unsupported extension degree {0} (expected 1, 2 or 3)")]
    UnsupportedDegree(u32),
    #[error("field of order {0} exceeds the table limit")]
    TooLarge(u64),
    #[error("coordinate vector {0:?} does not describe an element")]
    BadCoordinates(Vec<u32>),
}

/// `F_q` as `F_p[t]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Monic, little-endian, length `e + 1`.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Uses the smallest monic irreducible of degree `e` (coefficients read as
    /// a base-`p` integer, constant term least significant).
    pub fn new(p: u32, e: u32) -> Result<Self, FieldError> {
        if !is_prime(u64::from(p)) {
            return Err(FieldError::NotPrime(p));
        }
        let q = checked_pow(p, e)?;
        let modulus = (0..q)
            .map(|v| {
                let mut m = digits(v, p, e as usize);
                m.push(1);
                m
            })
            .find(|m| is_irreducible_mod_p(m, p))
            .expect("irreducible polynomials exist in every degree");
        Ok(FieldSpec { p, e, modulus })
    }

    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(u64::from(p)) {
            return Err(FieldError::NotPrime(p));
        }
        if modulus.len() < 2
            || modulus.last() != Some(&1)
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible_mod_p(&modulus, p)
        {
            return Err(FieldError::ReducibleModulus(modulus));
        }
        let e = (modulus.len() - 1) as u32;
        checked_pow(p, e)?;
        Ok(FieldSpec { p, e, modulus })
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }
}

fn checked_pow(base: u32, exp: u32) -> Result<u32, FieldError> {
    let v = u64::from(base).checked_pow(exp).unwrap_or(u64::MAX);
    if v > MAX_FIELD_ORDER {
        return Err(FieldError::TooLarge(v));
    }
    Ok(v as u32)
}

fn digits(mut v: u32, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % base);
        v /= base;
    }
    out
}

fn undigits(ds: &[u32], base: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// Remainder of `a` modulo the monic `m`, both over `F_p`.
fn poly_rem_mod_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| u64::from(c)).collect();
    let dm = m.len() - 1;
    let p64 = u64::from(p);
    while r.len() > dm {
        let lead = r.pop().unwrap() % p64;
        if lead != 0 {
            let shift = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                let sub = lead * u64::from(c) % p64;
                r[shift + i] = (r[shift + i] + p64 - sub % p64) % p64;
            }
        }
    }
    r.iter().map(|&c| (c % p64) as u32).collect()
}

fn is_irreducible_mod_p(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for v in 0..count {
            let mut f = digits(v as u32, p, k);
            f.push(1);
            if poly_rem_mod_p(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    deg >= 1
}

/// An element of `F_{q^d}`; `degree` is `d`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element {
    degree: u8,
    raw: u32,
}

impl Element {
    pub fn degree(self) -> u8 {
        self.degree
    }

    pub fn raw(self) -> u32 {
        self.raw
    }

    pub fn is_zero(self) -> bool {
        self.raw == 0
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}@{}", self.raw, self.degree)
    }
}

const NO_LOG: u32 = u32::MAX;

/// The field `F_{q^d}` with lookup tables.
#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    e: u32,
    q: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// char 2 only: `w ↦ z` with `z² + z = w`, or `NO_LOG`.
    artin_schreier: Vec<u32>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{} over p={})", self.q, self.degree, self.p)
    }
}

impl GaloisField {
    fn from_slow_mul(
        p: u32,
        e: u32,
        q: u32,
        degree: u32,
        modulus: Vec<u32>,
        slow_mul: impl Fn(u32, u32) -> u32,
    ) -> Self {
        let order = q.pow(degree);
        let n = (order - 1) as usize;
        let mut log = vec![NO_LOG; order as usize];
        let mut exp = Vec::with_capacity(n);
        for g in 2..order.max(3) {
            exp.clear();
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = slow_mul(x, g);
                if x == 1 || exp.len() > n {
                    break;
                }
            }
            if exp.len() == n {
                break;
            }
        }
        if order == 2 {
            exp = vec![1];
        }
        assert_eq!(exp.len(), n, "no primitive element found");
        for (k, &x) in exp.iter().enumerate() {
            log[x as usize] = k as u32;
        }
        let mut field = GaloisField {
            p,
            e,
            q,
            degree,
            order,
            modulus,
            exp,
            log,
            artin_schreier: Vec::new(),
        };
        if p == 2 {
            let mut table = vec![NO_LOG; order as usize];
            for z in 0..order {
                let ze = field.el(z);
                let w = field.add(field.mul(ze, ze), ze).raw;
                if table[w as usize] == NO_LOG {
                    table[w as usize] = z;
                }
            }
            field.artin_schreier = table;
        }
        field
    }

    fn el(&self, raw: u32) -> Element {
        Element {
            degree: self.degree as u8,
            raw,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// `q`, the size of the base field.
    pub fn base_order(&self) -> u32 {
        self.q
    }

    /// Relative degree over `F_q`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of elements, `q^degree`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Defining polynomial over `F_q` (raw base-field values, monic,
    /// little-endian).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Element {
        self.el(0)
    }

    pub fn one(&self) -> Element {
        self.el(1)
    }

    /// Image of the integer `n` under `Z → F_p ⊂ F_{q^d}`.
    pub fn from_int(&self, n: i64) -> Element {
        self.el(n.rem_euclid(i64::from(self.p)) as u32)
    }

    pub fn from_raw(&self, raw: u32) -> Option<Element> {
        (raw < self.order).then(|| self.el(raw))
    }

    /// Coordinates over `F_p`, little-endian, length `degree·e`.
    pub fn coords(&self, x: Element) -> Vec<u32> {
        digits(x.raw, self.p, (self.degree * self.e) as usize)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Element, FieldError> {
        if coords.len() != (self.degree * self.e) as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(FieldError::BadCoordinates(coords.to_vec()));
        }
        Ok(self.el(undigits(coords, self.p)))
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> Element {
        self.el(*self.exp.get(1).unwrap_or(&1))
    }

    /// All elements in increasing raw order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(|r| self.el(r))
    }

    pub fn contains(&self, x: Element) -> bool {
        u32::from(x.degree) == self.degree && x.raw < self.order
    }

    fn check(&self, x: Element, y: Element) -> Result<(), FieldError> {
        if x.degree != y.degree || !self.contains(x) {
            return Err(FieldError::MixedFields {
                left: x.degree,
                right: if x.degree != y.degree { y.degree } else { self.degree as u8 },
            });
        }
        Ok(())
    }

    pub fn add(&self, x: Element, y: Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y));
        if self.p == 2 {
            return self.el(x.raw ^ y.raw);
        }
        let (mut a, mut b, mut out, mut place) = (x.raw, y.raw, 0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        self.el(out)
    }

    pub fn neg(&self, x: Element) -> Element {
        if self.p == 2 {
            return x;
        }
        let (mut a, mut out, mut place) = (x.raw, 0u32, 1u32);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        self.el(out)
    }

    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y));
        if x.raw == 0 || y.raw == 0 {
            return self.zero();
        }
        let n = self.order - 1;
        let k = (self.log[x.raw as usize] + self.log[y.raw as usize]) % n;
        self.el(self.exp[k as usize])
    }

    pub fn inv(&self, x: Element) -> Result<Element, FieldError> {
        if x.raw == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.order - 1;
        let k = (n - self.log[x.raw as usize]) % n;
        Ok(self.el(self.exp[k as usize]))
    }

    /// `x / y`; panics when `y = 0`.
    pub fn div(&self, x: Element, y: Element) -> Element {
        self.mul(x, self.inv(y).expect("division by zero"))
    }

    pub fn pow(&self, x: Element, k: u64) -> Element {
        if k == 0 {
            return self.one();
        }
        if x.raw == 0 {
            return self.zero();
        }
        let n = u64::from(self.order - 1);
        let l = u64::from(self.log[x.raw as usize]) * (k % n) % n;
        self.el(self.exp[l as usize])
    }

    pub fn try_add(&self, x: Element, y: Element) -> Result<Element, FieldError> {
        self.check(x, y)?;
        Ok(self.add(x, y))
    }

    pub fn try_mul(&self, x: Element, y: Element) -> Result<Element, FieldError> {
        self.check(x, y)?;
        Ok(self.mul(x, y))
    }

    pub fn try_pow(&self, x: Element, k: u64) -> Result<Element, FieldError> {
        self.check(x, x)?;
        Ok(self.pow(x, k))
    }

    pub fn try_inv(&self, x: Element) -> Result<Element, FieldError> {
        self.check(x, x)?;
        self.inv(x)
    }

    /// `x ↦ x^q`.
    pub fn frobenius(&self, x: Element) -> Element {
        self.pow(x, u64::from(self.q))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: Element) -> u64 {
        assert!(!x.is_zero());
        let n = u64::from(self.order - 1);
        let l = u64::from(self.log[x.raw as usize]);
        n / num_integer::gcd(n, l)
    }

    pub fn sqrt(&self, x: Element) -> Option<Element> {
        if x.raw == 0 {
            return Some(x);
        }
        let n = self.order - 1;
        let l = self.log[x.raw as usize];
        if self.p == 2 {
            // n is odd, so halving is invertible mod n.
            let half = if l.is_multiple_of(2) { l / 2 } else { (l + n) / 2 };
            return Some(self.el(self.exp[half as usize]));
        }
        l.is_multiple_of(2).then(|| self.el(self.exp[(l / 2) as usize]))
    }

    /// Roots of `y² + b·y + c` in this field, with multiplicity.
    pub fn quadratic_roots(&self, b: Element, c: Element) -> Vec<(Element, u32)> {
        if self.p == 2 {
            if b.is_zero() {
                let r = self.sqrt(c).expect("squaring is bijective in characteristic 2");
                return vec![(r, 2)];
            }
            // y = b·z with z² + z = c / b²
            let w = self.div(c, self.mul(b, b));
            let z = self.artin_schreier[w.raw as usize];
            if z == NO_LOG {
                return Vec::new();
            }
            let z = self.el(z);
            let mut roots = vec![(self.mul(b, z), 1), (self.mul(b, self.add(z, self.one())), 1)];
            roots.sort();
            return roots;
        }
        let two = self.from_int(2);
        let disc = self.sub(self.mul(b, b), self.mul(self.from_int(4), c));
        let Some(s) = self.sqrt(disc) else {
            return Vec::new();
        };
        let minus_b = self.neg(b);
        if s.is_zero() {
            return vec![(self.div(minus_b, two), 2)];
        }
        let mut roots = vec![
            (self.div(self.add(minus_b, s), two), 1),
            (self.div(self.sub(minus_b, s), two), 1),
        ];
        roots.sort();
        roots
    }

    /// Evaluates a polynomial with coefficients in this field (little-endian).
    pub fn eval(&self, poly: &[Element], x: Element) -> Element {
        poly.iter()
            .rev()
            .fold(self.zero(), |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Synthetic division by `(X - r)`; returns the quotient if `r` is a root.
    pub fn divide_by_root(&self, poly: &[Element], r: Element) -> Option<Vec<Element>> {
        if poly.len() < 2 {
            return None;
        }
        let mut quotient = vec![self.zero(); poly.len() - 1];
        let mut carry = self.zero();
        for i in (1..poly.len()).rev() {
            carry = self.add(self.mul(carry, r), poly[i]);
            quotient[i - 1] = carry;
        }
        let rem = self.add(self.mul(carry, r), poly[0]);
        rem.is_zero().then_some(quotient)
    }
}

/// `F_q` together with `F_{q²}` and `F_{q³}`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    spec: FieldSpec,
    fields: [GaloisField; 3],
}

impl FieldTower {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        let q = spec.q();
        checked_pow(q, 3)?;
        let (p, e) = (spec.p, spec.e);
        let m = spec.modulus.clone();
        let base = GaloisField::from_slow_mul(p, e, q, 1, vec![0, 1], |a, b| {
            let da = digits(a, p, e as usize);
            let db = digits(b, p, e as usize);
            let mut prod = vec![0u32; 2 * e as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((u64::from(prod[i + j]) + u64::from(x) * u64::from(y))
                        % u64::from(p)) as u32;
                }
            }
            undigits(&poly_rem_mod_p(&prod, &m, p), p)
        });
        let ext = |d: u32| -> GaloisField {
            let modulus = smallest_irreducible_over(&base, d);
            let md: Vec<Element> = modulus.iter().map(|&r| base.el(r)).collect();
            let bref = &base;
            GaloisField::from_slow_mul(p, e, q, d, modulus.clone(), move |a, b| {
                let da: Vec<Element> = digits(a, q, d as usize).into_iter().map(|r| bref.el(r)).collect();
                let db: Vec<Element> = digits(b, q, d as usize).into_iter().map(|r| bref.el(r)).collect();
                let mut prod = vec![bref.zero(); 2 * d as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = bref.add(prod[i + j], bref.mul(x, y));
                    }
                }
                for k in (d as usize..prod.len()).rev() {
                    let lead = prod[k];
                    if lead.is_zero() {
                        continue;
                    }
                    for (i, &c) in md[..d as usize].iter().enumerate() {
                        let idx = k - d as usize + i;
                        prod[idx] = bref.sub(prod[idx], bref.mul(lead, c));
                    }
                    prod[k] = bref.zero();
                }
                undigits(&prod[..d as usize].iter().map(|x| x.raw).collect::<Vec<_>>(), q)
            })
        };
        let f2 = ext(2);
        let f3 = ext(3);
        Ok(FieldTower {
            spec,
            fields: [base, f2, f3],
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> u32 {
        self.spec.q()
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn base(&self) -> &GaloisField {
        &self.fields[0]
    }

    /// `F_{q^d}`; panics unless `d ∈ {1, 2, 3}`.
    pub fn field(&self, d: u8) -> &GaloisField {
        &self.fields[usize::from(d) - 1]
    }

    pub fn try_field(&self, d: u32) -> Result<&GaloisField, FieldError> {
        match d {
            1..=3 => Ok(&self.fields[d as usize - 1]),
            _ => Err(FieldError::UnsupportedDegree(d)),
        }
    }

    pub fn enumerate(&self, d: u32) -> Result<Vec<Element>, FieldError> {
        Ok(self.try_field(d)?.elements().collect())
    }

    /// Views an element of `F_q` inside `F_{q^d}`.
    pub fn embed(&self, x: Element, d: u8) -> Element {
        assert_eq!(x.degree, 1, "only base-field elements embed");
        self.field(d).el(x.raw)
    }

    /// The element of `F_q` equal to `x`, if `x` lies in the base field.
    pub fn descend(&self, x: Element) -> Option<Element> {
        (x.raw < self.q()).then(|| self.base().el(x.raw))
    }

    /// Roots in `F_{q^d}` of a polynomial over `F_q` (little-endian), with
    /// multiplicities. Exhaustive scan; multiplicity by repeated exact
    /// division.
    ///
    /// Panics on the zero polynomial.
    pub fn find_roots(&self, poly: &[Element], d: u32) -> Result<Vec<(Element, u32)>, FieldError> {
        assert!(poly.iter().any(|c| !c.is_zero()), "zero polynomial has no finite root set");
        let field = self.try_field(d)?;
        let lifted: Vec<Element> = poly.iter().map(|&c| self.embed(c, d as u8)).collect();
        let mut roots = Vec::new();
        for r in field.elements() {
            if !field.eval(&lifted, r).is_zero() {
                continue;
            }
            let mut mult = 0;
            let mut cur = lifted.clone();
            while let Some(next) = field.divide_by_root(&cur, r) {
                mult += 1;
                cur = next;
            }
            roots.push((r, mult));
        }
        Ok(roots)
    }
}

fn smallest_irreducible_over(base: &GaloisField, d: u32) -> Vec<u32> {
    let q = base.order;
    for v in 0..q.pow(d) {
        let mut m: Vec<u32> = digits(v, q, d as usize);
        m.push(1);
        let poly: Vec<Element> = m.iter().map(|&r| base.el(r)).collect();
        // degree 2 and 3: irreducible iff rootless
        if base.elements().all(|x| !base.eval(&poly, x).is_zero()) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
