//! Elliptic curves in long Weierstrass form
//! `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` over `F_q`, with points over
//! `F_q`, `F_{q²}`, `F_{q³}`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::finitefield::{Element, FieldError, FieldTower, GaloisField};

/// Largest `q³` for which points are enumerated exhaustively.
pub const MAX_ENUMERATION: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("singular Weierstrass equation (discriminant is zero)")]
    Singular,
    #[error("points over different fields: degree {0} and degree {1}")]
    MixedDegrees(u8, u8),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("q^3 = {0} exceeds the enumeration limit")]
    TooLarge(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    /// The point `O` at infinity.
    Infinity,
    Affine { x: Element, y: Element },
}

impl CurvePoint {
    pub fn is_infinity(self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// Degree tag of the coordinates; `None` for `O`, which lives everywhere.
    pub fn degree(self) -> Option<u8> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x.degree()),
        }
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({:?}, {:?})", x, y),
        }
    }
}

/// A Frobenius orbit of geometric points, listed from its least member.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedPoint {
    orbit: Vec<CurvePoint>,
}

impl ClosedPoint {
    /// The degree-1 closed point at a rational point.
    pub fn rational(p: CurvePoint) -> Self {
        debug_assert!(p.degree().is_none_or(|d| d == 1));
        ClosedPoint { orbit: vec![p] }
    }

    pub fn degree(&self) -> u32 {
        self.orbit.len() as u32
    }

    pub fn representative(&self) -> CurvePoint {
        self.orbit[0]
    }

    /// `[P, φ(P), φ²(P), …]` with `P` the least point of the orbit.
    pub fn orbit(&self) -> &[CurvePoint] {
        &self.orbit
    }
}

/// Effective divisor as a sorted list of closed points with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Divisor {
    parts: Vec<(ClosedPoint, u32)>,
}

impl Divisor {
    pub fn new(parts: impl IntoIterator<Item = (ClosedPoint, u32)>) -> Self {
        let mut merged: Vec<(ClosedPoint, u32)> = Vec::new();
        let mut all: Vec<(ClosedPoint, u32)> = parts.into_iter().filter(|p| p.1 > 0).collect();
        all.sort();
        for (c, m) in all {
            match merged.last_mut() {
                Some((last, lm)) if *last == c => *lm += m,
                _ => merged.push((c, m)),
            }
        }
        Divisor { parts: merged }
    }

    pub fn parts(&self) -> &[(ClosedPoint, u32)] {
        &self.parts
    }

    pub fn degree(&self) -> u32 {
        self.parts.iter().map(|(c, m)| c.degree() * m).sum()
    }

    /// True if `other ≤ self` coefficientwise.
    pub fn contains(&self, other: &Divisor) -> bool {
        other.parts.iter().all(|(c, m)| {
            self.parts
                .iter()
                .any(|(c2, m2)| c2 == c && m2 >= m)
        })
    }
}

#[derive(Clone)]
pub struct Curve {
    tower: Arc<FieldTower>,
    /// `[a1, a2, a3, a4, a6]` in `F_q`.
    coeffs: [Element; 5],
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve(q={}, a={:?})", self.q(), self.coeffs)
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.tower.spec() == other.tower.spec() && self.coeffs == other.coeffs
    }
}

impl Curve {
    pub fn new(tower: Arc<FieldTower>, coeffs: [Element; 5]) -> Result<Self, CurveError> {
        let q = u64::from(tower.q());
        if q.pow(3) > MAX_ENUMERATION {
            return Err(CurveError::TooLarge(q.pow(3)));
        }
        if coeffs.iter().any(|c| !tower.base().contains(*c)) {
            return Err(FieldError::MixedFields { left: 1, right: 0 }.into());
        }
        let curve = Curve { tower, coeffs };
        if curve.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(curve)
    }

    /// Coefficients given as raw base-field values.
    pub fn from_raw(tower: Arc<FieldTower>, raw: [u32; 5]) -> Result<Self, CurveError> {
        let base = tower.base();
        let mut coeffs = [base.zero(); 5];
        for (c, r) in coeffs.iter_mut().zip(raw) {
            *c = base
                .from_raw(r)
                .ok_or(FieldError::BadCoordinates(vec![r]))?;
        }
        Self::new(tower, coeffs)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn coefficients(&self) -> [Element; 5] {
        self.coeffs
    }

    fn a(&self, i: usize, d: u8) -> Element {
        self.tower.embed(self.coeffs[i], d)
    }

    pub fn discriminant(&self) -> Element {
        discriminant(self.tower.base(), self.coeffs)
    }

    /// Right-hand side `x³ + a2·x² + a4·x + a6` and the linear term
    /// `a1·x + a3` of the quadratic in `y`.
    fn fiber_quadratic(&self, x: Element) -> (Element, Element) {
        let d = x.degree();
        let k = self.tower.field(d);
        let rhs = k.add(
            k.mul(k.add(k.mul(k.add(x, self.a(1, d)), x), self.a(3, d)), x),
            self.a(4, d),
        );
        let lin = k.add(k.mul(self.a(0, d), x), self.a(2, d));
        (rhs, lin)
    }

    /// Points `(x, y)` over the field of `x`, with multiplicity 2 for a
    /// ramified `y`.
    pub fn points_over_x(&self, x: Element) -> Vec<(CurvePoint, u32)> {
        let k = self.tower.field(x.degree());
        let (rhs, lin) = self.fiber_quadratic(x);
        k.quadratic_roots(lin, k.neg(rhs))
            .into_iter()
            .map(|(y, m)| (CurvePoint::Affine { x, y }, m))
            .collect()
    }

    pub fn is_on_curve(&self, p: CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                if x.degree() != y.degree() {
                    return false;
                }
                let k = self.tower.field(x.degree());
                let (rhs, lin) = self.fiber_quadratic(x);
                k.add(k.mul(y, y), k.mul(lin, y)) == rhs
            }
        }
    }

    pub fn neg(&self, p: CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => p,
            CurvePoint::Affine { x, y } => {
                let d = x.degree();
                let k = self.tower.field(d);
                let y2 = k.sub(k.neg(y), k.add(k.mul(self.a(0, d), x), self.a(2, d)));
                CurvePoint::Affine { x, y: y2 }
            }
        }
    }

    /// Slope and intercept of the chord (tangent when `P = Q`) through two
    /// affine points, or `None` when it is vertical.
    pub fn line_through(&self, p: CurvePoint, q: CurvePoint) -> Option<(Element, Element)> {
        let (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) = (p, q)
        else {
            return None;
        };
        let d = x1.degree();
        let k = self.tower.field(d);
        let lambda = if x1 != x2 {
            k.div(k.sub(y2, y1), k.sub(x2, x1))
        } else if y1 == y2 {
            // λ = (3x² + 2a2·x + a4 − a1·y) / (2y + a1·x + a3)
            let den = k.add(
                k.add(k.mul(k.from_int(2), y1), k.mul(self.a(0, d), x1)),
                self.a(2, d),
            );
            if den.is_zero() {
                return None;
            }
            let num = k.sub(
                k.add(
                    k.add(
                        k.mul(k.from_int(3), k.mul(x1, x1)),
                        k.mul(k.mul(k.from_int(2), self.a(1, d)), x1),
                    ),
                    self.a(3, d),
                ),
                k.mul(self.a(0, d), y1),
            );
            k.div(num, den)
        } else {
            return None;
        };
        let nu = k.sub(y1, k.mul(lambda, x1));
        Some((lambda, nu))
    }

    pub fn add(&self, p: CurvePoint, q: CurvePoint) -> Result<CurvePoint, CurveError> {
        match (p.degree(), q.degree()) {
            (Some(a), Some(b)) if a != b => return Err(CurveError::MixedDegrees(a, b)),
            _ => {}
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: CurvePoint, q: CurvePoint) -> CurvePoint {
        let (x1, x2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q,
            (_, CurvePoint::Infinity) => return p,
            (CurvePoint::Affine { x: x1, .. }, CurvePoint::Affine { x: x2, .. }) => (x1, x2),
        };
        let Some((lambda, nu)) = self.line_through(p, q) else {
            return CurvePoint::Infinity;
        };
        let d = x1.degree();
        let k = self.tower.field(d);
        let x3 = k.sub(
            k.sub(
                k.sub(k.add(k.mul(lambda, lambda), k.mul(self.a(0, d), lambda)), self.a(1, d)),
                x1,
            ),
            x2,
        );
        let y3 = k.sub(
            k.neg(k.mul(k.add(lambda, self.a(0, d)), x3)),
            k.add(nu, self.a(2, d)),
        );
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn mul(&self, n: u64, p: CurvePoint) -> CurvePoint {
        let mut acc = CurvePoint::Infinity;
        let mut base = p;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_unchecked(acc, base);
            }
            base = self.add_unchecked(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, p: CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => p,
            CurvePoint::Affine { x, y } => {
                let k = self.tower.field(x.degree());
                CurvePoint::Affine {
                    x: k.frobenius(x),
                    y: k.frobenius(y),
                }
            }
        }
    }

    /// The rational point equal to `p`, if its coordinates lie in `F_q`.
    pub fn descend(&self, p: CurvePoint) -> Option<CurvePoint> {
        match p {
            CurvePoint::Infinity => Some(p),
            CurvePoint::Affine { x, y } => Some(CurvePoint::Affine {
                x: self.tower.descend(x)?,
                y: self.tower.descend(y)?,
            }),
        }
    }

    /// Views a rational point over `F_{q^d}`.
    pub fn lift(&self, p: CurvePoint, d: u8) -> CurvePoint {
        match p {
            CurvePoint::Infinity => p,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: self.tower.embed(x, d),
                y: self.tower.embed(y, d),
            },
        }
    }

    /// `C̄(F_{q^d})`: `O` first, then affine points by `(x, y)`.
    pub fn points(&self, d: u32) -> Result<Vec<CurvePoint>, CurveError> {
        let k = self.tower.try_field(d)?;
        let mut pts = vec![CurvePoint::Infinity];
        for x in k.elements() {
            pts.extend(self.points_over_x(x).into_iter().map(|(p, _)| p));
        }
        Ok(pts)
    }

    pub fn count_points(&self, d: u32) -> Result<u64, CurveError> {
        let k = self.tower.try_field(d)?;
        let mut n = 1u64;
        for x in k.elements() {
            n += self.points_over_x(x).len() as u64;
        }
        Ok(n)
    }

    /// `a = q + 1 − N₁`.
    pub fn trace(&self) -> i64 {
        i64::from(self.q()) + 1 - self.count_points(1).expect("degree 1") as i64
    }

    /// Closed points of exact degree `d`, sorted by representative.
    pub fn closed_points(&self, d: u32) -> Result<Vec<ClosedPoint>, CurveError> {
        let pts = self.points(d)?;
        if d == 1 {
            return Ok(pts.into_iter().map(|p| ClosedPoint { orbit: vec![p] }).collect());
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for p in pts {
            if seen.contains(&p) || self.descend(p).is_some() {
                continue;
            }
            let cp = self.closed_point_of(p);
            // d ∈ {2, 3} is prime, so non-rational means exact degree d.
            debug_assert_eq!(cp.degree(), d);
            seen.extend(cp.orbit.iter().copied());
            out.push(cp);
        }
        out.sort();
        Ok(out)
    }

    /// The closed point through a geometric point.
    pub fn closed_point_of(&self, p: CurvePoint) -> ClosedPoint {
        if let Some(r) = self.descend(p) {
            return ClosedPoint { orbit: vec![r] };
        }
        let mut orbit = vec![p];
        let mut cur = self.frobenius(p);
        while cur != p {
            orbit.push(cur);
            cur = self.frobenius(cur);
        }
        let start = (0..orbit.len()).min_by_key(|&i| orbit[i]).unwrap();
        orbit.rotate_left(start);
        ClosedPoint { orbit }
    }

    /// Sum of the geometric points of a closed point; rational.
    pub fn trace_point(&self, c: &ClosedPoint) -> CurvePoint {
        let s = c
            .orbit
            .iter()
            .fold(CurvePoint::Infinity, |acc, &p| self.add_unchecked(acc, p));
        self.descend(s).expect("Frobenius-stable sum is rational")
    }

    /// Image of an effective divisor in `Jac(C̄)(F_q) ≅ C̄(F_q)`.
    pub fn divisor_sum(&self, d: &Divisor) -> CurvePoint {
        d.parts().iter().fold(CurvePoint::Infinity, |acc, (c, m)| {
            self.add_unchecked(acc, self.mul(u64::from(*m), self.trace_point(c)))
        })
    }

    /// `#{P ∈ C̄(F_q) : m·P = O}`.
    pub fn torsion_count(&self, m: u64) -> u64 {
        self.points(1)
            .expect("degree 1")
            .into_iter()
            .filter(|&p| self.mul(m, p).is_infinity())
            .count() as u64
    }

    pub fn field(&self, d: u8) -> &GaloisField {
        self.tower.field(d)
    }
}

/// `Δ` of a long Weierstrass equation.
pub fn discriminant(k: &GaloisField, a: [Element; 5]) -> Element {
    let [a1, a2, a3, a4, a6] = a;
    let c = |n: i64| k.from_int(n);
    let b2 = k.add(k.mul(a1, a1), k.mul(c(4), a2));
    let b4 = k.add(k.mul(c(2), a4), k.mul(a1, a3));
    let b6 = k.add(k.mul(a3, a3), k.mul(c(4), a6));
    let b8 = k.sub(
        k.add(
            k.add(k.mul(k.mul(a1, a1), a6), k.mul(c(4), k.mul(a2, a6))),
            k.mul(a2, k.mul(a3, a3)),
        ),
        k.add(k.mul(a1, k.mul(a3, a4)), k.mul(a4, a4)),
    );
    let t1 = k.neg(k.mul(k.mul(b2, b2), b8));
    let t2 = k.mul(c(8), k.mul(b4, k.mul(b4, b4)));
    let t3 = k.mul(c(27), k.mul(b6, b6));
    let t4 = k.mul(c(9), k.mul(b2, k.mul(b4, b6)));
    k.add(k.sub(k.sub(t1, t2), t3), t4)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::finitefield::FieldSpec;

    pub(crate) fn curve(p: u32, e: u32, raw: [u32; 5]) -> Curve {
        let tower = Arc::new(FieldTower::new(FieldSpec::new(p, e).unwrap()).unwrap());
        Curve::from_raw(tower, raw).unwrap()
    }

    fn pt(c: &Curve, x: u32, y: u32) -> CurvePoint {
        let k = c.field(1);
        let p = CurvePoint::Affine {
            x: k.from_raw(x).unwrap(),
            y: k.from_raw(y).unwrap(),
        };
        assert!(c.is_on_curve(p));
        p
    }

    #[test]
    fn negation() {
        let c = curve(2, 1, [0, 0, 1, 0, 0]);
        assert_eq!(c.neg(pt(&c, 0, 0)), pt(&c, 0, 1));
        assert_eq!(c.neg(CurvePoint::Infinity), CurvePoint::Infinity);
        // y² = x³ − x over F₃
        let c3 = curve(3, 1, [0, 0, 0, 2, 0]);
        assert_eq!(c3.neg(pt(&c3, 1, 0)), pt(&c3, 1, 0));
    }

    #[test]
    fn addition_on_supersingular_f2_curve() {
        let c = curve(2, 1, [0, 0, 1, 0, 0]);
        let p = pt(&c, 0, 0);
        assert_eq!(c.add(p, CurvePoint::Infinity).unwrap(), p);
        assert_eq!(c.add(p, pt(&c, 0, 1)).unwrap(), CurvePoint::Infinity);
        // tangent at (0,0) is y = 0, meeting the curve three times there
        assert_eq!(c.add(p, p).unwrap(), pt(&c, 0, 1));
        let q = c.lift(p, 2);
        assert_eq!(c.add(p, q), Err(CurveError::MixedDegrees(1, 2)));
    }

    #[test]
    fn point_counts() {
        let c = curve(2, 1, [0, 0, 1, 0, 0]);
        assert_eq!(c.count_points(1).unwrap(), 3);
        assert_eq!(c.count_points(2).unwrap(), 9);
        assert_eq!(c.count_points(3).unwrap(), 9);
        let c3 = curve(3, 1, [0, 0, 0, 2, 0]);
        assert_eq!(c3.count_points(1).unwrap(), 4);
        assert_eq!(c3.trace(), 0);
    }

    #[test]
    fn closed_point_counts() {
        let c = curve(2, 1, [0, 0, 1, 0, 0]);
        assert_eq!(c.closed_points(1).unwrap().len(), 3);
        assert_eq!(c.closed_points(2).unwrap().len(), 3);
        assert_eq!(c.closed_points(3).unwrap().len(), 2);
        for cp in c.closed_points(3).unwrap() {
            assert_eq!(cp.orbit().len(), 3);
            assert_eq!(c.frobenius(cp.orbit()[2]), cp.orbit()[0]);
        }
    }

    #[test]
    fn torsion() {
        let c = curve(2, 1, [0, 0, 1, 0, 0]);
        assert_eq!(c.torsion_count(2), 1);
        assert_eq!(c.torsion_count(3), 3);
        let c3 = curve(3, 1, [0, 0, 0, 2, 0]);
        assert_eq!(c3.torsion_count(2), 4);
    }

    #[test]
    fn singular_rejected() {
        let tower = Arc::new(FieldTower::new(FieldSpec::new(2, 1).unwrap()).unwrap());
        assert_eq!(Curve::from_raw(tower, [0, 0, 0, 0, 0]).unwrap_err(), CurveError::Singular);
    }

    #[test]
    fn divisor_merges_parts() {
        let c = curve(2, 1, [0, 0, 1, 0, 0]);
        let o = c.closed_point_of(CurvePoint::Infinity);
        let d = Divisor::new([(o.clone(), 1), (o.clone(), 2)]);
        assert_eq!(d.parts(), &[(o.clone(), 3)]);
        assert_eq!(d.degree(), 3);
        assert!(d.contains(&Divisor::new([(o, 2)])));
    }
}
