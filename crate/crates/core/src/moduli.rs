//! Explicit coordinates on the three moduli spaces of rank-3 bundle data on
//! a genus-one curve: `Sym²C̄` (edges), `C̄ ≅ Jac` (one side) and
//! `P² = P(H⁰(O(3O)))` (the other side).
//!
//! A point `(a:b:c)` of `P²` is the section `a + b·x + c·y` of `O(3O)`; its
//! zero divisor is an effective divisor of degree 3 summing to `O`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ellcurve::{ClosedPoint, Curve, CurveError, CurvePoint, Divisor};
use crate::finitefield::{Element, FieldTower, GaloisField};
use crate::grouphlgy::{Atom, GroupDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("divisor of degree {degree} with shape {shape} is not a section divisor")]
    MalformedDivisor { degree: u32, shape: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Effective degree-2 divisor over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym2Divisor {
    /// `P + Q` with rational `P ≤ Q`.
    Pair(CurvePoint, CurvePoint),
    /// A closed point of degree 2.
    Conjugate(ClosedPoint),
}

impl Sym2Divisor {
    pub fn pair(p: CurvePoint, q: CurvePoint) -> Self {
        if p <= q {
            Sym2Divisor::Pair(p, q)
        } else {
            Sym2Divisor::Pair(q, p)
        }
    }

    pub fn divisor(&self) -> Divisor {
        match self {
            Sym2Divisor::Pair(p, q) => Divisor::new([(rational(*p), 1), (rational(*q), 1)]),
            Sym2Divisor::Conjugate(c) => Divisor::new([(c.clone(), 1)]),
        }
    }

    /// The two geometric points, over `F_q` or `F_{q²}`.
    pub fn geometric_points(&self) -> (CurvePoint, CurvePoint) {
        match self {
            Sym2Divisor::Pair(p, q) => (*p, *q),
            Sym2Divisor::Conjugate(c) => (c.orbit()[0], c.orbit()[1]),
        }
    }
}

fn rational(p: CurvePoint) -> ClosedPoint {
    ClosedPoint::rational(p)
}

/// All of `Sym²C̄(F_q)`: rational pairs in order, then degree-2 points.
pub fn enumerate_sym2(curve: &Curve) -> Result<Vec<Sym2Divisor>, ModuliError> {
    let pts = curve.points(1)?;
    let mut out = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i..] {
            out.push(Sym2Divisor::Pair(p, q));
        }
    }
    out.extend(curve.closed_points(2)?.into_iter().map(Sym2Divisor::Conjugate));
    Ok(out)
}

/// `α(D) = P ⊕ Q`, the determinant-line coordinate.
pub fn alpha(curve: &Curve, d: &Sym2Divisor) -> CurvePoint {
    match d {
        Sym2Divisor::Pair(p, q) => curve.add(*p, *q).expect("rational points"),
        Sym2Divisor::Conjugate(c) => curve.trace_point(c),
    }
}

/// A point of `P²(F_q)` with first nonzero coordinate 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct P2Point {
    coords: [Element; 3],
}

impl P2Point {
    /// Normalizes; `None` for the zero vector.
    pub fn new(k: &GaloisField, v: [Element; 3]) -> Option<Self> {
        let lead = *v.iter().find(|c| !c.is_zero())?;
        let inv = k.inv(lead).ok()?;
        Some(P2Point {
            coords: v.map(|c| k.mul(c, inv)),
        })
    }

    pub fn coords(&self) -> [Element; 3] {
        self.coords
    }
}

impl fmt::Display for P2Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coords;
        write!(f, "{}:{}:{}", a.raw(), b.raw(), c.raw())
    }
}

/// `P²(F_q)` in normalized form, sorted.
pub fn enumerate_p2(tower: &FieldTower) -> Vec<P2Point> {
    let k = tower.base();
    let mut out = Vec::new();
    for a in k.elements() {
        for b in k.elements() {
            for c in k.elements() {
                if let Some(p) = P2Point::new(k, [a, b, c]) {
                    if p.coords == [a, b, c] {
                        out.push(p);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// A point `(a:b)` of `P¹(F_q)`, the section `a + b·x` of `O(2O)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct P1Point {
    coords: [Element; 2],
}

impl P1Point {
    pub fn new(k: &GaloisField, v: [Element; 2]) -> Option<Self> {
        let lead = *v.iter().find(|c| !c.is_zero())?;
        let inv = k.inv(lead).ok()?;
        Some(P1Point {
            coords: v.map(|c| k.mul(c, inv)),
        })
    }

    pub fn coords(&self) -> [Element; 2] {
        self.coords
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.coords[0].raw(), self.coords[1].raw())
    }
}

pub fn enumerate_p1(tower: &FieldTower) -> Vec<P1Point> {
    let k = tower.base();
    let mut out = vec![P1Point {
        coords: [k.one(), k.zero()],
    }];
    out.extend(k.elements().map(|a| P1Point { coords: [a, k.one()] }));
    out.sort();
    out
}

/// Zero divisor of `a + b·x + c·y`, a degree-3 divisor summing to `O`.
pub fn section_zero_divisor(curve: &Curve, s: &P2Point) -> Divisor {
    let k = curve.field(1);
    let [a, b, c] = s.coords;
    if c.is_zero() {
        if b.is_zero() {
            return Divisor::new([(rational(CurvePoint::Infinity), 3)]);
        }
        let mut d = vertical_zeros(curve, k.neg(k.div(a, b)));
        d.push((rational(CurvePoint::Infinity), 1));
        return Divisor::new(d);
    }
    // On y = m·x + n the equation becomes a monic cubic in x.
    let m = k.neg(k.div(b, c));
    let n = k.neg(k.div(a, c));
    let [a1, a2, a3, a4, a6] = curve.coefficients();
    let c2 = k.neg(k.sub(k.add(k.mul(m, m), k.mul(a1, m)), a2));
    let c1 = k.neg(k.sub(
        k.add(
            k.add(k.mul(k.from_int(2), k.mul(m, n)), k.mul(a1, n)),
            k.mul(a3, m),
        ),
        a4,
    ));
    let c0 = k.neg(k.sub(k.add(k.mul(n, n), k.mul(a3, n)), a6));
    let mut cubic = vec![c0, c1, c2, k.one()];
    let tower = curve.tower();
    let on_line = |x: Element| -> CurvePoint {
        let kd = tower.field(x.degree());
        let d = x.degree();
        CurvePoint::Affine {
            x,
            y: kd.add(kd.mul(tower.embed(m, d), x), tower.embed(n, d)),
        }
    };
    let mut parts = Vec::new();
    for (r, mult) in tower.find_roots(&cubic, 1).expect("degree 1") {
        parts.push((rational(on_line(r)), mult));
        for _ in 0..mult {
            cubic = k.divide_by_root(&cubic, r).expect("root");
        }
    }
    let rest = cubic.len() - 1;
    if rest > 0 {
        let roots = tower.find_roots(&cubic, rest as u32).expect("degree 2 or 3");
        let p = on_line(roots[0].0);
        parts.push((curve.closed_point_of(p), 1));
    }
    Divisor::new(parts)
}

/// Affine zeros of `x − x0`, each with its multiplicity.
fn vertical_zeros(curve: &Curve, x0: Element) -> Vec<(ClosedPoint, u32)> {
    let here = curve.points_over_x(x0);
    if !here.is_empty() {
        return here.into_iter().map(|(p, m)| (rational(p), m)).collect();
    }
    let lifted = curve.tower().embed(x0, 2);
    let (p, _) = curve.points_over_x(lifted)[0];
    vec![(curve.closed_point_of(p), 1)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VertexType {
    /// Three distinct rational points.
    T1,
    /// `2P + Q`.
    T2,
    /// `3P`.
    T3,
    /// A rational point and a degree-2 point.
    T4,
    /// One degree-3 point.
    T5,
}

impl VertexType {
    pub const ALL: [VertexType; 5] = [
        VertexType::T1,
        VertexType::T2,
        VertexType::T3,
        VertexType::T4,
        VertexType::T5,
    ];

    pub fn automorphisms(self) -> GroupDescriptor {
        use Atom::*;
        GroupDescriptor::new(match self {
            VertexType::T1 => vec![Units(1); 3],
            VertexType::T2 => vec![GL2, Units(1)],
            VertexType::T3 => vec![GL3],
            VertexType::T4 => vec![Units(2), Units(1)],
            VertexType::T5 => vec![Units(3)],
        })
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Automorphism group of every edge bundle: two tori and a unipotent part.
pub fn edge_automorphisms() -> GroupDescriptor {
    GroupDescriptor::new([Atom::Units(1); 2]).with_unipotent()
}

/// Automorphism group of every line-bundle-sum vertex on the Jacobian side.
pub fn jac_automorphisms() -> GroupDescriptor {
    GroupDescriptor::new([Atom::Units(1); 2])
}

/// Type of the vertex whose section has zero divisor `t`.
pub fn classify_vertex(t: &Divisor) -> Result<(VertexType, GroupDescriptor), ModuliError> {
    let mut shape: Vec<(u32, u32)> = t.parts().iter().map(|(c, m)| (c.degree(), *m)).collect();
    shape.sort();
    let ty = match shape.as_slice() {
        [(1, 1), (1, 1), (1, 1)] => VertexType::T1,
        [(1, 1), (1, 2)] => VertexType::T2,
        [(1, 3)] => VertexType::T3,
        [(1, 1), (2, 1)] => VertexType::T4,
        [(3, 1)] => VertexType::T5,
        _ => {
            return Err(ModuliError::MalformedDivisor {
                degree: t.degree(),
                shape: format!("{shape:?}"),
            })
        }
    };
    Ok((ty, ty.automorphisms()))
}

/// `β(D)`: the section of `O(3O)` through `D`, i.e. the line through the two
/// points (the tangent for a double point), or `x − x_P` when that line is
/// vertical.
pub fn beta(curve: &Curve, d: &Sym2Divisor) -> P2Point {
    let k = curve.field(1);
    let tower = curve.tower();
    let (p, q) = d.geometric_points();
    let raw: [Element; 3] = match (p, q) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => [k.one(), k.zero(), k.zero()],
        (CurvePoint::Infinity, CurvePoint::Affine { x, .. }) => [k.neg(x), k.one(), k.zero()],
        (CurvePoint::Affine { .. }, CurvePoint::Infinity) => unreachable!("O sorts first"),
        (CurvePoint::Affine { x, .. }, _) => match curve.line_through(p, q) {
            None => {
                let x = tower.descend(x).expect("vertical pair has a rational x");
                [k.neg(x), k.one(), k.zero()]
            }
            Some((lambda, nu)) => {
                let down = |v: Element| tower.descend(v).expect("Frobenius-stable line");
                [k.neg(down(nu)), k.neg(down(lambda)), k.one()]
            }
        },
    };
    P2Point::new(k, raw).expect("nonzero section")
}

/// Stabilizer type of the rank-2 bundle attached to a point of `P¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gl2Type {
    /// `L ⊕ L'` with `L ≇ L'`.
    SplitTorus,
    /// `L ⊕ L`.
    FullGL2,
    /// Pushforward from a degree-2 point.
    QuadraticUnits,
}

impl Gl2Type {
    pub fn automorphisms(self) -> GroupDescriptor {
        GroupDescriptor::new(match self {
            Gl2Type::SplitTorus => vec![Atom::Units(1); 2],
            Gl2Type::FullGL2 => vec![Atom::GL2],
            Gl2Type::QuadraticUnits => vec![Atom::Units(2)],
        })
    }
}

/// Zero divisor of `a + b·x` on `O(2O)`.
pub fn p1_zero_divisor(curve: &Curve, s: &P1Point) -> Divisor {
    let k = curve.field(1);
    let [a, b] = s.coords;
    if b.is_zero() {
        return Divisor::new([(rational(CurvePoint::Infinity), 2)]);
    }
    Divisor::new(vertical_zeros(curve, k.neg(k.div(a, b))))
}

pub fn gl2_point_type(curve: &Curve, s: &P1Point) -> Gl2Type {
    let d = p1_zero_divisor(curve, s);
    match d.parts() {
        [(_, 2)] => Gl2Type::FullGL2,
        [(c, 1)] if c.degree() == 2 => Gl2Type::QuadraticUnits,
        _ => Gl2Type::SplitTorus,
    }
}
