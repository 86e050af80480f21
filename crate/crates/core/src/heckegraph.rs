//! The coloured Hecke graph `Γ(C,k)`: a bipartite multigraph with the
//! rational points of the Jacobian on one side, `P²(F_q)` on the other, and
//! one edge from `α(D)` to `β(D)` for every `D ∈ Sym²C̄(F_q)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ellcurve::{ClosedPoint, Curve, CurveError, CurvePoint};
use crate::finitefield::{Element, FieldSpec, FieldTower};
use crate::grouphlgy::GroupDescriptor;
use crate::moduli::{
    alpha, beta, classify_vertex, edge_automorphisms, enumerate_p2, enumerate_sym2,
    jac_automorphisms, section_zero_divisor, ModuliError, P2Point, Sym2Divisor, VertexType,
};

/// Tag written into every export and report.
pub const MODEL: &str = "line-section";

#[derive(Debug, Error)]
pub enum GraphError {
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P2Vertex {
    pub point: P2Point,
    pub ty: VertexType,
    pub aut: GroupDescriptor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub divisor: Sym2Divisor,
    /// Index into `jac_vertices`.
    pub jac: usize,
    /// Index into `p2_vertices`.
    pub p2: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeckeGraph {
    curve: Curve,
    pub jac_vertices: Vec<CurvePoint>,
    pub p2_vertices: Vec<P2Vertex>,
    pub edges: Vec<Edge>,
}

impl HeckeGraph {
    pub fn build(curve: &Curve) -> Result<Self, GraphError> {
        let jac_vertices = curve.points(1)?;
        let p2_points = enumerate_p2(curve.tower());
        let p2_vertices = p2_points
            .iter()
            .map(|&point| {
                let (ty, aut) = classify_vertex(&section_zero_divisor(curve, &point))?;
                Ok(P2Vertex { point, ty, aut })
            })
            .collect::<Result<Vec<_>, ModuliError>>()?;
        let edges = enumerate_sym2(curve)?
            .into_iter()
            .map(|divisor| {
                let a = alpha(curve, &divisor);
                let b = beta(curve, &divisor);
                Edge {
                    jac: jac_vertices.binary_search(&a).expect("α lands in C̄(F_q)"),
                    p2: p2_points.binary_search(&b).expect("β lands in P²(F_q)"),
                    divisor,
                }
            })
            .collect();
        Ok(HeckeGraph {
            curve: curve.clone(),
            jac_vertices,
            p2_vertices,
            edges,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn q(&self) -> u64 {
        u64::from(self.curve.q())
    }

    pub fn vertex_count(&self) -> usize {
        self.jac_vertices.len() + self.p2_vertices.len()
    }

    pub fn jac_automorphisms(&self) -> GroupDescriptor {
        jac_automorphisms()
    }

    pub fn edge_automorphisms(&self) -> GroupDescriptor {
        edge_automorphisms()
    }

    /// Edges as pairs of global vertex indices (Jac side first).
    pub fn endpoint_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.jac_vertices.len();
        self.edges.iter().map(|e| (e.jac, n + e.p2)).collect()
    }

    pub fn census(&self) -> [usize; 5] {
        let mut c = [0; 5];
        for v in &self.p2_vertices {
            c[v.ty.index()] += 1;
        }
        c
    }

    /// `(h₀, h₁)`.
    pub fn betti(&self) -> (usize, usize) {
        graph_betti(self.vertex_count(), &self.endpoint_pairs())
    }

    /// Number of edges at each Jac vertex and at each `P²` vertex.
    pub fn fiber_census(&self) -> (Vec<usize>, Vec<usize>) {
        let mut a = vec![0; self.jac_vertices.len()];
        let mut b = vec![0; self.p2_vertices.len()];
        for e in &self.edges {
            a[e.jac] += 1;
            b[e.p2] += 1;
        }
        (a, b)
    }

    pub fn report(&self) -> GraphReport {
        let (h0, h1) = self.betti();
        let (a, b) = self.fiber_census();
        let mut alpha_fibers = BTreeMap::new();
        for s in a {
            *alpha_fibers.entry(s).or_insert(0) += 1;
        }
        let mut beta_fibers: BTreeMap<VertexType, BTreeMap<usize, usize>> = BTreeMap::new();
        for (v, s) in self.p2_vertices.iter().zip(b) {
            *beta_fibers.entry(v.ty).or_default().entry(s).or_insert(0) += 1;
        }
        GraphReport {
            q: self.q(),
            model: MODEL.to_string(),
            jac_vertices: self.jac_vertices.len(),
            p2_vertices: self.p2_vertices.len(),
            vertices: self.vertex_count(),
            edges: self.edges.len(),
            h0,
            h1,
            census: self.census(),
            alpha_fibers,
            beta_fibers,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("graph documents serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        let doc: GraphDoc = serde_json::from_str(s)?;
        Self::from_doc(doc)
    }

    fn to_doc(&self) -> GraphDoc {
        let tower = self.curve.tower();
        let k = tower.base();
        GraphDoc {
            p: tower.p(),
            e: tower.spec().e,
            q: tower.q(),
            curve: self.curve.coefficients().iter().map(|&a| k.coords(a)).collect(),
            model: MODEL.to_string(),
            jac_vertices: self.jac_vertices.iter().map(|&p| point_doc(tower, p)).collect(),
            p2_vertices: self
                .p2_vertices
                .iter()
                .map(|v| P2Doc {
                    coords: v.point.coords().iter().map(|&c| k.coords(c)).collect(),
                    label: v.point.to_string(),
                    ty: v.ty,
                    aut: v.aut.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    divisor: match &e.divisor {
                        Sym2Divisor::Pair(p, q) => {
                            DivisorDoc::Pair(vec![point_doc(tower, *p), point_doc(tower, *q)])
                        }
                        Sym2Divisor::Conjugate(c) => DivisorDoc::Orbit(
                            c.orbit().iter().map(|&p| point_doc(tower, p)).collect(),
                        ),
                    },
                    jac: e.jac,
                    p2: e.p2,
                })
                .collect(),
        }
    }

    fn from_doc(doc: GraphDoc) -> Result<Self, GraphError> {
        let bad = |m: &str| GraphError::Malformed(m.to_string());
        if doc.model != MODEL {
            return Err(bad("unknown model"));
        }
        let spec = FieldSpec::new(doc.p, doc.e).map_err(|e| GraphError::Malformed(e.to_string()))?;
        if spec.q() != doc.q {
            return Err(bad("q does not equal p^e"));
        }
        let tower = Arc::new(FieldTower::new(spec).map_err(|e| GraphError::Malformed(e.to_string()))?);
        let k = tower.base();
        let coeffs: Vec<Element> = doc
            .curve
            .iter()
            .map(|c| k.from_coords(c).map_err(|e| GraphError::Malformed(e.to_string())))
            .collect::<Result<_, _>>()?;
        let coeffs: [Element; 5] = coeffs.try_into().map_err(|_| bad("curve needs five coefficients"))?;
        let curve = Curve::new(tower.clone(), coeffs)?;
        let point = |d: &PointDoc| -> Result<CurvePoint, GraphError> {
            let p = parse_point(&tower, d)?;
            if curve.is_on_curve(p) {
                Ok(p)
            } else {
                Err(bad("point not on curve"))
            }
        };
        let jac_vertices = doc.jac_vertices.iter().map(point).collect::<Result<Vec<_>, _>>()?;
        if jac_vertices.iter().any(|p| p.degree().is_some_and(|d| d != 1)) {
            return Err(bad("Jacobian vertices must be rational"));
        }
        let p2_vertices = doc
            .p2_vertices
            .iter()
            .map(|v| {
                let c: Vec<Element> = v
                    .coords
                    .iter()
                    .map(|c| k.from_coords(c).map_err(|e| GraphError::Malformed(e.to_string())))
                    .collect::<Result<_, _>>()?;
                let c: [Element; 3] = c.try_into().map_err(|_| bad("P² point needs three coordinates"))?;
                let point = P2Point::new(k, c).ok_or_else(|| bad("zero P² point"))?;
                if point.coords() != c || point.to_string() != v.label {
                    return Err(bad("P² point not normalized"));
                }
                Ok(P2Vertex {
                    point,
                    ty: v.ty,
                    aut: v.aut.clone(),
                })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        let edges = doc
            .edges
            .iter()
            .map(|e| {
                if e.jac >= jac_vertices.len() || e.p2 >= p2_vertices.len() {
                    return Err(bad("edge endpoint out of range"));
                }
                let divisor = match &e.divisor {
                    DivisorDoc::Pair(pts) => match pts.as_slice() {
                        [a, b] => Sym2Divisor::pair(point(a)?, point(b)?),
                        _ => return Err(bad("pair needs two points")),
                    },
                    DivisorDoc::Orbit(pts) => {
                        let first = point(pts.first().ok_or_else(|| bad("empty orbit"))?)?;
                        let c: ClosedPoint = curve.closed_point_of(first);
                        if c.degree() != 2 || c.orbit().len() != pts.len() {
                            return Err(bad("orbit is not a degree-2 closed point"));
                        }
                        Sym2Divisor::Conjugate(c)
                    }
                };
                Ok(Edge {
                    divisor,
                    jac: e.jac,
                    p2: e.p2,
                })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Ok(HeckeGraph {
            curve,
            jac_vertices,
            p2_vertices,
            edges,
        })
    }

    /// Graphviz rendering: boxes for Jac vertices, ellipses coloured by type
    /// for `P²` vertices.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hecke {\n  node [style=filled];\n");
        for (i, &p) in self.jac_vertices.iter().enumerate() {
            let _ = writeln!(
                out,
                "  j{i} [label=\"{}\", shape=box, fillcolor=\"lightgray\"];",
                point_label(p)
            );
        }
        for (i, v) in self.p2_vertices.iter().enumerate() {
            let _ = writeln!(
                out,
                "  v{i} [label=\"{} {}\", shape=ellipse, fillcolor=\"{}\"];",
                v.point,
                v.ty,
                type_color(v.ty)
            );
        }
        for e in &self.edges {
            let _ = writeln!(out, "  j{} -- v{};", e.jac, e.p2);
        }
        out.push_str("}\n");
        out
    }
}

fn type_color(t: VertexType) -> &'static str {
    match t {
        VertexType::T1 => "palegreen",
        VertexType::T2 => "khaki",
        VertexType::T3 => "salmon",
        VertexType::T4 => "lightblue",
        VertexType::T5 => "plum",
    }
}

/// `O` or `(x,y)` with raw coordinates.
pub fn point_label(p: CurvePoint) -> String {
    match p {
        CurvePoint::Infinity => "O".to_string(),
        CurvePoint::Affine { x, y } => format!("({},{})", x.raw(), y.raw()),
    }
}

/// `(h₀, h₁)` of a multigraph on `n` vertices; self-loops allowed.
pub fn graph_betti(n: usize, edges: &[(usize, usize)]) -> (usize, usize) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    (components, edges.len() + components - n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub q: u64,
    pub model: String,
    pub jac_vertices: usize,
    pub p2_vertices: usize,
    pub vertices: usize,
    pub edges: usize,
    pub h0: usize,
    pub h1: usize,
    /// `(T1, …, T5)`.
    pub census: [usize; 5],
    /// fiber size ↦ number of Jac vertices
    pub alpha_fibers: BTreeMap<usize, usize>,
    /// type ↦ (fiber size ↦ number of vertices)
    pub beta_fibers: BTreeMap<VertexType, BTreeMap<usize, usize>>,
}

impl GraphReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "q = {}   model = {}", self.q, self.model);
        let _ = writeln!(
            s,
            "V = {} ({} jac + {} P2)   E = {}   h0 = {}   h1 = {}",
            self.vertices, self.jac_vertices, self.p2_vertices, self.edges, self.h0, self.h1
        );
        let c = self.census;
        let _ = writeln!(s, "census T1..T5 = ({},{},{},{},{})", c[0], c[1], c[2], c[3], c[4]);
        let fibers: Vec<String> = self.alpha_fibers.iter().map(|(k, v)| format!("{k}×{v}")).collect();
        let _ = writeln!(s, "alpha fibers: {}", fibers.join(" "));
        for (t, m) in &self.beta_fibers {
            let fibers: Vec<String> = m.iter().map(|(k, v)| format!("{k}×{v}")).collect();
            let _ = writeln!(s, "beta fibers {t}: {}", fibers.join(" "));
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    p: u32,
    e: u32,
    q: u32,
    curve: Vec<Vec<u32>>,
    model: String,
    jac_vertices: Vec<PointDoc>,
    p2_vertices: Vec<P2Doc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointDoc {
    Token(String),
    Coords([Vec<u32>; 2]),
}

#[derive(Serialize, Deserialize)]
struct P2Doc {
    coords: Vec<Vec<u32>>,
    label: String,
    #[serde(rename = "type")]
    ty: VertexType,
    aut: GroupDescriptor,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DivisorDoc {
    Pair(Vec<PointDoc>),
    Orbit(Vec<PointDoc>),
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    divisor: DivisorDoc,
    jac: usize,
    p2: usize,
}

fn point_doc(tower: &FieldTower, p: CurvePoint) -> PointDoc {
    match p {
        CurvePoint::Infinity => PointDoc::Token("O".into()),
        CurvePoint::Affine { x, y } => {
            let k = tower.field(x.degree());
            PointDoc::Coords([k.coords(x), k.coords(y)])
        }
    }
}

fn parse_point(tower: &FieldTower, d: &PointDoc) -> Result<CurvePoint, GraphError> {
    let bad = |m: &str| GraphError::Malformed(m.to_string());
    match d {
        PointDoc::Token(t) if t == "O" => Ok(CurvePoint::Infinity),
        PointDoc::Token(t) => Err(GraphError::Malformed(format!("unknown point token {t:?}"))),
        PointDoc::Coords([x, y]) => {
            let e = tower.spec().e as usize;
            if x.is_empty() || x.len() % e != 0 || x.len() != y.len() {
                return Err(bad("coordinate length"));
            }
            let k = tower
                .try_field((x.len() / e) as u32)
                .map_err(|err| GraphError::Malformed(err.to_string()))?;
            let conv = |c: &[u32]| k.from_coords(c).map_err(|err| GraphError::Malformed(err.to_string()));
            Ok(CurvePoint::Affine {
                x: conv(x)?,
                y: conv(y)?,
            })
        }
    }
}
