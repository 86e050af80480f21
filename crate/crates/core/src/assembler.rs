//! Homology assembly: parabolic homology from the Hecke graph of groups,
//! the equivariant homology of the quotient by the parabolic part, the
//! rational `H₂` of `GL₃(F_q[C])` by two independent routes, the `PGL₃`
//! variant, the `PGL₂` direct-sum formula, and the verification report.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::building::{build_building, steinberg_rank, suspension_homology, BuildingError};
use crate::ellcurve::{Curve, CurvePoint};
use crate::exactlin::PoincareSeries;
use crate::grouphlgy::{
    self, central_quotient_series, order_mod, Atom, CoeffField, GroupDescriptor, GroupHomologyError,
};
use crate::heckegraph::{GraphError, GraphReport, HeckeGraph, MODEL};
use crate::moduli::{
    beta, enumerate_p1, enumerate_sym2, gl2_point_type, section_zero_divisor, Gl2Type, VertexType,
};

pub const REPORT_VERSION: u32 = 1;

pub const MODEL_NOTE: &str = "β(D) is the section a + b·x + c·y of O(3O) vanishing on D \
(chord, tangent, or vertical line); P² vertices are classified by the zero divisor of that section";

#[derive(Debug, Error)]
pub enum AssemblerError {
    #[error(transparent)]
    Group(#[from] GroupHomologyError),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ParabolicCase {
    Rational,
    /// `d = ord_ℓ(q) ≥ 2`: edge groups are `ℓ`-acyclic and the sequence splits.
    Split { d: u64 },
    /// `ℓ | q − 1`: only rank bounds are available.
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicHomologyReport {
    /// `"GL3"` or `"PGL3"`.
    pub group: String,
    pub coefficients: CoeffField,
    pub case: ParabolicCase,
    pub truncation: usize,
    pub lower: Vec<u64>,
    pub upper: Vec<u64>,
    pub exact: bool,
    /// Degrees emitted but outside the range where the sequence is valid.
    pub outside_validity: Vec<usize>,
}

impl ParabolicHomologyReport {
    /// Exact dimensions, when known.
    pub fn dims(&self) -> Option<&[u64]> {
        self.exact.then_some(&self.lower[..])
    }
}

fn sums(
    g: &HeckeGraph,
    maxdeg: usize,
    mut series: impl FnMut(&GroupDescriptor) -> Result<PoincareSeries, GroupHomologyError>,
) -> Result<(PoincareSeries, PoincareSeries), GroupHomologyError> {
    let mut memo: HashMap<GroupDescriptor, PoincareSeries> = HashMap::new();
    let mut get = |d: &GroupDescriptor| -> Result<PoincareSeries, GroupHomologyError> {
        if let Some(s) = memo.get(d) {
            return Ok(s.clone());
        }
        let s = series(d)?;
        memo.insert(d.clone(), s.clone());
        Ok(s)
    };
    let mut v = get(&g.jac_automorphisms())?.scale(g.jac_vertices.len() as u64);
    for p in &g.p2_vertices {
        v = v.add(&get(&p.aut)?);
    }
    let e = get(&g.edge_automorphisms())?.scale(g.edges.len() as u64);
    Ok((v.truncate(maxdeg), e.truncate(maxdeg)))
}

fn assemble(
    g: &HeckeGraph,
    coeff: CoeffField,
    maxdeg: usize,
    group: &str,
    series: impl FnMut(&GroupDescriptor) -> Result<PoincareSeries, GroupHomologyError>,
) -> Result<ParabolicHomologyReport, GroupHomologyError> {
    let (h0, h1) = g.betti();
    let (h0, h1) = (h0 as u64, h1 as u64);
    let mut report = ParabolicHomologyReport {
        group: group.to_string(),
        coefficients: coeff,
        case: ParabolicCase::Rational,
        truncation: maxdeg,
        lower: vec![0; maxdeg + 1],
        upper: vec![0; maxdeg + 1],
        exact: true,
        outside_validity: Vec::new(),
    };
    report.lower[0] = h0;
    if maxdeg >= 1 {
        report.lower[1] = h1;
    }
    let ell = match coeff {
        CoeffField::Rational => {
            report.upper = report.lower.clone();
            return Ok(report);
        }
        CoeffField::Prime(l) => {
            CoeffField::prime(l, g.q())?;
            l
        }
    };
    let (v, e) = sums(g, maxdeg, series)?;
    let d = order_mod(g.q(), ell);
    if d >= 2 {
        report.case = ParabolicCase::Split { d };
        debug_assert!((1..=maxdeg).all(|n| e.coefficient(n) == 0));
        for n in 1..=maxdeg {
            report.lower[n] += v.coefficient(n);
        }
        report.upper = report.lower.clone();
    } else {
        report.case = ParabolicCase::Bounded;
        report.exact = false;
        report.upper[0] = h0;
        for n in 1..=maxdeg {
            report.lower[n] = v.coefficient(n).saturating_sub(e.coefficient(n));
            report.upper[n] = v.coefficient(n) + e.coefficient(n - 1);
        }
    }
    Ok(report)
}

/// Parabolic homology `Ĥ_•(GL₃(F_q[C]))` from the graph of groups.
pub fn parabolic_series(
    g: &HeckeGraph,
    coeff: CoeffField,
    maxdeg: usize,
) -> Result<ParabolicHomologyReport, GroupHomologyError> {
    let q = g.q();
    assemble(g, coeff, maxdeg, "GL3", |d| grouphlgy::series(d, q, coeff, maxdeg))
}

/// The same assembly with every stabilizer replaced by its quotient by the
/// scalars; degrees 0–2 are flagged.
pub fn pgl3_parabolic_series(
    g: &HeckeGraph,
    coeff: CoeffField,
    maxdeg: usize,
) -> Result<ParabolicHomologyReport, GroupHomologyError> {
    let q = g.q();
    if let CoeffField::Prime(l) = coeff {
        CoeffField::prime(l, q)?;
        if coeff.divides_q_minus_one(q) {
            return Err(GroupHomologyError::UnsupportedCoefficients {
                ell: l,
                q,
                reason: "ℓ divides q−1: scalar quotients are not split off".into(),
            });
        }
    }
    let mut r = assemble(g, coeff, maxdeg, "PGL3", |d| {
        central_quotient_series(d, q, coeff, maxdeg)
    })?;
    r.outside_validity = (0..=maxdeg.min(2)).collect();
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientHomologyReport {
    pub coefficients: CoeffField,
    pub steinberg_rank: u64,
    pub h1: u64,
    /// Series of `k^× = C_{q−1}`.
    pub units: PoincareSeries,
    pub series: PoincareSeries,
}

/// `S_{k^×}(t) · (1 + t²·(steinberg_rank + h₁))`.
pub fn quotient_homology(
    q: u64,
    steinberg_rank: u64,
    h1: u64,
    coeff: CoeffField,
    maxdeg: usize,
) -> Result<QuotientHomologyReport, GroupHomologyError> {
    let units = grouphlgy::series(&GroupDescriptor::new([Atom::Cyclic(q - 1)]), q, coeff, maxdeg)?;
    let wedge = PoincareSeries::one(maxdeg).add(&PoincareSeries::monomial(2, maxdeg).scale(steinberg_rank + h1));
    Ok(QuotientHomologyReport {
        coefficients: coeff,
        steinberg_rank,
        h1,
        series: units.mul(&wedge),
        units,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2Report {
    pub value: u64,
    /// Rank of `H̃₁` of the building.
    pub building_route: u64,
    /// `Q₂ − rank ∂` in the long exact sequence of the pair.
    pub les_route: u64,
}

/// `dim H₂(GL₃(F_q[C]), Q)`.
pub fn h2_rational(curve: &Curve) -> Result<H2Report, AssemblerError> {
    h2_rational_for(&HeckeGraph::build(curve)?)
}

pub fn h2_rational_for(g: &HeckeGraph) -> Result<H2Report, AssemblerError> {
    let q = g.q();
    let inconsistent = |m: String| Err(AssemblerError::InternalInconsistency(m));
    let building_route = steinberg_rank(q)? as u64;

    let susp = suspension_homology(q, 2)?;
    if susp.betti.get(1) != Some(&0) || susp.torsion.iter().any(|t| !t.is_empty()) {
        return inconsistent(format!("suspension homology {:?} {:?}", susp.betti, susp.torsion));
    }
    let st = susp.betti[2] as u64;
    let (_, h1) = g.betti();
    let quotient = quotient_homology(q, st, h1 as u64, CoeffField::Rational, 3)?;
    let par = parabolic_series(g, CoeffField::Rational, 3)?;
    // ∂: Q₂ → Ĥ₁ is injective on the H₁(Γ) summand, so its rank is at
    // least h₁; Ĥ₁ has dimension h₁, so the rank is exactly that.
    if par.lower[1] != h1 as u64 || par.lower[2] != 0 {
        return inconsistent(format!("rational parabolic homology {:?}", par.lower));
    }
    let rank_boundary = par.lower[1];
    let les_route = quotient.series.coefficient(2) - rank_boundary + par.lower[2];
    if les_route != building_route {
        return inconsistent(format!("building route {building_route} against sequence route {les_route}"));
    }
    Ok(H2Report {
        value: building_route,
        building_route,
        les_route,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gl2Summand {
    pub point: String,
    #[serde(rename = "type")]
    pub ty: Gl2Type,
    pub group: GroupDescriptor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gl2Report {
    pub coefficients: CoeffField,
    pub summands: Vec<Gl2Summand>,
    /// Degree 0 is excluded and reported as 0.
    pub series: PoincareSeries,
}

/// `H_i(PGL₂(F_q[C]))` for `i ≥ 1` as the sum of `H_i(Aut(E)/k^×)` over the
/// semistable points of `P¹(F_q)`.
pub fn gl2_homology(curve: &Curve, coeff: CoeffField, maxdeg: usize) -> Result<Gl2Report, GroupHomologyError> {
    let q = u64::from(curve.q());
    let mut total = PoincareSeries::zero(maxdeg);
    let mut summands = Vec::new();
    for s in enumerate_p1(curve.tower()) {
        let ty = gl2_point_type(curve, &s);
        let group = ty.automorphisms().modulo_scalars();
        total = total.add(&central_quotient_series(&group, q, coeff, maxdeg)?);
        summands.push(Gl2Summand {
            point: s.to_string(),
            ty,
            group: group.central_quotient(q)?,
        });
    }
    total.coefficients[0] = 0;
    Ok(Gl2Report {
        coefficients: coeff,
        summands,
        series: total,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSummary {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// `[a1, a2, a3, a4, a6]` as coefficient sequences.
    pub coefficients: Vec<Vec<u32>>,
    pub discriminant: Vec<u32>,
    /// `N₁, N₂, N₃`.
    pub points: [u64; 3],
    pub trace: i64,
    pub torsion2: u64,
    pub torsion3: u64,
    /// Closed points of degree 1, 2, 3.
    pub closed_points: [usize; 3],
}

impl CurveSummary {
    pub fn of(curve: &Curve) -> Self {
        let t = curve.tower();
        let k = t.base();
        let n = |d| curve.count_points(d).expect("enumeration within limits");
        let c = |d| curve.closed_points(d).expect("enumeration within limits").len();
        CurveSummary {
            p: t.p(),
            e: t.spec().e,
            q: t.q(),
            coefficients: curve.coefficients().iter().map(|&a| k.coords(a)).collect(),
            discriminant: k.coords(curve.discriminant()),
            points: [n(1), n(2), n(3)],
            trace: curve.trace(),
            torsion2: curve.torsion_count(2),
            torsion3: curve.torsion_count(3),
            closed_points: [c(1), c(2), c(3)],
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "q = {} (p = {}, e = {})", self.q, self.p, self.e);
        let _ = writeln!(s, "coefficients a1,a2,a3,a4,a6 = {:?}", self.coefficients);
        let _ = writeln!(s, "discriminant = {:?}", self.discriminant);
        let _ = writeln!(s, "N1 = {}  N2 = {}  N3 = {}", self.points[0], self.points[1], self.points[2]);
        let _ = writeln!(s, "trace a = {}", self.trace);
        let _ = writeln!(s, "#C[2](F_q) = {}  #C[3](F_q) = {}", self.torsion2, self.torsion3);
        let c = self.closed_points;
        let _ = writeln!(s, "closed points of degree 1,2,3 = {}, {}, {}", c[0], c[1], c[2]);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientSection {
    pub coefficients: CoeffField,
    pub parabolic: ParabolicHomologyReport,
    pub quotient: QuotientHomologyReport,
    pub pgl3: ParabolicHomologyReport,
    pub gl2: Gl2Report,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainReport {
    pub report_version: u32,
    pub model: String,
    pub model_note: String,
    pub truncation: usize,
    pub curve: CurveSummary,
    pub graph: GraphReport,
    pub h2_rational: H2Report,
    pub sections: Vec<CoefficientSection>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stamp: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub coefficients: Vec<CoeffField>,
    pub truncation: usize,
    pub stamp: Option<String>,
}

impl MainReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "report version {}   truncation {}", self.report_version, self.truncation);
        let _ = writeln!(s, "model: {} ({})", self.model, self.model_note);
        s.push_str(&self.curve.to_text());
        s.push_str(&self.graph.to_text());
        let _ = writeln!(
            s,
            "H2(GL3(F_q[C]), Q) = {}   (building {}, sequence {})",
            self.h2_rational.value, self.h2_rational.building_route, self.h2_rational.les_route
        );
        for sec in &self.sections {
            let _ = writeln!(s, "\n[{}]", sec.coefficients);
            s.push_str(&degree_table(&sec.parabolic));
            let _ = writeln!(s, "quotient series: {}", sec.quotient.series);
            s.push_str(&degree_table(&sec.pgl3));
            let _ = writeln!(s, "PGL2 (degrees >= 1): {}", sec.gl2.series);
            for n in &sec.notes {
                let _ = writeln!(s, "note: {n}");
            }
        }
        let _ = writeln!(s, "\nchecks:");
        for c in &self.checks {
            let _ = writeln!(s, "  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        if let Some(stamp) = &self.stamp {
            let _ = writeln!(s, "stamp: {stamp}");
        }
        s
    }
}

fn degree_table(r: &ParabolicHomologyReport) -> String {
    let mut s = format!("parabolic {} ({:?}{}):", r.group, r.case, if r.exact { "" } else { ", bounds" });
    for n in 0..=r.truncation {
        let mark = if r.outside_validity.contains(&n) { "*" } else { "" };
        if r.lower[n] == r.upper[n] {
            let _ = write!(s, " {n}:{}{mark}", r.lower[n]);
        } else {
            let _ = write!(s, " {n}:[{},{}]{mark}", r.lower[n], r.upper[n]);
        }
    }
    if !r.outside_validity.is_empty() {
        s.push_str("   (* outside validity range, degrees >= 3 only)");
    }
    s.push('\n');
    s
}

/// Everything about one curve, with the invariant checklist.
pub fn verify(curve: &Curve, opts: &ReportOptions) -> Result<MainReport, AssemblerError> {
    let q = u64::from(curve.q());
    for &c in &opts.coefficients {
        if let CoeffField::Prime(l) = c {
            CoeffField::prime(l, q)?;
            if c.divides_q_minus_one(q) {
                return Err(GroupHomologyError::UnsupportedCoefficients {
                    ell: l,
                    q,
                    reason: "ℓ divides q−1: the connecting maps of the parabolic sequence are not determined".into(),
                }
                .into());
            }
        }
    }
    if q > crate::building::MAX_BUILDING_Q {
        return Err(BuildingError::UnsupportedFieldSize(q).into());
    }
    let maxdeg = opts.truncation;
    let g = HeckeGraph::build(curve)?;
    let graph = g.report();
    let h2 = h2_rational_for(&g)?;
    let st = steinberg_rank(q)? as u64;

    let mut sections = Vec::new();
    for &c in &opts.coefficients {
        let parabolic = parabolic_series(&g, c, maxdeg)?;
        let quotient = quotient_homology(q, st, graph.h1 as u64, c, maxdeg)?;
        let pgl3 = pgl3_parabolic_series(&g, c, maxdeg)?;
        let gl2 = gl2_homology(curve, c, maxdeg)?;
        let mut notes = vec![
            "PGL2 sum runs over the q+1 semistable points of P^1; degree 0 excluded".to_string(),
        ];
        match c {
            CoeffField::Rational => notes.push(format!(
                "rational homology of GL3(F_q[C]) is concentrated in degrees 0 and 2; H2 = {}",
                h2.value
            )),
            CoeffField::Prime(_) => notes.push(
                "GL3 series not claimed: the differential from the Steinberg summand is undetermined"
                    .to_string(),
            ),
        }
        sections.push(CoefficientSection {
            coefficients: c,
            parabolic,
            quotient,
            pgl3,
            gl2,
            notes,
        });
    }

    let checks = run_checks(curve, &g, &graph, &h2, &sections)?;
    Ok(MainReport {
        report_version: REPORT_VERSION,
        model: MODEL.to_string(),
        model_note: MODEL_NOTE.to_string(),
        truncation: maxdeg,
        curve: CurveSummary::of(curve),
        graph,
        h2_rational: h2,
        sections,
        checks,
        stamp: opts.stamp.clone(),
    })
}

fn run_checks(
    curve: &Curve,
    g: &HeckeGraph,
    graph: &GraphReport,
    h2: &H2Report,
    sections: &[CoefficientSection],
) -> Result<Vec<Check>, AssemblerError> {
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        })
    };
    let q = u64::from(curve.q());
    let qi = q as i64;
    let n: Vec<u64> = (1..=3).map(|d| curve.count_points(d).expect("within limits")).collect();
    let a = curve.trace();

    let (t2, t3) = (a * a - 2 * qi, a * a * a - 3 * qi * a);
    check(
        "weil_recurrence",
        n[1] as i64 == qi * qi + 1 - t2 && n[2] as i64 == qi * qi * qi + 1 - t3,
        format!("N = {n:?}, a = {a}"),
    );
    check("hasse_bound", a * a <= 4 * qi, format!("a² = {} ≤ 4q = {}", a * a, 4 * q));

    let pts = curve.points(1).expect("within limits");
    let sample = &pts[..pts.len().min(12)];
    let mut group_ok = true;
    for &x in sample {
        for &y in sample {
            let xy = curve.add(x, y).expect("rational");
            group_ok &= xy == curve.add(y, x).expect("rational");
            group_ok &= curve.add(x, curve.neg(x)).expect("rational") == CurvePoint::Infinity;
            for &z in sample {
                let l = curve.add(xy, z).expect("rational");
                let r = curve.add(x, curve.add(y, z).expect("rational")).expect("rational");
                group_ok &= l == r;
            }
        }
    }
    check("group_law", group_ok, format!("on {} rational points", sample.len()));

    let sym2 = enumerate_sym2(curve).map_err(GraphError::from)?;
    check(
        "sym2_count",
        sym2.len() as u64 == (q + 1) * n[0] && sym2.len() as u64 * 2 == n[0] * n[0] + n[1],
        format!("#Sym2 = {}, (q+1)N1 = {}", sym2.len(), (q + 1) * n[0]),
    );
    let bip_ok = graph.jac_vertices as u64 == n[0]
        && graph.p2_vertices as u64 == q * q + q + 1
        && graph.edges as u64 == (q + 1) * n[0]
        && g.edges.iter().all(|e| e.jac < g.jac_vertices.len() && e.p2 < g.p2_vertices.len());
    check(
        "bipartite_counts",
        bip_ok,
        format!("V = {} + {}, E = {}", graph.jac_vertices, graph.p2_vertices, graph.edges),
    );
    let (af, bf) = g.fiber_census();
    check(
        "alpha_fibers",
        af.iter().all(|&s| s as u64 == q + 1),
        format!("{:?}", graph.alpha_fibers),
    );
    let expected_beta = |t: VertexType| match t {
        VertexType::T1 => 3,
        VertexType::T2 => 2,
        VertexType::T3 | VertexType::T4 => 1,
        VertexType::T5 => 0,
    };
    check(
        "beta_fibers",
        g.p2_vertices.iter().zip(&bf).all(|(v, &s)| s == expected_beta(v.ty)),
        format!("{:?}", graph.beta_fibers),
    );
    let census = graph.census;
    check(
        "census_sum",
        census.iter().sum::<usize>() as u64 == q * q + q + 1,
        format!("{census:?}"),
    );
    check(
        "t3_is_3_torsion",
        census[2] as u64 == curve.torsion_count(3),
        format!("#T3 = {}, #C[3] = {}", census[2], curve.torsion_count(3)),
    );
    let mut gl2 = [0u64; 3];
    for s in enumerate_p1(curve.tower()) {
        gl2[gl2_point_type(curve, &s) as usize] += 1;
    }
    let tor2 = curve.torsion_count(2);
    check(
        "gl2_census",
        gl2[1] == tor2 && 2 * gl2[0] == n[0] - tor2 && gl2.iter().sum::<u64>() == q + 1,
        format!("split {}, full {}, quadratic {}; #C[2] = {tor2}", gl2[0], gl2[1], gl2[2]),
    );
    let mut sections_ok = true;
    for v in &g.p2_vertices {
        let t = section_zero_divisor(curve, &v.point);
        sections_ok &= t.degree() == 3 && curve.divisor_sum(&t) == CurvePoint::Infinity;
    }
    for e in &g.edges {
        let t = section_zero_divisor(curve, &beta(curve, &e.divisor));
        sections_ok &= t.contains(&e.divisor.divisor());
    }
    check(
        "section_divisors",
        sections_ok,
        "every section divisor has degree 3, sums to O, and contains its edges".into(),
    );
    check(
        "graph_betti",
        graph.h0 as i64 - graph.h1 as i64 == graph.vertices as i64 - graph.edges as i64,
        format!("h0 = {}, h1 = {}", graph.h0, graph.h1),
    );
    let json_ok = HeckeGraph::from_json(&g.to_json()).is_ok_and(|back| &back == g);
    check("json_round_trip", json_ok, "graph export re-imports to an equal graph".into());

    let b = build_building(q)?;
    let st = steinberg_rank(q)? as u64;
    let ev = b.edges.len() as u64 + 1 - b.vertex_count() as u64;
    check(
        "steinberg_rank",
        st == q * q * q && st == ev,
        format!("rank {st}, E − V + 1 = {ev}, q³ = {}", q * q * q),
    );
    let susp = suspension_homology(q, 2)?;
    check(
        "suspension_homology",
        susp.betti == vec![1, 0, st as usize] && susp.torsion.iter().all(Vec::is_empty),
        format!("{:?}", susp.betti),
    );
    check(
        "h2_routes_agree",
        h2.building_route == h2.les_route && h2.value == q * q * q,
        format!("building {}, sequence {}", h2.building_route, h2.les_route),
    );
    for sec in sections {
        let c = sec.coefficients;
        match c {
            CoeffField::Rational => {
                let mut want = vec![0; sec.parabolic.truncation + 1];
                want[0] = graph.h0 as u64;
                if want.len() > 1 {
                    want[1] = graph.h1 as u64;
                }
                check(
                    "parabolic_rational",
                    sec.parabolic.dims() == Some(&want[..]),
                    format!("{:?}", sec.parabolic.lower),
                );
                check(
                    "quotient_degree2",
                    sec.quotient.series.coefficient(2) == q * q * q + graph.h1 as u64,
                    format!("{}", sec.quotient.series),
                );
            }
            CoeffField::Prime(_) => {
                let split = matches!(sec.parabolic.case, ParabolicCase::Split { .. });
                check(
                    &format!("parabolic_split_exact_{c}"),
                    split && sec.parabolic.exact,
                    format!("{:?}", sec.parabolic.case),
                );
                let valid_from = sec.pgl3.outside_validity.iter().max().map_or(0, |m| m + 1);
                check(
                    &format!("pgl3_watermark_{c}"),
                    valid_from == 3,
                    format!("{:?}", sec.pgl3.outside_validity),
                );
            }
        }
        check(
            &format!("interval_soundness_{c}"),
            sec.parabolic.lower.iter().zip(&sec.parabolic.upper).all(|(l, u)| l <= u)
                && sec.pgl3.lower.iter().zip(&sec.pgl3.upper).all(|(l, u)| l <= u),
            "lower ≤ upper in every degree".into(),
        );
    }
    Ok(checks)
}
