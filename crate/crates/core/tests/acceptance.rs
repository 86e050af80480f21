//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod oracles;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::Value;

use hecke_gl3::building::build_building;
use hecke_gl3::cli::{run, EXIT_CURVE, EXIT_OK, EXIT_UNSUPPORTED};
use hecke_gl3::ellcurve::{Curve, CurvePoint};
use hecke_gl3::finitefield::{FieldSpec, FieldTower};
use hecke_gl3::grouphlgy::{series, Atom, CoeffField, GroupDescriptor};
use hecke_gl3::heckegraph::HeckeGraph;
use hecke_gl3::moduli::{
    classify_vertex, enumerate_p1, enumerate_sym2, gl2_point_type, section_zero_divisor, Gl2Type, VertexType,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn call(args: &[String]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hecke-gl3".to_string()).chain(args.iter().cloned());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn args(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn tower(p: u32, e: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(FieldSpec::new(p, e).unwrap()).unwrap())
}

/// Smooth curves over `F_{p^e}` in raw-coefficient order, with their raw tuples.
fn smooth_curves(p: u32, e: u32) -> Vec<([u32; 5], Curve)> {
    let t = tower(p, e);
    let q = t.q();
    (0..q.pow(5))
        .filter_map(|mut v| {
            let mut raw = [0u32; 5];
            for r in raw.iter_mut() {
                *r = v % q;
                v /= q;
            }
            Curve::from_raw(t.clone(), raw).ok().map(|c| (raw, c))
        })
        .collect()
}

fn curve_args(p: u32, e: u32, raw: [u32; 5]) -> String {
    format!("--p {p} --e {e} --a1 {} --a2 {} --a3 {} --a4 {} --a6 {}", raw[0], raw[1], raw[2], raw[3], raw[4])
}

fn u64s(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

fn section<'a>(report: &'a Value, coeff: &str) -> &'a Value {
    report["sections"].as_array().unwrap().iter().find(|s| s["coefficients"] == coeff).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut done = Vec::new();
    for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let curves = smooth_curves(p, e);
        // the first two smooth tuples and the last one
        for &(raw, ref c) in [&curves[0], &curves[1], &curves[curves.len() - 1]] {
            let q = u64::from(c.q());
            let (code, out, err) = call(&args(&format!("homology {} --rational --format json", curve_args(p, e, raw))));
            ensure!(code == EXIT_OK, "q = {q} {raw:?}: exit {code}: {err}");
            let r: Value = serde_json::from_str(&out).unwrap();
            let h2 = &r["h2_rational"];
            let want = q.pow(3);
            ensure!(
                h2["value"] == want && h2["building_route"] == want && h2["les_route"] == want,
                "q = {q} {raw:?}: {h2}, want {want}"
            );
            done.push(q);
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{} curves over q ∈ {{2,3,4,5}} give q³ by both routes in {elapsed:.2?}", done.len()))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for q in [2u64, 3, 4, 5] {
        let start = Instant::now();
        let b = build_building(q).map_err(|e| e.to_string())?;
        let h = b.reduced_homology().map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let n = q * q + q + 1;
        ensure!(b.vertex_count() as u64 == 2 * n, "q = {q}: {} vertices", b.vertex_count());
        ensure!(b.edge_endpoints().count() as u64 == n * (q + 1), "q = {q}: edge count");
        // entries are degrees −1, 0, 1
        let want = vec![0, 0, q.pow(3) as usize];
        ensure!(h.betti == want, "q = {q}: reduced betti {:?}", h.betti);
        ensure!(h.torsion.iter().all(Vec::is_empty), "q = {q}: torsion {:?}", h.torsion);
        if q == 5 {
            ensure!(elapsed < Duration::from_secs(5), "q = 5 took {elapsed:?}");
        }
        notes.push(format!("q={q}: {} in {elapsed:.2?}", h.betti[2]));
    }
    Ok(format!("reduced H₁ torsion-free of rank q³ ({})", notes.join(", ")))
}

fn torsion_points(c: &Curve, m: u64) -> u64 {
    c.points(1).unwrap().into_iter().filter(|&p| c.mul(m, p) == CurvePoint::Infinity).count() as u64
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for (p, e) in [(2, 1), (3, 1)] {
        for (raw, c) in smooth_curves(p, e) {
            let q = u64::from(c.q());
            let jac = c.points(1).unwrap();
            let n1 = jac.len() as u64;
            let sym2 = enumerate_sym2(&c).map_err(|e| e.to_string())?;
            ensure!(sym2.len() as u64 == (q + 1) * n1, "{raw:?}: #Sym² = {}, N₁ = {n1}", sym2.len());

            let g = HeckeGraph::build(&c).map_err(|e| e.to_string())?;
            let mut alpha = vec![0u64; g.jac_vertices.len()];
            let mut beta = vec![0usize; g.p2_vertices.len()];
            for edge in &g.edges {
                alpha[edge.jac] += 1;
                beta[edge.p2] += 1;
            }
            ensure!(alpha.iter().all(|&s| s == q + 1), "{raw:?}: α fibers {alpha:?}");

            let mut census = [0u64; 5];
            for (v, &fiber) in g.p2_vertices.iter().zip(&beta) {
                let (ty, _) = classify_vertex(&section_zero_divisor(&c, &v.point)).map_err(|e| e.to_string())?;
                ensure!(ty == v.ty, "{raw:?}: vertex {} typed {:?}, section says {ty:?}", v.point, v.ty);
                let want = match ty {
                    VertexType::T1 => 3,
                    VertexType::T2 => 2,
                    VertexType::T3 | VertexType::T4 => 1,
                    VertexType::T5 => 0,
                };
                ensure!(fiber == want, "{raw:?}: β fiber over {} ({ty:?}) has {fiber}", v.point);
                census[ty.index()] += 1;
            }
            ensure!(census.iter().sum::<u64>() == q * q + q + 1, "{raw:?}: census {census:?}");
            let t3 = torsion_points(&c, 3);
            ensure!(census[VertexType::T3.index()] == t3, "{raw:?}: #T3 = {}, #C[3] = {t3}", census[2]);

            let mut gl2: HashMap<Gl2Type, u64> = HashMap::new();
            for s in enumerate_p1(c.tower()) {
                *gl2.entry(gl2_point_type(&c, &s)).or_default() += 1;
            }
            let t2 = torsion_points(&c, 2);
            let full = gl2.get(&Gl2Type::FullGL2).copied().unwrap_or(0);
            let split = gl2.get(&Gl2Type::SplitTorus).copied().unwrap_or(0);
            ensure!(full == t2, "{raw:?}: {full} GL₂ points, #C[2] = {t2}");
            ensure!(2 * split == n1 - t2, "{raw:?}: {split} split points, N₁ = {n1}, #C[2] = {t2}");
            ensure!(gl2.values().sum::<u64>() == q + 1, "{raw:?}: GL₂ census {gl2:?}");
            checked += 1;
        }
    }
    Ok(format!("{checked} smooth curves over F₂ and F₃, zero failures"))
}

fn criterion_4() -> Outcome {
    let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/ss2_homology.json");
    let (code, out, err) = call(&args("homology --preset ss2 --rational --ell 3 --ell 7 --format json"));
    ensure!(code == EXIT_OK, "exit {code}: {err}");
    let r: Value = serde_json::from_str(&out).unwrap();
    let g = &r["graph"];
    ensure!(
        g["vertices"] == 10 && g["edges"] == 9 && g["h0"] == 1 && g["h1"] == 0,
        "graph {} vertices, {} edges, h0 {}, h1 {}",
        g["vertices"],
        g["edges"],
        g["h0"],
        g["h1"]
    );
    ensure!(u64s(&g["census"]) == [1, 0, 3, 3, 0], "census {}", g["census"]);

    let rational = &section(&r, "Q")["parabolic"];
    let lower = u64s(&rational["lower"]);
    ensure!(rational["exact"] == true && lower == u64s(&rational["upper"]), "rational series not exact");
    ensure!(lower[0] == 1 && lower[1..].iter().all(|&x| x == 0), "rational series {lower:?}");

    let mod7 = u64s(&section(&r, "F_7")["parabolic"]["lower"]);
    ensure!(mod7[5] == 3 && mod7[6] == 3, "mod 7 series {mod7:?}");
    let mod3 = u64s(&section(&r, "F_3")["parabolic"]["lower"]);
    ensure!(mod3[2] == 3 && mod3[3] == 6, "mod 3 series {mod3:?}");

    let want = std::fs::read_to_string(&golden).map_err(|e| e.to_string())?;
    ensure!(out == want, "report differs from {}", golden.display());
    Ok("V=10, E=9, tree, census (1,0,3,3,0); series match; byte-identical to golden".into())
}

fn criterion_5() -> Outcome {
    let dims = |g: &GroupDescriptor, q: u64, ell: u64| -> Vec<usize> {
        let s = series(g, q, CoeffField::prime(ell, q).unwrap(), 6).unwrap();
        s.coefficients.iter().map(|&c| c as usize).collect()
    };
    let mut cases = 0;
    for m in 1..=12u64 {
        for ell in (2..=13).filter(|&l| hecke_gl3::is_prime(l)) {
            let q = if ell == 2 { 3 } else { 2 };
            let got = dims(&GroupDescriptor::new([Atom::Cyclic(m)]), q, ell);
            let want = oracles::cyclic_homology(m, ell, 6);
            ensure!(got == want, "C{m} mod {ell}: {got:?} vs oracle {want:?}");
            cases += 1;
        }
    }
    let s3 = oracles::FiniteGroup::general_linear(2, 2);
    let want = oracles::resolution_homology(&s3, 3, 6);
    let got = dims(&GroupDescriptor::new([Atom::GL2]), 2, 3);
    ensure!(got == want, "GL₂(F₂) mod 3: {got:?} vs oracle {want:?}");
    Ok(format!("{cases} cyclic cases and GL₂(F₂) mod 3 agree with the oracles through degree 6"))
}

fn criterion_6() -> Outcome {
    let (code, out, err) = call(&args("gl2 --preset ss2 --rational --ell 3 --max-degree 6 --format json"));
    ensure!(code == EXIT_OK, "exit {code}: {err}");
    let reports: Value = serde_json::from_str(&out).unwrap();
    let find = |c: &str| {
        let r = reports.as_array().unwrap().iter().find(|r| r["coefficients"] == c).unwrap();
        u64s(&r["series"]["coefficients"])
    };
    let f3 = find("F_3");
    ensure!(f3[1] == 1 && f3[3] == 2, "mod 3 series {f3:?}");
    let q = find("Q");
    ensure!(q[1..].iter().all(|&x| x == 0), "rational series {q:?}");

    // summands over P¹(F₂) for this curve: trivial U1, PGL₂(F₂) ≅ S₃, and C₃
    let s3 = oracles::resolution_homology(&oracles::FiniteGroup::general_linear(2, 2), 3, 6);
    let c3 = oracles::cyclic_homology(3, 3, 6);
    for n in 1..=6 {
        ensure!(f3[n] as usize == s3[n] + c3[n], "degree {n}: {} vs oracle {}", f3[n], s3[n] + c3[n]);
    }
    Ok(format!("mod 3: H₁ = {}, H₃ = {}; rational part vanishes", f3[1], f3[3]))
}

fn criterion_7() -> Outcome {
    let mut round_trips = 0;
    for (p, e) in [(2, 1), (3, 1), (2, 2)] {
        for (raw, c) in smooth_curves(p, e).into_iter().step_by(7) {
            let g = HeckeGraph::build(&c).map_err(|e| e.to_string())?;
            let json = g.to_json();
            let back = HeckeGraph::from_json(&json).map_err(|e| format!("{raw:?}: {e}"))?;
            ensure!(back == g && back.to_json() == json, "{raw:?}: round trip differs");
            round_trips += 1;
        }
    }
    for cmd in [
        "homology --preset ss3 --rational --ell 5 --format json",
        "hecke-graph --preset ss2 --format json",
        "hecke-graph --preset ss3 --format dot",
        "building --p 3 --format json",
    ] {
        let a = call(&args(cmd));
        ensure!(a.0 == EXIT_OK, "{cmd}: exit {}", a.0);
        ensure!(a == call(&args(cmd)), "{cmd}: runs differ");
    }
    for (cmd, want) in [
        ("curve-info --p 2", EXIT_CURVE),
        ("homology --p 3 --a4 0 --a6 0", EXIT_CURVE),
        ("homology --preset ss3 --ell 2", EXIT_UNSUPPORTED),
        ("homology --preset ss3 --ell 3", EXIT_UNSUPPORTED),
        ("homology --preset ss2 --ell 2", EXIT_UNSUPPORTED),
        ("homology --p 2 --e 2 --a3 1 --ell 3", EXIT_UNSUPPORTED),
    ] {
        let (code, _, err) = call(&args(cmd));
        ensure!(code == want, "{cmd}: exit {code}, want {want}");
        ensure!(err.starts_with("error: ") && err.lines().count() == 1, "{cmd}: stderr {err:?}");
    }
    Ok(format!("{round_trips} graph round trips, deterministic output, exit codes 2 and 3"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("H₂ over Q equals q³", criterion_1),
        ("building homology is Steinberg", criterion_2),
        ("moduli identities, exhaustive", criterion_3),
        ("golden instance", criterion_4),
        ("group homology oracles", criterion_5),
        ("GL₂ mode", criterion_6),
        ("robustness and determinism", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name} ({detail})", i + 1);
            }
        }
    }
    println!("{}/{} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
