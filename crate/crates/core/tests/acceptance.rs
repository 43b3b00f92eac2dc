//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use graphon_core::cayley::{cayley_graphon, random_symmetric_function, transitive_to_cayley, FiniteGroup};
use graphon_core::experiments::{converge_cyclic, dyadic_report, nonlip_report, parse_motifs};
use graphon_core::graphon::generators::*;
use graphon_core::graphon::{operator_power, Kernel};
use graphon_core::graphs::builtin_quantum;
use graphon_core::homdensity::DensityEngine;
use graphon_core::metrics::{
    l2_squared_metric, merge_twins, neighborhood_metric, similarity_metric, sqrt_le_sum, un_approximation,
    MetricMatrix,
};
use graphon_core::scalar::rat;
use graphon_core::spectral::decompose;
use graphon_core::symmetry::automorphism::automorphisms;
use graphon_core::symmetry::connection::{algebra_dimension, connection_matrix, node_transitivity_report};
use graphon_core::symmetry::oracle::{orbit_equiv_oracle, same_partition, signature_partition};
use graphon_core::symmetry::spectral_action_check;
use graphon_core::{LabeledGraph, Rational, Scalar, StepGraphon};

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn graph(g: &LabeledGraph) -> StepGraphon<Rational> {
    StepGraphon::from_simple_graph(g).unwrap()
}

/// The symmetry corpus.
fn corpus() -> Vec<(&'static str, StepGraphon<Rational>)> {
    vec![
        ("P3", graph(&LabeledGraph::path(3))),
        ("P4", graph(&LabeledGraph::path(4))),
        ("C5", graph(&LabeledGraph::cycle(5))),
        ("C6", graph(&LabeledGraph::cycle(6))),
        ("petersen", graph(&LabeledGraph::petersen())),
        ("frucht", graph(&LabeledGraph::frucht())),
        ("nonlip(1/100)", nonlip(&rat(1, 100)).unwrap()),
        ("dyadic(3)", dyadic(3).unwrap()),
        ("random(5,1)", random_rational(5, 4, 1).unwrap()),
        ("random(6,2)", random_rational(6, 4, 2).unwrap()),
    ]
}

fn purified(w: &StepGraphon<Rational>) -> StepGraphon<Rational> {
    merge_twins(w, 0.0).unwrap().graphon
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_nonlip() -> Check {
    let start = Instant::now();
    let r = nonlip_report(&rat(1, 100)).map_err(err)?;
    let elapsed = start.elapsed();
    ensure!(r.t_a == "97/300", "t_a = {}", r.t_a);
    ensure!(r.t_b == "197/300", "t_b = {}", r.t_b);
    ensure!(r.rbar_within_three_eps, "rbar(a,b) = {} > {}", r.rbar_ab, r.three_eps);
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("t_a={} t_b={} rbar={} ({elapsed:.2?})", r.t_a, r.t_b, r.rbar_ab))
}

fn c2_dyadic() -> Check {
    let mut timing = Duration::ZERO;
    for n in [3, 6, 10] {
        let start = Instant::now();
        let r = dyadic_report(n).map_err(err)?;
        timing = start.elapsed();
        ensure!(r.all_bands_quarter, "n={n}: a band value differs from 1/4");
        ensure!(r.residual_eighth, "n={n}: residual value {}", r.residual_t_double_edge);
        ensure!(r.rbar_strictly_decreasing, "n={n}: rbar not strictly decreasing");
    }
    ensure!(timing < Duration::from_secs(5), "n=10 took {timing:?}");
    Ok(format!("n=3,6,10 ({timing:.2?} at n=10)"))
}

fn metric_graphons() -> Vec<(String, StepGraphon<Rational>)> {
    let mut out = vec![
        ("nonlip".to_string(), nonlip(&rat(1, 100)).unwrap()),
        ("dyadic(4)".to_string(), dyadic(4).unwrap()),
        ("bipartite".to_string(), bipartite()),
    ];
    for (i, q) in [2, 3, 4, 5, 6].into_iter().enumerate() {
        out.push((format!("random({q})"), random_rational(q, 6, 100 + i as u64).unwrap()));
    }
    out
}

fn linear_triangle(m: &MetricMatrix<Rational>) -> bool {
    m.triangle_violation(0.0).is_none()
}

fn c3_metrics() -> Check {
    let h = builtin_quantum("h").map_err(err)?;
    let mut pairs = 0;
    for (name, w) in metric_graphons() {
        let q = w.steps();
        let (r, d2, rbar) = (neighborhood_metric(&w), l2_squared_metric(&w), similarity_metric(&w));
        let th = DensityEngine::new(&w).quantum_all_anchors(&h).map_err(err)?;
        for x in 0..q {
            for y in 0..q {
                let (rv, dv, sv) = (r.get(x, y), d2.get(x, y), rbar.get(x, y));
                ensure!(th[x * q + y] == *dv, "{name}: d^2({x},{y}) != t_xy(h)");
                ensure!(dv <= rv, "{name}: d^2 > r at ({x},{y})");
                ensure!(rv.clone() * rv.clone() <= *dv, "{name}: r > d at ({x},{y})");
                ensure!(sv <= rv, "{name}: rbar > r at ({x},{y})");
                for z in 0..q {
                    ensure!(
                        sqrt_le_sum(d2.get(x, z), d2.get(x, y), d2.get(y, z), 0.0),
                        "{name}: d triangle fails at ({x},{y},{z})"
                    );
                }
                pairs += 1;
            }
        }
        ensure!(linear_triangle(&r) && linear_triangle(&rbar), "{name}: triangle inequality fails");
    }
    Ok(format!("{pairs} pairs exact"))
}

fn c4_spectral() -> Check {
    let tol = 1e-9;
    let mut checked = 0;
    for (i, q) in [1, 2, 3, 5, 8, 13, 21, 32].into_iter().enumerate() {
        let w = random_float(q, 40 + i as u64).map_err(err)?;
        let d = decompose(&w, None);
        let (b, a) = (w.weights(), w.matrix());
        let mut norm2 = 0.0;
        for x in 0..q {
            for y in 0..q {
                norm2 += b[x] * b[y] * a[(x, y)] * a[(x, y)];
            }
        }
        let sum_sq: f64 = d.eigenvalues.iter().map(|l| l * l).sum();
        ensure!((sum_sq - norm2).abs() < tol, "q={q}: sum of squares {sum_sq} vs {norm2}");
        for r in 0..d.rank() {
            let (l, f) = (d.eigenvalues[r], d.eigenfunction(r));
            for x in 0..q {
                let tf: f64 = (0..q).map(|y| a[(x, y)] * b[y] * f[y]).sum();
                ensure!((tf - l * f[x]).abs() < tol, "q={q}: eigen residual at r={r}");
                ensure!(f[x].abs() <= 1.0 / l.abs() + tol, "q={q}: |f_{r}({x})| above 1/|lambda|");
            }
            for s in 0..d.rank() {
                let g = d.eigenfunction(s);
                let ip: f64 = (0..q).map(|x| b[x] * f[x] * g[x]).sum();
                let target = if r == s { 1.0 } else { 0.0 };
                ensure!((ip - target).abs() < tol, "q={q}: <f_{r}, f_{s}> = {ip}");
            }
        }
        for x in 0..q {
            let lhs: f64 = (0..d.rank()).map(|r| (d.eigenvalues[r] * d.eigenfunctions[(x, r)]).powi(2)).sum();
            let rhs: f64 = (0..q).map(|z| b[z] * a[(x, z)] * a[(x, z)]).sum();
            ensure!((lhs - rhs).abs() < tol, "q={q}: per-step identity at {x}: {lhs} vs {rhs}");
        }
        checked += 1;
    }
    let d = decompose(&bipartite(), None);
    ensure!(d.rank() == 2, "bipartite rank {}", d.rank());
    ensure!(
        (d.eigenvalues[0] - 0.5).abs() < 1e-12 && (d.eigenvalues[1] + 0.5).abs() < 1e-12,
        "bipartite eigenvalues {:?}",
        d.eigenvalues
    );
    Ok(format!("{checked} random graphons, q<=32"))
}

fn c5_subdivision() -> Check {
    let mut entries = 0;
    for (name, w) in corpus() {
        let q = w.steps();
        let engine = DensityEngine::new(&w);
        let d = decompose(&w, Some(0.0));
        for m in 2..=4u32 {
            let path = LabeledGraph::labeled_path(m as usize);
            let t = engine.all_anchors(&path).map_err(err)?;
            let power = operator_power(&w, m as usize).map_err(err)?;
            for x in 0..q {
                for y in 0..q {
                    let v = &t[x * q + y];
                    ensure!(v == power.entry(x, y), "{name}: m={m} ({x},{y}) differs from the operator power");
                    let s = d.power_entry(m, x, y);
                    ensure!((s - v.to_f64()).abs() < 1e-9, "{name}: m={m} ({x},{y}) spectral sum {s}");
                    entries += 1;
                }
            }
        }
    }
    Ok(format!("{entries} entries"))
}

fn c6_orbits() -> Check {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (name, w) in corpus() {
        let p = purified(&w);
        let aut = automorphisms(&p).map_err(err)?;
        for k in [1, 2] {
            let orbits = aut.orbits(k).map_err(err)?;
            let sig = signature_partition(&p, k, k + 4, true).map_err(err)?;
            ensure!(
                same_partition(&orbits.id, &sig.id),
                "{name}, k={k}: {} orbits but {} density classes",
                orbits.count,
                sig.count
            );
            // spot checks through the pairwise oracle
            let q = p.steps();
            let tuples: Vec<Vec<usize>> = (0..q.pow(k as u32))
                .map(|t| if k == 1 { vec![t] } else { vec![t / q, t % q] })
                .collect();
            let first = &tuples[0];
            for other in tuples.iter().skip(1).take(4) {
                let v = orbit_equiv_oracle(&p, first, other, k + 4, true).map_err(err)?;
                ensure!(
                    v.equivalent == orbits.same_orbit(first, other),
                    "{name}: oracle disagrees on {first:?} vs {other:?}"
                );
            }
        }
        summary.push(format!("{name}:{}", aut.order()));
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    Ok(format!("|Aut| {} ({elapsed:.2?})", summary.join(" ")))
}

/// Pattern size at which the first connection matrix reaches full orbit
/// rank, pinned per corpus graph; everything else is sufficient at 5.
fn m1_cap(name: &str) -> usize {
    match name {
        "frucht" | "dyadic(3)" => 6,
        _ => 5,
    }
}

fn c7_algebra() -> Check {
    let mut flagged = Vec::new();
    let mut span_short = Vec::new();
    for (name, w) in corpus() {
        let p = purified(&w);
        let aut = automorphisms(&p).map_err(err)?;
        let node_orbits = aut.orbits(1).map_err(err)?.count;
        let m1 = connection_matrix(&p, 1, 5, false).map_err(err)?;
        ensure!(m1.is_psd(), "{name}: M1 not PSD");
        let mut rank = m1.rank();
        if m1_cap(name) > 5 {
            flagged.push(format!("{name} rank {rank} at 5 nodes"));
            rank = connection_matrix(&p, 1, m1_cap(name), false).map_err(err)?.rank();
        }
        ensure!(rank == node_orbits, "{name}: rank M1 = {rank} vs {node_orbits} orbits");
        let m2 = connection_matrix(&p, 2, 4, true).map_err(err)?;
        ensure!(m2.is_psd(), "{name}: M2 not PSD");
        for k in [1, 2] {
            let orbits = aut.orbits(k).map_err(err)?.count;
            let dim = algebra_dimension(&p, k, k + 4, true).map_err(err)?;
            ensure!(dim.dimension == orbits, "{name}: dim A_{k} = {} vs {orbits} orbits", dim.dimension);
            if dim.span_dimension < orbits {
                span_short.push(format!("{name} k={k} span {}/{orbits}", dim.span_dimension));
            }
        }
        if name == "petersen" {
            ensure!(rank == 1, "petersen rank {rank}");
        }
    }
    Ok(format!("cap 5 insufficient: [{}]; linear span short of the algebra: [{}]", flagged.join(", "), span_short.join(", ")))
}

fn cayley_corpus() -> Vec<(String, StepGraphon<Rational>)> {
    let groups = [
        ("cyclic(7)", FiniteGroup::cyclic(7).unwrap()),
        ("dihedral(5)", FiniteGroup::dihedral(5).unwrap()),
        ("symmetric(3)", FiniteGroup::symmetric(3).unwrap()),
    ];
    groups
        .into_iter()
        .enumerate()
        .map(|(i, (name, g))| {
            let f = random_symmetric_function(&g, 5, 11 + i as u64);
            (format!("cayley {name}"), cayley_graphon(&g, &f).unwrap())
        })
        .collect()
}

fn c8_transitivity() -> Check {
    let mut transitive = Vec::new();
    for (name, w) in corpus().into_iter().map(|(n, w)| (n.to_string(), w)) {
        let r = node_transitivity_report(&w, 4).map_err(err)?;
        ensure!(r.verdicts_agree, "{name}: verdicts disagree {r:?}");
        if r.aut_transitive {
            transitive.push(name);
        }
    }
    for (name, w) in cayley_corpus() {
        let r = node_transitivity_report(&w, 4).map_err(err)?;
        ensure!(r.verdicts_agree && r.aut_transitive, "{name}: {r:?}");
    }
    Ok(format!("transitive in corpus: {}; Cayley graphons all true", transitive.join(",")))
}

fn c9_round_trip() -> Check {
    let mut out = Vec::new();
    for (name, g) in [("C5", LabeledGraph::cycle(5)), ("petersen", LabeledGraph::petersen())] {
        let rep = transitive_to_cayley(&graph(&g), 4).map_err(err)?;
        ensure!(rep.densities_match, "{name}: densities differ");
        out.push(format!("{name}: |G|={} over {} graphs", rep.group.order(), rep.graphs_checked));
    }
    Ok(out.join("; "))
}

fn c10_recovery() -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (name, w) in corpus() {
        let p = purified(&w);
        if p.steps() > 8 {
            continue;
        }
        let e200 = un_approximation(&p, 200).map_err(err)?.l1_error;
        ensure!(e200 < 1e-3, "{name}: error {e200} at n=200");
        for n in [5, 10, 25, 50] {
            let (a, b) = (
                un_approximation(&p, n).map_err(err)?.l1_error,
                un_approximation(&p, 4 * n).map_err(err)?.l1_error,
            );
            ensure!(b <= a, "{name}: error {b} at n={} above {a} at n={n}", 4 * n);
        }
        worst = worst.max(e200);
        count += 1;
    }
    let c = un_approximation(&constant(rat(2, 5)).unwrap(), 1).map_err(err)?;
    ensure!(c.l1_error == 0.0, "constant graphon error {}", c.l1_error);
    Ok(format!("{count} graphons, worst error at n=200: {worst:.2e}"))
}

fn c11_action() -> Check {
    let mut worst: f64 = 0.0;
    for g in [LabeledGraph::cycle(5), LabeledGraph::petersen()] {
        let w = graph(&g);
        let d = decompose(&w, None);
        for sigma in automorphisms(&w).map_err(err)?.elements {
            let r = spectral_action_check(&d, &sigma).map_err(err)?;
            ensure!(r.max_residual < 1e-9, "residual {}", r.max_residual);
            ensure!(r.max_orthogonality_defect < 1e-9, "defect {}", r.max_orthogonality_defect);
            worst = worst.max(r.max_residual).max(r.max_orthogonality_defect);
        }
    }
    Ok(format!("worst {worst:.2e}"))
}

fn c12_converge() -> Check {
    let motifs = parse_motifs("K2,P3,C4").map_err(err)?;
    let s = converge_cyclic::<Rational>(&rat(1, 4), &[40, 80, 160], &motifs, 256, 4).map_err(err)?;
    ensure!(s.rows.iter().all(|r| r.product_residual == "0"), "nonzero product residual");
    let gaps = s.gaps("C4");
    ensure!(gaps.windows(2).all(|p| p[1] < p[0]), "C4 gaps not decreasing: {gaps:?}");
    ensure!(gaps[2] < 0.02, "C4 gap {} at n=160", gaps[2]);
    Ok(format!("C4 gaps {gaps:.4?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("1 nonlip example", c1_nonlip),
        ("2 dyadic example", c2_dyadic),
        ("3 metric identities", c3_metrics),
        ("4 spectral suite", c4_spectral),
        ("5 subdivision and operator powers", c5_subdivision),
        ("6 orbit oracle", c6_orbits),
        ("7 algebra ranks", c7_algebra),
        ("8 node transitivity", c8_transitivity),
        ("9 cayley round trip", c9_round_trip),
        ("10 kernel recovery", c10_recovery),
        ("11 spectral action", c11_action),
        ("12 convergence", c12_converge),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
