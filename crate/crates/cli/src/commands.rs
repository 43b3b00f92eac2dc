use std::fs;

use graphon_core::cayley::{cayley_graphon, random_symmetric_function, transitive_to_cayley, FiniteGroup};
use graphon_core::experiments::{
    converge_cyclic, cyclic_report, dyadic_report, nonlip_report, parse_motifs,
};
use graphon_core::graphon::{graphon_to_json, scalar_json};
use graphon_core::graphs::{builtin_quantum, named_graph, GraphJson};
use graphon_core::homdensity::{DensityCaps, DensityEngine};
use graphon_core::metrics::{
    is_pure, l2_squared_metric, merge_twins, neighborhood_metric, similarity_metric, un_approximation, MetricMatrix,
};
use graphon_core::scalar::parse_rational;
use graphon_core::spectral::decompose;
use graphon_core::symmetry::automorphism::automorphisms;
use graphon_core::symmetry::connection::{algebra_dimension, connection_matrix, node_transitivity_report};
use graphon_core::symmetry::oracle::{default_max_nodes, orbit_equiv_oracle, same_partition, signature_partition};
use graphon_core::{Error, Kernel, Matrix, Mode, QuantumGraph, Rational, Result, Scalar, StepGraphon};
use serde_json::{json, Value};

use crate::input::{self, Loaded};
use crate::table;
use crate::{CayleyArgs, Cli, Command, ConvergeArgs, DensityArgs, Example, Global, OrbitArgs};

struct Report {
    json: Value,
    text: String,
}

fn to_json(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn emit(g: &Global, r: Report) {
    if g.json {
        println!("{}", serde_json::to_string_pretty(&r.json).expect("valid json"));
    } else {
        print!("{}", r.text);
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Examples(e) => examples(g, e)?,
        Command::Converge(c) => return converge(g, c),
        Command::Cayley(c) if !c.from_graphon => match g.mode.unwrap_or(Mode::Exact) {
            Mode::Exact => cayley_build::<Rational>(g, c)?,
            Mode::Float => cayley_build::<f64>(g, c)?,
        },
        cmd => match input::graphon(g, matches!(cmd, Command::Purify))? {
            Loaded::Exact(w) => with_graphon(g, cmd, &w)?,
            Loaded::Float(w) => with_graphon(g, cmd, &w)?,
        },
    };
    emit(g, report);
    Ok(())
}

fn with_graphon<T: Scalar>(g: &Global, cmd: &Command, w: &StepGraphon<T>) -> Result<Report> {
    let tol = g.tol.unwrap_or_else(T::default_tol);
    match cmd {
        Command::Density(a) => density(g, a, w),
        Command::Metrics { metric } => metrics(metric, w),
        Command::Purify => purify(w, tol),
        Command::Spectral { threshold, rank_tol } => spectral(w, *threshold, *rank_tol),
        Command::Approx { ns } => approx(w, ns, tol),
        Command::Aut => aut(w, tol),
        Command::Orbits(a) => orbits(g, a, w, tol),
        Command::Transitive => {
            let r = node_transitivity_report(w, g.max_nodes.unwrap_or(4))?;
            let text = table::pairs(&[
                ("purified steps", r.purified_steps.to_string()),
                ("max nodes", r.max_nodes.to_string()),
                ("(i) aut transitive", r.aut_transitive.to_string()),
                ("(ii) densities constant", r.densities_constant.to_string()),
                ("(iii) algebra dimension one", r.algebra_dimension_one.to_string()),
                ("(iv) connection rank one", r.connection_rank_one.to_string()),
                ("(v) product identity", r.product_identity.to_string()),
                ("product residual", r.product_residual.to_string()),
                ("verdicts agree", r.verdicts_agree.to_string()),
            ]);
            Ok(Report { json: to_json(&r), text })
        }
        Command::Connrank { k, independent } => connrank(g, w, *k, *independent),
        Command::Cayley(_) => cayley_recover(g, w),
        Command::Sample { n } => {
            let s = w.sample_wrandom(*n, g.seed)?;
            let json = json!({
                "n": n,
                "seed": g.seed,
                "edges": s.edge_count(),
                "graph": GraphJson::from_graph(&s),
            });
            Ok(Report { json, text: s.to_text() })
        }
        Command::Examples(_) | Command::Converge(_) => unreachable!("handled without a graphon"),
    }
}

fn cells<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(T::to_string).collect()).collect()
}

fn matrix_json<T: Scalar>(m: &Matrix<T>) -> Value {
    m.to_rows().iter().map(|r| r.iter().map(scalar_json).collect::<Vec<_>>()).collect()
}

fn tuple_of(i: usize, q: usize, k: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    let mut rest = i;
    for slot in t.iter_mut().rev() {
        *slot = rest % q;
        rest /= q;
    }
    t
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

enum Target {
    Graph(graphon_core::LabeledGraph),
    Quantum(QuantumGraph),
}

fn density<T: Scalar>(g: &Global, a: &DensityArgs, w: &StepGraphon<T>) -> Result<Report> {
    let target = if let Some(p) = &a.graph {
        Target::Graph(input::graph(p)?)
    } else if let Some(m) = &a.motif {
        Target::Graph(named_graph(m)?)
    } else if let Some(p) = &a.quantum {
        Target::Quantum(QuantumGraph::from_json(&input::read(p)?)?)
    } else if let Some(b) = &a.builtin {
        Target::Quantum(builtin_quantum(b)?)
    } else {
        return Err(Error::InvalidInput("give one of --graph, --motif, --quantum or --builtin".into()));
    };
    let caps = DensityCaps { max_nodes: g.max_nodes.unwrap_or(DensityCaps::default().max_nodes), ..Default::default() };
    let engine = DensityEngine::with_caps(w, caps);
    let k = match &target {
        Target::Graph(f) => f.label_count(),
        Target::Quantum(h) => h.label_count(),
    };
    let single = |anchor: &[usize]| match &target {
        Target::Graph(f) => engine.restricted(f, anchor),
        Target::Quantum(h) => engine.quantum(h, anchor),
    };
    if a.anchor.is_some() || k == 0 {
        let anchor = match &a.anchor {
            Some(s) => input::usize_list(s)?,
            None => Vec::new(),
        };
        if anchor.len() != k {
            return Err(Error::InvalidInput(format!("anchor has {} steps, the graph has {k} labels", anchor.len())));
        }
        let v = single(&anchor)?;
        let json = json!({ "labels": k, "anchor": anchor, "density": scalar_json(&v) });
        return Ok(Report { json, text: format!("{v}\n") });
    }
    let values = match &target {
        Target::Graph(f) => engine.all_anchors(f)?,
        Target::Quantum(h) => engine.quantum_all_anchors(h)?,
    };
    let q = w.steps();
    let rows: Vec<(Vec<usize>, &T)> = values.iter().enumerate().map(|(i, v)| (tuple_of(i, q, k), v)).collect();
    let json = json!({
        "labels": k,
        "values": rows.iter().map(|(t, v)| json!({ "anchor": t, "density": scalar_json(*v) })).collect::<Vec<_>>(),
    });
    let text = table::render(
        &["anchor".into(), "density".into()],
        &rows.iter().map(|(t, v)| vec![join(t), v.to_string()]).collect::<Vec<_>>(),
    );
    Ok(Report { json, text })
}

fn metrics<T: Scalar>(which: &str, w: &StepGraphon<T>) -> Result<Report> {
    let names: &[&str] = match which {
        "all" => &["r", "d2", "rbar"],
        "r" => &["r"],
        "d2" => &["d2"],
        "rbar" => &["rbar"],
        other => return Err(Error::InvalidInput(format!("unknown metric `{other}`"))),
    };
    let mut json = serde_json::Map::new();
    let mut text = String::new();
    for &name in names {
        let m: MetricMatrix<T> = match name {
            "r" => neighborhood_metric(w),
            "d2" => l2_squared_metric(w),
            _ => similarity_metric(w),
        };
        json.insert(name.into(), matrix_json(&m.values));
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&format!("{name}\n{}", table::square(&cells(&m.values))));
    }
    Ok(Report { json: Value::Object(json), text })
}

fn graphon_text<T: Scalar>(w: &StepGraphon<T>) -> String {
    let weights: Vec<String> = w.weights().iter().map(T::to_string).collect();
    format!("weights  {}\n{}", weights.join(" "), table::square(&cells(w.matrix())))
}

fn partition_text(p: &[Option<usize>]) -> String {
    p.iter().map(|x| x.map_or("-".into(), |s| s.to_string())).collect::<Vec<_>>().join(" ")
}

fn purify<T: Scalar>(w: &StepGraphon<T>, tol: f64) -> Result<Report> {
    let p = merge_twins(w, tol)?;
    let json = json!({
        "input_steps": w.steps(),
        "input_pure": is_pure(w, tol),
        "partition": p.partition,
        "graphon": graphon_to_json(&p.graphon),
    });
    let text = format!(
        "steps      {} -> {}\npartition  {}\n{}",
        w.steps(),
        p.graphon.steps(),
        partition_text(&p.partition),
        graphon_text(&p.graphon)
    );
    Ok(Report { json, text })
}

fn spectral<T: Scalar>(w: &StepGraphon<T>, threshold: Option<f64>, rank_tol: Option<f64>) -> Result<Report> {
    let d = decompose(w, rank_tol);
    let functions: Vec<Vec<f64>> = (0..d.rank()).map(|r| d.eigenfunction(r)).collect();
    let mut json = json!({
        "weights": d.weights,
        "eigenvalues": d.eigenvalues,
        "eigenfunctions": functions,
    });
    let mut header = vec!["step".to_string(), "weight".to_string()];
    header.extend((0..d.rank()).map(|r| format!("f{}", r + 1)));
    let rows: Vec<Vec<String>> = (0..d.steps())
        .map(|x| {
            let mut row = vec![x.to_string(), d.weights[x].to_string()];
            row.extend(functions.iter().map(|f| format!("{:.6}", f[x])));
            row
        })
        .collect();
    let lambdas: Vec<String> = d.eigenvalues.iter().map(|l| format!("{l:.9}")).collect();
    let mut text = format!("eigenvalues  {}\n{}", lambdas.join(" "), table::render(&header, &rows));
    if let Some(t) = threshold {
        let e = d.embedding(t)?;
        text.push_str(&format!("embedding at {t}: dimension {}\n", e.dimension));
        let rows: Vec<Vec<String>> = e
            .points
            .iter()
            .enumerate()
            .map(|(x, p)| vec![x.to_string(), p.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" ")])
            .collect();
        text.push_str(&table::render(&["step".into(), "point".into()], &rows));
        json["embedding"] = to_json(&e);
    }
    Ok(Report { json, text })
}

fn approx<T: Scalar>(w: &StepGraphon<T>, ns: &str, tol: f64) -> Result<Report> {
    let pure = merge_twins(w, tol)?.graphon;
    let mut rows = Vec::new();
    for n in input::usize_list(ns)? {
        let n = u32::try_from(n).map_err(|_| Error::InvalidInput(format!("n = {n} is too large")))?;
        rows.push((n, un_approximation(&pure, n)?.l1_error));
    }
    let json = json!({
        "purified_steps": pure.steps(),
        "rows": rows.iter().map(|(n, e)| json!({ "n": n, "l1_error": e })).collect::<Vec<_>>(),
    });
    let mut text = String::from("n,l1_error\n");
    for (n, e) in &rows {
        text.push_str(&format!("{n},{e}\n"));
    }
    Ok(Report { json, text })
}

fn aut<T: Scalar>(w: &StepGraphon<T>, tol: f64) -> Result<Report> {
    let p = merge_twins(w, tol)?;
    let group = automorphisms(&p.graphon)?;
    let orbits = group.orbits(1)?;
    let step_orbits: Vec<Vec<usize>> = orbits.classes().into_iter().map(|c| c.into_iter().map(|t| t[0]).collect()).collect();
    let elements: Vec<&Vec<usize>> = group.elements.iter().map(|s| &s.0).collect();
    let json = json!({
        "purified_steps": p.graphon.steps(),
        "partition": p.partition,
        "order": group.order(),
        "transitive": group.is_transitive(),
        "elements": elements,
        "step_orbits": step_orbits,
    });
    let mut text = table::pairs(&[
        ("purified steps", p.graphon.steps().to_string()),
        ("partition", partition_text(&p.partition)),
        ("order", group.order().to_string()),
        ("transitive", group.is_transitive().to_string()),
        ("step orbits", step_orbits.iter().map(|o| format!("{{{}}}", join(o))).collect::<Vec<_>>().join(" ")),
    ]);
    text.push_str("elements\n");
    for e in &elements {
        text.push_str(&format!("  {}\n", join(e)));
    }
    Ok(Report { json, text })
}

fn orbits<T: Scalar>(g: &Global, a: &OrbitArgs, w: &StepGraphon<T>, tol: f64) -> Result<Report> {
    let pure = merge_twins(w, tol)?.graphon;
    let group = automorphisms(&pure)?;
    let orbits = group.orbits(a.k)?;
    let classes = orbits.classes();
    let max_nodes = g.max_nodes.unwrap_or_else(|| default_max_nodes(a.k));
    let mut json = json!({
        "purified_steps": pure.steps(),
        "k": a.k,
        "count": orbits.count,
        "classes": classes,
    });
    let mut items = vec![
        ("purified steps", pure.steps().to_string()),
        ("k", a.k.to_string()),
        ("orbits", orbits.count.to_string()),
    ];
    if a.oracle {
        let sig = signature_partition(&pure, a.k, max_nodes, false)?;
        let agrees = same_partition(&orbits.id, &sig.id);
        json["oracle"] = json!({
            "max_nodes": max_nodes,
            "classes": sig.count,
            "graphs_checked": sig.graphs_checked,
            "agrees": agrees,
        });
        items.push(("oracle classes", sig.count.to_string()));
        items.push(("oracle graphs", sig.graphs_checked.to_string()));
        items.push(("oracle agrees", agrees.to_string()));
    }
    if let (Some(x), Some(y)) = (&a.a, &a.b) {
        let (x, y) = (input::usize_list(x)?, input::usize_list(y)?);
        if x.len() != a.k || y.len() != a.k {
            return Err(Error::InvalidInput(format!("tuples must have length {}", a.k)));
        }
        if x.iter().chain(&y).any(|&s| s >= pure.steps()) {
            return Err(Error::InvalidInput("tuple entry out of range".into()));
        }
        let v = orbit_equiv_oracle(&pure, &x, &y, max_nodes, false)?;
        let same = orbits.same_orbit(&x, &y);
        items.push(("same orbit", same.to_string()));
        items.push(("densities agree", v.equivalent.to_string()));
        if let Some(f) = &v.witness {
            items.push(("witness", f.to_text().trim_end().replace('\n', "; ")));
        }
        json["query"] = json!({ "a": x, "b": y, "same_orbit": same, "oracle": to_json(&v) });
    }
    let mut text = table::pairs(&items);
    for (i, c) in classes.iter().enumerate() {
        let members: Vec<String> = c.iter().map(|t| format!("({})", join(t))).collect();
        text.push_str(&format!("orbit {i}: {}\n", members.join(" ")));
    }
    Ok(Report { json, text })
}

fn connrank<T: Scalar>(g: &Global, w: &StepGraphon<T>, k: usize, independent: bool) -> Result<Report> {
    let max_nodes = g.max_nodes.unwrap_or(5);
    let m = connection_matrix(w, k, max_nodes, independent)?;
    let rank = m.rank();
    let psd = m.is_psd();
    let alg = algebra_dimension(w, k, max_nodes, independent)?;
    let json = json!({
        "k": k,
        "max_nodes": max_nodes,
        "independent": independent,
        "graphs": m.graphs.len(),
        "anchors": m.anchors,
        "rank": rank,
        "psd": psd,
        "algebra": to_json(&alg),
    });
    let text = table::pairs(&[
        ("k", k.to_string()),
        ("max nodes", max_nodes.to_string()),
        ("graphs", m.graphs.len().to_string()),
        ("anchors", m.anchors.to_string()),
        ("rank", rank.to_string()),
        ("psd", psd.to_string()),
        ("algebra dimension", alg.dimension.to_string()),
        ("span dimension", alg.span_dimension.to_string()),
        ("signature classes", alg.signature_classes.to_string()),
    ]);
    Ok(Report { json, text })
}

fn group_from(c: &CayleyArgs) -> Result<FiniteGroup> {
    match (&c.group, &c.group_file) {
        (Some(spec), _) => FiniteGroup::from_spec(spec),
        (None, Some(path)) => FiniteGroup::from_json(&input::read(path)?),
        (None, None) => Err(Error::InvalidInput("give --group, --group-file or --from-graphon".into())),
    }
}

fn group_text(g: &FiniteGroup) -> String {
    table::pairs(&[("group order", g.order().to_string()), ("abelian", g.is_abelian().to_string())])
}

fn cayley_build<T: Scalar>(g: &Global, c: &CayleyArgs) -> Result<Report> {
    let group = group_from(c)?;
    let f: Vec<Rational> = match (&c.f, c.random_f) {
        (Some(list), _) => input::rational_list(list)?,
        (None, Some(denom)) => random_symmetric_function(&group, denom, g.seed),
        (None, None) => return Err(Error::InvalidInput("give --f or --random-f".into())),
    };
    let f: Vec<T> = f.iter().map(T::from_rational).collect();
    let w = cayley_graphon(&group, &f)?;
    let json = json!({
        "group": to_json(&group),
        "f": f.iter().map(scalar_json).collect::<Vec<_>>(),
        "graphon": graphon_to_json(&w),
    });
    Ok(Report { json, text: group_text(&group) + &graphon_text(&w) })
}

fn cayley_recover<T: Scalar>(g: &Global, w: &StepGraphon<T>) -> Result<Report> {
    let rep = transitive_to_cayley(w, g.max_nodes.unwrap_or(4))?;
    let json = json!({
        "group": to_json(&rep.group),
        "f": rep.f.iter().map(scalar_json).collect::<Vec<_>>(),
        "base_point_orbit": rep.base_point_orbit,
        "densities_match": rep.densities_match,
        "graphs_checked": rep.graphs_checked,
        "graphon": graphon_to_json(&rep.graphon),
    });
    let mut text = group_text(&rep.group);
    text.push_str(&table::pairs(&[
        ("f", rep.f.iter().map(T::to_string).collect::<Vec<_>>().join(" ")),
        ("base point orbit", join(&rep.base_point_orbit)),
        ("densities match", rep.densities_match.to_string()),
        ("graphs checked", rep.graphs_checked.to_string()),
    ]));
    Ok(Report { json, text })
}

fn examples(g: &Global, e: &Example) -> Result<Report> {
    match e {
        Example::Nonlip { eps } => {
            let r = nonlip_report(&parse_rational(eps)?)?;
            let text = table::pairs(&[
                ("eps", r.eps.clone()),
                ("t_a(K2*)", r.t_a.clone()),
                ("t_b(K2*)", r.t_b.clone()),
                ("r(a,b)", r.r_ab.clone()),
                ("rbar(a,b)", r.rbar_ab.clone()),
                ("3 eps", r.three_eps.clone()),
                ("rbar <= 3 eps", r.rbar_within_three_eps.to_string()),
            ]);
            Ok(Report { json: to_json(&r), text })
        }
        Example::Dyadic { depth } => {
            let r = dyadic_report(*depth)?;
            let mut text = table::render(
                &["k".into(), "step".into(), "t(C2*)".into(), "rbar to residual".into()],
                &r.bands
                    .iter()
                    .map(|b| vec![b.k.to_string(), b.step.to_string(), b.t_double_edge.clone(), b.rbar_to_residual.clone()])
                    .collect::<Vec<_>>(),
            );
            text.push_str(&table::pairs(&[
                ("residual step", r.residual_step.to_string()),
                ("residual t(C2*)", r.residual_t_double_edge.clone()),
                ("bands all 1/4", r.all_bands_quarter.to_string()),
                ("residual 1/8", r.residual_eighth.to_string()),
                ("rbar decreasing", r.rbar_strictly_decreasing.to_string()),
            ]));
            Ok(Report { json: to_json(&r), text })
        }
        Example::Cyclic { n, alpha, motifs, limit_steps } => {
            let (alpha, motifs) = (parse_rational(alpha)?, parse_motifs(motifs)?);
            let residual_nodes = g.max_nodes.unwrap_or(4);
            let r = match g.mode.unwrap_or(Mode::Exact) {
                Mode::Exact => cyclic_report::<Rational>(*n, &alpha, &motifs, *limit_steps, residual_nodes)?,
                Mode::Float => cyclic_report::<f64>(*n, &alpha, &motifs, *limit_steps, residual_nodes)?,
            };
            let mut text = table::pairs(&[
                ("n", r.n.to_string()),
                ("alpha", r.alpha.clone()),
                ("neighbors each side", r.neighbors_each_side.to_string()),
                ("product identity", r.product_identity.to_string()),
                ("product residual", r.product_residual.to_string()),
            ]);
            let rows: Vec<Vec<String>> = r
                .densities
                .iter()
                .zip(&r.limit_densities)
                .map(|((m, d), (_, l))| vec![m.clone(), d.clone(), l.clone()])
                .collect();
            text.push_str(&table::render(&["motif".into(), "t(F, G_n)".into(), "t(F, limit)".into()], &rows));
            Ok(Report { json: to_json(&r), text })
        }
    }
}

fn converge(g: &Global, c: &ConvergeArgs) -> Result<()> {
    if c.family != "cyclic" {
        return Err(Error::InvalidInput(format!("unknown family `{}`", c.family)));
    }
    let alpha = parse_rational(&c.alpha)?;
    let ns = input::usize_list(&c.ns)?;
    let motifs = parse_motifs(&c.motifs)?;
    let residual_nodes = g.max_nodes.unwrap_or(4);
    let series = match g.mode.unwrap_or(Mode::Exact) {
        Mode::Exact => converge_cyclic::<Rational>(&alpha, &ns, &motifs, c.limit_steps, residual_nodes)?,
        Mode::Float => converge_cyclic::<f64>(&alpha, &ns, &motifs, c.limit_steps, residual_nodes)?,
    };
    let out = if g.json {
        serde_json::to_string_pretty(&series).expect("valid json") + "\n"
    } else {
        series.to_csv()
    };
    match &c.output {
        Some(path) => fs::write(path, out).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}
