//! Worked examples and the convergence series for cyclic graph sequences.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::generators::{circle, cyclic, dyadic, dyadic_band, nonlip, DYADIC_RESIDUAL};
use crate::graphon::{Kernel, StepGraphon};
use crate::graphs::{named_graph, LabeledGraph};
use crate::homdensity::{DensityCaps, DensityEngine};
use crate::metrics::{neighborhood_metric, similarity_distance, similarity_metric};
use crate::scalar::{rat, Rational, Scalar};
use crate::symmetry::connection::{connection_matrix, product_identity};

/// Converts an exact graphon to the requested scalar type.
pub fn cast<T: Scalar>(w: &StepGraphon<Rational>) -> Result<StepGraphon<T>> {
    let weights = w.weights().iter().map(T::from_rational).collect();
    StepGraphon::new(weights, w.matrix().map(T::from_rational))
}

/// The 1-labeled single edge `K₂•`.
pub fn pendant_edge() -> LabeledGraph {
    LabeledGraph::simple(2, 1, &[(0, 1)]).expect("valid")
}

/// The 1-labeled double edge `C₂•`.
pub fn double_edge() -> LabeledGraph {
    LabeledGraph::multi(2, 1, &[(0, 1), (0, 1)]).expect("valid")
}

#[derive(Debug, Clone, Serialize)]
pub struct NonlipReport {
    pub eps: String,
    /// `t_a(K₂•)` at the third step.
    pub t_a: String,
    /// `t_b(K₂•)` at the fourth step.
    pub t_b: String,
    pub r_ab: String,
    pub rbar_ab: String,
    pub three_eps: String,
    pub rbar_within_three_eps: bool,
}

pub fn nonlip_report(eps: &Rational) -> Result<NonlipReport> {
    let w = nonlip(eps)?;
    let (a, b) = (2, 3);
    let engine = DensityEngine::new(&w);
    let k2 = pendant_edge();
    let rbar = similarity_metric(&w).get(a, b).clone();
    let three_eps = rat(3, 1) * eps.clone();
    Ok(NonlipReport {
        eps: eps.to_string(),
        t_a: engine.restricted(&k2, &[a])?.to_string(),
        t_b: engine.restricted(&k2, &[b])?.to_string(),
        r_ab: neighborhood_metric(&w).get(a, b).to_string(),
        rbar_within_three_eps: rbar <= three_eps,
        rbar_ab: rbar.to_string(),
        three_eps: three_eps.to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DyadicBand {
    pub k: usize,
    pub step: usize,
    pub t_double_edge: String,
    /// Similarity distance from this band step to the residual step.
    pub rbar_to_residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DyadicReport {
    pub depth: usize,
    pub steps: usize,
    pub residual_step: usize,
    pub residual_t_double_edge: String,
    pub bands: Vec<DyadicBand>,
    pub all_bands_quarter: bool,
    pub residual_eighth: bool,
    pub rbar_strictly_decreasing: bool,
}

pub fn dyadic_report(depth: usize) -> Result<DyadicReport> {
    let w = dyadic(depth)?;
    let engine = DensityEngine::new(&w);
    let c2 = double_edge();
    let residual = engine.restricted(&c2, &[DYADIC_RESIDUAL])?;
    let mut bands = Vec::with_capacity(depth);
    let mut values = Vec::with_capacity(depth);
    let mut rbars: Vec<Rational> = Vec::with_capacity(depth);
    for k in 1..=depth {
        let step = dyadic_band(k);
        let t = engine.restricted(&c2, &[step])?;
        let rbar = similarity_distance(&w, step, DYADIC_RESIDUAL);
        bands.push(DyadicBand { k, step, t_double_edge: t.to_string(), rbar_to_residual: rbar.to_string() });
        values.push(t);
        rbars.push(rbar);
    }
    Ok(DyadicReport {
        depth,
        steps: w.steps(),
        residual_step: DYADIC_RESIDUAL,
        all_bands_quarter: values.iter().all(|v| *v == rat(1, 4)),
        residual_eighth: residual == rat(1, 8),
        residual_t_double_edge: residual.to_string(),
        rbar_strictly_decreasing: rbars.windows(2).all(|p| p[1] < p[0]),
        bands,
    })
}

/// Parses a comma-separated motif list such as `K2,P3,C4`.
pub fn parse_motifs(list: &str) -> Result<Vec<(String, LabeledGraph)>> {
    let motifs: Vec<_> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| Ok((s.trim().to_string(), named_graph(s)?)))
        .collect::<Result<_>>()?;
    if motifs.is_empty() {
        return Err(Error::invalid("no motifs given"));
    }
    Ok(motifs)
}

/// Caps large enough to evaluate every motif exactly on `q` steps.
fn caps_for(q: usize, motifs: &[(String, LabeledGraph)]) -> DensityCaps {
    let nodes = motifs.iter().map(|(_, f)| f.node_count()).max().unwrap_or(1);
    let default = DensityCaps::default();
    DensityCaps {
        max_nodes: default.max_nodes.max(nodes),
        max_assignments: default.max_assignments.max((q as f64).powi(nodes as i32)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergeRow {
    pub n: usize,
    pub motif: String,
    pub density: String,
    pub limit_density: String,
    /// `|t(F, G_n) - t(F, limit)|` as a float.
    pub gap: f64,
    /// Largest `|t(F²) t(H²) - t(FH)²|` over 1-labeled graphs up to the
    /// residual node cap.
    pub product_residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergeSeries {
    pub alpha: String,
    pub limit_steps: usize,
    pub residual_max_nodes: usize,
    pub rows: Vec<ConvergeRow>,
}

impl ConvergeSeries {
    /// Gaps of one motif in the order of `n`.
    pub fn gaps(&self, motif: &str) -> Vec<f64> {
        self.rows.iter().filter(|r| r.motif == motif).map(|r| r.gap).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,motif,density,limit_density,gap,product_residual\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n, r.motif, r.density, r.limit_density, r.gap, r.product_residual
            ));
        }
        out
    }
}

/// Densities of `cyclic(n, alpha)` for each `n` against `circle(limit_q,
/// alpha)`, with the product-identity residual of each `cyclic(n, alpha)`.
pub fn converge_cyclic<T: Scalar>(
    alpha: &Rational,
    ns: &[usize],
    motifs: &[(String, LabeledGraph)],
    limit_q: usize,
    residual_max_nodes: usize,
) -> Result<ConvergeSeries> {
    let limit = cast::<T>(&circle(limit_q, alpha)?)?;
    let limit_engine = DensityEngine::with_caps(&limit, caps_for(limit_q, motifs));
    let limit_values: Vec<T> = motifs.iter().map(|(_, f)| limit_engine.t(f)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &n in ns {
        let g = cast::<T>(&cyclic(n, alpha)?)?;
        let engine = DensityEngine::with_caps(&g, caps_for(n, motifs));
        let m = connection_matrix(&g, 1, residual_max_nodes, false)?.matrix;
        let residual = max_product_residual(&m);
        for ((name, f), limit_value) in motifs.iter().zip(&limit_values) {
            let value = engine.t(f)?;
            rows.push(ConvergeRow {
                n,
                motif: name.clone(),
                gap: (value.clone() - limit_value.clone()).abs().to_f64(),
                density: value.to_string(),
                limit_density: limit_value.to_string(),
                product_residual: residual.to_string(),
            });
        }
    }
    Ok(ConvergeSeries { alpha: alpha.to_string(), limit_steps: limit_q, residual_max_nodes, rows })
}

/// `max |M[F,F] M[H,H] - M[F,H]^2|`, kept in the scalar type.
fn max_product_residual<T: Scalar>(m: &crate::matrix::Matrix<T>) -> T {
    let mut worst = T::zero();
    for i in 0..m.rows() {
        for j in i..m.rows() {
            let d = (m[(i, i)].clone() * m[(j, j)].clone() - m[(i, j)].clone() * m[(i, j)].clone()).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclicReport {
    pub n: usize,
    pub alpha: String,
    pub neighbors_each_side: usize,
    pub densities: Vec<(String, String)>,
    pub limit_densities: Vec<(String, String)>,
    pub product_identity: bool,
    pub product_residual: f64,
}

/// One member of the cyclic sequence next to its circle limit.
pub fn cyclic_report<T: Scalar>(
    n: usize,
    alpha: &Rational,
    motifs: &[(String, LabeledGraph)],
    limit_q: usize,
    residual_max_nodes: usize,
) -> Result<CyclicReport> {
    let g = cast::<T>(&cyclic(n, alpha)?)?;
    let limit = cast::<T>(&circle(limit_q, alpha)?)?;
    let (e, le) = (
        DensityEngine::with_caps(&g, caps_for(n, motifs)),
        DensityEngine::with_caps(&limit, caps_for(limit_q, motifs)),
    );
    let mut densities = Vec::new();
    let mut limit_densities = Vec::new();
    for (name, f) in motifs {
        densities.push((name.clone(), e.t(f)?.to_string()));
        limit_densities.push((name.clone(), le.t(f)?.to_string()));
    }
    let m = connection_matrix(&g, 1, residual_max_nodes, false)?.matrix;
    let (product_identity, product_residual) = product_identity(&m, T::default_tol());
    let k = (alpha.clone() * rat(n as i64, 1)).floor().to_integer();
    Ok(CyclicReport {
        n,
        alpha: alpha.to_string(),
        neighbors_each_side: usize::try_from(k).unwrap_or(0),
        densities,
        limit_densities,
        product_identity,
        product_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonlip_values() {
        let r = nonlip_report(&rat(1, 100)).unwrap();
        assert_eq!(r.t_a, "97/300");
        assert_eq!(r.t_b, "197/300");
        assert!(r.rbar_within_three_eps);
    }

    #[test]
    fn dyadic_values() {
        let r = dyadic_report(3).unwrap();
        assert!(r.all_bands_quarter && r.residual_eighth && r.rbar_strictly_decreasing);
        assert_eq!(r.residual_t_double_edge, "1/8");
    }

    #[test]
    fn small_series() {
        let motifs = parse_motifs("K2,C4").unwrap();
        let s = converge_cyclic::<Rational>(&rat(1, 4), &[8, 16], &motifs, 32, 3).unwrap();
        assert_eq!(s.rows.len(), 4);
        assert!(s.rows.iter().all(|r| r.product_residual == "0"));
        assert!(s.to_csv().starts_with("n,motif,"));
        assert!(parse_motifs("K2,Q9").is_err());
        let c = cyclic_report::<f64>(8, &rat(1, 4), &motifs, 16, 3).unwrap();
        assert_eq!(c.neighbors_each_side, 2);
        assert!(c.product_identity);
    }
}
