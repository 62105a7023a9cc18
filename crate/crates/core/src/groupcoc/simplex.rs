use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::delta::{CocycleReport, Resolution};
use crate::diffeo::{BaseJ, BaseMetric, DiffeoWord, PushedJ, PushedMetric};
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, pairwise_sum};
use crate::symspace::{
    alternating_trace, standard_omega, vanishing_warning, GeodesicKernel, KAEHLER_PER_AREA,
};
use crate::torusfield::{GridField, Rank};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Join {
    Straight,
    Geodesic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    /// `(1/d!) Alt Tr prod(g^-1 dg)` on positive matrices.
    Borel,
    /// `Tr(J dJ dJ) / 2`, the hyperbolic area form when `n = 1`.
    Kaehler,
}

#[derive(Debug, Clone, Copy)]
pub enum SimplexBase<'a> {
    Structure(&'a BaseJ),
    Metric(&'a BaseMetric),
}

impl SimplexBase<'_> {
    fn torus_dim(&self) -> usize {
        match self {
            SimplexBase::Structure(j) => j.torus_dim(),
            SimplexBase::Metric(g) => g.torus_dim(),
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            SimplexBase::Structure(j) => j.is_constant(),
            SimplexBase::Metric(g) => !matches!(g, BaseMetric::Exp { .. }),
        }
    }

    fn fiber_size(&self) -> usize {
        self.torus_dim()
    }
}

/// Quadrature on the parameter cube: tensor Gauss-Legendre with `gl_nodes`
/// per axis up to degree 3, seeded Monte Carlo with `mc_nodes` points above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimplexSpec {
    pub join: Join,
    pub form: FormKind,
    pub gl_nodes: usize,
    pub mc_nodes: usize,
    pub seed: u64,
}

impl Default for SimplexSpec {
    fn default() -> Self {
        SimplexSpec {
            join: Join::Geodesic,
            form: FormKind::Kaehler,
            gl_nodes: 12,
            mc_nodes: 2048,
            seed: 0,
        }
    }
}

enum Segment {
    Straight { a: DMatrix<f64>, b: DMatrix<f64> },
    Geodesic(GeodesicKernel),
}

impl Segment {
    fn new(join: Join, a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Self> {
        Ok(match join {
            Join::Straight => Segment::Straight {
                a: a.clone(),
                b: b.clone(),
            },
            Join::Geodesic => Segment::Geodesic(GeodesicKernel::new(a, b)?),
        })
    }

    fn point(&self, s: f64) -> DMatrix<f64> {
        match self {
            Segment::Straight { a, b } => a * (1.0 - s) + b * s,
            Segment::Geodesic(k) => k.point(s),
        }
    }

    fn velocity(&self, s: f64) -> DMatrix<f64> {
        match self {
            Segment::Straight { a, b } => b - a,
            Segment::Geodesic(k) => k.velocity(s),
        }
    }

    fn endpoint_derivative(&self, s: f64, e: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            Segment::Straight { .. } => e * s,
            Segment::Geodesic(k) => k.endpoint_derivative(s, e),
        }
    }
}

/// Point and parameter derivatives of the iterated join
/// `P(s) = join(v0, join(v1, ... join(v_{d-1}, v_d; s_d) ...; s_2); s_1)`.
fn join_point(
    join: Join,
    vertices: &[DMatrix<f64>],
    s: &[f64],
) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
    let d = s.len();
    let mut q = vertices[d].clone();
    let mut derivs: Vec<DMatrix<f64>> = Vec::with_capacity(d);
    for k in (0..d).rev() {
        let seg = Segment::new(join, &vertices[k], &q)?;
        let mut next = Vec::with_capacity(derivs.len() + 1);
        next.push(seg.velocity(s[k]));
        next.extend(derivs.iter().map(|e| seg.endpoint_derivative(s[k], e)));
        derivs = next;
        q = seg.point(s[k]);
    }
    Ok((q, derivs))
}

fn form_value(form: FormKind, p: &DMatrix<f64>, derivs: &[DMatrix<f64>]) -> Result<f64> {
    match form {
        FormKind::Borel => {
            let pinv = p
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::numeric("singular point on the simplex"))?;
            let mats: Vec<DMatrix<f64>> = derivs.iter().map(|h| &pinv * h).collect();
            Ok(alternating_trace(&mats))
        }
        FormKind::Kaehler => {
            let om = standard_omega(p.nrows() / 2);
            let j = &om * p;
            let (a, b) = (&om * &derivs[0], &om * &derivs[1]);
            Ok((j * a * b).trace() / KAEHLER_PER_AREA)
        }
    }
}

struct Nodes {
    points: Vec<Vec<f64>>,
    /// `None` for Monte Carlo (equal weights).
    weights: Option<Vec<f64>>,
}

fn nodes(d: usize, spec: &SimplexSpec) -> Result<Nodes> {
    if d <= 3 {
        if spec.gl_nodes == 0 {
            return Err(Error::domain("Gauss-Legendre rule needs at least one node"));
        }
        let (x, w) = gauss_legendre(spec.gl_nodes);
        let total = spec.gl_nodes.pow(d as u32);
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rest = idx;
            let mut p = Vec::with_capacity(d);
            let mut wt = 1.0;
            for _ in 0..d {
                let i = rest % spec.gl_nodes;
                rest /= spec.gl_nodes;
                p.push(x[i]);
                wt *= w[i];
            }
            points.push(p);
            weights.push(wt);
        }
        Ok(Nodes {
            points,
            weights: Some(weights),
        })
    } else {
        if spec.mc_nodes < 2 {
            return Err(Error::domain("Monte Carlo rule needs at least two nodes"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let points = (0..spec.mc_nodes)
            .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
            .collect();
        Ok(Nodes {
            points,
            weights: None,
        })
    }
}

enum Pushed<'a> {
    J(Vec<PushedJ<'a>>),
    Metric(Vec<PushedMetric<'a>>),
}

impl Pushed<'_> {
    fn vertices(&self, x: &[f64]) -> Result<Vec<DMatrix<f64>>> {
        match self {
            Pushed::J(ps) => ps.iter().map(|p| Ok(p.at(x)?.metric())).collect(),
            Pushed::Metric(ps) => ps.iter().map(|p| Ok(p.at(x)?.into_mat())).collect(),
        }
    }
}

/// Integral over `M` of the chosen invariant form on the simplex with vertices
/// `(b, w1_* b, (w1 w2)_* b, ..., (w1 ... wd)_* b)` in the fiber over each point.
///
/// Kahler integrals take a field of complex structures and a geodesic join;
/// Borel integrals take a field of metrics and either join. Compatible
/// structures are handled through their metrics `G = J^T Omega`, which span a
/// totally geodesic copy of the Siegel fiber inside the positive cone.
pub fn simplex_integrate(
    base: &SimplexBase,
    words: &[DiffeoWord],
    spec: &SimplexSpec,
    res: Resolution,
) -> Result<CocycleReport> {
    let d = words.len();
    let dim = base.torus_dim();
    if d == 0 {
        return Err(Error::domain("simplex needs at least one word"));
    }
    if words.iter().any(|w| w.dim() != dim) {
        return Err(Error::domain("words and base live on different tori"));
    }
    let warning = match (spec.form, base) {
        (FormKind::Kaehler, SimplexBase::Structure(_)) => {
            if d != 2 {
                return Err(Error::domain("the Kahler form integrates over 2-simplices"));
            }
            if spec.join == Join::Straight {
                return Err(Error::domain(
                    "straight joins leave the space of compatible structures",
                ));
            }
            None
        }
        (FormKind::Borel, SimplexBase::Metric(_)) => vanishing_warning(d, base.fiber_size()),
        _ => {
            return Err(Error::domain(
                "Kahler forms need a complex-structure base, Borel forms a metric base",
            ))
        }
    };

    let mut prefix = DiffeoWord::identity(dim);
    let mut prefixes = vec![prefix.clone()];
    for w in words {
        prefix = prefix.compose(w)?;
        prefixes.push(prefix.clone());
    }
    let pushed = match base {
        SimplexBase::Structure(j) => Pushed::J(
            prefixes
                .iter()
                .map(|w| PushedJ::new(w, j))
                .collect::<Result<_>>()?,
        ),
        SimplexBase::Metric(g) => Pushed::Metric(
            prefixes
                .iter()
                .map(|w| PushedMetric::new(w, g))
                .collect::<Result<_>>()?,
        ),
    };
    let nodes = nodes(d, spec)?;
    let per_point = |x: &[f64]| -> Result<Vec<f64>> {
        let vertices = pushed.vertices(x)?;
        nodes
            .points
            .iter()
            .map(|s| {
                let (p, derivs) = join_point(spec.join, &vertices, s)?;
                form_value(spec.form, &p, &derivs)
            })
            .collect()
    };
    let constant = base.is_constant() && words.iter().all(|w| w.is_linear());
    let node_means = |side: usize| -> Result<Vec<f64>> {
        if constant {
            return per_point(&vec![0.0; dim]);
        }
        let rank = Rank::Vector(nodes.points.len());
        let g = GridField::try_from_fn(dim, &vec![side; dim], rank, |_, x| per_point(x))?;
        Ok(g.integrate_components())
    };
    let combine = |values: &[f64]| -> (f64, Option<f64>) {
        match &nodes.weights {
            Some(w) => {
                let terms: Vec<f64> = values.iter().zip(w).map(|(v, w)| v * w).collect();
                (pairwise_sum(&terms), None)
            }
            None => {
                let n = values.len() as f64;
                let mean = pairwise_sum(values) / n;
                let sq: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
                (mean, Some((pairwise_sum(&sq) / (n - 1.0) / n).sqrt()))
            }
        }
    };
    let (coarse, _) = combine(&node_means(res.coarse)?);
    let (fine, stat) = combine(&node_means(res.fine)?);
    let mut report = CocycleReport::from_values(coarse, fine, dim, res);
    if let Some(s) = stat {
        report.error_estimate += s;
    }
    report.statistical_error = stat;
    report.warning = warning;
    Ok(report)
}
