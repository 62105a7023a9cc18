use std::f64::consts::PI;

use clap::Subcommand;
use diffcoh::diffeo::{BaseJ, DiffeoWord, Isotopy, LetterSpec};
use diffcoh::groupcoc::{
    cocycle_defect, delta2, l1_certificate, sensitivity_probe, simplex_integrate, sl2z_delta,
    CocycleReport, Resolution, SimplexBase, Verdict,
};
use diffcoh::helix::{
    asymptotic_cycle_at, cartan_omega, helicity, lemma65_check, s3_checks_with, s3_volume_period,
    schwartzman_pairing_at, BRACKET_SIGN,
};
use diffcoh::liecoc::{
    ce_defect, identity54_check, phi_even_at, phi_grid_side, psi_grid_side, psi_odd_at,
    DivFreeField, LieCocycle, LieMetric,
};
use diffcoh::symspace::{standard_omega, AREA_CONVENTION};
use diffcoh::torusfield::{
    bracket, curl_inverse, refine_estimate, ConformalMetric, FourierField, GridField, Rank,
};
use diffcoh::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::scene::{self, CocycleKind, Scene, SimplexOn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bounded area cocycle of the words `f`, `g`.
    Delta,
    /// Cocycle defect of the words `f`, `g`, `h`.
    Defect,
    /// Simplex integral over the words listed under `simplex`.
    Simplex,
    /// Area cocycle of two linear words against the SL(2,Z) closed form.
    BorelCompare,
    /// Pairing of `chain` with the area cocycle of `f`, `g`.
    Certify,
    /// Odd Lie cocycle on `fields`.
    LiePsi,
    /// Even Lie cocycle on `fields` for `structure`.
    LiePhi,
    /// Chevalley-Eilenberg defect of `cocycle` on `fields`.
    CeDefect,
    /// Both sides of the curvature identity for `conformal` and `functions`.
    Identity54,
    /// Helicity of the first field.
    Helicity,
    /// Cartan 3-form on the first three fields.
    Cartan,
    /// Cartan against evaluation 3-form on the first three fields.
    Lemma65,
    /// Volume period and frame checks on S^3.
    S3,
    /// Asymptotic cycle of `isotopy`.
    Rotation,
    /// Schwartzman pairing of `isotopy` with `covector`.
    Pairing,
    /// Quick end-to-end sanity checks.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Delta => "delta",
            Command::Defect => "defect",
            Command::Simplex => "simplex",
            Command::BorelCompare => "borel-compare",
            Command::Certify => "certify",
            Command::LiePsi => "lie-psi",
            Command::LiePhi => "lie-phi",
            Command::CeDefect => "ce-defect",
            Command::Identity54 => "identity54",
            Command::Helicity => "helicity",
            Command::Cartan => "cartan",
            Command::Lemma65 => "lemma65",
            Command::S3 => "s3",
            Command::Rotation => "rotation",
            Command::Pairing => "pairing",
            Command::Selftest => "selftest",
        }
    }

    /// Scene used when none is given.
    pub fn default_scene(&self) -> Option<&'static str> {
        match self {
            Command::S3 => Some(r#"{"name": "s3", "dim": 3}"#),
            Command::Selftest => Some(r#"{"name": "selftest", "dim": 2}"#),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A certificate with nonpositive margin.
    Inconclusive,
    /// A self-test check failed.
    Failed,
}

/// A convergence table written as CSV.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row(mut self, r: Vec<f64>) -> Self {
        self.rows.push(r);
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",") + "\n";
        for r in &self.rows {
            out += &r
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out += "\n";
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub value: Value,
    pub error_estimate: f64,
    pub convention_tag: String,
    pub details: Value,
    pub table: Option<Table>,
    pub status: Status,
}

impl Outcome {
    fn scalar(value: f64, error_estimate: f64, tag: &str, details: Value) -> Self {
        Outcome {
            value: json!(value),
            error_estimate,
            convention_tag: tag.to_string(),
            details,
            table: None,
            status: Status::Ok,
        }
    }

    fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }
}

pub const LIE_TAG: &str = "bracket=(X.grad)Y-(Y.grad)X;J0=Omega;X_f=(f_y,-f_x)";
pub const HELIX_TAG: &str = "bracket=(X.grad)Y-(Y.grad)X;curl^-1 zero-mean";
pub const S3_TAG: &str = "frame=u_i q;nu=det[q,a,b,c]";
pub const CYCLE_TAG: &str = "canonical lift per letter";

pub struct Context<'a> {
    pub scene: &'a Scene,
    pub res: Resolution,
    pub seed: u64,
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn cocycle_outcome(r: &CocycleReport) -> Outcome {
    let t = Table::new(&["side", "value"])
        .row(vec![r.resolution[0][0] as f64, r.coarse_value])
        .row(vec![r.resolution[1][0] as f64, r.value]);
    Outcome::scalar(r.value, r.error_estimate, &r.convention_tag, to_json(r)).with_table(t)
}

/// Coarse and fine sides: at least the exact side, and the fine one at least twice the coarse.
fn sides(exact: usize, res: Resolution) -> (usize, usize) {
    let c = exact.max(res.coarse);
    (c, res.fine.max(2 * c))
}

fn refined(tag: &str, c: usize, f: usize, vc: f64, vf: f64, details: Value) -> Outcome {
    let e = refine_estimate(vc, vf);
    Outcome::scalar(e.value, e.error_estimate, tag, details).with_table(
        Table::new(&["side", "value"])
            .row(vec![c as f64, vc])
            .row(vec![f as f64, vf]),
    )
}

/// The standard structure `Omega` as a constant matrix field on `T^{2n}`.
pub fn standard_structure(dim: usize) -> Result<FourierField> {
    if dim % 2 != 0 {
        return Err(Error::domain(
            "the standard structure needs an even-dimensional torus",
        ));
    }
    let om = standard_omega(dim / 2);
    let parts: Vec<FourierField> = om
        .transpose()
        .iter()
        .map(|v| FourierField::constant(dim, *v))
        .collect();
    FourierField::stack(&parts, Rank::Matrix(dim, dim))
}

fn first_fields(ctx: &Context, n: usize) -> Result<Vec<DivFreeField>> {
    let xs = ctx.scene.fields(ctx.seed)?;
    if xs.len() < n {
        return Err(Error::domain(format!(
            "need at least {n} fields, scene has {}",
            xs.len()
        )));
    }
    Ok(xs)
}

/// `int a . b` by grid quadrature with `side` points per axis.
fn grid_dot(a: &FourierField, b: &FourierField, side: usize) -> Result<f64> {
    let n = a.dim();
    let (ga, gb) = (a.sample(side)?, b.sample(side)?);
    GridField::from_fn(n, &vec![side; n], Rank::Scalar, |p, _| {
        vec![ga
            .values(p)
            .iter()
            .zip(gb.values(p))
            .map(|(u, v)| u * v)
            .sum()]
    })?
    .integrate()
}

/// `int det(X | Y | Z)` by grid quadrature.
fn grid_det(x: &FourierField, y: &FourierField, z: &FourierField, side: usize) -> Result<f64> {
    let (gx, gy, gz) = (x.sample(side)?, y.sample(side)?, z.sample(side)?);
    GridField::from_fn(3, &[side; 3], Rank::Scalar, |p, _| {
        let (a, b, c) = (gx.values(p), gy.values(p), gz.values(p));
        vec![
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]),
        ]
    })?
    .integrate()
}

/// Vector potential of `[X, Y]` with the roundoff mean of the bracket removed.
fn bracket_potential(x: &DivFreeField, y: &DivFreeField) -> Result<FourierField> {
    let mut b = bracket(x.field(), y.field())?;
    for c in 0..3 {
        b.set_coeff(c, &[0, 0, 0], Complex64::new(0.0, 0.0))?;
    }
    curl_inverse(&b)
}

fn linear_matrix(scene: &Scene, name: &str) -> Result<Vec<Vec<i64>>> {
    match scene.words.get(name).map(Vec::as_slice) {
        Some([LetterSpec::Linear(a)]) => Ok(a.clone()),
        _ => Err(Error::domain(format!(
            "word `{name}` must be a single linear letter"
        ))),
    }
}

pub fn run(cmd: Command, ctx: &Context) -> Result<Outcome> {
    let s = ctx.scene;
    let res = ctx.res;
    match cmd {
        Command::Delta => Ok(cocycle_outcome(&delta2(
            &s.word("f")?,
            &s.word("g")?,
            &s.base_j()?,
            res,
        )?)),
        Command::Defect => {
            let r = cocycle_defect(
                &s.word("f")?,
                &s.word("g")?,
                &s.word("h")?,
                &s.base_j()?,
                res,
            )?;
            Ok(Outcome::scalar(
                r.defect,
                r.error_estimate,
                AREA_CONVENTION,
                to_json(&r),
            ))
        }
        Command::Simplex => {
            let spec = s
                .simplex
                .as_ref()
                .ok_or_else(|| Error::domain("scene has no `simplex`"))?;
            let words = spec
                .words
                .iter()
                .map(|n| s.word(n))
                .collect::<Result<Vec<DiffeoWord>>>()?;
            let r = match spec.on {
                SimplexOn::Structure => simplex_integrate(
                    &SimplexBase::Structure(&s.base_j()?),
                    &words,
                    &spec.spec,
                    res,
                )?,
                SimplexOn::Metric => simplex_integrate(
                    &SimplexBase::Metric(&s.base_metric()?),
                    &words,
                    &spec.spec,
                    res,
                )?,
            };
            Ok(cocycle_outcome(&r))
        }
        Command::BorelCompare => {
            let (a, b) = (linear_matrix(s, "f")?, linear_matrix(s, "g")?);
            let closed = sl2z_delta(&a, &b)?;
            let r = delta2(&s.word("f")?, &s.word("g")?, &s.base_j()?, res)?;
            let details =
                json!({"closed_form": closed, "delta2": r, "difference": r.value - closed});
            let mut out = cocycle_outcome(&r);
            out.details = details;
            Ok(out)
        }
        Command::Certify => {
            let chain = s
                .chain
                .as_ref()
                .ok_or_else(|| Error::domain("scene has no `chain`"))?;
            let (f, g, j) = (s.word("f")?, s.word("g")?, s.base_j()?);
            let cert = l1_certificate(chain, &f, &g, &j, res)?;
            let probe = match s.probe {
                Some(p) => Some(sensitivity_probe(
                    &f, &g, chain, &j, p.eps, p.count, ctx.seed, res,
                )?),
                None => None,
            };
            let details = json!({"certificate": cert, "l1_norm": chain.l1_norm(), "sensitivity_probe": probe});
            let mut out = Outcome::scalar(
                cert.pairing,
                cert.accumulated_error,
                AREA_CONVENTION,
                details,
            );
            if cert.verdict == Verdict::Inconclusive {
                out.status = Status::Inconclusive;
            }
            Ok(out)
        }
        Command::LiePsi => {
            let xs = first_fields(ctx, 1)?;
            let metric = match &s.conformal {
                Some(a) => LieMetric::Conformal(ConformalMetric::new(a.clone())?),
                None => LieMetric::Flat,
            };
            let (c, f) = sides(psi_grid_side(&metric, &xs)?, res);
            let (vc, vf) = (psi_odd_at(&metric, &xs, c)?, psi_odd_at(&metric, &xs, f)?);
            Ok(refined(
                LIE_TAG,
                c,
                f,
                vc,
                vf,
                json!({"fields": xs.len(), "sides": [c, f]}),
            ))
        }
        Command::LiePhi => {
            let xs = first_fields(ctx, 2)?;
            let j = match &s.structure {
                Some(j) => j.clone(),
                None => standard_structure(s.dim)?,
            };
            let (c, f) = sides(phi_grid_side(&j, &xs), res);
            let (vc, vf) = (phi_even_at(&j, &xs, c)?, phi_even_at(&j, &xs, f)?);
            Ok(refined(
                LIE_TAG,
                c,
                f,
                vc,
                vf,
                json!({"fields": xs.len(), "sides": [c, f]}),
            ))
        }
        Command::CeDefect => {
            let xs = first_fields(ctx, 2)?;
            let cocycle = match s
                .cocycle
                .ok_or_else(|| Error::domain("scene has no `cocycle`"))?
            {
                CocycleKind::Psi => LieCocycle::Psi(match &s.conformal {
                    Some(a) => LieMetric::Conformal(ConformalMetric::new(a.clone())?),
                    None => LieMetric::Flat,
                }),
                CocycleKind::Phi => LieCocycle::Phi(match &s.structure {
                    Some(j) => j.clone(),
                    None => standard_structure(s.dim)?,
                }),
            };
            let d = ce_defect(&cocycle, &xs)?;
            Ok(Outcome::scalar(
                d.value,
                d.error_estimate,
                LIE_TAG,
                to_json(&d),
            ))
        }
        Command::Identity54 => {
            let m = s.conformal_metric()?;
            let fh = s.functions()?;
            let a = identity54_check(&m, &fh.f, &fh.h, res.coarse)?;
            let b = identity54_check(&m, &fh.f, &fh.h, res.fine)?;
            let ratio = if b.rhs.abs() > 1e-12 {
                Some(b.lhs / b.rhs)
            } else {
                None
            };
            let details = json!({"coarse": a, "fine": b, "lhs_over_rhs": ratio});
            Ok(refined(
                LIE_TAG,
                res.coarse,
                res.fine,
                a.lhs - a.rhs,
                b.lhs - b.rhs,
                details,
            ))
        }
        Command::Helicity => {
            let x = &first_fields(ctx, 1)?[0];
            let spectral = helicity(x)?;
            let a = curl_inverse(x.field())?;
            let (vc, vf) = (
                grid_dot(&a, x.field(), res.coarse)?,
                grid_dot(&a, x.field(), res.fine)?,
            );
            Ok(refined(
                HELIX_TAG,
                res.coarse,
                res.fine,
                vc,
                vf,
                json!({"spectral": spectral}),
            ))
        }
        Command::Cartan => {
            let xs = first_fields(ctx, 3)?;
            let spectral = cartan_omega(&xs[0], &xs[1], &xs[2])?;
            let a = bracket_potential(&xs[0], &xs[1])?;
            let z = xs[2].field();
            let (vc, vf) = (grid_dot(&a, z, res.coarse)?, grid_dot(&a, z, res.fine)?);
            Ok(refined(
                HELIX_TAG,
                res.coarse,
                res.fine,
                vc,
                vf,
                json!({"spectral": spectral}),
            ))
        }
        Command::Lemma65 => {
            let xs = first_fields(ctx, 3)?;
            let l = lemma65_check(&xs[0], &xs[1], &xs[2])?;
            let a = bracket_potential(&xs[0], &xs[1])?;
            let (x, y, z) = (xs[0].field(), xs[1].field(), xs[2].field());
            let residual = |side| -> Result<f64> {
                Ok((grid_dot(&a, z, side)? - BRACKET_SIGN * grid_det(x, y, z, side)?).abs())
            };
            let (vc, vf) = (residual(res.coarse)?, residual(res.fine)?);
            let details = json!({"spectral": l, "spectral_residual": l.residual(), "bracket_sign": BRACKET_SIGN});
            Ok(refined(HELIX_TAG, res.coarse, res.fine, vc, vf, details))
        }
        Command::S3 => {
            let p = s.s3.unwrap_or_default();
            if p.nodes < 2 || p.samples == 0 || !(p.step > 0.0) {
                return Err(Error::domain(
                    "s3 needs nodes >= 2, samples >= 1 and a positive step",
                ));
            }
            let (vc, vf) = (s3_volume_period(p.nodes / 2), s3_volume_period(p.nodes));
            let report = s3_checks_with(p.samples, p.step, ctx.seed);
            let details =
                json!({"checks": report, "target": 2.0 * PI * PI, "nodes": [p.nodes / 2, p.nodes]});
            let e = refine_estimate(vc, vf);
            let t = Table::new(&["nodes", "volume"])
                .row(vec![(p.nodes / 2) as f64, vc])
                .row(vec![p.nodes as f64, vf]);
            Ok(Outcome::scalar(e.value, e.error_estimate, S3_TAG, details).with_table(t))
        }
        Command::Rotation => {
            let iso = Isotopy::new(s.isotopy_word()?);
            let a = asymptotic_cycle_at(&iso, res.coarse)?;
            let b = asymptotic_cycle_at(&iso, res.fine)?;
            let err = a
                .components
                .iter()
                .zip(&b.components)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max);
            let mut t = Table::new(&["side"]);
            t.header.extend((0..s.dim).map(|k| format!("c{k}")));
            let t = t
                .row(
                    std::iter::once(res.coarse as f64)
                        .chain(a.components.iter().copied())
                        .collect(),
                )
                .row(
                    std::iter::once(res.fine as f64)
                        .chain(b.components.iter().copied())
                        .collect(),
                );
            Ok(Outcome {
                value: json!(b.components),
                error_estimate: err,
                convention_tag: CYCLE_TAG.to_string(),
                details: json!({"coarse": a.components}),
                table: Some(t),
                status: Status::Ok,
            })
        }
        Command::Pairing => {
            let iso = Isotopy::new(s.isotopy_word()?);
            let z = s
                .covector
                .as_ref()
                .ok_or_else(|| Error::domain("scene has no `covector`"))?;
            let vc = schwartzman_pairing_at(&iso, z, res.coarse)?;
            let vf = schwartzman_pairing_at(&iso, z, res.fine)?;
            let cycle = asymptotic_cycle_at(&iso, res.fine)?.pair(z)?;
            Ok(refined(
                CYCLE_TAG,
                res.coarse,
                res.fine,
                vc,
                vf,
                json!({"cycle_pairing": cycle}),
            ))
        }
        Command::Selftest => selftest(res),
    }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    expected: f64,
    error_estimate: f64,
    tolerance: f64,
    pass: bool,
}

fn check(name: &'static str, coarse: f64, fine: f64, expected: f64, tolerance: f64) -> Check {
    let e = refine_estimate(coarse, fine);
    let pass = (e.value - expected).abs() <= tolerance && e.error_estimate <= tolerance;
    Check {
        name,
        value: e.value,
        expected,
        error_estimate: e.error_estimate,
        tolerance,
        pass,
    }
}

fn selftest(res: Resolution) -> Result<Outcome> {
    let mut checks = Vec::new();

    let sin_z = FourierField::mode(3, &[0, 0, 1], 0.0, 1.0);
    let x = DivFreeField::new(FourierField::from_components(&[
        sin_z,
        FourierField::mode(3, &[0, 0, 1], 1.0, 0.0),
        FourierField::constant(3, 0.0),
    ])?)?;
    let a = curl_inverse(x.field())?;
    checks.push(check(
        "beltrami helicity",
        grid_dot(&a, x.field(), res.coarse)?,
        grid_dot(&a, x.field(), res.fine)?,
        1.0 / (2.0 * PI),
        1e-12,
    ));

    let (ma, mb) = (vec![vec![2, 1], vec![1, 1]], vec![vec![1, 0], vec![3, 1]]);
    let f = DiffeoWord::from_specs(2, &[LetterSpec::Linear(ma.clone())])?;
    let g = DiffeoWord::from_specs(2, &[LetterSpec::Linear(mb.clone())])?;
    let r = delta2(&f, &g, &BaseJ::Standard(1), res)?;
    checks.push(check(
        "sl2z closed form",
        r.coarse_value,
        r.value,
        sl2z_delta(&ma, &mb)?,
        1e-10,
    ));

    checks.push(check(
        "s3 volume",
        s3_volume_period(12),
        s3_volume_period(24),
        2.0 * PI * PI,
        1e-8,
    ));

    let flat = ConformalMetric::flat();
    let (p, q) = (
        FourierField::mode(2, &[1, 2], 0.3, -0.2),
        FourierField::mode(2, &[2, -1], 0.1, 0.4),
    );
    let i = |side| -> Result<f64> { Ok(identity54_check(&flat, &p, &q, side)?.residual) };
    checks.push(check(
        "flat curvature identity",
        i(res.coarse)?,
        i(res.fine)?,
        0.0,
        1e-10,
    ));

    let failures = checks.iter().filter(|c| !c.pass).count();
    let err = checks.iter().map(|c| c.error_estimate).fold(0.0, f64::max);
    let mut out = Outcome::scalar(
        failures as f64,
        err,
        "selftest/v1",
        json!({"checks": checks}),
    );
    if failures > 0 {
        out.status = Status::Failed;
    }
    Ok(out)
}

/// Scene for `cmd`: the file at `path`, or the subcommand's built-in scene.
pub fn scene_for(cmd: Command, path: Option<&std::path::Path>) -> Result<Scene> {
    match (path, cmd.default_scene()) {
        (Some(p), _) => scene::load(p),
        (None, Some(text)) => scene::parse(text),
        (None, None) => Err(Error::domain(format!("`{}` needs --scene", cmd.name()))),
    }
}
