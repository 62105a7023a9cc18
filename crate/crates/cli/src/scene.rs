use std::collections::BTreeMap;
use std::path::Path;

use diffcoh::diffeo::{BaseJ, BaseMetric, DiffeoWord, LetterSpec};
use diffcoh::groupcoc::{L1Chain, SimplexSpec};
use diffcoh::liecoc::DivFreeField;
use diffcoh::symspace::{SiegelJ, SpdPoint};
use diffcoh::torusfield::{random_div_free, random_hamiltonian, ConformalMetric, FourierField};
use diffcoh::{Error, Result};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub coarse: usize,
    pub fine: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    Standard,
    Constant(Vec<Vec<f64>>),
    HalfPlane { u: FourierField, logv: FourierField },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    Flat,
    Constant(Vec<Vec<f64>>),
    Exp(FourierField),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplexOn {
    Structure,
    Metric,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexScene {
    /// Names from `words`, in order `w1, ..., wd`.
    pub words: Vec<String>,
    #[serde(default = "default_on")]
    pub on: SimplexOn,
    #[serde(default)]
    pub spec: SimplexSpec,
}

fn default_on() -> SimplexOn {
    SimplexOn::Structure
}

/// One divergence-free field; random entries draw from the scene seed in order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Vector(FourierField),
    Hamiltonian(FourierField),
    Constant(Vec<f64>),
    RandomDivFree { band: usize, amplitude: f64 },
    RandomHamiltonian { band: usize, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CocycleKind {
    Psi,
    Phi,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Functions {
    pub f: FourierField,
    pub h: FourierField,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Probe {
    pub eps: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct S3Scene {
    pub samples: usize,
    pub step: f64,
    pub nodes: usize,
}

impl Default for S3Scene {
    fn default() -> Self {
        S3Scene {
            samples: 100,
            step: 1e-4,
            nodes: 24,
        }
    }
}

/// A scene file. Every key except `dim` is optional; each subcommand reports
/// the keys it is missing.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default)]
    pub name: String,
    pub dim: usize,
    pub grid: Option<Grid>,
    #[serde(default)]
    pub seed: u64,
    pub base: Option<BaseSpec>,
    pub metric: Option<MetricSpec>,
    /// Conformal exponent `A` of `exp(A) (dx^2 + dy^2)`.
    pub conformal: Option<FourierField>,
    #[serde(default)]
    pub words: BTreeMap<String, Vec<LetterSpec>>,
    pub simplex: Option<SimplexScene>,
    pub chain: Option<L1Chain>,
    #[serde(default)]
    pub fields: Vec<FieldSpec>,
    /// Matrix field `J` for the even cocycle; the standard structure if absent.
    pub structure: Option<FourierField>,
    pub functions: Option<Functions>,
    pub cocycle: Option<CocycleKind>,
    pub isotopy: Option<Vec<LetterSpec>>,
    pub covector: Option<Vec<i64>>,
    pub probe: Option<Probe>,
    pub s3: Option<S3Scene>,
}

fn missing(key: &str) -> Error {
    Error::domain(format!("scene has no `{key}`"))
}

fn square(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::domain("expected a square matrix"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Parses scene text; syntax and schema errors carry the line and column.
pub fn parse(text: &str) -> Result<Scene> {
    let scene: Scene = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    if scene.dim == 0 {
        return Err(Error::Parse("`dim` must be positive".into()));
    }
    if let Some(c) = &scene.chain {
        c.validate()?;
    }
    Ok(scene)
}

pub fn load(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

impl Scene {
    pub fn base_j(&self) -> Result<BaseJ> {
        match self.base.as_ref().unwrap_or(&BaseSpec::Standard) {
            BaseSpec::Standard => {
                if self.dim % 2 != 0 {
                    return Err(Error::domain(
                        "the standard structure needs an even-dimensional torus",
                    ));
                }
                Ok(BaseJ::Standard(self.dim / 2))
            }
            BaseSpec::Constant(rows) => Ok(BaseJ::Constant(SiegelJ::new(square(rows)?)?)),
            BaseSpec::HalfPlane { u, logv } => BaseJ::half_plane(u.clone(), logv.clone()),
        }
    }

    pub fn base_metric(&self) -> Result<BaseMetric> {
        match self.metric.as_ref().unwrap_or(&MetricSpec::Flat) {
            MetricSpec::Flat => Ok(BaseMetric::Flat(self.dim)),
            MetricSpec::Constant(rows) => Ok(BaseMetric::Constant(SpdPoint::new(square(rows)?)?)),
            MetricSpec::Exp(s) => BaseMetric::exp(s),
        }
    }

    pub fn conformal_metric(&self) -> Result<ConformalMetric> {
        match &self.conformal {
            Some(a) => ConformalMetric::new(a.clone()),
            None => Ok(ConformalMetric::flat()),
        }
    }

    pub fn word(&self, name: &str) -> Result<DiffeoWord> {
        let specs = self
            .words
            .get(name)
            .ok_or_else(|| missing(&format!("words.{name}")))?;
        DiffeoWord::from_specs(self.dim, specs)
    }

    pub fn isotopy_word(&self) -> Result<DiffeoWord> {
        DiffeoWord::from_specs(
            self.dim,
            self.isotopy.as_ref().ok_or_else(|| missing("isotopy"))?,
        )
    }

    pub fn functions(&self) -> Result<&Functions> {
        self.functions.as_ref().ok_or_else(|| missing("functions"))
    }

    /// The fields of the scene, random entries drawn from `seed`.
    pub fn fields(&self, seed: u64) -> Result<Vec<DivFreeField>> {
        if self.fields.is_empty() {
            return Err(missing("fields"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.fields
            .iter()
            .map(|spec| {
                let x = match spec {
                    FieldSpec::Vector(f) => DivFreeField::new(f.clone())?,
                    FieldSpec::Hamiltonian(f) => DivFreeField::hamiltonian(f.clone())?,
                    FieldSpec::Constant(v) => DivFreeField::constant(v),
                    FieldSpec::RandomDivFree { band, amplitude } => {
                        if self.dim != 3 {
                            return Err(Error::domain("random divergence-free fields live on T^3"));
                        }
                        DivFreeField::new(random_div_free(&mut rng, *band, *amplitude))?
                    }
                    FieldSpec::RandomHamiltonian { band, amplitude } => {
                        if self.dim != 2 {
                            return Err(Error::domain("random Hamiltonian fields live on T^2"));
                        }
                        DivFreeField::hamiltonian(
                            random_hamiltonian(&mut rng, *band, *amplitude).0,
                        )?
                    }
                };
                if x.dim() != self.dim {
                    return Err(Error::domain("field dimension differs from the scene"));
                }
                Ok(x)
            })
            .collect()
    }
}
