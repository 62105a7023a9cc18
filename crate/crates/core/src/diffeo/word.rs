use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::primitive::Primitive;
use crate::error::{Error, Result};
use crate::torusfield::FourierField;

#[derive(Debug, Clone, PartialEq)]
pub struct Letter {
    pub primitive: Primitive,
    pub inverse: bool,
}

impl Letter {
    pub fn new(primitive: Primitive) -> Self {
        Letter {
            primitive,
            inverse: false,
        }
    }

    pub fn inv(&self) -> Letter {
        Letter {
            primitive: self.primitive.clone(),
            inverse: !self.inverse,
        }
    }
}

/// `l_1 l_2 ... l_m`, the composition `l_1 o l_2 o ... o l_m`: the last letter
/// acts first. Words are never reduced implicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffeoWord {
    dim: usize,
    letters: Vec<Letter>,
}

impl DiffeoWord {
    pub fn identity(dim: usize) -> Self {
        DiffeoWord {
            dim,
            letters: Vec::new(),
        }
    }

    pub fn new(dim: usize, letters: Vec<Letter>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.primitive.dim() != dim) {
            return Err(Error::domain(format!(
                "letter acts on T^{} inside a word on T^{dim}",
                l.primitive.dim()
            )));
        }
        Ok(DiffeoWord { dim, letters })
    }

    pub fn single(primitive: Primitive) -> Self {
        DiffeoWord {
            dim: primitive.dim(),
            letters: vec![Letter::new(primitive)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// True when every letter is a linear torus map.
    pub fn is_linear(&self) -> bool {
        self.letters.iter().all(|l| l.primitive.is_linear())
    }

    /// `self o other`.
    pub fn compose(&self, other: &DiffeoWord) -> Result<DiffeoWord> {
        if self.dim != other.dim {
            return Err(Error::domain("composing words on different tori"));
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Ok(DiffeoWord {
            dim: self.dim,
            letters,
        })
    }

    pub fn inverse(&self) -> DiffeoWord {
        DiffeoWord {
            dim: self.dim,
            letters: self.letters.iter().rev().map(Letter::inv).collect(),
        }
    }

    /// Free reduction: cancels adjacent letter pairs `l l^-1`.
    pub fn reduced(&self) -> DiffeoWord {
        let mut out: Vec<Letter> = Vec::new();
        for l in &self.letters {
            if let Some(last) = out.last() {
                if last.primitive == l.primitive && last.inverse != l.inverse {
                    out.pop();
                    continue;
                }
            }
            out.push(l.clone());
        }
        DiffeoWord {
            dim: self.dim,
            letters: out,
        }
    }

    /// Every parameter multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<DiffeoWord> {
        let letters = self
            .letters
            .iter()
            .map(|l| {
                Ok(Letter {
                    primitive: l.primitive.scaled(t)?,
                    inverse: l.inverse,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DiffeoWord {
            dim: self.dim,
            letters,
        })
    }

    /// The canonical lift `R^N -> R^N`.
    pub fn apply_lift(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for l in self.letters.iter().rev() {
            l.primitive.apply(&mut y, l.inverse, None);
        }
        y
    }

    /// The map on `T^N`, coordinates in `[0, 1)`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.apply_lift(x)
            .into_iter()
            .map(|v| v.rem_euclid(1.0))
            .collect()
    }

    /// Lifted image and Jacobian at `x`.
    pub fn apply_with_jacobian(&self, x: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
        let mut y = x.to_vec();
        let mut jac = DMatrix::identity(self.dim, self.dim);
        for l in self.letters.iter().rev() {
            l.primitive.apply(&mut y, l.inverse, Some(&mut jac));
        }
        (y, jac)
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        self.apply_with_jacobian(x).1
    }
}

/// Scene-file form of a letter, e.g. `{"linear": [[1, 1], [0, 1]]}` or
/// `{"inv": {"shear": {"axis": 0, "phi": ...}}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum LetterSpec {
    Linear(Vec<Vec<i64>>),
    Translation(Vec<f64>),
    Shear {
        axis: usize,
        phi: FourierField,
    },
    Ham {
        #[serde(rename = "F")]
        f: FourierField,
        #[serde(rename = "G")]
        g: FourierField,
        steps: usize,
    },
    Inv(Box<LetterSpec>),
}

impl LetterSpec {
    pub fn to_letter(&self) -> Result<Letter> {
        Ok(match self {
            LetterSpec::Linear(a) => Letter::new(Primitive::linear(a.clone())?),
            LetterSpec::Translation(v) => Letter::new(Primitive::translation(v.clone())?),
            LetterSpec::Shear { axis, phi } => Letter::new(Primitive::shear(*axis, phi.clone())?),
            LetterSpec::Ham { f, g, steps } => {
                Letter::new(Primitive::ham_split(f.clone(), g.clone(), *steps)?)
            }
            LetterSpec::Inv(inner) => inner.to_letter()?.inv(),
        })
    }

    pub fn from_letter(letter: &Letter) -> LetterSpec {
        let base = match &letter.primitive {
            Primitive::LinearTorus { a, .. } => LetterSpec::Linear(a.clone()),
            Primitive::Translation(v) => LetterSpec::Translation(v.clone()),
            Primitive::Shear { axis, phi } => LetterSpec::Shear {
                axis: *axis,
                phi: phi.field().clone(),
            },
            Primitive::HamSplit { f, g, steps } => LetterSpec::Ham {
                f: f.field().clone(),
                g: g.field().clone(),
                steps: *steps,
            },
        };
        if letter.inverse {
            LetterSpec::Inv(Box::new(base))
        } else {
            base
        }
    }
}

impl DiffeoWord {
    pub fn from_specs(dim: usize, specs: &[LetterSpec]) -> Result<DiffeoWord> {
        let letters = specs
            .iter()
            .map(LetterSpec::to_letter)
            .collect::<Result<_>>()?;
        DiffeoWord::new(dim, letters)
    }

    pub fn to_specs(&self) -> Vec<LetterSpec> {
        self.letters.iter().map(LetterSpec::from_letter).collect()
    }
}
