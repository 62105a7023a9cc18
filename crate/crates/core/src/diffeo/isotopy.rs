use super::word::DiffeoWord;
use crate::error::{Error, Result};

/// The path `t -> w(t)` obtained by scaling every letter parameter by `t`:
/// translations `t v`, shears `t phi`, split Hamiltonian maps for time `t`.
/// A non-identity linear letter has no such path and makes the isotopy
/// discontinuous.
#[derive(Debug, Clone, PartialEq)]
pub struct Isotopy {
    word: DiffeoWord,
    continuous: bool,
}

impl Isotopy {
    pub fn new(word: DiffeoWord) -> Self {
        let continuous = word.scaled(0.5).is_ok();
        Isotopy { word, continuous }
    }

    pub fn word(&self) -> &DiffeoWord {
        &self.word
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn at(&self, t: f64) -> Result<DiffeoWord> {
        if !self.continuous {
            return Err(Error::domain(
                "isotopy contains a linear letter and is not a path from the identity",
            ));
        }
        if t == 1.0 {
            return Ok(self.word.clone());
        }
        self.word.scaled(t)
    }

    /// The path `t -> other(t) o self(t)`.
    pub fn then(&self, other: &Isotopy) -> Result<Isotopy> {
        Ok(Isotopy::new(other.word.compose(&self.word)?))
    }
}
