use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::delta::{delta2, Resolution};
use crate::diffeo::{BaseJ, DiffeoWord, Primitive};
use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;
use crate::torusfield::FourierField;

/// Relative size below which a boundary coefficient counts as zero.
const BOUNDARY_TOL: f64 = 1e-12;

/// Free reduction of a word over `f, g` and their inverses `F, G`.
/// The identity may be written `""`, `"1"` or `"e"`.
pub fn reduce_word(word: &str) -> Result<String> {
    let trimmed = word.trim();
    if trimmed == "1" || trimmed == "e" {
        return Ok(String::new());
    }
    let mut out: Vec<char> = Vec::new();
    for c in trimmed.chars() {
        if !matches!(c, 'f' | 'g' | 'F' | 'G') {
            return Err(Error::Parse(format!(
                "word {word:?} has letter {c:?}; expected f, g, F, G"
            )));
        }
        let inverse = if c.is_ascii_lowercase() {
            c.to_ascii_uppercase()
        } else {
            c.to_ascii_lowercase()
        };
        if out.last() == Some(&inverse) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    Ok(out.into_iter().collect())
}

fn display_word(w: &str) -> &str {
    if w.is_empty() {
        "1"
    } else {
        w
    }
}

/// Substitutes `f`, `g` for the abstract generators.
pub fn realize(word: &str, f: &DiffeoWord, g: &DiffeoWord) -> Result<DiffeoWord> {
    if f.dim() != g.dim() {
        return Err(Error::domain("generators act on different tori"));
    }
    let (fi, gi) = (f.inverse(), g.inverse());
    let mut out = DiffeoWord::identity(f.dim());
    for c in reduce_word(word)?.chars() {
        let letter = match c {
            'f' => f,
            'F' => &fi,
            'g' => g,
            _ => &gi,
        };
        out = out.compose(letter)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainTerm {
    pub a: f64,
    pub h: String,
    pub k: String,
}

/// A finite chain `sum_j a_j (h_j, k_j)` of pairs of words in the free group
/// on `f, g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct L1Chain {
    pub terms: Vec<ChainTerm>,
    #[serde(default)]
    pub truncation_note: String,
}

/// The formal boundary as a map from reduced words to coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Boundary(pub BTreeMap<String, f64>);

impl Boundary {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(w, a)| format!("{a:+}[{}]", display_word(w)))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl L1Chain {
    pub fn new(terms: Vec<ChainTerm>) -> Result<Self> {
        let chain = L1Chain {
            terms,
            truncation_note: String::new(),
        };
        chain.validate()?;
        Ok(chain)
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if !t.a.is_finite() {
                return Err(Error::Parse(format!("non-finite coefficient {}", t.a)));
            }
            reduce_word(&t.h)?;
            reduce_word(&t.k)?;
        }
        Ok(())
    }

    pub fn l1_norm(&self) -> f64 {
        pairwise_sum(&self.terms.iter().map(|t| t.a.abs()).collect::<Vec<_>>())
    }

    pub fn scaled(&self, s: f64) -> L1Chain {
        let terms = self
            .terms
            .iter()
            .map(|t| ChainTerm {
                a: s * t.a,
                ..t.clone()
            })
            .collect();
        L1Chain {
            terms,
            truncation_note: self.truncation_note.clone(),
        }
    }

    /// `sum_j a_j ([h_j k_j] - [h_j] - [k_j])` with words freely reduced;
    /// coefficients below `1e-12 |a|_1` are dropped.
    pub fn boundary(&self) -> Result<Boundary> {
        let mut acc: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for t in &self.terms {
            let hk = reduce_word(&format!("{}{}", reduce_word(&t.h)?, reduce_word(&t.k)?))?;
            acc.entry(hk).or_default().push(t.a);
            acc.entry(reduce_word(&t.h)?).or_default().push(-t.a);
            acc.entry(reduce_word(&t.k)?).or_default().push(-t.a);
        }
        let tol = BOUNDARY_TOL * self.l1_norm();
        let map = acc
            .into_iter()
            .map(|(w, v)| (w, pairwise_sum(&v)))
            .filter(|(_, a)| a.abs() > tol)
            .collect();
        Ok(Boundary(map))
    }

    pub fn check_cycle(&self) -> Result<()> {
        let b = self.boundary()?;
        if b.is_zero() {
            Ok(())
        } else {
            Err(Error::NotACycle(b.to_string()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NonAmenabilityCertified,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NonAmenabilityCertified => write!(f, "non-amenability certified"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermValue {
    pub a: f64,
    pub h: String,
    pub k: String,
    pub delta: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    /// `sum_j a_j delta(h_j, k_j)`.
    pub pairing: f64,
    /// `sum_j |a_j| err(h_j, k_j)`.
    pub accumulated_error: f64,
    /// `|pairing| - accumulated_error`.
    pub margin: f64,
    pub verdict: Verdict,
    pub terms: Vec<TermValue>,
}

/// `sum_j a_j delta(h_j, k_j)` term by term, without the cycle check.
pub fn chain_pairing(
    chain: &L1Chain,
    f: &DiffeoWord,
    g: &DiffeoWord,
    j0: &BaseJ,
    res: Resolution,
) -> Result<(f64, f64, Vec<TermValue>)> {
    chain.validate()?;
    let mut cache: BTreeMap<(String, String), (f64, f64)> = BTreeMap::new();
    let mut terms = Vec::with_capacity(chain.terms.len());
    for t in &chain.terms {
        let key = (reduce_word(&t.h)?, reduce_word(&t.k)?);
        let (delta, err) = match cache.get(&key) {
            Some(v) => *v,
            None => {
                let r = delta2(&realize(&key.0, f, g)?, &realize(&key.1, f, g)?, j0, res)?;
                cache.insert(key.clone(), (r.value, r.error_estimate));
                (r.value, r.error_estimate)
            }
        };
        terms.push(TermValue {
            a: t.a,
            h: t.h.clone(),
            k: t.k.clone(),
            delta,
            error_estimate: err,
        });
    }
    let pairing = pairwise_sum(&terms.iter().map(|t| t.a * t.delta).collect::<Vec<_>>());
    let error = pairwise_sum(
        &terms
            .iter()
            .map(|t| t.a.abs() * t.error_estimate)
            .collect::<Vec<_>>(),
    );
    Ok((pairing, error, terms))
}

/// Pairs a cycle in the free group with the area cocycle of the subgroup
/// generated by `f` and `g`. A positive margin shows the pairing is nonzero,
/// which rules out amenability of that subgroup; a nonpositive margin proves
/// nothing.
///
/// Finite cycles are boundaries in the free group, so they pair to zero up to
/// quadrature error; only infinite l1-cycles can certify anything.
pub fn l1_certificate(
    chain: &L1Chain,
    f: &DiffeoWord,
    g: &DiffeoWord,
    j0: &BaseJ,
    res: Resolution,
) -> Result<Certificate> {
    chain.validate()?;
    chain.check_cycle()?;
    let (pairing, accumulated_error, terms) = chain_pairing(chain, f, g, j0, res)?;
    let margin = pairing.abs() - accumulated_error;
    let verdict = if margin > 0.0 {
        Verdict::NonAmenabilityCertified
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        pairing,
        accumulated_error,
        margin,
        verdict,
        terms,
    })
}

fn probe_shear(rng: &mut ChaCha8Rng, dim: usize, eps: f64) -> Result<DiffeoWord> {
    let axis = rng.gen_range(0..dim);
    let other = (axis + rng.gen_range(1..dim)) % dim;
    let mut k = vec![0i64; dim];
    k[other] = 1;
    let phi = FourierField::mode(
        dim,
        &k,
        eps * rng.gen_range(-1.0..1.0),
        eps * rng.gen_range(-1.0..1.0),
    );
    Ok(DiffeoWord::single(Primitive::shear(axis, phi)?))
}

/// Empirical openness margin: the largest change of [`chain_pairing`] when
/// `f` and `g` are composed with seeded band-1 shears of amplitude `eps`.
/// This is a probe, not a bound.
#[allow(clippy::too_many_arguments)]
pub fn sensitivity_probe(
    f: &DiffeoWord,
    g: &DiffeoWord,
    chain: &L1Chain,
    j0: &BaseJ,
    eps: f64,
    probes: usize,
    seed: u64,
    res: Resolution,
) -> Result<f64> {
    if !(eps >= 0.0) {
        return Err(Error::domain("probe amplitude must be nonnegative"));
    }
    let base = chain_pairing(chain, f, g, j0, res)?.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let fp = probe_shear(&mut rng, f.dim(), eps)?.compose(f)?;
        let gp = probe_shear(&mut rng, g.dim(), eps)?.compose(g)?;
        let shifted = chain_pairing(chain, &fp, &gp, j0, res)?.0;
        worst = worst.max((shifted - base).abs());
    }
    Ok(worst)
}
