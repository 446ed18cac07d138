//! JSON input formats: matrix, cut-module, section-problem and extension
//! files. Rationals are `"num/den"` strings (plain integers are accepted).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::almost::SectionProblem;
use crate::error::{Error, Result};
use crate::modpres::{CutIdeal, CutModule, Endpoint, PresentationMatrix};
use crate::purity_lab::{ExtensionKind, ExtensionSpec};
use crate::ring_core::{Exponent, Mode, RingDescriptor, RingElement};
use crate::scalar::ExpInt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Int(i64),
    Text(String),
}

impl Rational {
    pub fn to_exponent<I: ExpInt>(&self) -> Result<Exponent<I>> {
        match self {
            Rational::Int(n) => Ok(Exponent::from_int(*n)),
            Rational::Text(s) => Exponent::parse(s),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingSpec {
    pub mode: String,
    pub prime: u32,
    pub precision: Rational,
}

impl RingSpec {
    pub fn descriptor<I: ExpInt>(&self) -> Result<Arc<RingDescriptor<I>>> {
        let mode = Mode::parse(&self.mode)?;
        Ok(Arc::new(RingDescriptor::new(
            mode,
            self.prime,
            self.precision.to_exponent()?,
        )?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub ring: RingSpec,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutEntry {
    pub r: Rational,
    pub endpoint: Endpoint,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectionFile {
    pub ring: RingSpec,
    pub matrix: Vec<Vec<String>>,
    #[serde(default)]
    pub alpha: Option<Rational>,
    #[serde(default = "default_k")]
    pub k: u32,
}

fn default_k() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub kind: ExtensionKind,
    pub a: String,
    #[serde(default)]
    pub laurent_shift: Option<Rational>,
    /// Defaults to `p` for Artin-Schreier extensions.
    #[serde(default)]
    pub degree: Option<u32>,
    #[serde(default)]
    pub root_depth: u32,
    /// Falls back to the ring given on the command line.
    #[serde(default)]
    pub ring: Option<RingSpec>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn parse_matrix_file<I: ExpInt>(text: &str) -> Result<PresentationMatrix<I>> {
    let f: MatrixFile = from_json(text)?;
    PresentationMatrix::parse(&f.ring.descriptor()?, &f.matrix)
}

/// `[{"r": "1/2", "endpoint": "open"}, …]`
pub fn parse_cut_module<I: ExpInt>(text: &str) -> Result<CutModule<I>> {
    let entries: Vec<CutEntry> = from_json(text)?;
    let ideals = entries
        .iter()
        .map(|e| Ok(CutIdeal::new(e.r.to_exponent()?, e.endpoint)))
        .collect::<Result<Vec<_>>>()?;
    CutModule::new(ideals)
}

pub fn parse_section_file<I: ExpInt>(text: &str) -> Result<SectionProblem<I>> {
    let f: SectionFile = from_json(text)?;
    let phi = PresentationMatrix::parse(&f.ring.descriptor()?, &f.matrix)?;
    let alpha = f.alpha.as_ref().map(Rational::to_exponent).transpose()?;
    Ok(SectionProblem { phi, alpha, k: f.k })
}

pub fn parse_extension_file<I: ExpInt>(
    text: &str,
    fallback: Option<&Arc<RingDescriptor<I>>>,
) -> Result<ExtensionSpec<I>> {
    let f: ExtensionFile = from_json(text)?;
    let desc = match (&f.ring, fallback) {
        (Some(r), _) => r.descriptor()?,
        (None, Some(d)) => d.clone(),
        (None, None) => {
            return Err(Error::InvalidInput(
                "extension file has no ring and none was given".into(),
            ))
        }
    };
    let degree = match (f.degree, f.kind) {
        (Some(d), _) => d,
        (None, ExtensionKind::ArtinSchreier) => desc.prime(),
        (None, ExtensionKind::Kummer) => {
            return Err(Error::InvalidInput("Kummer extensions need a degree".into()))
        }
    };
    let spec = ExtensionSpec {
        a: RingElement::parse(&desc, &f.a)?,
        laurent_shift: f
            .laurent_shift
            .as_ref()
            .map(Rational::to_exponent)
            .transpose()?
            .unwrap_or_else(Exponent::zero),
        kind: f.kind,
        degree,
        root_depth: f.root_depth,
        desc,
    };
    spec.validate()?;
    Ok(spec)
}
