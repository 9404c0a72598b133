//! JSON interchange for weak Hopf structures and single elements.
//!
//! Complex numbers are `[re, im]` pairs; matrices are `{rows, cols, data}`
//! with `data` row-major. Floats are written in shortest round-trip form and
//! parsed exactly, so `load(save(w))` reproduces every bit.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{AlgElement, BlockAlgebra};
use crate::error::{Error, Result};
use crate::weak_hopf::WeakHopf;
use crate::{default_tol, C64};

pub const FORMAT_VERSION: u32 = 1;

/// A complex number as `[re, im]`.
pub type Pair = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub blocks: Vec<usize>,
    #[serde(default)]
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Pair>,
}

/// Either the literal string `"identity"` or canonical coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GaugeDoc {
    Named(String),
    Coords(Vec<Pair>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhaDocument {
    pub format_version: u32,
    pub algebra: AlgebraDoc,
    pub gauge: GaugeDoc,
    pub delta: MatrixDoc,
    pub kappa: MatrixDoc,
    pub epsilon: Vec<Pair>,
    #[serde(default)]
    pub metadata: BTreeMap<String, Value>,
}

/// Which coordinates an [`ElementDocument`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    /// The canonical basis of the whole algebra.
    #[default]
    Ambient,
    /// The recovered block structure of the target Cartan subalgebra.
    Base,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementDocument {
    pub format_version: u32,
    pub blocks: Vec<usize>,
    #[serde(default)]
    pub coordinates: Coordinates,
    pub coords: Vec<Pair>,
}

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

fn complex(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

impl MatrixDoc {
    pub fn from_matrix(m: &DMatrix<C64>) -> Self {
        let (rows, cols) = m.shape();
        let data = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| pair(m[(r, c)])).collect();
        Self { rows, cols, data }
    }

    pub fn to_matrix(&self, what: &str) -> Result<DMatrix<C64>> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{what}: {} entries for a {}x{} matrix",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(DMatrix::from_row_iterator(self.rows, self.cols, self.data.iter().map(complex)))
    }
}

fn vector(v: &[Pair]) -> DVector<C64> {
    DVector::from_iterator(v.len(), v.iter().map(complex))
}

fn pairs(v: &DVector<C64>) -> Vec<Pair> {
    v.iter().copied().map(pair).collect()
}

fn expect_shape(what: &str, got: (usize, usize), want: (usize, usize)) -> Result<()> {
    if got != want {
        return Err(Error::ShapeMismatch(format!("{what} is {}x{}, expected {}x{}", got.0, got.1, want.0, want.1)));
    }
    Ok(())
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(v));
    }
    Ok(())
}

impl WhaDocument {
    pub fn from_structure(w: &WeakHopf, metadata: BTreeMap<String, Value>) -> Self {
        let alg = w.algebra();
        let gauge = if w.is_standard() {
            GaugeDoc::Named("identity".into())
        } else {
            GaugeDoc::Coords(pairs(&w.gauge().coords()))
        };
        Self {
            format_version: FORMAT_VERSION,
            algebra: AlgebraDoc { blocks: alg.blocks().to_vec(), label: alg.label().to_string() },
            gauge,
            delta: MatrixDoc::from_matrix(w.delta().matrix()),
            kappa: MatrixDoc::from_matrix(w.kappa().matrix()),
            epsilon: pairs(&w.eps_vector()),
            metadata,
        }
    }

    /// Rebuild the structure, checking shapes only.
    pub fn to_structure(&self) -> Result<WeakHopf> {
        check_version(self.format_version)?;
        let alg = BlockAlgebra::new(self.algebra.blocks.clone(), self.algebra.label.clone())?;
        let d = alg.dim();
        let delta = self.delta.to_matrix("delta")?;
        expect_shape("delta", delta.shape(), (d * d, d))?;
        let kappa = self.kappa.to_matrix("kappa")?;
        expect_shape("kappa", kappa.shape(), (d, d))?;
        expect_shape("epsilon", (1, self.epsilon.len()), (1, d))?;
        let eps = vector(&self.epsilon);
        match &self.gauge {
            GaugeDoc::Named(s) if s == "identity" => WeakHopf::new(alg, delta, kappa, eps),
            GaugeDoc::Named(s) => Err(Error::Parse(format!("unknown gauge {s:?}"))),
            GaugeDoc::Coords(c) => {
                expect_shape("gauge", (1, c.len()), (1, d))?;
                let g = AlgElement::from_coords(&alg, &vector(c))?;
                WeakHopf::with_gauge(alg, g, delta, kappa, eps, default_tol(d))
            }
        }
    }
}

impl ElementDocument {
    pub fn new(x: &AlgElement, coordinates: Coordinates) -> Self {
        Self { format_version: FORMAT_VERSION, blocks: x.shape(), coordinates, coords: pairs(&x.coords()) }
    }

    pub fn to_element(&self) -> Result<AlgElement> {
        check_version(self.format_version)?;
        let alg = BlockAlgebra::new(self.blocks.clone(), "")?;
        expect_shape("element", (1, self.coords.len()), (1, alg.dim()))?;
        AlgElement::from_coords(&alg, &vector(&self.coords))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn to_bytes<T: Serialize>(doc: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("documents serialize");
    out.push(b'\n');
    out
}

/// Serialize a structure with optional provenance metadata.
pub fn save_with(w: &WeakHopf, metadata: BTreeMap<String, Value>) -> Vec<u8> {
    to_bytes(&WhaDocument::from_structure(w, metadata))
}

pub fn save(w: &WeakHopf) -> Vec<u8> {
    save_with(w, BTreeMap::new())
}

pub fn load_document(bytes: &[u8]) -> Result<WhaDocument> {
    parse(bytes)
}

/// Parse and rebuild a structure; axioms are not checked.
pub fn load(bytes: &[u8]) -> Result<WeakHopf> {
    load_document(bytes)?.to_structure()
}

pub fn save_element(x: &AlgElement, coordinates: Coordinates) -> Vec<u8> {
    to_bytes(&ElementDocument::new(x, coordinates))
}

pub fn load_element(bytes: &[u8]) -> Result<(AlgElement, Coordinates)> {
    let doc: ElementDocument = parse(bytes)?;
    Ok((doc.to_element()?, doc.coordinates))
}
