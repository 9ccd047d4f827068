//! JSON wire formats. Scalars are always strings `"p/q"` or `"p"`; omitted
//! entries are zero; entries are emitted in index order with zeros skipped.

use std::collections::BTreeSet;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Algebra, LinearMap};
use crate::deformation::{FormalDeformation, FormalIsomorphism};
use crate::error::{Error, Result};
use crate::hochschild::Cochain;
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraEntry {
    i: usize,
    j: usize,
    k: usize,
    #[serde(with = "scalar::serde_str")]
    c: Scalar,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraWire {
    dim: usize,
    unity: Option<usize>,
    entries: Vec<AlgebraEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CochainEntry {
    idx: Vec<usize>,
    k: usize,
    #[serde(with = "scalar::serde_str")]
    c: Scalar,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CochainWire {
    degree: usize,
    dim: usize,
    entries: Vec<CochainEntry>,
}

fn nonzero_entries(c: &Cochain) -> impl Iterator<Item = (Vec<usize>, usize, Scalar)> + '_ {
    c.coeffs().iter().enumerate().filter(|(_, v)| !num::Zero::is_zero(*v)).map(|(pos, v)| {
        let (idx, k) = c.decode(pos);
        (idx, k, v.clone())
    })
}

fn cochain_from_entries(
    degree: usize,
    dim: usize,
    entries: impl IntoIterator<Item = (Vec<usize>, usize, Scalar)>,
) -> Result<Cochain> {
    if dim == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let mut c = Cochain::zero(degree, dim);
    let mut seen = BTreeSet::new();
    for (idx, k, v) in entries {
        if idx.len() != degree {
            return Err(Error::Parse(format!("entry {idx:?} has {} indices, expected {degree}", idx.len())));
        }
        if k >= dim || idx.iter().any(|&i| i >= dim) {
            return Err(Error::Parse(format!("entry {idx:?} -> {k} out of range for dimension {dim}")));
        }
        if !seen.insert((idx.clone(), k)) {
            return Err(Error::Parse(format!("duplicate entry {idx:?} -> {k}")));
        }
        c.set(&idx, k, v);
    }
    Ok(c)
}

impl Serialize for Algebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraWire {
            dim: self.dim(),
            unity: self.unity(),
            entries: nonzero_entries(self.structure())
                .map(|(idx, k, c)| AlgebraEntry {
                    i: idx[0],
                    j: idx[1],
                    k,
                    c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Algebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Algebra, D::Error> {
        let w = AlgebraWire::deserialize(d)?;
        let c = cochain_from_entries(2, w.dim, w.entries.into_iter().map(|e| (vec![e.i, e.j], e.k, e.c)))
            .map_err(D::Error::custom)?;
        Algebra::new(c, w.unity).map_err(D::Error::custom)
    }
}

impl Serialize for Cochain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CochainWire {
            degree: self.degree(),
            dim: self.dim(),
            entries: nonzero_entries(self)
                .map(|(idx, k, c)| CochainEntry { idx, k, c })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cochain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Cochain, D::Error> {
        let w = CochainWire::deserialize(d)?;
        cochain_from_entries(w.degree, w.dim, w.entries.into_iter().map(|e| (e.idx, e.k, e.c)))
            .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeformationWire {
    base: Algebra,
    terms: Vec<Cochain>,
}

impl Serialize for FormalDeformation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DeformationWire {
            base: self.base().clone(),
            terms: self.terms().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalDeformation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<FormalDeformation, D::Error> {
        let w = DeformationWire::deserialize(d)?;
        FormalDeformation::new(w.base, w.terms).map_err(D::Error::custom)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.to_rows().iter().map(|r| r.iter().map(scalar::format).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Matrix, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|x| scalar::parse(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        if let Some(first) = parsed.first() {
            if parsed.iter().any(|r| r.len() != first.len()) {
                return Err(D::Error::custom("ragged matrix rows"));
            }
        }
        Ok(Matrix::from_rows(parsed))
    }
}

impl Serialize for LinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<LinearMap, D::Error> {
        LinearMap::new(Matrix::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IsomorphismWire {
    dim: usize,
    terms: Vec<Matrix>,
}

impl Serialize for FormalIsomorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IsomorphismWire {
            dim: self.dim(),
            terms: self.terms().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalIsomorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<FormalIsomorphism, D::Error> {
        let w = IsomorphismWire::deserialize(d)?;
        let terms = w
            .terms
            .into_iter()
            .map(LinearMap::new)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        FormalIsomorphism::new(w.dim, terms).map_err(D::Error::custom)
    }
}

pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_string_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}
