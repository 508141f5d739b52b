//! Eutactic stars: families of dual vectors whose squared pairings add up to the norm.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, QVector};
use crate::linalg;
use crate::rational::{self, Rational};

/// An ordered family `s_1, …, s_N` of nonzero vectors of `L'`.
///
/// The integer pairing vectors `u_j = gram · s_j` are cached; they are the
/// rows of the matrix of the embedding `L → ℤ^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EutacticStar {
    lattice: Lattice,
    vectors: Vec<QVector>,
    pairings: Vec<Vec<i64>>,
}

/// Result of [`EutacticStar::support_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    /// `{±s_j}` without repetitions, sorted.
    pub vectors: Vec<QVector>,
    /// Family members `(i, j)` with `i < j` and `s_j = ±s_i`.
    pub duplicates: Vec<(usize, usize)>,
}

impl SupportSet {
    pub fn has_duplicates(&self) -> bool {
        !self.duplicates.is_empty()
    }
}

impl EutacticStar {
    /// Builds a family from vectors in basis coordinates, validating that each
    /// is nonzero and lies in the dual lattice. Eutaxy itself is not required.
    pub fn new(lattice: Lattice, vectors: Vec<QVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::input("a star needs at least one vector"));
        }
        let mut pairings = Vec::with_capacity(vectors.len());
        for (j, s) in vectors.iter().enumerate() {
            if s.len() != lattice.rank() {
                return Err(Error::input(format!(
                    "vector {j} has {} coordinates, lattice rank is {}",
                    s.len(),
                    lattice.rank()
                )));
            }
            if s.is_zero() {
                return Err(Error::input(format!("vector {j} is zero")));
            }
            let u = lattice
                .pairings(s)?
                .iter()
                .map(rational::to_i64)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::input(format!("vector {j} = {s} is not in the dual lattice")))?;
            pairings.push(u);
        }
        Ok(EutacticStar { lattice, vectors, pairings })
    }

    /// Builds a family from integer pairing vectors `u_j`, setting `s_j = gram⁻¹ u_j`.
    pub fn from_pairings(lattice: Lattice, pairings: Vec<Vec<i64>>) -> Result<Self> {
        let vectors = pairings
            .iter()
            .map(|u| {
                if u.len() != lattice.rank() {
                    return Err(Error::DimensionMismatch { expected: lattice.rank(), found: u.len() });
                }
                Ok(lattice.from_pairings(&u.iter().map(|&x| rational::int(x)).collect::<Vec<_>>()))
            })
            .collect::<Result<Vec<_>>>()?;
        EutacticStar::new(lattice, vectors)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn vectors(&self) -> &[QVector] {
        &self.vectors
    }

    pub fn pairings(&self) -> &[Vec<i64>] {
        &self.pairings
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `Σ_j u_j u_jᵀ`.
    pub fn pairing_gram(&self) -> Vec<Vec<i64>> {
        let l = self.lattice.rank();
        let mut acc = vec![vec![0i64; l]; l];
        for u in &self.pairings {
            for a in 0..l {
                for b in 0..l {
                    acc[a][b] += u[a] * u[b];
                }
            }
        }
        acc
    }

    /// `Σ_j (s_j, x)² = (x, x)` on `L`, checked as the matrix identity `Σ u_j u_jᵀ = gram`.
    pub fn is_eutactic(&self) -> bool {
        self.pairing_gram() == self.lattice.gram()
    }

    /// The embedding `x ↦ ((s_j, x))_j`.
    pub fn embed(&self, x: &QVector) -> Result<Vec<Rational>> {
        if x.len() != self.lattice.rank() {
            return Err(Error::DimensionMismatch { expected: self.lattice.rank(), found: x.len() });
        }
        Ok(self.pairings.iter().map(|u| linalg::int_dot(u, &x.0)).collect())
    }

    /// Number of family members that are nonzero rational multiples of `v`.
    pub fn divisor_multiplicity(&self, v: &QVector) -> Result<usize> {
        if v.len() != self.lattice.rank() {
            return Err(Error::DimensionMismatch { expected: self.lattice.rank(), found: v.len() });
        }
        if v.is_zero() {
            return Err(Error::input("divisor direction must be nonzero"));
        }
        Ok(self.vectors.iter().filter(|s| s.ratio_to(v).is_some()).count())
    }

    /// The set `{x ∈ L' : x ∈ s or −x ∈ s}`, plus the family members that repeat
    /// another one up to sign.
    pub fn support_set(&self) -> SupportSet {
        let mut first_seen: BTreeMap<QVector, usize> = BTreeMap::new();
        let mut duplicates = Vec::new();
        for (j, s) in self.vectors.iter().enumerate() {
            let key = sign_normalized(s);
            match first_seen.get(&key) {
                Some(&i) => duplicates.push((i, j)),
                None => {
                    first_seen.insert(key, j);
                }
            }
        }
        let mut vectors: Vec<QVector> = first_seen.keys().flat_map(|s| [s.clone(), s.neg()]).collect();
        vectors.sort();
        SupportSet { vectors, duplicates }
    }
}

/// `s` or `−s`, whichever has a positive first nonzero coordinate.
pub(crate) fn sign_normalized(s: &QVector) -> QVector {
    use num_traits::{Signed, Zero};
    match s.0.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => s.neg(),
        _ => s.clone(),
    }
}

#[derive(Serialize, Deserialize)]
struct StarFile {
    gram: Vec<Vec<i64>>,
    vectors: Vec<Vec<String>>,
}

impl EutacticStar {
    /// Parses `{"gram": [[..]], "vectors": [["p/q", ..], ..]}`. Pairings are
    /// recomputed from the vectors.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StarFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let lattice = Lattice::new(file.gram)?;
        let vectors = file
            .vectors
            .iter()
            .enumerate()
            .map(|(j, v)| QVector::parse(v).map_err(|e| Error::Parse(format!("vectors[{j}]: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        EutacticStar::new(lattice, vectors).map_err(|e| match e {
            Error::Input(msg) => Error::Input(format!("vectors: {msg}")),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let file = StarFile {
            gram: self.lattice.gram().to_vec(),
            vectors: self.vectors.iter().map(QVector::to_strings).collect(),
        };
        serde_json::to_string(&file).expect("serializable")
    }
}
