//! Integral positive definite lattices given by a Gram matrix on a fixed basis.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};

/// A vector of `L ⊗ ℚ` in coordinates of the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(pub Vec<Rational>);

impl QVector {
    pub fn from_ints(xs: &[i64]) -> Self {
        QVector(xs.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn zero(len: usize) -> Self {
        QVector(vec![Rational::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> QVector {
        QVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &QVector) -> QVector {
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Returns `c` with `self = c · other`, if such a rational exists.
    pub fn ratio_to(&self, other: &QVector) -> Option<Rational> {
        let k = other.0.iter().position(|x| !x.is_zero())?;
        let c = &self.0[k] / &other.0[k];
        (*self == other.scale(&c)).then_some(c)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational::format).collect()
    }

    pub fn parse(items: &[String]) -> Result<Self> {
        items.iter().map(|s| rational::parse(s)).collect::<Result<_>>().map(QVector)
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// An integral positive definite lattice.
///
/// The Gram matrix is validated at construction; the inverse (the Gram matrix
/// of the dual basis) is computed once and cached.
#[derive(Clone, Debug)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    dual: Matrix,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for Lattice {}

impl Lattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::input("Gram matrix must have positive rank"));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("Gram row {i} has length {}, expected {n}", row.len())));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::input(format!("Gram matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        for k in 1..=n {
            let minor: Vec<Vec<i64>> = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !linalg::det_int(&minor).is_positive() {
                return Err(Error::input(format!(
                    "Gram matrix is not positive definite (leading minor of order {k} is not positive)"
                )));
            }
        }
        let dual = linalg::inverse(&linalg::from_ints(&gram))
            .ok_or_else(|| Error::defect("positive definite Gram matrix is singular"))?;
        Ok(Lattice { gram, dual })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Exact inverse of the Gram matrix.
    pub fn dual_gram(&self) -> &Matrix {
        &self.dual
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn trace(&self) -> i64 {
        (0..self.rank()).map(|i| self.gram[i][i]).sum()
    }

    fn check_dim(&self, x: &QVector) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: x.len() });
        }
        Ok(())
    }

    /// `gram · x`: the pairings `(x, e_i)` with the basis vectors.
    pub fn pairings(&self, x: &QVector) -> Result<Vec<Rational>> {
        self.check_dim(x)?;
        Ok(self.gram.iter().map(|row| linalg::int_dot(row, &x.0)).collect())
    }

    pub fn inner(&self, x: &QVector, y: &QVector) -> Result<Rational> {
        self.check_dim(y)?;
        Ok(linalg::dot(&self.pairings(x)?, &y.0))
    }

    pub fn norm(&self, x: &QVector) -> Result<Rational> {
        self.inner(x, x)
    }

    /// Inner product of two vectors given by their pairings with the basis,
    /// i.e. elements of `L'` written in dual coordinates.
    pub fn dual_inner(&self, p: &[Rational], q: &[Rational]) -> Rational {
        linalg::dot(&linalg::mat_vec(&self.dual, p), q)
    }

    /// Converts dual (pairing) coordinates back to basis coordinates.
    pub fn from_pairings(&self, p: &[Rational]) -> QVector {
        QVector(linalg::mat_vec(&self.dual, p))
    }

    /// `x ∈ L'`: every pairing with a basis vector is an integer.
    pub fn is_in_dual(&self, x: &QVector) -> Result<bool> {
        Ok(self.pairings(x)?.iter().all(rational::is_integer))
    }

    /// `x ∈ L•`: `(x, e_i) − (e_i, e_i)/2 ∈ ℤ` for each basis vector.
    ///
    /// Checking basis vectors suffices: `y ↦ (x,y) − (y,y)/2 mod ℤ` is additive
    /// on an integral lattice because `(y,z) ∈ ℤ` and `(y,y) ≡ Σ yᵢ²(eᵢ,eᵢ) (mod 2)`.
    pub fn is_in_shadow(&self, x: &QVector) -> Result<bool> {
        let p = self.pairings(x)?;
        Ok(p.iter()
            .enumerate()
            .all(|(i, v)| rational::is_integer(&(v - rational::frac(self.gram[i][i], 2)))))
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeFile {
    gram: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Lattice::new(file.gram)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&LatticeFile { gram: self.gram.clone() }).expect("serializable")
    }
}
