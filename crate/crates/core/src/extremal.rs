//! Exact global minimization of the periodic deficiency function
//! `x ↦ Σ_j B((s_j, x))` and the resulting extremality certificate.
//!
//! With `u_j = gram · s_j` integral the function is `ℤ^l`-periodic in basis
//! coordinates and piecewise quadratic: on every closed cell of the affine
//! arrangement `{u_jᵀx ∈ ℤ}` it equals `½ Σ_j (u_jᵀx − m_j − ½)²` for fixed
//! integers `m_j`, a strictly convex quadratic with Hessian `Σ u_j u_jᵀ = gram`.
//!
//! A global minimizer lies in the relative interior of some face `F` of the
//! arrangement and minimizes the cell quadratic over the affine span of `F`.
//! Every face is bounded and has an arrangement vertex `v` in its closure, so
//! the search walks over vertices modulo `ℤ^l` and, at each, over the flats
//! through `v` and the cells adjacent to it. Each candidate is the exact
//! minimizer of a quadratic over an affine subspace; the smallest value of the
//! deficiency over all candidates is the global minimum.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::lattice::QVector;
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};
use crate::star::EutacticStar;

/// `B(x) = ½ (y − ½)²` with `y ∈ [0, 1)`, `y ≡ x (mod 1)`.
pub fn b_eval(x: &Rational) -> Rational {
    let y = rational::fract(x) - rational::half();
    &y * &y / rational::int(2)
}

/// `Σ_j B((s_j, x))`.
pub fn deficiency(star: &EutacticStar, x: &QVector) -> Result<Rational> {
    Ok(star.embed(x)?.iter().map(b_eval).fold(Rational::zero(), |a, b| a + b))
}

/// Exact minimum of [`deficiency`] with a minimizer in `[0, 1)^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficiencyMinimum {
    pub value: Rational,
    pub witness: QVector,
    /// Number of feasible candidate points evaluated.
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalityCertificate {
    pub is_extremal: bool,
    pub min_value: Rational,
    /// `(N − rk L) / 24`.
    pub threshold: Rational,
    pub witness: QVector,
    pub cells_examined: usize,
}

impl ExtremalityCertificate {
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "extremal": self.is_extremal,
            "min": rational::format(&self.min_value),
            "threshold": rational::format(&self.threshold),
            "witness": self.witness.to_strings(),
        })
    }
}

pub fn threshold(star: &EutacticStar) -> Rational {
    rational::frac(star.len() as i64 - star.lattice().rank() as i64, 24)
}

pub fn certify_extremal(star: &EutacticStar) -> Result<ExtremalityCertificate> {
    let min = min_deficiency(star)?;
    let threshold = threshold(star);
    Ok(ExtremalityCertificate {
        is_extremal: min.value >= threshold,
        min_value: min.value,
        threshold,
        witness: min.witness,
        cells_examined: min.candidates,
    })
}

pub fn min_deficiency(star: &EutacticStar) -> Result<DeficiencyMinimum> {
    if !star.is_eutactic() {
        return Err(Error::input("minimization requires a eutactic star"));
    }
    let solver = FaceSolver::new(star);
    let vertices = solver.vertices_mod_one();

    let best = vertices
        .par_iter()
        .map(|v| solver.scan_vertex(v))
        .reduce(Best::default, Best::merge);

    let (value, witness) = best
        .point
        .ok_or_else(|| Error::defect("no candidate point found by the face enumeration"))?;
    Ok(DeficiencyMinimum { value, witness: QVector(witness), candidates: best.candidates })
}

#[derive(Default)]
struct Best {
    point: Option<(Rational, Vec<Rational>)>,
    candidates: usize,
}

impl Best {
    fn offer(&mut self, value: Rational, x: Vec<Rational>) {
        self.candidates += 1;
        self.consider(value, x);
    }

    fn consider(&mut self, value: Rational, x: Vec<Rational>) {
        let x: Vec<Rational> = x.iter().map(rational::fract).collect();
        let better = match &self.point {
            None => true,
            Some((v, w)) => (&value, &x) < (v, w),
        };
        if better {
            self.point = Some((value, x));
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.candidates += other.candidates;
        if let Some((v, x)) = other.point {
            self.consider(v, x);
        }
        self
    }
}

struct FaceSolver {
    rank: usize,
    u: Vec<Vec<i64>>,
    /// Range of `u_jᵀx` over the closed unit box. Every vertex class modulo
    /// `ℤ^l` has a representative in the box, hit by levels in this range.
    level_lo: Vec<i64>,
    level_hi: Vec<i64>,
    /// For each independent index set `B` with `|B| < rank`: the top `rank`
    /// rows of the inverse KKT matrix `[[G, A_Bᵀ], [A_B, 0]]`.
    kkt: HashMap<Vec<usize>, Matrix>,
}

impl FaceSolver {
    fn new(star: &EutacticStar) -> Self {
        let rank = star.lattice().rank();
        let u = star.pairings().to_vec();
        let hessian = linalg::from_ints(&star.pairing_gram());
        debug_assert_eq!(star.pairing_gram(), star.lattice().gram(), "cell Hessian must equal the Gram matrix");

        let level_lo = u.iter().map(|r| r.iter().filter(|&&x| x < 0).sum::<i64>()).collect();
        let level_hi = u.iter().map(|r| r.iter().filter(|&&x| x > 0).sum::<i64>()).collect();

        let mut kkt = HashMap::new();
        for size in 0..rank {
            for subset in combinations(u.len(), size) {
                let rows: Matrix = subset.iter().map(|&j| ints(&u[j])).collect();
                if linalg::rank(&rows) < size {
                    continue;
                }
                let n = rank + size;
                let mut k = vec![vec![Rational::zero(); n]; n];
                for a in 0..rank {
                    for b in 0..rank {
                        k[a][b] = hessian[a][b].clone();
                    }
                    for (i, row) in rows.iter().enumerate() {
                        k[a][rank + i] = row[a].clone();
                        k[rank + i][a] = row[a].clone();
                    }
                }
                let inv = linalg::inverse(&k).expect("KKT matrix of a PD form with independent constraints");
                kkt.insert(subset, inv.into_iter().take(rank).collect());
            }
        }
        FaceSolver { rank, u, level_lo, level_hi, kkt }
    }

    /// Arrangement vertices reduced into `[0, 1)^l`, deduplicated.
    fn vertices_mod_one(&self) -> Vec<Vec<Rational>> {
        let mut out = BTreeSet::new();
        for subset in combinations(self.u.len(), self.rank) {
            let rows: Matrix = subset.iter().map(|&j| ints(&self.u[j])).collect();
            let Some(inv) = linalg::inverse(&rows) else { continue };
            let ranges: Vec<(i64, i64)> = subset.iter().map(|&j| (self.level_lo[j], self.level_hi[j])).collect();
            for_each_point(&ranges, |levels| {
                let k: Vec<Rational> = levels.iter().map(|&x| rational::int(x)).collect();
                let v: Vec<Rational> = linalg::mat_vec(&inv, &k).iter().map(rational::fract).collect();
                out.insert(v);
            });
        }
        out.into_iter().collect()
    }

    fn scan_vertex(&self, v: &[Rational]) -> Best {
        let mut best = Best::default();
        let pv: Vec<Rational> = self.u.iter().map(|r| linalg::int_dot(r, v)).collect();
        let through: Vec<usize> = (0..self.u.len()).filter(|&j| rational::is_integer(&pv[j])).collect();

        best.offer(self.value_at(v), v.to_vec());

        // Flats through v: span-closed subsets of the hyperplanes containing v.
        let mut flats: BTreeSet<Vec<usize>> = BTreeSet::new();
        for size in 0..self.rank {
            for pick in combinations(through.len(), size) {
                let basis: Vec<usize> = pick.iter().map(|&i| through[i]).collect();
                if !self.kkt.contains_key(&basis) {
                    continue;
                }
                let closure: Vec<usize> =
                    through.iter().copied().filter(|&j| self.in_span(&basis, j)).collect();
                flats.insert(closure);
            }
        }

        for flat in &flats {
            let basis = self.greedy_basis(flat);
            let top = &self.kkt[&basis];
            let free: Vec<usize> = through.iter().copied().filter(|j| !flat.contains(j)).collect();
            let levels: Vec<Rational> = basis.iter().map(|&j| pv[j].clone()).collect();

            for mask in 0u64..(1u64 << free.len()) {
                // Cell offsets: fixed by v off the hyperplanes through it, chosen per side on them.
                let offsets: Vec<Option<Rational>> = (0..self.u.len())
                    .map(|j| {
                        if flat.contains(&j) {
                            None
                        } else if let Some(bit) = free.iter().position(|&f| f == j) {
                            let above = mask >> bit & 1 == 1;
                            Some(if above { pv[j].clone() } else { &pv[j] - Rational::one() })
                        } else {
                            Some(pv[j].floor())
                        }
                    })
                    .collect();

                let mut rhs = vec![Rational::zero(); self.rank];
                for (j, m) in offsets.iter().enumerate() {
                    if let Some(m) = m {
                        let t = m + rational::half();
                        for (r, &c) in rhs.iter_mut().zip(&self.u[j]) {
                            if c != 0 {
                                *r += &t * rational::int(c);
                            }
                        }
                    }
                }
                rhs.extend(levels.iter().cloned());
                let x = linalg::mat_vec(top, &rhs);

                let feasible = offsets.iter().enumerate().all(|(j, m)| match m {
                    None => true,
                    Some(m) => {
                        let p = linalg::int_dot(&self.u[j], &x);
                        *m <= p && p <= m + Rational::one()
                    }
                });
                if feasible {
                    let value = self.value_at(&x);
                    best.offer(value, x);
                }
            }
        }
        best
    }

    fn value_at(&self, x: &[Rational]) -> Rational {
        self.u.iter().map(|r| b_eval(&linalg::int_dot(r, x))).fold(Rational::zero(), |a, b| a + b)
    }

    fn in_span(&self, basis: &[usize], j: usize) -> bool {
        let mut rows: Matrix = basis.iter().map(|&b| ints(&self.u[b])).collect();
        rows.push(ints(&self.u[j]));
        linalg::rank(&rows) == basis.len()
    }

    fn greedy_basis(&self, flat: &[usize]) -> Vec<usize> {
        let mut basis = Vec::new();
        for &j in flat {
            if !self.in_span(&basis, j) {
                basis.push(j);
            }
        }
        basis
    }
}

fn ints(row: &[i64]) -> Vec<Rational> {
    row.iter().map(|&x| rational::int(x)).collect()
}

/// All increasing index tuples of length `k` from `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn for_each_point(ranges: &[(i64, i64)], mut f: impl FnMut(&[i64])) {
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return;
    }
    loop {
        f(&cur);
        let mut i = 0;
        loop {
            if i == ranges.len() {
                return;
            }
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::rational::{frac, int};
    use crate::star::tests::{a1_star, a2_star, doubled_star};
    use proptest::prelude::*;

    /// Brute-force oracle: evaluates the deficiency on the grid `(1/n)ℤ^l ∩ [0,1)^l`.
    fn grid_min(star: &EutacticStar, n: i64) -> Rational {
        let l = star.lattice().rank();
        let mut best: Option<Rational> = None;
        for_each_point(&vec![(0, n - 1); l], |p| {
            let x = QVector(p.iter().map(|&k| frac(k, n)).collect());
            let v = deficiency(star, &x).unwrap();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        });
        best.unwrap()
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_eval(&int(0)), frac(1, 8));
        assert_eq!(b_eval(&frac(1, 2)), int(0));
        assert_eq!(b_eval(&frac(1, 3)), frac(1, 72));
    }

    #[test]
    fn deficiency_examples() {
        assert_eq!(deficiency(&a1_star(), &QVector(vec![frac(1, 2)])).unwrap(), int(0));
        assert_eq!(deficiency(&a1_star(), &QVector::from_ints(&[0])).unwrap(), frac(1, 8));
        assert_eq!(deficiency(&doubled_star(), &QVector(vec![frac(1, 2)])).unwrap(), int(0));
    }

    #[test]
    fn a1_minimum() {
        let m = min_deficiency(&a1_star()).unwrap();
        assert_eq!(m.value, int(0));
        assert_eq!(m.witness, QVector(vec![frac(1, 2)]));
    }

    #[test]
    fn doubled_minimum() {
        let star = doubled_star();
        let m = min_deficiency(&star).unwrap();
        assert_eq!(m.value, int(0));
        assert_eq!(star.embed(&m.witness).unwrap(), vec![frac(1, 2), frac(1, 2)]);
    }

    #[test]
    fn a2_minimum_matches_grid_oracle() {
        // The grid (1/6)ℤ² contains (1/3, 1/3); the grid value is an upper bound
        // that the exact solver must reach.
        let star = a2_star();
        let oracle = grid_min(&star, 6);
        assert_eq!(oracle, frac(1, 24));
        let finer = grid_min(&star, 30);
        assert_eq!(finer, frac(1, 24));
        let m = min_deficiency(&star).unwrap();
        assert_eq!(m.value, oracle);
        assert_eq!(deficiency(&star, &m.witness).unwrap(), m.value);
    }

    #[test]
    fn certificate_examples() {
        let c = certify_extremal(&a1_star()).unwrap();
        assert!(c.is_extremal);
        assert_eq!(c.threshold, int(0));
        let c = certify_extremal(&doubled_star()).unwrap();
        assert!(!c.is_extremal);
        assert_eq!(c.min_value, int(0));
        assert_eq!(c.threshold, frac(1, 24));
        assert_eq!(
            c.to_json_value().to_string(),
            r#"{"extremal":false,"min":"0","threshold":"1/24","witness":["1/2"]}"#
        );
    }

    #[test]
    fn non_eutactic_is_rejected() {
        let s = EutacticStar::from_pairings(Lattice::new(vec![vec![2]]).unwrap(), vec![vec![1]]).unwrap();
        assert!(matches!(min_deficiency(&s), Err(Error::Input(_))));
        assert!(certify_extremal(&s).is_err());
    }

    #[test]
    fn off_diagonal_star_matches_grid() {
        // Gram [[4,1],[1,4]] = (1,0)(1,0)ᵀ·3 + (1,1)(1,1)ᵀ + (0,1)(0,1)ᵀ·3
        let l = Lattice::new(vec![vec![4, 1], vec![1, 4]]).unwrap();
        let star = EutacticStar::from_pairings(
            l,
            vec![vec![1, 0], vec![1, 0], vec![1, 0], vec![1, 1], vec![0, 1], vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let m = min_deficiency(&star).unwrap();
        assert!(m.value <= grid_min(&star, 24));
        assert_eq!(deficiency(&star, &m.witness).unwrap(), m.value);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    proptest! {
        #[test]
        fn b_is_even_and_periodic(n in -500i64..500, d in 1i64..50) {
            let x = frac(n, d);
            prop_assert_eq!(b_eval(&x), b_eval(&-&x));
            prop_assert_eq!(b_eval(&x), b_eval(&(&x + int(1))));
        }

        #[test]
        fn a2_minimum_is_a_lower_bound(a in 0i64..97, b in 0i64..97, d in 1i64..97) {
            let star = a2_star();
            let m = min_deficiency(&star).unwrap();
            let x = QVector(vec![frac(a, d), frac(b, d)]);
            prop_assert!(deficiency(&star, &x).unwrap() >= m.value);
        }
    }
}
