//! Exhaustive enumeration of eutactic stars on small lattices and an empirical
//! check that every extremal one has a root system as support.
//!
//! A star on `L` is the same thing as a decomposition `gram = Σ_j u_j u_jᵀ`
//! into nonzero integer rank-one summands, so stars are found by backtracking
//! over integer vectors while keeping the residual positive semidefinite.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{Error, Result};
use crate::extremal::{certify_extremal, ExtremalityCertificate};
use crate::lattice::Lattice;
use crate::linalg;
use crate::rootsys::{recognize, Recognition};
use crate::star::EutacticStar;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// One representative per orbit under reordering and sign flips.
    pub canonical_dedup: bool,
    /// Abort if a star with more than this many vectors would be produced.
    pub max_n: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { canonical_dedup: true, max_n: None }
    }
}

/// Nonzero integer vectors with first nonzero entry positive, `|u_i| ≤ ⌊√g_ii⌋`
/// and `gram − u uᵀ` positive semidefinite; sorted in decreasing order.
fn alphabet(gram: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let l = gram.len();
    let bounds: Vec<i64> = (0..l).map(|i| isqrt(gram[i][i])).collect();
    let mut out = Vec::new();
    let mut cur: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let lead = cur.iter().find(|&&x| x != 0);
        if matches!(lead, Some(&x) if x > 0) && is_psd_after(gram, &cur) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == l {
                out.sort_by(|a, b| b.cmp(a));
                return out;
            }
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = -bounds[i];
            i += 1;
        }
    }
}

fn isqrt(n: i64) -> i64 {
    let mut r = 0;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn subtract_outer(residual: &[Vec<i64>], u: &[i64]) -> Vec<Vec<i64>> {
    residual
        .iter()
        .enumerate()
        .map(|(a, row)| row.iter().enumerate().map(|(b, x)| x - u[a] * u[b]).collect())
        .collect()
}

fn is_psd_after(residual: &[Vec<i64>], u: &[i64]) -> bool {
    linalg::is_psd_int(&subtract_outer(residual, u))
}

/// Canonical decompositions `{u_j}` (sign-normalized, sorted ascending).
pub(crate) fn canonical_decompositions(
    gram: &[Vec<i64>],
    order: &[Vec<i64>],
    max_n: Option<usize>,
) -> Result<BTreeSet<Vec<Vec<i64>>>> {
    fn go(
        residual: &[Vec<i64>],
        order: &[Vec<i64>],
        start: usize,
        chosen: &mut Vec<Vec<i64>>,
        out: &mut BTreeSet<Vec<Vec<i64>>>,
        max_n: Option<usize>,
    ) -> Result<()> {
        if residual.iter().all(|r| r.iter().all(|&x| x == 0)) {
            let mut star = chosen.clone();
            star.sort();
            out.insert(star);
            return Ok(());
        }
        if let Some(m) = max_n {
            if chosen.len() >= m {
                return Err(Error::input(format!("star size exceeds the limit of {m} vectors")));
            }
        }
        for idx in start..order.len() {
            let u = &order[idx];
            if u.iter().enumerate().any(|(i, &x)| x != 0 && residual[i][i] < x * x) {
                continue;
            }
            let next = subtract_outer(residual, u);
            if !linalg::is_psd_int(&next) {
                continue;
            }
            chosen.push(u.clone());
            go(&next, order, idx, chosen, out, max_n)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut out = BTreeSet::new();
    go(gram, order, 0, &mut Vec::new(), &mut out, max_n)?;
    Ok(out)
}

/// All eutactic stars on `lattice`, as families of pairing vectors.
///
/// Termination is unconditional: each summand adds at least 1 to the trace,
/// so `N ≤ trace(gram)`.
pub fn enumerate_stars(lattice: &Lattice, options: &SearchOptions) -> Result<Vec<EutacticStar>> {
    let gram = lattice.gram();
    let order = alphabet(gram);
    let canonical = canonical_decompositions(gram, &order, options.max_n)?;

    let families: BTreeSet<Vec<Vec<i64>>> = if options.canonical_dedup {
        canonical
    } else {
        canonical.iter().flat_map(|c| sign_variants(c)).collect()
    };
    families
        .into_iter()
        .map(|u| {
            let star = EutacticStar::from_pairings(lattice.clone(), u)?;
            if !star.is_eutactic() {
                return Err(Error::defect("enumerated star fails eutaxy"));
            }
            Ok(star)
        })
        .collect()
}

/// Every multiset obtained from `rows` by flipping signs of individual rows.
fn sign_variants(rows: &[Vec<i64>]) -> BTreeSet<Vec<Vec<i64>>> {
    let mut out = BTreeSet::new();
    for mask in 0u64..(1 << rows.len()) {
        let mut v: Vec<Vec<i64>> = rows
            .iter()
            .enumerate()
            .map(|(j, r)| if mask >> j & 1 == 1 { r.iter().map(|x| -x).collect() } else { r.clone() })
            .collect();
        v.sort();
        out.insert(v);
    }
    out
}

/// Canonical form of a pairing family: each row sign-normalized, rows sorted.
pub fn canonical_form(pairings: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = pairings
        .iter()
        .map(|r| match r.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => r.iter().map(|y| -y).collect(),
            _ => r.clone(),
        })
        .collect();
    rows.sort();
    rows
}

#[derive(Clone, Debug)]
pub struct ExtremalEntry {
    pub pairings: Vec<Vec<i64>>,
    pub certificate: ExtremalityCertificate,
    pub recognition: Recognition,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub pairings: Vec<Vec<i64>>,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub lattice: Lattice,
    pub stars: usize,
    pub extremal: Vec<ExtremalEntry>,
    pub counterexamples: Vec<Counterexample>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "stars": self.stars,
            "extremal": self.extremal.iter().map(|e| json!({
                "pairings": e.pairings,
                "certificate": e.certificate.to_json_value(),
                "type": e.recognition.label(),
            })).collect::<Vec<_>>(),
            "counterexamples": self.counterexamples.iter().map(|c| json!({
                "pairings": c.pairings,
                "reason": c.reason,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Certifies every canonical star on `lattice` and checks that each extremal
/// one has a root system of full rank as its support.
pub fn verify_theorem(lattice: &Lattice) -> Result<TheoremReport> {
    let stars = enumerate_stars(lattice, &SearchOptions::default())?;
    let mut extremal = Vec::new();
    let mut counterexamples = Vec::new();
    for star in &stars {
        let certificate = certify_extremal(star)?;
        if !certificate.is_extremal {
            continue;
        }
        let pairings = star.pairings().to_vec();
        let support = star.support_set();
        if let Some(&(i, j)) = support.duplicates.first() {
            counterexamples.push(Counterexample {
                pairings,
                reason: format!("members {i} and {j} coincide up to sign"),
            });
            continue;
        }
        let recognition = recognize(&support.vectors, lattice)?;
        match recognition.rank() {
            None => counterexamples.push(Counterexample { pairings: pairings.clone(), reason: recognition.label() }),
            Some(r) if r != lattice.rank() => counterexamples.push(Counterexample {
                pairings: pairings.clone(),
                reason: format!("support has rank {r}, lattice has rank {}", lattice.rank()),
            }),
            Some(_) => {}
        }
        extremal.push(ExtremalEntry { pairings, certificate, recognition });
    }
    Ok(TheoremReport { lattice: lattice.clone(), stars: stars.len(), extremal, counterexamples })
}

/// Gram matrices on which the theorem is checked by the regression suite.
pub fn theorem_corpus() -> Vec<Lattice> {
    [
        vec![vec![1]],
        vec![vec![2]],
        vec![vec![3]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, 1], vec![1, 2]],
        vec![vec![2, 0], vec![0, 2]],
        vec![vec![4, 1], vec![1, 4]],
    ]
    .into_iter()
    .map(|g| Lattice::new(g).expect("corpus Gram matrices are positive definite"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_star, catalog_label};
    use rand::{seq::SliceRandom, SeedableRng};

    fn lat(g: Vec<Vec<i64>>) -> Lattice {
        Lattice::new(g).unwrap()
    }

    fn canonical_sets(l: &Lattice) -> Vec<Vec<Vec<i64>>> {
        enumerate_stars(l, &SearchOptions::default())
            .unwrap()
            .iter()
            .map(|s| canonical_form(s.pairings()))
            .collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(canonical_sets(&lat(vec![vec![1]])), vec![vec![vec![1]]]);
        assert_eq!(canonical_sets(&lat(vec![vec![2]])), vec![vec![vec![1], vec![1]]]);
        assert_eq!(canonical_sets(&lat(vec![vec![1, 0], vec![0, 1]])), vec![vec![vec![0, 1], vec![1, 0]]]);
    }

    #[test]
    fn a2_lattice_has_the_root_star() {
        let sets = canonical_sets(&lat(vec![vec![2, 1], vec![1, 2]]));
        assert!(sets.contains(&vec![vec![0, 1], vec![1, 0], vec![1, 1]]));
    }

    #[test]
    fn uncanonical_enumeration_expands_signs() {
        let l = lat(vec![vec![2]]);
        let all = enumerate_stars(&l, &SearchOptions { canonical_dedup: false, max_n: None }).unwrap();
        let sets: Vec<Vec<Vec<i64>>> = all.iter().map(|s| s.pairings().to_vec()).collect();
        assert_eq!(sets, vec![vec![vec![-1], vec![-1]], vec![vec![-1], vec![1]], vec![vec![1], vec![1]]]);
    }

    #[test]
    fn max_n_guard() {
        let l = lat(vec![vec![3]]);
        assert!(enumerate_stars(&l, &SearchOptions { canonical_dedup: true, max_n: Some(2) }).is_err());
        assert!(enumerate_stars(&l, &SearchOptions { canonical_dedup: true, max_n: Some(3) }).is_ok());
    }

    #[test]
    fn exploration_order_does_not_matter() {
        let l = lat(vec![vec![4, 1], vec![1, 4]]);
        let order = alphabet(l.gram());
        let reference = canonical_decompositions(l.gram(), &order, None).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let mut shuffled = order.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(canonical_decompositions(l.gram(), &shuffled, None).unwrap(), reference);
        }
        let again: BTreeSet<_> = reference.iter().map(|s| canonical_form(s)).collect();
        assert_eq!(again, reference);
    }

    #[test]
    fn root_stars_are_found_on_their_p_lattices() {
        for label in ["A1", "A2", "B2", "G2"] {
            let star = build_star(&catalog_label(label).unwrap()).unwrap();
            if star.lattice().trace() > 12 {
                continue;
            }
            let sets = canonical_sets(star.lattice());
            assert!(sets.contains(&canonical_form(star.pairings())), "{label}");
        }
    }

    #[test]
    fn theorem_examples() {
        let r = verify_theorem(&lat(vec![vec![2]])).unwrap();
        assert_eq!((r.stars, r.extremal.len(), r.counterexamples.len()), (1, 0, 0));

        let r = verify_theorem(&lat(vec![vec![1, 0], vec![0, 1]])).unwrap();
        assert_eq!((r.stars, r.extremal.len()), (1, 1));
        assert_eq!(r.extremal[0].recognition.label(), "A1 x A1");
        assert!(r.holds());

        let r = verify_theorem(&lat(vec![vec![2, 1], vec![1, 2]])).unwrap();
        assert!(r.holds());
        let extremal: Vec<_> = r.extremal.iter().map(|e| canonical_form(&e.pairings)).collect();
        assert_eq!(extremal, vec![vec![vec![0, 1], vec![1, 0], vec![1, 1]]]);
        assert_eq!(r.extremal[0].recognition.label(), "A2");
    }

    #[test]
    fn report_json_shape() {
        let r = verify_theorem(&lat(vec![vec![2]])).unwrap();
        assert_eq!(r.to_json_value().to_string(), r#"{"counterexamples":[],"extremal":[],"stars":1}"#);
    }
}
