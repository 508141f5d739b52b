//! Irreducible root systems: a catalog of realizations, the lattice `P` with
//! its star `s_R = (r/h : r ∈ R⁺)`, and recognition of root systems among
//! finite vector families.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, QVector};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};
use crate::star::EutacticStar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A Cartan type such as `A2`, `B3`, `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

const MAX_CLASSICAL_RANK: usize = 30;

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok || rank > MAX_CLASSICAL_RANK {
            return Err(Error::input(format!("no irreducible root system {family:?}{rank}")));
        }
        Ok(CartanType { family, rank })
    }

    /// All irreducible types of the given rank, one per isomorphism class.
    pub fn of_rank(rank: usize) -> Vec<CartanType> {
        [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G]
            .into_iter()
            .filter_map(|f| CartanType::new(f, rank).ok())
            .collect()
    }

    /// Every irreducible type of rank at most `max_rank`.
    pub fn up_to_rank(max_rank: usize) -> Vec<CartanType> {
        (1..=max_rank).flat_map(CartanType::of_rank).collect()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::input(format!("invalid root system label {s:?}"));
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        CartanType::new(family, rank)
    }
}

/// A root system in the coordinates of its simple roots.
///
/// `positive_roots` are coefficient vectors over the simple roots, `norm_gram`
/// is the normalized form `⟨α_i, α_j⟩` (long roots have norm 2), and `h` is the
/// dual Coxeter number, determined from `Σ_{r∈R⁺} ⟨r, z⟩² = h ⟨z, z⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystemDescriptor {
    pub cartan_type: CartanType,
    pub positive_roots: Vec<QVector>,
    pub h: i64,
    pub norm_gram: Matrix,
    pub cartan: Vec<Vec<i64>>,
}

/// The lattice `P = {x : ⟨x, r⟩ ∈ ℤ}` with form `h ⟨−,−⟩` on the fundamental
/// coweight basis.
#[derive(Clone, Debug)]
pub struct PLattice {
    pub lattice: Lattice,
    /// Coweight basis vectors `ω_i` in simple-root coordinates.
    pub basis: Vec<QVector>,
}

/// Looks up (and memoizes) the descriptor for a type.
pub fn catalog(t: CartanType) -> Result<Arc<RootSystemDescriptor>> {
    static CACHE: OnceLock<Mutex<HashMap<CartanType, Arc<RootSystemDescriptor>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.lock().expect("catalog lock").get(&t) {
        return Ok(d.clone());
    }
    let d = Arc::new(build_descriptor(t)?);
    cache.lock().expect("catalog lock").insert(t, d.clone());
    Ok(d)
}

pub fn catalog_label(label: &str) -> Result<Arc<RootSystemDescriptor>> {
    catalog(label.parse()?)
}

/// All roots in a Euclidean model, and the factor turning the dot product into
/// the normalized form.
fn euclidean_model(t: CartanType) -> (usize, Vec<Vec<Rational>>, Rational) {
    let n = t.rank;
    let unit = |d: usize, entries: &[(usize, i64)]| {
        let mut v = vec![Rational::zero(); d];
        for &(i, c) in entries {
            v[i] = rational::int(c);
        }
        v
    };
    let pm_pairs = |d: usize| {
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    out.push(unit(d, &[(i, a), (j, b)]));
                }
            }
        }
        out
    };
    let half_spinors = |d: usize, even_only: bool| {
        let mut out = Vec::new();
        for mask in 0u32..(1 << d) {
            if even_only && mask.count_ones() % 2 == 1 {
                continue;
            }
            out.push(
                (0..d)
                    .map(|i| if mask & (1 << i) != 0 { rational::frac(-1, 2) } else { rational::half() })
                    .collect(),
            );
        }
        out
    };
    let e8 = || {
        let mut roots = pm_pairs(8);
        roots.extend(half_spinors(8, true));
        roots
    };
    let dot = |a: &[Rational], b: &[Rational]| linalg::dot(a, b);

    match t.family {
        Family::A => {
            let d = n + 1;
            let roots = (0..d)
                .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| unit(d, &[(i, 1), (j, -1)]))
                .collect();
            (d, roots, Rational::one())
        }
        Family::B => {
            let mut roots = pm_pairs(n);
            roots.extend((0..n).flat_map(|i| [unit(n, &[(i, 1)]), unit(n, &[(i, -1)])]));
            (n, roots, Rational::one())
        }
        Family::C => {
            let mut roots = pm_pairs(n);
            roots.extend((0..n).flat_map(|i| [unit(n, &[(i, 2)]), unit(n, &[(i, -2)])]));
            (n, roots, rational::half())
        }
        Family::D => (n, pm_pairs(n), Rational::one()),
        Family::E => {
            let theta: Vec<Rational> = vec![rational::half(); 8];
            let mut roots = e8();
            if n <= 7 {
                roots.retain(|r| dot(r, &theta).is_zero());
            }
            if n == 6 {
                let second = unit(8, &[(6, 1), (7, 1)]);
                roots.retain(|r| dot(r, &second).is_zero());
            }
            (8, roots, Rational::one())
        }
        Family::F => {
            let mut roots = pm_pairs(4);
            roots.extend((0..4).flat_map(|i| [unit(4, &[(i, 1)]), unit(4, &[(i, -1)])]));
            roots.extend(half_spinors(4, false));
            (4, roots, Rational::one())
        }
        Family::G => {
            let mut roots = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        roots.push(unit(3, &[(i, 1), (j, -1)]));
                    }
                }
                let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
                roots.push(unit(3, &[(i, 2), (others[0], -1), (others[1], -1)]));
                roots.push(unit(3, &[(i, -2), (others[0], 1), (others[1], 1)]));
            }
            (3, roots, rational::frac(1, 3))
        }
    }
}

fn build_descriptor(t: CartanType) -> Result<RootSystemDescriptor> {
    let (dim, roots, scale) = euclidean_model(t);
    let form = |a: &[Rational], b: &[Rational]| linalg::dot(a, b) * &scale;

    let long = roots.iter().map(|r| form(r, r)).max().ok_or_else(|| Error::defect("empty model"))?;
    if long != rational::int(2) {
        return Err(Error::defect(format!("{t}: long roots have norm {}", rational::format(&long))));
    }

    // Positive roots: positive under weights 3^{dim-1-i}, which vanish on no root.
    let weights: Vec<Rational> = (0..dim)
        .map(|i| Rational::from_integer(num_bigint::BigInt::from(3).pow((dim - 1 - i) as u32)))
        .collect();
    let height = |r: &[Rational]| linalg::dot(r, &weights);
    let positive: Vec<Vec<Rational>> = roots.iter().filter(|r| height(r).is_positive()).cloned().collect();
    let positive_set: HashSet<Vec<Rational>> = positive.iter().cloned().collect();

    let mut simple: Vec<Vec<Rational>> = positive
        .iter()
        .filter(|a| {
            !positive.iter().any(|b| {
                let diff: Vec<Rational> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                positive_set.contains(&diff)
            })
        })
        .cloned()
        .collect();
    simple.sort_by_key(|r| std::cmp::Reverse(height(r)));
    if simple.len() != t.rank {
        return Err(Error::defect(format!("{t}: found {} simple roots", simple.len())));
    }

    let norm_gram: Matrix = simple.iter().map(|a| simple.iter().map(|b| form(a, b)).collect()).collect();
    let inv = linalg::inverse(&norm_gram).ok_or_else(|| Error::defect(format!("{t}: simple roots dependent")))?;

    let mut positive_roots: Vec<QVector> = Vec::with_capacity(positive.len());
    for r in &positive {
        let pairings: Vec<Rational> = simple.iter().map(|a| form(r, a)).collect();
        let coeffs = linalg::mat_vec(&inv, &pairings);
        if coeffs.iter().any(|c| !rational::is_integer(c) || c.is_negative()) {
            return Err(Error::defect(format!("{t}: positive root with non-natural coefficients")));
        }
        positive_roots.push(QVector(coeffs));
    }
    positive_roots.sort_by(|a, b| {
        let ha: Rational = a.0.iter().sum();
        let hb: Rational = b.0.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });

    let h = dual_coxeter_number(t, &positive_roots, &norm_gram)?;
    let cartan = (0..t.rank)
        .map(|i| {
            (0..t.rank)
                .map(|j| rational::to_i64(&(rational::int(2) * &norm_gram[i][j] / &norm_gram[j][j])))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::defect(format!("{t}: non-integral Cartan matrix")))?;

    Ok(RootSystemDescriptor { cartan_type: t, positive_roots, h, norm_gram, cartan })
}

/// Solves `Σ_{r∈R⁺} ⟨r, z⟩² = h ⟨z, z⟩` at `z = α_1` and checks the identity on
/// the full form.
fn dual_coxeter_number(t: CartanType, positive: &[QVector], norm_gram: &Matrix) -> Result<i64> {
    let l = norm_gram.len();
    // ⟨r, α_i⟩ for each positive root.
    let pair: Vec<Vec<Rational>> = positive.iter().map(|r| linalg::mat_vec(norm_gram, &r.0)).collect();
    let mut lhs = vec![vec![Rational::zero(); l]; l];
    for p in &pair {
        for i in 0..l {
            for j in 0..l {
                lhs[i][j] += &p[i] * &p[j];
            }
        }
    }
    let h = &lhs[0][0] / &norm_gram[0][0];
    for i in 0..l {
        for j in 0..l {
            if lhs[i][j] != &h * &norm_gram[i][j] {
                return Err(Error::defect(format!("{t}: Σ⟨r,z⟩² is not proportional to ⟨z,z⟩")));
            }
        }
    }
    rational::to_i64(&h).ok_or_else(|| Error::defect(format!("{t}: non-integral dual Coxeter number")))
}

/// `P` with Gram matrix `h · norm_gram⁻¹` on the coweight basis.
pub fn build_p_lattice(d: &RootSystemDescriptor) -> Result<PLattice> {
    let inv = linalg::inverse(&d.norm_gram).ok_or_else(|| Error::defect("singular normalized form"))?;
    let h = rational::int(d.h);
    let gram = inv
        .iter()
        .map(|row| row.iter().map(|x| rational::to_i64(&(x * &h))).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::defect(format!("{}: Gram matrix of P is not integral", d.cartan_type)))?;
    let lattice = Lattice::new(gram)?;
    let basis = linalg::transpose(&inv).into_iter().map(QVector).collect();
    Ok(PLattice { lattice, basis })
}

/// The star `s_R` on `P`. Its pairing vectors are the simple-root coefficients
/// of the positive roots, `⟨r, ω_i⟩`.
pub fn build_star(d: &RootSystemDescriptor) -> Result<EutacticStar> {
    let p = build_p_lattice(d)?;
    let pairings = d
        .positive_roots
        .iter()
        .map(|r| r.0.iter().map(rational::to_i64).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::defect("non-integral root coefficients"))?;
    let star = EutacticStar::from_pairings(p.lattice, pairings)?;
    if !star.is_eutactic() {
        return Err(Error::defect(format!("{}: root star is not eutactic", d.cartan_type)));
    }
    Ok(star)
}

/// `A_ij = 2 (α_i, α_j) / (α_j, α_j)`; fails on a non-integral entry.
pub fn cartan_matrix(simple_roots: &[QVector], lattice: &Lattice) -> Result<Vec<Vec<i64>>> {
    let rows: Matrix = simple_roots.iter().map(|r| r.0.clone()).collect();
    if linalg::rank(&rows) < simple_roots.len() {
        return Err(Error::input("simple roots are linearly dependent"));
    }
    let mut out = Vec::with_capacity(simple_roots.len());
    for a in simple_roots {
        let mut row = Vec::with_capacity(simple_roots.len());
        for b in simple_roots {
            let v = rational::int(2) * lattice.inner(a, b)? / lattice.norm(b)?;
            row.push(rational::to_i64(&v).ok_or_else(|| {
                Error::input(format!("Cartan entry 2({a},{b})/({b},{b}) = {} is not integral", rational::format(&v)))
            })?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Which root-system axiom a family violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// `m x ∈ S` for some integer `m > 1`.
    NoMultiples,
    /// Two members of the family coincide.
    Distinct,
    /// `σ_x(y) ∉ S`.
    ReflectionClosure,
    /// `2(x, y)/(x, x) ∉ ℤ`.
    CartanIntegrality,
    /// A component's Dynkin diagram matched no irreducible type.
    Classification,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::NoMultiples => "no proper multiples",
            Axiom::Distinct => "mutual distinctness",
            Axiom::ReflectionClosure => "reflection closure",
            Axiom::CartanIntegrality => "Cartan integrality",
            Axiom::Classification => "Dynkin classification",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub cartan_type: CartanType,
    pub simple_roots: Vec<QVector>,
    pub cartan: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    RootSystem { rank: usize, components: Vec<Component> },
    Failure { axiom: Axiom, witness: (QVector, QVector) },
}

impl Recognition {
    pub fn is_root_system(&self) -> bool {
        matches!(self, Recognition::RootSystem { .. })
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            Recognition::RootSystem { rank, .. } => Some(*rank),
            Recognition::Failure { .. } => None,
        }
    }

    pub fn types(&self) -> Vec<CartanType> {
        match self {
            Recognition::RootSystem { components, .. } => components.iter().map(|c| c.cartan_type).collect(),
            Recognition::Failure { .. } => Vec::new(),
        }
    }

    /// `"A2"`, `"A1 x A1"`, or a failure description.
    pub fn label(&self) -> String {
        match self {
            Recognition::RootSystem { components, .. } => {
                components.iter().map(|c| c.cartan_type.to_string()).collect::<Vec<_>>().join(" x ")
            }
            Recognition::Failure { axiom, witness } => {
                format!("not a root system: {axiom} fails for {} and {}", witness.0, witness.1)
            }
        }
    }
}

/// Decides whether the family `S` is a (reduced) root system under the form of
/// `lattice`, and if so decomposes it into irreducible Cartan types.
pub fn recognize(family: &[QVector], lattice: &Lattice) -> Result<Recognition> {
    if family.is_empty() {
        return Err(Error::input("empty family"));
    }
    for (i, x) in family.iter().enumerate() {
        if x.len() != lattice.rank() {
            return Err(Error::DimensionMismatch { expected: lattice.rank(), found: x.len() });
        }
        if x.is_zero() {
            return Err(Error::input(format!("family member {i} is zero")));
        }
    }
    let members: HashSet<&QVector> = family.iter().collect();
    if let Some(x) = family.iter().find(|x| !members.contains(&x.neg())) {
        return Err(Error::input(format!("family is not symmetric: {} has no negative", x)));
    }

    let n = family.len();
    let paired: Vec<Vec<Rational>> = family.iter().map(|x| lattice.pairings(x)).collect::<Result<_>>()?;
    let ip: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| linalg::dot(&paired[i], &family[j].0)).collect()).collect();
    let fail = |axiom, i: usize, j: usize| Recognition::Failure { axiom, witness: (family[i].clone(), family[j].clone()) };

    for i in 0..n {
        for j in 0..n {
            if i != j && &ip[i][j] * &ip[i][j] == &ip[i][i] * &ip[j][j] {
                let c = &ip[i][j] / &ip[i][i];
                if rational::is_integer(&c) && c > Rational::one() {
                    return Ok(fail(Axiom::NoMultiples, i, j));
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if family[i] == family[j] {
                return Ok(fail(Axiom::Distinct, i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if ip[i][j].is_zero() {
                continue;
            }
            let c = rational::int(2) * &ip[i][j] / &ip[i][i];
            let image = family[j].sub(&family[i].scale(&c));
            if !members.contains(&image) {
                return Ok(fail(Axiom::ReflectionClosure, i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !rational::is_integer(&(rational::int(2) * &ip[i][j] / &ip[i][i])) {
                return Ok(fail(Axiom::CartanIntegrality, i, j));
            }
        }
    }

    // Positive system from the functional x ↦ Σ t^i x_i with the least t ≥ 1
    // that vanishes on no member.
    let functional = |t: i64, x: &QVector| {
        let mut acc = Rational::zero();
        let mut p = Rational::one();
        for c in &x.0 {
            acc += c * &p;
            p *= rational::int(t);
        }
        acc
    };
    let t = (1..).find(|&t| family.iter().all(|x| !functional(t, x).is_zero())).expect("finite family");
    let positive: Vec<&QVector> = family.iter().filter(|x| functional(t, x).is_positive()).collect();
    let positive_set: HashSet<&QVector> = positive.iter().copied().collect();
    let mut simple: Vec<QVector> = positive
        .iter()
        .filter(|a| !positive.iter().any(|b| positive_set.contains(&a.sub(b))))
        .map(|a| (*a).clone())
        .collect();
    simple.sort_by_key(|x| functional(t, x));

    let rows: Matrix = family.iter().map(|x| x.0.clone()).collect();
    let rank = linalg::rank(&rows);
    if rank != simple.len() {
        return Err(Error::defect(format!("{} simple roots for a family of rank {rank}", simple.len())));
    }

    let mut components = Vec::new();
    for group in connected_components(&simple, lattice)? {
        let roots: Vec<QVector> = group.into_iter().map(|i| simple[i].clone()).collect();
        let cartan = cartan_matrix(&roots, lattice)?;
        match classify(&cartan)? {
            Some(cartan_type) => components.push(Component { cartan_type, simple_roots: roots, cartan }),
            None => {
                let last = roots.len() - 1;
                return Ok(Recognition::Failure {
                    axiom: Axiom::Classification,
                    witness: (roots[0].clone(), roots[last].clone()),
                });
            }
        }
    }
    components.sort_by_key(|c| c.cartan_type);
    Ok(Recognition::RootSystem { rank, components })
}

fn connected_components(simple: &[QVector], lattice: &Lattice) -> Result<Vec<Vec<usize>>> {
    let n = simple.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for i in 0..n {
        for j in i + 1..n {
            if !lattice.inner(&simple[i], &simple[j])?.is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let g = *index.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    Ok(groups)
}

fn dynkin_graph(cartan: &[Vec<i64>]) -> DiGraph<(), i64> {
    let mut g = DiGraph::new();
    let nodes: Vec<_> = (0..cartan.len()).map(|_| g.add_node(())).collect();
    for (i, row) in cartan.iter().enumerate() {
        for (j, &a) in row.iter().enumerate() {
            if i != j && a != 0 {
                g.add_edge(nodes[i], nodes[j], a);
            }
        }
    }
    g
}

/// Matches a connected Cartan matrix against the catalog by Dynkin-diagram
/// isomorphism, respecting edge multiplicities and arrow directions.
fn classify(cartan: &[Vec<i64>]) -> Result<Option<CartanType>> {
    let g = dynkin_graph(cartan);
    for t in CartanType::of_rank(cartan.len()) {
        let reference = dynkin_graph(&catalog(t)?.cartan);
        if petgraph::algo::is_isomorphic_matching(&g, &reference, |_, _| true, |a, b| a == b) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn desc(label: &str) -> Arc<RootSystemDescriptor> {
        catalog_label(label).unwrap()
    }

    #[test]
    fn labels_parse_and_validate() {
        assert_eq!("A2".parse::<CartanType>().unwrap().to_string(), "A2");
        assert_eq!("e8".parse::<CartanType>().unwrap().to_string(), "E8");
        for bad in ["C2", "D3", "E9", "F3", "G3", "A0", "X1", "A", "B-1"] {
            assert!(bad.parse::<CartanType>().is_err(), "{bad}");
        }
    }

    #[test]
    fn small_catalog_entries() {
        let a1 = desc("A1");
        assert_eq!((a1.positive_roots.len(), a1.h), (1, 2));
        let a2 = desc("A2");
        assert_eq!((a2.positive_roots.len(), a2.h), (3, 3));
        let g2 = desc("G2");
        assert_eq!((g2.positive_roots.len(), g2.h), (6, 4));
        let e8 = desc("E8");
        assert_eq!((e8.positive_roots.len(), e8.h), (120, 30));
    }

    #[test]
    fn dual_coxeter_numbers_match_the_classical_table() {
        for t in CartanType::up_to_rank(8) {
            let n = t.rank as i64;
            let expected = match (t.family, t.rank) {
                (Family::A, _) => n + 1,
                (Family::B, _) => 2 * n - 1,
                (Family::C, _) => n + 1,
                (Family::D, _) => 2 * n - 2,
                (Family::E, 6) => 12,
                (Family::E, 7) => 18,
                (Family::E, _) => 30,
                (Family::F, _) => 9,
                (Family::G, _) => 4,
            };
            assert_eq!(catalog(t).unwrap().h, expected, "{t}");
        }
    }

    #[test]
    fn root_counts() {
        let counts = [("E6", 36), ("E7", 63), ("F4", 24), ("B3", 9), ("C3", 9), ("D4", 12), ("A3", 6)];
        for (label, n) in counts {
            assert_eq!(desc(label).positive_roots.len(), n, "{label}");
        }
    }

    #[test]
    fn p_lattices() {
        assert_eq!(build_p_lattice(&desc("A1")).unwrap().lattice.gram(), &[vec![1]]);
        assert_eq!(build_p_lattice(&desc("A2")).unwrap().lattice.gram(), &[vec![2, 1], vec![1, 2]]);
        let p = build_p_lattice(&desc("A2")).unwrap();
        assert_eq!(p.basis[0], QVector(vec![frac(2, 3), frac(1, 3)]));
    }

    #[test]
    fn stars() {
        let a1 = build_star(&desc("A1")).unwrap();
        assert_eq!(a1.pairings(), &[vec![1]]);
        let a2 = build_star(&desc("A2")).unwrap();
        let mut u = a2.pairings().to_vec();
        u.sort();
        assert_eq!(u, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let e8 = build_star(&desc("E8")).unwrap();
        assert_eq!(e8.len(), 120);
        assert!(e8.is_eutactic());
    }

    #[test]
    fn cartan_examples() {
        let a2 = build_star(&desc("A2")).unwrap();
        let simple: Vec<QVector> = a2.vectors()[..2].to_vec();
        assert_eq!(cartan_matrix(&simple, a2.lattice()).unwrap(), vec![vec![2, -1], vec![-1, 2]]);

        let z2 = Lattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let orth = [QVector::from_ints(&[1, 0]), QVector::from_ints(&[0, 1])];
        assert_eq!(cartan_matrix(&orth, &z2).unwrap(), vec![vec![2, 0], vec![0, 2]]);

        let g2 = desc("G2");
        let mut off = [g2.cartan[0][1], g2.cartan[1][0]];
        off.sort();
        assert_eq!(off, [-3, -1]);

        let dependent = [QVector::from_ints(&[1, 0]), QVector::from_ints(&[2, 0])];
        assert!(cartan_matrix(&dependent, &z2).is_err());
        let skew = [QVector::from_ints(&[1, 0]), QVector(vec![frac(1, 3), frac(1, 1)])];
        assert!(cartan_matrix(&skew, &z2).is_err());
    }

    #[test]
    fn recognize_examples() {
        let a2 = build_star(&desc("A2")).unwrap();
        let r = recognize(&a2.support_set().vectors, a2.lattice()).unwrap();
        assert_eq!(r.label(), "A2");
        assert_eq!(r.rank(), Some(2));
        let Recognition::RootSystem { components, .. } = &r else { panic!() };
        assert_eq!(components[0].cartan, vec![vec![2, -1], vec![-1, 2]]);

        let z2 = Lattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let star = EutacticStar::from_pairings(z2.clone(), vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(recognize(&star.support_set().vectors, &z2).unwrap().label(), "A1 x A1");

        let z = Lattice::new(vec![vec![1]]).unwrap();
        let fam = [1, -1, 2, -2].map(|x| QVector::from_ints(&[x]));
        let r = recognize(&fam, &z).unwrap();
        assert_eq!(
            r,
            Recognition::Failure {
                axiom: Axiom::NoMultiples,
                witness: (QVector::from_ints(&[1]), QVector::from_ints(&[2]))
            }
        );
    }

    #[test]
    fn recognize_failures() {
        let z = Lattice::new(vec![vec![1]]).unwrap();
        let dup = [1, -1, 1, -1].map(|x| QVector::from_ints(&[x]));
        assert!(matches!(recognize(&dup, &z).unwrap(), Recognition::Failure { axiom: Axiom::Distinct, .. }));

        // A2 minus one pair is not closed under reflections.
        let a2 = build_star(&desc("A2")).unwrap();
        let s = &a2.vectors()[..2];
        let fam = vec![s[0].clone(), s[0].neg(), s[1].clone(), s[1].neg()];
        assert!(matches!(
            recognize(&fam, a2.lattice()).unwrap(),
            Recognition::Failure { axiom: Axiom::ReflectionClosure, .. }
        ));

        // ±1, ±3/2 on ℤ: closed under the (trivial) reflections, 2·(3/2)/1 = 3 but 2·(3/2)/(9/4) = 4/3.
        let fam = vec![
            QVector::from_ints(&[1]),
            QVector::from_ints(&[-1]),
            QVector(vec![frac(3, 2)]),
            QVector(vec![frac(-3, 2)]),
        ];
        assert!(matches!(recognize(&fam, &z).unwrap(), Recognition::Failure { .. }));

        assert!(recognize(&[], &z).is_err());
        assert!(recognize(&[QVector::from_ints(&[1])], &z).is_err());
        assert!(recognize(&[QVector::zero(1)], &z).is_err());
    }

    #[test]
    fn recognition_is_scale_invariant() {
        for label in ["A2", "B2", "G2", "B3", "C3"] {
            let star = build_star(&desc(label)).unwrap();
            let fam = star.support_set().vectors;
            let scaled_gram: Vec<Vec<i64>> =
                star.lattice().gram().iter().map(|r| r.iter().map(|x| 3 * x).collect()).collect();
            let scaled = Lattice::new(scaled_gram).unwrap();
            assert_eq!(
                recognize(&fam, star.lattice()).unwrap().label(),
                recognize(&fam, &scaled).unwrap().label()
            );
        }
    }

    #[test]
    fn recognized_systems_are_reflection_closed() {
        let star = build_star(&desc("B3")).unwrap();
        let fam = star.support_set().vectors;
        let set: HashSet<&QVector> = fam.iter().collect();
        let l = star.lattice();
        for x in &fam {
            for y in &fam {
                let c = rational::int(2) * l.inner(x, y).unwrap() / l.norm(x).unwrap();
                assert!(set.contains(&y.sub(&x.scale(&c))));
            }
        }
    }
}
