//! Truncated formal Fourier expansions `Σ f(n, ℓ) qⁿ ζ^ℓ` of theta blocks.
//!
//! Exponents are kept integral: `n = n24 / 24`, and `ℓ` is stored through its
//! pairings with the lattice basis, `((ℓ, e_i))_i = w / z_den`. A series is
//! exact for every `n24 ≤ order_cap`; nothing is claimed above the cap.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, QVector};
use crate::rational::{self, Rational};
use crate::star::EutacticStar;

/// Default truncation `n24 ≤ 480`, i.e. q-order 20.
pub const DEFAULT_ORDER: i64 = 480;

/// Lowest exponent of a theta factor: `q^{1/8}`.
const THETA_LEAD: i64 = 3;

/// `(n24, w)`: the monomial `q^{n24/24} ζ^ℓ` with `((ℓ, e_i))_i = w / z_den`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    pub n24: i64,
    pub w: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSeries {
    lattice: Lattice,
    z_den: i64,
    terms: BTreeMap<Exponent, BigInt>,
    order_cap: i64,
    character: i64,
}

/// A term of a series with `2n < (ℓ, ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub exponent: Exponent,
    /// `ℓ` in pairing coordinates.
    pub ell: Vec<Rational>,
    pub coefficient: BigInt,
    /// `2n − (ℓ, ℓ)`, negative.
    pub deficit: Rational,
}

/// The image of a series under the heat operator; coefficients are rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatImage {
    pub z_den: i64,
    pub terms: BTreeMap<Exponent, Rational>,
    pub order_cap: i64,
}

impl HeatImage {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            writeln!(out, "{} {} {}", e.n24, format_ell(&e.w, self.z_den), rational::format(c)).unwrap();
        }
        out
    }
}

fn format_ell(w: &[i64], d: i64) -> String {
    let nums: Vec<String> = w.iter().map(i64::to_string).collect();
    format!("{}/{}", nums.join(","), d)
}

impl FourierSeries {
    /// Builds a series, dropping zero coefficients and terms above the cap and
    /// reducing `z_den`. Fails if a term violates the character congruence.
    pub fn new(
        lattice: Lattice,
        z_den: i64,
        terms: impl IntoIterator<Item = (Exponent, BigInt)>,
        order_cap: i64,
        character: i64,
    ) -> Result<Self> {
        if z_den <= 0 {
            return Err(Error::input("z denominator must be positive"));
        }
        let character = character.rem_euclid(24);
        let mut map: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e.w.len() != lattice.rank() {
                return Err(Error::DimensionMismatch { expected: lattice.rank(), found: e.w.len() });
            }
            if e.n24 > order_cap || c.is_zero() {
                continue;
            }
            if (e.n24 - character).rem_euclid(24) != 0 {
                return Err(Error::input(format!(
                    "exponent n24 = {} is not congruent to the character {character} mod 24",
                    e.n24
                )));
            }
            *map.entry(e).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let mut s = FourierSeries { lattice, z_den, terms: map, order_cap, character };
        s.reduce_denominator();
        Ok(s)
    }

    /// The constant `c`, exact up to `order_cap`.
    pub fn constant(lattice: Lattice, c: i64, order_cap: i64) -> Self {
        let zero = Exponent { n24: 0, w: vec![0; lattice.rank()] };
        FourierSeries::new(lattice, 1, [(zero, BigInt::from(c))], order_cap, 0).expect("valid constant")
    }

    fn reduce_denominator(&mut self) {
        let g = self
            .terms
            .keys()
            .flat_map(|e| e.w.iter())
            .fold(self.z_den, |g, &x| g.gcd(&x));
        let g = if self.terms.is_empty() { self.z_den } else { g };
        if g > 1 {
            self.z_den /= g;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(e, c)| (Exponent { n24: e.n24, w: e.w.iter().map(|x| x / g).collect() }, c))
                .collect();
        }
    }

    fn rescaled(&self, d: i64) -> impl Iterator<Item = (Exponent, &BigInt)> + '_ {
        let f = d / self.z_den;
        self.terms
            .iter()
            .map(move |(e, c)| (Exponent { n24: e.n24, w: e.w.iter().map(|x| x * f).collect() }, c))
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn z_den(&self) -> i64 {
        self.z_den
    }

    pub fn order_cap(&self) -> i64 {
        self.order_cap
    }

    /// `D mod 24` with every exponent `n24 ≡ D`.
    pub fn character(&self) -> i64 {
        self.character
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `ℓ` of a stored exponent, in pairing coordinates.
    pub fn ell(&self, e: &Exponent) -> Vec<Rational> {
        e.w.iter().map(|&x| rational::frac(x, self.z_den)).collect()
    }

    /// Coefficient of `q^{n24/24} ζ^ℓ` with `ℓ` given by its pairings.
    pub fn coefficient(&self, n24: i64, ell: &[Rational]) -> BigInt {
        let scaled: Option<Vec<i64>> = ell
            .iter()
            .map(|x| rational::to_i64(&(x * rational::int(self.z_den))))
            .collect();
        scaled
            .and_then(|w| self.terms.get(&Exponent { n24, w }).cloned())
            .unwrap_or_else(BigInt::zero)
    }

    /// Smallest stored `n24`, or `order_cap + 1` when nothing is stored.
    pub fn min_n24(&self) -> i64 {
        self.terms.keys().next().map_or(self.order_cap + 1, |e| e.n24)
    }

    /// `(ℓ, ℓ)` for a stored exponent.
    pub fn ell_norm(&self, e: &Exponent) -> Rational {
        let ell = self.ell(e);
        self.lattice.dual_inner(&ell, &ell)
    }

    /// `2n − (ℓ, ℓ)`.
    pub fn hyperbolic_norm(&self, e: &Exponent) -> Rational {
        rational::frac(e.n24, 12) - self.ell_norm(e)
    }

    /// One line per term, `n24 w_1,…,w_l/z_den coefficient`, sorted by `(n24, ℓ)`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            writeln!(out, "{} {} {}", e.n24, format_ell(&e.w, self.z_den), c).unwrap();
        }
        out
    }

    pub fn add(&self, other: &FourierSeries) -> Result<FourierSeries> {
        self.check_compatible(other)?;
        if self.character != other.character && !self.is_zero() && !other.is_zero() {
            return Err(Error::input("cannot add series with different characters"));
        }
        let d = self.z_den.lcm(&other.z_den);
        let character = if self.is_zero() { other.character } else { self.character };
        let terms: Vec<(Exponent, BigInt)> = self
            .rescaled(d)
            .chain(other.rescaled(d))
            .map(|(e, c)| (e, c.clone()))
            .collect();
        FourierSeries::new(self.lattice.clone(), d, terms, self.order_cap.min(other.order_cap), character)
    }

    fn check_compatible(&self, other: &FourierSeries) -> Result<()> {
        if self.lattice != other.lattice {
            return Err(Error::input("series are attached to different lattices"));
        }
        Ok(())
    }
}

/// Truncated product. The result is exact for
/// `n24 ≤ min(a.cap + b.min, b.cap + a.min)`.
pub fn multiply(a: &FourierSeries, b: &FourierSeries) -> Result<FourierSeries> {
    a.check_compatible(b)?;
    let cap = (a.order_cap + b.min_n24()).min(b.order_cap + a.min_n24());
    let d = a.z_den.lcm(&b.z_den);
    let left: Vec<(Exponent, &BigInt)> = a.rescaled(d).collect();
    let right: Vec<(Exponent, &BigInt)> = b.rescaled(d).collect();

    let mut acc: HashMap<Exponent, BigInt> = HashMap::new();
    for (ea, ca) in &left {
        for (eb, cb) in &right {
            let n24 = ea.n24 + eb.n24;
            if n24 > cap {
                break;
            }
            let w = ea.w.iter().zip(&eb.w).map(|(x, y)| x + y).collect();
            *acc.entry(Exponent { n24, w }).or_insert_with(BigInt::zero) += *ca * *cb;
        }
    }
    FourierSeries::new(a.lattice.clone(), d, acc, cap, a.character + b.character)
}

/// One factor `ϑ(τ, (s_j, 𝔷))` from the sum side
/// `Σ_{k∈ℤ} (−1)^k q^{(2k+1)²/8} ζ^{(2k+1) s_j / 2}`.
pub fn theta_factor(star: &EutacticStar, j: usize, n24_max: i64) -> Result<FourierSeries> {
    if n24_max < THETA_LEAD {
        return Err(Error::input(format!("theta factor needs n24_max >= {THETA_LEAD}, got {n24_max}")));
    }
    let u = star
        .pairings()
        .get(j)
        .ok_or_else(|| Error::input(format!("star has no vector {j}")))?;
    Ok(theta_factor_unchecked(star.lattice(), u, n24_max))
}

fn theta_factor_unchecked(lattice: &Lattice, u: &[i64], n24_max: i64) -> FourierSeries {
    let mut terms = Vec::new();
    let mut k: i64 = 0;
    loop {
        let odd = 2 * k + 1;
        let n24 = 3 * odd * odd;
        if n24 > n24_max {
            break;
        }
        // k and −k−1 give ±odd with signs (−1)^k and (−1)^{k+1}.
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((Exponent { n24, w: u.iter().map(|x| odd * x).collect() }, BigInt::from(sign)));
        terms.push((Exponent { n24, w: u.iter().map(|x| -odd * x).collect() }, BigInt::from(-sign)));
        k += 1;
    }
    FourierSeries::new(lattice.clone(), 2, terms, n24_max, THETA_LEAD).expect("theta exponents are ≡ 3 mod 24")
}

/// `η(τ)^k = q^{k/24} Π_{n≥1} (1 − qⁿ)^k`, exact for `n24 ≤ n24_max`.
pub fn eta_power(lattice: &Lattice, k: i64, n24_max: i64) -> FourierSeries {
    let zero = vec![0; lattice.rank()];
    if n24_max < k {
        return FourierSeries::new(lattice.clone(), 1, [], n24_max, k).expect("empty series");
    }
    let order = ((n24_max - k) / 24) as usize;
    let coeffs = euler_power(k, order);
    let terms = coeffs
        .into_iter()
        .enumerate()
        .map(|(m, c)| (Exponent { n24: k + 24 * m as i64, w: zero.clone() }, c));
    FourierSeries::new(lattice.clone(), 1, terms, n24_max, k).expect("eta exponents are ≡ k mod 24")
}

/// Coefficients of `Π (1 − qⁿ)^k` up to `q^order`.
fn euler_power(k: i64, order: usize) -> Vec<BigInt> {
    let mut euler = vec![BigInt::zero(); order + 1];
    euler[0] = BigInt::one();
    for n in 1..=order {
        for i in (n..=order).rev() {
            let t = euler[i - n].clone();
            euler[i] -= t;
        }
    }
    let base = if k >= 0 { euler } else { invert_series(&euler) };
    let mut out = vec![BigInt::zero(); order + 1];
    out[0] = BigInt::one();
    for _ in 0..k.unsigned_abs() {
        out = mul_series(&out, &base);
    }
    out
}

fn mul_series(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().take(n - i).enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a power series with constant term 1.
fn invert_series(a: &[BigInt]) -> Vec<BigInt> {
    let mut inv = vec![BigInt::zero(); a.len()];
    inv[0] = BigInt::one();
    for n in 1..a.len() {
        let s: BigInt = (1..=n).map(|i| &a[i] * &inv[n - i]).sum();
        inv[n] = -s;
    }
    inv
}

/// `η^{eta_exponent − N} Π_j ϑ(τ, (s_j, 𝔷))`, exact for `n24 ≤ n24_max`.
///
/// With `eta_exponent = rk L` this is the block attached to the extremality
/// question. Eutaxy is not required.
pub fn theta_block(star: &EutacticStar, eta_exponent: i64, n24_max: i64) -> FourierSeries {
    let lattice = star.lattice();
    let n = star.len() as i64;
    let eta = eta_exponent - n;
    let character = 3 * n + eta;
    let lowest = THETA_LEAD * n + eta;
    if n24_max < lowest {
        return FourierSeries::new(lattice.clone(), 1, [], n24_max, character).expect("empty series");
    }
    // Each factor is expanded far enough that the product is exact up to n24_max.
    let factor_cap = n24_max - THETA_LEAD * (n - 1) - eta;
    let mut acc = eta_power(lattice, eta, n24_max - THETA_LEAD * n);
    for u in star.pairings() {
        let f = theta_factor_unchecked(lattice, u, factor_cap);
        acc = multiply(&acc, &f).expect("same lattice");
    }
    debug_assert_eq!(acc.order_cap, n24_max);
    acc
}

/// Multiplies every coefficient by `n − (ℓ, ℓ)/2`.
pub fn heat_apply(s: &FourierSeries) -> HeatImage {
    let terms = s
        .terms
        .iter()
        .filter_map(|(e, c)| {
            let factor = rational::frac(e.n24, 24) - s.ell_norm(e) / rational::int(2);
            let v = factor * Rational::from_integer(c.clone());
            (!v.is_zero()).then(|| (e.clone(), v))
        })
        .collect();
    HeatImage { z_den: s.z_den, terms, order_cap: s.order_cap }
}

/// Terms with `2n < (ℓ, ℓ)`; empty means holomorphic up to the cap.
pub fn check_holomorphic(s: &FourierSeries) -> Vec<Violation> {
    s.terms
        .iter()
        .filter_map(|(e, c)| {
            let deficit = s.hyperbolic_norm(e);
            deficit.is_negative().then(|| Violation {
                exponent: e.clone(),
                ell: s.ell(e),
                coefficient: c.clone(),
                deficit,
            })
        })
        .collect()
}

/// Every stored term satisfies `2n = (ℓ, ℓ)`.
pub fn check_singular_support(s: &FourierSeries) -> bool {
    s.terms.keys().all(|e| s.hyperbolic_norm(e).is_zero())
}

/// Substitutes `𝔷 ↦ σ_v(𝔷)`, which maps each exponent `ℓ` to `σ_v(ℓ)`.
pub fn reflect_series(s: &FourierSeries, v: &QVector) -> Result<FourierSeries> {
    let lattice = &s.lattice;
    if v.len() != lattice.rank() {
        return Err(Error::DimensionMismatch { expected: lattice.rank(), found: v.len() });
    }
    if v.is_zero() {
        return Err(Error::input("reflection vector must be nonzero"));
    }
    let gv = lattice.pairings(v)?;
    let vv = lattice.norm(v)?;

    let reflected: Vec<(i64, Vec<Rational>, &BigInt)> = s
        .terms
        .iter()
        .map(|(e, c)| {
            let ell = s.ell(e);
            let vl: Rational = v.0.iter().zip(&ell).map(|(a, b)| a * b).sum();
            let f = rational::int(2) * vl / &vv;
            let image = ell.iter().zip(&gv).map(|(x, g)| x - &f * g).collect();
            (e.n24, image, c)
        })
        .collect();

    let mut d = BigInt::from(s.z_den);
    for (_, ell, _) in &reflected {
        for x in ell {
            d = d.lcm(x.denom());
        }
    }
    let d = i64::try_from(&d).map_err(|_| Error::input("reflected exponents need too large a denominator"))?;
    let terms = reflected
        .into_iter()
        .map(|(n24, ell, c)| {
            let w = ell
                .iter()
                .map(|x| rational::to_i64(&(x * rational::int(d))).expect("denominator divides d"))
                .collect();
            (Exponent { n24, w }, c.clone())
        })
        .collect::<Vec<_>>();
    FourierSeries::new(lattice.clone(), d, terms, s.order_cap, s.character)
}

/// `s(τ, σ_v(𝔷)) = −s(τ, 𝔷)` up to the truncation order.
pub fn check_antisymmetry(s: &FourierSeries, v: &QVector) -> Result<bool> {
    let r = reflect_series(s, v)?;
    Ok(r.add(s)?.is_zero())
}
