//! Burnside-ring coefficients extended by rational powers of 𝕃, the power
//! structure over them, ages, and the order-`k` generalized classes built
//! from user-supplied strata.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::cellspace::AsCells;
use crate::error::{Error, Result};
use crate::group::{commuting_tuple_classes_in, Elem, FiniteGroup};
use crate::powerstruct::{power, LambdaRing, Ring, TruncatedSeries};
use crate::Int;

pub type Rational = Ratio<i64>;

/// `A(G)[𝕃^{±1/D}]` over a fixed Burnside ring.
#[derive(Debug)]
pub struct LExtRing {
    base: Arc<BurnsideRing>,
}

/// `Σ_q 𝕃^q·x_q` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq)]
pub struct LExtElement {
    terms: BTreeMap<Rational, BurnsideElement>,
}

impl LExtRing {
    pub fn new(base: &Arc<BurnsideRing>) -> Arc<Self> {
        Arc::new(LExtRing { base: base.clone() })
    }

    pub fn base(&self) -> &Arc<BurnsideRing> {
        &self.base
    }

    /// `𝕃^q·x`.
    pub fn monomial(&self, q: Rational, x: BurnsideElement) -> LExtElement {
        let mut terms = BTreeMap::new();
        if !x.is_zero() {
            terms.insert(q, x);
        }
        LExtElement { terms }
    }

    pub fn embed(&self, x: &BurnsideElement) -> LExtElement {
        self.monomial(Rational::from_integer(0), x.clone())
    }

    /// `𝕃^q`.
    pub fn l_power(&self, q: Rational) -> LExtElement {
        self.monomial(q, self.base.one())
    }

    fn insert(&self, terms: &mut BTreeMap<Rational, BurnsideElement>, q: Rational, x: BurnsideElement) {
        let merged = match terms.remove(&q) {
            Some(y) => &y + &x,
            None => x,
        };
        if !merged.is_zero() {
            terms.insert(q, merged);
        }
    }
}

impl LExtElement {
    pub fn terms(&self) -> &BTreeMap<Rational, BurnsideElement> {
        &self.terms
    }

    /// Least common denominator of the exponents.
    pub fn denominator(&self) -> i64 {
        self.terms.keys().fold(1, |d, q| d.lcm(q.denom()))
    }

    /// `𝕃^q·self`.
    pub fn scale_l(&self, q: Rational) -> LExtElement {
        LExtElement {
            terms: self.terms.iter().map(|(r, x)| (r + q, x.clone())).collect(),
        }
    }

    /// The image under `𝕃 ↦ 1`.
    pub fn specialize(&self, base: &BurnsideRing) -> BurnsideElement {
        self.terms.values().fold(base.zero(), |acc, x| &acc + x)
    }
}

impl fmt::Debug for LExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LExtElement {
    /// `[G/e] + 𝕃^1/2·([G/e] + [G/G])`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (q, x)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let text = x.to_string();
            let l = if *q == Rational::from_integer(1) {
                "𝕃".to_string()
            } else {
                format!("𝕃^{q}")
            };
            if *q.numer() == 0 {
                write!(f, "{text}")?;
            } else if x.coeffs().iter().rev().skip(1).all(|&c| c == 0) && x.coeffs().last() == Some(&1) {
                write!(f, "{l}")?;
            } else if text.contains(' ') || text.starts_with('-') {
                write!(f, "{l}·({text})")?;
            } else {
                write!(f, "{l}·{text}")?;
            }
        }
        Ok(())
    }
}

fn rational_json(q: &Rational) -> Value {
    if q.is_integer() {
        json!(q.to_integer())
    } else {
        json!(q.to_string())
    }
}

impl Ring for LExtRing {
    type Elem = LExtElement;

    fn zero(&self) -> LExtElement {
        LExtElement { terms: BTreeMap::new() }
    }

    fn one(&self) -> LExtElement {
        self.embed(&self.base.one())
    }

    fn add(&self, a: &LExtElement, b: &LExtElement) -> LExtElement {
        let mut terms = a.terms.clone();
        for (q, x) in &b.terms {
            self.insert(&mut terms, *q, x.clone());
        }
        LExtElement { terms }
    }

    fn neg(&self, a: &LExtElement) -> LExtElement {
        LExtElement {
            terms: a.terms.iter().map(|(q, x)| (*q, -x)).collect(),
        }
    }

    fn mul(&self, a: &LExtElement, b: &LExtElement) -> LExtElement {
        let mut terms = BTreeMap::new();
        for (q, x) in &a.terms {
            for (r, y) in &b.terms {
                self.insert(&mut terms, q + r, x * y);
            }
        }
        LExtElement { terms }
    }

    fn from_int(&self, n: Int) -> LExtElement {
        self.embed(&self.base.from_int(n))
    }

    fn render(&self, a: &LExtElement) -> String {
        a.to_string()
    }

    fn to_json(&self, a: &LExtElement) -> Value {
        Value::Array(
            a.terms
                .iter()
                .map(|(q, x)| json!({"exp": rational_json(q), "coeffs": x.to_json()}))
                .collect(),
        )
    }

    fn is_zero(&self, a: &LExtElement) -> bool {
        a.terms.is_empty()
    }

    /// Units of the form `𝕃^q·u` with `u² = 1` in `A(G)`.
    fn unit_inverse(&self, a: &LExtElement) -> Option<LExtElement> {
        if a.terms.len() != 1 {
            return None;
        }
        let (q, u) = a.terms.iter().next()?;
        if u * u == self.base.one() {
            Some(self.monomial(-q, u.clone()))
        } else {
            None
        }
    }

    fn check(&self, a: &LExtElement) -> Result<()> {
        for x in a.terms.values() {
            Ring::check(self.base.as_ref(), x)?;
        }
        Ok(())
    }
}

impl LambdaRing for LExtRing {
    /// `(q, i)` stands for `𝕃^q·[G/H_i]`.
    type Gen = (Rational, usize);

    fn decompose(&self, a: &LExtElement) -> Vec<((Rational, usize), Int)> {
        let mut out = vec![];
        for (q, x) in &a.terms {
            for (i, &c) in x.coeffs().iter().enumerate() {
                if c != 0 {
                    out.push(((*q, i), c));
                }
            }
        }
        out
    }

    /// `ζ_{[G/H_i]}(𝕃^q t)`.
    fn zeta(&self, (q, i): &(Rational, usize), n: usize) -> Result<Vec<LExtElement>> {
        let z = self.base.zeta_basis(*i, n)?;
        Ok(z
            .into_iter()
            .enumerate()
            .map(|(k, c)| self.monomial(q * Rational::from_integer(k as i64), c))
            .collect())
    }
}

/// `ζ_{𝕃^q·[G/H_i]}(t)` to degree `n`.
pub fn zeta_l(ring: &Arc<LExtRing>, q: Rational, i: usize, n: usize) -> Result<TruncatedSeries<LExtRing>> {
    Ok(TruncatedSeries::new(ring, ring.zeta(&(q, i), n)?, n))
}

/// `(A(t))^m` over the 𝕃-extended ring.
pub fn power_l(a: &TruncatedSeries<LExtRing>, m: &LExtElement) -> Result<TruncatedSeries<LExtRing>> {
    power(a, m)
}

/// Applies `𝕃 ↦ 1` to every coefficient.
pub fn specialize_series(a: &TruncatedSeries<LExtRing>) -> TruncatedSeries<BurnsideRing> {
    let base = a.ring().base().clone();
    a.map(&base, |c| c.specialize(&base))
}

/// `Σ θ_j` for eigenvalue angles `θ_j ∈ [0, 1)`.
pub fn age(angles: &[Rational]) -> Result<Rational> {
    let one = Rational::from_integer(1);
    let zero = Rational::from_integer(0);
    for (j, th) in angles.iter().enumerate() {
        if *th < zero || *th >= one {
            return Err(Error::usage(format!("angle {j} is {th}, outside [0, 1)")));
        }
    }
    Ok(angles.iter().fold(zero, |a, b| a + b))
}

/// `φ₁(r₁−1) + φ₂r₁(r₂−1) + … + φ_k r₁⋯r_{k−1}(r_k−1)`.
pub fn phi_k(r: &[u64], weights: &[Rational]) -> Result<Rational> {
    if r.len() != weights.len() {
        return Err(Error::usage(format!(
            "{} indices but {} weights",
            r.len(),
            weights.len()
        )));
    }
    let mut total = Rational::from_integer(0);
    let mut prefix: i64 = 1;
    for (&ri, w) in r.iter().zip(weights) {
        if ri == 0 {
            return Err(Error::usage("indices r_i must be positive"));
        }
        total += w * Rational::from_integer(prefix * (ri as i64 - 1));
        prefix *= ri as i64;
    }
    Ok(total)
}

/// `weights` padded with `1` up to length `k`.
pub fn weights_for(k: usize, weights: &[Rational]) -> Result<Vec<Rational>> {
    if weights.len() > k {
        return Err(Error::usage(format!("{} weights given for order {k}", weights.len())));
    }
    let mut w = weights.to_vec();
    w.resize(k, Rational::from_integer(1));
    Ok(w)
}

/// `∏_{r₁⋯r_k ≤ n} (1 − 𝕃^{Φ_k(r)·d/2} t^{r₁⋯r_k})^{r₂ r₃² ⋯ r_k^{k−1}}`
/// raised to `−m`. Missing weights default to `1`.
pub fn rhs_theorem2(
    ring: &Arc<LExtRing>,
    m: &LExtElement,
    k: usize,
    d: u64,
    weights: &[Rational],
    n: usize,
) -> Result<TruncatedSeries<LExtRing>> {
    let w = weights_for(k, weights)?;
    let mut acc = TruncatedSeries::one(ring, n);
    let mut tuples = vec![];
    if k == 0 {
        tuples.push(vec![]);
    } else {
        r_tuples(k, &mut vec![], 1, n as u64, &mut tuples);
    }
    for r in tuples {
        let prod: u64 = r.iter().product();
        let (deg, mult, q) = if k == 0 {
            (1, 1, Rational::from_integer(0))
        } else {
            let mult: Int = r.iter().enumerate().map(|(i, &ri)| (ri as Int).pow(i as u32)).product();
            let q = phi_k(&r, &w)? * Rational::from_integer(d as i64) / 2;
            (prod as usize, mult, q)
        };
        let c = ring.neg(&ring.l_power(q));
        let base = TruncatedSeries::binomial(ring, c, deg, n);
        acc = acc.mul(&base.pow_int(mult)?);
    }
    power(&acc, &ring.neg(m))
}

fn r_tuples(k: usize, cur: &mut Vec<u64>, prod: u64, n: u64, out: &mut Vec<Vec<u64>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    let mut r = 1;
    while prod * r <= n {
        cur.push(r);
        r_tuples(k, cur, prod * r, n, out);
        cur.pop();
        r += 1;
    }
}

/// One summand `[X^φ_α/C(φ)]·𝕃^{shift}` of an order-`k` generalized class.
#[derive(Clone, Debug, PartialEq)]
pub struct Stratum {
    pub tuple: Vec<Elem>,
    pub class: LExtElement,
    pub shift: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbifoldDatum {
    pub k: usize,
    pub weights: Vec<Rational>,
    pub strata: Vec<Stratum>,
}

/// `Σ_strata class·𝕃^{shift}`, after checking each stratum is labelled by a
/// commuting `k`-tuple of `g_o`.
pub fn orbifold_class_from_datum(
    ring: &Arc<LExtRing>,
    g_o: &Arc<FiniteGroup>,
    datum: &OrbifoldDatum,
) -> Result<LExtElement> {
    let nonneg = datum.weights.iter().all(|w| *w >= Rational::from_integer(0));
    let mut total = ring.zero();
    for (i, s) in datum.strata.iter().enumerate() {
        let ok = s.tuple.len() == datum.k
            && s.tuple.iter().all(|&g| g < g_o.order())
            && s.tuple
                .iter()
                .enumerate()
                .all(|(a, &x)| s.tuple[a + 1..].iter().all(|&y| g_o.commute(x, y)));
        if !ok {
            return Err(Error::usage(format!(
                "strata[{i}]: unknown tuple-class label {:?} for commuting {}-tuples of {}",
                s.tuple,
                datum.k,
                g_o.label()
            )));
        }
        if nonneg && s.shift < Rational::from_integer(0) {
            return Err(Error::usage(format!(
                "strata[{i}]: negative shift {} with non-negative weights",
                s.shift
            )));
        }
        ring.check(&s.class)?;
        total = ring.add(&total, &s.class.scale_l(s.shift));
    }
    Ok(total)
}

/// The datum of a space with all ages zero: one stratum per class of
/// commuting `k`-tuples `φ`, carrying `χ^{G_B}(X^φ/C(φ))`.
pub fn datum_from_biset(
    ring: &Arc<LExtRing>,
    x: &impl AsCells,
    k: usize,
    weights: &[Rational],
) -> Result<OrbifoldDatum> {
    let cells = x.as_cells();
    let base = ring.base();
    let mut strata = vec![];
    for (phi, _) in commuting_tuple_classes_in(cells.g_o(), k)? {
        let fixed = cells.fixed_cells(&phi)?;
        let q = fixed.quotient_cells(fixed.g_o())?;
        strata.push(Stratum {
            tuple: phi,
            class: ring.embed(&base.chi_equivariant(&q)?),
            shift: Rational::from_integer(0),
        });
    }
    Ok(OrbifoldDatum {
        k,
        weights: weights_for(k, weights)?,
        strata,
    })
}

/// A rational given as a JSON integer or as a string `"p/q"`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum RationalDescriptor {
    Int(i64),
    Text(String),
}

impl RationalDescriptor {
    pub fn value(&self) -> Result<Rational> {
        match self {
            RationalDescriptor::Int(n) => Ok(Rational::from_integer(*n)),
            RationalDescriptor::Text(s) => parse_rational(s),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::usage(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A class in JSON: a coefficient vector (taken at `𝕃⁰`) or a list of
/// `{"exp": q, "coeffs": [...]}` terms.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum LExtDescriptor {
    Coeffs(Vec<i64>),
    Terms(Vec<TermDescriptor>),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermDescriptor {
    pub exp: RationalDescriptor,
    pub coeffs: Vec<i64>,
}

pub fn make_lext(ring: &LExtRing, desc: &LExtDescriptor) -> Result<LExtElement> {
    match desc {
        LExtDescriptor::Coeffs(c) => Ok(ring.embed(&ring.base.from_coeffs(widen(c))?)),
        LExtDescriptor::Terms(ts) => {
            let mut total = ring.zero();
            for t in ts {
                let x = ring.base.from_coeffs(widen(&t.coeffs))?;
                total = ring.add(&total, &ring.monomial(t.exp.value()?, x));
            }
            Ok(total)
        }
    }
}

fn widen(c: &[i64]) -> Vec<Int> {
    c.iter().map(|&x| x as Int).collect()
}

/// `{"k":1,"weights":[1],"strata":[{"tuple":[1],"class":[...],"shift":"1/2"}]}`;
/// a stratum may give `"ages"` (one list of angles per tuple entry) instead
/// of `"shift"`, in which case the shift is `Σ φ_i·age_i`.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct OrbifoldDatumDescriptor {
    pub k: usize,
    #[serde(default)]
    pub weights: Vec<RationalDescriptor>,
    pub strata: Vec<StratumDescriptor>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct StratumDescriptor {
    pub tuple: Vec<Elem>,
    pub class: LExtDescriptor,
    #[serde(default)]
    pub shift: Option<RationalDescriptor>,
    #[serde(default)]
    pub ages: Option<Vec<Vec<RationalDescriptor>>>,
}

pub fn make_datum(ring: &LExtRing, desc: &OrbifoldDatumDescriptor) -> Result<OrbifoldDatum> {
    let given = desc
        .weights
        .iter()
        .map(RationalDescriptor::value)
        .collect::<Result<Vec<_>>>()?;
    let weights = weights_for(desc.k, &given)?;
    let mut strata = Vec::with_capacity(desc.strata.len());
    for (i, s) in desc.strata.iter().enumerate() {
        let at = |e: Error| Error::usage(format!("strata[{i}]: {e}"));
        let shift = match (&s.shift, &s.ages) {
            (Some(q), None) => q.value().map_err(at)?,
            (None, Some(ages)) => {
                if ages.len() != s.tuple.len() {
                    return Err(at(Error::usage("need one angle list per tuple entry")));
                }
                let mut total = Rational::from_integer(0);
                for (w, angles) in weights.iter().zip(ages) {
                    let th = angles
                        .iter()
                        .map(RationalDescriptor::value)
                        .collect::<Result<Vec<_>>>()
                        .map_err(at)?;
                    total += w * age(&th).map_err(at)?;
                }
                total
            }
            (None, None) => Rational::from_integer(0),
            (Some(_), Some(_)) => return Err(at(Error::usage("give either shift or ages, not both"))),
        };
        strata.push(Stratum {
            tuple: s.tuple.clone(),
            class: make_lext(ring, &s.class).map_err(at)?,
            shift,
        });
    }
    Ok(OrbifoldDatum {
        k: desc.k,
        weights,
        strata,
    })
}
