//! Verification reports: the Macdonald-type identities checked degree by
//! degree, and randomized checks of the power-structure laws.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::burnside::BurnsideRing;
use crate::error::{check_budget, Result};
use crate::euler::chi_k_equivariant;
use crate::group::FiniteGroup;
use crate::gset::BiSet;
use crate::motivic::{rhs_theorem2, specialize_series, zeta_l, LExtElement, LExtRing, Rational};
use crate::powerstruct::{power, rhs_theorem1, Integers, LambdaRing, Ring, TruncatedSeries};
use crate::Int;

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct DegreeReport {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub lhs: Value,
    pub rhs: Value,
    pub lhs_text: String,
    pub rhs_text: String,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Value,
    pub degrees: Vec<DegreeReport>,
    pub pass: bool,
}

impl VerificationReport {
    fn new(identity: &str, params: Value, degrees: Vec<DegreeReport>) -> Self {
        let pass = degrees.iter().all(|d| d.equal);
        VerificationReport {
            identity: identity.to_string(),
            params,
            degrees,
            pass,
        }
    }

    /// Drops wall-clock fields so output is reproducible byte for byte.
    pub fn without_timing(mut self) -> Self {
        for d in &mut self.degrees {
            d.ms = None;
        }
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{} {}\n", self.identity, self.params);
        for d in &self.degrees {
            let tag = if d.equal { "ok  " } else { "FAIL" };
            let name = d.label.clone().unwrap_or_else(|| format!("t^{}", d.n));
            let time = d.ms.map(|m| format!("  ({m} ms)")).unwrap_or_default();
            out += &format!("  {tag} {name}: {}  vs  {}{time}\n", d.lhs_text, d.rhs_text);
        }
        out += if self.pass { "PASS\n" } else { "FAIL\n" };
        out
    }
}

/// Size limits for the brute-force side of the identities.
#[derive(Clone, Debug)]
pub struct VerifyBudget {
    /// Largest wreath product order when `k ≥ 2`.
    pub wreath_order_k2: u128,
    /// Largest wreath product order when `k ≤ 1`.
    pub wreath_order_k1: u128,
    pub points: u128,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget {
            wreath_order_k2: 50_000,
            wreath_order_k1: 400_000,
            points: 1_000_000,
        }
    }
}

impl VerifyBudget {
    /// Whether degree `n` of `x` fits, for order `k`.
    pub fn check(&self, x: &BiSet, k: usize, n: usize) -> Result<()> {
        let order = x.g_o().order() as u128;
        let wreath = (1..=n as u128).fold(1u128, |acc, i| acc.saturating_mul(order).saturating_mul(i));
        let limit = if k >= 2 { self.wreath_order_k2 } else { self.wreath_order_k1 };
        check_budget("wreath product order", wreath, limit)?;
        let points = (x.size() as u128).saturating_pow(n as u32);
        check_budget("points of the power", points, self.points)
    }
}

fn row<R: Ring>(ring: &R, n: usize, lhs: &R::Elem, rhs: &R::Elem, ms: u64) -> DegreeReport {
    DegreeReport {
        n,
        label: None,
        lhs: ring.to_json(lhs),
        rhs: ring.to_json(rhs),
        lhs_text: ring.render(lhs),
        rhs_text: ring.render(rhs),
        equal: lhs == rhs,
        ms: Some(ms),
    }
}

/// `Σ χ^{(k,G_B)}(X^n; G_O≀S_n, G_B) t^n` by brute force against the
/// power-structure right-hand side, for `n = 0…N`.
pub fn verify_theorem1(
    ring: &Arc<BurnsideRing>,
    x: &BiSet,
    k: usize,
    n: usize,
    budget: &VerifyBudget,
) -> Result<VerificationReport> {
    for d in 0..=n {
        budget.check(x, k, d)?;
    }
    let m = chi_k_equivariant(ring, x, k)?;
    let rhs = rhs_theorem1(ring, &m, k, n)?;
    let lhs: Vec<_> = (0..=n)
        .into_par_iter()
        .map(|d| -> Result<_> {
            let start = Instant::now();
            let v = match d {
                0 => ring.one(),
                1 => m.clone(),
                _ => chi_k_equivariant(ring, &x.wreath_power(d)?, k)?,
            };
            Ok((v, start.elapsed().as_millis() as u64))
        })
        .collect::<Result<_>>()?;
    let degrees = lhs
        .iter()
        .enumerate()
        .map(|(d, (v, ms))| row(ring.as_ref(), d, v, rhs.coeff(d), *ms))
        .collect();
    let params = json!({
        "gO": x.g_o().parent().label(),
        "gB": x.g_b().label(),
        "size": x.size(),
        "k": k,
        "N": n,
    });
    Ok(VerificationReport::new("theorem1", params, degrees))
}

/// `Σ [S^n X] t^n` against `(1 − t)^{−[X]}` over `A(G_B)`.
pub fn verify_lemma1(ring: &Arc<BurnsideRing>, x: &BiSet, n: usize) -> Result<VerificationReport> {
    let m = ring.class_of(x)?;
    let rhs = rhs_theorem1(ring, &m, 0, n)?;
    let lhs: Vec<_> = (0..=n)
        .into_par_iter()
        .map(|d| -> Result<_> {
            let start = Instant::now();
            let v = ring.class_of(&x.symmetric_power(d)?)?;
            Ok((v, start.elapsed().as_millis() as u64))
        })
        .collect::<Result<_>>()?;
    let degrees = lhs
        .iter()
        .enumerate()
        .map(|(d, (v, ms))| row(ring.as_ref(), d, v, rhs.coeff(d), *ms))
        .collect();
    let params = json!({"gB": x.g_b().label(), "size": x.size(), "N": n});
    Ok(VerificationReport::new("lemma1", params, degrees))
}

/// Which coefficient ring the randomized checks run over.
#[derive(Clone, Debug)]
pub enum AxiomRing {
    Integers,
    Burnside(Arc<BurnsideRing>),
    /// `A(G)[𝕃^{±1/D}]` with the given `D`.
    LExt(Arc<BurnsideRing>, i64),
}

impl AxiomRing {
    fn describe(&self) -> String {
        match self {
            AxiomRing::Integers => "Z".into(),
            AxiomRing::Burnside(b) => format!("A({})", b.group().label()),
            AxiomRing::LExt(b, d) => format!("A({})[L^(±1/{d})]", b.group().label()),
        }
    }
}

fn small_int(rng: &mut ChaCha8Rng, r: Int) -> Int {
    rng.gen_range(-r..=r)
}

fn random_burnside(b: &BurnsideRing, rng: &mut ChaCha8Rng, r: Int) -> crate::burnside::BurnsideElement {
    let coeffs = (0..b.rank()).map(|_| small_int(rng, r)).collect();
    b.from_coeffs(coeffs).expect("rank matches")
}

fn random_lext(l: &LExtRing, rng: &mut ChaCha8Rng, den: i64, r: Int) -> LExtElement {
    let terms = rng.gen_range(0..=2);
    let mut x = l.zero();
    for _ in 0..terms {
        let q = Rational::new(rng.gen_range(-den..=den), den);
        let c = random_burnside(l.base(), rng, r);
        x = l.add(&x, &l.monomial(q, c));
    }
    x
}

fn random_series<R: Ring>(
    ring: &Arc<R>,
    n: usize,
    rng: &mut ChaCha8Rng,
    elem: &impl Fn(&mut ChaCha8Rng) -> R::Elem,
) -> TruncatedSeries<R> {
    let mut c = vec![ring.one()];
    c.extend((1..=n).map(|_| elem(rng)));
    TruncatedSeries::new(ring, c, n)
}

/// A law checked over many trials: how many held, and the first failure.
struct Tally {
    label: &'static str,
    passed: usize,
    trials: usize,
    failure: Option<(String, String)>,
}

impl Tally {
    fn new(label: &'static str) -> Self {
        Tally {
            label,
            passed: 0,
            trials: 0,
            failure: None,
        }
    }

    fn record<T: PartialEq + std::fmt::Display>(&mut self, lhs: &T, rhs: &T) {
        self.trials += 1;
        if lhs == rhs {
            self.passed += 1;
        } else if self.failure.is_none() {
            self.failure = Some((lhs.to_string(), rhs.to_string()));
        }
    }

    fn into_row(self, n: usize, ms: u64) -> DegreeReport {
        let (lhs_text, rhs_text) = self.failure.unwrap_or_else(|| {
            (
                format!("{} of {} trials", self.passed, self.trials),
                format!("{} trials", self.trials),
            )
        });
        DegreeReport {
            n,
            label: Some(self.label.to_string()),
            lhs: json!(self.passed),
            rhs: json!(self.trials),
            lhs_text,
            rhs_text,
            equal: self.passed == self.trials,
            ms: Some(ms),
        }
    }
}

fn check_laws<R: LambdaRing>(
    ring: &Arc<R>,
    trials: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
    coeff: impl Fn(&mut ChaCha8Rng) -> R::Elem,
    exponent: impl Fn(&mut ChaCha8Rng) -> R::Elem,
) -> Result<Vec<DegreeReport>> {
    let start = Instant::now();
    let mut t1 = Tally::new("axiom 1: (1 + a1 t + ...)^m = 1 + m a1 t + ...");
    let mut t2 = Tally::new("axiom 2: (AB)^m = A^m B^m");
    let mut t3 = Tally::new("axiom 3: A^(m+n) = A^m A^n");
    let mut t4 = Tally::new("axiom 4: A^(mn) = (A^m)^n");
    let mut t5 = Tally::new("A^0 = 1 and A^1 = A");
    let mut t6 = Tally::new("finite determinacy");
    let one = TruncatedSeries::one(ring, n);
    for _ in 0..trials {
        let a = random_series(ring, n, rng, &coeff);
        let b = random_series(ring, n, rng, &coeff);
        let m = exponent(rng);
        let e = exponent(rng);
        let am = power(&a, &m)?;
        let lin = ring.mul(&m, a.coeff(1));
        t1.record(&am.truncate(1), &TruncatedSeries::new(ring, vec![ring.one(), lin], 1));
        t2.record(&power(&a.mul(&b), &m)?, &am.mul(&power(&b, &m)?));
        t3.record(&power(&a, &ring.add(&m, &e))?, &am.mul(&power(&a, &e)?));
        t4.record(&power(&a, &ring.mul(&m, &e))?, &power(&am, &e)?);
        t5.record(&power(&a, &ring.zero())?, &one);
        t5.record(&power(&a, &ring.one())?, &a);
        let order = rng.gen_range(1..=n);
        let mut c = a.coeffs().to_vec();
        for x in c.iter_mut().take(order).skip(1) {
            *x = ring.zero();
        }
        let shifted = TruncatedSeries::new(ring, c, n);
        let p = power(&shifted, &m)?;
        let ok = p.unit_order().map_or(true, |o| o >= order);
        t6.record(&ok, &true);
    }
    let ms = start.elapsed().as_millis() as u64;
    Ok([t1, t2, t3, t4, t5, t6]
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.into_row(i + 1, ms))
        .collect())
}

/// Randomized checks of axioms 1)–4), `A^0 = 1`, `A^1 = A` and finite
/// determinacy over the chosen ring.
pub fn verify_axioms(choice: &AxiomRing, trials: usize, n: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degrees = match choice {
        AxiomRing::Integers => {
            let z = Integers::new();
            check_laws(&z, trials, n, &mut rng, |r| small_int(r, 3), |r| small_int(r, 4))?
        }
        AxiomRing::Burnside(b) => check_laws(
            b,
            trials,
            n,
            &mut rng,
            |r| random_burnside(b, r, 1),
            |r| random_burnside(b, r, 2),
        )?,
        AxiomRing::LExt(b, den) => {
            let l = LExtRing::new(b);
            check_laws(
                &l,
                trials,
                n,
                &mut rng,
                |r| random_lext(&l, r, *den, 1),
                |r| random_lext(&l, r, *den, 1),
            )?
        }
    };
    let params = json!({"ring": choice.describe(), "trials": trials, "N": n, "seed": seed});
    Ok(VerificationReport::new("axioms", params, degrees))
}

/// Randomized checks over `A(G)[𝕃^{±1/2}]`: substitution `t ↦ 𝕃^s t`
/// commutes with powers, `ζ_{𝕃b}(t) = ζ_b(𝕃t)`, `𝕃 ↦ 1` commutes with
/// powers, and the `d = 0` Theorem 2 series specializes to Theorem 1.
pub fn verify_props12(b: &Arc<BurnsideRing>, trials: usize, n: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = LExtRing::new(b);
    let start = Instant::now();
    let mut p1 = Tally::new("(A(L^s t))^m = (A(t))^m at t -> L^s t");
    let mut p2 = Tally::new("zeta_(L b)(t) = zeta_b(L t)");
    let mut sp = Tally::new("L -> 1 commutes with powers");
    let mut th = Tally::new("Theorem 2 RHS at d = 0 specializes to Theorem 1 RHS");
    let shifts = [Rational::new(1, 2), Rational::new(1, 1), Rational::new(2, 1)];
    for _ in 0..trials {
        let a = random_series(&l, n, &mut rng, &|r| random_lext(&l, r, 2, 1));
        let m = random_lext(&l, &mut rng, 2, 1);
        let s = shifts[rng.gen_range(0..shifts.len())];
        let ls = l.l_power(s);
        let lhs = power(&a.substitute(&ls, 1)?, &m)?;
        let rhs = power(&a, &m)?.substitute(&ls, 1)?;
        p1.record(&lhs, &rhs);

        let q = Rational::new(rng.gen_range(-2..=2), 2);
        let i = rng.gen_range(0..b.rank());
        let lhs = zeta_l(&l, q + 1, i, n)?;
        let rhs = zeta_l(&l, q, i, n)?.substitute(&l.l_power(Rational::from_integer(1)), 1)?;
        p2.record(&lhs, &rhs);

        let lhs = specialize_series(&power(&a, &m)?);
        let rhs = power(&specialize_series(&a), &m.specialize(b))?;
        sp.record(&lhs, &rhs);

        let k = rng.gen_range(0..=2);
        let weights: Vec<Rational> = (0..k).map(|_| Rational::new(rng.gen_range(-2..=2), 2)).collect();
        let lhs = specialize_series(&rhs_theorem2(&l, &m, k, 0, &weights, n)?);
        let rhs = rhs_theorem1(b, &m.specialize(b), k, n)?;
        th.record(&lhs, &rhs);
    }
    let ms = start.elapsed().as_millis() as u64;
    let degrees = [p1, p2, sp, th]
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.into_row(i + 1, ms))
        .collect();
    let params = json!({"ring": format!("A({})[L^(±1/2)]", b.group().label()), "trials": trials, "N": n, "seed": seed});
    Ok(VerificationReport::new("props12", params, degrees))
}

/// The regular, bi-regular and three-point sets used in the standard grid.
pub fn standard_sets(g_o: &Arc<FiniteGroup>, g_b: &Arc<FiniteGroup>) -> Result<Vec<(&'static str, BiSet)>> {
    Ok(vec![
        ("regular", BiSet::regular_o_over(g_o, g_b)),
        ("bi-regular", BiSet::regular_bi(g_o, g_b)),
        ("three-point", BiSet::three_point(g_o, g_b)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_numbers() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let t = FiniteGroup::trivial();
        let ring = BurnsideRing::new(&t).unwrap();
        let x = BiSet::regular_o(&z2);
        let r = verify_theorem1(&ring, &x, 1, 4, &VerifyBudget::default()).unwrap();
        assert!(r.pass);
        let lhs: Vec<_> = r.degrees.iter().map(|d| d.lhs.clone()).collect();
        assert_eq!(lhs, vec![json!([1]), json!([1]), json!([2]), json!([3]), json!([5])]);
    }

    #[test]
    fn biregular_degree_two() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let ring = BurnsideRing::new(&z2).unwrap();
        let x = BiSet::regular_bi(&z2, &z2);
        let r = verify_theorem1(&ring, &x, 1, 2, &VerifyBudget::default()).unwrap();
        assert!(r.pass, "{}", r.render_text());
        assert_eq!(r.degrees[2].lhs_text, "2·[G/e] + [G/G]");
    }

    #[test]
    fn empty_set_gives_one() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let ring = BurnsideRing::new(&z2).unwrap();
        let x = BiSet::empty(&z2, &z2);
        let r = verify_theorem1(&ring, &x, 2, 3, &VerifyBudget::default()).unwrap();
        assert!(r.pass);
        assert!(r.degrees[1..].iter().all(|d| d.lhs_text == "0"));
    }

    #[test]
    fn lemma1_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let t = FiniteGroup::trivial();
        let ring = BurnsideRing::new(&z2).unwrap();
        let x = BiSet::regular_o(&z2).transpose().unwrap();
        let r = verify_lemma1(&ring, &x, 3).unwrap();
        assert!(r.pass);
        let texts: Vec<_> = r.degrees.iter().map(|d| d.lhs_text.as_str()).collect();
        assert_eq!(texts, ["[G/G]", "[G/e]", "[G/e] + [G/G]", "2·[G/e]"]);
        let two = BiSet::trivial_action(&t, &z2, 2);
        let r = verify_lemma1(&ring, &two, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.degrees[3].lhs_text, "4·[G/G]");
    }

    #[test]
    fn laws_hold() {
        assert!(verify_axioms(&AxiomRing::Integers, 10, 5, 1).unwrap().pass);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let b = BurnsideRing::new(&s3).unwrap();
        assert!(verify_axioms(&AxiomRing::Burnside(b), 3, 4, 2).unwrap().pass);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let b = BurnsideRing::new(&z2).unwrap();
        assert!(verify_axioms(&AxiomRing::LExt(b.clone(), 2), 3, 4, 3).unwrap().pass);
        assert!(verify_props12(&b, 3, 4, 4).unwrap().pass);
    }

    #[test]
    fn budget_refuses_large_wreaths() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = FiniteGroup::trivial();
        let ring = BurnsideRing::new(&t).unwrap();
        let x = BiSet::regular_o(&s3);
        let r = verify_theorem1(&ring, &x, 2, 6, &VerifyBudget::default());
        assert!(matches!(r, Err(crate::error::Error::Budget { .. })));
    }
}
