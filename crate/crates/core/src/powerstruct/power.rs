use std::collections::HashMap;
use std::sync::Arc;

use super::{Integers, LambdaRing, Ring, TruncatedSeries};
use crate::burnside::BurnsideRing;
use crate::error::{check_budget, Error, Result};
use crate::group::FiniteGroup;
use crate::gset::BiSet;
use crate::Int;

/// Configurations enumerated by the geometric oracle, per degree.
const CONFIGURATION_LIMIT: usize = 200_000;

/// `λ_c(t) = ∏ ζ_b(t)^{n_b}` for `c = Σ n_b·b`, to degree `n`.
pub fn lambda<R: LambdaRing>(ring: &Arc<R>, c: &R::Elem, n: usize) -> Result<TruncatedSeries<R>> {
    ring.check(c)?;
    let mut acc = TruncatedSeries::one(ring, n);
    for (b, e) in ring.decompose(c) {
        let z = TruncatedSeries::new(ring, ring.zeta(&b, n)?, n);
        acc = acc.mul(&z.pow_int(e)?);
    }
    Ok(acc)
}

fn require_one_unit<R: Ring>(a: &TruncatedSeries<R>) -> Result<()> {
    for c in a.coeffs() {
        a.ring().check(c)?;
    }
    if !a.ring().is_one(a.coeff(0)) {
        return Err(Error::usage("series must have constant term 1"));
    }
    Ok(())
}

/// `b₁,…,b_N` with `A(t) = ∏ λ_{b_i}(t^i) mod t^{N+1}`.
pub fn lambda_factorize<R: LambdaRing>(a: &TruncatedSeries<R>) -> Result<Vec<R::Elem>> {
    require_one_unit(a)?;
    let ring = a.ring();
    let n = a.degree();
    let mut residual = a.clone();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let b = residual.coeff(i).clone();
        if !ring.is_zero(&b) {
            let l = lambda(ring, &ring.neg(&b), n / i)?.spread(i, n);
            residual = residual.mul(&l);
        }
        out.push(b);
    }
    if residual.unit_order().is_some() {
        return Err(Error::invariant("λ-factorization left a non-trivial residual"));
    }
    Ok(out)
}

/// `∏ λ_{b_i}(t^i)` to degree `n`.
pub fn reconstruct<R: LambdaRing>(ring: &Arc<R>, bs: &[R::Elem], n: usize) -> Result<TruncatedSeries<R>> {
    let mut acc = TruncatedSeries::one(ring, n);
    for (i, b) in bs.iter().enumerate().take(n) {
        let r = i + 1;
        if !ring.is_zero(b) {
            acc = acc.mul(&lambda(ring, b, n / r)?.spread(r, n));
        }
    }
    Ok(acc)
}

/// `(A(t))^m = ∏ λ_{m·b_i}(t^i)` where `A = ∏ λ_{b_i}(t^i)`.
pub fn power<R: LambdaRing>(a: &TruncatedSeries<R>, m: &R::Elem) -> Result<TruncatedSeries<R>> {
    let ring = a.ring();
    ring.check(m)?;
    let bs = lambda_factorize(a)?;
    let mbs: Vec<_> = bs.iter().map(|b| ring.mul(m, b)).collect();
    reconstruct(ring, &mbs, a.degree())
}

/// `(A(t))^m` over ℤ by the multinomial formula
/// `Σ_{Σ i·k_i = k} m(m−1)⋯(m−K+1) ∏ a_i^{k_i}/k_i!`, `K = Σ k_i`.
pub fn integer_power_oracle(a: &TruncatedSeries<Integers>, m: Int) -> Result<TruncatedSeries<Integers>> {
    require_one_unit(a)?;
    let n = a.degree();
    let coeffs = (0..=n)
        .map(|k| {
            let mut total = 0;
            let mut ks = vec![0usize; k + 1];
            partitions(k, k, &mut ks, &mut |ks| {
                total += partition_term(a.coeffs(), ks, m);
            });
            total
        })
        .collect();
    Ok(TruncatedSeries::new(a.ring(), coeffs, n))
}

/// Calls `f` with the multiplicity vector of every partition of `rest`
/// into parts of size at most `max`.
fn partitions(rest: usize, max: usize, ks: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if rest == 0 {
        f(ks);
        return;
    }
    for part in (1..=max.min(rest)).rev() {
        ks[part] += 1;
        partitions(rest - part, part, ks, f);
        ks[part] -= 1;
    }
}

fn partition_term(a: &[Int], ks: &[usize], m: Int) -> Int {
    let big_k: usize = ks.iter().sum();
    // binom(m, K) for arbitrary integer m
    let mut binom: Int = 1;
    for j in 0..big_k as Int {
        binom = binom * (m - j) / (j + 1);
    }
    if binom == 0 {
        return 0;
    }
    // K!/∏k_i!
    let mut multinomial: Int = 1;
    let mut placed: Int = 0;
    let mut prod: Int = 1;
    for (i, &k) in ks.iter().enumerate().skip(1) {
        for j in 1..=k as Int {
            placed += 1;
            multinomial = multinomial * placed / j;
        }
        prod *= a[i].pow(k as u32);
    }
    binom * multinomial * prod
}

/// `(1 + Σ [A_i] t^i)^{[M]}` computed from configurations: the degree-`k`
/// coefficient is the class of the set of maps `ψ: K → ⊔A_i` from finite
/// `K ⊂ M` with `Σ_{x∈K} i(ψ(x)) = k`, with `G` acting on both sides.
/// Only the `G_B` side of the given sets is used.
pub fn geometric_power_oracle(
    ring: &Arc<BurnsideRing>,
    a: &[BiSet],
    m: &BiSet,
    n: usize,
) -> Result<TruncatedSeries<BurnsideRing>> {
    let g = ring.group();
    for x in a.iter().chain([m]) {
        if !x.g_b().same_as(g) {
            return Err(Error::GroupMismatch(format!(
                "set over {} used in A({})",
                x.g_b().label(),
                g.label()
            )));
        }
    }
    // flat labels: 0 is "not in K", then (i, point) for every A_i
    let mut labels = vec![(0usize, 0usize)];
    let mut start = vec![0usize; a.len()];
    for (i, ai) in a.iter().enumerate() {
        start[i] = labels.len();
        labels.extend((0..ai.size()).map(|p| (i + 1, p)));
    }
    let gens = g.generators().to_vec();
    let label_images: Vec<Vec<u16>> = gens
        .iter()
        .map(|&h| {
            labels
                .iter()
                .map(|&(w, p)| {
                    if w == 0 {
                        0
                    } else {
                        (start[w - 1] + a[w - 1].act_b(h, p)) as u16
                    }
                })
                .collect()
        })
        .collect();
    let m_perm: Vec<Vec<usize>> = gens.iter().map(|&h| m.b_permutation(h)).collect();
    let trivial = FiniteGroup::trivial();
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut configs: Vec<Vec<u16>> = vec![];
        let mut cur = vec![0u16; m.size()];
        enumerate_configs(&labels, 0, k, &mut cur, &mut configs)?;
        let index: HashMap<&[u16], usize> = configs
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_slice(), i))
            .collect();
        let act_b: Vec<Vec<usize>> = (0..gens.len())
            .map(|gi| {
                configs
                    .iter()
                    .map(|c| {
                        let mut img = vec![0u16; c.len()];
                        for (x, &l) in c.iter().enumerate() {
                            img[m_perm[gi][x]] = label_images[gi][l as usize];
                        }
                        index[img.as_slice()]
                    })
                    .collect()
            })
            .collect();
        let set = BiSet::from_generator_actions(&trivial, g, configs.len(), &[], &act_b)?;
        coeffs.push(ring.class_of(&set)?);
    }
    Ok(TruncatedSeries::new(ring, coeffs, n))
}

fn enumerate_configs(
    labels: &[(usize, usize)],
    x: usize,
    rest: usize,
    cur: &mut Vec<u16>,
    out: &mut Vec<Vec<u16>>,
) -> Result<()> {
    if x == cur.len() {
        if rest == 0 {
            out.push(cur.clone());
            check_budget("configurations", out.len() as u128, CONFIGURATION_LIMIT as u128)?;
        }
        return Ok(());
    }
    for (l, &(w, _)) in labels.iter().enumerate() {
        if w <= rest {
            cur[x] = l as u16;
            enumerate_configs(labels, x + 1, rest - w, cur, out)?;
        }
    }
    cur[x] = 0;
    Ok(())
}

/// `∏_{r₁⋯r_k ≤ n} (1 − t^{r₁⋯r_k})^{r₂ r₃² ⋯ r_k^{k−1}}` over ℤ; `1 − t`
/// when `k = 0`.
pub fn euler_product(k: usize, n: usize) -> Result<TruncatedSeries<Integers>> {
    let z = Integers::new();
    let mut acc = TruncatedSeries::one(&z, n);
    let mut factors: Vec<(usize, Int)> = vec![];
    if k == 0 {
        factors.push((1, 1));
    } else {
        exponent_tuples(k, 0, 1, 1, n, &mut factors);
    }
    for (r, w) in factors {
        let base = TruncatedSeries::binomial(&z, -1, r, n);
        acc = acc.mul(&base.pow_int(w)?);
    }
    Ok(acc)
}

/// Appends `(r₁⋯r_k, r₂ r₃² ⋯ r_k^{k−1})` for all tuples with product ≤ `n`.
pub(crate) fn exponent_tuples(k: usize, i: usize, prod: usize, weight: Int, n: usize, out: &mut Vec<(usize, Int)>) {
    if i == k {
        out.push((prod, weight));
        return;
    }
    let mut r = 1;
    while prod * r <= n {
        exponent_tuples(k, i + 1, prod * r, weight * (r as Int).pow(i as u32), n, out);
        r += 1;
    }
}

/// The right-hand side of the Macdonald-type identity:
/// `(euler_product(k))^{−m}` over `ring`.
pub fn rhs_theorem1<R: LambdaRing>(ring: &Arc<R>, m: &R::Elem, k: usize, n: usize) -> Result<TruncatedSeries<R>> {
    let base = euler_product(k, n)?;
    let lifted = base.map(ring, |c| ring.from_int(*c));
    power(&lifted, &ring.neg(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[Int], n: usize) -> TruncatedSeries<Integers> {
        TruncatedSeries::new(&Integers::new(), c.to_vec(), n)
    }

    #[test]
    fn integer_oracle_examples() {
        assert_eq!(integer_power_oracle(&z(&[1, 1], 4), 2).unwrap(), z(&[1, 2, 1], 4));
        assert_eq!(integer_power_oracle(&z(&[1, -1], 4), -2).unwrap(), z(&[1, 2, 3, 4, 5], 4));
        assert_eq!(integer_power_oracle(&z(&[1, 1, 1], 3), 3).unwrap().coeff(3), &7);
    }

    #[test]
    fn integer_power_matches_oracle() {
        let a = z(&[1, 3, -2, 5, 0, 1], 5);
        for m in -3..=3 {
            assert_eq!(power(&a, &m).unwrap(), integer_power_oracle(&a, m).unwrap());
        }
    }

    #[test]
    fn factorization() {
        let zr = Integers::new();
        let a = z(&[1, 1], 6);
        let bs = lambda_factorize(&a).unwrap();
        assert_eq!(bs, vec![1, -1, 0, 0, 0, 0]);
        assert_eq!(reconstruct(&zr, &bs, 6).unwrap(), a);
        assert_eq!(lambda_factorize(&z(&[1; 5], 4)).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(lambda_factorize(&z(&[1], 4)).unwrap(), vec![0; 4]);
        assert!(lambda_factorize(&z(&[2, 1], 4)).is_err());
    }

    #[test]
    fn burnside_power() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let ring = BurnsideRing::new(&g).unwrap();
        let e = ring.basis(0);
        let one_minus_t = TruncatedSeries::binomial(&ring, ring.from_int(-1), 1, 3);
        let p = power(&one_minus_t, &-&e).unwrap();
        let expect = vec![ring.one(), e.clone(), &e + &ring.one(), e.scale(2)];
        assert_eq!(p.coeffs(), expect.as_slice());
        assert_eq!(power(&p, &ring.zero()).unwrap(), TruncatedSeries::one(&ring, 3));
        assert_eq!(power(&p, &ring.one()).unwrap(), p);
    }

    #[test]
    fn geometric_oracle_examples() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let t = FiniteGroup::trivial();
        let ring = BurnsideRing::new(&g).unwrap();
        let pt = BiSet::point(&t, &g);
        let reg = BiSet::regular_o(&g).transpose().unwrap();
        let s = geometric_power_oracle(&ring, &[pt.clone()], &reg, 3).unwrap();
        assert_eq!(s.coeffs(), &[ring.one(), ring.basis(0), ring.one(), ring.zero()]);
        let empty = BiSet::empty(&t, &g);
        assert_eq!(
            geometric_power_oracle(&ring, &[pt.clone()], &empty, 3).unwrap(),
            TruncatedSeries::one(&ring, 3)
        );
        let s = geometric_power_oracle(&ring, &[pt.clone()], &pt, 3).unwrap();
        assert_eq!(s, TruncatedSeries::binomial(&ring, ring.one(), 1, 3));
    }

    #[test]
    fn theorem1_rhs_examples() {
        let zr = Integers::new();
        assert_eq!(rhs_theorem1(&zr, &1, 1, 5).unwrap(), z(&[1, 1, 2, 3, 5, 7], 5));
        assert_eq!(rhs_theorem1(&zr, &1, 2, 2).unwrap(), z(&[1, 1, 4], 2));
        assert_eq!(rhs_theorem1(&zr, &1, 0, 3).unwrap(), z(&[1, 1, 1, 1], 3));
        let g = FiniteGroup::cyclic(2).unwrap();
        let ring = BurnsideRing::new(&g).unwrap();
        let x = BiSet::regular_o(&g).transpose().unwrap();
        let s = rhs_theorem1(&ring, &ring.basis(0), 0, 4).unwrap();
        for (k, c) in s.coeffs().iter().enumerate() {
            assert_eq!(c, &ring.class_of(&x.symmetric_power(k).unwrap()).unwrap());
        }
    }
}
