use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use super::Ring;
use crate::error::{Error, Result};
use crate::Int;

/// `c₀ + c₁t + … + c_N t^N`, all arithmetic taken modulo `t^{N+1}`.
pub struct TruncatedSeries<R: Ring> {
    ring: Arc<R>,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> Clone for TruncatedSeries<R> {
    fn clone(&self) -> Self {
        TruncatedSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.clone(),
        }
    }
}

impl<R: Ring> PartialEq for TruncatedSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: Ring> fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<R: Ring> TruncatedSeries<R> {
    /// Pads with zeros or drops terms so the result has degree `n`.
    pub fn new(ring: &Arc<R>, mut coeffs: Vec<R::Elem>, n: usize) -> Self {
        coeffs.resize(n + 1, ring.zero());
        TruncatedSeries {
            ring: ring.clone(),
            coeffs,
        }
    }

    /// Like `new`, but rejects coefficients from a different ring.
    pub fn checked(ring: &Arc<R>, coeffs: Vec<R::Elem>, n: usize) -> Result<Self> {
        for c in &coeffs {
            ring.check(c)?;
        }
        Ok(Self::new(ring, coeffs, n))
    }

    pub fn zero(ring: &Arc<R>, n: usize) -> Self {
        Self::new(ring, vec![], n)
    }

    pub fn one(ring: &Arc<R>, n: usize) -> Self {
        Self::new(ring, vec![ring.one()], n)
    }

    /// `1 + c·t^r`.
    pub fn binomial(ring: &Arc<R>, c: R::Elem, r: usize, n: usize) -> Self {
        let mut s = Self::one(ring, n);
        if r <= n {
            s.coeffs[r] = ring.add(&s.coeffs[r], &c);
        }
        s
    }

    pub fn ring(&self) -> &Arc<R> {
        &self.ring
    }

    /// The truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn map<S: Ring>(&self, ring: &Arc<S>, f: impl Fn(&R::Elem) -> S::Elem) -> TruncatedSeries<S> {
        TruncatedSeries {
            ring: ring.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::new(&self.ring, self.coeffs.iter().take(n + 1).cloned().collect(), n)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        let coeffs = (0..=n)
            .map(|i| self.ring.add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Self::new(&self.ring, coeffs, n)
    }

    pub fn neg(&self) -> Self {
        self.map(&self.ring, |c| self.ring.neg(c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map(&self.ring, |a| self.ring.mul(c, a))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        let r = &self.ring;
        let mut coeffs = vec![r.zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !r.is_zero(b) {
                    coeffs[i + j] = r.add(&coeffs[i + j], &r.mul(a, b));
                }
            }
        }
        Self::new(r, coeffs, n)
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let r = &self.ring;
        let u = r.unit_inverse(&self.coeffs[0]).ok_or(Error::NonUnitConstant)?;
        let n = self.degree();
        let mut inv: Vec<R::Elem> = Vec::with_capacity(n + 1);
        inv.push(u.clone());
        for k in 1..=n {
            let mut s = r.zero();
            for j in 1..=k {
                if !r.is_zero(&self.coeffs[j]) {
                    s = r.add(&s, &r.mul(&self.coeffs[j], &inv[k - j]));
                }
            }
            inv.push(r.neg(&r.mul(&u, &s)));
        }
        Ok(Self::new(r, inv, n))
    }

    /// `t ↦ c·t^r`, keeping the truncation degree.
    pub fn substitute(&self, c: &R::Elem, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::usage("substitution t ↦ c·t^r needs r ≥ 1"));
        }
        let ring = &self.ring;
        let n = self.degree();
        let mut coeffs = vec![ring.zero(); n + 1];
        let mut cp = ring.one();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i * r > n {
                break;
            }
            coeffs[i * r] = ring.mul(&cp, a);
            cp = ring.mul(&cp, c);
        }
        Ok(Self::new(ring, coeffs, n))
    }

    /// Same coefficients, placed at degrees `0, r, 2r, …`, truncated at `n`.
    pub(crate) fn spread(&self, r: usize, n: usize) -> Self {
        let mut coeffs = vec![self.ring.zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i * r > n {
                break;
            }
            coeffs[i * r] = a.clone();
        }
        Self::new(&self.ring, coeffs, n)
    }

    /// Integer power; negative exponents go through `inverse`.
    pub fn pow_int(&self, e: Int) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.ring, self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Order of vanishing of `self − 1`, or `None` when `self = 1` to degree `N`.
    pub fn unit_order(&self) -> Option<usize> {
        let r = &self.ring;
        if !r.is_one(&self.coeffs[0]) {
            return Some(0);
        }
        (1..self.coeffs.len()).find(|&i| !r.is_zero(&self.coeffs[i]))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| self.ring.to_json(c)).collect())
    }
}

impl<R: Ring> fmt::Display for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.ring;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if r.is_zero(c) {
                continue;
            }
            let mut text = r.render(c);
            let negative = text.starts_with('-') && !text[1..].contains([' ']);
            if negative {
                text.remove(0);
            }
            let compound = text.contains(" + ") || text.contains(" - ");
            if compound {
                text = format!("({text})");
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if var.is_empty() {
                write!(f, "{text}")?;
            } else if text == "1" {
                write!(f, "{var}")?;
            } else {
                write!(f, "{text}·{var}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.degree() + 1)
    }
}
