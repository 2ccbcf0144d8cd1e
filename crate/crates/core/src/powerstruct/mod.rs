//! Truncated power series over λ-rings and the power structure they induce.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::error::{Error, Result};
use crate::Int;

mod power;
mod series;

pub use power::{
    euler_product, geometric_power_oracle, integer_power_oracle, lambda, lambda_factorize, power,
    reconstruct, rhs_theorem1,
};
pub use series::TruncatedSeries;

/// A commutative ring with exact equality.
pub trait Ring: Send + Sync + Debug {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: Int) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;
    fn to_json(&self, a: &Self::Elem) -> Value;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Inverse of a unit; the default only recognises involutions.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_one(&self.mul(a, a)) {
            Some(a.clone())
        } else {
            None
        }
    }

    /// Rejects elements that belong to a different ring.
    fn check(&self, _a: &Self::Elem) -> Result<()> {
        Ok(())
    }
}

/// A ring whose additive group is spanned by generators `b` with known
/// series `ζ_b(t) = 1 + b·t + …`, extended to all elements by
/// `λ_{Σ n_b·b} = ∏ ζ_b^{n_b}`.
pub trait LambdaRing: Ring {
    type Gen: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn decompose(&self, a: &Self::Elem) -> Vec<(Self::Gen, Int)>;

    /// Coefficients of `ζ_b` in degrees `0..=n`.
    fn zeta(&self, b: &Self::Gen, n: usize) -> Result<Vec<Self::Elem>>;
}

/// The integers, with `ζ_1(t) = (1 − t)^{−1}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Integers {
    pub fn new() -> Arc<Self> {
        Arc::new(Integers)
    }
}

impl Ring for Integers {
    type Elem = Int;

    fn zero(&self) -> Int {
        0
    }
    fn one(&self) -> Int {
        1
    }
    fn add(&self, a: &Int, b: &Int) -> Int {
        a + b
    }
    fn neg(&self, a: &Int) -> Int {
        -a
    }
    fn mul(&self, a: &Int, b: &Int) -> Int {
        a * b
    }
    fn from_int(&self, n: Int) -> Int {
        n
    }
    fn render(&self, a: &Int) -> String {
        a.to_string()
    }
    fn to_json(&self, a: &Int) -> Value {
        int_json(*a)
    }
}

impl LambdaRing for Integers {
    type Gen = ();

    fn decompose(&self, a: &Int) -> Vec<((), Int)> {
        if *a == 0 {
            vec![]
        } else {
            vec![((), *a)]
        }
    }

    fn zeta(&self, _: &(), n: usize) -> Result<Vec<Int>> {
        Ok(vec![1; n + 1])
    }
}

/// JSON numbers lose precision past 2^53; larger values go out as strings.
pub(crate) fn int_json(n: Int) -> Value {
    if n.unsigned_abs() < (1u128 << 53) {
        json!(n as i64)
    } else {
        json!(n.to_string())
    }
}

impl Ring for BurnsideRing {
    type Elem = BurnsideElement;

    fn zero(&self) -> BurnsideElement {
        BurnsideRing::zero(self)
    }
    fn one(&self) -> BurnsideElement {
        BurnsideRing::one(self)
    }
    fn add(&self, a: &BurnsideElement, b: &BurnsideElement) -> BurnsideElement {
        a + b
    }
    fn neg(&self, a: &BurnsideElement) -> BurnsideElement {
        -a
    }
    fn mul(&self, a: &BurnsideElement, b: &BurnsideElement) -> BurnsideElement {
        a * b
    }
    fn from_int(&self, n: Int) -> BurnsideElement {
        BurnsideRing::from_int(self, n)
    }
    fn render(&self, a: &BurnsideElement) -> String {
        a.to_string()
    }
    fn to_json(&self, a: &BurnsideElement) -> Value {
        a.to_json()
    }
    fn is_zero(&self, a: &BurnsideElement) -> bool {
        a.is_zero()
    }
    fn check(&self, a: &BurnsideElement) -> Result<()> {
        if a.ring().same_ring(self) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!(
                "element of A({}) used in A({})",
                a.ring().group().label(),
                self.group().label()
            )))
        }
    }
}

impl LambdaRing for BurnsideRing {
    type Gen = usize;

    fn decompose(&self, a: &BurnsideElement) -> Vec<(usize, Int)> {
        a.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i, *c))
            .collect()
    }

    fn zeta(&self, b: &usize, n: usize) -> Result<Vec<BurnsideElement>> {
        self.zeta_basis(*b, n)
    }
}
