//! Polynomials carrying an explicit factor `2^(−e/2)`, so that generators
//! normalized by `1/√2` stay exact.

use crate::context::ExprContext;
use crate::engine::{equal_mod, Comparison};
use crate::error::{CoreError, Result};
use crate::legs::{leg_product, Factor};
use crate::poly::NCPoly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weighted {
    pub body: NCPoly,
    /// Exponent `e` of the prefactor `2^(−e/2)`.
    pub half_exp: u32,
}

impl Weighted {
    pub fn plain(body: NCPoly) -> Self {
        Weighted { body, half_exp: 0 }
    }

    pub fn new(body: NCPoly, half_exp: u32) -> Self {
        Weighted { body, half_exp }
    }

    pub fn nfree(&self) -> usize {
        self.body.nfree()
    }

    /// Body expressed with prefactor `2^(−target/2)`.
    pub fn body_at(&self, target: u32) -> Result<NCPoly> {
        if target < self.half_exp || !(target - self.half_exp).is_multiple_of(2) {
            return Err(CoreError::Domain(format!(
                "cannot rescale weight 2^(-{}/2) to 2^(-{target}/2) exactly",
                self.half_exp
            )));
        }
        let factor = Scalar::from_int(2).pow((target - self.half_exp) / 2);
        Ok(self.body.scale(&factor))
    }

    pub fn scale(&self, c: &Scalar) -> Weighted {
        Weighted { body: self.body.scale(c), half_exp: self.half_exp }
    }

    pub fn try_add(&self, other: &Weighted) -> Result<Weighted> {
        let e = self.half_exp.max(other.half_exp);
        Ok(Weighted { body: self.body_at(e)?.try_add(&other.body_at(e)?)?, half_exp: e })
    }

    pub fn try_sub(&self, other: &Weighted) -> Result<Weighted> {
        self.try_add(&other.scale(&-Scalar::one()))
    }

    pub fn map_body(&self, f: impl FnOnce(&NCPoly) -> Result<NCPoly>) -> Result<Weighted> {
        Ok(Weighted { body: f(&self.body)?, half_exp: self.half_exp })
    }
}

/// A factor of a leg product whose operator parts carry weights.
pub enum WFactor {
    Op { leg: usize, op: Weighted, row: bool, col: bool },
    Plain(Factor),
}

impl WFactor {
    pub fn op(leg: usize, op: Weighted, row: bool, col: bool) -> Self {
        WFactor::Op { leg, op, row, col }
    }
}

/// Leg product with the weights of all operator factors multiplied.
pub fn weighted_leg_product(n: usize, nlegs: usize, factors: Vec<WFactor>) -> Weighted {
    let mut half_exp = 0;
    let plain = factors
        .into_iter()
        .map(|f| match f {
            WFactor::Op { leg, op, row, col } => {
                half_exp += op.half_exp;
                Factor::op(leg, op.body, row, col)
            }
            WFactor::Plain(f) => f,
        })
        .collect();
    Weighted { body: leg_product(n, nlegs, plain), half_exp }
}

/// Equality modulo relations after bringing both sides to a common weight.
pub fn equal_weighted(p: &Weighted, q: &Weighted, ctx: &ExprContext) -> Result<Comparison> {
    let e = p.half_exp.max(q.half_exp);
    equal_mod(&p.body_at(e)?, &q.body_at(e)?, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescaling_requires_matching_parity() {
        let w = Weighted::new(NCPoly::one(1), 1);
        assert!(w.body_at(2).is_err());
        assert_eq!(w.body_at(3).unwrap(), NCPoly::scalar(1, Scalar::from_int(2)));
        let sum = Weighted::plain(NCPoly::one(1)).try_add(&Weighted::new(NCPoly::one(1), 2)).unwrap();
        assert_eq!(sum, Weighted::new(NCPoly::scalar(1, Scalar::from_int(3)), 2));
    }
}
