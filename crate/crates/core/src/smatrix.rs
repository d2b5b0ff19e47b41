//! Bulk two-body S-matrix families evaluated at exact momenta.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::matrix::{permutation_operator, CMatrix};
use crate::momentum::Momentum;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SMatrixFamily {
    /// `S = 𝕀⊗𝕀`.
    Identity,
    /// `S = P`.
    Permutation,
    /// `S(k1,k2) = ((k1−k2)𝕀 + i g P) / ((k1−k2) + i g)`.
    Rational { g: Rational64 },
    /// Same numerator with the conjugate denominator `(k1−k2) − i g`. Only a
    /// scalar factor differs from `Rational`, so it is still unitary and
    /// satisfies YBE.
    RationalConjugateDenominator { g: Rational64 },
    /// `((k1+k2)𝕀 + i g P) / ((k1+k2) + i g)`: breaks unitarity and YBE for `N ≥ 2`.
    RationalFlipped { g: Rational64 },
}

impl SMatrixFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SMatrixFamily::Identity => "identity",
            SMatrixFamily::Permutation => "permutation",
            SMatrixFamily::Rational { .. } => "rational",
            SMatrixFamily::RationalConjugateDenominator { .. } => "rational_conjugate_denominator",
            SMatrixFamily::RationalFlipped { .. } => "rational_flipped",
        }
    }

    pub fn coupling(&self) -> Option<Rational64> {
        match *self {
            SMatrixFamily::Rational { g }
            | SMatrixFamily::RationalConjugateDenominator { g }
            | SMatrixFamily::RationalFlipped { g } => Some(g),
            _ => None,
        }
    }

    /// Families that are expected to satisfy YBE and unitarity.
    pub fn is_valid_family(&self) -> bool {
        !matches!(self, SMatrixFamily::RationalFlipped { .. })
    }
}

impl fmt::Display for SMatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coupling() {
            Some(g) => write!(f, "{}(g={})", self.name(), g),
            None => f.write_str(self.name()),
        }
    }
}

/// Momentum-indexed `N²×N²` S-matrix with a write-once evaluation cache.
#[derive(Debug)]
pub struct SMatrixFn {
    n: usize,
    family: SMatrixFamily,
    cache: RwLock<HashMap<(Momentum, Momentum), Arc<CMatrix>>>,
}

impl Clone for SMatrixFn {
    fn clone(&self) -> Self {
        let cache = self.cache.read().expect("smatrix cache poisoned").clone();
        SMatrixFn { n: self.n, family: self.family, cache: RwLock::new(cache) }
    }
}

impl SMatrixFn {
    pub fn new(family: SMatrixFamily, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::InvalidParameter("N must be at least 1".into()));
        }
        if let Some(g) = family.coupling() {
            if g.is_zero() {
                return Err(CoreError::InvalidParameter(format!(
                    "{} family needs a nonzero coupling g",
                    family.name()
                )));
            }
        }
        Ok(SMatrixFn { n, family, cache: RwLock::new(HashMap::new()) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> SMatrixFamily {
        self.family
    }

    /// `S(k1, k2)`, with the first tensor factor on the first leg.
    pub fn eval(&self, k1: Momentum, k2: Momentum) -> Arc<CMatrix> {
        if let Some(m) = self.cache.read().expect("smatrix cache poisoned").get(&(k1, k2)) {
            return Arc::clone(m);
        }
        let m = Arc::new(self.compute(k1, k2));
        let mut w = self.cache.write().expect("smatrix cache poisoned");
        Arc::clone(w.entry((k1, k2)).or_insert(m))
    }

    fn compute(&self, k1: Momentum, k2: Momentum) -> CMatrix {
        let n = self.n;
        let rational = |d: Rational64, g: Rational64, den_sign: i64| {
            let d = Scalar::from_rational64(d);
            let ig = &Scalar::from_rational64(g) * &Scalar::i();
            let den = &d + &(&ig * &Scalar::from_int(den_sign));
            let inv = den.inv().expect("nonzero denominator");
            let id = CMatrix::identity(n * n).scale(&(&d * &inv));
            let p = permutation_operator(n).scale(&(&ig * &inv));
            &id + &p
        };
        match self.family {
            SMatrixFamily::Identity => CMatrix::identity(n * n),
            SMatrixFamily::Permutation => permutation_operator(n),
            SMatrixFamily::Rational { g } => rational(k1.value() - k2.value(), g, 1),
            SMatrixFamily::RationalConjugateDenominator { g } => rational(k1.value() - k2.value(), g, -1),
            SMatrixFamily::RationalFlipped { g } => rational(k1.value() + k2.value(), g, 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_at_equal_momenta_is_swap() {
        let s = SMatrixFn::new(SMatrixFamily::Rational { g: Rational64::from_integer(1) }, 2).unwrap();
        let k = Momentum::int(3);
        assert_eq!(*s.eval(k, k), permutation_operator(2));
    }

    #[test]
    fn rational_entries_at_two_one() {
        // d = 1, g = 1: diagonal (1 + i)/(1 + i) on |00>, and (1, i)/(1+i) in the swap block.
        let s = SMatrixFn::new(SMatrixFamily::Rational { g: Rational64::from_integer(1) }, 2).unwrap();
        let m = s.eval(Momentum::int(2), Momentum::int(1));
        assert_eq!(m.get(0, 0), &Scalar::one());
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(m.get(1, 1), &(&half - &(&half * &Scalar::i())));
        assert_eq!(m.get(1, 2), &(&half + &(&half * &Scalar::i())));
    }

    #[test]
    fn zero_coupling_rejected() {
        assert!(SMatrixFn::new(SMatrixFamily::Rational { g: Rational64::zero() }, 2).is_err());
        assert!(SMatrixFn::new(SMatrixFamily::Identity, 0).is_err());
    }

    #[test]
    fn cache_returns_identical_values() {
        let s = SMatrixFn::new(SMatrixFamily::Rational { g: Rational64::new(1, 2) }, 2).unwrap();
        let a = s.eval(Momentum::int(1), Momentum::int(-2));
        let b = s.eval(Momentum::int(1), Momentum::int(-2));
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*s.clone().eval(Momentum::int(1), Momentum::int(-2)), *a);
    }
}
