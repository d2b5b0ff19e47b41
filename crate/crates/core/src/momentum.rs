//! Nonzero rational momenta and finite grids closed under negation.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::scalar::{parse_rational64, Scalar};

/// A nonzero exact rational momentum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Momentum(Rational64);

impl Momentum {
    pub fn new(value: Rational64) -> Result<Self> {
        if value.is_zero() {
            return Err(CoreError::ZeroMomentum);
        }
        Ok(Momentum(value))
    }

    pub fn int(n: i64) -> Self {
        Momentum::new(Rational64::from_integer(n)).expect("nonzero integer momentum")
    }

    pub fn parse(text: &str) -> Result<Self> {
        Momentum::new(parse_rational64(text)?)
    }

    pub fn value(self) -> Rational64 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0.is_positive()
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn scalar(self) -> Scalar {
        Scalar::from_rational64(self.0)
    }

    /// `k^n` as an exact scalar.
    pub fn power(self, n: u32) -> Scalar {
        self.scalar().pow(n)
    }
}

impl std::ops::Neg for Momentum {
    type Output = Momentum;
    fn neg(self) -> Momentum {
        Momentum(-self.0)
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Finite set of momenta. A regular grid is `positives ∪ −positives`; a
/// waived grid may be asymmetric and exists only for negative controls.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentumGrid {
    points: Vec<Momentum>,
    symmetric: bool,
}

impl MomentumGrid {
    /// Builds the symmetric grid from distinct positive momenta.
    pub fn symmetric(positives: &[Rational64]) -> Result<Self> {
        let mut pts = Vec::with_capacity(positives.len() * 2);
        for &p in positives {
            if !p.is_positive() {
                return Err(CoreError::InvalidGrid(format!("{p} is not positive")));
            }
            let m = Momentum::new(p)?;
            if pts.contains(&m) {
                return Err(CoreError::InvalidGrid(format!("{p} listed twice")));
            }
            pts.push(m);
            pts.push(-m);
        }
        if pts.is_empty() {
            return Err(CoreError::InvalidGrid("empty grid".into()));
        }
        pts.sort();
        Ok(MomentumGrid { points: pts, symmetric: true })
    }

    /// Builds a grid from arbitrary nonzero points without the negation invariant.
    pub fn waived(points: &[Rational64]) -> Result<Self> {
        let mut pts = points.iter().map(|&p| Momentum::new(p)).collect::<Result<Vec<_>>>()?;
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            return Err(CoreError::InvalidGrid("empty grid".into()));
        }
        let symmetric = pts.iter().all(|&p| pts.contains(&-p));
        Ok(MomentumGrid { points: pts, symmetric })
    }

    /// Accepts any listing; the result is symmetric iff the listing is closed
    /// under negation or consists of positive values only.
    pub fn from_listing(values: &[Rational64]) -> Result<Self> {
        if values.iter().all(|v| v.is_positive()) {
            return Self::symmetric(values);
        }
        let g = Self::waived(values)?;
        if !g.symmetric {
            return Err(CoreError::InvalidGrid("grid is not closed under negation".into()));
        }
        Ok(g)
    }

    pub fn ints(positives: &[i64]) -> Self {
        let v: Vec<Rational64> = positives.iter().map(|&p| Rational64::from_integer(p)).collect();
        Self::symmetric(&v).expect("valid integer grid")
    }

    pub fn points(&self) -> &[Momentum] {
        &self.points
    }

    pub fn positives(&self) -> impl Iterator<Item = Momentum> + '_ {
        self.points.iter().copied().filter(|p| p.is_positive())
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains(&self, k: Momentum) -> bool {
        self.points.binary_search(&k).is_ok()
    }

    pub fn require(&self, k: Momentum) -> Result<()> {
        if self.contains(k) {
            Ok(())
        } else {
            Err(CoreError::OffGrid(k.to_string()))
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Momentum, Momentum)> + '_ {
        self.points.iter().flat_map(move |&a| self.points.iter().map(move |&b| (a, b)))
    }

    pub fn triples(&self) -> impl Iterator<Item = (Momentum, Momentum, Momentum)> + '_ {
        self.pairs().flat_map(move |(a, b)| self.points.iter().map(move |&c| (a, b, c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_rejected() {
        assert_eq!(Momentum::new(Rational64::zero()), Err(CoreError::ZeroMomentum));
        assert!(MomentumGrid::symmetric(&[Rational64::zero()]).is_err());
    }

    #[test]
    fn symmetric_grid_is_closed_under_negation() {
        let g = MomentumGrid::ints(&[5, 9]);
        assert_eq!(g.len(), 4);
        assert!(g.is_symmetric());
        for &k in g.points() {
            assert!(g.contains(-k));
        }
        assert_eq!(g.points()[0], Momentum::int(-9));
    }

    #[test]
    fn waived_grid_reports_asymmetry() {
        let g = MomentumGrid::waived(&[
            Rational64::from_integer(1),
            Rational64::from_integer(2),
            Rational64::from_integer(-1),
        ])
        .unwrap();
        assert!(!g.is_symmetric());
        assert!(MomentumGrid::from_listing(&[Rational64::from_integer(1), Rational64::from_integer(-2)]).is_err());
    }

    #[test]
    fn parse_and_power() {
        let k = Momentum::parse("-3/2").unwrap();
        assert_eq!(k.sign(), -1);
        assert_eq!(k.power(2), Scalar::from_ratio(9, 4));
        assert!(Momentum::parse("0").is_err());
    }
}
