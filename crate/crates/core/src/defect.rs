//! Reflection and transmission amplitude families `R(k)`, `T(k)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::matrix::CMatrix;
use crate::momentum::{Momentum, MomentumGrid};
use crate::scalar::{rational_sqrt, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DefectFamily {
    /// `T = 𝕀`, `R = 0`.
    Free,
    /// `T = 0` and a constant Hermitian involution `R`: `𝕀`, or the
    /// antidiagonal flip when `flip` is set.
    Mirror { flip: bool },
    /// `N = 2`: `T = c·diag(1,−1)`, `R = s·[[0,1],[1,0]]` with `c² + s² = 1`.
    Anticommuting { c: Rational64, s: Rational64 },
    /// `T(k) = (k/w)𝕀`, `R(k) = (i η sgn k / w)𝕀`, `w = √(k² + η²)`.
    ScalarContact { eta: Rational64 },
    /// `T(k) = c·sgn(k)𝕀`, `R(k) = s(x + i y sgn k)𝕀` with `c² + s² = 1`, `x² + y² = 1`.
    ScalarPhase { c: Rational64, s: Rational64, x: Rational64, y: Rational64 },
    /// `T = R = 𝕀`: violates completeness.
    Tampered,
}

impl DefectFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DefectFamily::Free => "free",
            DefectFamily::Mirror { .. } => "mirror",
            DefectFamily::Anticommuting { .. } => "anticommuting",
            DefectFamily::ScalarContact { .. } => "scalar_contact",
            DefectFamily::ScalarPhase { .. } => "scalar_phase",
            DefectFamily::Tampered => "tampered",
        }
    }

    /// Whether the family is declared to satisfy the pointwise constraints.
    pub fn is_valid_family(&self) -> bool {
        !matches!(self, DefectFamily::Tampered)
    }

    pub fn is_scalar(&self) -> bool {
        matches!(
            self,
            DefectFamily::Free
                | DefectFamily::ScalarContact { .. }
                | DefectFamily::ScalarPhase { .. }
                | DefectFamily::Tampered
        ) || matches!(self, DefectFamily::Mirror { flip: false })
    }
}

impl fmt::Display for DefectFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefectFamily::Mirror { flip: true } => write!(f, "mirror(flip)"),
            DefectFamily::Anticommuting { c, s } => write!(f, "anticommuting(c={c}, s={s})"),
            DefectFamily::ScalarContact { eta } => write!(f, "scalar_contact(eta={eta})"),
            DefectFamily::ScalarPhase { c, s, x, y } => write!(f, "scalar_phase(c={c}, s={s}, x={x}, y={y})"),
            other => f.write_str(other.name()),
        }
    }
}

/// A defect family bound to a dimension; evaluation is pure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DefectPair {
    n: usize,
    family: DefectFamily,
}

fn r64(x: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

fn unit_circle(a: Rational64, b: Rational64) -> bool {
    a * a + b * b == Rational64::one()
}

impl DefectPair {
    /// Checks family preconditions against every grid point.
    pub fn new(family: DefectFamily, n: usize, grid: &MomentumGrid) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::InvalidParameter("N must be at least 1".into()));
        }
        match family {
            DefectFamily::Anticommuting { c, s } => {
                if n != 2 {
                    return Err(CoreError::Precondition(format!("anticommuting family needs N = 2, got {n}")));
                }
                if !unit_circle(c, s) {
                    return Err(CoreError::Constraint(format!("c² + s² = {} ≠ 1", c * c + s * s)));
                }
            }
            DefectFamily::Mirror { flip: true } if n < 2 => {
                return Err(CoreError::Precondition("flip reflection needs N ≥ 2".into()));
            }
            DefectFamily::ScalarContact { eta } => {
                for &k in grid.points() {
                    let w2 = r64(k.value() * k.value() + eta * eta);
                    if rational_sqrt(&w2).is_none() {
                        return Err(CoreError::Precondition(format!(
                            "k² + η² is not a perfect square at momentum {k} (η = {eta})"
                        )));
                    }
                }
            }
            DefectFamily::ScalarPhase { c, s, x, y } if !unit_circle(c, s) || !unit_circle(x, y) => {
                return Err(CoreError::Constraint("scalar phase parameters must lie on the unit circle".into()));
            }
            _ => {}
        }
        Ok(DefectPair { n, family })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> DefectFamily {
        self.family
    }

    /// Transmission amplitude `T(k)`.
    pub fn t(&self, k: Momentum) -> CMatrix {
        let n = self.n;
        let sgn = Scalar::from_int(k.sign());
        match self.family {
            DefectFamily::Free | DefectFamily::Tampered => CMatrix::identity(n),
            DefectFamily::Mirror { .. } => CMatrix::zeros(n, n),
            DefectFamily::Anticommuting { c, .. } => {
                let c = Scalar::from_rational64(c);
                CMatrix::from_fn(2, 2, |i, j| match (i, j) {
                    (0, 0) => c.clone(),
                    (1, 1) => -&c,
                    _ => Scalar::zero(),
                })
            }
            DefectFamily::ScalarContact { eta } => {
                let w = self.contact_width(k, eta);
                CMatrix::identity(n).scale(&Scalar::real(r64(k.value()) / w))
            }
            DefectFamily::ScalarPhase { c, .. } => CMatrix::identity(n).scale(&(&Scalar::from_rational64(c) * &sgn)),
        }
    }

    /// Reflection amplitude `R(k)`.
    pub fn r(&self, k: Momentum) -> CMatrix {
        let n = self.n;
        let sgn = Scalar::from_int(k.sign());
        match self.family {
            DefectFamily::Free => CMatrix::zeros(n, n),
            DefectFamily::Tampered | DefectFamily::Mirror { flip: false } => CMatrix::identity(n),
            DefectFamily::Mirror { flip: true } => {
                CMatrix::from_fn(n, n, |i, j| if i + j == n - 1 { Scalar::one() } else { Scalar::zero() })
            }
            DefectFamily::Anticommuting { s, .. } => {
                let s = Scalar::from_rational64(s);
                CMatrix::from_fn(2, 2, |i, j| if i != j { s.clone() } else { Scalar::zero() })
            }
            DefectFamily::ScalarContact { eta } => {
                let w = self.contact_width(k, eta);
                let amp =
                    Scalar::from_parts(BigRational::zero(), r64(eta) * BigRational::from_integer(k.sign().into()) / w);
                CMatrix::identity(n).scale(&amp)
            }
            DefectFamily::ScalarPhase { s, x, y, .. } => {
                let phase = &Scalar::from_rational64(x) + &(&(&Scalar::from_rational64(y) * &sgn) * &Scalar::i());
                CMatrix::identity(n).scale(&(&Scalar::from_rational64(s) * &phase))
            }
        }
    }

    fn contact_width(&self, k: Momentum, eta: Rational64) -> BigRational {
        rational_sqrt(&r64(k.value() * k.value() + eta * eta))
            .unwrap_or_else(|| panic!("momentum {k} violates the Pythagorean precondition"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn scalar_contact_values() {
        let grid = MomentumGrid::ints(&[5, 9]);
        let d = DefectPair::new(DefectFamily::ScalarContact { eta: q(12, 1) }, 2, &grid).unwrap();
        assert_eq!(d.t(Momentum::int(9)), CMatrix::identity(2).scale(&Scalar::from_ratio(3, 5)));
        let r9 = d.r(Momentum::int(9));
        assert_eq!(r9.get(0, 0), &(&Scalar::from_ratio(4, 5) * &Scalar::i()));
        let t5 = d.t(Momentum::int(5));
        assert_eq!(t5.get(1, 1), &Scalar::from_ratio(5, 13));
        assert_eq!(d.t(Momentum::int(-5)).get(0, 0), &Scalar::from_ratio(-5, 13));
    }

    #[test]
    fn scalar_contact_rejects_non_pythagorean_grid() {
        let grid = MomentumGrid::ints(&[5, 7]);
        let err = DefectPair::new(DefectFamily::ScalarContact { eta: q(12, 1) }, 2, &grid).unwrap_err();
        assert!(err.to_string().contains("momentum -7") || err.to_string().contains("momentum 7"));
    }

    #[test]
    fn anticommuting_constraints() {
        let grid = MomentumGrid::ints(&[1, 2]);
        assert!(DefectPair::new(DefectFamily::Anticommuting { c: q(3, 5), s: q(4, 5) }, 2, &grid).is_ok());
        assert!(matches!(
            DefectPair::new(DefectFamily::Anticommuting { c: q(1, 2), s: q(1, 2) }, 2, &grid),
            Err(CoreError::Constraint(_))
        ));
        assert!(DefectPair::new(DefectFamily::Anticommuting { c: q(3, 5), s: q(4, 5) }, 3, &grid).is_err());
    }

    #[test]
    fn flip_mirror_is_antidiagonal_involution() {
        let grid = MomentumGrid::ints(&[1]);
        let d = DefectPair::new(DefectFamily::Mirror { flip: true }, 3, &grid).unwrap();
        let r = d.r(Momentum::int(1));
        assert_eq!(&r * &r, CMatrix::identity(3));
        assert_eq!(r.adjoint(), r);
        assert!(d.t(Momentum::int(1)).is_zero());
    }
}
