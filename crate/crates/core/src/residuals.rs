//! Residuals `LHS − RHS` of the numeric matrix equations on S, R and T.
//! Every function returns the exact difference; zero means the equation holds.

use std::str::FromStr;

use crate::defect::DefectPair;
use crate::error::CoreError;
use crate::matrix::{embed_single, kron_embed, CMatrix};
use crate::momentum::Momentum;
use crate::smatrix::SMatrixFn;

fn on3(s: &SMatrixFn, a: Momentum, b: Momentum, legs: (usize, usize)) -> CMatrix {
    kron_embed(&s.eval(a, b), legs, 3, s.n()).expect("S-matrix dimensions")
}

/// `S` placed with its first factor on leg 1 of two.
fn s12(s: &SMatrixFn, a: Momentum, b: Momentum) -> CMatrix {
    (*s.eval(a, b)).clone()
}

/// `S` placed with its first factor on leg 2 of two.
fn s21(s: &SMatrixFn, a: Momentum, b: Momentum) -> CMatrix {
    kron_embed(&s.eval(a, b), (2, 1), 2, s.n()).expect("S-matrix dimensions")
}

fn leg(m: &CMatrix, which: usize, n: usize) -> CMatrix {
    embed_single(m, which, 2, n).expect("defect dimensions")
}

fn chain(ms: &[&CMatrix]) -> CMatrix {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| &acc * *m)
}

/// `S12(k1,k2) S13(k1,k3) S23(k2,k3) − S23(k2,k3) S13(k1,k3) S12(k1,k2)`.
pub fn residual_ybe(s: &SMatrixFn, k1: Momentum, k2: Momentum, k3: Momentum) -> CMatrix {
    let a = on3(s, k1, k2, (1, 2));
    let b = on3(s, k1, k3, (1, 3));
    let c = on3(s, k2, k3, (2, 3));
    &chain(&[&a, &b, &c]) - &chain(&[&c, &b, &a])
}

/// `S12(k1,k2) S21(k2,k1) − 𝕀⊗𝕀`.
pub fn residual_unitarity(s: &SMatrixFn, k1: Momentum, k2: Momentum) -> CMatrix {
    let n = s.n();
    &(&s12(s, k1, k2) * &s21(s, k2, k1)) - &CMatrix::identity(n * n)
}

/// Boundary YBE:
/// `S12(k1,k2) R1(k1) S21(k2,−k1) R2(k2) − R2(k2) S12(k1,−k2) R1(k1) S21(−k2,−k1)`.
pub fn residual_bybe(s: &SMatrixFn, d: &DefectPair, k1: Momentum, k2: Momentum) -> CMatrix {
    let n = s.n();
    let r1 = leg(&d.r(k1), 1, n);
    let r2 = leg(&d.r(k2), 2, n);
    let lhs = chain(&[&s12(s, k1, k2), &r1, &s21(s, k2, -k1), &r2]);
    let rhs = chain(&[&r2, &s12(s, k1, -k2), &r1, &s21(s, -k2, -k1)]);
    &lhs - &rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MixedKind {
    Transmission,
    ReflectionTransmission,
}

impl FromStr for MixedKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s {
            "transmission" | "t" => Ok(MixedKind::Transmission),
            "reflection-transmission" | "rt" => Ok(MixedKind::ReflectionTransmission),
            other => Err(CoreError::InvalidParameter(format!("unknown mixed-equation selector `{other}`"))),
        }
    }
}

/// Transmission YBE
/// `S12(k1,k2) T1(k1) S21(k2,k1) T2(k2) − T2(k2) S12(k1,k2) T1(k1) S21(k2,k1)`
/// or reflection-transmission YBE
/// `S12(k1,k2) T1(k1) S21(k2,k1) R2(k2) − R2(k2) S12(k1,−k2) T1(k1) S21(−k2,k1)`.
pub fn residual_mixed(s: &SMatrixFn, d: &DefectPair, k1: Momentum, k2: Momentum, which: MixedKind) -> CMatrix {
    let n = s.n();
    let t1 = leg(&d.t(k1), 1, n);
    match which {
        MixedKind::Transmission => {
            let t2 = leg(&d.t(k2), 2, n);
            let lhs = chain(&[&s12(s, k1, k2), &t1, &s21(s, k2, k1), &t2]);
            let rhs = chain(&[&t2, &s12(s, k1, k2), &t1, &s21(s, k2, k1)]);
            &lhs - &rhs
        }
        MixedKind::ReflectionTransmission => {
            let r2 = leg(&d.r(k2), 2, n);
            let lhs = chain(&[&s12(s, k1, k2), &t1, &s21(s, k2, k1), &r2]);
            let rhs = chain(&[&r2, &s12(s, k1, -k2), &t1, &s21(s, -k2, k1)]);
            &lhs - &rhs
        }
    }
}

/// Pointwise constraints on the defect amplitudes at one momentum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectResiduals {
    /// `R†(k) − R(−k)`.
    pub reflection_hermiticity: CMatrix,
    /// `T†(k) − T(k)`.
    pub transmission_hermiticity: CMatrix,
    /// `T(k)T(k) + R(k)R(−k) − 𝕀`.
    pub completeness: CMatrix,
    /// `T(k)R(k) + R(k)T(−k)`.
    pub anticommutation: CMatrix,
}

impl DefectResiduals {
    pub fn is_zero(&self) -> bool {
        self.reflection_hermiticity.is_zero()
            && self.transmission_hermiticity.is_zero()
            && self.completeness.is_zero()
            && self.anticommutation.is_zero()
    }

    /// Hermiticity residuals of `R` and `T` side by side.
    pub fn hermiticity_is_zero(&self) -> bool {
        self.reflection_hermiticity.is_zero() && self.transmission_hermiticity.is_zero()
    }
}

pub fn residual_defect(d: &DefectPair, k: Momentum) -> DefectResiduals {
    let (t, r) = (d.t(k), d.r(k));
    let (tm, rm) = (d.t(-k), d.r(-k));
    DefectResiduals {
        reflection_hermiticity: &r.adjoint() - &rm,
        transmission_hermiticity: &t.adjoint() - &t,
        completeness: &(&(&t * &t) + &(&r * &rm)) - &CMatrix::identity(d.n()),
        anticommutation: &(&t * &r) + &(&r * &tm),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect::DefectFamily;
    use crate::momentum::MomentumGrid;
    use crate::scalar::Scalar;
    use crate::smatrix::SMatrixFamily;
    use num_rational::Rational64;

    fn one() -> Rational64 {
        Rational64::from_integer(1)
    }

    #[test]
    fn rational_family_satisfies_ybe_and_unitarity() {
        let s = SMatrixFn::new(SMatrixFamily::Rational { g: one() }, 2).unwrap();
        let k = |n| Momentum::int(n);
        assert!(residual_ybe(&s, k(1), k(2), k(3)).is_zero());
        assert!(residual_unitarity(&s, k(1), k(2)).is_zero());
        assert!(residual_unitarity(&s, k(2), k(1)).is_zero());
    }

    #[test]
    fn flipped_family_breaks_both() {
        let s = SMatrixFn::new(SMatrixFamily::RationalFlipped { g: one() }, 2).unwrap();
        let k = |n| Momentum::int(n);
        assert!(!residual_ybe(&s, k(1), k(2), k(3)).is_zero());
        assert!(!residual_unitarity(&s, k(1), k(2)).is_zero());
    }

    #[test]
    fn conjugate_denominator_is_not_a_negative_control() {
        let s = SMatrixFn::new(SMatrixFamily::RationalConjugateDenominator { g: one() }, 2).unwrap();
        let k = |n| Momentum::int(n);
        assert!(residual_ybe(&s, k(1), k(2), k(3)).is_zero());
        assert!(residual_unitarity(&s, k(1), k(2)).is_zero());
    }

    #[test]
    fn defect_residual_examples() {
        let grid = MomentumGrid::ints(&[5, 9]);
        let contact =
            DefectPair::new(DefectFamily::ScalarContact { eta: Rational64::from_integer(12) }, 2, &grid).unwrap();
        assert!(residual_defect(&contact, Momentum::int(5)).is_zero());
        let tampered = DefectPair::new(DefectFamily::Tampered, 2, &grid).unwrap();
        let res = residual_defect(&tampered, Momentum::int(5));
        assert_eq!(res.completeness, CMatrix::identity(2));
        assert!(res.hermiticity_is_zero());
        let _ = Scalar::zero();
    }

    #[test]
    fn bybe_for_permutation_and_anticommuting() {
        let grid = MomentumGrid::ints(&[1, 2]);
        let s = SMatrixFn::new(SMatrixFamily::Permutation, 2).unwrap();
        let d = DefectPair::new(
            DefectFamily::Anticommuting { c: Rational64::new(3, 5), s: Rational64::new(4, 5) },
            2,
            &grid,
        )
        .unwrap();
        for (a, b) in grid.pairs() {
            assert!(residual_bybe(&s, &d, a, b).is_zero());
        }
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("rt".parse::<MixedKind>().unwrap(), MixedKind::ReflectionTransmission);
        assert!("bogus".parse::<MixedKind>().is_err());
    }
}
