//! Exact Gaussian rationals.
//!
//! Values with small numerators live in a machine-word representation
//! `(re + i·im) / den`; anything that overflows is promoted to a pair of
//! big rationals and demoted again as soon as it fits.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CoreError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Canonical: `den > 0` and `gcd(re, im, den) == 1`.
    Small { re: i64, im: i64, den: i64 },
    /// Only used when the value has no `Small` representation.
    Big { re: BigRational, im: BigRational },
}

/// A complex number with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar(Repr);

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

fn from_i128(mut re: i128, mut im: i128, mut den: i128) -> Scalar {
    debug_assert!(den != 0);
    if den < 0 {
        re = -re;
        im = -im;
        den = -den;
    }
    if re == 0 && im == 0 {
        return Scalar::zero();
    }
    let g = re.gcd(&im).gcd(&den);
    if g > 1 {
        re /= g;
        im /= g;
        den /= g;
    }
    match (i64::try_from(re), i64::try_from(im), i64::try_from(den)) {
        (Ok(re), Ok(im), Ok(den)) => Scalar(Repr::Small { re, im, den }),
        _ => {
            let d = BigInt::from(den);
            Scalar(Repr::Big {
                re: BigRational::new(BigInt::from(re), d.clone()),
                im: BigRational::new(BigInt::from(im), d),
            })
        }
    }
}

fn demote(re: BigRational, im: BigRational) -> Scalar {
    let l = re.denom().lcm(im.denom());
    let rn = re.numer() * (&l / re.denom());
    let inn = im.numer() * (&l / im.denom());
    match (rn.to_i128(), inn.to_i128(), l.to_i128()) {
        (Some(a), Some(b), Some(d)) => {
            let s = from_i128(a, b, d);
            if let Repr::Small { .. } = s.0 {
                return s;
            }
            Scalar(Repr::Big { re, im })
        }
        _ => Scalar(Repr::Big { re, im }),
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small { re: 0, im: 0, den: 1 })
    }

    pub fn one() -> Self {
        Scalar(Repr::Small { re: 1, im: 0, den: 1 })
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar(Repr::Small { re: 0, im: 1, den: 1 })
    }

    pub fn from_int(n: i64) -> Self {
        from_i128(n as i128, 0, 1)
    }

    /// `num / den` as a real scalar. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        from_i128(num as i128, 0, den as i128)
    }

    pub fn from_rational64(r: Rational64) -> Self {
        from_i128(*r.numer() as i128, 0, *r.denom() as i128)
    }

    pub fn from_parts(re: BigRational, im: BigRational) -> Self {
        demote(re, im)
    }

    pub fn real(re: BigRational) -> Self {
        demote(re, BigRational::zero())
    }

    pub fn re(&self) -> BigRational {
        self.to_big().0
    }

    pub fn im(&self) -> BigRational {
        self.to_big().1
    }

    fn to_big(&self) -> (BigRational, BigRational) {
        match &self.0 {
            Repr::Small { re, im, den } => (
                BigRational::new(BigInt::from(*re), BigInt::from(*den)),
                BigRational::new(BigInt::from(*im), BigInt::from(*den)),
            ),
            Repr::Big { re, im } => (re.clone(), im.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { re: 0, im: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { re: 1, im: 0, den: 1 })
    }

    pub fn is_real(&self) -> bool {
        match &self.0 {
            Repr::Small { im, .. } => *im == 0,
            Repr::Big { im, .. } => im.is_zero(),
        }
    }

    pub fn conj(&self) -> Self {
        match &self.0 {
            Repr::Small { re, im, den } => from_i128(*re as i128, -(*im as i128), *den as i128),
            Repr::Big { re, im } => Scalar(Repr::Big { re: re.clone(), im: -im }),
        }
    }

    /// Squared modulus `re² + im²`, as a real scalar.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Repr::Small { re, im, den } = self.0 {
            let (a, b, d) = (re as i128, im as i128, den as i128);
            if let Some(n2) = a.checked_mul(a).and_then(|x| b.checked_mul(b).and_then(|y| x.checked_add(y))) {
                if let (Some(x), Some(y)) = (d.checked_mul(a), d.checked_mul(-b)) {
                    return Some(from_i128(x, y, n2));
                }
            }
        }
        let (re, im) = self.to_big();
        let n2 = &re * &re + &im * &im;
        Some(demote(&re / &n2, -(&im / &n2)))
    }

    /// `self^e` for a nonnegative exponent.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_ref(&self, rhs: &Scalar) -> Scalar {
        if let (Repr::Small { re: a, im: b, den: d }, Repr::Small { re: c, im: e, den: f }) = (&self.0, &rhs.0) {
            if d == f {
                return from_i128(*a as i128 + *c as i128, *b as i128 + *e as i128, *d as i128);
            }
            let (d, f) = (*d as i128, *f as i128);
            let g = d.gcd(&f);
            let (df, fd) = (f / g, d / g);
            let re =
                (*a as i128).checked_mul(df).and_then(|x| (*c as i128).checked_mul(fd).and_then(|y| x.checked_add(y)));
            let im =
                (*b as i128).checked_mul(df).and_then(|x| (*e as i128).checked_mul(fd).and_then(|y| x.checked_add(y)));
            if let (Some(re), Some(im), Some(den)) = (re, im, d.checked_mul(df)) {
                return from_i128(re, im, den);
            }
        }
        let (a, b) = self.to_big();
        let (c, d) = rhs.to_big();
        demote(a + c, b + d)
    }

    fn mul_ref(&self, rhs: &Scalar) -> Scalar {
        if let (Repr::Small { re: a, im: b, den: d }, Repr::Small { re: c, im: e, den: f }) = (&self.0, &rhs.0) {
            let (a, b, c, e) = (*a as i128, *b as i128, *c as i128, *e as i128);
            let den = (*d as i128) * (*f as i128);
            let re = (a * c).checked_sub(b * e);
            let im = (a * e).checked_add(b * c);
            if let (Some(re), Some(im)) = (re, im) {
                return from_i128(re, im, den);
            }
        }
        let (a, b) = self.to_big();
        let (c, d) = rhs.to_big();
        demote(&a * &c - &b * &d, &a * &d + &b * &c)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational64> for Scalar {
    fn from(r: Rational64) -> Self {
        Scalar::from_rational64(r)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::real(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(&-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.mul_ref(&rhs.inv().expect("division by zero scalar"))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small { re, im, den } => from_i128(-(*re as i128), -(*im as i128), *den as i128),
            Repr::Big { re, im } => Scalar(Repr::Big { re: -re, im: -im }),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(&-rhs);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = self.mul_ref(rhs);
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Prints `re`, `im i` or `re+im i` with rationals as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_big();
        match (re.is_zero(), im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&re)),
            (true, false) => write!(f, "{}i", fmt_rational(&im)),
            (false, false) => {
                let sign = if im.is_negative() { "-" } else { "+" };
                write!(f, "{}{}{}i", fmt_rational(&re), sign, fmt_rational(&im.abs()))
            }
        }
    }
}

/// Parses `"p/q"` or an integer, with an optional leading sign.
/// Decimal and exponent notation is rejected so no value is ever rounded.
pub fn parse_rational(text: &str) -> Result<BigRational, CoreError> {
    let t = text.trim();
    let bad = || CoreError::InvalidRational(text.to_string());
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let digits = |s: &str, signed: bool| {
        let body = if signed { s.strip_prefix(['-', '+']).unwrap_or(s) } else { s };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) || !digits(den, false) {
        return Err(bad());
    }
    let n: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// `parse_rational` narrowed to machine words.
pub fn parse_rational64(text: &str) -> Result<Rational64, CoreError> {
    let r = parse_rational(text)?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(CoreError::InvalidRational(text.to_string())),
    }
}

/// Integer square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_arithmetic() {
        let a = Scalar::from_parts(big(1, 2), big(1, 3));
        let b = Scalar::from_parts(big(-1, 2), big(2, 3));
        assert_eq!(&a + &b, Scalar::i());
        assert_eq!((&a * &a.inv().unwrap()), Scalar::one());
        assert_eq!(a.conj().conj(), a);
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let huge = Scalar::from_int(i64::MAX);
        let sq = &huge * &huge;
        assert!(matches!(sq.0, Repr::Big { .. }));
        let back = &sq / &huge;
        assert_eq!(back, huge);
        assert!(matches!(back.0, Repr::Small { .. }));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_ratio(3, 5).to_string(), "3/5");
        assert_eq!(Scalar::from_parts(big(0, 1), big(-12, 13)).to_string(), "-12/13i");
        assert_eq!(Scalar::from_parts(big(1, 1), big(-2, 1)).to_string(), "1-2i");
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/5").unwrap(), big(3, 5));
        assert_eq!(parse_rational("-12").unwrap(), big(-12, 1));
        assert!(parse_rational("0.1").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("3/-5").is_err());
    }

    #[test]
    fn perfect_square_roots() {
        assert_eq!(rational_sqrt(&big(169, 4)), Some(big(13, 2)));
        assert_eq!(rational_sqrt(&big(2, 1)), None);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (any::<i64>(), any::<i64>(), 1i64..i64::MAX).prop_map(|(a, b, d)| Scalar::from_parts(big(a, d), big(b, d)))
    }

    proptest! {
        #[test]
        fn field_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, Scalar::zero());
            prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
            }
        }

        #[test]
        fn small_and_big_paths_agree(a in arb_scalar(), b in arb_scalar()) {
            let (ar, ai) = a.to_big();
            let (br, bi) = b.to_big();
            let prod = Scalar::from_parts(&ar * &br - &ai * &bi, &ar * &bi + &ai * &br);
            prop_assert_eq!(&a * &b, prod);
            prop_assert_eq!(&a + &b, Scalar::from_parts(ar + br, ai + bi));
        }
    }
}
