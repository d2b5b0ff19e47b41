//! Dense matrices over exact Gaussian rationals and tensor-leg embeddings.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl CMatrix {
    /// Panics on a zero dimension.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        CMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(CoreError::Dimension("ragged or empty row list".into()));
        }
        Ok(CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data.iter().enumerate().map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn try_mul(&self, rhs: &CMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(CoreError::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, rhs: &CMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CoreError::Dimension(format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(CMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, rhs: &CMatrix) -> Result<Self> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &CMatrix) -> Result<Self> {
        self.zip(rhs, |a, b| a - b)
    }

    /// Kronecker product; `self` occupies the more significant index.
    pub fn kron(&self, rhs: &CMatrix) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) * rhs.get(i % rhs.rows, j % rhs.cols)
        })
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inv()?;
            for j in 0..n {
                a.data[col * n + j] *= &p;
                inv.data[col * n + j] *= &p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let da = a.get(col, j) * &f;
                    let di = inv.get(col, j) * &f;
                    a.data[r * n + j] -= &da;
                    inv.data[r * n + j] -= &di;
                }
            }
        }
        Some(inv)
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    /// Panics on a dimension mismatch; use `try_mul` for a checked product.
    fn mul(self, rhs: &'a CMatrix) -> CMatrix {
        self.try_mul(rhs).expect("matrix product dimensions")
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &'a CMatrix) -> CMatrix {
        self.try_add(rhs).expect("matrix sum dimensions")
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &'a CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("matrix difference dimensions")
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The swap `x ⊗ y ↦ y ⊗ x` on `C^n ⊗ C^n`.
pub fn permutation_operator(n: usize) -> CMatrix {
    CMatrix::from_fn(n * n, n * n, |i, j| {
        let (i1, i2) = (i / n, i % n);
        let (j1, j2) = (j / n, j % n);
        if i1 == j2 && i2 == j1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

fn digits(mut idx: usize, n: usize, legs: usize) -> Vec<usize> {
    let mut d = vec![0; legs];
    for slot in (0..legs).rev() {
        d[slot] = idx % n;
        idx /= n;
    }
    d
}

/// Places the two-leg operator `m` on legs `legs = (p, q)` (1-based) of an
/// `total_legs`-fold tensor power of `C^n`, identity elsewhere. The first
/// tensor factor of `m` acts on leg `p`; `p > q` is allowed and realises the
/// flipped placement.
pub fn kron_embed(m: &CMatrix, legs: (usize, usize), total_legs: usize, n: usize) -> Result<CMatrix> {
    let (p, q) = legs;
    if m.rows != n * n || m.cols != n * n {
        return Err(CoreError::Dimension(format!("expected {0}x{0} operator, got {1}x{2}", n * n, m.rows, m.cols)));
    }
    if p == q || p == 0 || q == 0 || p > total_legs || q > total_legs {
        return Err(CoreError::Dimension(format!("legs ({p},{q}) invalid for {total_legs} legs")));
    }
    let (p, q) = (p - 1, q - 1);
    let dim = n.pow(total_legs as u32);
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        let di = digits(i, n, total_legs);
        for (pj, qj) in (0..n).flat_map(|a| (0..n).map(move |b| (a, b))) {
            let mut dj = di.clone();
            dj[p] = pj;
            dj[q] = qj;
            let v = m.get(di[p] * n + di[q], pj * n + qj);
            if v.is_zero() {
                continue;
            }
            let j = dj.iter().fold(0, |acc, &d| acc * n + d);
            out.data[i * dim + j] = v.clone();
        }
    }
    Ok(out)
}

/// Places the one-leg operator `m` on leg `leg` (1-based).
pub fn embed_single(m: &CMatrix, leg: usize, total_legs: usize, n: usize) -> Result<CMatrix> {
    if m.rows != n || m.cols != n {
        return Err(CoreError::Dimension(format!("expected {n}x{n} operator")));
    }
    if leg == 0 || leg > total_legs {
        return Err(CoreError::Dimension(format!("leg {leg} invalid for {total_legs} legs")));
    }
    let before = CMatrix::identity(n.pow((leg - 1) as u32));
    let after = CMatrix::identity(n.pow((total_legs - leg) as u32));
    Ok(before.kron(m).kron(&after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn permutation_small_cases() {
        assert_eq!(permutation_operator(1), CMatrix::identity(1));
        let p2 = permutation_operator(2);
        assert_eq!(p2.get(1, 2), &Scalar::one());
        assert_eq!(p2.get(2, 1), &Scalar::one());
        assert_eq!(p2.get(0, 0), &Scalar::one());
        let p3 = permutation_operator(3);
        assert_eq!(&p3 * &p3, CMatrix::identity(9));
    }

    #[test]
    fn embedding_identity_and_self() {
        let id = CMatrix::identity(4);
        assert_eq!(kron_embed(&id, (1, 2), 3, 2).unwrap(), CMatrix::identity(8));
        let p = permutation_operator(2);
        assert_eq!(kron_embed(&p, (1, 2), 2, 2).unwrap(), p);
        assert_eq!(kron_embed(&p, (2, 1), 2, 2).unwrap(), p);
    }

    #[test]
    fn embedded_swap_of_outer_legs() {
        // P on legs (1,3) maps e_a ⊗ e_b ⊗ e_c to e_c ⊗ e_b ⊗ e_a.
        let n = 2;
        let p13 = kron_embed(&permutation_operator(n), (1, 3), 3, n).unwrap();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let src = (a * n + b) * n + c;
                    let dst = (c * n + b) * n + a;
                    assert_eq!(p13.get(dst, src), &Scalar::one());
                }
            }
        }
        assert_eq!(p13.nonzero_count(), 8);
    }

    #[test]
    fn flipped_placement_is_conjugation_by_swap() {
        let n = 2;
        let m = CMatrix::from_fn(4, 4, |i, j| Scalar::from_int((i * 4 + j) as i64));
        let p = permutation_operator(n);
        let flipped = kron_embed(&m, (2, 1), 2, n).unwrap();
        assert_eq!(flipped, &(&p * &m) * &p);
    }

    #[test]
    fn embed_rejects_bad_input() {
        let m = CMatrix::identity(3);
        assert!(kron_embed(&m, (1, 2), 2, 2).is_err());
        assert!(kron_embed(&CMatrix::identity(4), (1, 1), 2, 2).is_err());
        assert!(kron_embed(&CMatrix::identity(4), (1, 4), 3, 2).is_err());
    }

    #[test]
    fn inverse_and_singular() {
        let m =
            CMatrix::from_rows(vec![vec![Scalar::one(), Scalar::i()], vec![Scalar::from_int(2), Scalar::from_int(3)]])
                .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, CMatrix::identity(2));
        let sing =
            CMatrix::from_rows(vec![vec![Scalar::one(), Scalar::one()], vec![Scalar::one(), Scalar::one()]]).unwrap();
        assert!(sing.inverse().is_none());
    }

    fn arb_matrix(r: usize, c: usize) -> impl Strategy<Value = CMatrix> {
        proptest::collection::vec((-5i64..5, -5i64..5, 1i64..4), r * c).prop_map(move |v| {
            let mut it = v.into_iter();
            CMatrix::from_fn(r, c, |_, _| {
                let (a, b, d) = it.next().unwrap();
                &Scalar::from_ratio(a, d) + &(&Scalar::from_ratio(b, d) * &Scalar::i())
            })
        })
    }

    proptest! {
        #[test]
        fn adjoint_reverses_products(a in arb_matrix(2, 3), b in arb_matrix(3, 2)) {
            prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }

        #[test]
        fn adjoint_commutes_with_kron(a in arb_matrix(2, 2), b in arb_matrix(2, 3)) {
            prop_assert_eq!(a.kron(&b).adjoint(), a.adjoint().kron(&b.adjoint()));
        }

        #[test]
        fn embedding_is_multiplicative(a in arb_matrix(4, 4), b in arb_matrix(4, 4)) {
            let ea = kron_embed(&a, (1, 3), 3, 2).unwrap();
            let eb = kron_embed(&b, (1, 3), 3, 2).unwrap();
            prop_assert_eq!(&ea * &eb, kron_embed(&(&a * &b), (1, 3), 3, 2).unwrap());
        }
    }
}
