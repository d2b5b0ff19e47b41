//! Evaluation of products written in compact tensor-leg notation, such as
//! `a†₂(k₂) S₁₂(k₁,k₂) a₁(k₁)`.
//!
//! Factors are multiplied left to right as algebra elements. On each leg the
//! column slot of a factor is summed against the row slot of the next factor
//! on that leg. The result has free slots ordered
//! `(leg 0 row, leg 0 col, leg 1 row, leg 1 col, ...)`, skipping the slots a
//! leg does not expose.

use std::sync::Arc;

use crate::matrix::CMatrix;
use crate::poly::{Letter, NCPoly};

pub enum Factor {
    /// An algebra element on one leg with free slots `[row?, col?]`.
    Op { leg: usize, poly: NCPoly, row: bool, col: bool },
    /// A numeric `N²×N²` matrix whose first tensor factor acts on `first`.
    Matrix2 { first: usize, second: usize, m: Arc<CMatrix> },
    /// A numeric `N×N` matrix on one leg.
    Matrix1 { leg: usize, m: CMatrix },
}

impl Factor {
    pub fn letter(n: usize, leg: usize, letter: Letter) -> Factor {
        Factor::Op { leg, poly: NCPoly::letter(n, letter), row: letter.kind.has_row(), col: letter.kind.has_col() }
    }

    /// Wraps a polynomial with one free slot (column vector or row vector) or two (matrix).
    pub fn op(leg: usize, poly: NCPoly, row: bool, col: bool) -> Factor {
        assert_eq!(poly.nfree(), row as usize + col as usize, "operator slot count");
        Factor::Op { leg, poly, row, col }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Role {
    Row(usize),
    Col(usize),
}

/// Multiplies the factors and contracts along legs.
/// Panics when a leg would need an outer product of two open chains.
pub fn leg_product(n: usize, nlegs: usize, factors: Vec<Factor>) -> NCPoly {
    let mut acc = NCPoly::one(n);
    let mut roles: Vec<Role> = Vec::new();
    let mut started = vec![false; nlegs];
    for f in factors {
        let (poly, slots) = match f {
            Factor::Op { leg, poly, row, col } => {
                let mut s = Vec::new();
                if row {
                    s.push(Role::Row(leg));
                }
                if col {
                    s.push(Role::Col(leg));
                }
                (poly, s)
            }
            Factor::Matrix2 { first, second, m } => (
                NCPoly::from_two_leg_matrix(n, &m),
                vec![Role::Row(first), Role::Row(second), Role::Col(first), Role::Col(second)],
            ),
            Factor::Matrix1 { leg, m } => (NCPoly::from_matrix(n, &m), vec![Role::Row(leg), Role::Col(leg)]),
        };
        let mut pairs = Vec::new();
        let mut new_roles = Vec::new();
        let mut consumed = Vec::new();
        for (j, role) in slots.iter().enumerate() {
            match *role {
                Role::Row(leg) => {
                    let open = roles.iter().position(|r| *r == Role::Col(leg));
                    match open {
                        Some(p) => {
                            pairs.push((p, j));
                            consumed.push(p);
                        }
                        None if !started[leg] => new_roles.push(Role::Row(leg)),
                        None => panic!("leg {leg} is closed; cannot start a second chain"),
                    }
                }
                Role::Col(leg) => {
                    let dangling =
                        roles.iter().enumerate().any(|(p, r)| *r == Role::Col(leg) && !consumed.contains(&p));
                    assert!(!dangling, "leg {leg} already has an open column");
                    new_roles.push(Role::Col(leg));
                }
            }
        }
        for role in &slots {
            let (Role::Row(leg) | Role::Col(leg)) = *role;
            started[leg] = true;
        }
        acc = acc.mul_contract(&poly, &pairs);
        roles = roles.into_iter().enumerate().filter(|(p, _)| !consumed.contains(p)).map(|(_, r)| r).collect();
        roles.extend(new_roles);
    }
    let mut perm = Vec::new();
    for leg in 0..nlegs {
        for want in [Role::Row(leg), Role::Col(leg)] {
            if let Some(p) = roles.iter().position(|r| *r == want) {
                perm.push(p);
            }
        }
    }
    acc.permute_free(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::permutation_operator;
    use crate::momentum::Momentum;
    use crate::poly::LetterKind;
    use crate::scalar::Scalar;

    #[test]
    fn creation_swap_annihilation() {
        // a†₂ P₁₂ a₁ has components (i, j) ↦ δ_ij Σ_y a†_y a_y.
        let n = 2;
        let ad = Letter::new(LetterKind::Create, Momentum::int(2));
        let a = Letter::new(LetterKind::Annihilate, Momentum::int(1));
        let p = leg_product(
            n,
            2,
            vec![
                Factor::letter(n, 1, ad),
                Factor::Matrix2 { first: 0, second: 1, m: Arc::new(permutation_operator(n)) },
                Factor::letter(n, 0, a),
            ],
        );
        assert_eq!(p.nfree(), 2);
        let t = &p.terms()[&vec![ad, a]];
        assert_eq!(t.len(), 4);
        assert_eq!(t.get(&[0, 0, 1, 1]), Some(&Scalar::one()));
        assert_eq!(t.get(&[0, 1, 0, 1]), None);
    }

    #[test]
    fn single_leg_chain_is_matrix_product() {
        let n = 2;
        let l = Letter::new(LetterKind::Dress, Momentum::int(1));
        let li = Letter::new(LetterKind::DressInv, Momentum::int(1));
        let m = CMatrix::from_fn(2, 2, |i, j| Scalar::from_int((i + 2 * j) as i64));
        let p = leg_product(
            n,
            1,
            vec![Factor::letter(n, 0, l), Factor::Matrix1 { leg: 0, m: m.clone() }, Factor::letter(n, 0, li)],
        );
        // Component (a, b) = Σ L_ax m_xy Li_yb.
        let t = &p.terms()[&vec![l, li]];
        assert_eq!(t.get(&[0, 1, 0, 1, 1, 1]), Some(m.get(1, 1)));
        assert_eq!(t.get(&[0, 1, 0, 0, 0, 1]), None);
    }
}
