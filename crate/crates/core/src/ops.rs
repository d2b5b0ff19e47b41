//! Adjoint, dressed transmission/reflection generators, the ρ substitution
//! and a seeded generator of random words.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::{DresserMode, ExprContext};
use crate::engine::nf;
use crate::error::{CoreError, Result};
use crate::legs::{leg_product, Factor};
use crate::momentum::Momentum;
use crate::poly::{Key, Letter, LetterKind, NCPoly, Tensor, Word};
use crate::scalar::Scalar;

fn adjoint_letter(l: Letter) -> Letter {
    use LetterKind::*;
    match l.kind {
        Create => Letter::new(Annihilate, l.momentum),
        Annihilate => Letter::new(Create, l.momentum),
        Dress => Letter::new(DressInv, l.momentum),
        DressInv => Letter::new(Dress, l.momentum),
        Transmission => l,
        Reflection => Letter::new(Reflection, -l.momentum),
    }
}

/// Conjugate-linear anti-automorphism: reverses words, maps each letter to
/// its adjoint with transposed slots, conjugates coefficients.
pub fn adjoint(p: &NCPoly) -> NCPoly {
    let nf = p.nfree();
    let mut out = NCPoly::zero(p.n(), nf);
    for (w, t) in p.terms() {
        let word: Word = w.iter().rev().map(|l| adjoint_letter(*l)).collect();
        let mut nt = Tensor::new();
        for (k, v) in t.iter() {
            let mut key = Key::from_slice(&k[..nf]);
            key.extend(k[nf..].iter().rev().copied());
            nt.add(key, &v.conj());
        }
        out.add_tensor(word, &nt, &Scalar::one());
    }
    out
}

/// Which defect generator a dresser expression stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DresserKind {
    Transmission,
    Reflection,
}

/// `t_ab(k)` or `r_ab(k)` with free slots `(a, b)`: dressed
/// `L(k) T(k) L⁻¹(k)` and `L(k) R(k) L⁻¹(−k)`, or a single letter in opaque mode.
pub fn dresser(ctx: &ExprContext, kind: DresserKind, k: Momentum) -> Result<NCPoly> {
    let n = ctx.n();
    ctx.grid().require(k)?;
    if kind == DresserKind::Reflection {
        ctx.grid().require(-k)?;
    }
    Ok(match (ctx.mode(), kind) {
        (DresserMode::Opaque, DresserKind::Transmission) => ctx.letter(LetterKind::Transmission, k),
        (DresserMode::Opaque, DresserKind::Reflection) => ctx.letter(LetterKind::Reflection, k),
        (DresserMode::Dressed, kind) => {
            let (m, back) = match kind {
                DresserKind::Transmission => (ctx.defect().t(k), k),
                DresserKind::Reflection => (ctx.defect().r(k), -k),
            };
            leg_product(
                n,
                1,
                vec![
                    Factor::letter(n, 0, Letter::new(LetterKind::Dress, k)),
                    Factor::Matrix1 { leg: 0, m },
                    Factor::letter(n, 0, Letter::new(LetterKind::DressInv, back)),
                ],
            )
        }
    })
}

/// `t(k) x(k) + r(k) x(−k)` for a column-type operator `x` with one free
/// row slot; `x_minus` is the operator at `−k`.
pub fn left_dress(ctx: &ExprContext, k: Momentum, x: &NCPoly, x_minus: &NCPoly) -> Result<NCPoly> {
    let n = ctx.n();
    let t = dresser(ctx, DresserKind::Transmission, k)?;
    let r = dresser(ctx, DresserKind::Reflection, k)?;
    let first = leg_product(n, 1, vec![Factor::op(0, t, true, true), Factor::op(0, x.clone(), true, false)]);
    let second = leg_product(n, 1, vec![Factor::op(0, r, true, true), Factor::op(0, x_minus.clone(), true, false)]);
    Ok(first.plus(&second))
}

/// `x(k) t(k) + x(−k) r(−k)` for a row-type operator `x` with one free column slot.
pub fn right_dress(ctx: &ExprContext, k: Momentum, x: &NCPoly, x_minus: &NCPoly) -> Result<NCPoly> {
    let n = ctx.n();
    let t = dresser(ctx, DresserKind::Transmission, k)?;
    let r = dresser(ctx, DresserKind::Reflection, -k)?;
    let first = leg_product(n, 1, vec![Factor::op(0, x.clone(), false, true), Factor::op(0, t, true, true)]);
    let second = leg_product(n, 1, vec![Factor::op(0, x_minus.clone(), false, true), Factor::op(0, r, true, true)]);
    Ok(first.plus(&second))
}

fn rho_letter(ctx: &ExprContext, l: Letter) -> Result<NCPoly> {
    let n = ctx.n();
    let k = l.momentum;
    match l.kind {
        LetterKind::Annihilate => left_dress(ctx, k, &ctx.letter(l.kind, k), &ctx.letter(l.kind, -k)),
        LetterKind::Create => right_dress(ctx, k, &ctx.letter(l.kind, k), &ctx.letter(l.kind, -k)),
        _ => Ok(NCPoly::letter(n, l)),
    }
}

/// Substitutes every letter by its image (a free slot per letter slot) and multiplies out.
pub fn substitute(p: &NCPoly, mut image: impl FnMut(Letter) -> Result<NCPoly>) -> Result<NCPoly> {
    let (n, nf) = (p.n(), p.nfree());
    let mut cache: BTreeMap<Letter, NCPoly> = BTreeMap::new();
    let mut out = NCPoly::zero(n, nf);
    for (w, t) in p.terms() {
        let slots: usize = w.iter().map(|l| l.slots()).sum();
        let mut acc = NCPoly::zero(n, nf + slots);
        acc.add_tensor(Vec::new(), t, &Scalar::one());
        for l in w {
            if !cache.contains_key(l) {
                let img = image(*l)?;
                if img.nfree() != l.slots() {
                    return Err(CoreError::Signature(img.nfree(), l.slots()));
                }
                cache.insert(*l, img);
            }
            let img = &cache[l];
            let pairs: Vec<(usize, usize)> = (0..l.slots()).map(|j| (nf + j, j)).collect();
            acc = acc.mul_contract(img, &pairs);
        }
        out.add_assign_scaled(&acc, &Scalar::one());
    }
    Ok(out)
}

/// The ρ map: `a(k) ↦ t(k)a(k) + r(k)a(−k)`, `a†(k) ↦ a†(k)t(k) + a†(−k)r(−k)`,
/// dresser letters fixed; result in normal form.
pub fn rho(p: &NCPoly, ctx: &ExprContext) -> Result<NCPoly> {
    for w in p.words() {
        for l in w {
            ctx.grid().require(l.momentum)?;
        }
    }
    let raw = substitute(p, |l| rho_letter(ctx, l))?;
    nf(&raw, ctx)
}

/// Reproducible random word of length `1..=max_len` over the context's
/// alphabet with random component indices and unit coefficient.
pub fn random_poly(seed: u64, max_len: usize, ctx: &ExprContext) -> Result<NCPoly> {
    let alphabet: &[LetterKind] = match ctx.mode() {
        DresserMode::Dressed => &[LetterKind::Create, LetterKind::Annihilate, LetterKind::Dress, LetterKind::DressInv],
        DresserMode::Opaque => {
            &[LetterKind::Create, LetterKind::Annihilate, LetterKind::Transmission, LetterKind::Reflection]
        }
    };
    random_poly_over(seed, max_len, ctx, alphabet)
}

pub fn random_poly_over(seed: u64, max_len: usize, ctx: &ExprContext, alphabet: &[LetterKind]) -> Result<NCPoly> {
    if max_len == 0 {
        return Err(CoreError::InvalidParameter("max_len must be at least 1".into()));
    }
    if alphabet.is_empty() {
        return Err(CoreError::InvalidParameter("empty alphabet".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = ctx.grid().points();
    let len = rng.gen_range(1..=max_len);
    let word: Word = (0..len)
        .map(|_| {
            let kind = alphabet[rng.gen_range(0..alphabet.len())];
            Letter::new(kind, points[rng.gen_range(0..points.len())])
        })
        .collect();
    let slots: usize = word.iter().map(|l| l.slots()).sum();
    let key: Key = (0..slots).map(|_| rng.gen_range(0..ctx.n()) as u8).collect();
    NCPoly::monomial(ctx.n(), word, key, &Scalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogSpec;
    use crate::defect::DefectFamily;
    use crate::engine::equal_mod;
    use crate::momentum::MomentumGrid;
    use crate::smatrix::SMatrixFamily;
    use num_rational::Rational64;

    fn contact() -> ExprContext {
        let spec = CatalogSpec::new(
            2,
            MomentumGrid::ints(&[5, 9]),
            SMatrixFamily::Rational { g: Rational64::from_integer(1) },
            DefectFamily::ScalarContact { eta: Rational64::from_integer(12) },
        );
        ExprContext::new(spec).unwrap()
    }

    #[test]
    fn adjoint_is_an_involution_and_swaps_creation() {
        let c = contact();
        let a = c.letter(LetterKind::Annihilate, Momentum::int(5));
        assert_eq!(adjoint(&a), c.letter(LetterKind::Create, Momentum::int(5)));
        let p = random_poly(7, 5, &c).unwrap().scale(&Scalar::i());
        assert_eq!(adjoint(&adjoint(&p)), p);
    }

    #[test]
    fn reflection_adjoint_flips_momentum() {
        let c = contact();
        let k = Momentum::int(9);
        let r = dresser(&c, DresserKind::Reflection, k).unwrap();
        let r_minus = dresser(&c, DresserKind::Reflection, -k).unwrap();
        assert!(equal_mod(&adjoint(&r), &r_minus.permute_free(&[1, 0]), &c).unwrap().equal);
    }

    #[test]
    fn free_defect_makes_rho_trivial() {
        let spec = CatalogSpec::new(2, MomentumGrid::ints(&[1, 2]), SMatrixFamily::Permutation, DefectFamily::Free);
        let c = ExprContext::new(spec).unwrap();
        let t = dresser(&c, DresserKind::Transmission, Momentum::int(2)).unwrap();
        assert_eq!(nf(&t, &c).unwrap(), NCPoly::identity(2));
        let p = random_poly_over(3, 4, &c, &[LetterKind::Create, LetterKind::Annihilate]).unwrap();
        assert_eq!(rho(&p, &c).unwrap(), nf(&p, &c).unwrap());
    }

    #[test]
    fn rho_squares_to_identity_on_generators() {
        let c = contact();
        for k in c.grid().points().to_vec() {
            for kind in [LetterKind::Annihilate, LetterKind::Create] {
                let x = c.letter(kind, k);
                let twice = rho(&rho(&x, &c).unwrap(), &c).unwrap();
                assert!(equal_mod(&twice, &x, &c).unwrap().equal, "{kind:?} {k}");
            }
        }
    }

    #[test]
    fn random_words_are_reproducible() {
        let c = contact();
        assert_eq!(random_poly(11, 6, &c).unwrap(), random_poly(11, 6, &c).unwrap());
        assert_eq!(random_poly(11, 1, &c).unwrap().max_word_len(), 1);
        assert!(random_poly(1, 0, &c).is_err());
    }
}
