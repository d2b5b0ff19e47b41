//! Elements of the twofold tensor product and the coproduct of the dresser subalgebra.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::context::ExprContext;
use crate::engine::nf;
use crate::error::{CoreError, Result};
use crate::poly::{word_slots, Key, Letter, LetterKind, NCPoly, Tensor, Word};
use crate::scalar::Scalar;

/// Finite sum of `left ⊗ right` word pairs with tensor coefficients laid out
/// as `[free slots, left word slots, right word slots]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoLegPoly {
    n: usize,
    nfree: usize,
    terms: BTreeMap<(Word, Word), Tensor>,
}

impl TwoLegPoly {
    pub fn zero(n: usize, nfree: usize) -> Self {
        TwoLegPoly { n, nfree, terms: BTreeMap::new() }
    }

    pub fn nfree(&self) -> usize {
        self.nfree
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Tensor> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_tensor(&mut self, left: Word, right: Word, t: &Tensor, factor: &Scalar) {
        if t.is_empty() || factor.is_zero() {
            return;
        }
        let key = (left, right);
        let slot = self.terms.entry(key.clone()).or_default();
        slot.add_tensor(t, factor);
        if slot.is_empty() {
            self.terms.remove(&key);
        }
    }

    pub fn minus(&self, other: &TwoLegPoly) -> Result<TwoLegPoly> {
        if self.nfree != other.nfree {
            return Err(CoreError::Signature(self.nfree, other.nfree));
        }
        let mut out = self.clone();
        for ((l, r), t) in &other.terms {
            out.add_tensor(l.clone(), r.clone(), t, &-Scalar::one());
        }
        Ok(out)
    }

    /// `left ⊗ right`, summing free slot `i` of `left` against free slot `j`
    /// of `right` for each `(i, j)`; remaining free slots keep their order, left's first.
    pub fn tensor(left: &NCPoly, right: &NCPoly, pairs: &[(usize, usize)]) -> TwoLegPoly {
        let n = left.n();
        let (fl, fr) = (left.nfree(), right.nfree());
        let keep_l: Vec<usize> = (0..fl).filter(|i| !pairs.iter().any(|p| p.0 == *i)).collect();
        let keep_r: Vec<usize> = (0..fr).filter(|j| !pairs.iter().any(|p| p.1 == *j)).collect();
        let mut out = TwoLegPoly::zero(n, keep_l.len() + keep_r.len());
        for (wl, tl) in left.terms() {
            for (wr, tr) in right.terms() {
                let mut t = Tensor::new();
                for (kl, vl) in tl.iter() {
                    for (kr, vr) in tr.iter() {
                        if pairs.iter().any(|&(i, j)| kl[i] != kr[j]) {
                            continue;
                        }
                        let mut key: Key = keep_l.iter().map(|&i| kl[i]).collect();
                        key.extend(keep_r.iter().map(|&j| kr[j]));
                        key.extend_from_slice(&kl[fl..]);
                        key.extend_from_slice(&kr[fr..]);
                        t.add(key, &(vl * vr));
                    }
                }
                out.add_tensor(wl.clone(), wr.clone(), &t, &Scalar::one());
            }
        }
        out
    }

    /// Product in the tensor-product algebra with free-slot contraction.
    pub fn mul_contract(&self, other: &TwoLegPoly, pairs: &[(usize, usize)]) -> TwoLegPoly {
        let (na, nb) = (self.nfree, other.nfree);
        let keep_a: Vec<usize> = (0..na).filter(|i| !pairs.iter().any(|p| p.0 == *i)).collect();
        let keep_b: Vec<usize> = (0..nb).filter(|j| !pairs.iter().any(|p| p.1 == *j)).collect();
        let mut out = TwoLegPoly::zero(self.n, keep_a.len() + keep_b.len());
        for ((la, ra), ta) in &self.terms {
            let sla = na + word_slots(la);
            for ((lb, rb), tb) in &other.terms {
                let slb = nb + word_slots(lb);
                let mut idx: FxHashMap<SmallVec<[u8; 8]>, Vec<(&Key, &Scalar)>> = FxHashMap::default();
                for (k, v) in tb.iter() {
                    idx.entry(pairs.iter().map(|p| k[p.1]).collect()).or_default().push((k, v));
                }
                let mut t = Tensor::new();
                for (ka, va) in ta.iter() {
                    let jk: SmallVec<[u8; 8]> = pairs.iter().map(|p| ka[p.0]).collect();
                    let Some(matches) = idx.get(&jk) else { continue };
                    for (kb, vb) in matches {
                        let mut key: Key = keep_a.iter().map(|&i| ka[i]).collect();
                        key.extend(keep_b.iter().map(|&j| kb[j]));
                        key.extend_from_slice(&ka[na..sla]);
                        key.extend_from_slice(&kb[nb..slb]);
                        key.extend_from_slice(&ka[sla..]);
                        key.extend_from_slice(&kb[slb..]);
                        t.add(key, &(va * *vb));
                    }
                }
                let mut left = la.clone();
                left.extend_from_slice(lb);
                let mut right = ra.clone();
                right.extend_from_slice(rb);
                out.add_tensor(left, right, &t, &Scalar::one());
            }
        }
        out
    }

    /// Normalizes each leg, treating the other leg's slots as free.
    pub fn normalize(&self, ctx: &ExprContext) -> Result<TwoLegPoly> {
        let after_left = self.normalize_leg(ctx, true)?;
        after_left.normalize_leg(ctx, false)
    }

    fn normalize_leg(&self, ctx: &ExprContext, left_leg: bool) -> Result<TwoLegPoly> {
        let (n, f) = (self.n, self.nfree);
        // Group by the word on the other leg.
        let mut groups: BTreeMap<Word, NCPoly> = BTreeMap::new();
        for ((l, r), t) in &self.terms {
            let (this, other) = if left_leg { (l, r) } else { (r, l) };
            let so = word_slots(other);
            let (nl, nr) = (word_slots(l), word_slots(r));
            let poly = groups.entry(other.clone()).or_insert_with(|| NCPoly::zero(n, f + so));
            // Re-key as [free, other slots, this slots].
            for (k, v) in t.iter() {
                let (left_part, right_part) = (&k[f..f + nl], &k[f + nl..f + nl + nr]);
                let mut key = Key::from_slice(&k[..f]);
                if left_leg {
                    key.extend_from_slice(right_part);
                    key.extend_from_slice(left_part);
                } else {
                    key.extend_from_slice(left_part);
                    key.extend_from_slice(right_part);
                }
                poly.add_entry(this.clone(), key, v);
            }
        }
        let mut out = TwoLegPoly::zero(n, f);
        for (other, poly) in groups {
            let so = word_slots(&other);
            let normal = nf(&poly, ctx)?;
            for (this, t) in normal.terms() {
                let mut nt = Tensor::new();
                for (k, v) in t.iter() {
                    let mut key = Key::from_slice(&k[..f]);
                    if left_leg {
                        key.extend_from_slice(&k[f + so..]);
                        key.extend_from_slice(&k[f..f + so]);
                    } else {
                        key.extend_from_slice(&k[f..]);
                    }
                    nt.add(key, v);
                }
                let (l, r) = if left_leg { (this.clone(), other.clone()) } else { (other.clone(), this.clone()) };
                out.add_tensor(l, r, &nt, &Scalar::one());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TwoLegPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((l, r), t)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let show = |w: &Word| {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("·")
                }
            };
            write!(f, "[{} entries] ({}) ⊗ ({})", t.len(), show(l), show(r))?;
        }
        Ok(())
    }
}

fn letter_coproduct(n: usize, l: Letter) -> Result<TwoLegPoly> {
    let mut out = TwoLegPoly::zero(n, 2);
    let word = vec![l];
    for i in 0..n as u8 {
        for j in 0..n as u8 {
            for x in 0..n as u8 {
                let key: Key = match l.kind {
                    // Δ(L_ij) = Σ_x L_ix ⊗ L_xj
                    LetterKind::Dress => Key::from_slice(&[i, j, i, x, x, j]),
                    // Δ(L⁻¹_ij) = Σ_x L⁻¹_xj ⊗ L⁻¹_ix
                    LetterKind::DressInv => Key::from_slice(&[i, j, x, j, i, x]),
                    _ => {
                        return Err(CoreError::Domain(format!(
                            "coproduct is defined on dresser letters only, found {l}"
                        )))
                    }
                };
                let mut t = Tensor::new();
                t.add(key, &Scalar::one());
                out.add_tensor(word.clone(), word.clone(), &t, &Scalar::one());
            }
        }
    }
    Ok(out)
}

/// Coproduct of an element of the dresser subalgebra, not normalized.
pub fn coproduct(p: &NCPoly) -> Result<TwoLegPoly> {
    let (n, nf) = (p.n(), p.nfree());
    let mut out = TwoLegPoly::zero(n, nf);
    let mut cache: BTreeMap<Letter, TwoLegPoly> = BTreeMap::new();
    for (w, t) in p.terms() {
        let slots = word_slots(w);
        let mut acc = TwoLegPoly::zero(n, nf + slots);
        acc.add_tensor(Vec::new(), Vec::new(), t, &Scalar::one());
        for l in w {
            if !cache.contains_key(l) {
                cache.insert(*l, letter_coproduct(n, *l)?);
            }
            acc = acc.mul_contract(&cache[l], &[(nf, 0), (nf + 1, 1)]);
        }
        for ((l, r), t) in acc.terms {
            out.add_tensor(l, r, &t, &Scalar::one());
        }
    }
    Ok(out)
}

/// Compares two-leg elements after normalizing both legs.
pub fn equal_mod_two_leg(p: &TwoLegPoly, q: &TwoLegPoly, ctx: &ExprContext) -> Result<(bool, TwoLegPoly)> {
    let w = p.minus(q)?.normalize(ctx)?;
    Ok((w.is_zero(), w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogSpec;
    use crate::defect::DefectFamily;
    use crate::legs::{leg_product, Factor};
    use crate::momentum::{Momentum, MomentumGrid};
    use crate::smatrix::SMatrixFamily;
    use num_rational::Rational64;

    fn ctx() -> ExprContext {
        let spec = CatalogSpec::new(
            2,
            MomentumGrid::ints(&[1, 2]),
            SMatrixFamily::Rational { g: Rational64::from_integer(1) },
            DefectFamily::Free,
        );
        ExprContext::new(spec).unwrap()
    }

    #[test]
    fn unit_maps_to_unit() {
        let d = coproduct(&NCPoly::one(2)).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert!(d.terms().contains_key(&(vec![], vec![])));
    }

    #[test]
    fn coproduct_respects_inverse() {
        let c = ctx();
        let l = Letter::new(LetterKind::Dress, Momentum::int(1));
        let li = Letter::new(LetterKind::DressInv, Momentum::int(1));
        let p = leg_product(2, 1, vec![Factor::letter(2, 0, l), Factor::letter(2, 0, li)]);
        let d = coproduct(&p).unwrap().normalize(&c).unwrap();
        let unit = TwoLegPoly::tensor(&NCPoly::identity(2), &NCPoly::one(2), &[]);
        assert!(equal_mod_two_leg(&d, &unit, &c).unwrap().0);
    }

    #[test]
    fn rejects_particle_letters() {
        let a = NCPoly::letter(2, Letter::new(LetterKind::Annihilate, Momentum::int(1)));
        assert!(matches!(coproduct(&a), Err(CoreError::Domain(_))));
    }
}
