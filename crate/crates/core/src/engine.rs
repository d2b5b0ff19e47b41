//! Normal forms modulo the exchange relations.
//!
//! Words are sorted by `(class, momentum)`: creators first, then dressers,
//! then annihilators, each block by increasing momentum. Equal-momentum
//! dresser pairs `L L⁻¹` are reduced by splitting off their inner trace.
//! Runs of identical letters whose exchange kernel is nontrivial are
//! projected onto the kernel-invariant part.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::context::{ExprContext, Rule};
use crate::error::{CoreError, Result};
use crate::poly::{word_slots, Key, Letter, NCPoly, Tensor, Word};
use crate::scalar::Scalar;

/// Upper bound on reduction steps before reporting non-termination.
pub const DEFAULT_STEP_LIMIT: usize = 2_000_000;

/// Symmetrization passes allowed per word before it is emitted as is.
const SYMMETRIZE_ROUNDS: usize = 8;

/// Which reducible pair is rewritten first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    #[default]
    LeftToRight,
    RightToLeft,
}

fn needs_swap(x: Letter, y: Letter) -> bool {
    x.order_key() > y.order_key()
}

fn inversions(word: &[Letter]) -> usize {
    let mut count = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if needs_swap(word[i], word[j]) {
                count += 1;
            }
        }
    }
    count
}

type Priority = (Reverse<usize>, Reverse<usize>, Word);

#[derive(Default)]
struct Worklist {
    map: BTreeMap<Priority, Tensor>,
}

impl Worklist {
    fn push(&mut self, word: Word, t: Tensor) {
        if t.is_empty() {
            return;
        }
        let key = (Reverse(word.len()), Reverse(inversions(&word)), word);
        match self.map.get_mut(&key) {
            Some(slot) => {
                slot.add_tensor(&t, &Scalar::one());
                if slot.is_empty() {
                    self.map.remove(&key);
                }
            }
            None => {
                self.map.insert(key, t);
            }
        }
    }

    fn pop(&mut self) -> Option<(Word, Tensor)> {
        self.map.pop_first().map(|((_, _, w), t)| (w, t))
    }
}

enum Reduction {
    Swap(usize, Arc<Rule>),
    Pivot(usize, Arc<Rule>),
}

fn slot_offset(word: &[Letter], nfree: usize, pos: usize) -> usize {
    nfree + word_slots(&word[..pos])
}

fn has_pivot_entry(t: &Tensor, b: usize) -> bool {
    t.iter().any(|(k, _)| k[b] == 0 && k[b + 1] == 0)
}

fn find_reduction(
    ctx: &ExprContext,
    word: &[Letter],
    t: &Tensor,
    nfree: usize,
    strategy: Strategy,
) -> Option<Reduction> {
    let len = word.len();
    if len < 2 {
        return None;
    }
    let positions: Box<dyn Iterator<Item = usize>> = match strategy {
        Strategy::LeftToRight => Box::new(0..len - 1),
        Strategy::RightToLeft => Box::new((0..len - 1).rev()),
    };
    for pos in positions {
        let (x, y) = (word[pos], word[pos + 1]);
        if needs_swap(x, y) {
            if let Some(rule) = ctx.swap_rule(x, y) {
                return Some(Reduction::Swap(pos, rule));
            }
        } else if x.kind.is_dresser() && y.kind.is_dresser() && x.momentum == y.momentum && x.kind != y.kind {
            if let Some(rule) = ctx.pivot_rule(x, y) {
                if has_pivot_entry(t, slot_offset(word, nfree, pos) + 1) {
                    return Some(Reduction::Pivot(pos, rule));
                }
            }
        }
    }
    None
}

/// Replaces the pair at `pos` by each output word of `rule`.
fn apply_rule(word: &[Letter], t: &Tensor, nfree: usize, pos: usize, rule: &Rule) -> Vec<(Word, Tensor)> {
    let off = slot_offset(word, nfree, pos);
    let width = word[pos].slots() + word[pos + 1].slots();
    let mut out = Vec::with_capacity(rule.outputs.len());
    for (replacement, map) in &rule.outputs {
        let mut new_word = Vec::with_capacity(word.len() + replacement.len());
        new_word.extend_from_slice(&word[..pos]);
        new_word.extend_from_slice(replacement);
        new_word.extend_from_slice(&word[pos + 2..]);
        let mut nt = Tensor::new();
        for (k, v) in t.iter() {
            let Some(list) = map.get(&k[off..off + width]) else { continue };
            for (nk, c) in list {
                let mut key = Key::with_capacity(k.len() - width + nk.len());
                key.extend_from_slice(&k[..off]);
                key.extend_from_slice(nk);
                key.extend_from_slice(&k[off + width..]);
                nt.add(key, &(v * c));
            }
        }
        out.push((new_word, nt));
    }
    out
}

/// Splits `C = C₀ + λ ⊗ δ` on the inner slots `(b, b+1)` with `C₀` vanishing at `(0, 0)`.
fn split_pivot(t: &Tensor, b: usize, n: usize) -> (Tensor, Tensor) {
    let mut lambda = Tensor::new();
    let mut rest = Tensor::new();
    for (k, v) in t.iter() {
        if k[b] == 0 && k[b + 1] == 0 {
            lambda.add(k.clone(), v);
        } else {
            rest.add(k.clone(), v);
        }
    }
    for (k, v) in lambda.iter() {
        let neg = -v;
        for j in 1..n as u8 {
            let mut key = k.clone();
            key[b] = j;
            key[b + 1] = j;
            rest.add(key, &neg);
        }
    }
    (lambda, rest)
}

fn kernel_step(word: &[Letter], t: &Tensor, nfree: usize, pos: usize, rule: &Rule) -> Tensor {
    apply_rule(word, t, nfree, pos, rule).into_iter().find(|(w, _)| w == word).map(|(_, t)| t).unwrap_or_default()
}

/// Projects each run of identical letters with a nontrivial exchange kernel
/// onto its symmetric part.
fn symmetrize(ctx: &ExprContext, word: &[Letter], t: &Tensor, nfree: usize) -> Tensor {
    let mut cur = t.clone();
    let mut start = 0;
    while start < word.len() {
        let mut end = start + 1;
        while end < word.len() && word[end] == word[start] {
            end += 1;
        }
        if end - start >= 2 {
            if let Some(rule) = ctx.kernel_rule(word[start]) {
                for j in (2..=end - start).rev() {
                    let mut acc = cur.clone();
                    let mut moved = cur.clone();
                    for i in (1..j).rev() {
                        moved = kernel_step(word, &moved, nfree, start + i - 1, &rule);
                        acc.add_tensor(&moved, &Scalar::one());
                    }
                    cur = acc.scale(&Scalar::from_ratio(1, j as i64));
                }
            }
        }
        start = end;
    }
    cur
}

pub fn nf(p: &NCPoly, ctx: &ExprContext) -> Result<NCPoly> {
    nf_bounded(p, ctx, Strategy::LeftToRight, DEFAULT_STEP_LIMIT)
}

pub fn nf_with(p: &NCPoly, ctx: &ExprContext, strategy: Strategy) -> Result<NCPoly> {
    nf_bounded(p, ctx, strategy, DEFAULT_STEP_LIMIT)
}

pub fn nf_bounded(p: &NCPoly, ctx: &ExprContext, strategy: Strategy, step_limit: usize) -> Result<NCPoly> {
    let (n, nfree) = (p.n(), p.nfree());
    if n != ctx.n() {
        return Err(CoreError::Dimension(format!("expression has N = {n}, context has N = {}", ctx.n())));
    }
    let mut work = Worklist::default();
    for (w, t) in p.terms() {
        work.push(w.clone(), t.clone());
    }
    let mut out = NCPoly::zero(n, nfree);
    let mut steps = 0usize;
    while let Some((word, mut t)) = work.pop() {
        let mut rounds = 0;
        while !t.is_empty() {
            steps += 1;
            if steps > step_limit {
                return Err(CoreError::NonTermination(step_limit));
            }
            match find_reduction(ctx, &word, &t, nfree, strategy) {
                Some(Reduction::Swap(pos, rule)) => {
                    for (w, nt) in apply_rule(&word, &t, nfree, pos, &rule) {
                        work.push(w, nt);
                    }
                    break;
                }
                Some(Reduction::Pivot(pos, rule)) => {
                    let (lambda, rest) = split_pivot(&t, slot_offset(&word, nfree, pos) + 1, n);
                    for (w, nt) in apply_rule(&word, &lambda, nfree, pos, &rule) {
                        work.push(w, nt);
                    }
                    t = rest;
                }
                None => {
                    if rounds < SYMMETRIZE_ROUNDS {
                        let sym = symmetrize(ctx, &word, &t, nfree);
                        if sym != t {
                            t = sym;
                            rounds += 1;
                            continue;
                        }
                    }
                    out.add_tensor(word.clone(), &t, &Scalar::one());
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of comparing two expressions modulo the relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    /// Normal form of the difference.
    pub witness: NCPoly,
}

pub fn equal_mod(p: &NCPoly, q: &NCPoly, ctx: &ExprContext) -> Result<Comparison> {
    let diff = p.try_sub(q)?;
    let witness = nf(&diff, ctx)?;
    Ok(Comparison { equal: witness.is_zero(), witness })
}

/// `p q − q p` with free slots of `p` before those of `q`.
pub fn commutator(p: &NCPoly, q: &NCPoly) -> NCPoly {
    let pq = p.mul(q);
    let mut qp = q.mul(p);
    let (fp, fq) = (p.nfree(), q.nfree());
    if fp + fq > 0 {
        let perm: Vec<usize> = (fq..fq + fp).chain(0..fq).collect();
        qp = qp.permute_free(&perm);
    }
    pq.minus(&qp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogSpec;
    use crate::defect::DefectFamily;
    use crate::legs::{leg_product, Factor};
    use crate::momentum::{Momentum, MomentumGrid};
    use crate::poly::LetterKind;
    use crate::smatrix::SMatrixFamily;
    use num_rational::Rational64;

    fn ctx(s: SMatrixFamily) -> ExprContext {
        ExprContext::new(CatalogSpec::new(2, MomentumGrid::ints(&[1, 2]), s, DefectFamily::Free)).unwrap()
    }

    fn rational() -> SMatrixFamily {
        SMatrixFamily::Rational { g: Rational64::from_integer(1) }
    }

    fn k(v: i64) -> Momentum {
        Momentum::int(v)
    }

    fn lt(kind: LetterKind, m: i64) -> Letter {
        Letter::new(kind, k(m))
    }

    #[test]
    fn annihilator_past_creator_at_equal_momentum() {
        let c = ctx(SMatrixFamily::Identity);
        let a = lt(LetterKind::Annihilate, 1);
        let ad = lt(LetterKind::Create, 1);
        let p = NCPoly::word(2, &[a, ad]);
        let r = nf(&p, &c).unwrap();
        let mut expected = NCPoly::identity(2);
        // With S = 𝕀 ⊗ 𝕀 the reordered term is a†_j a_i.
        for i in 0..2u8 {
            for j in 0..2u8 {
                expected.add_entry(vec![ad, a], Key::from_slice(&[i, j, j, i]), &Scalar::one());
            }
        }
        assert_eq!(r, expected);
    }

    #[test]
    fn dresser_cancels_inverse() {
        let c = ctx(rational());
        let l = lt(LetterKind::Dress, 2);
        let li = lt(LetterKind::DressInv, 2);
        for pair in [[l, li], [li, l]] {
            let p = leg_product(2, 1, vec![Factor::letter(2, 0, pair[0]), Factor::letter(2, 0, pair[1])]);
            assert_eq!(nf(&p, &c).unwrap(), NCPoly::identity(2));
        }
    }

    #[test]
    fn dresser_exchange_relation_holds() {
        let c = ctx(rational());
        let (l1, l2) = (lt(LetterKind::Dress, 1), lt(LetterKind::Dress, 2));
        let lhs = leg_product(2, 2, vec![c.s12(k(1), k(2)), Factor::letter(2, 0, l1), Factor::letter(2, 1, l2)]);
        let rhs = leg_product(2, 2, vec![Factor::letter(2, 1, l2), Factor::letter(2, 0, l1), c.s12(k(1), k(2))]);
        assert!(equal_mod(&lhs, &rhs, &c).unwrap().equal);
        let wrong = leg_product(2, 2, vec![Factor::letter(2, 0, l1), Factor::letter(2, 1, l2)]);
        assert!(!equal_mod(&lhs, &wrong, &c).unwrap().equal);
    }

    #[test]
    fn strategies_agree_on_cubic_words() {
        let c = ctx(rational());
        let word = vec![
            lt(LetterKind::Annihilate, 2),
            lt(LetterKind::Create, -1),
            lt(LetterKind::Annihilate, -2),
            lt(LetterKind::Create, 2),
        ];
        let p = NCPoly::word(2, &word);
        let a = nf_with(&p, &c, Strategy::LeftToRight).unwrap();
        let b = nf_with(&p, &c, Strategy::RightToLeft).unwrap();
        assert_eq!(a, b);
        assert_eq!(nf(&a, &c).unwrap(), a);
    }

    #[test]
    fn identity_scattering_symmetrizes_equal_creators() {
        let c = ctx(SMatrixFamily::Identity);
        let ad = lt(LetterKind::Create, 1);
        let mut p = NCPoly::zero(2, 0);
        p.add_entry(vec![ad, ad], Key::from_slice(&[0, 1]), &Scalar::one());
        let mut q = NCPoly::zero(2, 0);
        q.add_entry(vec![ad, ad], Key::from_slice(&[1, 0]), &Scalar::one());
        assert!(equal_mod(&p, &q, &c).unwrap().equal);
    }

    #[test]
    fn step_limit_is_reported() {
        let c = ctx(rational());
        let p = NCPoly::word(2, &[lt(LetterKind::Annihilate, 2), lt(LetterKind::Create, 1)]);
        assert!(matches!(nf_bounded(&p, &c, Strategy::LeftToRight, 1), Err(CoreError::NonTermination(1))));
    }
}
