//! Expression context: dimension, grid, S, (R, T) and the rewrite rules they induce.
//!
//! A rule for an adjacent pair `X(k₁) Y(k₂)` is a polynomial whose free slots
//! are the pair's slots (X's then Y's); applying it replaces the pair by each
//! of the rule's words, contracting the coefficient tensors.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rustc_hash::FxHashMap;

use crate::catalog::{validate_pair, CatalogSpec};
use crate::defect::DefectPair;
use crate::error::{CoreError, Result};
use crate::legs::{leg_product, Factor};
use crate::matrix::CMatrix;
use crate::momentum::{Momentum, MomentumGrid};
use crate::poly::{index_tuples, Key, Letter, LetterKind, NCPoly, Word};
use crate::scalar::Scalar;
use crate::smatrix::SMatrixFn;

/// How transmission and reflection generators are represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DresserMode {
    /// `t`, `r` expand into dresser letters `L`, `L⁻¹` around numeric `T`, `R`.
    Dressed,
    /// `t`, `r` are atomic letters obeying only the exchange relations of the
    /// reflection-transmission algebra; `Create`/`Annihilate` stand for `A†`/`A`.
    Opaque,
}

type SlotMap = FxHashMap<Key, Vec<(Key, Scalar)>>;

/// A compiled rewrite: input pair slots ↦ list of (output slots, coefficient) per output word.
#[derive(Debug)]
pub struct Rule {
    pub(crate) outputs: Vec<(Word, SlotMap)>,
}

impl Rule {
    pub(crate) fn from_poly(p: &NCPoly) -> Rule {
        let nf = p.nfree();
        let outputs = p
            .terms()
            .iter()
            .map(|(w, t)| {
                let mut m: FxHashMap<Key, Vec<(Key, Scalar)>> = FxHashMap::default();
                for (k, v) in t.sorted() {
                    m.entry(Key::from_slice(&k[..nf])).or_default().push((Key::from_slice(&k[nf..]), v.clone()));
                }
                (w.clone(), m)
            })
            .collect();
        Rule { outputs }
    }

    /// True when the rule maps the pair word to itself with the identity tensor.
    fn is_identity_on(&self, word: &[Letter], n: usize) -> bool {
        if self.outputs.len() != 1 || self.outputs[0].0 != word {
            return false;
        }
        let m = &self.outputs[0].1;
        let slots: usize = word.iter().map(|l| l.slots()).sum();
        index_tuples(n, slots).all(|k| match m.get(&k) {
            Some(v) => v.len() == 1 && v[0].0 == k && v[0].1.is_one(),
            None => false,
        })
    }
}

type RuleMap = RwLock<HashMap<(Letter, Letter), Option<Arc<Rule>>>>;

pub struct ExprContext {
    spec: CatalogSpec,
    smatrix: SMatrixFn,
    defect: DefectPair,
    mode: DresserMode,
    swaps: RuleMap,
    pivots: RuleMap,
    kernels: RuleMap,
}

impl std::fmt::Debug for ExprContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExprContext").field("spec", &self.spec).field("mode", &self.mode).finish()
    }
}

impl ExprContext {
    /// Builds a context after checking that the grid is symmetric and every
    /// numeric residual of the spec vanishes.
    pub fn new(spec: CatalogSpec) -> Result<Self> {
        if !spec.grid.is_symmetric() {
            return Err(CoreError::InvalidContext("grid is not closed under negation".into()));
        }
        let report = validate_pair(&spec)?;
        if !report.pass() {
            let failing: Vec<&str> = report.checks.iter().filter(|c| !c.pass()).map(|c| c.name).collect();
            return Err(CoreError::InvalidContext(format!("residual checks fail: {}", failing.join(", "))));
        }
        Self::waived(spec)
    }

    /// Builds a context without validation, for negative controls.
    pub fn waived(spec: CatalogSpec) -> Result<Self> {
        let smatrix = spec.smatrix_fn()?;
        let defect = spec.defect_pair()?;
        Ok(ExprContext {
            spec,
            smatrix,
            defect,
            mode: DresserMode::Dressed,
            swaps: RwLock::default(),
            pivots: RwLock::default(),
            kernels: RwLock::default(),
        })
    }

    /// The same data with the given dresser representation and fresh rule caches.
    pub fn with_mode(&self, mode: DresserMode) -> Self {
        ExprContext {
            spec: self.spec.clone(),
            smatrix: self.smatrix.clone(),
            defect: self.defect.clone(),
            mode,
            swaps: RwLock::default(),
            pivots: RwLock::default(),
            kernels: RwLock::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.spec.grid
    }

    pub fn spec(&self) -> &CatalogSpec {
        &self.spec
    }

    pub fn smatrix(&self) -> &SMatrixFn {
        &self.smatrix
    }

    pub fn defect(&self) -> &DefectPair {
        &self.defect
    }

    pub fn mode(&self) -> DresserMode {
        self.mode
    }

    pub fn s(&self, k1: Momentum, k2: Momentum) -> Arc<CMatrix> {
        self.smatrix.eval(k1, k2)
    }

    /// `S₁₂(a,b)` as a leg factor on legs (0, 1).
    pub fn s12(&self, a: Momentum, b: Momentum) -> Factor {
        Factor::Matrix2 { first: 0, second: 1, m: self.s(a, b) }
    }

    /// `S₂₁(a,b)`: first tensor factor on leg 1.
    pub fn s21(&self, a: Momentum, b: Momentum) -> Factor {
        Factor::Matrix2 { first: 1, second: 0, m: self.s(a, b) }
    }

    pub fn letter(&self, kind: LetterKind, k: Momentum) -> NCPoly {
        NCPoly::letter(self.n(), Letter::new(kind, k))
    }

    fn lf(&self, leg: usize, kind: LetterKind, k: Momentum) -> Factor {
        Factor::letter(self.n(), leg, Letter::new(kind, k))
    }

    fn cached(&self, map: &RuleMap, x: Letter, y: Letter, build: impl FnOnce() -> Option<NCPoly>) -> Option<Arc<Rule>> {
        if let Some(r) = map.read().expect("rule cache poisoned").get(&(x, y)) {
            return r.clone();
        }
        let rule = build().map(|p| Arc::new(Rule::from_poly(&p)));
        map.write().expect("rule cache poisoned").entry((x, y)).or_insert(rule).clone()
    }

    /// Rule reordering the adjacent pair `x y`, if one is available.
    pub fn swap_rule(&self, x: Letter, y: Letter) -> Option<Arc<Rule>> {
        self.cached(&self.swaps, x, y, || self.exchange_poly(x, y))
    }

    /// Rule splitting off the inner contraction of `x y` at equal momentum.
    pub fn pivot_rule(&self, x: Letter, y: Letter) -> Option<Arc<Rule>> {
        self.cached(&self.pivots, x, y, || self.pivot_poly(x, y).map(|p| widen_pivot(&p)))
    }

    /// Exchange kernel of two equal letters, `None` when trivial or unavailable.
    pub fn kernel_rule(&self, x: Letter) -> Option<Arc<Rule>> {
        if let Some(r) = self.kernels.read().expect("rule cache poisoned").get(&(x, x)) {
            return r.clone();
        }
        let rule = self
            .exchange_poly(x, x)
            .map(|p| Rule::from_poly(&p))
            .filter(|r| !r.is_identity_on(&[x, x], self.n()))
            .map(Arc::new);
        self.kernels.write().expect("rule cache poisoned").entry((x, x)).or_insert(rule).clone()
    }

    /// Right-hand side of the exchange relation for `x(k₁) y(k₂)` as a
    /// polynomial in the pair's slots, or `None` if the relation cannot be
    /// solved for the reordered word.
    pub fn exchange_poly(&self, x: Letter, y: Letter) -> Option<NCPoly> {
        use LetterKind::*;
        let (k1, k2) = (x.momentum, y.momentum);
        let n = self.n();
        let x0 = self.lf(0, x.kind, k1);
        let y1 = self.lf(1, y.kind, k2);
        let lp = |f: Vec<Factor>| leg_product(n, 2, f);
        let opaque = self.mode == DresserMode::Opaque;
        Some(match (x.kind, y.kind) {
            (Annihilate, Create) => {
                let mut p = lp(vec![y1, self.s12(k1, k2), x0]);
                if k1 == k2 {
                    p.add_assign_scaled(&NCPoly::identity(n), &Scalar::one());
                    if opaque {
                        p.add_assign_scaled(&self.letter(Transmission, k1), &Scalar::one());
                    }
                }
                if opaque && k1 == -k2 {
                    p.add_assign_scaled(&self.letter(Reflection, k1), &Scalar::one());
                }
                p
            }
            (Annihilate, Annihilate) => lp(vec![self.s21(k2, k1), y1, x0]),
            (Create, Create) => lp(vec![y1, x0, self.s21(k2, k1)]),
            (Annihilate, Dress) if !opaque => lp(vec![self.s21(k2, k1), y1, x0]),
            (Annihilate, DressInv) if !opaque => lp(vec![y1, self.s12(k1, k2), x0]),
            (Dress, Create) if !opaque => lp(vec![y1, self.s12(k1, k2), x0]),
            (DressInv, Create) if !opaque => lp(vec![y1, x0, self.s21(k2, k1)]),
            (Dress, Dress) if !opaque => lp(vec![self.s21(k2, k1), y1, x0, self.s12(k1, k2)]),
            (DressInv, DressInv) if !opaque => lp(vec![self.s12(k1, k2), y1, x0, self.s21(k2, k1)]),
            (Dress, DressInv) if !opaque => {
                // L₁(a) S₁₂(a,b) L⁻¹₂(b) = L⁻¹₂(b) S₁₂(a,b) L₁(a) with a = k₁, b = k₂.
                let lhs = lp(vec![x0, self.s12(k1, k2), y1]);
                let rhs = lp(vec![self.lf(1, DressInv, k2), self.s12(k1, k2), self.lf(0, Dress, k1)]);
                return solve_exchange(n, &lhs, &rhs);
            }
            (DressInv, Dress) if !opaque => {
                // Same relation with a = k₂, b = k₁, read right to left.
                let lhs = lp(vec![self.lf(0, Dress, k2), self.s12(k2, k1), self.lf(1, DressInv, k1)]);
                let rhs = lp(vec![self.lf(1, DressInv, k1), self.s12(k2, k1), self.lf(0, Dress, k2)]);
                return solve_exchange(n, &rhs, &lhs);
            }
            (Annihilate, Transmission) if opaque => lp(vec![self.s21(k2, k1), y1, self.s12(k1, k2), x0]),
            (Annihilate, Reflection) if opaque => lp(vec![self.s21(k2, k1), y1, self.s12(k1, -k2), x0]),
            (Transmission, Create) if opaque => lp(vec![y1, self.s12(k1, k2), x0, self.s21(k2, k1)]),
            (Reflection, Create) if opaque => lp(vec![y1, self.s12(k1, k2), x0, self.s21(k2, -k1)]),
            (Transmission | Reflection, Transmission | Reflection) if opaque => {
                return self.opaque_block_exchange(x, y);
            }
            _ => return None,
        })
    }

    /// Exchange of two atomic transmission/reflection letters, solved from the
    /// quadratic relations among them.
    fn opaque_block_exchange(&self, x: Letter, y: Letter) -> Option<NCPoly> {
        use LetterKind::*;
        let n = self.n();
        let lp = |f: Vec<Factor>| leg_product(n, 2, f);
        // Each relation: (lhs, rhs) with lhs word x(k1) y(k2) on legs (0, 1).
        let relation = |first: LetterKind, k1: Momentum, second: LetterKind, k2: Momentum| -> (NCPoly, NCPoly) {
            let f0 = || self.lf(0, first, k1);
            let f1 = || self.lf(1, second, k2);
            match (first, second) {
                (Transmission, Transmission) => (
                    lp(vec![self.s12(k1, k2), f0(), self.s21(k2, k1), f1()]),
                    lp(vec![f1(), self.s12(k1, k2), f0(), self.s21(k2, k1)]),
                ),
                (Transmission, Reflection) => (
                    lp(vec![self.s12(k1, k2), f0(), self.s21(k2, k1), f1()]),
                    lp(vec![f1(), self.s12(k1, -k2), f0(), self.s21(-k2, k1)]),
                ),
                (Reflection, Reflection) => (
                    lp(vec![self.s12(k1, k2), f0(), self.s21(k2, -k1), f1()]),
                    lp(vec![f1(), self.s12(k1, -k2), f0(), self.s21(-k2, -k1)]),
                ),
                _ => unreachable!("relations are stated with t before r"),
            }
        };
        match (x.kind, y.kind) {
            (Reflection, Transmission) => {
                let (lhs, rhs) = relation(Transmission, y.momentum, Reflection, x.momentum);
                solve_exchange(n, &rhs, &lhs)
            }
            (a, b) => {
                let (lhs, rhs) = relation(a, x.momentum, b, y.momentum);
                solve_exchange(n, &lhs, &rhs)
            }
        }
    }

    fn pivot_poly(&self, x: Letter, y: Letter) -> Option<NCPoly> {
        use LetterKind::*;
        if x.momentum != y.momentum {
            return None;
        }
        let (n, k) = (self.n(), x.momentum);
        let chain = |a: Letter, b: Letter| leg_product(n, 1, vec![Factor::letter(n, 0, a), Factor::letter(n, 0, b)]);
        match (self.mode, x.kind, y.kind) {
            (DresserMode::Dressed, Dress, DressInv) | (DresserMode::Dressed, DressInv, Dress) => {
                Some(NCPoly::identity(n))
            }
            (DresserMode::Opaque, Transmission, Transmission) if self.grid().contains(-k) => {
                let rr = chain(Letter::new(Reflection, k), Letter::new(Reflection, -k));
                Some(NCPoly::identity(n).minus(&rr))
            }
            (DresserMode::Opaque, Transmission, Reflection) if self.grid().contains(-k) => {
                Some(chain(Letter::new(Reflection, k), Letter::new(Transmission, -k)).neg())
            }
            _ => None,
        }
    }
}

/// Re-keys a replacement for `(outer row, outer col)` as a rule on the four
/// pair slots with the inner pair fixed to `(0, 0)`.
fn widen_pivot(p: &NCPoly) -> NCPoly {
    let terms = p
        .terms()
        .iter()
        .map(|(w, t)| {
            let t = t.map_keys(|k| {
                let mut key = Key::from_slice(&[k[0], 0, 0, k[1]]);
                key.extend_from_slice(&k[2..]);
                key
            });
            (w.clone(), t)
        })
        .collect();
    NCPoly::from_terms(p.n(), 4, terms)
}

fn flat(key: &[u8], n: usize) -> usize {
    key.iter().fold(0, |acc, &d| acc * n + d as usize)
}

/// Given `Σ_w M_L[I,w] word_L(w) = Σ_w' M_R[I,w'] word_R(w')` (each side a
/// single word whose slot count equals the number of free slots), returns
/// the rule `word_L(w) ↦ Σ_w' (M_L⁻¹ M_R)[w,w'] word_R(w')`.
pub(crate) fn solve_exchange(n: usize, lhs: &NCPoly, rhs: &NCPoly) -> Option<NCPoly> {
    let f = lhs.nfree();
    let single = |p: &NCPoly| -> Option<(Word, CMatrix)> {
        if p.num_terms() != 1 {
            return None;
        }
        let (w, t) = p.terms().iter().next()?;
        let dim = n.pow(f as u32);
        let mut m = CMatrix::zeros(dim, dim);
        for (k, v) in t.iter() {
            m.set(flat(&k[..f], n), flat(&k[f..], n), v.clone());
        }
        Some((w.clone(), m))
    };
    let (_, ml) = single(lhs)?;
    let (wr, mr) = single(rhs)?;
    let kernel = &ml.inverse()? * &mr;
    let mut out = NCPoly::zero(n, f);
    let tuples: Vec<Key> = index_tuples(n, f).collect();
    for (i, ki) in tuples.iter().enumerate() {
        for (j, kj) in tuples.iter().enumerate() {
            let v = kernel.get(i, j);
            if !v.is_zero() {
                let mut key = ki.clone();
                key.extend_from_slice(kj);
                out.add_entry(wr.clone(), key, v);
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect::DefectFamily;
    use crate::smatrix::SMatrixFamily;
    use num_rational::Rational64;

    fn ctx(s: SMatrixFamily) -> ExprContext {
        let spec = CatalogSpec::new(2, MomentumGrid::ints(&[1, 2]), s, DefectFamily::Free);
        ExprContext::new(spec).unwrap()
    }

    #[test]
    fn rejects_invalid_specs() {
        let spec = CatalogSpec::new(2, MomentumGrid::ints(&[1, 2]), SMatrixFamily::Identity, DefectFamily::Tampered);
        assert!(matches!(ExprContext::new(spec.clone()), Err(CoreError::InvalidContext(_))));
        assert!(ExprContext::waived(spec).is_ok());
    }

    #[test]
    fn mixed_dresser_exchange_solvability() {
        let rational = ctx(SMatrixFamily::Rational { g: Rational64::from_integer(1) });
        let l = Letter::new(LetterKind::Dress, Momentum::int(2));
        let li = Letter::new(LetterKind::DressInv, Momentum::int(1));
        assert!(rational.swap_rule(l, li).is_some());
        assert!(rational
            .swap_rule(
                Letter::new(LetterKind::DressInv, Momentum::int(2)),
                Letter::new(LetterKind::Dress, Momentum::int(1))
            )
            .is_some());
        let perm = ctx(SMatrixFamily::Permutation);
        assert!(perm.swap_rule(l, li).is_none());
    }

    #[test]
    fn equal_momentum_kernels() {
        let rational = ctx(SMatrixFamily::Rational { g: Rational64::from_integer(1) });
        let a = Letter::new(LetterKind::Annihilate, Momentum::int(1));
        let l = Letter::new(LetterKind::Dress, Momentum::int(1));
        assert!(rational.kernel_rule(a).is_none());
        assert!(rational.kernel_rule(l).is_none());
        let id = ctx(SMatrixFamily::Identity);
        assert!(id.kernel_rule(a).is_some());
    }
}
