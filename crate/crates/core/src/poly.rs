//! Words of generator letters with sparse coefficient tensors.
//!
//! A term is a word together with a tensor whose index tuple is laid out as
//! `[free slots..., slots of letter 0..., slots of letter 1..., ...]`.
//! Creation and annihilation letters carry one slot, dresser letters two
//! (row, column). Free slots are the external component indices of the
//! polynomial.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{CoreError, Result};
use crate::matrix::CMatrix;
use crate::momentum::Momentum;
use crate::scalar::Scalar;

pub type Key = SmallVec<[u8; 24]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterKind {
    Create,
    Dress,
    DressInv,
    Transmission,
    Reflection,
    Annihilate,
}

impl LetterKind {
    pub fn slots(self) -> usize {
        match self {
            LetterKind::Create | LetterKind::Annihilate => 1,
            _ => 2,
        }
    }

    /// Ordering class: creation < dresser block < annihilation.
    pub fn class(self) -> u8 {
        match self {
            LetterKind::Create => 0,
            LetterKind::Annihilate => 2,
            _ => 1,
        }
    }

    pub fn has_row(self) -> bool {
        self != LetterKind::Create
    }

    pub fn has_col(self) -> bool {
        self != LetterKind::Annihilate
    }

    pub fn is_dresser(self) -> bool {
        self.class() == 1
    }

    pub fn symbol(self) -> &'static str {
        match self {
            LetterKind::Create => "ad",
            LetterKind::Annihilate => "a",
            LetterKind::Dress => "L",
            LetterKind::DressInv => "Li",
            LetterKind::Transmission => "t",
            LetterKind::Reflection => "r",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub kind: LetterKind,
    pub momentum: Momentum,
}

impl Letter {
    pub fn new(kind: LetterKind, momentum: Momentum) -> Self {
        Letter { kind, momentum }
    }

    pub fn slots(self) -> usize {
        self.kind.slots()
    }

    /// Sort key of the normal form.
    pub fn order_key(self) -> (u8, Momentum) {
        (self.kind.class(), self.momentum)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind.symbol(), self.momentum)
    }
}

pub type Word = Vec<Letter>;

pub fn word_slots(w: &[Letter]) -> usize {
    w.iter().map(|l| l.slots()).sum()
}

/// `#Create − #Annihilate`.
pub fn word_degree(w: &[Letter]) -> i64 {
    w.iter()
        .map(|l| match l.kind {
            LetterKind::Create => 1,
            LetterKind::Annihilate => -1,
            _ => 0,
        })
        .sum()
}

/// Sparse map from index tuples to nonzero scalars.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    entries: FxHashMap<Key, Scalar>,
}

impl Tensor {
    pub fn new() -> Self {
        Tensor::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &[u8]) -> Option<&Scalar> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.entries.iter()
    }

    /// Entries in lexicographic key order.
    pub fn sorted(&self) -> Vec<(&Key, &Scalar)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn add(&mut self, key: Key, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.entries.entry(key) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += v;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(v.clone());
            }
        }
    }

    pub fn add_tensor(&mut self, other: &Tensor, factor: &Scalar) {
        for (k, v) in other.iter() {
            if factor.is_one() {
                self.add(k.clone(), v);
            } else {
                self.add(k.clone(), &(v * factor));
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        let mut t = Tensor::new();
        if c.is_zero() {
            return t;
        }
        for (k, v) in self.iter() {
            t.entries.insert(k.clone(), v * c);
        }
        t
    }

    pub fn map_values(&self, f: impl Fn(&Scalar) -> Scalar) -> Tensor {
        let mut t = Tensor::new();
        for (k, v) in self.iter() {
            t.add(k.clone(), &f(v));
        }
        t
    }

    pub fn map_keys(&self, f: impl Fn(&Key) -> Key) -> Tensor {
        let mut t = Tensor::new();
        for (k, v) in self.iter() {
            t.add(f(k), v);
        }
        t
    }

    pub fn retain(&mut self, f: impl Fn(&Key, &Scalar) -> bool) {
        self.entries.retain(|k, v| f(k, v));
    }
}

/// A finite sum of words with tensor coefficients sharing `nfree` free slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPoly {
    n: usize,
    nfree: usize,
    terms: BTreeMap<Word, Tensor>,
}

fn key_of(it: impl IntoIterator<Item = usize>) -> Key {
    it.into_iter().map(|x| x as u8).collect()
}

/// All index tuples of length `len` over `0..n`, in lexicographic order.
pub fn index_tuples(n: usize, len: usize) -> impl Iterator<Item = Key> {
    let total = n.pow(len as u32);
    (0..total).map(move |mut i| {
        let mut k: Key = SmallVec::from_elem(0, len);
        for slot in (0..len).rev() {
            k[slot] = (i % n) as u8;
            i /= n;
        }
        k
    })
}

impl NCPoly {
    pub fn zero(n: usize, nfree: usize) -> Self {
        NCPoly { n, nfree, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        let mut p = Self::zero(n, 0);
        p.add_entry(Vec::new(), Key::new(), &c);
        p
    }

    /// The unit `𝟏`.
    pub fn one(n: usize) -> Self {
        Self::scalar(n, Scalar::one())
    }

    /// `δ_ij 𝟏` with two free slots.
    pub fn identity(n: usize) -> Self {
        let mut p = Self::zero(n, 2);
        for i in 0..n {
            p.add_entry(Vec::new(), key_of([i, i]), &Scalar::one());
        }
        p
    }

    /// A single letter with all of its component indices free.
    pub fn letter(n: usize, letter: Letter) -> Self {
        let s = letter.slots();
        let mut p = Self::zero(n, s);
        for k in index_tuples(n, s) {
            let mut full = k.clone();
            full.extend_from_slice(&k);
            p.add_entry(vec![letter], full, &Scalar::one());
        }
        p
    }

    /// The word with every component index free (outer product of its letters).
    pub fn word(n: usize, word: &[Letter]) -> Self {
        word.iter().fold(Self::one(n), |acc, &l| acc.mul(&Self::letter(n, l)))
    }

    /// One component of a word: fixed indices, coefficient `c`, no free slots.
    pub fn monomial(n: usize, word: Word, indices: Key, c: &Scalar) -> Result<Self> {
        if indices.len() != word_slots(&word) || indices.iter().any(|&i| i as usize >= n) {
            return Err(CoreError::Dimension("component indices do not fit the word".into()));
        }
        let mut p = Self::zero(n, 0);
        p.add_entry(word, indices, c);
        Ok(p)
    }

    /// An `n×n` numeric matrix as a scalar polynomial with free (row, col).
    pub fn from_matrix(n: usize, m: &CMatrix) -> Self {
        let mut p = Self::zero(n, 2);
        for (i, j, v) in m.entries() {
            p.add_entry(Vec::new(), key_of([i, j]), v);
        }
        p
    }

    /// An `n²×n²` two-leg matrix with free slots `(row₁, row₂, col₁, col₂)`.
    pub fn from_two_leg_matrix(n: usize, m: &CMatrix) -> Self {
        let mut p = Self::zero(n, 4);
        for (i, j, v) in m.entries() {
            p.add_entry(Vec::new(), key_of([i / n, i % n, j / n, j % n]), v);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nfree(&self) -> usize {
        self.nfree
    }

    pub fn terms(&self) -> &BTreeMap<Word, Tensor> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Tensor> {
        self.terms
    }

    pub fn from_terms(n: usize, nfree: usize, terms: BTreeMap<Word, Tensor>) -> Self {
        let mut p = Self::zero(n, nfree);
        for (w, t) in terms {
            p.add_tensor(w, &t, &Scalar::one());
        }
        p
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total number of nonzero tensor entries.
    pub fn nnz(&self) -> usize {
        self.terms.values().map(Tensor::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_entry(&mut self, word: Word, key: Key, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let t = self.terms.entry(word.clone()).or_default();
        t.add(key, v);
        if t.is_empty() {
            self.terms.remove(&word);
        }
    }

    pub fn add_tensor(&mut self, word: Word, t: &Tensor, factor: &Scalar) {
        if t.is_empty() || factor.is_zero() {
            return;
        }
        let slot = self.terms.entry(word.clone()).or_default();
        slot.add_tensor(t, factor);
        if slot.is_empty() {
            self.terms.remove(&word);
        }
    }

    fn check_sig(&self, other: &NCPoly) -> Result<()> {
        if self.nfree != other.nfree || self.n != other.n {
            return Err(CoreError::Signature(self.nfree, other.nfree));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_sig(other)?;
        let mut out = self.clone();
        out.add_assign_scaled(other, &Scalar::one());
        Ok(out)
    }

    pub fn try_sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_sig(other)?;
        let mut out = self.clone();
        out.add_assign_scaled(other, &Scalar::from_int(-1));
        Ok(out)
    }

    /// `self += c·other`. Panics on a signature mismatch.
    pub fn add_assign_scaled(&mut self, other: &NCPoly, c: &Scalar) {
        assert_eq!(self.nfree, other.nfree, "free-slot signature mismatch");
        for (w, t) in &other.terms {
            self.add_tensor(w.clone(), t, c);
        }
    }

    /// `self + other`; panics on a signature mismatch.
    pub fn plus(&self, other: &NCPoly) -> NCPoly {
        self.try_add(other).expect("free-slot signature mismatch")
    }

    /// `self − other`; panics on a signature mismatch.
    pub fn minus(&self, other: &NCPoly) -> NCPoly {
        self.try_sub(other).expect("free-slot signature mismatch")
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        let mut out = Self::zero(self.n, self.nfree);
        if c.is_zero() {
            return out;
        }
        for (w, t) in &self.terms {
            out.terms.insert(w.clone(), t.scale(c));
        }
        out
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&Scalar::from_int(-1))
    }

    /// Product with no contraction; free slots are `self`'s then `other`'s.
    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        self.mul_contract(other, &[])
    }

    /// Product summing over the pairs `(i, j)` of free slot `i` of `self`
    /// and free slot `j` of `other`. Remaining free slots keep their order,
    /// `self`'s first.
    pub fn mul_contract(&self, other: &NCPoly, pairs: &[(usize, usize)]) -> NCPoly {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let (na, nb) = (self.nfree, other.nfree);
        let keep_a: Vec<usize> = (0..na).filter(|i| !pairs.iter().any(|p| p.0 == *i)).collect();
        let keep_b: Vec<usize> = (0..nb).filter(|j| !pairs.iter().any(|p| p.1 == *j)).collect();
        let mut out = Self::zero(self.n, keep_a.len() + keep_b.len());
        type Index<'a> = FxHashMap<SmallVec<[u8; 8]>, Vec<(&'a Key, &'a Scalar)>>;
        let indexed: Vec<(&Word, Index<'_>)> = other
            .terms
            .iter()
            .map(|(w, t)| {
                let mut idx: Index<'_> = FxHashMap::default();
                for (k, v) in t.iter() {
                    let jk: SmallVec<[u8; 8]> = pairs.iter().map(|p| k[p.1]).collect();
                    idx.entry(jk).or_default().push((k, v));
                }
                (w, idx)
            })
            .collect();
        for (wa, ta) in &self.terms {
            for (wb, idx) in &indexed {
                let mut word = wa.clone();
                word.extend_from_slice(wb);
                let mut t = Tensor::new();
                for (ka, va) in ta.iter() {
                    let jk: SmallVec<[u8; 8]> = pairs.iter().map(|p| ka[p.0]).collect();
                    let Some(matches) = idx.get(&jk) else { continue };
                    for (kb, vb) in matches {
                        let mut key: Key = keep_a.iter().map(|&i| ka[i]).collect();
                        key.extend(keep_b.iter().map(|&j| kb[j]));
                        key.extend_from_slice(&ka[na..]);
                        key.extend_from_slice(&kb[nb..]);
                        t.add(key, &(va * *vb));
                    }
                }
                out.add_tensor(word, &t, &Scalar::one());
            }
        }
        out
    }

    /// Reorders free slots: new slot `i` is old slot `perm[i]`.
    pub fn permute_free(&self, perm: &[usize]) -> NCPoly {
        assert_eq!(perm.len(), self.nfree, "permutation length");
        let nf = self.nfree;
        let mut out = Self::zero(self.n, nf);
        for (w, t) in &self.terms {
            let t2 = t.map_keys(|k| {
                let mut key: Key = perm.iter().map(|&p| k[p]).collect();
                key.extend_from_slice(&k[nf..]);
                key
            });
            out.add_tensor(w.clone(), &t2, &Scalar::one());
        }
        out
    }

    /// Sums over free slots `i` and `j` set equal, removing both.
    pub fn trace(&self, i: usize, j: usize) -> NCPoly {
        assert!(i != j && i < self.nfree && j < self.nfree, "trace slots");
        let mut out = Self::zero(self.n, self.nfree - 2);
        for (w, t) in &self.terms {
            let mut t2 = Tensor::new();
            for (k, v) in t.iter() {
                if k[i] == k[j] {
                    let key: Key = k.iter().enumerate().filter(|(p, _)| *p != i && *p != j).map(|(_, &x)| x).collect();
                    t2.add(key, v);
                }
            }
            out.add_tensor(w.clone(), &t2, &Scalar::one());
        }
        out
    }

    /// Fixes some free slots to given indices (`Some`), keeping the others free.
    pub fn fix_free(&self, assignment: &[Option<u8>]) -> NCPoly {
        assert_eq!(assignment.len(), self.nfree, "assignment length");
        let nf = self.nfree;
        let keep = assignment.iter().filter(|a| a.is_none()).count();
        let mut out = Self::zero(self.n, keep);
        for (w, t) in &self.terms {
            let mut t2 = Tensor::new();
            for (k, v) in t.iter() {
                if assignment.iter().enumerate().all(|(p, a)| a.is_none_or(|x| k[p] == x)) {
                    let mut key: Key =
                        assignment.iter().enumerate().filter(|(_, a)| a.is_none()).map(|(p, _)| k[p]).collect();
                    key.extend_from_slice(&k[nf..]);
                    t2.add(key, v);
                }
            }
            out.add_tensor(w.clone(), &t2, &Scalar::one());
        }
        out
    }

    /// Restricts to the terms whose word satisfies `f`.
    pub fn filter_words(&self, f: impl Fn(&[Letter]) -> bool) -> NCPoly {
        let mut out = Self::zero(self.n, self.nfree);
        for (w, t) in &self.terms {
            if f(w) {
                out.terms.insert(w.clone(), t.clone());
            }
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> NCPoly {
        let mut out = Self::zero(self.n, self.nfree);
        for (w, t) in &self.terms {
            out.add_tensor(w.clone(), &t.map_values(&f), &Scalar::one());
        }
        out
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }
}

impl fmt::Display for NCPoly {
    /// One line per nonzero component: `[free | letter slots] coefficient · word`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, t) in &self.terms {
            let ws: Vec<String> = w.iter().map(Letter::to_string).collect();
            let ws = if ws.is_empty() { "1".to_string() } else { ws.join(" ") };
            for (k, v) in t.sorted() {
                if !first {
                    writeln!(f)?;
                }
                first = false;
                let (fr, sl) = k.split_at(self.nfree);
                write!(f, "{fr:?}{sl:?} ({v}) {ws}")?;
            }
        }
        Ok(())
    }
}
