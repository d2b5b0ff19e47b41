//! The exchange relations of the bulk and reflection-transmission algebras,
//! instantiated on a chosen set of annihilation/creation operators.

use std::fmt;

use crate::context::ExprContext;
use crate::error::Result;
use crate::momentum::Momentum;
use crate::ops::{dresser, DresserKind};
use crate::poly::{LetterKind, NCPoly};
use crate::weighted::{weighted_leg_product, WFactor, Weighted};

type OpFn<'a> = Box<dyn Fn(Momentum) -> Result<Weighted> + 'a>;
type ContactFn<'a> = Box<dyn Fn(Momentum, Momentum) -> Result<Weighted> + 'a>;

/// Annihilation and creation operators (one free slot each) plus the contact
/// term of their exchange relation (two free slots).
pub struct Generators<'a> {
    pub ctx: &'a ExprContext,
    annihilator: OpFn<'a>,
    creator: OpFn<'a>,
    contact: ContactFn<'a>,
}

/// `δ_ij` at `k₁ = k₂`, zero otherwise.
pub fn bulk_contact(ctx: &ExprContext, k1: Momentum, k2: Momentum) -> Weighted {
    if k1 == k2 {
        Weighted::plain(NCPoly::identity(ctx.n()))
    } else {
        Weighted::plain(NCPoly::zero(ctx.n(), 2))
    }
}

/// `(δ_ij + t_ij(k₁))` at `k₁ = k₂`, `r_ij(k₁)` at `k₁ = −k₂`, zero otherwise.
pub fn defect_contact(ctx: &ExprContext, k1: Momentum, k2: Momentum) -> Result<Weighted> {
    let n = ctx.n();
    let mut out = NCPoly::zero(n, 2);
    if k1 == k2 {
        out = NCPoly::identity(n).plus(&dresser(ctx, DresserKind::Transmission, k1)?);
    } else if k1 == -k2 {
        out = dresser(ctx, DresserKind::Reflection, k1)?;
    }
    Ok(Weighted::plain(out))
}

impl<'a> Generators<'a> {
    pub fn new(
        ctx: &'a ExprContext,
        annihilator: impl Fn(Momentum) -> Result<Weighted> + 'a,
        creator: impl Fn(Momentum) -> Result<Weighted> + 'a,
        contact: impl Fn(Momentum, Momentum) -> Result<Weighted> + 'a,
    ) -> Self {
        Generators { ctx, annihilator: Box::new(annihilator), creator: Box::new(creator), contact: Box::new(contact) }
    }

    /// The letters `a`, `a†` with the bulk contact term.
    pub fn letters(ctx: &'a ExprContext) -> Self {
        Self::new(
            ctx,
            move |k| Ok(Weighted::plain(ctx.letter(LetterKind::Annihilate, k))),
            move |k| Ok(Weighted::plain(ctx.letter(LetterKind::Create, k))),
            move |k1, k2| Ok(bulk_contact(ctx, k1, k2)),
        )
    }

    pub fn annihilator(&self, k: Momentum) -> Result<Weighted> {
        (self.annihilator)(k)
    }

    pub fn creator(&self, k: Momentum) -> Result<Weighted> {
        (self.creator)(k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    AnnihilatorExchange,
    CreatorExchange,
    AnnihilatorCreator,
    AnnihilatorTransmission,
    AnnihilatorReflection,
    TransmissionCreator,
    ReflectionCreator,
    TransmissionTransmission,
    TransmissionReflection,
    ReflectionReflection,
    Completeness,
    Anticommutation,
}

impl Relation {
    pub const PARTICLE: [Relation; 3] =
        [Relation::AnnihilatorExchange, Relation::CreatorExchange, Relation::AnnihilatorCreator];

    pub const DEFECT_EXCHANGE: [Relation; 7] = [
        Relation::AnnihilatorTransmission,
        Relation::AnnihilatorReflection,
        Relation::TransmissionCreator,
        Relation::ReflectionCreator,
        Relation::TransmissionTransmission,
        Relation::TransmissionReflection,
        Relation::ReflectionReflection,
    ];

    pub const DEFECT_POINTWISE: [Relation; 2] = [Relation::Completeness, Relation::Anticommutation];

    pub fn name(self) -> &'static str {
        match self {
            Relation::AnnihilatorExchange => "annihilator-exchange",
            Relation::CreatorExchange => "creator-exchange",
            Relation::AnnihilatorCreator => "annihilator-creator",
            Relation::AnnihilatorTransmission => "annihilator-transmission",
            Relation::AnnihilatorReflection => "annihilator-reflection",
            Relation::TransmissionCreator => "transmission-creator",
            Relation::ReflectionCreator => "reflection-creator",
            Relation::TransmissionTransmission => "transmission-transmission",
            Relation::TransmissionReflection => "transmission-reflection",
            Relation::ReflectionReflection => "reflection-reflection",
            Relation::Completeness => "completeness",
            Relation::Anticommutation => "anticommutation",
        }
    }

    /// True for relations indexed by a single momentum.
    pub fn is_pointwise(self) -> bool {
        matches!(self, Relation::Completeness | Relation::Anticommutation)
    }

    /// Left and right sides at `(k1, k2)`; pointwise relations use `k1` only.
    pub fn sides(self, g: &Generators<'_>, k1: Momentum, k2: Momentum) -> Result<(Weighted, Weighted)> {
        use WFactor::Plain;
        let ctx = g.ctx;
        let n = ctx.n();
        let ann = |leg, k| g.annihilator(k).map(|op| WFactor::op(leg, op, true, false));
        let cre = |leg, k| g.creator(k).map(|op| WFactor::op(leg, op, false, true));
        let tr = |leg, k| {
            dresser(ctx, DresserKind::Transmission, k).map(|p| WFactor::op(leg, Weighted::plain(p), true, true))
        };
        let rf =
            |leg, k| dresser(ctx, DresserKind::Reflection, k).map(|p| WFactor::op(leg, Weighted::plain(p), true, true));
        let s12 = |a, b| Plain(ctx.s12(a, b));
        let s21 = |a, b| Plain(ctx.s21(a, b));
        let lp = |f: Vec<WFactor>| weighted_leg_product(n, 2, f);
        let chain = |f: Vec<WFactor>| weighted_leg_product(n, 1, f);
        Ok(match self {
            Relation::AnnihilatorExchange => {
                (lp(vec![ann(0, k1)?, ann(1, k2)?]), lp(vec![s21(k2, k1), ann(1, k2)?, ann(0, k1)?]))
            }
            Relation::CreatorExchange => {
                (lp(vec![cre(0, k1)?, cre(1, k2)?]), lp(vec![cre(1, k2)?, cre(0, k1)?, s21(k2, k1)]))
            }
            Relation::AnnihilatorCreator => {
                let exchange = lp(vec![cre(1, k2)?, s12(k1, k2), ann(0, k1)?]);
                (lp(vec![ann(0, k1)?, cre(1, k2)?]), exchange.try_add(&(g.contact)(k1, k2)?)?)
            }
            Relation::AnnihilatorTransmission => {
                (lp(vec![ann(0, k1)?, tr(1, k2)?]), lp(vec![s21(k2, k1), tr(1, k2)?, s12(k1, k2), ann(0, k1)?]))
            }
            Relation::AnnihilatorReflection => {
                (lp(vec![ann(0, k1)?, rf(1, k2)?]), lp(vec![s21(k2, k1), rf(1, k2)?, s12(k1, -k2), ann(0, k1)?]))
            }
            Relation::TransmissionCreator => {
                (lp(vec![tr(0, k1)?, cre(1, k2)?]), lp(vec![cre(1, k2)?, s12(k1, k2), tr(0, k1)?, s21(k2, k1)]))
            }
            Relation::ReflectionCreator => {
                (lp(vec![rf(0, k1)?, cre(1, k2)?]), lp(vec![cre(1, k2)?, s12(k1, k2), rf(0, k1)?, s21(k2, -k1)]))
            }
            Relation::TransmissionTransmission => (
                lp(vec![s12(k1, k2), tr(0, k1)?, s21(k2, k1), tr(1, k2)?]),
                lp(vec![tr(1, k2)?, s12(k1, k2), tr(0, k1)?, s21(k2, k1)]),
            ),
            Relation::TransmissionReflection => (
                lp(vec![s12(k1, k2), tr(0, k1)?, s21(k2, k1), rf(1, k2)?]),
                lp(vec![rf(1, k2)?, s12(k1, -k2), tr(0, k1)?, s21(-k2, k1)]),
            ),
            Relation::ReflectionReflection => (
                lp(vec![s12(k1, k2), rf(0, k1)?, s21(k2, -k1), rf(1, k2)?]),
                lp(vec![rf(1, k2)?, s12(k1, -k2), rf(0, k1)?, s21(-k2, -k1)]),
            ),
            Relation::Completeness => {
                let tt = chain(vec![tr(0, k1)?, tr(0, k1)?]);
                let rr = chain(vec![rf(0, k1)?, rf(0, -k1)?]);
                (tt.try_add(&rr)?, Weighted::plain(NCPoly::identity(n)))
            }
            Relation::Anticommutation => {
                let tr_ = chain(vec![tr(0, k1)?, rf(0, k1)?]);
                let rt = chain(vec![rf(0, k1)?, tr(0, -k1)?]);
                (tr_.try_add(&rt)?, Weighted::plain(NCPoly::zero(n, 2)))
            }
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
