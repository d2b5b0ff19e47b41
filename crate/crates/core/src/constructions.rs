//! Dressed generators `α`, `A` built from the bulk letters and the defect
//! data, and mechanical checks of the identities they satisfy.

use std::fmt;
use std::str::FromStr;

use crate::context::ExprContext;
use crate::coproduct::{coproduct, equal_mod_two_leg, TwoLegPoly};
use crate::engine::{equal_mod, nf, Comparison};
use crate::error::{CoreError, Result};
use crate::momentum::Momentum;
use crate::ops::{dresser, left_dress, rho, right_dress, DresserKind};
use crate::poly::{index_tuples, Letter, LetterKind, NCPoly};
use crate::relations::{bulk_contact, defect_contact, Generators, Relation};
use crate::report::{Outcome, VerificationReport};
use crate::scalar::Scalar;
use crate::weighted::{equal_weighted, Weighted};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorRole {
    Annihilator,
    Creator,
    /// `α(k) = t(k)a(k) + r(k)a(−k)`.
    DressedAnnihilator,
    /// `α†(k) = a†(k)t(k) + a†(−k)r(−k)`.
    DressedCreator,
    /// `A(k) = (a(k) + α(k))/√2`.
    DefectAnnihilator,
    /// `A†(k) = (a†(k) + α†(k))/√2`.
    DefectCreator,
    Transmission,
    Reflection,
}

impl GeneratorRole {
    pub const ALL: [GeneratorRole; 8] = [
        GeneratorRole::Annihilator,
        GeneratorRole::Creator,
        GeneratorRole::DressedAnnihilator,
        GeneratorRole::DressedCreator,
        GeneratorRole::DefectAnnihilator,
        GeneratorRole::DefectCreator,
        GeneratorRole::Transmission,
        GeneratorRole::Reflection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorRole::Annihilator => "a",
            GeneratorRole::Creator => "ad",
            GeneratorRole::DressedAnnihilator => "alpha",
            GeneratorRole::DressedCreator => "alphad",
            GeneratorRole::DefectAnnihilator => "A",
            GeneratorRole::DefectCreator => "Ad",
            GeneratorRole::Transmission => "t",
            GeneratorRole::Reflection => "r",
        }
    }

    /// Number of component indices.
    pub fn slots(self) -> usize {
        match self {
            GeneratorRole::Transmission | GeneratorRole::Reflection => 2,
            _ => 1,
        }
    }

    /// The role of the adjoint generator.
    pub fn adjoint(self) -> GeneratorRole {
        use GeneratorRole::*;
        match self {
            Annihilator => Creator,
            Creator => Annihilator,
            DressedAnnihilator => DressedCreator,
            DressedCreator => DressedAnnihilator,
            DefectAnnihilator => DefectCreator,
            DefectCreator => DefectAnnihilator,
            Transmission => Transmission,
            Reflection => Reflection,
        }
    }
}

impl fmt::Display for GeneratorRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorRole {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        GeneratorRole::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| CoreError::InvalidParameter(format!("unknown generator role `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorExpr {
    pub role: GeneratorRole,
    pub momentum: Momentum,
    /// Free slots are the component indices.
    pub body: Weighted,
}

impl GeneratorExpr {
    /// The component with all indices fixed.
    pub fn component(&self, indices: &[u8]) -> Result<Weighted> {
        if indices.len() != self.role.slots() {
            return Err(CoreError::Signature(indices.len(), self.role.slots()));
        }
        let assignment: Vec<Option<u8>> = indices.iter().map(|&i| Some(i)).collect();
        Ok(Weighted::new(self.body.body.fix_free(&assignment), self.body.half_exp))
    }
}

fn alpha(ctx: &ExprContext, k: Momentum) -> Result<NCPoly> {
    left_dress(ctx, k, &ctx.letter(LetterKind::Annihilate, k), &ctx.letter(LetterKind::Annihilate, -k))
}

fn alpha_dagger(ctx: &ExprContext, k: Momentum) -> Result<NCPoly> {
    right_dress(ctx, k, &ctx.letter(LetterKind::Create, k), &ctx.letter(LetterKind::Create, -k))
}

pub fn build_generator(role: GeneratorRole, k: Momentum, ctx: &ExprContext) -> Result<GeneratorExpr> {
    use GeneratorRole::*;
    ctx.grid().require(k)?;
    if !matches!(role, Annihilator | Creator | Transmission) {
        ctx.grid().require(-k)?;
    }
    let body = match role {
        Annihilator => Weighted::plain(ctx.letter(LetterKind::Annihilate, k)),
        Creator => Weighted::plain(ctx.letter(LetterKind::Create, k)),
        DressedAnnihilator => Weighted::plain(alpha(ctx, k)?),
        DressedCreator => Weighted::plain(alpha_dagger(ctx, k)?),
        DefectAnnihilator => Weighted::new(ctx.letter(LetterKind::Annihilate, k).plus(&alpha(ctx, k)?), 1),
        DefectCreator => Weighted::new(ctx.letter(LetterKind::Create, k).plus(&alpha_dagger(ctx, k)?), 1),
        Transmission => Weighted::plain(dresser(ctx, DresserKind::Transmission, k)?),
        Reflection => Weighted::plain(dresser(ctx, DresserKind::Reflection, k)?),
    };
    Ok(GeneratorExpr { role, momentum: k, body })
}

fn generator(ctx: &ExprContext, role: GeneratorRole, k: Momentum) -> Result<Weighted> {
    Ok(build_generator(role, k, ctx)?.body)
}

/// `α`, `α†` with the bulk contact term.
pub fn dressed_generators(ctx: &ExprContext) -> Generators<'_> {
    Generators::new(
        ctx,
        move |k| generator(ctx, GeneratorRole::DressedAnnihilator, k),
        move |k| generator(ctx, GeneratorRole::DressedCreator, k),
        move |k1, k2| Ok(bulk_contact(ctx, k1, k2)),
    )
}

/// `A`, `A†` with the defect contact term.
pub fn defect_generators(ctx: &ExprContext) -> Generators<'_> {
    Generators::new(
        ctx,
        move |k| generator(ctx, GeneratorRole::DefectAnnihilator, k),
        move |k| generator(ctx, GeneratorRole::DefectCreator, k),
        move |k1, k2| defect_contact(ctx, k1, k2),
    )
}

pub(crate) fn outcome(c: &Comparison) -> Outcome {
    Outcome::residual(c.witness.nnz())
}

pub(crate) fn check_relation(
    report: &mut VerificationReport,
    prefix: &str,
    rel: Relation,
    g: &Generators<'_>,
    k1: Momentum,
    k2: Momentum,
) {
    let momenta: Vec<Momentum> = if rel.is_pointwise() { vec![k1] } else { vec![k1, k2] };
    report.check(format!("{prefix}/{rel}"), &momenta, || {
        let (lhs, rhs) = rel.sides(g, k1, k2)?;
        Ok(outcome(&equal_weighted(&lhs, &rhs, g.ctx)?))
    });
}

fn check_relations(report: &mut VerificationReport, prefix: &str, relations: &[Relation], g: &Generators<'_>) {
    let ctx = g.ctx;
    for &rel in relations {
        if rel.is_pointwise() {
            for &k in ctx.grid().points() {
                check_relation(report, prefix, rel, g, k, k);
            }
        } else {
            for (k1, k2) in ctx.grid().pairs() {
                check_relation(report, prefix, rel, g, k1, k2);
            }
        }
    }
}

/// Dressed `t`, `r` against the bulk letters: the seven mixed exchange
/// relations on every momentum pair and completeness/anticommutation at every point.
pub fn verify_dressed_relations(ctx: &ExprContext) -> VerificationReport {
    let mut report = VerificationReport::new("dressed-relations");
    let g = Generators::letters(ctx);
    check_relations(&mut report, "letters", &Relation::DEFECT_EXCHANGE, &g);
    check_relations(&mut report, "letters", &Relation::DEFECT_POINTWISE, &g);
    report
}

/// ρ maps each bulk exchange relation to zero, and `α`, `α†` satisfy the
/// mixed exchange relations with `t`, `r`.
pub fn verify_rho_homomorphism(ctx: &ExprContext) -> VerificationReport {
    let mut report = VerificationReport::new("rho-homomorphism");
    let letters = Generators::letters(ctx);
    for rel in Relation::PARTICLE {
        for (k1, k2) in ctx.grid().pairs() {
            report.check(format!("image/{rel}"), &[k1, k2], || {
                let (lhs, rhs) = rel.sides(&letters, k1, k2)?;
                let diff = lhs.try_sub(&rhs)?.body;
                Ok(Outcome::residual(rho(&diff, ctx)?.nnz()))
            });
        }
    }
    check_relations(&mut report, "dressed", &Relation::DEFECT_EXCHANGE, &dressed_generators(ctx));
    report
}

/// `a(k) = t(k)α(k) + r(k)α(−k)` and `a†(k) = α†(k)t(k) + α†(−k)r(−k)`.
pub fn verify_inversion(ctx: &ExprContext) -> VerificationReport {
    let mut report = VerificationReport::new("inversion");
    for &k in ctx.grid().points() {
        report.check("annihilator", &[k], || {
            let rebuilt = left_dress(ctx, k, &alpha(ctx, k)?, &alpha(ctx, -k)?)?;
            Ok(outcome(&equal_mod(&ctx.letter(LetterKind::Annihilate, k), &rebuilt, ctx)?))
        });
        report.check("creator", &[k], || {
            let rebuilt = right_dress(ctx, k, &alpha_dagger(ctx, k)?, &alpha_dagger(ctx, -k)?)?;
            Ok(outcome(&equal_mod(&ctx.letter(LetterKind::Create, k), &rebuilt, ctx)?))
        });
    }
    report
}

/// `A`, `A†` obey the particle exchange relations with the defect contact term.
pub fn verify_defect_algebra(ctx: &ExprContext) -> VerificationReport {
    let mut report = VerificationReport::new("defect-algebra");
    check_relations(&mut report, "generators", &Relation::PARTICLE, &defect_generators(ctx));
    report
}

/// `A(k) = t(k)A(k) + r(k)A(−k)`, its adjoint, and ρ-invariance of `A`, `A†`.
pub fn verify_projection(ctx: &ExprContext) -> VerificationReport {
    let mut report = VerificationReport::new("projection");
    for &k in ctx.grid().points() {
        report.check("annihilator", &[k], || {
            let (a, am) = (
                generator(ctx, GeneratorRole::DefectAnnihilator, k)?,
                generator(ctx, GeneratorRole::DefectAnnihilator, -k)?,
            );
            let rebuilt = Weighted::new(left_dress(ctx, k, &a.body, &am.body)?, a.half_exp);
            Ok(outcome(&equal_weighted(&a, &rebuilt, ctx)?))
        });
        report.check("creator", &[k], || {
            let (a, am) =
                (generator(ctx, GeneratorRole::DefectCreator, k)?, generator(ctx, GeneratorRole::DefectCreator, -k)?);
            let rebuilt = Weighted::new(right_dress(ctx, k, &a.body, &am.body)?, a.half_exp);
            Ok(outcome(&equal_weighted(&a, &rebuilt, ctx)?))
        });
        for role in [GeneratorRole::DefectAnnihilator, GeneratorRole::DefectCreator] {
            report.check(format!("rho-fixes/{role}"), &[k], || {
                let g = generator(ctx, role, k)?;
                let image = g.map_body(|b| rho(b, ctx))?;
                Ok(outcome(&equal_weighted(&g, &image, ctx)?))
            });
        }
    }
    report
}

/// ρ∘ρ is the identity on `a`, `a†`, and ρ maps `α`, `α†` back to `a`, `a†`.
pub fn verify_rho_involutive(ctx: &ExprContext) -> VerificationReport {
    let mut report = VerificationReport::new("rho-involutive");
    for &k in ctx.grid().points() {
        for (kind, role) in [
            (LetterKind::Annihilate, GeneratorRole::DressedAnnihilator),
            (LetterKind::Create, GeneratorRole::DressedCreator),
        ] {
            let x = ctx.letter(kind, k);
            let name = if kind == LetterKind::Annihilate { "annihilator" } else { "creator" };
            report.check(format!("rho-squared/{name}"), &[k], || {
                let twice = rho(&rho(&x, ctx)?, ctx)?;
                Ok(outcome(&equal_mod(&twice, &x, ctx)?))
            });
            report.check(format!("rho-of-dressed/{name}"), &[k], || {
                let image = rho(&generator(ctx, role, k)?.body, ctx)?;
                Ok(outcome(&equal_mod(&image, &x, ctx)?))
            });
        }
    }
    report
}

/// `Σ L_ax(k) L⁻¹_yb(back) ⊗ d_xy` for a dresser `d` with two free slots.
fn coideal_side(ctx: &ExprContext, k: Momentum, back: Momentum, d: &NCPoly) -> TwoLegPoly {
    let n = ctx.n();
    let word = vec![Letter::new(LetterKind::Dress, k), Letter::new(LetterKind::DressInv, back)];
    let mut left = NCPoly::zero(n, 4);
    for key in index_tuples(n, 4) {
        let mut full = key.clone();
        full.extend_from_slice(&key);
        left.add_entry(word.clone(), full, &Scalar::one());
    }
    TwoLegPoly::tensor(&left, d, &[(1, 0), (2, 1)])
}

/// Coproducts of dressed `t(k)`, `r(k)` lie in the dresser algebra tensored with the span of `t`, `r`.
pub fn verify_coideal(ctx: &ExprContext) -> VerificationReport {
    let mut report = VerificationReport::new("coideal");
    for &k in ctx.grid().points() {
        for (kind, back, name) in
            [(DresserKind::Transmission, k, "transmission"), (DresserKind::Reflection, -k, "reflection")]
        {
            report.check(name, &[k], || {
                let d = dresser(ctx, kind, k)?;
                let lhs = coproduct(&d)?;
                let rhs = coideal_side(ctx, k, back, &d);
                let (equal, witness) = equal_mod_two_leg(&lhs, &rhs, ctx)?;
                let entries = witness.terms().values().map(|t| t.len()).sum();
                Ok(if equal { Outcome::zero() } else { Outcome::residual(entries) })
            });
        }
    }
    report
}

/// Normal form of a generator, for display.
pub fn generator_normal_form(role: GeneratorRole, k: Momentum, ctx: &ExprContext) -> Result<Weighted> {
    generator(ctx, role, k)?.map_body(|b| nf(b, ctx))
}
