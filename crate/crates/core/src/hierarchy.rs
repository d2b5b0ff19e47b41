//! Grid Hamiltonians `Σ_k kⁿ X†(k)·X(k)` for the bulk (`X = a`) and defect
//! (`X = A`) generators, and checks of their commutation properties.

use std::fmt;

use crate::constructions::{build_generator, check_relation, outcome, GeneratorRole};
use crate::context::{DresserMode, ExprContext};
use crate::engine::{commutator, equal_mod, nf};
use crate::error::Result;
use crate::momentum::Momentum;
use crate::ops::{dresser, left_dress, right_dress, DresserKind};
use crate::poly::{LetterKind, NCPoly};
use crate::relations::{Generators, Relation};
use crate::report::{Outcome, VerificationReport};
use crate::scalar::Scalar;
use crate::weighted::{equal_weighted, weighted_leg_product, WFactor, Weighted};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HamiltonianKind {
    Bulk,
    Defect,
}

impl fmt::Display for HamiltonianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HamiltonianKind::Bulk => "bulk",
            HamiltonianKind::Defect => "defect",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hamiltonian {
    pub kind: HamiltonianKind,
    pub order: u32,
    pub body: Weighted,
}

/// `Σ_k Σ_i kⁿ X†_i(k) X_i(k)` over the grid. In opaque mode the defect
/// generators are the letters themselves.
pub fn hamiltonian(kind: HamiltonianKind, order: u32, ctx: &ExprContext) -> Result<Hamiltonian> {
    let n = ctx.n();
    let (ann, cre) = match (kind, ctx.mode()) {
        (HamiltonianKind::Bulk, _) | (HamiltonianKind::Defect, DresserMode::Opaque) => {
            (GeneratorRole::Annihilator, GeneratorRole::Creator)
        }
        (HamiltonianKind::Defect, DresserMode::Dressed) => {
            (GeneratorRole::DefectAnnihilator, GeneratorRole::DefectCreator)
        }
    };
    let mut body = Weighted::plain(NCPoly::zero(n, 0));
    for &k in ctx.grid().points() {
        let c = build_generator(cre, k, ctx)?.body;
        let a = build_generator(ann, k, ctx)?.body;
        let term = weighted_leg_product(n, 1, vec![WFactor::op(0, c, false, true), WFactor::op(0, a, true, false)]);
        body = body.try_add(&term.scale(&k.power(order)))?;
    }
    Ok(Hamiltonian { kind, order, body })
}

fn weighted_commutator(p: &Weighted, q: &Weighted) -> Weighted {
    Weighted::new(commutator(&p.body, &q.body), p.half_exp + q.half_exp)
}

/// `Σ_k k^power X†(k) Y(k) Z(±k)` style sums built by `term`.
fn grid_sum(ctx: &ExprContext, nfree: usize, mut term: impl FnMut(Momentum) -> Result<Weighted>) -> Result<Weighted> {
    let mut acc = Weighted::plain(NCPoly::zero(ctx.n(), nfree));
    for &k in ctx.grid().points() {
        acc = acc.try_add(&term(k)?)?;
    }
    Ok(acc)
}

fn order_sign(order: u32) -> i64 {
    if order.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Mutual commutativity, invariance under dressers, and equality of even
/// orders built from `a` and from `α`.
pub fn verify_zf_hierarchy(ctx: &ExprContext, orders: &[u32]) -> VerificationReport {
    let mut report = VerificationReport::new("bulk-hierarchy");
    let n = ctx.n();
    let hs: Vec<Result<Hamiltonian>> = orders.iter().map(|&o| hamiltonian(HamiltonianKind::Bulk, o, ctx)).collect();
    for (i, &m) in orders.iter().enumerate() {
        report.check(format!("self-adjoint/n={m}"), &[], || {
            let h = &hs[i].as_ref().map_err(Clone::clone)?.body.body;
            Ok(outcome(&equal_mod(&crate::ops::adjoint(h), h, ctx)?))
        });
        for (j, &o) in orders.iter().enumerate().skip(i + 1) {
            report.check(format!("commute/m={m},n={o}"), &[], || {
                let (hm, ho) = (hs[i].as_ref().map_err(Clone::clone)?, hs[j].as_ref().map_err(Clone::clone)?);
                Ok(Outcome::residual(nf(&commutator(&hm.body.body, &ho.body.body), ctx)?.nnz()))
            });
        }
    }
    for (i, &m) in orders.iter().enumerate() {
        for &k in ctx.grid().points() {
            report.check(format!("dresser-symmetry/n={m}"), &[k], || {
                let h = &hs[i].as_ref().map_err(Clone::clone)?.body.body;
                Ok(Outcome::residual(nf(&commutator(h, &ctx.letter(LetterKind::Dress, k)), ctx)?.nnz()))
            });
        }
    }
    for &m in orders.iter().filter(|&&m| m.is_multiple_of(2)) {
        report.check(format!("dressed-even-order/n={m}"), &[], || {
            let h = hamiltonian(HamiltonianKind::Bulk, m, ctx)?.body;
            let dressed = grid_sum(ctx, 0, |k| {
                let c = build_generator(GeneratorRole::DressedCreator, k, ctx)?.body;
                let a = build_generator(GeneratorRole::DressedAnnihilator, k, ctx)?.body;
                Ok(weighted_leg_product(n, 1, vec![WFactor::op(0, c, false, true), WFactor::op(0, a, true, false)])
                    .scale(&k.power(m)))
            })?;
            Ok(outcome(&equal_weighted(&h, &dressed, ctx)?))
        });
    }
    report
}

fn defect_generator(ctx: &ExprContext, creator: bool, k: Momentum) -> Result<Weighted> {
    let role = match (ctx.mode(), creator) {
        (DresserMode::Opaque, false) => GeneratorRole::Annihilator,
        (DresserMode::Opaque, true) => GeneratorRole::Creator,
        (DresserMode::Dressed, false) => GeneratorRole::DefectAnnihilator,
        (DresserMode::Dressed, true) => GeneratorRole::DefectCreator,
    };
    Ok(build_generator(role, k, ctx)?.body)
}

/// Parity law for mutual commutators, the action on `A`, `A†`, invariance
/// of `t`, `r`, and the decomposition into bulk part plus defect correction.
/// Invariance of `t`, `r` is re-checked with atomic `t`, `r` letters.
pub fn verify_rt_hierarchy(ctx: &ExprContext, orders: &[u32]) -> VerificationReport {
    let mut report = VerificationReport::new("defect-hierarchy");
    let n = ctx.n();
    let hs: Vec<Result<Hamiltonian>> = orders.iter().map(|&o| hamiltonian(HamiltonianKind::Defect, o, ctx)).collect();
    let get = |i: usize| hs[i].as_ref().map_err(Clone::clone);

    // Σ_k k^p A†(k) r(k) A(−k)
    let reflected_sum = |p: u32| {
        grid_sum(ctx, 0, |k| {
            let c = defect_generator(ctx, true, k)?;
            let a = defect_generator(ctx, false, -k)?;
            let r = Weighted::plain(dresser(ctx, DresserKind::Reflection, k)?);
            Ok(weighted_leg_product(
                n,
                1,
                vec![WFactor::op(0, c, false, true), WFactor::op(0, r, true, true), WFactor::op(0, a, true, false)],
            )
            .scale(&k.power(p)))
        })
    };

    for (i, &m) in orders.iter().enumerate() {
        report.check(format!("self-adjoint/n={m}"), &[], || {
            let h = &get(i)?.body;
            Ok(outcome(&equal_weighted(&h.map_body(|b| Ok(crate::ops::adjoint(b)))?, h, ctx)?))
        });
        for (j, &o) in orders.iter().enumerate().skip(i + 1) {
            report.check(format!("parity-commutator/m={m},n={o}"), &[], || {
                let comm = weighted_commutator(&get(i)?.body, &get(j)?.body);
                let coeff = order_sign(m) - order_sign(o);
                let expected = reflected_sum(m + o)?.scale(&Scalar::from_int(coeff));
                Ok(outcome(&equal_weighted(&comm, &expected, ctx)?))
            });
        }
    }

    for (i, &m) in orders.iter().enumerate() {
        for &k in ctx.grid().points() {
            report.check(format!("annihilator-action/n={m}"), &[k], || {
                let h = &get(i)?.body;
                let (a, am) = (defect_generator(ctx, false, k)?, defect_generator(ctx, false, -k)?);
                let comm = weighted_commutator(h, &a);
                // −kⁿ([1 + t(k)]A(k) + (−1)ⁿ r(k)A(−k))
                let dressed = Weighted::new(
                    left_dress(ctx, k, &a.body, &am.body.scale(&Scalar::from_int(order_sign(m))))?,
                    a.half_exp,
                );
                let expected = a.try_add(&dressed)?.scale(&-k.power(m));
                Ok(outcome(&equal_weighted(&comm, &expected, ctx)?))
            });
            report.check(format!("creator-action/n={m}"), &[k], || {
                let h = &get(i)?.body;
                let (c, cm) = (defect_generator(ctx, true, k)?, defect_generator(ctx, true, -k)?);
                let comm = weighted_commutator(h, &c);
                let dressed = Weighted::new(
                    right_dress(ctx, k, &c.body, &cm.body.scale(&Scalar::from_int(order_sign(m))))?,
                    c.half_exp,
                );
                let expected = c.try_add(&dressed)?.scale(&k.power(m));
                Ok(outcome(&equal_weighted(&comm, &expected, ctx)?))
            });
        }
    }

    let symmetry = |report: &mut VerificationReport, ctx: &ExprContext, prefix: &str| {
        let hs: Vec<Result<Hamiltonian>> =
            orders.iter().map(|&o| hamiltonian(HamiltonianKind::Defect, o, ctx)).collect();
        for (i, &m) in orders.iter().enumerate() {
            for &k in ctx.grid().points() {
                for (kind, name) in
                    [(DresserKind::Transmission, "transmission"), (DresserKind::Reflection, "reflection")]
                {
                    report.check(format!("{prefix}/{name}/n={m}"), &[k], || {
                        let h = &hs[i].as_ref().map_err(Clone::clone)?.body.body;
                        let d = dresser(ctx, kind, k)?;
                        Ok(Outcome::residual(nf(&commutator(h, &d), ctx)?.nnz()))
                    });
                }
            }
        }
    };
    symmetry(&mut report, ctx, "defect-symmetry");
    let opaque = ctx.with_mode(DresserMode::Opaque);
    symmetry(&mut report, &opaque, "defect-symmetry-opaque");

    for (i, &m) in orders.iter().enumerate() {
        report.check(format!("bulk-decomposition/n={m}"), &[], || {
            let h = &get(i)?.body;
            let bulk = hamiltonian(HamiltonianKind::Bulk, m, ctx)?.body;
            let correction = grid_sum(ctx, 0, |k| {
                let c = Weighted::plain(ctx.letter(LetterKind::Create, k));
                let am = ctx.letter(LetterKind::Annihilate, -k);
                let dressed = left_dress(ctx, k, &ctx.letter(LetterKind::Annihilate, k), &am)?;
                Ok(weighted_leg_product(
                    n,
                    1,
                    vec![WFactor::op(0, c, false, true), WFactor::op(0, Weighted::plain(dressed), true, false)],
                )
                .scale(&k.power(m)))
            })?;
            Ok(outcome(&equal_weighted(h, &bulk.try_add(&correction)?, ctx)?))
        });
    }
    report
}

/// The exchange relations among atomic `A`, `A†`, `t`, `r` letters on momentum
/// pairs with `k₁ ≠ ±k₂`, where each relation is a single oriented rewrite rule.
pub fn verify_opaque_relations(ctx: &ExprContext) -> VerificationReport {
    let opaque = ctx.with_mode(DresserMode::Opaque);
    let mut report = VerificationReport::new("opaque-relations");
    let g = Generators::letters(&opaque);
    let g = Generators::new(
        &opaque,
        |k| g.annihilator(k),
        |k| g.creator(k),
        |k1, k2| crate::relations::defect_contact(&opaque, k1, k2),
    );
    for rel in Relation::PARTICLE.into_iter().chain(Relation::DEFECT_EXCHANGE) {
        for (k1, k2) in opaque.grid().pairs().filter(|&(a, b)| a != b && a != -b) {
            check_relation(&mut report, "letters", rel, &g, k1, k2);
        }
    }
    report
}
