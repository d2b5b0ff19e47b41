use num_rational::{BigRational, Rational64};
use proptest::prelude::*;
use zfrt_cli::expr::{Atom, Coeff, ExprFactor, Term};
use zfrt_cli::{from_poly, lower, parse_expr, Expr};
use zfrt_core::{nf, CatalogSpec, DefectFamily, ExprContext, LetterKind, MomentumGrid, SMatrixFamily};

const CORPUS: &str = include_str!("data/corpus.txt");

fn ctx() -> ExprContext {
    let spec = CatalogSpec::new(
        2,
        MomentumGrid::ints(&[1, 2]),
        SMatrixFamily::Rational { g: Rational64::from_integer(1) },
        DefectFamily::Mirror { flip: true },
    );
    ExprContext::new(spec).unwrap()
}

#[test]
fn corpus_round_trips() {
    let c = ctx();
    let lines: Vec<&str> = CORPUS.lines().filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(lines.len(), 50);
    for line in lines {
        let e = parse_expr(line).unwrap_or_else(|err| panic!("{line}: {err}"));
        let printed = e.to_string();
        let again = parse_expr(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert_eq!(again, e, "{line}");
        assert_eq!(again.to_string(), printed);
        assert_eq!(lower(&again, &c).unwrap(), lower(&e, &c).unwrap());
    }
}

#[test]
fn normal_forms_are_expressions_with_the_same_value() {
    let c = ctx();
    for line in CORPUS.lines().take(30) {
        let p = nf(&lower(&parse_expr(line).unwrap(), &c).unwrap(), &c).unwrap();
        let printed = from_poly(&p).unwrap().to_string();
        let back = lower(&parse_expr(&printed).unwrap(), &c).unwrap();
        assert_eq!(back, p, "{line}");
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..7).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn atom() -> impl Strategy<Value = Atom> {
    let kinds = prop::sample::select(vec![
        LetterKind::Annihilate,
        LetterKind::Create,
        LetterKind::Transmission,
        LetterKind::Reflection,
        LetterKind::Dress,
        LetterKind::DressInv,
    ]);
    prop_oneof![
        1 => Just(Atom::One),
        6 => (kinds, prop::collection::vec(1usize..3, 2), prop::sample::select(vec![-2i64, -1, 1, 2]), 1i64..3).prop_map(
            |(kind, idx, k, d)| Atom::Op { kind, indices: idx[..kind.slots()].to_vec(), momentum: Rational64::new(k, d) }
        ),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf =
        prop::collection::vec((rational(), rational(), prop::collection::vec(atom(), 1..4)), 1..4).prop_map(|ts| {
            Expr {
                terms: ts
                    .into_iter()
                    .map(|(re, im, atoms)| Term {
                        coeff: Coeff { re, im },
                        factors: atoms.into_iter().map(ExprFactor::Atom).collect(),
                    })
                    .collect(),
            }
        });
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop::collection::vec((rational(), prop::collection::vec(inner, 1..3)), 1..3).prop_map(|ts| Expr {
            terms: ts
                .into_iter()
                .map(|(re, groups)| Term {
                    coeff: Coeff { re, im: BigRational::from_integer(0.into()) },
                    factors: groups.into_iter().map(ExprFactor::Group).collect(),
                })
                .collect(),
        })
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(e in expr()) {
        let printed = e.to_string();
        let back = parse_expr(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert_eq!(back, e);
    }
}
