//! Exact noncommutative rewriting for Zamolodchikov-Faddeev and
//! reflection-transmission algebras over a finite momentum grid.

pub mod catalog;
pub mod constructions;
pub mod context;
pub mod coproduct;
pub mod defect;
pub mod engine;
pub mod error;
pub mod hierarchy;
pub mod legs;
pub mod matrix;
pub mod momentum;
pub mod ops;
pub mod poly;
pub mod relations;
pub mod report;
pub mod residuals;
pub mod scalar;
pub mod smatrix;
pub mod weighted;

pub use catalog::{
    catalog_defect, catalog_smatrix, load_spec, validate_pair, CatalogSpec, DefectReport, FamilyParams, ResidualCheck,
    ResidualWitness,
};
pub use constructions::{
    build_generator, defect_generators, dressed_generators, verify_coideal, verify_defect_algebra,
    verify_dressed_relations, verify_inversion, verify_projection, verify_rho_homomorphism, verify_rho_involutive,
    GeneratorExpr, GeneratorRole,
};
pub use context::{DresserMode, ExprContext, Rule};
pub use coproduct::{coproduct, equal_mod_two_leg, TwoLegPoly};
pub use defect::{DefectFamily, DefectPair};
pub use engine::{commutator, equal_mod, nf, nf_bounded, nf_with, Comparison, Strategy};
pub use error::{CoreError, Result};
pub use hierarchy::{
    hamiltonian, verify_opaque_relations, verify_rt_hierarchy, verify_zf_hierarchy, Hamiltonian, HamiltonianKind,
};
pub use legs::{leg_product, Factor};
pub use matrix::{embed_single, kron_embed, permutation_operator, CMatrix};
pub use momentum::{Momentum, MomentumGrid};
pub use ops::{adjoint, dresser, left_dress, random_poly, random_poly_over, rho, right_dress, substitute, DresserKind};
pub use poly::{Key, Letter, LetterKind, NCPoly, Tensor, Word};
pub use relations::{Generators, Relation};
pub use report::{record_timings, CheckResult, CheckStatus, Outcome, VerificationReport};
pub use residuals::{
    residual_bybe, residual_defect, residual_mixed, residual_unitarity, residual_ybe, DefectResiduals, MixedKind,
};
pub use scalar::{parse_rational, Scalar};
pub use smatrix::{SMatrixFamily, SMatrixFn};
pub use weighted::{equal_weighted, weighted_leg_product, WFactor, Weighted};
