//! Fixtures shared by the benchmarks.

use num_rational::Rational64;
use zfrt_core::{random_poly, CatalogSpec, DefectFamily, ExprContext, MomentumGrid, NCPoly, SMatrixFamily};

fn rational() -> SMatrixFamily {
    SMatrixFamily::Rational { g: Rational64::from_integer(1) }
}

/// `N = 2`, rational S, flip mirror on `{±1, ±2}`.
pub fn mirror_context() -> ExprContext {
    ExprContext::new(CatalogSpec::new(2, MomentumGrid::ints(&[1, 2]), rational(), DefectFamily::Mirror { flip: true }))
        .expect("admissible context")
}

/// `N = 2`, rational S, scalar contact defect on `{±5, ±9}`.
pub fn contact_context() -> ExprContext {
    let eta = Rational64::from_integer(12);
    ExprContext::new(CatalogSpec::new(2, MomentumGrid::ints(&[5, 9]), rational(), DefectFamily::ScalarContact { eta }))
        .expect("admissible context")
}

/// Reproducible random words of length up to `max_len`.
pub fn words(ctx: &ExprContext, count: u64, max_len: usize) -> Vec<NCPoly> {
    (0..count).map(|seed| random_poly(seed, max_len, ctx).expect("random word")).collect()
}
