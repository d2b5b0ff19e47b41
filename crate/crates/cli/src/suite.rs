//! Runs the selected verification targets and assembles one report.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use zfrt_core::{
    residual_bybe, residual_defect, residual_mixed, residual_unitarity, residual_ybe, validate_pair, verify_coideal,
    verify_defect_algebra, verify_dressed_relations, verify_inversion, verify_opaque_relations, verify_projection,
    verify_rho_homomorphism, verify_rho_involutive, verify_rt_hierarchy, verify_zf_hierarchy, CatalogSpec, ExprContext,
    MixedKind, Outcome, VerificationReport,
};

use crate::emit::config_digest;
use crate::error::{CliError, Result};

/// Verification targets in report order. Command-line names are given by `name`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Smatrix,
    Defect,
    DressedRelations,
    RhoHomomorphism,
    Inversion,
    DefectAlgebra,
    Projection,
    RhoInvolutive,
    Coideal,
    ZfHierarchy,
    RtHierarchy,
}

impl Target {
    pub const ALL: [Target; 11] = [
        Target::Smatrix,
        Target::Defect,
        Target::DressedRelations,
        Target::RhoHomomorphism,
        Target::Inversion,
        Target::DefectAlgebra,
        Target::Projection,
        Target::RhoInvolutive,
        Target::Coideal,
        Target::ZfHierarchy,
        Target::RtHierarchy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Smatrix => "smatrix",
            Target::Defect => "defect",
            Target::DressedRelations => "prop2",
            Target::RhoHomomorphism => "prop3",
            Target::Inversion => "inversion",
            Target::DefectAlgebra => "thm1",
            Target::Projection => "projection",
            Target::RhoInvolutive => "rho2",
            Target::Coideal => "coideal",
            Target::ZfHierarchy => "zf-hierarchy",
            Target::RtHierarchy => "rt-hierarchy",
        }
    }

    /// Targets that run the rewriting engine rather than numeric residuals.
    pub fn uses_engine(self) -> bool {
        !matches!(self, Target::Smatrix | Target::Defect)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| CliError::UnknownTarget(s.to_string()))
    }
}

/// Accepts names or comma-separated lists; `all` selects every target.
pub fn parse_targets<S: AsRef<str>>(items: &[S]) -> Result<BTreeSet<Target>> {
    let mut out = BTreeSet::new();
    for item in items {
        for name in item.as_ref().split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if name == "all" {
                out.extend(Target::ALL);
            } else {
                out.insert(name.parse()?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Hierarchy orders checked by the two hierarchy targets.
    pub orders: Vec<u32>,
    /// Run engine targets on separate threads.
    pub parallel: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { orders: vec![0, 1, 2, 3], parallel: true }
    }
}

fn residual(m: &zfrt_core::CMatrix) -> zfrt_core::Result<Outcome> {
    Ok(Outcome::residual(m.nonzero_count()))
}

fn smatrix_report(spec: &CatalogSpec) -> Result<VerificationReport> {
    let s = spec.smatrix_fn()?;
    let mut report = VerificationReport::new("smatrix");
    for (a, b, c) in spec.grid.triples() {
        report.check("ybe", &[a, b, c], || residual(&residual_ybe(&s, a, b, c)));
    }
    for (a, b) in spec.grid.pairs() {
        report.check("unitarity", &[a, b], || residual(&residual_unitarity(&s, a, b)));
    }
    Ok(report)
}

fn defect_report(spec: &CatalogSpec) -> Result<VerificationReport> {
    let s = spec.smatrix_fn()?;
    let d = spec.defect_pair()?;
    let mut report = VerificationReport::new("defect");
    for &k in spec.grid.points() {
        let r = residual_defect(&d, k);
        report.check("transmission-hermiticity", &[k], || residual(&r.transmission_hermiticity));
        report.check("reflection-hermiticity", &[k], || residual(&r.reflection_hermiticity));
        report.check("completeness", &[k], || residual(&r.completeness));
        report.check("anticommutation", &[k], || residual(&r.anticommutation));
    }
    for (a, b) in spec.grid.pairs() {
        report.check("boundary-ybe", &[a, b], || residual(&residual_bybe(&s, &d, a, b)));
        report.check("transmission-ybe", &[a, b], || residual(&residual_mixed(&s, &d, a, b, MixedKind::Transmission)));
        report.check("reflection-transmission-ybe", &[a, b], || {
            residual(&residual_mixed(&s, &d, a, b, MixedKind::ReflectionTransmission))
        });
    }
    Ok(report)
}

/// Records whether the engine ran on a context that passes every residual check.
fn admissibility_report(spec: &CatalogSpec) -> VerificationReport {
    let mut report = VerificationReport::new("context");
    report.check("admissible", &[], || {
        if !spec.grid.is_symmetric() {
            return Ok(Outcome::residual(0).with_detail("grid is not closed under negation"));
        }
        let v = validate_pair(spec)?;
        let failing: Vec<&str> = v.checks.iter().filter(|c| !c.pass()).map(|c| c.name).collect();
        Ok(if failing.is_empty() {
            Outcome::zero()
        } else {
            Outcome::residual(0).with_detail(format!("failing residuals: {}", failing.join(", ")))
        })
    });
    report
}

fn engine_report(target: Target, ctx: &ExprContext, orders: &[u32]) -> Vec<VerificationReport> {
    match target {
        Target::DressedRelations => vec![verify_dressed_relations(ctx)],
        Target::RhoHomomorphism => vec![verify_rho_homomorphism(ctx)],
        Target::Inversion => vec![verify_inversion(ctx)],
        Target::DefectAlgebra => vec![verify_defect_algebra(ctx)],
        Target::Projection => vec![verify_projection(ctx)],
        Target::RhoInvolutive => vec![verify_rho_involutive(ctx)],
        Target::Coideal => vec![verify_coideal(ctx)],
        Target::ZfHierarchy => vec![verify_zf_hierarchy(ctx, orders)],
        Target::RtHierarchy => vec![verify_rt_hierarchy(ctx, orders), verify_opaque_relations(ctx)],
        Target::Smatrix | Target::Defect => unreachable!("numeric targets do not use the engine"),
    }
}

/// Runs `targets` on `spec`. Engine targets run even when the context fails
/// its residual checks, so broken inputs surface as failing identities; a
/// `context/admissible` entry records the residual status in that case.
pub fn run_suite(spec: &CatalogSpec, targets: &BTreeSet<Target>, opts: &SuiteOptions) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("verify");
    report.config_digest = config_digest(spec);
    if targets.contains(&Target::Smatrix) {
        report.absorb(smatrix_report(spec)?);
    }
    if targets.contains(&Target::Defect) {
        report.absorb(defect_report(spec)?);
    }
    let engine: Vec<Target> = targets.iter().copied().filter(|t| t.uses_engine()).collect();
    if engine.is_empty() {
        return Ok(report);
    }
    report.absorb(admissibility_report(spec));
    let ctx = ExprContext::waived(spec.clone())?;
    let parts: Vec<Vec<VerificationReport>> = if opts.parallel {
        std::thread::scope(|scope| {
            let ctx = &ctx;
            let handles: Vec<_> =
                engine.iter().map(|&t| scope.spawn(move || engine_report(t, ctx, &opts.orders))).collect();
            handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
        })
    } else {
        engine.iter().map(|&t| engine_report(t, &ctx, &opts.orders)).collect()
    };
    for sub in parts.into_iter().flatten() {
        report.absorb(sub);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use zfrt_core::{DefectFamily, MomentumGrid, SMatrixFamily};

    fn spec(d: DefectFamily) -> CatalogSpec {
        CatalogSpec::new(2, MomentumGrid::ints(&[1, 2]), SMatrixFamily::Rational { g: Rational64::from_integer(1) }, d)
    }

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert_eq!(parse_targets(&["all"]).unwrap().len(), 11);
        assert_eq!(
            parse_targets(&["thm1,smatrix", "thm1"]).unwrap().into_iter().collect::<Vec<_>>(),
            [Target::Smatrix, Target::DefectAlgebra]
        );
        assert!(matches!(parse_targets(&["prop9"]), Err(CliError::UnknownTarget(_))));
    }

    #[test]
    fn empty_selection_gives_empty_passing_report() {
        let r = run_suite(&spec(DefectFamily::Free), &BTreeSet::new(), &SuiteOptions::default()).unwrap();
        assert!(r.pass && r.checks.is_empty());
        assert_eq!(r.config_digest.len(), 64);
    }

    #[test]
    fn tampered_defect_fails() {
        let targets = parse_targets(&["defect"]).unwrap();
        let r = run_suite(&spec(DefectFamily::Tampered), &targets, &SuiteOptions::default()).unwrap();
        assert!(!r.pass);
        assert!(r.failures().all(|c| c.id.starts_with("defect/") && c.witness_nonzero_entries > 0));
        assert!(r.failures().any(|c| c.id == "defect/completeness"));
    }

    #[test]
    fn parallel_and_sequential_runs_agree() {
        let targets = parse_targets(&["projection", "rho2", "coideal"]).unwrap();
        let s = spec(DefectFamily::Mirror { flip: true });
        let a = run_suite(&s, &targets, &SuiteOptions::default()).unwrap();
        let b = run_suite(&s, &targets, &SuiteOptions { parallel: false, ..SuiteOptions::default() }).unwrap();
        assert_eq!(a, b);
        assert!(a.pass, "{:?}", a.failures().next());
        assert_eq!(a.checks[0].id, "context/admissible");
    }
}
