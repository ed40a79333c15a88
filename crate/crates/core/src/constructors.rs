//! Exact soliton scenarios for each family, the Ricci-profile classifier and
//! the scalar-curvature window sweep.

use nalgebra::SymmetricEigen;
use thiserror::Error;

use crate::frame::{Vec3, DIM};
use crate::geometry::{riemannian_curvature, StructureConstants};
use crate::residuals::{full_report, ScenarioError, SolitonScenario, Verdict};
use crate::torsion::{connection_with_torsion, Contorsion, ReducibleTorsionParams};

/// `κ s_g` lower end of the hyperbolic window.
pub const WINDOW_LOW: f64 = -24.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("scalar curvature must be negative, got {0}")]
    NonNegativeScalar(f64),
    #[error("family requires a scalar curvature value")]
    MissingScalar,
    #[error("sign choice must be +1 or -1, got {0}")]
    InvalidSign(f64),
    #[error("gamma vanishes for these parameters; use the skew Heisenberg family")]
    DegeneratesToSkew,
    #[error("kappa * s_g = {kappa_s} lies outside the window ({low}, {high})", low = WINDOW_LOW, high = 0)]
    OutOfWindow { kappa_s: f64 },
    #[error("sweep needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    GenericReducibleHeisenberg,
    SkewHeisenberg,
    SkewHyperbolic,
    BoundaryVanishingTorsion,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::GenericReducibleHeisenberg, Family::SkewHeisenberg, Family::SkewHyperbolic, Family::BoundaryVanishingTorsion];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::GenericReducibleHeisenberg => "GENERIC_REDUCIBLE_HEISENBERG",
            Family::SkewHeisenberg => "SKEW_HEISENBERG",
            Family::SkewHyperbolic => "SKEW_HYPERBOLIC",
            Family::BoundaryVanishingTorsion => "BOUNDARY_VANISHING_TORSION",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyDescriptor {
    pub family: Family,
    pub kappa: f64,
    pub scalar: Option<f64>,
    pub sign: f64,
}

/// Parameters of a constructed scenario, for display and checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedParams {
    pub alpha: f64,
    pub gamma: f64,
    /// Heisenberg bracket magnitude `|[e₁,e₂]|`.
    pub lambda: Option<f64>,
    /// Hyperbolic model parameter.
    pub a: Option<f64>,
    pub h: f64,
    pub scalar: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constructed {
    pub family: Family,
    pub scenario: SolitonScenario,
    pub params: DerivedParams,
}

fn check_kappa(kappa: f64) -> Result<(), ConstructError> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(ConstructError::NonPositiveKappa(kappa))
    }
}

fn check_scalar(scalar: f64) -> Result<(), ConstructError> {
    if scalar < 0.0 && scalar.is_finite() {
        Ok(())
    } else {
        Err(ConstructError::NonNegativeScalar(scalar))
    }
}

/// Heisenberg model whose axis `ξ = e₃` satisfies `∇^g ξ = α ⋆ξ`.
fn heisenberg_for(alpha: f64) -> StructureConstants {
    StructureConstants::heisenberg(-2.0 * alpha)
}

/// `A = α g + γ ξ⊗ξ` on Heisenberg, with `s_g = −2α²` and `κ(2α + γ)² = 1`.
pub fn construct_generic_reducible(kappa: f64, scalar: f64, sign: f64) -> Result<Constructed, ConstructError> {
    check_kappa(kappa)?;
    check_scalar(scalar)?;
    if sign != 1.0 && sign != -1.0 {
        return Err(ConstructError::InvalidSign(sign));
    }
    let alpha = (-scalar / 2.0).sqrt();
    let h = (-2.0 * scalar).sqrt();
    let gamma = sign / kappa.sqrt() - 2.0 * alpha;
    if gamma.abs() <= 1e-12 * (1.0 + 2.0 * alpha) {
        return Err(ConstructError::DegeneratesToSkew);
    }
    let params = ReducibleTorsionParams::along_e3(alpha, gamma);
    let scenario = SolitonScenario::from_params(heisenberg_for(alpha), &params, h, Vec3::zero(), kappa)?;
    Ok(Constructed {
        family: Family::GenericReducibleHeisenberg,
        scenario,
        params: DerivedParams { alpha, gamma, lambda: Some(2.0 * alpha), a: None, h, scalar },
    })
}

/// Skew torsion on Heisenberg with `4κα² = 1`.
pub fn construct_skew_heisenberg(kappa: f64) -> Result<Constructed, ConstructError> {
    check_kappa(kappa)?;
    let alpha = 1.0 / (2.0 * kappa.sqrt());
    let h = 1.0 / kappa.sqrt();
    let scenario = SolitonScenario::new(heisenberg_for(alpha), Contorsion::skew(alpha), h, Vec3::zero(), kappa)?;
    Ok(Constructed {
        family: Family::SkewHeisenberg,
        scenario,
        params: DerivedParams { alpha, gamma: 0.0, lambda: Some(2.0 * alpha), a: None, h, scalar: -0.5 / kappa },
    })
}

/// Torsion parameter solving `κ(𝔥² + 12α²)² = 48𝔥²` on the positive branch.
pub fn hyperbolic_alpha(kappa: f64, h: f64) -> f64 {
    (((48.0 * h * h / kappa).sqrt() - h * h) / 12.0).max(0.0).sqrt()
}

/// Skew torsion on the hyperbolic model with `κ s_g ∈ (−24, 0)`.
pub fn construct_hyperbolic_skew(kappa: f64, scalar: f64) -> Result<Constructed, ConstructError> {
    check_kappa(kappa)?;
    let kappa_s = kappa * scalar;
    if !(kappa_s > WINDOW_LOW && kappa_s < 0.0) {
        return Err(ConstructError::OutOfWindow { kappa_s });
    }
    let a = (-scalar / 6.0).sqrt();
    let h = (-2.0 * scalar).sqrt();
    let alpha = hyperbolic_alpha(kappa, h);
    let scenario = SolitonScenario::new(StructureConstants::hyperbolic(a), Contorsion::skew(alpha), h, Vec3::zero(), kappa)?;
    Ok(Constructed {
        family: Family::SkewHyperbolic,
        scenario,
        params: DerivedParams { alpha, gamma: 0.0, lambda: None, a: Some(a), h, scalar },
    })
}

/// Hyperbolic model with `κ s_g = −24` and `D = ∇^g`.
pub fn boundary_vanishing_torsion(kappa: f64) -> Result<Constructed, ConstructError> {
    check_kappa(kappa)?;
    let a = (4.0 / kappa).sqrt();
    let h = (48.0 / kappa).sqrt();
    let scenario = SolitonScenario::new(StructureConstants::hyperbolic(a), Contorsion::zero(), h, Vec3::zero(), kappa)?;
    Ok(Constructed {
        family: Family::BoundaryVanishingTorsion,
        scenario,
        params: DerivedParams { alpha: 0.0, gamma: 0.0, lambda: None, a: Some(a), h, scalar: WINDOW_LOW / kappa },
    })
}

pub fn construct(desc: &FamilyDescriptor) -> Result<Constructed, ConstructError> {
    match desc.family {
        Family::GenericReducibleHeisenberg => {
            construct_generic_reducible(desc.kappa, desc.scalar.ok_or(ConstructError::MissingScalar)?, desc.sign)
        }
        Family::SkewHeisenberg => construct_skew_heisenberg(desc.kappa),
        Family::SkewHyperbolic => construct_hyperbolic_skew(desc.kappa, desc.scalar.ok_or(ConstructError::MissingScalar)?),
        Family::BoundaryVanishingTorsion => boundary_vanishing_torsion(desc.kappa),
    }
}

/// Admissible `s_g` interval `(−24/κ, 0)` for hyperbolic skew solitons.
pub fn scalar_window(kappa: f64) -> (f64, f64) {
    (WINDOW_LOW / kappa, 0.0)
}

/// Largest component of `∇^{g,A} A` on a scenario.
pub fn parallel_torsion_defect(sc: &SolitonScenario) -> f64 {
    connection_with_torsion(&sc.model, &sc.contorsion).contorsion_parallel_defect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    HeisenbergType,
    HyperbolicType,
    Flat,
    Other,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::HeisenbergType => "HEISENBERG_TYPE",
            ModelKind::HyperbolicType => "HYPERBOLIC_TYPE",
            ModelKind::Flat => "FLAT",
            ModelKind::Other => "OTHER",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassificationVerdict {
    pub kind: ModelKind,
    /// Descending.
    pub ricci_eigenvalues: [f64; 3],
    pub simple_axis: Option<Vec3>,
}

/// Relative tolerance for eigenvalue coincidences.
pub const CLASSIFY_TOL: f64 = 1e-9;

pub fn classify_model(model: &StructureConstants) -> ClassificationVerdict {
    let ricci = riemannian_curvature(model).ricci;
    let eig = SymmetricEigen::new(ricci.0);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let ev = order.map(|i| eig.eigenvalues[i]);
    let scale = ev.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let close = |x: f64, y: f64| (x - y).abs() <= CLASSIFY_TOL * scale;

    let (kind, simple_axis) = if ev.iter().all(|x| x.abs() <= CLASSIFY_TOL) {
        (ModelKind::Flat, None)
    } else if close(ev[0], ev[2]) {
        (if ev[0] < 0.0 { ModelKind::HyperbolicType } else { ModelKind::Other }, None)
    } else if ev[0] > 0.0 && close(ev[1], ev[2]) && close(ev[0], -ev[1]) {
        let mut axis = Vec3(eig.eigenvectors.column(order[0]).into_owned().normalize());
        let lead = (0..DIM).max_by(|&i, &j| axis[i].abs().total_cmp(&axis[j].abs())).unwrap_or(0);
        if axis[lead] < 0.0 {
            axis = -axis;
        }
        (ModelKind::HeisenbergType, Some(axis))
    } else {
        (ModelKind::Other, None)
    };
    ClassificationVerdict { kind, ricci_eigenvalues: ev, simple_axis }
}

pub fn classify(sc: &SolitonScenario) -> ClassificationVerdict {
    classify_model(&sc.model)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Solution,
    NotSolution,
    OutOfWindow,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Solution => "SOLUTION",
            RowStatus::NotSolution => "NOT_SOLUTION",
            RowStatus::OutOfWindow => "OUT_OF_WINDOW",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub scalar: f64,
    pub kappa_s: f64,
    pub alpha: Option<f64>,
    pub h: Option<f64>,
    pub residual_norm: Option<f64>,
    pub status: RowStatus,
}

/// Endpoints of the sampled `κ s_g` range, strictly inside the window.
pub const SWEEP_RANGE: (f64, f64) = (-23.99, -0.01);

/// Hyperbolic skew solitons at the given scalar curvatures.
pub fn sweep_scalars(kappa: f64, scalars: &[f64], tol: f64) -> Result<Vec<SweepRow>, ConstructError> {
    check_kappa(kappa)?;
    scalars
        .iter()
        .map(|&s| match construct_hyperbolic_skew(kappa, s) {
            Ok(c) => {
                let report = full_report(&c.scenario, tol)?;
                Ok(SweepRow {
                    scalar: s,
                    kappa_s: kappa * s,
                    alpha: Some(c.params.alpha),
                    h: Some(c.params.h),
                    residual_norm: Some(report.norms.system_max()),
                    status: match report.verdict {
                        Verdict::Solution => RowStatus::Solution,
                        Verdict::NotSolution => RowStatus::NotSolution,
                    },
                })
            }
            Err(ConstructError::OutOfWindow { kappa_s }) => Ok(SweepRow {
                scalar: s,
                kappa_s,
                alpha: None,
                h: None,
                residual_norm: None,
                status: RowStatus::OutOfWindow,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// `n_points` evenly spaced samples of `κ s_g` over [`SWEEP_RANGE`].
pub fn sweep_window(kappa: f64, n_points: usize, tol: f64) -> Result<Vec<SweepRow>, ConstructError> {
    check_kappa(kappa)?;
    if n_points < 2 {
        return Err(ConstructError::TooFewPoints(n_points));
    }
    let (lo, hi) = SWEEP_RANGE;
    let scalars: Vec<f64> =
        (0..n_points).map(|i| (lo + (hi - lo) * i as f64 / (n_points - 1) as f64) / kappa).collect();
    sweep_scalars(kappa, &scalars, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residuals::DEFAULT_TOL;

    fn assert_solution(c: &Constructed) {
        let r = full_report(&c.scenario, DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Solution, "{:?} {:?}", c.family, r.norms);
    }

    #[test]
    fn generic_reducible_examples() {
        let c = construct_generic_reducible(1.0, -2.0, 1.0).unwrap();
        assert!((c.params.alpha - 1.0).abs() < 1e-15);
        assert!((c.params.h - 2.0).abs() < 1e-15);
        assert!((c.params.gamma + 1.0).abs() < 1e-15);
        assert_solution(&c);

        assert_eq!(construct_generic_reducible(1.0, -0.5, 1.0), Err(ConstructError::DegeneratesToSkew));

        let c = construct_generic_reducible(1.0, -0.5, -1.0).unwrap();
        assert!((c.params.gamma + 2.0).abs() < 1e-15);
        assert!((c.params.alpha - 0.5).abs() < 1e-15);
        assert!((c.params.h - 1.0).abs() < 1e-15);
        assert_solution(&c);

        assert!(matches!(construct_generic_reducible(1.0, 0.0, 1.0), Err(ConstructError::NonNegativeScalar(_))));
        assert!(matches!(construct_generic_reducible(1.0, -1.0, 0.5), Err(ConstructError::InvalidSign(_))));
    }

    #[test]
    fn skew_heisenberg_examples() {
        let c = construct_skew_heisenberg(1.0).unwrap();
        assert_eq!((c.params.alpha, c.params.h, c.params.scalar), (0.5, 1.0, -0.5));
        assert_solution(&c);
        let v = classify(&c.scenario);
        assert_eq!(v.kind, ModelKind::HeisenbergType);
        assert!((v.ricci_eigenvalues[0] - 0.5).abs() < 1e-12);
        let c = construct_skew_heisenberg(4.0).unwrap();
        assert_eq!((c.params.alpha, c.params.h, c.params.scalar), (0.25, 0.5, -0.125));
        assert_solution(&c);

        let mut sc = construct_skew_heisenberg(1.0).unwrap().scenario;
        sc.contorsion = Contorsion::skew(0.4);
        assert!(full_report(&sc, DEFAULT_TOL).unwrap().norms.system_max() > 1e-3);
        assert!(matches!(construct_skew_heisenberg(0.0), Err(ConstructError::NonPositiveKappa(_))));
    }

    #[test]
    fn hyperbolic_examples() {
        let c = construct_hyperbolic_skew(1.0, -6.0).unwrap();
        assert!((c.params.a.unwrap() - 1.0).abs() < 1e-15);
        assert!((c.params.h - 12f64.sqrt()).abs() < 1e-15);
        assert!((c.params.alpha - 1.0).abs() < 1e-15);
        assert_solution(&c);
        assert_eq!(classify(&c.scenario).kind, ModelKind::HyperbolicType);

        assert!(matches!(construct_hyperbolic_skew(1.0, -24.0), Err(ConstructError::OutOfWindow { .. })));
        assert!(matches!(construct_hyperbolic_skew(1.0, 0.0), Err(ConstructError::OutOfWindow { .. })));

        let c = construct_hyperbolic_skew(2.0, -3.0).unwrap();
        assert!((c.params.h * c.params.h - 6.0).abs() < 1e-14);
        assert!((c.params.alpha * c.params.alpha - 0.5).abs() < 1e-14);
        assert_solution(&c);
    }

    #[test]
    fn out_of_window_message_prints_window() {
        let e = construct_hyperbolic_skew(1.0, -24.0).unwrap_err();
        assert!(e.to_string().contains("(-24, 0)"), "{e}");
    }

    #[test]
    fn boundary_examples() {
        let c = boundary_vanishing_torsion(1.0).unwrap();
        assert_eq!(c.params.scalar, -24.0);
        assert!((riemannian_curvature(&c.scenario.model).scalar + 24.0).abs() < 1e-12);
        assert!((c.params.h - 48f64.sqrt()).abs() < 1e-15);
        assert_solution(&c);
        let c = boundary_vanishing_torsion(2.0).unwrap();
        assert_eq!(c.params.scalar, -12.0);
        assert!((c.params.h - 24f64.sqrt()).abs() < 1e-15);
        assert_solution(&c);

        let mut sc = boundary_vanishing_torsion(1.0).unwrap().scenario;
        sc.contorsion = Contorsion::skew(0.01);
        assert_eq!(full_report(&sc, DEFAULT_TOL).unwrap().verdict, Verdict::NotSolution);
    }

    #[test]
    fn window_examples() {
        assert_eq!(scalar_window(1.0), (-24.0, 0.0));
        assert_eq!(scalar_window(0.5), (-48.0, 0.0));
        assert_eq!(scalar_window(3.0), (-8.0, 0.0));
    }

    #[test]
    fn classify_examples() {
        let v = classify_model(&StructureConstants::heisenberg(1.0));
        assert_eq!(v.kind, ModelKind::HeisenbergType);
        assert!((nalgebra::Vector3::from(v.ricci_eigenvalues) - nalgebra::Vector3::new(0.5, -0.5, -0.5)).norm() < 1e-12);
        assert!((v.simple_axis.unwrap() - Vec3::basis(2)).norm() < 1e-12);

        let v = classify_model(&StructureConstants::hyperbolic(1.0));
        assert_eq!(v.kind, ModelKind::HyperbolicType);
        assert!((nalgebra::Vector3::from(v.ricci_eigenvalues) + nalgebra::Vector3::repeat(2.0)).norm() < 1e-12);

        assert_eq!(classify_model(&StructureConstants::abelian()).kind, ModelKind::Flat);
        assert_eq!(classify_model(&StructureConstants::milnor(1.0, 1.0, 1.0)).kind, ModelKind::Other);
        assert_eq!(classify_model(&StructureConstants::milnor(1.0, 2.0, 3.0)).kind, ModelKind::Other);
    }

    #[test]
    fn sweep_examples() {
        let rows = sweep_window(1.0, 5, DEFAULT_TOL).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.status == RowStatus::Solution));
        let rows = sweep_scalars(1.0, &[-24.0, 1.0, -6.0], DEFAULT_TOL).unwrap();
        assert_eq!(rows[0].status, RowStatus::OutOfWindow);
        assert_eq!(rows[1].status, RowStatus::OutOfWindow);
        assert_eq!(rows[2].status, RowStatus::Solution);
        assert_eq!(sweep_window(1.0, 1, DEFAULT_TOL), Err(ConstructError::TooFewPoints(1)));
        let rows = sweep_window(2.0, 10, DEFAULT_TOL).unwrap();
        assert!(rows.iter().all(|r| r.scalar > -12.0 && r.scalar < 0.0));
    }

    #[test]
    fn constructed_torsion_is_parallel() {
        let all = [
            construct_generic_reducible(1.0, -2.0, 1.0).unwrap(),
            construct_generic_reducible(0.7, -3.0, -1.0).unwrap(),
            construct_skew_heisenberg(2.0).unwrap(),
            construct_hyperbolic_skew(1.0, -10.0).unwrap(),
            boundary_vanishing_torsion(3.0).unwrap(),
        ];
        for c in &all {
            assert!(parallel_torsion_defect(&c.scenario) < 1e-12, "{:?}", c.family);
        }
    }
}
