//! Residuals of the three-dimensional heterotic soliton system for
//! frame-constant data `(g, φ, 𝔥, D)` on a Lie group with a left-invariant
//! metric.

use nalgebra::Matrix3;
use thiserror::Error;

use crate::frame::{curv_compose, curv_norm_sq, hodge_star, wedge, CurvatureOperator, Form2, SymBilinear, Vec3, DIM};
use crate::geometry::{
    codifferential, exterior_derivative, levi_civita, riemannian_curvature, validate, GeometryError, StructureConstants,
    STRUCTURE_TOL,
};
use crate::tensor::FrameTensor;
use crate::torsion::{build_reducible, connection_with_torsion, curvature_d, Contorsion, ReducibleTorsionParams, TorsionError};

/// Default verdict tolerance on residual norms.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("h must be positive, got {0}")]
    NonPositiveH(f64),
    #[error("phi must be closed: phi([e{}, e{}]) = {residual:e}", .i + 1, .j + 1)]
    NotClosed { i: usize, j: usize, residual: f64 },
    #[error("non-finite scenario input")]
    NonFinite,
    #[error(
        "skew contorsion part |beta| = {0:e} is not allowed: a parallel axis with beta != 0 has \
         divergence 2*beta, which cannot integrate to zero on a compact quotient"
    )]
    CompactnessRule(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResidualError {
    #[error("identity requires skew torsion A = alpha g")]
    NotSkewTorsion,
}

/// A validated configuration `(g, φ, 𝔥, D)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolitonScenario {
    pub model: StructureConstants,
    pub contorsion: Contorsion,
    pub h: f64,
    pub phi: Vec3,
    pub kappa: f64,
}

impl SolitonScenario {
    pub fn new(model: StructureConstants, contorsion: Contorsion, h: f64, phi: Vec3, kappa: f64) -> Result<Self, ScenarioError> {
        let sc = Self { model, contorsion, h, phi, kappa };
        sc.validate()?;
        Ok(sc)
    }

    pub fn from_params(
        model: StructureConstants,
        params: &ReducibleTorsionParams,
        h: f64,
        phi: Vec3,
        kappa: f64,
    ) -> Result<Self, ScenarioError> {
        if params.beta.abs() > STRUCTURE_TOL {
            return Err(ScenarioError::CompactnessRule(params.beta.abs()));
        }
        Self::new(model, build_reducible(params)?, h, phi, kappa)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let finite = self.h.is_finite()
            && self.kappa.is_finite()
            && self.phi.is_finite()
            && self.contorsion.0.iter().all(|x| x.is_finite());
        if !finite {
            return Err(ScenarioError::NonFinite);
        }
        if self.kappa <= 0.0 {
            return Err(ScenarioError::NonPositiveKappa(self.kappa));
        }
        if self.h <= 0.0 {
            return Err(ScenarioError::NonPositiveH(self.h));
        }
        validate(&self.model)?;
        let zeta = self.contorsion.decompose().zeta.norm();
        if zeta > STRUCTURE_TOL {
            return Err(ScenarioError::CompactnessRule(zeta));
        }
        for i in 0..DIM {
            for j in i + 1..DIM {
                let b = self.model.bracket(&Vec3::basis(i), &Vec3::basis(j));
                let residual = self.phi.dot(&b);
                if residual.abs() > STRUCTURE_TOL {
                    return Err(ScenarioError::NotClosed { i, j, residual });
                }
            }
        }
        Ok(())
    }

    /// Skew parameter `α` when the contorsion is `α g`.
    pub fn skew_alpha(&self) -> Option<f64> {
        let d = self.contorsion.decompose();
        (d.theta.norm() <= STRUCTURE_TOL && d.zeta.norm() <= STRUCTURE_TOL).then_some(d.trace_part)
    }

    pub fn curvature_d(&self) -> CurvatureOperator {
        curvature_d(&self.model, &connection_with_torsion(&self.model, &self.contorsion))
    }
}

/// `∇^g φ` for a frame-constant 1-form, as a general 2-tensor.
fn nabla_phi(model: &StructureConstants, phi: &Vec3) -> Matrix3<f64> {
    levi_civita(model).derivative_of_vector(phi)
}

/// Symmetric part of `Ric^{g,H}` for frame-constant `𝔥`:
/// `Ric^g − (𝔥²/2) g`.
pub fn ric_gh(model: &StructureConstants, h: f64) -> SymBilinear {
    riemannian_curvature(model).ricci - SymBilinear::identity() * (0.5 * h * h)
}

/// Symmetric part of the first system equation:
/// `Ric^g + ∇^g φ − (𝔥²/2) g + κ R^D∘R^D`.
pub fn einstein_residual(sc: &SolitonScenario) -> SymBilinear {
    let r = sc.curvature_d();
    ric_gh(&sc.model, sc.h) + SymBilinear::from_matrix(nabla_phi(&sc.model, &sc.phi)) + curv_compose(&r, &r) * sc.kappa
}

/// Skew part of the first system equation:
/// `−½ ⋆(d𝔥 − 𝔥φ) + ½ dφ`, with `d𝔥 = 0`.
pub fn einstein_skew_residual(sc: &SolitonScenario) -> Form2 {
    hodge_star(&maxwell_residual(sc)) * -0.5 + exterior_derivative(&sc.model, &sc.phi) * 0.5
}

/// `(d*_D R^D + φ⌟R^D)(e_x)` for each frame vector, as 2-forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YangMillsResidual(pub [Form2; 3]);

impl YangMillsResidual {
    /// Row `x` holds the dual components of the residual at `e_x`.
    pub fn dual_grid(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|x, a| self.0[x].0[a])
    }

    pub fn norm(&self) -> f64 {
        self.dual_grid().norm()
    }
}

fn form_from_grid(m: Matrix3<f64>) -> Form2 {
    Form2::from_matrix(&(0.5 * (m - m.transpose())))
}

/// General path: `−Σ_i (D_{e_i} R^D)_{e_i, X} + R^D_{φ, X}`, with `D` acting on
/// all four slots of `R^D`.
pub fn yang_mills_residual(sc: &SolitonScenario) -> YangMillsResidual {
    let conn = connection_with_torsion(&sc.model, &sc.contorsion);
    let r = curvature_d(&sc.model, &conn);
    let rt = FrameTensor::from_curvature(&r);
    let dr = conn.covariant_derivative(&rt);
    let out = std::array::from_fn(|x| {
        let grid = Matrix3::from_fn(|c, d| {
            let div: f64 = (0..DIM).map(|i| dr.get(&[i, i, x, c, d])).sum();
            let contraction: f64 = (0..DIM).map(|i| sc.phi[i] * rt.get(&[i, x, c, d])).sum();
            -div + contraction
        });
        form_from_grid(grid)
    });
    YangMillsResidual(out)
}

/// Skew-torsion specialization
/// `d^{∇^g}Ric^g(X) − 3α ⋆Ric^g_0(X) + R^g_{φ,X} + α² φ∧X`.
pub fn yang_mills_skew_closed_form(sc: &SolitonScenario) -> Result<YangMillsResidual, ResidualError> {
    let alpha = sc.skew_alpha().ok_or(ResidualError::NotSkewTorsion)?;
    let geo = riemannian_curvature(&sc.model);
    let ric0 = geo.ricci.traceless();
    let dric = levi_civita(&sc.model).covariant_derivative(&FrameTensor::from_matrix(&geo.ricci.0));
    let out = std::array::from_fn(|x| {
        let ex = Vec3::basis(x);
        let grid = Matrix3::from_fn(|c, d| dric.get(&[c, x, d]) - dric.get(&[d, x, c]));
        form_from_grid(grid) - hodge_star(&ric0.apply(&ex)) * (3.0 * alpha)
            + geo.riemann.eval(&sc.phi, &ex)
            + wedge(&sc.phi, &ex) * (alpha * alpha)
    });
    Ok(YangMillsResidual(out))
}

/// `δ^g φ + |φ|² − 𝔥² + κ |R^D|²`.
pub fn dilaton_residual(sc: &SolitonScenario) -> f64 {
    codifferential(&sc.model, &sc.phi) + sc.phi.norm_sq() - sc.h * sc.h + sc.kappa * curv_norm_sq(&sc.curvature_d())
}

/// `d𝔥 − 𝔥 φ` with `𝔥` frame-constant.
pub fn maxwell_residual(sc: &SolitonScenario) -> Vec3 {
    sc.phi * -sc.h
}

/// `s_g − 3δ^g φ − 2|φ|² + ½ 𝔥²`.
pub fn trace_identity_residual(sc: &SolitonScenario) -> f64 {
    let s = riemannian_curvature(&sc.model).scalar;
    s - 3.0 * codifferential(&sc.model, &sc.phi) - 2.0 * sc.phi.norm_sq() + 0.5 * sc.h * sc.h
}

/// `2κ|Ric_0|² + 2|φ|² − 2𝔥² + (κ/6)(s − 6α²)² + 2δ^g φ`, for `A = α g`.
pub fn remark_identity_residual(sc: &SolitonScenario) -> Result<f64, ResidualError> {
    let alpha = sc.skew_alpha().ok_or(ResidualError::NotSkewTorsion)?;
    let geo = riemannian_curvature(&sc.model);
    let t = geo.scalar - 6.0 * alpha * alpha;
    Ok(2.0 * sc.kappa * geo.ricci.traceless().norm_sq() + 2.0 * sc.phi.norm_sq() - 2.0 * sc.h * sc.h
        + sc.kappa / 6.0 * t * t
        + 2.0 * codifferential(&sc.model, &sc.phi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Solution,
    NotSolution,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Solution => "SOLUTION",
            Verdict::NotSolution => "NOT_SOLUTION",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualNorms {
    /// Full first equation, symmetric and skew parts together.
    pub einstein: f64,
    pub einstein_symmetric: f64,
    pub einstein_skew: f64,
    pub yang_mills: f64,
    pub dilaton: f64,
    pub maxwell: f64,
    pub trace_identity: f64,
    pub remark_identity: Option<f64>,
}

impl ResidualNorms {
    /// Largest norm among the system equations; the derived identities are
    /// consequences and stay out of the verdict.
    pub fn system_max(&self) -> f64 {
        [self.einstein, self.yang_mills, self.dilaton, self.maxwell].into_iter().fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    pub einstein: SymBilinear,
    pub einstein_skew: Form2,
    pub yang_mills: YangMillsResidual,
    pub dilaton: f64,
    pub maxwell: Vec3,
    pub trace_identity: f64,
    pub remark_identity: Option<f64>,
    pub norms: ResidualNorms,
    pub tolerance: f64,
    pub verdict: Verdict,
}

pub fn full_report(sc: &SolitonScenario, tol: f64) -> Result<ResidualReport, ScenarioError> {
    sc.validate()?;
    let einstein = einstein_residual(sc);
    let einstein_skew = einstein_skew_residual(sc);
    let yang_mills = yang_mills_residual(sc);
    let dilaton = dilaton_residual(sc);
    let maxwell = maxwell_residual(sc);
    let trace_identity = trace_identity_residual(sc);
    let remark_identity = remark_identity_residual(sc).ok();
    let skew_norm = einstein_skew.to_matrix().norm();
    let norms = ResidualNorms {
        einstein: (einstein.0 + einstein_skew.to_matrix()).norm(),
        einstein_symmetric: einstein.norm(),
        einstein_skew: skew_norm,
        yang_mills: yang_mills.norm(),
        dilaton: dilaton.abs(),
        maxwell: maxwell.norm(),
        trace_identity: trace_identity.abs(),
        remark_identity: remark_identity.map(f64::abs),
    };
    let verdict = if norms.system_max() <= tol { Verdict::Solution } else { Verdict::NotSolution };
    Ok(ResidualReport {
        einstein,
        einstein_skew,
        yang_mills,
        dilaton,
        maxwell,
        trace_identity,
        remark_identity,
        norms,
        tolerance: tol,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skew_heisenberg(kappa: f64, alpha: f64, h: f64) -> SolitonScenario {
        SolitonScenario::new(StructureConstants::heisenberg(-1.0 / kappa.sqrt()), Contorsion::skew(alpha), h, Vec3::zero(), kappa)
            .unwrap()
    }

    fn hyperbolic(h: f64, alpha: f64) -> SolitonScenario {
        SolitonScenario::new(StructureConstants::hyperbolic(1.0), Contorsion::skew(alpha), h, Vec3::zero(), 1.0).unwrap()
    }

    fn flat(h: f64, phi: Vec3) -> SolitonScenario {
        SolitonScenario::new(StructureConstants::abelian(), Contorsion::zero(), h, phi, 1.0).unwrap()
    }

    #[test]
    fn validation_rules() {
        let c = StructureConstants::heisenberg(1.0);
        let e = SolitonScenario::new(c, Contorsion::zero(), 1.0, Vec3::zero(), 0.0);
        assert!(matches!(e, Err(ScenarioError::NonPositiveKappa(_))));
        let e = SolitonScenario::new(c, Contorsion::zero(), 0.0, Vec3::zero(), 1.0);
        assert!(matches!(e, Err(ScenarioError::NonPositiveH(_))));
        let e = SolitonScenario::new(c, Contorsion::zero(), 1.0, Vec3::basis(2), 1.0);
        assert!(matches!(e, Err(ScenarioError::NotClosed { i: 0, j: 1, .. })));
        assert!(SolitonScenario::new(c, Contorsion::zero(), 1.0, Vec3::new(0.3, -0.2, 0.0), 1.0).is_ok());
        let p = ReducibleTorsionParams { alpha: 0.5, beta: 0.1, gamma: 0.0, xi: Vec3::basis(2) };
        let e = SolitonScenario::from_params(c, &p, 1.0, Vec3::zero(), 1.0);
        assert!(matches!(e, Err(ScenarioError::CompactnessRule(_))));
        assert!(e.unwrap_err().to_string().contains("compact"));
        let skew = Contorsion(hodge_star(&Vec3::basis(0)).to_matrix() * 0.1);
        assert!(matches!(SolitonScenario::new(c, skew, 1.0, Vec3::zero(), 1.0), Err(ScenarioError::CompactnessRule(_))));
        let hyp = StructureConstants::hyperbolic(1.0);
        assert!(SolitonScenario::new(hyp, Contorsion::zero(), 1.0, Vec3::new(0.4, 0.0, 0.0), 1.0).is_ok());
        assert!(SolitonScenario::new(hyp, Contorsion::zero(), 1.0, Vec3::new(0.0, 0.4, 0.0), 1.0).is_err());
    }

    #[test]
    fn ric_gh_examples() {
        assert_eq!(ric_gh(&StructureConstants::abelian(), 1.0), SymBilinear::identity() * -0.5);
        let r = ric_gh(&StructureConstants::hyperbolic(1.0), 2.0 * 3f64.sqrt());
        assert!((r.0 + Matrix3::<f64>::identity() * 8.0).norm() < 1e-12);
        let r = ric_gh(&StructureConstants::heisenberg(1.0), 1.0);
        assert!((r.0 - SymBilinear::diagonal([-1.0, -1.0, 0.0]).0).norm() < 1e-12);
    }

    #[test]
    fn einstein_examples() {
        assert!(einstein_residual(&skew_heisenberg(1.0, 0.5, 1.0)).norm() < 1e-12);
        assert!(einstein_residual(&hyperbolic(2.0 * 3f64.sqrt(), 1.0)).norm() < 1e-12);
        assert!(einstein_residual(&hyperbolic(2.0 * 3f64.sqrt() + 0.1, 1.0)).norm() > 1e-2);
    }

    #[test]
    fn einstein_skew_examples() {
        assert_eq!(einstein_skew_residual(&flat(1.0, Vec3::zero())), Form2::zero());
        // −½⋆(−𝔥φ) = (𝔥/2)⋆φ
        let w = einstein_skew_residual(&flat(2.0, Vec3::new(0.1, 0.0, 0.0)));
        assert!((w.0 - hodge_star(&Vec3::new(0.1, 0.0, 0.0)).0).norm() < 1e-15);
    }

    #[test]
    fn yang_mills_examples() {
        assert!(yang_mills_residual(&skew_heisenberg(1.0, 0.5, 1.0)).norm() < 1e-12);
        assert!(yang_mills_residual(&hyperbolic(2.0 * 3f64.sqrt(), 1.0)).norm() < 1e-12);
        assert_eq!(yang_mills_residual(&flat(1.0, Vec3::zero())).norm(), 0.0);

        let sc = SolitonScenario::new(StructureConstants::heisenberg(1.0), Contorsion::zero(), 1.0, Vec3::zero(), 1.0).unwrap();
        let ym = yang_mills_residual(&sc);
        assert!((ym.dual_grid() - Matrix3::from_diagonal(&nalgebra::Vector3::new(0.5, 0.5, -1.0))).norm() < 1e-12);
        assert!((ym.norm() - 1.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn yang_mills_two_paths() {
        for (c, phi) in [
            (StructureConstants::heisenberg(1.0), Vec3::new(0.2, -0.4, 0.0)),
            (StructureConstants::milnor(1.0, 2.0, -0.5), Vec3::zero()),
            (StructureConstants::hyperbolic(1.3), Vec3::new(0.7, 0.0, 0.0)),
            (StructureConstants::solvable([[0.4, 1.0], [-0.2, 0.9]]), Vec3::new(-0.3, 0.0, 0.0)),
        ] {
            let sc = SolitonScenario::new(c, Contorsion::skew(0.7), 1.0, phi, 1.0).unwrap();
            let a = yang_mills_residual(&sc).dual_grid();
            let b = yang_mills_skew_closed_form(&sc).unwrap().dual_grid();
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
        let p = ReducibleTorsionParams::along_e3(0.5, 0.3);
        let sc = SolitonScenario::from_params(StructureConstants::heisenberg(-1.0), &p, 1.0, Vec3::zero(), 1.0).unwrap();
        assert_eq!(yang_mills_skew_closed_form(&sc), Err(ResidualError::NotSkewTorsion));
    }

    #[test]
    fn dilaton_examples() {
        assert!(dilaton_residual(&skew_heisenberg(1.0, 0.5, 1.0)).abs() < 1e-12);
        assert!(dilaton_residual(&hyperbolic(2.0 * 3f64.sqrt(), 1.0)).abs() < 1e-12);
        assert_eq!(dilaton_residual(&flat(1.0, Vec3::zero())), -1.0);
    }

    #[test]
    fn maxwell_examples() {
        assert_eq!(maxwell_residual(&flat(1.0, Vec3::zero())), Vec3::zero());
        let m = maxwell_residual(&flat(2.0, Vec3::new(0.1, 0.0, 0.0)));
        assert!((m - Vec3::new(-0.2, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trace_identity_examples() {
        assert!(trace_identity_residual(&skew_heisenberg(1.0, 0.5, 1.0)).abs() < 1e-12);
        assert!(trace_identity_residual(&hyperbolic(2.0 * 3f64.sqrt(), 1.0)).abs() < 1e-12);
        assert_eq!(trace_identity_residual(&flat(1.0, Vec3::zero())), 0.5);
    }

    #[test]
    fn trace_identity_is_combination_of_einstein_and_dilaton() {
        let sc = SolitonScenario::new(
            StructureConstants::hyperbolic(0.8),
            Contorsion(Matrix3::new(0.3, 0.1, 0.0, 0.1, -0.4, 0.2, 0.0, 0.2, 0.9)),
            1.7,
            Vec3::new(0.35, 0.0, 0.0),
            0.6,
        )
        .unwrap();
        let lhs = trace_identity_residual(&sc);
        let rhs = einstein_residual(&sc).trace() - 2.0 * dilaton_residual(&sc);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn remark_identity_examples() {
        assert!(remark_identity_residual(&skew_heisenberg(1.0, 0.5, 1.0)).unwrap().abs() < 1e-12);
        assert!(remark_identity_residual(&hyperbolic(2.0 * 3f64.sqrt(), 1.0)).unwrap().abs() < 1e-12);
        assert_eq!(remark_identity_residual(&flat(1.0, Vec3::zero())).unwrap(), -2.0);

        let sc = SolitonScenario::new(StructureConstants::milnor(1.0, 0.5, 0.0), Contorsion::skew(0.3), 0.8, Vec3::zero(), 1.4)
            .unwrap();
        let lhs = remark_identity_residual(&sc).unwrap();
        let rhs = einstein_residual(&sc).trace() - trace_identity_residual(&sc);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn full_report_verdicts() {
        let r = full_report(&skew_heisenberg(1.0, 0.5, 1.0), DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Solution);
        assert!(r.norms.system_max() <= 1e-12);
        let r = full_report(&hyperbolic(2.0 * 3f64.sqrt() + 0.1, 1.0), DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::NotSolution);
        let r = full_report(&flat(1.0, Vec3::zero()), DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::NotSolution);
        assert_eq!(r.norms.dilaton, 1.0);
    }
}
