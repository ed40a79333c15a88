//! Metric connections `D = ∇^g + 𝔸` with constant contorsion, where the
//! contorsion is encoded by a 2-tensor `A` through `𝔸_X = ⋆(A(X))`.
//!
//! Besides the direct frame computation of `R^D`, this module carries the
//! closed-form curvature expressions for the reducible family
//! `A = α g + γ ξ⊗ξ` (on a model with `∇^g ξ = α ⋆ξ`) and for purely skew
//! torsion `A = α g`. The closed forms never call into the direct path.

use nalgebra::{Matrix3, SymmetricEigen};
use thiserror::Error;

use crate::frame::{hodge_star, interior, CurvatureOperator, Form2, SymBilinear, Vec3, DIM};
use crate::geometry::{curvature_operator, levi_civita, ConnectionCoefficients, StructureConstants};
use crate::tensor::FrameTensor;

/// Tolerance on `|ξ| = 1`.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorsionError {
    #[error("torsion axis must have unit length, got |xi| = {0}")]
    NonUnitAxis(f64),
    #[error("contorsion entries must be finite")]
    NonFinite,
}

/// Contorsion 2-tensor `A`, with `A(e_i, e_j) = a[(i, j)]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Contorsion(pub Matrix3<f64>);

/// Orthogonal irreducible pieces `A = α′ g + Θ + ⋆ζ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    /// `Tr(A) / 3`.
    pub trace_part: f64,
    /// Traceless symmetric part.
    pub theta: SymBilinear,
    /// Skew part, as the 1-form `ζ` with `(⋆ζ)(X) = ⋆(ζ∧X)`.
    pub zeta: Vec3,
}

impl Decomposition {
    pub fn reconstruct(&self) -> Contorsion {
        Contorsion(Matrix3::identity() * self.trace_part + self.theta.0 + hodge_star(&self.zeta).to_matrix())
    }
}

impl Contorsion {
    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    /// Purely skew-symmetric torsion `A = α g`.
    pub fn skew(alpha: f64) -> Self {
        Self(Matrix3::identity() * alpha)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// `A(X)` as a vector.
    pub fn apply(&self, x: &Vec3) -> Vec3 {
        Vec3(self.0.transpose() * x.0)
    }

    /// `𝔸_X = ⋆(A(X))`.
    pub fn two_form(&self, x: &Vec3) -> Form2 {
        hodge_star(&self.apply(x))
    }

    /// `𝔸_X Y`.
    pub fn act(&self, x: &Vec3, y: &Vec3) -> Vec3 {
        self.two_form(x).act(y)
    }

    pub fn decompose(&self) -> Decomposition {
        decompose(&self.0)
    }

    /// Frame coefficients `⟨𝔸_{e_i} e_j, e_k⟩`.
    pub fn coefficients(&self) -> ConnectionCoefficients {
        let mut g = [[[0.0; 3]; 3]; 3];
        for (i, slab) in g.iter_mut().enumerate() {
            for (j, row) in slab.iter_mut().enumerate() {
                let v = self.act(&Vec3::basis(i), &Vec3::basis(j));
                for (k, entry) in row.iter_mut().enumerate() {
                    *entry = v[k];
                }
            }
        }
        ConnectionCoefficients::from_dense(g)
    }
}

pub fn decompose(a: &Matrix3<f64>) -> Decomposition {
    let trace_part = a.trace() / 3.0;
    let sym = 0.5 * (a + a.transpose());
    let theta = SymBilinear(sym - Matrix3::identity() * trace_part);
    let skew = 0.5 * (a - a.transpose());
    let zeta = Vec3(Form2::from_matrix(&skew).0);
    Decomposition { trace_part, theta, zeta }
}

/// Parameters of a reducible parallel contorsion
/// `A = α g + β ⋆ξ + γ ξ⊗ξ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducibleTorsionParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub xi: Vec3,
}

impl ReducibleTorsionParams {
    /// `β = 0` form with `ξ = e₃`.
    pub fn along_e3(alpha: f64, gamma: f64) -> Self {
        Self { alpha, beta: 0.0, gamma, xi: Vec3::basis(2) }
    }
}

pub fn build_reducible(p: &ReducibleTorsionParams) -> Result<Contorsion, TorsionError> {
    if ![p.alpha, p.beta, p.gamma].iter().all(|x| x.is_finite()) || !p.xi.is_finite() {
        return Err(TorsionError::NonFinite);
    }
    let n = p.xi.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(TorsionError::NonUnitAxis(n));
    }
    Ok(Contorsion(
        Matrix3::identity() * p.alpha + hodge_star(&p.xi).to_matrix() * p.beta + p.xi.outer().0 * p.gamma,
    ))
}

/// Which branch of the parallel-torsion trichotomy a contorsion falls in,
/// read off its irreducible decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TorsionType {
    Vanishing,
    /// `A = α g`.
    Skew { alpha: f64 },
    /// `A = α g + β ⋆ξ + γ ξ⊗ξ` with `β² + γ² ≠ 0`.
    Reducible(ReducibleTorsionParams),
    /// Not of either shape; cannot be parallel for a non-flat connection.
    Unclassified,
}

pub fn torsion_type(a: &Contorsion, tol: f64) -> TorsionType {
    let d = a.decompose();
    let theta_small = d.theta.norm() <= tol;
    let zeta_small = d.zeta.norm() <= tol;
    if theta_small && zeta_small {
        return if d.trace_part.abs() <= tol {
            TorsionType::Vanishing
        } else {
            TorsionType::Skew { alpha: d.trace_part }
        };
    }
    if theta_small {
        let beta = d.zeta.norm();
        return TorsionType::Reducible(ReducibleTorsionParams {
            alpha: d.trace_part,
            beta,
            gamma: 0.0,
            xi: d.zeta * (1.0 / beta),
        });
    }
    // Θ = γ(ξ⊗ξ − g/3): one simple eigenvalue 2γ/3, a double one −γ/3.
    let eig = SymmetricEigen::new(d.theta.0);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let ev = |n: usize| eig.eigenvalues[order[n]];
    let simple = if (ev(0) - ev(1)).abs() <= tol {
        order[2]
    } else if (ev(1) - ev(2)).abs() <= tol {
        order[0]
    } else {
        return TorsionType::Unclassified;
    };
    let gamma = 1.5 * eig.eigenvalues[simple];
    let mut xi = Vec3(eig.eigenvectors.column(simple).into_owned().normalize());
    let along = d.zeta.dot(&xi);
    if (d.zeta - xi * along).norm() > tol {
        return TorsionType::Unclassified;
    }
    let flip = if along.abs() > tol {
        along < 0.0
    } else {
        let lead = (0..DIM).max_by(|&i, &j| xi[i].abs().total_cmp(&xi[j].abs())).unwrap_or(0);
        xi[lead] < 0.0
    };
    if flip {
        xi = -xi;
    }
    TorsionType::Reducible(ReducibleTorsionParams {
        alpha: d.trace_part - gamma / 3.0,
        beta: d.zeta.dot(&xi),
        gamma,
        xi,
    })
}

/// `D = ∇^g + 𝔸` over a fixed model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorsionConnection {
    pub base: ConnectionCoefficients,
    pub contorsion: Contorsion,
    pub total: ConnectionCoefficients,
}

pub fn connection_with_torsion(c: &StructureConstants, a: &Contorsion) -> TorsionConnection {
    let base = levi_civita(c);
    TorsionConnection { base, contorsion: *a, total: base + a.coefficients() }
}

impl TorsionConnection {
    /// `D_X Y` for frame-constant `Y`.
    pub fn apply(&self, x: &Vec3, y: &Vec3) -> Vec3 {
        self.total.apply(x, y)
    }

    /// `D T` for a frame-constant covariant tensor; derivative index first.
    pub fn covariant_derivative(&self, t: &FrameTensor) -> FrameTensor {
        self.total.covariant_derivative(t)
    }

    /// Largest component of `D A`; zero exactly when the torsion is parallel.
    pub fn contorsion_parallel_defect(&self) -> f64 {
        self.covariant_derivative(&FrameTensor::from_matrix(&self.contorsion.0)).max_abs()
    }
}

/// Curvature of `D`, computed directly from its frame coefficients.
pub fn curvature_d(c: &StructureConstants, conn: &TorsionConnection) -> CurvatureOperator {
    curvature_operator(c, &conn.total)
}

/// The operator `X∧Y ↦ ⟨⋆ξ, X∧Y⟩ ⋆ξ`.
fn axis_projector(xi: &Vec3) -> Matrix3<f64> {
    xi.0 * xi.0.transpose()
}

/// `R^{g,A}_{X,Y} = R^g_{X,Y} + α² X∧Y + 2αγ ⟨⋆ξ, X∧Y⟩ ⋆ξ` for `A = αg + γξ⊗ξ`
/// on a model with `∇^g ξ = α⋆ξ`.
pub fn reducible_curvature_closed_form(r_g: &CurvatureOperator, alpha: f64, gamma: f64, xi: &Vec3) -> CurvatureOperator {
    CurvatureOperator(r_g.0 + Matrix3::identity() * (alpha * alpha) + axis_projector(xi) * (2.0 * alpha * gamma))
}

/// Riemann tensor of a metric carrying a unit `ξ` with `∇^g ξ = α⋆ξ`:
/// `R^g_{X,Y} = −α² X∧Y + (3α² − s/2) ⟨⋆ξ, X∧Y⟩ ⋆ξ`.
pub fn axis_riemann_closed_form(alpha: f64, s: f64, xi: &Vec3) -> CurvatureOperator {
    CurvatureOperator(Matrix3::identity() * -(alpha * alpha) + axis_projector(xi) * (3.0 * alpha * alpha - 0.5 * s))
}

/// `Ric^g = (s/2 − α²) g + (3α² − s/2) ξ⊗ξ` on the same class of metrics.
pub fn axis_ricci_closed_form(alpha: f64, s: f64, xi: &Vec3) -> SymBilinear {
    SymBilinear::identity() * (0.5 * s - alpha * alpha) + xi.outer() * (3.0 * alpha * alpha - 0.5 * s)
}

/// Scalar factor `3α² − s/2 + 2αγ` of the rank-one curvature `R^{g,A}`.
pub fn reducible_curvature_factor(alpha: f64, gamma: f64, s: f64) -> f64 {
    3.0 * alpha * alpha - 0.5 * s + 2.0 * alpha * gamma
}

/// `R^{g,A}_{X,Y} = (3α² − s/2 + 2αγ) ⟨⋆ξ, X∧Y⟩ ⋆ξ`.
pub fn reducible_rank_one_curvature(alpha: f64, gamma: f64, s: f64, xi: &Vec3) -> CurvatureOperator {
    CurvatureOperator(axis_projector(xi) * reducible_curvature_factor(alpha, gamma, s))
}

/// `R^{g,A}∘R^{g,A} = (3α² − s/2 + 2αγ)² (g − ξ⊗ξ)`.
pub fn rara_closed_form(alpha: f64, gamma: f64, s: f64, xi: &Vec3) -> SymBilinear {
    let f = reducible_curvature_factor(alpha, gamma, s);
    (SymBilinear::identity() - xi.outer()) * (f * f)
}

/// Skew torsion `A = αg`: `R^{g,α} = R^g + α² X∧Y`.
pub fn skew_curvature_closed_form(r_g: &CurvatureOperator, alpha: f64) -> CurvatureOperator {
    CurvatureOperator(r_g.0 + Matrix3::identity() * (alpha * alpha))
}

/// `R^{g,α}∘R^{g,α} = −Ric∘Ric + (s − 2α²) Ric + (|Ric|² − s²/2 + 2α⁴) g`.
pub fn skew_rr_closed_form(ricci: &SymBilinear, s: f64, alpha: f64) -> SymBilinear {
    let a2 = alpha * alpha;
    ricci.compose_self() * -1.0
        + *ricci * (s - 2.0 * a2)
        + SymBilinear::identity() * (ricci.norm_sq() - 0.5 * s * s + 2.0 * a2 * a2)
}

/// `𝔸_X Y` written out from the reducible connection formula
/// `α⋆(X∧Y) + β Y⌟(ξ∧X) + γ ξ(X) ⋆(ξ∧Y)`.
pub fn reducible_action(p: &ReducibleTorsionParams, x: &Vec3, y: &Vec3) -> Vec3 {
    let star = |u: &Vec3, v: &Vec3| crate::frame::hodge_star_inv(&crate::frame::wedge(u, v));
    star(x, y) * p.alpha
        + interior(y, &crate::frame::wedge(&p.xi, x)) * p.beta
        + star(&p.xi, y) * (p.gamma * p.xi.dot(x))
}
