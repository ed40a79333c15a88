//! Left-invariant geometry of a 3D Lie group given by the structure
//! constants of an orthonormal frame.
//!
//! Everything here is frame-constant: the Levi-Civita connection comes from
//! the Koszul formula, curvature from `R_{X,Y} = [∇_X, ∇_Y] − ∇_{[X,Y]}` with
//! constant coefficients, and the 3D identities expressing the Riemann tensor
//! through the Ricci tensor are provided as an independent route.

use std::ops::{Add, Sub};

use nalgebra::Matrix3;
use thiserror::Error;

use crate::frame::{wedge, CurvatureOperator, Form2, SymBilinear, Vec3, DIM, DUAL_PAIRS};
use crate::tensor::FrameTensor;

/// Absolute tolerance for antisymmetry and Jacobi checks.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("structure constants are not antisymmetric: c[{i}][{j}][{k}] + c[{j}][{i}][{k}] = {residual:e}")]
    AntisymmetryViolation { i: usize, j: usize, k: usize, residual: f64 },
    #[error("Jacobi identity fails for (e{}, e{}, e{}) in component e{}: residual {residual:e}", .i + 1, .j + 1, .k + 1, .l + 1)]
    JacobiViolation { i: usize, j: usize, k: usize, l: usize, residual: f64 },
    #[error("frame index out of range in entry ({i}, {j}, {k}); indices must be below 3")]
    IndexOutOfRange { i: usize, j: usize, k: usize },
    #[error("structure-constant entry ({i}, {j}, {k}) must have i < j")]
    UnorderedEntry { i: usize, j: usize, k: usize },
    #[error("structure constants contain a non-finite value")]
    NonFinite,
    #[error("trace of Ricci ({trace}) does not match scalar curvature ({scalar})")]
    TraceMismatch { trace: f64, scalar: f64 },
}

/// Coefficients `c_ijk` of `[e_i, e_j] = Σ_k c_ijk e_k`, stored densely.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StructureConstants {
    c: [[[f64; 3]; 3]; 3],
}

impl StructureConstants {
    /// From sparse entries `(i, j, k, value)` with 0-based indices and `i < j`.
    /// Repeated entries accumulate.
    pub fn from_entries(entries: &[(usize, usize, usize, f64)]) -> Result<Self, GeometryError> {
        let mut c = [[[0.0; 3]; 3]; 3];
        for &(i, j, k, v) in entries {
            if i >= DIM || j >= DIM || k >= DIM {
                return Err(GeometryError::IndexOutOfRange { i, j, k });
            }
            if i >= j {
                return Err(GeometryError::UnorderedEntry { i, j, k });
            }
            if !v.is_finite() {
                return Err(GeometryError::NonFinite);
            }
            c[i][j][k] += v;
            c[j][i][k] -= v;
        }
        Ok(Self { c })
    }

    /// Dense coefficients, taken as given. Use [`validate`] before relying on them.
    pub fn from_dense(c: [[[f64; 3]; 3]; 3]) -> Self {
        Self { c }
    }

    pub fn dense(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.c
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[i][j][k]
    }

    /// Non-zero entries with `i < j`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                for k in 0..DIM {
                    if self.c[i][j][k] != 0.0 {
                        out.push((i, j, k, self.c[i][j][k]));
                    }
                }
            }
        }
        out
    }

    /// Bracket of frame-constant vector fields.
    pub fn bracket(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        let mut w = [0.0; 3];
        for i in 0..DIM {
            for j in 0..DIM {
                for (k, wk) in w.iter_mut().enumerate() {
                    *wk += u[i] * v[j] * self.c[i][j][k];
                }
            }
        }
        Vec3::from_array(w)
    }

    /// `tr ad_{e_i}` for each frame vector.
    pub fn ad_trace(&self) -> Vec3 {
        Vec3::from_array(std::array::from_fn(|i| (0..DIM).map(|k| self.c[i][k][k]).sum()))
    }

    /// Abelian group `ℝ³`.
    pub fn abelian() -> Self {
        Self::default()
    }

    /// Heisenberg algebra `[e₁, e₂] = λ e₃`.
    pub fn heisenberg(lambda: f64) -> Self {
        Self::from_entries(&[(0, 1, 2, lambda)]).expect("valid entry")
    }

    /// Solvable model of hyperbolic space of curvature `−a²`:
    /// `[e₁, e₂] = a e₂`, `[e₁, e₃] = a e₃`.
    pub fn hyperbolic(a: f64) -> Self {
        Self::from_entries(&[(0, 1, 1, a), (0, 2, 2, a)]).expect("valid entries")
    }

    /// Unimodular Milnor frame `[e₂,e₃] = λ₁e₁`, `[e₃,e₁] = λ₂e₂`, `[e₁,e₂] = λ₃e₃`.
    pub fn milnor(l1: f64, l2: f64, l3: f64) -> Self {
        Self::from_entries(&[(1, 2, 0, l1), (0, 2, 1, -l2), (0, 1, 2, l3)]).expect("valid entries")
    }

    /// Semidirect product `ℝ ⋉_M ℝ²`: `[e₁, e₂] = m₀₀e₂ + m₁₀e₃`,
    /// `[e₁, e₃] = m₀₁e₂ + m₁₁e₃`, `[e₂, e₃] = 0`. Jacobi holds for every `M`.
    pub fn solvable(m: [[f64; 2]; 2]) -> Self {
        Self::from_entries(&[
            (0, 1, 1, m[0][0]),
            (0, 1, 2, m[1][0]),
            (0, 2, 1, m[0][1]),
            (0, 2, 2, m[1][1]),
        ])
        .expect("valid entries")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    pub ad_trace: Vec3,
    pub unimodular: bool,
}

/// Checks antisymmetry and the Jacobi identity.
pub fn validate(c: &StructureConstants) -> Result<ValidationReport, GeometryError> {
    let d = c.dense();
    if d.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let residual = d[i][j][k] + d[j][i][k];
                if residual.abs() > STRUCTURE_TOL {
                    return Err(GeometryError::AntisymmetryViolation { i, j, k, residual });
                }
            }
        }
    }
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    let residual: f64 = (0..DIM)
                        .map(|m| d[i][j][m] * d[m][k][l] + d[j][k][m] * d[m][i][l] + d[k][i][m] * d[m][j][l])
                        .sum();
                    if residual.abs() > STRUCTURE_TOL {
                        return Err(GeometryError::JacobiViolation { i, j, k, l, residual });
                    }
                }
            }
        }
    }
    let ad_trace = c.ad_trace();
    Ok(ValidationReport { ad_trace, unimodular: ad_trace.norm() <= STRUCTURE_TOL })
}

/// `Γ(i, j, k) = ⟨∇_{e_i} e_j, e_k⟩` for a frame-constant connection.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ConnectionCoefficients {
    gamma: [[[f64; 3]; 3]; 3],
}

impl ConnectionCoefficients {
    pub fn from_dense(gamma: [[[f64; 3]; 3]; 3]) -> Self {
        Self { gamma }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[i][j][k]
    }

    pub fn dense(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.gamma
    }

    /// `∇_X Y` for frame-constant `Y`.
    pub fn apply(&self, x: &Vec3, y: &Vec3) -> Vec3 {
        let mut out = [0.0; 3];
        for i in 0..DIM {
            for j in 0..DIM {
                for (k, o) in out.iter_mut().enumerate() {
                    *o += x[i] * y[j] * self.gamma[i][j][k];
                }
            }
        }
        Vec3::from_array(out)
    }

    /// Largest violation of `Γ(i,j,k) = −Γ(i,k,j)`.
    pub fn metric_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    worst = worst.max((self.gamma[i][j][k] + self.gamma[i][k][j]).abs());
                }
            }
        }
        worst
    }

    /// Torsion `T(e_i, e_j) = ∇_{e_i}e_j − ∇_{e_j}e_i − [e_i, e_j]`, as `t[i][j][k]`.
    pub fn torsion(&self, c: &StructureConstants) -> [[[f64; 3]; 3]; 3] {
        let mut t = [[[0.0; 3]; 3]; 3];
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    t[i][j][k] = self.gamma[i][j][k] - self.gamma[j][i][k] - c.get(i, j, k);
                }
            }
        }
        t
    }

    /// `(∇v)(X, Y) = ⟨∇_X v, Y⟩` for frame-constant `v`.
    pub fn derivative_of_vector(&self, v: &Vec3) -> Matrix3<f64> {
        Matrix3::from_fn(|x, y| (0..DIM).map(|m| v[m] * self.gamma[x][m][y]).sum())
    }

    /// Covariant derivative of a frame-constant covariant tensor:
    /// `(∇_{e_i} T)(e_a, …) = −Σ_slots T(…, ∇_{e_i} e_{a_s}, …)`.
    /// The derivative index is placed first.
    pub fn covariant_derivative(&self, t: &FrameTensor) -> FrameTensor {
        let rank = t.rank();
        let mut out = FrameTensor::zeros(rank + 1);
        for idx in t.indices() {
            for i in 0..DIM {
                let mut acc = 0.0;
                for slot in 0..rank {
                    let mut moved = idx.clone();
                    for m in 0..DIM {
                        moved[slot] = m;
                        acc -= self.gamma[i][idx[slot]][m] * t.get(&moved);
                    }
                }
                let mut full = Vec::with_capacity(rank + 1);
                full.push(i);
                full.extend_from_slice(&idx);
                out.set(&full, acc);
            }
        }
        out
    }
}

impl Add for ConnectionCoefficients {
    type Output = ConnectionCoefficients;
    fn add(self, rhs: Self) -> Self {
        let mut gamma = self.gamma;
        for (i, slab) in gamma.iter_mut().enumerate() {
            for (j, row) in slab.iter_mut().enumerate() {
                for (k, g) in row.iter_mut().enumerate() {
                    *g += rhs.gamma[i][j][k];
                }
            }
        }
        Self { gamma }
    }
}

impl Sub for ConnectionCoefficients {
    type Output = ConnectionCoefficients;
    fn sub(self, rhs: Self) -> Self {
        let mut gamma = self.gamma;
        for (i, slab) in gamma.iter_mut().enumerate() {
            for (j, row) in slab.iter_mut().enumerate() {
                for (k, g) in row.iter_mut().enumerate() {
                    *g -= rhs.gamma[i][j][k];
                }
            }
        }
        Self { gamma }
    }
}

/// Koszul formula in an orthonormal frame: `2Γ(i,j,k) = c_ijk − c_jki + c_kij`.
pub fn levi_civita(c: &StructureConstants) -> ConnectionCoefficients {
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for (i, slab) in gamma.iter_mut().enumerate() {
        for (j, row) in slab.iter_mut().enumerate() {
            for (k, g) in row.iter_mut().enumerate() {
                *g = 0.5 * (c.get(i, j, k) - c.get(j, k, i) + c.get(k, i, j));
            }
        }
    }
    ConnectionCoefficients { gamma }
}

/// `R_ijkl = ⟨R(e_i, e_j) e_k, e_l⟩` for constant connection coefficients.
pub fn riemann_components(c: &StructureConstants, gamma: &ConnectionCoefficients) -> [[[[f64; 3]; 3]; 3]; 3] {
    let g = gamma.dense();
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    let mut acc = 0.0;
                    for m in 0..DIM {
                        acc += g[j][k][m] * g[i][m][l] - g[i][k][m] * g[j][m][l] - c.get(i, j, m) * g[m][k][l];
                    }
                    r[i][j][k][l] = acc;
                }
            }
        }
    }
    r
}

/// Curvature of an arbitrary metric frame-constant connection, as an element
/// of `Λ²⊗Λ²`.
pub fn curvature_operator(c: &StructureConstants, gamma: &ConnectionCoefficients) -> CurvatureOperator {
    CurvatureOperator::from_components(&riemann_components(c, gamma))
}

/// Riemann, Ricci and scalar curvature of a torsion-free connection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureData {
    pub riemann: CurvatureOperator,
    pub ricci: SymBilinear,
    pub scalar: f64,
}

pub fn curvature(c: &StructureConstants, gamma: &ConnectionCoefficients) -> CurvatureData {
    let r = riemann_components(c, gamma);
    // Ric(e_j, e_k) = Σ_i ⟨R(e_i, e_j) e_k, e_i⟩
    let ric = Matrix3::from_fn(|j, k| (0..DIM).map(|i| r[i][j][k][i]).sum());
    let ricci = SymBilinear::from_matrix(ric);
    CurvatureData { riemann: CurvatureOperator::from_components(&r), ricci, scalar: ricci.trace() }
}

/// Shorthand for `curvature(c, &levi_civita(c))`.
pub fn riemannian_curvature(c: &StructureConstants) -> CurvatureData {
    curvature(c, &levi_civita(c))
}

fn check_trace(ricci: &SymBilinear, s: f64) -> Result<(), GeometryError> {
    let trace = ricci.trace();
    if (trace - s).abs() > 1e-12 * (1.0 + s.abs()) {
        return Err(GeometryError::TraceMismatch { trace, scalar: s });
    }
    Ok(())
}

/// 3D Riemann tensor from Ricci: `R_{X,Y} = (s/2) X∧Y + Y∧Ric(X) + Ric(Y)∧X`.
pub fn curvature_via_ricci(ricci: &SymBilinear, s: f64) -> Result<CurvatureOperator, GeometryError> {
    check_trace(ricci, s)?;
    let rows: Vec<Form2> = DUAL_PAIRS
        .iter()
        .map(|&(i, j)| {
            let (x, y) = (Vec3::basis(i), Vec3::basis(j));
            wedge(&x, &y) * (0.5 * s) + wedge(&y, &ricci.apply(&x)) + wedge(&ricci.apply(&y), &x)
        })
        .collect();
    Ok(CurvatureOperator::from_matrix(Matrix3::from_fn(|a, b| rows[a].0[b])))
}

/// `R∘R = −Ric∘Ric + s Ric + (|Ric|² − s²/2) g` (Levi-Civita, dimension 3).
pub fn ricci_square_identity(ricci: &SymBilinear, s: f64) -> SymBilinear {
    ricci.compose_self() * -1.0 + *ricci * s + SymBilinear::identity() * (ricci.norm_sq() - 0.5 * s * s)
}

/// `dv` for a frame-constant 1-form: `dv(e_i, e_j) = −v([e_i, e_j])`.
pub fn exterior_derivative(c: &StructureConstants, v: &Vec3) -> Form2 {
    let m = Matrix3::from_fn(|i, j| -(0..DIM).map(|k| c.get(i, j, k) * v[k]).sum::<f64>());
    Form2::from_matrix(&m)
}

/// Codifferential `δv = −Σ_i ⟨∇^g_{e_i} v, e_i⟩` of a frame-constant 1-form.
pub fn codifferential(c: &StructureConstants, v: &Vec3) -> f64 {
    -levi_civita(c).derivative_of_vector(v).trace()
}
