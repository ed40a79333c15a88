//! Exterior algebra of an oriented Euclidean 3-space, expressed in a fixed
//! orthonormal frame `e₁, e₂, e₃`.
//!
//! Vectors and 1-forms are identified through the metric (the identity in the
//! frame). 2-forms are stored by their Hodge-dual components, with the
//! orientation fixed by `⋆e₁ = e₂∧e₃` (and cyclically). Inner products on
//! forms follow the determinant convention, so `|e₁∧e₂| = 1`.
//!
//! Sign conventions used throughout the crate:
//!
//! * `u∧v` has dual components `u × v`.
//! * `v⌟w` (interior product of a vector with a 2-form of dual components
//!   `w`) is the vector `w × v`, so that `(v⌟w)(u) = w(v, u)`.
//! * A 2-form `ω` acts on vectors as the skew endomorphism `Y ↦ Y⌟ω`; in
//!   particular `⋆X` acts as `Y ↦ X × Y`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};

/// Dimension of the model space.
pub const DIM: usize = 3;

/// Totally antisymmetric symbol with `ε₀₁₂ = 1`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Oriented index pair `(i, j)` with `e_i∧e_j = ⋆e_a`.
pub(crate) const DUAL_PAIRS: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

/// Frame components of a vector (equivalently, of a 1-form).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3(pub Vector3<f64>);

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self(Vector3::new(x, y, z))
    }

    pub fn zero() -> Self {
        Self(Vector3::zeros())
    }

    /// The frame vector `e_{i+1}` (0-based index).
    pub fn basis(i: usize) -> Self {
        let mut v = Vector3::zeros();
        v[i] = 1.0;
        Self(v)
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self(Vector3::from(a))
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3(self.0.cross(&other.0))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// `self ⊗ self` as a symmetric bilinear form.
    pub fn outer(&self) -> SymBilinear {
        SymBilinear(self.0 * self.0.transpose())
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3(self.0 + rhs.0)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3(self.0 - rhs.0)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(-self.0)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: f64) -> Vec3 {
        Vec3(self.0 * rhs)
    }
}

/// A 2-form, stored by its coefficients in the basis `⋆e₁, ⋆e₂, ⋆e₃`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Form2(pub Vector3<f64>);

impl Form2 {
    pub fn from_dual(w: [f64; 3]) -> Self {
        Self(Vector3::from(w))
    }

    pub fn zero() -> Self {
        Self(Vector3::zeros())
    }

    pub fn dual_components(&self) -> [f64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    /// Evaluation `ω(u, v)`.
    pub fn eval(&self, u: &Vec3, v: &Vec3) -> f64 {
        self.0.dot(&u.0.cross(&v.0))
    }

    /// Antisymmetric component matrix `ω_ij = ω(e_i, e_j)`.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| (0..DIM).map(|k| levi_civita(i, j, k) * self.0[k]).sum())
    }

    /// Reads the antisymmetric part of `m` as a 2-form.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        let w = Vector3::from_fn(|k, _| {
            let mut acc = 0.0;
            for i in 0..DIM {
                for j in 0..DIM {
                    acc += 0.5 * levi_civita(k, i, j) * m[(i, j)];
                }
            }
            acc
        });
        Self(w)
    }

    /// Determinant inner product of 2-forms.
    pub fn inner(&self, other: &Form2) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.norm_squared()
    }

    /// Action of the 2-form as a skew endomorphism, `Y ↦ Y⌟ω`.
    pub fn act(&self, y: &Vec3) -> Vec3 {
        interior(y, self)
    }
}

impl Add for Form2 {
    type Output = Form2;
    fn add(self, rhs: Form2) -> Form2 {
        Form2(self.0 + rhs.0)
    }
}

impl Sub for Form2 {
    type Output = Form2;
    fn sub(self, rhs: Form2) -> Form2 {
        Form2(self.0 - rhs.0)
    }
}

impl Mul<f64> for Form2 {
    type Output = Form2;
    fn mul(self, rhs: f64) -> Form2 {
        Form2(self.0 * rhs)
    }
}

/// Symmetric bilinear form on the tangent space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymBilinear(pub Matrix3<f64>);

impl SymBilinear {
    /// Symmetric part `½(m + mᵀ)` of an arbitrary grid.
    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        Self(0.5 * (m + m.transpose()))
    }

    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    /// The metric `g`.
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn diagonal(d: [f64; 3]) -> Self {
        Self(Matrix3::from_diagonal(&Vector3::from(d)))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn eval(&self, x: &Vec3, y: &Vec3) -> f64 {
        x.0.dot(&(self.0 * y.0))
    }

    /// The endomorphism `X ↦ B(X)` raised with the metric.
    pub fn apply(&self, x: &Vec3) -> Vec3 {
        Vec3(self.0 * x.0)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Tensor (Frobenius) norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.norm_squared()
    }

    /// `(B∘B)(X, Y) = ⟨B(X), B(Y)⟩`.
    pub fn compose_self(&self) -> SymBilinear {
        SymBilinear(self.0 * self.0)
    }

    /// Traceless part `B − (tr B / 3) g`.
    pub fn traceless(&self) -> SymBilinear {
        SymBilinear(self.0 - Matrix3::identity() * (self.trace() / 3.0))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<(usize, usize)> for SymBilinear {
    type Output = f64;
    fn index(&self, ij: (usize, usize)) -> &f64 {
        &self.0[ij]
    }
}

impl Add for SymBilinear {
    type Output = SymBilinear;
    fn add(self, rhs: SymBilinear) -> SymBilinear {
        SymBilinear(self.0 + rhs.0)
    }
}

impl Sub for SymBilinear {
    type Output = SymBilinear;
    fn sub(self, rhs: SymBilinear) -> SymBilinear {
        SymBilinear(self.0 - rhs.0)
    }
}

impl Mul<f64> for SymBilinear {
    type Output = SymBilinear;
    fn mul(self, rhs: f64) -> SymBilinear {
        SymBilinear(self.0 * rhs)
    }
}

/// A section of `Λ²⊗Λ²`, stored through `Λ² ≅ Λ¹` as a 3×3 grid.
///
/// `K[a][b] = ⟨R_{⋆e_a}, ⋆e_b⟩`: the row index lives in the first `Λ²`
/// factor (the slot evaluated by `R_{X,Y}`), the column index in the second.
/// Consequently `R_{X,Y}` has dual components `Kᵀ (X × Y)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CurvatureOperator(pub Matrix3<f64>);

impl CurvatureOperator {
    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// Builds the operator from a 4-index component array
    /// `r[i][j][k][l] = R_{e_i,e_j}(e_k, e_l)`.
    pub fn from_components(r: &[[[[f64; 3]; 3]; 3]; 3]) -> Self {
        Self(Matrix3::from_fn(|a, b| {
            let (i, j) = DUAL_PAIRS[a];
            let (k, l) = DUAL_PAIRS[b];
            r[i][j][k][l]
        }))
    }

    /// Full component array `R_{e_i,e_j}(e_k, e_l)`.
    pub fn components(&self) -> [[[[f64; 3]; 3]; 3]; 3] {
        let mut out = [[[[0.0; 3]; 3]; 3]; 3];
        for (i, slab) in out.iter_mut().enumerate() {
            for (j, plane) in slab.iter_mut().enumerate() {
                let form = self.eval(&Vec3::basis(i), &Vec3::basis(j));
                let m = form.to_matrix();
                for (k, row) in plane.iter_mut().enumerate() {
                    for (l, entry) in row.iter_mut().enumerate() {
                        *entry = m[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// `R_{X,Y}`: evaluation of the first factor on `(X, Y)`.
    pub fn eval(&self, x: &Vec3, y: &Vec3) -> Form2 {
        Form2(self.0.transpose() * x.0.cross(&y.0))
    }

    /// `R_{ω}` for a 2-form `ω` in the first factor.
    pub fn eval_form(&self, w: &Form2) -> Form2 {
        Form2(self.0.transpose() * w.0)
    }

    /// `R(X, Y)`: evaluation of the second factor, a 2-form in the first.
    pub fn eval_second(&self, x: &Vec3, y: &Vec3) -> Form2 {
        Form2(self.0 * x.0.cross(&y.0))
    }

    pub fn transpose(&self) -> CurvatureOperator {
        CurvatureOperator(self.0.transpose())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for CurvatureOperator {
    type Output = CurvatureOperator;
    fn add(self, rhs: CurvatureOperator) -> CurvatureOperator {
        CurvatureOperator(self.0 + rhs.0)
    }
}

impl Sub for CurvatureOperator {
    type Output = CurvatureOperator;
    fn sub(self, rhs: CurvatureOperator) -> CurvatureOperator {
        CurvatureOperator(self.0 - rhs.0)
    }
}

impl Mul<f64> for CurvatureOperator {
    type Output = CurvatureOperator;
    fn mul(self, rhs: f64) -> CurvatureOperator {
        CurvatureOperator(self.0 * rhs)
    }
}

pub fn hodge_star(v: &Vec3) -> Form2 {
    Form2(v.0)
}

pub fn hodge_star_inv(w: &Form2) -> Vec3 {
    Vec3(w.0)
}

pub fn wedge(u: &Vec3, v: &Vec3) -> Form2 {
    Form2(u.0.cross(&v.0))
}

/// `v⌟w`, the 1-form `u ↦ w(v, u)`.
pub fn interior(v: &Vec3, w: &Form2) -> Vec3 {
    Vec3(w.0.cross(&v.0))
}

/// `(r1∘r2)(X, Y) = ⟨X⌟r1, Y⌟r2⟩`, symmetrized, computed by frame contraction
///
/// `Σ_i ⟨r1_{X,e_i}, r2_{Y,e_i}⟩` with the determinant inner product on the
/// second factor. For `r1 = r2` this is the quadratic curvature term `R∘R`.
pub fn curv_compose(r1: &CurvatureOperator, r2: &CurvatureOperator) -> SymBilinear {
    let mut b = Matrix3::zeros();
    for x in 0..DIM {
        for y in 0..DIM {
            let ex = Vec3::basis(x);
            let ey = Vec3::basis(y);
            b[(x, y)] = (0..DIM)
                .map(|i| {
                    let ei = Vec3::basis(i);
                    r1.eval(&ex, &ei).inner(&r2.eval(&ey, &ei))
                })
                .sum();
        }
    }
    SymBilinear::from_matrix(b)
}

/// `|R|² = ½ Σ_{i,j} |R_{e_i,e_j}|²`.
pub fn curv_norm_sq(r: &CurvatureOperator) -> f64 {
    let mut acc = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            acc += r.eval(&Vec3::basis(i), &Vec3::basis(j)).norm_sq();
        }
    }
    0.5 * acc
}

/// Sum of the coefficients of the 4-form `⟨R∧R⟩ = ½ Σ R(e_i,e_j)∧R(e_i,e_j)`
/// over the basis 4-forms `e_a∧e_b∧e_c∧e_d`, `a<b<c<d`. In dimension three
/// there is no such basis element and the result is identically zero.
pub fn curv_wedge_trace(r: &CurvatureOperator) -> f64 {
    let mut total = 0.0;
    for a in 0..DIM {
        for b in (a + 1)..DIM {
            for c in (b + 1)..DIM {
                for d in (c + 1)..DIM {
                    for i in 0..DIM {
                        for j in 0..DIM {
                            let w = r.eval_second(&Vec3::basis(i), &Vec3::basis(j)).to_matrix();
                            // ½ (ω∧ω)_{abcd}; (ω∧ω)_{abcd} = 2(ω_ab ω_cd − ω_ac ω_bd + ω_ad ω_bc)
                            total += w[(a, b)] * w[(c, d)] - w[(a, c)] * w[(b, d)]
                                + w[(a, d)] * w[(b, c)];
                        }
                    }
                }
            }
        }
    }
    total
}
