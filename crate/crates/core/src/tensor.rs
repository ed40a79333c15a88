//! Dense covariant tensors of arbitrary rank over the orthonormal frame.

use nalgebra::Matrix3;

use crate::frame::{CurvatureOperator, Vec3, DIM};

#[derive(Clone, Debug, PartialEq)]
pub struct FrameTensor {
    rank: usize,
    data: Vec<f64>,
}

impl FrameTensor {
    pub fn zeros(rank: usize) -> Self {
        Self { rank, data: vec![0.0; DIM.pow(rank as u32)] }
    }

    pub fn scalar(value: f64) -> Self {
        Self { rank: 0, data: vec![value] }
    }

    pub fn from_vec3(v: &Vec3) -> Self {
        Self { rank: 1, data: v.to_array().to_vec() }
    }

    /// Rank-2 tensor with `T(e_i, e_j) = m[(i, j)]`.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        let mut t = Self::zeros(2);
        for i in 0..DIM {
            for j in 0..DIM {
                t.set(&[i, j], m[(i, j)]);
            }
        }
        t
    }

    /// Rank-4 tensor `R(e_i, e_j, e_k, e_l) = R_{e_i,e_j}(e_k, e_l)`.
    pub fn from_curvature(r: &CurvatureOperator) -> Self {
        let comps = r.components();
        let mut t = Self::zeros(4);
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        t.set(&[i, j, k, l], comps[i][j][k][l]);
                    }
                }
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank, "index arity must equal tensor rank");
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < DIM);
            acc * DIM + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn add_at(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] += value;
    }

    /// Every multi-index of this rank, in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> {
        let rank = self.rank;
        (0..self.data.len()).map(move |mut flat| {
            let mut idx = vec![0; rank];
            for slot in (0..rank).rev() {
                idx[slot] = flat % DIM;
                flat /= DIM;
            }
            idx
        })
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Rank-2 slice as a matrix. Panics if the rank is not 2.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        assert_eq!(self.rank, 2);
        Matrix3::from_fn(|i, j| self.get(&[i, j]))
    }
}
