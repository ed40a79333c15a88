#![allow(dead_code)]

use het3::frame::Vec3;
use het3::geometry::StructureConstants;
use proptest::prelude::*;
use rand::Rng;

/// A model together with a closed frame-constant 1-form direction.
#[derive(Clone, Debug)]
pub struct Model {
    pub c: StructureConstants,
    /// Unit vectors spanning the annihilator of `[g, g]`.
    pub closed: Vec<Vec3>,
}

pub fn milnor(l: [f64; 3]) -> Model {
    let closed = (0..3).filter(|&i| l[i] == 0.0).map(Vec3::basis).collect();
    Model { c: StructureConstants::milnor(l[0], l[1], l[2]), closed }
}

pub fn solvable(m: [[f64; 2]; 2]) -> Model {
    Model { c: StructureConstants::solvable(m), closed: vec![Vec3::basis(0)] }
}

pub fn closed_phi(model: &Model, weights: [f64; 3]) -> Vec3 {
    model.closed.iter().zip(weights).fold(Vec3::zero(), |acc, (v, w)| acc + *v * w)
}

pub fn named_models() -> Vec<Model> {
    vec![
        milnor([0.0, 0.0, 0.0]),
        milnor([0.0, 0.0, 1.0]),
        milnor([0.0, 0.0, -2.0]),
        milnor([1.0, 1.0, 1.0]),
        milnor([1.0, 1.0, 0.0]),
        milnor([1.0, -1.0, 0.0]),
        milnor([1.0, 1.0, -1.0]),
        milnor([0.5, 2.0, -1.3]),
        solvable([[1.0, 0.0], [0.0, 1.0]]),
        solvable([[0.7, 0.0], [0.0, 0.7]]),
        solvable([[0.4, 1.0], [-0.2, 0.9]]),
        solvable([[1.0, 0.0], [0.0, -1.0]]),
    ]
}

fn coeff() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

pub fn model_strategy() -> impl Strategy<Value = Model> {
    prop_oneof![
        [coeff(), coeff(), coeff()].prop_map(milnor),
        [[coeff(), coeff()], [coeff(), coeff()]].prop_map(solvable),
    ]
}

/// `Milnor(μ, μ, ν)`: the axis `e₃` satisfies `∇ξ = α⋆ξ` with `α = −ν/2`.
pub fn axis_model_strategy() -> impl Strategy<Value = (f64, f64)> {
    (coeff(), coeff())
}

pub fn random_model<R: Rng>(rng: &mut R) -> Model {
    let mut u = || rng.gen_range(-2.0..2.0);
    if u() < 0.0 {
        milnor([u(), u(), u()])
    } else {
        solvable([[u(), u()], [u(), u()]])
    }
}

/// Frobenius distance scaled by `max(1, |b|)`.
pub fn rel_err(a: &nalgebra::Matrix3<f64>, b: &nalgebra::Matrix3<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
