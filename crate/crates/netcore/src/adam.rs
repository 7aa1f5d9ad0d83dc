use crate::params::ParamSet;
use crate::{Error, Result};

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

/// Adam moment estimates, one slot per parameter.
#[derive(Debug, Clone)]
pub struct AdamState {
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    step_count: u64,
}

impl AdamState {
    pub fn new(param_len: usize) -> Self {
        Self {
            first_moment: vec![0.0; param_len],
            second_moment: vec![0.0; param_len],
            step_count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.first_moment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_moment.is_empty()
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }
}

/// One Adam update, minimizing the given loss gradient. The learning rate is
/// held constant across training; ascent on the surrogate objective is
/// realized by feeding the gradient of the negated objective.
pub fn adam_step(
    params: &ParamSet,
    grad: &[f64],
    state: &AdamState,
    lr: f64,
) -> Result<(ParamSet, AdamState)> {
    if grad.len() != params.len() || state.len() != params.len() {
        return Err(Error::LengthMismatch {
            expected: params.len(),
            got: grad.len(),
        });
    }
    let t = state.step_count + 1;
    let bias1 = 1.0 - ADAM_BETA1.powi(t as i32);
    let bias2 = 1.0 - ADAM_BETA2.powi(t as i32);
    let mut m = state.first_moment.clone();
    let mut v = state.second_moment.clone();
    let mut values = params.values().to_vec();
    for i in 0..values.len() {
        m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * grad[i];
        v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * grad[i] * grad[i];
        let m_hat = m[i] / bias1;
        let v_hat = v[i] / bias2;
        values[i] -= lr * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
    }
    let next = params.with_values(values)?;
    Ok((
        next,
        AdamState {
            first_moment: m,
            second_moment: v,
            step_count: t,
        },
    ))
}
