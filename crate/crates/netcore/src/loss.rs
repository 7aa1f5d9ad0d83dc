use crate::layout::LayerLayout;
use crate::mlp::{backprop, forward_traced, NetOffsets};
use crate::params::ParamSet;
use crate::{Error, Result};

/// The fixed scalar loss compositions this crate differentiates directly.
/// The PPO surrogate is composed in the trainer crate from the same
/// `forward_traced`/`backprop` primitives.
#[derive(Debug, Clone)]
pub enum LossSpec {
    /// 0.5 * sum over the batch of the squared output norm.
    HalfSquaredNorm,
    /// Mean over the batch of the squared error against per-sample targets.
    MeanSquaredError { targets: Vec<Vec<f64>> },
}

/// Exact reverse-mode gradient of the loss over the batch, one slot per
/// parameter in `ParamSet` order.
pub fn grad(
    params: &ParamSet,
    layout: &LayerLayout,
    spec: &LossSpec,
    batch: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let net = NetOffsets::resolve(params, layout, "")?;
    let mut g = vec![0.0; params.len()];
    for (i, input) in batch.iter().enumerate() {
        if input.len() != layout.input_width {
            return Err(Error::WidthMismatch {
                expected: layout.input_width,
                got: input.len(),
            });
        }
        let (out, trace) = forward_traced(params, &net, input);
        let d_out: Vec<f64> = match spec {
            LossSpec::HalfSquaredNorm => out.clone(),
            LossSpec::MeanSquaredError { targets } => {
                let t = &targets[i];
                let scale = 2.0 / batch.len() as f64;
                out.iter().zip(t).map(|(o, t)| scale * (o - t)).collect()
            }
        };
        backprop(params, &net, &trace, &d_out, &mut g);
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("loss gradient"));
    }
    Ok(g)
}

/// Loss value matching `grad`, used by finite-difference checks.
pub fn loss_value(
    params: &ParamSet,
    layout: &LayerLayout,
    spec: &LossSpec,
    batch: &[Vec<f64>],
) -> Result<f64> {
    let net = NetOffsets::resolve(params, layout, "")?;
    let mut total = 0.0;
    for (i, input) in batch.iter().enumerate() {
        let (out, _) = forward_traced(params, &net, input);
        match spec {
            LossSpec::HalfSquaredNorm => {
                total += 0.5 * out.iter().map(|o| o * o).sum::<f64>();
            }
            LossSpec::MeanSquaredError { targets } => {
                let t = &targets[i];
                total += out
                    .iter()
                    .zip(t)
                    .map(|(o, t)| (o - t) * (o - t))
                    .sum::<f64>()
                    / batch.len() as f64;
            }
        }
    }
    Ok(total)
}
