use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::layout::LayerLayout;
use crate::params::{ParamSet, TensorSpec};
use crate::{Error, Result};

/// Resolved offsets of one network's tensors inside a flat `ParamSet`.
/// Built once per network so the hot forward/backward paths never touch
/// manifest strings.
#[derive(Debug, Clone)]
pub struct NetOffsets {
    /// Per layer: (weight offset, bias offset, rows, cols).
    pub layers: Vec<(usize, usize, usize, usize)>,
}

impl NetOffsets {
    pub fn resolve(params: &ParamSet, layout: &LayerLayout, prefix: &str) -> Result<Self> {
        let mut layers = Vec::new();
        for (i, (rows, cols)) in layout.layer_dims().into_iter().enumerate() {
            let w = params
                .tensor_spec(&format!("{prefix}l{i}/w"))
                .ok_or_else(|| Error::InvalidLayout(format!("missing {prefix}l{i}/w")))?;
            let b = params
                .tensor_spec(&format!("{prefix}l{i}/b"))
                .ok_or_else(|| Error::InvalidLayout(format!("missing {prefix}l{i}/b")))?;
            if w.shape != [rows, cols] || b.shape != [rows] {
                return Err(Error::InvalidLayout(format!(
                    "tensor shape mismatch at {prefix}l{i}"
                )));
            }
            layers.push((w.offset, b.offset, rows, cols));
        }
        Ok(Self { layers })
    }
}

/// Post-activation values of every layer, input included, kept for backprop.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub activations: Vec<Vec<f64>>,
}

/// Appends the manifest entries of one network and draws its initial
/// weights: Gaussian samples with each output unit's incoming weight row
/// rescaled to norm 1.0 (hidden layers) or 0.01 (final layer), biases zero.
pub(crate) fn push_net_init(
    layout: &LayerLayout,
    prefix: &str,
    rng: &mut ChaCha8Rng,
    values: &mut Vec<f64>,
    manifest: &mut Vec<TensorSpec>,
) {
    let dims = layout.layer_dims();
    let last = dims.len() - 1;
    for (i, (rows, cols)) in dims.into_iter().enumerate() {
        let scale = if i == last { 0.01 } else { 1.0 };
        let w_offset = values.len();
        for _ in 0..rows {
            let row_start = values.len();
            for _ in 0..cols {
                values.push(rng.sample::<f64, _>(StandardNormal));
            }
            let norm = values[row_start..].iter().map(|w| w * w).sum::<f64>().sqrt();
            if norm > 0.0 {
                for w in &mut values[row_start..] {
                    *w *= scale / norm;
                }
            }
        }
        manifest.push(TensorSpec {
            name: format!("{prefix}l{i}/w"),
            shape: vec![rows, cols],
            offset: w_offset,
        });
        let b_offset = values.len();
        values.extend(std::iter::repeat_n(0.0, rows));
        manifest.push(TensorSpec {
            name: format!("{prefix}l{i}/b"),
            shape: vec![rows],
            offset: b_offset,
        });
    }
}

/// Initializes a standalone network for the given layout.
pub fn init_params(layout: &LayerLayout, seed: u64) -> Result<ParamSet> {
    layout.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(layout.param_count());
    let mut manifest = Vec::new();
    push_net_init(layout, "", &mut rng, &mut values, &mut manifest);
    ParamSet::new(values, manifest)
}

/// Dot product with four independent accumulators. Fixed summation order,
/// so results stay deterministic while the loop pipelines.
#[inline]
fn dot(row: &[f64], x: &[f64]) -> f64 {
    let n = row.len();
    let chunks = n / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for c in 0..chunks {
        let k = c * 4;
        s0 += row[k] * x[k];
        s1 += row[k + 1] * x[k + 1];
        s2 += row[k + 2] * x[k + 2];
        s3 += row[k + 3] * x[k + 3];
    }
    let mut tail = 0.0;
    for k in chunks * 4..n {
        tail += row[k] * x[k];
    }
    (s0 + s1) + (s2 + s3) + tail
}

fn run_forward(
    params: &[f64],
    net: &NetOffsets,
    input: &[f64],
    mut sink: Option<&mut Vec<Vec<f64>>>,
) -> Vec<f64> {
    let last = net.layers.len() - 1;
    let mut x = input.to_vec();
    if let Some(acts) = sink.as_deref_mut() {
        acts.push(x.clone());
    }
    for (i, &(wo, bo, rows, cols)) in net.layers.iter().enumerate() {
        let mut out = Vec::with_capacity(rows);
        for r in 0..rows {
            let row = &params[wo + r * cols..wo + (r + 1) * cols];
            let sum = params[bo + r] + dot(row, &x);
            out.push(if i == last { sum } else { sum.tanh() });
        }
        if let Some(acts) = sink.as_deref_mut() {
            acts.push(out.clone());
        }
        x = out;
    }
    x
}

/// Deterministic forward pass: tanh hidden layers, linear output.
pub fn forward(params: &ParamSet, layout: &LayerLayout, input: &[f64]) -> Result<Vec<f64>> {
    forward_prefixed(params, layout, "", input)
}

pub(crate) fn forward_prefixed(
    params: &ParamSet,
    layout: &LayerLayout,
    prefix: &str,
    input: &[f64],
) -> Result<Vec<f64>> {
    if input.len() != layout.input_width {
        return Err(Error::WidthMismatch {
            expected: layout.input_width,
            got: input.len(),
        });
    }
    let net = NetOffsets::resolve(params, layout, prefix)?;
    Ok(run_forward(params.values(), &net, input, None))
}

/// Forward pass that records the activations needed for `backprop`.
pub fn forward_traced(params: &ParamSet, net: &NetOffsets, input: &[f64]) -> (Vec<f64>, ForwardTrace) {
    let mut acts = Vec::with_capacity(net.layers.len() + 1);
    let out = run_forward(params.values(), net, input, Some(&mut acts));
    (out, ForwardTrace { activations: acts })
}

/// Forward pass without the activation trace, for inference-only callers.
pub fn forward_untraced(params: &ParamSet, net: &NetOffsets, input: &[f64]) -> Vec<f64> {
    run_forward(params.values(), net, input, None)
}

/// Reverse-mode accumulation: given dL/d(output), adds this sample's
/// parameter gradient into `grad` (same length and order as the `ParamSet`).
pub fn backprop(
    params: &ParamSet,
    net: &NetOffsets,
    trace: &ForwardTrace,
    d_output: &[f64],
    grad: &mut [f64],
) {
    debug_assert_eq!(grad.len(), params.len());
    let values = params.values();
    let last = net.layers.len() - 1;
    let mut delta = d_output.to_vec();
    for i in (0..net.layers.len()).rev() {
        let (wo, bo, rows, cols) = net.layers[i];
        // Linear output layer; tanh elsewhere (grad through post-activation).
        if i != last {
            let act = &trace.activations[i + 1];
            for (d, a) in delta.iter_mut().zip(act) {
                *d *= 1.0 - a * a;
            }
        }
        let input = &trace.activations[i];
        if i > 0 {
            // Fused: accumulate weight/bias gradients and propagate delta in
            // one pass over the weight rows.
            let mut prev = vec![0.0; cols];
            for r in 0..rows {
                let d = delta[r];
                grad[bo + r] += d;
                let grow = &mut grad[wo + r * cols..wo + (r + 1) * cols];
                let wrow = &values[wo + r * cols..wo + (r + 1) * cols];
                for k in 0..cols {
                    grow[k] += d * input[k];
                    prev[k] += d * wrow[k];
                }
            }
            delta = prev;
        } else {
            for r in 0..rows {
                let d = delta[r];
                grad[bo + r] += d;
                let grow = &mut grad[wo + r * cols..wo + (r + 1) * cols];
                for (g, xi) in grow.iter_mut().zip(input) {
                    *g += d * xi;
                }
            }
        }
    }
}
