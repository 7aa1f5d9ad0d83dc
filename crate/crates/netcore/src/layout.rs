use crate::{Error, Result};

/// Activation scheme of a dense network. Hidden layers share one
/// nonlinearity; the output layer is always linear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
}

/// Shape of a feed-forward network: input width, hidden widths, output width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerLayout {
    pub input_width: usize,
    pub hidden_widths: Vec<usize>,
    pub output_width: usize,
    pub activation: Activation,
}

impl LayerLayout {
    /// Standard trainer layout: two tanh hidden layers of 64 units.
    pub fn mlp64(input_width: usize, output_width: usize) -> Self {
        Self {
            input_width,
            hidden_widths: vec![64, 64],
            output_width,
            activation: Activation::Tanh,
        }
    }

    pub fn new(input_width: usize, hidden_widths: Vec<usize>, output_width: usize) -> Self {
        Self {
            input_width,
            hidden_widths,
            output_width,
            activation: Activation::Tanh,
        }
    }

    /// Checks the invariants expected of trainer-built networks. `forward`
    /// itself also accepts the degenerate hidden-free (purely linear) layout,
    /// which unit tests use; initialization does not.
    pub fn validate(&self) -> Result<()> {
        if self.input_width == 0 || self.output_width == 0 {
            return Err(Error::InvalidLayout("widths must be >= 1".into()));
        }
        if self.hidden_widths.is_empty() {
            return Err(Error::InvalidLayout("hidden_widths must be non-empty".into()));
        }
        if self.hidden_widths.contains(&0) {
            return Err(Error::InvalidLayout("hidden widths must be >= 1".into()));
        }
        Ok(())
    }

    /// (rows, cols) of each weight matrix, in forward order.
    pub fn layer_dims(&self) -> Vec<(usize, usize)> {
        let mut dims = Vec::with_capacity(self.hidden_widths.len() + 1);
        let mut prev = self.input_width;
        for &h in &self.hidden_widths {
            dims.push((h, prev));
            prev = h;
        }
        dims.push((self.output_width, prev));
        dims
    }

    /// Total parameter count (weights + biases).
    pub fn param_count(&self) -> usize {
        self.layer_dims().iter().map(|(r, c)| r * c + r).sum()
    }
}
