use super::sigmoid::Sigmoid;
use super::table::{axpy, dot, max_abs, Rows};
use crate::error::{Error, Result};

/// Reusable buffers for [`sgns_step`].
#[derive(Clone, Debug, Default)]
pub struct StepScratch {
    grad: Vec<f32>,
    coeffs: Vec<f32>,
}

impl StepScratch {
    pub fn new(dim: usize) -> Self {
        StepScratch {
            grad: Vec::with_capacity(dim),
            coeffs: Vec::new(),
        }
    }
}

/// Gradient of the negative-sampling log-likelihood for one
/// (center, context, negatives) triple.
#[derive(Clone, Debug, PartialEq)]
pub struct SgnsGradient {
    pub center: Vec<f32>,
    /// One entry per target (context first, then negatives, in order).
    pub targets: Vec<(u32, Vec<f32>)>,
}

/// One stochastic gradient ascent step on
/// `log σ(center·out[context]) + Σ_n log σ(-center·out[n])`.
///
/// All gradients are taken at the pre-step parameter values; output rows
/// are updated first and the center vector last. If the step would produce
/// a non-finite parameter nothing is written and a divergence error is
/// returned.
pub fn sgns_step<O: Rows + ?Sized>(
    center: &mut [f32],
    output: &mut O,
    context: u32,
    negatives: &[u32],
    lr: f32,
    sigmoid: &Sigmoid,
    scratch: &mut StepScratch,
) -> Result<()> {
    accumulate(center, output, context, negatives, lr, sigmoid, scratch)?;
    let targets = std::iter::once(context).chain(negatives.iter().copied());
    for (id, &g) in targets.zip(&scratch.coeffs) {
        axpy(g, center, output.row_mut(id as usize));
    }
    axpy(1.0, &scratch.grad, center);
    Ok(())
}

/// The analytic gradient used by [`sgns_step`], without applying it.
pub fn sgns_gradient<O: Rows + ?Sized>(
    center: &[f32],
    output: &O,
    context: u32,
    negatives: &[u32],
    sigmoid: &Sigmoid,
) -> Result<SgnsGradient> {
    let mut scratch = StepScratch::new(center.len());
    accumulate(
        center,
        output,
        context,
        negatives,
        1.0,
        sigmoid,
        &mut scratch,
    )?;
    let targets = std::iter::once(context).chain(negatives.iter().copied());
    Ok(SgnsGradient {
        targets: targets
            .zip(&scratch.coeffs)
            .map(|(id, &g)| (id, center.iter().map(|c| g * c).collect()))
            .collect(),
        center: scratch.grad,
    })
}

fn accumulate<O: Rows + ?Sized>(
    center: &[f32],
    output: &O,
    context: u32,
    negatives: &[u32],
    lr: f32,
    sigmoid: &Sigmoid,
    scratch: &mut StepScratch,
) -> Result<()> {
    scratch.grad.clear();
    scratch.grad.resize(center.len(), 0.0);
    scratch.coeffs.clear();

    let center_max = max_abs(center) as f64;
    let mut center_growth = 0f64;
    let mut output_max = 0f64;
    let mut coeff_sum = 0f64;
    let targets = std::iter::once((context, 1.0f32)).chain(negatives.iter().map(|&n| (n, 0.0)));
    for (id, label) in targets {
        let row = output.row(id as usize);
        let score = dot(center, row);
        if !score.is_finite() {
            return Err(Error::Divergence(format!(
                "non-finite score {score} against output row {id}"
            )));
        }
        let g = lr * (label - sigmoid.eval(score));
        let row_max = max_abs(row) as f64;
        center_growth += g.abs() as f64 * row_max;
        output_max = output_max.max(row_max);
        coeff_sum += g.abs() as f64;
        axpy(g, row, &mut scratch.grad);
        scratch.coeffs.push(g);
    }

    let limit = f32::MAX as f64;
    if center_max + center_growth >= limit || output_max + coeff_sum * center_max >= limit {
        return Err(Error::Divergence(format!(
            "update of size {center_growth:e} would overflow parameters (lr={lr})"
        )));
    }
    Ok(())
}
