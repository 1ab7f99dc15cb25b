//! Online context clustering primitives.

/// Writes the arithmetic mean of the rows of `context` into `out`. Returns
/// `false` for an empty context or a mean that is exactly zero.
pub(crate) fn context_mean<'a, F>(row: F, context: &[u32], out: &mut Vec<f64>) -> bool
where
    F: Fn(u32) -> &'a [f32],
{
    out.clear();
    let Some(&first) = context.first() else {
        return false;
    };
    out.extend(row(first).iter().map(|&v| v as f64));
    for &c in &context[1..] {
        for (o, &v) in out.iter_mut().zip(row(c)) {
            *o += v as f64;
        }
    }
    let n = context.len() as f64;
    let mut nonzero = false;
    for o in out.iter_mut() {
        *o /= n;
        nonzero |= *o != 0.0;
    }
    nonzero
}

/// Predicted sense for a word with `centroids` (k rows of `ctx.len()`
/// values) and assignment `counts`.
///
/// A zero context maps to sense 0. While some cluster is still unused the
/// lowest unused index is returned, so the first `k` occurrences seed the
/// clusters in order. Otherwise the cosine argmax wins, ties going to the
/// lowest index.
pub(crate) fn argmax_sense(centroids: &[f64], counts: &[u64], ctx: &[f64]) -> usize {
    let ctx_norm = ctx.iter().map(|x| x * x).sum::<f64>().sqrt();
    if ctx_norm == 0.0 {
        return 0;
    }
    if let Some(unused) = counts.iter().position(|&n| n == 0) {
        return unused;
    }
    let dim = ctx.len();
    let mut best = (0, f64::NEG_INFINITY);
    for (k, u) in centroids.chunks_exact(dim).enumerate() {
        let cos = cosine(u, ctx, ctx_norm);
        if cos > best.1 {
            best = (k, cos);
        }
    }
    best.0
}

fn cosine(u: &[f64], ctx: &[f64], ctx_norm: f64) -> f64 {
    let (mut dot, mut uu) = (0.0, 0.0);
    for (a, b) in u.iter().zip(ctx) {
        dot += a * b;
        uu += a * a;
    }
    if uu == 0.0 {
        0.0
    } else {
        dot / (uu.sqrt() * ctx_norm)
    }
}

/// `u <- (n u + ctx) / (n + 1)`, `n <- n + 1`.
pub(crate) fn running_mean(centroid: &mut [f64], count: &mut u64, ctx: &[f64]) {
    let n = *count as f64;
    let inv = 1.0 / (n + 1.0);
    for (u, &x) in centroid.iter_mut().zip(ctx) {
        *u = (n * *u + x) * inv;
    }
    *count += 1;
}
