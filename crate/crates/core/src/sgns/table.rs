use rand::Rng;

/// Dense row-major matrix of `f32` vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    data: Vec<f32>,
}

impl EmbeddingTable {
    pub fn zeros(rows: usize, dim: usize) -> Self {
        EmbeddingTable {
            dim,
            data: vec![0.0; rows * dim],
        }
    }

    /// Uniform initialization in `[-0.5/dim, 0.5/dim]`.
    pub fn uniform<R: Rng + ?Sized>(rows: usize, dim: usize, rng: &mut R) -> Self {
        let scale = 0.5 / dim as f32;
        let data = (0..rows * dim)
            .map(|_| (rng.random::<f32>() * 2.0 - 1.0) * scale)
            .collect();
        EmbeddingTable { dim, data }
    }

    pub fn from_vec(dim: usize, data: Vec<f32>) -> Self {
        assert!(
            dim > 0 && data.len().is_multiple_of(dim),
            "data length is not a multiple of dim"
        );
        EmbeddingTable { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f32] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f32]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Row access used by the gradient step.
pub trait Rows {
    fn row(&self, i: usize) -> &[f32];
    fn row_mut(&mut self, i: usize) -> &mut [f32];
}

impl Rows for EmbeddingTable {
    #[inline]
    fn row(&self, i: usize) -> &[f32] {
        EmbeddingTable::row(self, i)
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [f32] {
        EmbeddingTable::row_mut(self, i)
    }
}

/// An aliasing view over a parameter buffer shared by training workers.
///
/// Workers read and write rows without synchronization (Hogwild-style
/// asynchronous SGD). Concurrent writers may lose or interleave updates to
/// the same row; this is the training contract, and results are only
/// reproducible with a single worker. The view must not outlive the buffer
/// it was created from, and within one worker no two row borrows from the
/// same view may be alive at once.
#[derive(Debug)]
pub(crate) struct SharedRows<T> {
    ptr: *mut T,
    rows: usize,
    dim: usize,
}

impl<T> Clone for SharedRows<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for SharedRows<T> {}

unsafe impl<T: Send> Send for SharedRows<T> {}
unsafe impl<T: Send> Sync for SharedRows<T> {}

impl<T> SharedRows<T> {
    pub(crate) fn new(data: &mut [T], dim: usize) -> Self {
        SharedRows {
            ptr: data.as_mut_ptr(),
            rows: data.len() / dim,
            dim,
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> &[T] {
        assert!(i < self.rows);
        unsafe { std::slice::from_raw_parts(self.ptr.add(i * self.dim), self.dim) }
    }

    #[allow(clippy::mut_from_ref)]
    #[inline]
    pub(crate) fn get_mut(&self, i: usize) -> &mut [T] {
        assert!(i < self.rows);
        unsafe { std::slice::from_raw_parts_mut(self.ptr.add(i * self.dim), self.dim) }
    }
}

impl Rows for SharedRows<f32> {
    #[inline]
    fn row(&self, i: usize) -> &[f32] {
        self.get(i)
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [f32] {
        self.get_mut(i)
    }
}

#[inline]
pub fn dot(a: &[f32], b: &[f32]) -> f32 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0f32; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut sum: f32 = acc.iter().sum();
    for (x, y) in ra.iter().zip(rb) {
        sum += x * y;
    }
    sum
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f32, x: &[f32], y: &mut [f32]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn max_abs(x: &[f32]) -> f32 {
    x.iter().fold(0f32, |m, v| m.max(v.abs()))
}

pub fn norm(x: &[f32]) -> f32 {
    dot(x, x).sqrt()
}
