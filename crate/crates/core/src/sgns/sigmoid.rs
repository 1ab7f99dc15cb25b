use super::config::SigmoidMode;

const BINS: usize = 1024;
const MAX_EXP: f32 = 6.0;

#[derive(Clone, Debug)]
pub enum Sigmoid {
    Exact,
    Table(Box<[f32; BINS]>),
}

impl Sigmoid {
    pub fn new(mode: SigmoidMode) -> Self {
        match mode {
            SigmoidMode::Exact => Sigmoid::Exact,
            SigmoidMode::Table => {
                let mut table = Box::new([0f32; BINS]);
                for (i, v) in table.iter_mut().enumerate() {
                    // bin centre
                    let x =
                        -MAX_EXP as f64 + (i as f64 + 0.5) * (2.0 * MAX_EXP as f64) / BINS as f64;
                    *v = exact(x) as f32;
                }
                Sigmoid::Table(table)
            }
        }
    }

    #[inline]
    pub fn eval(&self, x: f32) -> f32 {
        match self {
            Sigmoid::Exact => exact(x as f64) as f32,
            Sigmoid::Table(table) => {
                let pos = (x + MAX_EXP) * (BINS as f32 / (2.0 * MAX_EXP));
                let idx = (pos as isize).clamp(0, BINS as isize - 1);
                table[idx as usize]
            }
        }
    }
}

#[inline]
pub fn exact(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}
