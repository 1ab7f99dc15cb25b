use std::collections::HashMap;

use crate::corpus::{strip_tag, TAG_SEPARATOR};
use crate::error::{Error, Result};
use crate::mssg::{escape, parse_label, sense_label, ModelKind, SenseModel};
use crate::sgns::norm;
use crate::store::Include;

#[derive(Clone, Debug)]
struct Surface {
    name: String,
    global: Option<usize>,
    senses: Vec<Option<usize>>,
}

/// A read-only table of labelled vectors, the form every query and the
/// analogy harness work on. Rows keep their stored values and a unit
/// normalized copy; cluster state is not part of it.
///
/// Rows are grouped by surface. The order in which surfaces first appear
/// is their frequency rank, which is what `restrict_vocab` cuts on.
#[derive(Clone, Debug)]
pub struct Embeddings {
    kind: ModelKind,
    dim: usize,
    labels: Vec<String>,
    raw: Vec<f32>,
    unit: Vec<f32>,
    row_surface: Vec<u32>,
    by_label: HashMap<String, usize>,
    surfaces: Vec<Surface>,
    by_surface: HashMap<String, u32>,
    by_bare: HashMap<String, u32>,
    pub(crate) global_rows: Vec<usize>,
    pub(crate) sense_rows: Vec<usize>,
}

impl Embeddings {
    /// Builds from `(label, vector)` pairs. `kind` is inferred from the
    /// labels when not given: any `w#k` label means a sense model, labels
    /// that all carry a `|TAG` mean a tagged model.
    pub fn from_rows<I, S>(kind: Option<ModelKind>, dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut b = Builder::new(dim);
        for (i, (label, values)) in rows.into_iter().enumerate() {
            b.push(label.into(), &values)
                .map_err(|m| Error::load(i + 1, m))?;
        }
        b.finish(kind).map_err(|m| Error::load(0, m))
    }

    /// Evaluation view of a trained model.
    pub fn from_model(model: &SenseModel, include: Include) -> Result<Self> {
        let mut b = Builder::new(model.dim());
        for (label, row) in labeled_rows(model, include)? {
            b.push(label, row).map_err(Error::Config)?;
        }
        b.finish(Some(model.kind())).map_err(Error::Config)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, row: usize) -> &str {
        &self.labels[row]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Stored (unnormalized) values of `row`.
    pub fn vector(&self, row: usize) -> &[f32] {
        &self.raw[row * self.dim..(row + 1) * self.dim]
    }

    pub(crate) fn unit(&self, row: usize) -> &[f32] {
        &self.unit[row * self.dim..(row + 1) * self.dim]
    }

    /// Row stored under exactly this label.
    pub fn row(&self, label: &str) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    /// Row an operand refers to. Labels with a `#k` selector name that
    /// sense row; other labels name a global row. In a tagged model an
    /// untagged word stands for its most frequent tagged variant.
    pub fn resolve(&self, label: &str) -> Option<usize> {
        if let Some(&row) = self.by_label.get(label) {
            return Some(row);
        }
        if self.kind == ModelKind::Tagged && !label.contains(TAG_SEPARATOR) {
            let surface = self.by_bare.get(label)?;
            return self.surfaces[*surface as usize].global;
        }
        None
    }

    /// Frequency rank of the surface owning `row`.
    pub(crate) fn rank(&self, row: usize) -> usize {
        self.row_surface[row] as usize
    }

    /// Surface of `row` with any sense selector removed and, for tagged
    /// models, the tag stripped: the form compared against gold answers.
    pub fn bare_surface(&self, row: usize) -> &str {
        let name = &self.surfaces[self.rank(row)].name;
        if self.kind == ModelKind::Tagged {
            strip_tag(name)
        } else {
            name
        }
    }

    /// Rank of the surface a query word refers to.
    pub(crate) fn surface_rank(&self, word: &str) -> Option<usize> {
        let id = match self.by_surface.get(word) {
            Some(&id) => id,
            None if self.kind == ModelKind::Tagged => *self.by_bare.get(word)?,
            None => return None,
        };
        Some(id as usize)
    }

    pub(crate) fn surface_global(&self, rank: usize) -> Option<usize> {
        self.surfaces[rank].global
    }

    /// Distinct surfaces.
    pub fn surface_count(&self) -> usize {
        self.surfaces.len()
    }
}

const MAX_SENSES: usize = 1 << 16;

struct Builder {
    dim: usize,
    e: Embeddings,
}

impl Builder {
    fn new(dim: usize) -> Self {
        Builder {
            dim,
            e: Embeddings {
                kind: ModelKind::Word,
                dim,
                labels: Vec::new(),
                raw: Vec::new(),
                unit: Vec::new(),
                row_surface: Vec::new(),
                by_label: HashMap::new(),
                surfaces: Vec::new(),
                by_surface: HashMap::new(),
                by_bare: HashMap::new(),
                global_rows: Vec::new(),
                sense_rows: Vec::new(),
            },
        }
    }

    fn push(&mut self, label: String, values: &[f32]) -> std::result::Result<(), String> {
        if values.len() != self.dim {
            return Err(format!(
                "row length mismatch: `{label}` has {} values, expected {}",
                values.len(),
                self.dim
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(format!("`{label}` has a non-finite value"));
        }
        let e = &mut self.e;
        if e.by_label.contains_key(&label) {
            return Err(format!("duplicate label `{label}`"));
        }
        let row = e.labels.len();
        let parsed = parse_label(&label);
        let next = e.surfaces.len() as u32;
        let surface = *e
            .by_surface
            .entry(parsed.surface.to_string())
            .or_insert(next);
        if surface == next {
            e.surfaces.push(Surface {
                name: parsed.surface.to_string(),
                global: None,
                senses: Vec::new(),
            });
        }
        let entry = &mut e.surfaces[surface as usize];
        match parsed.sense {
            None => entry.global = Some(row),
            Some(k) => {
                if k >= MAX_SENSES {
                    return Err(format!("sense index of `{label}` is too large"));
                }
                if entry.senses.len() <= k {
                    entry.senses.resize(k + 1, None);
                }
                entry.senses[k] = Some(row);
            }
        }
        e.row_surface.push(surface);
        e.raw.extend_from_slice(values);
        let n = norm(values);
        if n > 0.0 {
            e.unit.extend(values.iter().map(|v| v / n));
        } else {
            e.unit.extend_from_slice(values);
        }
        e.by_label.insert(label.clone(), row);
        e.labels.push(label);
        Ok(())
    }

    fn finish(mut self, kind: Option<ModelKind>) -> std::result::Result<Embeddings, String> {
        let e = &mut self.e;
        for s in &e.surfaces {
            if let Some(k) = s.senses.iter().position(Option::is_none) {
                return Err(format!(
                    "senses of `{}` are not contiguous from 0 (missing #{k})",
                    escape(&s.name)
                ));
            }
        }
        let has_senses = e.surfaces.iter().any(|s| !s.senses.is_empty());
        e.kind = kind.unwrap_or_else(|| {
            if has_senses {
                ModelKind::Mssg
            } else if !e.surfaces.is_empty()
                && e.surfaces.iter().all(|s| {
                    s.name
                        .rsplit_once(TAG_SEPARATOR)
                        .is_some_and(|(w, t)| !w.is_empty() && !t.is_empty())
                })
            {
                ModelKind::Tagged
            } else {
                ModelKind::Word
            }
        });
        for (id, s) in e.surfaces.iter().enumerate() {
            if let Some(g) = s.global {
                e.global_rows.push(g);
            }
            if s.senses.is_empty() {
                e.sense_rows.extend(s.global);
            } else {
                e.sense_rows.extend(s.senses.iter().flatten());
            }
            if e.kind == ModelKind::Tagged {
                e.by_bare
                    .entry(strip_tag(&s.name).to_string())
                    .or_insert(id as u32);
            }
        }
        Ok(self.e)
    }
}

/// Labelled rows of `model` in output order: global rows first, then the
/// sense rows of every word in vocabulary order. Words that are trained
/// with a single sense contribute only `w#0`, which equals their global
/// vector.
pub(crate) fn labeled_rows(model: &SenseModel, include: Include) -> Result<Vec<(String, &[f32])>> {
    let vocab = model.vocab();
    let mssg = model.kind() == ModelKind::Mssg;
    if include == Include::Senses && !mssg {
        return Err(Error::Config(format!(
            "a {} model has no sense rows",
            model.kind()
        )));
    }
    let mut rows = Vec::new();
    if include != Include::Senses {
        for w in 0..vocab.len() as u32 {
            let token = vocab.token(w);
            rows.push((escape(token).into_owned(), model.global().row(w as usize)));
        }
    }
    if include != Include::Global && mssg {
        for w in 0..vocab.len() as u32 {
            let token = vocab.token(w);
            for k in 0..model.n_senses(w) {
                let at = crate::mssg::SenseRef {
                    word_id: w,
                    sense: k,
                };
                rows.push((sense_label(token, k), model.sense_vector(at)));
            }
        }
    }
    Ok(rows)
}
