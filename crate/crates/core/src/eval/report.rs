use std::fmt;

use rayon::prelude::*;

use super::analogy::{AnalogyDataset, CategoryKind, Quadruple};
use super::embeddings::Embeddings;
use super::query::{Space, TopN};
use crate::mssg::ModelKind;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnalogyOptions {
    pub space: Space,
    /// Only the `n` most frequent surfaces take part, as queries and as
    /// candidates. Words outside the cut count as out of vocabulary.
    pub restrict_vocab: Option<usize>,
    /// Count out-of-vocabulary quadruples as wrong answers instead of
    /// skipping them.
    pub oov_as_wrong: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryScore {
    pub name: String,
    pub kind: CategoryKind,
    pub correct: usize,
    pub attempted: usize,
    pub skipped: usize,
}

impl CategoryScore {
    fn empty(name: &str, kind: CategoryKind) -> Self {
        CategoryScore {
            name: name.to_string(),
            kind,
            correct: 0,
            attempted: 0,
            skipped: 0,
        }
    }

    /// `correct / attempted`, 0 when nothing was attempted.
    pub fn accuracy(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.correct as f64 / self.attempted as f64
        }
    }

    fn add(&mut self, other: &CategoryScore) {
        self.correct += other.correct;
        self.attempted += other.attempted;
        self.skipped += other.skipped;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalogyReport {
    pub space: Space,
    pub kind: ModelKind,
    pub categories: Vec<CategoryScore>,
}

impl AnalogyReport {
    fn total(&self, name: &str, filter: impl Fn(CategoryKind) -> bool) -> CategoryScore {
        let mut t = CategoryScore::empty(name, CategoryKind::Unknown);
        for c in self.categories.iter().filter(|c| filter(c.kind)) {
            t.add(c);
        }
        t
    }

    pub fn syntactic(&self) -> CategoryScore {
        self.total("Syntactic", |k| k == CategoryKind::Syntactic)
    }

    pub fn semantic(&self) -> CategoryScore {
        self.total("Semantic", |k| k == CategoryKind::Semantic)
    }

    pub fn all(&self) -> CategoryScore {
        self.total("All", |_| true)
    }

    /// How query words and predictions were matched, for report headers.
    pub fn policy(&self) -> String {
        let resolution = match self.kind {
            ModelKind::Tagged => "query words use their most frequent tagged variant; predictions compared tag-stripped",
            ModelKind::Mssg => "query words use global vectors; predictions compared by surface",
            ModelKind::Word => "exact word match",
        };
        format!("space={} ({resolution})", self.space)
    }

    /// One `category kind correct attempted skipped accuracy` line per
    /// category and aggregate, tab separated.
    pub fn tsv(&self) -> String {
        let mut out = String::new();
        let totals = [self.syntactic(), self.semantic(), self.all()];
        for (c, kind) in self
            .categories
            .iter()
            .map(|c| (c, c.kind.as_str()))
            .chain(totals.iter().map(|c| (c, "total")))
        {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{:.4}\n",
                c.name,
                kind,
                c.correct,
                c.attempted,
                c.skipped,
                c.accuracy()
            ));
        }
        out
    }
}

impl fmt::Display for AnalogyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.policy())?;
        let totals = [self.syntactic(), self.semantic(), self.all()];
        let width = self
            .categories
            .iter()
            .chain(&totals)
            .map(|c| c.name.chars().count())
            .max()
            .unwrap_or(0)
            .max("category".len());
        writeln!(
            f,
            "{:<width$}  {:<9}  {:>7}  {:>9}  {:>7}  {:>8}",
            "category", "kind", "correct", "attempted", "skipped", "accuracy"
        )?;
        let rows = self
            .categories
            .iter()
            .map(|c| (c, c.kind.as_str()))
            .chain(totals.iter().map(|c| (c, "total")));
        for (c, kind) in rows {
            writeln!(
                f,
                "{:<width$}  {:<9}  {:>7}  {:>9}  {:>7}  {:>7.2}%",
                c.name,
                kind,
                c.correct,
                c.attempted,
                c.skipped,
                100.0 * c.accuracy()
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Outcome {
    Correct,
    Wrong,
    Oov,
}

/// Scores every quadruple by whether the top answer to `a : b :: c : ?`
/// is `d`. Words are lowercased before lookup. The three query words are
/// never candidates.
pub fn evaluate_analogies(
    emb: &Embeddings,
    dataset: &AnalogyDataset,
    options: &AnalogyOptions,
) -> AnalogyReport {
    let jobs: Vec<(usize, &Quadruple)> = dataset
        .categories
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.quadruples.iter().map(move |q| (i, q)))
        .collect();
    let outcomes: Vec<(usize, Outcome)> = jobs
        .par_iter()
        .map(|&(i, q)| (i, score(emb, q, options)))
        .collect();

    let mut categories: Vec<CategoryScore> = dataset
        .categories
        .iter()
        .map(|c| CategoryScore::empty(&c.name, c.kind))
        .collect();
    for (i, outcome) in outcomes {
        let c = &mut categories[i];
        match outcome {
            Outcome::Correct => {
                c.correct += 1;
                c.attempted += 1;
            }
            Outcome::Wrong => c.attempted += 1,
            Outcome::Oov if options.oov_as_wrong => c.attempted += 1,
            Outcome::Oov => c.skipped += 1,
        }
    }
    AnalogyReport {
        space: options.space,
        kind: emb.kind(),
        categories,
    }
}

fn score(emb: &Embeddings, q: &Quadruple, options: &AnalogyOptions) -> Outcome {
    let limit = options.restrict_vocab.unwrap_or(usize::MAX);
    let mut surfaces = [0usize; 4];
    let mut rows = [0usize; 3];
    for (i, word) in q.iter().enumerate() {
        let word = word.to_lowercase();
        let Some(s) = emb.surface_rank(&word).filter(|&s| s < limit) else {
            return Outcome::Oov;
        };
        surfaces[i] = s;
        if i < 3 {
            let Some(r) = emb.surface_global(s) else {
                return Outcome::Oov;
            };
            rows[i] = r;
        }
    }
    let [ra, rb, rc] = rows;
    let Some(target) = emb.combine(&[(-1.0, ra), (1.0, rb), (1.0, rc)]) else {
        return Outcome::Wrong;
    };
    let best = match options.space {
        Space::Global => {
            let mut top = TopN::new(1);
            for &row in &emb.global_rows {
                if emb.rank(row) >= limit {
                    break;
                }
                if row != ra && row != rb && row != rc {
                    top.push(crate::sgns::dot(emb.unit(row), &target), row);
                }
            }
            top.into_vec()
        }
        Space::Sense => emb
            .best_senses(&target, 1, options.restrict_vocab, &surfaces[..3])
            .into_vec(),
    };
    let gold = q[3].to_lowercase();
    match best.first() {
        Some(&(_, row)) if emb.bare_surface(row) == gold => Outcome::Correct,
        _ => Outcome::Wrong,
    }
}
