use std::fmt;
use std::str::FromStr;

use super::embeddings::Embeddings;
use crate::error::{Error, Result};
use crate::sgns::{dot, norm};

/// Which rows a query ranks against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Space {
    /// One vector per word.
    #[default]
    Global,
    /// Sense rows; words without senses take part with their global row.
    Sense,
}

impl Space {
    pub fn as_str(self) -> &'static str {
        match self {
            Space::Global => "global",
            Space::Sense => "sense",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(Space::Global),
            "sense" => Ok(Space::Sense),
            other => Err(Error::Usage(format!("unknown space `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hit {
    pub label: String,
    pub score: f32,
}

/// Ranked query answer, best first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QueryResult {
    pub hits: Vec<Hit>,
    /// Set when the query vector was zero and nothing was ranked.
    pub warning: Option<String>,
}

impl fmt::Display for QueryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .hits
            .iter()
            .map(|h| h.label.chars().count())
            .max()
            .unwrap_or(0);
        for (i, h) in self.hits.iter().enumerate() {
            writeln!(f, "{:>3}  {:<width$}  {:.6}", i + 1, h.label, h.score)?;
        }
        Ok(())
    }
}

/// A signed operand of a vector expression.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub sign: f32,
    pub label: String,
}

/// Parses expressions such as `banco + dados - dinheiro`, `+rei -homem
/// +mulher` or `banco#1 - dinheiro`. A term without a sign is added.
pub fn parse_expression(expr: &str) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    let mut pending: Option<f32> = None;
    for piece in expr.split_whitespace() {
        let (sign, rest) = split_sign(piece);
        if rest.is_empty() {
            if pending.is_some() {
                return Err(Error::Usage(format!("dangling operator in `{expr}`")));
            }
            pending = sign;
            continue;
        }
        let sign = match (pending.take(), sign) {
            (Some(_), Some(_)) => {
                return Err(Error::Usage(format!("two operators in a row in `{expr}`")))
            }
            (p, s) => p.or(s).unwrap_or(1.0),
        };
        terms.push(Term {
            sign,
            label: rest.to_string(),
        });
    }
    if pending.is_some() {
        return Err(Error::Usage(format!("dangling operator in `{expr}`")));
    }
    if terms.is_empty() {
        return Err(Error::Usage("empty expression".into()));
    }
    Ok(terms)
}

fn split_sign(piece: &str) -> (Option<f32>, &str) {
    for (op, sign) in [("+", 1.0), ("-", -1.0), ("\u{2212}", -1.0)] {
        if let Some(rest) = piece.strip_prefix(op) {
            return (Some(sign), rest);
        }
    }
    (None, piece)
}

/// Keeps the `n` best `(score, row)` pairs. Equal scores keep the row seen
/// first.
pub(crate) struct TopN {
    n: usize,
    items: Vec<(f32, usize)>,
}

impl TopN {
    pub(crate) fn new(n: usize) -> Self {
        TopN {
            n,
            items: Vec::with_capacity(n + 1),
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, score: f32, row: usize) {
        if self.n == 0 || score.is_nan() {
            return;
        }
        if self.items.len() == self.n && score <= self.items[self.n - 1].0 {
            return;
        }
        let at = self.items.partition_point(|&(s, _)| s >= score);
        self.items.insert(at, (score, row));
        self.items.truncate(self.n);
    }

    pub(crate) fn into_vec(self) -> Vec<(f32, usize)> {
        self.items
    }
}

impl Embeddings {
    fn candidates(&self, space: Space) -> &[usize] {
        match space {
            Space::Global => &self.global_rows,
            Space::Sense => &self.sense_rows,
        }
    }

    fn lookup(&self, label: &str, space: Space) -> Result<usize> {
        self.resolve(label).ok_or_else(|| Error::OutOfVocabulary {
            label: label.to_string(),
            space: space.as_str(),
        })
    }

    /// Unit vector of `sum sign_i * unit(row_i)`, or `None` when the sum is
    /// zero.
    pub(crate) fn combine(&self, terms: &[(f32, usize)]) -> Option<Vec<f32>> {
        let mut target = vec![0f32; self.dim()];
        for &(sign, row) in terms {
            for (t, &v) in target.iter_mut().zip(self.unit(row)) {
                *t += sign * v;
            }
        }
        let n = norm(&target);
        if n <= ZERO_NORM {
            return None;
        }
        target.iter_mut().for_each(|t| *t /= n);
        Some(target)
    }

    /// Ranks the rows of `space` by cosine to the unit vector `target`.
    pub(crate) fn rank_rows(
        &self,
        target: &[f32],
        space: Space,
        topn: usize,
        exclude: impl Fn(usize) -> bool,
    ) -> Vec<Hit> {
        let mut top = TopN::new(topn);
        for &row in self.candidates(space) {
            if !exclude(row) {
                top.push(dot(self.unit(row), target), row);
            }
        }
        self.hits(top)
    }

    fn hits(&self, top: TopN) -> Vec<Hit> {
        top.into_vec()
            .into_iter()
            .map(|(score, row)| Hit {
                label: self.label(row).to_string(),
                score,
            })
            .collect()
    }

    /// Rows most similar to `label`, the query row itself excluded.
    pub fn nearest_neighbors(&self, label: &str, topn: usize, space: Space) -> Result<QueryResult> {
        let terms = [Term {
            sign: 1.0,
            label: label.to_string(),
        }];
        self.vector_algebra(&terms, topn, space)
    }

    /// Ranks rows by cosine to the signed sum of the operands' unit
    /// vectors. Operand rows never appear in the result. A sum that
    /// cancels to zero gives an empty result with a warning.
    pub fn vector_algebra(&self, terms: &[Term], topn: usize, space: Space) -> Result<QueryResult> {
        if terms.is_empty() {
            return Err(Error::Usage("empty expression".into()));
        }
        let resolved = terms
            .iter()
            .map(|t| Ok((t.sign, self.lookup(&t.label, space)?)))
            .collect::<Result<Vec<_>>>()?;
        let Some(target) = self.combine(&resolved) else {
            return Ok(QueryResult {
                hits: Vec::new(),
                warning: Some("expression sums to the zero vector".into()),
            });
        };
        let operands: Vec<usize> = resolved.iter().map(|&(_, r)| r).collect();
        Ok(QueryResult {
            hits: self.rank_rows(&target, space, topn, |r| operands.contains(&r)),
            warning: None,
        })
    }

    /// Answers `a : b :: c : ?` with the rows closest to `b + c - a`.
    ///
    /// In the global space the rows used for `a`, `b` and `c` are excluded.
    /// In the sense space each word is scored by its best sense and the
    /// three query words are excluded with all their senses.
    pub fn solve_analogy(
        &self,
        a: &str,
        b: &str,
        c: &str,
        topn: usize,
        space: Space,
    ) -> Result<QueryResult> {
        let (ra, rb, rc) = (
            self.lookup(a, space)?,
            self.lookup(b, space)?,
            self.lookup(c, space)?,
        );
        let Some(target) = self.combine(&[(-1.0, ra), (1.0, rb), (1.0, rc)]) else {
            return Ok(QueryResult {
                hits: Vec::new(),
                warning: Some("analogy target is the zero vector".into()),
            });
        };
        let hits = match space {
            Space::Global => {
                self.rank_rows(&target, space, topn, |r| r == ra || r == rb || r == rc)
            }
            Space::Sense => {
                let skip = [self.rank(ra), self.rank(rb), self.rank(rc)];
                self.hits(self.best_senses(&target, topn, None, &skip))
            }
        };
        Ok(QueryResult {
            hits,
            warning: None,
        })
    }

    /// Scores every surface (rank below `limit`) by its best sense row.
    pub(crate) fn best_senses(
        &self,
        target: &[f32],
        topn: usize,
        limit: Option<usize>,
        skip_surfaces: &[usize],
    ) -> TopN {
        let mut top = TopN::new(topn);
        let rows = &self.sense_rows;
        let mut i = 0;
        while i < rows.len() {
            let surface = self.rank(rows[i]);
            if limit.is_some_and(|l| surface >= l) {
                break;
            }
            let mut best = (f32::NEG_INFINITY, rows[i]);
            while i < rows.len() && self.rank(rows[i]) == surface {
                let s = dot(self.unit(rows[i]), target);
                if s > best.0 {
                    best = (s, rows[i]);
                }
                i += 1;
            }
            if !skip_surfaces.contains(&surface) {
                top.push(best.0, best.1);
            }
        }
        top
    }
}

const ZERO_NORM: f32 = 1e-12;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn emb(rows: Vec<(&str, Vec<f32>)>) -> Embeddings {
        let dim = rows[0].1.len();
        Embeddings::from_rows(None, dim, rows).unwrap()
    }

    fn terms(expr: &str) -> Vec<Term> {
        parse_expression(expr).unwrap()
    }

    #[test]
    fn duplicate_row_ranks_first_with_unit_score() {
        let e = emb(vec![
            ("a", vec![0.3, -1.2, 0.5]),
            ("b", vec![1.0, 1.0, 0.0]),
            ("a2", vec![0.3, -1.2, 0.5]),
        ]);
        let r = e.nearest_neighbors("a", 2, Space::Global).unwrap();
        assert_eq!(r.hits[0].label, "a2");
        assert!((r.hits[0].score - 1.0).abs() < 1e-6);
        assert!(r.hits.iter().all(|h| h.label != "a"));
    }

    #[test]
    fn orthogonal_rows_score_zero() {
        let e = emb(vec![
            ("x", vec![1.0, 0.0, 0.0]),
            ("y", vec![0.0, 2.0, 0.0]),
            ("z", vec![0.0, 0.0, 3.0]),
        ]);
        let r = e.nearest_neighbors("x", 5, Space::Global).unwrap();
        assert_eq!(r.hits.len(), 2);
        assert!(r.hits.iter().all(|h| h.score == 0.0));
    }

    #[test]
    fn oov_names_label_and_space() {
        let e = emb(vec![("x", vec![1.0])]);
        let err = e.nearest_neighbors("nada", 1, Space::Sense).unwrap_err();
        assert_eq!(err.to_string(), "`nada` not found in sense space");
    }

    #[test]
    fn single_term_is_nearest_neighbors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let names: Vec<String> = (0..20).map(|i| format!("w{i}")).collect();
        let rows = names
            .iter()
            .map(|n| {
                (
                    n.as_str(),
                    (0..6).map(|_| rng.random_range(-1.0..1.0)).collect(),
                )
            })
            .collect();
        let e = emb(rows);
        let nn = e.nearest_neighbors("w3", 5, Space::Global).unwrap();
        let alg = e.vector_algebra(&terms("+w3"), 5, Space::Global).unwrap();
        assert_eq!(nn, alg);
    }

    #[test]
    fn cancelling_terms_warn() {
        let e = emb(vec![("w", vec![1.0, 2.0]), ("v", vec![0.0, 1.0])]);
        let r = e.vector_algebra(&terms("+w -w"), 5, Space::Global).unwrap();
        assert!(r.hits.is_empty());
        assert!(r.warning.is_some());
    }

    #[test]
    fn expression_syntax() {
        let t = terms("banco + dados - dinheiro");
        assert_eq!(
            t.iter()
                .map(|t| (t.sign, t.label.as_str()))
                .collect::<Vec<_>>(),
            [(1.0, "banco"), (1.0, "dados"), (-1.0, "dinheiro")]
        );
        assert_eq!(terms("+rei -homem +mulher")[1].sign, -1.0);
        assert_eq!(terms("centro-direita")[0].label, "centro-direita");
        assert_eq!(terms("a \u{2212}b")[1].sign, -1.0);
        assert!(parse_expression("").is_err());
        assert!(parse_expression("a + - b").is_err());
        assert!(parse_expression("a +").is_err());
    }

    #[test]
    fn operands_are_excluded() {
        let e = emb(vec![
            ("a", vec![1.0, 0.0]),
            ("b", vec![0.9, 0.1]),
            ("c", vec![0.0, 1.0]),
            ("d", vec![0.5, 0.5]),
        ]);
        let r = e.vector_algebra(&terms("a + b"), 4, Space::Global).unwrap();
        let labels: Vec<_> = r.hits.iter().map(|h| h.label.as_str()).collect();
        assert_eq!(labels, ["d", "c"]);
    }

    #[test]
    fn analogy_with_a_equal_b_finds_neighbour_of_c() {
        let e = emb(vec![
            ("a", vec![1.0, 0.0, 0.0]),
            ("c", vec![0.0, 1.0, 0.0]),
            ("near", vec![0.1, 0.9, 0.1]),
            ("far", vec![0.0, 0.1, 1.0]),
        ]);
        let r = e.solve_analogy("a", "a", "c", 1, Space::Global).unwrap();
        assert_eq!(r.hits[0].label, "near");
    }

    #[test]
    fn sense_space_scores_words_by_best_sense() {
        let e = emb(vec![
            ("a", vec![1.0, 0.0]),
            ("b", vec![0.0, 1.0]),
            ("c", vec![1.0, 1.0]),
            ("d", vec![0.3, -1.0]),
            ("d#0", vec![-1.0, 0.0]),
            ("d#1", vec![0.0, 1.0]),
        ]);
        let r = e.solve_analogy("a", "b", "c", 3, Space::Sense).unwrap();
        assert_eq!(r.hits[0].label, "d#1");
        assert!(r
            .hits
            .iter()
            .all(|h| !["a", "b", "c"].contains(&h.label.as_str())));
        assert_eq!(r.hits.len(), 1);
        let g = e.solve_analogy("a", "b", "c", 1, Space::Global).unwrap();
        assert_eq!(g.hits[0].label, "d");
    }

    #[test]
    fn top_n_keeps_best_and_first_on_ties() {
        let mut t = TopN::new(3);
        for (s, r) in [
            (0.1, 0),
            (0.5, 1),
            (0.5, 2),
            (f32::NAN, 3),
            (0.9, 4),
            (0.2, 5),
        ] {
            t.push(s, r);
        }
        assert_eq!(t.into_vec(), [(0.9, 4), (0.5, 1), (0.5, 2)]);
    }

    fn brute_force(e: &Embeddings, a: usize, b: usize, c: usize) -> usize {
        let unit = |r: usize| {
            let v = e.vector(r);
            let n = v.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
            v.iter().map(|x| *x as f64 / n).collect::<Vec<f64>>()
        };
        let t: Vec<f64> = (0..e.dim())
            .map(|i| unit(b)[i] + unit(c)[i] - unit(a)[i])
            .collect();
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for r in 0..e.len() {
            if r == a || r == b || r == c {
                continue;
            }
            let s: f64 = unit(r).iter().zip(&t).map(|(x, y)| x * y).sum();
            if s > best.0 {
                best = (s, r);
            }
        }
        best.1
    }

    proptest! {
        #[test]
        fn analogy_matches_exhaustive_search(
            seed in any::<u64>(),
            rows in 4usize..=50,
            dim in 2usize..10,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let names: Vec<String> = (0..rows).map(|i| format!("w{i}")).collect();
            let data = names.iter().map(|n| {
                (n.clone(), (0..dim).map(|_| rng.random_range(-1.0f32..1.0)).collect::<Vec<_>>())
            });
            let e = Embeddings::from_rows(None, dim, data).unwrap();
            let pick = |rng: &mut ChaCha8Rng| rng.random_range(0..rows);
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            prop_assume!(a != b && b != c && a != c);
            let r = e.solve_analogy(&names[a], &names[b], &names[c], 2, Space::Global).unwrap();
            let want = brute_force(&e, a, b, c);
            // Near-ties may legitimately swap under f32 accumulation.
            let ok = r.hits[0].label == names[want]
                || (r.hits.len() > 1 && r.hits[1].label == names[want]
                    && (r.hits[0].score - r.hits[1].score).abs() < 1e-5);
            prop_assert!(ok, "got {:?}, want {}", r.hits, names[want]);
        }

        #[test]
        fn analogy_ignores_row_scale(seed in any::<u64>(), scale in 1e-3f32..1e3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<(String, Vec<f32>)> = (0..12)
                .map(|i| (format!("w{i}"), (0..4).map(|_| rng.random_range(-1.0f32..1.0)).collect()))
                .collect();
            let mut scaled = rows.clone();
            let victim = rng.random_range(0..12);
            scaled[victim].1.iter_mut().for_each(|v| *v *= scale);
            let e1 = Embeddings::from_rows(None, 4, rows).unwrap();
            let e2 = Embeddings::from_rows(None, 4, scaled).unwrap();
            let q1 = e1.solve_analogy("w0", "w1", "w2", 1, Space::Global).unwrap();
            let q2 = e2.solve_analogy("w0", "w1", "w2", 1, Space::Global).unwrap();
            prop_assert_eq!(&q1.hits[0].label, &q2.hits[0].label);
        }
    }
}
