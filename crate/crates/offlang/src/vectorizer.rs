//! Word n-gram TF-IDF vector space.
//!
//! [`TfidfVectorizer::fit`] builds a vocabulary over all 1..=3-gram terms
//! (tokens joined by single spaces) of a training corpus together with
//! smoothed inverse document frequencies
//! `idf(t) = ln((1 + N) / (1 + df(t))) + 1`. [`TfidfVectorizer::transform`]
//! maps a token sequence to raw term counts weighted by idf and
//! L2-normalized, ignoring out-of-vocabulary terms.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::preprocess::TokenSequence;

/// Inclusive n-gram order range; the default `(1, 3)` covers unigrams,
/// bigrams and trigrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramRange {
    n_min: usize,
    n_max: usize,
}

impl Default for NgramRange {
    fn default() -> Self {
        NgramRange { n_min: 1, n_max: 3 }
    }
}

impl NgramRange {
    pub fn new(n_min: usize, n_max: usize) -> Result<Self, VectorizeError> {
        if n_min < 1 || n_max < n_min {
            return Err(VectorizeError::InvalidNgramRange { n_min, n_max });
        }
        Ok(NgramRange { n_min, n_max })
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VectorizeError {
    #[error("invalid n-gram range ({n_min}, {n_max}): need 1 <= n_min <= n_max")]
    InvalidNgramRange { n_min: usize, n_max: usize },
    #[error("cannot fit a vectorizer on an empty corpus")]
    EmptyCorpus,
}

/// Injective map from n-gram term to a dense column index `0..len`.
/// Indices follow the lexicographic order of the term strings, which makes
/// fitted vocabularies deterministic across runs and platforms.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vocabulary {
    map: BTreeMap<String, usize>,
}

impl Vocabulary {
    fn from_terms(terms: impl IntoIterator<Item = String>) -> Self {
        let sorted: std::collections::BTreeSet<String> = terms.into_iter().collect();
        Vocabulary {
            map: sorted
                .into_iter()
                .enumerate()
                .map(|(idx, term)| (term, idx))
                .collect(),
        }
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.map.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Terms with their indices, in lexicographic (= index) order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.map.iter().map(|(term, idx)| (term.as_str(), *idx))
    }

    /// Indices form `0..len` with no gaps and no repeats.
    pub fn indices_are_dense(&self) -> bool {
        self.map.values().enumerate().all(|(pos, idx)| pos == *idx)
    }
}

/// Sparse feature vector: (column index, weight) pairs with strictly
/// increasing indices and no explicit zeros.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn empty() -> Self {
        SparseVector::default()
    }

    /// Build from unordered pairs; entries are sorted by index and zero
    /// weights dropped. Duplicate indices are not permitted.
    pub fn from_pairs(pairs: Vec<(usize, f64)>) -> Self {
        let mut entries: Vec<(usize, f64)> =
            pairs.into_iter().filter(|(_, w)| *w != 0.0).collect();
        entries.sort_unstable_by_key(|(idx, _)| *idx);
        debug_assert!(
            entries.windows(2).all(|w| w[0].0 < w[1].0),
            "duplicate index in sparse vector"
        );
        SparseVector { entries }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (usize, f64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest stored index, if any entry exists.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(idx, _)| *idx)
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, w)| w * w)
            .sum::<f64>()
            .sqrt()
    }

    /// Scale so the Euclidean norm is 1; the empty vector stays empty.
    pub fn l2_normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for (_, w) in &mut self.entries {
                *w /= norm;
            }
        }
    }

    /// Dot product against a dense weight vector. Indices beyond
    /// `dense.len()` contribute an error at the caller via bounds checks,
    /// so callers validate dimensions first.
    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|(idx, w)| dense[*idx] * w)
            .sum()
    }

    pub fn scale(&self, factor: f64) -> SparseVector {
        SparseVector {
            entries: self
                .entries
                .iter()
                .map(|(idx, w)| (*idx, w * factor))
                .collect(),
        }
    }
}

/// Enumerate all contiguous n-token windows for every n in the range,
/// in ascending n and window position order, joined by single spaces.
pub fn extract_ngrams(tokens: &TokenSequence, range: NgramRange) -> Vec<String> {
    let toks = tokens.as_slice();
    let mut grams = Vec::new();
    for n in range.n_min..=range.n_max {
        if toks.len() < n {
            break;
        }
        for window in toks.windows(n) {
            grams.push(window.join(" "));
        }
    }
    grams
}

/// A fitted TF-IDF vector space over word n-grams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfVectorizer {
    pub vocab: Vocabulary,
    /// Per-index idf weight; same length as the vocabulary. All values are
    /// >= 1 under the smoothed formula.
    pub idf: Vec<f64>,
    pub range: NgramRange,
    /// Number of documents the vectorizer was fitted on.
    pub doc_count: usize,
}

impl TfidfVectorizer {
    /// Fit vocabulary and idf table on a corpus of token sequences.
    pub fn fit(corpus: &[TokenSequence], range: NgramRange) -> Result<Self, VectorizeError> {
        if corpus.is_empty() {
            return Err(VectorizeError::EmptyCorpus);
        }
        let mut df: HashMap<String, usize> = HashMap::new();
        for doc in corpus {
            let seen: HashSet<String> = extract_ngrams(doc, range).into_iter().collect();
            for gram in seen {
                *df.entry(gram).or_insert(0) += 1;
            }
        }
        let n_docs = corpus.len();
        let vocab = Vocabulary::from_terms(df.keys().cloned());
        let mut idf = vec![0.0; vocab.len()];
        for (term, idx) in vocab.iter() {
            let term_df = df[term];
            idf[idx] = ((1.0 + n_docs as f64) / (1.0 + term_df as f64)).ln() + 1.0;
        }
        Ok(TfidfVectorizer {
            vocab,
            idf,
            range,
            doc_count: n_docs,
        })
    }

    /// Map tokens to an L2-normalized tf·idf vector. Out-of-vocabulary
    /// n-grams are ignored; an all-OOV or empty input yields the empty
    /// vector.
    pub fn transform(&self, tokens: &TokenSequence) -> SparseVector {
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for gram in extract_ngrams(tokens, self.range) {
            if let Some(idx) = self.vocab.index_of(&gram) {
                *counts.entry(idx).or_insert(0.0) += 1.0;
            }
        }
        let mut vector = SparseVector::from_pairs(
            counts
                .into_iter()
                .map(|(idx, tf)| (idx, tf * self.idf[idx]))
                .collect(),
        );
        vector.l2_normalize();
        vector
    }

    /// Elementwise [`transform`](Self::transform), order preserved.
    pub fn transform_corpus(&self, corpus: &[TokenSequence]) -> Vec<SparseVector> {
        corpus.iter().map(|doc| self.transform(doc)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::preprocess;

    fn seq(tokens: &[&str]) -> TokenSequence {
        TokenSequence::from(tokens)
    }

    #[test]
    fn three_token_sentence_has_six_features() {
        let grams = extract_ngrams(&seq(&["الدورى", "يا", "زمالك"]), NgramRange::default());
        assert_eq!(
            grams,
            vec![
                "الدورى",
                "يا",
                "زمالك",
                "الدورى يا",
                "يا زمالك",
                "الدورى يا زمالك",
            ]
        );
    }

    #[test]
    fn short_inputs_skip_higher_orders() {
        assert_eq!(
            extract_ngrams(&seq(&["a"]), NgramRange::default()),
            vec!["a"]
        );
        assert_eq!(
            extract_ngrams(&seq(&["a", "b"]), NgramRange::default()),
            vec!["a", "b", "a b"]
        );
        assert!(extract_ngrams(&seq(&[]), NgramRange::default()).is_empty());
    }

    #[test]
    fn ngram_range_validation() {
        assert!(NgramRange::new(0, 3).is_err());
        assert!(NgramRange::new(2, 1).is_err());
        assert!(NgramRange::new(2, 2).is_ok());
    }

    #[test]
    fn idf_is_one_for_terms_in_every_document() {
        let corpus = vec![seq(&["a"]), seq(&["a"])];
        let v = TfidfVectorizer::fit(&corpus, NgramRange::default()).unwrap();
        assert_eq!(v.vocab.len(), 1);
        assert_eq!(v.vocab.index_of("a"), Some(0));
        // ln((1+2)/(1+2)) + 1
        assert!((v.idf[0] - 1.0).abs() < 1e-12);
        assert_eq!(v.doc_count, 2);
    }

    #[test]
    fn idf_of_half_frequency_terms() {
        let corpus = vec![seq(&["a"]), seq(&["b"])];
        let v = TfidfVectorizer::fit(&corpus, NgramRange::default()).unwrap();
        let expected = (3.0f64 / 2.0).ln() + 1.0; // 1.4054651081081644
        for term in ["a", "b"] {
            let idx = v.vocab.index_of(term).unwrap();
            assert!((v.idf[idx] - expected).abs() < 1e-12);
            assert!((v.idf[idx] - 1.405_465_108_108_164_4).abs() < 1e-12);
        }
    }

    #[test]
    fn paper_sentence_vocabulary_size() {
        let corpus = vec![preprocess("الدورى يا زمالك")];
        let v = TfidfVectorizer::fit(&corpus, NgramRange::default()).unwrap();
        assert_eq!(v.vocab.len(), 6);
    }

    #[test]
    fn fitting_an_empty_corpus_fails() {
        assert!(matches!(
            TfidfVectorizer::fit(&[], NgramRange::default()),
            Err(VectorizeError::EmptyCorpus)
        ));
    }

    #[test]
    fn single_document_transform_is_uniform() {
        let doc = seq(&["الدورى", "يا", "زمالك"]);
        let v = TfidfVectorizer::fit(std::slice::from_ref(&doc), NgramRange::default()).unwrap();
        let x = v.transform(&doc);
        assert_eq!(x.len(), 6);
        let expected = 1.0 / 6.0f64.sqrt(); // 0.4082482904638631
        for (_, w) in x.iter() {
            assert!((w - expected).abs() < 1e-12);
        }
        assert!((x.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn oov_input_yields_empty_vector() {
        let v = TfidfVectorizer::fit(&[seq(&["a"])], NgramRange::default()).unwrap();
        assert!(v.transform(&seq(&["zzz"])).is_empty());
        assert!(v.transform(&seq(&[])).is_empty());
    }

    #[test]
    fn nonempty_transforms_have_unit_norm() {
        let corpus = vec![seq(&["a", "b", "c"]), seq(&["b", "c", "d"]), seq(&["a"])];
        let v = TfidfVectorizer::fit(&corpus, NgramRange::default()).unwrap();
        for doc in &corpus {
            let x = v.transform(doc);
            assert!((x.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn transform_corpus_preserves_order_and_length() {
        let corpus = vec![seq(&["a"]), seq(&["b"]), seq(&["a", "b"])];
        let v = TfidfVectorizer::fit(&corpus, NgramRange::default()).unwrap();
        let vectors = v.transform_corpus(&corpus);
        assert_eq!(vectors.len(), 3);
        assert_eq!(vectors[0], v.transform(&corpus[0]));
        assert_eq!(vectors[2], v.transform(&corpus[2]));
        assert!(v.transform_corpus(&[]).is_empty());
    }

    #[test]
    fn vocabulary_indices_are_dense_and_lexicographic() {
        let corpus = vec![seq(&["c", "a", "b"]), seq(&["b", "d"])];
        let v = TfidfVectorizer::fit(&corpus, NgramRange::new(1, 1).unwrap()).unwrap();
        assert!(v.vocab.indices_are_dense());
        let terms: Vec<&str> = v.vocab.iter().map(|(t, _)| t).collect();
        assert_eq!(terms, vec!["a", "b", "c", "d"]);
    }

    #[test]
    fn training_document_support_is_within_vocab() {
        let corpus = vec![seq(&["x", "y"]), seq(&["y", "z"])];
        let v = TfidfVectorizer::fit(&corpus, NgramRange::default()).unwrap();
        for doc in &corpus {
            let x = v.transform(doc);
            assert!(x.max_index().unwrap_or(0) < v.vocab.len());
        }
    }

    #[test]
    fn sparse_vector_drops_zeros_and_sorts() {
        let x = SparseVector::from_pairs(vec![(5, 1.0), (1, 0.0), (2, -3.0)]);
        let entries: Vec<(usize, f64)> = x.iter().copied().collect();
        assert_eq!(entries, vec![(2, -3.0), (5, 1.0)]);
    }
}
