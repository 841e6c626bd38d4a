use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Bijection between terms and dense indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn from_terms(terms: impl IntoIterator<Item = String>) -> Result<Self> {
        let terms: Vec<String> = terms.into_iter().collect();
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate vocabulary term {t:?}")));
            }
        }
        Ok(Self { terms, index })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }
}

impl Serialize for Vocabulary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<String>::deserialize(d)?;
        Vocabulary::from_terms(terms).map_err(serde::de::Error::custom)
    }
}

/// Keeps terms occurring at least `min_count` times in total and not listed
/// in `stopwords`, sorted lexicographically.
pub fn build_vocabulary<D, T>(docs: D, min_count: usize, stopwords: &HashSet<String>) -> Result<Vocabulary>
where
    D: IntoIterator<Item = T>,
    T: IntoIterator,
    T::Item: AsRef<str>,
{
    if min_count == 0 {
        return Err(Error::invalid("min_count must be at least 1"));
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        for term in doc {
            let term = term.as_ref();
            match counts.get_mut(term) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(term.to_owned(), 1);
                }
            }
        }
    }
    let terms: Vec<String> = counts
        .into_iter()
        .filter(|(t, c)| *c >= min_count && !stopwords.contains(t))
        .map(|(t, _)| t)
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Vocabulary::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn min_count_filters_rare_terms() {
        let v = build_vocabulary([split("cat cat dog")], 2, &HashSet::new()).unwrap();
        assert_eq!(v.terms(), ["cat"]);
    }

    #[test]
    fn stopwords_are_removed() {
        let stop: HashSet<String> = ["dog".to_string()].into();
        let v = build_vocabulary([split("cat cat dog")], 1, &stop).unwrap();
        assert_eq!(v.terms(), ["cat"]);
    }

    #[test]
    fn size_matches_distinct_term_scan() {
        let docs = ["the cat sat", "a dog sat down", "cat and dog"];
        let v = build_vocabulary(docs.iter().map(|d| split(d)), 1, &HashSet::new()).unwrap();
        // independent count: distinct terms via a set scan
        let mut distinct = HashSet::new();
        for d in docs {
            for t in d.split_whitespace() {
                distinct.insert(t);
            }
        }
        assert_eq!(v.len(), distinct.len());
        assert!(v.terms().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_result_is_an_error() {
        let err = build_vocabulary([split("a b c")], 2, &HashSet::new()).unwrap_err();
        assert!(matches!(err, Error::EmptyVocabulary));
        assert!(build_vocabulary([split("a")], 0, &HashSet::new()).is_err());
    }

    #[test]
    fn lookup_is_a_bijection() {
        let v = Vocabulary::from_terms(["x".into(), "y".into()]).unwrap();
        for i in 0..v.len() {
            assert_eq!(v.get(v.term(i)), Some(i));
        }
        assert!(Vocabulary::from_terms(["x".into(), "x".into()]).is_err());
    }
}
