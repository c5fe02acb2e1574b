use std::collections::HashSet;
use std::sync::OnceLock;

const STOPWORDS: &str = include_str!("../data/stopwords.txt");
const COMMON_WORDS: &str = include_str!("../data/common_words.txt");

/// A set of folded words, e.g. a stopword list or background dictionary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordList {
    words: HashSet<String>,
}

impl WordList {
    /// One word per line; blank lines and `#` comments are skipped. Words are
    /// case-folded.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        WordList { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn union(&self, other: &WordList) -> WordList {
        WordList { words: self.words.union(&other.words).cloned().collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for WordList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        WordList { words: iter.into_iter().map(|s| s.into().to_lowercase()).collect() }
    }
}

/// The shipped English stopword list.
pub fn stopwords() -> &'static WordList {
    static LIST: OnceLock<WordList> = OnceLock::new();
    LIST.get_or_init(|| WordList::parse(STOPWORDS))
}

/// The shipped list of everyday English words.
pub fn common_words() -> &'static WordList {
    static LIST: OnceLock<WordList> = OnceLock::new();
    LIST.get_or_init(|| WordList::parse(COMMON_WORDS))
}

/// Default background dictionary for neologism detection: common words plus
/// stopwords.
pub fn background_dictionary() -> &'static WordList {
    static LIST: OnceLock<WordList> = OnceLock::new();
    LIST.get_or_init(|| common_words().union(stopwords()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use npswatch_corpus::token::is_token;

    #[test]
    fn shipped_lists_are_tokens() {
        assert!((250..=400).contains(&stopwords().len()), "{}", stopwords().len());
        assert!(common_words().len() > 1000);
        // A word that could never be produced by the tokenizer would be dead weight.
        for w in stopwords().iter().chain(common_words().iter()) {
            assert!(is_token(w), "{w:?}");
        }
        assert!(background_dictionary().contains("the"));
        assert!(background_dictionary().contains("weekend"));
        assert!(!background_dictionary().contains("mephedrone"));
    }
}
