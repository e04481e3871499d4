//! Tokenization and surface statistics (emoticons, punctuation, letter case).
//!
//! English text is segmented on alphanumeric runs (apostrophes kept inside
//! words) and case-folded. Chinese text is segmented by greedy forward
//! maximum matching against the bundle vocabulary with a single-character
//! fallback. Standalone punctuation never becomes a token, so the token
//! count `L` counts words only.

use crate::resources::{EmoticonClass, Language, ResourceBundle};

/// An ordered sequence of lexicon-matchable word tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Symbol-level counts taken from the raw text.
///
/// `char_count` counts non-whitespace characters; emoticon, punctuation and
/// uppercase frequencies downstream normalize by it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurfaceStats {
    /// Counts indexed by [`EmoticonClass::index`]: happy, angry, surprised, sad, neutral.
    pub emoticon_counts: [usize; 5],
    pub exclamation: usize,
    pub question: usize,
    pub ellipsis: usize,
    /// Uppercase letters in the raw text; always 0 for Chinese bundles.
    pub uppercase_letters: usize,
    pub char_count: usize,
}

/// Tokenize `text` for the bundle's language. Empty text gives an empty sequence.
pub fn tokenize(text: &str, language: Language, bundle: &ResourceBundle) -> TokenSequence {
    let tokens = match language {
        Language::En => tokenize_english(text),
        Language::Zh => tokenize_chinese(text, bundle),
    };
    TokenSequence { tokens }
}

fn tokenize_english(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_alphanumeric() {
            i += 1;
            continue;
        }
        let mut token = String::new();
        while i < chars.len() {
            let c = chars[i];
            if c.is_alphanumeric() {
                token.push(c);
                i += 1;
            } else if (c == '\'' || c == '\u{2019}')
                && !token.is_empty()
                && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
            {
                token.push('\'');
                i += 1;
            } else {
                break;
            }
        }
        tokens.push(token.to_lowercase());
    }
    tokens
}

fn tokenize_chinese(text: &str, bundle: &ResourceBundle) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let max_len = bundle.max_word_chars().max(1);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let upper = max_len.min(chars.len() - i);
        let mut matched = 0;
        for len in (2..=upper).rev() {
            let candidate: String = chars[i..i + len].iter().collect();
            if bundle.is_known_word(&candidate) {
                tokens.push(candidate);
                matched = len;
                break;
            }
        }
        if matched > 0 {
            i += matched;
        } else if c.is_alphanumeric() {
            tokens.push(c.to_string());
            i += 1;
        } else {
            // punctuation and symbols are not tokens
            i += 1;
        }
    }
    tokens
}

fn match_emoticon_at(chars: &[char], i: usize, bundle: &ResourceBundle) -> Option<(usize, EmoticonClass)> {
    // bundle.emoticons is sorted longest-first, so the first hit is greedy.
    for (emo, class) in &bundle.emoticons {
        let pat: Vec<char> = emo.chars().collect();
        if i + pat.len() <= chars.len() && chars[i..i + pat.len()] == pat[..] {
            return Some((pat.len(), *class));
        }
    }
    None
}

/// Count emoticons, punctuation marks and uppercase letters in the raw text.
///
/// Emoticons are matched longest-first and non-overlapping, left to right.
/// Full-width `！？` count with their ASCII classes; ellipsis counts both
/// `…` and non-overlapping runs of three ASCII dots.
pub fn scan_surface(text: &str, bundle: &ResourceBundle) -> SurfaceStats {
    let chars: Vec<char> = text.chars().collect();
    let mut stats = SurfaceStats::default();

    let mut i = 0;
    while i < chars.len() {
        if let Some((len, class)) = match_emoticon_at(&chars, i, bundle) {
            stats.emoticon_counts[class.index()] += 1;
            i += len;
        } else {
            i += 1;
        }
    }

    let mut dot_run = 0usize;
    for &c in &chars {
        if !c.is_whitespace() {
            stats.char_count += 1;
        }
        if c.is_uppercase() {
            stats.uppercase_letters += 1;
        }
        match c {
            '!' | '！' => stats.exclamation += 1,
            '?' | '？' => stats.question += 1,
            '…' => stats.ellipsis += 1,
            _ => {}
        }
        if c == '.' {
            dot_run += 1;
        } else {
            stats.ellipsis += dot_run / 3;
            dot_run = 0;
        }
    }
    stats.ellipsis += dot_run / 3;

    if bundle.language == Language::Zh {
        stats.uppercase_letters = 0;
    }
    stats
}

/// Remove every emoticon occurrence (longest-first, non-overlapping) so the
/// token stream never sees them. Each match is replaced by a single space to
/// keep neighbouring words separated.
pub fn strip_emoticons(text: &str, bundle: &ResourceBundle) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        if let Some((len, _)) = match_emoticon_at(&chars, i, bundle) {
            out.push(' ');
            i += len;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}
