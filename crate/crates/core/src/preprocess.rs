//! Tweet normalization: tokenization, URL removal, hashtag segmentation and
//! lowercasing.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cost, in natural-log units, charged per character of a span that is not in
/// the segmentation dictionary.
pub const DEFAULT_OOV_PENALTY: f64 = 5.0;

const DEFAULT_DICT: &str = include_str!("../data/default_dict.txt");

/// Score differences below this are treated as ties during segmentation.
const SCORE_EPS: f64 = 1e-9;

/// Emoticons kept as single tokens. Matching is ASCII case-insensitive so the
/// table holds lowercase forms only.
const EMOTICONS: &[&str] = &[
    ":-)", ":)", ":-(", ":(", ":-d", ":d", ";-)", ";)", ";-d", ";d", ":-p", ":p", ";-p", ";p", ":'(", ":')", ":-/",
    ":/", ":-o", ":o", ":-*", ":*", ":-|", ":|", ":]", ":[", "=)", "=(", "=d", "<3", "</3", "^_^", "^^", "-_-", "o_o",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub segment_hashtags: bool,
    pub remove_urls: bool,
    pub lowercase: bool,
    pub oov_penalty: f64,
    /// Where the segmentation dictionary came from, if not the bundled list.
    pub dictionary_path: Option<String>,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            segment_hashtags: true,
            remove_urls: true,
            lowercase: true,
            oov_penalty: DEFAULT_OOV_PENALTY,
            dictionary_path: None,
        }
    }
}

impl PreprocessConfig {
    /// Tokenize and re-join only.
    pub fn disabled() -> Self {
        PreprocessConfig { segment_hashtags: false, remove_urls: false, lowercase: false, ..Default::default() }
    }
}

/// Unigram frequency table used for hashtag segmentation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SegmentDictionary {
    words: HashMap<String, u64>,
}

impl SegmentDictionary {
    /// The small English list bundled with the crate.
    pub fn builtin() -> SegmentDictionary {
        Self::parse(DEFAULT_DICT).expect("bundled dictionary is well formed")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<SegmentDictionary> {
        let reader = BufReader::new(File::open(path)?);
        let mut text = String::new();
        for line in reader.lines() {
            text.push_str(&line?);
            text.push('\n');
        }
        Self::parse(&text)
    }

    /// Parses `word count` lines. Blank lines are skipped, words are
    /// lowercased and repeated words have their counts summed.
    pub fn parse(text: &str) -> Result<SegmentDictionary> {
        let mut words: HashMap<String, u64> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::Dictionary { line: i + 1, reason: reason.to_string() };
            let mut parts = line.split_whitespace();
            let (Some(word), Some(count), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad("expected `word count`"));
            };
            let count: u64 = count.parse().map_err(|_| bad("count is not a positive integer"))?;
            if count == 0 {
                return Err(bad("count must be at least 1"));
            }
            *words.entry(word.to_lowercase()).or_default() += count;
        }
        Ok(SegmentDictionary { words })
    }

    pub fn from_pairs<I, S>(pairs: I) -> SegmentDictionary
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut words: HashMap<String, u64> = HashMap::new();
        for (w, c) in pairs {
            let w = w.as_ref().to_lowercase();
            if !w.is_empty() && c > 0 {
                *words.entry(w).or_default() += c;
            }
        }
        SegmentDictionary { words }
    }

    pub fn get(&self, word: &str) -> Option<u64> {
        self.words.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Entries sorted by word, for deterministic serialization.
    pub fn sorted_entries(&self) -> Vec<(String, u64)> {
        let mut entries: Vec<_> = self.words.iter().map(|(w, &c)| (w.clone(), c)).collect();
        entries.sort();
        entries
    }
}

fn is_combining(c: char) -> bool {
    matches!(c,
        '\u{0300}'..='\u{036F}'
        | '\u{0483}'..='\u{0489}'
        | '\u{0591}'..='\u{05BD}'
        | '\u{0610}'..='\u{061A}'
        | '\u{064B}'..='\u{065F}'
        | '\u{0900}'..='\u{0963}'
        | '\u{0966}'..='\u{097F}'
        | '\u{1AB0}'..='\u{1AFF}'
        | '\u{1DC0}'..='\u{1DFF}'
        | '\u{200C}'..='\u{200D}'
        | '\u{20D0}'..='\u{20FF}'
        | '\u{FE00}'..='\u{FE0F}'
        | '\u{FE20}'..='\u{FE2F}')
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || is_combining(c)
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

pub fn is_url(token: &str) -> bool {
    let head: String = token.chars().take(8).collect::<String>().to_ascii_lowercase();
    head.starts_with("http://") || head.starts_with("https://") || head.starts_with("www.")
}

fn match_emoticon(chars: &[char], at: usize) -> Option<usize> {
    let mut best = None;
    for emo in EMOTICONS {
        let len = emo.chars().count();
        if at + len > chars.len() {
            continue;
        }
        let hit = emo.chars().zip(&chars[at..at + len]).all(|(e, &c)| c.to_ascii_lowercase() == e);
        let followed_by_word = chars.get(at + len).is_some_and(|&c| is_word_char(c));
        if hit && !followed_by_word && best.is_none_or(|b| len > b) {
            best = Some(len);
        }
    }
    best
}

fn tokenize_chunk(chunk: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if is_word_char(c) {
            let start = i;
            i += 1;
            loop {
                if i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                } else if i + 1 < chars.len() && is_apostrophe(chars[i]) && is_word_char(chars[i + 1]) {
                    i += 2;
                } else {
                    break;
                }
            }
            out.push(chars[start..i].iter().collect());
            continue;
        }
        if (c == '@' || c == '#') && chars.get(i + 1).is_some_and(|&n| is_word_char(n)) {
            let start = i;
            i += 1;
            while i < chars.len() && is_word_char(chars[i]) {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
            continue;
        }
        if let Some(len) = match_emoticon(&chars, i) {
            out.push(chars[i..i + len].iter().collect());
            i += len;
            continue;
        }
        out.push(c.to_string());
        i += 1;
    }
}

/// Splits raw tweet text into tokens.
///
/// URLs, `@mentions`, `#hashtags` and emoticons from a fixed table stay whole.
/// Everything else is split on whitespace, then into runs of word characters
/// (letters, digits, `_`, combining marks, with inner apostrophes) and single
/// punctuation characters.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        if is_url(chunk) {
            out.push(chunk.to_string());
        } else {
            tokenize_chunk(chunk, &mut out);
        }
    }
    out
}

pub fn remove_urls(tokens: Vec<String>) -> Vec<String> {
    tokens.into_iter().filter(|t| !is_url(t)).collect()
}

/// Segments a hashtag with the default out-of-dictionary penalty.
pub fn segment_hashtag(tag: &str, dict: &SegmentDictionary) -> Vec<String> {
    segment_hashtag_with_penalty(tag, dict, DEFAULT_OOV_PENALTY)
}

/// Strips the leading `#` and splits the lowercased remainder into the
/// sequence of spans maximizing the summed score, where a dictionary word
/// scores `ln(freq)` and any other span scores `-penalty * chars`.
///
/// Ties go to fewer spans, then to the longer first span (and so on
/// left to right).
pub fn segment_hashtag_with_penalty(tag: &str, dict: &SegmentDictionary, penalty: f64) -> Vec<String> {
    let body = tag.strip_prefix('#').unwrap_or(tag).to_lowercase();
    if body.is_empty() {
        return Vec::new();
    }
    // Byte offset of every char boundary, including the end.
    let bounds: Vec<usize> = body.char_indices().map(|(b, _)| b).chain(std::iter::once(body.len())).collect();
    let n = bounds.len() - 1;

    let span_score = |i: usize, j: usize| -> f64 {
        match dict.get(&body[bounds[i]..bounds[j]]) {
            Some(freq) => (freq as f64).ln(),
            None => -penalty * (j - i) as f64,
        }
    };

    // best[i] = (score, word count, end of first word) for the suffix at i.
    let mut best: Vec<(f64, usize, usize)> = vec![(0.0, 0, n); n + 1];
    for i in (0..n).rev() {
        let mut cur: Option<(f64, usize, usize)> = None;
        // Longest first word first, so an exact tie keeps the longer one.
        for j in (i + 1..=n).rev() {
            let score = span_score(i, j) + best[j].0;
            let count = 1 + best[j].1;
            let better = match cur {
                None => true,
                Some((s, c, _)) => score > s + SCORE_EPS || ((score - s).abs() <= SCORE_EPS && count < c),
            };
            if better {
                cur = Some((score, count, j));
            }
        }
        best[i] = cur.expect("non-empty suffix has a segmentation");
    }

    let mut out = Vec::with_capacity(best[0].1);
    let mut i = 0;
    while i < n {
        let j = best[i].2;
        out.push(body[bounds[i]..bounds[j]].to_string());
        i = j;
    }
    out
}

/// Runs the configured steps and re-joins the tokens with single spaces.
pub fn preprocess(text: &str, cfg: &PreprocessConfig, dict: &SegmentDictionary) -> String {
    let mut tokens = tokenize(text);
    if cfg.remove_urls {
        tokens = remove_urls(tokens);
    }
    if cfg.segment_hashtags {
        tokens = tokens
            .into_iter()
            .flat_map(|t| {
                if t.starts_with('#') && t.len() > 1 {
                    segment_hashtag_with_penalty(&t, dict, cfg.oov_penalty)
                } else {
                    vec![t]
                }
            })
            .collect();
    }
    if cfg.lowercase {
        for t in &mut tokens {
            *t = t.to_lowercase();
        }
    }
    tokens.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    #[test]
    fn whitespace_split() {
        assert_eq!(toks("I love it"), ["I", "love", "it"]);
        assert!(toks("").is_empty());
        assert!(toks("   \t\n").is_empty());
    }

    #[test]
    fn mentions_and_emoticons() {
        assert_eq!(toks("@user gr8!! :)"), ["@user", "gr8", "!", "!", ":)"]);
        assert_eq!(toks("yay:D"), ["yay", ":D"]);
        assert_eq!(toks("<3 </3"), ["<3", "</3"]);
        // emoticon immediately followed by a letter is not an emoticon
        assert_eq!(toks(":pa"), [":", "pa"]);
    }

    #[test]
    fn hashtags_apostrophes_urls() {
        assert_eq!(toks("#SoSad don't"), ["#SoSad", "don't"]);
        assert_eq!(toks("see https://t.co/x!"), ["see", "https://t.co/x!"]);
        assert_eq!(toks("a#b@c"), ["a", "#b", "@c"]);
        assert_eq!(toks("# @"), ["#", "@"]);
    }

    #[test]
    fn devanagari_stays_together() {
        assert_eq!(toks("नमस्ते दुनिया।"), ["नमस्ते", "दुनिया", "।"]);
    }

    #[test]
    fn url_removal() {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(remove_urls(v(&["see", "https://t.co/x", "now"])), v(&["see", "now"]));
        assert!(remove_urls(v(&["www.example.com"])).is_empty());
        assert_eq!(remove_urls(v(&["not_a_url"])), v(&["not_a_url"]));
        assert!(remove_urls(v(&["HTTP://X.CO"])).is_empty());
    }

    #[test]
    fn segmentation_examples() {
        let dict = SegmentDictionary::from_pairs([("i", 1), ("love", 1), ("you", 1)]);
        assert_eq!(segment_hashtag("#iloveyou", &dict), ["i", "love", "you"]);
        assert_eq!(segment_hashtag("#ILoveYou", &dict), ["i", "love", "you"]);
        assert_eq!(segment_hashtag("#xq", &SegmentDictionary::default()), ["xq"]);
        let dict = SegmentDictionary::from_pairs([("so", 5), ("sad", 5), ("sos", 1), ("ad", 1)]);
        assert_eq!(segment_hashtag("#sosad", &dict), ["so", "sad"]);
        assert!(segment_hashtag("#", &dict).is_empty());
    }

    #[test]
    fn oov_runs_stay_merged() {
        let dict = SegmentDictionary::from_pairs([("love", 10)]);
        assert_eq!(segment_hashtag("#xxlovezz", &dict), ["xx", "love", "zz"]);
    }

    #[test]
    fn pipeline_examples() {
        let dict = SegmentDictionary::from_pairs([("i", 1), ("love", 1), ("you", 1)]);
        let cfg = PreprocessConfig::default();
        assert_eq!(preprocess("LOL http://x.co #ILoveYou", &cfg, &dict), "lol i love you");
        assert_eq!(preprocess("ABC #Xy", &PreprocessConfig::disabled(), &dict), "ABC #Xy");
        assert_eq!(preprocess("Iz GR8", &cfg, &dict), "iz gr8");
        assert_eq!(preprocess("", &cfg, &dict), "");
    }

    #[test]
    fn dictionary_parsing() {
        let d = SegmentDictionary::parse("Love 3\nlove 2\n\nyou 1\n").unwrap();
        assert_eq!(d.get("love"), Some(5));
        assert_eq!(d.len(), 2);
        assert!(matches!(SegmentDictionary::parse("x 0"), Err(Error::Dictionary { line: 1, .. })));
        assert!(matches!(SegmentDictionary::parse("a 1\nb"), Err(Error::Dictionary { line: 2, .. })));
        assert!(SegmentDictionary::builtin().get("love").is_some());
    }
}
