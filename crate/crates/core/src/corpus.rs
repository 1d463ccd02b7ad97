//! Reader, writer and summary statistics for the word-level tagged tweet
//! format:
//!
//! ```text
//! meta    1    positive
//! good    Eng
//! yaar    Hin
//!
//! meta    2
//! ...
//! ```
//!
//! A `meta` line opens a block, every following line is a `token<sep>tag`
//! pair, and a blank line (or end of input) closes the block. The separator
//! is a single tab or a run of spaces; output always uses tabs.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Negative,
    Neutral,
    Positive,
}

impl Sentiment {
    /// All labels in confusion-matrix axis order.
    pub const ALL: [Sentiment; 3] = [Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Sentiment> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Negative => "negative",
            Sentiment::Neutral => "neutral",
            Sentiment::Positive => "positive",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sentiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "negative" => Ok(Sentiment::Negative),
            "neutral" => Ok(Sentiment::Neutral),
            "positive" => Ok(Sentiment::Positive),
            _ => Err(s.to_string()),
        }
    }
}

/// Word-level language tag. `Lang1` is English, `Lang2` is the other
/// language of the pair (Hindi or Spanish).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LangTag {
    Lang1,
    Lang2,
    Other,
}

impl LangTag {
    /// Maps a raw tag from the data file. Matching is case-insensitive and
    /// accepts both the `Eng`/`Hin`/`Spa` and the `lang1`/`lang2` spellings.
    pub fn from_raw(raw: &str) -> LangTag {
        match raw.to_ascii_lowercase().as_str() {
            "eng" | "lang1" => LangTag::Lang1,
            "hin" | "spa" | "lang2" => LangTag::Lang2,
            _ => LangTag::Other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// The tag exactly as it appeared in the file; kept so that writing a
    /// corpus back out does not lose the distinction between e.g. `O` and
    /// `univ`.
    pub raw_tag: String,
    pub lang: LangTag,
}

impl Token {
    pub fn new(text: impl Into<String>, raw_tag: impl Into<String>) -> Token {
        let raw_tag = raw_tag.into();
        let lang = LangTag::from_raw(&raw_tag);
        Token { text: text.into(), raw_tag, lang }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub uid: String,
    pub sentiment: Option<Sentiment>,
    pub tokens: Vec<Token>,
}

impl Tweet {
    /// Tokens joined with single spaces; this is the raw text fed to
    /// preprocessing.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for (i, tok) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&tok.text);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedMeta(String),
    MalformedToken(String),
    UnknownSentiment(String),
    EmptyBlock(String),
    DuplicateUid(String),
    Io(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MalformedMeta(l) => write!(f, "malformed meta line {l:?}"),
            ParseErrorKind::MalformedToken(l) => write!(f, "malformed token line {l:?}"),
            ParseErrorKind::UnknownSentiment(s) => write!(f, "unknown sentiment {s:?}"),
            ParseErrorKind::EmptyBlock(uid) => write!(f, "tweet {uid} has no tokens"),
            ParseErrorKind::DuplicateUid(uid) => write!(f, "duplicate tweet id {uid}"),
            ParseErrorKind::Io(e) => write!(f, "read error: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains('\t') {
        line.split('\t').map(str::trim).collect()
    } else {
        line.split(' ').filter(|f| !f.is_empty()).collect()
    }
}

struct Block {
    uid: String,
    sentiment: Option<Sentiment>,
    tokens: Vec<Token>,
    start_line: usize,
}

pub fn parse_corpus<R: BufRead>(reader: R) -> std::result::Result<Vec<Tweet>, ParseError> {
    let mut tweets = Vec::new();
    let mut seen = HashSet::new();
    let mut current: Option<Block> = None;

    let mut finish = |block: Block, tweets: &mut Vec<Tweet>| -> std::result::Result<(), ParseError> {
        if block.tokens.is_empty() {
            return Err(ParseError { line: block.start_line, kind: ParseErrorKind::EmptyBlock(block.uid) });
        }
        if !seen.insert(block.uid.clone()) {
            return Err(ParseError { line: block.start_line, kind: ParseErrorKind::DuplicateUid(block.uid) });
        }
        tweets.push(Tweet { uid: block.uid, sentiment: block.sentiment, tokens: block.tokens });
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| ParseError { line: lineno, kind: ParseErrorKind::Io(e.to_string()) })?;
        let mut line = line.strip_suffix('\r').unwrap_or(&line);
        if lineno == 1 {
            line = line.strip_prefix('\u{feff}').unwrap_or(line);
        }

        if line.trim().is_empty() {
            if let Some(block) = current.take() {
                finish(block, &mut tweets)?;
            }
            continue;
        }

        let mut fields = split_fields(line);
        match current.as_mut() {
            None => {
                while fields.len() > 2 && fields.last() == Some(&"") {
                    fields.pop();
                }
                if fields.first() != Some(&"meta") || !(2..=3).contains(&fields.len()) || fields[1].is_empty() {
                    return Err(ParseError { line: lineno, kind: ParseErrorKind::MalformedMeta(line.to_string()) });
                }
                let sentiment = match fields.get(2) {
                    None => None,
                    Some(raw) => Some(
                        raw.parse::<Sentiment>()
                            .map_err(|s| ParseError { line: lineno, kind: ParseErrorKind::UnknownSentiment(s) })?,
                    ),
                };
                current = Some(Block { uid: fields[1].to_string(), sentiment, tokens: Vec::new(), start_line: lineno });
            }
            Some(block) => {
                if fields.len() != 2 || fields[0].is_empty() || fields[1].is_empty() {
                    return Err(ParseError { line: lineno, kind: ParseErrorKind::MalformedToken(line.to_string()) });
                }
                block.tokens.push(Token::new(fields[0], fields[1]));
            }
        }
    }
    if let Some(block) = current.take() {
        finish(block, &mut tweets)?;
    }
    Ok(tweets)
}

pub fn parse_corpus_str(text: &str) -> std::result::Result<Vec<Tweet>, ParseError> {
    parse_corpus(text.as_bytes())
}

pub fn write_corpus<W: Write>(mut w: W, tweets: &[Tweet]) -> io::Result<()> {
    for tweet in tweets {
        match tweet.sentiment {
            Some(s) => writeln!(w, "meta\t{}\t{}", tweet.uid, s)?,
            None => writeln!(w, "meta\t{}", tweet.uid)?,
        }
        for tok in &tweet.tokens {
            writeln!(w, "{}\t{}", tok.text, tok.raw_tag)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_tweets: usize,
    /// Counts over labeled tweets; every label is present, possibly with 0.
    pub label_counts: BTreeMap<Sentiment, usize>,
    pub n_unlabeled: usize,
    pub n_tokens: usize,
    pub n_lang1_tokens: usize,
    pub n_lang2_tokens: usize,
    pub n_other_tokens: usize,
    /// Share of Lang1 among tokens tagged Lang1 or Lang2 (Other excluded).
    pub lang1_pct: f64,
    pub lang2_pct: f64,
    pub vocab1_size: usize,
    pub vocab2_size: usize,
    pub overlap_size: usize,
    /// Jaccard: 100 * |V1 ∩ V2| / |V1 ∪ V2|.
    pub overlap_pct: f64,
    pub overlap_pct_of_vocab1: f64,
    pub overlap_pct_of_vocab2: f64,
}

fn pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

/// Label counts, language shares and the lowercased type overlap between the
/// two languages' vocabularies.
///
/// When the corpus has no Lang1/Lang2 tokens at all both percentages are 0.
pub fn corpus_stats(tweets: &[Tweet]) -> Result<CorpusStats> {
    if tweets.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut label_counts: BTreeMap<Sentiment, usize> = Sentiment::ALL.iter().map(|&s| (s, 0)).collect();
    let mut n_unlabeled = 0;
    let (mut n1, mut n2, mut n_other) = (0usize, 0usize, 0usize);
    let mut v1: HashSet<String> = HashSet::new();
    let mut v2: HashSet<String> = HashSet::new();

    for tweet in tweets {
        match tweet.sentiment {
            Some(s) => *label_counts.entry(s).or_default() += 1,
            None => n_unlabeled += 1,
        }
        for tok in &tweet.tokens {
            match tok.lang {
                LangTag::Lang1 => {
                    n1 += 1;
                    v1.insert(tok.text.to_lowercase());
                }
                LangTag::Lang2 => {
                    n2 += 1;
                    v2.insert(tok.text.to_lowercase());
                }
                LangTag::Other => n_other += 1,
            }
        }
    }

    let overlap = v1.intersection(&v2).count();
    let union = v1.len() + v2.len() - overlap;
    let tagged = n1 + n2;
    Ok(CorpusStats {
        n_tweets: tweets.len(),
        label_counts,
        n_unlabeled,
        n_tokens: n1 + n2 + n_other,
        n_lang1_tokens: n1,
        n_lang2_tokens: n2,
        n_other_tokens: n_other,
        lang1_pct: pct(n1, tagged),
        lang2_pct: if tagged == 0 { 0.0 } else { 100.0 - pct(n1, tagged) },
        vocab1_size: v1.len(),
        vocab2_size: v2.len(),
        overlap_size: overlap,
        overlap_pct: pct(overlap, union),
        overlap_pct_of_vocab1: pct(overlap, v1.len()),
        overlap_pct_of_vocab2: pct(overlap, v2.len()),
    })
}
