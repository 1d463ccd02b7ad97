#![allow(dead_code)]

use std::io::Cursor;
use std::path::Path;

use codemix::corpus::write_corpus;
use codemix::{Sentiment, Token, Tweet};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shared filler vocabulary; none of these words contain `q`, `x` or `z`.
pub const FILLER: &[&str] = &[
    "yaar", "bahut", "the", "movie", "kal", "dekha", "tha", "phir", "se", "good", "acha", "today", "match", "bhai",
    "nahi", "hai", "kya", "baat", "people", "time", "ghar", "chalo", "abhi", "mera", "tera", "dil", "pe", "song",
];

/// One marker per class, all anagrams of the same letters so single
/// characters carry no label information but trigrams do.
pub const MARKERS: [&str; 3] = ["qxz", "zqx", "xzq"];

pub fn tweet(uid: impl Into<String>, label: Option<Sentiment>, text: &str) -> Tweet {
    Tweet {
        uid: uid.into(),
        sentiment: label,
        tokens: text
            .split_whitespace()
            .enumerate()
            .map(|(i, w)| Token::new(w, if i % 2 == 0 { "Hin" } else { "Eng" }))
            .collect(),
    }
}

/// Balanced corpus where each tweet holds filler plus its class marker.
pub fn separable_corpus(n: usize, seed: u64) -> Vec<Tweet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let label = Sentiment::ALL[i % 3];
            let len = rng.random_range(4..9);
            let mut words: Vec<&str> = (0..len).map(|_| *FILLER.choose(&mut rng).unwrap()).collect();
            let at = rng.random_range(0..=words.len());
            words.insert(at, MARKERS[label.index()]);
            tweet(format!("t{i}"), Some(label), &words.join(" "))
        })
        .collect()
}

pub fn corpus_text(tweets: &[Tweet]) -> String {
    let mut buf = Cursor::new(Vec::new());
    write_corpus(&mut buf, tweets).unwrap();
    String::from_utf8(buf.into_inner()).unwrap()
}

pub fn write_corpus_file(path: &Path, tweets: &[Tweet]) {
    std::fs::write(path, corpus_text(tweets)).unwrap();
}

/// Runs the CLI in process and returns (exit code, stdout, stderr).
pub fn run_cli(args: &[&str], stdin: &str) -> (u8, String, String) {
    let mut input = Cursor::new(stdin.as_bytes().to_vec());
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["codemix"];
    argv.extend_from_slice(args);
    let code = codemix::cli::run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn random_string(rng: &mut impl Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

/// Scores every split of the lowercased body and keeps the best one: highest
/// score (within 1e-9), then fewest words, then the lexicographically
/// largest sequence of word lengths.
pub fn exhaustive_segment(tag: &str, dict: &[(String, u64)], penalty: f64) -> Vec<String> {
    let body: Vec<char> = tag.strip_prefix('#').unwrap_or(tag).to_lowercase().chars().collect();
    let n = body.len();
    if n == 0 {
        return Vec::new();
    }
    let lookup = |w: &str| dict.iter().find(|(d, _)| d == w).map(|(_, f)| *f);
    let mut best: Option<(f64, Vec<String>)> = None;
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut words = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || mask & (1 << (i - 1)) != 0 {
                words.push(body[start..i].iter().collect::<String>());
                start = i;
            }
        }
        let score: f64 = words
            .iter()
            .map(|w| match lookup(w) {
                Some(f) => (f as f64).ln(),
                None => -penalty * w.chars().count() as f64,
            })
            .sum();
        let better = match &best {
            None => true,
            Some((s, b)) => {
                if score > s + 1e-9 {
                    true
                } else if score < s - 1e-9 {
                    false
                } else if words.len() != b.len() {
                    words.len() < b.len()
                } else {
                    let la: Vec<usize> = words.iter().map(|w| w.chars().count()).collect();
                    let lb: Vec<usize> = b.iter().map(|w| w.chars().count()).collect();
                    la > lb
                }
            }
        };
        if better {
            best = Some((score, words));
        }
    }
    best.unwrap().1
}

/// Per-class F1 and their plain mean from a direct TP/FP/FN count, reading
/// every 0/0 as 0.
pub fn tally_f1(gold: &[Sentiment], pred: &[Sentiment]) -> ([f64; 3], f64) {
    let mut f1 = [0.0; 3];
    for c in Sentiment::ALL {
        let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
        for (g, p) in gold.iter().zip(pred) {
            match (*g == c, *p == c) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fn_ += 1,
                _ => {}
            }
        }
        let prec = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
        let rec = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
        f1[c.index()] = if prec + rec == 0.0 { 0.0 } else { 2.0 * prec * rec / (prec + rec) };
    }
    (f1, (f1[0] + f1[1] + f1[2]) / 3.0)
}
