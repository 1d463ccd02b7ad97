mod common;

use std::collections::HashSet;

use codemix::corpus::{parse_corpus_str, ParseErrorKind};
use codemix::{corpus_stats, LangTag, Sentiment, Token, Tweet};
use proptest::prelude::*;

fn arb_sentiment() -> impl Strategy<Value = Option<Sentiment>> {
    prop_oneof![
        Just(None),
        Just(Some(Sentiment::Negative)),
        Just(Some(Sentiment::Neutral)),
        Just(Some(Sentiment::Positive)),
    ]
}

fn arb_token() -> impl Strategy<Value = Token> {
    (
        "[A-Za-z0-9@#:)(!éñ]{1,8}",
        prop_oneof![Just("Eng"), Just("Hin"), Just("spa"), Just("O"), Just("lang1"), Just("EMT")],
    )
        .prop_map(|(text, tag)| Token::new(text, tag))
}

fn arb_corpus() -> impl Strategy<Value = Vec<Tweet>> {
    prop::collection::vec((arb_sentiment(), prop::collection::vec(arb_token(), 1..8)), 1..12).prop_map(|blocks| {
        blocks
            .into_iter()
            .enumerate()
            .map(|(i, (sentiment, tokens))| Tweet { uid: format!("{}", 1000 + i), sentiment, tokens })
            .collect()
    })
}

proptest! {
    #[test]
    fn write_then_parse_round_trips(corpus in arb_corpus()) {
        let text = common::corpus_text(&corpus);
        let back = parse_corpus_str(&text).unwrap();
        prop_assert_eq!(back, corpus);
    }

    #[test]
    fn label_counts_sum_to_labeled_tweets(corpus in arb_corpus()) {
        let s = corpus_stats(&corpus).unwrap();
        let labeled = corpus.iter().filter(|t| t.sentiment.is_some()).count();
        prop_assert_eq!(s.label_counts.values().sum::<usize>(), labeled);
        prop_assert_eq!(labeled + s.n_unlabeled, s.n_tweets);
        prop_assert_eq!(s.n_lang1_tokens + s.n_lang2_tokens + s.n_other_tokens, s.n_tokens);
        if s.n_lang1_tokens + s.n_lang2_tokens > 0 {
            prop_assert!((s.lang1_pct + s.lang2_pct - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn overlap_matches_brute_force(corpus in arb_corpus()) {
        let mut v1 = Vec::<String>::new();
        let mut v2 = Vec::<String>::new();
        for t in &corpus {
            for tok in &t.tokens {
                let w = tok.text.to_lowercase();
                match LangTag::from_raw(&tok.raw_tag) {
                    LangTag::Lang1 if !v1.contains(&w) => v1.push(w),
                    LangTag::Lang2 if !v2.contains(&w) => v2.push(w),
                    _ => {}
                }
            }
        }
        let both = v1.iter().filter(|w| v2.contains(w)).count();
        let union = v1.len() + v2.len() - both;
        let s = corpus_stats(&corpus).unwrap();
        prop_assert_eq!(s.vocab1_size, v1.len());
        prop_assert_eq!(s.vocab2_size, v2.len());
        prop_assert_eq!(s.overlap_size, both);
        let jaccard = if union == 0 { 0.0 } else { 100.0 * both as f64 / union as f64 };
        prop_assert!((s.overlap_pct - jaccard).abs() < 1e-12);
        prop_assert!(s.overlap_pct <= s.overlap_pct_of_vocab1.min(s.overlap_pct_of_vocab2) + 1e-12);
    }
}

#[test]
fn three_tweet_fixture() {
    let text = "meta\t1\tpositive\nMain\tHin\nhappy\tEng\nhoon\tHin\n\n\
                meta\t2\tnegative\nbad\tEng\nday\tEng\n!\tO\n\n\
                meta\t3\nMain\tEng\nmain\tHin\n";
    let tweets = parse_corpus_str(text).unwrap();
    assert_eq!(tweets.len(), 3);
    assert_eq!(tweets[2].sentiment, None);
    let s = corpus_stats(&tweets).unwrap();
    assert_eq!(s.label_counts[&Sentiment::Positive], 1);
    assert_eq!(s.label_counts[&Sentiment::Negative], 1);
    assert_eq!(s.label_counts[&Sentiment::Neutral], 0);
    assert_eq!(s.n_unlabeled, 1);
    assert_eq!((s.n_lang1_tokens, s.n_lang2_tokens, s.n_other_tokens), (4, 3, 1));
    assert!((s.lang1_pct - 400.0 / 7.0).abs() < 1e-12);
    // {happy, bad, day, main} vs {main, hoon}
    assert_eq!((s.vocab1_size, s.vocab2_size, s.overlap_size), (4, 2, 1));
    assert!((s.overlap_pct - 20.0).abs() < 1e-12);
}

#[test]
fn malformed_input_reports_line() {
    let err = parse_corpus_str("meta\t1\tpositive\ngood\tEng\n\nmeta\t2\thappy\nx\tEng\n").unwrap_err();
    assert_eq!(err.line, 4);
    assert!(matches!(err.kind, ParseErrorKind::UnknownSentiment(_)));

    let err = parse_corpus_str("meta\t1\nonly_one_field\n").unwrap_err();
    assert_eq!(err.line, 2);

    let err = parse_corpus_str("meta\t1\na\tEng\n\nmeta\t1\nb\tEng\n").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::DuplicateUid(_)));

    let uids: HashSet<_> =
        parse_corpus_str("meta 7 neutral\r\na Eng\r\n").unwrap().into_iter().map(|t| t.uid).collect();
    assert!(uids.contains("7"));
}
