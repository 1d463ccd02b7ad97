mod common;

use codemix::preprocess::{is_url, remove_urls, segment_hashtag_with_penalty};
use codemix::{preprocess, tokenize, PreprocessConfig, SegmentDictionary};
use proptest::prelude::*;

fn arb_tweet_text() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[a-zA-Z]{1,8}",
        "[0-9]{1,3}",
        Just("#ILoveYou".to_string()),
        Just("#SoSad".to_string()),
        "#[a-zA-Z0-9_]{1,10}",
        "@[a-z_]{1,6}",
        Just("http://t.co/AbC".to_string()),
        Just("WWW.Example.com/x".to_string()),
        Just(":-)".to_string()),
        Just(":D".to_string()),
        Just("<3".to_string()),
        Just("don't".to_string()),
        Just("नमस्ते".to_string()),
        Just("ÉTÉ".to_string()),
        "[!?.,:;'()#@]{1,3}",
    ];
    prop::collection::vec((piece, prop_oneof![Just(" "), Just(""), Just("  "), Just("\t")]), 0..10)
        .prop_map(|parts| parts.into_iter().map(|(p, sep)| format!("{p}{sep}")).collect())
}

fn arb_config() -> impl Strategy<Value = PreprocessConfig> {
    (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(segment_hashtags, remove_urls, lowercase)| {
        PreprocessConfig { segment_hashtags, remove_urls, lowercase, ..PreprocessConfig::default() }
    })
}

proptest! {
    #[test]
    fn preprocessing_is_idempotent(text in arb_tweet_text(), cfg in arb_config()) {
        let dict = SegmentDictionary::builtin();
        let once = preprocess(&text, &cfg, &dict);
        prop_assert_eq!(preprocess(&once, &cfg, &dict), once.clone());
        prop_assert!(!once.contains("  "));
    }

    #[test]
    fn tokens_cover_input(text in arb_tweet_text()) {
        let joined: String = tokenize(&text).concat();
        let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(joined, squeezed);
    }

    #[test]
    fn url_removal_keeps_order(tokens in prop::collection::vec(
        prop_oneof!["[a-z]{1,5}", Just("https://x.co".to_string()), Just("www.y.org".to_string())], 0..12)) {
        let kept = remove_urls(tokens.clone());
        prop_assert!(kept.iter().all(|t| !is_url(t)));
        let expected: Vec<String> = tokens.into_iter().filter(|t| !is_url(t)).collect();
        prop_assert_eq!(kept, expected);
    }

    #[test]
    fn segments_concatenate_to_body(body in "[a-zA-Z]{1,14}", penalty in 0.5f64..8.0) {
        let dict = SegmentDictionary::builtin();
        let words = segment_hashtag_with_penalty(&format!("#{body}"), &dict, penalty);
        prop_assert_eq!(words.concat(), body.to_lowercase());
        prop_assert!(words.iter().all(|w| !w.is_empty()));
    }

    #[test]
    fn segmentation_matches_exhaustive_search(
        body in "[abcde]{1,10}",
        words in prop::collection::btree_map("[abcde]{1,4}", 1u64..500, 1..20),
    ) {
        let pairs: Vec<(String, u64)> = words.into_iter().collect();
        let dict = SegmentDictionary::from_pairs(pairs.clone());
        let got = segment_hashtag_with_penalty(&format!("#{body}"), &dict, 5.0);
        prop_assert_eq!(got, common::exhaustive_segment(&body, &pairs, 5.0));
    }
}

#[test]
fn disabled_pipeline_only_normalizes_whitespace() {
    let dict = SegmentDictionary::builtin();
    assert_eq!(preprocess("A  #B\thttp://c.d", &PreprocessConfig::disabled(), &dict), "A #B http://c.d");
}
