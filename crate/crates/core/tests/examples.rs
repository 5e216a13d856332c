//! Every example under examples/ runs to completion.

macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(scramble_words, "scramble_words.rs", scramble_words_runs);
example!(perturb_corpus, "perturb_corpus.rs", perturb_corpus_runs);
example!(glue_tsv, "glue_tsv.rs", glue_tsv_runs);
example!(collision, "collision.rs", collision_runs);
example!(bpe_roundtrip, "bpe_roundtrip.rs", bpe_roundtrip_runs);
example!(divergence_sweep, "divergence_sweep.rs", divergence_sweep_runs);
example!(corpus_stats, "corpus_stats.rs", corpus_stats_runs);
example!(reproducible_streams, "reproducible_streams.rs", reproducible_streams_runs);
