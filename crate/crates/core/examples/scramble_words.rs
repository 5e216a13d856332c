// Scramble single words and count how many spellings each one can take.

use std::error::Error;

use mischief::{distinct_variant_count, gra, PerturbConfig, Stream};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = PerturbConfig::new(1.0, 1.0, 7)?;
    let mut stream = Stream::from_seed(7);
    for word in ["reading", "Cambridge", "seen", "naïveté", "word"] {
        let out = gra(word, &config, &mut stream)?;
        println!("{word:>10} -> {out:<10} ({} spellings)", distinct_variant_count(word));
        assert_eq!(out.chars().next(), word.chars().next());
        assert_eq!(out.chars().last(), word.chars().last());
    }

    // The identity is a legal draw unless it is ruled out.
    let strict = config.clone().with_force_nonidentity(true);
    for _ in 0..100 {
        assert_ne!(gra("crane", &strict, &mut stream)?, "crane");
    }
    assert_eq!(gra("seen", &strict, &mut stream)?, "seen");

    // Words shorter than the minimum length are refused.
    assert!(gra("cat", &config, &mut stream).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
