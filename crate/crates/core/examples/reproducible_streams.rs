// The random streams behind every decision depend only on the seed and the
// position in the corpus, never on processing order.

use std::error::Error;

use mischief::rng::{derive_stream, mix64};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    assert_eq!(mix64(1), 0x5692_161D_100B_05E5);

    let mut a = derive_stream(0, 0, 0);
    assert_eq!(a.next_u64(), 0x12DC_30DF_1DDC_2D5F);

    // Same (seed, record, field) in any order gives the same draws.
    let forward: Vec<u64> = (0..4).map(|i| derive_stream(9, i, 1).next_u64()).collect();
    let backward: Vec<u64> = (0..4).rev().map(|i| derive_stream(9, i, 1).next_u64()).collect();
    assert!(forward.iter().eq(backward.iter().rev()));

    let mut s = derive_stream(9, 0, 0).substream(3);
    let mut letters: Vec<char> = "abcdef".chars().collect();
    s.shuffle(&mut letters);
    println!("draws {forward:x?}, shuffled {}", letters.iter().collect::<String>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
