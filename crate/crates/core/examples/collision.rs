// How often do two independent scrambles of the same word agree?

use std::error::Error;

use mischief::collision::{enumerated_collision_rate, ratio_to_f64};
use mischief::{agreement_probability, collision_probability, empirical_collision_rate, Stream};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{:>2} {:>12} {:>12}", "n", "(1/(n-2)!)^2", "1/(n-2)!");
    for n in 3..=8 {
        println!("{n:>2} {:>12} {:>12}", collision_probability(n)?.to_string(), agreement_probability(n)?.to_string());
    }

    let mut stream = Stream::from_seed(1);
    for word in ["crane", "seen", "tattoo"] {
        let r = empirical_collision_rate(word, 20_000, &mut stream)?;
        let exact = enumerated_collision_rate(word)?;
        println!(
            "{word}: enumerated {exact} ({:.4}), sampled {:.4}, both unchanged {:.4}",
            ratio_to_f64(&exact),
            r.empirical.unwrap_or(f64::NAN),
            r.empirical_both_unchanged.unwrap_or(f64::NAN)
        );
        println!("{}", serde_json::to_string(&r)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
