//! A pair-of-pants representation: translation lengths, displacement and
//! the self Gromov product of a few words.

use geodesic_clt::coding_graph::GroupWord;
use geodesic_clt::hyperbolic::{pair_of_pants_rep, short_word_sanity_failures, HPoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rep = pair_of_pants_rep(2.0, 2.0, 2.0, HPoint::i())?;
    for (i, g) in rep.generators().iter().enumerate() {
        println!("generator {i}: {g:?} (trace {:.6})", g.trace());
    }
    println!("short-word failures up to length 6: {}", short_word_sanity_failures(&rep, 6).len());

    println!("{:>10} {:>12} {:>12} {:>12}", "word", "tau", "d(z, gz)", "gromov");
    for w in ["a", "b", "ab", "aB", "abAB", "aabbb", "abababab"] {
        let word: GroupWord = w.parse()?;
        println!(
            "{w:>10} {:>12.6} {:>12.6} {:>12.6}",
            rep.translation_length(&word)?,
            rep.displacement(&word)?,
            rep.self_gromov(&word)?
        );
    }
    print!("\n{}", rep.to_file_string());
    Ok(())
}
