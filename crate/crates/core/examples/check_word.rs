//! Running the automaton on lasso words and comparing with the semantics.

use freqsynth::dgrma::{build_dgrma, DgrmaOptions};
use freqsynth::formula::parse_formula;
use freqsynth::lasso::{random_lasso, Lasso};

pub fn run_example() -> freqsynth::Result<()> {
    let phi = parse_formula("G{>=1/2,inf} a & G{>0,sup} (b & X b)")?;
    let a = build_dgrma(&phi, &[], &DgrmaOptions::default())?;

    for (stem, cycle) in [("{}", "{a};{b}"), ("{b}", "{a,b};{b};{a}"), ("", "{a};{a};{b}")] {
        let w = Lasso::parse(stem, cycle)?;
        println!("{w}: automaton {} semantics {}", a.accepts_lasso(&w), w.models(&phi));
    }

    let atoms = a.alphabet().atoms().to_vec();
    let mismatches = (0..1000u64)
        .map(|seed| random_lasso(seed, 4, 6, &atoms))
        .filter(|w| a.accepts_lasso(w) != w.models(&phi))
        .count();
    println!("random words disagreeing: {mismatches} of 1000");
    assert_eq!(mismatches, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> freqsynth::Result<()> {
    run_example()
}
