//! Parsing formulas, the negation normal form and evaluation on lasso words.

use freqsynth::formula::in_fragment;
use freqsynth::formula::{parse_formula, parse_formula_raw};
use freqsynth::lasso::Lasso;
use freqsynth::rational::fmt_approx;

pub fn run_example() -> freqsynth::Result<()> {
    for text in [
        "G{>=1/2,inf} served & F G !fault",
        "!G{>0.25,sup} (req -> X grant)",
        "(a U b) & G F c",
        "G (a U b)",
    ] {
        let raw = parse_formula_raw(text)?;
        let nnf = parse_formula(text)?;
        println!("{text}");
        println!("  parsed   {raw}");
        println!("  nnf      {nnf}");
        println!("  atoms    {:?}", nnf.atoms());
        println!("  fragment {}", in_fragment(&nnf));
    }

    // frequencies are limits of averages along the word
    let w = Lasso::parse("{}", "{a};{a};{}")?;
    let phi = parse_formula("G{>=2/3,inf} a")?;
    let freq = w.freq_on_lasso(&parse_formula("a")?);
    println!("word {w}: frequency of a = {}, {} holds: {}", fmt_approx(&freq), phi, w.models(&phi));
    Ok(())
}

#[allow(dead_code)]
fn main() -> freqsynth::Result<()> {
    run_example()
}
