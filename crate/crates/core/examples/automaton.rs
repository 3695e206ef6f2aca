//! Translating a formula into a deterministic automaton with mean-payoff
//! acceptance and inspecting its pairs.

use freqsynth::dgrma::{build_dgrma, DgrmaOptions};
use freqsynth::formula::parse_formula;

pub fn run_example() -> freqsynth::Result<()> {
    let phi = parse_formula("G{>=1/2,inf} served & G F idle")?;
    let a = build_dgrma(&phi, &[], &DgrmaOptions::default())?;

    println!("formula   {phi}");
    println!("alphabet  {:?}", a.alphabet().atoms());
    println!("states    {}", a.num_states());
    println!("pairs     {} of {} candidates", a.pairs.len(), a.candidate_pairs);
    for q in 0..a.num_states() {
        println!("  q{q}: {}", a.state_label(q));
    }
    println!("{}", a.acceptance_text());

    let dot = a.to_dot();
    println!("dot output: {} lines", dot.lines().count());

    // a state cap turns blow-ups into errors instead of long runs
    let tight = DgrmaOptions { max_states: 1, ..DgrmaOptions::default() };
    match build_dgrma(&phi, &[], &tight) {
        Ok(_) => println!("fits in one state"),
        Err(e) => println!("with max_states = 1: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> freqsynth::Result<()> {
    run_example()
}
