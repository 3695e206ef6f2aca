//! Simulating the synthesized controller on the model.

use freqsynth::formula::parse_formula;
use freqsynth::mdp::parse_mdp;
use freqsynth::rational::ratio;
use freqsynth::synthesis::{synthesize, SynthesisOptions};

const MODEL: &str = "\
mdp
states a b c
init a
label b hot
label c hot cold
action a heat : b 1/2 , c 1/2
action a rest : a 1
action b cool : a 1
action b keep : b 1
action c cool : a 1
action c keep : c 1
";

pub fn run_example() -> freqsynth::Result<()> {
    let (m, val) = parse_mdp(MODEL)?;
    // hot most of the time, yet cold more than a quarter of the time at some point
    let phi = parse_formula("G{>=2/3,inf} hot & G{>1/4,sup} cold & G F !hot")?;
    let s = synthesize(&m, &val, &phi, &ratio(1, 1), &SynthesisOptions::default())?;
    println!("max probability {}", s.report.max_probability);

    let mut satisfied = 0;
    for seed in 0..5 {
        let e = s.simulate(100_000, seed, 0.02);
        let (component, step) = e.entered.expect("the initial state wins");
        println!("seed {seed}: entered winner {component} at step {step}, satisfied {}", e.satisfied);
        if let Some(stats) = &e.stats {
            println!("  epochs {} inf {:?} sup {:?}", stats.epochs, stats.inf_min, stats.sup_max);
        }
        satisfied += e.satisfied as usize;
    }
    println!("{satisfied} of 5 runs satisfied the condition");
    Ok(())
}

#[allow(dead_code)]
fn main() -> freqsynth::Result<()> {
    run_example()
}
