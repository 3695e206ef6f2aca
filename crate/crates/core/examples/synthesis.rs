//! Full synthesis: does some controller satisfy the formula with at least
//! the given probability?

use freqsynth::formula::parse_formula;
use freqsynth::mdp::parse_mdp;
use freqsynth::rational::ratio;
use freqsynth::synthesis::{synthesize, SynthesisOptions};

pub const SERVER: &str = "\
mdp
states idle work fail
init idle
label work served
label fail fault
action idle start : work 1
action idle wait : idle 1
action work fast : work 1/2 , idle 1/4 , fail 1/4
action work slow : work 3/4 , idle 1/4
action fail repair : idle 1
";

pub fn run_example() -> freqsynth::Result<()> {
    let (m, val) = parse_mdp(SERVER)?;
    let options = SynthesisOptions::default();
    for text in ["G{>=1/2,inf} served & F G !fault", "G{>=9/10,inf} served", "G{>=3/4,sup} served & G F fault"] {
        let phi = parse_formula(text)?;
        let s = synthesize(&m, &val, &phi, &ratio(1, 2), &options)?;
        println!("{}", s.report.to_text());
        for (stage, time) in &s.report.timings {
            println!("# {stage}: {time:?}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> freqsynth::Result<()> {
    run_example()
}
