//! Exact maximal reachability probabilities and an optimal memoryless choice.

use freqsynth::mdp::parse_mdp;
use freqsynth::rational::fmt_exact;
use freqsynth::reach::max_reach;

const MODEL: &str = "\
mdp
states start safe risky goal fail
init start
action start careful : safe 1
action start bold : risky 1
action safe try : goal 1/3 , safe 2/3
action safe quit : fail 1
action risky roll : goal 1/2 , fail 1/2
action goal done : goal 1
action fail done : fail 1
";

pub fn run_example() -> freqsynth::Result<()> {
    let (m, _) = parse_mdp(MODEL)?;
    let target: Vec<bool> = m.state_names.iter().map(|n| n == "goal").collect();
    let r = max_reach(&m, &target);
    for s in 0..m.num_states() {
        let choice = r.choice[s].map_or("-".to_string(), |a| m.actions[a].name.clone());
        println!("{:6} {:>4}  {}", m.state_names[s], fmt_exact(&r.prob[s]), choice);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> freqsynth::Result<()> {
    run_example()
}
