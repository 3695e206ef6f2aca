//! End components, the flow program for a mean-payoff condition and a
//! simulated witness strategy.

use freqsynth::formula::Cmp;
use freqsynth::mdp::mec_decomposition;
use freqsynth::mdp::parse_mdp;
use freqsynth::mec_analysis::{
    analyse_mec, build_flow_lp, build_witness, flow_lp_text, simulate_witness, EpochPolicy, EpochSchedule, GbmpCondition,
    MecVerdict, MpBound, SimOptions,
};
use freqsynth::rational::{fmt_exact, ratio, Rational};

const MODEL: &str = "\
mdp
states left right sink
init left
action left stay : left 1
action left go : right 1/2 , left 1/2
action right stay : right 1
action right back : left 1
action right drop : sink 1
action sink loop : sink 1
";

pub fn run_example() -> freqsynth::Result<()> {
    let (m, _) = parse_mdp(MODEL)?;
    let mecs = mec_decomposition(&m);
    for c in &mecs {
        let names: Vec<&str> = c.states.iter().map(|&s| m.state_names[s].as_str()).collect();
        println!("end component {names:?} with {} actions", c.actions.len());
    }

    let big = mecs.iter().max_by_key(|c| c.states.len()).unwrap();
    let keep: Vec<bool> = (0..m.num_actions()).map(|a| big.actions.contains(&a)).collect();
    let (c, _) = m.sub_mdp(&big.states, &keep);

    // be in `left` at least 1/3 of the time in the long run, while the
    // running share of `right` keeps exceeding 1/2 and the running share of
    // `left` keeps climbing back to 9/10
    let indicator = |name: &str| -> Vec<Rational> {
        (0..c.num_states()).map(|s| ratio((c.state_names[s] == name) as i64, 1)).collect()
    };
    let cond = GbmpCondition {
        infs: vec![],
        mp_inf: vec![MpBound { reward: indicator("left"), cmp: Cmp::Geq, bound: ratio(1, 3) }],
        mp_sup: vec![
            MpBound { reward: indicator("right"), cmp: Cmp::Gt, bound: ratio(1, 2) },
            MpBound { reward: indicator("left"), cmp: Cmp::Geq, bound: ratio(9, 10) },
        ],
    };
    println!("{}", flow_lp_text(&c, &build_flow_lp(&c, &cond)));

    let MecVerdict::Accepting(sol) = analyse_mec(&c, &cond)? else {
        println!("condition cannot be met");
        return Ok(());
    };
    for (i, flow) in sol.flows.iter().enumerate() {
        let parts: Vec<String> = flow
            .iter()
            .enumerate()
            .filter(|(_, x)| **x != ratio(0, 1))
            .map(|(a, x)| format!("{}:{}={}", c.state_names[c.actions[a].state], c.actions[a].name, fmt_exact(x)))
            .collect();
        println!("flow {i}: {}", parts.join(" "));
    }

    // the default capped doubling epochs are too short for two sup bounds
    // to both be reached in a run of this length
    let epochs = EpochPolicy { schedule: EpochSchedule::Geometric(32), cap: u64::MAX };
    let witness = build_witness(&c, &cond, &sol, epochs);
    let stats = simulate_witness(&c, &cond, &witness, SimOptions::new(200_000, 7));
    println!("inf minimum {:?}, sup maximum {:?}", stats.inf_min, stats.sup_max);
    println!("meets the condition: {}", stats.meets(&cond, 0.02));
    Ok(())
}

#[allow(dead_code)]
fn main() -> freqsynth::Result<()> {
    run_example()
}
