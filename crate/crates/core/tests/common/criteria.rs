//! The acceptance checks, parameterised by size so the focused test files can
//! run smaller versions.

use freqsynth::calculus::Universe;
use freqsynth::cli;
use freqsynth::dgrma::{build_dgrma, rec_set, DgrmaOptions};
use freqsynth::formula::{parse_formula, Formula};
use freqsynth::lasso::{random_lasso_with, Lasso};
use freqsynth::lts::Alphabet;
use freqsynth::master::DEFAULT_STATE_CAP;
use freqsynth::mdp::{Mdp, Valuation};
use freqsynth::mec_analysis::{
    analyse_mec, build_witness, simulate_witness, EpochPolicy, EpochSchedule, GbmpCondition, MecVerdict,
    SimOptions,
};
use freqsynth::rational::{zero, Rational};
use freqsynth::slave::{
    build_count_lts, build_slave_lts, build_token_lts, buchi_accepting_sets, cobuchi_rejecting_sets, mp_reward,
};
use freqsynth::synthesis::{analyse_product, synthesize, StatePair, SynthesisOptions};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chain::chain_probability;
use super::exact::lts_cycle;
use super::gen;
use super::md_oracle::md_witness;
use super::{atoms, corpus, random_fragment_formula, random_until_free};

pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict { pass, detail }
    }
}

fn lasso(rng: &mut ChaCha8Rng, atoms: &[String]) -> Lasso {
    random_lasso_with(rng, 6, 6, atoms)
}

fn atoms_of(f: &Formula) -> Vec<String> {
    f.atoms().into_iter().collect()
}

/// Automaton acceptance matches the semantics on random lassos.
pub fn translation(formulas: usize, lassos: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = Vec::new();
    let list = corpus(formulas, 7);
    for f in &list {
        let a = build_dgrma(f, &[], &DgrmaOptions::default()).unwrap();
        let ab = a.alphabet().atoms().to_vec();
        for _ in 0..lassos {
            let w = lasso(&mut rng, &ab);
            if a.accepts_lasso(&w) != w.models(f) {
                mismatches.push(format!("{f} on {w}"));
            }
        }
    }
    Verdict::new(
        mismatches.is_empty(),
        format!("{} formulas x {lassos} lassos, {} mismatches {:?}", list.len(), mismatches.len(), mismatches.first()),
    )
}

/// `w |= phi` iff the suffix from position 1 satisfies the unfolding of `phi`
/// after reading the first letter.
pub fn unfolding(trials: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let phi = random_fragment_formula(&mut rng, 10, &atoms(n));
        let ab = atoms(n);
        let w = lasso(&mut rng, &ab);
        let mut u = Universe::new(Alphabet::new(ab.iter().cloned()).unwrap());
        let f = u.encode(&phi).unwrap();
        let letter = u.alphabet().letter_of(w.at(0));
        let next = u.unfold_step(&f, letter);
        let rhs = w.shift(1).models(&u.decode(&next));
        if w.models(&phi) != rhs {
            failures.push(format!("{phi} on {w}"));
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("{trials} pairs, {} failures {:?}", failures.len(), failures.first()),
    )
}

/// The master state after `n` letters is satisfied by the `n`-th suffix
/// exactly when the word satisfies the formula.
pub fn master_local(formulas: usize, lassos: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let mut checks = 0;
    for f in corpus(formulas, 7) {
        let a = build_dgrma(&f, &[], &DgrmaOptions::default()).unwrap();
        let ab = a.alphabet().atoms().to_vec();
        for _ in 0..lassos {
            let w = lasso(&mut rng, &ab);
            let truth = w.models(&f);
            let mut q = a.master.initial;
            for n in 0..=w.stem.len() + 3 * w.cycle.len() {
                let state = a.universe.decode(&a.master.states[q]);
                checks += 1;
                if w.shift(n).models(&state) != truth {
                    failures.push(format!("{f} on {w} at {n}"));
                }
                q = a.master.successor(q, a.alphabet().letter_of(w.at(n))).unwrap();
            }
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("{checks} suffix checks, {} failures {:?}", failures.len(), failures.first()),
    )
}

/// Token and counting slaves agree with the semantics once the recurrent
/// subformulas true on the word are assumed.
pub fn slaves(trials: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let ab = atoms(n);
        let xi = random_until_free(&mut rng, 7, &ab);
        let w = lasso(&mut rng, &ab);
        let mut u = Universe::new(Alphabet::new(ab.iter().cloned()).unwrap());
        let enc = u.encode(&xi).unwrap();
        let rec = rec_set(&u, &enc);
        let rec_formulas: Vec<Formula> = rec.iter().map(|&id| u.formula_of(id)).collect();
        let truth = w.rec_truth(&rec_formulas);
        let assumed: Vec<_> = rec.iter().zip(&truth).filter(|(_, &t)| t).map(|(&id, _)| id).collect();

        let slave = build_slave_lts(&u, &enc, DEFAULT_STATE_CAP).unwrap();
        let tokens = build_token_lts(&slave, DEFAULT_STATE_CAP).unwrap();
        let cycle = lts_cycle(&tokens, &w);
        let inf = buchi_accepting_sets(&slave, &tokens, &assumed);
        let fin = cobuchi_rejecting_sets(&slave, &tokens, &assumed);
        let gf = w.models(&Formula::globally(Formula::finally(xi.clone())));
        let fg = w.models(&Formula::finally(Formula::globally(xi.clone())));
        if gf != cycle.iter().any(|&q| inf[q]) {
            failures.push(format!("GF {xi} on {w}"));
        }
        if fg != !cycle.iter().any(|&q| fin[q]) {
            failures.push(format!("FG {xi} on {w}"));
        }

        let counts = build_count_lts(&slave, DEFAULT_STATE_CAP).unwrap();
        let reward = mp_reward(&slave, &counts, &assumed);
        let cycle = lts_cycle(&counts, &w);
        let total: u64 = cycle.iter().map(|&q| u64::from(reward[q])).sum();
        let avg = Rational::new(total.into(), (cycle.len() as u64).into());
        if avg != w.freq_on_lasso(&xi) {
            failures.push(format!("frequency of {xi} on {w}: {avg}"));
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("{trials} trials, {} failures {:?}", failures.len(), failures.first()),
    )
}

/// Schedule used for a witness check: plain doubling with the default cap,
/// or, with two competing sup bounds, epochs growing by a factor of 32 so
/// that each mode gets a dominating epoch within the run.
pub fn witness_policy(cond: &GbmpCondition) -> EpochPolicy {
    if cond.mp_sup.len() > 1 {
        EpochPolicy {
            schedule: EpochSchedule::Geometric(32),
            cap: u64::MAX,
        }
    } else {
        EpochPolicy::default()
    }
}

pub struct MecResults {
    pub infeasibility: Verdict,
    pub witness: Verdict,
}

/// Flow-program infeasibility against exhaustive memoryless search, and
/// simulation of the witness whenever the program is feasible.
pub fn mec_instances(instances: usize, steps: u64, seed: u64) -> MecResults {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rejected, mut counterexamples) = (0, Vec::new());
    let (mut accepted, mut witness_failures) = (0, Vec::new());
    for k in 0..instances {
        let c = gen::strongly_connected_mdp(&mut rng, 4, 3);
        let cond = gen::condition(&mut rng, c.num_states());
        match analyse_mec(&c, &cond).unwrap() {
            MecVerdict::Accepting(sol) => {
                accepted += 1;
                let w = build_witness(&c, &cond, &sol, witness_policy(&cond));
                let stats = simulate_witness(&c, &cond, &w, SimOptions::new(steps, k as u64));
                if !stats.meets(&cond, 0.05) {
                    witness_failures.push(format!("instance {k}: {stats:?}"));
                }
            }
            _ => {
                rejected += 1;
                if let Some(choice) = md_witness(&c, &cond) {
                    counterexamples.push(format!("instance {k}: strategy {choice:?}"));
                }
            }
        }
    }
    MecResults {
        infeasibility: Verdict::new(
            counterexamples.is_empty(),
            format!(
                "{instances} instances, {rejected} rejected, {} counterexamples {:?}",
                counterexamples.len(),
                counterexamples.first()
            ),
        ),
        witness: Verdict::new(
            witness_failures.is_empty(),
            format!(
                "{accepted} accepting instances x {steps} steps, {} failures {:?}",
                witness_failures.len(),
                witness_failures.first()
            ),
        ),
    }
}

/// Pipeline probability against bottom-SCC analysis of the chain product.
pub fn chains(models: usize, formulas: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let list = corpus(formulas, 11);
    let mut mismatches = Vec::new();
    let mut checks = 0;
    for _ in 0..models {
        for f in &list {
            let (m, v) = gen::markov_chain(&mut rng, 6, &atoms_of(f));
            let a = build_dgrma(f, &[], &DgrmaOptions::default()).unwrap();
            let expected = chain_probability(&m, &v, &a);
            let got = synthesize(&m, &v, f, &zero(), &SynthesisOptions::default())
                .unwrap()
                .report
                .max_probability;
            checks += 1;
            if got != expected {
                mismatches.push(format!("{f}: pipeline {got}, oracle {expected}"));
            }
        }
    }
    Verdict::new(
        mismatches.is_empty(),
        format!("{checks} chain/formula pairs, {} mismatches {:?}", mismatches.len(), mismatches.first()),
    )
}

/// On strongly connected models a pure mean-payoff condition holds with
/// probability 0 or 1, the same from every initial state.
pub fn dichotomy(instances: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tt = parse_formula("tt").unwrap();
    let mut failures = Vec::new();
    let mut ones = 0;
    for k in 0..instances {
        let c = gen::strongly_connected_mdp(&mut rng, 4, 3);
        let cond = gen::condition(&mut rng, c.num_states());
        let val = Valuation(vec![Default::default(); c.num_states()]);
        let mut values = Vec::new();
        for init in 0..c.num_states() {
            let m: Mdp = c.with_initial(init);
            let s = synthesize(&m, &val, &tt, &zero(), &SynthesisOptions::default()).unwrap();
            let origin: Vec<usize> = s.product.states.iter().map(|&(state, _)| state).collect();
            let lift = |v: &[bool]| origin.iter().map(|&o| v[o]).collect::<Vec<bool>>();
            let bound = |b: &freqsynth::mec_analysis::MpBound| freqsynth::mec_analysis::MpBound {
                reward: origin.iter().map(|&o| b.reward[o].clone()).collect(),
                ..b.clone()
            };
            let pair = StatePair {
                fin: vec![false; origin.len()],
                cond: GbmpCondition {
                    infs: cond.infs.iter().map(|v| lift(v)).collect(),
                    mp_inf: cond.mp_inf.iter().map(bound).collect(),
                    mp_sup: cond.mp_sup.iter().map(bound).collect(),
                },
            };
            let analysis = analyse_product(&s.product.mdp, &[pair], 1, EpochPolicy::default()).unwrap();
            values.push(analysis.probability(s.product.mdp.initial).clone());
        }
        let first = values[0].clone();
        if !(first.is_zero() || first.is_one()) || values.iter().any(|v| *v != first) {
            failures.push(format!("instance {k}: {values:?}"));
        }
        if first.is_one() {
            ones += 1;
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!(
            "{instances} instances ({ones} with probability 1), {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn cli_capture(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["freqsynth"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

/// Identical inputs give byte-identical reports, DOT files and simulation
/// dumps, also across worker counts.
pub fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.mdp");
    std::fs::write(
        &model,
        "mdp\nstates s p q r\ninit s\nlabel p a\nlabel q a b\n\
         action s left : p 1/2 , r 1/2\naction s right : r 1\n\
         action p go : q 1\naction q go : r 2/3 , p 1/3\naction r go : p 1\naction r stay : r 1\n",
    )
    .unwrap();
    let model = model.to_str().unwrap().to_string();
    let formula = "G{>=1/2,inf} a & G F b";
    let mut outputs = Vec::new();
    for (run, jobs) in [(0, "1"), (1, "1"), (2, "4")] {
        let dot = dir.path().join(format!("p{run}.dot"));
        let adot = dir.path().join(format!("a{run}.dot"));
        let synth = cli_capture(&[
            "synth", "--model", &model, "--formula", formula, "--threshold", "1/2", "--jobs", jobs, "--dot",
            dot.to_str().unwrap(),
        ]);
        let auto = cli_capture(&["automaton", "--formula", formula, "--export-slaves", "--dot", adot.to_str().unwrap()]);
        let sim = cli_capture(&[
            "simulate", "--model", &model, "--formula", formula, "--seed", "42", "--steps", "20000", "--episodes", "3",
        ]);
        outputs.push((
            synth,
            std::fs::read_to_string(&dot).unwrap(),
            auto,
            std::fs::read_to_string(&adot).unwrap(),
            sim,
        ));
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    Verdict::new(same, format!("3 runs of synth, automaton and simulate; identical: {same}"))
}
