//! The synthesis pipeline: translate the formula, build the product with the
//! model, find the accepting end components, maximise the probability of
//! reaching them, and assemble a strategy.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dgrma::{build_dgrma, Dgrma, DgrmaOptions, GrmpPair};
use crate::error::{Error, Result};
use crate::formula::{Ext, Formula};
use crate::mdp::{mecs_within, product_mdp, EndComponent, Mdp, Product, Valuation};
use crate::mec_analysis::{
    analyse_mec, build_witness, run_witness, EpochPolicy, FlowSolution, GbmpCondition, MecVerdict, MpBound,
    Sampler, SimOptions, SimStats, WitnessStrategy,
};
use crate::reach::{max_reach, Reachability};
use crate::rational::{fmt_approx, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthesisOptions {
    pub automaton: DgrmaOptions,
    pub max_product_states: usize,
    pub epochs: EpochPolicy,
    /// Require the probability to exceed the threshold instead of reaching it.
    pub strict: bool,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            automaton: DgrmaOptions::default(),
            max_product_states: crate::master::DEFAULT_STATE_CAP,
            epochs: EpochPolicy::default(),
            strict: false,
        }
    }
}

/// An acceptance pair over the states of an MDP.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatePair {
    pub fin: Vec<bool>,
    pub cond: GbmpCondition,
}

impl StatePair {
    fn restricted(&self, map: &[usize]) -> GbmpCondition {
        let pick = |v: &[bool]| map.iter().map(|&s| v[s]).collect();
        let bound = |b: &MpBound| MpBound {
            reward: map.iter().map(|&s| b.reward[s].clone()).collect(),
            cmp: b.cmp,
            bound: b.bound.clone(),
        };
        GbmpCondition {
            infs: self.cond.infs.iter().map(|v| pick(v)).collect(),
            mp_inf: self.cond.mp_inf.iter().map(bound).collect(),
            mp_sup: self.cond.mp_sup.iter().map(bound).collect(),
        }
    }
}

/// Reads automaton pairs through the automaton component of product states.
pub fn lift_pairs(product: &Product, pairs: &[GrmpPair]) -> Vec<StatePair> {
    let qs: Vec<usize> = product.states.iter().map(|&(_, q)| q).collect();
    pairs
        .iter()
        .map(|p| {
            let mut cond = GbmpCondition {
                infs: p.infs.iter().map(|set| qs.iter().map(|&q| set[q]).collect()).collect(),
                ..Default::default()
            };
            for mp in &p.mps {
                let bound = MpBound {
                    reward: qs.iter().map(|&q| int(mp.reward[q].into())).collect(),
                    cmp: mp.bound.cmp,
                    bound: mp.bound.p.clone(),
                };
                match mp.bound.ext {
                    Ext::Inf => cond.mp_inf.push(bound),
                    Ext::Sup => cond.mp_sup.push(bound),
                }
            }
            StatePair {
                fin: qs.iter().map(|&q| p.fin[q]).collect(),
                cond,
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct WinningMec {
    pub pair: usize,
    pub component: EndComponent,
    /// The component as a standalone MDP; local state `i` is
    /// `component.states[i]`.
    pub mdp: Mdp,
    pub cond: GbmpCondition,
    pub solution: FlowSolution,
}

#[derive(Clone, Debug, Default)]
pub struct WinningUnion {
    pub states: Vec<bool>,
    pub actions: Vec<bool>,
    /// Sorted by pair, then by smallest state.
    pub winners: Vec<WinningMec>,
    pub mecs_analysed: usize,
}

/// One end component of the MDP left after removing a pair's Fin states.
#[derive(Clone, Debug)]
pub struct AnalysedMec {
    pub component: EndComponent,
    pub mdp: Mdp,
    pub cond: GbmpCondition,
    pub verdict: MecVerdict,
}

/// Every end component available to `pair`, with its verdict.
pub fn pair_mecs(m: &Mdp, pair: &StatePair) -> Result<Vec<AnalysedMec>> {
    let alive: Vec<bool> = pair.fin.iter().map(|f| !f).collect();
    mecs_within(m, &alive, &vec![true; m.num_actions()])
        .into_iter()
        .map(|ec| {
            let mut keep = vec![false; m.num_actions()];
            for &a in &ec.actions {
                keep[a] = true;
            }
            let (sub, map) = m.sub_mdp(&ec.states, &keep);
            let cond = pair.restricted(&map);
            let verdict = analyse_mec(&sub, &cond)?;
            Ok(AnalysedMec {
                component: ec,
                mdp: sub,
                cond,
                verdict,
            })
        })
        .collect()
}

fn pair_winners(m: &Mdp, k: usize, pair: &StatePair) -> Result<(Vec<WinningMec>, usize)> {
    let mecs = pair_mecs(m, pair)?;
    let analysed = mecs.len();
    let winners = mecs
        .into_iter()
        .filter_map(|a| match a.verdict {
            MecVerdict::Accepting(solution) => Some(WinningMec {
                pair: k,
                component: a.component,
                mdp: a.mdp,
                cond: a.cond,
                solution,
            }),
            _ => None,
        })
        .collect();
    Ok((winners, analysed))
}

/// Union of the accepting end components over all pairs.
pub fn winning_union(m: &Mdp, pairs: &[StatePair], jobs: usize) -> Result<WinningUnion> {
    let work = |(k, p): (usize, &StatePair)| pair_winners(m, k, p);
    let results: Vec<Result<(Vec<WinningMec>, usize)>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))?;
        pool.install(|| pairs.par_iter().enumerate().map(work).collect())
    } else {
        pairs.iter().enumerate().map(work).collect()
    };
    let mut union = WinningUnion {
        states: vec![false; m.num_states()],
        actions: vec![false; m.num_actions()],
        ..Default::default()
    };
    for result in results {
        let (mut winners, analysed) = result?;
        union.mecs_analysed += analysed;
        winners.sort_by_key(|w| w.component.states[0]);
        for w in &winners {
            w.component.states.iter().for_each(|&s| union.states[s] = true);
            w.component.actions.iter().for_each(|&a| union.actions[a] = true);
        }
        union.winners.extend(winners);
    }
    Ok(union)
}

/// Reach the winning components with maximal probability, then follow the
/// witness of the component entered first.
#[derive(Clone, Debug)]
pub struct GlobalStrategy {
    pub reach: Vec<Option<usize>>,
    /// Winner in charge of each state of the union.
    pub owner: Vec<Option<usize>>,
    pub witnesses: Vec<WitnessStrategy>,
}

impl GlobalStrategy {
    pub fn new(union: &WinningUnion, reach: &Reachability, epochs: EpochPolicy) -> Self {
        let mut owner = vec![None; union.states.len()];
        for (k, w) in union.winners.iter().enumerate() {
            for &s in &w.component.states {
                owner[s].get_or_insert(k);
            }
        }
        GlobalStrategy {
            reach: reach.choice.clone(),
            owner,
            witnesses: union
                .winners
                .iter()
                .map(|w| build_witness(&w.mdp, &w.cond, &w.solution, epochs))
                .collect(),
        }
    }
}

/// What one simulated run did.
#[derive(Clone, Debug, PartialEq)]
pub struct Episode {
    /// Winner entered and the step at which it happened.
    pub entered: Option<(usize, u64)>,
    /// Statistics of the witness part of the run.
    pub stats: Option<SimStats>,
    pub satisfied: bool,
}

/// Simulates `steps` steps of the global strategy from the initial state.
/// A run counts as satisfied when it enters the union and the witness meets
/// its condition up to `tol` on the remaining steps.
pub fn simulate_global(
    m: &Mdp,
    union: &WinningUnion,
    strategy: &GlobalStrategy,
    steps: u64,
    seed: u64,
    tol: f64,
) -> Episode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = Sampler::new(m);
    let mut state = m.initial;
    for t in 0..steps {
        if let Some(k) = strategy.owner[state] {
            let w = &union.winners[k];
            let local = w.component.states.binary_search(&state).expect("owner contains state");
            let opts = SimOptions::new(steps - t, seed);
            let stats = run_witness(&w.mdp, &w.cond, &strategy.witnesses[k], local, &opts, &mut rng);
            let satisfied = stats.meets(&w.cond, tol);
            return Episode {
                entered: Some((k, t)),
                stats: Some(stats),
                satisfied,
            };
        }
        let a = strategy.reach[state].or_else(|| m.enabled[state].first().copied()).expect("non-empty actions");
        state = sampler.successor(a, &mut rng);
    }
    Episode {
        entered: None,
        stats: None,
        satisfied: false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSummary {
    pub assumed: String,
    /// Winning components as sorted product state names.
    pub winners: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisReport {
    pub formula: String,
    pub model_states: usize,
    pub automaton_states: usize,
    pub pairs: usize,
    pub candidate_pairs: usize,
    pub product_states: usize,
    pub product_actions: usize,
    pub mecs_analysed: usize,
    pub per_pair: Vec<PairSummary>,
    pub winning_states: Vec<String>,
    pub max_probability: Rational,
    pub threshold: Rational,
    pub strict: bool,
    pub threshold_met: bool,
    /// Wall-clock time per stage; not part of the text report.
    pub timings: Vec<(&'static str, Duration)>,
}

impl SynthesisReport {
    /// Line-oriented `key: value` rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| writeln!(out, "{k}: {v}").unwrap();
        line("formula", self.formula.clone());
        line("model.states", self.model_states.to_string());
        line("automaton.states", self.automaton_states.to_string());
        line("automaton.pairs", format!("{} of {}", self.pairs, self.candidate_pairs));
        line("product.states", self.product_states.to_string());
        line("product.actions", self.product_actions.to_string());
        line("mecs.analysed", self.mecs_analysed.to_string());
        for (k, p) in self.per_pair.iter().enumerate() {
            line(&format!("pair.{k}.assumed"), p.assumed.clone());
            let comps: Vec<String> = p.winners.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
            line(&format!("pair.{k}.winning"), if comps.is_empty() { "none".into() } else { comps.join(" ") });
        }
        line("winning.states", format!("{{{}}}", self.winning_states.join(",")));
        line("max_probability", fmt_approx(&self.max_probability));
        let cmp = if self.strict { ">" } else { ">=" };
        line("threshold", format!("{cmp} {}", fmt_approx(&self.threshold)));
        line("threshold_met", self.threshold_met.to_string());
        out
    }
}

/// Everything computed on the product, kept for simulation and export.
#[derive(Clone, Debug)]
pub struct ProductAnalysis {
    pub union: WinningUnion,
    pub reach: Reachability,
    pub strategy: GlobalStrategy,
}

impl ProductAnalysis {
    pub fn probability(&self, state: usize) -> &Rational {
        &self.reach.prob[state]
    }
}

pub fn analyse_product(m: &Mdp, pairs: &[StatePair], jobs: usize, epochs: EpochPolicy) -> Result<ProductAnalysis> {
    let union = winning_union(m, pairs, jobs)?;
    let reach = max_reach(m, &union.states);
    let strategy = GlobalStrategy::new(&union, &reach, epochs);
    Ok(ProductAnalysis { union, reach, strategy })
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub report: SynthesisReport,
    pub automaton: Dgrma,
    pub product: Product,
    pub analysis: ProductAnalysis,
}

impl Synthesis {
    pub fn simulate(&self, steps: u64, seed: u64, tol: f64) -> Episode {
        simulate_global(&self.product.mdp, &self.analysis.union, &self.analysis.strategy, steps, seed, tol)
    }

    /// The product as Graphviz, with the winning union shaded.
    pub fn product_dot(&self) -> String {
        product_dot(&self.product.mdp, &self.analysis.union.states, &self.analysis.reach.prob)
    }
}

pub fn product_dot(m: &Mdp, winning: &[bool], prob: &[Rational]) -> String {
    let mut out = String::from("digraph product {\n  rankdir=LR;\n");
    for s in 0..m.num_states() {
        let style = if winning[s] { ", style=filled, fillcolor=palegreen" } else { "" };
        let shape = if s == m.initial { "doublecircle" } else { "circle" };
        writeln!(
            out,
            "  n{s} [label=\"{}\\n{}\", shape={shape}{style}];",
            m.state_names[s],
            crate::rational::fmt_exact(&prob[s])
        )
        .unwrap();
    }
    for (a, action) in m.actions.iter().enumerate() {
        if action.dist.len() == 1 {
            writeln!(out, "  n{} -> n{} [label=\"{}\"];", action.state, action.dist[0].0, action.name).unwrap();
            continue;
        }
        writeln!(out, "  a{a} [label=\"{}\", shape=point];", action.name).unwrap();
        writeln!(out, "  n{} -> a{a} [label=\"{}\", arrowhead=none];", action.state, action.name).unwrap();
        for (t, p) in &action.dist {
            writeln!(out, "  a{a} -> n{t} [label=\"{}\"];", crate::rational::fmt_exact(p)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Decides whether some strategy satisfies `phi` on `m` with probability at
/// least (or, with `strict`, above) `threshold`.
pub fn synthesize(
    m: &Mdp,
    valuation: &Valuation,
    phi: &Formula,
    threshold: &Rational,
    options: &SynthesisOptions,
) -> Result<Synthesis> {
    if !crate::rational::in_unit_interval(threshold) {
        return Err(Error::Invalid(format!("threshold {threshold} is outside [0,1]")));
    }
    let mut timings = Vec::new();
    let clock = Instant::now();
    let automaton = build_dgrma(phi, &[], &options.automaton)?;
    timings.push(("translate", clock.elapsed()));

    let clock = Instant::now();
    let product = product_mdp(m, valuation, &automaton.lts, options.max_product_states)?;
    let pairs = lift_pairs(&product, &automaton.pairs);
    timings.push(("product", clock.elapsed()));

    let clock = Instant::now();
    let analysis = analyse_product(&product.mdp, &pairs, options.automaton.jobs, options.epochs)?;
    timings.push(("analyse", clock.elapsed()));

    let names = &product.mdp.state_names;
    let mut per_pair: Vec<PairSummary> = automaton
        .pairs
        .iter()
        .map(|p| PairSummary {
            assumed: automaton.assumed_text(&p.assumed),
            winners: Vec::new(),
        })
        .collect();
    for w in &analysis.union.winners {
        let mut comp: Vec<String> = w.component.states.iter().map(|&s| names[s].clone()).collect();
        comp.sort();
        per_pair[w.pair].winners.push(comp);
    }
    per_pair.iter_mut().for_each(|p| p.winners.sort());
    let mut winning_states: Vec<String> = (0..names.len())
        .filter(|&s| analysis.union.states[s])
        .map(|s| names[s].clone())
        .collect();
    winning_states.sort();

    let max_probability = analysis.probability(product.mdp.initial).clone();
    let threshold_met = if options.strict {
        max_probability > *threshold
    } else {
        max_probability >= *threshold
    };
    let report = SynthesisReport {
        formula: phi.to_string(),
        model_states: m.num_states(),
        automaton_states: automaton.num_states(),
        pairs: automaton.pairs.len(),
        candidate_pairs: automaton.candidate_pairs,
        product_states: product.mdp.num_states(),
        product_actions: product.mdp.num_actions(),
        mecs_analysed: analysis.union.mecs_analysed,
        per_pair,
        winning_states,
        max_probability,
        threshold: threshold.clone(),
        strict: options.strict,
        threshold_met,
        timings,
    };
    Ok(Synthesis {
        report,
        automaton,
        product,
        analysis,
    })
}
