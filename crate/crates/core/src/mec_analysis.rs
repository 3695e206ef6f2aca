//! Acceptance of a strongly connected MDP under a generalized Büchi condition
//! with mean-payoff bounds, and a finite-memory witness strategy.
//!
//! The check is a single linear program over `max(n, 1)` flows, where `n` is
//! the number of `sup` bounds. Flow `i` is a stationary action frequency that
//! meets every `inf` bound and the `i`-th `sup` bound. The witness cycles
//! through the flows in epochs, visiting every Büchi set at the start of each
//! epoch.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::Cmp;
use crate::lp::{Lp, LpOutcome, Relation};
use crate::mdp::Mdp;
use crate::rational::{fmt_exact, one, to_f64, zero, Rational};

pub const DEFAULT_EPOCH_CAP: u64 = 10_000;

/// How long epoch `e` lasts given the history length `h` at its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpochSchedule {
    /// `2^h`.
    Doubling,
    /// `max(2, k * h)`: each epoch outweighs the history before it by a
    /// factor `k`, so every mode gets a dominating epoch within a short run.
    Geometric(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpochPolicy {
    pub schedule: EpochSchedule,
    /// Longest epoch; `u64::MAX` disables the cap.
    pub cap: u64,
}

impl Default for EpochPolicy {
    fn default() -> Self {
        EpochPolicy {
            schedule: EpochSchedule::Doubling,
            cap: DEFAULT_EPOCH_CAP,
        }
    }
}

impl EpochPolicy {
    pub fn length(&self, history: u64) -> u64 {
        let raw = match self.schedule {
            EpochSchedule::Doubling if history >= 63 => u64::MAX,
            EpochSchedule::Doubling => 1u64 << history,
            EpochSchedule::Geometric(k) => k.saturating_mul(history).max(2),
        };
        raw.min(self.cap).max(1)
    }
}

/// `reward` averaged along a run must compare to `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpBound {
    /// One reward per state.
    pub reward: Vec<Rational>,
    pub cmp: Cmp,
    pub bound: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GbmpCondition {
    /// Büchi sets over states; each must be visited infinitely often.
    pub infs: Vec<Vec<bool>>,
    /// Bounds on the lim inf of the average reward.
    pub mp_inf: Vec<MpBound>,
    /// Bounds on the lim sup of the average reward.
    pub mp_sup: Vec<MpBound>,
}

impl GbmpCondition {
    pub fn has_strict(&self) -> bool {
        self.mp_inf.iter().chain(&self.mp_sup).any(|b| b.cmp == Cmp::Gt)
    }
}

/// The flow program of a strongly connected MDP.
#[derive(Clone, Debug)]
pub struct FlowLp {
    pub lp: Lp,
    pub flows: usize,
    pub num_actions: usize,
    /// Index of the shared slack variable used for strict bounds.
    pub slack: Option<usize>,
}

impl FlowLp {
    pub fn var(&self, flow: usize, action: usize) -> usize {
        flow * self.num_actions + action
    }
}

pub fn build_flow_lp(c: &Mdp, cond: &GbmpCondition) -> FlowLp {
    let flows = cond.mp_sup.len().max(1);
    let na = c.num_actions();
    let slack = cond.has_strict().then_some(flows * na);
    let mut lp = Lp::new(flows * na + usize::from(slack.is_some()));
    let var = |i: usize, a: usize| i * na + a;

    let bound_row = |lp: &mut Lp, i: usize, b: &MpBound| {
        let mut coeffs: Vec<(usize, Rational)> = (0..na)
            .filter(|&a| !b.reward[c.actions[a].state].is_zero())
            .map(|a| (var(i, a), b.reward[c.actions[a].state].clone()))
            .collect();
        if b.cmp == Cmp::Gt {
            coeffs.push((slack.unwrap(), -one()));
        }
        lp.add(coeffs, Relation::Ge, b.bound.clone());
    };

    for i in 0..flows {
        lp.add((0..na).map(|a| (var(i, a), one())).collect(), Relation::Eq, one());
        for s in 0..c.num_states() {
            // inflow minus outflow
            let mut coeffs: Vec<Rational> = vec![zero(); na];
            for (a, action) in c.actions.iter().enumerate() {
                for (t, p) in &action.dist {
                    if *t == s {
                        coeffs[a] += p;
                    }
                }
            }
            for &a in &c.enabled[s] {
                coeffs[a] -= one();
            }
            let row: Vec<_> = coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(a, v)| (var(i, a), v))
                .collect();
            if !row.is_empty() {
                lp.add(row, Relation::Eq, zero());
            }
        }
        for b in &cond.mp_inf {
            bound_row(&mut lp, i, b);
        }
        if let Some(b) = cond.mp_sup.get(i) {
            bound_row(&mut lp, i, b);
        }
    }
    if let Some(t) = slack {
        lp.add(vec![(t, one())], Relation::Le, one());
        lp.objective = vec![(t, one())];
    }
    FlowLp {
        lp,
        flows,
        num_actions: na,
        slack,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowSolution {
    /// `flows[i][a]`: frequency of action `a` in flow `i`; each flow sums to 1.
    pub flows: Vec<Vec<Rational>>,
    pub slack: Option<Rational>,
}

/// Solves the flow program. `None` when infeasible, or when strict bounds
/// cannot be met with positive slack.
pub fn solve_flow_lp(sys: &FlowLp) -> Result<Option<FlowSolution>> {
    match sys.lp.solve() {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Lp("flow program reported unbounded".into())),
        LpOutcome::Optimal { x, .. } => {
            if !sys.lp.satisfied_by(&x) {
                return Err(Error::Lp("solution fails the exact re-check".into()));
            }
            let slack = sys.slack.map(|t| x[t].clone());
            if slack.as_ref().is_some_and(|t| !t.is_positive()) {
                return Ok(None);
            }
            let flows = (0..sys.flows)
                .map(|i| (0..sys.num_actions).map(|a| x[sys.var(i, a)].clone()).collect())
                .collect();
            Ok(Some(FlowSolution { flows, slack }))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MecVerdict {
    Accepting(FlowSolution),
    /// The Büchi set with this index misses the component.
    MissesInf(usize),
    Infeasible,
}

impl MecVerdict {
    pub fn is_accepting(&self) -> bool {
        matches!(self, MecVerdict::Accepting(_))
    }
}

/// Decides whether almost all runs of the strongly connected `c` can satisfy
/// `cond` under some strategy.
pub fn analyse_mec(c: &Mdp, cond: &GbmpCondition) -> Result<MecVerdict> {
    if let Some(j) = cond.infs.iter().position(|set| !set.iter().any(|&b| b)) {
        return Ok(MecVerdict::MissesInf(j));
    }
    Ok(match solve_flow_lp(&build_flow_lp(c, cond))? {
        Some(sol) => MecVerdict::Accepting(sol),
        None => MecVerdict::Infeasible,
    })
}

/// Readable dump of the flow program.
pub fn flow_lp_text(c: &Mdp, sys: &FlowLp) -> String {
    let name = |v: usize| -> String {
        if Some(v) == sys.slack {
            return "t".into();
        }
        let (i, a) = (v / sys.num_actions, v % sys.num_actions);
        format!("x{}[{}:{}]", i, c.state_names[c.actions[a].state], c.actions[a].name)
    };
    let mut out = String::new();
    match sys.slack {
        Some(t) => writeln!(out, "maximize {}", name(t)).unwrap(),
        None => writeln!(out, "feasibility").unwrap(),
    }
    for (k, row) in sys.lp.constraints.iter().enumerate() {
        let mut lhs = String::new();
        for (j, (v, coef)) in row.coeffs.iter().enumerate() {
            let sign = if coef.is_negative() { "-" } else if j > 0 { "+" } else { "" };
            let mag = coef.abs();
            let sep = if j > 0 { " " } else { "" };
            if mag.is_one() {
                write!(lhs, "{sep}{sign}{}", name(*v)).unwrap();
            } else {
                write!(lhs, "{sep}{sign}{} {}", fmt_exact(&mag), name(*v)).unwrap();
            }
        }
        writeln!(out, "c{k}: {lhs} {} {}", row.rel.symbol(), fmt_exact(&row.rhs)).unwrap();
    }
    out
}

/// A closed recurrent class of one flow, played with the memoryless
/// randomized choice the flow induces.
#[derive(Clone, Debug)]
pub struct ClassPlan {
    /// Share of the flow carried by this class.
    pub weight: Rational,
    pub states: Vec<bool>,
    /// Per state, the actions with their probabilities; empty outside.
    pub choice: Vec<Vec<(usize, Rational)>>,
    cumulative: Vec<Vec<(usize, f64)>>,
    attractor: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct Mode {
    pub classes: Vec<ClassPlan>,
}

/// Finite-memory strategy for a strongly connected MDP.
#[derive(Clone, Debug)]
pub struct WitnessStrategy {
    pub modes: Vec<Mode>,
    pub inf_targets: Vec<Vec<bool>>,
    inf_attractors: Vec<Vec<Option<usize>>>,
    pub epochs: EpochPolicy,
}

fn recurrent_classes(c: &Mdp, flow: &[Rational]) -> Vec<ClassPlan> {
    let n = c.num_states();
    let out: Vec<Rational> = (0..n)
        .map(|s| c.enabled[s].iter().map(|&a| flow[a].clone()).sum())
        .collect();
    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..n).map(|s| graph.add_node(s)).collect();
    for (a, action) in c.actions.iter().enumerate() {
        if flow[a].is_positive() {
            for (t, _) in &action.dist {
                graph.add_edge(nodes[action.state], nodes[*t], ());
            }
        }
    }
    let all_actions = vec![true; c.num_actions()];
    let mut classes: Vec<ClassPlan> = tarjan_scc(&graph)
        .into_iter()
        .filter(|scc| out[graph[scc[0]]].is_positive())
        .map(|scc| {
            let mut states = vec![false; n];
            for node in &scc {
                states[graph[*node]] = true;
            }
            let mut choice = vec![Vec::new(); n];
            let mut weight = zero();
            for s in (0..n).filter(|&s| states[s]) {
                weight += &out[s];
                choice[s] = c.enabled[s]
                    .iter()
                    .filter(|&&a| flow[a].is_positive())
                    .map(|&a| (a, &flow[a] / &out[s]))
                    .collect();
            }
            let cumulative = choice
                .iter()
                .map(|opts| {
                    let mut acc = 0.0;
                    opts.iter()
                        .map(|(a, p)| {
                            acc += to_f64(p);
                            (*a, acc)
                        })
                        .collect()
                })
                .collect();
            let attractor = c.attractor(&states, &all_actions);
            ClassPlan {
                weight,
                states,
                choice,
                cumulative,
                attractor,
            }
        })
        .collect();
    classes.sort_by_key(|k| k.states.iter().position(|&b| b));
    classes
}

pub fn build_witness(c: &Mdp, cond: &GbmpCondition, sol: &FlowSolution, epochs: EpochPolicy) -> WitnessStrategy {
    let all_actions = vec![true; c.num_actions()];
    WitnessStrategy {
        modes: sol
            .flows
            .iter()
            .map(|f| Mode {
                classes: recurrent_classes(c, f),
            })
            .collect(),
        inf_targets: cond.infs.clone(),
        inf_attractors: cond.infs.iter().map(|set| c.attractor(set, &all_actions)).collect(),
        epochs,
    }
}

#[derive(Clone, Copy, Debug)]
enum Phase {
    Visit(usize),
    Enter(usize),
    Play { class: usize, left: u64 },
}

fn sample(cumulative: &[(usize, f64)], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen::<f64>() * cumulative.last().map_or(1.0, |x| x.1);
    cumulative.iter().find(|(_, c)| u < *c).unwrap_or(cumulative.last().unwrap()).0
}

/// Splits `total` among `weights` by largest remainders.
fn apportion(weights: &[Rational], total: u64) -> Vec<u64> {
    let total_r = Rational::from_integer(total.into());
    let shares: Vec<Rational> = weights.iter().map(|w| w * &total_r).collect();
    let mut parts: Vec<u64> = shares.iter().map(|s| s.floor().to_integer().try_into().unwrap_or(0)).collect();
    let mut left = total - parts.iter().sum::<u64>().min(total);
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| shares[b].fract().cmp(&shares[a].fract()).then(a.cmp(&b)));
    for &k in order.iter().cycle().take(weights.len() * 2) {
        if left == 0 {
            break;
        }
        parts[k] += 1;
        left -= 1;
    }
    parts
}

/// Memory of a running witness strategy.
#[derive(Clone, Debug)]
pub struct WitnessRunner<'a> {
    strategy: &'a WitnessStrategy,
    history: u64,
    mode: usize,
    budget: u64,
    phases: VecDeque<Phase>,
    started: bool,
    visited: Vec<bool>,
    /// For each finished or running epoch, whether every Büchi set was seen.
    pub epoch_log: Vec<bool>,
}

impl<'a> WitnessRunner<'a> {
    pub fn new(strategy: &'a WitnessStrategy) -> Self {
        WitnessRunner {
            strategy,
            history: 0,
            mode: 0,
            budget: 0,
            phases: VecDeque::new(),
            started: false,
            visited: vec![false; strategy.inf_targets.len()],
            epoch_log: Vec::new(),
        }
    }

    pub fn mode(&self) -> usize {
        self.mode
    }

    fn start_epoch(&mut self) {
        if self.started {
            self.mode = (self.mode + 1) % self.strategy.modes.len();
        }
        self.started = true;
        self.budget = self.strategy.epochs.length(self.history);
        self.visited.iter_mut().for_each(|v| *v = false);
        self.epoch_log.push(self.visited.is_empty());
        self.phases.extend((0..self.strategy.inf_targets.len()).map(Phase::Visit));
    }

    fn start_round(&mut self) {
        let round = (2 * self.history.isqrt()).max(32).min(self.budget);
        self.budget -= round;
        let classes = &self.strategy.modes[self.mode].classes;
        let weights: Vec<Rational> = classes.iter().map(|k| k.weight.clone()).collect();
        for (class, left) in apportion(&weights, round).into_iter().enumerate() {
            if left > 0 {
                self.phases.push_back(Phase::Enter(class));
                self.phases.push_back(Phase::Play { class, left });
            }
        }
    }

    fn mark_visits(&mut self, state: usize) {
        for (j, set) in self.strategy.inf_targets.iter().enumerate() {
            if set[state] && !self.visited[j] {
                self.visited[j] = true;
                if self.visited.iter().all(|&v| v) {
                    *self.epoch_log.last_mut().unwrap() = true;
                }
            }
        }
    }

    /// Chooses the action to play in `state` and advances the memory.
    pub fn next_action(&mut self, state: usize, rng: &mut impl Rng) -> usize {
        if !self.started {
            self.start_epoch();
        }
        self.mark_visits(state);
        loop {
            match self.phases.front().copied() {
                None if self.budget > 0 => self.start_round(),
                None => {
                    self.start_epoch();
                    self.mark_visits(state);
                }
                Some(Phase::Visit(j)) => {
                    if self.strategy.inf_targets[j][state] {
                        self.phases.pop_front();
                    } else {
                        self.history += 1;
                        return self.strategy.inf_attractors[j][state].expect("Büchi set reachable inside the component");
                    }
                }
                Some(Phase::Enter(k)) => {
                    let class = &self.strategy.modes[self.mode].classes[k];
                    if class.states[state] {
                        self.phases.pop_front();
                    } else {
                        self.history += 1;
                        return class.attractor[state].expect("class reachable inside the component");
                    }
                }
                Some(Phase::Play { class, left }) => {
                    let plan = &self.strategy.modes[self.mode].classes[class];
                    if left == 0 {
                        self.phases.pop_front();
                    } else if !plan.states[state] {
                        self.phases.push_front(Phase::Enter(class));
                    } else {
                        self.phases[0] = Phase::Play { class, left: left - 1 };
                        self.history += 1;
                        return sample(&plan.cumulative[state], rng);
                    }
                }
            }
        }
    }
}

/// Successor sampler with precomputed cumulative distributions.
#[derive(Clone, Debug)]
pub struct Sampler {
    cumulative: Vec<Vec<(usize, f64)>>,
}

impl Sampler {
    pub fn new(m: &Mdp) -> Self {
        Sampler {
            cumulative: m
                .actions
                .iter()
                .map(|a| {
                    let mut acc = 0.0;
                    a.dist
                        .iter()
                        .map(|(t, p)| {
                            acc += to_f64(p);
                            (*t, acc)
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn successor(&self, action: usize, rng: &mut impl Rng) -> usize {
        sample(&self.cumulative[action], rng)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimOptions {
    pub steps: u64,
    pub seed: u64,
    /// First step at which running averages count towards `sup` bounds.
    pub sup_from: u64,
    /// First step at which running averages count towards `inf` bounds.
    pub inf_from: u64,
}

impl SimOptions {
    /// Defaults: sup bounds checked after the first 1%, inf bounds on the
    /// final 80% of the run.
    pub fn new(steps: u64, seed: u64) -> Self {
        SimOptions {
            steps,
            seed,
            sup_from: steps / 100,
            inf_from: steps / 5,
        }
    }
}

/// Empirical behaviour of a simulated run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimStats {
    pub steps: u64,
    pub action_counts: Vec<u64>,
    /// Per `inf` bound, the least running average seen in its window.
    pub inf_min: Vec<f64>,
    /// Per `sup` bound, the largest running average seen in its window.
    pub sup_max: Vec<f64>,
    /// Epochs started, not counting a final one still on its way to the Büchi sets.
    pub epochs: usize,
    pub epochs_visiting_all: usize,
}

impl SimStats {
    /// Whether every bound holds up to `tol` and every epoch visited every
    /// Büchi set.
    pub fn meets(&self, cond: &GbmpCondition, tol: f64) -> bool {
        let inf_ok = cond.mp_inf.iter().zip(&self.inf_min).all(|(b, v)| *v >= to_f64(&b.bound) - tol);
        let sup_ok = cond.mp_sup.iter().zip(&self.sup_max).all(|(b, v)| *v >= to_f64(&b.bound) - tol);
        inf_ok && sup_ok && self.epochs == self.epochs_visiting_all
    }
}

/// Tracks running averages of several rewards.
#[derive(Clone, Debug)]
struct Averages {
    sums: Vec<f64>,
    extreme: Vec<f64>,
    take_max: bool,
}

impl Averages {
    fn new(count: usize, take_max: bool) -> Self {
        let init = if take_max { f64::NEG_INFINITY } else { f64::INFINITY };
        Averages {
            sums: vec![0.0; count],
            extreme: vec![init; count],
            take_max,
        }
    }

    fn push(&mut self, rewards: impl Iterator<Item = f64>, t: u64, counted: bool) {
        for (k, r) in rewards.enumerate() {
            self.sums[k] += r;
            if counted {
                let avg = self.sums[k] / (t + 1) as f64;
                let e = &mut self.extreme[k];
                *e = if self.take_max { e.max(avg) } else { e.min(avg) };
            }
        }
    }
}

/// Runs the witness strategy from the initial state of `c`.
pub fn simulate_witness(c: &Mdp, cond: &GbmpCondition, strategy: &WitnessStrategy, opts: SimOptions) -> SimStats {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    run_witness(c, cond, strategy, c.initial, &opts, &mut rng)
}

/// Runs the witness strategy from `start` for `opts.steps` steps, drawing
/// from `rng`; the seed in `opts` is ignored.
pub fn run_witness(
    c: &Mdp,
    cond: &GbmpCondition,
    strategy: &WitnessStrategy,
    start: usize,
    opts: &SimOptions,
    rng: &mut ChaCha8Rng,
) -> SimStats {
    let sampler = Sampler::new(c);
    let inf_rewards: Vec<Vec<f64>> = cond.mp_inf.iter().map(|b| b.reward.iter().map(to_f64).collect()).collect();
    let sup_rewards: Vec<Vec<f64>> = cond.mp_sup.iter().map(|b| b.reward.iter().map(to_f64).collect()).collect();
    let mut inf = Averages::new(inf_rewards.len(), false);
    let mut sup = Averages::new(sup_rewards.len(), true);
    let mut runner = WitnessRunner::new(strategy);
    let mut action_counts = vec![0; c.num_actions()];
    let mut state = start;
    for t in 0..opts.steps {
        inf.push(inf_rewards.iter().map(|r| r[state]), t, t >= opts.inf_from);
        sup.push(sup_rewards.iter().map(|r| r[state]), t, t >= opts.sup_from);
        let a = runner.next_action(state, rng);
        action_counts[a] += 1;
        state = sampler.successor(a, rng);
    }
    // the running epoch is only counted once its pilgrimage is done
    let mut log = runner.epoch_log;
    if log.last() == Some(&false) {
        log.pop();
    }
    SimStats {
        steps: opts.steps,
        action_counts,
        inf_min: inf.extreme,
        sup_max: sup.extreme,
        epochs: log.len(),
        epochs_visiting_all: log.iter().filter(|&&b| b).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::parse_mdp;
    use crate::rational::{int, ratio};

    fn bound(reward: Vec<Rational>, cmp: Cmp, bound: Rational) -> MpBound {
        MpBound { reward, cmp, bound }
    }

    fn self_loop() -> Mdp {
        parse_mdp("mdp\nstates s\ninit s\naction s a : s 1\n").unwrap().0
    }

    fn two_loops() -> Mdp {
        // either stay in s0 (reward 1) or in s1 (reward 0), free to switch
        parse_mdp(
            "mdp\nstates s0 s1\ninit s0\n\
             action s0 stay : s0 1\naction s0 go : s1 1\n\
             action s1 stay : s1 1\naction s1 go : s0 1\n",
        )
        .unwrap()
        .0
    }

    #[test]
    fn self_loop_reward_one() {
        let c = self_loop();
        let ok = GbmpCondition {
            mp_inf: vec![bound(vec![int(1)], Cmp::Geq, int(1))],
            ..Default::default()
        };
        assert!(analyse_mec(&c, &ok).unwrap().is_accepting());
        let too_high = GbmpCondition {
            mp_inf: vec![bound(vec![int(1)], Cmp::Geq, int(2))],
            ..Default::default()
        };
        assert_eq!(analyse_mec(&c, &too_high).unwrap(), MecVerdict::Infeasible);
        let strict = GbmpCondition {
            mp_inf: vec![bound(vec![int(1)], Cmp::Gt, int(1))],
            ..Default::default()
        };
        assert_eq!(analyse_mec(&c, &strict).unwrap(), MecVerdict::Infeasible);
    }

    #[test]
    fn sup_bounds_share_time() {
        let c = two_loops();
        let in_s0 = vec![int(1), int(0)];
        let in_s1 = vec![int(0), int(1)];
        // both halves at least half the time on average: a single flow works
        let inf = GbmpCondition {
            mp_inf: vec![
                bound(in_s0.clone(), Cmp::Geq, ratio(1, 2)),
                bound(in_s1.clone(), Cmp::Geq, ratio(1, 2)),
            ],
            ..Default::default()
        };
        let MecVerdict::Accepting(sol) = analyse_mec(&c, &inf).unwrap() else { panic!() };
        assert_eq!(sol.flows.len(), 1);
        let strict = GbmpCondition {
            mp_inf: vec![
                bound(in_s0.clone(), Cmp::Gt, ratio(1, 2)),
                bound(in_s1.clone(), Cmp::Geq, ratio(1, 2)),
            ],
            ..Default::default()
        };
        assert!(!analyse_mec(&c, &strict).unwrap().is_accepting());
        // lim sup of both can be 1 at once with two flows
        let sup = GbmpCondition {
            mp_sup: vec![bound(in_s0, Cmp::Geq, int(1)), bound(in_s1, Cmp::Geq, int(1))],
            ..Default::default()
        };
        let MecVerdict::Accepting(sol) = analyse_mec(&c, &sup).unwrap() else { panic!() };
        assert_eq!(sol.flows.len(), 2);
        let opts = SimOptions::new(100_000, 7);
        let policy = EpochPolicy {
            schedule: EpochSchedule::Geometric(32),
            cap: u64::MAX,
        };
        let w = build_witness(&c, &sup, &sol, policy);
        let stats = simulate_witness(&c, &sup, &w, opts);
        assert!(stats.meets(&sup, 0.05), "{stats:?}");
    }

    fn cycle_with_loop() -> Mdp {
        // s -> t, t -> s or t -> t
        parse_mdp(
            "mdp\nstates s t\ninit s\n\
             action s go : t 1\naction t back : s 1\naction t stay : t 1\n",
        )
        .unwrap()
        .0
    }

    #[test]
    fn alternating_cycle_meets_half() {
        let c = cycle_with_loop();
        let cond = GbmpCondition {
            infs: vec![vec![false, true]],
            mp_sup: vec![bound(vec![int(1), int(0)], Cmp::Geq, ratio(1, 2))],
            ..Default::default()
        };
        let MecVerdict::Accepting(sol) = analyse_mec(&c, &cond).unwrap() else { panic!() };
        assert_eq!(sol.flows, vec![vec![ratio(1, 2), ratio(1, 2), zero()]]);
        let w = build_witness(&c, &cond, &sol, EpochPolicy::default());
        assert_eq!(w.modes.len(), 1);
        assert_eq!(w.modes[0].classes.len(), 1);
        assert_eq!(w.modes[0].classes[0].choice[1], vec![(1, one())]);
        let stats = simulate_witness(&c, &cond, &w, SimOptions::new(100_000, 11));
        assert_eq!(stats.action_counts[2], 0);
        let avg = stats.action_counts[0] as f64 / stats.steps as f64;
        assert!((avg - 0.5).abs() < 0.05);
        assert!(stats.meets(&cond, 0.05));
        assert_eq!(stats, simulate_witness(&c, &cond, &w, SimOptions::new(100_000, 11)));
    }

    #[test]
    fn buchi_set_outside_fails() {
        let c = self_loop();
        let cond = GbmpCondition {
            infs: vec![vec![true], vec![false]],
            ..Default::default()
        };
        assert_eq!(analyse_mec(&c, &cond).unwrap(), MecVerdict::MissesInf(1));
    }

    #[test]
    fn witness_visits_buchi_sets_and_mixes_classes() {
        let c = two_loops();
        let cond = GbmpCondition {
            infs: vec![vec![false, true]],
            mp_inf: vec![bound(vec![int(1), int(0)], Cmp::Geq, ratio(3, 4))],
            ..Default::default()
        };
        let MecVerdict::Accepting(sol) = analyse_mec(&c, &cond).unwrap() else { panic!() };
        let w = build_witness(&c, &cond, &sol, EpochPolicy::default());
        let stats = simulate_witness(&c, &cond, &w, SimOptions::new(50_000, 3));
        assert!(stats.meets(&cond, 0.05), "{stats:?}");
        assert!(stats.epochs > 3);
    }

    #[test]
    fn lp_text_names_variables() {
        let c = self_loop();
        let cond = GbmpCondition {
            mp_inf: vec![bound(vec![int(1)], Cmp::Gt, ratio(1, 2))],
            ..Default::default()
        };
        let text = flow_lp_text(&c, &build_flow_lp(&c, &cond));
        assert!(text.starts_with("maximize t\n"));
        assert!(text.contains("c0: x0[s:a] = 1"));
        assert!(text.contains("x0[s:a] -t >= 1/2"));
    }

    #[test]
    fn apportion_is_exact() {
        let w = vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)];
        assert_eq!(apportion(&w, 10).iter().sum::<u64>(), 10);
        assert_eq!(apportion(&[one()], 1), vec![1]);
        assert_eq!(apportion(&[ratio(1, 10), ratio(9, 10)], 1), vec![0, 1]);
    }
}
