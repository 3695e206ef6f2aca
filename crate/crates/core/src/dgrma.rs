//! Deterministic generalized Rabin mean-payoff automata: the product of the
//! master with one slave automaton per recurrent subformula, and one
//! acceptance pair per guessed set of eventually-always-true subformulas.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::boolfn::{BoolFn, NbId};
use crate::calculus::{NbNode, RecKind, Universe};
use crate::error::{Error, Result};
use crate::formula::{in_fragment, FreqBound, Formula};
use crate::lasso::Lasso;
use crate::lts::{explore, Alphabet, Lts};
use crate::master::{build_master, DEFAULT_STATE_CAP};
use crate::rational::{fmt_exact, Rational};
use crate::slave::{
    build_count_lts, build_slave_lts, build_token_lts, buchi_accepting_sets, cobuchi_rejecting_sets,
    mp_reward, SlaveLts, TokenCount, TokenSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DgrmaOptions {
    /// Cap on the states of every constructed system.
    pub max_states: usize,
    /// Worker threads for pair construction.
    pub jobs: usize,
}

impl Default for DgrmaOptions {
    fn default() -> Self {
        DgrmaOptions {
            max_states: DEFAULT_STATE_CAP,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SlaveAutomaton {
    Tokens(Lts<TokenSet>),
    Counts(Lts<TokenCount>),
}

impl SlaveAutomaton {
    fn successor(&self, q: usize, letter: u32) -> usize {
        match self {
            SlaveAutomaton::Tokens(l) => l.successor(q, letter),
            SlaveAutomaton::Counts(l) => l.successor(q, letter),
        }
        .expect("slave automata are total")
    }

    pub fn num_states(&self) -> usize {
        match self {
            SlaveAutomaton::Tokens(l) => l.num_states(),
            SlaveAutomaton::Counts(l) => l.num_states(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecMember {
    pub id: NbId,
    pub kind: RecKind,
    pub slave: SlaveLts,
    pub automaton: SlaveAutomaton,
}

/// `lr_ext(reward) cmp p` over the run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpAtom {
    pub bound: FreqBound,
    pub reward: Vec<u32>,
}

/// `Fin(fin) ∧ ⋀ Inf(infs) ∧ ⋀ mps`, with state sets as indicator vectors
/// over automaton states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrmpPair {
    pub assumed: Vec<NbId>,
    pub fin: Vec<bool>,
    pub infs: Vec<Vec<bool>>,
    pub mps: Vec<MpAtom>,
}

impl GrmpPair {
    /// Whether a run whose recurrent part is `cycle` satisfies this pair.
    pub fn accepts_cycle(&self, cycle: &[usize]) -> bool {
        if cycle.iter().any(|&q| self.fin[q]) {
            return false;
        }
        if !self.infs.iter().all(|set| cycle.iter().any(|&q| set[q])) {
            return false;
        }
        self.mps.iter().all(|mp| {
            let total: u64 = cycle.iter().map(|&q| mp.reward[q] as u64).sum();
            let avg = Rational::new(total.into(), (cycle.len() as u64).into());
            mp.bound.cmp.holds(&avg, &mp.bound.p)
        })
    }
}

#[derive(Clone, Debug)]
pub struct Dgrma {
    pub universe: Universe,
    pub formula: BoolFn,
    pub master: Lts<BoolFn>,
    pub rec: Vec<RecMember>,
    /// States are `[master, slave_1, ..., slave_k]` component indices.
    pub lts: Lts<Vec<u32>>,
    pub pairs: Vec<GrmpPair>,
    /// Number of pairs before unsatisfiable ones were dropped.
    pub candidate_pairs: usize,
}

/// Recurrent subformulas reachable from `f`, outermost first.
pub fn rec_set(universe: &Universe, f: &BoolFn) -> Vec<NbId> {
    fn visit(u: &Universe, v: NbId, seen: &mut Vec<NbId>, out: &mut Vec<NbId>) {
        if seen.contains(&v) {
            return;
        }
        seen.push(v);
        if u.rec_kind(v).is_some() {
            out.push(v);
        }
        let children: Vec<NbId> = match u.node(v) {
            NbNode::Lit { .. } => Vec::new(),
            NbNode::Next(g) | NbNode::Finally(g) | NbNode::Globally(g) | NbNode::Freq(_, g) => g.vars(),
            NbNode::Until(l, r) => {
                let mut c = l.vars();
                c.extend(r.vars());
                c
            }
        };
        for c in children {
            visit(u, c, seen, out);
        }
    }
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for v in f.vars() {
        visit(universe, v, &mut seen, &mut out);
    }
    out
}

pub fn build_dgrma(phi: &Formula, extra_atoms: &[String], options: &DgrmaOptions) -> Result<Dgrma> {
    if !in_fragment(phi) {
        return Err(Error::NotInFragment(phi.to_string()));
    }
    let mut atoms = phi.atoms();
    atoms.extend(extra_atoms.iter().cloned());
    let alphabet = Alphabet::new(atoms)?;
    let mut universe = Universe::new(alphabet.clone());
    let formula = universe.encode(phi)?;
    let cap = options.max_states;
    let master = build_master(&mut universe, &formula, cap)?;

    let mut rec = Vec::new();
    for id in rec_set(&universe, &formula) {
        let kind = universe.rec_kind(id).expect("recurrent member");
        let operand = universe.rec_operand(id).expect("recurrent member").clone();
        let slave = build_slave_lts(&universe, &operand, cap)?;
        let automaton = match kind {
            RecKind::Finally | RecKind::Globally => SlaveAutomaton::Tokens(build_token_lts(&slave, cap)?),
            RecKind::Freq => SlaveAutomaton::Counts(build_count_lts(&slave, cap)?),
        };
        rec.push(RecMember {
            id,
            kind,
            slave,
            automaton,
        });
    }

    let init: Vec<u32> = std::iter::once(master.initial as u32)
        .chain(rec.iter().map(|_| 0))
        .collect();
    let lts = explore(&alphabet, init, cap, "automaton", |state, letter| {
        let mut next = Vec::with_capacity(state.len());
        next.push(master.successor(state[0] as usize, letter).expect("master is total") as u32);
        for (member, &q) in rec.iter().zip(&state[1..]) {
            next.push(member.automaton.successor(q as usize, letter) as u32);
        }
        Ok(Some(next))
    })?;

    let mut dgrma = Dgrma {
        universe,
        formula,
        master,
        rec,
        lts,
        pairs: Vec::new(),
        candidate_pairs: 0,
    };
    let subsets: Vec<u64> = (0..1u64 << dgrma.rec.len()).collect();
    dgrma.candidate_pairs = subsets.len();
    let build = |mask: &u64| dgrma.build_pair(*mask);
    let pairs: Vec<Option<GrmpPair>> = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))?;
        pool.install(|| subsets.par_iter().map(build).collect())
    } else {
        subsets.iter().map(build).collect()
    };
    dgrma.pairs = pairs.into_iter().flatten().collect();
    Ok(dgrma)
}

impl Dgrma {
    pub fn alphabet(&self) -> &Alphabet {
        &self.lts.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.lts.num_states()
    }

    pub fn rec_formulas(&self) -> Vec<Formula> {
        self.rec.iter().map(|m| self.universe.formula_of(m.id)).collect()
    }

    /// The pair for assumption set `mask` (bit i = i-th recurrent member), or
    /// `None` when it cannot be satisfied by any run.
    fn build_pair(&self, mask: u64) -> Option<GrmpPair> {
        let in_r = |i: usize| mask >> i & 1 == 1;
        let assumed: Vec<NbId> = (0..self.rec.len()).filter(|&i| in_r(i)).map(|i| self.rec[i].id).collect();
        let removed: Vec<NbId> = (0..self.rec.len()).filter(|&i| !in_r(i)).map(|i| self.rec[i].id).collect();
        let n = self.num_states();

        // Conjunction of the tokens of every assumed G member, per token set,
        // with assumptions set to tt and the rest to ff.
        let mut g_members = Vec::new();
        let mut fin = vec![false; n];
        for (i, member) in self.rec.iter().enumerate() {
            if !(in_r(i) && member.kind == RecKind::Globally) {
                continue;
            }
            let SlaveAutomaton::Tokens(tokens) = &member.automaton else {
                unreachable!()
            };
            let conj: Vec<BoolFn> = tokens
                .states
                .iter()
                .map(|set| {
                    let parts: Vec<BoolFn> = set
                        .iter()
                        .map(|&q| {
                            member
                                .slave
                                .state(q as usize)
                                .assign(|v| assumed.contains(&v), true)
                                .assign(|v| removed.contains(&v), false)
                        })
                        .collect();
                    BoolFn::and_all(&parts)
                })
                .collect();
            let rejecting = cobuchi_rejecting_sets(&member.slave, tokens, &assumed);
            for (q, state) in self.lts.states.iter().enumerate() {
                fin[q] |= rejecting[state[i + 1] as usize];
            }
            g_members.push((i, conj));
        }

        let goals: Vec<BoolFn> = self
            .master
            .states
            .iter()
            .map(|psi| psi.assign(|v| assumed.contains(&v), true))
            .collect();
        let mut cache: HashMap<Vec<u32>, bool> = HashMap::new();
        for (q, state) in self.lts.states.iter().enumerate() {
            if fin[q] {
                continue;
            }
            let key: Vec<u32> = std::iter::once(state[0])
                .chain(g_members.iter().map(|(i, _)| state[i + 1]))
                .collect();
            let proved = *cache.entry(key).or_insert_with(|| {
                let parts: Vec<&BoolFn> = g_members
                    .iter()
                    .map(|(i, conj)| &conj[state[i + 1] as usize])
                    .collect();
                BoolFn::and_all(parts).entails(&goals[state[0] as usize])
            });
            fin[q] = !proved;
        }
        if fin.iter().all(|&b| b) {
            return None;
        }

        let mut infs = Vec::new();
        let mut mps = Vec::new();
        for (i, member) in self.rec.iter().enumerate() {
            if !in_r(i) {
                continue;
            }
            match (&member.kind, &member.automaton) {
                (RecKind::Finally, SlaveAutomaton::Tokens(tokens)) => {
                    let good = buchi_accepting_sets(&member.slave, tokens, &assumed);
                    let lifted: Vec<bool> = self.lts.states.iter().map(|s| good[s[i + 1] as usize]).collect();
                    if !lifted.iter().any(|&b| b) {
                        return None;
                    }
                    infs.push(lifted);
                }
                (RecKind::Freq, SlaveAutomaton::Counts(counts)) => {
                    let NbNode::Freq(bound, _) = self.universe.node(member.id) else {
                        unreachable!()
                    };
                    let reward = mp_reward(&member.slave, counts, &assumed);
                    mps.push(MpAtom {
                        bound: bound.clone(),
                        reward: self.lts.states.iter().map(|s| reward[s[i + 1] as usize]).collect(),
                    });
                }
                _ => {}
            }
        }
        Some(GrmpPair {
            assumed,
            fin,
            infs,
            mps,
        })
    }

    /// Automaton states visited infinitely often on the lasso, in run order.
    pub fn recurrent_states(&self, w: &Lasso) -> Vec<usize> {
        let ab = self.alphabet();
        let mut q = self.lts.initial;
        for letter in &w.stem {
            q = self.lts.successor(q, ab.letter_of(letter)).expect("total");
        }
        let period = w.cycle.len();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut trace = Vec::new();
        let mut pos = 0;
        loop {
            if let Some(&start) = seen.get(&(pos, q)) {
                return trace[start..].to_vec();
            }
            seen.insert((pos, q), trace.len());
            trace.push(q);
            q = self.lts.successor(q, ab.letter_of(&w.cycle[pos])).expect("total");
            pos = (pos + 1) % period;
        }
    }

    pub fn accepts_lasso(&self, w: &Lasso) -> bool {
        let cycle = self.recurrent_states(w);
        self.pairs.iter().any(|p| p.accepts_cycle(&cycle))
    }

    pub fn state_label(&self, q: usize) -> String {
        let state = &self.lts.states[q];
        let mut parts = vec![self.universe.show(&self.master.states[state[0] as usize])];
        for (member, &s) in self.rec.iter().zip(&state[1..]) {
            let slave = &member.slave;
            let text = match &member.automaton {
                SlaveAutomaton::Tokens(l) => {
                    let items: Vec<String> = l.states[s as usize]
                        .iter()
                        .map(|&t| self.universe.show(slave.state(t as usize)))
                        .collect();
                    format!("{{{}}}", items.join(", "))
                }
                SlaveAutomaton::Counts(l) => {
                    let items: Vec<String> = l.states[s as usize]
                        .iter()
                        .map(|&(t, c)| format!("{}:{c}", self.universe.show(slave.state(t as usize))))
                        .collect();
                    format!("[{}]", items.join(", "))
                }
            };
            parts.push(text);
        }
        parts.join(" | ")
    }

    /// `{f1, f2}` listing the assumed recurrent formulas.
    pub fn assumed_text(&self, assumed: &[NbId]) -> String {
        let items: Vec<String> = assumed
            .iter()
            .map(|&v| self.universe.formula_of(v).to_string())
            .collect();
        format!("{{{}}}", items.join(", "))
    }

    /// One line per pair: `FIN=..., INF=..., MP=ext cmp p [rewards]`.
    pub fn acceptance_text(&self) -> String {
        let set = |v: &[bool]| -> String {
            let items: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(q, _)| q.to_string())
                .collect();
            format!("{{{}}}", items.join(","))
        };
        let mut out = String::new();
        for (k, pair) in self.pairs.iter().enumerate() {
            let mut fields = vec![format!("FIN={}", set(&pair.fin))];
            fields.extend(pair.infs.iter().map(|s| format!("INF={}", set(s))));
            for mp in &pair.mps {
                let rewards: Vec<String> = mp.reward.iter().map(|r| r.to_string()).collect();
                fields.push(format!(
                    "MP={} {} {} [{}]",
                    mp.bound.ext.name(),
                    mp.bound.cmp.symbol(),
                    fmt_exact(&mp.bound.p),
                    rewards.join(" ")
                ));
            }
            let _ = writeln!(
                out,
                "pair {k} R={}: {}",
                self.assumed_text(&pair.assumed),
                fields.join(", ")
            );
        }
        out
    }

    /// Graphviz rendering; each state lists the pairs for which it is in Fin
    /// or in some Inf set.
    pub fn to_dot(&self) -> String {
        self.lts.to_dot(
            "automaton",
            |q, _| {
                let fin: Vec<String> = (0..self.pairs.len())
                    .filter(|&k| self.pairs[k].fin[q])
                    .map(|k| k.to_string())
                    .collect();
                let inf: Vec<String> = (0..self.pairs.len())
                    .filter(|&k| self.pairs[k].infs.iter().any(|s| s[q]))
                    .map(|k| k.to_string())
                    .collect();
                format!(
                    "{}: {}\nfin[{}] inf[{}]",
                    q,
                    self.state_label(q),
                    fin.join(","),
                    inf.join(",")
                )
            },
            |q| (q == self.lts.initial).then(|| "style=bold".to_string()),
        )
    }
}
