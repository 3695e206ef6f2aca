//! Maximal end components by iterated strongly-connected-component pruning.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::Mdp;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EndComponent {
    /// Sorted state indices.
    pub states: Vec<usize>,
    /// Sorted action indices; each stays inside `states`.
    pub actions: Vec<usize>,
}

pub fn mec_decomposition(m: &Mdp) -> Vec<EndComponent> {
    mecs_within(m, &vec![true; m.num_states()], &vec![true; m.num_actions()])
}

/// MECs of the sub-MDP induced by the allowed states and actions. Actions
/// leaving the allowed states are ignored.
pub fn mecs_within(m: &Mdp, states: &[bool], actions: &[bool]) -> Vec<EndComponent> {
    let n = m.num_states();
    let mut alive = states.to_vec();
    let mut act: Vec<bool> = (0..m.num_actions())
        .map(|a| actions[a] && alive[m.actions[a].state] && m.successors(a).all(|t| alive[t]))
        .collect();
    let mut component = vec![usize::MAX; n];
    loop {
        let mut graph = DiGraph::<usize, ()>::new();
        let nodes: Vec<_> = (0..n).map(|s| graph.add_node(s)).collect();
        for (a, action) in m.actions.iter().enumerate() {
            if act[a] {
                for (t, _) in &action.dist {
                    graph.add_edge(nodes[action.state], nodes[*t], ());
                }
            }
        }
        for (c, scc) in tarjan_scc(&graph).into_iter().enumerate() {
            for node in scc {
                component[graph[node]] = c;
            }
        }
        let mut changed = false;
        for (a, action) in m.actions.iter().enumerate() {
            if act[a] && m.successors(a).any(|t| component[t] != component[action.state]) {
                act[a] = false;
                changed = true;
            }
        }
        for s in 0..n {
            if alive[s] && !m.enabled[s].iter().any(|&a| act[a]) {
                alive[s] = false;
                changed = true;
                for (a, action) in m.actions.iter().enumerate() {
                    if act[a] && action.dist.iter().any(|(t, _)| *t == s) {
                        act[a] = false;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut by_component: std::collections::BTreeMap<usize, EndComponent> = Default::default();
    for s in (0..n).filter(|&s| alive[s]) {
        let ec = by_component.entry(component[s]).or_insert_with(|| EndComponent {
            states: Vec::new(),
            actions: Vec::new(),
        });
        ec.states.push(s);
        ec.actions.extend(m.enabled[s].iter().copied().filter(|&a| act[a]));
    }
    let mut out: Vec<EndComponent> = by_component
        .into_values()
        .map(|mut ec| {
            ec.actions.sort_unstable();
            ec
        })
        .collect();
    out.sort_by_key(|ec| ec.states[0]);
    out
}
