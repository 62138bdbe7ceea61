//! Forward closure of the game graph from the initial state.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::engine::GameState;
use crate::error::{Error, Result};
use crate::fibzeck::validate_n;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachReport {
    pub n: u64,
    pub state_count: usize,
    pub edge_count: usize,
    pub terminal_states: Vec<GameState>,
    pub acyclic: bool,
    /// Most moves in any complete game; `None` if the graph has a cycle.
    pub longest_path: Option<usize>,
    /// Fewest moves in any complete game; `None` if the graph has a cycle.
    pub shortest_path: Option<usize>,
}

/// Enumerates every state reachable from `n` ones. Fails with
/// [`Error::Capacity`] once more than `state_cap` states are found.
pub fn reachability(n: u64, state_cap: usize) -> Result<ReachReport> {
    validate_n(n)?;
    let initial = GameState::initial(n)?;
    let mut index: HashMap<GameState, usize> = HashMap::new();
    let mut states: Vec<GameState> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();

    index.insert(initial.clone(), 0);
    states.push(initial);
    edges.push(Vec::new());
    queue.push_back(0);

    while let Some(u) = queue.pop_front() {
        for m in states[u].legal_moves() {
            let next = states[u].apply(m)?;
            let v = match index.get(&next) {
                Some(&v) => v,
                None => {
                    if states.len() >= state_cap {
                        return Err(Error::Capacity { cap: state_cap });
                    }
                    let v = states.len();
                    index.insert(next.clone(), v);
                    states.push(next);
                    edges.push(Vec::new());
                    queue.push_back(v);
                    v
                }
            };
            edges[u].push(v);
        }
    }

    // Kahn's algorithm; a leftover node means a cycle.
    let count = states.len();
    let mut indegree = vec![0usize; count];
    for out in &edges {
        for &v in out {
            indegree[v] += 1;
        }
    }
    let mut order = Vec::with_capacity(count);
    let mut ready: Vec<usize> = (0..count).filter(|&u| indegree[u] == 0).collect();
    while let Some(u) = ready.pop() {
        order.push(u);
        for &v in &edges[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    let acyclic = order.len() == count;

    let terminal: Vec<usize> = (0..count).filter(|&u| edges[u].is_empty()).collect();
    let (longest_path, shortest_path) = if acyclic {
        let mut longest = vec![0usize; count];
        let mut shortest = vec![usize::MAX; count];
        shortest[0] = 0;
        for &u in &order {
            if shortest[u] == usize::MAX {
                continue;
            }
            for &v in &edges[u] {
                longest[v] = longest[v].max(longest[u] + 1);
                shortest[v] = shortest[v].min(shortest[u] + 1);
            }
        }
        (
            terminal.iter().map(|&u| longest[u]).max(),
            terminal.iter().map(|&u| shortest[u]).min(),
        )
    } else {
        (None, None)
    };

    let mut terminal_states: Vec<GameState> = terminal.iter().map(|&u| states[u].clone()).collect();
    terminal_states.sort();
    Ok(ReachReport {
        n,
        state_count: count,
        edge_count: edges.iter().map(Vec::len).sum(),
        terminal_states,
        acyclic,
        longest_path,
        shortest_path,
    })
}
