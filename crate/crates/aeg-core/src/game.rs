//! Arena model: owner-partitioned states, weighted edges, validation, and
//! seeded random generation.
//!
//! Graphs are simple (at most one edge per ordered state pair) and
//! deadlock-free (every state has a successor). States are addressed
//! internally by dense index and externally by name. Weights are exact big
//! integers; nothing in the crate has overflow semantics.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Edge weight: arbitrary-precision signed integer.
pub type Weight = BigInt;

/// The two players. `P1` owns the round states and minimizes payoffs;
/// `P2` owns the square states and maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::P1 => f.write_str("P1"),
            Player::P2 => f.write_str("P2"),
        }
    }
}

/// Dense state index, valid for the graph it was taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: StateId,
    pub dst: StateId,
    pub weight: Weight,
}

/// A finite turn-based arena. Immutable after construction; cheap to share
/// between concurrent solver invocations.
#[derive(Clone, Debug)]
pub struct GameGraph {
    names: Vec<String>,
    owners: Vec<Player>,
    edges: Vec<Edge>,
    init: StateId,
    // derived
    out: Vec<Vec<usize>>,
    pair_to_edge: BTreeMap<(usize, usize), usize>,
}

impl PartialEq for GameGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.owners == other.owners
            && self.edges == other.edges
            && self.init == other.init
    }
}

impl Eq for GameGraph {}

/// A single invariant violation found by [`GameGraph::validate`] or reported
/// while assembling a graph. Violations are data, not panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyStateName { index: usize },
    DuplicateStateName { name: String },
    DuplicateEdge { src: String, dst: String },
    DanglingEdge { src: String, dst: String },
    Deadlock { state: String },
    MissingInit,
    UnknownState { name: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyStateName { index } => write!(f, "state {index} has an empty name"),
            Violation::DuplicateStateName { name } => write!(f, "duplicate state name `{name}`"),
            Violation::DuplicateEdge { src, dst } => write!(f, "duplicate edge {src} -> {dst}"),
            Violation::DanglingEdge { src, dst } => {
                write!(f, "edge {src} -> {dst} references an undeclared state")
            }
            Violation::Deadlock { state } => write!(f, "state `{state}` has no outgoing edge"),
            Violation::MissingInit => write!(f, "no initial state declared"),
            Violation::UnknownState { name } => write!(f, "unknown state `{name}`"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Violation {}

impl GameGraph {
    /// Assembles a graph from parts, rejecting any invariant violation.
    ///
    /// `states` pairs a unique nonempty name with an owner; `edges` refer to
    /// states by name and may forward-reference any declared state; `init`
    /// names the initial state.
    pub fn from_parts(
        states: Vec<(String, Player)>,
        edges: Vec<(String, String, Weight)>,
        init: &str,
    ) -> Result<GameGraph, Vec<Violation>> {
        let mut violations = Vec::new();
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, (name, _)) in states.iter().enumerate() {
            if name.is_empty() {
                violations.push(Violation::EmptyStateName { index: i });
            }
            if index.insert(name.as_str(), i).is_some() {
                violations.push(Violation::DuplicateStateName { name: name.clone() });
            }
        }

        let mut resolved: Vec<Edge> = Vec::with_capacity(edges.len());
        let mut pair_to_edge = BTreeMap::new();
        for (src, dst, w) in &edges {
            let (s, d) = match (index.get(src.as_str()), index.get(dst.as_str())) {
                (Some(&s), Some(&d)) => (s, d),
                _ => {
                    violations.push(Violation::DanglingEdge {
                        src: src.clone(),
                        dst: dst.clone(),
                    });
                    continue;
                }
            };
            if pair_to_edge.insert((s, d), resolved.len()).is_some() {
                violations.push(Violation::DuplicateEdge {
                    src: src.clone(),
                    dst: dst.clone(),
                });
                continue;
            }
            resolved.push(Edge {
                src: StateId(s),
                dst: StateId(d),
                weight: w.clone(),
            });
        }

        let mut out = alloc::vec![Vec::new(); states.len()];
        for (ei, e) in resolved.iter().enumerate() {
            out[e.src.0].push(ei);
        }
        for (i, o) in out.iter().enumerate() {
            if o.is_empty() {
                violations.push(Violation::Deadlock {
                    state: states[i].0.clone(),
                });
            }
        }

        let init = match index.get(init) {
            Some(&i) => StateId(i),
            None => {
                violations.push(if init.is_empty() {
                    Violation::MissingInit
                } else {
                    Violation::UnknownState {
                        name: init.to_string(),
                    }
                });
                StateId(0)
            }
        };

        if !violations.is_empty() {
            return Err(violations);
        }
        let (names, owners) = states.into_iter().unzip();
        Ok(GameGraph {
            names,
            owners,
            edges: resolved,
            init,
            out,
            pair_to_edge,
        })
    }

    /// Convenience constructor for fixtures and tests. Panics on invalid input.
    pub fn of(states: &[(&str, Player)], edges: &[(&str, &str, i64)], init: &str) -> GameGraph {
        GameGraph::from_parts(
            states
                .iter()
                .map(|(n, p)| (n.to_string(), *p))
                .collect(),
            edges
                .iter()
                .map(|(s, d, w)| (s.to_string(), d.to_string(), Weight::from(*w)))
                .collect(),
            init,
        )
        .unwrap_or_else(|v| panic!("invalid fixture game: {v:?}"))
    }

    /// Re-checks every structural invariant of an assembled graph.
    /// Returns the empty list exactly when all of them hold.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut seen = BTreeMap::new();
        for (i, name) in self.names.iter().enumerate() {
            if name.is_empty() {
                violations.push(Violation::EmptyStateName { index: i });
            }
            if seen.insert(name.as_str(), i).is_some() {
                violations.push(Violation::DuplicateStateName { name: name.clone() });
            }
        }
        let mut pairs = BTreeMap::new();
        let mut has_out = alloc::vec![false; self.names.len()];
        for e in &self.edges {
            if e.src.0 >= self.names.len() || e.dst.0 >= self.names.len() {
                violations.push(Violation::DanglingEdge {
                    src: self.name_or_index(e.src),
                    dst: self.name_or_index(e.dst),
                });
                continue;
            }
            has_out[e.src.0] = true;
            if pairs.insert((e.src.0, e.dst.0), ()).is_some() {
                violations.push(Violation::DuplicateEdge {
                    src: self.names[e.src.0].clone(),
                    dst: self.names[e.dst.0].clone(),
                });
            }
        }
        for (i, ok) in has_out.iter().enumerate() {
            if !ok {
                violations.push(Violation::Deadlock {
                    state: self.names[i].clone(),
                });
            }
        }
        if self.init.0 >= self.names.len() {
            violations.push(Violation::MissingInit);
        }
        violations
    }

    fn name_or_index(&self, s: StateId) -> String {
        use alloc::format;
        self.names
            .get(s.0)
            .cloned()
            .unwrap_or_else(|| format!("#{}", s.0))
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.names.len()).map(StateId)
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s.0]
    }

    pub fn owner(&self, s: StateId) -> Player {
        self.owners[s.0]
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, s: StateId) -> impl Iterator<Item = &Edge> {
        self.out[s.0].iter().map(move |&ei| &self.edges[ei])
    }

    pub fn successors(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.out_edges(s).map(|e| e.dst)
    }

    pub fn out_degree(&self, s: StateId) -> usize {
        self.out[s.0].len()
    }

    pub fn edge_between(&self, src: StateId, dst: StateId) -> Option<&Edge> {
        self.pair_to_edge
            .get(&(src.0, dst.0))
            .map(|&ei| &self.edges[ei])
    }

    pub fn weight(&self, src: StateId, dst: StateId) -> Option<&Weight> {
        self.edge_between(src, dst).map(|e| &e.weight)
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name).map(StateId)
    }

    /// Largest absolute weight over all edges; zero on an all-zero graph.
    pub fn max_abs_weight(&self) -> Weight {
        let mut w = Weight::zero();
        for e in &self.edges {
            let a = e.weight.abs();
            if a > w {
                w = a;
            }
        }
        w
    }

    /// `Some(owner)` when every state belongs to a single player.
    pub fn sole_owner(&self) -> Option<Player> {
        let first = self.owners.first()?;
        self.owners.iter().all(|o| o == first).then_some(*first)
    }

    /// The same arena with every weight negated.
    pub fn sign_reversed(&self) -> GameGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = -e.weight.clone();
        }
        g
    }

    /// The dual arena: owners swapped and weights negated. The minimizer's
    /// problem in the dual is the maximizer's in the original.
    pub fn dual(&self) -> GameGraph {
        let mut g = self.sign_reversed();
        for o in &mut g.owners {
            *o = o.opponent();
        }
        g
    }

    /// Weights mapped through `f`; the graph structure is unchanged.
    pub fn map_weights(&self, mut f: impl FnMut(&Weight) -> Weight) -> GameGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = f(&e.weight);
        }
        g
    }

    pub(crate) fn set_owner_raw(&mut self, index: usize, owner: Player) {
        self.owners[index] = owner;
    }

    /// The same arena with a different initial state.
    pub fn with_init(&self, init: StateId) -> GameGraph {
        let mut g = self.clone();
        g.init = init;
        g
    }

    /// All states reachable from `init` ignoring ownership.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = alloc::vec![false; self.num_states()];
        let mut stack = alloc::vec![self.init];
        seen[self.init.0] = true;
        while let Some(s) = stack.pop() {
            for t in self.successors(s) {
                if !seen[t.0] {
                    seen[t.0] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

/// Parameters that make a random arena request infeasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibleParams(pub String);

impl fmt::Display for InfeasibleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "infeasible random-game parameters: {}", self.0)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InfeasibleParams {}

/// Draws a valid, deadlock-free arena, deterministically per seed.
///
/// Each state gets an out-degree uniform in `out_degree` with distinct
/// successors, weights uniform in `[-max_w, max_w]`, and owner `P1` with
/// probability `p1_fraction`.
pub fn random_game(
    num_states: usize,
    max_w: u32,
    p1_fraction: f64,
    out_degree: (usize, usize),
    seed: u64,
) -> Result<GameGraph, InfeasibleParams> {
    let (lo, hi) = out_degree;
    if num_states == 0 {
        return Err(InfeasibleParams("need at least one state".into()));
    }
    if lo == 0 || lo > hi {
        return Err(InfeasibleParams("out-degree range must be 1 <= lo <= hi".into()));
    }
    if hi > num_states {
        return Err(InfeasibleParams(
            "out-degree exceeds state count in a simple graph".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p1_fraction) {
        return Err(InfeasibleParams("p1 fraction must lie in [0, 1]".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(num_states);
    for i in 0..num_states {
        use alloc::format;
        let owner = if rng.gen_bool(p1_fraction) {
            Player::P1
        } else {
            Player::P2
        };
        states.push((format!("s{i}"), owner));
    }

    let w_lo = -(max_w as i64);
    let w_hi = max_w as i64;
    let mut edges = Vec::new();
    for i in 0..num_states {
        let deg = rng.gen_range(lo..=hi);
        // partial Fisher-Yates over candidate destinations
        let mut cands: Vec<usize> = (0..num_states).collect();
        for d in 0..deg {
            let j = rng.gen_range(d..num_states);
            cands.swap(d, j);
            let w = rng.gen_range(w_lo..=w_hi);
            edges.push((
                states[i].0.clone(),
                states[cands[d]].0.clone(),
                Weight::from(w),
            ));
        }
    }
    let init = states[rng.gen_range(0..num_states)].0.clone();

    Ok(GameGraph::from_parts(states, edges, &init)
        .expect("randomly drawn game violates its own invariants"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The three-state one-player pump arena: a positive self-loop, a short
    /// positive detour, and an expensive discharge cycle.
    pub(crate) fn pump_arena() -> GameGraph {
        GameGraph::of(
            &[("a", Player::P1), ("b", Player::P1), ("c", Player::P1)],
            &[
                ("a", "a", 2),
                ("a", "c", 1),
                ("c", "a", 0),
                ("a", "b", -3),
                ("b", "a", 0),
            ],
            "a",
        )
    }

    #[test]
    fn pump_arena_shape() {
        let g = pump_arena();
        assert_eq!(g.num_states(), 3);
        assert_eq!(g.edges().len(), 5);
        assert_eq!(g.max_abs_weight(), Weight::from(3));
        assert_eq!(g.sole_owner(), Some(Player::P1));
        assert!(g.validate().is_empty());
    }

    #[test]
    fn smallest_legal_game() {
        let g = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        assert_eq!(g.num_states(), 1);
        assert_eq!(g.max_abs_weight(), Weight::zero());
    }

    #[test]
    fn deadlock_is_rejected() {
        let err = GameGraph::from_parts(
            alloc::vec![
                ("a".into(), Player::P1),
                ("s".into(), Player::P2),
            ],
            alloc::vec![("a".into(), "s".into(), Weight::from(1))],
            "a",
        )
        .unwrap_err();
        assert!(err.iter().any(|v| matches!(v, Violation::Deadlock { state } if state == "s")));
    }

    #[test]
    fn dangling_and_duplicate_edges_are_rejected() {
        let err = GameGraph::from_parts(
            alloc::vec![("a".into(), Player::P1), ("b".into(), Player::P1)],
            alloc::vec![
                ("a".into(), "b".into(), Weight::from(1)),
                ("a".into(), "b".into(), Weight::from(2)),
                ("b".into(), "zz".into(), Weight::from(0)),
            ],
            "a",
        )
        .unwrap_err();
        assert!(err
            .iter()
            .any(|v| matches!(v, Violation::DuplicateEdge { .. })));
        assert!(err
            .iter()
            .any(|v| matches!(v, Violation::DanglingEdge { dst, .. } if dst == "zz")));
    }

    #[test]
    fn validate_flags_exactly_the_planted_corruption() {
        let g = pump_arena();
        assert_eq!(g.validate(), Vec::new());

        let mut dup_name = g.clone();
        dup_name.names[1] = "a".into();
        assert_eq!(
            dup_name.validate(),
            alloc::vec![Violation::DuplicateStateName { name: "a".into() }]
        );

        let mut dup_edge = g.clone();
        let e = dup_edge.edges[0].clone();
        dup_edge.edges.push(e);
        assert_eq!(
            dup_edge.validate(),
            alloc::vec![Violation::DuplicateEdge {
                src: "a".into(),
                dst: "a".into()
            }]
        );

        let mut dangling = g.clone();
        dangling.edges[3].dst = StateId(9);
        assert_eq!(
            dangling.validate(),
            alloc::vec![Violation::DanglingEdge {
                src: "a".into(),
                dst: "#9".into()
            }]
        );

        let mut bad_init = g.clone();
        bad_init.init = StateId(7);
        assert_eq!(bad_init.validate(), alloc::vec![Violation::MissingInit]);
    }

    #[test]
    fn single_state_forced_random_game() {
        let g = random_game(1, 0, 1.0, (1, 1), 7).unwrap();
        assert_eq!(g.num_states(), 1);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].weight, Weight::zero());
        assert_eq!(g.owner(StateId(0)), Player::P1);
    }

    #[test]
    fn random_game_is_deterministic_per_seed() {
        let a = random_game(6, 3, 0.5, (1, 3), 42).unwrap();
        let b = random_game(6, 3, 0.5, (1, 3), 42).unwrap();
        assert_eq!(a, b);
        let c = random_game(6, 3, 0.5, (1, 3), 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn all_p2_fixed_degree() {
        let g = random_game(2, 5, 0.0, (2, 2), 5).unwrap();
        for s in g.state_ids() {
            assert_eq!(g.owner(s), Player::P2);
            assert_eq!(g.out_degree(s), 2);
        }
    }

    #[test]
    fn thousand_seeded_draws_all_validate() {
        for seed in 0..1000 {
            let n = 1 + (seed as usize % 7);
            let hi = 1 + (seed as usize % n.min(3));
            let g = random_game(n, 4, 0.5, (1, hi), seed).unwrap();
            assert!(g.validate().is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn infeasible_parameters_are_reported() {
        assert!(random_game(0, 1, 0.5, (1, 1), 0).is_err());
        assert!(random_game(3, 1, 0.5, (0, 1), 0).is_err());
        assert!(random_game(3, 1, 0.5, (2, 1), 0).is_err());
        assert!(random_game(2, 1, 0.5, (3, 3), 0).is_err());
    }
}
