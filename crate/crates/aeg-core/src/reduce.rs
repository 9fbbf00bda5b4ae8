//! Constructive encodings used as correctness fixtures and hardness-instance
//! generators: mean-payoff games as average-energy games, subset-sum and
//! countdown games as lower-bounded average-energy games, and the small
//! arena families that force memory.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::game::{GameGraph, Player, Weight};
use crate::value::Rational;
use crate::SolveError;

fn fresh_separator(g: &GameGraph, base: char) -> String {
    let mut sep = String::new();
    sep.push(base);
    while g.state_ids().any(|s| g.name(s).contains(&sep)) {
        sep.push(base);
    }
    sep
}

/// Splits every edge through a fresh `P1` state, doubling the weight on the
/// way in and negating the double on the way out. Each original step becomes
/// a two-step window of total energy zero whose average energy is exactly
/// the original weight, so the mean-payoff objective of the input game and
/// the average-energy objective of the output agree at every threshold, in
/// both the sup and inf variants.
pub fn mp_to_ae(g: &GameGraph, t: &Rational) -> (GameGraph, Rational) {
    let sep = fresh_separator(g, '>');
    let mut states: Vec<(String, Player)> = g
        .state_ids()
        .map(|s| (g.name(s).to_string(), g.owner(s)))
        .collect();
    let mut edges: Vec<(String, String, Weight)> = Vec::new();
    for e in g.edges() {
        let mid = format!("{}{}{}", g.name(e.src), sep, g.name(e.dst));
        states.push((mid.clone(), Player::P1));
        edges.push((
            g.name(e.src).to_string(),
            mid.clone(),
            BigInt::from(2) * &e.weight,
        ));
        edges.push((
            mid,
            g.name(e.dst).to_string(),
            BigInt::from(-2) * &e.weight,
        ));
    }
    let out = GameGraph::from_parts(states, edges, g.name(g.init()))
        .expect("edge splitting keeps the graph valid");
    (out, t.clone())
}

/// An exact-sum selection problem: does some subset of `values` sum to
/// `target`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub values: Vec<BigUint>,
    pub target: BigUint,
}

impl SubsetSumInstance {
    pub fn new(values: Vec<BigUint>, target: BigUint) -> Result<Self, SolveError> {
        if values.is_empty() {
            return Err(SolveError::InvalidParameter("need at least one value".into()));
        }
        if values.iter().any(|v| v.is_zero()) {
            return Err(SolveError::InvalidParameter("values must be positive".into()));
        }
        if target.is_zero() {
            return Err(SolveError::InvalidParameter("target must be positive".into()));
        }
        Ok(SubsetSumInstance { values, target })
    }
}

/// Chain of take/skip diamonds ending in `-target` edges into an absorbing
/// zero loop. A play's final energy is its subset sum minus the target, and
/// that is also the play's average energy; the lower energy bound forces the
/// sum to be at least the target, the average-energy threshold `0` forces it
/// to be at most the target. `P1` wins the lower-bounded average-energy
/// objective at the returned threshold iff some subset sums exactly to the
/// target.
pub fn subset_sum_to_ael(inst: &SubsetSumInstance) -> (GameGraph, Rational) {
    let n = inst.values.len();
    let mut states: Vec<(String, Player)> = Vec::new();
    let mut edges: Vec<(String, String, Weight)> = Vec::new();
    for (i, v) in inst.values.iter().enumerate() {
        let si = format!("s{}", i + 1);
        let take = format!("take{}", i + 1);
        let skip = format!("skip{}", i + 1);
        states.push((si.clone(), Player::P1));
        states.push((take.clone(), Player::P1));
        states.push((skip.clone(), Player::P1));
        edges.push((si.clone(), take.clone(), BigInt::from(v.clone())));
        edges.push((si, skip.clone(), BigInt::zero()));
        let (next, w) = if i + 1 < n {
            (format!("s{}", i + 2), BigInt::zero())
        } else {
            ("end".to_string(), -BigInt::from(inst.target.clone()))
        };
        edges.push((take, next.clone(), w.clone()));
        edges.push((skip, next, w));
    }
    states.push(("end".to_string(), Player::P1));
    edges.push(("end".to_string(), "end".to_string(), BigInt::zero()));
    let g = GameGraph::from_parts(states, edges, "s1").expect("diamond chain is valid");
    (g, Rational::zero())
}

/// A two-player duration-counting game: from configuration `(v, c)` the
/// first player picks a duration `d <= c` available at `v`, the second
/// player picks where that duration leads. The first player wins by reaching
/// counter value exactly zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountdownGame {
    pub vertex_names: Vec<String>,
    /// `(from, duration, to)` with strictly positive durations.
    pub edges: Vec<(usize, BigUint, usize)>,
    pub init_vertex: usize,
    pub initial_counter: BigUint,
}

impl CountdownGame {
    pub fn new(
        vertex_names: Vec<String>,
        edges: Vec<(usize, BigUint, usize)>,
        init_vertex: usize,
        initial_counter: BigUint,
    ) -> Result<Self, SolveError> {
        if vertex_names.is_empty() {
            return Err(SolveError::InvalidParameter("need at least one vertex".into()));
        }
        if init_vertex >= vertex_names.len() {
            return Err(SolveError::InvalidParameter("initial vertex out of range".into()));
        }
        for (u, d, v) in &edges {
            if *u >= vertex_names.len() || *v >= vertex_names.len() {
                return Err(SolveError::InvalidParameter("edge endpoint out of range".into()));
            }
            if d.is_zero() {
                return Err(SolveError::InvalidParameter(
                    "durations must be strictly positive".into(),
                ));
            }
        }
        Ok(CountdownGame {
            vertex_names,
            edges,
            init_vertex,
            initial_counter,
        })
    }
}

/// Encodes a countdown game as a lower-bounded average-energy game at
/// threshold zero: the energy starts at the counter value, each chosen
/// duration discharges it, and stopping parks the play on a zero loop whose
/// average energy equals the energy at the stop. Winning requires stopping
/// at energy exactly zero, which is winning the countdown game.
pub fn countdown_to_ael(c: &CountdownGame) -> (GameGraph, Rational) {
    let mut states: Vec<(String, Player)> = Vec::new();
    let mut edges: Vec<(String, String, Weight)> = Vec::new();
    states.push(("start".to_string(), Player::P1));
    states.push(("stop".to_string(), Player::P1));
    for name in &c.vertex_names {
        states.push((name.clone(), Player::P1));
    }
    // one chooser state per distinct (vertex, duration) pair
    let mut chooser_seen: alloc::collections::BTreeSet<(usize, BigUint)> = Default::default();
    for (u, d, _) in &c.edges {
        if chooser_seen.insert((*u, d.clone())) {
            states.push((
                format!("{}%{}", c.vertex_names[*u], d),
                Player::P2,
            ));
            edges.push((
                c.vertex_names[*u].clone(),
                format!("{}%{}", c.vertex_names[*u], d),
                -BigInt::from(d.clone()),
            ));
        }
    }
    for (u, d, v) in &c.edges {
        edges.push((
            format!("{}%{}", c.vertex_names[*u], d),
            c.vertex_names[*v].clone(),
            BigInt::zero(),
        ));
    }
    edges.push((
        "start".to_string(),
        c.vertex_names[c.init_vertex].clone(),
        BigInt::from(c.initial_counter.clone()),
    ));
    for name in &c.vertex_names {
        edges.push((name.clone(), "stop".to_string(), BigInt::zero()));
    }
    edges.push(("stop".to_string(), "stop".to_string(), BigInt::zero()));
    let g = GameGraph::from_parts(states, edges, "start").expect("countdown encoding is valid");
    (g, Rational::zero())
}

/// The arena families that witness memory lower bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemoryFamily {
    /// Two states, all `P1`: charging `U` times then discharging once is the
    /// only behavior that keeps the energy within `[0, U]`.
    Fig5a,
    /// Eight states with one `P2` chooser: `P2` wins the `[0, U]` safety
    /// objective but needs to count the energy level to do so.
    Fig5b,
    /// Three states: `P2` must switch strategies mid-play to beat the
    /// lower-bounded average-energy objective at threshold one.
    Fig8,
}

/// Builds the requested family member. `u` parametrizes the first two
/// families (`u >= 1`) and is ignored by the third.
pub fn memory_family(kind: MemoryFamily, u: Option<&BigUint>) -> Result<GameGraph, SolveError> {
    match kind {
        MemoryFamily::Fig5a => {
            let u = family_param(u)?;
            let states = alloc::vec![
                ("s".to_string(), Player::P1),
                ("sp".to_string(), Player::P1),
            ];
            let edges = alloc::vec![
                ("s".to_string(), "s".to_string(), -BigInt::from(u.clone())),
                ("s".to_string(), "sp".to_string(), BigInt::one()),
                ("sp".to_string(), "s".to_string(), BigInt::zero()),
            ];
            Ok(GameGraph::from_parts(states, edges, "s").expect("valid family arena"))
        }
        MemoryFamily::Fig5b => {
            let u = family_param(u)?;
            let p1 = Player::P1;
            let states = alloc::vec![
                ("s".to_string(), p1),
                ("a".to_string(), Player::P2),
                ("b".to_string(), p1),
                ("c".to_string(), p1),
                ("d".to_string(), p1),
                ("e".to_string(), p1),
                ("f".to_string(), p1),
                ("g".to_string(), p1),
            ];
            let z = BigInt::zero;
            let edges = alloc::vec![
                ("s".to_string(), "a".to_string(), BigInt::one()),
                ("a".to_string(), "b".to_string(), -BigInt::one()),
                ("a".to_string(), "c".to_string(), BigInt::one()),
                ("b".to_string(), "g".to_string(), z()),
                ("c".to_string(), "g".to_string(), z()),
                ("g".to_string(), "d".to_string(), -BigInt::from(u.clone())),
                ("g".to_string(), "e".to_string(), z()),
                ("g".to_string(), "f".to_string(), BigInt::one()),
                ("d".to_string(), "a".to_string(), z()),
                ("e".to_string(), "a".to_string(), z()),
                ("f".to_string(), "a".to_string(), z()),
            ];
            Ok(GameGraph::from_parts(states, edges, "s").expect("valid family arena"))
        }
        MemoryFamily::Fig8 => Ok(GameGraph::of(
            &[
                ("s1", Player::P1),
                ("s2", Player::P2),
                ("s3", Player::P1),
            ],
            &[
                ("s1", "s2", 1),
                ("s2", "s2", 0),
                ("s2", "s3", -1),
                ("s3", "s3", -1),
                ("s3", "s2", 2),
            ],
            "s1",
        )),
    }
}

fn family_param(u: Option<&BigUint>) -> Result<BigUint, SolveError> {
    match u {
        Some(u) if !u.is_zero() => Ok(u.clone()),
        Some(_) => Err(SolveError::InvalidParameter("family parameter must be >= 1".into())),
        None => Err(SolveError::InvalidParameter("family needs a parameter".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::{lasso_payoffs, Lasso};
    use crate::value::{rat, ExtRational};

    #[test]
    fn edge_splitting_keeps_mp_as_ae() {
        let g = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 1)], "a");
        let (h, t) = mp_to_ae(&g, &rat(1, 1));
        assert_eq!(t, rat(1, 1));
        assert_eq!(h.num_states(), 2);
        // the doubled cycle has weights 2, -2 and average energy 1
        let mid = h.state_by_name("a>a").unwrap();
        let l = Lasso::new(&h, alloc::vec![], alloc::vec![h.init(), mid]).unwrap();
        assert_eq!(lasso_payoffs(&h, &l).ae_sup, ExtRational::from(1));
    }

    #[test]
    fn edge_splitting_size() {
        for seed in 0..30 {
            let n = 2 + (seed as usize % 4);
            let g = crate::game::random_game(n, 3, 0.5, (1, 2.min(n)), seed).unwrap();
            let (h, _) = mp_to_ae(&g, &rat(0, 1));
            assert_eq!(h.num_states(), g.num_states() + g.edges().len());
            assert!(h.validate().is_empty());
        }
    }

    #[test]
    fn subset_sum_arena_shape() {
        let inst = SubsetSumInstance::new(
            alloc::vec![BigUint::from(1u32), BigUint::from(2u32), BigUint::from(3u32)],
            BigUint::from(4u32),
        )
        .unwrap();
        let (g, t) = subset_sum_to_ael(&inst);
        assert_eq!(t, rat(0, 1));
        assert_eq!(g.num_states(), 3 * 3 + 1);
        assert!(g.validate().is_empty());
        // the two final edges both carry -target
        let take = g.state_by_name("take3").unwrap();
        let skip = g.state_by_name("skip3").unwrap();
        let end = g.state_by_name("end").unwrap();
        assert_eq!(g.weight(take, end), Some(&BigInt::from(-4)));
        assert_eq!(g.weight(skip, end), Some(&BigInt::from(-4)));
    }

    #[test]
    fn countdown_arena_shape() {
        let c = CountdownGame::new(
            alloc::vec!["v".to_string()],
            alloc::vec![(0, BigUint::from(2u32), 0)],
            0,
            BigUint::from(4u32),
        )
        .unwrap();
        let (g, t) = countdown_to_ael(&c);
        assert_eq!(t, rat(0, 1));
        assert!(g.validate().is_empty());
        let start = g.state_by_name("start").unwrap();
        let v = g.state_by_name("v").unwrap();
        let chooser = g.state_by_name("v%2").unwrap();
        assert_eq!(g.weight(start, v), Some(&BigInt::from(4)));
        assert_eq!(g.weight(v, chooser), Some(&BigInt::from(-2)));
        assert_eq!(g.owner(chooser), Player::P2);
    }

    #[test]
    fn family_arenas() {
        let g = memory_family(MemoryFamily::Fig5a, Some(&BigUint::from(2u32))).unwrap();
        assert_eq!(g.num_states(), 2);
        assert_eq!(
            g.weight(g.state_by_name("s").unwrap(), g.state_by_name("s").unwrap()),
            Some(&BigInt::from(-2))
        );

        let g = memory_family(MemoryFamily::Fig5b, Some(&BigUint::from(3u32))).unwrap();
        assert_eq!(g.num_states(), 8);
        assert_eq!(
            g.weight(g.state_by_name("g").unwrap(), g.state_by_name("d").unwrap()),
            Some(&BigInt::from(-3))
        );

        let g = memory_family(MemoryFamily::Fig8, None).unwrap();
        assert_eq!(g.num_states(), 3);
        assert_eq!(g.max_abs_weight(), BigInt::from(2));
        assert!(memory_family(MemoryFamily::Fig5a, None).is_err());
        assert!(memory_family(MemoryFamily::Fig5a, Some(&BigUint::zero())).is_err());
    }
}
