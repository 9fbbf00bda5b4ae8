//! Brute-force ground truth: positional-profile minimax, exhaustive lasso
//! search, bounded Moore-machine enumeration, and the classic solvers for
//! the generator source problems.
//!
//! Everything here is independent of the solving paths it checks: payoffs
//! come from the closed-form lasso evaluation, winners from exhaustive
//! enumeration in canonical (lexicographic) order. Budgets are explicit and
//! exceeding one is an error, never a silent approximation.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::ae;
use crate::ael;
use crate::bounded;
use crate::game::{GameGraph, Player, StateId};
use crate::mp::{self, Credit, MemorylessStrategy};
use crate::outcome::Status;
use crate::payoff::{check_objective, lasso_payoffs, Lasso, Objective};
use crate::reduce::{CountdownGame, SubsetSumInstance};
use crate::value::ExtRational;
use crate::SolveError;

/// Which payoff a profile is scored by (sup variants; on the periodic плays
/// induced by positional profiles MP and AE have equal sup and inf).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfilePayoff {
    Mp,
    TpSup,
    TpInf,
    Ae,
}

/// The unique play consistent with a full positional profile, as a lasso.
pub fn induced_lasso(
    g: &GameGraph,
    strategy_p1: &MemorylessStrategy,
    strategy_p2: &MemorylessStrategy,
) -> Lasso {
    induced_lasso_from(g, g.init(), strategy_p1, strategy_p2)
}

/// Same, from an arbitrary start state (the graph is re-anchored there).
pub fn induced_lasso_from(
    g: &GameGraph,
    from: StateId,
    strategy_p1: &MemorylessStrategy,
    strategy_p2: &MemorylessStrategy,
) -> Lasso {
    let anchored = g.with_init(from);
    let mut pos = alloc::vec![usize::MAX; g.num_states()];
    let mut order: Vec<StateId> = Vec::new();
    let mut cur = from;
    while pos[cur.0] == usize::MAX {
        pos[cur.0] = order.len();
        order.push(cur);
        cur = match g.owner(cur) {
            Player::P1 => strategy_p1.next(cur),
            Player::P2 => strategy_p2.next(cur),
        }
        .expect("profile is total");
    }
    let split = pos[cur.0];
    let prefix = order[..split].to_vec();
    let cycle = order[split..].to_vec();
    Lasso::new(&anchored, prefix, cycle).expect("induced play is consistent")
}

fn payoff_of(g: &GameGraph, l: &Lasso, which: ProfilePayoff) -> ExtRational {
    let p = lasso_payoffs(g, l);
    match which {
        ProfilePayoff::Mp => p.mp_sup,
        ProfilePayoff::TpSup => p.tp_sup,
        ProfilePayoff::TpInf => p.tp_inf,
        ProfilePayoff::Ae => p.ae_sup,
    }
}

struct ProfileIter<'a> {
    g: &'a GameGraph,
    states: Vec<StateId>,       // owned states, ascending
    succs: Vec<Vec<StateId>>,   // successors, ascending
    counters: Vec<usize>,
    done: bool,
}

impl<'a> ProfileIter<'a> {
    fn new(g: &'a GameGraph, player: Player) -> ProfileIter<'a> {
        let states: Vec<StateId> = g.state_ids().filter(|&s| g.owner(s) == player).collect();
        let succs: Vec<Vec<StateId>> = states
            .iter()
            .map(|&s| {
                let mut v: Vec<StateId> = g.successors(s).collect();
                v.sort();
                v
            })
            .collect();
        ProfileIter {
            g,
            counters: alloc::vec![0; states.len()],
            states,
            succs,
            done: false,
        }
    }

    fn player(&self) -> Player {
        // derived lazily; iterators are built per player
        if self.states.is_empty() {
            Player::P1
        } else {
            self.g.owner(self.states[0])
        }
    }

    fn current(&self, player: Player) -> MemorylessStrategy {
        let mut strat = MemorylessStrategy::new(player);
        for (i, &s) in self.states.iter().enumerate() {
            strat.set(s, self.succs[i][self.counters[i]]);
        }
        strat
    }

    fn advance(&mut self) {
        for i in (0..self.counters.len()).rev() {
            self.counters[i] += 1;
            if self.counters[i] < self.succs[i].len() {
                return;
            }
            self.counters[i] = 0;
        }
        self.done = true;
    }
}

/// `min` over `P1` positional strategies of `max` over `P2` positional
/// strategies of the induced play's payoff from the initial state. Returns
/// the value and the lexicographically smallest optimal profile.
///
/// Errors when the product of out-degrees exceeds the budget.
pub fn minimax_memoryless(
    g: &GameGraph,
    payoff: ProfilePayoff,
    budget: u64,
) -> Result<(ExtRational, MemorylessStrategy, MemorylessStrategy), SolveError> {
    let mut product: u128 = 1;
    for s in g.state_ids() {
        product = product.saturating_mul(g.out_degree(s) as u128);
    }
    if product > budget as u128 {
        return Err(SolveError::BudgetExceeded(format!(
            "{product} positional profiles"
        )));
    }

    let mut best: Option<(ExtRational, MemorylessStrategy)> = None;
    let mut outer = ProfileIter::new(g, Player::P1);
    let _ = outer.player();
    loop {
        let s1 = outer.current(Player::P1);
        let mut worst: Option<ExtRational> = None;
        let mut inner = ProfileIter::new(g, Player::P2);
        loop {
            let s2 = inner.current(Player::P2);
            let val = payoff_of(g, &induced_lasso(g, &s1, &s2), payoff);
            worst = Some(match worst {
                None => val,
                Some(w) => w.max(val),
            });
            inner.advance();
            if inner.done {
                break;
            }
        }
        let worst = worst.expect("at least one opponent profile");
        if best.as_ref().map_or(true, |(b, _)| worst < *b) {
            best = Some((worst, s1));
        }
        outer.advance();
        if outer.done {
            break;
        }
    }
    let (value, s1) = best.expect("at least one profile");

    // first opponent profile attaining the value against the chosen strategy
    let mut inner = ProfileIter::new(g, Player::P2);
    loop {
        let s2 = inner.current(Player::P2);
        if payoff_of(g, &induced_lasso(g, &s1, &s2), payoff) == value {
            return Ok((value, s1, s2));
        }
        inner.advance();
        if inner.done {
            break;
        }
    }
    unreachable!("the maximizing profile was seen during the scan")
}

/// Does some `P1` positional strategy beat every `P2` positional strategy
/// for the objective? Valid as a decision oracle whenever positional
/// strategies suffice on `g` for that objective.
pub fn decide_positional(
    g: &GameGraph,
    objective: &Objective,
    budget: u64,
) -> Result<bool, SolveError> {
    let mut product: u128 = 1;
    for s in g.state_ids() {
        product = product.saturating_mul(g.out_degree(s) as u128);
    }
    if product > budget as u128 {
        return Err(SolveError::BudgetExceeded(format!(
            "{product} positional profiles"
        )));
    }
    let mut outer = ProfileIter::new(g, Player::P1);
    loop {
        let s1 = outer.current(Player::P1);
        let mut all_good = true;
        let mut inner = ProfileIter::new(g, Player::P2);
        loop {
            let s2 = inner.current(Player::P2);
            if !check_objective(g, &induced_lasso(g, &s1, &s2), objective) {
                all_good = false;
                break;
            }
            inner.advance();
            if inner.done {
                break;
            }
        }
        if all_good {
            return Ok(true);
        }
        outer.advance();
        if outer.done {
            return Ok(false);
        }
    }
}

// ---------------------------------------------------------------------------
// exhaustive lasso search

/// What [`exhaustive_lasso_opt`] optimizes, and under which feasibility
/// filter.
#[derive(Clone, Debug)]
pub enum LassoObjective {
    /// Minimize the average energy, no constraint.
    AeMin,
    /// Minimize the cycle mean, no constraint.
    MpMin,
    /// Minimize the average energy among plays keeping energy in `[0, U]`.
    AeluMin { upper_bound: BigUint },
    /// Minimize the average energy among plays keeping energy nonnegative.
    AelMin,
}

#[derive(Clone, Debug)]
pub struct LassoBounds {
    /// Maximum prefix length in edges; `None` means the state count.
    pub max_prefix: Option<usize>,
    /// Enumeration step budget.
    pub budget: u64,
    /// States the search must avoid entirely.
    pub forbid: Option<StateId>,
}

impl Default for LassoBounds {
    fn default() -> Self {
        LassoBounds {
            max_prefix: None,
            budget: 20_000_000,
            forbid: None,
        }
    }
}

/// Best achievable value over lassos made of a simple prefix (length at most
/// the bound) and a simple cycle, in canonical enumeration order. For the
/// payoffs above this family is complete on the graphs the callers use it
/// on: positional optima exist there, and positional plays are exactly such
/// lassos. Feasible-set emptiness reports `+inf` with no witness.
pub fn exhaustive_lasso_opt(
    g: &GameGraph,
    objective: LassoObjective,
    bounds: &LassoBounds,
) -> Result<(ExtRational, Option<Lasso>), SolveError> {
    if g.sole_owner().is_none() {
        return Err(SolveError::TwoPlayerInput);
    }
    let max_prefix = bounds.max_prefix.unwrap_or(g.num_states());
    let mut budget = bounds.budget;
    let mut best: Option<(ExtRational, Lasso)> = None;

    let feasible = |l: &Lasso| -> bool {
        match &objective {
            LassoObjective::AeMin | LassoObjective::MpMin => true,
            LassoObjective::AeluMin { upper_bound } => check_objective(
                g,
                l,
                &Objective::Eglu {
                    upper_bound: upper_bound.clone(),
                },
            ),
            LassoObjective::AelMin => check_objective(
                g,
                l,
                &Objective::Egl {
                    initial_credit: BigUint::zero(),
                },
            ),
        }
    };
    let score = |l: &Lasso| -> ExtRational {
        match &objective {
            LassoObjective::MpMin => payoff_of(g, l, ProfilePayoff::Mp),
            _ => payoff_of(g, l, ProfilePayoff::Ae),
        }
    };

    if bounds.forbid == Some(g.init()) {
        return Ok((ExtRational::PosInf, None));
    }

    // depth-first over simple prefixes, canonical successor order
    let mut prefix = alloc::vec![g.init()];
    let mut on_prefix = alloc::vec![false; g.num_states()];
    on_prefix[g.init().0] = true;
    enumerate_prefixes(
        g,
        &mut prefix,
        &mut on_prefix,
        max_prefix,
        bounds.forbid,
        &mut budget,
        &mut |g, prefix, budget| {
            let anchor = *prefix.last().unwrap();
            let mut cyc = alloc::vec![anchor];
            let mut on_cyc = alloc::vec![false; g.num_states()];
            on_cyc[anchor.0] = true;
            enumerate_cycles(
                g,
                anchor,
                &mut cyc,
                &mut on_cyc,
                bounds.forbid,
                budget,
                &mut |cycle, budget| {
                    if *budget == 0 {
                        return Err(SolveError::BudgetExceeded("lasso enumeration".into()));
                    }
                    *budget -= 1;
                    let lasso = Lasso::new(g, prefix[..prefix.len() - 1].to_vec(), cycle.to_vec())
                        .expect("enumerated play is consistent");
                    if feasible(&lasso) {
                        let val = score(&lasso);
                        if best.as_ref().map_or(true, |(b, _)| val < *b) {
                            best = Some((val, lasso));
                        }
                    }
                    Ok(())
                },
            )
        },
    )?;

    Ok(match best {
        Some((v, l)) => (v, Some(l)),
        None => (ExtRational::PosInf, None),
    })
}

fn sorted_succs(g: &GameGraph, s: StateId) -> Vec<StateId> {
    let mut v: Vec<StateId> = g.successors(s).collect();
    v.sort();
    v
}

fn enumerate_prefixes(
    g: &GameGraph,
    prefix: &mut Vec<StateId>,
    on_prefix: &mut [bool],
    left: usize,
    forbid: Option<StateId>,
    budget: &mut u64,
    visit: &mut impl FnMut(&GameGraph, &[StateId], &mut u64) -> Result<(), SolveError>,
) -> Result<(), SolveError> {
    if *budget == 0 {
        return Err(SolveError::BudgetExceeded("lasso enumeration".into()));
    }
    *budget -= 1;
    visit(g, prefix, budget)?;
    if left == 0 {
        return Ok(());
    }
    let last = *prefix.last().unwrap();
    for nxt in sorted_succs(g, last) {
        if on_prefix[nxt.0] || forbid == Some(nxt) {
            continue;
        }
        on_prefix[nxt.0] = true;
        prefix.push(nxt);
        enumerate_prefixes(g, prefix, on_prefix, left - 1, forbid, budget, visit)?;
        prefix.pop();
        on_prefix[nxt.0] = false;
    }
    Ok(())
}

fn enumerate_cycles(
    g: &GameGraph,
    anchor: StateId,
    cyc: &mut Vec<StateId>,
    on_cyc: &mut [bool],
    forbid: Option<StateId>,
    budget: &mut u64,
    visit: &mut impl FnMut(&[StateId], &mut u64) -> Result<(), SolveError>,
) -> Result<(), SolveError> {
    if *budget == 0 {
        return Err(SolveError::BudgetExceeded("lasso enumeration".into()));
    }
    *budget -= 1;
    let last = *cyc.last().unwrap();
    for nxt in sorted_succs(g, last) {
        if forbid == Some(nxt) {
            continue;
        }
        if nxt == anchor {
            visit(cyc, budget)?;
        } else if !on_cyc[nxt.0] {
            on_cyc[nxt.0] = true;
            cyc.push(nxt);
            enumerate_cycles(g, anchor, cyc, on_cyc, forbid, budget, visit)?;
            cyc.pop();
            on_cyc[nxt.0] = false;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Moore machine enumeration

/// Smallest memory size in `1..=mem_bound` admitting a Moore machine for
/// `player` that wins `objective` (for `P2`: defeats it), or `None`.
///
/// Machines observe traversed edges for their memory updates; memory labels
/// are canonicalized by first use, the initial memory is fixed, and tables
/// are assigned lazily along reachable configurations only, so behaviorally
/// distinct machines are each tried once.
pub fn enumerate_moore_winners(
    g: &GameGraph,
    objective: &Objective,
    player: Player,
    mem_bound: usize,
    budget: u64,
) -> Result<Option<usize>, SolveError> {
    for m in 1..=mem_bound {
        let mut search = MachineSearch {
            g,
            player,
            m,
            objective,
            budget,
            next_t: BTreeMap::new(),
            upd_t: BTreeMap::new(),
        };
        if search.run()? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

struct MachineSearch<'a> {
    g: &'a GameGraph,
    player: Player,
    m: usize,
    objective: &'a Objective,
    budget: u64,
    next_t: BTreeMap<(usize, usize), StateId>,
    upd_t: BTreeMap<(usize, usize, usize), usize>,
}

enum Exploration {
    NeedNext(usize, StateId),
    NeedUpd(usize, StateId, StateId),
    Failed,
    Complete,
}

impl<'a> MachineSearch<'a> {
    fn run(&mut self) -> Result<bool, SolveError> {
        self.dfs(0)
    }

    fn spend(&mut self) -> Result<(), SolveError> {
        if self.budget == 0 {
            return Err(SolveError::BudgetExceeded("machine enumeration".into()));
        }
        self.budget -= 1;
        Ok(())
    }

    fn dfs(&mut self, max_used: usize) -> Result<bool, SolveError> {
        self.spend()?;
        match self.explore()? {
            Exploration::Failed => Ok(false),
            Exploration::Complete => self.final_check(),
            Exploration::NeedNext(mem, s) => {
                for nxt in sorted_succs(self.g, s) {
                    self.next_t.insert((mem, s.0), nxt);
                    if self.dfs(max_used)? {
                        return Ok(true);
                    }
                    self.next_t.remove(&(mem, s.0));
                }
                Ok(false)
            }
            Exploration::NeedUpd(mem, src, dst) => {
                let hi = (max_used + 1).min(self.m - 1);
                for v in 0..=hi {
                    self.upd_t.insert((mem, src.0, dst.0), v);
                    if self.dfs(max_used.max(v))? {
                        return Ok(true);
                    }
                    self.upd_t.remove(&(mem, src.0, dst.0));
                }
                Ok(false)
            }
        }
    }

    /// Walks the reachable configurations under the current partial tables.
    /// For the pure safety objective the walk tracks energies and judges
    /// online; otherwise judging waits for complete tables.
    fn explore(&mut self) -> Result<Exploration, SolveError> {
        match self.objective {
            Objective::Eglu { upper_bound } => self.explore_safety(upper_bound),
            _ => self.explore_plain(),
        }
    }

    fn machine_moves(&self, mem: usize, s: StateId) -> Result<Vec<StateId>, Exploration> {
        if self.g.owner(s) == self.player {
            match self.next_t.get(&(mem, s.0)) {
                Some(&d) => Ok(alloc::vec![d]),
                None => Err(Exploration::NeedNext(mem, s)),
            }
        } else {
            Ok(sorted_succs(self.g, s))
        }
    }

    fn explore_plain(&mut self) -> Result<Exploration, SolveError> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        let start = (0usize, self.g.init());
        seen.insert(start);
        queue.push_back(start);
        while let Some((mem, s)) = queue.pop_front() {
            self.spend()?;
            let moves = match self.machine_moves(mem, s) {
                Ok(m) => m,
                Err(need) => return Ok(need),
            };
            for d in moves {
                let m2 = match self.upd_t.get(&(mem, s.0, d.0)) {
                    Some(&m2) => m2,
                    None => return Ok(Exploration::NeedUpd(mem, s, d)),
                };
                let cfg = (m2, d);
                if seen.insert(cfg) {
                    queue.push_back(cfg);
                }
            }
        }
        Ok(Exploration::Complete)
    }

    fn explore_safety(&mut self, upper: &BigUint) -> Result<Exploration, SolveError> {
        let Some(u) = upper.to_i64() else {
            return Err(SolveError::BudgetExceeded("safety bound too large".into()));
        };
        // configurations carry the tracked energy; edges of the in-bounds
        // configuration graph feed a cycle check for the opponent-side view
        let mut index: BTreeMap<(usize, usize, i64), usize> = BTreeMap::new();
        let mut adj: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        let start = (0usize, self.g.init().0, 0i64);
        index.insert(start, 0);
        adj.push(Vec::new());
        queue.push_back(start);
        while let Some((mem, s, e)) = queue.pop_front() {
            self.spend()?;
            let sid = StateId(s);
            let moves = match self.machine_moves(mem, sid) {
                Ok(m) => m,
                Err(need) => return Ok(need),
            };
            let from_ix = index[&(mem, s, e)];
            for d in moves {
                let w = self
                    .g
                    .weight(sid, d)
                    .and_then(|w| w.to_i64())
                    .expect("desk-scale weights");
                let e2 = e + w;
                let m2 = match self.upd_t.get(&(mem, s, d.0)) {
                    Some(&m2) => m2,
                    None => return Ok(Exploration::NeedUpd(mem, sid, d)),
                };
                if e2 < 0 || e2 > u {
                    match self.player {
                        // the machine player must keep every play in bounds
                        Player::P1 => return Ok(Exploration::Failed),
                        // a violating move is a dead end the opponent avoids
                        Player::P2 => continue,
                    }
                }
                let cfg = (m2, d.0, e2);
                let to_ix = match index.get(&cfg) {
                    Some(&ix) => ix,
                    None => {
                        let ix = adj.len();
                        index.insert(cfg, ix);
                        adj.push(Vec::new());
                        queue.push_back(cfg);
                        ix
                    }
                };
                adj[from_ix].push(to_ix);
                // an in-bounds cycle means the opponent survives forever
                if self.player == Player::P2 && has_cycle(&adj) {
                    return Ok(Exploration::Failed);
                }
            }
        }
        match self.player {
            // no violation anywhere: every play stays in bounds
            Player::P1 => Ok(Exploration::Complete),
            // in-bounds part is acyclic: every play eventually violates
            Player::P2 => Ok(Exploration::Complete),
        }
    }

    /// With complete tables the machine wins iff the one-player product game
    /// (all choices belong to the opponent) decides the objective the right
    /// way around.
    fn final_check(&mut self) -> Result<bool, SolveError> {
        if matches!(self.objective, Objective::Eglu { .. }) {
            // the safety exploration already judged
            return Ok(true);
        }
        let opponent = self.player.opponent();
        let product = self.build_product(opponent);
        let exists = match self.objective {
            Objective::Mp { threshold } => {
                let reach = product.reachable();
                match mp::min_cycle_mean_subgraph(&product, &reach) {
                    Some(mu) => mu <= *threshold,
                    None => false,
                }
            }
            Objective::Egl { initial_credit } => {
                match &mp::minimal_credit(&product)[product.init().0] {
                    Credit::Finite(c) => c <= initial_credit,
                    Credit::Unwinnable => false,
                }
            }
            Objective::Ae { threshold } => {
                let v = solo_value(&product, opponent)?;
                v <= ExtRational::Fin(threshold.clone())
            }
            Objective::Aelu {
                upper_bound,
                threshold,
            } => {
                bounded::aelu_decide_one_player(&product, upper_bound, threshold)?.status
                    == Status::Win
            }
            Objective::Ael { threshold } => {
                ael::ael_decide_one_player(&product, threshold)?.status == Status::Win
            }
            Objective::Eglu { .. } => unreachable!(),
        };
        // exists == "the opponent-side player can realize the objective";
        // for a P1 machine the opponent realizes the *complement*
        Ok(match self.player {
            Player::P1 => exists,
            Player::P2 => !exists,
        })
    }

    /// Product of the arena with the machine: configurations `(memory,
    /// state)` reachable under the tables, every choice handed to `owner`
    /// (machine states are forced, so re-owning them is sound).
    fn build_product(&self, owner: Player) -> GameGraph {
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut names: Vec<(String, Player)> = Vec::new();
        let mut edges: Vec<(String, String, BigInt)> = Vec::new();
        let mut queue = VecDeque::new();
        let name_of = |mem: usize, s: StateId| format!("m{}_{}", mem, self.g.name(s));
        let start = (0usize, self.g.init());
        index.insert((0, start.1 .0), 0);
        names.push((name_of(0, start.1), owner));
        queue.push_back(start);
        while let Some((mem, s)) = queue.pop_front() {
            let moves = self
                .machine_moves(mem, s)
                .unwrap_or_else(|_| panic!("tables are complete"));
            for d in moves {
                let m2 = self.upd_t[&(mem, s.0, d.0)];
                if !index.contains_key(&(m2, d.0)) {
                    index.insert((m2, d.0), names.len());
                    names.push((name_of(m2, d), owner));
                    queue.push_back((m2, d));
                }
                edges.push((
                    name_of(mem, s),
                    name_of(m2, d),
                    self.g.weight(s, d).unwrap().clone(),
                ));
            }
        }
        let init = names[0].0.clone();
        GameGraph::from_parts(names, edges, &init).expect("product is a valid arena")
    }
}

fn has_cycle(adj: &[Vec<usize>]) -> bool {
    // iterative three-color depth-first search
    let n = adj.len();
    let mut color = alloc::vec![0u8; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack = alloc::vec![(root, 0usize)];
        color[root] = 1;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                match color[w] {
                    0 => {
                        color[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                color[v] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Best (min for a sole `P1`, max for a sole `P2`) average energy of a
/// one-player game.
fn solo_value(g: &GameGraph, owner: Player) -> Result<ExtRational, SolveError> {
    let out = match owner {
        Player::P1 => ae::ae_solve_one_player(g)?,
        Player::P2 => ae::ae_solve_one_player_max(g)?,
    };
    Ok(out.value.expect("solo solvers report values"))
}

// ---------------------------------------------------------------------------
// source-problem oracles

/// Exact subset-sum decision by scanning all subsets. Bounded to 20 items.
pub fn subset_sum_brute(inst: &SubsetSumInstance) -> Result<bool, SolveError> {
    let n = inst.values.len();
    if n > 20 {
        return Err(SolveError::BudgetExceeded("subset-sum enumeration".into()));
    }
    for mask in 0u32..(1u32 << n) {
        let mut sum = BigUint::zero();
        for (i, v) in inst.values.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum += v;
            }
        }
        if sum == inst.target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exact countdown-game decision by backward induction over configurations
/// `(vertex, counter)`. Bounded to initial counters up to `10^4`.
pub fn countdown_solve(c: &CountdownGame) -> Result<bool, SolveError> {
    let c0 = c
        .initial_counter
        .to_usize()
        .filter(|&v| v <= 10_000)
        .ok_or_else(|| SolveError::BudgetExceeded("countdown induction".into()))?;
    let nv = c.vertex_names.len();
    // durations grouped per (vertex, duration)
    let mut by_vd: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (u, d, v) in &c.edges {
        if let Some(d) = d.to_usize() {
            by_vd.entry((*u, d)).or_default().push(*v);
        }
        // durations above the counter can never be chosen
    }
    let mut win = alloc::vec![false; nv * (c0 + 1)];
    for counter in 0..=c0 {
        for v in 0..nv {
            win[v * (c0 + 1) + counter] = if counter == 0 {
                true
            } else {
                by_vd.iter().any(|(&(u, d), targets)| {
                    u == v
                        && d <= counter
                        && targets
                            .iter()
                            .all(|&t| win[t * (c0 + 1) + (counter - d)])
                })
            };
        }
    }
    Ok(win[c.init_vertex * (c0 + 1) + c0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    fn plateau_short() -> GameGraph {
        GameGraph::of(
            &[
                ("v0", Player::P1),
                ("v1", Player::P1),
                ("v2", Player::P1),
                ("v3", Player::P1),
                ("v4", Player::P1),
            ],
            &[
                ("v0", "v1", 1),
                ("v1", "v2", 2),
                ("v2", "v4", 2),
                ("v4", "v3", -2),
                ("v3", "v1", -2),
            ],
            "v0",
        )
    }

    #[test]
    fn minimax_on_fixed_arenas() {
        let g = plateau_short();
        let (v, _, _) = minimax_memoryless(&g, ProfilePayoff::Ae, 1_000_000).unwrap();
        assert_eq!(v, ExtRational::from(3));

        let loop0 = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        for p in [
            ProfilePayoff::Mp,
            ProfilePayoff::TpSup,
            ProfilePayoff::TpInf,
            ProfilePayoff::Ae,
        ] {
            let (v, _, _) = minimax_memoryless(&loop0, p, 1_000).unwrap();
            assert_eq!(v, ExtRational::from(0));
        }
    }

    #[test]
    fn minimax_agrees_with_the_probe_arena_value() {
        let g = GameGraph::of(
            &[("sp", Player::P1), ("s", Player::P1), ("sq", Player::P1)],
            &[
                ("sp", "s", 1),
                ("s", "sq", 1),
                ("sq", "s", -1),
                ("s", "sp", -1),
            ],
            "sp",
        );
        let (v, _, _) = minimax_memoryless(&g, ProfilePayoff::Ae, 1_000_000).unwrap();
        assert_eq!(v, ExtRational::Fin(rat(1, 2)));
        let (l, _) = exhaustive_lasso_opt(&g, LassoObjective::AeMin, &LassoBounds::default())
            .unwrap();
        assert_eq!(l, v);
    }

    #[test]
    fn lasso_search_reports_neg_inf_on_negative_loops() {
        let g = GameGraph::of(&[("a", Player::P1)], &[("a", "a", -1)], "a");
        let (v, w) =
            exhaustive_lasso_opt(&g, LassoObjective::AeMin, &LassoBounds::default()).unwrap();
        assert_eq!(v, ExtRational::NegInf);
        assert!(w.is_some());
    }

    #[test]
    fn oracles_self_agree_on_one_player_games() {
        for seed in 700..740 {
            let n = 2 + (seed as usize % 4);
            let g = crate::game::random_game(n, 2, 1.0, (1, 2.min(n)), seed).unwrap();
            let (a, _, _) = minimax_memoryless(&g, ProfilePayoff::Ae, 1_000_000).unwrap();
            let (b, _) =
                exhaustive_lasso_opt(&g, LassoObjective::AeMin, &LassoBounds::default()).unwrap();
            assert_eq!(a, b, "seed {seed}");
        }
    }

    #[test]
    fn budget_violations_error_out() {
        let g = plateau_short();
        assert!(matches!(
            minimax_memoryless(&g, ProfilePayoff::Ae, 0),
            Err(SolveError::BudgetExceeded(_))
        ));
        let bounds = LassoBounds {
            budget: 2,
            ..LassoBounds::default()
        };
        assert!(matches!(
            exhaustive_lasso_opt(&g, LassoObjective::AeMin, &bounds),
            Err(SolveError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn subset_and_countdown_oracles() {
        let inst = SubsetSumInstance::new(
            alloc::vec![BigUint::from(1u32), BigUint::from(2u32), BigUint::from(3u32)],
            BigUint::from(4u32),
        )
        .unwrap();
        assert!(subset_sum_brute(&inst).unwrap());
        let inst = SubsetSumInstance::new(alloc::vec![BigUint::from(2u32)], BigUint::from(1u32))
            .unwrap();
        assert!(!subset_sum_brute(&inst).unwrap());

        let c = CountdownGame::new(
            alloc::vec!["v".to_string()],
            alloc::vec![(0, BigUint::from(2u32), 0)],
            0,
            BigUint::from(4u32),
        )
        .unwrap();
        assert!(countdown_solve(&c).unwrap());
        let c = CountdownGame::new(
            alloc::vec!["v".to_string()],
            alloc::vec![(0, BigUint::from(2u32), 0)],
            0,
            BigUint::from(3u32),
        )
        .unwrap();
        assert!(!countdown_solve(&c).unwrap());
    }

    #[test]
    fn tiny_machine_enumeration() {
        // a zero self-loop is won by the memoryless machine at threshold 0
        let g = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        let m = enumerate_moore_winners(
            &g,
            &Objective::Ae { threshold: rat(0, 1) },
            Player::P1,
            2,
            1_000_000,
        )
        .unwrap();
        assert_eq!(m, Some(1));
    }

    #[test]
    fn ladder_family_needs_u_plus_one_memory() {
        for u in 1..=2u32 {
            let g = crate::reduce::memory_family(
                crate::reduce::MemoryFamily::Fig5a,
                Some(&BigUint::from(u)),
            )
            .unwrap();
            let m = enumerate_moore_winners(
                &g,
                &Objective::Eglu {
                    upper_bound: BigUint::from(u),
                },
                Player::P1,
                (u + 1) as usize,
                50_000_000,
            )
            .unwrap();
            assert_eq!(m, Some((u + 1) as usize), "u = {u}");
        }
    }
}
