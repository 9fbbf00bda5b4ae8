//! Average-energy solving.
//!
//! One-player games: after screening for reachable strictly negative cycles
//! (average-energy `-inf`) the optimum is attained by a lasso whose cycle has
//! total weight zero. For each anchor state `s` and cycle length `k` the best
//! such cycle minimizes the level-weighted sum `sum l * w` over a `k+1`-level
//! copy of the arena, which equals `k` times the cycle's average energy.
//! That search is a small exact linear program; an independent
//! pseudo-polynomial dynamic program over `(state, level, energy)` validates
//! it. Combining each anchor's best cycle with a cheapest path from the
//! initial state gives the optimal value and a witness lasso.
//!
//! Two-player games: classify by the sign of the mean-payoff value, then for
//! value zero decide the threshold objective on an energy-tracking expansion
//! whose edges are reweighted to the tracked energy, turning average energy
//! into mean payoff.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bounded::{extract_moore, ExpandedGame};
use crate::game::{GameGraph, Player, StateId, Weight};
use crate::intern::fits_i128;
use crate::mp;
use crate::outcome::{SolveOutcome, Status, Witness};
use crate::payoff::Lasso;
use crate::simplex::{self, LinearProgram, LpOutcome, Relation};
use num_integer::Integer;
use crate::value::{rat_int, ExtRational, Rational};
use crate::SolveError;

/// Best average-energy zero cycle of a fixed length at a fixed state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCycleResult {
    pub state: StateId,
    pub len: usize,
    pub ae: Rational,
    /// The witnessing cycle: `len` states starting at `state`; the closing
    /// edge back to `state` is implied.
    pub cycle: Vec<StateId>,
}

/// The `k+1`-level copy of an arena that models every cycle of length
/// exactly `k` at the anchor, without intermediate anchor visits. An edge at
/// source level `l` carries the weight pair `(w, l*w)`: the first dimension
/// sums to the cycle's energy, the second to `k` times its average energy.
#[derive(Clone, Debug)]
pub struct LayeredGraph {
    pub anchor: StateId,
    pub len: usize,
    nodes: Vec<(usize, usize)>, // (state, level), pruned
    edges: Vec<LayeredEdge>,
    out: Vec<Vec<usize>>,
    node_of: alloc::collections::BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredEdge {
    pub from: (StateId, usize),
    pub to: (StateId, usize),
    pub weight: Weight,
    pub level_weight: Weight,
}

impl LayeredGraph {
    /// Builds the layered copy pruned to nodes that lie on some
    /// `(anchor, k) -> (anchor, 0)` path.
    pub fn build(g: &GameGraph, s: StateId, k: usize) -> LayeredGraph {
        assert!(k >= 1 && k <= g.num_states(), "cycle length out of range");
        let n = g.num_states();
        // forward reachability from (s, k); levels index remaining steps
        let idx = |state: usize, level: usize| state * (k + 1) + level;
        let mut fwd = alloc::vec![false; n * (k + 1)];
        fwd[idx(s.0, k)] = true;
        for level in (1..=k).rev() {
            for u in 0..n {
                if !fwd[idx(u, level)] {
                    continue;
                }
                for e in g.out_edges(StateId(u)) {
                    let v = e.dst.0;
                    // entering the anchor is only allowed on the final step
                    if v == s.0 && level >= 2 {
                        continue;
                    }
                    fwd[idx(v, level - 1)] = true;
                }
            }
        }
        if !fwd[idx(s.0, 0)] {
            return LayeredGraph {
                anchor: s,
                len: k,
                nodes: Vec::new(),
                edges: Vec::new(),
                out: Vec::new(),
                node_of: Default::default(),
            };
        }
        // backward co-reachability from (s, 0)
        let mut bwd = alloc::vec![false; n * (k + 1)];
        bwd[idx(s.0, 0)] = true;
        for level in 1..=k {
            for u in 0..n {
                if !fwd[idx(u, level)] {
                    continue;
                }
                let alive = g.out_edges(StateId(u)).any(|e| {
                    let v = e.dst.0;
                    !(v == s.0 && level >= 2) && bwd[idx(v, level - 1)]
                });
                if alive {
                    bwd[idx(u, level)] = true;
                }
            }
        }

        let mut nodes = Vec::new();
        let mut node_of = alloc::collections::BTreeMap::new();
        for level in (0..=k).rev() {
            for u in 0..n {
                if fwd[idx(u, level)] && bwd[idx(u, level)] {
                    node_of.insert((u, level), nodes.len());
                    nodes.push((u, level));
                }
            }
        }
        let mut edges = Vec::new();
        let mut out = alloc::vec![Vec::new(); nodes.len()];
        for (ni, &(u, level)) in nodes.iter().enumerate() {
            if level == 0 {
                continue;
            }
            for e in g.out_edges(StateId(u)) {
                let v = e.dst.0;
                if v == s.0 && level >= 2 {
                    continue;
                }
                if node_of.contains_key(&(v, level - 1)) {
                    out[ni].push(edges.len());
                    edges.push(LayeredEdge {
                        from: (StateId(u), level),
                        to: (StateId(v), level - 1),
                        weight: e.weight.clone(),
                        level_weight: BigInt::from(level) * &e.weight,
                    });
                }
            }
        }
        LayeredGraph {
            anchor: s,
            len: k,
            nodes,
            edges,
            out,
            node_of,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[LayeredEdge] {
        &self.edges
    }
}

/// The zero-cycle program over a layered graph, one variable per layered
/// edge. Constraint groups, in row order after the variable bounds:
/// flow conservation at every interior node, unit flow out of the top anchor,
/// unit flow into the bottom anchor, zero total first-dimension weight, and
/// total flow at least one.
#[derive(Clone, Debug)]
pub struct LayeredLp {
    graph: LayeredGraph,
    bound_rows: Vec<(Vec<Rational>, Relation, Rational)>,
    main_rows: Vec<(Vec<Rational>, Relation, Rational)>,
    objective: Vec<Rational>,
}

impl LayeredLp {
    pub fn build(graph: LayeredGraph) -> LayeredLp {
        let ne = graph.edges.len();
        let objective: Vec<Rational> = graph
            .edges
            .iter()
            .map(|e| rat_int(e.level_weight.clone()))
            .collect();

        let mut bound_rows = Vec::with_capacity(ne);
        for j in 0..ne {
            let mut row = alloc::vec![Rational::zero(); ne];
            row[j] = Rational::one();
            bound_rows.push((row, Relation::Le, Rational::one()));
        }

        let mut main_rows = Vec::new();
        // conservation at interior nodes (level strictly between 0 and k)
        for (ni, &(u, level)) in graph.nodes.iter().enumerate() {
            if level == 0 || level == graph.len {
                continue;
            }
            let mut row = alloc::vec![Rational::zero(); ne];
            for &ei in &graph.out[ni] {
                row[ei] += Rational::one();
            }
            for (ei, e) in graph.edges.iter().enumerate() {
                if e.to == (StateId(u), level) {
                    row[ei] -= Rational::one();
                }
            }
            main_rows.push((row, Relation::Eq, Rational::zero()));
        }
        // unit flow out of (anchor, k)
        let mut row = alloc::vec![Rational::zero(); ne];
        if let Some(&top) = graph.node_of.get(&(graph.anchor.0, graph.len)) {
            for &ei in &graph.out[top] {
                row[ei] = Rational::one();
            }
        }
        main_rows.push((row, Relation::Eq, Rational::one()));
        // unit flow into (anchor, 0)
        let mut row = alloc::vec![Rational::zero(); ne];
        for (ei, e) in graph.edges.iter().enumerate() {
            if e.to == (graph.anchor, 0) {
                row[ei] = Rational::one();
            }
        }
        main_rows.push((row, Relation::Eq, Rational::one()));
        // zero total weight in the first dimension
        let row = graph
            .edges
            .iter()
            .map(|e| rat_int(e.weight.clone()))
            .collect();
        main_rows.push((row, Relation::Eq, Rational::zero()));
        // rule out the all-zero solution
        let row = alloc::vec![Rational::one(); ne];
        main_rows.push((row, Relation::Ge, Rational::one()));

        LayeredLp {
            graph,
            bound_rows,
            main_rows,
            objective,
        }
    }

    /// The full program, variable bounds included.
    pub fn program(&self) -> LinearProgram {
        let mut rows = self.bound_rows.clone();
        rows.extend(self.main_rows.clone());
        LinearProgram {
            num_vars: self.objective.len(),
            objective: self.objective.clone(),
            rows,
        }
    }

    /// Solves the program. The explicit `x <= 1` rows are implied by
    /// conservation plus the unit anchor flow (the flow crossing each level
    /// totals one), so the tableau omits them; the solution is checked
    /// against them afterwards.
    pub fn solve(&self) -> LpOutcome {
        let reduced = LinearProgram {
            num_vars: self.objective.len(),
            objective: self.objective.clone(),
            rows: self.main_rows.clone(),
        };
        let out = simplex::solve(&reduced);
        if let LpOutcome::Optimal { solution, .. } = &out {
            debug_assert!(
                solution.iter().all(|x| *x <= Rational::one()),
                "level flow exceeded the implied unit bound"
            );
        }
        out
    }
}

/// Optimal average energy over zero cycles of length exactly `k` at `s` that
/// avoid intermediate visits to `s`, with the witness read off the support
/// of the optimal flow. `None` when no such cycle exists.
///
/// Callers must have screened out reachable strictly negative cycles; a
/// violated screen surfaces as a flagged error, never as a wrong answer,
/// because the extracted witness is re-verified.
pub fn best_zero_cycle(
    g: &GameGraph,
    s: StateId,
    k: usize,
) -> Result<Option<ZeroCycleResult>, SolveError> {
    if g.sole_owner() != Some(Player::P1) {
        return Err(SolveError::TwoPlayerInput);
    }
    if k == 0 || k > g.num_states() {
        return Err(SolveError::InvalidParameter(format!(
            "cycle length {k} out of 1..={}",
            g.num_states()
        )));
    }
    let graph = LayeredGraph::build(g, s, k);
    if graph.is_empty() {
        return Ok(None);
    }
    let lp = LayeredLp::build(graph);
    let (value, solution) = match lp.solve() {
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded => {
            return Err(SolveError::PreconditionViolated(
                "zero-cycle program unbounded".to_string(),
            ))
        }
        LpOutcome::Optimal { value, solution } => (value, solution),
    };

    // walk the support from the top anchor, smallest edge index first
    let graph = &lp.graph;
    let mut cycle = alloc::vec![s];
    let mut node = graph.node_of[&(s.0, k)];
    let mut level_sum = Rational::zero();
    let mut energy = BigInt::zero();
    for _ in 0..k {
        let ei = graph.out[node]
            .iter()
            .copied()
            .find(|&ei| solution[ei].is_positive())
            .ok_or_else(|| {
                SolveError::PreconditionViolated("optimal flow support is not a path".to_string())
            })?;
        let e = &graph.edges[ei];
        energy += &e.weight;
        level_sum += rat_int(e.level_weight.clone());
        let (to_state, to_level) = e.to;
        if to_level > 0 {
            cycle.push(to_state);
        } else if to_state != s {
            return Err(SolveError::PreconditionViolated(
                "support path does not close the cycle".to_string(),
            ));
        }
        node = graph.node_of[&(to_state.0, to_level)];
    }
    if !energy.is_zero() || level_sum != value {
        // Happens only when the no-negative-cycle precondition is broken:
        // fractional flow can then mix cycles of opposite signs.
        return Err(SolveError::PreconditionViolated(
            "support path is not an optimal zero cycle".to_string(),
        ));
    }
    Ok(Some(ZeroCycleResult {
        state: s,
        len: k,
        ae: value / rat_int(BigInt::from(k)),
        cycle,
    }))
}

/// Independent cross-check for [`best_zero_cycle`]: dynamic programming over
/// `(state, level, energy offset in [-kW, kW])` minimizing the level-weighted
/// sum. Shares nothing with the linear-program path.
pub fn best_zero_cycle_dp(
    g: &GameGraph,
    s: StateId,
    k: usize,
) -> Result<Option<ZeroCycleResult>, SolveError> {
    if k == 0 || k > g.num_states() {
        return Err(SolveError::InvalidParameter("cycle length out of range".into()));
    }
    let w = g.max_abs_weight();
    let span_big = BigInt::from(2) * BigInt::from(k) * &w + 1;
    let cost_bound = BigInt::from(k) * BigInt::from(k) * &w * 4 + 4;
    if !fits_i128(&cost_bound) || span_big > BigInt::from(4_000_000) {
        return Err(SolveError::ExpansionTooLarge(
            "zero-cycle table exceeds the cross-check budget".into(),
        ));
    }
    let kw: i128 = (k as i128)
        * w.to_string()
            .parse::<i128>()
            .map_err(|_| SolveError::ExpansionTooLarge("weight out of range".into()))?;
    let span = (2 * kw + 1) as usize;
    let n = g.num_states();
    let off = |e: i128| (e + kw) as usize;

    // value and parent per (state, energy); rolled level by level
    let mut cur: Vec<Option<i128>> = alloc::vec![None; n * span];
    let mut parents: Vec<Vec<Option<(usize, i128)>>> = Vec::with_capacity(k);
    cur[s.0 * span + off(0)] = Some(0);
    for level in (1..=k).rev() {
        let mut next: Vec<Option<i128>> = alloc::vec![None; n * span];
        let mut parent: Vec<Option<(usize, i128)>> = alloc::vec![None; n * span];
        for u in 0..n {
            for e in 0..span {
                let Some(cost) = cur[u * span + e] else { continue };
                let energy = e as i128 - kw;
                for edge in g.out_edges(StateId(u)) {
                    let v = edge.dst.0;
                    if v == s.0 && level >= 2 {
                        continue;
                    }
                    let wv: i128 = edge
                        .weight
                        .to_string()
                        .parse()
                        .expect("bounded by preflight");
                    let ne = energy + wv;
                    if ne < -kw || ne > kw {
                        continue;
                    }
                    let ncost = cost + level as i128 * wv;
                    let slot = &mut next[v * span + off(ne)];
                    if slot.map_or(true, |c| ncost < c) {
                        *slot = Some(ncost);
                        parent[v * span + off(ne)] = Some((u, energy));
                    }
                }
            }
        }
        parents.push(parent);
        cur = next;
    }
    let Some(total) = cur[s.0 * span + off(0)] else {
        return Ok(None);
    };

    // backtrack from (s, 0, energy 0)
    let mut cycle_rev = Vec::with_capacity(k);
    let mut state = s.0;
    let mut energy: i128 = 0;
    for parent in parents.iter().rev() {
        let (pu, pe) = parent[state * span + off(energy)].expect("table path");
        cycle_rev.push(state);
        state = pu;
        energy = pe;
    }
    debug_assert_eq!(state, s.0);
    let mut cycle = alloc::vec![s];
    cycle.extend(cycle_rev.into_iter().rev().skip(1).map(StateId));
    Ok(Some(ZeroCycleResult {
        state: s,
        len: k,
        ae: Rational::new(BigInt::from(total), BigInt::from(k)),
        cycle,
    }))
}

fn lasso_from_cycle(g: &GameGraph, cycle_raw: &[usize]) -> Lasso {
    let all = alloc::vec![true; g.num_states()];
    let path = mp::bfs_path(g, g.init().0, cycle_raw[0], &all)
        .expect("cycle anchor is reachable");
    let prefix: Vec<StateId> = path[..path.len() - 1].iter().map(|&u| StateId(u)).collect();
    let cycle: Vec<StateId> = cycle_raw.iter().map(|&u| StateId(u)).collect();
    Lasso::new(g, prefix, cycle).expect("extracted lasso is well-formed")
}

/// Optimal average energy of a one-player game owned by `P1`, with a witness
/// lasso when the value is attained by a play.
///
/// Route: a reachable strictly negative cycle gives `-inf`; otherwise, if no
/// zero cycle is reachable every play diverges to `+inf`; otherwise the
/// optimum combines a cheapest prefix with the best zero cycle it can reach.
pub fn ae_solve_one_player(g: &GameGraph) -> Result<SolveOutcome, SolveError> {
    match g.sole_owner() {
        Some(Player::P1) => {}
        Some(Player::P2) => return Err(SolveError::WrongSoleOwner(Player::P1)),
        None => return Err(SolveError::TwoPlayerInput),
    }
    let route = "one-player-zero-cycle";

    if let Some(cycle) = mp::negative_cycle_reachable(g) {
        let lasso = lasso_from_cycle(g, &cycle);
        return Ok(SolveOutcome::new(Status::Win, route)
            .with_value(ExtRational::NegInf)
            .with_witness(Witness::Lasso(lasso)));
    }

    let reach = g.reachable();
    let (dist, _) = mp::min_energy_paths(g);
    let mut best: Option<(Rational, ZeroCycleResult)> = None;
    for s in g.state_ids() {
        if !reach[s.0] {
            continue;
        }
        let base = rat_int(dist[s.0].clone().expect("reachable state has a path"));
        for k in 1..=g.num_states() {
            if let Some(zc) = best_zero_cycle(g, s, k)? {
                let total = base.clone() + zc.ae.clone();
                if best.as_ref().map_or(true, |(b, _)| total < *b) {
                    best = Some((total, zc));
                }
            }
        }
    }

    match best {
        None => Ok(SolveOutcome::new(Status::Lose, route).with_value(ExtRational::PosInf)),
        Some((value, zc)) => {
            let cycle_raw: Vec<usize> = zc.cycle.iter().map(|s| s.0).collect();
            let lasso = lasso_from_min_energy_path(g, &cycle_raw);
            Ok(SolveOutcome::new(Status::Win, route)
                .with_value(ExtRational::Fin(value))
                .with_witness(Witness::Lasso(lasso)))
        }
    }
}

/// Builds the witness lasso using a cheapest-energy prefix rather than a
/// shortest one, so the witness re-evaluates to the claimed optimum.
fn lasso_from_min_energy_path(g: &GameGraph, cycle_raw: &[usize]) -> Lasso {
    let (_, pred) = mp::min_energy_paths(g);
    let mut path = alloc::vec![cycle_raw[0]];
    let mut cur = cycle_raw[0];
    let mut guard = 0;
    while cur != g.init().0 {
        cur = pred[cur].expect("reachable state has a predecessor chain");
        path.push(cur);
        guard += 1;
        assert!(guard <= g.num_states(), "predecessor chain cycled");
    }
    path.reverse();
    let prefix: Vec<StateId> = path[..path.len() - 1].iter().map(|&u| StateId(u)).collect();
    let cycle: Vec<StateId> = cycle_raw.iter().map(|&u| StateId(u)).collect();
    Lasso::new(g, prefix, cycle).expect("extracted lasso is well-formed")
}

/// Maximizing variant for a sole-`P2` arena, by weight negation duality.
pub(crate) fn ae_solve_one_player_max(g: &GameGraph) -> Result<SolveOutcome, SolveError> {
    if g.sole_owner() != Some(Player::P2) {
        return Err(SolveError::WrongSoleOwner(Player::P2));
    }
    let flipped = g.sign_reversed().dual_owners_to_p1();
    let mut out = ae_solve_one_player(&flipped)?;
    out.value = out.value.map(|v| match v {
        ExtRational::NegInf => ExtRational::PosInf,
        ExtRational::PosInf => ExtRational::NegInf,
        ExtRational::Fin(r) => ExtRational::Fin(-r),
    });
    // witness lassos transfer unchanged: the graphs share their structure
    Ok(out)
}

impl GameGraph {
    fn dual_owners_to_p1(&self) -> GameGraph {
        let mut g = self.clone();
        for s in 0..g.num_states() {
            g.set_owner_raw(s, Player::P1);
        }
        g
    }
}

// ---------------------------------------------------------------------------
// two-player solving via the energy-tracking expansion

/// Energy range that suffices for positional winning strategies once the
/// mean-payoff value is zero: `[-2|S|W, 2|S|W]`.
fn offset_range(g: &GameGraph) -> BigInt {
    BigInt::from(2) * BigInt::from(g.num_states()) * g.max_abs_weight()
}

/// Decides the average-energy threshold objective `AE <= t` for two-player
/// games.
///
/// Sign classification first: a mean-payoff value below zero lets `P1` force
/// `-inf`, above zero lets `P2` force `+inf`. At value zero the objective is
/// decided as a mean-payoff threshold on the energy-tracking expansion, and
/// the winner's positional strategy there is reported as a finite-memory
/// strategy on the original arena.
pub fn ae_solve_two_player(g: &GameGraph, t: &Rational) -> Result<SolveOutcome, SolveError> {
    let n = g.num_states();
    // value < 0 iff value <= -1/n (denominators divide cycle lengths)
    let neg_probe = Rational::new(BigInt::from(-1), BigInt::from(n));
    let (wins_neg, strat) = mp::mp_win_set(g, &neg_probe);
    if wins_neg[g.init().0] {
        let mut strat = strat;
        strat.fill_defaults(g);
        return Ok(SolveOutcome::new(Status::Win, "mp-classification")
            .with_value(ExtRational::NegInf)
            .with_witness(Witness::Positional {
                player: Player::P1,
                strategy: strat,
            }));
    }
    let (wins_zero, _) = mp::mp_win_set(g, &Rational::zero());
    if !wins_zero[g.init().0] {
        let (winner, strat) = mp::mp_decide(g, &Rational::zero());
        debug_assert_eq!(winner, Player::P2);
        return Ok(SolveOutcome::new(Status::Lose, "mp-classification")
            .with_value(ExtRational::PosInf)
            .with_witness(Witness::Positional {
                player: Player::P2,
                strategy: strat,
            }));
    }

    let r = offset_range(g);
    let exp = ExpandedGame::build_range(g, &(-r.clone()), &r, t)?;
    let (winner, positional) = mp::mp_decide(exp.game(), t);
    let moore = extract_moore(&exp, &positional)?;
    let status = if winner == Player::P1 {
        Status::Win
    } else {
        Status::Lose
    };
    Ok(SolveOutcome::new(status, "offset-expansion-mp").with_witness(Witness::Moore(moore)))
}

/// Exact value of the average-energy game: `+-inf` from classification,
/// otherwise located by Stern-Brocot threshold search. Positional strategies
/// suffice for both players, so the value is a zero cycle's average energy
/// shifted by an integer prefix: its denominator divides a cycle length.
pub fn ae_value_two_player(g: &GameGraph) -> Result<ExtRational, SolveError> {
    let n = g.num_states();
    let neg_probe = Rational::new(BigInt::from(-1), BigInt::from(n));
    let (wins_neg, _) = mp::mp_win_set(g, &neg_probe);
    if wins_neg[g.init().0] {
        return Ok(ExtRational::NegInf);
    }
    let (wins_zero, _) = mp::mp_win_set(g, &Rational::zero());
    if !wins_zero[g.init().0] {
        return Ok(ExtRational::PosInf);
    }

    let hi_abs: BigInt = offset_range(g) + 1;
    let wins = |t: &Rational| -> Result<bool, SolveError> {
        Ok(matches!(ae_solve_two_player(g, t)?.status, Status::Win))
    };
    // integer bracket
    let mut lo: BigInt = -hi_abs.clone();
    let mut hi: BigInt = hi_abs;
    debug_assert!(wins(&rat_int(hi.clone()))?);
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        if wins(&rat_int(mid.clone()))? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Stern-Brocot refinement to denominators at most |S|
    let (mut la, mut lb) = (lo, BigInt::one());
    let (mut ra, mut rb) = (hi, BigInt::one());
    let den = BigInt::from(n);
    while &lb + &rb <= den {
        let ma = &la + &ra;
        let mb = &lb + &rb;
        if wins(&Rational::new(ma.clone(), mb.clone()))? {
            ra = ma;
            rb = mb;
        } else {
            la = ma;
            lb = mb;
        }
    }
    Ok(ExtRational::Fin(Rational::new(ra, rb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::random_game;
    use crate::oracle;
    use crate::payoff::{check_objective, lasso_payoffs, Objective};
    use crate::value::rat;

    fn pump_arena() -> GameGraph {
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

    /// Two symmetric detours at s: one discharges before it recharges, the
    /// other recharges first. Entered from s' with one +1 edge.
    fn probe_arena() -> GameGraph {
        GameGraph::of(
            &[("sp", Player::P1), ("s", Player::P1), ("sq", Player::P1)],
            &[
                ("sp", "s", 1),
                ("s", "sq", 1),
                ("sq", "s", -1),
                ("s", "sp", -1),
            ],
            "sp",
        )
    }

    #[test]
    fn layered_probe_weights() {
        let g = probe_arena();
        let s = g.state_by_name("s").unwrap();
        let layered = LayeredGraph::build(&g, s, 2);
        let mut pairs: Vec<(String, usize, String, usize, i64, i64)> = layered
            .edges()
            .iter()
            .map(|e| {
                (
                    g.name(e.from.0).to_string(),
                    e.from.1,
                    g.name(e.to.0).to_string(),
                    e.to.1,
                    i64::try_from(&e.weight).unwrap(),
                    i64::try_from(&e.level_weight).unwrap(),
                )
            })
            .collect();
        pairs.sort();
        use alloc::string::String;
        assert_eq!(
            pairs,
            alloc::vec![
                ("s".to_string(), 2, "sp".to_string(), 1, -1, -2),
                ("s".to_string(), 2, "sq".to_string(), 1, 1, 2),
                ("sp".to_string(), 1, "s".to_string(), 0, 1, 1),
                ("sq".to_string(), 1, "s".to_string(), 0, -1, -1),
            ]
        );
    }

    #[test]
    fn best_zero_cycle_prefers_the_discharging_detour() {
        let g = probe_arena();
        let s = g.state_by_name("s").unwrap();
        let zc = best_zero_cycle(&g, s, 2).unwrap().unwrap();
        assert_eq!(zc.ae, rat(-1, 2));
        assert_eq!(zc.cycle.len(), 2);
        assert_eq!(zc.cycle[0], s);
        assert_eq!(g.name(zc.cycle[1]), "sp");
    }

    #[test]
    fn zero_cycle_corner_cases() {
        let loop0 = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        let zc = best_zero_cycle(&loop0, StateId(0), 1).unwrap().unwrap();
        assert_eq!(zc.ae, rat(0, 1));

        let g = pump_arena();
        let a = g.state_by_name("a").unwrap();
        // the self-loop at a has weight 2, so no zero cycle of length 1
        assert_eq!(best_zero_cycle(&g, a, 1).unwrap(), None);
    }

    #[test]
    fn one_player_values() {
        let g = pump_arena();
        let out = ae_solve_one_player(&g).unwrap();
        assert_eq!(out.value, Some(ExtRational::NegInf));
        let lasso = out.witness_lasso().unwrap();
        assert_eq!(lasso_payoffs(&g, lasso).ae_sup, ExtRational::NegInf);

        let g = probe_arena();
        let out = ae_solve_one_player(&g).unwrap();
        assert_eq!(out.value, Some(ExtRational::Fin(rat(1, 2))));
        let lasso = out.witness_lasso().unwrap();
        assert_eq!(lasso_payoffs(&g, lasso).ae_sup, ExtRational::Fin(rat(1, 2)));

        let loop0 = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        assert_eq!(
            ae_solve_one_player(&loop0).unwrap().value,
            Some(ExtRational::from(0))
        );

        // no zero cycle anywhere: value +inf
        let up = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 1)], "a");
        let out = ae_solve_one_player(&up).unwrap();
        assert_eq!(out.value, Some(ExtRational::PosInf));
        assert_eq!(out.status, Status::Lose);
    }

    #[test]
    fn lp_and_dp_agree_on_seeded_games() {
        let mut checked = 0;
        for seed in 0..220 {
            let n = 2 + (seed as usize % 5);
            // low weights keep zero cycles frequent enough to exercise the pair
            let w = 1 + (seed as u32 % 3);
            let g = random_game(n, w, 1.0, (1, 3.min(n)), seed).unwrap();
            if mp::negative_cycle_reachable(&g).is_some() {
                continue;
            }
            let reach = g.reachable();
            for s in g.state_ids().filter(|s| reach[s.0]) {
                for k in 1..=g.num_states() {
                    let lp = best_zero_cycle(&g, s, k).unwrap();
                    let dp = best_zero_cycle_dp(&g, s, k).unwrap();
                    match (&lp, &dp) {
                        (None, None) => {}
                        (Some(a), Some(b)) => {
                            assert_eq!(a.ae, b.ae, "seed {seed} s {s} k {k}");
                            checked += 1;
                        }
                        _ => panic!("feasibility mismatch at seed {seed} s {s} k {k}: {lp:?} vs {dp:?}"),
                    }
                }
            }
        }
        assert!(checked > 30, "too few feasible cases exercised: {checked}");
    }

    #[test]
    fn one_player_solver_matches_exhaustive_lassos() {
        for seed in 500..560 {
            let n = 2 + (seed as usize % 4);
            let g = random_game(n, 3, 1.0, (1, 2.min(n)), seed).unwrap();
            let solver = ae_solve_one_player(&g).unwrap().value.unwrap();
            let (oracle_val, _) = oracle::exhaustive_lasso_opt(
                &g,
                oracle::LassoObjective::AeMin,
                &oracle::LassoBounds::default(),
            )
            .unwrap();
            assert_eq!(solver, oracle_val, "seed {seed}");
        }
    }

    #[test]
    fn two_player_threshold_and_value_on_the_plateau_arena() {
        let g = GameGraph::of(
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
        );
        assert_eq!(
            ae_solve_two_player(&g, &rat(3, 1)).unwrap().status,
            Status::Win
        );
        assert_eq!(
            ae_solve_two_player(&g, &rat(2, 1)).unwrap().status,
            Status::Lose
        );
        assert_eq!(ae_value_two_player(&g).unwrap(), ExtRational::from(3));

        let loop0 = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        assert_eq!(ae_value_two_player(&loop0).unwrap(), ExtRational::from(0));
    }

    #[test]
    fn classification_infinities() {
        // mp value -1: P1 wins every finite threshold
        let down = GameGraph::of(&[("a", Player::P1)], &[("a", "a", -1)], "a");
        let out = ae_solve_two_player(&down, &rat(-1000, 1)).unwrap();
        assert_eq!(out.status, Status::Win);
        assert_eq!(out.value, Some(ExtRational::NegInf));

        // mp value +1 under P2 control: P2 wins every threshold
        let up = GameGraph::of(&[("a", Player::P2)], &[("a", "a", 1)], "a");
        let out = ae_solve_two_player(&up, &rat(1000, 1)).unwrap();
        assert_eq!(out.status, Status::Lose);
        assert_eq!(out.value, Some(ExtRational::PosInf));
    }

    #[test]
    fn two_player_witnesses_check_objectives() {
        let g = pump_arena();
        let out = ae_solve_two_player(&g, &rat(-5, 1)).unwrap();
        assert_eq!(out.status, Status::Win);
        if let Some(Witness::Positional { strategy, .. }) = &out.witness {
            // following the strategy from init must reach a negative cycle
            let lasso = oracle::induced_lasso(&g, strategy, strategy);
            assert!(check_objective(&g, &lasso, &Objective::Ae { threshold: rat(-5, 1) }));
        } else {
            panic!("expected a positional witness");
        }
    }
}
