//! Mean-payoff threshold and value solving, minimal-credit energy analysis,
//! and the one-player minimum-cycle-mean fast path.
//!
//! The backbone is a progress-measure fixed point for energy feasibility:
//! `P1` wins the mean-payoff threshold objective `MP <= p/q` exactly when a
//! finite initial credit keeps the running sum of `p - q*w` nonnegative
//! forever. Exact values are then recovered by bisecting thresholds over the
//! rationals with denominator at most `|S|` (every game value is a simple
//! cycle mean), refined to the exact answer along the Stern-Brocot tree.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::game::{GameGraph, Player, StateId};
use crate::intern::{fits_i128, Int};
use crate::value::Rational;
use crate::SolveError;

/// A positional strategy: one successor per owned state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemorylessStrategy {
    pub player: Player,
    choice: BTreeMap<usize, usize>,
}

impl MemorylessStrategy {
    pub fn new(player: Player) -> Self {
        MemorylessStrategy {
            player,
            choice: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, s: StateId, dst: StateId) {
        self.choice.insert(s.0, dst.0);
    }

    pub fn next(&self, s: StateId) -> Option<StateId> {
        self.choice.get(&s.0).copied().map(StateId)
    }

    pub fn choices(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.choice.iter().map(|(&s, &d)| (StateId(s), StateId(d)))
    }

    /// Total on the player's states, and every chosen pair is an edge.
    pub fn validate(&self, g: &GameGraph) -> bool {
        g.state_ids()
            .filter(|&s| g.owner(s) == self.player)
            .all(|s| match self.next(s) {
                Some(d) => g.edge_between(s, d).is_some(),
                None => false,
            })
    }

    /// Fills any missing owned state with its smallest successor.
    pub(crate) fn fill_defaults(&mut self, g: &GameGraph) {
        for s in g.state_ids() {
            if g.owner(s) == self.player && !self.choice.contains_key(&s.0) {
                let d = g.successors(s).min_by_key(|t| t.0).expect("deadlock-free");
                self.set(s, d);
            }
        }
    }
}

/// Least initial credit keeping the energy nonnegative, or unwinnable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Credit {
    Finite(BigUint),
    Unwinnable,
}

impl Credit {
    pub fn is_finite(&self) -> bool {
        matches!(self, Credit::Finite(_))
    }
}

/// Exact per-state mean-payoff values with mutually optimal positional
/// witnesses: the lasso induced from any state by the profile attains that
/// state's value.
#[derive(Clone, Debug)]
pub struct MpSolution {
    pub values: Vec<Rational>,
    pub strategy_p1: MemorylessStrategy,
    pub strategy_p2: MemorylessStrategy,
}

impl MpSolution {
    pub fn value(&self, s: StateId) -> &Rational {
        &self.values[s.0]
    }
}

// ---------------------------------------------------------------------------
// energy credit fixed point

struct CreditResult<T> {
    credit: Vec<Option<T>>, // None = unwinnable
    // for finite states of the energy player: the lift-witness successor
    strategy: BTreeMap<usize, usize>,
}

fn credit_fixpoint<T: Int>(
    adj: &[Vec<(usize, T)>],
    is_energy: &[bool],
    cap: &T,
) -> CreditResult<T> {
    let n = adj.len();
    let mut d: Vec<Option<T>> = alloc::vec![Some(T::zero_i()); n];
    let mut preds: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for (u, out) in adj.iter().enumerate() {
        for (v, _) in out {
            preds[*v].push(u);
        }
    }

    let term = |d: &[Option<T>], dst: usize, w: &T| -> Option<T> {
        d[dst].as_ref().map(|dv| {
            let need = dv.sub_i(w);
            if need.is_neg_i() {
                T::zero_i()
            } else {
                need
            }
        })
    };
    let local = |d: &[Option<T>], s: usize| -> Option<T> {
        let mut acc: Option<Option<T>> = None;
        for (dst, w) in &adj[s] {
            let t = term(d, *dst, w);
            acc = Some(match acc {
                None => t,
                Some(a) => {
                    if is_energy[s] {
                        match (a, t) {
                            (None, t) => t,
                            (a, None) => a,
                            (Some(a), Some(t)) => Some(if t < a { t } else { a }),
                        }
                    } else {
                        match (a, t) {
                            (None, _) | (_, None) => None,
                            (Some(a), Some(t)) => Some(if t > a { t } else { a }),
                        }
                    }
                }
            });
        }
        let mut v = acc.expect("deadlock-free graph");
        if let Some(x) = &v {
            if x > cap {
                v = None;
            }
        }
        v
    };

    let mut in_queue = alloc::vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).collect();
    while let Some(s) = queue.pop_front() {
        in_queue[s] = false;
        if d[s].is_none() {
            continue;
        }
        let new = local(&d, s);
        let increased = match (&d[s], &new) {
            (Some(a), Some(b)) => b > a,
            (Some(_), None) => true,
            _ => false,
        };
        if increased {
            d[s] = new;
            for &p in &preds[s] {
                if !in_queue[p] && d[p].is_some() {
                    in_queue[p] = true;
                    queue.push_back(p);
                }
            }
        }
    }

    let mut strategy = BTreeMap::new();
    for s in 0..n {
        if !is_energy[s] || d[s].is_none() {
            continue;
        }
        let mut best: Option<(T, usize)> = None;
        for (dst, w) in &adj[s] {
            if let Some(t) = term(&d, *dst, w) {
                best = Some(match best {
                    None => (t, *dst),
                    Some((bv, bd)) => {
                        if t < bv || (t == bv && *dst < bd) {
                            (t, *dst)
                        } else {
                            (bv, bd)
                        }
                    }
                });
            }
        }
        strategy.insert(s, best.expect("finite credit needs a finite option").1);
    }
    CreditResult {
        credit: d,
        strategy,
    }
}

/// Runs the credit fixed point on weights given as big integers, choosing the
/// machine-word path when the preflight bound allows it.
fn credits_on(
    n: usize,
    edges: &[(usize, usize, BigInt)],
    is_energy: &[bool],
) -> (Vec<Option<BigInt>>, BTreeMap<usize, usize>) {
    let max_w = edges
        .iter()
        .map(|(_, _, w)| w.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    let cap = BigInt::from(n) * &max_w;
    let bound = (&cap + &max_w + 1) * 4;
    if fits_i128(&bound) {
        let mut adj: Vec<Vec<(usize, i128)>> = alloc::vec![Vec::new(); n];
        for (u, v, w) in edges {
            adj[*u].push((*v, i128::from_big(w)));
        }
        let r = credit_fixpoint(&adj, is_energy, &i128::from_big(&cap));
        (
            r.credit.into_iter().map(|c| c.map(|x| x.to_big())).collect(),
            r.strategy,
        )
    } else {
        let mut adj: Vec<Vec<(usize, BigInt)>> = alloc::vec![Vec::new(); n];
        for (u, v, w) in edges {
            adj[*u].push((*v, w.clone()));
        }
        let r = credit_fixpoint(&adj, is_energy, &cap);
        (r.credit, r.strategy)
    }
}

/// Least `c0` per state such that `P1` keeps `c0 + EL >= 0` forever against
/// `P2`; the fixed point is capped at `|S|*W + 1`, and hitting the cap means
/// unwinnable.
pub fn minimal_credit(g: &GameGraph) -> Vec<Credit> {
    minimal_credit_strategy(g).0
}

/// Same as [`minimal_credit`], together with a positional strategy for `P1`
/// that realizes the finite credits.
pub fn minimal_credit_strategy(g: &GameGraph) -> (Vec<Credit>, MemorylessStrategy) {
    let edges: Vec<(usize, usize, BigInt)> = g
        .edges()
        .iter()
        .map(|e| (e.src.0, e.dst.0, e.weight.clone()))
        .collect();
    let is_energy: Vec<bool> = g.state_ids().map(|s| g.owner(s) == Player::P1).collect();
    let (credit, strat) = credits_on(g.num_states(), &edges, &is_energy);
    let mut strategy = MemorylessStrategy::new(Player::P1);
    for (s, d) in strat {
        strategy.set(StateId(s), StateId(d));
    }
    strategy.fill_defaults(g);
    let credits = credit
        .into_iter()
        .map(|c| match c {
            Some(v) => Credit::Finite(v.to_biguint().expect("credits are nonnegative")),
            None => Credit::Unwinnable,
        })
        .collect();
    (credits, strategy)
}

// ---------------------------------------------------------------------------
// mean-payoff threshold tests

/// Win set of the objective `MP <= t` for `P1`, plus a positional witness for
/// `P1` on the winning states. Exact for rational `t`.
pub(crate) fn mp_win_set(g: &GameGraph, t: &Rational) -> (Vec<bool>, MemorylessStrategy) {
    let p = t.numer();
    let q = t.denom();
    // P1 ensures MPsup <= p/q in g  iff  P1 keeps the running sum of
    // p - q*w nonnegative from some finite credit.
    let edges: Vec<(usize, usize, BigInt)> = g
        .edges()
        .iter()
        .map(|e| (e.src.0, e.dst.0, p - q * &e.weight))
        .collect();
    let is_energy: Vec<bool> = g.state_ids().map(|s| g.owner(s) == Player::P1).collect();
    let (credit, strat) = credits_on(g.num_states(), &edges, &is_energy);
    let mut strategy = MemorylessStrategy::new(Player::P1);
    for (s, d) in strat {
        strategy.set(StateId(s), StateId(d));
    }
    (credit.iter().map(|c| c.is_some()).collect(), strategy)
}

/// Smallest rational strictly above `t` with denominator at most `max_den`.
fn next_rational_above(t: &Rational, max_den: usize) -> Rational {
    let mut best: Option<Rational> = None;
    for d in 1..=max_den.max(1) {
        let db = BigInt::from(d);
        let p = (t.numer() * &db).div_floor(t.denom()) + 1;
        let cand = Rational::new(p, db);
        best = Some(match best {
            None => cand,
            Some(b) => b.min(cand),
        });
    }
    best.unwrap()
}

/// Decides the mean-payoff threshold game: `P1` wins iff the value from the
/// initial state is at most `t`. Returns the winner with a positional
/// witness strategy (ties among optimal successors go to the smallest state
/// index).
pub fn mp_decide(g: &GameGraph, t: &Rational) -> (Player, MemorylessStrategy) {
    let (wins, mut strat) = mp_win_set(g, t);
    if wins[g.init().0] {
        strat.fill_defaults(g);
        return (Player::P1, strat);
    }
    // P2 forces MP > t, hence MP >= the next value with denominator <= |S|.
    // In the dual game that is a threshold objective for P2-as-minimizer.
    let dual = g.dual();
    let t2 = -next_rational_above(t, g.num_states());
    let (dual_wins, dual_strat) = mp_win_set(&dual, &t2);
    debug_assert!(dual_wins[g.init().0]);
    let mut strategy = MemorylessStrategy::new(Player::P2);
    for (s, d) in dual_strat.choices() {
        strategy.set(s, d);
    }
    strategy.fill_defaults(g);
    (Player::P2, strategy)
}

struct ThresholdOracle<'a> {
    g: &'a GameGraph,
    cache: BTreeMap<Rational, (Vec<bool>, MemorylessStrategy)>,
}

impl<'a> ThresholdOracle<'a> {
    fn new(g: &'a GameGraph) -> Self {
        ThresholdOracle {
            g,
            cache: BTreeMap::new(),
        }
    }

    fn entry(&mut self, t: &Rational) -> &(Vec<bool>, MemorylessStrategy) {
        if !self.cache.contains_key(t) {
            let r = mp_win_set(self.g, t);
            self.cache.insert(t.clone(), r);
        }
        &self.cache[t]
    }

    fn wins(&mut self, t: &Rational, s: StateId) -> bool {
        self.entry(t).0[s.0]
    }
}

/// Exact value of state `s` under a cached threshold oracle: integer
/// bisection to a unit bracket, then Stern-Brocot mediant refinement until
/// the bracket is a Farey pair at denominator `max_den`.
fn value_at(oracle: &mut ThresholdOracle<'_>, s: StateId, w: &BigInt, max_den: usize) -> Rational {
    let mut lo: BigInt = -(w.clone() + BigInt::one());
    let mut hi = w.clone();
    if lo >= hi {
        // zero-weight game: the value is 0
        return Rational::zero();
    }
    debug_assert!(oracle.wins(&Rational::from_integer(hi.clone()), s));
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        if oracle.wins(&Rational::from_integer(mid.clone()), s) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // value in (lo, hi], endpoints are Farey neighbors at every step
    let (mut la, mut lb) = (lo, BigInt::one());
    let (mut ra, mut rb) = (hi, BigInt::one());
    let den = BigInt::from(max_den);
    while &lb + &rb <= den {
        let ma = &la + &ra;
        let mb = &lb + &rb;
        if oracle.wins(&Rational::new(ma.clone(), mb.clone()), s) {
            ra = ma;
            rb = mb;
        } else {
            la = ma;
            lb = mb;
        }
    }
    Rational::new(ra, rb)
}

/// Exact mean-payoff game values for every state (`P1` minimizes the limsup
/// average, `P2` maximizes), with mutually optimal positional strategies.
pub fn mp_value(g: &GameGraph) -> MpSolution {
    let w = g.max_abs_weight();
    let n = g.num_states();
    let mut oracle = ThresholdOracle::new(g);
    let values: Vec<Rational> = g
        .state_ids()
        .map(|s| value_at(&mut oracle, s, &w, n))
        .collect();

    let mut strategy_p1 = MemorylessStrategy::new(Player::P1);
    for s in g.state_ids() {
        if g.owner(s) == Player::P1 {
            let v = values[s.0].clone();
            let (wins, strat) = oracle.entry(&v);
            debug_assert!(wins[s.0]);
            strategy_p1.set(s, strat.next(s).expect("winning state has a choice"));
        }
    }
    strategy_p1.fill_defaults(g);

    let dual = g.dual();
    let mut dual_oracle = ThresholdOracle::new(&dual);
    let mut strategy_p2 = MemorylessStrategy::new(Player::P2);
    for s in g.state_ids() {
        if g.owner(s) == Player::P2 {
            let v = -values[s.0].clone();
            let (wins, strat) = dual_oracle.entry(&v);
            debug_assert!(wins[s.0]);
            strategy_p2.set(s, strat.next(s).expect("winning state has a choice"));
        }
    }
    strategy_p2.fill_defaults(g);

    MpSolution {
        values,
        strategy_p1,
        strategy_p2,
    }
}

// ---------------------------------------------------------------------------
// one-player machinery: cycle means, negative cycles, cheapest paths

fn tarjan_sccs(n: usize, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // iterative Tarjan; SCCs come out in reverse topological order
    let mut index = alloc::vec![usize::MAX; n];
    let mut low = alloc::vec![0usize; n];
    let mut on_stack = alloc::vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut sccs: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    sccs.push(comp);
                }
            }
        }
    }
    sccs
}

/// Minimum cycle mean inside one strongly connected component, by the
/// classic `min_v max_k (d_n(v) - d_k(v)) / (n - k)` recurrence, with the
/// distance table rolled twice to keep memory linear.
fn scc_min_cycle_mean<T: Int>(n: usize, adj: &[Vec<(usize, T)>]) -> Option<Rational> {
    let has_edge = adj.iter().any(|v| !v.is_empty());
    if !has_edge {
        return None;
    }
    let src = 0usize;
    let roll = |d: &mut Vec<Option<T>>| {
        let mut next: Vec<Option<T>> = alloc::vec![None; n];
        for u in 0..n {
            if let Some(du) = &d[u] {
                for (v, w) in &adj[u] {
                    let cand = du.add_i(w);
                    match &next[*v] {
                        Some(cur) if *cur <= cand => {}
                        _ => next[*v] = Some(cand),
                    }
                }
            }
        }
        *d = next;
    };

    // pass one: d_n
    let mut d: Vec<Option<T>> = alloc::vec![None; n];
    d[src] = Some(T::zero_i());
    for _ in 0..n {
        roll(&mut d);
    }
    let dn = d;

    // pass two: fold max over k while re-rolling d_k
    let mut best: Vec<Option<Rational>> = alloc::vec![None; n];
    let mut d: Vec<Option<T>> = alloc::vec![None; n];
    d[src] = Some(T::zero_i());
    for k in 0..n {
        for v in 0..n {
            if let (Some(dnv), Some(dkv)) = (&dn[v], &d[v]) {
                let num = dnv.sub_i(dkv).to_big();
                let ratio = Rational::new(num, BigInt::from(n - k));
                match &best[v] {
                    Some(b) if *b >= ratio => {}
                    _ => best[v] = Some(ratio),
                }
            }
        }
        if k + 1 < n {
            roll(&mut d);
        }
    }
    best.into_iter().flatten().min()
}

/// Minimum (for a sole `P1` owner) or maximum (sole `P2`) reachable cycle
/// mean from every state. Errors on genuinely two-player input.
pub fn karp_min_mean(g: &GameGraph) -> Result<Vec<Rational>, SolveError> {
    let owner = g.sole_owner().ok_or(SolveError::TwoPlayerInput)?;
    let base = if owner == Player::P2 {
        g.sign_reversed()
    } else {
        g.clone()
    };
    let n = base.num_states();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|s| base.successors(StateId(s)).map(|t| t.0).collect())
        .collect();
    let sccs = tarjan_sccs(n, &adj);
    let mut scc_of = alloc::vec![0usize; n];
    for (ci, comp) in sccs.iter().enumerate() {
        for &v in comp {
            scc_of[v] = ci;
        }
    }

    let max_w = base.max_abs_weight();
    let bound = (BigInt::from(n) + 1) * &max_w * 4 + 4;
    let use_small = fits_i128(&bound);

    let mut scc_mean: Vec<Option<Rational>> = Vec::with_capacity(sccs.len());
    for comp in &sccs {
        let local: BTreeMap<usize, usize> =
            comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let m = comp.len();
        let mean = if use_small {
            let mut adj_l: Vec<Vec<(usize, i128)>> = alloc::vec![Vec::new(); m];
            for &v in comp {
                for e in base.out_edges(StateId(v)) {
                    if let Some(&d) = local.get(&e.dst.0) {
                        adj_l[local[&v]].push((d, i128::from_big(&e.weight)));
                    }
                }
            }
            scc_min_cycle_mean(m, &adj_l)
        } else {
            let mut adj_l: Vec<Vec<(usize, BigInt)>> = alloc::vec![Vec::new(); m];
            for &v in comp {
                for e in base.out_edges(StateId(v)) {
                    if let Some(&d) = local.get(&e.dst.0) {
                        adj_l[local[&v]].push((d, e.weight.clone()));
                    }
                }
            }
            scc_min_cycle_mean(m, &adj_l)
        };
        scc_mean.push(mean);
    }

    // Tarjan emits components in reverse topological order: successors of a
    // component appear before it, so one forward sweep propagates the best
    // reachable mean.
    let mut best: Vec<Option<Rational>> = scc_mean.clone();
    for (ci, comp) in sccs.iter().enumerate() {
        for &v in comp {
            for t in base.successors(StateId(v)) {
                let cj = scc_of[t.0];
                if cj != ci {
                    if let Some(b) = best[cj].clone() {
                        match &best[ci] {
                            Some(cur) if *cur <= b => {}
                            _ => best[ci] = Some(b),
                        }
                    }
                }
            }
        }
    }
    // take minima once more now that all components are folded
    let mut stable = false;
    while !stable {
        stable = true;
        for (ci, comp) in sccs.iter().enumerate() {
            for &v in comp {
                for t in base.successors(StateId(v)) {
                    let cj = scc_of[t.0];
                    if cj != ci {
                        if let (Some(b), cur) = (best[cj].clone(), best[ci].clone()) {
                            if cur.as_ref().map_or(true, |c| b < *c) {
                                best[ci] = Some(b);
                                stable = false;
                            }
                        }
                    }
                }
            }
        }
    }

    let values: Vec<Rational> = (0..n)
        .map(|v| {
            best[scc_of[v]]
                .clone()
                .expect("every state reaches a cycle in a deadlock-free graph")
        })
        .collect();
    Ok(if owner == Player::P2 {
        values.into_iter().map(|v| -v).collect()
    } else {
        values
    })
}

/// Raw edge list of a graph as index triples, for the walk-based helpers.
fn edge_triples(g: &GameGraph) -> Vec<(usize, usize, BigInt)> {
    g.edges()
        .iter()
        .map(|e| (e.src.0, e.dst.0, e.weight.clone()))
        .collect()
}

fn bf_generic<T: Int>(
    n: usize,
    edges: &[(usize, usize, T)],
    seeds: &[usize],
) -> (Vec<Option<T>>, Vec<Option<usize>>, Option<usize>) {
    let mut dist: Vec<Option<T>> = alloc::vec![None; n];
    let mut pred: Vec<Option<usize>> = alloc::vec![None; n];
    for &s in seeds {
        dist[s] = Some(T::zero_i());
    }
    for _ in 0..n.saturating_sub(1) {
        let mut changed = false;
        for (u, v, w) in edges {
            if let Some(du) = dist[*u].clone() {
                let cand = du.add_i(w);
                if dist[*v].as_ref().map_or(true, |dv| cand < *dv) {
                    dist[*v] = Some(cand);
                    pred[*v] = Some(*u);
                    changed = true;
                }
            }
        }
        if !changed {
            return (dist, pred, None);
        }
    }
    for (u, v, w) in edges {
        if let Some(du) = dist[*u].clone() {
            let cand = du.add_i(w);
            if dist[*v].as_ref().map_or(true, |dv| cand < *dv) {
                dist[*v] = Some(cand);
                pred[*v] = Some(*u);
                return (dist, pred, Some(*v));
            }
        }
    }
    (dist, pred, None)
}

fn extract_cycle(n: usize, pred: &[Option<usize>], mut v: usize) -> Vec<usize> {
    for _ in 0..n {
        v = pred[v].expect("relaxed state has a predecessor");
    }
    let mut cycle = alloc::vec![v];
    let mut u = pred[v].unwrap();
    while u != v {
        cycle.push(u);
        u = pred[u].unwrap();
    }
    cycle.reverse();
    cycle
}

/// Detects a strictly negative cycle reachable from `init`. Returns the
/// cycle as a state sequence (first state repeated implicitly).
pub(crate) fn negative_cycle_reachable(g: &GameGraph) -> Option<Vec<usize>> {
    let reach = g.reachable();
    let edges: Vec<(usize, usize, BigInt)> = edge_triples(g)
        .into_iter()
        .filter(|(u, _, _)| reach[*u])
        .collect();
    let n = g.num_states();
    let max_w = g.max_abs_weight();
    let bound = (BigInt::from(n) + 1) * &max_w * 4 + 4;
    if fits_i128(&bound) {
        let small: Vec<(usize, usize, i128)> = edges
            .iter()
            .map(|(u, v, w)| (*u, *v, i128::from_big(w)))
            .collect();
        let (_, pred, hit) = bf_generic(n, &small, &[g.init().0]);
        hit.map(|v| extract_cycle(n, &pred, v))
    } else {
        let (_, pred, hit) = bf_generic(n, &edges, &[g.init().0]);
        hit.map(|v| extract_cycle(n, &pred, v))
    }
}

/// Least energy level with which each state can be reached from `init`.
/// Precondition: no reachable strictly negative cycle.
pub(crate) fn min_energy_paths(g: &GameGraph) -> (Vec<Option<BigInt>>, Vec<Option<usize>>) {
    let edges = edge_triples(g);
    let n = g.num_states();
    let max_w = g.max_abs_weight();
    let bound = (BigInt::from(n) + 1) * &max_w * 4 + 4;
    if fits_i128(&bound) {
        let small: Vec<(usize, usize, i128)> = edges
            .iter()
            .map(|(u, v, w)| (*u, *v, i128::from_big(w)))
            .collect();
        let (dist, pred, hit) = bf_generic(n, &small, &[g.init().0]);
        debug_assert!(hit.is_none(), "negative cycle past the screen");
        (
            dist.into_iter().map(|d| d.map(|x| x.to_big())).collect(),
            pred,
        )
    } else {
        let (dist, pred, hit) = bf_generic(n, &edges, &[g.init().0]);
        debug_assert!(hit.is_none(), "negative cycle past the screen");
        (dist, pred)
    }
}

/// Looks for a cycle of mean at most `t` among the states where `keep`
/// holds, using only such states along the way. Returns one witness cycle.
///
/// Works by scaling each weight to `(n+1)*(q*w - p) - 1`, which makes a cycle
/// strictly negative exactly when its original mean is at most `p/q`.
pub(crate) fn cycle_mean_at_most(
    g: &GameGraph,
    keep: &[bool],
    t: &Rational,
) -> Option<Vec<usize>> {
    let n = g.num_states();
    let p = t.numer();
    let q = t.denom();
    let shift = BigInt::from(n) + 1;
    let edges: Vec<(usize, usize, BigInt)> = g
        .edges()
        .iter()
        .filter(|e| keep[e.src.0] && keep[e.dst.0])
        .map(|e| (e.src.0, e.dst.0, &shift * (q * &e.weight - p) - 1))
        .collect();
    let seeds: Vec<usize> = (0..n).filter(|&s| keep[s]).collect();
    if seeds.is_empty() {
        return None;
    }
    let max_w = edges
        .iter()
        .map(|(_, _, w)| w.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    let bound = (BigInt::from(n) + 1) * &max_w * 4 + 4;
    if fits_i128(&bound) {
        let small: Vec<(usize, usize, i128)> = edges
            .iter()
            .map(|(u, v, w)| (*u, *v, i128::from_big(w)))
            .collect();
        let (_, pred, hit) = bf_generic(n, &small, &seeds);
        hit.map(|v| extract_cycle(n, &pred, v))
    } else {
        let (_, pred, hit) = bf_generic(n, &edges, &seeds);
        hit.map(|v| extract_cycle(n, &pred, v))
    }
}

/// Largest energy level any play from `init` can ever reach, when finite:
/// the longest-path energy over reachable states. `None` when a strictly
/// positive cycle is reachable (energies unbounded above).
pub(crate) fn max_reachable_energy(g: &GameGraph) -> Option<BigInt> {
    let flipped = g.sign_reversed();
    if negative_cycle_reachable(&flipped).is_some() {
        return None;
    }
    let (dist, _) = min_energy_paths(&flipped);
    let mut best = BigInt::zero();
    for d in dist.into_iter().flatten() {
        let up = -d;
        if up > best {
            best = up;
        }
    }
    Some(best)
}

/// Shortest unweighted path between two states through `keep`-states only.
pub(crate) fn bfs_path(
    g: &GameGraph,
    from: usize,
    to: usize,
    keep: &[bool],
) -> Option<Vec<usize>> {
    if !keep[from] {
        return None;
    }
    let n = g.num_states();
    let mut pred = alloc::vec![usize::MAX; n];
    let mut seen = alloc::vec![false; n];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = alloc::vec![to];
            let mut c = to;
            while c != from {
                c = pred[c];
                path.push(c);
            }
            path.reverse();
            return Some(path);
        }
        for v in g.successors(StateId(u)) {
            if keep[v.0] && !seen[v.0] {
                seen[v.0] = true;
                pred[v.0] = u;
                queue.push_back(v.0);
            }
        }
    }
    None
}

/// Minimum cycle mean among cycles that stay within the `keep` mask,
/// ignoring ownership; `None` when the masked subgraph is acyclic.
pub(crate) fn min_cycle_mean_subgraph(g: &GameGraph, keep: &[bool]) -> Option<Rational> {
    let n = g.num_states();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            if !keep[s] {
                return Vec::new();
            }
            g.successors(StateId(s)).filter(|t| keep[t.0]).map(|t| t.0).collect()
        })
        .collect();
    let sccs = tarjan_sccs(n, &adj);
    let max_w = g.max_abs_weight();
    let bound = (BigInt::from(n) + 1) * &max_w * 4 + 4;
    let use_small = fits_i128(&bound);
    let mut best: Option<Rational> = None;
    for comp in &sccs {
        if comp.len() == 1 && !adj[comp[0]].contains(&comp[0]) {
            continue;
        }
        let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let m = comp.len();
        let mean = if use_small {
            let mut adj_l: Vec<Vec<(usize, i128)>> = alloc::vec![Vec::new(); m];
            for &v in comp {
                for e in g.out_edges(StateId(v)) {
                    if keep[e.dst.0] {
                        if let Some(&d) = local.get(&e.dst.0) {
                            adj_l[local[&v]].push((d, i128::from_big(&e.weight)));
                        }
                    }
                }
            }
            scc_min_cycle_mean(m, &adj_l)
        } else {
            let mut adj_l: Vec<Vec<(usize, BigInt)>> = alloc::vec![Vec::new(); m];
            for &v in comp {
                for e in g.out_edges(StateId(v)) {
                    if keep[e.dst.0] {
                        if let Some(&d) = local.get(&e.dst.0) {
                            adj_l[local[&v]].push((d, e.weight.clone()));
                        }
                    }
                }
            }
            scc_min_cycle_mean(m, &adj_l)
        };
        if let Some(mu) = mean {
            best = Some(match best {
                None => mu,
                Some(b) => b.min(mu),
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::random_game;
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
    fn self_loop_value_is_its_weight() {
        let g = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 5)], "a");
        let sol = mp_value(&g);
        assert_eq!(sol.values[0], rat(5, 1));
        assert_eq!(mp_decide(&g, &rat(5, 1)).0, Player::P1);
        assert_eq!(mp_decide(&g, &rat(4, 1)).0, Player::P2);
    }

    #[test]
    fn plateau_value_is_zero_everywhere() {
        let g = plateau_short();
        let sol = mp_value(&g);
        for s in g.state_ids() {
            assert_eq!(sol.values[s.0], rat(0, 1), "state {s}");
        }
        assert_eq!(mp_decide(&g, &rat(0, 1)).0, Player::P1);
        assert_eq!(mp_decide(&g, &rat(-1, 1)).0, Player::P2);
    }

    #[test]
    fn one_player_chain_picks_the_better_cycle() {
        // two reachable simple cycles of means 1/2 and -1/3
        let g = GameGraph::of(
            &[
                ("s", Player::P1),
                ("p", Player::P1),
                ("q", Player::P1),
                ("x", Player::P1),
                ("y", Player::P1),
                ("z", Player::P1),
            ],
            &[
                ("s", "p", 0),
                ("p", "q", 1),
                ("q", "p", 0),
                ("s", "x", 0),
                ("x", "y", -1),
                ("y", "z", 0),
                ("z", "x", 0),
            ],
            "s",
        );
        let sol = mp_value(&g);
        assert_eq!(sol.values[g.state_by_name("s").unwrap().0], rat(-1, 3));
        assert_eq!(sol.values[g.state_by_name("p").unwrap().0], rat(1, 2));
        let karp = karp_min_mean(&g).unwrap();
        for s in g.state_ids() {
            assert_eq!(karp[s.0], sol.values[s.0], "karp vs mp_value at {s}");
        }
    }

    #[test]
    fn karp_on_pump_arena() {
        let g = pump_arena();
        let karp = karp_min_mean(&g).unwrap();
        for s in g.state_ids() {
            assert_eq!(karp[s.0], rat(-3, 2));
        }
        let single = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        assert_eq!(karp_min_mean(&single).unwrap()[0], rat(0, 1));
    }

    #[test]
    fn karp_rejects_two_player_games() {
        let g = GameGraph::of(
            &[("a", Player::P1), ("b", Player::P2)],
            &[("a", "b", 1), ("b", "a", -1)],
            "a",
        );
        assert_eq!(karp_min_mean(&g).unwrap_err(), SolveError::TwoPlayerInput);
    }

    #[test]
    fn karp_maximizes_for_a_sole_p2_owner() {
        let g = GameGraph::of(
            &[("a", Player::P2), ("b", Player::P2)],
            &[("a", "a", -1), ("a", "b", 0), ("b", "b", 3)],
            "a",
        );
        let karp = karp_min_mean(&g).unwrap();
        assert_eq!(karp[0], rat(3, 1));
        assert_eq!(karp[1], rat(3, 1));
    }

    #[test]
    fn minimal_credit_basics() {
        let neg = GameGraph::of(&[("a", Player::P1)], &[("a", "a", -1)], "a");
        assert_eq!(minimal_credit(&neg)[0], Credit::Unwinnable);

        let zero = GameGraph::of(&[("a", Player::P1)], &[("a", "a", 0)], "a");
        assert_eq!(minimal_credit(&zero)[0], Credit::Finite(BigUint::zero()));

        let chain = GameGraph::of(
            &[("s", Player::P1), ("u", Player::P1)],
            &[("s", "u", -3), ("u", "u", 1)],
            "s",
        );
        let credits = minimal_credit(&chain);
        assert_eq!(credits[0], Credit::Finite(BigUint::from(3u32)));
        assert_eq!(credits[1], Credit::Finite(BigUint::zero()));
    }

    #[test]
    fn credit_respects_the_opponent() {
        // P2 can send the play into a -1 loop, so no credit suffices at s.
        let g = GameGraph::of(
            &[("s", Player::P2), ("good", Player::P1), ("bad", Player::P1)],
            &[
                ("s", "good", 0),
                ("s", "bad", 0),
                ("good", "good", 0),
                ("bad", "bad", -1),
            ],
            "s",
        );
        let credits = minimal_credit(&g);
        assert_eq!(credits[g.state_by_name("s").unwrap().0], Credit::Unwinnable);
        assert_eq!(
            credits[g.state_by_name("good").unwrap().0],
            Credit::Finite(BigUint::zero())
        );
    }

    #[test]
    fn credit_finite_iff_reversed_mp_zero_on_random_games() {
        for seed in 0..120 {
            let n = 1 + (seed as usize % 5);
            let g = random_game(n, 3, 0.5, (1, 2.min(n)), seed).unwrap();
            let finite = minimal_credit(&g)[g.init().0].is_finite();
            let (wins, _) = mp_win_set(&g.sign_reversed(), &Rational::zero());
            assert_eq!(finite, wins[g.init().0], "seed {seed}");
        }
    }

    #[test]
    fn sign_reversal_duality_on_random_games() {
        for seed in 200..260 {
            let n = 2 + (seed as usize % 4);
            let g = random_game(n, 2, 0.5, (1, 2), seed).unwrap();
            let v = mp_value(&g).values;
            let dual_v = mp_value(&g.dual()).values;
            for s in g.state_ids() {
                assert_eq!(v[s.0], -dual_v[s.0].clone(), "seed {seed} state {s}");
            }
        }
    }

    #[test]
    fn profile_lasso_attains_the_value() {
        for seed in 300..360 {
            let n = 2 + (seed as usize % 4);
            let g = random_game(n, 3, 0.5, (1, 3.min(n)), seed).unwrap();
            let sol = mp_value(&g);
            for s in g.state_ids() {
                let mut cur = s;
                let mut seen = alloc::vec![usize::MAX; g.num_states()];
                let mut order = Vec::new();
                while seen[cur.0] == usize::MAX {
                    seen[cur.0] = order.len();
                    order.push(cur);
                    cur = match g.owner(cur) {
                        Player::P1 => sol.strategy_p1.next(cur).unwrap(),
                        Player::P2 => sol.strategy_p2.next(cur).unwrap(),
                    };
                }
                let cycle = &order[seen[cur.0]..];
                let total: BigInt = cycle
                    .iter()
                    .enumerate()
                    .map(|(i, &u)| {
                        let v = cycle[(i + 1) % cycle.len()];
                        g.weight(u, v).unwrap().clone()
                    })
                    .sum();
                let mean = Rational::new(total, BigInt::from(cycle.len()));
                assert_eq!(mean, sol.values[s.0], "seed {seed} from {s}");
            }
        }
    }
}
