//! Rendering of solver outcomes: line-oriented `key: value` text, one JSON
//! object with `--json`, and the trace CSV. Exact rationals are always
//! printed `p/q`, integers included; there is no floating point anywhere.

use aeg_core::bounded::MooreStrategy;
use aeg_core::game::GameGraph;
use aeg_core::mp::MemorylessStrategy;
use aeg_core::payoff::Lasso;
use aeg_core::value::{ExtRational, Rational};
use aeg_core::{SolveOutcome, Witness};
use serde_json::{json, Value};

use crate::format::render_lasso;

pub fn render_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn render_ext(v: &ExtRational) -> String {
    v.render()
}

fn positional_lines(g: &GameGraph, s: &MemorylessStrategy, out: &mut String) {
    for (from, to) in s.choices() {
        out.push_str(&format!("choice: {} -> {}\n", g.name(from), g.name(to)));
    }
}

fn moore_lines(g: &GameGraph, m: &MooreStrategy, out: &mut String) {
    out.push_str(&format!("memory-size: {}\n", m.memory_size()));
    out.push_str(&format!("initial-memory: {}\n", m.m0));
    for (i, label) in m.memory_labels.iter().enumerate() {
        out.push_str(&format!("memory-label: {i} = {label}\n"));
    }
    for ((mem, s), d) in m.moves() {
        out.push_str(&format!("next: [{mem}] {} -> {}\n", g.name(s), g.name(d)));
    }
    for ((mem, s, d), m2) in m.updates() {
        out.push_str(&format!(
            "update: [{mem}] {} -> {} => [{m2}]\n",
            g.name(s),
            g.name(d)
        ));
    }
}

/// The line-oriented report of a solve run.
pub fn outcome_text(
    g: &GameGraph,
    outcome: &SolveOutcome,
    want_value: bool,
    want_witness: bool,
    oracle: Option<(&str, bool)>,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("result: {}\n", outcome.status));
    if want_value {
        match &outcome.value {
            Some(v) => out.push_str(&format!("value: {}\n", render_ext(v))),
            None => out.push_str("value: unavailable\n"),
        }
    }
    out.push_str(&format!("route: {}\n", outcome.diagnostics.route));
    if let Some(u) = &outcome.diagnostics.largest_u_tried {
        out.push_str(&format!("largest-u-tried: {u}\n"));
    }
    if let Some(u) = &outcome.diagnostics.winning_u {
        out.push_str(&format!("winning-u: {u}\n"));
    }
    for note in &outcome.diagnostics.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    if want_witness {
        match &outcome.witness {
            None => out.push_str("witness: none\n"),
            Some(Witness::Lasso(l)) => {
                out.push_str("witness: lasso\n");
                out.push_str(&format!("play: {}\n", render_lasso(g, l)));
            }
            Some(Witness::Positional { player, strategy }) => {
                out.push_str(&format!("witness: positional {player}\n"));
                positional_lines(g, strategy, &mut out);
            }
            Some(Witness::Moore(m)) => {
                out.push_str(&format!("witness: moore {}\n", m.player));
                moore_lines(g, m, &mut out);
            }
        }
    }
    if let Some((verdict, agree)) = oracle {
        out.push_str(&format!("oracle: {verdict}\n"));
        out.push_str(&format!("oracle-agrees: {agree}\n"));
    }
    out
}

fn witness_json(g: &GameGraph, w: &Witness) -> Value {
    match w {
        Witness::Lasso(l) => json!({"kind": "lasso", "play": render_lasso(g, l)}),
        Witness::Positional { player, strategy } => json!({
            "kind": "positional",
            "player": player.to_string(),
            "choices": strategy
                .choices()
                .map(|(a, b)| json!([g.name(a), g.name(b)]))
                .collect::<Vec<_>>(),
        }),
        Witness::Moore(m) => json!({
            "kind": "moore",
            "player": m.player.to_string(),
            "memory_size": m.memory_size(),
            "initial_memory": m.m0,
            "memory_labels": m.memory_labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "next": m
                .moves()
                .map(|((mem, s), d)| json!([mem, g.name(s), g.name(d)]))
                .collect::<Vec<_>>(),
            "update": m
                .updates()
                .map(|((mem, s, d), m2)| json!([mem, g.name(s), g.name(d), m2]))
                .collect::<Vec<_>>(),
        }),
    }
}

/// The single-object JSON report of a solve run.
pub fn outcome_json(
    g: &GameGraph,
    outcome: &SolveOutcome,
    want_witness: bool,
    oracle: Option<(&str, bool)>,
) -> Value {
    let mut obj = json!({
        "result": outcome.status.to_string(),
        "route": outcome.diagnostics.route,
    });
    let map = obj.as_object_mut().unwrap();
    if let Some(v) = &outcome.value {
        map.insert("value".into(), Value::String(render_ext(v)));
    }
    if let Some(u) = &outcome.diagnostics.largest_u_tried {
        map.insert("largest_u_tried".into(), Value::String(u.to_string()));
    }
    if let Some(u) = &outcome.diagnostics.winning_u {
        map.insert("winning_u".into(), Value::String(u.to_string()));
    }
    if !outcome.diagnostics.notes.is_empty() {
        map.insert("notes".into(), json!(outcome.diagnostics.notes));
    }
    if want_witness {
        if let Some(w) = &outcome.witness {
            map.insert("witness".into(), witness_json(g, w));
        }
    }
    if let Some((verdict, agree)) = oracle {
        map.insert("oracle".into(), json!({"verdict": verdict, "agrees": agree}));
    }
    obj
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The trace CSV: one row per position `0..=steps` of the lasso's play, with
/// the exact running average of the energy levels.
pub fn trace_csv(g: &GameGraph, l: &Lasso, steps: usize) -> String {
    let mut out = String::from("step,state,energy,running_ae\r\n");
    let mut energy = num_bigint::BigInt::from(0);
    let mut sum = num_bigint::BigInt::from(0);
    for n in 0..=steps {
        let s = l.state_at(n);
        if n > 0 {
            let prev = l.state_at(n - 1);
            energy += g.weight(prev, s).expect("lasso follows edges");
            sum += &energy;
        }
        let ae = if n == 0 {
            Rational::new(0.into(), 1.into())
        } else {
            Rational::new(sum.clone(), n.into())
        };
        out.push_str(&format!(
            "{},{},{},{}\r\n",
            n,
            csv_field(g.name(s)),
            energy,
            render_rational(&ae)
        ));
    }
    out
}

/// The payoff report of `evaluate`.
pub fn payoffs_text(p: &aeg_core::payoff::LassoPayoffs) -> String {
    format!(
        "mp_sup: {}\nmp_inf: {}\ntp_sup: {}\ntp_inf: {}\nae_sup: {}\nae_inf: {}\n",
        p.mp_sup.render(),
        p.mp_inf.render(),
        p.tp_sup.render(),
        p.tp_inf.render(),
        p.ae_sup.render(),
        p.ae_inf.render()
    )
}

pub fn payoffs_json(p: &aeg_core::payoff::LassoPayoffs) -> Value {
    json!({
        "mp_sup": p.mp_sup.render(),
        "mp_inf": p.mp_inf.render(),
        "tp_sup": p.tp_sup.render(),
        "tp_inf": p.tp_inf.render(),
        "ae_sup": p.ae_sup.render(),
        "ae_inf": p.ae_inf.render(),
    })
}
