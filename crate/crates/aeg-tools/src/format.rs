//! The game file format and the small textual syntaxes of the tools.
//!
//! Game files are UTF-8 text, line-oriented; `#` starts a comment to the end
//! of the line, blank lines are ignored, tokens are whitespace-separated:
//!
//! ```text
//! state <name> <owner>     # owner is 1 or 2
//! init <name>              # exactly once
//! edge <src> <dst> <weight>
//! ```
//!
//! Declarations may appear in any order; edges may reference states declared
//! anywhere in the file. Rendering is canonical (states, then init, then
//! edges, in declaration order), so `parse(render(g)) == g` field for field.

use std::fmt;

use aeg_core::game::{GameGraph, Player, Weight};
use aeg_core::payoff::Lasso;
use aeg_core::value::Rational;
use aeg_core::StateId;
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed line: unknown directive, wrong arity, bad owner or weight.
    Syntax(String),
    DuplicateState(String),
    DuplicateEdge(String, String),
    DanglingEdge(String, String),
    Deadlock(String),
    MissingInit,
    DuplicateInit,
}

/// A parse failure with its 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            ParseErrorKind::Syntax(msg) => format!("syntax error: {msg}"),
            ParseErrorKind::DuplicateState(n) => format!("duplicate state name `{n}`"),
            ParseErrorKind::DuplicateEdge(s, d) => format!("duplicate edge {s} -> {d}"),
            ParseErrorKind::DanglingEdge(s, d) => {
                format!("edge {s} -> {d} references an undeclared state")
            }
            ParseErrorKind::Deadlock(n) => format!("state `{n}` has no outgoing edge"),
            ParseErrorKind::MissingInit => "no init declaration".to_string(),
            ParseErrorKind::DuplicateInit => "init declared more than once".to_string(),
        };
        write!(f, "{}:{}: {}", self.line, self.column, what)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None; // (char col, byte ix)
    let mut col = 0;
    for (bix, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some((c, b)) = start.take() {
                out.push((c, &line[b..bix]));
            }
        } else if start.is_none() {
            start = Some((col, bix));
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

/// Parses a game file. The first problem encountered in document order is
/// reported with its position and a distinct error code.
pub fn parse_game(text: &str) -> Result<GameGraph, ParseError> {
    struct EdgeDecl {
        src: String,
        dst: String,
        weight: Weight,
        line: usize,
        column: usize,
    }
    let mut states: Vec<(String, Player, usize, usize)> = Vec::new();
    let mut edges: Vec<EdgeDecl> = Vec::new();
    let mut init: Option<(String, usize, usize)> = None;

    for (ix, raw) in text.lines().enumerate() {
        let line_no = ix + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        let (dcol, directive) = toks[0];
        match directive {
            "state" => {
                if toks.len() != 3 {
                    return Err(err(
                        line_no,
                        dcol,
                        ParseErrorKind::Syntax("expected `state <name> <owner>`".into()),
                    ));
                }
                let (ncol, name) = toks[1];
                let (ocol, owner) = toks[2];
                let owner = match owner {
                    "1" => Player::P1,
                    "2" => Player::P2,
                    other => {
                        return Err(err(
                            line_no,
                            ocol,
                            ParseErrorKind::Syntax(format!("owner must be 1 or 2, got `{other}`")),
                        ))
                    }
                };
                if states.iter().any(|(n, _, _, _)| n == name) {
                    return Err(err(line_no, ncol, ParseErrorKind::DuplicateState(name.into())));
                }
                states.push((name.to_string(), owner, line_no, ncol));
            }
            "init" => {
                if toks.len() != 2 {
                    return Err(err(
                        line_no,
                        dcol,
                        ParseErrorKind::Syntax("expected `init <name>`".into()),
                    ));
                }
                if init.is_some() {
                    return Err(err(line_no, dcol, ParseErrorKind::DuplicateInit));
                }
                init = Some((toks[1].1.to_string(), line_no, toks[1].0));
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(err(
                        line_no,
                        dcol,
                        ParseErrorKind::Syntax("expected `edge <src> <dst> <weight>`".into()),
                    ));
                }
                let (wcol, wtok) = toks[3];
                let weight: BigInt = wtok.parse().map_err(|_| {
                    err(
                        line_no,
                        wcol,
                        ParseErrorKind::Syntax(format!("bad weight `{wtok}`")),
                    )
                })?;
                edges.push(EdgeDecl {
                    src: toks[1].1.to_string(),
                    dst: toks[2].1.to_string(),
                    weight,
                    line: line_no,
                    column: toks[1].0,
                });
            }
            other => {
                return Err(err(
                    line_no,
                    dcol,
                    ParseErrorKind::Syntax(format!("unknown directive `{other}`")),
                ))
            }
        }
    }

    let declared = |n: &str| states.iter().any(|(name, _, _, _)| name == n);
    let mut seen_pairs: Vec<(&str, &str)> = Vec::new();
    let mut has_out: Vec<bool> = vec![false; states.len()];
    for e in &edges {
        if !declared(&e.src) || !declared(&e.dst) {
            return Err(err(
                e.line,
                e.column,
                ParseErrorKind::DanglingEdge(e.src.clone(), e.dst.clone()),
            ));
        }
        if seen_pairs.contains(&(e.src.as_str(), e.dst.as_str())) {
            return Err(err(
                e.line,
                e.column,
                ParseErrorKind::DuplicateEdge(e.src.clone(), e.dst.clone()),
            ));
        }
        seen_pairs.push((&e.src, &e.dst));
        let ix = states.iter().position(|(n, _, _, _)| *n == e.src).unwrap();
        has_out[ix] = true;
    }
    for (ix, (name, _, line, col)) in states.iter().enumerate() {
        if !has_out[ix] {
            return Err(err(*line, *col, ParseErrorKind::Deadlock(name.clone())));
        }
    }
    let (init_name, init_line, init_col) = match init {
        Some(v) => v,
        None => return Err(err(1, 1, ParseErrorKind::MissingInit)),
    };
    if !declared(&init_name) {
        return Err(err(
            init_line,
            init_col,
            ParseErrorKind::DanglingEdge(init_name.clone(), init_name),
        ));
    }

    let g = GameGraph::from_parts(
        states.into_iter().map(|(n, o, _, _)| (n, o)).collect(),
        edges
            .into_iter()
            .map(|e| (e.src, e.dst, e.weight))
            .collect(),
        &init_name,
    )
    .expect("all structural violations were reported during parsing");
    Ok(g)
}

/// Canonical rendering: states in index order, the init line, then edges in
/// stored order.
pub fn render_game(g: &GameGraph) -> String {
    let mut out = String::new();
    for s in g.state_ids() {
        let owner = match g.owner(s) {
            Player::P1 => 1,
            Player::P2 => 2,
        };
        out.push_str(&format!("state {} {}\n", g.name(s), owner));
    }
    out.push_str(&format!("init {}\n", g.name(g.init())));
    for e in g.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            g.name(e.src),
            g.name(e.dst),
            e.weight
        ));
    }
    out
}

/// Parses `p/q` or a plain integer as an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator in `{s}`"))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator in `{s}`"))?;
    if d == BigInt::from(0) {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(n, d))
}

/// Parses the lasso syntax `a,c,a | a,b` (empty prefix: `| a,b`) against a
/// game, validating edge consistency.
pub fn parse_lasso(g: &GameGraph, s: &str) -> Result<Lasso, String> {
    let (pre, cyc) = s
        .split_once('|')
        .ok_or_else(|| "lasso syntax is `prefix | cycle`".to_string())?;
    let names = |part: &str| -> Result<Vec<StateId>, String> {
        part.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                g.state_by_name(t)
                    .ok_or_else(|| format!("unknown state `{t}`"))
            })
            .collect()
    };
    let prefix = names(pre)?;
    let cycle = names(cyc)?;
    Lasso::new(g, prefix, cycle).map_err(|e| e.to_string())
}

/// Renders a lasso in the same syntax.
pub fn render_lasso(g: &GameGraph, l: &Lasso) -> String {
    let csv = |ids: &[StateId]| {
        ids.iter()
            .map(|s| g.name(*s))
            .collect::<Vec<_>>()
            .join(",")
    };
    if l.prefix().is_empty() {
        format!("| {}", csv(l.cycle()))
    } else {
        format!("{} | {}", csv(l.prefix()), csv(l.cycle()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use aeg_core::game::random_game;

    const PUMP: &str = "\
# three-state pump
state a 1
state b 1
state c 1
init a
edge a a 2
edge a c 1
edge c a 0
edge a b -3
edge b a 0
";

    #[test]
    fn parses_the_pump_arena() {
        let g = parse_game(PUMP).unwrap();
        assert_eq!(g.num_states(), 3);
        assert_eq!(g.edges().len(), 5);
        assert_eq!(g.max_abs_weight(), BigInt::from(3));
        assert_eq!(g.name(g.init()), "a");
    }

    #[test]
    fn parses_the_smallest_game() {
        let g = parse_game("state a 1\ninit a\nedge a a 0\n").unwrap();
        assert_eq!(g.num_states(), 1);
    }

    #[test]
    fn distinct_error_codes_with_positions() {
        let e = parse_game("state a 1\ninit a\nedge a a 0\nstate a 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 7));
        assert!(matches!(e.kind, ParseErrorKind::DuplicateState(_)));

        let e = parse_game("state a 1\nstate s 2\ninit a\nedge a a 0\nedge a s 1\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Deadlock(ref n) if n == "s"));
        assert_eq!(e.line, 2);

        let e = parse_game("state a 1\ninit a\nedge a zz 0\nedge a a 0\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::DanglingEdge(_, _)));
        assert_eq!((e.line, e.column), (3, 6));

        let e = parse_game("state a 1\ninit a\nedge a a 0\nedge a a 1\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::DuplicateEdge(_, _)));

        let e = parse_game("state a 1\nedge a a 0\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::MissingInit));

        let e = parse_game("state a 1\ninit a\ninit a\nedge a a 0\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::DuplicateInit));

        let e = parse_game("state a 3\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.column), (1, 9));

        let e = parse_game("state a 1\ninit a\nedge a a ++\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.column), (3, 10));

        let e = parse_game("flooble\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn round_trips_random_games_exactly() {
        for seed in 0..200 {
            let n = 1 + (seed as usize % 6);
            let g = random_game(n, 9, 0.4, (1, 2.min(n)), seed).unwrap();
            let text = render_game(&g);
            let h = parse_game(&text).unwrap();
            assert_eq!(g, h, "seed {seed}");
        }
    }

    #[test]
    fn rational_and_lasso_syntax() {
        assert_eq!(parse_rational("9/10").unwrap(), Rational::new(9.into(), 10.into()));
        assert_eq!(parse_rational("-3").unwrap(), Rational::new((-3).into(), 1.into()));
        assert!(parse_rational("1/0").is_err());

        let g = parse_game(PUMP).unwrap();
        let l = parse_lasso(&g, "a,c,a | a,b").unwrap();
        assert_eq!(l.prefix().len(), 3);
        assert_eq!(l.cycle().len(), 2);
        assert_eq!(render_lasso(&g, &l), "a,c,a | a,b");

        let l = parse_lasso(&g, "| a,c").unwrap();
        assert!(l.prefix().is_empty());
        assert_eq!(render_lasso(&g, &l), "| a,c");

        assert!(parse_lasso(&g, "a,b").is_err());
        assert!(parse_lasso(&g, "| b,c").is_err());
    }
}
