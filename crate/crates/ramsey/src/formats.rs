//! Plain-text file formats and table rendering.
//!
//! Witnesses, partitions, and bound facts travel as line-oriented UTF-8
//! files so they stay auditable by eye and by diff. Every parser reports the
//! offending line number; every renderer emits the canonical form, and
//! parsing a rendered value round-trips exactly.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::coloring::{cyclic_coloring, make_coloring, EdgeColoring};
use crate::construct::{PartitionMode, SumFreePartition};
use crate::engine::{AssertKind, KnowledgeBase};
use crate::graph::Graph;
use crate::params::Params;

/// A line-anchored parse failure. `line` is 1-based; semantic errors that
/// only surface once the whole file is read (e.g. a cyclic class partition
/// gap) point at the header line that declared the shape.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl fmt::Display) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.to_string() })
}

/// Parse `key=<int> key=<int> ...` with exactly the given keys in order.
fn parse_kv_line(line: &str, lineno: usize, keys: &[&str]) -> Result<Vec<u64>, ParseError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != keys.len() {
        return err(lineno, format_args!("expected `{}`", example_kv(keys)));
    }
    let mut out = Vec::with_capacity(keys.len());
    for (tok, key) in toks.iter().zip(keys) {
        let Some(v) = tok.strip_prefix(key).and_then(|t| t.strip_prefix('=')) else {
            return err(lineno, format_args!("expected `{key}=<int>`, got {tok:?}"));
        };
        match v.parse::<u64>() {
            Ok(v) => out.push(v),
            Err(_) => return err(lineno, format_args!("bad integer {v:?} for `{key}`")),
        }
    }
    Ok(out)
}

fn example_kv(keys: &[&str]) -> String {
    keys.iter().map(|k| format!("{k}=<int>")).collect::<Vec<_>>().join(" ")
}

fn reject_trailing<'a>(
    rest: impl Iterator<Item = (usize, &'a str)>,
) -> Result<(), ParseError> {
    for (idx, line) in rest {
        if !line.trim().is_empty() {
            return err(idx + 1, "unexpected content after the final row");
        }
    }
    Ok(())
}

/// Parse a witness file in either the general (`witness v1`) or cyclic
/// (`cyclic v1`) format.
pub fn parse_witness_file(text: &str) -> Result<EdgeColoring, ParseError> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return err(1, "empty file; expected `witness v1` or `cyclic v1`");
    };
    match header {
        "witness v1" => parse_witness_body(lines),
        "cyclic v1" => parse_cyclic_body(lines),
        other => err(1, format_args!("unknown header {other:?}; expected `witness v1` or `cyclic v1`")),
    }
}

fn parse_witness_body<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<EdgeColoring, ParseError> {
    let Some((idx, shape)) = lines.next() else {
        return err(2, "missing `n=<int> r=<int>` line");
    };
    let kv = parse_kv_line(shape, idx + 1, &["n", "r"])?;
    let (n, r) = (kv[0] as usize, kv[1] as usize);
    if n == 0 || r == 0 {
        return err(idx + 1, "n and r must be positive");
    }
    if r > usize::from(u16::MAX) {
        return err(idx + 1, format_args!("r={r} is out of range"));
    }
    let mut colors: Vec<u16> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n.saturating_sub(1) {
        let Some((idx, row)) = lines.next() else {
            return err(i + 3, format_args!("missing color row for vertex {i}"));
        };
        let lineno = idx + 1;
        let expected = n - 1 - i;
        let mut got = 0usize;
        for tok in row.split_whitespace() {
            let c: u16 = match tok.parse() {
                Ok(c) => c,
                Err(_) => {
                    return err(lineno, format_args!("row for vertex {i}: bad color {tok:?}"))
                }
            };
            if c == 0 || usize::from(c) > r {
                return err(
                    lineno,
                    format_args!("row for vertex {i}: color {c} out of range 1..={r}"),
                );
            }
            colors.push(c);
            got += 1;
        }
        if got != expected {
            return err(
                lineno,
                format_args!("row for vertex {i}: expected {expected} colors, got {got}"),
            );
        }
    }
    reject_trailing(lines)?;
    make_coloring(n, r, colors).or_else(|e| err(2, e))
}

fn parse_cyclic_body<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<EdgeColoring, ParseError> {
    let Some((idx, shape)) = lines.next() else {
        return err(2, "missing `m=<int> r=<int>` line");
    };
    let header_line = idx + 1;
    let kv = parse_kv_line(shape, header_line, &["m", "r"])?;
    let (m, r) = (kv[0] as usize, kv[1] as usize);
    let mut classes: Vec<Vec<u32>> = Vec::with_capacity(r);
    for k in 1..=r {
        let Some((idx, line)) = lines.next() else {
            return err(header_line + k, format_args!("missing `class {k}:` line"));
        };
        let lineno = idx + 1;
        let prefix = format!("class {k}:");
        let Some(rest) = line.strip_prefix(&prefix) else {
            return err(lineno, format_args!("expected `class {k}: d1 d2 ...`"));
        };
        let mut dists = Vec::new();
        for tok in rest.split_whitespace() {
            let d: u32 = match tok.parse() {
                Ok(d) => d,
                Err(_) => return err(lineno, format_args!("class {k}: bad distance {tok:?}")),
            };
            if d == 0 || d as usize >= m {
                return err(
                    lineno,
                    format_args!("class {k}: distance {d} out of range 1..={}", m.max(1) - 1),
                );
            }
            dists.push(d);
        }
        for &d in &dists {
            let mirror = m as u32 - d;
            if !dists.contains(&mirror) {
                return err(
                    lineno,
                    format_args!("class {k} is not symmetric: contains {d} but not {mirror}"),
                );
            }
        }
        classes.push(dists);
    }
    reject_trailing(lines)?;
    cyclic_coloring(m, &classes).or_else(|e| err(header_line, e))
}

/// Canonical general-format text for a coloring. `parse_witness_file` on the
/// result reproduces `c` exactly.
pub fn render_witness(c: &EdgeColoring) -> String {
    use std::fmt::Write;
    let n = c.n();
    let mut out = String::new();
    let _ = writeln!(out, "witness v1");
    let _ = writeln!(out, "n={} r={}", n, c.r());
    for i in 0..n.saturating_sub(1) {
        for j in (i + 1)..n {
            if j > i + 1 {
                out.push(' ');
            }
            let _ = write!(out, "{}", c.color(i, j));
        }
        out.push('\n');
    }
    out
}

/// Parse a `partition v1` file. Structure only: sum-freeness is judged by
/// `validate_partition`, not the parser.
pub fn parse_partition_file(text: &str) -> Result<SumFreePartition, ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "partition v1")) => {}
        Some((_, other)) => {
            return err(1, format_args!("unknown header {other:?}; expected `partition v1`"))
        }
        None => return err(1, "empty file; expected `partition v1`"),
    }
    let Some((idx, shape)) = lines.next() else {
        return err(2, "missing `n=<int> r=<int> mode=<linear|cyclic>` line");
    };
    let header_line = idx + 1;
    let toks: Vec<&str> = shape.split_whitespace().collect();
    if toks.len() != 3 {
        return err(header_line, "expected `n=<int> r=<int> mode=<linear|cyclic>`");
    }
    let kv = parse_kv_line(&toks[..2].join(" "), header_line, &["n", "r"])?;
    let (n, r) = (kv[0], kv[1] as usize);
    let mode = match toks[2].strip_prefix("mode=") {
        Some("linear") => PartitionMode::Linear,
        Some("cyclic") => PartitionMode::Cyclic,
        _ => return err(header_line, format_args!("expected `mode=<linear|cyclic>`, got {:?}", toks[2])),
    };
    if n > u64::from(u32::MAX) {
        return err(header_line, format_args!("n={n} is out of range"));
    }
    let mut parts = Vec::with_capacity(r);
    for k in 1..=r {
        let Some((idx, line)) = lines.next() else {
            return err(header_line + k, format_args!("missing part line {k} of {r}"));
        };
        let lineno = idx + 1;
        let Some(rest) = line.strip_prefix("part:") else {
            return err(lineno, "expected `part: d1 d2 ...`");
        };
        let mut part = Vec::new();
        for tok in rest.split_whitespace() {
            match tok.parse::<u32>() {
                Ok(d) => part.push(d),
                Err(_) => return err(lineno, format_args!("part {k}: bad integer {tok:?}")),
            }
        }
        parts.push(part);
    }
    reject_trailing(lines)?;
    Ok(SumFreePartition { mode, n: n as u32, parts })
}

/// Canonical text for a partition; round-trips through
/// `parse_partition_file`.
pub fn render_partition(p: &SumFreePartition) -> String {
    use std::fmt::Write;
    let mode = match p.mode {
        PartitionMode::Linear => "linear",
        PartitionMode::Cyclic => "cyclic",
    };
    let mut out = String::new();
    let _ = writeln!(out, "partition v1");
    let _ = writeln!(out, "n={} r={} mode={}", p.n, p.parts.len(), mode);
    for part in &p.parts {
        out.push_str("part:");
        for d in part {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
    }
    out
}

/// One parsed fact line, canonicalized.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactLine {
    pub params: Params,
    pub kind: AssertKind,
    pub value: BigUint,
    /// Free-text citation; empty when the line had no `src="..."`.
    pub src: String,
}

/// Parse a facts file: one `R(k1,k2,...) <op> <value> [src="..."]` per line,
/// `#` comment lines and blank lines skipped, parameters canonicalized.
pub fn parse_facts_file(text: &str) -> Result<Vec<FactLine>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_fact_line(line, lineno)?);
    }
    Ok(out)
}

fn parse_fact_line(line: &str, lineno: usize) -> Result<FactLine, ParseError> {
    let Some(rest) = line.strip_prefix("R(") else {
        return err(lineno, "expected `R(k1,k2,...)`");
    };
    let Some(close) = rest.find(')') else {
        return err(lineno, "missing `)` after parameter list");
    };
    let mut ks = Vec::new();
    for tok in rest[..close].split(',') {
        match tok.trim().parse::<u32>() {
            Ok(k) => ks.push(k),
            Err(_) => return err(lineno, format_args!("bad parameter {:?}", tok.trim())),
        }
    }
    let params = Params::new(&ks).or_else(|e| err(lineno, e))?;
    let rest = rest[close + 1..].trim_start();
    let (kind, rest) = if let Some(r) = rest.strip_prefix(">=") {
        (AssertKind::Lower, r)
    } else if let Some(r) = rest.strip_prefix("<=") {
        (AssertKind::Upper, r)
    } else if let Some(r) = rest.strip_prefix('=') {
        (AssertKind::Exact, r)
    } else {
        return err(lineno, "expected `>=`, `<=`, or `=` after the parameter list");
    };
    let rest = rest.trim_start();
    let (digits, rest) = match rest.find(|c: char| !c.is_ascii_digit()) {
        Some(0) => return err(lineno, "expected an integer bound value"),
        Some(end) => rest.split_at(end),
        None if rest.is_empty() => return err(lineno, "expected an integer bound value"),
        None => (rest, ""),
    };
    let value: BigUint = digits.parse().expect("ascii digits");
    if value < BigUint::one() {
        return err(lineno, "bound values must be at least 1");
    }
    let rest = rest.trim_start();
    let src = if rest.is_empty() {
        String::new()
    } else {
        let Some(inner) = rest.strip_prefix("src=\"").and_then(|r| r.strip_suffix('"')) else {
            return err(lineno, format_args!("expected `src=\"...\"` at end of line, got {rest:?}"));
        };
        if inner.contains('"') {
            return err(lineno, "src text must not contain `\"`");
        }
        inner.to_string()
    };
    Ok(FactLine { params, kind, value, src })
}

/// Canonical text for fact lines (order preserved); round-trips through
/// `parse_facts_file`.
pub fn render_facts(facts: &[FactLine]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for f in facts {
        let op = match f.kind {
            AssertKind::Lower => ">=",
            AssertKind::Upper => "<=",
            AssertKind::Exact => "=",
        };
        let _ = write!(out, "{} {} {}", f.params, op, f.value);
        if !f.src.is_empty() {
            let _ = write!(out, " src=\"{}\"", f.src);
        }
        out.push('\n');
    }
    out
}

/// Assert every parsed fact into the base, in file order.
pub fn assert_facts(kb: &mut KnowledgeBase, facts: &[FactLine]) {
    for f in facts {
        kb.assert_fact(f.params.clone(), f.kind, f.value.clone(), &f.src);
    }
}

/// Fixed-width table of diagonal clique-3 bounds for `r = 2..=r_max`:
/// columns `r`, `lower`, `upper`, right-aligned, `?` where no bound is
/// recorded.
pub fn render_table_r3(kb: &KnowledgeBase, r_max: usize) -> String {
    assert!(r_max >= 2, "the table starts at two colors");
    let rows: Vec<(String, String, String)> = (2..=r_max)
        .map(|r| {
            let (lo, hi) = kb.best_bounds(&Params::diagonal(3, r));
            let cell = |v: Option<&BigUint>| v.map_or("?".to_string(), |v| v.to_string());
            (r.to_string(), cell(lo), cell(hi))
        })
        .collect();
    let width = |head: &str, pick: fn(&(String, String, String)) -> &String| {
        rows.iter().map(|row| pick(row).len()).chain([head.len()]).max().unwrap_or(1)
    };
    let (w0, w1, w2) = (
        width("r", |t| &t.0),
        width("lower", |t| &t.1),
        width("upper", |t| &t.2),
    );
    let mut out = format!("{:>w0$}  {:>w1$}  {:>w2$}\n", "r", "lower", "upper");
    for (r, lo, hi) in &rows {
        out.push_str(&format!("{r:>w0$}  {lo:>w1$}  {hi:>w2$}\n"));
    }
    out
}

/// Graph literals for the capacity command: `cyclic:<m>:<d1,d2,...>` is the
/// circulant with the given symmetric distance set, `complete:<n>` is `K_n`.
pub fn parse_graph_literal(s: &str) -> Result<Graph, ParseError> {
    if let Some(rest) = s.strip_prefix("complete:") {
        let n: usize = match rest.parse() {
            Ok(n) => n,
            Err(_) => return err(1, format_args!("bad vertex count {rest:?}")),
        };
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        return Ok(g);
    }
    if let Some(rest) = s.strip_prefix("cyclic:") {
        let Some((m_tok, d_tok)) = rest.split_once(':') else {
            return err(1, "expected `cyclic:<m>:<d1,d2,...>`");
        };
        let m: usize = match m_tok.parse() {
            Ok(m) if m >= 1 => m,
            _ => return err(1, format_args!("bad modulus {m_tok:?}")),
        };
        let mut dists = Vec::new();
        for tok in d_tok.split(',') {
            match tok.trim().parse::<u32>() {
                Ok(d) if d >= 1 && (d as usize) < m => dists.push(d),
                _ => {
                    return err(
                        1,
                        format_args!("distance {:?} out of range 1..={}", tok.trim(), m - 1),
                    )
                }
            }
        }
        return Ok(Graph::circulant(m, &dists));
    }
    err(1, format_args!("unknown graph literal {s:?}; expected `cyclic:<m>:<d1,...>` or `complete:<n>`"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_witness;
    use crate::construct::{builtin_witness, validate_partition};

    #[test]
    fn witness_round_trip_is_identity() {
        for name in ["c5", "wagner8", "cyc13", "paley17", "gf16"] {
            let c = builtin_witness(name).expect("builtin");
            let text = render_witness(&c);
            let back = parse_witness_file(&text).expect("canonical text parses");
            assert_eq!(back, c, "{name} round trip");
            assert_eq!(render_witness(&back), text, "{name} byte identity");
        }
    }

    #[test]
    fn witness_row_errors_name_the_row() {
        let text = "witness v1\nn=4 r=2\n1 2 2\n1\n2\n";
        let e = parse_witness_file(text).expect_err("short row");
        assert_eq!(e.line, 4);
        assert!(e.msg.contains("vertex 1"), "{}", e.msg);
        assert!(e.msg.contains("expected 2"), "{}", e.msg);

        let e = parse_witness_file("witness v1\nn=3 r=2\n1 3\n1\n").expect_err("bad color");
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("out of range"), "{}", e.msg);
    }

    #[test]
    fn cyclic_file_matches_builtin() {
        let text = "cyclic v1\nm=5 r=2\nclass 1: 1 4\nclass 2: 2 3\n";
        let c = parse_witness_file(text).expect("valid cyclic file");
        assert_eq!(c, builtin_witness("c5").expect("builtin"));
        let report = verify_witness(&c, &[3, 3]).expect("arity matches");
        assert!(report.valid);
    }

    #[test]
    fn cyclic_asymmetry_is_rejected_with_its_line() {
        let text = "cyclic v1\nm=5 r=2\nclass 1: 1 2\nclass 2: 3 4\n";
        let e = parse_witness_file(text).expect_err("class 1 asymmetric");
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("not symmetric"), "{}", e.msg);
    }

    #[test]
    fn partition_round_trip_and_validation() {
        let text = "partition v1\nn=13 r=3 mode=linear\npart: 1 4 10 13\npart: 2 3 11 12\npart: 5 6 7 8 9\n";
        let p = parse_partition_file(text).expect("parses");
        assert_eq!(render_partition(&p), text);
        let report = validate_partition(&p).expect("structurally sound");
        assert!(report.valid);
    }

    #[test]
    fn facts_parse_canonicalizes_and_round_trips() {
        let text = "# header comment\nR(4,3,5) >= 80\n\nR(3,3,3,3) <= 62 src=\"upper table\"\nR(3,3) = 6\n";
        let facts = parse_facts_file(text).expect("parses");
        assert_eq!(facts.len(), 3);
        assert_eq!(facts[0].params.ks(), &[3, 4, 5]);
        assert_eq!(facts[0].kind, AssertKind::Lower);
        assert_eq!(facts[1].src, "upper table");
        assert_eq!(facts[2].kind, AssertKind::Exact);

        let canon = render_facts(&facts);
        assert_eq!(
            canon,
            "R(3,4,5) >= 80\nR(3,3,3,3) <= 62 src=\"upper table\"\nR(3,3) = 6\n"
        );
        let back = parse_facts_file(&canon).expect("canonical parses");
        assert_eq!(back, facts);
        assert_eq!(render_facts(&back), canon);
    }

    #[test]
    fn fact_errors_carry_line_numbers() {
        let e = parse_facts_file("R(3,3) >= 6\nR(1,3) >= 2\n").expect_err("entry below 2");
        assert_eq!(e.line, 2);

        let e = parse_facts_file("R(3,3) >= 0\n").expect_err("zero value");
        assert_eq!(e.line, 1);

        let e = parse_facts_file("R(3,3) > 6\n").expect_err("bad operator");
        assert_eq!(e.line, 1);

        let e = parse_facts_file("R(3,3) >= 6 src=unquoted\n").expect_err("bad src");
        assert_eq!(e.line, 1);
    }

    #[test]
    fn table_renders_fixed_width_with_question_marks() {
        let kb = KnowledgeBase::new();
        assert_eq!(render_table_r3(&kb, 2), "r  lower  upper\n2      ?      ?\n");

        let mut kb = KnowledgeBase::new();
        assert_facts(
            &mut kb,
            &parse_facts_file("R(3,3) = 6\nR(3,3,3) >= 17\n").expect("parses"),
        );
        let table = render_table_r3(&kb, 3);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines, vec!["r  lower  upper", "2      6      6", "3     17      ?"]);
    }

    #[test]
    fn graph_literals_build_expected_graphs() {
        let c5 = parse_graph_literal("cyclic:5:1,4").expect("parses");
        assert_eq!(c5, Graph::cycle(5));
        let k4 = parse_graph_literal("complete:4").expect("parses");
        assert_eq!(k4.edge_count(), 6);
        assert!(parse_graph_literal("cyclic:5:0,4").is_err());
        assert!(parse_graph_literal("grid:3").is_err());
    }
}
