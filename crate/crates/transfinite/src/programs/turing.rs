//! Turing dialect: a header naming the states followed by transition rows.
//!
//! ```text
//! states: s0 s1 halt limit
//! s0 0 0 -> 1 R s1 out
//! ...
//! limit 1 1 -> 0 L halt
//! ```
//!
//! The first declared state is the start state. `halt` and `limit` must
//! both appear; `halt` has no outgoing rows, every other state needs all
//! four `(scratch, oracle)` rows. The optional trailing `out` mirrors the
//! written bit to the output tape.

use super::{Move, Program, ProgramBody, ProgramError, Rule, TuringTable};
use std::collections::HashMap;

pub(super) fn parse(text: &str) -> Result<Program, ProgramError> {
    let mut name = String::new();
    let mut state_names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut rows: Vec<Option<[[Option<Rule>; 2]; 2]>> = Vec::new();
    let mut seen_header = false;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if let Some(rest) = line.trim().strip_prefix("# program:") {
            name = rest.trim().to_string();
            continue;
        }
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("states:") {
            if seen_header {
                return Err(ProgramError::at(lineno, "duplicate `states:` header"));
            }
            seen_header = true;
            for word in rest.split_whitespace() {
                if index.insert(word.to_string(), state_names.len()).is_some() {
                    return Err(ProgramError::at(lineno, format!("duplicate state `{word}`")));
                }
                state_names.push(word.to_string());
                rows.push(None);
            }
            continue;
        }
        if !seen_header {
            return Err(ProgramError::at(lineno, "expected `states:` header first"));
        }
        parse_row(lineno, line, &index, &mut rows)?;
    }

    if !seen_header {
        return Err(ProgramError::global("missing `states:` header"));
    }
    let halt = *index
        .get("halt")
        .ok_or_else(|| ProgramError::global("no `halt` state declared"))?;
    let limit = *index
        .get("limit")
        .ok_or_else(|| ProgramError::global("no `limit` state declared"))?;
    if state_names.len() < 3 {
        return Err(ProgramError::global(
            "need at least one state besides `halt` and `limit`",
        ));
    }
    let start = 0;
    if start == halt || start == limit {
        return Err(ProgramError::global(
            "the first declared state is the start state and cannot be `halt` or `limit`",
        ));
    }

    let mut rules: Vec<Option<[[Rule; 2]; 2]>> = Vec::with_capacity(rows.len());
    for (state, row) in rows.iter().enumerate() {
        if state == halt {
            if row.is_some() {
                return Err(ProgramError::global("the halt state cannot have transitions"));
            }
            rules.push(None);
            continue;
        }
        let Some(cells) = row else {
            return Err(ProgramError::global(format!(
                "transition table not total: state `{}` has no rows",
                state_names[state]
            )));
        };
        let mut filled = [[Rule {
            write: false,
            mv: Move::Left,
            next: 0,
            out: false,
        }; 2]; 2];
        for s in 0..2 {
            for o in 0..2 {
                filled[s][o] = cells[s][o].ok_or_else(|| {
                    ProgramError::global(format!(
                        "transition table not total: state `{}` is missing the ({s}, {o}) row",
                        state_names[state]
                    ))
                })?;
            }
        }
        rules.push(Some(filled));
    }

    Ok(Program {
        name,
        body: ProgramBody::Turing(TuringTable {
            state_names,
            start,
            halt,
            limit,
            rules,
        }),
    })
}

fn parse_row(
    lineno: usize,
    line: &str,
    index: &HashMap<String, usize>,
    rows: &mut [Option<[[Option<Rule>; 2]; 2]>],
) -> Result<(), ProgramError> {
    let (lhs, rhs) = line
        .split_once("->")
        .ok_or_else(|| ProgramError::at(lineno, "expected `state scratch oracle -> write move next [out]`"))?;
    let lhs: Vec<&str> = lhs.split_whitespace().collect();
    let rhs: Vec<&str> = rhs.split_whitespace().collect();
    if lhs.len() != 3 || rhs.len() < 3 || rhs.len() > 4 {
        return Err(ProgramError::at(
            lineno,
            "expected `state scratch oracle -> write move next [out]`",
        ));
    }
    let state = *index
        .get(lhs[0])
        .ok_or_else(|| ProgramError::at(lineno, format!("unknown state `{}`", lhs[0])))?;
    let scratch = parse_bit(lineno, lhs[1])?;
    let oracle = parse_bit(lineno, lhs[2])?;
    let write = parse_bit(lineno, rhs[0])?;
    let mv = match rhs[1] {
        "L" | "l" => Move::Left,
        "R" | "r" => Move::Right,
        other => return Err(ProgramError::at(lineno, format!("bad move `{other}`"))),
    };
    let next = *index
        .get(rhs[2])
        .ok_or_else(|| ProgramError::at(lineno, format!("unknown state `{}`", rhs[2])))?;
    let out = match rhs.get(3) {
        None => false,
        Some(&"out") => true,
        Some(other) => {
            return Err(ProgramError::at(lineno, format!("unexpected token `{other}`")))
        }
    };
    let cell = &mut rows[state].get_or_insert_with(Default::default)[scratch as usize]
        [oracle as usize];
    if cell.is_some() {
        return Err(ProgramError::at(
            lineno,
            format!("duplicate row for ({}, {}, {})", lhs[0], lhs[1], lhs[2]),
        ));
    }
    *cell = Some(Rule {
        write,
        mv,
        next,
        out,
    });
    Ok(())
}

fn parse_bit(lineno: usize, token: &str) -> Result<bool, ProgramError> {
    match token {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(ProgramError::at(lineno, format!("bad bit `{other}`"))),
    }
}

pub(super) fn format(name: &str, t: &TuringTable) -> String {
    let mut out = String::new();
    if !name.is_empty() {
        out.push_str(&format!("# program: {name}\n"));
    }
    out.push_str("states:");
    for s in &t.state_names {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    for (state, row) in t.rules.iter().enumerate() {
        let Some(cells) = row else { continue };
        for s in 0..2 {
            for o in 0..2 {
                let rule = &cells[s][o];
                out.push_str(&format!(
                    "{} {s} {o} -> {} {} {}{}\n",
                    t.state_names[state],
                    rule.write as u8,
                    match rule.mv {
                        Move::Left => "L",
                        Move::Right => "R",
                    },
                    t.state_names[rule.next],
                    if rule.out { " out" } else { "" },
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse_program, Dialect};

    fn total_machine() -> String {
        let mut text = String::from("states: s0 halt limit\n");
        for state in ["s0", "limit"] {
            for s in 0..2 {
                for o in 0..2 {
                    text.push_str(&format!("{state} {s} {o} -> 1 R halt\n"));
                }
            }
        }
        text
    }

    #[test]
    fn parses_total_machine() {
        let p = parse_program(&total_machine(), Dialect::Turing).unwrap();
        let t = p.as_turing().unwrap();
        assert_eq!(t.start, 0);
        assert_eq!(t.state_names[t.halt], "halt");
        assert_eq!(t.state_names[t.limit], "limit");
        assert!(t.rules[t.halt].is_none());
    }

    #[test]
    fn rejects_halt_rows() {
        let mut text = total_machine();
        text.push_str("halt 0 0 -> 1 R s0\n");
        let err = parse_program(&text, Dialect::Turing).unwrap_err();
        assert!(err.message.contains("halt state"));
    }

    #[test]
    fn rejects_duplicate_rows() {
        let mut text = total_machine();
        text.push_str("s0 0 0 -> 1 R halt\n");
        let err = parse_program(&text, Dialect::Turing).unwrap_err();
        assert!(err.message.contains("duplicate row"));
    }

    #[test]
    fn rejects_missing_states() {
        let err = parse_program("states: s0 halt\ns0 0 0 -> 1 R halt\n", Dialect::Turing)
            .unwrap_err();
        assert!(err.message.contains("limit"));
    }
}
