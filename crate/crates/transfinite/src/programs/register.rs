//! Register dialect: line-oriented assembly with labels.
//!
//! ```text
//! # comment
//! registers: 3            (optional; inferred as max index + 1 if absent)
//! L0: INC R0
//!     JEQ R0, R2, L3      (commas optional)
//!     JMP L0
//! L3: HALT
//! ```
//!
//! Jump operands accept a label or a bare line number. Without a
//! `registers:` header the register count is inferred, with a minimum of 1
//! so the `R0` output convention always has a home.

use super::{Program, ProgramBody, ProgramError, RegInstr, RegisterProgram};
use std::collections::HashMap;

enum JumpRef {
    Line(usize),
    Label(String),
}

enum RawInstr {
    Zero(usize),
    Inc(usize),
    Copy(usize, usize),
    Jeq(usize, usize, JumpRef),
    Jmp(JumpRef),
    OracleRead(usize, usize),
    Halt,
}

pub(super) fn parse(text: &str) -> Result<Program, ProgramError> {
    let mut name = String::new();
    let mut declared_registers: Option<usize> = None;
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut raw: Vec<(usize, RawInstr)> = Vec::new();

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
        if let Some(rest) = line.strip_prefix("registers:") {
            let n = rest.trim().parse::<usize>().map_err(|_| {
                ProgramError::at(lineno, format!("bad register count `{}`", rest.trim()))
            })?;
            declared_registers = Some(n);
            continue;
        }
        let mut body = line;
        if let Some((label, rest)) = line.split_once(':') {
            let label = label.trim();
            if !is_identifier(label) {
                return Err(ProgramError::at(lineno, format!("bad label `{label}`")));
            }
            if labels.insert(label.to_string(), raw.len()).is_some() {
                return Err(ProgramError::at(lineno, format!("duplicate label `{label}`")));
            }
            body = rest.trim();
        }
        if body.is_empty() {
            return Err(ProgramError::at(lineno, "label without an instruction"));
        }
        let tokens: Vec<&str> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let instr = parse_instr(lineno, &tokens)?;
        raw.push((lineno, instr));
    }

    if raw.is_empty() {
        return Err(ProgramError::global("program has no instructions"));
    }

    let len = raw.len();
    let resolve = |r: &JumpRef, lineno: usize| -> Result<usize, ProgramError> {
        let target = match r {
            JumpRef::Line(n) => *n,
            JumpRef::Label(l) => *labels
                .get(l)
                .ok_or_else(|| ProgramError::at(lineno, format!("unresolved label `{l}`")))?,
        };
        if target >= len {
            return Err(ProgramError::at(
                lineno,
                format!("jump target {target} out of range (program length {len})"),
            ));
        }
        Ok(target)
    };

    let mut instructions = Vec::with_capacity(len);
    let mut max_register = None::<usize>;
    for (lineno, r) in &raw {
        let instr = match r {
            RawInstr::Zero(r0) => RegInstr::Zero(*r0),
            RawInstr::Inc(r0) => RegInstr::Inc(*r0),
            RawInstr::Copy(s, d) => RegInstr::Copy { src: *s, dst: *d },
            RawInstr::Jeq(a, b, t) => RegInstr::Jeq {
                a: *a,
                b: *b,
                target: resolve(t, *lineno)?,
            },
            RawInstr::Jmp(t) => RegInstr::Jmp {
                target: resolve(t, *lineno)?,
            },
            RawInstr::OracleRead(i, d) => RegInstr::OracleRead { idx: *i, dst: *d },
            RawInstr::Halt => RegInstr::Halt,
        };
        for reg in instr_registers(&instr) {
            max_register = Some(max_register.map_or(reg, |m| m.max(reg)));
            if let Some(count) = declared_registers {
                if reg >= count {
                    return Err(ProgramError::at(
                        *lineno,
                        format!("register R{reg} out of range (register_count {count})"),
                    ));
                }
            }
        }
        instructions.push(instr);
    }

    let register_count =
        declared_registers.unwrap_or_else(|| max_register.map_or(1, |m| m + 1));
    Ok(Program {
        name,
        body: ProgramBody::Register(RegisterProgram {
            instructions,
            register_count,
        }),
    })
}

fn parse_instr(lineno: usize, tokens: &[&str]) -> Result<RawInstr, ProgramError> {
    let opcode = tokens[0].to_ascii_uppercase();
    let expect = |n: usize| -> Result<(), ProgramError> {
        if tokens.len() - 1 != n {
            Err(ProgramError::at(
                lineno,
                format!("{opcode} expects {n} operand(s), got {}", tokens.len() - 1),
            ))
        } else {
            Ok(())
        }
    };
    match opcode.as_str() {
        "ZERO" => {
            expect(1)?;
            Ok(RawInstr::Zero(register(lineno, tokens[1])?))
        }
        "INC" => {
            expect(1)?;
            Ok(RawInstr::Inc(register(lineno, tokens[1])?))
        }
        "COPY" => {
            expect(2)?;
            Ok(RawInstr::Copy(
                register(lineno, tokens[1])?,
                register(lineno, tokens[2])?,
            ))
        }
        "JEQ" => {
            expect(3)?;
            Ok(RawInstr::Jeq(
                register(lineno, tokens[1])?,
                register(lineno, tokens[2])?,
                jump_ref(tokens[3]),
            ))
        }
        "JMP" => {
            expect(1)?;
            Ok(RawInstr::Jmp(jump_ref(tokens[1])))
        }
        "ORACLE" => {
            expect(2)?;
            Ok(RawInstr::OracleRead(
                register(lineno, tokens[1])?,
                register(lineno, tokens[2])?,
            ))
        }
        "HALT" => {
            expect(0)?;
            Ok(RawInstr::Halt)
        }
        other => Err(ProgramError::at(lineno, format!("unknown opcode `{other}`"))),
    }
}

fn register(lineno: usize, token: &str) -> Result<usize, ProgramError> {
    token
        .strip_prefix(['R', 'r'])
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| ProgramError::at(lineno, format!("expected a register, got `{token}`")))
}

fn jump_ref(token: &str) -> JumpRef {
    match token.parse::<usize>() {
        Ok(n) => JumpRef::Line(n),
        Err(_) => JumpRef::Label(token.to_string()),
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn instr_registers(instr: &RegInstr) -> Vec<usize> {
    match instr {
        RegInstr::Zero(r) | RegInstr::Inc(r) => vec![*r],
        RegInstr::Copy { src, dst } => vec![*src, *dst],
        RegInstr::Jeq { a, b, .. } => vec![*a, *b],
        RegInstr::Jmp { .. } | RegInstr::Halt => vec![],
        RegInstr::OracleRead { idx, dst } => vec![*idx, *dst],
    }
}

pub(super) fn format(name: &str, p: &RegisterProgram) -> String {
    let mut targets: Vec<usize> = p
        .instructions
        .iter()
        .filter_map(|i| match i {
            RegInstr::Jeq { target, .. } | RegInstr::Jmp { target } => Some(*target),
            _ => None,
        })
        .collect();
    targets.sort_unstable();
    targets.dedup();

    let mut out = String::new();
    if !name.is_empty() {
        out.push_str(&format!("# program: {name}\n"));
    }
    out.push_str(&format!("registers: {}\n", p.register_count));
    for (i, instr) in p.instructions.iter().enumerate() {
        if targets.binary_search(&i).is_ok() {
            out.push_str(&format!("L{i}: "));
        }
        let text = match instr {
            RegInstr::Zero(r) => format!("ZERO R{r}"),
            RegInstr::Inc(r) => format!("INC R{r}"),
            RegInstr::Copy { src, dst } => format!("COPY R{src} R{dst}"),
            RegInstr::Jeq { a, b, target } => format!("JEQ R{a} R{b} L{target}"),
            RegInstr::Jmp { target } => format!("JMP L{target}"),
            RegInstr::OracleRead { idx, dst } => format!("ORACLE R{idx} R{dst}"),
            RegInstr::Halt => "HALT".to_string(),
        };
        out.push_str(&text);
        out.push('\n');
    }
    out
}
