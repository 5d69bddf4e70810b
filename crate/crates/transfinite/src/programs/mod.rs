//! Program dialects, parsers, and the per-dialect Goedel numbering.
//!
//! Two dialects share the `.tfm` text format family:
//! - register: line-oriented assembly with labels, run by `wITRM`/`ITRM`;
//! - turing: a total transition table over named states with distinguished
//!   `halt` and `limit` states, run by `ITTM`, `alpha`-TMs and `OTM`s.

use std::fmt;

mod enumeration;
mod register;
mod turing;

pub use enumeration::{enumerate_program, program_index};

/// Which instruction set a program uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Register,
    Turing,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dialect::Register => write!(f, "register"),
            Dialect::Turing => write!(f, "turing"),
        }
    }
}

/// Register-dialect instruction. Register operands index into the declared
/// register file; jump targets are resolved line indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegInstr {
    /// `ZERO Rr`: set the register to 0.
    Zero(usize),
    /// `INC Rr`: increment.
    Inc(usize),
    /// `COPY Rs Rd`: copy source into destination.
    Copy { src: usize, dst: usize },
    /// `JEQ Ra Rb L`: jump to `L` when the registers are equal.
    Jeq { a: usize, b: usize, target: usize },
    /// `JMP L`: unconditional jump.
    Jmp { target: usize },
    /// `ORACLE Ri Rd`: store the oracle bit at index `R[i]` into `Rd`.
    OracleRead { idx: usize, dst: usize },
    /// `HALT`: stop with output `R0`.
    Halt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

/// One transition of a turing-dialect machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    /// Bit written to the scratch tape at the head.
    pub write: bool,
    pub mv: Move,
    pub next: usize,
    /// Mirror the written bit to the output tape.
    pub out: bool,
}

/// A turing-dialect program: named states with a transition table that is
/// total on every non-halt state and both tape bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuringTable {
    pub state_names: Vec<String>,
    /// First declared state.
    pub start: usize,
    pub halt: usize,
    pub limit: usize,
    /// `rules[state][scratch][oracle]`; `None` exactly for the halt state.
    pub rules: Vec<Option<[[Rule; 2]; 2]>>,
}

impl TuringTable {
    pub fn rule(&self, state: usize, scratch: bool, oracle: bool) -> &Rule {
        self.rules[state]
            .as_ref()
            .map(|r| &r[scratch as usize][oracle as usize])
            .expect("no transitions out of the halt state")
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegisterProgram {
    pub instructions: Vec<RegInstr>,
    pub register_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProgramBody {
    Register(RegisterProgram),
    Turing(TuringTable),
}

/// A parsed program in either dialect.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    pub name: String,
    pub body: ProgramBody,
}

impl Program {
    pub fn dialect(&self) -> Dialect {
        match &self.body {
            ProgramBody::Register(_) => Dialect::Register,
            ProgramBody::Turing(_) => Dialect::Turing,
        }
    }

    pub fn as_register(&self) -> Option<&RegisterProgram> {
        match &self.body {
            ProgramBody::Register(p) => Some(p),
            ProgramBody::Turing(_) => None,
        }
    }

    pub fn as_turing(&self) -> Option<&TuringTable> {
        match &self.body {
            ProgramBody::Turing(t) => Some(t),
            ProgramBody::Register(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.body {
            ProgramBody::Register(p) => p.instructions.len(),
            ProgramBody::Turing(t) => t.state_names.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Parse or validation failure, with a 1-based source line when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramError {
    pub line: Option<usize>,
    pub message: String,
}

impl ProgramError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        ProgramError {
            line: Some(line),
            message: message.into(),
        }
    }

    pub(crate) fn global(message: impl Into<String>) -> Self {
        ProgramError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ProgramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ProgramError {}

/// Parses source text in the given dialect.
pub fn parse_program(text: &str, dialect: Dialect) -> Result<Program, ProgramError> {
    match dialect {
        Dialect::Register => register::parse(text),
        Dialect::Turing => turing::parse(text),
    }
}

/// Canonical text for a program; reparsing yields an identical `Program`.
pub fn format_program(program: &Program) -> String {
    match &program.body {
        ProgramBody::Register(p) => register::format(&program.name, p),
        ProgramBody::Turing(t) => turing::format(&program.name, t),
    }
}

/// Guesses the dialect from source text: a `states:` header means turing.
pub fn sniff_dialect(text: &str) -> Dialect {
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("states:") {
            return Dialect::Turing;
        }
        return Dialect::Register;
    }
    Dialect::Register
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_register_example() {
        let p = parse_program("L0: INC R0\nJMP L0", Dialect::Register).unwrap();
        let reg = p.as_register().unwrap();
        assert_eq!(reg.instructions.len(), 2);
        assert_eq!(reg.register_count, 1);
        assert_eq!(reg.instructions[0], RegInstr::Inc(0));
        assert_eq!(reg.instructions[1], RegInstr::Jmp { target: 0 });
    }

    #[test]
    fn undeclared_register_is_named() {
        let err = parse_program("registers: 2\nINC R7\nHALT", Dialect::Register).unwrap_err();
        assert!(err.message.contains("R7"), "error should name R7: {err}");
    }

    #[test]
    fn non_total_turing_table_rejected() {
        let text = "states: s0 halt limit\n\
                    s0 0 0 -> 1 R halt\n\
                    s0 0 1 -> 1 R halt\n\
                    s0 1 0 -> 1 R halt\n\
                    s0 1 1 -> 1 R halt\n";
        let err = parse_program(text, Dialect::Turing).unwrap_err();
        assert!(
            err.message.contains("transition table not total"),
            "unexpected message: {err}"
        );
    }

    #[test]
    fn format_roundtrips() {
        let text = "registers: 3\nL0: ZERO R2\nJEQ R0 R2 L3\nCOPY R1 R0\nL3: ORACLE R0 R1\nHALT";
        let p = parse_program(text, Dialect::Register).unwrap();
        let rendered = format_program(&p);
        assert_eq!(parse_program(&rendered, Dialect::Register).unwrap(), p);

        let text = "states: a b halt limit\n\
                    a 0 0 -> 1 R b out\na 0 1 -> 0 L a\na 1 0 -> 1 L halt\na 1 1 -> 0 R limit\n\
                    b 0 0 -> 1 R b\nb 0 1 -> 0 L a out\nb 1 0 -> 1 L b\nb 1 1 -> 0 R halt\n\
                    limit 0 0 -> 0 L halt\nlimit 0 1 -> 0 L a\nlimit 1 0 -> 1 R b\nlimit 1 1 -> 0 L halt\n";
        let p = parse_program(text, Dialect::Turing).unwrap();
        let rendered = format_program(&p);
        assert_eq!(parse_program(&rendered, Dialect::Turing).unwrap(), p);
    }

    #[test]
    fn sniffing() {
        assert_eq!(sniff_dialect("# c\nstates: a halt limit\n"), Dialect::Turing);
        assert_eq!(sniff_dialect("registers: 1\nHALT"), Dialect::Register);
        assert_eq!(sniff_dialect("HALT"), Dialect::Register);
    }
}
