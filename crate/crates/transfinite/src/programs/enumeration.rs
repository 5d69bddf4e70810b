//! Bijective Goedel numbering of programs, per dialect.
//!
//! Register programs are graded by the diagonal `(register_count - 1) +
//! (length - 1)`; within a block every line is a digit in a mixed-radix
//! body rank, so `enumerate_program` and `program_index` are exact
//! inverses. Index 0 is the one-line program `HALT` with one register.
//!
//! Turing programs are graded by the number of regular states `n`; the
//! whole transition table (over the canonical state order: regular states
//! in declaration order, then `halt`, then `limit`) is one base-`8(n+2)`
//! numeral. `program_index` first canonicalizes state numbering, so it is
//! a left inverse of `enumerate_program` and is insensitive to state names.

use super::{
    Dialect, Move, Program, ProgramBody, RegInstr, RegisterProgram, Rule, TuringTable,
};
use num_bigint::BigUint;
use num_traits::Zero;

/// Deterministic enumeration of all valid programs of a dialect.
pub fn enumerate_program(index: &BigUint, dialect: Dialect) -> Program {
    match dialect {
        Dialect::Register => Program {
            name: String::new(),
            body: ProgramBody::Register(enumerate_register(index)),
        },
        Dialect::Turing => Program {
            name: String::new(),
            body: ProgramBody::Turing(enumerate_turing(index)),
        },
    }
}

/// Left inverse of [`enumerate_program`].
pub fn program_index(program: &Program) -> BigUint {
    match &program.body {
        ProgramBody::Register(p) => index_register(p),
        ProgramBody::Turing(t) => index_turing(t),
    }
}

// ---------------------------------------------------------------- register

/// Number of distinct instructions given `k` registers and length `l`.
fn instr_space(k: usize, l: usize) -> usize {
    1 + 2 * k + 2 * k * k + l + k * k * l
}

fn instr_rank(instr: &RegInstr, k: usize, l: usize) -> usize {
    match instr {
        RegInstr::Halt => 0,
        RegInstr::Zero(r) => 1 + r,
        RegInstr::Inc(r) => 1 + k + r,
        RegInstr::Copy { src, dst } => 1 + 2 * k + src * k + dst,
        RegInstr::OracleRead { idx, dst } => 1 + 2 * k + k * k + idx * k + dst,
        RegInstr::Jmp { target } => 1 + 2 * k + 2 * k * k + target,
        RegInstr::Jeq { a, b, target } => {
            1 + 2 * k + 2 * k * k + l + (a * k + b) * l + target
        }
    }
}

fn instr_unrank(mut rank: usize, k: usize, l: usize) -> RegInstr {
    if rank == 0 {
        return RegInstr::Halt;
    }
    rank -= 1;
    if rank < k {
        return RegInstr::Zero(rank);
    }
    rank -= k;
    if rank < k {
        return RegInstr::Inc(rank);
    }
    rank -= k;
    if rank < k * k {
        return RegInstr::Copy {
            src: rank / k,
            dst: rank % k,
        };
    }
    rank -= k * k;
    if rank < k * k {
        return RegInstr::OracleRead {
            idx: rank / k,
            dst: rank % k,
        };
    }
    rank -= k * k;
    if rank < l {
        return RegInstr::Jmp { target: rank };
    }
    rank -= l;
    debug_assert!(rank < k * k * l);
    let target = rank % l;
    let ab = rank / l;
    RegInstr::Jeq {
        a: ab / k,
        b: ab % k,
        target,
    }
}

fn register_block_size(k: usize, l: usize) -> BigUint {
    BigUint::from(instr_space(k, l)).pow(l as u32)
}

fn enumerate_register(index: &BigUint) -> RegisterProgram {
    let mut rem = index.clone();
    let mut diagonal = 0usize;
    loop {
        for k in 1..=diagonal + 1 {
            let l = diagonal + 2 - k;
            let block = register_block_size(k, l);
            if rem < block {
                let radix = BigUint::from(instr_space(k, l));
                let mut instructions = Vec::with_capacity(l);
                for _ in 0..l {
                    let digit = (&rem % &radix).try_into().expect("digit fits usize");
                    rem /= &radix;
                    instructions.push(instr_unrank(digit, k, l));
                }
                return RegisterProgram {
                    instructions,
                    register_count: k,
                };
            }
            rem -= block;
        }
        diagonal += 1;
    }
}

fn index_register(p: &RegisterProgram) -> BigUint {
    let k = p.register_count;
    let l = p.instructions.len();
    assert!(k >= 1 && l >= 1, "valid programs are nonempty with a register");
    let mut index = BigUint::zero();
    let diagonal = (k - 1) + (l - 1);
    for d in 0..diagonal {
        for k2 in 1..=d + 1 {
            index += register_block_size(k2, d + 2 - k2);
        }
    }
    for k2 in 1..k {
        index += register_block_size(k2, diagonal + 2 - k2);
    }
    let radix = BigUint::from(instr_space(k, l));
    let mut body = BigUint::zero();
    for instr in p.instructions.iter().rev() {
        body = body * &radix + BigUint::from(instr_rank(instr, k, l));
    }
    index + body
}

// ------------------------------------------------------------------ turing

fn turing_radix(n: usize) -> usize {
    8 * (n + 2)
}

fn turing_block_size(n: usize) -> BigUint {
    BigUint::from(turing_radix(n)).pow(4 * (n + 1) as u32)
}

fn rule_rank(rule: &Rule, canonical_next: usize, n: usize) -> usize {
    let style = ((rule.out as usize) * 2 + rule.write as usize) * 2
        + matches!(rule.mv, Move::Right) as usize;
    style * (n + 2) + canonical_next
}

fn rule_unrank(rank: usize, n: usize) -> Rule {
    let next = rank % (n + 2);
    let style = rank / (n + 2);
    Rule {
        mv: if style & 1 == 1 { Move::Right } else { Move::Left },
        write: style >> 1 & 1 == 1,
        out: style >> 2 & 1 == 1,
        next,
    }
}

fn enumerate_turing(index: &BigUint) -> TuringTable {
    let mut rem = index.clone();
    let mut n = 1usize;
    loop {
        let block = turing_block_size(n);
        if rem < block {
            let radix = BigUint::from(turing_radix(n));
            let mut state_names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
            state_names.push("halt".to_string());
            state_names.push("limit".to_string());
            let halt = n;
            let limit = n + 1;
            let mut rules: Vec<Option<[[Rule; 2]; 2]>> = vec![None; n + 2];
            // Acting states in canonical order: regulars then limit.
            for acting in 0..n + 1 {
                let state = if acting < n { acting } else { limit };
                let mut cells = [[Rule {
                    write: false,
                    mv: Move::Left,
                    next: 0,
                    out: false,
                }; 2]; 2];
                for s in 0..2 {
                    for o in 0..2 {
                        let digit: usize =
                            (&rem % &radix).try_into().expect("digit fits usize");
                        rem /= &radix;
                        cells[s][o] = rule_unrank(digit, n);
                    }
                }
                rules[state] = Some(cells);
            }
            return TuringTable {
                state_names,
                start: 0,
                halt,
                limit,
                rules,
            };
        }
        rem -= block;
        n += 1;
    }
}

fn index_turing(t: &TuringTable) -> BigUint {
    let n = t.state_names.len() - 2;
    // Canonical numbering: regular states in declaration order, halt -> n,
    // limit -> n + 1.
    let mut canonical = vec![0usize; t.state_names.len()];
    let mut regulars = Vec::new();
    let mut next_regular = 0;
    for id in 0..t.state_names.len() {
        if id == t.halt {
            canonical[id] = n;
        } else if id == t.limit {
            canonical[id] = n + 1;
        } else {
            canonical[id] = next_regular;
            next_regular += 1;
            regulars.push(id);
        }
    }
    let radix = BigUint::from(turing_radix(n));
    let mut rank = BigUint::zero();
    let mut acting: Vec<usize> = regulars;
    acting.push(t.limit);
    for state in acting.iter().rev() {
        let cells = t.rules[*state].as_ref().expect("acting states have rows");
        for s in (0..2).rev() {
            for o in (0..2).rev() {
                let rule = &cells[s][o];
                rank = rank * &radix
                    + BigUint::from(rule_rank(rule, canonical[rule.next], n));
            }
        }
    }
    let mut index = BigUint::zero();
    for n2 in 1..n {
        index += turing_block_size(n2);
    }
    index + rank
}

#[cfg(test)]
mod tests {
    use super::super::{format_program, parse_program};
    use super::*;

    #[test]
    fn index_zero_is_halt() {
        let p = enumerate_program(&BigUint::zero(), Dialect::Register);
        let reg = p.as_register().unwrap();
        assert_eq!(reg.instructions, vec![RegInstr::Halt]);
        assert_eq!(reg.register_count, 1);
        assert!(program_index(&p).is_zero());

        let t = enumerate_program(&BigUint::zero(), Dialect::Turing);
        assert!(program_index(&t).is_zero());
    }

    #[test]
    fn roundtrip_prefix() {
        for i in 0..10_000u64 {
            let i = BigUint::from(i);
            for dialect in [Dialect::Register, Dialect::Turing] {
                let p = enumerate_program(&i, dialect);
                assert_eq!(program_index(&p), i, "index(enumerate({i})) in {dialect}");
            }
        }
    }

    #[test]
    fn roundtrip_large_and_sparse() {
        let samples = [
            "123456789",
            "999999999999",
            "31415926535897932384626433",
            "2718281828459045235360287471352662497757",
        ];
        for s in samples {
            let i: BigUint = s.parse().unwrap();
            for dialect in [Dialect::Register, Dialect::Turing] {
                let p = enumerate_program(&i, dialect);
                assert_eq!(program_index(&p), i, "large roundtrip in {dialect}");
            }
        }
    }

    #[test]
    fn inverse_lookup_of_handwritten_program() {
        let p = parse_program("INC R0\nHALT", Dialect::Register).unwrap();
        let k = program_index(&p);
        let q = enumerate_program(&k, Dialect::Register);
        assert_eq!(q.as_register().unwrap(), p.as_register().unwrap());
    }

    #[test]
    fn enumerated_programs_format_and_reparse() {
        for i in (0..4000u64).step_by(37) {
            let i = BigUint::from(i);
            for dialect in [Dialect::Register, Dialect::Turing] {
                let p = enumerate_program(&i, dialect);
                let text = format_program(&p);
                let q = parse_program(&text, dialect).unwrap();
                assert_eq!(p, q, "reparse of enumerated program {i} in {dialect}");
            }
        }
    }

    #[test]
    fn canonicalizes_state_names_for_indexing() {
        let text = "states: go halt limit\n\
                    go 0 0 -> 1 R go\ngo 0 1 -> 1 R go\ngo 1 0 -> 1 R go\ngo 1 1 -> 1 R go\n\
                    limit 0 0 -> 0 L halt\nlimit 0 1 -> 0 L halt\nlimit 1 0 -> 0 L halt\nlimit 1 1 -> 0 L halt\n";
        let p = parse_program(text, Dialect::Turing).unwrap();
        let i = program_index(&p);
        let q = enumerate_program(&i, Dialect::Turing);
        let (pt, qt) = (p.as_turing().unwrap(), q.as_turing().unwrap());
        assert_eq!(qt.state_names, vec!["s0", "halt", "limit"]);
        assert_eq!(pt.rules, qt.rules);
    }
}
