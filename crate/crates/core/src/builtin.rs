//! Codes and tables embedded in the binary.

use crate::cocycle::CocycleTable;
use crate::code::Code;
use crate::error::{Error, Result};

pub const HAMMING84: [&str; 4] = ["10000111", "01001011", "00101101", "00011110"];

/// The Golay basis `b1..b6`; its span is the `V` half of the standard split.
pub const GOLAY_V_ROWS: [&str; 6] = [
    "000110000000010110100011",
    "101001111101101111110001",
    "000100000000100100111110",
    "010000000010000110101101",
    "000000000010010101010111",
    "100000000000100111110001",
];

/// The Golay basis `b7..b12`; its span is the `W` half of the standard split.
pub const GOLAY_W_ROWS: [&str; 6] = [
    "101001011100111001111111",
    "100000011100001001001100",
    "000001000000111001001110",
    "100000001000111000111000",
    "100000000100101000010111",
    "011011000001111011111111",
];

/// The cocycle `d` on `V_4 = (F_2)^2` whose extension is the quaternion group,
/// rows and columns in the order `00, 10, 01, 11`.
pub const Q8_COCYCLE: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 1, 0, 1]];

pub const NAMES: [&str; 5] = [
    "hamming84",
    "golay_paper_basis",
    "golay_V_subbasis",
    "golay_W_subbasis",
    "q8_cocycle_d",
];

#[derive(Debug, Clone)]
pub enum Builtin {
    Code(Code),
    Table(CocycleTable),
}

pub fn builtin(name: &str) -> Result<Builtin> {
    match name {
        "q8_cocycle_d" => Ok(Builtin::Table(q8_cocycle())),
        other => builtin_code(other).map(Builtin::Code),
    }
}

/// Built-in codes by name. `golay` is accepted as a short form of
/// `golay_paper_basis`.
pub fn builtin_code(name: &str) -> Result<Code> {
    match name {
        "hamming84" => hamming84(),
        "golay" | "golay_paper_basis" => golay(),
        "golay_V_subbasis" => Code::from_rows(&GOLAY_V_ROWS),
        "golay_W_subbasis" => Code::from_rows(&GOLAY_W_ROWS),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

pub fn hamming84() -> Result<Code> {
    Code::from_rows(&HAMMING84)
}

/// The Golay code with basis `b1..b12` in printed order.
pub fn golay() -> Result<Code> {
    let rows: Vec<&str> = GOLAY_V_ROWS.iter().chain(GOLAY_W_ROWS.iter()).copied().collect();
    Code::from_rows(&rows)
}

/// `V_4` with basis `10, 01` carrying the cocycle `d`.
pub fn q8_cocycle() -> CocycleTable {
    let code = Code::from_rows(&["10", "01"]).expect("V4 basis is independent");
    CocycleTable::from_fn(code, |r, c| Q8_COCYCLE[r][c]).expect("V4 table is small")
}
