//! JSON API over a [`Session`], independent of the HTTP server.
//!
//! | method | path          | body / query                      | response |
//! |--------|---------------|-----------------------------------|----------|
//! | GET    | `/code`       |                                   | [`CodeView`] |
//! | POST   | `/basis`      | [`BasisOp`] as JSON               | [`CodeView`] after rebuild |
//! | GET    | `/fragment`   |                                   | [`FragmentView`] |
//! | GET    | `/subloop`    | `basis=<tok>,<tok>,...`           | [`SubloopReport`] |
//! | GET    | `/image.pbm`  |                                   | binary PBM of the fragment |
//!
//! A `/subloop` token is either a codeword (an `n`-character bitstring or
//! `0x` hex) or a 0-based row index into the current basis. Errors are
//! `{"error": "..."}` with status 400 for malformed requests and 422 when
//! the request is well formed but the rows are dependent or leave the code.

use std::sync::RwLock;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::Serialize;

use crate::bitmatrix::BitMatrix;
use crate::code::Code;
use crate::code_loop::SubloopReport;
use crate::error::Error;
use crate::fragment::QuadrantStats;
use crate::render::basis_hash;
use crate::session::{BasisOp, Session};
use crate::word::BitWord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl Response {
    fn json<T: Serialize>(status: u16, value: &T) -> Self {
        let mut body = serde_json::to_vec(value).expect("API views serialize");
        body.push(b'\n');
        Response {
            status,
            content_type: "application/json",
            body,
        }
    }

    fn error(status: u16, msg: impl Into<String>) -> Self {
        #[derive(Serialize)]
        struct E {
            error: String,
        }
        Self::json(status, &E { error: msg.into() })
    }

    pub fn body_str(&self) -> &str {
        std::str::from_utf8(&self.body).unwrap_or("")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeView {
    pub name: String,
    pub length: usize,
    pub dimension: usize,
    pub v_dim: usize,
    pub choice_bit: u8,
    pub basis: Vec<String>,
    pub basis_hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Blocks {
    pub vv: Vec<String>,
    pub vw: Vec<String>,
    pub wv: Vec<String>,
    pub ww: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FragmentView {
    pub v_dim: usize,
    pub w_dim: usize,
    pub stored_values: u64,
    /// Each block as base64 of its MSB-first rows, one string per row.
    pub blocks: Blocks,
    pub stats: QuadrantStats,
    pub regularity: f64,
}

fn b64_rows(m: &BitMatrix) -> Vec<String> {
    (0..m.rows()).map(|r| STANDARD.encode(m.row_msb_bytes(r))).collect()
}

pub fn code_view(s: &Session) -> CodeView {
    let code = s.code();
    CodeView {
        name: s.name().to_string(),
        length: code.length(),
        dimension: code.dimension(),
        v_dim: s.v_dim(),
        choice_bit: s.choice_bit(),
        basis: code.basis().iter().map(|b| b.to_string()).collect(),
        basis_hash: basis_hash(code),
    }
}

pub fn fragment_view(s: &Session) -> FragmentView {
    let f = s.fragment();
    FragmentView {
        v_dim: f.v_dim(),
        w_dim: f.w_dim(),
        stored_values: f.stored_values(),
        blocks: Blocks {
            vv: b64_rows(f.vv()),
            vw: b64_rows(f.vw()),
            wv: b64_rows(&f.wv_or_derived()),
            ww: b64_rows(f.ww()),
        },
        stats: f.quadrant_stats(),
        regularity: s.regularity(),
    }
}

/// Resolves comma-separated row tokens (codewords or basis indices).
pub fn resolve_rows(code: &Code, tokens: &str) -> Result<Vec<BitWord>, Error> {
    tokens
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let is_word = t.starts_with("0x")
                || (t.len() == code.length() && t.chars().all(|c| c == '0' || c == '1'));
            if is_word {
                BitWord::parse(t, code.length())
            } else {
                let i: usize = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad row token '{t}'")))?;
                code.basis()
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("row {i} out of range")))
            }
        })
        .collect()
}

fn status_for(e: &Error) -> u16 {
    match e {
        Error::DependentBasis { .. } | Error::NotInCode(_) | Error::NotComplementary(_) | Error::NotDoublyEven(_) => 422,
        Error::InvalidArgument(msg) if msg.contains("span") => 422,
        _ => 400,
    }
}

pub struct Api {
    session: RwLock<Session>,
}

impl Api {
    pub fn new(session: Session) -> Self {
        Api {
            session: RwLock::new(session),
        }
    }

    pub fn session(&self) -> std::sync::RwLockReadGuard<'_, Session> {
        self.session.read().expect("session lock")
    }

    pub fn handle(&self, method: &str, url: &str, body: &[u8]) -> Response {
        let (path, query) = url.split_once('?').unwrap_or((url, ""));
        match (method, path) {
            ("GET", "/code") => Response::json(200, &code_view(&self.session())),
            ("GET", "/fragment") => Response::json(200, &fragment_view(&self.session())),
            ("GET", "/image.pbm") => Response {
                status: 200,
                content_type: "image/x-portable-bitmap",
                body: self.session().image_pbm(),
            },
            ("GET", "/subloop") => self.subloop(query),
            ("POST", "/basis") => self.basis(body),
            (_, "/code" | "/fragment" | "/image.pbm" | "/subloop" | "/basis") => {
                Response::error(405, format!("{method} not allowed on {path}"))
            }
            _ => Response::error(404, format!("no such endpoint {path}")),
        }
    }

    fn subloop(&self, query: &str) -> Response {
        let tokens = form_urlencoded::parse(query.as_bytes())
            .find(|(k, _)| k == "basis")
            .map(|(_, v)| v.into_owned());
        let Some(tokens) = tokens else {
            return Response::error(400, "missing basis parameter");
        };
        let s = self.session();
        let rows = match resolve_rows(s.code(), &tokens) {
            Ok(rows) => rows,
            Err(e) => return Response::error(400, e.to_string()),
        };
        match s.code_loop().classify_subspace(&rows) {
            Ok(rep) => Response::json(200, &rep as &SubloopReport),
            Err(e) => Response::error(status_for(&e), e.to_string()),
        }
    }

    fn basis(&self, body: &[u8]) -> Response {
        let op: BasisOp = match serde_json::from_slice(body) {
            Ok(op) => op,
            Err(e) => return Response::error(400, format!("malformed basis op: {e}")),
        };
        let mut s = self.session.write().expect("session lock");
        match s.apply(&op) {
            Ok(()) => Response::json(200, &code_view(&s)),
            Err(e) => Response::error(status_for(&e), e.to_string()),
        }
    }
}
