//! A single exploration session: a code with a mutable ordered basis, a
//! split point, and the table and fragment rebuilt from them.

use serde::Deserialize;

use crate::cocycle::{griess_build, CocycleTable};
use crate::code::Code;
use crate::code_loop::CodeLoop;
use crate::error::{Error, Result};
use crate::fragment::CocycleFragment;
use crate::render::{encode_pbm, regularity_score, PbmKind, Render};
use crate::word::BitWord;

/// Invertible change of the ordered basis. The spanned code never changes.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisOp {
    /// Exchange rows `i` and `j`.
    Swap { i: usize, j: usize },
    /// Replace row `j` by row `j` plus row `i`.
    Add { i: usize, j: usize },
    /// Replace the whole basis; the rows must span the same code.
    Replace { basis: Vec<String> },
}

impl BasisOp {
    /// The operation undoing this one, where one exists without extra state.
    pub fn inverse(&self) -> Option<BasisOp> {
        match self {
            BasisOp::Swap { .. } | BasisOp::Add { .. } => Some(self.clone()),
            BasisOp::Replace { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    name: String,
    v_dim: usize,
    choice_bit: u8,
    code_loop: CodeLoop,
    fragment: CocycleFragment,
}

impl Session {
    pub fn new(name: impl Into<String>, code: Code, v_dim: usize, choice_bit: u8) -> Result<Self> {
        if v_dim > code.dimension() {
            return Err(Error::InvalidArgument(format!(
                "V dimension {v_dim} exceeds code dimension {}",
                code.dimension()
            )));
        }
        let (code_loop, fragment) = Self::rebuild(&code, v_dim, choice_bit)?;
        Ok(Session {
            name: name.into(),
            v_dim,
            choice_bit: choice_bit & 1,
            code_loop,
            fragment,
        })
    }

    fn rebuild(code: &Code, v_dim: usize, choice_bit: u8) -> Result<(CodeLoop, CocycleFragment)> {
        let table = griess_build(code, choice_bit)?;
        let fragment = CocycleFragment::compress_prefix(&table, v_dim)?;
        Ok((CodeLoop::new(table)?, fragment))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn code(&self) -> &Code {
        self.code_loop.code()
    }

    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    pub fn choice_bit(&self) -> u8 {
        self.choice_bit
    }

    pub fn table(&self) -> &CocycleTable {
        self.code_loop.table()
    }

    pub fn code_loop(&self) -> &CodeLoop {
        &self.code_loop
    }

    pub fn fragment(&self) -> &CocycleFragment {
        &self.fragment
    }

    pub fn image_pbm(&self) -> Vec<u8> {
        encode_pbm(&self.fragment.to_image(), PbmKind::Raw)
    }

    pub fn regularity(&self) -> f64 {
        regularity_score(&self.fragment.to_image()).unwrap_or(0.0)
    }

    /// Applies `op` and rebuilds; on error the session is unchanged.
    pub fn apply(&mut self, op: &BasisOp) -> Result<()> {
        let mut basis = self.code().basis().to_vec();
        let k = basis.len();
        let check = |i: usize| {
            if i >= k {
                Err(Error::InvalidArgument(format!("row {i} out of range for {k} rows")))
            } else {
                Ok(())
            }
        };
        match op {
            BasisOp::Swap { i, j } => {
                check(*i)?;
                check(*j)?;
                basis.swap(*i, *j);
            }
            BasisOp::Add { i, j } => {
                check(*i)?;
                check(*j)?;
                basis[*j] = basis[*j].add(&basis[*i])?;
            }
            BasisOp::Replace { basis: rows } => {
                basis = rows
                    .iter()
                    .map(|r| BitWord::parse(r, self.code().length()))
                    .collect::<Result<Vec<_>>>()?;
            }
        }
        let code = self.code().rebased(basis)?;
        let (code_loop, fragment) = Self::rebuild(&code, self.v_dim, self.choice_bit)?;
        self.code_loop = code_loop;
        self.fragment = fragment;
        Ok(())
    }
}
