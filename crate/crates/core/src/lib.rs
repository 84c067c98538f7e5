//! Code loops: Moufang loops built as central extensions of doubly-even
//! binary codes by a code cocycle.
//!
//! ```
//! use codeloops::builtin::golay;
//! use codeloops::{griess_build, CocycleFragment, CodeLoop};
//!
//! let code = golay()?;
//! let table = griess_build(&code, 0)?;
//! let fragment = CocycleFragment::compress_prefix(&table, 6)?;
//! assert_eq!(fragment.stored_values(), 16129);
//!
//! let b = code.basis();
//! assert_eq!(fragment.evaluate(&b[0], &b[1])?, table.value(&b[0], &b[1])?);
//!
//! let parker = CodeLoop::new(table)?;
//! let report = parker.classify_subspace(&b[..6])?;
//! assert!(report.is_elementary_abelian && report.order == 128);
//! # Ok::<(), codeloops::Error>(())
//! ```

pub mod api;
pub mod bitmatrix;
pub mod builtin;
pub mod cli;
pub mod code;
pub mod code_loop;
pub mod cocycle;
pub mod error;
pub mod fragment;
pub mod render;
pub mod serve;
pub mod session;
pub mod subspace;
pub mod verify;
pub mod word;

pub use code::Code;
pub use code_loop::{CodeLoop, LoopElement, SubloopReport};
pub use cocycle::{griess_build, twist, CocycleTable};
pub use error::{Error, Result};
pub use fragment::CocycleFragment;
pub use verify::{Mode, VerificationReport};
pub use word::BitWord;
