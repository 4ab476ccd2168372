//! Exact combinatorics of multi-segments for `GL_n`.
//!
//! * [`segment`], [`multiseg`]: segments `[b,e]_ρ` with half-integer
//!   endpoints, multi-segments, supports.
//! * [`involution`]: the Mœglin–Waldspurger algorithm and its traces.
//! * [`order`]: the order generated by elementary operations, enumeration of
//!   a support class, posets with DOT/JSON export.
//! * [`arthur`]: Arthur parameters, `δ_{d,a}`, `δ_ψ`, Arthur-type detection,
//!   and exhaustive verifiers.
//! * [`text`]: the text format shared with the command line tool.

pub mod arthur;
pub mod error;
pub mod halfint;
pub mod involution;
pub mod multiseg;
pub mod order;
pub mod segment;
pub mod text;

pub use arthur::{
    delta_bes, delta_bes_dual, delta_da, delta_psi, detect_arthur, dual_parameter, extremal_pair, reduce_pair,
    strip_identity_check, ArthurParameter, ExtremalPair, LemmaReport, Summand,
};
pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use involution::{mw_dual, mw_leading, mw_strip, mw_trace, MWStep, MWTrace};
pub use multiseg::{MultiSegment, Support};
pub use order::{build_poset, downset, elementary_successors, enumerate_support, ge, EnumConfig, Poset};
pub use segment::{linked, precedes, CuspidalLabel, Segment};
