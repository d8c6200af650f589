//! The arithmetic decision procedure for 4-valent cyclic Haar graphs, the
//! reduction to the normal form `{0, u, v, v+m}`, and verifiers for the
//! structural facts behind it.

mod decide;
mod egroup;
mod lemmas;
mod quad;

pub use decide::{decide_iso_valency4, exceptional_isomorphism, ExceptionalWitness, IsoDecision, Route};
pub use egroup::{build_e_group, xi_witness, EGroup};
pub use lemmas::*;
pub use quad::{condition2_holds, normalize_quadruple, Quadruple};
