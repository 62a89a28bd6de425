//! n-tuple networks: look-up-table value and action functions, the TD(λ)
//! update with a finite eligibility horizon, temporal coherence learning and
//! the binary agent format.

mod format;
mod horizon;
mod layout;
mod network;
mod tcl;
mod tuple;

pub use format::{FORMAT_VERSION, MAGIC};
pub use horizon::{horizon_length, Activation, EligibilityHorizon, EligibilityMode, HorizonEntry};
pub use layout::{TupleLayout, RECT_2048};
pub use network::{NTupleNetwork, NetConfig, NetMode, Sigma};
pub use tcl::{tcl_rate, TclConfig, TclState, Transfer};
pub use tuple::NTupleDef;
