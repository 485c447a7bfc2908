//! The Selberg transform, the resolvent triple and the trace formula on an
//! elementary cylinder.

pub mod chain;
pub mod trace;

pub use chain::{
    resolvent_g, resolvent_g_bound, resolvent_h, resolvent_triple, transform_chain, transform_roundtrip, u_of_w,
    w_of_u, ChainInput, ChainSpec, ExpBound, RealFn, RoundTrip, RoundTripPoint, SelbergTriple, SpectralDecay,
};
pub use trace::{cylinder_trace_check, geometric_side, identity_term, Lengths, TraceCheck, TraceConfig};
