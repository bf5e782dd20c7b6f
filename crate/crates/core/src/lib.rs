//! Hyperplane-rounding bisection of r-uniform hypergraphs, with exact
//! discrepancy functionals, half-space probabilities and spectral
//! certificates.

pub mod combinatorics;
pub mod cut;
pub mod disc;
pub mod embed;
pub mod error;
pub mod geomprob;
pub mod hypergraph;
pub mod io;
pub mod spectral;

pub use combinatorics::{Rational, VertexSet};
pub use cut::{bisect, bisect_mixed, BalanceMode, BisectReport, CutResult};
pub use disc::{DiscReport, SplitDisc};
pub use embed::Embedding;
pub use error::{Error, Result};
pub use geomprob::{MuEstimate, VectorTuple};
pub use hypergraph::{EdgeMultiset, Hypergraph, MixedHypergraph};
pub use io::AnyHypergraph;
pub use spectral::{CertKind, MuMode, SpectralCertificate};
