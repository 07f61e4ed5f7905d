//! Compressed, queryable representations of path graphs.
//!
//! A path graph is the intersection graph of a family of paths in a tree:
//! one vertex per path, an edge whenever two paths share a tree node. The
//! input here is the clique-tree form `(T, P_1..P_n)`: a rooted tree `T`
//! with at most `n` nodes and `n` paths given by their endpoint pairs.
//!
//! Two representations are provided, both built on a heavy path
//! decomposition of `T` relabeled in pre-order:
//!
//! * [`succinct::SuccinctPathGraph`] — balanced-parentheses tree encoding,
//!   differential-coded endpoint sequences and a wavelet tree over path
//!   aliases. Roughly `n log n` bits; adjacency in `O(log n)`,
//!   neighbourhood in `O(d log n)`.
//! * [`level::LevelStructure`] — one interval graph per level of the heavy
//!   path tree plus lookup tables. `O(n log^2 n)` bits; constant-time
//!   adjacency and degree, neighbourhood in `O(d)`.
//!
//! Everything is verified against [`oracle::OracleGraph`], a brute-force
//! intersection graph computed by walking the paths node by node.

pub mod bitseq;
pub mod blob;
pub mod instance;
pub mod interval;
pub mod level;
pub mod oracle;
pub mod succinct;
pub mod treeprep;
pub mod wavelet;

pub use instance::InstanceFile;
pub use level::LevelStructure;
pub use oracle::{gen_instance, Instance, OracleGraph};
pub use succinct::SuccinctPathGraph;
pub use treeprep::{prepare, PathSet, PreparedTree, RawCliqueTree};

/// Errors shared across the crate's build and parse entry points.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("path endpoint {0} out of range [1, {1}]")]
    EndpointOutOfRange(u32, u32),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed blob: {0}")]
    Blob(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
