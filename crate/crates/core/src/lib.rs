pub mod chain;
pub mod linalg;
pub mod poset;
pub mod simplicial;
pub mod specseq;
pub mod transfer;
pub mod twist;
