pub mod configs;
pub mod field;
pub mod linalg;
pub mod polyideal;
pub mod projgeom;
pub mod util;
pub mod geproci;
pub mod combinat;
pub mod weddle;
pub mod unexpected;
pub mod ks;
pub mod suite;
pub mod cli;
