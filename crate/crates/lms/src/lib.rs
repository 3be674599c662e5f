//! Exact construction and verification of local Moufang sets over finite
//! local rings.
pub mod action;
pub mod cli;
pub mod hermitian;
pub mod jordan;
pub mod localring;
pub mod moufang;
pub mod projective;
pub mod report;
pub mod tree;
