//! Exact computations with G-simple graded algebras over cyclotomic fields.

pub mod catalog;
pub mod cocycle;
pub mod cyclo;
pub mod euler;
pub mod finite_group;
pub mod graded_poly;
pub mod isomorphism;
pub mod presentation;
pub mod snf;
