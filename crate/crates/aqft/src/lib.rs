//! Algebraic quantum field theory on flat 1+1-dimensional spacetimes with
//! timelike boundary: exact causal geometry, finite region catalogs, the
//! universal boundary extension and the free Klein-Gordon example.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod extension;
pub mod fixtures;
pub mod geometry;
pub mod klein_gordon;
pub mod linalg;
pub mod rational;
pub mod theory;
