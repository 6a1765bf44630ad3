//! Classification aggregation: classifications, profiles and aggregation
//! functions, axiom checks with witnesses, exhaustive enumeration of
//! independent aggregators, and verifiers for the impossibility results at
//! small sizes.

pub mod axioms;
pub mod cli;
pub mod document;
pub mod error;
pub mod model;
pub mod rules;
pub mod search;
pub mod theorem_lab;

pub use axioms::{Axiom, AxiomReport, Caf, ElementaryCaf, IndependentCaf, Witness};
pub use error::{Error, Result};
pub use model::{
    Budget, Category, CategoryPermutation, CategoryVector, Classification, Individual, Params,
    Profile,
};
