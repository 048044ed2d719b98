//! Tree representations of finitely generated abelian groups from virtual
//! endomorphisms, changes of transversal, and conjugators onto adding
//! machines.

mod conjugator;
mod group;
mod machine;

pub use conjugator::{
    adding_machine_portrait, conjugates_to_adding_machine, example3_closed_form, example3_sequences, prop4_conjugator,
    transversal_conjugator, AddingMachineConjugator, ConjugatorStage, TransversalChange, DEFAULT_MACHINE_CAP,
};
pub use group::{FgAbelianGroup, Lattice};
pub use machine::{coset_permutation, phi_rep, Materialized, SelfSimilarMachine, Transversal, VirtualEndo};
