//! Exact computation of sheaf cohomology on finite posets (Alexandrov sites)
//! and mechanical verification of universal-coefficient statements: the
//! projection quasi-isomorphism for perfect coefficient complexes, the
//! Tor-triangle long exact sequence, the classical UCT splitting, and the
//! derived corollaries.

pub mod abgroup;
pub mod chains;
pub mod cohom;
pub mod exactlin;
pub mod instance;
pub mod report;
pub mod site;
pub mod uct;
