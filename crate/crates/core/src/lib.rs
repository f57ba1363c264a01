pub mod bigraph;
pub mod finsemi;
pub mod formats;
pub mod groups;
pub mod orbits;
pub mod rees;
pub mod reesiso;
pub mod relation;
pub mod semilat;
pub mod table;
pub mod tuples;
pub mod verify;
