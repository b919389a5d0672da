pub mod algebra;
pub mod cli;
pub mod exprparse;
pub mod ktheory;
pub mod pushforward;
pub mod residue;
pub mod symfun;
