pub mod linalg;
pub mod algebra;
pub mod modrep;
pub mod constructions;
pub mod corpus;
pub mod decomp;
pub mod homology;
