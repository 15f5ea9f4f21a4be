pub mod certify;
pub mod conjugate;
pub mod error;
pub mod gridfn;
pub mod lifting;
pub mod matkit;
pub mod models;
pub mod report;
pub mod symmetry;
