pub mod exactmath;
pub mod faces;
pub mod families;
pub mod harness;
pub mod maps;
pub mod simplex;
