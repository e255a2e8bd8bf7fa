pub mod poly;
pub mod matrix;
pub mod diagram;
pub mod complex;
pub mod homology;
pub mod movie;
pub mod cli;
