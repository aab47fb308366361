pub mod approx;
pub mod brandt;
pub mod enumerate;
pub mod error;
pub mod galois;
pub mod factor;
pub mod groups;
pub mod intrep;
pub mod lattice;
pub mod matrix;
pub mod normeq;
pub mod numfield;
pub mod poly;
pub mod quadfield;
pub mod quaternion;
pub mod ring;
pub mod weight;

pub use error::{Error, Result};
