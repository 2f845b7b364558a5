pub mod matrix;
pub mod qsqrt3;
pub mod rational;

pub use matrix::QMatrix;
pub use qsqrt3::{QSqrt3, QSqrt3Matrix};
pub use rational::{format_q, parse_q, Precision, Q};
