pub mod bench;
pub mod certify;
pub mod gen;
pub mod scalar;
pub mod solve;
