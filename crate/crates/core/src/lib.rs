pub mod linalg;
pub mod polymatrix;
pub mod diagnostics;
pub mod dilation;
pub mod textual;
pub mod torus;
