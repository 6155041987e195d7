//! Exact linear algebra over Q(i): matrices, canonical subspaces, and the
//! hermitian / bilinear / symplectic forms.

pub mod forms;
pub mod matrix;
pub mod subspace;

pub use forms::{
    antilinear_fixed_line, antilinear_fixed_vector, antilinear_image, extend_to_lagrangian,
    hermitian_projection,
    isotropic_classify, symplectic_j, Form, FormKind, IsotropyReport, LagrangianFlavor,
};
pub use matrix::{basis_vec, Mat, VecC};
pub use subspace::Subspace;
