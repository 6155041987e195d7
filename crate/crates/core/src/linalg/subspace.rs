//! Subspaces of Q(i)^n in canonical reduced column echelon form.
//!
//! The echelon representative is unique, so subspace equality is plain
//! field equality and every construction that picks "the first basis
//! vector" is deterministic.

use crate::linalg::matrix::{vec_conj, vec_is_zero, Mat, VecC};

#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// n x dim, columns are the canonical echelon basis.
    basis: Mat,
}

impl Subspace {
    pub fn from_vectors(ambient: usize, vectors: &[VecC]) -> Subspace {
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
        }
        let nonzero: Vec<VecC> = vectors
            .iter()
            .filter(|v| !vec_is_zero(v))
            .cloned()
            .collect();
        if nonzero.is_empty() {
            return Subspace {
                ambient,
                basis: Mat::zero(ambient, 0),
            };
        }
        // Unique representative: reduced row echelon of the row matrix,
        // stored back as columns.
        let rows = Mat::from_rows(nonzero);
        let (r, pivots) = rows.rref();
        let cols: Vec<VecC> = (0..pivots.len())
            .map(|i| (0..ambient).map(|c| r[(i, c)].clone()).collect())
            .collect();
        Subspace {
            ambient,
            basis: Mat::from_columns(ambient, &cols),
        }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace::from_vectors(ambient, &[])
    }

    pub fn full(ambient: usize) -> Subspace {
        let vs: Vec<VecC> = (0..ambient)
            .map(|i| crate::linalg::matrix::basis_vec(ambient, i))
            .collect();
        Subspace::from_vectors(ambient, &vs)
    }

    pub fn line(v: &VecC) -> Subspace {
        Subspace::from_vectors(v.len(), std::slice::from_ref(v))
    }

    /// Column span of a matrix.
    pub fn column_space(m: &Mat) -> Subspace {
        Subspace::from_vectors(m.rows(), &m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<VecC> {
        self.basis.columns()
    }

    pub fn first_basis_vector(&self) -> Option<VecC> {
        if self.dim() == 0 {
            None
        } else {
            Some(self.basis.column(0))
        }
    }

    pub fn contains_vec(&self, v: &VecC) -> bool {
        if vec_is_zero(v) {
            return true;
        }
        if self.dim() == 0 {
            return false;
        }
        self.basis.solve(v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains_vec(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::from_vectors(self.ambient, &vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let da = self.dim();
        let db = other.dim();
        if da == 0 || db == 0 {
            return Subspace::zero(self.ambient);
        }
        // Solve A x = B y: kernel of [A | -B].
        let m = Mat::from_fn(self.ambient, da + db, |r, c| {
            if c < da {
                self.basis[(r, c)].clone()
            } else {
                -&other.basis[(r, c - da)]
            }
        });
        let vs: Vec<VecC> = m
            .kernel()
            .into_iter()
            .map(|k| {
                let x: VecC = k[..da].to_vec();
                self.basis.apply(&x)
            })
            .collect();
        Subspace::from_vectors(self.ambient, &vs)
    }

    pub fn conj(&self) -> Subspace {
        let vs: Vec<VecC> = self.basis_vectors().iter().map(|v| vec_conj(v)).collect();
        Subspace::from_vectors(self.ambient, &vs)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Image under a linear map (rank may drop).
    pub fn image_under(&self, m: &Mat) -> Subspace {
        let vs: Vec<VecC> = self.basis_vectors().iter().map(|v| m.apply(v)).collect();
        Subspace::from_vectors(m.rows(), &vs)
    }

    /// Hermitian orthogonal complement: kernel of the adjoint of the basis.
    pub fn hermitian_complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        let adj = self.basis.adjoint();
        Subspace::from_vectors(self.ambient, &adj.kernel())
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of C^{}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::Gq;
    use crate::linalg::matrix::{basis_vec, vec_scale};

    #[test]
    fn canonical_span() {
        let n = 3;
        let e1 = basis_vec(n, 0);
        let two_e1 = vec_scale(&e1, &Gq::from_int(2));
        let s = Subspace::from_vectors(n, &[e1.clone(), two_e1]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis().column(0), e1);
        assert_eq!(Subspace::from_vectors(n, &[]).dim(), 0);
    }

    #[test]
    fn echelon_example() {
        let n = 3;
        let mut v = basis_vec(n, 0);
        v[1] = Gq::i();
        let s = Subspace::from_vectors(n, &[v.clone(), basis_vec(n, 2)]);
        assert_eq!(s.dim(), 2);
        // Oracle: Gaussian elimination leaves pivots in rows 0 and 2.
        assert_eq!(s.basis().column(0), v);
        assert_eq!(s.basis().column(1), basis_vec(n, 2));
    }

    #[test]
    fn complement_and_intersection() {
        let n = 4;
        let s = Subspace::from_vectors(n, &[basis_vec(n, 0), basis_vec(n, 1)]);
        let c = s.hermitian_complement();
        assert_eq!(c.dim(), 2);
        assert!(c.contains_vec(&basis_vec(n, 2)));
        assert_eq!(s.intersect(&c).dim(), 0);
        assert_eq!(s.sum(&c).dim(), 4);
        // equality is canonical
        let s2 = Subspace::from_vectors(
            n,
            &[
                crate::linalg::matrix::vec_add(&basis_vec(n, 0), &basis_vec(n, 1)),
                basis_vec(n, 1),
            ],
        );
        assert_eq!(s, s2);
    }
}
