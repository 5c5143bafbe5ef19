use crate::linalg::{c, CMatrix, C64};

/// Ladder, number and quadrature operators of one truncated mode.
#[derive(Debug, Clone)]
pub struct ModeOps {
    pub cutoff: usize,
    pub a: CMatrix,
    pub adag: CMatrix,
    pub num: CMatrix,
}

impl ModeOps {
    pub fn new(cutoff: usize) -> Self {
        let d = cutoff + 1;
        let mut a = CMatrix::zeros(d, d);
        for n in 1..d {
            a[(n - 1, n)] = c((n as f64).sqrt());
        }
        let adag = a.adjoint();
        let num = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |n, _| c(n as f64)));
        Self {
            cutoff,
            a,
            adag,
            num,
        }
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.dim(), self.dim())
    }

    /// `q = a + a†`
    pub fn q(&self) -> CMatrix {
        &self.a + &self.adag
    }

    /// `p = i(a† − a)`
    pub fn p(&self) -> CMatrix {
        (&self.adag - &self.a) * C64::new(0.0, 1.0)
    }

    /// `[a, a†] − I`; nonzero only in the top-level diagonal entry.
    pub fn commutator_defect(&self) -> CMatrix {
        &self.a * &self.adag - &self.adag * &self.a - self.identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_entries_are_exact() {
        let ops = ModeOps::new(6);
        for n in 1..=6 {
            assert_eq!(ops.a[(n - 1, n)], c((n as f64).sqrt()));
            assert_eq!(ops.adag[(n, n - 1)], c((n as f64).sqrt()));
        }
        assert_eq!(ops.a[(0, 0)], c(0.0));
        assert!((&ops.adag * &ops.a - &ops.num).camax() < 1e-14);
    }

    #[test]
    fn commutator_defect_sits_at_top_level() {
        let ops = ModeOps::new(5);
        let d = ops.commutator_defect();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == 5 && j == 5 { -6.0 } else { 0.0 };
                assert!((d[(i, j)] - c(expected)).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn quadratures_are_hermitian() {
        let ops = ModeOps::new(4);
        assert_eq!(ops.q(), ops.q().adjoint());
        assert_eq!(ops.p(), ops.p().adjoint());
    }
}
