//! Two- and single-qubit reduced density matrices of `|D_{N-k,k}>`.
//!
//! By exchange symmetry every pair of qubits has the same marginal, supported
//! on the spin-1 triplet `|00>, (|01>+|10>)/sqrt(2), |11>`. In the
//! computational basis `|00>, |01>, |10>, |11>` it reads
//!
//! ```text
//! [[A, B, B, C],
//!  [B, D, D, E],
//!  [B, D, D, E],
//!  [C, E, E, F]]
//! ```
//!
//! with six real elements given by `O(k)` sums over the amplitudes and the
//! spin-1 Clebsch-Gordan coefficients.

use crate::dicke::{amplitudes, cg_coefficients, CgTriple, DickeParams};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::smallmat::SmallMatrix;

/// The six independent elements of the symmetric two-qubit marginal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitMarginal<T> {
    pub a_el: T,
    pub b_el: T,
    pub c_el: T,
    pub d_el: T,
    pub e_el: T,
    pub f_el: T,
    pub params: DickeParams<T>,
}

/// Single-qubit marginal `[[A+D, B+E], [B+E, D+F]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitMarginal<T> {
    pub m: SmallMatrix<T>,
}

impl<T: Scalar> TwoQubitMarginal<T> {
    /// `A + 2D + F`.
    pub fn trace(&self) -> T {
        self.a_el + self.d_el + self.d_el + self.f_el
    }
}

pub fn two_qubit_marginal<T: Scalar>(params: &DickeParams<T>) -> Result<TwoQubitMarginal<T>> {
    let n = params.n_qubits();
    let k = params.degeneracy();
    let amp = amplitudes(params);
    let beta = &amp.beta;
    let cg: Vec<CgTriple<T>> = (0..=k)
        .map(|r| cg_coefficients(n, r))
        .collect::<Result<_>>()?;

    let sq = |x: T| x * x;
    let inv_sqrt2 = T::FRAC_1_SQRT_2();

    let mut a_el = T::zero();
    let mut d_el = T::zero();
    let mut f_el = T::zero();
    for r in 0..=k {
        let w = sq(beta[r]);
        a_el += w * sq(cg[r].c_plus);
        if r >= 1 {
            d_el += w * sq(cg[r].c_zero);
        }
        f_el += w * sq(cg[r].c_minus);
    }
    d_el *= T::lit(0.5);

    let mut b_el = T::zero();
    let mut e_el = T::zero();
    for r in 0..k {
        let w = beta[r] * beta[r + 1];
        b_el += w * cg[r].c_plus * cg[r + 1].c_zero;
        e_el += w * cg[r].c_zero * cg[r + 1].c_minus;
    }
    b_el *= inv_sqrt2;
    e_el *= inv_sqrt2;

    // Empty for k < 2.
    let mut c_el = T::zero();
    for r in 0..k.saturating_sub(1) {
        c_el += beta[r] * beta[r + 2] * cg[r].c_plus * cg[r + 2].c_minus;
    }

    Ok(TwoQubitMarginal {
        a_el,
        b_el,
        c_el,
        d_el,
        e_el,
        f_el,
        params: *params,
    })
}

/// The 4x4 marginal in the basis `|00>, |01>, |10>, |11>`.
pub fn marginal_matrix<T: Scalar>(m: &TwoQubitMarginal<T>) -> Result<SmallMatrix<T>> {
    let TwoQubitMarginal {
        a_el: a,
        b_el: b,
        c_el: c,
        d_el: d,
        e_el: e,
        f_el: f,
        ..
    } = *m;
    SmallMatrix::from_rows([[a, b, b, c], [b, d, d, e], [b, d, d, e], [c, e, e, f]])
}

pub fn single_qubit_marginal<T: Scalar>(m: &TwoQubitMarginal<T>) -> Result<SingleQubitMarginal<T>> {
    let off = m.b_el + m.e_el;
    SmallMatrix::from_rows([[m.a_el + m.d_el, off], [off, m.d_el + m.f_el]])
        .map(|m| SingleQubitMarginal { m })
}

/// Partial transpose on the second qubit, `(ρ^T)_{ij;kl} = ρ_{il;kj}`.
///
/// For the symmetric marginal this swaps the roles of `C` and `D` on the
/// anti-diagonal corners and the inner off-diagonal.
pub fn partial_transpose<T: Scalar>(m: &TwoQubitMarginal<T>) -> Result<SmallMatrix<T>> {
    let TwoQubitMarginal {
        a_el: a,
        b_el: b,
        c_el: c,
        d_el: d,
        e_el: e,
        f_el: f,
        ..
    } = *m;
    SmallMatrix::from_rows([[a, b, b, d], [b, d, c, e], [b, c, d, e], [d, e, e, f]])
}

/// Partial transpose of an arbitrary 4x4 matrix on its second qubit.
pub fn partial_transpose_matrix<T: Scalar>(rho: &SmallMatrix<T>) -> Result<SmallMatrix<T>> {
    let mut out = SmallMatrix::zeros(4)?;
    if rho.dim() != 4 {
        return Err(crate::error::Error::WrongDimension {
            expected: 4,
            actual: rho.dim(),
        });
    }
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = rho[(2 * i + l, 2 * k + j)];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::sym_eigenvalues;
    use approx::assert_abs_diff_eq;

    fn marginal(n: usize, k: usize, a: f64) -> TwoQubitMarginal<f64> {
        two_qubit_marginal(&DickeParams::new(n, k, a).unwrap()).unwrap()
    }

    fn assert_entries(m: &SmallMatrix<f64>, expected: [[f64; 4]; 4]) {
        for (i, row) in expected.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                assert_abs_diff_eq!(m[(i, j)], want, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn w_state_marginal() {
        let m = marginal(3, 1, 0.0);
        assert_abs_diff_eq!(m.a_el, 1. / 3., epsilon = 1e-15);
        assert_abs_diff_eq!(m.d_el, 1. / 3., epsilon = 1e-15);
        assert_eq!((m.b_el, m.c_el, m.e_el, m.f_el), (0.0, 0.0, 0.0, 0.0));

        let third = 1. / 3.;
        assert_entries(
            &marginal_matrix(&m).unwrap(),
            [
                [third, 0., 0., 0.],
                [0., third, third, 0.],
                [0., third, third, 0.],
                [0., 0., 0., 0.],
            ],
        );
        let rho1 = single_qubit_marginal(&m).unwrap().m;
        assert_abs_diff_eq!(rho1[(0, 0)], 2. / 3., epsilon = 1e-15);
        assert_abs_diff_eq!(rho1[(1, 1)], 1. / 3., epsilon = 1e-15);
        assert_eq!(rho1[(0, 1)], 0.0);
        assert_entries(
            &partial_transpose(&m).unwrap(),
            [
                [third, 0., 0., third],
                [0., third, 0., 0.],
                [0., 0., third, 0.],
                [third, 0., 0., 0.],
            ],
        );
    }

    #[test]
    fn balanced_four_qubit_dicke_marginal() {
        let m = marginal(4, 2, 0.0);
        assert_abs_diff_eq!(m.a_el, 1. / 6., epsilon = 1e-15);
        assert_abs_diff_eq!(m.d_el, 1. / 3., epsilon = 1e-15);
        assert_abs_diff_eq!(m.f_el, 1. / 6., epsilon = 1e-15);
        assert_eq!((m.b_el, m.c_el, m.e_el), (0.0, 0.0, 0.0));

        let rho1 = single_qubit_marginal(&m).unwrap().m;
        assert_abs_diff_eq!(rho1[(0, 0)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho1[(1, 1)], 0.5, epsilon = 1e-15);

        let (s, t) = (1. / 6., 1. / 3.);
        assert_entries(
            &partial_transpose(&m).unwrap(),
            [
                [s, 0., 0., t],
                [0., t, 0., 0.],
                [0., 0., t, 0.],
                [t, 0., 0., s],
            ],
        );
    }

    #[test]
    fn separable_endpoint() {
        for (n, k) in [(2, 1), (5, 2), (40, 20)] {
            let m = marginal(n, k, 1.0);
            assert_eq!(m.a_el, 1.0);
            assert_eq!(
                (m.b_el, m.c_el, m.d_el, m.e_el, m.f_el),
                (0.0, 0.0, 0.0, 0.0, 0.0)
            );
            let rho = marginal_matrix(&m).unwrap();
            assert_eq!(partial_transpose(&m).unwrap(), rho);
            let rho1 = single_qubit_marginal(&m).unwrap().m;
            assert_eq!(rho1.entries(), vec![1.0, 0.0, 0.0, 0.0]);
            let ev = sym_eigenvalues(&rho, 1e-12).unwrap();
            assert!(ev[1].abs() < 1e-12);
        }
    }

    #[test]
    fn bell_projector_arrangement() {
        let params = DickeParams::new(2, 1, 0.0).unwrap();
        let m = TwoQubitMarginal {
            a_el: 0.0,
            b_el: 0.0,
            c_el: 0.0,
            d_el: 0.5,
            e_el: 0.0,
            f_el: 0.0,
            params,
        };
        let rho = marginal_matrix(&m).unwrap();
        assert_eq!((rho * rho).max_abs_diff(&rho), Some(0.0));
        assert_eq!(m, marginal(2, 1, 0.0));
    }

    #[test]
    fn no_coherence_c_for_w_class() {
        for n in 2..=20 {
            for a in [0.1, 0.5, 0.9] {
                assert_eq!(marginal(n, 1, a).c_el, 0.0);
            }
        }
    }

    #[test]
    fn structural_invariants_on_grid() {
        for n in 2..=60 {
            for k in 1..=n / 2 {
                for step in 0..=10 {
                    let a = step as f64 / 10.0;
                    let m = marginal(n, k, a);
                    assert!((m.trace() - 1.0).abs() < 1e-12);
                    assert!(m.a_el >= 0.0 && m.d_el >= 0.0 && m.f_el >= 0.0);

                    let rho = marginal_matrix(&m).unwrap();
                    let pt = partial_transpose(&m).unwrap();
                    assert!((rho.trace() - 1.0).abs() < 1e-12);
                    assert!((pt.trace() - 1.0).abs() < 1e-12);
                    assert_eq!(pt.max_asymmetry(), 0.0);
                    assert_eq!(pt, partial_transpose_matrix(&rho).unwrap());

                    // rows/columns for |01> and |10> coincide
                    for j in 0..4 {
                        assert_eq!(rho[(1, j)], rho[(2, j)]);
                        assert_eq!(rho[(j, 1)], rho[(j, 2)]);
                    }

                    let rho1 = single_qubit_marginal(&m).unwrap().m;
                    for reduced in [
                        rho.trace_out_first_qubit().unwrap(),
                        rho.trace_out_second_qubit().unwrap(),
                    ] {
                        assert!(reduced.max_abs_diff(&rho1).unwrap() < 1e-14);
                    }

                    let ev = sym_eigenvalues(&rho, 1e-12).unwrap();
                    assert!(ev[3] >= -1e-10, "N={n} k={k} a={a}: {ev:?}");
                }
            }
        }
    }
}
