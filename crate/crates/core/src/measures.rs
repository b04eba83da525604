//! Pairwise and one-versus-rest entanglement of `|D_{N-k,k}>` and the
//! concurrence and negativity tangles built from them.

use crate::dicke::DickeParams;
use crate::error::{Error, Result};
use crate::marginals::{
    marginal_matrix, partial_transpose, partial_transpose_matrix, single_qubit_marginal,
    two_qubit_marginal, SingleQubitMarginal, TwoQubitMarginal,
};
use crate::scalar::Scalar;
use crate::smallmat::{
    det2, general_eigenvalues, sym_eigen, trace_norm_symmetric, SmallMatrix, DEFAULT_SYMMETRY_TOL,
};

/// Allowed deviation of a density matrix from unit trace and from PSD.
pub const DENSITY_TOL: f64 = 1e-10;
/// `rho * rho'` eigenvalues with `|Im|` above this abort the computation.
pub const SPIN_FLIP_IMAG_TOL: f64 = 1e-8;
/// Negative real parts of `rho * rho'` eigenvalues down to `-this` are roundoff.
pub const SPIN_FLIP_NEG_TOL: f64 = 1e-10;
/// Eigenvalues of rho below this fraction of the largest are dropped from
/// its square-root factor.
pub const RANK_CUTOFF: f64 = 1e-13;

/// Everything the monogamy analysis reports for one `(N, k, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangleRecord<T> {
    pub params: DickeParams<T>,
    /// Squared one-vs-rest concurrence (equal to the squared negativity).
    pub c1_sq: T,
    /// Squared two-qubit concurrence.
    pub c2_sq: T,
    /// Concurrence tangle `c1_sq - (N-1) c2_sq`.
    pub tau: T,
    /// Two-qubit negativity, `||rho^T|| - 1`.
    pub n2: T,
    /// Negativity tangle `c1_sq - (N-1) n2^2`.
    pub xi: T,
}

impl<T: Scalar> TangleRecord<T> {
    /// Assembles a record from the three underlying measures.
    pub fn from_measures(params: DickeParams<T>, c1: T, c2: T, n2: T) -> Self {
        let pairs = T::count(params.n_qubits() - 1);
        let c1_sq = c1 * c1;
        let c2_sq = c2 * c2;
        Self {
            params,
            c1_sq,
            c2_sq,
            tau: c1_sq - pairs * c2_sq,
            n2,
            xi: c1_sq - pairs * n2 * n2,
        }
    }

    pub fn from_marginal(m: &TwoQubitMarginal<T>) -> Result<Self> {
        let c2 = concurrence_two_qubit(&marginal_matrix(m)?)?;
        let n2 = negativity_two_qubit(m)?;
        let c1 = one_vs_rest(&single_qubit_marginal(m)?)?;
        Ok(Self::from_measures(m.params, c1, c2, n2))
    }
}

/// The full pipeline: amplitudes, marginals, measures, tangles.
pub fn tangle_record<T: Scalar>(params: &DickeParams<T>) -> Result<TangleRecord<T>> {
    TangleRecord::from_marginal(&two_qubit_marginal(params)?)
}

/// `σ_y ⊗ σ_y` as a real matrix in the basis `|00>, |01>, |10>, |11>`.
pub fn sigma_y_sigma_y<T: Scalar>() -> SmallMatrix<T> {
    let (o, z) = (T::one(), T::zero());
    SmallMatrix::from_rows([[z, z, z, -o], [z, z, o, z], [z, o, z, z], [-o, z, z, z]])
        .expect("static 4x4")
}

/// Spin-flipped `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`; conjugation is the identity
/// for real `ρ`.
pub fn spin_flip<T: Scalar>(rho: &SmallMatrix<T>) -> Result<SmallMatrix<T>> {
    expect_two_qubit(rho)?;
    let y = sigma_y_sigma_y();
    Ok(y * *rho * y)
}

/// Real, nonnegative spectrum of `ρ ρ'`, sorted descending.
///
/// Eigenvalues with `|Im| > 1e-8` or real part below `-1e-10` are reported
/// as [`Error::NumericalInstability`]; small negative real parts become 0.
pub fn spin_flip_spectrum<T: Scalar>(rho: &SmallMatrix<T>) -> Result<Vec<T>> {
    let product = *rho * spin_flip(rho)?;
    let imag_tol = T::tol(SPIN_FLIP_IMAG_TOL);
    let neg_tol = T::tol(SPIN_FLIP_NEG_TOL);
    general_eigenvalues(&product)?
        .into_iter()
        .map(|z| {
            if z.im.abs() > imag_tol {
                Err(Error::NumericalInstability(format!(
                    "rho*rho' eigenvalue {z} is not real"
                )))
            } else if z.re < -neg_tol {
                Err(Error::NumericalInstability(format!(
                    "rho*rho' eigenvalue {z} is negative"
                )))
            } else {
                Ok(z.re.max(T::zero()))
            }
        })
        .collect()
}

/// Wootters concurrence of a real two-qubit density matrix.
///
/// The square roots of the `ρ ρ'` eigenvalues are computed as the absolute
/// eigenvalues of the symmetric matrix `Wᵀ (σ_y ⊗ σ_y) W`, where `ρ = W Wᵀ`
/// is the eigen-factorization of `ρ`. Both matrices share the spectrum
/// `λ_i`, but the symmetric form returns `sqrt(λ_i)` to absolute accuracy,
/// including at the exact zeros every symmetric marginal has. The `ρ ρ'`
/// spectrum itself is still checked for spurious imaginary parts.
pub fn concurrence_two_qubit<T: Scalar>(rho: &SmallMatrix<T>) -> Result<T> {
    expect_two_qubit(rho)?;
    let eig = validated_density_eigen(rho)?;
    spin_flip_spectrum(rho)?;

    let top = eig.values[0].max(T::zero());
    let cutoff = T::tol(RANK_CUTOFF) * top;
    let mut factor = SmallMatrix::zeros(4)?;
    for (col, (&val, vec)) in eig.values.iter().zip(&eig.vectors).enumerate() {
        if val > cutoff {
            let s = val.sqrt();
            for (row, &v) in vec.iter().enumerate() {
                factor[(row, col)] = s * v;
            }
        }
    }
    let flip = factor.transpose() * sigma_y_sigma_y() * factor;
    let mut roots: Vec<T> = sym_eigen(&flip, T::tol(DEFAULT_SYMMETRY_TOL))?
        .values
        .into_iter()
        .map(T::abs)
        .collect();
    roots.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.max(T::zero()).min(T::one()))
}

/// One-qubit versus rest entanglement of a pure state, `2 sqrt(det ρ₁)`.
///
/// For pure states this is both the concurrence and the negativity of the
/// one-versus-rest cut.
pub fn one_vs_rest<T: Scalar>(rho1: &SingleQubitMarginal<T>) -> Result<T> {
    let m = &rho1.m;
    let tol = T::tol(DENSITY_TOL);
    if (m.trace() - T::one()).abs() > tol {
        return Err(Error::NotDensityMatrix(format!(
            "trace {} differs from 1",
            m.trace()
        )));
    }
    let asym = m.max_asymmetry();
    if asym > T::tol(DEFAULT_SYMMETRY_TOL) * m.max_abs() {
        return Err(Error::NotDensityMatrix(format!("asymmetry {asym:e}")));
    }
    let det = det2(m)?;
    if m[(0, 0)] < -tol || m[(1, 1)] < -tol || det < -tol {
        return Err(Error::NotDensityMatrix(format!(
            "not positive semidefinite (det {det:e})"
        )));
    }
    Ok((T::lit(2.0) * det.max(T::zero()).sqrt()).min(T::one()))
}

/// Two-qubit negativity in the doubled convention, `||ρ^T|| - 1 ∈ [0, 1]`.
pub fn negativity_two_qubit<T: Scalar>(m: &TwoQubitMarginal<T>) -> Result<T> {
    negativity_of_partial_transpose(&partial_transpose(m)?)
}

/// Negativity of an arbitrary real two-qubit density matrix.
pub fn negativity_of_matrix<T: Scalar>(rho: &SmallMatrix<T>) -> Result<T> {
    expect_two_qubit(rho)?;
    negativity_of_partial_transpose(&partial_transpose_matrix(rho)?)
}

fn negativity_of_partial_transpose<T: Scalar>(pt: &SmallMatrix<T>) -> Result<T> {
    let value = trace_norm_symmetric(pt)? - T::one();
    let tol = T::tol(DENSITY_TOL);
    if value < -tol || value > T::one() + tol {
        return Err(Error::NumericalInstability(format!(
            "negativity {value} outside [0, 1]"
        )));
    }
    Ok(value.max(T::zero()).min(T::one()))
}

fn expect_two_qubit<T: Scalar>(rho: &SmallMatrix<T>) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::WrongDimension {
            expected: 4,
            actual: rho.dim(),
        })
    }
}

fn validated_density_eigen<T: Scalar>(
    rho: &SmallMatrix<T>,
) -> Result<crate::smallmat::SymmetricEigen<T>> {
    let tol = T::tol(DENSITY_TOL);
    if (rho.trace() - T::one()).abs() > tol {
        return Err(Error::NotDensityMatrix(format!(
            "trace {} differs from 1",
            rho.trace()
        )));
    }
    let eig = sym_eigen(rho, T::tol(DEFAULT_SYMMETRY_TOL)).map_err(|e| match e {
        Error::NotSymmetric { .. } => Error::NotDensityMatrix(e.to_string()),
        other => other,
    })?;
    let least = eig.values[eig.values.len() - 1];
    if least < -tol {
        return Err(Error::NotDensityMatrix(format!(
            "negative eigenvalue {least:e}"
        )));
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn record(n: usize, k: usize, a: f64) -> TangleRecord<f64> {
        tangle_record(&DickeParams::new(n, k, a).unwrap()).unwrap()
    }

    fn bell_projector() -> SmallMatrix<f64> {
        SmallMatrix::from_rows([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.5, 0.0],
            [0.0, 0.5, 0.5, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    fn w_marginal() -> SmallMatrix<f64> {
        let t = 1. / 3.;
        SmallMatrix::from_rows([
            [t, 0., 0., 0.],
            [0., t, t, 0.],
            [0., t, t, 0.],
            [0., 0., 0., 0.],
        ])
        .unwrap()
    }

    /// Closed form for "X" states (only diagonal and anti-diagonal entries).
    fn x_state_concurrence(rho: &SmallMatrix<f64>) -> f64 {
        let first = rho[(1, 2)].abs() - (rho[(0, 0)] * rho[(3, 3)]).sqrt();
        let second = rho[(0, 3)].abs() - (rho[(1, 1)] * rho[(2, 2)]).sqrt();
        (2.0 * first.max(second)).max(0.0)
    }

    #[test]
    fn concurrence_examples() {
        assert_abs_diff_eq!(
            concurrence_two_qubit(&bell_projector()).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            concurrence_two_qubit(&w_marginal()).unwrap(),
            2. / 3.,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(x_state_concurrence(&w_marginal()), 2. / 3., epsilon = 1e-15);
        let product = SmallMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(concurrence_two_qubit(&product).unwrap(), 0.0);
    }

    #[test]
    fn concurrence_matches_x_state_formula_at_dicke_points() {
        // a = 0 marginals have B = C = E = 0, so they are X states.
        for n in 2..=40 {
            for k in 1..=n / 2 {
                let p = DickeParams::new(n, k, 0.0).unwrap();
                let rho = marginal_matrix(&two_qubit_marginal(&p).unwrap()).unwrap();
                let got = concurrence_two_qubit(&rho).unwrap();
                assert!(
                    (got - x_state_concurrence(&rho)).abs() < 1e-12,
                    "N={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn concurrence_rejects_non_density_input() {
        let scaled = SmallMatrix::from_diagonal(&[2.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            concurrence_two_qubit(&scaled),
            Err(Error::NotDensityMatrix(_))
        ));
        let indefinite = SmallMatrix::from_diagonal(&[1.5, -0.5, 0.0, 0.0]).unwrap();
        assert!(matches!(
            concurrence_two_qubit(&indefinite),
            Err(Error::NotDensityMatrix(_))
        ));
        let mut asym = w_marginal();
        asym[(0, 1)] = 0.1;
        assert!(matches!(
            concurrence_two_qubit(&asym),
            Err(Error::NotDensityMatrix(_))
        ));
        let small = SmallMatrix::<f64>::identity(2).unwrap();
        assert!(matches!(
            concurrence_two_qubit(&small),
            Err(Error::WrongDimension { .. })
        ));
    }

    #[test]
    fn spin_flip_spectrum_matches_squared_roots() {
        for (n, k, a) in [(3, 1, 0.0f64), (5, 2, 0.3), (8, 4, 0.7), (12, 3, 0.95)] {
            let p = DickeParams::new(n, k, a).unwrap();
            let rho = marginal_matrix(&two_qubit_marginal(&p).unwrap()).unwrap();
            let lambdas = spin_flip_spectrum(&rho).unwrap();
            let sum_roots: f64 = lambdas.iter().map(|x| x.sqrt()).sum();
            let c = concurrence_two_qubit(&rho).unwrap();
            // C = sqrt(l1) - sum of the rest
            let via_product = (2.0 * lambdas[0].sqrt() - sum_roots).max(0.0);
            assert!(
                (c - via_product).abs() < 1e-6,
                "N={n} k={k} a={a}: {c} vs {via_product}"
            );
        }
    }

    #[test]
    fn one_vs_rest_examples() {
        let single = |d: [f64; 2]| SingleQubitMarginal {
            m: SmallMatrix::from_diagonal(&d).unwrap(),
        };
        assert_abs_diff_eq!(
            one_vs_rest(&single([0.5, 0.5])).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            one_vs_rest(&single([2. / 3., 1. / 3.])).unwrap(),
            2.0 * 2f64.sqrt() / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(one_vs_rest(&single([1.0, 0.0])).unwrap(), 0.0);
        assert!(matches!(
            one_vs_rest(&single([0.7, 0.7])),
            Err(Error::NotDensityMatrix(_))
        ));
        assert!(matches!(
            one_vs_rest(&single([1.2, -0.2])),
            Err(Error::NotDensityMatrix(_))
        ));
    }

    #[test]
    fn negativity_examples() {
        let params = DickeParams::new(2, 1, 0.0).unwrap();
        let bell = TwoQubitMarginal {
            a_el: 0.0,
            b_el: 0.0,
            c_el: 0.0,
            d_el: 0.5,
            e_el: 0.0,
            f_el: 0.0,
            params,
        };
        assert_abs_diff_eq!(negativity_two_qubit(&bell).unwrap(), 1.0, epsilon = 1e-14);

        let w = two_qubit_marginal(&DickeParams::new(3, 1, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(
            negativity_two_qubit(&w).unwrap(),
            (5f64.sqrt() - 1.0) / 3.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            negativity_of_matrix(&w_marginal()).unwrap(),
            (5f64.sqrt() - 1.0) / 3.0,
            epsilon = 1e-14
        );

        let sep = two_qubit_marginal(&DickeParams::new(6, 3, 1.0).unwrap()).unwrap();
        assert_eq!(negativity_two_qubit(&sep).unwrap(), 0.0);
    }

    #[test]
    fn tangle_record_examples() {
        let r = record(3, 1, 0.0);
        assert_abs_diff_eq!(r.c1_sq, 8. / 9., epsilon = 1e-14);
        assert_abs_diff_eq!(r.c2_sq, 4. / 9., epsilon = 1e-14);
        assert_abs_diff_eq!(r.tau, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.n2, (5f64.sqrt() - 1.0) / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.xi, 4.0 * (5f64.sqrt() - 1.0) / 9.0, epsilon = 1e-14);

        let r = record(4, 2, 0.0);
        assert_abs_diff_eq!(r.c1_sq, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.c2_sq, 1. / 9., epsilon = 1e-14);
        assert_abs_diff_eq!(r.tau, 2. / 3., epsilon = 1e-14);
        assert_abs_diff_eq!(r.n2, 1. / 3., epsilon = 1e-14);
        assert_abs_diff_eq!(r.xi, 2. / 3., epsilon = 1e-14);

        for (n, k) in [(2, 1), (7, 3), (100, 50)] {
            let r = record(n, k, 1.0);
            assert_eq!(
                (r.c1_sq, r.c2_sq, r.tau, r.n2, r.xi),
                (0.0, 0.0, 0.0, 0.0, 0.0)
            );
        }
    }

    #[test]
    fn two_qubit_state_is_pure_and_pairwise() {
        // With N = 2 the marginal is the state itself: tau = 0 and C2 = C1.
        for step in 0..=10 {
            let r = record(2, 1, step as f64 / 10.0);
            assert!((r.c1_sq - r.c2_sq).abs() < 1e-12);
            assert!(r.tau.abs() < 1e-12);
        }
    }

    #[test]
    fn tau_decay_in_n_breaks_at_balanced_step() {
        // tau^(k)_N increases from N = 2k to N = 2k + 1.
        for k in 2..=5 {
            assert!(record(2 * k + 1, k, 0.0).tau > record(2 * k, k, 0.0).tau + 1e-3);
        }
        // and decays from there on.
        for k in 1..=4 {
            for n in (2 * k + 1)..30 {
                for a in [0.0, 0.3, 0.6, 0.9] {
                    assert!(record(n + 1, k, a).tau <= record(n, k, a).tau + 1e-10);
                }
            }
        }
    }

    #[test]
    fn measures_in_single_precision() {
        let r = tangle_record(&DickeParams::<f32>::new(4, 2, 0.0).unwrap()).unwrap();
        assert!((r.tau - 2. / 3.).abs() < 1e-5 && (r.xi - 2. / 3.).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn record_invariants(n in 2usize..160, kf in 0.0f64..1.0, a in 0.0f64..=1.0) {
            let k = 1 + ((n / 2 - 1) as f64 * kf) as usize;
            let r = record(n, k, a);
            let pairs = (n - 1) as f64;
            prop_assert!((r.tau - (r.c1_sq - pairs * r.c2_sq)).abs() < 1e-12);
            prop_assert!((r.xi - (r.c1_sq - pairs * r.n2 * r.n2)).abs() < 1e-12);
            for x in [r.c1_sq, r.c2_sq, r.n2] {
                prop_assert!((0.0..=1.0).contains(&x));
            }
            prop_assert!(r.tau >= -1e-10 && r.xi >= -1e-10);
            prop_assert!(r.xi >= r.tau - 1e-10);
            prop_assert!(r.n2 <= r.c2_sq.sqrt() + 1e-10);
            if k == 1 {
                prop_assert!(r.tau.abs() < 1e-9);
            }
        }
    }
}
