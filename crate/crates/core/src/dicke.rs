//! Canonical one-parameter amplitudes of the two-spinor symmetric states
//! `|D_{N-k,k}>` in the Dicke basis, and the Clebsch-Gordan coefficients
//! that split a spin-`N/2` Dicke state into a spin-`(N-2)/2` part and a
//! two-qubit spin-1 part.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance for `a` slightly outside `[0, 1]` from roundoff in callers.
const A_SLACK: f64 = 1e-15;

/// Identifies `|D_{N-k,k}>`: `N` qubits, one spinor repeated `k` times, and
/// the non-orthogonality `a` between the two spinors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DickeParams<T> {
    n_qubits: usize,
    degeneracy: usize,
    non_orthogonality: T,
}

impl<T: Scalar> DickeParams<T> {
    /// Requires `N >= 2`, `1 <= k <= N/2` and `0 <= a <= 1`.
    pub fn new(n_qubits: usize, degeneracy: usize, non_orthogonality: T) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidParams(format!(
                "N = {n_qubits} must be at least 2"
            )));
        }
        if degeneracy < 1 || degeneracy > n_qubits / 2 {
            return Err(Error::InvalidParams(format!(
                "k = {degeneracy} must lie in 1..={} for N = {n_qubits}",
                n_qubits / 2
            )));
        }
        let a = non_orthogonality;
        let slack = T::lit(A_SLACK);
        if !a.is_finite() || a < -slack || a > T::one() + slack {
            return Err(Error::InvalidParams(format!("a = {a} must lie in [0, 1]")));
        }
        Ok(Self {
            n_qubits,
            degeneracy,
            non_orthogonality: a.max(T::zero()).min(T::one()),
        })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    /// The parameter `a`.
    #[inline]
    pub fn a(&self) -> T {
        self.non_orthogonality
    }

    /// `b = sqrt(1 - a^2)`.
    #[inline]
    pub fn b(&self) -> T {
        (T::one() - self.non_orthogonality * self.non_orthogonality)
            .max(T::zero())
            .sqrt()
    }
}

/// Normalized amplitudes `beta_r`, `r = 0..=k`, on the Dicke states with `r`
/// qubits excited.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector<T> {
    pub params: DickeParams<T>,
    pub beta: Vec<T>,
}

impl<T: Scalar> AmplitudeVector<T> {
    /// `beta_r`, or zero outside `0..=k`.
    #[inline]
    pub fn get(&self, r: usize) -> T {
        self.beta.get(r).copied().unwrap_or_else(T::zero)
    }

    pub fn norm_sqr(&self) -> T {
        self.beta.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }
}

/// `c_{m2}^{(r)}` for `m2 = +1, 0, -1`: overlap of `|N/2, N/2 - r>` with
/// `|N/2 - 1, N/2 - r - m2> ⊗ |1, m2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgTriple<T> {
    pub c_plus: T,
    pub c_zero: T,
    pub c_minus: T,
}

impl<T: Scalar> CgTriple<T> {
    pub fn norm_sqr(&self) -> T {
        self.c_plus * self.c_plus + self.c_zero * self.c_zero + self.c_minus * self.c_minus
    }
}

/// Clebsch-Gordan coefficients coupling spin `(N-2)/2` with spin 1 to the
/// stretched total spin `N/2`, at `m = N/2 - r`.
pub fn cg_coefficients<T: Scalar>(n: usize, r: usize) -> Result<CgTriple<T>> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "N",
            detail: format!("N = {n} must be at least 2"),
        });
    }
    if r > n {
        return Err(Error::OutOfRange {
            what: "r",
            detail: format!("r = {r} must lie in 0..={n}"),
        });
    }
    // Products of consecutive integers: exact, and zero where a factor
    // vanishes, so the square roots never see a negative argument.
    let denom = (n * (n - 1)) as f64;
    let plus = ((n - r) * (n - r).saturating_sub(1)) as f64;
    let minus = (r * r.saturating_sub(1)) as f64;
    let zero = (2 * r * (n - r)) as f64;
    Ok(CgTriple {
        c_plus: T::lit(plus / denom).sqrt(),
        c_zero: T::lit(zero / denom).sqrt(),
        c_minus: T::lit(minus / denom).sqrt(),
    })
}

/// Canonical amplitudes of `|D_{N-k,k}>`.
///
/// Unnormalized `beta_r ∝ sqrt(N! (N-r)! / r!) a^(k-r) b^r / ((N-k)! (k-r)!)`
/// is evaluated in log space, exponentiated relative to its largest term
/// and then divided by the Euclidean norm. `a = 0` gives the Dicke state
/// with `k` excitations, `a = 1` the all-zero product state.
pub fn amplitudes<T: Scalar>(params: &DickeParams<T>) -> AmplitudeVector<T> {
    let n = params.n_qubits;
    let k = params.degeneracy;
    let a = params.a();
    let b = params.b();

    let mut beta = vec![T::zero(); k + 1];
    if b == T::zero() {
        beta[0] = T::one();
    } else if a == T::zero() {
        beta[k] = T::one();
    } else {
        let (ln_a, ln_b) = (a.ln(), b.ln());
        let half = T::lit(0.5);
        let common = half * ln_factorial::<T>(n) - ln_factorial::<T>(n - k);
        let logs: Vec<T> = (0..=k)
            .map(|r| {
                common + half * (ln_factorial::<T>(n - r) - ln_factorial::<T>(r))
                    - ln_factorial::<T>(k - r)
                    + T::count(k - r) * ln_a
                    + T::count(r) * ln_b
            })
            .collect();
        let peak = logs.iter().copied().fold(T::neg_infinity(), T::max);
        for (slot, &lg) in beta.iter_mut().zip(&logs) {
            *slot = (lg - peak).exp();
        }
        let norm = beta.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        for x in beta.iter_mut() {
            *x /= norm;
        }
    }
    AmplitudeVector {
        params: *params,
        beta,
    }
}

/// Number of leading `ln(n!)` values computed by direct summation.
const LN_FACTORIAL_EXACT_BELOW: usize = 32;

/// `ln(n!)`: direct summation for small `n`, Stirling series otherwise.
pub fn ln_factorial<T: Scalar>(n: usize) -> T {
    if n < LN_FACTORIAL_EXACT_BELOW {
        return (2..=n).fold(T::zero(), |acc, i| acc + T::count(i).ln());
    }
    // ln n! = n ln n - n + ln(2 pi n)/2 + 1/(12n) - 1/(360n^3) + 1/(1260n^5) - 1/(1680n^7)
    let x = T::count(n);
    let inv = x.recip();
    let inv2 = inv * inv;
    let series = inv
        * (T::lit(1.0 / 12.0)
            - inv2
                * (T::lit(1.0 / 360.0)
                    - inv2 * (T::lit(1.0 / 1260.0) - inv2 * T::lit(1.0 / 1680.0))));
    x * x.ln() - x + T::lit(0.5) * (T::TAU() * x).ln() + series
}
