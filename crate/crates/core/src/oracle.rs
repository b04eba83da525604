//! Brute-force reference path: dense `2^N` complex state vectors and exact
//! partial traces.
//!
//! Nothing here reuses the analytic marginal formulas; states are stored
//! densely, indexed by computational-basis bitstring with qubit 0 as the
//! most significant bit, and reduced density matrices are summed entry by
//! entry. Cost is exponential in `N`, so every constructor is guarded by a
//! configurable qubit cap.

use num_complex::Complex;

use crate::dicke::{amplitudes, DickeParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::smallmat::SmallMatrix;

pub const DEFAULT_CAP: usize = 14;
/// Symmetrized sums with a squared norm below this are reported as vanished.
const ZERO_STATE_NORM: f64 = 1e-13;

/// Single-qubit state `(cos(α/2)|0> + sin(α/2)|1>) e^{iβ/2}`, or any unit
/// vector given by components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor<T> {
    c0: Complex<T>,
    c1: Complex<T>,
}

impl<T: Scalar> Spinor<T> {
    /// Bloch-sphere polar angle `alpha` and phase `beta_phase`.
    pub fn from_angles(alpha: T, beta_phase: T) -> Self {
        let half = T::lit(0.5);
        let phase = Complex::from_polar(T::one(), beta_phase * half);
        Self {
            c0: phase * (alpha * half).cos(),
            c1: phase * (alpha * half).sin(),
        }
    }

    /// Requires `|c0|^2 + |c1|^2 = 1` within `1e-14`.
    pub fn from_components(c0: Complex<T>, c1: Complex<T>) -> Result<Self> {
        let norm = c0.norm_sqr() + c1.norm_sqr();
        if !norm.is_finite() || (norm - T::one()).abs() > T::tol(1e-14) {
            return Err(Error::InvalidParams(format!(
                "spinor norm^2 {norm} is not 1"
            )));
        }
        Ok(Self { c0, c1 })
    }

    pub fn zero() -> Self {
        Self {
            c0: Complex::new(T::one(), T::zero()),
            c1: Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn one() -> Self {
        Self {
            c0: Complex::new(T::zero(), T::zero()),
            c1: Complex::new(T::one(), T::zero()),
        }
    }

    /// `a|0> + sqrt(1 - a^2)|1>` for `a` in `[0, 1]`.
    pub fn real(a: T) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&a) {
            return Err(Error::InvalidParams(format!("a = {a} must lie in [0, 1]")));
        }
        let b = (T::one() - a * a).max(T::zero()).sqrt();
        Ok(Self {
            c0: Complex::new(a, T::zero()),
            c1: Complex::new(b, T::zero()),
        })
    }

    #[inline]
    pub fn component(&self, bit: usize) -> Complex<T> {
        if bit == 0 {
            self.c0
        } else {
            self.c1
        }
    }
}

/// Dense `N`-qubit state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

/// Complex Hermitian reduced density matrix of `m` qubits, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDensity<T> {
    pub dim: usize,
    pub entries: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexDensity<T> {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim)
            .map(|i| self.get(i, i))
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    pub fn max_imag(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.im.abs()))
    }

    /// Real part as a [`SmallMatrix`]; fails if any imaginary part exceeds `tol`.
    pub fn to_real(&self, tol: T) -> Result<SmallMatrix<T>> {
        let imag = self.max_imag();
        if imag > tol {
            return Err(Error::NotReal(imag.to_f64().unwrap_or(f64::NAN)));
        }
        let re: Vec<T> = self.entries.iter().map(|z| z.re).collect();
        SmallMatrix::new(self.dim, &re)
    }
}

impl<T: Scalar> FullState<T> {
    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Amplitude of the basis state whose bit for qubit `q` is `bits[q]`.
    pub fn amplitude_of(&self, bits: &[u8]) -> Complex<T> {
        assert_eq!(bits.len(), self.n_qubits, "bitstring length");
        let idx = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0));
        self.amplitudes[idx]
    }

    /// Largest amplitude deviation between basis states of equal Hamming
    /// weight.
    pub fn permutation_asymmetry(&self) -> T {
        let mut reference: Vec<Option<Complex<T>>> = vec![None; self.n_qubits + 1];
        let mut worst = T::zero();
        for (idx, &amp) in self.amplitudes.iter().enumerate() {
            let w = idx.count_ones() as usize;
            match reference[w] {
                None => reference[w] = Some(amp),
                Some(r) => worst = worst.max((amp - r).norm()),
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        (self.n_qubits == other.n_qubits).then(|| {
            self.amplitudes
                .iter()
                .zip(&other.amplitudes)
                .fold(T::zero(), |acc, (x, y)| acc.max((x - y).norm()))
        })
    }

    /// Reduced density matrix of the listed qubits, in the listed order.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<ComplexDensity<T>> {
        let n = self.n_qubits;
        for (pos, &q) in keep.iter().enumerate() {
            if q >= n || keep[..pos].contains(&q) {
                return Err(Error::OutOfRange {
                    what: "qubit",
                    detail: format!("qubit list {keep:?} invalid for {n} qubits"),
                });
            }
        }
        let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let dim = 1usize << keep.len();
        let tail = 1usize << rest.len();
        let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;

        // Reshape psi into a dim x tail block, then rho = M M^dagger.
        let zero = Complex::new(T::zero(), T::zero());
        let mut block = vec![zero; dim * tail];
        for (idx, &amp) in self.amplitudes.iter().enumerate() {
            let row = keep.iter().fold(0usize, |acc, &q| (acc << 1) | bit(idx, q));
            let col = rest.iter().fold(0usize, |acc, &q| (acc << 1) | bit(idx, q));
            block[row * tail + col] = amp;
        }
        let mut entries = vec![zero; dim * dim];
        for x in 0..dim {
            for y in 0..dim {
                let mut acc = zero;
                for z in 0..tail {
                    acc += block[x * tail + z] * block[y * tail + z].conj();
                }
                entries[x * dim + y] = acc;
            }
        }
        Ok(ComplexDensity { dim, entries })
    }

    /// Real two-qubit marginal of qubits `(i, j)`.
    pub fn partial_trace_to_pair(&self, i: usize, j: usize) -> Result<SmallMatrix<T>> {
        self.reduced_density(&[i, j])?.to_real(T::tol(1e-12))
    }

    /// Real two-qubit marginal of the first two qubits.
    pub fn partial_trace_to_two(&self) -> Result<SmallMatrix<T>> {
        if self.n_qubits < 2 {
            return Err(Error::OutOfRange {
                what: "N",
                detail: "two-qubit marginal needs at least 2 qubits".into(),
            });
        }
        self.partial_trace_to_pair(0, 1)
    }

    /// Real single-qubit marginal of the first qubit.
    pub fn partial_trace_to_one(&self) -> Result<SmallMatrix<T>> {
        self.reduced_density(&[0])?.to_real(T::tol(1e-12))
    }
}

/// Brute-force state builder with an upper bound on the qubit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap }
    }

    #[inline]
    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        if n == 0 {
            return Err(Error::OutOfRange {
                what: "N",
                detail: "need at least one qubit".into(),
            });
        }
        Ok(())
    }

    /// `|N/2, N/2 - r>`: equal amplitude `1/sqrt(C(N, r))` on every
    /// bitstring with `r` ones.
    pub fn dicke_basis_vector<T: Scalar>(&self, n: usize, r: usize) -> Result<FullState<T>> {
        self.check(n)?;
        if r > n {
            return Err(Error::OutOfRange {
                what: "r",
                detail: format!("r = {r} must lie in 0..={n}"),
            });
        }
        let amp = Complex::new(T::lit(binomial(n, r)).sqrt().recip(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        let amplitudes = (0..1usize << n)
            .map(|idx| {
                if idx.count_ones() as usize == r {
                    amp
                } else {
                    zero
                }
            })
            .collect();
        Ok(FullState {
            n_qubits: n,
            amplitudes,
        })
    }

    /// `Σ_r beta_r |N/2, N/2 - r>` using the canonical amplitudes.
    pub fn expand_state<T: Scalar>(&self, params: &DickeParams<T>) -> Result<FullState<T>> {
        let n = params.n_qubits();
        self.check(n)?;
        let beta = amplitudes(params);
        let zero = Complex::new(T::zero(), T::zero());
        let mut state = FullState {
            n_qubits: n,
            amplitudes: vec![zero; 1 << n],
        };
        for (r, &b) in beta.beta.iter().enumerate() {
            if b == T::zero() {
                continue;
            }
            let basis = self.dicke_basis_vector::<T>(n, r)?;
            for (slot, z) in state.amplitudes.iter_mut().zip(&basis.amplitudes) {
                *slot += z * b;
            }
        }
        Ok(state)
    }

    /// Normalized sum over every distinct arrangement of `N - k` copies of
    /// `eps1` and `k` copies of `eps2`.
    ///
    /// The permutation sum is collapsed onto Hamming-weight classes: a
    /// bitstring with `w` ones receives, for each `j`, the `C(w, j) C(N - w, k - j)`
    /// arrangements in which exactly `j` of its ones come from `eps2`.
    pub fn symmetrize_two_spinors<T: Scalar>(
        &self,
        n: usize,
        k: usize,
        eps1: &Spinor<T>,
        eps2: &Spinor<T>,
    ) -> Result<FullState<T>> {
        self.check(n)?;
        if k < 1 || k >= n {
            return Err(Error::OutOfRange {
                what: "k",
                detail: format!("k = {k} must lie in 1..{n}"),
            });
        }
        let zero = Complex::new(T::zero(), T::zero());
        let by_weight: Vec<Complex<T>> = (0..=n)
            .map(|w| {
                let mut acc = zero;
                for j in 0..=k.min(w) {
                    // ones from eps1: w - j, zeros from eps1: n - k - (w - j)
                    if w - j > n - k {
                        continue;
                    }
                    let count = T::lit(binomial(w, j) * binomial(n - w, k - j));
                    let term = eps2.c1.powu(j as u32)
                        * eps2.c0.powu((k - j) as u32)
                        * eps1.c1.powu((w - j) as u32)
                        * eps1.c0.powu((n - k - (w - j)) as u32);
                    acc += term * count;
                }
                acc
            })
            .collect();
        let amplitudes: Vec<Complex<T>> = (0..1usize << n)
            .map(|idx| by_weight[idx.count_ones() as usize])
            .collect();
        normalized(n, amplitudes)
    }

    /// Same state as [`Oracle::symmetrize_two_spinors`], built by adding the
    /// tensor product for every arrangement explicitly. Exponential in both
    /// `N` and `C(N, k)`; meant for cross-checking at small `N`.
    pub fn symmetrize_by_enumeration<T: Scalar>(
        &self,
        n: usize,
        k: usize,
        eps1: &Spinor<T>,
        eps2: &Spinor<T>,
    ) -> Result<FullState<T>> {
        self.check(n)?;
        if k < 1 || k >= n {
            return Err(Error::OutOfRange {
                what: "k",
                detail: format!("k = {k} must lie in 1..{n}"),
            });
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut amplitudes = vec![zero; 1 << n];
        for placement in (0..1usize << n).filter(|m| m.count_ones() as usize == k) {
            // qubit q carries eps2 when bit (n-1-q) of `placement` is set
            let mut product = vec![Complex::new(T::one(), T::zero())];
            for q in 0..n {
                let s = if (placement >> (n - 1 - q)) & 1 == 1 {
                    eps2
                } else {
                    eps1
                };
                product = product.iter().flat_map(|&p| [p * s.c0, p * s.c1]).collect();
            }
            for (slot, p) in amplitudes.iter_mut().zip(product) {
                *slot += p;
            }
        }
        normalized(n, amplitudes)
    }
}

fn normalized<T: Scalar>(n: usize, mut amplitudes: Vec<Complex<T>>) -> Result<FullState<T>> {
    let norm_sqr = amplitudes
        .iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr());
    if norm_sqr.is_nan() || norm_sqr <= T::lit(ZERO_STATE_NORM) {
        return Err(Error::ZeroState(norm_sqr.to_f64().unwrap_or(f64::NAN)));
    }
    let inv = norm_sqr.sqrt().recip();
    for z in amplitudes.iter_mut() {
        *z *= inv;
    }
    Ok(FullState {
        n_qubits: n,
        amplitudes,
    })
}

/// `C(n, r)` as an `f64`; exact for the qubit counts the oracle admits.
fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    (0..r)
        .fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        .round()
}
