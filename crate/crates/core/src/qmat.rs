//! Dense complex linear algebra for small multi-qubit systems.
//!
//! Bit ordering: qubit 0 is the most significant bit of a basis index, so for
//! three qubits the index of `|q0 q1 q2⟩` is `4*q0 + 2*q1 + q2`. Tensor products
//! are left-factor-major: the left operand supplies the leading qubits. Every
//! module in the crate relies on this convention.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest register any value may span.
pub const MAX_QUBITS: usize = 12;
/// Tolerance for algebraic identities (norms, traces, unitarity, Hermiticity).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Branches with probability below this are treated as impossible.
pub const IMPOSSIBLE_BRANCH: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
fn bit(index: usize, qubit: usize, num_qubits: usize) -> usize {
    (index >> (num_qubits - 1 - qubit)) & 1
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    Ok(n)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    qubits_for_dim(m.nrows())
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn check_qubit_set(qubits: &[usize], num_qubits: usize) -> Result<Vec<usize>> {
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != qubits.len() {
        return Err(Error::InvalidQubits(format!(
            "repeated qubit in {qubits:?}"
        )));
    }
    if let Some(&q) = sorted.iter().find(|&&q| q >= num_qubits) {
        return Err(Error::InvalidQubits(format!(
            "qubit {q} out of range for a {num_qubits}-qubit register"
        )));
    }
    Ok(sorted)
}

/// Pure state over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    num_qubits: usize,
}

impl StateVector {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for_dim(amplitudes.len())?;
        let amplitudes = CVector::from_vec(amplitudes);
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self {
            amplitudes,
            num_qubits,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for_dim(amplitudes.len())?;
        let amplitudes = CVector::from_vec(amplitudes);
        let norm = amplitudes.norm();
        if norm < f64::EPSILON {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
            num_qubits,
        })
    }

    /// Computational basis ket `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[index] = ONE;
        Ok(Self {
            amplitudes,
            num_qubits,
        })
    }

    /// Computational ket from a bit string such as `"010"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = parse_bits(bits)?
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Self::basis(bits.len(), index)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            entries: &self.amplitudes * self.amplitudes.adjoint(),
            num_qubits: self.num_qubits,
        }
    }
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(bits: &str) -> Result<Vec<u8>> {
    if bits.is_empty() {
        return Err(Error::InvalidOutcome("empty bit string".into()));
    }
    bits.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidOutcome(format!(
                "'{bits}' contains '{other}', expected only 0 and 1"
            ))),
        })
        .collect()
}

/// Hermitian, unit-trace, positive semidefinite matrix. Zero qubits is allowed
/// and denotes the 1x1 scalar left after measuring every qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    num_qubits: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let num_qubits = check_square(&entries)?;
        let herm = hermitian_defect(&entries);
        if herm > ALGEBRAIC_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = entries.trace().re;
        if (tr - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::TraceNotOne(tr));
        }
        let min_ev = hermitian_eigenvalues(&entries)[0];
        if min_ev < -PSD_TOL {
            return Err(Error::NotPositive(min_ev));
        }
        Ok(Self {
            entries,
            num_qubits,
        })
    }

    /// Symmetrizes and renormalizes the output of trusted completely positive
    /// maps so rounding noise does not accumulate.
    fn from_trusted(entries: CMatrix, num_qubits: usize) -> Self {
        let mut entries = (&entries + entries.adjoint()).scale(0.5);
        let tr = entries.trace().re;
        entries.unscale_mut(tr);
        Self {
            entries,
            num_qubits,
        }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        Ok(Self {
            entries: CMatrix::identity(dim, dim).unscale(dim as f64),
            num_qubits,
        })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        state.projector()
    }

    /// `Σ wᵢ ρᵢ` for nonnegative weights summing to one.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidParameter("empty mixture".into()));
        };
        let dim = first.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (w, rho) in terms {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rho.dim(),
                });
            }
            if *w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "negative mixture weight {w}"
                )));
            }
            acc += rho.entries.scale(*w);
        }
        Self::new(acc)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ|ρᵢⱼ|² for Hermitian ρ.
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        let v = psi.amplitudes();
        Ok(v.dotc(&(&self.entries * v)).re)
    }

    /// `Tr(Aρ)` for a Hermitian observable.
    pub fn expectation(&self, observable: &Operator) -> Result<f64> {
        if observable.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: observable.dim(),
            });
        }
        Ok((observable.entries() * &self.entries).trace().re)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.entries - &other.entries))
    }

    /// Base-2 von Neumann entropy.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > 1e-15)
            .map(|l| -l * l.log2())
            .sum()
    }

    /// Partial transpose on the listed qubits. The result is generally not a
    /// density matrix, so the raw matrix is returned.
    pub fn partial_transpose(&self, qubits: &[usize]) -> Result<CMatrix> {
        let n = self.num_qubits;
        let set = check_qubit_set(qubits, n)?;
        let mask = set.iter().fold(0usize, |m, &q| m | (1 << (n - 1 - q)));
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                // swap the selected bits between row and column index
                let ni = (i & !mask) | (j & mask);
                let nj = (j & !mask) | (i & mask);
                out[(ni, nj)] = self.entries[(i, j)];
            }
        }
        Ok(out)
    }
}

/// Square operator over `num_qubits` qubits, tagged unitary when verified so.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    entries: CMatrix,
    num_qubits: usize,
    unitary: bool,
}

impl Operator {
    /// Checks `U†U = I` within [`ALGEBRAIC_TOL`].
    pub fn unitary(entries: CMatrix) -> Result<Self> {
        let num_qubits = check_square(&entries)?;
        let dim = entries.nrows();
        let defect = max_abs(&(entries.adjoint() * &entries - CMatrix::identity(dim, dim)));
        if defect > ALGEBRAIC_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self {
            entries,
            num_qubits,
            unitary: true,
        })
    }

    /// Checks Hermiticity; the unitary flag is left unset.
    pub fn hermitian(entries: CMatrix) -> Result<Self> {
        let num_qubits = check_square(&entries)?;
        let herm = hermitian_defect(&entries);
        if herm > ALGEBRAIC_TOL {
            return Err(Error::NotHermitian(herm));
        }
        Ok(Self {
            entries,
            num_qubits,
            unitary: false,
        })
    }

    /// Any square matrix, no structure assumed.
    pub fn general(entries: CMatrix) -> Result<Self> {
        let num_qubits = check_square(&entries)?;
        Ok(Self {
            entries,
            num_qubits,
            unitary: false,
        })
    }

    pub fn identity(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        Ok(Self {
            entries: CMatrix::identity(dim, dim),
            num_qubits,
            unitary: true,
        })
    }

    /// Embeds a 2x2 single-qubit matrix acting on `qubit` of an `num_qubits` register.
    pub fn single_qubit(gate: &CMatrix, qubit: usize, num_qubits: usize) -> Result<Self> {
        if gate.nrows() != 2 || gate.ncols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: gate.nrows(),
            });
        }
        check_qubit_set(&[qubit], num_qubits)?;
        let mut full = CMatrix::identity(1, 1);
        for q in 0..num_qubits {
            full = if q == qubit {
                full.kronecker(gate)
            } else {
                full.kronecker(&CMatrix::identity(2, 2))
            };
        }
        let unitary = max_abs(&(gate.adjoint() * gate - CMatrix::identity(2, 2))) <= ALGEBRAIC_TOL;
        Ok(Self {
            entries: full,
            num_qubits,
            unitary,
        })
    }

    pub fn pauli_x(qubit: usize, num_qubits: usize) -> Result<Self> {
        Self::single_qubit(&pauli::x(), qubit, num_qubits)
    }

    /// Controlled NOT as a permutation matrix.
    pub fn cnot(control: usize, target: usize, num_qubits: usize) -> Result<Self> {
        if control == target {
            return Err(Error::InvalidQubits(format!(
                "CNOT control and target coincide at qubit {control}"
            )));
        }
        check_qubit_set(&[control, target], num_qubits)?;
        let t_mask = 1usize << (num_qubits - 1 - target);
        Ok(Self::from_permutation(num_qubits, |i| {
            if bit(i, control, num_qubits) == 1 {
                i ^ t_mask
            } else {
                i
            }
        }))
    }

    /// Relabels qubits so that the content of qubit `q` moves to position `perm[q]`.
    pub fn permute_qubits(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = perm.to_vec();
        seen.sort_unstable();
        if seen != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidQubits(format!(
                "{perm:?} is not a permutation"
            )));
        }
        Ok(Self::from_permutation(n, |i| {
            (0..n).fold(0usize, |acc, q| acc | (bit(i, q, n) << (n - 1 - perm[q])))
        }))
    }

    /// Unitary sending `|i⟩` to `|map(i)⟩`; `map` must be a bijection.
    fn from_permutation(num_qubits: usize, map: impl Fn(usize) -> usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut entries = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            entries[(map(i), i)] = ONE;
        }
        Self {
            entries,
            num_qubits,
            unitary: true,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Operator {
            entries: &self.entries * &other.entries,
            num_qubits: self.num_qubits,
            unitary: self.unitary && other.unitary,
        })
    }

    /// Raw matrix-vector product, no normalization implied.
    pub fn apply_to_vector(&self, psi: &StateVector) -> Result<CVector> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(&self.entries * psi.amplitudes())
    }

    /// `U|ψ⟩` for a unitary `U`.
    pub fn apply_to_state(&self, psi: &StateVector) -> Result<StateVector> {
        if !self.unitary {
            return Err(Error::NotUnitary(f64::NAN));
        }
        Ok(StateVector {
            amplitudes: self.apply_to_vector(psi)?,
            num_qubits: psi.num_qubits(),
        })
    }

    /// Max entry of `[self, other]`.
    pub fn commutator_norm(&self, other: &Operator) -> f64 {
        max_abs(&(&self.entries * &other.entries - &other.entries * &self.entries))
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.entries - &other.entries))
    }
}

/// Single-qubit Pauli matrices.
pub mod pauli {
    use super::{CMatrix, Complex64, ONE, ZERO};

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }
}

/// Kronecker product with the left factor as the leading qubits.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

fn check_total(a: usize, b: usize) -> Result<usize> {
    let total = a + b;
    if total > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: total,
            max: MAX_QUBITS,
        });
    }
    Ok(total)
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = check_total(self.num_qubits, other.num_qubits)?;
        Ok(Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            num_qubits,
        })
    }
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = check_total(self.num_qubits, other.num_qubits)?;
        Ok(Self {
            entries: self.entries.kronecker(&other.entries),
            num_qubits,
        })
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = check_total(self.num_qubits, other.num_qubits)?;
        Ok(Self {
            entries: self.entries.kronecker(&other.entries),
            num_qubits,
            unitary: self.unitary && other.unitary,
        })
    }
}

pub fn tensor_product<T: Tensor>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

/// `UρU†`.
pub fn apply_operator(rho: &DensityMatrix, u: &Operator) -> Result<DensityMatrix> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: u.dim(),
        });
    }
    if !u.is_unitary() {
        return Err(Error::NotUnitary(f64::NAN));
    }
    let out = u.entries() * rho.entries() * u.entries().adjoint();
    Ok(DensityMatrix::from_trusted(out, rho.num_qubits()))
}

/// Reduced state on `keep`, listed in ascending qubit order in the result.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidQubits("keep set is empty".into()));
    }
    let n = rho.num_qubits();
    let keep = check_qubit_set(keep, n)?;
    Ok(reduce(rho.entries(), n, &keep))
}

/// Sums out everything not in `keep` (sorted, in range). Empty `keep` gives the
/// 1x1 trace.
fn reduce(m: &CMatrix, n: usize, keep: &[usize]) -> DensityMatrix {
    let k = keep.len();
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let sub = 1usize << k;
    let env = 1usize << traced.len();
    let compose = |kept_bits: usize, env_bits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            idx |= ((kept_bits >> (k - 1 - pos)) & 1) << (n - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            idx |= ((env_bits >> (traced.len() - 1 - pos)) & 1) << (n - 1 - q);
        }
        idx
    };
    let mut out = CMatrix::zeros(sub, sub);
    for a in 0..sub {
        for b in 0..sub {
            let mut acc = ZERO;
            for e in 0..env {
                acc += m[(compose(a, e), compose(b, e))];
            }
            out[(a, b)] = acc;
        }
    }
    DensityMatrix::from_trusted(out, k)
}

/// Outcome of a projective computational-basis measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub probability: f64,
    /// Renormalized state of the unmeasured qubits; `None` flags an impossible
    /// branch (probability below [`IMPOSSIBLE_BRANCH`]).
    pub post_state: Option<DensityMatrix>,
}

impl Measurement {
    pub fn post(&self) -> Result<&DensityMatrix> {
        self.post_state
            .as_ref()
            .ok_or(Error::ImpossibleBranch(self.probability))
    }
}

/// Projects `qubits` onto `outcome` (bit values in the same order) and traces
/// them out. Remaining qubits keep their relative order.
pub fn measure_computational(
    rho: &DensityMatrix,
    qubits: &[usize],
    outcome: &[u8],
) -> Result<Measurement> {
    let n = rho.num_qubits();
    if qubits.is_empty() {
        return Err(Error::InvalidQubits("no qubits to measure".into()));
    }
    check_qubit_set(qubits, n)?;
    if outcome.len() != qubits.len() {
        return Err(Error::InvalidOutcome(format!(
            "outcome has {} bits for {} measured qubits",
            outcome.len(),
            qubits.len()
        )));
    }
    if outcome.iter().any(|&b| b > 1) {
        return Err(Error::InvalidOutcome(format!(
            "{outcome:?} is not a bit string"
        )));
    }
    let rest: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
    let r = rest.len();
    let sub = 1usize << r;
    let mut fixed = 0usize;
    for (&q, &b) in qubits.iter().zip(outcome) {
        fixed |= (b as usize) << (n - 1 - q);
    }
    let index = |bits: usize| -> usize {
        let mut idx = fixed;
        for (pos, &q) in rest.iter().enumerate() {
            idx |= ((bits >> (r - 1 - pos)) & 1) << (n - 1 - q);
        }
        idx
    };
    let m = rho.entries();
    let block = CMatrix::from_fn(sub, sub, |a, b| m[(index(a), index(b))]);
    let probability = block.trace().re.max(0.0);
    let post_state =
        (probability >= IMPOSSIBLE_BRANCH).then(|| DensityMatrix::from_trusted(block, r));
    Ok(Measurement {
        probability,
        post_state,
    })
}

/// Summary entanglement diagnostics of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub purity: f64,
    /// Base-2 entropy of each single-qubit reduction, indexed by qubit.
    pub marginal_entropies: Vec<f64>,
    /// Present only for two-qubit states.
    pub negativity_2q: Option<f64>,
}

pub fn diagnostics(rho: &DensityMatrix) -> Diagnostics {
    let n = rho.num_qubits();
    let marginal_entropies = (0..n)
        .map(|q| reduce(rho.entries(), n, &[q]).entropy())
        .collect();
    Diagnostics {
        purity: rho.purity(),
        marginal_entropies,
        negativity_2q: (n == 2).then(|| negativity(rho)),
    }
}

/// Sum of the moduli of the negative eigenvalues of the partial transpose on
/// the last qubit; `(‖ρ^Γ‖₁ − 1)/2`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let n = rho.num_qubits();
    if n < 2 {
        return 0.0;
    }
    let pt = rho
        .partial_transpose(&[n - 1])
        .expect("last qubit is always in range");
    hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&l| l < 0.0)
        .map(f64::abs)
        .sum()
}

/// Which copy of a party's qubits a slot holds in a two-copy protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Source,
    Target,
}

/// Assignment of (party, role) pairs to global qubit indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitLayout {
    labels: Vec<char>,
    source: Vec<usize>,
    target: Vec<usize>,
}

impl QubitLayout {
    pub fn new(labels: Vec<char>, source: Vec<usize>, target: Vec<usize>) -> Result<Self> {
        let k = labels.len();
        if k == 0 || source.len() != k || target.len() != k {
            return Err(Error::InvalidQubits(format!(
                "{k} parties need {k} source and {k} target slots"
            )));
        }
        let mut all: Vec<usize> = source.iter().chain(&target).copied().collect();
        all.sort_unstable();
        if all != (0..2 * k).collect::<Vec<_>>() {
            return Err(Error::InvalidQubits(format!(
                "source {source:?} and target {target:?} do not form a permutation of 0..{}",
                2 * k
            )));
        }
        Ok(Self {
            labels,
            source,
            target,
        })
    }

    /// Source triple first (`A B C …`), then the target copy in the same party
    /// order. The source copy is therefore the left tensor factor.
    pub fn source_major(parties: usize) -> Result<Self> {
        const LABELS: [char; 6] = ['A', 'B', 'C', 'D', 'E', 'F'];
        if parties == 0 || parties > LABELS.len() {
            return Err(Error::InvalidParameter(format!(
                "unsupported party count {parties}"
            )));
        }
        Self::new(
            LABELS[..parties].to_vec(),
            (0..parties).collect(),
            (parties..2 * parties).collect(),
        )
    }

    pub fn num_parties(&self) -> usize {
        self.labels.len()
    }

    pub fn num_qubits(&self) -> usize {
        2 * self.labels.len()
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn qubit(&self, party: usize, role: Role) -> usize {
        match role {
            Role::Source => self.source[party],
            Role::Target => self.target[party],
        }
    }

    pub fn source_qubits(&self) -> &[usize] {
        &self.source
    }

    pub fn target_qubits(&self) -> &[usize] {
        &self.target
    }
}
