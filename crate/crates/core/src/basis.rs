//! Genuine bases built only from GHZ- and W-type states, for three and four
//! qubits, plus the total-spin operators used to characterize them.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{pauli, CMatrix, DensityMatrix, Operator, StateVector};

/// Ordered orthonormal basis; `states[i]` carries label `labels[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenuineBasis {
    states: Vec<StateVector>,
    qubit_count: usize,
    labels: Vec<String>,
}

impl GenuineBasis {
    /// Assembles a basis without checking orthonormality; see [`verify_basis`].
    pub fn from_states(states: Vec<StateVector>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::InvalidParameter("basis has no states".into()));
        };
        let qubit_count = first.num_qubits();
        if states.len() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: states.len(),
            });
        }
        if let Some(bad) = states.iter().find(|s| s.num_qubits() != qubit_count) {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: bad.dim(),
            });
        }
        if labels.len() != states.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} states",
                labels.len(),
                states.len()
            )));
        }
        Ok(Self {
            states,
            qubit_count,
            labels,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// State by its 1-based label number (`get(1)` is GB¹).
    pub fn get(&self, number: usize) -> Option<&StateVector> {
        number.checked_sub(1).and_then(|i| self.states.get(i))
    }

    /// Diagonal populations `⟨GBⁱ|ρ|GBⁱ⟩` in basis order.
    pub fn populations(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        self.states
            .iter()
            .map(|s| rho.expectation_pure(s))
            .collect()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn superpose(num_qubits: usize, terms: &[(&str, Complex64)], scale: f64) -> StateVector {
    let mut amps = vec![c(0.0, 0.0); 1 << num_qubits];
    for (bits, amp) in terms {
        let idx = usize::from_str_radix(bits, 2).expect("literal bit string");
        amps[idx] += amp * scale;
    }
    StateVector::normalized(amps).expect("nonzero superposition")
}

/// The eight-state tripartite basis: three phased W states, three phased
/// flipped-W states and two GHZ states, with `ω₃ = exp(−2πi/3)`.
pub fn genuine_basis_3() -> GenuineBasis {
    let omega = Complex64::from_polar(1.0, -2.0 * PI / 3.0);
    let s3 = 1.0 / 3f64.sqrt();
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let one = c(1.0, 0.0);
    let mut states = Vec::with_capacity(8);
    for n in 0..3 {
        let w = omega.powi(n);
        let w2 = omega.powi(2 * n);
        states.push(superpose(3, &[("001", one), ("010", w), ("100", w2)], s3));
    }
    for n in 0..3 {
        let w = omega.powi(n);
        let w2 = omega.powi(2 * n);
        states.push(superpose(3, &[("110", one), ("101", w), ("011", w2)], s3));
    }
    states.push(superpose(3, &[("000", one), ("111", one)], s2));
    states.push(superpose(3, &[("000", one), ("111", -one)], s2));
    let labels = (1..=8).map(|i| format!("GB{i}")).collect();
    GenuineBasis {
        states,
        qubit_count: 3,
        labels,
    }
}

/// Sixteen-state four-qubit basis with `ω = exp(iπ/6)`, stored in label order
/// GB₄¹…GB₄¹⁶ (so the GHZ pair sits at 15 and 16).
pub fn genuine_basis_4() -> GenuineBasis {
    let omega = |k: i32| Complex64::from_polar(1.0, PI * k as f64 / 6.0);
    let one = c(1.0, 0.0);
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s6 = 1.0 / 6f64.sqrt();
    let signs: [[f64; 4]; 4] = [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ];
    let mut states = Vec::with_capacity(16);
    for kets in [
        ["0001", "0010", "0100", "1000"],
        ["1110", "1101", "1011", "0111"],
    ] {
        for sg in &signs {
            let terms: Vec<(&str, Complex64)> =
                kets.iter().zip(sg).map(|(k, &s)| (*k, one * s)).collect();
            states.push(superpose(4, &terms, 0.5));
        }
    }
    let pairs = ["1100", "1010", "1001", "0110", "0101", "0011"];
    let phases: [[Complex64; 6]; 6] = [
        [one, one, one, one, one, one],
        [one, omega(10), omega(8), -one, omega(4), omega(2)],
        [one, omega(8), omega(4), one, omega(8), omega(4)],
        [one, -one, one, -one, one, -one],
        [one, omega(4), omega(8), one, omega(4), omega(8)],
        [one, omega(2), omega(4), -one, omega(8), omega(10)],
    ];
    for row in &phases {
        let terms: Vec<(&str, Complex64)> =
            pairs.iter().copied().zip(row.iter().copied()).collect();
        states.push(superpose(4, &terms, s6));
    }
    states.push(superpose(4, &[("0000", one), ("1111", one)], s2));
    states.push(superpose(4, &[("0000", one), ("1111", -one)], s2));
    let labels = (1..=16).map(|i| format!("GB4_{i}")).collect();
    GenuineBasis {
        states,
        qubit_count: 4,
        labels,
    }
}

/// Shared 3-qubit basis for hot paths.
pub(crate) fn gb3() -> &'static GenuineBasis {
    static BASIS: OnceLock<GenuineBasis> = OnceLock::new();
    BASIS.get_or_init(genuine_basis_3)
}

/// Orthonormality and completeness defects of a basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisReport {
    pub max_offdiag_overlap: f64,
    pub max_norm_error: f64,
    pub completeness_defect: f64,
    pub tol: f64,
}

impl BasisReport {
    pub fn passes(&self) -> bool {
        self.max_offdiag_overlap < self.tol
            && self.max_norm_error < self.tol
            && self.completeness_defect < self.tol
    }
}

impl fmt::Display for BasisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "max_offdiag_overlap  {:.3e}", self.max_offdiag_overlap)?;
        writeln!(f, "max_norm_error       {:.3e}", self.max_norm_error)?;
        writeln!(f, "completeness_defect  {:.3e}", self.completeness_defect)?;
        writeln!(f, "tolerance            {:.3e}", self.tol)?;
        write!(
            f,
            "status               {}",
            if self.passes() { "PASS" } else { "FAIL" }
        )
    }
}

pub fn verify_basis(basis: &GenuineBasis, tol: f64) -> Result<BasisReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let states = basis.states();
    let mut max_offdiag_overlap = 0.0f64;
    let mut max_norm_error = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        max_norm_error = max_norm_error.max((a.inner(a).re - 1.0).abs());
        for b in &states[i + 1..] {
            max_offdiag_overlap = max_offdiag_overlap.max(a.inner(b).norm());
        }
    }
    let dim = 1usize << basis.qubit_count();
    let mut sum = -CMatrix::identity(dim, dim);
    for s in states {
        sum += s.amplitudes() * s.amplitudes().adjoint();
    }
    Ok(BasisReport {
        max_offdiag_overlap,
        max_norm_error,
        completeness_defect: crate::qmat::max_abs(&sum),
        tol,
    })
}

/// Collective spin `J = Σᵢ σᵢ/2` (ħ = 1) over a subset of qubits.
#[derive(Debug, Clone)]
pub struct SpinOperatorSet {
    pub indices: Vec<usize>,
    pub jx: Operator,
    pub jy: Operator,
    pub jz: Operator,
    pub j_squared: Operator,
}

impl SpinOperatorSet {
    pub fn new(indices: &[usize], num_qubits: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidQubits(
                "spin operator needs at least one qubit".into(),
            ));
        }
        let dim = 1usize << num_qubits;
        let component = |sigma: CMatrix| -> Result<CMatrix> {
            let half = sigma.scale(0.5);
            indices
                .iter()
                .try_fold(CMatrix::zeros(dim, dim), |acc, &q| {
                    Ok(acc + Operator::single_qubit(&half, q, num_qubits)?.entries())
                })
        };
        let (x, y, z) = (
            component(pauli::x())?,
            component(pauli::y())?,
            component(pauli::z())?,
        );
        let j2 = &x * &x + &y * &y + &z * &z;
        Ok(Self {
            indices: indices.to_vec(),
            jx: Operator::hermitian(x)?,
            jy: Operator::hermitian(y)?,
            jz: Operator::hermitian(z)?,
            j_squared: Operator::hermitian(j2)?,
        })
    }
}

/// `J²` of the qubits in `indices` within an `n`-qubit register.
pub fn total_spin_squared(indices: &[usize], n: usize) -> Result<Operator> {
    Ok(SpinOperatorSet::new(indices, n)?.j_squared)
}

/// Rayleigh quotient of `op` at `psi` and the eigen-residual `‖Aψ − λψ‖`.
pub fn eigen_residual(op: &Operator, psi: &StateVector) -> Result<(f64, f64)> {
    let a_psi = op.apply_to_vector(psi)?;
    let lambda = psi.amplitudes().dotc(&a_psi).re;
    let residual = (a_psi - psi.amplitudes().scale(lambda)).norm();
    Ok((lambda, residual))
}

/// Spin characterization of one tripartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinEigenReport {
    pub label: String,
    /// `⟨J²₁₂₃⟩`.
    pub j123: f64,
    /// `⟨J²₁₂⟩` (first two qubits).
    pub j12: f64,
    pub residual_123: f64,
    pub residual_12: f64,
}

impl SpinEigenReport {
    /// Largest of the two residuals.
    pub fn residual(&self) -> f64 {
        self.residual_123.max(self.residual_12)
    }

    pub fn is_simultaneous_eigenvector(&self, tol: f64) -> bool {
        self.residual() < tol
    }
}

pub fn eigencheck_state(label: &str, psi: &StateVector) -> Result<SpinEigenReport> {
    if psi.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: psi.dim(),
        });
    }
    let (j123, residual_123) = eigen_residual(&total_spin_squared(&[0, 1, 2], 3)?, psi)?;
    let (j12, residual_12) = eigen_residual(&total_spin_squared(&[0, 1], 3)?, psi)?;
    Ok(SpinEigenReport {
        label: label.to_string(),
        j123,
        j12,
        residual_123,
        residual_12,
    })
}

/// The four phase-free states underlying the genuine basis: the W state, the
/// flipped W state, `|000⟩` and `|111⟩`.
pub fn basic_states() -> Vec<(&'static str, StateVector)> {
    let one = c(1.0, 0.0);
    let s3 = 1.0 / 3f64.sqrt();
    vec![
        (
            "W",
            superpose(3, &[("001", one), ("010", one), ("100", one)], s3),
        ),
        (
            "flipped W",
            superpose(3, &[("110", one), ("101", one), ("011", one)], s3),
        ),
        ("|000>", StateVector::from_bits("000").expect("literal")),
        ("|111>", StateVector::from_bits("111").expect("literal")),
    ]
}

pub fn eigencheck_basic_states() -> Vec<SpinEigenReport> {
    basic_states()
        .iter()
        .map(|(label, psi)| eigencheck_state(label, psi).expect("3-qubit state"))
        .collect()
}

/// Same check over all eight genuine-basis states. Only GB¹, GB⁴, GB⁷ and GB⁸
/// are simultaneous eigenvectors with eigenvalues (15/4, 2); GB², GB³, GB⁵, GB⁶
/// are `J²₁₂₃ = 3/4` eigenvectors but not `J²₁₂` eigenvectors.
pub fn eigencheck_genuine_basis() -> Vec<SpinEigenReport> {
    let basis = gb3();
    basis
        .states()
        .iter()
        .zip(basis.labels())
        .map(|(psi, label)| eigencheck_state(label, psi).expect("3-qubit state"))
        .collect()
}
