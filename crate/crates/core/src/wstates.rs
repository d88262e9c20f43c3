//! Mixed W-state families diagonal in the genuine basis, the analytic twirl
//! onto the one-parameter concise family, and the W fraction.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::basis::{gb3, genuine_basis_4, GenuineBasis};
use crate::error::{Error, Result};
use crate::qmat::{CMatrix, DensityMatrix, ALGEBRAIC_TOL};

/// Populations `C₁…C₈` (or 16 for four qubits) of a genuine-basis-diagonal state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    c: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.len() != 8 && c.len() != 16 {
            return Err(Error::InvalidCoefficients(format!(
                "expected 8 (three qubits) or 16 (four qubits) entries, got {}",
                c.len()
            )));
        }
        if let Some((i, v)) = c.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidCoefficients(format!(
                "entry C{} = {v} is not finite",
                i + 1
            )));
        }
        if let Some((i, v)) = c.iter().enumerate().find(|(_, &v)| v < 0.0) {
            return Err(Error::InvalidCoefficients(format!(
                "entries must be nonnegative, but C{} = {v}",
                i + 1
            )));
        }
        let sum: f64 = c.iter().sum();
        if (sum - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidCoefficients(format!(
                "entries must sum to 1 within {ALGEBRAIC_TOL:e}, but they sum to {sum}"
            )));
        }
        Ok(Self { c })
    }

    /// `(C₁, (1−C₁)/7, …, (1−C₁)/7)`.
    pub fn concise(c1: f64) -> Result<Self> {
        check_unit_interval("C1", c1)?;
        let rest = (1.0 - c1) / 7.0;
        let mut c = vec![rest; 8];
        c[0] = c1;
        Self::new(c)
    }

    pub fn uniform(len: usize) -> Result<Self> {
        Self::new(vec![1.0 / len as f64; len])
    }

    /// Uniform sample from the probability simplex (flat Dirichlet).
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Result<Self> {
        let mut c: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let sum: f64 = c.iter().sum();
        c.iter_mut().for_each(|v| *v /= sum);
        Self::new(c)
    }

    /// Simplex sample whose first entry is the strict maximum.
    pub fn sample_c1_max<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Result<Self> {
        loop {
            let mut c = Self::sample(rng, len)?.c;
            let (imax, _) = c
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("nonempty");
            c.swap(0, imax);
            if c[1..].iter().all(|&v| v < c[0]) {
                return Self::new(c);
            }
        }
    }

    /// Reads a coefficient file; see [`FromStr`].
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?
            .parse()
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }

    /// 1-based accessor: `get(1)` is `C₁`.
    pub fn get(&self, i: usize) -> f64 {
        self.c[i - 1]
    }

    pub fn num_qubits(&self) -> usize {
        if self.c.len() == 8 {
            3
        } else {
            4
        }
    }
}

/// Decimal numbers separated by whitespace and/or commas; `#` starts a comment.
impl FromStr for CoefficientVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Vec::new();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split(|ch: char| ch == ',' || ch.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let v: f64 = tok.parse().map_err(|_| {
                    Error::InvalidCoefficients(format!("'{tok}' is not a decimal number"))
                })?;
                c.push(v);
            }
        }
        Self::new(c)
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|v| format!("{v}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {x}"
        )));
    }
    Ok(())
}

fn basis_for(c: &CoefficientVector) -> std::borrow::Cow<'static, GenuineBasis> {
    match c.len() {
        8 => std::borrow::Cow::Borrowed(gb3()),
        _ => std::borrow::Cow::Owned(genuine_basis_4()),
    }
}

/// `ρ = Σᵢ Cᵢ |GBⁱ⟩⟨GBⁱ|`.
pub fn mixed_from_coeffs(c: &CoefficientVector) -> DensityMatrix {
    let basis = basis_for(c);
    let dim = c.len();
    let mut acc = CMatrix::zeros(dim, dim);
    for (w, s) in c.as_slice().iter().zip(basis.states()) {
        if *w != 0.0 {
            acc += (s.amplitudes() * s.amplitudes().adjoint()).scale(*w);
        }
    }
    DensityMatrix::new(acc).expect("convex combination of orthonormal projectors")
}

/// `C₁|GB¹⟩⟨GB¹| + ((1−C₁)/7)(I − |GB¹⟩⟨GB¹|)`.
pub fn concise_state(c1: f64) -> Result<DensityMatrix> {
    Ok(mixed_from_coeffs(&CoefficientVector::concise(c1)?))
}

fn require_three_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `⟨GB¹|ρ|GB¹⟩`.
pub fn gb1_fidelity(rho: &DensityMatrix) -> Result<f64> {
    require_three_qubits(rho)?;
    rho.expectation_pure(&gb3().states()[0])
}

/// Projects onto the concise family keeping the GB¹ population:
/// `ρ ↦ F·P₁ + ((1−F)/7)(I − P₁)`, `F = ⟨GB¹|ρ|GB¹⟩`.
pub fn twirl_to_concise(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let f = gb1_fidelity(rho)?.clamp(0.0, 1.0);
    concise_state(f)
}

/// Largest overlap with one of the six W-type basis states (GB¹…GB⁶).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WFraction {
    pub value: f64,
    /// 1-based; ties resolve to the smallest index.
    pub argmax_index: usize,
}

pub fn w_fraction(rho: &DensityMatrix) -> Result<WFraction> {
    require_three_qubits(rho)?;
    let overlaps = gb3().states()[..6]
        .iter()
        .map(|s| rho.expectation_pure(s))
        .collect::<Result<Vec<f64>>>()?;
    let value = overlaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // overlaps equal up to rounding count as ties
    let argmax = overlaps
        .iter()
        .position(|&v| v >= value - ALGEBRAIC_TOL)
        .expect("six overlaps");
    Ok(WFraction {
        value,
        argmax_index: argmax + 1,
    })
}
