//! One recurrence round on two identical copies: a party-wise CNOT from each
//! source qubit onto the matching target qubit (TXOR), a computational-basis
//! measurement of the target copy, and post-selection on the outcome.
//!
//! The joint state of both copies is evolved as a full density matrix
//! (64-dimensional for three parties, 256 for four).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numfmt::sig12;
use crate::qmat::{
    apply_operator, diagnostics, measure_computational, negativity, parse_bits, partial_trace,
    tensor_product, DensityMatrix, Operator, QubitLayout, Role,
};
use crate::wstates::{gb1_fidelity, mixed_from_coeffs, w_fraction, CoefficientVector, WFraction};

/// Purity above `1 − PURE_TOL` counts as pure.
pub const PURE_TOL: f64 = 1e-10;
/// Entrywise tolerance for accepting `ρ = ρ_X ⊗ ρ_pair`.
pub const FACTOR_TOL: f64 = 1e-10;

/// Target-copy measurement result, one bit per party in party order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<u8>);

impl Outcome {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidOutcome(format!(
                "{bits:?} is not a bit string"
            )));
        }
        Ok(Self(bits))
    }

    /// The `index`-th outcome of `parties` bits, most significant bit first.
    pub fn from_index(index: usize, parties: usize) -> Self {
        Self(
            (0..parties)
                .map(|p| ((index >> (parties - 1 - p)) & 1) as u8)
                .collect(),
        )
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_bits(s)?)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// What the parties do with the source copy after comparing their bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// All zeros: keep the source copy.
    Success,
    /// All ones: keep nothing; the W fraction never improves here.
    Reject,
    /// Mixed bits: tripartite purification failed.
    FailBipartite,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Success => "Success",
            Classification::Reject => "Reject",
            Classification::FailBipartite => "FailBipartite",
        })
    }
}

pub fn classify_outcome(outcome: &Outcome) -> Classification {
    if outcome.bits().iter().all(|&b| b == 0) {
        Classification::Success
    } else if outcome.bits().iter().all(|&b| b == 1) {
        Classification::Reject
    } else {
        Classification::FailBipartite
    }
}

/// Classifies a three-party outcome string such as `"010"`.
pub fn classify(outcome: &str) -> Result<Classification> {
    let o: Outcome = outcome.parse()?;
    if o.len() != 3 {
        return Err(Error::InvalidOutcome(format!(
            "'{outcome}' has {} bits, expected 3",
            o.len()
        )));
    }
    Ok(classify_outcome(&o))
}

/// Product of one CNOT per party, source qubit controlling target qubit.
pub fn txor_for(layout: &QubitLayout) -> Result<Operator> {
    let n = layout.num_qubits();
    let mut u = Operator::identity(n)?;
    for p in 0..layout.num_parties() {
        let cnot = Operator::cnot(
            layout.qubit(p, Role::Source),
            layout.qubit(p, Role::Target),
            n,
        )?;
        u = cnot.compose(&u)?;
    }
    Ok(u)
}

/// Six-qubit TXOR in the [`QubitLayout::source_major`] layout.
pub fn txor_operator() -> Operator {
    let layout = QubitLayout::source_major(3).expect("three parties");
    txor_for(&layout).expect("valid layout")
}

/// One post-selection branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub outcome: Outcome,
    pub probability: f64,
    /// Source copy after the targets are measured and discarded; `None` for an
    /// impossible branch.
    pub post_source: Option<DensityMatrix>,
    pub classification: Classification,
}

impl Branch {
    /// Post-selected state, or [`Error::ImpossibleBranch`].
    pub fn state(&self) -> Result<&DensityMatrix> {
        self.post_source
            .as_ref()
            .ok_or(Error::ImpossibleBranch(self.probability))
    }

    /// W fraction of the post-selected three-party state.
    pub fn w_fraction(&self) -> Option<WFraction> {
        self.post_source.as_ref().and_then(|r| w_fraction(r).ok())
    }

    /// `⟨GB¹|ρ_post|GB¹⟩`.
    pub fn gb1_fidelity(&self) -> Option<f64> {
        self.post_source.as_ref().and_then(|r| gb1_fidelity(r).ok())
    }

    pub fn purity(&self) -> Option<f64> {
        self.post_source.as_ref().map(DensityMatrix::purity)
    }
}

/// All branches of one round, ordered by outcome index (`000`, `001`, …).
#[derive(Debug, Clone, PartialEq)]
pub struct RoundResult {
    pub branches: Vec<Branch>,
    pub input_fingerprint: CoefficientVector,
}

impl RoundResult {
    pub fn branch(&self, outcome: &Outcome) -> Option<&Branch> {
        self.branches.iter().find(|b| &b.outcome == outcome)
    }

    /// Lookup by bit string; panics on malformed input.
    pub fn branch_str(&self, outcome: &str) -> &Branch {
        let o: Outcome = outcome.parse().expect("bit string");
        self.branch(&o).expect("outcome of matching length")
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    /// Plain-text table: outcome, probability, classification, W fraction,
    /// GB¹ fidelity and purity, with 12 significant digits.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RoundResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# input C = {}", self.input_fingerprint)?;
        writeln!(
            f,
            "outcome probability classification w_fraction gb1_fidelity purity"
        )?;
        let opt = |v: Option<f64>| v.map(sig12).unwrap_or_else(|| "undefined".into());
        for b in &self.branches {
            writeln!(
                f,
                "{} {} {} {} {} {}",
                b.outcome,
                sig12(b.probability),
                b.classification,
                opt(b.w_fraction().map(|w| w.value)),
                opt(b.gb1_fidelity()),
                opt(b.purity()),
            )?;
        }
        Ok(())
    }
}

/// Runs one round on `rho ⊗ rho`. Works for any party count whose doubled
/// register fits in memory; the branch order follows [`Outcome::from_index`].
pub fn purify_states(rho: &DensityMatrix) -> Result<Vec<Branch>> {
    let parties = rho.num_qubits();
    let layout = QubitLayout::source_major(parties)?;
    let joint = tensor_product(rho, rho)?;
    let evolved = apply_operator(&joint, &txor_for(&layout)?)?;
    (0..1usize << parties)
        .map(|idx| {
            let outcome = Outcome::from_index(idx, parties);
            let m = measure_computational(&evolved, layout.target_qubits(), outcome.bits())?;
            Ok(Branch {
                classification: classify_outcome(&outcome),
                outcome,
                probability: m.probability,
                post_source: m.post_state,
            })
        })
        .collect()
}

/// One round on two copies of the genuine-basis-diagonal state with coefficients `c`.
pub fn purification_round(c: &CoefficientVector) -> Result<RoundResult> {
    let rho = mixed_from_coeffs(c);
    Ok(RoundResult {
        branches: purify_states(&rho)?,
        input_fingerprint: c.clone(),
    })
}

/// Bipartite content of a failed branch.
#[derive(Debug, Clone, PartialEq)]
pub struct ByproductReport {
    pub outcome: Outcome,
    /// A party factors out and the remaining pair is pure.
    pub is_pure: bool,
    /// Party label whose qubit factors out of the post-selected state.
    pub factorized_party: Option<char>,
    /// Entanglement entropy (ebits) of the pair: entropy of one of its qubits.
    pub pair_entropy: f64,
    pub pair_negativity: f64,
    pub pair_purity: f64,
    /// Purity of the whole three-party post-selected state.
    pub source_purity: f64,
    /// Smallest `max|ρ − ρ_X ⊗ ρ_pair|` over the parties X.
    pub factorization_defect: f64,
    pub pair_state: DensityMatrix,
}

impl fmt::Display for ByproductReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "outcome              {}", self.outcome)?;
        writeln!(f, "is_pure              {}", self.is_pure)?;
        writeln!(
            f,
            "factorized_party     {}",
            self.factorized_party
                .map(String::from)
                .unwrap_or_else(|| "none".into())
        )?;
        writeln!(f, "pair_entropy         {}", sig12(self.pair_entropy))?;
        writeln!(f, "pair_negativity      {}", sig12(self.pair_negativity))?;
        writeln!(f, "pair_purity          {}", sig12(self.pair_purity))?;
        writeln!(f, "source_purity        {}", sig12(self.source_purity))?;
        writeln!(f, "factorization_defect {:.3e}", self.factorization_defect)?;
        writeln!(f, "pair_state (real, imag) rows:")?;
        let m = self.pair_state.entries();
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols())
                .map(|j| format!("({:+.6}, {:+.6})", m[(i, j)].re, m[(i, j)].im))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `ρ_party ⊗ ρ_rest` re-ordered back into the original qubit positions.
fn product_with_split(rho: &DensityMatrix, party: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    let n = rho.num_qubits();
    let rest: Vec<usize> = (0..n).filter(|&q| q != party).collect();
    let single = partial_trace(rho, &[party])?;
    let pair = partial_trace(rho, &rest)?;
    let product = tensor_product(&single, &pair)?;
    // product position 0 holds `party`, positions 1.. hold `rest`
    let mut perm = vec![party];
    perm.extend(&rest);
    let reorder = Operator::permute_qubits(&perm)?;
    Ok((apply_operator(&product, &reorder)?, pair))
}

/// Inspects a failure branch for a pure Bell pair with the third party factored out.
pub fn byproduct_analysis(round: &RoundResult, outcome: &Outcome) -> Result<ByproductReport> {
    let branch = round
        .branch(outcome)
        .ok_or_else(|| Error::InvalidOutcome(format!("no branch {outcome}")))?;
    if branch.classification != Classification::FailBipartite {
        return Err(Error::InvalidOutcome(format!(
            "outcome {outcome} is classified {}, not FailBipartite",
            branch.classification
        )));
    }
    let rho = branch.state()?;
    let labels = ['A', 'B', 'C', 'D'];
    let mut best: Option<(usize, f64, DensityMatrix)> = None;
    for party in 0..rho.num_qubits() {
        let (product, pair) = product_with_split(rho, party)?;
        let defect = rho.max_abs_diff(&product);
        if best.as_ref().is_none_or(|(_, d, _)| defect < *d) {
            best = Some((party, defect, pair));
        }
    }
    let (party, defect, pair) = best.expect("at least one party");
    let factorized_party = (defect < FACTOR_TOL).then(|| labels[party]);
    let pair_diag = diagnostics(&pair);
    let pair_purity = pair_diag.purity;
    Ok(ByproductReport {
        outcome: outcome.clone(),
        is_pure: factorized_party.is_some() && pair_purity >= 1.0 - PURE_TOL,
        factorized_party,
        pair_entropy: pair_diag.marginal_entropies[0],
        pair_negativity: negativity(&pair),
        pair_purity,
        source_purity: rho.purity(),
        factorization_defect: defect,
        pair_state: pair,
    })
}
