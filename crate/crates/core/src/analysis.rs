//! Closed-form success probability and GB¹ fidelity of the all-zeros branch,
//! the concise-family recurrence map with its fixed points, witness
//! expectations, and the sweep table behind the fidelity/yield curves.

use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::basis::gb3;
use crate::error::{Error, Result};
use crate::numfmt::sig12;
use crate::qmat::{DensityMatrix, StateVector, IMPOSSIBLE_BRANCH};
use crate::wstates::{check_unit_interval, concise_state, CoefficientVector};

/// Tolerance for comparing located roots.
pub const ROOT_TOL: f64 = 1e-10;
/// Grid intervals for sign-change scans over `[0, 1]`. Prime, so that simple
/// rationals such as 1/8 and 2/5 never fall on a grid node.
const SCAN_INTERVALS: usize = 997;

/// The denominator bracket `2(C₁+C₂+C₃)² + 2(C₄+C₅+C₆)² + 3(C₇+C₈)²`.
fn weight_mix(c: &[f64]) -> f64 {
    let w = c[0] + c[1] + c[2];
    let fw = c[3] + c[4] + c[5];
    let ghz = c[6] + c[7];
    2.0 * w * w + 2.0 * fw * fw + 3.0 * ghz * ghz
}

fn require_three_party(c: &CoefficientVector) -> Result<()> {
    if c.len() != 8 {
        return Err(Error::InvalidCoefficients(format!(
            "closed forms cover three parties (8 entries), got {}",
            c.len()
        )));
    }
    Ok(())
}

/// Probability that all three target bits read 0.
pub fn p000_analytic(c: &CoefficientVector) -> Result<f64> {
    require_three_party(c)?;
    Ok(weight_mix(c.as_slice()) / 6.0)
}

/// GB¹ fidelity of the source copy after the all-zeros outcome,
/// `(2C₁² + 4C₂C₃) / (6·P₀₀₀)`.
pub fn fw000_analytic(c: &CoefficientVector) -> Result<f64> {
    let p = p000_analytic(c)?;
    if p <= IMPOSSIBLE_BRANCH {
        return Err(Error::ImpossibleBranch(p));
    }
    let c = c.as_slice();
    Ok((2.0 * c[0] * c[0] + 4.0 * c[1] * c[2]) / weight_mix(c))
}

/// One step of the map on the concise family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConciseMapPoint {
    pub f_in: f64,
    pub f_out: f64,
    pub p000: f64,
    /// Surviving copies per consumed copy, `p000 / 2`.
    pub yield_: f64,
}

/// `f ↦ (51f² − 4f + 2)/(40f² − 10f + 19)`, success probability `(40f² − 10f + 19)/147`.
pub fn fw_concise_map(f: f64) -> Result<ConciseMapPoint> {
    check_unit_interval("W fraction", f)?;
    let den = 40.0 * f * f - 10.0 * f + 19.0;
    let p000 = den / 147.0;
    Ok(ConciseMapPoint {
        f_in: f,
        f_out: (51.0 * f * f - 4.0 * f + 2.0) / den,
        p000,
        yield_: p000 / 2.0,
    })
}

fn gain(f: f64) -> f64 {
    let p = fw_concise_map(f).expect("scan stays in [0, 1]");
    p.f_out - f
}

/// Roots of `g` in `[lo, hi]` from a sign-change scan refined by bisection.
fn scan_roots(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let h = (hi - lo) / SCAN_INTERVALS as f64;
    let node = |i: usize| {
        if i == SCAN_INTERVALS {
            hi
        } else {
            lo + h * i as f64
        }
    };
    let mut roots: Vec<f64> = Vec::new();
    let push = |x: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&r| (x - r).abs() > 1e-8) {
            roots.push(x);
        }
    };
    let mut a = node(0);
    let mut ga = g(a);
    for i in 1..=SCAN_INTERVALS {
        let b = node(i);
        let gb = g(b);
        if ga.abs() < 1e-15 {
            push(a, &mut roots);
        } else if ga * gb < 0.0 {
            push(bisect(&g, a, b, ga), &mut roots);
        }
        a = b;
        ga = gb;
    }
    if ga.abs() < 1e-15 {
        push(a, &mut roots);
    }
    roots
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return m;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
}

/// Fixed points of the concise map in `[0, 1]`, ascending: 1/8, 2/5 and 1.
pub fn fixed_points_concise() -> Vec<f64> {
    scan_roots(gain, 0.0, 1.0)
}

/// Central-difference slope of the concise map, one-sided at the ends of `[0, 1]`.
pub fn concise_map_slope(f: f64) -> Result<f64> {
    check_unit_interval("W fraction", f)?;
    let h = 1e-6;
    let out = |x: f64| fw_concise_map(x).map(|p| p.f_out);
    if f + h > 1.0 {
        Ok((out(f)? - out(f - h)?) / h)
    } else if f - h < 0.0 {
        Ok((out(f + h)? - out(f)?) / h)
    } else {
        Ok((out(f + h)? - out(f - h)?) / (2.0 * h))
    }
}

/// Iterated concise map. Each round is assumed to start from the concise
/// family, i.e. the output is re-twirled before the next round.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTrace {
    pub rounds: Vec<ConciseMapPoint>,
    /// Product of the per-round yields.
    pub cumulative_yield: f64,
}

impl RecurrenceTrace {
    pub fn final_fraction(&self) -> f64 {
        self.rounds.last().map_or(f64::NAN, |p| p.f_out)
    }

    /// First 1-based round whose output satisfies `pred`.
    pub fn first_round(&self, pred: impl Fn(f64) -> bool) -> Option<usize> {
        self.rounds
            .iter()
            .position(|p| pred(p.f_out))
            .map(|i| i + 1)
    }

    /// Running products of the yields, one per round.
    pub fn cumulative_yields(&self) -> Vec<f64> {
        self.rounds
            .iter()
            .scan(1.0, |acc, p| {
                *acc *= p.yield_;
                Some(*acc)
            })
            .collect()
    }
}

impl fmt::Display for RecurrenceTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "round f_in f_out p000 yield cumulative_yield")?;
        for (k, (p, cum)) in self.rounds.iter().zip(self.cumulative_yields()).enumerate() {
            writeln!(
                f,
                "{} {} {} {} {} {}",
                k + 1,
                sig12(p.f_in),
                sig12(p.f_out),
                sig12(p.p000),
                sig12(p.yield_),
                sig12(cum)
            )?;
        }
        Ok(())
    }
}

pub fn recurrence(f0: f64, rounds: usize) -> Result<RecurrenceTrace> {
    check_unit_interval("initial W fraction", f0)?;
    if rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be at least 1".into()));
    }
    let mut trace = Vec::with_capacity(rounds);
    let mut f = f0;
    let mut cumulative_yield = 1.0;
    for _ in 0..rounds {
        let p = fw_concise_map(f)?;
        cumulative_yield *= p.yield_;
        // rounding may nudge the pure-W fixed point past 1
        f = p.f_out.clamp(0.0, 1.0);
        trace.push(p);
    }
    Ok(RecurrenceTrace {
        rounds: trace,
        cumulative_yield,
    })
}

/// `αI − |ψ⟩⟨ψ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    alpha: f64,
    target_state: StateVector,
}

impl WitnessSpec {
    pub fn new(alpha: f64, target_state: StateVector) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "witness alpha must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(Self {
            alpha,
            target_state,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn target_state(&self) -> &StateVector {
        &self.target_state
    }
}

/// Shipped witness configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessPreset {
    /// GB¹ witness at α = 13/20, the as-printed W-entanglement threshold.
    PaperW,
    /// GB¹ witness at the standard W value α = 2/3.
    StandardW,
    /// GB⁷ (GHZ) witness at α = 3/4.
    Ghz,
}

impl WitnessPreset {
    pub const ALL: [WitnessPreset; 3] = [Self::PaperW, Self::StandardW, Self::Ghz];

    pub fn name(self) -> &'static str {
        match self {
            Self::PaperW => "paper-w",
            Self::StandardW => "standard-w",
            Self::Ghz => "ghz",
        }
    }

    pub fn spec(self) -> WitnessSpec {
        let basis = gb3();
        let (alpha, number) = match self {
            Self::PaperW => (13.0 / 20.0, 1),
            Self::StandardW => (2.0 / 3.0, 1),
            Self::Ghz => (3.0 / 4.0, 7),
        };
        WitnessSpec::new(alpha, basis.get(number).expect("label").clone()).expect("alpha in (0, 1)")
    }
}

/// `Tr[(αI − |ψ⟩⟨ψ|)ρ] = α − ⟨ψ|ρ|ψ⟩` for unit-trace `ρ`.
pub fn witness_expectation(rho: &DensityMatrix, w: &WitnessSpec) -> Result<f64> {
    Ok(w.alpha * rho.trace() - rho.expectation_pure(&w.target_state)?)
}

/// `C₁` where the witness expectation on the concise state changes sign, or
/// `None` when it keeps one sign on `[0, 1]`.
pub fn witness_threshold(w: &WitnessSpec) -> Result<Option<f64>> {
    if w.target_state.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: w.target_state.dim(),
        });
    }
    let g = |c1: f64| {
        witness_expectation(&concise_state(c1).expect("c1 in [0, 1]"), w).expect("3-qubit state")
    };
    Ok(scan_roots(g, 0.0, 1.0).first().copied())
}

/// Witness value and threshold for one preset.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub preset: WitnessPreset,
    pub alpha: f64,
    pub c1: f64,
    pub expectation: f64,
    pub threshold: Option<f64>,
}

pub fn witness_report(c1: f64, preset: WitnessPreset) -> Result<WitnessReport> {
    let spec = preset.spec();
    Ok(WitnessReport {
        preset,
        alpha: spec.alpha(),
        c1,
        expectation: witness_expectation(&concise_state(c1)?, &spec)?,
        threshold: witness_threshold(&spec)?,
    })
}

/// Note on the mismatch between the 13/20 and 2/3 W thresholds, present only
/// while the two presets disagree.
pub fn witness_discrepancy() -> Result<Option<String>> {
    let printed = witness_threshold(&WitnessPreset::PaperW.spec())?;
    let standard = witness_threshold(&WitnessPreset::StandardW.spec())?;
    Ok(match (printed, standard) {
        (Some(a), Some(b)) if (a - b).abs() > ROOT_TOL => Some(format!(
            "W-witness thresholds disagree: paper-w (alpha = 13/20) crosses at C1 = {}, \
             standard-w (alpha = 2/3) crosses at C1 = {}",
            sig12(a),
            sig12(b)
        )),
        _ => None,
    })
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "preset       {}", self.preset.name())?;
        writeln!(f, "alpha        {}", sig12(self.alpha))?;
        writeln!(f, "c1           {}", sig12(self.c1))?;
        writeln!(f, "expectation  {}", sig12(self.expectation))?;
        let verdict = if self.expectation < 0.0 {
            "negative (entanglement of the target class detected)"
        } else {
            "nonnegative (nothing detected)"
        };
        writeln!(f, "sign         {verdict}")?;
        match self.threshold {
            Some(t) => write!(f, "threshold    {}", sig12(t)),
            None => write!(f, "threshold    absent in [0, 1]"),
        }
    }
}

/// Evenly spaced concise-map points on `[f_min, f_max]`, `steps` rows, the last
/// exactly at `f_max`.
pub fn curve_points(f_min: f64, f_max: f64, steps: usize) -> Result<Vec<ConciseMapPoint>> {
    if !(0.0 <= f_min && f_min < f_max && f_max <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= from < to <= 1, got from = {f_min}, to = {f_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    let h = (f_max - f_min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            let f = if i == steps - 1 {
                f_max
            } else {
                f_min + h * i as f64
            };
            fw_concise_map(f)
        })
        .collect()
}

pub const CURVE_HEADER: &str = "f_in,f_out,p000,yield";

pub fn write_curves(points: &[ConciseMapPoint], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{}",
            sig12(p.f_in),
            sig12(p.f_out),
            sig12(p.p000),
            sig12(p.yield_)
        )?;
    }
    Ok(())
}

/// Writes the sweep CSV to `path`.
pub fn export_curves(f_min: f64, f_max: f64, steps: usize, path: impl AsRef<Path>) -> Result<()> {
    let points = curve_points(f_min, f_max, steps)?;
    let path = path.as_ref();
    let file =
        std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    write_curves(&points, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_c1() -> CoefficientVector {
        let mut c = vec![0.0; 8];
        c[0] = 1.0;
        CoefficientVector::new(c).unwrap()
    }

    #[test]
    fn p000_examples() {
        assert!((p000_analytic(&unit_c1()).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(
            (p000_analytic(&CoefficientVector::uniform(8).unwrap()).unwrap() - 0.125).abs() < 1e-15
        );
        let half = CoefficientVector::concise(0.5).unwrap();
        assert!((p000_analytic(&half).unwrap() - 24.0 / 147.0).abs() < 1e-15);
        assert!(p000_analytic(&CoefficientVector::uniform(16).unwrap()).is_err());
    }

    #[test]
    fn fw000_examples() {
        assert!((fw000_analytic(&unit_c1()).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (fw000_analytic(&CoefficientVector::uniform(8).unwrap()).unwrap() - 0.125).abs()
                < 1e-15
        );
        let half = CoefficientVector::concise(0.5).unwrap();
        assert!((fw000_analytic(&half).unwrap() - 0.53125).abs() < 1e-15);
    }

    #[test]
    fn concise_map_examples() {
        assert!((fw_concise_map(0.4).unwrap().f_out - 0.4).abs() < 1e-15);
        assert!((fw_concise_map(0.125).unwrap().f_out - 0.125).abs() < 1e-15);
        assert!((fw_concise_map(0.45).unwrap().f_out - 10.5275 / 22.6).abs() < 1e-15);
        assert!((fw_concise_map(0.45).unwrap().f_out - 0.465819).abs() < 1e-6);
        let end = fw_concise_map(1.0).unwrap();
        assert!((end.yield_ - 1.0 / 6.0).abs() < 1e-15);
        assert!(fw_concise_map(1.2).is_err());
    }

    #[test]
    fn fixed_points_against_factored_cubic() {
        // −40f³ + 61f² − 23f + 2 = −(5f − 2)(8f − 1)(f − 1)
        let cubic = |f: f64| -40.0 * f.powi(3) + 61.0 * f * f - 23.0 * f + 2.0;
        let factored = |f: f64| -(5.0 * f - 2.0) * (8.0 * f - 1.0) * (f - 1.0);
        for i in 0..=10 {
            let f = i as f64 / 10.0;
            assert!((cubic(f) - factored(f)).abs() < 1e-12);
        }
        let roots = fixed_points_concise();
        assert_eq!(roots.len(), 3, "{roots:?}");
        for (r, want) in roots.iter().zip([0.125, 0.4, 1.0]) {
            assert!((r - want).abs() < 1e-10, "{r} vs {want}");
        }
    }

    #[test]
    fn pure_w_fixed_point_attracts() {
        let slope = concise_map_slope(1.0).unwrap();
        assert!(slope < 1.0, "{slope}");
        assert!(concise_map_slope(0.4).unwrap() > 1.0);
        assert!(concise_map_slope(0.125).unwrap() < 1.0);
    }

    #[test]
    fn recurrence_examples() {
        let t = recurrence(1.0, 5).unwrap();
        for p in &t.rounds {
            assert!((p.f_out - 1.0).abs() < 1e-15);
            assert!((p.yield_ - 1.0 / 6.0).abs() < 1e-15);
        }
        assert!((t.cumulative_yield - (1.0f64 / 6.0).powi(5)).abs() < 1e-15);
        assert!(recurrence(0.45, 25).unwrap().final_fraction() > 0.99);
        let down = recurrence(0.39, 25).unwrap();
        assert!(down.rounds.windows(2).all(|w| w[1].f_out < w[0].f_out));
        assert!(recurrence(0.5, 0).is_err());
        assert!(recurrence(-0.5, 3).is_err());
    }

    #[test]
    fn recurrence_chains_rounds() {
        let t = recurrence(0.6, 10).unwrap();
        for w in t.rounds.windows(2) {
            assert_eq!(w[1].f_in, w[0].f_out);
        }
    }

    #[test]
    fn witness_examples() {
        let ghz = WitnessPreset::Ghz.spec();
        let v = witness_expectation(&concise_state(0.5).unwrap(), &ghz).unwrap();
        assert!((v - (0.75 - 0.5 / 7.0)).abs() < 1e-14);
        let w = WitnessPreset::StandardW.spec();
        let pure = gb3().get(1).unwrap().projector();
        assert!((witness_expectation(&pure, &w).unwrap() - (2.0 / 3.0 - 1.0)).abs() < 1e-14);
        let id = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(witness_expectation(&id, &w).unwrap() > 0.0);
        assert!(WitnessSpec::new(1.0, gb3().get(1).unwrap().clone()).is_err());
    }

    #[test]
    fn witness_thresholds() {
        let t = witness_threshold(&WitnessPreset::PaperW.spec())
            .unwrap()
            .unwrap();
        assert!((t - 0.65).abs() < 1e-10);
        let t = witness_threshold(&WitnessPreset::StandardW.spec())
            .unwrap()
            .unwrap();
        assert!((t - 2.0 / 3.0).abs() < 1e-10);
        assert!(witness_threshold(&WitnessPreset::Ghz.spec())
            .unwrap()
            .is_none());
        assert!(witness_discrepancy().unwrap().is_some());
    }

    #[test]
    fn curve_grid_shape() {
        let pts = curve_points(0.0, 1.0, 2).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].f_in, 1.0);
        assert!(curve_points(0.5, 0.5, 10).is_err());
        assert!(curve_points(0.0, 1.0, 1).is_err());
        let mut buf = Vec::new();
        write_curves(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(CURVE_HEADER));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn grid_row_at_threshold_is_fixed() {
        // 0 .. 1 in 11 rows puts a node at 0.4
        let pts = curve_points(0.0, 1.0, 11).unwrap();
        assert!((pts[4].f_in - 0.4).abs() < 1e-15);
        assert!((pts[4].f_out - pts[4].f_in).abs() < 1e-10);
        assert!((pts[10].yield_ - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn export_rejects_unwritable_path() {
        let e = export_curves(0.0, 1.0, 5, "/nonexistent-dir/curves.csv").unwrap_err();
        assert!(matches!(e, Error::Io(_)));
    }
}
