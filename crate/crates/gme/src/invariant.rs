//! Local-unitary invariants of pure states: Rényi entropies, arity-indexed
//! seed families with coarse-graining extensions, and permutation-tuple
//! replica invariants `Z` and their logarithms `E`.
//!
//! A *seed family* assigns one symmetric invariant to every arity `m`; its
//! extension along a partition `π` is the arity-`|π|` member evaluated on the
//! `π`-coarse-grained state. Families that are *compatible* — the `π`-extension
//! on a `κ`-separable state equals the `(π∧κ)`-extension — are the raw
//! material for the signal constructions in [`crate::signal`].

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rng::Rng;
use crate::state::{random_separable, Party, PureState};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default cap on the number of enumerated terms in a replica contraction.
pub const DEFAULT_TERM_BUDGET: u128 = 1 << 24;
/// Replica invariants must be real within this imaginary part to have a
/// logarithm taken.
pub const POSITIVITY_IM_TOLERANCE: f64 = 1e-10;
/// Entropies may dip this far below zero (eigensolver noise) before being
/// rejected.
pub const ENTROPY_FLOOR: f64 = -1e-9;

/// Von Neumann entropy `−Σ λ ln λ` of a probability spectrum, with
/// `0·ln 0 = 0`. Eigenvalues at or below 1e-12 are treated as exact zeros:
/// they are indistinguishable from eigensolver noise, and a true eigenvalue
/// at that scale contributes less than 3e-11 to the entropy.
pub fn von_neumann_from_spectrum(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .filter(|&&l| l > 1e-12)
        .map(|&l| -l * l.ln())
        .sum()
}

/// Rényi entropy of a probability spectrum: `(1/(1−n)) ln Σ λ^n` for `n ≥ 2`,
/// the von Neumann limit for `n = 1`. Natural logarithm.
pub fn renyi_from_spectrum(spectrum: &[f64], n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "entropy order must be at least 1".into(),
        ));
    }
    let value = if n == 1 {
        von_neumann_from_spectrum(spectrum)
    } else {
        let s: f64 = spectrum
            .iter()
            .map(|&l| l.max(0.0).powi(n as i32))
            .sum();
        s.ln() / (1.0 - n as f64)
    };
    if value < ENTROPY_FLOOR {
        return Err(Error::Numerical(format!(
            "entropy {value:.3e} fell below the floor {ENTROPY_FLOOR:.1e}"
        )));
    }
    Ok(value)
}

/// Rényi entropy of the reduced state on the parties selected by `mask`.
///
/// `n = 1` is the von Neumann entropy; the subset must be nonempty.
pub fn renyi_entropy(psi: &PureState, mask: u32, n: u32) -> Result<f64> {
    if mask == 0 {
        return Err(Error::InvalidArgument(
            "entropy of the empty party subset is not defined".into(),
        ));
    }
    let spectrum = psi.subset_spectrum(mask)?;
    renyi_from_spectrum(&spectrum, n)
}

// ---------------------------------------------------------------------------
// Permutation tuples and replica invariants.
// ---------------------------------------------------------------------------

fn is_permutation(sigma: &[usize]) -> bool {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for &v in sigma {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// `compose(f, g)(k) = f(g(k))`.
fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&k| f[k]).collect()
}

fn invert(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; sigma.len()];
    for (k, &v) in sigma.iter().enumerate() {
        inv[v] = k;
    }
    inv
}

/// All permutations of `{0..n}` in a deterministic order (lexicographic).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    // Repeated next-permutation in lexicographic order.
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
    out
}

/// One permutation per party, all acting on the same set of `n` copies.
///
/// The JSON form uses one-line notation with 1-based entries:
/// `{"n":3,"sigmas":[[2,3,1],[1,2,3],[3,1,2]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TupleFile", into = "TupleFile")]
pub struct PermutationTuple {
    sigmas: Vec<Vec<usize>>,
}

impl PermutationTuple {
    /// Construct from 0-based one-line permutations, one per party.
    pub fn new(sigmas: Vec<Vec<usize>>) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(Error::InvalidArgument(
                "a permutation tuple needs at least one party".into(),
            ));
        }
        let n = sigmas[0].len();
        if n == 0 {
            return Err(Error::InvalidArgument(
                "a permutation tuple needs at least one copy".into(),
            ));
        }
        for s in &sigmas {
            if s.len() != n || !is_permutation(s) {
                return Err(Error::InvalidArgument(
                    "every entry must be a permutation of the same copy set".into(),
                ));
            }
        }
        Ok(PermutationTuple { sigmas })
    }

    /// The identity tuple on `q` parties and `n` copies.
    pub fn identity(q: usize, n: usize) -> Result<Self> {
        let id: Vec<usize> = (0..n).collect();
        PermutationTuple::new(vec![id; q])
    }

    /// Copy count.
    pub fn n(&self) -> usize {
        self.sigmas[0].len()
    }

    /// Party count.
    pub fn q(&self) -> usize {
        self.sigmas.len()
    }

    pub fn sigma(&self, party: usize) -> &[usize] {
        &self.sigmas[party]
    }

    pub fn inverse_sigma(&self, party: usize) -> Vec<usize> {
        invert(&self.sigmas[party])
    }

    /// Simultaneous relabeling `σ_a → g∘σ_a∘h`; the replica invariant is
    /// unchanged under this map.
    pub fn relabel(&self, g: &[usize], h: &[usize]) -> Result<PermutationTuple> {
        let n = self.n();
        if g.len() != n || h.len() != n || !is_permutation(g) || !is_permutation(h) {
            return Err(Error::InvalidArgument(
                "relabelings must be permutations of the copy set".into(),
            ));
        }
        PermutationTuple::new(
            self.sigmas
                .iter()
                .map(|s| compose(g, &compose(s, h)))
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct TupleFile {
    n: usize,
    sigmas: Vec<Vec<usize>>,
}

impl From<PermutationTuple> for TupleFile {
    fn from(t: PermutationTuple) -> Self {
        TupleFile {
            n: t.n(),
            sigmas: t
                .sigmas
                .iter()
                .map(|s| s.iter().map(|&v| v + 1).collect())
                .collect(),
        }
    }
}

impl TryFrom<TupleFile> for PermutationTuple {
    type Error = Error;
    fn try_from(f: TupleFile) -> Result<Self> {
        let mut sigmas = Vec::with_capacity(f.sigmas.len());
        for s in f.sigmas {
            if s.len() != f.n {
                return Err(Error::Parse(format!(
                    "permutation has {} entries but n = {}",
                    s.len(),
                    f.n
                )));
            }
            let mut zero_based = Vec::with_capacity(s.len());
            for v in s {
                if v < 1 || v > f.n {
                    return Err(Error::Parse(format!(
                        "one-line notation is 1-based; entry {v} is out of range 1..={}",
                        f.n
                    )));
                }
                zero_based.push(v - 1);
            }
            sigmas.push(zero_based);
        }
        PermutationTuple::new(sigmas)
    }
}

/// The default replica tuple for the logarithmic-invariant seed family at
/// arity `m` with replica parameter `n`: `n^(m−1)` copies arranged on an
/// `(m−1)`-dimensional grid with side `n`; party `a < m−1` cyclically shifts
/// grid axis `a`, the last party acts trivially. At `m = 2` this reduces to
/// `(cycle_n, identity)`, whose invariant is `Tr ρ₁ⁿ`.
pub fn grid_tuple(m: usize, n: u32) -> Result<PermutationTuple> {
    if m == 0 {
        return Err(Error::InvalidArgument("arity must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "replica parameter must be positive".into(),
        ));
    }
    let n = n as usize;
    let axes = m - 1;
    let copies = n
        .checked_pow(axes as u32)
        .ok_or_else(|| Error::Overflow("grid copy count".into()))?;
    // Weight of axis j (last axis fastest).
    let weight = |j: usize| n.pow((axes - 1 - j) as u32);
    let mut sigmas = Vec::with_capacity(m);
    for a in 0..m {
        if a < axes {
            let w = weight(a);
            let sigma: Vec<usize> = (0..copies)
                .map(|t| {
                    let digit = (t / w) % n;
                    t - digit * w + ((digit + 1) % n) * w
                })
                .collect();
            sigmas.push(sigma);
        } else {
            sigmas.push((0..copies).collect());
        }
    }
    PermutationTuple::new(sigmas)
}

fn term_budget() -> u128 {
    std::env::var("GME_MAX_TENSOR_TERMS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_TERM_BUDGET)
}

/// Replica invariant `Z = ⟨ψ|^⊗n (σ_1 ⊗ … ⊗ σ_q) |ψ⟩^⊗n`.
///
/// Convention: bra copy `k` at party `a` carries the ket index of copy
/// `σ_a^{-1}(k)` (equivalently, party `a`'s ket copies are permuted by `σ_a`
/// before pairing). The sum runs over ket assignments restricted to the
/// state's support; the number of enumerated terms `|support|^n` is guarded
/// by `budget` (see [`multi_invariant_z`] for the environment default).
pub fn multi_invariant_z_with_budget(
    tuple: &PermutationTuple,
    psi: &PureState,
    budget: u128,
) -> Result<Complex64> {
    let q = psi.q();
    if tuple.q() != q {
        return Err(Error::DimensionMismatch(format!(
            "tuple has {} parties but the state has {q}",
            tuple.q()
        )));
    }
    let n = tuple.n();
    let amps = psi.amplitudes();
    let support: Vec<usize> = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(f, _)| f)
        .collect();
    let terms = (support.len() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if terms > budget {
        return Err(Error::BudgetExceeded { terms, budget });
    }
    if support.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let strides = psi.strides();
    let digit_table: Vec<Vec<usize>> = support.iter().map(|&f| psi.digits_of(f)).collect();
    let inv: Vec<Vec<usize>> = (0..q).map(|a| tuple.inverse_sigma(a)).collect();

    let s_len = support.len();
    let mut idx = vec![0usize; n];
    let mut z = Complex64::new(0.0, 0.0);
    'outer: loop {
        let mut term = Complex64::new(1.0, 0.0);
        for &i in idx.iter() {
            term *= amps[support[i]];
        }
        for k in 0..n {
            let mut flat = 0usize;
            for a in 0..q {
                flat += digit_table[idx[inv[a][k]]][a] * strides[a];
            }
            let b = amps[flat];
            if b.norm_sqr() == 0.0 {
                term = Complex64::new(0.0, 0.0);
                break;
            }
            term *= b.conj();
        }
        z += term;

        let mut pos = n;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < s_len {
                break;
            }
            idx[pos] = 0;
        }
    }
    Ok(z)
}

/// [`multi_invariant_z_with_budget`] with the budget taken from the
/// `GME_MAX_TENSOR_TERMS` environment variable (default `2^24`).
pub fn multi_invariant_z(tuple: &PermutationTuple, psi: &PureState) -> Result<Complex64> {
    multi_invariant_z_with_budget(tuple, psi, term_budget())
}

/// Logarithmic replica invariant `E = −(1/n)·ln Z`.
///
/// Requires `Z` to be positive-real: imaginary part within
/// [`POSITIVITY_IM_TOLERANCE`] and strictly positive real part.
pub fn log_multi_invariant_e(tuple: &PermutationTuple, psi: &PureState) -> Result<f64> {
    let z = multi_invariant_z(tuple, psi)?;
    if z.im.abs() > POSITIVITY_IM_TOLERANCE || z.re <= 0.0 {
        return Err(Error::Numerical(format!(
            "replica invariant {z} is not positive-real; its logarithm is undefined"
        )));
    }
    Ok(-z.re.ln() / tuple.n() as f64)
}

// ---------------------------------------------------------------------------
// Seed families and their partition extensions.
// ---------------------------------------------------------------------------

/// An arity-indexed family of symmetric local-unitary invariants.
///
/// Families carry a declared `additive` flag (validated by property tests,
/// not inferred): additive means the value adds under layer composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeedFamily {
    /// Sum of single-party Rényi entropies of order `n`. Additive and
    /// compatible.
    RenyiSum { n: u32 },
    /// Residual information: trace out the party holding the designated
    /// label (default: the state's last party), canonically purify, and sum
    /// `½ S_{aa*} − S_a` over the remaining parties (von Neumann entropies).
    Residual {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        designated: Option<String>,
    },
    /// Logarithmic replica invariant with one permutation tuple per arity.
    /// Arity `m` uses `table[m]` when present, else the grid default
    /// [`grid_tuple`]`(m, n)`. Additive (the invariant multiplies under
    /// layer composition).
    LogMultiInvariant {
        n: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<BTreeMap<usize, PermutationTuple>>,
    },
    /// Pointwise square of an additive base family. Compatible but not
    /// additive.
    ComposedSquare { base: Box<SeedFamily> },
    /// Diagnostic family that weights each party's entropy by its position.
    /// Additive but deliberately **not** symmetric, hence not compatible;
    /// used to demonstrate that the compatibility check has teeth.
    PositionWeighted { n: u32 },
}

impl SeedFamily {
    /// Whether values add under layer composition (a declared, property-tested
    /// flag; signal construction requires it).
    pub fn is_additive(&self) -> bool {
        match self {
            SeedFamily::RenyiSum { .. } => true,
            SeedFamily::Residual { .. } => false,
            SeedFamily::LogMultiInvariant { .. } => true,
            SeedFamily::ComposedSquare { .. } => false,
            SeedFamily::PositionWeighted { .. } => true,
        }
    }

    /// Validate parameters; composed families must wrap an additive base.
    pub fn validate(&self) -> Result<()> {
        match self {
            SeedFamily::RenyiSum { n } | SeedFamily::PositionWeighted { n } => {
                if *n < 1 {
                    return Err(Error::InvalidArgument(
                        "entropy order must be at least 1".into(),
                    ));
                }
            }
            SeedFamily::Residual { .. } => {}
            SeedFamily::LogMultiInvariant { n, table } => {
                if *n < 1 {
                    return Err(Error::InvalidArgument(
                        "replica parameter must be at least 1".into(),
                    ));
                }
                if let Some(t) = table {
                    for (arity, tuple) in t {
                        if tuple.q() != *arity {
                            return Err(Error::InvalidArgument(format!(
                                "tuple registered for arity {arity} has {} parties",
                                tuple.q()
                            )));
                        }
                    }
                }
            }
            SeedFamily::ComposedSquare { base } => {
                base.validate()?;
                if !base.is_additive() {
                    return Err(Error::InvalidArgument(
                        "composed families must wrap an additive base family".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Short display name for reports.
    pub fn name(&self) -> String {
        match self {
            SeedFamily::RenyiSum { n } => format!("renyi-sum(n={n})"),
            SeedFamily::Residual { designated: None } => "residual".into(),
            SeedFamily::Residual {
                designated: Some(l),
            } => format!("residual(designated={l})"),
            SeedFamily::LogMultiInvariant { n, table: None } => {
                format!("log-multi-invariant(n={n})")
            }
            SeedFamily::LogMultiInvariant { n, table: Some(_) } => {
                format!("log-multi-invariant(n={n},custom-table)")
            }
            SeedFamily::ComposedSquare { base } => format!("composed-square({})", base.name()),
            SeedFamily::PositionWeighted { n } => format!("position-weighted(n={n})"),
        }
    }

    /// Seed value at the state's own arity (the extension along the finest
    /// partition).
    pub fn value(&self, psi: &PureState) -> Result<f64> {
        self.extend(&Partition::finest(psi.q()), psi)
    }

    /// Extension along `pi`: the arity-`|pi|` member evaluated on the
    /// coarse-grained state. For the residual family the traced party is the
    /// block containing the designated label.
    pub fn extend(&self, pi: &Partition, psi: &PureState) -> Result<f64> {
        if pi.q() != psi.q() {
            return Err(Error::DimensionMismatch(
                "partition is over a different number of parties".into(),
            ));
        }
        match self {
            SeedFamily::Residual { designated } => {
                let labels = psi.labels();
                let party = match designated {
                    None => psi.q() - 1,
                    Some(l) => labels
                        .iter()
                        .position(|x| x == l)
                        .ok_or_else(|| {
                            Error::InvalidArgument(format!(
                                "designated party {l} is not a party of the state"
                            ))
                        })?,
                };
                let traced_pos = pi.block_of(party);
                let grouped = psi.coarse_grain(pi)?;
                residual_value(&grouped, traced_pos)
            }
            SeedFamily::ComposedSquare { base } => {
                let v = base.extend(pi, psi)?;
                Ok(v * v)
            }
            _ => {
                let grouped = psi.coarse_grain(pi)?;
                self.grouped_value(&grouped)
            }
        }
    }

    fn grouped_value(&self, grouped: &PureState) -> Result<f64> {
        match self {
            SeedFamily::RenyiSum { n } => {
                let mut total = 0.0;
                for a in 0..grouped.q() {
                    total += renyi_entropy(grouped, 1 << a, *n)?;
                }
                Ok(total)
            }
            SeedFamily::PositionWeighted { n } => {
                let mut total = 0.0;
                for a in 0..grouped.q() {
                    total += (a + 1) as f64 * renyi_entropy(grouped, 1 << a, *n)?;
                }
                Ok(total)
            }
            SeedFamily::LogMultiInvariant { n, table } => {
                let m = grouped.q();
                let tuple = match table.as_ref().and_then(|t| t.get(&m)) {
                    Some(t) => {
                        if t.q() != m {
                            return Err(Error::DimensionMismatch(format!(
                                "tuple for arity {m} has {} parties",
                                t.q()
                            )));
                        }
                        t.clone()
                    }
                    None => grid_tuple(m, *n)?,
                };
                log_multi_invariant_e(&tuple, grouped)
            }
            SeedFamily::Residual { .. } | SeedFamily::ComposedSquare { .. } => {
                unreachable!("handled in extend")
            }
        }
    }
}

/// The residual-information formula on an already-grouped state: trace out
/// the party at `traced_pos`, canonically purify, and sum
/// `½ S_{aa*} − S_a` over the remaining parties. Zero at arity 1.
fn residual_value(grouped: &PureState, traced_pos: usize) -> Result<f64> {
    let m = grouped.q();
    if m <= 1 {
        return Ok(0.0);
    }
    let full: u32 = (1u32 << m) - 1;
    let keep = full & !(1u32 << traced_pos);
    let rho = grouped.reduced_density(keep)?;
    let phi = rho.canonical_purification()?;
    // The purification interleaves each kept party with its partner: kept
    // party j sits at position 2j, its partner at 2j+1.
    let mut total = 0.0;
    for j in 0..(m - 1) {
        let single = 1u32 << (2 * j);
        let pair = single | (1u32 << (2 * j + 1));
        let s_pair = von_neumann_from_spectrum(&phi.subset_spectrum(pair)?);
        let s_single = von_neumann_from_spectrum(&phi.subset_spectrum(single)?);
        total += 0.5 * s_pair - s_single;
    }
    Ok(total)
}

/// Parse a compact command-line family descriptor.
///
/// Accepted forms: `renyi:N`, `residual`, `residual:LABEL`, `log-multi:N`
/// (alias `multi:N`), `position:N`, `square(INNER)`, or a raw JSON object.
pub fn parse_family(text: &str) -> Result<SeedFamily> {
    let text = text.trim();
    let family = if text.starts_with('{') {
        serde_json::from_str::<SeedFamily>(text)?
    } else if let Some(inner) = text
        .strip_prefix("square(")
        .and_then(|rest| rest.strip_suffix(')'))
    {
        SeedFamily::ComposedSquare {
            base: Box::new(parse_family(inner)?),
        }
    } else {
        let (kind, arg) = match text.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (text, None),
        };
        let parse_n = |arg: Option<&str>| -> Result<u32> {
            arg.ok_or_else(|| Error::Parse(format!("family '{kind}' needs a parameter, like '{kind}:2'")))?
                .parse()
                .map_err(|_| Error::Parse(format!("invalid entropy order in '{text}'")))
        };
        match kind {
            "renyi" => SeedFamily::RenyiSum { n: parse_n(arg)? },
            "residual" => SeedFamily::Residual {
                designated: arg.map(|s| s.to_string()),
            },
            "log-multi" | "multi" => SeedFamily::LogMultiInvariant {
                n: parse_n(arg)?,
                table: None,
            },
            "position" => SeedFamily::PositionWeighted { n: parse_n(arg)? },
            other => {
                return Err(Error::Parse(format!(
                    "unknown family '{other}' (expected renyi:N, residual[:LABEL], \
                     log-multi:N, position:N, square(...), or JSON)"
                )))
            }
        }
    };
    family.validate()?;
    Ok(family)
}

// ---------------------------------------------------------------------------
// Compatibility checking.
// ---------------------------------------------------------------------------

/// Shape of the random states used by [`compatibility_check`]: parties plus
/// the separability pattern they are drawn with.
#[derive(Debug, Clone)]
pub struct SeparabilityTemplate {
    pub parties: Vec<Party>,
    pub kappa: Partition,
}

/// Result of a compatibility probe.
#[derive(Debug, Clone)]
pub struct CompatibilityReport {
    pub family: String,
    pub samples: usize,
    pub max_deviation: f64,
}

/// Sample `κ`-separable states and compare the `π`-extension against the
/// `(π∧κ)`-extension; a compatible family makes them agree identically.
pub fn compatibility_check(
    family: &SeedFamily,
    template: &SeparabilityTemplate,
    pi: &Partition,
    samples: usize,
    rng: &mut Rng,
) -> Result<CompatibilityReport> {
    family.validate()?;
    if template.kappa.q() != template.parties.len() || pi.q() != template.parties.len() {
        return Err(Error::DimensionMismatch(
            "template partitions must match the party count".into(),
        ));
    }
    let meet = pi.meet(&template.kappa);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..samples {
        let psi = random_separable(&template.parties, &template.kappa, rng)?;
        let lhs = family.extend(pi, &psi)?;
        let rhs = family.extend(&meet, &psi)?;
        max_deviation = max_deviation.max((lhs - rhs).abs());
    }
    Ok(CompatibilityReport {
        family: family.name(),
        samples,
        max_deviation,
    })
}
