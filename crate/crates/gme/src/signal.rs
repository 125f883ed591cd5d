//! Symbolic signal and pre-signal construction, grouped-coefficient
//! expansions, the alternating subset-entropy form, zero-sum-tensor signals
//! over permutation tuples, and batch vanishing reports.
//!
//! A *symmetric* signal is a rational combination `Σ c_π · f_π` of partition
//! extensions of one seed family; the combinations that qualify come from
//! Möbius vectors on the partition lattice ([`crate::algebra`]). Coefficients
//! stay exact rationals throughout — floating point enters only when a spec
//! is evaluated on a state.

use crate::algebra::{mobius_vector, solve_meet_vanishing, PartitionVector};
use crate::error::{Error, Result};
use crate::invariant::{
    all_permutations, log_multi_invariant_e, renyi_entropy, PermutationTuple, SeedFamily,
};
use crate::partition::{
    enumerate_partitions, one_vs_rest_cuts, Partition, PartySet,
};
use crate::rational::{parse_rat, rat_to_string, Rat};
use crate::state::PureState;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default tolerance for "this quantity vanishes" assertions.
pub const VANISHING_TOLERANCE: f64 = 1e-8;
/// Default tolerance for "these two computed quantities agree" assertions.
pub const EQUALITY_TOLERANCE: f64 = 1e-9;

fn rat_to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

// ---------------------------------------------------------------------------
// Symmetric specs.
// ---------------------------------------------------------------------------

/// How a symmetric spec was constructed.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// The Möbius vector `M_ρ`; the term list is validated against it.
    MobiusVector(Partition),
    /// A rational combination of signal-basis members.
    SpanCombination(Vec<Rat>),
    /// The alternating subset-entropy form.
    QInformation,
    Custom,
}

/// A rational combination of partition extensions (and, for the alternating
/// form, of subset entropies) of one seed family.
#[derive(Debug, Clone)]
pub struct SymmetricSignalSpec {
    family: SeedFamily,
    q: usize,
    /// `(coefficient, partition)` pairs; evaluated as `c · f_π(ψ)`.
    terms: Vec<(Rat, Partition)>,
    /// `(coefficient, subset mask)` pairs; evaluated as `c · S^(n)_mask(ψ)`.
    subset_terms: Vec<(Rat, u32)>,
    provenance: Provenance,
}

impl SymmetricSignalSpec {
    /// Construct and validate a spec.
    pub fn new(
        family: SeedFamily,
        q: usize,
        terms: Vec<(Rat, Partition)>,
        subset_terms: Vec<(Rat, u32)>,
        provenance: Provenance,
    ) -> Result<Self> {
        family.validate()?;
        if q == 0 {
            return Err(Error::InvalidArgument("party count must be positive".into()));
        }
        for (_, pi) in &terms {
            if pi.q() != q {
                return Err(Error::DimensionMismatch(
                    "every partition term must be over the same party count".into(),
                ));
            }
        }
        let full: u32 = if q >= 32 { u32::MAX } else { (1u32 << q) - 1 };
        for (_, mask) in &subset_terms {
            if *mask == 0 || (mask & !full) != 0 {
                return Err(Error::InvalidArgument(
                    "subset terms must be nonempty subsets of the party set".into(),
                ));
            }
        }
        if !subset_terms.is_empty() && !matches!(family, SeedFamily::RenyiSum { .. }) {
            return Err(Error::InvalidArgument(
                "subset-entropy terms require the entropy-sum family".into(),
            ));
        }
        let spec = SymmetricSignalSpec {
            family,
            q,
            terms,
            subset_terms,
            provenance,
        };
        if let Provenance::MobiusVector(rho) = &spec.provenance {
            if rho.q() != q {
                return Err(Error::DimensionMismatch(
                    "provenance partition is over a different party count".into(),
                ));
            }
            let expected = mobius_vector(rho)?.into_vector();
            let actual = spec.partition_vector()?;
            let diff = expected.add(&actual.scale(-Rat::one()));
            if !diff.is_zero() || !spec.subset_terms.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "terms do not match the inversion vector of {}",
                    rho.format(&PartySet::with_default_labels(q)?)
                )));
            }
        }
        Ok(spec)
    }

    pub fn family(&self) -> &SeedFamily {
        &self.family
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn terms(&self) -> &[(Rat, Partition)] {
        &self.terms
    }

    pub fn subset_terms(&self) -> &[(Rat, u32)] {
        &self.subset_terms
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The partition terms as an exact lattice vector.
    pub fn partition_vector(&self) -> Result<PartitionVector> {
        PartitionVector::from_terms(self.q, self.terms.iter().map(|(c, p)| (*c, p.clone())))
    }

    /// Evaluate on a state: `Σ c_π · f_π(ψ) + Σ c_A · S^(n)_A(ψ)`.
    pub fn evaluate(&self, psi: &PureState) -> Result<f64> {
        if psi.q() != self.q {
            return Err(Error::DimensionMismatch(format!(
                "spec is over {} parties but the state has {}",
                self.q,
                psi.q()
            )));
        }
        let mut total = 0.0;
        for (c, pi) in &self.terms {
            total += rat_to_f64(c) * self.family.extend(pi, psi)?;
        }
        if !self.subset_terms.is_empty() {
            let SeedFamily::RenyiSum { n } = self.family else {
                return Err(Error::InvalidArgument(
                    "subset-entropy terms require the entropy-sum family".into(),
                ));
            };
            for (c, mask) in &self.subset_terms {
                total += rat_to_f64(c) * renyi_entropy(psi, *mask, n)?;
            }
        }
        Ok(total)
    }

    /// A rational combination of existing specs (all over one family and
    /// party count); records the weights as provenance.
    pub fn combine(specs: &[SymmetricSignalSpec], weights: &[Rat]) -> Result<SymmetricSignalSpec> {
        if specs.is_empty() || specs.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "need one weight per combined spec".into(),
            ));
        }
        let q = specs[0].q;
        let family = specs[0].family.clone();
        let mut acc = PartitionVector::zero(q);
        for (spec, w) in specs.iter().zip(weights) {
            if spec.q != q || spec.family != family || !spec.subset_terms.is_empty() {
                return Err(Error::InvalidArgument(
                    "combined specs must share a family and party count and carry \
                     partition terms only"
                        .into(),
                ));
            }
            acc = acc.add(&spec.partition_vector()?.scale(*w));
        }
        SymmetricSignalSpec::new(
            family,
            q,
            acc.terms_finest_first(),
            Vec::new(),
            Provenance::SpanCombination(weights.to_vec()),
        )
    }

    /// Serialize to the on-disk JSON schema (rational coefficients as
    /// strings; partitions and subsets rendered with default labels).
    pub fn to_json_string(&self) -> Result<String> {
        let ps = PartySet::with_default_labels(self.q)?;
        let mut terms = Vec::new();
        for (c, pi) in &self.terms {
            terms.push(TermFile {
                coeff: rat_to_string(c),
                partition: Some(pi.format(&ps)),
                subset: None,
            });
        }
        for (c, mask) in &self.subset_terms {
            terms.push(TermFile {
                coeff: rat_to_string(c),
                partition: None,
                subset: Some(ps.format_subset(*mask)),
            });
        }
        let provenance = Some(match &self.provenance {
            Provenance::MobiusVector(rho) => ProvenanceFile::MobiusVector {
                rho: rho.format(&ps),
            },
            Provenance::SpanCombination(ws) => ProvenanceFile::SpanCombination {
                weights: ws.iter().map(rat_to_string).collect(),
            },
            Provenance::QInformation => ProvenanceFile::QInformation,
            Provenance::Custom => ProvenanceFile::Custom,
        });
        let file = SignalFile {
            q: Some(self.q),
            family: self.family.clone(),
            terms,
            provenance,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parse and validate the on-disk JSON schema. The party count is taken
    /// from the `q` field when present, else inferred from the first
    /// partition term.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SignalFile = serde_json::from_str(text)?;
        let q = match file.q {
            Some(q) => q,
            None => {
                let first = file
                    .terms
                    .iter()
                    .find_map(|t| t.partition.as_deref())
                    .ok_or_else(|| {
                        Error::Parse(
                            "cannot infer the party count: no q field and no partition terms"
                                .into(),
                        )
                    })?;
                first.chars().filter(|c| *c != '|').count()
            }
        };
        let ps = PartySet::with_default_labels(q)?;
        let mut terms = Vec::new();
        let mut subset_terms = Vec::new();
        for t in &file.terms {
            let coeff = parse_rat(&t.coeff)?;
            match (&t.partition, &t.subset) {
                (Some(p), None) => terms.push((coeff, Partition::parse(p, &ps)?)),
                (None, Some(s)) => subset_terms.push((coeff, ps.parse_subset(s)?)),
                _ => {
                    return Err(Error::Parse(
                        "each term needs exactly one of 'partition' or 'subset'".into(),
                    ))
                }
            }
        }
        let provenance = match file.provenance {
            None | Some(ProvenanceFile::Custom) => Provenance::Custom,
            Some(ProvenanceFile::MobiusVector { rho }) => {
                Provenance::MobiusVector(Partition::parse(&rho, &ps)?)
            }
            Some(ProvenanceFile::SpanCombination { weights }) => Provenance::SpanCombination(
                weights
                    .iter()
                    .map(|w| parse_rat(w))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Some(ProvenanceFile::QInformation) => Provenance::QInformation,
        };
        SymmetricSignalSpec::new(file.family, q, terms, subset_terms, provenance)
    }
}

#[derive(Serialize, Deserialize)]
struct SignalFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    family: SeedFamily,
    terms: Vec<TermFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<ProvenanceFile>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    coeff: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    partition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subset: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum ProvenanceFile {
    MobiusVector { rho: String },
    SpanCombination { weights: Vec<String> },
    QInformation,
    Custom,
}

/// Which vanishing class a constructed basis targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalMode {
    /// Vanish on all layerwise-separable states; requires an additive family.
    /// Constraint set: the one-vs-rest cuts.
    Signal,
    /// Vanish on all separable states; any compatible family. Constraint
    /// set: every proper partition.
    PreSignal,
}

impl SignalMode {
    pub fn parse(text: &str) -> Result<SignalMode> {
        match text {
            "signal" => Ok(SignalMode::Signal),
            "pre-signal" | "presignal" => Ok(SignalMode::PreSignal),
            other => Err(Error::Parse(format!(
                "unknown mode '{other}' (expected 'signal' or 'pre-signal')"
            ))),
        }
    }
}

/// Build the basis of Möbius-vector specs whose meet-extensions vanish on the
/// mode's constraint set.
///
/// `Signal` mode returns one spec per partition without singleton blocks
/// (ordered by the lattice enumeration); `PreSignal` mode returns the single
/// spec for the one-block partition.
pub fn build_signal_basis(
    family: &SeedFamily,
    q: usize,
    mode: SignalMode,
) -> Result<Vec<SymmetricSignalSpec>> {
    family.validate()?;
    if q < 2 {
        return Err(Error::InvalidArgument(
            "signal construction needs at least 2 parties".into(),
        ));
    }
    let constraints: Vec<Partition> = match mode {
        SignalMode::Signal => {
            if !family.is_additive() {
                return Err(Error::InvalidArgument(format!(
                    "mode 'signal' requires an additive family, but {} is not flagged additive",
                    family.name()
                )));
            }
            one_vs_rest_cuts(q)
        }
        SignalMode::PreSignal => enumerate_partitions(q)?
            .into_iter()
            .filter(|p| !p.is_coarsest())
            .collect(),
    };
    let basis = solve_meet_vanishing(q, &constraints)?;
    basis
        .into_iter()
        .map(|mv| {
            let rho = mv.rho().clone();
            let terms = mv.into_vector().terms_finest_first();
            SymmetricSignalSpec::new(
                family.clone(),
                q,
                terms,
                Vec::new(),
                Provenance::MobiusVector(rho),
            )
        })
        .collect()
}

/// The alternating subset-entropy form: `Σ_{∅≠A⊊X} (−1)^(q−|A|) S^(n)_A`.
///
/// Numerically equal to the one-block Möbius spec over the entropy-sum
/// family on pure states (a property the verification suites check).
pub fn q_information(q: usize, n: u32) -> Result<SymmetricSignalSpec> {
    if q < 2 {
        return Err(Error::InvalidArgument(
            "the alternating form needs at least 2 parties".into(),
        ));
    }
    if q >= 32 {
        return Err(Error::InvalidArgument("party count too large".into()));
    }
    let full: u32 = (1u32 << q) - 1;
    let mut subset_terms = Vec::new();
    for mask in 1..full {
        let size = mask.count_ones() as usize;
        let coeff = if (q - size) % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        subset_terms.push((coeff, mask));
    }
    SymmetricSignalSpec::new(
        SeedFamily::RenyiSum { n },
        q,
        Vec::new(),
        subset_terms,
        Provenance::QInformation,
    )
}

// ---------------------------------------------------------------------------
// Grouped-coefficient expansions.
// ---------------------------------------------------------------------------

/// One symbolic invariant in an expansion: either the seed family evaluated
/// on a block grouping (`S_m(B1,…,Bm)`) or a plain subset entropy (`S_A`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Grouped(Partition),
    Subset(u32),
}

/// A coefficient attached to a symbolic invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerm {
    pub coeff: Rat,
    pub descriptor: Descriptor,
}

/// Rewrite a spec as coefficients on grouped-invariant evaluations, merging
/// equal groupings. Partition terms become `S_|π|(blocks)` descriptors;
/// subset terms pass through.
pub fn expand_grouped(spec: &SymmetricSignalSpec) -> Result<Vec<ExpansionTerm>> {
    let mut grouped: BTreeMap<Partition, Rat> = BTreeMap::new();
    for (c, pi) in spec.terms() {
        let e = grouped.entry(pi.clone()).or_insert_with(Rat::zero);
        *e += *c;
    }
    let mut subsets: BTreeMap<u32, Rat> = BTreeMap::new();
    for (c, mask) in spec.subset_terms() {
        let e = subsets.entry(*mask).or_insert_with(Rat::zero);
        *e += *c;
    }
    let mut terms: Vec<ExpansionTerm> = grouped
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| ExpansionTerm {
            coeff: c,
            descriptor: Descriptor::Grouped(p),
        })
        .collect();
    terms.extend(subsets.into_iter().filter(|(_, c)| !c.is_zero()).map(
        |(m, c)| ExpansionTerm {
            coeff: c,
            descriptor: Descriptor::Subset(m),
        },
    ));
    sort_expansion(&mut terms, spec.q())?;
    Ok(terms)
}

/// Apply pure-state reductions to an expansion:
///
/// * arity-1 groupings drop (every shipped family vanishes there on a pure
///   state);
/// * the full-set subset entropy drops;
/// * subset entropies on more than half the parties fold onto their
///   complements (`S_A = S_{A^c}`); exactly-half subsets are kept as they
///   are.
pub fn reduce_pure(terms: &[ExpansionTerm], q: usize) -> Result<Vec<ExpansionTerm>> {
    let full: u32 = if q >= 32 { u32::MAX } else { (1u32 << q) - 1 };
    let mut grouped: BTreeMap<Partition, Rat> = BTreeMap::new();
    let mut subsets: BTreeMap<u32, Rat> = BTreeMap::new();
    for t in terms {
        match &t.descriptor {
            Descriptor::Grouped(p) => {
                if p.num_blocks() == 1 {
                    continue;
                }
                *grouped.entry(p.clone()).or_insert_with(Rat::zero) += t.coeff;
            }
            Descriptor::Subset(mask) => {
                if *mask == full {
                    continue;
                }
                let size = mask.count_ones() as usize;
                let target = if 2 * size > q { full & !mask } else { *mask };
                *subsets.entry(target).or_insert_with(Rat::zero) += t.coeff;
            }
        }
    }
    let mut out: Vec<ExpansionTerm> = grouped
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| ExpansionTerm {
            coeff: c,
            descriptor: Descriptor::Grouped(p),
        })
        .collect();
    out.extend(subsets.into_iter().filter(|(_, c)| !c.is_zero()).map(
        |(m, c)| ExpansionTerm {
            coeff: c,
            descriptor: Descriptor::Subset(m),
        },
    ));
    sort_expansion(&mut out, q)?;
    Ok(out)
}

/// Canonical expansion order: grouped descriptors first, by (block count
/// ascending, partition type, lattice enumeration position); then subsets by
/// (size descending, member indices).
fn sort_expansion(terms: &mut [ExpansionTerm], q: usize) -> Result<()> {
    let enumeration = enumerate_partitions(q)?;
    let position: BTreeMap<Vec<u8>, usize> = enumeration
        .iter()
        .enumerate()
        .map(|(i, p)| (p.rgs(), i))
        .collect();
    let subset_key = |mask: u32| -> Vec<usize> {
        (0..q).filter(|a| mask & (1 << a) != 0).collect()
    };
    terms.sort_by(|x, y| {
        use Descriptor::*;
        match (&x.descriptor, &y.descriptor) {
            (Grouped(_), Subset(_)) => std::cmp::Ordering::Less,
            (Subset(_), Grouped(_)) => std::cmp::Ordering::Greater,
            (Grouped(p1), Grouped(p2)) => p1
                .num_blocks()
                .cmp(&p2.num_blocks())
                .then_with(|| p1.partition_type().cmp(&p2.partition_type()))
                .then_with(|| position[&p1.rgs()].cmp(&position[&p2.rgs()])),
            (Subset(m1), Subset(m2)) => m2
                .count_ones()
                .cmp(&m1.count_ones())
                .then_with(|| subset_key(*m1).cmp(&subset_key(*m2))),
        }
    });
    Ok(())
}

/// Render an expansion in the conventional symbolic style:
/// `-S_2(AB,C) - S_2(AC,B) - S_2(A,BC) + 2*S_3(A,B,C)`.
pub fn render_expansion(terms: &[ExpansionTerm], ps: &PartySet) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let negative = t.coeff.is_negative();
        let magnitude = t.coeff.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if !magnitude.is_one() {
            out.push_str(&rat_to_string(&magnitude));
            out.push('*');
        }
        match &t.descriptor {
            Descriptor::Grouped(p) => {
                let blocks: Vec<String> =
                    p.blocks().iter().map(|&b| ps.format_subset(b)).collect();
                out.push_str(&format!("S_{}({})", p.num_blocks(), blocks.join(",")));
            }
            Descriptor::Subset(mask) => {
                out.push_str(&format!("S_{}", ps.format_subset(*mask)));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Zero-sum-tensor signals over permutation tuples.
// ---------------------------------------------------------------------------

/// A rank-`q` tensor with side `s` whose every axis-slice sums to zero,
/// stored with exact rational entries so the slice condition is validated
/// exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSumTensor {
    rank: usize,
    side: usize,
    entries: Vec<Rat>,
}

impl ZeroSumTensor {
    /// Construct and validate: for every axis `k` and every assignment of the
    /// other indices, `Σ_{i_k} T = 0` exactly.
    pub fn new(rank: usize, side: usize, entries: Vec<Rat>) -> Result<Self> {
        if rank == 0 || side == 0 {
            return Err(Error::InvalidArgument(
                "tensor rank and side must be positive".into(),
            ));
        }
        let total = side
            .checked_pow(rank as u32)
            .ok_or_else(|| Error::Overflow("tensor size".into()))?;
        if entries.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "expected {total} entries, got {}",
                entries.len()
            )));
        }
        let t = ZeroSumTensor {
            rank,
            side,
            entries,
        };
        for axis in 0..rank {
            let stride = t.stride(axis);
            for flat in 0..total {
                // Visit each slice once, via its index-0 representative.
                if (flat / stride) % side != 0 {
                    continue;
                }
                let mut sum = Rat::zero();
                for i in 0..side {
                    sum += t.entries[flat + i * stride];
                }
                if !sum.is_zero() {
                    return Err(Error::InvalidArgument(format!(
                        "axis-{axis} slice sum is {} (must be zero)",
                        rat_to_string(&sum)
                    )));
                }
            }
        }
        Ok(t)
    }

    /// The all-zero tensor.
    pub fn zeros(rank: usize, side: usize) -> Result<Self> {
        let total = side
            .checked_pow(rank as u32)
            .ok_or_else(|| Error::Overflow("tensor size".into()))?;
        ZeroSumTensor::new(rank, side, vec![Rat::zero(); total])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn side(&self) -> usize {
        self.side
    }

    fn stride(&self, axis: usize) -> usize {
        self.side.pow((self.rank - 1 - axis) as u32)
    }

    fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.rank];
        for a in (0..self.rank).rev() {
            out[a] = flat % self.side;
            flat /= self.side;
        }
        out
    }

    pub fn entry(&self, idx: &[usize]) -> Rat {
        let flat: usize = idx
            .iter()
            .enumerate()
            .map(|(a, &i)| i * self.stride(a))
            .sum();
        self.entries[flat]
    }

    /// Nonzero entries as `(multi-index, coefficient)` pairs.
    pub fn nonzero(&self) -> Vec<(Vec<usize>, Rat)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(flat, c)| (self.digits(flat), *c))
            .collect()
    }
}

/// A zero-sum tensor paired with the permutation list its indices refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct NonSymmetricSignalSpec {
    tensor: ZeroSumTensor,
    sigma_list: Vec<Vec<usize>>,
}

impl NonSymmetricSignalSpec {
    pub fn new(tensor: ZeroSumTensor, sigma_list: Vec<Vec<usize>>) -> Result<Self> {
        if sigma_list.len() != tensor.side() {
            return Err(Error::DimensionMismatch(format!(
                "tensor side {} does not match the {} listed permutations",
                tensor.side(),
                sigma_list.len()
            )));
        }
        // Validate the permutations by building a throwaway tuple.
        PermutationTuple::new(sigma_list.clone())?;
        Ok(NonSymmetricSignalSpec { tensor, sigma_list })
    }

    pub fn tensor(&self) -> &ZeroSumTensor {
        &self.tensor
    }

    pub fn sigma_list(&self) -> &[Vec<usize>] {
        &self.sigma_list
    }

    /// Party count the spec applies to.
    pub fn q(&self) -> usize {
        self.tensor.rank()
    }

    /// Copy count of the underlying permutations.
    pub fn n(&self) -> usize {
        self.sigma_list[0].len()
    }

    /// Evaluate `Σ T_{i_1…i_q} E(σ_{i_1},…,σ_{i_q}; ψ)`.
    ///
    /// Relabel-equivalent tuples are canonicalized to share one `E`
    /// evaluation, so cancellations forced by relabeling invariance are exact.
    pub fn evaluate(&self, psi: &PureState) -> Result<f64> {
        if psi.q() != self.q() {
            return Err(Error::DimensionMismatch(format!(
                "spec is over {} parties but the state has {}",
                self.q(),
                psi.q()
            )));
        }
        let n = self.n();
        let relabelings: Option<Vec<Vec<usize>>> = if n <= 5 {
            Some(all_permutations(n))
        } else {
            None
        };
        let mut cache: BTreeMap<Vec<Vec<usize>>, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (idx, coeff) in self.tensor.nonzero() {
            let sigmas: Vec<Vec<usize>> =
                idx.iter().map(|&i| self.sigma_list[i].clone()).collect();
            let tuple = PermutationTuple::new(sigmas.clone())?;
            let key = match &relabelings {
                Some(perms) => canonical_relabeling(&tuple, perms),
                None => sigmas,
            };
            let e = match cache.get(&key) {
                Some(&e) => e,
                None => {
                    let e = log_multi_invariant_e(&tuple, psi)?;
                    cache.insert(key, e);
                    e
                }
            };
            total += rat_to_f64(&coeff) * e;
        }
        Ok(total)
    }

    /// Serialize to JSON (1-based permutations, rational entries as strings).
    pub fn to_json_string(&self) -> Result<String> {
        let file = NonSymmetricFile {
            q: self.q(),
            n: self.n(),
            sigmas: self
                .sigma_list
                .iter()
                .map(|s| s.iter().map(|&v| v + 1).collect())
                .collect(),
            tensor: self.tensor.entries.iter().map(rat_to_string).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: NonSymmetricFile = serde_json::from_str(text)?;
        let mut sigma_list = Vec::with_capacity(file.sigmas.len());
        for s in &file.sigmas {
            let mut zero_based = Vec::with_capacity(s.len());
            for &v in s {
                if v < 1 || v > file.n {
                    return Err(Error::Parse(format!(
                        "one-line notation is 1-based; entry {v} is out of range 1..={}",
                        file.n
                    )));
                }
                zero_based.push(v - 1);
            }
            if zero_based.len() != file.n {
                return Err(Error::Parse("permutation length mismatch".into()));
            }
            sigma_list.push(zero_based);
        }
        let entries = file
            .tensor
            .iter()
            .map(|t| parse_rat(t))
            .collect::<Result<Vec<_>>>()?;
        let tensor = ZeroSumTensor::new(file.q, sigma_list.len(), entries)?;
        NonSymmetricSignalSpec::new(tensor, sigma_list)
    }
}

#[derive(Serialize, Deserialize)]
struct NonSymmetricFile {
    q: usize,
    n: usize,
    sigmas: Vec<Vec<usize>>,
    tensor: Vec<String>,
}

/// The lexicographically smallest simultaneous relabeling `(g∘σ_a∘h)_a` of a
/// tuple's one-line rows.
fn canonical_relabeling(tuple: &PermutationTuple, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut best: Option<Vec<Vec<usize>>> = None;
    for g in perms {
        for h in perms {
            let cand = tuple
                .relabel(g, h)
                .expect("relabeling by valid permutations");
            let rows: Vec<Vec<usize>> =
                (0..cand.q()).map(|a| cand.sigma(a).to_vec()).collect();
            if best.as_ref().is_none_or(|b| rows < *b) {
                best = Some(rows);
            }
        }
    }
    best.expect("at least the identity relabeling")
}

/// The minimal zero-sum construction: given per-party permutations
/// `σ_1, …, σ_q`, build the rank-1-difference tensor
/// `(e_1−e_2) ⊗ (e_2−e_1) ⊗ (e_3−e_1) ⊗ … ⊗ (e_q−e_1)`
/// over the listed permutations, i.e. the signal
/// `E(σ_1−σ_2, σ_2−σ_1, σ_3−σ_1, …)`.
///
/// Degenerate inputs (σ_2 = σ_1, or any later σ_a = σ_1) would make a tensor
/// factor vanish and are rejected.
pub fn minimal_signal(sigmas: &[Vec<usize>]) -> Result<NonSymmetricSignalSpec> {
    let q = sigmas.len();
    if q < 2 {
        return Err(Error::InvalidArgument(
            "the minimal construction needs at least 2 parties".into(),
        ));
    }
    for (a, s) in sigmas.iter().enumerate().skip(1) {
        if *s == sigmas[0] && a < q {
            return Err(Error::InvalidArgument(format!(
                "permutation {} coincides with the first; the tensor factor would vanish",
                a + 1
            )));
        }
    }
    let side = q;
    // Per-axis difference vectors over the index set {0..q}.
    let mut factors: Vec<Vec<Rat>> = Vec::with_capacity(q);
    for a in 0..q {
        let mut v = vec![Rat::zero(); side];
        match a {
            0 => {
                v[0] = Rat::one();
                v[1] = -Rat::one();
            }
            1 => {
                v[1] = Rat::one();
                v[0] = -Rat::one();
            }
            _ => {
                v[a] = Rat::one();
                v[0] = -Rat::one();
            }
        }
        factors.push(v);
    }
    let total = side.pow(q as u32);
    let mut entries = vec![Rat::zero(); total];
    for (flat, slot) in entries.iter_mut().enumerate() {
        let mut rem = flat;
        let mut digits = vec![0usize; q];
        for a in (0..q).rev() {
            digits[a] = rem % side;
            rem /= side;
        }
        let mut prod = Rat::one();
        for a in 0..q {
            prod *= factors[a][digits[a]];
            if prod.is_zero() {
                break;
            }
        }
        *slot = prod;
    }
    let tensor = ZeroSumTensor::new(q, side, entries)?;
    NonSymmetricSignalSpec::new(tensor, sigmas.to_vec())
}

/// The shipped three-party minimal signal: three copies with
/// `σ_1 = identity`, `σ_2 = (3,1,2)`, `σ_3 = (2,3,1)` in 1-based one-line
/// notation. Nonzero on the three-party GHZ state (value `−(2/3)·ln 2`) and
/// vanishing on every layerwise-separable state.
pub fn shipped_minimal_signal_q3() -> NonSymmetricSignalSpec {
    minimal_signal(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]])
        .expect("static construction is valid")
}

// ---------------------------------------------------------------------------
// Either kind of signal, plus batch vanishing reports.
// ---------------------------------------------------------------------------

/// A signal of either kind, for uniform evaluation and I/O.
#[derive(Debug, Clone)]
pub enum AnySignal {
    Symmetric(SymmetricSignalSpec),
    NonSymmetric(NonSymmetricSignalSpec),
}

impl AnySignal {
    pub fn q(&self) -> usize {
        match self {
            AnySignal::Symmetric(s) => s.q(),
            AnySignal::NonSymmetric(s) => s.q(),
        }
    }

    pub fn evaluate(&self, psi: &PureState) -> Result<f64> {
        match self {
            AnySignal::Symmetric(s) => s.evaluate(psi),
            AnySignal::NonSymmetric(s) => s.evaluate(psi),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        match self {
            AnySignal::Symmetric(s) => s.to_json_string(),
            AnySignal::NonSymmetric(s) => s.to_json_string(),
        }
    }

    /// Parse either spec format; tensor-bearing files are the non-symmetric
    /// kind.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("tensor").is_some() {
            Ok(AnySignal::NonSymmetric(
                NonSymmetricSignalSpec::from_json_str(text)?,
            ))
        } else {
            Ok(AnySignal::Symmetric(SymmetricSignalSpec::from_json_str(
                text,
            )?))
        }
    }
}

/// What a state class is expected to do under a signal.
#[derive(Debug, Clone, Copy)]
pub enum ClassExpectation {
    /// Every |value| must stay at or below the threshold.
    VanishWithin(f64),
    /// The class maximum |value| must exceed the threshold.
    ExceedsInMagnitude(f64),
}

/// A named batch of states with an expectation.
#[derive(Debug)]
pub struct EnsembleClass {
    pub name: String,
    pub states: Vec<PureState>,
    pub expectation: ClassExpectation,
}

/// Per-class outcome of a [`vanishing_report`].
#[derive(Debug, Clone)]
pub struct ClassOutcome {
    pub class: String,
    pub samples: usize,
    pub max_abs: f64,
    pub threshold: f64,
    pub expect_vanish: bool,
    pub pass: bool,
}

/// Batch evaluation report.
#[derive(Debug, Clone)]
pub struct VanishingReport {
    pub classes: Vec<ClassOutcome>,
    pub pass: bool,
}

/// Evaluate a signal over state classes and check each class's expectation.
pub fn vanishing_report(
    signal: &AnySignal,
    classes: &[EnsembleClass],
) -> Result<VanishingReport> {
    let mut outcomes = Vec::with_capacity(classes.len());
    let mut pass = true;
    for class in classes {
        let mut max_abs: f64 = 0.0;
        for psi in &class.states {
            max_abs = max_abs.max(signal.evaluate(psi)?.abs());
        }
        let (threshold, expect_vanish, ok) = match class.expectation {
            ClassExpectation::VanishWithin(tol) => (tol, true, max_abs <= tol),
            ClassExpectation::ExceedsInMagnitude(thr) => (thr, false, max_abs > thr),
        };
        pass &= ok;
        outcomes.push(ClassOutcome {
            class: class.name.clone(),
            samples: class.states.len(),
            max_abs,
            threshold,
            expect_vanish,
            pass: ok,
        });
    }
    Ok(VanishingReport {
        classes: outcomes,
        pass,
    })
}
