//! Dense multipartite pure states and the constructions that move between
//! party structures: tensor and layer composition, coarse-graining along a
//! partition, dimension embedding, reduced density matrices, canonical
//! purification, Kraus measurements, and random/catalog state factories.
//!
//! Amplitudes are stored row-major with the **last party index fastest**.
//! States must be normalized on construction (within [`NORM_TOLERANCE`]);
//! normalization is never silently repaired — use [`PureState::renormalized`]
//! when that is what you mean.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, sqrt_psd, CMatrix};
use crate::partition::{Partition, PartySet};
use crate::rng::Rng;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Maximum allowed deviation of the amplitude 2-norm from 1 on construction.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Maximum allowed deviation from Hermiticity for density-matrix input.
pub const DENSITY_HERMITICITY_TOLERANCE: f64 = 1e-10;
/// Maximum allowed deviation of a density-matrix trace from 1.
pub const DENSITY_TRACE_TOLERANCE: f64 = 1e-10;
/// Eigenvalues of density matrices may dip this far below zero before the
/// matrix is rejected as not positive semidefinite.
pub const PSD_EIGENVALUE_FLOOR: f64 = -1e-9;
/// Kraus outcome probabilities must sum to 1 within this tolerance.
pub const KRAUS_PROBABILITY_TOLERANCE: f64 = 1e-9;
/// Hard cap on the total Hilbert-space dimension of a single state.
pub const MAX_TOTAL_DIMENSION: usize = 1 << 20;

/// A labeled tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Party {
    pub label: String,
    pub dim: usize,
}

impl Party {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Party {
            label: label.into(),
            dim,
        }
    }
}

/// Parties labeled `A, B, C, …` with a common local dimension.
pub fn uniform_parties(q: usize, d: usize) -> Result<Vec<Party>> {
    let ps = PartySet::with_default_labels(q)?;
    Ok(ps
        .labels()
        .iter()
        .map(|l| Party::new(l.clone(), d))
        .collect())
}

fn validate_parties(parties: &[Party]) -> Result<(PartySet, usize)> {
    let ps = PartySet::new(parties.iter().map(|p| p.label.clone()))?;
    let mut total: usize = 1;
    for p in parties {
        if p.dim == 0 {
            return Err(Error::InvalidArgument(format!(
                "party {} has dimension zero",
                p.label
            )));
        }
        total = total.checked_mul(p.dim).ok_or_else(|| {
            Error::InvalidArgument("total dimension overflows".into())
        })?;
        if total > MAX_TOTAL_DIMENSION {
            return Err(Error::InvalidArgument(format!(
                "total dimension exceeds the cap of {MAX_TOTAL_DIMENSION}"
            )));
        }
    }
    Ok((ps, total))
}

/// A normalized pure state of a multipartite system.
#[derive(Debug, Clone)]
pub struct PureState {
    parties: Vec<Party>,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Construct and validate. Rejects non-normalized amplitude vectors.
    pub fn new(parties: Vec<Party>, amps: Vec<Complex64>) -> Result<Self> {
        let (_, total) = validate_parties(&parties)?;
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "amplitude count {} does not match total dimension {total}",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let deviation = (norm - 1.0).abs();
        if deviation > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                deviation,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(PureState { parties, amps })
    }

    /// Construct after dividing out the norm. Rejects the zero vector.
    pub fn renormalized(parties: Vec<Party>, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidArgument(
                "cannot normalize a (near-)zero amplitude vector".into(),
            ));
        }
        for z in &mut amps {
            *z /= norm;
        }
        let (_, total) = validate_parties(&parties)?;
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "amplitude count {} does not match total dimension {total}",
                amps.len()
            )));
        }
        Ok(PureState { parties, amps })
    }

    pub fn q(&self) -> usize {
        self.parties.len()
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parties.iter().map(|p| p.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.parties.iter().map(|p| p.label.as_str()).collect()
    }

    /// The party set, for parsing subsets and partitions against this state.
    pub fn party_set(&self) -> PartySet {
        PartySet::new(self.parties.iter().map(|p| p.label.clone()))
            .expect("labels validated on construction")
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Row-major strides (last party fastest).
    pub fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut s = vec![1usize; dims.len()];
        for a in (0..dims.len().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * dims[a + 1];
        }
        s
    }

    /// Decompose a flat index into per-party digits.
    pub fn digits_of(&self, mut flat: usize) -> Vec<usize> {
        let dims = self.dims();
        let mut out = vec![0usize; dims.len()];
        for a in (0..dims.len()).rev() {
            out[a] = flat % dims[a];
            flat /= dims[a];
        }
        out
    }

    /// Flatten per-party digits.
    pub fn flat_of(&self, digits: &[usize]) -> usize {
        let strides = self.strides();
        digits.iter().zip(&strides).map(|(d, s)| d * s).sum()
    }

    /// Amplitude at a multi-index.
    pub fn amplitude(&self, digits: &[usize]) -> Complex64 {
        self.amps[self.flat_of(digits)]
    }

    /// Largest per-amplitude distance to another state of identical shape.
    pub fn max_amplitude_distance(&self, other: &PureState) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(
                "states have different shapes".into(),
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Overlap `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(
                "states have different shapes".into(),
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Apply a unitary (or any square matrix) to one party.
    pub fn apply_party_matrix(&self, party: usize, u: &CMatrix) -> Result<PureState> {
        let dims = self.dims();
        if party >= dims.len() {
            return Err(Error::InvalidArgument(format!(
                "party index {party} out of range"
            )));
        }
        let d = dims[party];
        if u.rows() != d || u.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{} but party {} has dimension {d}",
                u.rows(),
                u.cols(),
                self.parties[party].label
            )));
        }
        let stride = self.strides()[party];
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (flat, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let digit = (flat / stride) % d;
            let base = flat - digit * stride;
            for j in 0..d {
                let m = u[(j, digit)];
                if m.norm_sqr() == 0.0 {
                    continue;
                }
                out[base + j * stride] += m * amp;
            }
        }
        PureState {
            parties: self.parties.clone(),
            amps: out,
        }
        .checked()
    }

    fn checked(self) -> Result<PureState> {
        let norm = self.norm();
        let deviation = (norm - 1.0).abs();
        if deviation > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                deviation,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(self)
    }

    /// Tensor product with disjoint party labels; the right factor's parties
    /// come after (and therefore vary faster than) the left factor's.
    pub fn tensor_product(&self, other: &PureState) -> Result<PureState> {
        let mut parties = self.parties.clone();
        parties.extend(other.parties.iter().cloned());
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState::new(parties, amps)
    }

    /// Layer composition: both states share the same party labels in the same
    /// order; per party, local dimensions multiply and the fused index is
    /// `i_first * dim_second + i_second`.
    pub fn layer_product(&self, other: &PureState) -> Result<PureState> {
        if self.labels() != other.labels() {
            return Err(Error::DimensionMismatch(
                "layer composition requires identical party labels in order".into(),
            ));
        }
        let q = self.q();
        let d1 = self.dims();
        let d2 = other.dims();
        let parties: Vec<Party> = self
            .parties
            .iter()
            .zip(&d2)
            .map(|(p, &e)| Party::new(p.label.clone(), p.dim * e))
            .collect();
        let fused_dims: Vec<usize> = parties.iter().map(|p| p.dim).collect();
        let mut strides = vec![1usize; q];
        for a in (0..q.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * fused_dims[a + 1];
        }
        let total: usize = fused_dims.iter().product();
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        for (f1, a1) in self.amps.iter().enumerate() {
            if a1.norm_sqr() == 0.0 {
                continue;
            }
            let g1 = self.digits_of(f1);
            for (f2, a2) in other.amps.iter().enumerate() {
                let g2 = other.digits_of(f2);
                let flat: usize = (0..q)
                    .map(|a| (g1[a] * d2[a] + g2[a]) * strides[a])
                    .sum();
                amps[flat] = a1 * a2;
            }
        }
        let _ = d1;
        PureState::new(parties, amps)
    }

    /// Reorder parties; `perm[new_position] = old_position`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<PureState> {
        let q = self.q();
        if perm.len() != q {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        let mut seen = vec![false; q];
        for &p in perm {
            if p >= q || seen[p] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[p] = true;
        }
        let parties: Vec<Party> = perm.iter().map(|&p| self.parties[p].clone()).collect();
        let out_shell = PureState {
            parties,
            amps: vec![Complex64::new(0.0, 0.0); self.amps.len()],
        };
        let mut amps = out_shell.amps.clone();
        for (flat, amp) in self.amps.iter().enumerate() {
            let g = self.digits_of(flat);
            let new_digits: Vec<usize> = perm.iter().map(|&p| g[p]).collect();
            amps[out_shell.flat_of(&new_digits)] = *amp;
        }
        PureState {
            parties: out_shell.parties,
            amps,
        }
        .checked()
    }

    /// Coarse-grain along a partition: each block becomes a single party whose
    /// label is the concatenation of its members' labels (ascending party
    /// order) and whose index fuses the member indices, last member fastest.
    pub fn coarse_grain(&self, pi: &Partition) -> Result<PureState> {
        if pi.q() != self.q() {
            return Err(Error::DimensionMismatch(
                "partition is over a different number of parties".into(),
            ));
        }
        let dims = self.dims();
        let blocks: Vec<Vec<usize>> = pi
            .blocks()
            .iter()
            .map(|&mask| (0..self.q()).filter(|a| mask & (1 << a) != 0).collect())
            .collect();
        let parties: Vec<Party> = blocks
            .iter()
            .map(|members| {
                let label: String = members
                    .iter()
                    .map(|&a| self.parties[a].label.as_str())
                    .collect();
                let dim: usize = members.iter().map(|&a| dims[a]).product();
                Party::new(label, dim)
            })
            .collect();
        let out_shell = PureState {
            parties,
            amps: vec![Complex64::new(0.0, 0.0); self.amps.len()],
        };
        let mut amps = out_shell.amps.clone();
        for (flat, amp) in self.amps.iter().enumerate() {
            let g = self.digits_of(flat);
            let new_digits: Vec<usize> = blocks
                .iter()
                .map(|members| {
                    members
                        .iter()
                        .fold(0usize, |acc, &a| acc * dims[a] + g[a])
                })
                .collect();
            amps[out_shell.flat_of(&new_digits)] = *amp;
        }
        PureState {
            parties: out_shell.parties,
            amps,
        }
        .checked()
    }

    /// Push each party through an injective index map into a (possibly)
    /// larger local space; unused target indices carry zero amplitude.
    pub fn inject(&self, maps: &[Vec<usize>], new_dims: &[usize]) -> Result<PureState> {
        let q = self.q();
        if maps.len() != q || new_dims.len() != q {
            return Err(Error::InvalidArgument(
                "need one index map and one target dimension per party".into(),
            ));
        }
        let dims = self.dims();
        for a in 0..q {
            if maps[a].len() != dims[a] {
                return Err(Error::InvalidArgument(format!(
                    "index map for party {} has wrong length",
                    self.parties[a].label
                )));
            }
            let mut seen = vec![false; new_dims[a]];
            for &t in &maps[a] {
                if t >= new_dims[a] || seen[t] {
                    return Err(Error::InvalidArgument(format!(
                        "index map for party {} is not injective into 0..{}",
                        self.parties[a].label, new_dims[a]
                    )));
                }
                seen[t] = true;
            }
        }
        let parties: Vec<Party> = self
            .parties
            .iter()
            .zip(new_dims)
            .map(|(p, &d)| Party::new(p.label.clone(), d))
            .collect();
        let (_, total) = validate_parties(&parties)?;
        let out_shell = PureState {
            parties,
            amps: vec![Complex64::new(0.0, 0.0); total],
        };
        let mut amps = out_shell.amps.clone();
        for (flat, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let g = self.digits_of(flat);
            let new_digits: Vec<usize> = (0..q).map(|a| maps[a][g[a]]).collect();
            amps[out_shell.flat_of(&new_digits)] = *amp;
        }
        PureState {
            parties: out_shell.parties,
            amps,
        }
        .checked()
    }

    /// Enlarge local dimensions without moving any amplitude (identity
    /// injection into the first `dim` basis states of each party).
    pub fn embed(&self, new_dims: &[usize]) -> Result<PureState> {
        let dims = self.dims();
        for (a, (&old, &new)) in dims.iter().zip(new_dims).enumerate() {
            if new < old {
                return Err(Error::InvalidArgument(format!(
                    "cannot embed party {} into a smaller dimension",
                    self.parties[a].label
                )));
            }
        }
        let maps: Vec<Vec<usize>> = dims.iter().map(|&d| (0..d).collect()).collect();
        self.inject(&maps, new_dims)
    }

    /// Reduced density matrix on the parties selected by `mask` (bit `a` =
    /// party `a`), computed as the Gram matrix of the (kept × traced) reshape.
    pub fn reduced_density(&self, mask: u32) -> Result<DensityMatrix> {
        let q = self.q();
        if mask >= (1u32 << q) && q < 32 {
            return Err(Error::InvalidArgument("subset mask out of range".into()));
        }
        let dims = self.dims();
        let kept: Vec<usize> = (0..q).filter(|a| mask & (1 << a) != 0).collect();
        let kept_dim: usize = kept.iter().map(|&a| dims[a]).product();
        let traced_dim = self.amps.len() / kept_dim.max(1);

        // Reshape to rows = kept digits (ascending party order, last fastest),
        // cols = traced digits likewise.
        let mut reshaped = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let traced: Vec<usize> = (0..q).filter(|a| mask & (1 << a) == 0).collect();
        for (flat, amp) in self.amps.iter().enumerate() {
            let g = self.digits_of(flat);
            let row = kept.iter().fold(0usize, |acc, &a| acc * dims[a] + g[a]);
            let col = traced.iter().fold(0usize, |acc, &a| acc * dims[a] + g[a]);
            reshaped[row * traced_dim + col] = *amp;
        }
        let mut mat = CMatrix::zero(kept_dim, kept_dim);
        for r1 in 0..kept_dim {
            for r2 in 0..=r1 {
                let mut s = Complex64::new(0.0, 0.0);
                for c in 0..traced_dim {
                    s += reshaped[r1 * traced_dim + c] * reshaped[r2 * traced_dim + c].conj();
                }
                mat[(r1, r2)] = s;
                if r1 != r2 {
                    mat[(r2, r1)] = s.conj();
                }
            }
        }
        let parties: Vec<Party> = kept.iter().map(|&a| self.parties[a].clone()).collect();
        Ok(DensityMatrix { parties, mat })
    }

    /// Eigenvalue spectrum of the reduced density on `mask`, computed on the
    /// smaller of the subset and its complement (their nonzero spectra agree
    /// for a pure state).
    pub fn subset_spectrum(&self, mask: u32) -> Result<Vec<f64>> {
        let q = self.q();
        let full: u32 = if q >= 32 { u32::MAX } else { (1u32 << q) - 1 };
        let comp = full & !mask;
        let dims = self.dims();
        let dim_of = |m: u32| -> usize {
            (0..q)
                .filter(|a| m & (1 << a) != 0)
                .map(|a| dims[a])
                .product()
        };
        let side = if dim_of(mask) <= dim_of(comp) { mask } else { comp };
        self.reduced_density(side)?.spectrum()
    }

    /// Serialize to the on-disk JSON schema.
    pub fn to_json_string(&self) -> String {
        let file = StateFile {
            parties: self.parties.clone(),
            amplitudes: self.amps.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("state serialization cannot fail")
    }

    /// Parse and validate the on-disk JSON schema.
    pub fn from_json_str(text: &str) -> Result<PureState> {
        let file: StateFile = serde_json::from_str(text)?;
        let amps = file
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        PureState::new(file.parties, amps)
    }
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    parties: Vec<Party>,
    amplitudes: Vec<[f64; 2]>,
}

/// A validated density matrix with labeled parties.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    parties: Vec<Party>,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Construct from explicit data, validating Hermiticity, unit trace, and
    /// positive semidefiniteness.
    pub fn new(parties: Vec<Party>, mat: CMatrix) -> Result<Self> {
        let (_, total) = validate_parties(&parties)?;
        if mat.rows() != total || mat.cols() != total {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but the parties span dimension {total}",
                mat.rows(),
                mat.cols()
            )));
        }
        let herm = mat.hermiticity_error();
        if herm > DENSITY_HERMITICITY_TOLERANCE {
            return Err(Error::Numerical(format!(
                "density matrix deviates from Hermitian by {herm:.3e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOLERANCE || tr.im.abs() > DENSITY_TRACE_TOLERANCE {
            return Err(Error::Numerical(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let dm = DensityMatrix { parties, mat };
        let min = dm
            .spectrum()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < PSD_EIGENVALUE_FLOOR {
            return Err(Error::Numerical(format!(
                "density matrix has eigenvalue {min:.3e} below the floor {PSD_EIGENVALUE_FLOOR:.1e}"
            )));
        }
        Ok(dm)
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn total_dim(&self) -> usize {
        self.mat.rows()
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.mat)
    }

    /// Canonical purification: the vectorization of the positive square root
    /// of the density matrix. For each original party `L` a partner `L*` of
    /// the same dimension is appended **immediately after it**, so the party
    /// order is `L1, L1*, L2, L2*, …`. Tracing out all partner parties
    /// returns the original density matrix.
    pub fn canonical_purification(&self) -> Result<PureState> {
        let root = sqrt_psd(&self.mat, PSD_EIGENVALUE_FLOOR)?;
        let m = self.parties.len();
        let mut parties = Vec::with_capacity(2 * m);
        for p in &self.parties {
            parties.push(p.clone());
            parties.push(Party::new(format!("{}*", p.label), p.dim));
        }
        let dims: Vec<usize> = self.parties.iter().map(|p| p.dim).collect();
        let total = self.mat.rows();
        let shell = PureState {
            parties: parties.clone(),
            amps: vec![Complex64::new(0.0, 0.0); total * total],
        };
        let mut amps = shell.amps.clone();
        let digits = |mut flat: usize| -> Vec<usize> {
            let mut out = vec![0usize; m];
            for a in (0..m).rev() {
                out[a] = flat % dims[a];
                flat /= dims[a];
            }
            out
        };
        for row in 0..total {
            let gj = digits(row);
            for col in 0..total {
                let z = root[(row, col)];
                if z.norm_sqr() == 0.0 {
                    continue;
                }
                let gk = digits(col);
                let mut interleaved = Vec::with_capacity(2 * m);
                for a in 0..m {
                    interleaved.push(gj[a]);
                    interleaved.push(gk[a]);
                }
                amps[shell.flat_of(&interleaved)] = z;
            }
        }
        // The square root of a unit-trace PSD matrix vectorizes to a unit
        // vector up to eigensolver noise; normalize that noise away.
        PureState::renormalized(parties, amps)
    }
}

/// One measurement branch produced by [`apply_kraus`].
#[derive(Debug, Clone)]
pub struct KrausOutcome {
    pub probability: f64,
    pub state: PureState,
}

/// Apply a complete set of Kraus operators to a single party of a pure state.
///
/// Requires `sum_i E_i† E_i = identity` within [`DENSITY_HERMITICITY_TOLERANCE`]
/// and checks that the outcome probabilities sum to 1 within
/// [`KRAUS_PROBABILITY_TOLERANCE`]. Branches with vanishing probability are
/// reported with probability 0 and no normalized state is produced for them.
pub fn apply_kraus(
    state: &PureState,
    party: usize,
    ops: &[CMatrix],
) -> Result<Vec<KrausOutcome>> {
    if ops.is_empty() {
        return Err(Error::InvalidArgument("no Kraus operators given".into()));
    }
    let d = state
        .parties()
        .get(party)
        .ok_or_else(|| Error::InvalidArgument(format!("party index {party} out of range")))?
        .dim;
    let mut completeness = CMatrix::zero(d, d);
    for op in ops {
        if op.rows() != d || op.cols() != d {
            return Err(Error::DimensionMismatch(
                "Kraus operator has the wrong shape for the target party".into(),
            ));
        }
        completeness = completeness.add(&op.adjoint().mul(op)?)?;
    }
    let dev = completeness.identity_error();
    if dev > DENSITY_HERMITICITY_TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "Kraus operators are not trace preserving: sum E†E deviates from identity by {dev:.3e}"
        )));
    }

    let mut outcomes = Vec::with_capacity(ops.len());
    let mut prob_sum = 0.0;
    for op in ops {
        // Unnormalized branch amplitudes.
        let stride = state.strides()[party];
        let mut amps = vec![Complex64::new(0.0, 0.0); state.total_dim()];
        for (flat, amp) in state.amplitudes().iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let digit = (flat / stride) % d;
            let base = flat - digit * stride;
            for j in 0..d {
                let m = op[(j, digit)];
                if m.norm_sqr() == 0.0 {
                    continue;
                }
                amps[base + j * stride] += m * amp;
            }
        }
        let p: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        prob_sum += p;
        if p >= 1e-12 {
            outcomes.push(KrausOutcome {
                probability: p,
                state: PureState::renormalized(state.parties().to_vec(), amps)?,
            });
        }
    }
    if (prob_sum - 1.0).abs() > KRAUS_PROBABILITY_TOLERANCE {
        return Err(Error::Numerical(format!(
            "Kraus outcome probabilities sum to {prob_sum}, not 1"
        )));
    }
    Ok(outcomes)
}

// ---------------------------------------------------------------------------
// Factories: random ensembles and the named catalog.
// ---------------------------------------------------------------------------

/// Haar-ish random pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn random_state(parties: &[Party], rng: &mut Rng) -> Result<PureState> {
    let (_, total) = validate_parties(parties)?;
    let amps: Vec<Complex64> = (0..total)
        .map(|_| Complex64::new(rng.gaussian(), rng.gaussian()))
        .collect();
    PureState::renormalized(parties.to_vec(), amps)
}

/// Random state separable along `kappa`: an independent random pure state on
/// each block, tensored and reordered to the original party order.
pub fn random_separable(
    parties: &[Party],
    kappa: &Partition,
    rng: &mut Rng,
) -> Result<PureState> {
    if kappa.q() != parties.len() {
        return Err(Error::DimensionMismatch(
            "partition is over a different number of parties".into(),
        ));
    }
    let mut block_states = Vec::new();
    let mut order = Vec::new();
    for &mask in kappa.blocks() {
        let members: Vec<usize> = (0..parties.len())
            .filter(|a| mask & (1 << a) != 0)
            .collect();
        order.extend(members.iter().copied());
        let block_parties: Vec<Party> = members.iter().map(|&a| parties[a].clone()).collect();
        block_states.push(random_state(&block_parties, rng)?);
    }
    let mut combined = block_states
        .into_iter()
        .reduce(|acc, s| acc.tensor_product(&s).expect("disjoint labels"))
        .expect("at least one block");
    // `order[pos_in_tensor] = original_index`; invert to restore party order.
    let mut inverse = vec![0usize; order.len()];
    for (pos, &orig) in order.iter().enumerate() {
        inverse[orig] = pos;
    }
    combined = combined.permute_parties(&inverse)?;
    Ok(combined)
}

/// One layer of a layered random state: a separability pattern plus the
/// per-party local dimensions of that layer.
#[derive(Debug, Clone)]
pub struct LayerSpec {
    pub kappa: Partition,
    pub dims: Vec<usize>,
}

/// Random layerwise-separable state: each layer is randomly `kappa_i`-separable
/// and the layers are composed with [`PureState::layer_product`].
pub fn random_layerwise(
    labels: &[&str],
    layers: &[LayerSpec],
    rng: &mut Rng,
) -> Result<PureState> {
    if layers.is_empty() {
        return Err(Error::InvalidArgument("need at least one layer".into()));
    }
    let mut result: Option<PureState> = None;
    for layer in layers {
        if layer.dims.len() != labels.len() {
            return Err(Error::DimensionMismatch(
                "layer dimensions do not match the party count".into(),
            ));
        }
        let parties: Vec<Party> = labels
            .iter()
            .zip(&layer.dims)
            .map(|(l, &d)| Party::new(*l, d))
            .collect();
        let s = random_separable(&parties, &layer.kappa, rng)?;
        result = Some(match result {
            None => s,
            Some(acc) => acc.layer_product(&s)?,
        });
    }
    Ok(result.expect("nonempty layers"))
}

/// Computational basis state |0…0⟩.
pub fn product_state(parties: &[Party]) -> Result<PureState> {
    let (_, total) = validate_parties(parties)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); total];
    amps[0] = Complex64::new(1.0, 0.0);
    PureState::new(parties.to_vec(), amps)
}

/// Generalized GHZ state `(sum_i |i…i⟩)/sqrt(d)` on `q` parties of dimension `d`.
pub fn ghz_state(q: usize, d: usize) -> Result<PureState> {
    let parties = uniform_parties(q, d)?;
    let (_, total) = validate_parties(&parties)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); total];
    let shell = PureState {
        parties: parties.clone(),
        amps: amps.clone(),
    };
    let w = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        let digits = vec![i; q];
        amps[shell.flat_of(&digits)] = Complex64::new(w, 0.0);
    }
    PureState::new(parties, amps)
}

/// W state on `q` qubits: uniform superposition of single-excitation basis
/// states.
pub fn w_state(q: usize) -> Result<PureState> {
    if q < 2 {
        return Err(Error::InvalidArgument(
            "the single-excitation state needs at least 2 parties".into(),
        ));
    }
    let parties = uniform_parties(q, 2)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << q];
    let w = 1.0 / (q as f64).sqrt();
    for a in 0..q {
        // Party `a` excited; last party fastest, so its bit is `q-1-a`.
        amps[1 << (q - 1 - a)] = Complex64::new(w, 0.0);
    }
    PureState::new(parties, amps)
}

/// The layered three-party fusion demo input: a Bell pair between A and B in
/// the first layer, a Bell pair between B and C in the second, composed so
/// each party carries two qubits fused into one four-dimensional index.
pub fn layered_fusion_input() -> Result<PureState> {
    let bell_ab = ghz_state(2, 2)?; // labels A, B
    let zero_c = product_state(&[Party::new("C", 2)])?;
    let layer1 = bell_ab.tensor_product(&zero_c)?;
    let zero_a = product_state(&[Party::new("A", 2)])?;
    let bell_bc = {
        // GHZ builder labels parties A, B; relabel to B, C.
        let s = ghz_state(2, 2)?;
        PureState::new(
            vec![Party::new("B", 2), Party::new("C", 2)],
            s.amplitudes().to_vec(),
        )?
    };
    let layer2 = zero_a.tensor_product(&bell_bc)?;
    layer1.layer_product(&layer2)
}

/// The even-parity branch of the fusion demo: `(|0,0,0⟩ + |2,3,1⟩)/sqrt(2)`
/// on three four-dimensional parties.
pub fn fusion_outcome_even() -> Result<PureState> {
    let parties = uniform_parties(3, 4)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 64];
    let w = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    amps[0] = w; // (0,0,0)
    amps[2 * 16 + 3 * 4 + 1] = w; // (2,3,1)
    PureState::new(parties, amps)
}

/// The odd-parity branch of the fusion demo: `(|0,1,1⟩ + |2,2,0⟩)/sqrt(2)`.
pub fn fusion_outcome_odd() -> Result<PureState> {
    let parties = uniform_parties(3, 4)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 64];
    let w = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    amps[4 + 1] = w; // (0,1,1)
    amps[2 * 16 + 2 * 4] = w; // (2,2,0)
    PureState::new(parties, amps)
}

/// The parity projectors used by the fusion demo, acting on the fused
/// four-dimensional middle party: one keeps indices {0,3}, the other {1,2}.
pub fn fusion_kraus_pair() -> (CMatrix, CMatrix) {
    let mut even = CMatrix::zero(4, 4);
    even[(0, 0)] = Complex64::new(1.0, 0.0);
    even[(3, 3)] = Complex64::new(1.0, 0.0);
    let mut odd = CMatrix::zero(4, 4);
    odd[(1, 1)] = Complex64::new(1.0, 0.0);
    odd[(2, 2)] = Complex64::new(1.0, 0.0);
    (even, odd)
}

/// Catalog lookup by contract name.
///
/// `q` and `d` must match the fixed geometry of the named state where it has
/// one (the fusion-demo states are pinned to three parties of dimension 4).
pub fn catalog_state(name: &str, q: usize, d: usize) -> Result<PureState> {
    match name {
        "product" => product_state(&uniform_parties(q, d)?),
        "bell" => {
            if q != 2 {
                return Err(Error::InvalidArgument(
                    "the Bell catalog entry is a 2-party state".into(),
                ));
            }
            ghz_state(2, d)
        }
        "ghz" => ghz_state(q, d),
        "w" => {
            if d != 2 {
                return Err(Error::InvalidArgument(
                    "the W catalog entry is a qubit state".into(),
                ));
            }
            w_state(q)
        }
        "appendixA-psi" | "appendixA-psi1" | "appendixA-psi2" => {
            if q != 3 || d != 4 {
                return Err(Error::InvalidArgument(format!(
                    "catalog state {name} is pinned to q=3, d=4"
                )));
            }
            match name {
                "appendixA-psi" => layered_fusion_input(),
                "appendixA-psi1" => fusion_outcome_even(),
                _ => fusion_outcome_odd(),
            }
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown catalog state '{other}'"
        ))),
    }
}

/// Names accepted by [`catalog_state`].
pub const CATALOG_NAMES: [&str; 7] = [
    "product",
    "bell",
    "ghz",
    "w",
    "appendixA-psi",
    "appendixA-psi1",
    "appendixA-psi2",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit_pair() -> Vec<Party> {
        vec![Party::new("A", 2), Party::new("B", 2)]
    }

    #[test]
    fn construction_rejects_unnormalized() {
        let err = PureState::new(qubit_pair(), vec![c(1.0, 0.0); 4]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
        let ok = PureState::renormalized(qubit_pair(), vec![c(1.0, 0.0); 4]).unwrap();
        assert!((ok.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn json_roundtrip_preserves_amplitudes() {
        let s = ghz_state(3, 2).unwrap();
        let text = s.to_json_string();
        let back = PureState::from_json_str(&text).unwrap();
        assert_eq!(back.labels(), s.labels());
        assert!(s.max_amplitude_distance(&back).unwrap() < 1e-15);
        // A corrupted norm is rejected on parse.
        let bad = text.replace("0.7071067811865475", "0.9");
        assert!(PureState::from_json_str(&bad).is_err());
    }

    #[test]
    fn tensor_product_places_right_factor_fastest() {
        let zero = product_state(&[Party::new("A", 2)]).unwrap();
        let one = PureState::new(
            vec![Party::new("B", 2)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let s = zero.tensor_product(&one).unwrap();
        assert_eq!(s.labels(), vec!["A", "B"]);
        assert!((s.amplitude(&[0, 1]).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn layer_product_fuses_first_factor_major() {
        // Bell ⊗_layer |01⟩: party A fuses (bell digit, 0), party B (bell digit, 1).
        let bell = ghz_state(2, 2).unwrap();
        let zero_one = PureState::new(
            qubit_pair(),
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let s = bell.layer_product(&zero_one).unwrap();
        assert_eq!(s.dims(), vec![4, 4]);
        let w = 1.0 / 2f64.sqrt();
        assert!((s.amplitude(&[0, 1]).re - w).abs() < 1e-14); // (0,0)+(0,1)
        assert!((s.amplitude(&[2, 3]).re - w).abs() < 1e-14); // (1,1)+(0,1)
        assert!(s.amplitude(&[0, 0]).norm() < 1e-15);
    }

    #[test]
    fn layered_fusion_input_has_the_documented_support() {
        let s = layered_fusion_input().unwrap();
        assert_eq!(s.dims(), vec![4, 4, 4]);
        let expected = [
            ([0usize, 0, 0], 0.5),
            ([0, 1, 1], 0.5),
            ([2, 2, 0], 0.5),
            ([2, 3, 1], 0.5),
        ];
        let mut mass = 0.0;
        for (digits, v) in expected {
            let a = s.amplitude(&digits);
            assert!((a.re - v).abs() < 1e-14 && a.im.abs() < 1e-15, "{digits:?}");
            mass += a.norm_sqr();
        }
        assert!((mass - 1.0).abs() < 1e-12, "no support elsewhere");
    }

    #[test]
    fn fusion_kraus_pair_is_exactly_complete_and_splits_evenly() {
        let (even, odd) = fusion_kraus_pair();
        let sum = even
            .adjoint()
            .mul(&even)
            .unwrap()
            .add(&odd.adjoint().mul(&odd).unwrap())
            .unwrap();
        assert_eq!(sum.identity_error(), 0.0);

        let input = layered_fusion_input().unwrap();
        let outcomes = apply_kraus(&input, 1, &[even, odd]).unwrap();
        assert_eq!(outcomes.len(), 2);
        assert!((outcomes[0].probability - 0.5).abs() < 1e-12);
        assert!((outcomes[1].probability - 0.5).abs() < 1e-12);
        assert!(outcomes[0]
            .state
            .max_amplitude_distance(&fusion_outcome_even().unwrap())
            .unwrap()
            < 1e-12);
        assert!(outcomes[1]
            .state
            .max_amplitude_distance(&fusion_outcome_odd().unwrap())
            .unwrap()
            < 1e-12);
    }

    #[test]
    fn fusion_outcomes_are_injected_ghz_states() {
        let ghz = ghz_state(3, 2).unwrap();
        let even = ghz
            .inject(
                &[vec![0, 2], vec![0, 3], vec![0, 1]],
                &[4, 4, 4],
            )
            .unwrap();
        assert!(even
            .max_amplitude_distance(&fusion_outcome_even().unwrap())
            .unwrap()
            < 1e-15);
        let odd = ghz
            .inject(
                &[vec![0, 2], vec![1, 2], vec![1, 0]],
                &[4, 4, 4],
            )
            .unwrap();
        assert!(odd
            .max_amplitude_distance(&fusion_outcome_odd().unwrap())
            .unwrap()
            < 1e-15);
    }

    #[test]
    fn coarse_grain_fuses_blocks() {
        let ps = PartySet::with_default_labels(3).unwrap();
        let pi = Partition::parse("AB|C", &ps).unwrap();
        let g = ghz_state(3, 2).unwrap().coarse_grain(&pi).unwrap();
        assert_eq!(g.labels(), vec!["AB", "C"]);
        assert_eq!(g.dims(), vec![4, 2]);
        let w = 1.0 / 2f64.sqrt();
        assert!((g.amplitude(&[0, 0]).re - w).abs() < 1e-14);
        assert!((g.amplitude(&[3, 1]).re - w).abs() < 1e-14);
    }

    #[test]
    fn coarse_grain_is_functorial() {
        let mut rng = Rng::new(3);
        let parties = vec![
            Party::new("A", 2),
            Party::new("B", 3),
            Party::new("C", 2),
            Party::new("D", 2),
        ];
        let s = random_state(&parties, &mut rng).unwrap();
        let ps = PartySet::with_default_labels(4).unwrap();
        let fine = Partition::parse("AB|C|D", &ps).unwrap();
        let coarse = Partition::parse("AB|CD", &ps).unwrap();
        let direct = s.coarse_grain(&coarse).unwrap();
        let via = s
            .coarse_grain(&fine)
            .unwrap()
            .coarse_grain(&coarse.quotient_by(&fine).unwrap())
            .unwrap();
        assert_eq!(direct.dims(), via.dims());
        assert!(direct.max_amplitude_distance(&via).unwrap() < 1e-14);
    }

    #[test]
    fn permute_parties_roundtrips() {
        let mut rng = Rng::new(9);
        let parties = vec![Party::new("A", 2), Party::new("B", 3), Party::new("C", 4)];
        let s = random_state(&parties, &mut rng).unwrap();
        let p = s.permute_parties(&[2, 0, 1]).unwrap();
        assert_eq!(p.labels(), vec!["C", "A", "B"]);
        assert!((p.amplitude(&[3, 1, 2]) - s.amplitude(&[1, 2, 3])).norm() < 1e-15);
        let back = p.permute_parties(&[1, 2, 0]).unwrap();
        assert!(back.max_amplitude_distance(&s).unwrap() < 1e-15);
    }

    #[test]
    fn bell_reduced_density_is_maximally_mixed() {
        let bell = ghz_state(2, 2).unwrap();
        let rho = bell.reduced_density(0b01).unwrap();
        assert_eq!(rho.total_dim(), 2);
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-14);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn schmidt_duality_on_random_states() {
        let mut rng = Rng::new(21);
        let parties = vec![Party::new("A", 2), Party::new("B", 3), Party::new("C", 4)];
        let s = random_state(&parties, &mut rng).unwrap();
        for mask in 1u32..7 {
            let a = s.reduced_density(mask).unwrap().spectrum().unwrap();
            let b = s.reduced_density(0b111 & !mask).unwrap().spectrum().unwrap();
            let nz = |v: &[f64]| -> Vec<f64> {
                let mut out: Vec<f64> = v.iter().copied().filter(|x| *x > 1e-9).collect();
                out.sort_by(|x, y| y.partial_cmp(x).unwrap());
                out
            };
            let (sa, sb) = (nz(&a), nz(&b));
            assert_eq!(sa.len(), sb.len(), "mask {mask}");
            for (x, y) in sa.iter().zip(&sb) {
                assert!((x - y).abs() < 1e-9, "mask {mask}");
            }
        }
    }

    #[test]
    fn subset_spectrum_sums_to_one_and_full_set_is_pure() {
        let mut rng = Rng::new(4);
        let parties = uniform_parties(3, 2).unwrap();
        let s = random_state(&parties, &mut rng).unwrap();
        for mask in 0u32..8 {
            let spec = s.subset_spectrum(mask).unwrap();
            let sum: f64 = spec.iter().sum();
            assert!((sum - 1.0).abs() < 1e-10, "mask {mask}");
        }
        let full = s.subset_spectrum(0b111).unwrap();
        assert!((full.iter().cloned().fold(0.0, f64::max) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn purification_reduces_back_to_the_density() {
        let mut rng = Rng::new(17);
        let parties = vec![Party::new("A", 2), Party::new("B", 2), Party::new("C", 3)];
        let s = random_state(&parties, &mut rng).unwrap();
        let rho = s.reduced_density(0b011).unwrap(); // A, B
        let puri = rho.canonical_purification().unwrap();
        assert_eq!(puri.labels(), vec!["A", "A*", "B", "B*"]);
        // Tracing the starred partners (bits 1 and 3) returns rho.
        let back = puri.reduced_density(0b0101).unwrap();
        let diff = back.matrix().sub(rho.matrix()).unwrap().max_abs_entry();
        assert!(diff < 1e-9);
    }

    #[test]
    fn purification_of_maximally_mixed_qubit_is_bell_diagonal() {
        let mat = CMatrix::from_data(
            2,
            2,
            vec![c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        let rho = DensityMatrix::new(vec![Party::new("A", 2)], mat).unwrap();
        let puri = rho.canonical_purification().unwrap();
        let w = 1.0 / 2f64.sqrt();
        assert!((puri.amplitude(&[0, 0]).re - w).abs() < 1e-12);
        assert!((puri.amplitude(&[1, 1]).re - w).abs() < 1e-12);
        assert!(puri.amplitude(&[0, 1]).norm() < 1e-12);
    }

    #[test]
    fn purification_of_pure_density_is_a_product_with_its_partner() {
        // rho = |+><+| purifies to |+>|+*> with no cross correlation.
        let w = 1.0 / 2f64.sqrt();
        let mat = CMatrix::from_data(
            2,
            2,
            vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        let rho = DensityMatrix::new(vec![Party::new("A", 2)], mat).unwrap();
        let puri = rho.canonical_purification().unwrap();
        for j in 0..2 {
            for k in 0..2 {
                assert!((puri.amplitude(&[j, k]).re - w * w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kraus_requires_completeness() {
        let mut half = CMatrix::identity(2);
        half[(0, 0)] = c(0.5, 0.0);
        let s = ghz_state(2, 2).unwrap();
        assert!(apply_kraus(&s, 0, &[half]).is_err());
    }

    #[test]
    fn random_separable_has_product_structure_across_the_cut() {
        let mut rng = Rng::new(31);
        let parties = uniform_parties(3, 2).unwrap();
        let ps = PartySet::with_default_labels(3).unwrap();
        let kappa = Partition::parse("AC|B", &ps).unwrap();
        let s = random_separable(&parties, &kappa, &mut rng).unwrap();
        assert_eq!(s.labels(), vec!["A", "B", "C"]);
        // Across the cut {B} vs {A, C} there is a single Schmidt coefficient.
        let spec = s.subset_spectrum(0b010).unwrap();
        let top = spec.iter().cloned().fold(0.0, f64::max);
        assert!((top - 1.0).abs() < 1e-10);
    }

    #[test]
    fn random_layerwise_multiplies_dimensions() {
        let mut rng = Rng::new(12);
        let ps = PartySet::with_default_labels(3).unwrap();
        let layers = vec![
            LayerSpec {
                kappa: Partition::parse("AB|C", &ps).unwrap(),
                dims: vec![2, 2, 2],
            },
            LayerSpec {
                kappa: Partition::parse("A|BC", &ps).unwrap(),
                dims: vec![2, 2, 2],
            },
        ];
        let s = random_layerwise(&["A", "B", "C"], &layers, &mut rng).unwrap();
        assert_eq!(s.dims(), vec![4, 4, 4]);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_unitaries_preserve_subset_spectra() {
        let mut rng = Rng::new(8);
        let parties = vec![Party::new("A", 2), Party::new("B", 3), Party::new("C", 2)];
        let s = random_state(&parties, &mut rng).unwrap();
        let mut t = s.clone();
        for (a, p) in parties.iter().enumerate() {
            let u = random_unitary(p.dim, &mut rng);
            t = t.apply_party_matrix(a, &u).unwrap();
        }
        for mask in 1u32..7 {
            let sa = s.subset_spectrum(mask).unwrap();
            let sb = t.subset_spectrum(mask).unwrap();
            for (x, y) in sa.iter().zip(&sb) {
                assert!((x - y).abs() < 1e-10, "mask {mask}");
            }
        }
    }

    #[test]
    fn embed_preserves_amplitudes_and_spectra() {
        let s = ghz_state(3, 2).unwrap();
        let e = s.embed(&[3, 3, 3]).unwrap();
        assert_eq!(e.dims(), vec![3, 3, 3]);
        let w = 1.0 / 2f64.sqrt();
        assert!((e.amplitude(&[1, 1, 1]).re - w).abs() < 1e-14);
        let sa = s.subset_spectrum(0b001).unwrap();
        let se = e.subset_spectrum(0b001).unwrap();
        let nz = |v: &[f64]| v.iter().filter(|x| **x > 1e-9).count();
        assert_eq!(nz(&sa), nz(&se));
    }

    #[test]
    fn catalog_names_resolve() {
        for name in CATALOG_NAMES {
            let (q, d) = match name {
                "bell" => (2, 2),
                n if n.starts_with("appendixA") => (3, 4),
                _ => (3, 2),
            };
            let s = catalog_state(name, q, d).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12, "{name}");
        }
        assert!(catalog_state("nope", 2, 2).is_err());
        assert!(catalog_state("appendixA-psi", 2, 2).is_err());
    }

    #[test]
    fn w_state_has_single_excitation_support() {
        let s = w_state(3).unwrap();
        let w = 1.0 / 3f64.sqrt();
        assert!((s.amplitude(&[1, 0, 0]).re - w).abs() < 1e-14);
        assert!((s.amplitude(&[0, 1, 0]).re - w).abs() < 1e-14);
        assert!((s.amplitude(&[0, 0, 1]).re - w).abs() < 1e-14);
        assert!(s.amplitude(&[1, 1, 0]).norm() < 1e-15);
    }
}
