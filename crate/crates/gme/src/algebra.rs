//! Formal rational linear combinations of partitions, with the meet operation
//! extended bilinearly.
//!
//! A [`PartitionVector`] encodes the coefficient list of a signal ansatz. The
//! distinguished vectors are the Möbius vectors `M_rho = sum_{pi <= rho}
//! mu(pi, rho) * pi`; meet-extending `M_rho` by any `kappa` yields `M_rho`
//! itself when `rho <= kappa` and the zero vector otherwise, which makes
//! `{M_rho}` the natural basis for solving meet-vanishing constraint systems.
//! [`solve_meet_vanishing`] returns that closed-form basis;
//! [`kernel_oracle`] recomputes the same solution space by brute-force exact
//! elimination so the two routes can be compared in tests.

use crate::error::{Error, Result};
use crate::exact;
use crate::partition::{downset, enumerate_partitions, mobius, Partition, PartySet};
use crate::rational::{rat_to_string, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A formal linear combination of partitions of a fixed `q`-party set with
/// exact rational coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionVector {
    q: usize,
    terms: BTreeMap<Partition, Rat>,
}

impl PartitionVector {
    /// The zero vector on `q` parties.
    pub fn zero(q: usize) -> Self {
        PartitionVector {
            q,
            terms: BTreeMap::new(),
        }
    }

    /// A single partition with coefficient 1.
    pub fn basis(pi: Partition) -> Self {
        let mut v = PartitionVector::zero(pi.q());
        v.add_term(Rat::one(), pi);
        v
    }

    /// Build from explicit terms; coefficients of repeated partitions add.
    pub fn from_terms(q: usize, terms: impl IntoIterator<Item = (Rat, Partition)>) -> Result<Self> {
        let mut v = PartitionVector::zero(q);
        for (c, p) in terms {
            if p.q() != q {
                return Err(Error::DimensionMismatch(
                    "partition term on the wrong party set".into(),
                ));
            }
            v.add_term(c, p);
        }
        Ok(v)
    }

    /// Number of parties.
    pub fn q(&self) -> usize {
        self.q
    }

    /// True when no term is stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a partition (zero when absent).
    pub fn coeff(&self, pi: &Partition) -> Rat {
        self.terms.get(pi).copied().unwrap_or_else(Rat::zero)
    }

    /// Iterate over stored terms.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Add `c * pi` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, c: Rat, pi: Partition) {
        debug_assert_eq!(pi.q(), self.q);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(pi);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Sum of two vectors.
    pub fn add(&self, other: &PartitionVector) -> PartitionVector {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*c, p.clone());
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Rat) -> PartitionVector {
        if c.is_zero() {
            return PartitionVector::zero(self.q);
        }
        PartitionVector {
            q: self.q,
            terms: self.terms.iter().map(|(p, x)| (p.clone(), *x * c)).collect(),
        }
    }

    /// Terms sorted finest first (most blocks first), ties broken by
    /// enumeration order — the order used for human-readable rendering.
    pub fn terms_finest_first(&self) -> Vec<(Rat, Partition)> {
        let mut v: Vec<(Rat, Partition)> = self.terms.iter().map(|(p, c)| (*c, p.clone())).collect();
        v.sort_by(|a, b| {
            b.1.num_blocks()
                .cmp(&a.1.num_blocks())
                .then_with(|| a.1.rgs().cmp(&b.1.rgs()))
        });
        v
    }

    /// Render with explicit coefficients, e.g.
    /// `2*A|B|C - 1*AB|C - 1*AC|B - 1*A|BC + 1*ABC`.
    pub fn format(&self, ps: &PartySet) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (c, p)) in self.terms_finest_first().into_iter().enumerate() {
            let mag = rat_to_string(&c.abs());
            if i == 0 {
                if c < Rat::zero() {
                    out.push('-');
                }
            } else if c < Rat::zero() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&mag);
            out.push('*');
            out.push_str(&p.format(ps));
        }
        out
    }
}

impl fmt::Display for PartitionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match PartySet::with_default_labels(self.q) {
            Ok(ps) => write!(f, "{}", self.format(&ps)),
            Err(_) => write!(f, "<partition vector on {} parties>", self.q),
        }
    }
}

/// A Möbius vector `M_rho`, kept together with its defining partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusVector {
    rho: Partition,
    vector: PartitionVector,
}

impl MobiusVector {
    /// The defining partition.
    pub fn rho(&self) -> &Partition {
        &self.rho
    }

    /// The expanded coefficient vector.
    pub fn vector(&self) -> &PartitionVector {
        &self.vector
    }

    /// Consume into the coefficient vector.
    pub fn into_vector(self) -> PartitionVector {
        self.vector
    }
}

/// Meet-extension `v ∧ kappa`: apply `pi -> pi ∧ kappa` to every term and
/// collect coefficients of coinciding meets.
pub fn meet_extend(v: &PartitionVector, kappa: &Partition) -> Result<PartitionVector> {
    if v.q() != kappa.q() {
        return Err(Error::DimensionMismatch(
            "meet extension across different party sets".into(),
        ));
    }
    let mut out = PartitionVector::zero(v.q());
    for (p, c) in v.terms() {
        out.add_term(*c, p.meet(kappa));
    }
    Ok(out)
}

/// The Möbius vector `M_rho = sum_{pi <= rho} mu(pi, rho) * pi`.
pub fn mobius_vector(rho: &Partition) -> Result<MobiusVector> {
    let mut vector = PartitionVector::zero(rho.q());
    for pi in enumerate_partitions(rho.q())? {
        if pi.leq(rho) {
            let mu = mobius(&pi, rho)?;
            vector.add_term(Rat::from_integer(mu), pi);
        }
    }
    Ok(MobiusVector {
        rho: rho.clone(),
        vector,
    })
}

/// Closed-form basis of `{V : V ∧ kappa = 0 for all kappa in K}`: the Möbius
/// vectors `M_rho` for every `rho` outside the downward closure of `K`,
/// sorted by enumeration order of `rho`.
pub fn solve_meet_vanishing(q: usize, constraints: &[Partition]) -> Result<Vec<MobiusVector>> {
    let closed = downset(q, constraints)?;
    let mut basis = Vec::new();
    for rho in enumerate_partitions(q)? {
        if !closed.contains(&rho) {
            basis.push(mobius_vector(&rho)?);
        }
    }
    Ok(basis)
}

/// Maximum party count accepted by [`kernel_oracle`]; the constraint matrix
/// grows like `B_q^2 * |downset|`.
pub const KERNEL_ORACLE_MAX_PARTIES: usize = 5;

/// Independent solution of the meet-vanishing system by exact elimination.
///
/// Builds the linear map `V -> (V ∧ kappa)_{kappa in downset(K)}` in the
/// partition basis as a stacked 0/1 matrix — one row per (constraint, target
/// partition) pair — and returns an exact rational kernel basis. Intended as
/// a cross-check of [`solve_meet_vanishing`]; it shares no reasoning with the
/// Möbius route.
pub fn kernel_oracle(q: usize, constraints: &[Partition]) -> Result<Vec<PartitionVector>> {
    if q > KERNEL_ORACLE_MAX_PARTIES {
        return Err(Error::InvalidArgument(format!(
            "kernel oracle supports at most {KERNEL_ORACLE_MAX_PARTIES} parties, got {q}"
        )));
    }
    let all = enumerate_partitions(q)?;
    let ncols = all.len();
    let index: BTreeMap<&Partition, usize> = all.iter().zip(0..).collect();
    let closed = downset(q, constraints)?;

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for kappa in &closed {
        // Row block for kappa: coefficient of each target tau in V ∧ kappa.
        let mut block: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
        for (j, pi) in all.iter().enumerate() {
            let tau = pi.meet(kappa);
            let t = index[&tau];
            block
                .entry(t)
                .or_insert_with(|| vec![Rat::zero(); ncols])[j] = Rat::one();
        }
        rows.extend(block.into_values());
    }
    let kernel = exact::kernel_basis(&rows, ncols)?;
    kernel
        .into_iter()
        .map(|coeffs| {
            PartitionVector::from_terms(
                q,
                coeffs
                    .into_iter()
                    .zip(all.iter())
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, p)| (c, p.clone())),
            )
        })
        .collect()
}

/// Do two sets of vectors span the same subspace of the free vector space on
/// the `q`-party partitions? Exact rational comparison.
pub fn spans_equal(a: &[PartitionVector], b: &[PartitionVector], q: usize) -> Result<bool> {
    let all = enumerate_partitions(q)?;
    let index: BTreeMap<&Partition, usize> = all.iter().zip(0..).collect();
    let to_rows = |vs: &[PartitionVector]| -> Vec<Vec<Rat>> {
        vs.iter()
            .map(|v| {
                let mut row = vec![Rat::zero(); all.len()];
                for (p, c) in v.terms() {
                    row[index[p]] = *c;
                }
                row
            })
            .collect()
    };
    exact::spans_equal(&to_rows(a), &to_rows(b), all.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::one_vs_rest_cuts;

    fn ps(q: usize) -> PartySet {
        PartySet::with_default_labels(q).unwrap()
    }

    fn p(text: &str, q: usize) -> Partition {
        Partition::parse(text, &ps(q)).unwrap()
    }

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn mobius_vector_of_finest_is_single_term() {
        let m = mobius_vector(&Partition::finest(3)).unwrap();
        assert_eq!(m.vector().num_terms(), 1);
        assert_eq!(m.vector().coeff(&Partition::finest(3)), r(1));
    }

    #[test]
    fn mobius_vector_q3_coarsest() {
        let m = mobius_vector(&Partition::coarsest(3)).unwrap();
        let v = m.vector();
        assert_eq!(v.coeff(&p("ABC", 3)), r(1));
        assert_eq!(v.coeff(&p("AB|C", 3)), r(-1));
        assert_eq!(v.coeff(&p("AC|B", 3)), r(-1));
        assert_eq!(v.coeff(&p("A|BC", 3)), r(-1));
        assert_eq!(v.coeff(&p("A|B|C", 3)), r(2));
        assert_eq!(v.num_terms(), 5);
    }

    #[test]
    fn mobius_vector_q4_pair_partition() {
        let m = mobius_vector(&p("AB|CD", 4)).unwrap();
        let v = m.vector();
        assert_eq!(v.num_terms(), 4);
        assert_eq!(v.coeff(&p("AB|CD", 4)), r(1));
        assert_eq!(v.coeff(&p("A|B|CD", 4)), r(-1));
        assert_eq!(v.coeff(&p("AB|C|D", 4)), r(-1));
        assert_eq!(v.coeff(&p("A|B|C|D", 4)), r(1));
    }

    #[test]
    fn display_matches_documented_form() {
        let m = mobius_vector(&Partition::coarsest(3)).unwrap();
        assert_eq!(
            m.vector().to_string(),
            "2*A|B|C - 1*AB|C - 1*AC|B - 1*A|BC + 1*ABC"
        );
    }

    #[test]
    fn unit_coefficient_on_defining_partition() {
        for rho in enumerate_partitions(4).unwrap() {
            let m = mobius_vector(&rho).unwrap();
            assert_eq!(m.vector().coeff(&rho), r(1));
            for (pi, _) in m.vector().terms() {
                assert!(pi.leq(&rho));
            }
        }
    }

    #[test]
    fn selection_identity_exhaustive_q3() {
        // M_rho ∧ kappa = M_rho when rho <= kappa, and 0 otherwise.
        let all = enumerate_partitions(3).unwrap();
        for rho in &all {
            let m = mobius_vector(rho).unwrap();
            for kappa in &all {
                let extended = meet_extend(m.vector(), kappa).unwrap();
                if rho.leq(kappa) {
                    assert_eq!(&extended, m.vector(), "rho={rho} kappa={kappa}");
                } else {
                    assert!(extended.is_zero(), "rho={rho} kappa={kappa}");
                }
            }
        }
    }

    #[test]
    fn meet_extend_is_linear_and_absorbing() {
        let fine = PartitionVector::basis(Partition::finest(4));
        let kappa = p("AB|CD", 4);
        assert_eq!(meet_extend(&fine, &kappa).unwrap(), fine);
        let pi = p("AC|BD", 4);
        let diff = PartitionVector::basis(pi.clone()).add(&PartitionVector::basis(pi).scale(r(-1)));
        assert!(diff.is_zero());
        assert!(meet_extend(&diff, &kappa).unwrap().is_zero());
    }

    #[test]
    fn solve_with_no_constraints_returns_all_vectors() {
        let basis = solve_meet_vanishing(3, &[]).unwrap();
        assert_eq!(basis.len(), 5);
    }

    #[test]
    fn solve_all_proper_constraints_leaves_only_coarsest() {
        let all = enumerate_partitions(4).unwrap();
        let proper: Vec<Partition> = all.into_iter().filter(|k| !k.is_coarsest()).collect();
        let basis = solve_meet_vanishing(4, &proper).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].rho(), &Partition::coarsest(4));
    }

    #[test]
    fn solve_singleton_cuts_q4_gives_pair_partitions_and_top() {
        let basis = solve_meet_vanishing(4, &one_vs_rest_cuts(4)).unwrap();
        let names: Vec<String> = basis.iter().map(|m| m.rho().format(&ps(4))).collect();
        assert_eq!(names, vec!["ABCD", "AB|CD", "AC|BD", "AD|BC"]);
    }

    #[test]
    fn solve_is_stable_under_downset_closure() {
        let k = vec![p("AB|CD", 4)];
        let closed = downset(4, &k).unwrap();
        let a = solve_meet_vanishing(4, &k).unwrap();
        let b = solve_meet_vanishing(4, &closed).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.rho(), y.rho());
        }
    }

    #[test]
    fn kernel_oracle_agrees_with_closed_form_q3_all_downsets() {
        // Every downset of the 5-element lattice, generated directly.
        let all = enumerate_partitions(3).unwrap();
        let n = all.len();
        for mask in 0u32..(1 << n) {
            let chosen: Vec<Partition> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| all[i].clone())
                .collect();
            // Downsets only — skip sets that are not refinement-closed
            // (the two routes both close over refinements anyway, so
            // restricting keeps the test set small without losing coverage).
            let closed = downset(3, &chosen).unwrap();
            if closed.len() != chosen.len() {
                continue;
            }
            let solved: Vec<PartitionVector> = solve_meet_vanishing(3, &chosen)
                .unwrap()
                .into_iter()
                .map(MobiusVector::into_vector)
                .collect();
            let kernel = kernel_oracle(3, &chosen).unwrap();
            assert_eq!(kernel.len(), solved.len(), "mask {mask:b}");
            assert!(spans_equal(&solved, &kernel, 3).unwrap(), "mask {mask:b}");
        }
    }

    #[test]
    fn kernel_of_full_constraint_set_is_trivial() {
        let all = enumerate_partitions(3).unwrap();
        let kernel = kernel_oracle(3, &all).unwrap();
        assert!(kernel.is_empty());
    }

    #[test]
    fn mobius_vectors_are_linearly_independent_q4() {
        // Unitriangularity: stacking all M_rho gives a full-rank matrix.
        let vectors: Vec<PartitionVector> = enumerate_partitions(4)
            .unwrap()
            .iter()
            .map(|rho| mobius_vector(rho).unwrap().into_vector())
            .collect();
        let basis_vectors: Vec<PartitionVector> = enumerate_partitions(4)
            .unwrap()
            .into_iter()
            .map(PartitionVector::basis)
            .collect();
        assert!(spans_equal(&vectors, &basis_vectors, 4).unwrap());
    }
}
