//! Stabilizer groups, qubit partitions and subgroup structure.
//!
//! A group on `n` qubits with `n − k` generators describes the maximally mixed
//! state on its `2^k`-dimensional code space; `k = 0` is a pure state and
//! `k = n` (no generators) the maximally mixed state.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{subspace_sum_dim, BitMatrix, BitVector};
use crate::pauli::PauliOperator;
use crate::symplectic::Frame;

/// Why a generator list does not define a stabilizer group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidityReason {
    SizeMismatch { generator: usize },
    NonHermitian { generator: usize },
    IdentityGenerator { generator: usize },
    Anticommuting { first: usize, second: usize },
    /// A product of generators equals `+I`.
    Dependent,
    /// A product of generators equals `−I`.
    ContainsMinusIdentity,
}

impl fmt::Display for ValidityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SizeMismatch { generator } => {
                write!(f, "generator {generator} has the wrong number of qubits")
            }
            Self::NonHermitian { generator } => {
                write!(f, "generator {generator} is not Hermitian")
            }
            Self::IdentityGenerator { generator } => {
                write!(f, "generator {generator} is proportional to the identity")
            }
            Self::Anticommuting { first, second } => {
                write!(f, "generators {first} and {second} anticommute")
            }
            Self::Dependent => write!(f, "generators are not independent"),
            Self::ContainsMinusIdentity => write!(f, "the generated group contains -I"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOperator>,
}

impl StabilizerGroup {
    /// Validated constructor.
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self> {
        let s = Self { n, generators };
        s.validate().map_err(Error::Invalid)?;
        Ok(s)
    }

    /// Skips validation; for generators known to be valid by construction.
    pub fn from_generators_unchecked(n: usize, generators: Vec<PauliOperator>) -> Self {
        Self { n, generators }
    }

    /// The maximally mixed state: no generators.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            n,
            generators: Vec::new(),
        }
    }

    /// `⟨Z_0, …, Z_{n−1}⟩`, i.e. `|0…0⟩`.
    pub fn zero_state(n: usize) -> Self {
        Self {
            n,
            generators: (0..n).map(|q| PauliOperator::single_z(n, q)).collect(),
        }
    }

    /// Parses generators like `["XX", "ZZ"]` and validates.
    pub fn from_strs(gens: &[&str]) -> Result<Self> {
        let generators = gens
            .iter()
            .enumerate()
            .map(|(i, s)| PauliOperator::parse_at(s, i + 1))
            .collect::<Result<Vec<_>>>()?;
        let n = generators.first().map_or(0, PauliOperator::num_qubits);
        Self::new(n, generators)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// `dim S`, the number of independent generators.
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// `k = n − dim S`; the state has rank `2^k`.
    pub fn log_rank(&self) -> usize {
        self.n - self.dim()
    }

    pub fn is_pure(&self) -> bool {
        self.dim() == self.n
    }

    /// Generators as rows of `(x|z)` vectors.
    pub fn symplectic_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(
            2 * self.n,
            self.generators.iter().map(PauliOperator::symplectic).collect(),
        )
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Checks that generators are Hermitian, pairwise commuting, independent
    /// and do not generate `−I`.
    pub fn validate(&self) -> Result<(), ValidityReason> {
        for (i, g) in self.generators.iter().enumerate() {
            if g.num_qubits() != self.n {
                return Err(ValidityReason::SizeMismatch { generator: i });
            }
            if !g.is_hermitian() {
                return Err(ValidityReason::NonHermitian { generator: i });
            }
            if g.is_identity() {
                return Err(if g.is_negative() {
                    ValidityReason::ContainsMinusIdentity
                } else {
                    ValidityReason::IdentityGenerator { generator: i }
                });
            }
        }
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                if self.generators[i].anticommutes(&self.generators[j]) {
                    return Err(ValidityReason::Anticommuting {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        let m = self.symplectic_matrix();
        if m.rank() < self.dim() {
            // A kernel vector of Gᵀ names a product of generators equal to ±I.
            let dependency = m.transpose().kernel_basis();
            for combo in dependency.rows() {
                let mut prod = PauliOperator::identity(self.n);
                for i in combo.iter_ones() {
                    prod.mul_assign(&self.generators[i]);
                }
                debug_assert!(prod.is_identity());
                if prod.phase() == 2 {
                    return Err(ValidityReason::ContainsMinusIdentity);
                }
            }
            return Err(ValidityReason::Dependent);
        }
        Ok(())
    }

    fn check_indices(&self, qubits: &[usize]) -> Result<()> {
        match qubits.iter().find(|&&q| q >= self.n) {
            Some(&q) => Err(Error::IndexOutOfRange { index: q, n: self.n }),
            None => Ok(()),
        }
    }

    /// Basis, in full `(x|z)` coordinates, of `S_α̂ = {g ∈ S : g acts as I on
    /// every qubit of `party`}`. Solved by eliminating the party's columns
    /// first: reduced rows that vanish there span the subgroup.
    pub fn subgroup_trivial_on(&self, party: &[usize]) -> Result<BitMatrix> {
        self.check_indices(party)?;
        let n = self.n;
        let mut in_party = vec![false; n];
        for &q in party {
            in_party[q] = true;
        }
        let mut order: Vec<usize> = Vec::with_capacity(2 * n);
        for q in (0..n).filter(|&q| in_party[q]) {
            order.push(q);
            order.push(n + q);
        }
        let lead = order.len();
        for q in (0..n).filter(|&q| !in_party[q]) {
            order.push(q);
            order.push(n + q);
        }
        let permuted = self.symplectic_matrix().select_columns(&order);
        let (rref, pivots) = permuted.row_reduce();
        let mut basis = BitMatrix::empty(2 * n);
        for (row, &p) in rref.rows().iter().zip(&pivots) {
            if p < lead {
                continue;
            }
            let mut full = BitVector::zeros(2 * n);
            for c in row.iter_ones() {
                full.set(order[c], true);
            }
            basis.push_row(full);
        }
        Ok(basis)
    }

    /// `dim S_α̂` without building a basis: `dim S − rank(G restricted to α)`.
    pub fn subgroup_trivial_on_dim(&self, party: &[usize]) -> Result<usize> {
        self.check_indices(party)?;
        let cols: Vec<usize> = party.iter().flat_map(|&q| [q, self.n + q]).collect();
        Ok(self.dim() - self.symplectic_matrix().select_columns(&cols).rank())
    }

    /// `dim S_loc = dim Σ_α S_α̂`.
    pub fn local_subgroup_dim(&self, partition: &Partition) -> Result<usize> {
        self.check_partition(partition)?;
        let bases = partition
            .parties()
            .iter()
            .map(|p| self.subgroup_trivial_on(&p.qubits))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&BitMatrix> = bases.iter().collect();
        Ok(if refs.is_empty() {
            0
        } else {
            subspace_sum_dim(&refs)
        })
    }

    pub(crate) fn check_partition(&self, partition: &Partition) -> Result<()> {
        if partition.num_qubits() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: partition.num_qubits(),
            });
        }
        Ok(())
    }

    /// Uniformly random group of dimension `n − k` with independent uniform
    /// signs. Each new generator is uniform among the Paulis commuting with,
    /// and independent of, those already drawn.
    pub fn sample_uniform<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        assert!(k <= n, "k = {k} exceeds n = {n}");
        let mut frame = Frame::standard(n);
        let mut unsigned: Vec<PauliOperator> = Vec::with_capacity(n - k);
        for _ in 0..n - k {
            let (mut g, _) = frame.draw(rng, false);
            // Uniform element of the group drawn so far, so that g is uniform
            // over the whole coset rather than over one complement.
            for prev in &unsigned {
                if rng.gen::<bool>() {
                    g.xor_symplectic(prev);
                }
            }
            unsigned.push(g);
        }
        let generators = unsigned
            .into_iter()
            .map(|g| g.with_sign(rng.gen::<bool>()))
            .collect();
        Self { n, generators }
    }

    /// Generators in reduced row-echelon form of the `(x|z)` matrix, pivots
    /// scanned `x_0..x_{n−1}` then `z_0..z_{n−1}`. Row operations multiply
    /// the actual operators so signs stay consistent.
    pub fn canonical_form(&self) -> StabilizerGroup {
        let mut gens = self.generators.clone();
        let mut rank = 0;
        for col in 0..2 * self.n {
            if rank == gens.len() {
                break;
            }
            let bit = |g: &PauliOperator| {
                if col < self.n {
                    g.x().get(col)
                } else {
                    g.z().get(col - self.n)
                }
            };
            let Some(p) = (rank..gens.len()).find(|&r| bit(&gens[r])) else {
                continue;
            };
            gens.swap(rank, p);
            let pivot = gens[rank].clone();
            for (i, g) in gens.iter_mut().enumerate() {
                if i != rank && bit(g) {
                    g.mul_assign(&pivot);
                }
            }
            rank += 1;
        }
        Self {
            n: self.n,
            generators: gens,
        }
    }

    /// Pure stabilizer group on `n + k` qubits whose reduction to the first
    /// `n` qubits is the state of `self`. Returns the group and `k`.
    ///
    /// Logical pairs `(X̄_j, Z̄_j)` of the code are found inside the
    /// commutant; the result is `S ⊗ I_C` extended by `Z̄_j ⊗ Z^C_j` and
    /// `X̄_j ⊗ X^C_j`, ancillas appended in order.
    pub fn purify(&self) -> Result<(StabilizerGroup, usize)> {
        self.validate().map_err(Error::Invalid)?;
        let k = self.log_rank();
        if k == 0 {
            return Ok((self.clone(), 0));
        }
        let n = self.n;
        let (xbar, zbar) = self.logical_pairs();
        debug_assert_eq!(xbar.len(), k);

        let id_c = PauliOperator::identity(k);
        let mut generators: Vec<PauliOperator> =
            self.generators.iter().map(|g| g.tensor(&id_c)).collect();
        for j in 0..k {
            let zc = PauliOperator::single_z(k, j);
            let xc = PauliOperator::single_x(k, j);
            generators.push(zbar[j].tensor(&zc).with_sign(false));
            generators.push(xbar[j].tensor(&xc).with_sign(false));
        }
        Ok((
            StabilizerGroup {
                n: n + k,
                generators,
            },
            k,
        ))
    }

    /// `k` symplectic pairs spanning a complement of `S` in its commutant.
    fn logical_pairs(&self) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
        let n = self.n;
        let canon = self.canonical_form();
        let g = canon.symplectic_matrix();
        // Commutant: v with ω(g, v) = 0, i.e. kernel of G with x/z blocks swapped.
        let swapped = BitMatrix::from_rows(
            2 * n,
            g.rows().iter().map(|r| r.slice(n, n).concat(&r.slice(0, n))).collect(),
        );
        let commutant = swapped.kernel_basis();
        // Keep commutant vectors independent of S, in a deterministic order.
        let mut span = g.clone();
        let mut rank = span.rank();
        let mut complement: Vec<PauliOperator> = Vec::new();
        for v in commutant.rows() {
            span.push_row(v.clone());
            let r = span.rank();
            if r > rank {
                rank = r;
                complement.push(PauliOperator::from_symplectic(v, false));
            } else {
                span = BitMatrix::from_rows(2 * n, span.rows()[..span.nrows() - 1].to_vec());
            }
        }
        // Symplectic Gram–Schmidt; nondegenerate because commutant / S is.
        let mut xs = Vec::new();
        let mut zs = Vec::new();
        while let Some(a) = complement.pop() {
            let Some(bi) = complement.iter().position(|b| a.anticommutes(b)) else {
                unreachable!("degenerate logical space");
            };
            let b = complement.swap_remove(bi);
            for x in complement.iter_mut() {
                let ca = x.anticommutes(&a);
                let cb = x.anticommutes(&b);
                if cb {
                    x.xor_symplectic(&a);
                }
                if ca {
                    x.xor_symplectic(&b);
                }
            }
            xs.push(a.with_sign(false));
            zs.push(b.with_sign(false));
        }
        (xs, zs)
    }

    /// `c S c†`.
    pub fn conjugated_by(&self, c: &crate::clifford::CliffordElement) -> Result<StabilizerGroup> {
        let generators = self
            .generators
            .iter()
            .map(|g| c.apply(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: self.n,
            generators,
        })
    }

    /// Set of unsigned group elements is equal.
    pub fn same_group_as(&self, other: &StabilizerGroup) -> bool {
        if self.n != other.n || self.dim() != other.dim() {
            return false;
        }
        let a = self.symplectic_matrix();
        let b = other.symplectic_matrix();
        if a.vstack(&b).rank() != self.dim() {
            return false;
        }
        // Same span; compare signs through the canonical forms.
        self.canonical_form().generators == other.canonical_form().generators
    }

    /// Text form: `n=<int>` header then one Pauli per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the text form without validating group structure. Blank lines
    /// and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<StabilizerGroup> {
        let mut n: Option<usize> = None;
        let mut generators: Vec<PauliOperator> = Vec::new();
        let mut seen_content = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let trimmed = line.trim();
            if let Some(value) = trimmed.strip_prefix("n=") {
                if seen_content {
                    let col = line.find("n=").unwrap_or(0) + 1;
                    return Err(Error::parse(line_no, col, "header must come first"));
                }
                let col = line.find("n=").unwrap_or(0) + 3;
                n = Some(value.trim().parse().map_err(|_| {
                    Error::parse(line_no, col, format!("invalid qubit count {:?}", value.trim()))
                })?);
                seen_content = true;
                continue;
            }
            seen_content = true;
            let p = PauliOperator::parse_at(line, line_no)?;
            let expected = n.or_else(|| generators.first().map(PauliOperator::num_qubits));
            if let Some(e) = expected {
                if p.num_qubits() != e {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("expected {e} qubits, found {}", p.num_qubits()),
                    ));
                }
            }
            generators.push(p);
        }
        let n = match (n, generators.first()) {
            (Some(n), _) => n,
            (None, Some(g)) => g.num_qubits(),
            (None, None) => return Err(Error::parse(1, 1, "no header and no generators")),
        };
        Ok(StabilizerGroup { n, generators })
    }
}

impl fmt::Debug for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "⟩ on {} qubits", self.n)
    }
}

/// One party: its label and the qubits it holds, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Party {
    pub label: String,
    pub qubits: Vec<usize>,
}

/// Assignment of every qubit to exactly one nonempty party.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    parties: Vec<Party>,
}

fn default_label(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("P{i}")
    }
}

impl Partition {
    /// Consecutive blocks of the given sizes, labelled `A`, `B`, `C`, ….
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut parties = Vec::new();
        let mut next = 0;
        for (i, &s) in sizes.iter().enumerate() {
            if s == 0 {
                return Err(Error::Config(format!("party {} is empty", default_label(i))));
            }
            parties.push(Party {
                label: default_label(i),
                qubits: (next..next + s).collect(),
            });
            next += s;
        }
        Ok(Self { n: next, parties })
    }

    /// From explicit qubit lists; labels default to `A`, `B`, ….
    pub fn from_qubit_sets(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let parties = sets
            .iter()
            .enumerate()
            .map(|(i, q)| Party {
                label: default_label(i),
                qubits: q.clone(),
            })
            .collect();
        Self::from_parties(n, parties)
    }

    pub fn from_parties(n: usize, mut parties: Vec<Party>) -> Result<Self> {
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (i, p) in parties.iter_mut().enumerate() {
            if p.qubits.is_empty() {
                return Err(Error::Config(format!("party {} is empty", p.label)));
            }
            p.qubits.sort_unstable();
            for &q in &p.qubits {
                if q >= n {
                    return Err(Error::IndexOutOfRange { index: q, n });
                }
                if owner[q].replace(i).is_some() {
                    return Err(Error::Config(format!("qubit {q} assigned twice")));
                }
            }
        }
        if let Some(q) = owner.iter().position(Option::is_none) {
            return Err(Error::Config(format!("qubit {q} has no party")));
        }
        Ok(Self { n, parties })
    }

    /// Parses `0-4:A,5-9:B`. Ranges are inclusive; a label may appear in
    /// several items; overlaps and gaps are errors. Parties keep the order of
    /// first appearance. When `n` is given the partition must cover it.
    pub fn parse(s: &str, n: Option<usize>) -> Result<Self> {
        let mut groups: BTreeMap<String, usize> = BTreeMap::new();
        let mut parties: Vec<Party> = Vec::new();
        let mut offset = 0;
        for item in s.split(',') {
            let col = offset + 1;
            offset += item.len() + 1;
            let item = item.trim();
            let (range, label) = item
                .split_once(':')
                .ok_or_else(|| Error::parse(1, col, format!("expected <range>:<label> in {item:?}")))?;
            let label = label.trim();
            if label.is_empty() {
                return Err(Error::parse(1, col, "empty party label"));
            }
            let num = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(1, col, format!("invalid qubit index {t:?}")))
            };
            let (lo, hi) = match range.split_once('-') {
                Some((a, b)) => (num(a)?, num(b)?),
                None => {
                    let q = num(range)?;
                    (q, q)
                }
            };
            if lo > hi {
                return Err(Error::parse(1, col, format!("empty range {lo}-{hi}")));
            }
            let idx = *groups.entry(label.to_string()).or_insert_with(|| {
                parties.push(Party {
                    label: label.to_string(),
                    qubits: Vec::new(),
                });
                parties.len() - 1
            });
            parties[idx].qubits.extend(lo..=hi);
        }
        let max = parties
            .iter()
            .flat_map(|p| p.qubits.iter().copied())
            .max()
            .map_or(0, |m| m + 1);
        let n = n.unwrap_or(max);
        Self::from_parties(n, parties)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn party(&self, i: usize) -> &Party {
        &self.parties[i]
    }

    /// Qubits outside party `i`, ascending.
    pub fn complement(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .parties
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, p)| p.qubits.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Merges parties into groups; `groups[g]` lists party indices.
    pub fn merge(&self, groups: &[Vec<usize>]) -> Result<Partition> {
        let parties = groups
            .iter()
            .map(|g| Party {
                label: g.iter().map(|&i| self.parties[i].label.as_str()).collect::<Vec<_>>().join("+"),
                qubits: g.iter().flat_map(|&i| self.parties[i].qubits.iter().copied()).collect(),
            })
            .collect();
        Self::from_parties(self.n, parties)
    }

    /// Appends a party holding `extra` new qubits at the end.
    pub fn with_appended_party(&self, label: &str, extra: usize) -> Partition {
        let mut parties = self.parties.clone();
        parties.push(Party {
            label: label.to_string(),
            qubits: (self.n..self.n + extra).collect(),
        });
        Partition {
            n: self.n + extra,
            parties,
        }
    }

    /// Relabels qubits: qubit `q` becomes `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Partition> {
        let parties = self
            .parties
            .iter()
            .map(|p| Party {
                label: p.label.clone(),
                qubits: p.qubits.iter().map(|&q| perm[q]).collect(),
            })
            .collect();
        Self::from_parties(self.n, parties)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parties {
            for q in &p.qubits {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "{q}:{}", p.label)?;
            }
        }
        Ok(())
    }
}
