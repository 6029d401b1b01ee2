//! Brute-force ground truth for small instances.
//!
//! Nothing here goes through the elimination routines used by the main code
//! paths: states are built as dense complex vectors, group dimensions come
//! from counting enumerated elements, and the symplectic group and the
//! stabilizer states are listed exhaustively.

use std::collections::{BTreeSet, HashSet};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordElement;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::PauliOperator;
use crate::stabilizer::{Partition, StabilizerGroup};

/// Largest qubit count handled densely.
pub const DENSE_CAP: usize = 12;
/// Largest group dimension enumerated element by element.
pub const ENUMERATION_CAP: usize = 16;

pub mod dense {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn i_pow(e: u8) -> Complex64 {
        [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][(e & 3) as usize]
    }

    fn kron_all(factors: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
        factors
            .iter()
            .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, f| acc.kronecker(f))
    }

    fn identity2() -> DMatrix<Complex64> {
        DMatrix::identity(2, 2)
    }

    fn single_site(n: usize, q: usize, m: DMatrix<Complex64>) -> DMatrix<Complex64> {
        let factors: Vec<_> = (0..n).map(|j| if j == q { m.clone() } else { identity2() }).collect();
        kron_all(&factors)
    }

    /// `i^phase · ⊗_q X^{x_q} Z^{z_q}`, qubit 0 the leftmost factor.
    pub fn pauli_matrix(p: &PauliOperator) -> DMatrix<Complex64> {
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let z = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let factors: Vec<_> = (0..p.num_qubits())
            .map(|q| {
                let mut m = identity2();
                if p.x().get(q) {
                    m = &m * &x;
                }
                if p.z().get(q) {
                    m = &m * &z;
                }
                m
            })
            .collect();
        kron_all(&factors) * i_pow(p.phase())
    }

    pub fn hadamard_matrix(n: usize, q: usize) -> DMatrix<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        single_site(n, q, DMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]))
    }

    pub fn phase_matrix(n: usize, q: usize) -> DMatrix<Complex64> {
        single_site(n, q, DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]))
    }

    pub fn cnot_matrix(n: usize, control: usize, target: usize) -> DMatrix<Complex64> {
        let dim = 1usize << n;
        let cbit = 1usize << (n - 1 - control);
        let tbit = 1usize << (n - 1 - target);
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            let out = if b & cbit != 0 { b ^ tbit } else { b };
            m[(out, b)] = c(1.0, 0.0);
        }
        m
    }

    /// `P|ψ⟩` computed on basis states: `X^x Z^z |b⟩ = (−1)^{z·b} |b ⊕ x⟩`.
    pub fn apply_pauli(p: &PauliOperator, psi: &DVector<Complex64>) -> DVector<Complex64> {
        let n = p.num_qubits();
        let mut xmask = 0usize;
        let mut zmask = 0usize;
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            if p.x().get(q) {
                xmask |= bit;
            }
            if p.z().get(q) {
                zmask |= bit;
            }
        }
        let phase = i_pow(p.phase());
        let mut out = DVector::zeros(psi.len());
        for b in 0..psi.len() {
            let sign = if (zmask & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ xmask] = psi[b] * phase * sign;
        }
        out
    }

    /// Unit vector `|ψ⟩` on `n` qubits.
    #[derive(Debug, Clone)]
    pub struct DenseState {
        pub n: usize,
        pub amplitudes: DVector<Complex64>,
    }

    /// Splits an index space: `keep` qubits (in list order) become the row
    /// index, the rest the column index.
    fn split_offsets(n: usize, keep: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let offsets = |qs: &[usize]| -> Vec<usize> {
            (0..1usize << qs.len())
                .map(|i| {
                    let mut full = 0usize;
                    for (j, &q) in qs.iter().enumerate() {
                        if i >> (qs.len() - 1 - j) & 1 == 1 {
                            full |= 1 << (n - 1 - q);
                        }
                    }
                    full
                })
                .collect()
        };
        (offsets(keep), offsets(&rest))
    }

    /// `Tr_{rest} |ψ⟩⟨ψ|`.
    pub fn reduce_pure(state: &DenseState, keep: &[usize]) -> DMatrix<Complex64> {
        let (rows, cols) = split_offsets(state.n, keep);
        let m = DMatrix::from_fn(rows.len(), cols.len(), |i, j| state.amplitudes[rows[i] | cols[j]]);
        &m * m.adjoint()
    }

    /// `Tr_{rest} ρ` for a density matrix on `n` qubits.
    pub fn partial_trace(rho: &DMatrix<Complex64>, n: usize, keep: &[usize]) -> DMatrix<Complex64> {
        let (rows, cols) = split_offsets(n, keep);
        DMatrix::from_fn(rows.len(), rows.len(), |i, j| {
            cols.iter().map(|&t| rho[(rows[i] | t, rows[j] | t)]).sum()
        })
    }

    /// Eigenvalues of a Hermitian matrix.
    pub fn spectrum(rho: &DMatrix<Complex64>) -> Vec<f64> {
        rho.clone().symmetric_eigenvalues().iter().copied().collect()
    }

    /// `−Σ λ log₂ λ`.
    pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> f64 {
        spectrum(rho)
            .into_iter()
            .filter(|&l| l > 1e-12)
            .map(|l| -l * l.log2())
            .sum()
    }

    /// Number of eigenvalues above `tol`.
    pub fn numerical_rank(rho: &DMatrix<Complex64>, tol: f64) -> usize {
        spectrum(rho).into_iter().filter(|&l| l > tol).count()
    }
}

use dense::DenseState;

fn check_dense_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Capacity {
            what: "qubit count for dense simulation",
            value: n,
            cap,
        });
    }
    Ok(())
}

/// Output of [`state_from_stabilizer`].
#[derive(Debug, Clone)]
pub enum OracleState {
    Pure(DenseState),
    Mixed(DMatrix<Complex64>),
}

/// Dense state of a stabilizer group, within [`DENSE_CAP`].
pub fn state_from_stabilizer(s: &StabilizerGroup) -> Result<OracleState> {
    state_from_stabilizer_capped(s, DENSE_CAP)
}

pub fn state_from_stabilizer_capped(s: &StabilizerGroup, cap: usize) -> Result<OracleState> {
    if s.is_pure() {
        Ok(OracleState::Pure(pure_state_capped(s, cap)?))
    } else {
        Ok(OracleState::Mixed(density_matrix_capped(s, cap)?))
    }
}

/// Pure stabilizer state: a fixed pseudo-random vector pushed through
/// `∏ (I + g)/2` and normalised.
pub fn pure_state(s: &StabilizerGroup) -> Result<DenseState> {
    pure_state_capped(s, DENSE_CAP)
}

fn pure_state_capped(s: &StabilizerGroup, cap: usize) -> Result<DenseState> {
    let n = s.num_qubits();
    check_dense_cap(n, cap)?;
    if !s.is_pure() {
        return Err(Error::Arity("a pure dense state needs dim S = n".into()));
    }
    s.validate().map_err(Error::Invalid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1ab1e);
    let mut psi: DVector<Complex64> = DVector::from_fn(1 << n, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    for g in s.generators() {
        psi = (&psi + dense::apply_pauli(g, &psi)) * Complex64::new(0.5, 0.0);
    }
    let norm = psi.norm();
    if norm < 1e-9 {
        return Err(Error::FormulaMismatch("stabilizer projector annihilated the seed vector".into()));
    }
    Ok(DenseState {
        n,
        amplitudes: psi / Complex64::new(norm, 0.0),
    })
}

/// `ρ = ∏ (I + g)/2 / Tr`.
pub fn density_matrix(s: &StabilizerGroup) -> Result<DMatrix<Complex64>> {
    density_matrix_capped(s, DENSE_CAP)
}

fn density_matrix_capped(s: &StabilizerGroup, cap: usize) -> Result<DMatrix<Complex64>> {
    let n = s.num_qubits();
    check_dense_cap(n, cap)?;
    s.validate().map_err(Error::Invalid)?;
    let dim = 1usize << n;
    let mut m: DMatrix<Complex64> = DMatrix::identity(dim, dim);
    for g in s.generators() {
        for j in 0..dim {
            let col: DVector<Complex64> = m.column(j).into_owned();
            let moved = dense::apply_pauli(g, &col);
            m.set_column(j, &((col + moved) * Complex64::new(0.5, 0.0)));
        }
    }
    let tr = m.trace();
    Ok(m / tr)
}

/// Reduced density matrix on `keep`, from the dense state of `s`.
pub fn reduced_density_matrix(s: &StabilizerGroup, keep: &[usize]) -> Result<DMatrix<Complex64>> {
    check_indices(s.num_qubits(), keep)?;
    Ok(match state_from_stabilizer(s)? {
        OracleState::Pure(state) => dense::reduce_pure(&state, keep),
        OracleState::Mixed(rho) => dense::partial_trace(&rho, s.num_qubits(), keep),
    })
}

fn check_indices(n: usize, qubits: &[usize]) -> Result<()> {
    match qubits.iter().find(|&&q| q >= n) {
        Some(&q) => Err(Error::IndexOutOfRange { index: q, n }),
        None => Ok(()),
    }
}

/// von Neumann entropy (bits) of the reduction of a pure state to `party`.
/// The smaller side is traced out, which gives the same entropy.
pub fn entropy_of_reduction(state: &DenseState, party: &[usize]) -> Result<f64> {
    check_indices(state.n, party)?;
    let complement: Vec<usize> = (0..state.n).filter(|q| !party.contains(q)).collect();
    let keep = if party.len() <= complement.len() { party.to_vec() } else { complement };
    Ok(dense::von_neumann_entropy(&dense::reduce_pure(state, &keep)))
}

/// `log₂` of the numerical rank of `ρ_party`.
pub fn dense_log_rank_of_reduction(s: &StabilizerGroup, party: &[usize]) -> Result<usize> {
    let rho = reduced_density_matrix(s, party)?;
    let rank = dense::numerical_rank(&rho, 1e-9);
    debug_assert!(rank.is_power_of_two());
    Ok(rank.trailing_zeros() as usize)
}

/// All `2^d` signed products of the generators, multiplied in index order.
/// No validity check: dependent generators give repeated elements.
pub fn enumerate_products(gens: &[PauliOperator]) -> Vec<PauliOperator> {
    let n = gens.first().map_or(0, PauliOperator::num_qubits);
    (0u64..1 << gens.len())
        .map(|mask| {
            let mut p = PauliOperator::identity(n);
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    p = p.multiply(g).expect("same size");
                }
            }
            p
        })
        .collect()
}

/// Every element of `S`.
pub fn enumerate_group(s: &StabilizerGroup) -> Result<Vec<PauliOperator>> {
    enumerate_group_capped(s, ENUMERATION_CAP)
}

pub fn enumerate_group_capped(s: &StabilizerGroup, cap: usize) -> Result<Vec<PauliOperator>> {
    if s.dim() > cap {
        return Err(Error::Capacity {
            what: "group dimension for enumeration",
            value: s.dim(),
            cap,
        });
    }
    if s.generators().is_empty() {
        return Ok(vec![PauliOperator::identity(s.num_qubits())]);
    }
    Ok(enumerate_products(s.generators()))
}

fn exact_log2(count: usize) -> Result<usize> {
    if !count.is_power_of_two() {
        return Err(Error::FormulaMismatch(format!("{count} elements is not a power of two")));
    }
    Ok(count.trailing_zeros() as usize)
}

/// `dim S_α̂` by counting elements that act trivially on `party`.
pub fn brute_force_trivial_dim(s: &StabilizerGroup, party: &[usize]) -> Result<usize> {
    let elements = enumerate_group(s)?;
    let mut count = 0;
    for g in &elements {
        if g.is_identity_on(party)? {
            count += 1;
        }
    }
    exact_log2(count)
}

/// Closure under multiplication, ignoring signs.
fn span_size(pool: impl IntoIterator<Item = BitVector>, len: usize) -> usize {
    let mut set: HashSet<BitVector> = HashSet::from([BitVector::zeros(len)]);
    for v in pool {
        if set.contains(&v) {
            continue;
        }
        let shifted: Vec<BitVector> = set.iter().map(|s| s.xor(&v)).collect();
        set.extend(shifted);
    }
    set.len()
}

/// `dim Σ_α S_α̂` by closing the union of all enumerated `S_α̂` under
/// products.
pub fn brute_force_local_dim(s: &StabilizerGroup, partition: &Partition) -> Result<usize> {
    let elements = enumerate_group(s)?;
    let mut pool = Vec::new();
    for g in &elements {
        for p in partition.parties() {
            if g.is_identity_on(&p.qubits)? {
                pool.push(g.symplectic());
                break;
            }
        }
    }
    exact_log2(span_size(pool, 2 * s.num_qubits()))
}

/// `Δ = dim S − dim S_loc` from enumeration alone.
pub fn brute_force_ghz_count(s: &StabilizerGroup, partition: &Partition) -> Result<usize> {
    let elements = enumerate_group(s)?;
    let distinct: HashSet<BitVector> = elements.iter().map(PauliOperator::symplectic).collect();
    Ok(exact_log2(distinct.len())? - brute_force_local_dim(s, partition)?)
}

/// Minimum over all generating pairs of `𝒫₁` of the number of generators on
/// which the two elements disagree, phases ignored. Single-qubit only.
pub fn brute_force_clifford_distance(c1: &CliffordElement, c2: &CliffordElement) -> Result<usize> {
    if c1.num_qubits() != 1 || c2.num_qubits() != 1 {
        return Err(Error::Capacity {
            what: "qubit count for brute-force distance",
            value: c1.num_qubits().max(c2.num_qubits()),
            cap: 1,
        });
    }
    let paulis: Vec<PauliOperator> = ["X", "Y", "Z"].iter().map(|s| s.parse().unwrap()).collect();
    let disagree = |p: &PauliOperator| -> Result<bool> {
        let a = c1.apply(p)?;
        let b = c2.apply(p)?;
        Ok(a.x() != b.x() || a.z() != b.z())
    };
    let mut best = usize::MAX;
    // Any two distinct non-identity Paulis generate 𝒫₁ up to phase.
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let d = usize::from(disagree(&paulis[i])?) + usize::from(disagree(&paulis[j])?);
                best = best.min(d);
            }
        }
    }
    Ok(best)
}

/// Code of a `2n`-bit vector in interleaved `(x_0, z_0, x_1, …)` order.
fn omega_code(a: u64, b: u64, n: usize) -> bool {
    let mut s = 0u32;
    for q in 0..n {
        let (ax, az) = (a >> (2 * q) & 1, a >> (2 * q + 1) & 1);
        let (bx, bz) = (b >> (2 * q) & 1, b >> (2 * q + 1) & 1);
        s += (ax * bz + az * bx) as u32;
    }
    s % 2 == 1
}

/// Every `2n × 2n` binary matrix preserving the interleaved symplectic
/// form, by exhaustive search. `n ≤ 2`.
pub fn enumerate_symplectic(n: usize) -> Result<Vec<BitMatrix>> {
    if n > 2 {
        return Err(Error::Capacity {
            what: "qubit count for symplectic enumeration",
            value: n,
            cap: 2,
        });
    }
    let m = 2 * n;
    let mut out = Vec::new();
    for code in 0u64..1 << (m * m) {
        let cols: Vec<u64> = (0..m).map(|j| code >> (j * m) & ((1 << m) - 1)).collect();
        let ok = (0..m).all(|a| (0..m).all(|b| omega_code(cols[a], cols[b], n) == (a != b && a / 2 == b / 2)));
        if ok {
            let rows = (0..m)
                .map(|r| BitVector::from_bools(&(0..m).map(|j| cols[j] >> r & 1 == 1).collect::<Vec<_>>()))
                .collect();
            out.push(BitMatrix::from_rows(m, rows));
        }
    }
    Ok(out)
}

/// Every pure stabilizer state on `n ≤ 3` qubits: each maximal isotropic
/// subspace, found by exhaustive search, with every sign pattern.
pub fn enumerate_stabilizer_states(n: usize) -> Result<Vec<StabilizerGroup>> {
    if n > 3 {
        return Err(Error::Capacity {
            what: "qubit count for state enumeration",
            value: n,
            cap: 3,
        });
    }
    let nonzero: Vec<u64> = (1u64..1 << (2 * n)).collect();
    // Subspaces keyed by their sorted element list, each with one basis.
    let mut level: Vec<(BTreeSet<u64>, Vec<u64>)> = vec![(BTreeSet::from([0]), Vec::new())];
    for _ in 0..n {
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut next = Vec::new();
        for (elems, basis) in &level {
            for &v in &nonzero {
                if elems.contains(&v) || basis.iter().any(|&b| omega_code(b, v, n)) {
                    continue;
                }
                let grown: BTreeSet<u64> = elems.iter().flat_map(|&e| [e, e ^ v]).collect();
                let key: Vec<u64> = grown.iter().copied().collect();
                if seen.insert(key) {
                    let mut b = basis.clone();
                    b.push(v);
                    next.push((grown, b));
                }
            }
        }
        level = next;
    }
    let to_pauli = |code: u64, negative: bool| {
        let x: Vec<bool> = (0..n).map(|q| code >> (2 * q) & 1 == 1).collect();
        let z: Vec<bool> = (0..n).map(|q| code >> (2 * q + 1) & 1 == 1).collect();
        PauliOperator::hermitian(BitVector::from_bools(&x), BitVector::from_bools(&z), negative)
    };
    let mut out = Vec::new();
    for (_, basis) in &level {
        for signs in 0u32..1 << n {
            let gens = basis
                .iter()
                .enumerate()
                .map(|(i, &b)| to_pauli(b, signs >> i & 1 == 1))
                .collect();
            out.push(StabilizerGroup::from_generators_unchecked(n, gens));
        }
    }
    Ok(out)
}

/// `2^n ∏_{j=1}^{n} (2^j + 1)`.
pub fn stabilizer_state_count(n: u32) -> u128 {
    (1..=n).fold(1u128 << n, |acc, j| acc * ((1u128 << j) + 1))
}

/// `2^{n²} ∏_{j=1}^{n} (4^j − 1)`.
pub fn symplectic_group_order(n: u32) -> u128 {
    (1..=n).fold(1u128 << (n * n), |acc, j| acc * ((1u128 << (2 * j)) - 1))
}

/// Signature of the bipartite formula under test, so a deliberately broken
/// formula can be injected.
pub type EprFormula = fn(&StabilizerGroup, &Partition) -> Result<usize>;

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random instances per sampled check.
    pub samples: usize,
    /// Largest qubit count used in dense checks.
    pub max_qubits: usize,
    pub epr_formula: EprFormula,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0x0c0ffee,
            samples: 200,
            max_qubits: 7,
            epr_formula: crate::entanglement::pure_bipartite_entanglement,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, failures: Vec<String>, checked: usize) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed: failures.is_empty(),
        detail: match failures.first() {
            None => format!("{checked} cases"),
            Some(f) => format!("{} of {checked} failed; first: {f}", failures.len()),
        },
    }
}

fn random_cut<R: Rng>(n: usize, rng: &mut R) -> Partition {
    let na = rng.gen_range(1..n);
    Partition::from_sizes(&[na, n - na]).expect("positive sizes")
}

/// Runs every small-instance cross-check.
pub fn verify_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    use crate::entanglement::{ghz_count, local_log_rank, mixed_bound_details};

    let mut results = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_n = cfg.max_qubits.clamp(2, 8);

    let mut fails = Vec::new();
    for _ in 0..cfg.samples {
        let n = rng.gen_range(1..=3);
        let a = PauliOperator::from_symplectic(&BitVector::random(2 * n, &mut rng), rng.gen());
        let b = PauliOperator::from_symplectic(&BitVector::random(2 * n, &mut rng), rng.gen());
        let prod = dense::pauli_matrix(&a.multiply(&b).unwrap());
        if (prod - dense::pauli_matrix(&a) * dense::pauli_matrix(&b)).norm() > 1e-12 {
            fails.push(format!("{a} * {b}"));
        }
    }
    results.push(outcome("pauli product matches matrices", fails, cfg.samples));

    let mut fails = Vec::new();
    let mut epr_fails = Vec::new();
    for _ in 0..cfg.samples {
        let n = rng.gen_range(2..=max_n);
        let s = StabilizerGroup::sample_uniform(n, 0, &mut rng);
        let state = match pure_state(&s) {
            Ok(st) => st,
            Err(e) => {
                fails.push(format!("{s:?}: {e}"));
                continue;
            }
        };
        for g in s.generators() {
            if (dense::apply_pauli(g, &state.amplitudes) - &state.amplitudes).norm() > 1e-10 {
                fails.push(format!("{s:?} not fixed by {g}"));
            }
        }
        let cut = random_cut(n, &mut rng);
        let entropy = entropy_of_reduction(&state, &cut.party(0).qubits).unwrap();
        match (cfg.epr_formula)(&s, &cut) {
            Ok(e) if (e as f64 - entropy).abs() <= 1e-9 => {}
            Ok(e) => epr_fails.push(format!("{s:?} cut {cut}: formula {e}, entropy {entropy}")),
            Err(err) => epr_fails.push(format!("{s:?} cut {cut}: {err}")),
        }
    }
    results.push(outcome("dense state is stabilized", fails, cfg.samples));
    results.push(outcome("bipartite EPR count equals entropy", epr_fails, cfg.samples));

    let mut fails = Vec::new();
    for _ in 0..cfg.samples {
        let n = rng.gen_range(1..=max_n.min(6));
        let k = rng.gen_range(0..=n);
        let s = StabilizerGroup::sample_uniform(n, k, &mut rng);
        let party: Vec<usize> = (0..n).filter(|_| rng.gen()).collect();
        let fast = local_log_rank(&s, &party).unwrap();
        let slow = dense_log_rank_of_reduction(&s, &party).unwrap();
        if fast != slow {
            fails.push(format!("{s:?} party {party:?}: {fast} vs {slow}"));
        }
        let trivial = s.subgroup_trivial_on_dim(&party).unwrap();
        let counted = brute_force_trivial_dim(&s, &party).unwrap();
        if trivial != counted {
            fails.push(format!("{s:?} trivial on {party:?}: {trivial} vs {counted}"));
        }
        if enumerate_group(&s).unwrap().iter().any(|g| g.is_identity() && g.is_negative()) {
            fails.push(format!("{s:?} contains -I"));
        }
    }
    results.push(outcome("log-ranks and subgroup dimensions", fails, cfg.samples));

    let mut fails = Vec::new();
    for _ in 0..cfg.samples {
        let n = rng.gen_range(3..=6);
        let a = rng.gen_range(1..=n - 2);
        let b = rng.gen_range(1..=n - a - 1);
        let parts = Partition::from_sizes(&[a, b, n - a - b]).unwrap();
        let s = StabilizerGroup::sample_uniform(n, 0, &mut rng);
        let fast = ghz_count(&s, &parts).unwrap();
        let slow = brute_force_ghz_count(&s, &parts).unwrap();
        if fast != slow {
            fails.push(format!("{s:?}: {fast} vs {slow}"));
        }
    }
    results.push(outcome("GHZ count equals enumeration", fails, cfg.samples));

    let mut fails = Vec::new();
    for _ in 0..cfg.samples / 2 {
        let n = rng.gen_range(2..=4);
        let k = rng.gen_range(0..=n);
        let s = StabilizerGroup::sample_uniform(n, k, &mut rng);
        let cut = random_cut(n, &mut rng);
        let d = mixed_bound_details(&s, &cut).unwrap();
        if let Some(exact) = d.full_rank_exact {
            if d.raw_halves != 2 * exact as i64 {
                fails.push(format!("{s:?}: raw/2 {} vs exact {exact}", d.raw_halves));
            }
        }
        let (p, _) = s.purify().unwrap();
        let system: Vec<usize> = (0..n).collect();
        let diff = reduced_density_matrix(&p, &system).unwrap() - density_matrix(&s).unwrap();
        if diff.norm() > 1e-10 {
            fails.push(format!("{s:?}: purification reduces to a different state"));
        }
    }
    results.push(outcome("purification and mixed bound", fails, cfg.samples / 2));

    let mut fails = Vec::new();
    let sp1: Vec<CliffordElement> = enumerate_symplectic(1)
        .unwrap()
        .iter()
        .map(clifford_from_matrix)
        .collect();
    for a in &sp1 {
        for b in &sp1 {
            let closed = a.distance(b).unwrap();
            let brute = brute_force_clifford_distance(a, b).unwrap();
            if closed != brute {
                fails.push(format!("{a:?} vs {b:?}: {closed} vs {brute}"));
            }
        }
    }
    results.push(outcome("single-qubit distance equals brute force", fails, sp1.len() * sp1.len()));

    let mut fails = Vec::new();
    for n in 1..=2u32 {
        let states = enumerate_stabilizer_states(n as usize).unwrap().len() as u128;
        if states != stabilizer_state_count(n) {
            fails.push(format!("{states} stabilizer states on {n} qubits"));
        }
        let sp = enumerate_symplectic(n as usize).unwrap().len() as u128;
        if sp != symplectic_group_order(n) {
            fails.push(format!("|Sp({}, 2)| = {sp}", 2 * n));
        }
    }
    results.push(outcome("exhaustive census counts", fails, 4));
    results
}

/// Unsigned Clifford element with the given interleaved matrix.
pub fn clifford_from_matrix(m: &BitMatrix) -> CliffordElement {
    let n = m.ncols() / 2;
    let images = (0..2 * n)
        .map(|j| {
            let x: Vec<bool> = (0..n).map(|q| m.get(2 * q, j)).collect();
            let z: Vec<bool> = (0..n).map(|q| m.get(2 * q + 1, j)).collect();
            PauliOperator::hermitian(BitVector::from_bools(&x), BitVector::from_bools(&z), false)
        })
        .collect();
    CliffordElement::from_images(images).expect("symplectic input")
}
