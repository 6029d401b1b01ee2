//! Entanglement counts read off the stabilizer group.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{subspace_sum_dim, BitMatrix};
use crate::stabilizer::{Partition, StabilizerGroup};

fn require_parties(partition: &Partition, op: &str, ok: bool, want: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Arity(format!(
            "{op} needs {want} parties, got {}",
            partition.num_parties()
        )))
    }
}

fn require_pure(s: &StabilizerGroup, op: &str) -> Result<()> {
    if s.is_pure() {
        Ok(())
    } else {
        Err(Error::Arity(format!(
            "{op} needs a pure state, got dim S = {} on {} qubits",
            s.dim(),
            s.num_qubits()
        )))
    }
}

/// EPR pairs extractable from a pure state across a bipartition:
/// `n_A − dim S_B̂`. The symmetric form `½[dim S − dim(S_Â + S_B̂)]` is
/// computed as well and must agree.
pub fn pure_bipartite_entanglement(s: &StabilizerGroup, partition: &Partition) -> Result<usize> {
    s.check_partition(partition)?;
    require_parties(partition, "bipartite entanglement", partition.num_parties() == 2, "2")?;
    require_pure(s, "bipartite entanglement")?;
    let a = &partition.party(0).qubits;
    let b = &partition.party(1).qubits;
    let s_a = s.subgroup_trivial_on(a)?;
    let s_b = s.subgroup_trivial_on(b)?;
    let e = a.len() - s_b.nrows();
    let twice = s.dim() - subspace_sum_dim(&[&s_a, &s_b]);
    if twice != 2 * e {
        return Err(Error::FormulaMismatch(format!(
            "n_A - dim S_B = {e} but dim S - dim(S_A + S_B) = {twice}"
        )));
    }
    Ok(e)
}

/// GHZ states extractable from a pure state shared by `m ≥ 3` parties:
/// `dim S − dim S_loc`.
pub fn ghz_count(s: &StabilizerGroup, partition: &Partition) -> Result<usize> {
    s.check_partition(partition)?;
    require_parties(partition, "GHZ count", partition.num_parties() >= 3, "at least 3")?;
    require_pure(s, "GHZ count")?;
    Ok(s.dim() - s.local_subgroup_dim(partition)?)
}

/// `log₂ Rank ρ_party = |party| − dim(subgroup trivial on the complement)`.
pub fn local_log_rank(s: &StabilizerGroup, party: &[usize]) -> Result<usize> {
    let n = s.num_qubits();
    let mut inside = vec![false; n];
    for &q in party {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
        inside[q] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    let complement: Vec<usize> = (0..n).filter(|&q| !inside[q]).collect();
    Ok(size - s.subgroup_trivial_on_dim(&complement)?)
}

/// All quantities entering the mixed-state EPR bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedBound {
    /// `n − dim S`.
    pub k: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub log_rank_a: usize,
    pub log_rank_b: usize,
    /// `dim(S'_Â + S'_B̂ + S'_Ĉ)` for the purification `S'`.
    pub dim_local: usize,
    pub dim_trivial_on_c: usize,
    pub dim_purified: usize,
    /// Twice the raw bound; the bound itself may be a half-integer.
    pub raw_halves: i64,
    /// `max(0, ⌈raw⌉)`.
    pub clamped: usize,
    /// `½(dim S'_Ĉ + dim S'_loc − dim S')`, exact when both local ranks are
    /// full; `None` otherwise.
    pub full_rank_exact: Option<usize>,
}

impl MixedBound {
    pub fn raw(&self) -> f64 {
        self.raw_halves as f64 / 2.0
    }
}

/// Full breakdown of the mixed-state lower bound
/// `½ dim S'_loc − k + ½[r_A − n_A + r_B − n_B]`.
pub fn mixed_bound_details(s: &StabilizerGroup, partition: &Partition) -> Result<MixedBound> {
    s.check_partition(partition)?;
    require_parties(partition, "mixed EPR bound", partition.num_parties() == 2, "2")?;
    let a = &partition.party(0).qubits;
    let b = &partition.party(1).qubits;
    let (purified, k) = s.purify()?;
    let n = s.num_qubits();
    let c: Vec<usize> = (n..n + k).collect();

    let s_a = purified.subgroup_trivial_on(a)?;
    let s_b = purified.subgroup_trivial_on(b)?;
    let s_c: BitMatrix = purified.subgroup_trivial_on(&c)?;
    let dim_local = subspace_sum_dim(&[&s_a, &s_b, &s_c]);
    let log_rank_a = local_log_rank(s, a)?;
    let log_rank_b = local_log_rank(s, b)?;

    let raw_halves = dim_local as i64 - 2 * k as i64 + log_rank_a as i64 - a.len() as i64
        + log_rank_b as i64
        - b.len() as i64;
    let clamped = if raw_halves <= 0 {
        0
    } else {
        ((raw_halves + 1) / 2) as usize
    };
    let full_rank = log_rank_a == a.len() && log_rank_b == b.len();
    let exact_twice = s_c.nrows() as i64 + dim_local as i64 - purified.dim() as i64;
    let full_rank_exact =
        (full_rank && exact_twice >= 0 && exact_twice % 2 == 0).then_some(exact_twice as usize / 2);
    Ok(MixedBound {
        k,
        n_a: a.len(),
        n_b: b.len(),
        log_rank_a,
        log_rank_b,
        dim_local,
        dim_trivial_on_c: s_c.nrows(),
        dim_purified: purified.dim(),
        raw_halves,
        clamped,
        full_rank_exact,
    })
}

/// Mixed-state EPR lower bound, clamped at 0.
pub fn mixed_epr_lower_bound(s: &StabilizerGroup, partition: &Partition) -> Result<usize> {
    Ok(mixed_bound_details(s, partition)?.clamped)
}

/// Flat summary of everything that applies to the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub epr: Option<usize>,
    pub ghz: Option<usize>,
    pub mixed_lower_bound_raw: Option<f64>,
    pub mixed_lower_bound: Option<usize>,
    pub log_ranks: BTreeMap<String, usize>,
}

/// EPR count for pure bipartite input, GHZ count for pure input with three
/// or more parties, the mixed bound for any bipartite input, and the local
/// log-ranks of every party.
pub fn entanglement_report(s: &StabilizerGroup, partition: &Partition) -> Result<EntanglementReport> {
    s.check_partition(partition)?;
    let bipartite = partition.num_parties() == 2;
    let epr = if bipartite && s.is_pure() {
        Some(pure_bipartite_entanglement(s, partition)?)
    } else {
        None
    };
    let ghz = if partition.num_parties() >= 3 && s.is_pure() {
        Some(ghz_count(s, partition)?)
    } else {
        None
    };
    let mixed = if bipartite {
        Some(mixed_bound_details(s, partition)?)
    } else {
        None
    };
    let log_ranks = partition
        .parties()
        .iter()
        .map(|p| Ok((p.label.clone(), local_log_rank(s, &p.qubits)?)))
        .collect::<Result<_>>()?;
    Ok(EntanglementReport {
        epr,
        ghz,
        mixed_lower_bound_raw: mixed.as_ref().map(MixedBound::raw),
        mixed_lower_bound: mixed.map(|m| m.clamped),
        log_ranks,
    })
}
