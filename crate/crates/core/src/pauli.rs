//! Pauli operators in binary symplectic form.
//!
//! An operator is stored as `i^phase · X^x Z^z`, with `X^x = ⊗_q X_q^{x_q}` and
//! likewise for `Z`. Qubit `q` maps to bit `q` of both `x` and `z`.
//!
//! Text form: an optional sign (`+`, `-`, `i`, `-i`, `+i`) followed by one of
//! `IXYZ` per qubit, qubit 0 first. `Y` is `iXZ`, so `+Y` has phase exponent 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVector,
    z: BitVector,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
            phase: 0,
        }
    }

    /// `i^phase · X^x Z^z`. Panics if `x` and `z` differ in length.
    pub fn from_xz(x: BitVector, z: BitVector, phase: u8) -> Self {
        assert_eq!(x.len(), z.len(), "x and z must have equal length");
        Self {
            x,
            z,
            phase: phase & 3,
        }
    }

    /// Hermitian operator `±X^x Z^z`-with-`Y`s: the phase is fixed so that the
    /// result squares to `+I`, then negated when `negative` is set.
    pub fn hermitian(x: BitVector, z: BitVector, negative: bool) -> Self {
        let ys = (x.and_count(&z) % 4) as u8;
        let phase = ys.wrapping_add(if negative { 2 } else { 0 });
        Self::from_xz(x, z, phase)
    }

    /// `X` on qubit `q`.
    pub fn single_x(n: usize, q: usize) -> Self {
        Self::from_xz(BitVector::unit(n, q), BitVector::zeros(n), 0)
    }

    /// `Z` on qubit `q`.
    pub fn single_z(n: usize, q: usize) -> Self {
        Self::from_xz(BitVector::zeros(n), BitVector::unit(n, q), 0)
    }

    /// Splits a `2n`-bit symplectic vector `(x|z)` into a Hermitian operator.
    pub fn from_symplectic(v: &BitVector, negative: bool) -> Self {
        assert!(v.len() % 2 == 0, "symplectic vectors have even length");
        let n = v.len() / 2;
        Self::hermitian(v.slice(0, n), v.slice(n, n), negative)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x(&self) -> &BitVector {
        &self.x
    }

    #[inline]
    pub fn z(&self) -> &BitVector {
        &self.z
    }

    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Phase-stripped `(x|z)` view of length `2n`.
    pub fn symplectic(&self) -> BitVector {
        self.x.concat(&self.z)
    }

    /// True when `x = z = 0`, whatever the phase.
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of `Y` factors.
    pub fn y_count(&self) -> usize {
        self.x.and_count(&self.z)
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize + 4 - self.y_count() % 4) % 2 == 0
    }

    /// For Hermitian operators, whether the overall sign is `-1`.
    pub fn is_negative(&self) -> bool {
        (self.phase as usize + 4 - self.y_count() % 4) % 4 == 2
    }

    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.phase = (out.phase + 2) & 3;
        out
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        let mut out = self.clone();
        out.phase = phase & 3;
        out
    }

    /// Same `x`, `z` with the Hermitian phase and the given sign.
    pub fn with_sign(&self, negative: bool) -> Self {
        Self::hermitian(self.x.clone(), self.z.clone(), negative)
    }

    /// Weight: number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    fn check_size(&self, other: &PauliOperator) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits(),
                found: other.num_qubits(),
            });
        }
        Ok(())
    }

    fn check_indices(&self, qubits: &[usize]) -> Result<()> {
        let n = self.num_qubits();
        match qubits.iter().find(|&&q| q >= n) {
            Some(&q) => Err(Error::IndexOutOfRange { index: q, n }),
            None => Ok(()),
        }
    }

    /// `ω(P, Q)`: true iff the operators anticommute.
    pub fn symplectic_product(&self, other: &PauliOperator) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.anticommutes(other))
    }

    #[inline]
    pub(crate) fn anticommutes(&self, other: &PauliOperator) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_size(other)?;
        let mut out = self.clone();
        out.mul_assign(other);
        Ok(out)
    }

    /// In-place `self ← self · other`. Sizes must agree.
    #[inline]
    pub(crate) fn mul_assign(&mut self, other: &PauliOperator) {
        // X^a Z^b X^c Z^d = (-1)^{b·c} X^{a+c} Z^{b+d}
        let swap = self.z.dot(&other.x);
        self.phase = (self.phase + other.phase + if swap { 2 } else { 0 }) & 3;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// `x`/`z` addition only, phase untouched.
    #[inline]
    pub(crate) fn xor_symplectic(&mut self, other: &PauliOperator) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Tensor factor on the listed qubits, in list order, with phase 0.
    pub fn restrict(&self, qubits: &[usize]) -> Result<PauliOperator> {
        self.check_indices(qubits)?;
        Ok(Self::from_xz(self.x.select(qubits), self.z.select(qubits), 0))
    }

    /// True iff `x` and `z` vanish on every listed qubit.
    pub fn is_identity_on(&self, qubits: &[usize]) -> Result<bool> {
        self.check_indices(qubits)?;
        Ok(qubits.iter().all(|&q| !self.x.get(q) && !self.z.get(q)))
    }

    /// `self ⊗ other`, with `other` on the trailing qubits.
    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        Self::from_xz(
            self.x.concat(&other.x),
            self.z.concat(&other.z),
            (self.phase + other.phase) & 3,
        )
    }

    /// Letter on qubit `q`.
    pub fn letter(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// Parses the text form. `line` is reported in errors.
    pub fn parse_at(s: &str, line: usize) -> Result<PauliOperator> {
        let trimmed_start = s.len() - s.trim_start().len();
        let body = s.trim();
        let mut rest = body;
        let mut col = trimmed_start + 1;
        let mut extra = 0u8;
        for (prefix, phase) in [("-i", 3u8), ("+i", 1), ("-", 2), ("+", 0), ("i", 1)] {
            if let Some(r) = rest.strip_prefix(prefix) {
                rest = r;
                extra = phase;
                col += prefix.len();
                break;
            }
        }
        if let Some(r) = rest.strip_prefix('−') {
            // U+2212 minus sign, accepted for convenience
            rest = r;
            extra = 2;
            col += '−'.len_utf8();
        }
        if rest.is_empty() {
            return Err(Error::parse(line, col, "empty Pauli string"));
        }
        let n = rest.chars().count();
        let mut x = BitVector::zeros(n);
        let mut z = BitVector::zeros(n);
        for (q, ch) in rest.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => x.set(q, true),
                'Z' => z.set(q, true),
                'Y' => {
                    x.set(q, true);
                    z.set(q, true);
                }
                _ => {
                    return Err(Error::parse(
                        line,
                        col + q,
                        format!("unexpected character {ch:?}; expected one of I, X, Y, Z"),
                    ))
                }
            }
        }
        let ys = (x.and_count(&z) % 4) as u8;
        Ok(Self::from_xz(x, z, ys.wrapping_add(extra)))
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_at(s, 1)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = (self.phase as usize + 4 - self.y_count() % 4) % 4;
        let prefix = ["+", "+i", "-", "-i"][rel];
        write!(f, "{prefix}")?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dense;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn symplectic_product_examples() {
        assert!(p("X").symplectic_product(&p("Z")).unwrap());
        assert!(!p("XYZ").symplectic_product(&p("XYZ")).unwrap());
        assert!(p("XX").symplectic_product(&p("ZI")).unwrap());
        assert!(!p("XX").symplectic_product(&p("ZZ")).unwrap());
        assert!(matches!(
            p("X").symplectic_product(&p("XX")),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn multiply_examples() {
        let q = p("-XYZI");
        assert_eq!(PauliOperator::identity(4).multiply(&q).unwrap(), q);
        // XZ = -iY
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(xz, p("-iY"));
        assert_eq!(xz.to_string(), "-iY");
        for s in ["XYZ", "-YY", "iZ", "Y"] {
            let sq = p(s).multiply(&p(s)).unwrap();
            assert!(sq.is_identity());
            assert!(sq.phase() == 0 || sq.phase() == 2);
        }
        assert!(p("Y").multiply(&p("YY")).is_err());
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(p("XZ").restrict(&[0]).unwrap(), p("X"));
        let q = p("-YXZ");
        let all = q.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(all.x(), q.x());
        assert_eq!(all.z(), q.z());
        assert!(PauliOperator::identity(5).restrict(&[1, 3]).unwrap().is_identity());
        assert!(matches!(
            q.restrict(&[3]),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
    }

    #[test]
    fn is_identity_on_examples() {
        assert!(p("IZZ").is_identity_on(&[0]).unwrap());
        assert!(!p("XXX").is_identity_on(&[0]).unwrap());
        assert!(PauliOperator::identity(3).is_identity_on(&[0, 1, 2]).unwrap());
        assert!(p("IZZ").is_identity_on(&[7]).is_err());
    }

    #[test]
    fn text_roundtrip_and_signs() {
        for s in ["+XYZ", "-YY", "+iZ", "-iX", "+III"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("YY").phase(), 2);
        assert!(p("-YY").is_negative());
        assert!(p("-YY").is_hermitian());
        assert!(!p("iZ").is_hermitian());
        let err = PauliOperator::parse_at("  XQZ", 4).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 4,
                column: 4,
                message: "unexpected character 'Q'; expected one of I, X, Y, Z".into()
            }
        );
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(|(letters, phase)| {
            let x: Vec<bool> = letters.iter().map(|&l| l == 1 || l == 2).collect();
            let z: Vec<bool> = letters.iter().map(|&l| l == 2 || l == 3).collect();
            PauliOperator::from_xz(BitVector::from_bools(&x), BitVector::from_bools(&z), phase)
        })
    }

    proptest! {
        #[test]
        fn omega_bilinear_alternating(
            (a, b, c) in (1usize..9).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
        ) {
            let bc = b.multiply(&c).unwrap();
            prop_assert_eq!(
                a.symplectic_product(&bc).unwrap(),
                a.symplectic_product(&b).unwrap() ^ a.symplectic_product(&c).unwrap()
            );
            prop_assert!(!a.symplectic_product(&a).unwrap());
            prop_assert_eq!(a.symplectic_product(&b).unwrap(), b.symplectic_product(&a).unwrap());
        }

        #[test]
        fn multiply_associative(
            (a, b, c) in (1usize..9).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
        ) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn multiply_matches_dense_matrices(
            (a, b) in (1usize..4).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))
        ) {
            let prod = dense::pauli_matrix(&a.multiply(&b).unwrap());
            let expect = dense::pauli_matrix(&a) * dense::pauli_matrix(&b);
            prop_assert!((prod - expect).norm() < 1e-12);
        }

        #[test]
        fn commutation_matches_dense_matrices(
            (a, b) in (1usize..4).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))
        ) {
            let ma = dense::pauli_matrix(&a);
            let mb = dense::pauli_matrix(&b);
            let commutator = &ma * &mb - &mb * &ma;
            prop_assert_eq!(a.symplectic_product(&b).unwrap(), commutator.norm() > 1e-9);
        }

        #[test]
        fn text_roundtrip(a in (1usize..10).prop_flat_map(arb_pauli)) {
            let back: PauliOperator = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
