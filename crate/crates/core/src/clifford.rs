//! Clifford group elements modulo global phase.
//!
//! An element is stored as the signed images of the standard generators in
//! the order `X_0, Z_0, X_1, Z_1, …`. The symplectic matrix uses the same
//! interleaved order for both rows and columns.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::pauli::PauliOperator;
use crate::stabilizer::StabilizerGroup;
use crate::symplectic::Frame;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    n: usize,
    images: Vec<PauliOperator>,
}

/// Standard generator `j` in interleaved order.
fn generator(n: usize, j: usize) -> PauliOperator {
    if j % 2 == 0 {
        PauliOperator::single_x(n, j / 2)
    } else {
        PauliOperator::single_z(n, j / 2)
    }
}

impl CliffordElement {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            images: (0..2 * n).map(|j| generator(n, j)).collect(),
        }
    }

    /// Builds from the images of `X_0, Z_0, X_1, …`, checking that they are
    /// Hermitian and satisfy the canonical commutation relations.
    pub fn from_images(images: Vec<PauliOperator>) -> Result<Self> {
        if images.len() % 2 != 0 {
            return Err(Error::InvalidClifford(format!(
                "expected an even number of images, found {}",
                images.len()
            )));
        }
        let n = images.len() / 2;
        for (j, p) in images.iter().enumerate() {
            if p.num_qubits() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: p.num_qubits(),
                });
            }
            if !p.is_hermitian() {
                return Err(Error::InvalidClifford(format!("image {j} is not Hermitian")));
            }
        }
        let c = Self { n, images };
        if let Some((a, b)) = c.symplectic_violation() {
            return Err(Error::InvalidClifford(format!(
                "images {a} and {b} have the wrong commutation relation"
            )));
        }
        Ok(c)
    }

    fn symplectic_violation(&self) -> Option<(usize, usize)> {
        for a in 0..2 * self.n {
            for b in a + 1..2 * self.n {
                let paired = a / 2 == b / 2;
                if self.images[a].anticommutes(&self.images[b]) != paired {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_symplectic(&self) -> bool {
        self.symplectic_violation().is_none()
    }

    pub fn hadamard(n: usize, q: usize) -> Self {
        let mut c = Self::identity(n);
        c.images.swap(2 * q, 2 * q + 1);
        c
    }

    /// `S = diag(1, i)`: `X ↦ Y`, `Z ↦ Z`.
    pub fn phase(n: usize, q: usize) -> Self {
        let mut c = Self::identity(n);
        let y = PauliOperator::single_x(n, q).multiply(&PauliOperator::single_z(n, q));
        c.images[2 * q] = y.expect("same size").with_sign(false);
        c
    }

    /// `X_c ↦ X_c X_t`, `Z_t ↦ Z_c Z_t`.
    pub fn cnot(n: usize, control: usize, target: usize) -> Self {
        assert_ne!(control, target);
        let mut c = Self::identity(n);
        let mut xc = PauliOperator::single_x(n, control);
        xc.mul_assign(&PauliOperator::single_x(n, target));
        let mut zt = PauliOperator::single_z(n, control);
        zt.mul_assign(&PauliOperator::single_z(n, target));
        c.images[2 * control] = xc;
        c.images[2 * target + 1] = zt;
        c
    }

    /// Conjugation by `(I + i h)/√2` for Hermitian `h`: fixes Paulis that
    /// commute with `h` and sends the others to `i·g·h`. Its matrix differs
    /// from the identity by a rank-one term.
    pub fn transvection(h: &PauliOperator) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(Error::InvalidClifford("transvection by a non-Hermitian Pauli".into()));
        }
        let n = h.num_qubits();
        let mut c = Self::identity(n);
        for img in c.images.iter_mut() {
            if img.anticommutes(h) {
                let mut g = img.with_phase((img.phase() + 1) & 3);
                g.mul_assign(h);
                *img = g;
            }
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Images of `X_0, Z_0, X_1, Z_1, …`.
    pub fn images(&self) -> &[PauliOperator] {
        &self.images
    }

    pub fn image_x(&self, q: usize) -> &PauliOperator {
        &self.images[2 * q]
    }

    pub fn image_z(&self, q: usize) -> &PauliOperator {
        &self.images[2 * q + 1]
    }

    /// Sign bit of each generator image.
    pub fn signs(&self) -> BitVector {
        BitVector::from_bools(&self.images.iter().map(PauliOperator::is_negative).collect::<Vec<_>>())
    }

    /// `2n × 2n` matrix, column `j` the image of generator `j`; interleaved
    /// `(x_0, z_0, x_1, z_1, …)` coordinates.
    pub fn matrix(&self) -> BitMatrix {
        let cols: Vec<BitVector> = self
            .images
            .iter()
            .map(|p| {
                let mut v = BitVector::zeros(2 * self.n);
                for q in 0..self.n {
                    v.set(2 * q, p.x().get(q));
                    v.set(2 * q + 1, p.z().get(q));
                }
                v
            })
            .collect();
        BitMatrix::from_rows(2 * self.n, cols).transpose()
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }

    /// `c P c†`.
    pub fn apply(&self, p: &PauliOperator) -> Result<PauliOperator> {
        self.check_size(p.num_qubits())?;
        let mut out = PauliOperator::identity(self.n).with_phase(p.phase());
        for q in p.x().iter_ones() {
            out.mul_assign(&self.images[2 * q]);
        }
        for q in p.z().iter_ones() {
            out.mul_assign(&self.images[2 * q + 1]);
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.check_size(other.n)?;
        let images = other
            .images
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n: self.n, images })
    }

    pub fn inverse(&self) -> CliffordElement {
        let n = self.n;
        let images = (0..2 * n)
            .map(|j| {
                let target = generator(n, j);
                // Coordinates of the preimage: the coefficient of generator i
                // is ω(target, c(partner of i)).
                let mut x = BitVector::zeros(n);
                let mut z = BitVector::zeros(n);
                for q in 0..n {
                    x.set(q, target.anticommutes(&self.images[2 * q + 1]));
                    z.set(q, target.anticommutes(&self.images[2 * q]));
                }
                let pre = PauliOperator::hermitian(x, z, false);
                let img = self.apply(&pre).expect("same size");
                debug_assert_eq!(img.x(), target.x());
                debug_assert_eq!(img.z(), target.z());
                if img.is_negative() {
                    pre.negated()
                } else {
                    pre
                }
            })
            .collect();
        Self { n, images }
    }

    /// Exactly uniform over the symplectic group, with independent uniform
    /// signs.
    pub fn sample_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut frame = Frame::standard(n);
        let mut images = Vec::with_capacity(2 * n);
        for _ in 0..n {
            let (v, w) = frame.draw(rng, true);
            images.push(v.with_sign(rng.gen::<bool>()));
            images.push(w.expect("partner requested").with_sign(rng.gen::<bool>()));
        }
        Self { n, images }
    }

    /// `rank(ĉ₁ + ĉ₂)`, signs ignored.
    pub fn distance(&self, other: &CliffordElement) -> Result<usize> {
        self.check_size(other.n)?;
        let rows = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.symplectic().xor(&b.symplectic()))
            .collect();
        Ok(BitMatrix::from_rows(2 * self.n, rows).rank())
    }

    /// Equal up to the signs of the images.
    pub fn same_matrix(&self, other: &CliffordElement) -> bool {
        self.n == other.n
            && self
                .images
                .iter()
                .zip(&other.images)
                .all(|(a, b)| a.x() == b.x() && a.z() == b.z())
    }

    /// Stabilizer group of `c|0…0⟩`, generated by the images of the `Z_q`.
    pub fn stabilizer_of_zero_state(&self) -> StabilizerGroup {
        StabilizerGroup::from_generators_unchecked(
            self.n,
            (0..self.n).map(|q| self.images[2 * q + 1].clone()).collect(),
        )
    }

    /// Text form: one image per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.images {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the text form; blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<CliffordElement> {
        let mut images = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let p = PauliOperator::parse_at(line, i + 1)?;
            if let Some(first) = images.first().map(PauliOperator::num_qubits) {
                if p.num_qubits() != first {
                    return Err(Error::parse(
                        i + 1,
                        1,
                        format!("expected {first} qubits, found {}", p.num_qubits()),
                    ));
                }
            }
            images.push(p);
        }
        if images.is_empty() {
            return Err(Error::parse(1, 1, "no images"));
        }
        let n = images[0].num_qubits();
        if images.len() != 2 * n {
            return Err(Error::InvalidClifford(format!(
                "{n}-qubit element needs {} images, found {}",
                2 * n,
                images.len()
            )));
        }
        Self::from_images(images)
    }
}

/// Free-function form of [`CliffordElement::distance`].
pub fn distance(c1: &CliffordElement, c2: &CliffordElement) -> Result<usize> {
    c1.distance(c2)
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Clifford[")?;
        for (j, p) in self.images.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            let g = if j % 2 == 0 { 'X' } else { 'Z' };
            write!(f, "{g}{}→{p}", j / 2)?;
        }
        write!(f, "]")
    }
}
