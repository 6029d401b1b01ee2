//! Sequential uniform sampling of symplectic pairs.
//!
//! [`Frame`] holds a symplectic basis `(E_l, F_l)` of the part of `GF(2)^{2n}`
//! not yet used, with `ω(E_l, F_m) = δ_{lm}` and all other pairs commuting.
//! Each draw picks uniform coordinates in that basis, so the result is uniform
//! over the remaining subspace whatever basis happens to be stored. The basis
//! is then updated to span the symplectic complement of what was drawn using
//! coordinate bookkeeping only, which keeps a full draw at `O(n² · n/64)`.

use rand::Rng;

use crate::gf2::BitVector;
use crate::pauli::PauliOperator;

pub(crate) struct Frame {
    e: Vec<PauliOperator>,
    f: Vec<PauliOperator>,
}

impl Frame {
    /// Standard basis `(X_q, Z_q)`.
    pub(crate) fn standard(n: usize) -> Self {
        Self {
            e: (0..n).map(|q| PauliOperator::single_x(n, q)).collect(),
            f: (0..n).map(|q| PauliOperator::single_z(n, q)).collect(),
        }
    }

    pub(crate) fn pairs(&self) -> usize {
        self.e.len()
    }

    fn combine(&self, ce: &BitVector, cf: &BitVector, n: usize) -> PauliOperator {
        let mut out = PauliOperator::identity(n);
        for l in ce.iter_ones() {
            out.xor_symplectic(&self.e[l]);
        }
        for l in cf.iter_ones() {
            out.xor_symplectic(&self.f[l]);
        }
        out
    }

    /// Draws `v` uniformly among the nonzero vectors of the remaining space
    /// and, when `with_partner` is set, `w` uniformly among those with
    /// `ω(v, w) = 1`. Afterwards the frame spans the complement of `{v, u}`
    /// (or of `{v, w}` when a partner was drawn), one pair smaller.
    ///
    /// Returned operators carry phase 0; callers assign signs.
    pub(crate) fn draw<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        with_partner: bool,
    ) -> (PauliOperator, Option<PauliOperator>) {
        let m = self.pairs();
        assert!(m > 0, "frame exhausted");
        let n = self.e[0].num_qubits();

        let (ae, af) = loop {
            let ae = BitVector::random(m, rng);
            let af = BitVector::random(m, rng);
            if !(ae.is_zero() && af.is_zero()) {
                break (ae, af);
            }
        };
        let v = self.combine(&ae, &af, n);

        // Pivot pair p and its partner u with ω(v, u) = 1; u only pairs with p.
        let pe = ae.first_one();
        let pf = af.first_one();
        let (p, u_is_f) = match (pe, pf) {
            (Some(a), Some(b)) if b < a => (b, false),
            (Some(a), _) => (a, true),
            (None, Some(b)) => (b, false),
            (None, None) => unreachable!(),
        };
        let u = if u_is_f {
            self.f[p].clone()
        } else {
            self.e[p].clone()
        };

        let partner = with_partner.then(|| {
            let mut be = BitVector::random(m, rng);
            let mut bf = BitVector::random(m, rng);
            if !(ae.dot(&bf) ^ af.dot(&be)) {
                if u_is_f {
                    bf.flip(p);
                } else {
                    be.flip(p);
                }
            }
            let w = self.combine(&be, &bf, n);
            (w, be, bf)
        });
        let u_dot_w = partner
            .as_ref()
            .map(|(_, be, bf)| if u_is_f { be.get(p) } else { bf.get(p) });

        // x ← x + ω(x,v)·u + s₂·v, with s₂ = ω(x,w) + ω(x,v)·ω(u,w).
        for l in (0..m).filter(|&l| l != p) {
            let s1 = af.get(l);
            let s2 = partner
                .as_ref()
                .map_or(false, |(_, _, bf)| bf.get(l) ^ (s1 & u_dot_w.unwrap()));
            if s1 {
                self.e[l].xor_symplectic(&u);
            }
            if s2 {
                self.e[l].xor_symplectic(&v);
            }

            let s1 = ae.get(l);
            let s2 = partner
                .as_ref()
                .map_or(false, |(_, be, _)| be.get(l) ^ (s1 & u_dot_w.unwrap()));
            if s1 {
                self.f[l].xor_symplectic(&u);
            }
            if s2 {
                self.f[l].xor_symplectic(&v);
            }
        }
        self.e.remove(p);
        self.f.remove(p);

        (v, partner.map(|(w, _, _)| w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frame_stays_symplectic_and_complementary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1usize, 2, 5, 70] {
            for with_partner in [false, true] {
                let mut frame = Frame::standard(n);
                let mut drawn: Vec<PauliOperator> = Vec::new();
                while frame.pairs() > 0 {
                    let (v, w) = frame.draw(&mut rng, with_partner);
                    assert!(!v.is_identity());
                    if let Some(w) = &w {
                        assert!(v.anticommutes(w));
                    }
                    for d in &drawn {
                        for x in frame.e.iter().chain(&frame.f) {
                            assert!(!x.anticommutes(d));
                        }
                    }
                    drawn.push(v);
                    drawn.extend(w);
                    let m = frame.pairs();
                    for a in 0..m {
                        for b in 0..m {
                            assert_eq!(frame.e[a].anticommutes(&frame.f[b]), a == b);
                            assert!(!frame.e[a].anticommutes(&frame.e[b]));
                            assert!(!frame.f[a].anticommutes(&frame.f[b]));
                        }
                    }
                }
            }
        }
    }
}
