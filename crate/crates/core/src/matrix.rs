//! Square matrices over a finite quantale.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::laws::{check_quantale_laws_on, check_quantale_laws_sampled, LawReport};
use crate::quantale::{FiniteQuantale, Quantale};

/// `M_n(Q)` with `(a ∗ b)_ij = ⋁_k a_ik · b_kj`; matrices are row-major.
#[derive(Clone, Debug)]
pub struct MatrixQuantale {
    q: Arc<FiniteQuantale>,
    n: usize,
}

/// Carriers up to this size are law-checked on every triple.
pub const MATRIX_EXHAUSTIVE_BOUND: usize = 100;
/// Number of random triples used above the bound.
pub const MATRIX_SAMPLE_TRIPLES: usize = 1000;

impl MatrixQuantale {
    pub fn new(q: Arc<FiniteQuantale>, n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        MatrixQuantale { q, n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &FiniteQuantale {
        &self.q
    }

    /// `|Q|^(n²)`, saturating.
    pub fn carrier_size(&self) -> usize {
        (0..self.n * self.n).fold(1usize, |acc, _| acc.saturating_mul(self.q.size()))
    }

    /// Every matrix, in lexicographic order; only sensible for tiny carriers.
    pub fn elements(&self) -> Vec<Vec<usize>> {
        let (k, len) = (self.q.size(), self.n * self.n);
        let total = self.carrier_size();
        (0..total)
            .map(|mut code| {
                let mut m = vec![0; len];
                for slot in m.iter_mut().rev() {
                    *slot = code % k;
                    code /= k;
                }
                m
            })
            .collect()
    }

    pub fn is_idempotent(&self, u: &[usize]) -> bool {
        self.mul(&u.to_vec(), &u.to_vec()) == u
    }

    fn pointwise(&self, a: &[usize], b: &[usize], f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
        a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
    }

    /// Laws on every triple when the carrier has at most
    /// [`MATRIX_EXHAUSTIVE_BOUND`] elements, otherwise on
    /// [`MATRIX_SAMPLE_TRIPLES`] seeded random triples.
    pub fn check_laws(&self, seed: u64) -> LawReport {
        if self.carrier_size() <= MATRIX_EXHAUSTIVE_BOUND {
            return check_quantale_laws_on(self, &self.elements());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = self.n * self.n;
        let k = self.q.size();
        let mut random = || (0..len).map(|_| rng.gen_range(0..k)).collect::<Vec<_>>();
        let samples: Vec<_> = (0..MATRIX_SAMPLE_TRIPLES)
            .map(|_| (random(), random(), random()))
            .collect();
        check_quantale_laws_sampled(self, &samples)
    }
}

impl Quantale for MatrixQuantale {
    type Elem = Vec<usize>;

    fn bottom(&self) -> Vec<usize> {
        vec![self.q.bottom(); self.n * self.n]
    }
    fn top(&self) -> Vec<usize> {
        vec![self.q.top(); self.n * self.n]
    }
    fn unit(&self) -> Vec<usize> {
        let n = self.n;
        (0..n * n)
            .map(|i| if i / n == i % n { self.q.unit() } else { self.q.bottom() })
            .collect()
    }
    fn join(&self, a: &Vec<usize>, b: &Vec<usize>) -> Vec<usize> {
        self.pointwise(a, b, |x, y| self.q.join(x, y))
    }
    fn meet(&self, a: &Vec<usize>, b: &Vec<usize>) -> Vec<usize> {
        self.pointwise(a, b, |x, y| self.q.meet(x, y))
    }
    fn leq(&self, a: &Vec<usize>, b: &Vec<usize>) -> bool {
        a.iter().zip(b).all(|(&x, &y)| self.q.leq(x, y))
    }
    fn mul(&self, a: &Vec<usize>, b: &Vec<usize>) -> Vec<usize> {
        let n = self.n;
        (0..n * n)
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                self.q
                    .lattice()
                    .join_all((0..n).map(|k| self.q.mul(a[i * n + k], b[k * n + j])))
            })
            .collect()
    }
    /// `(a \ b)_kj = ⋀_i a_ik \ b_ij`
    fn under(&self, a: &Vec<usize>, b: &Vec<usize>) -> Vec<usize> {
        let n = self.n;
        (0..n * n)
            .map(|kj| {
                let (k, j) = (kj / n, kj % n);
                self.q
                    .lattice()
                    .meet_all((0..n).map(|i| self.q.left_residual(a[i * n + k], b[i * n + j])))
            })
            .collect()
    }
    /// `(b / a)_ik = ⋀_j b_ij / a_kj`
    fn over(&self, b: &Vec<usize>, a: &Vec<usize>) -> Vec<usize> {
        let n = self.n;
        (0..n * n)
            .map(|ik| {
                let (i, k) = (ik / n, ik % n);
                self.q
                    .lattice()
                    .meet_all((0..n).map(|j| self.q.right_residual(b[i * n + j], a[k * n + j])))
            })
            .collect()
    }
    fn is_commutative(&self) -> bool {
        self.n == 1 && self.q.commutative()
    }
}
