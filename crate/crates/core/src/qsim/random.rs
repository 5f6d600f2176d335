use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{CMatrix, CqState, DensityMatrix, Label};
use crate::scalar::Real;

/// Generator for trial `index` of a run seeded with `seed`: one ChaCha
/// stream per trial, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_complex<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random unit vector.
pub fn random_pure_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex<T>> {
    loop {
        let v: Vec<Complex<T>> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm > T::zero() {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// `G G† / tr(G G†)` for a `dim x rank` complex Gaussian `G`.
pub fn random_density_rank<T: Real, R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix<T> {
    let g = CMatrix::from_fn(dim, rank.max(1), |_, _| gaussian_complex(rng));
    let gg = g.matmul(&g.adjoint()).expect("compatible shapes");
    DensityMatrix::from_unnormalized(gg).expect("G G† is PSD with positive trace")
}

/// Full-rank random state `G G† / tr`.
pub fn random_density<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix<T> {
    random_density_rank(dim, dim, rng)
}

/// `(G + G†) / 2`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix<T> {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
    (&g + &g.adjoint()).scale(T::lit(0.5))
}

/// Haar-random unitary: Gram–Schmidt on Gaussian columns.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix<T> {
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex<T>> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        for u in &cols {
            let proj = u.iter().zip(&v).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= *ui * proj;
            }
        }
        let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm > T::lit(1e-6) {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Uniform point of the probability simplex with `k` coordinates.
pub fn random_probabilities<T: Real, R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<T> {
    let e: Vec<f64> = (0..k).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|v| T::lit(v / total)).collect()
}

/// cq-state over all `2^m` labels with `2^d`-dimensional states of random
/// rank.
pub fn random_cq_state<T: Real, R: Rng + ?Sized>(m: usize, d: usize, rng: &mut R) -> CqState<T> {
    let count = 1usize << m;
    let dim = 1usize << d;
    let probs = random_probabilities(count, rng);
    let entries = probs
        .into_iter()
        .enumerate()
        .map(|(z, p)| {
            let rank = rng.gen_range(1..=dim);
            (Label::plain(z as u64), p, random_density_rank(dim, rank, rng))
        })
        .collect();
    CqState::new(entries).expect("sampled cq-state is valid")
}
