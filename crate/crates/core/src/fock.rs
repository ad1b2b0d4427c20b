//! Value types for truncated one- and two-mode bosonic states.
//!
//! All types are immutable after construction and all operations are pure,
//! so states can be shared freely across threads.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A single bosonic mode truncated at photon number `n_max`.
///
/// `amps[n]` is the amplitude of the number state `|n>`. Constructors that
/// claim normalization record in `tail_bound` an upper bound on the
/// probability mass discarded by the truncation, so that
/// `|norm^2 - 1| <= tail_bound` holds.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeState {
    n_max: usize,
    amps: Vec<Complex64>,
    tail_bound: f64,
}

impl SingleModeState {
    /// Wraps raw amplitudes; no normalization claim is made (`tail_bound` 0).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidGrid { reason: "empty amplitude vector".into() });
        }
        Ok(Self { n_max: amps.len() - 1, amps, tail_bound: 0.0 })
    }

    pub(crate) fn with_tail_bound(amps: Vec<Complex64>, tail_bound: f64) -> Self {
        debug_assert!(!amps.is_empty());
        debug_assert!(tail_bound >= 0.0);
        Self { n_max: amps.len() - 1, amps, tail_bound }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Amplitude of `|n>`; zero beyond the cutoff.
    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let amps = self.amps.iter().map(|c| c / n).collect();
        Ok(Self { n_max: self.n_max, amps, tail_bound: self.tail_bound })
    }

    /// Product state with `self` in mode a and `other` in mode b.
    pub fn tensor_product(&self, other: &Self) -> BipartiteState {
        let cols = other.n_max + 1;
        let mut amps = Vec::with_capacity(self.amps.len() * cols);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        // Mass kept by the product is at least the product of the kept masses.
        let tail = 1.0 - (1.0 - self.tail_bound) * (1.0 - other.tail_bound);
        BipartiteState {
            n_max_a: self.n_max,
            n_max_b: other.n_max,
            amps,
            tail_bound: tail.clamp(0.0, 1.0),
        }
    }
}

/// A two-mode state on the truncated grid `|n, m>`, `n <= n_max_a`,
/// `m <= n_max_b`, stored dense in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    n_max_a: usize,
    n_max_b: usize,
    amps: Vec<Complex64>,
    tail_bound: f64,
}

impl BipartiteState {
    /// Wraps a raw row-major grid; no normalization claim is made.
    pub fn from_grid(n_max_a: usize, n_max_b: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != (n_max_a + 1) * (n_max_b + 1) {
            return Err(Error::InvalidGrid {
                reason: format!(
                    "grid length {} does not match cutoffs ({}, {})",
                    amps.len(),
                    n_max_a,
                    n_max_b
                ),
            });
        }
        Ok(Self { n_max_a, n_max_b, amps, tail_bound: 0.0 })
    }

    pub(crate) fn zeros(n_max_a: usize, n_max_b: usize, tail_bound: f64) -> Self {
        Self {
            n_max_a,
            n_max_b,
            amps: vec![Complex64::default(); (n_max_a + 1) * (n_max_b + 1)],
            tail_bound,
        }
    }

    pub fn n_max_a(&self) -> usize {
        self.n_max_a
    }

    pub fn n_max_b(&self) -> usize {
        self.n_max_b
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub(crate) fn set_tail_bound(&mut self, tail: f64) {
        self.tail_bound = tail.clamp(0.0, 1.0);
    }

    #[inline]
    fn idx(&self, n: usize, m: usize) -> usize {
        n * (self.n_max_b + 1) + m
    }

    /// Amplitude of `|n, m>`; zero beyond the cutoffs.
    pub fn amp(&self, n: usize, m: usize) -> Complex64 {
        if n <= self.n_max_a && m <= self.n_max_b {
            self.amps[self.idx(n, m)]
        } else {
            Complex64::default()
        }
    }

    pub(crate) fn set_amp(&mut self, n: usize, m: usize, value: Complex64) {
        let i = self.idx(n, m);
        self.amps[i] = value;
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let amps = self.amps.iter().map(|c| c / n).collect();
        Ok(Self { amps, ..*self })
    }

    /// `<self|other>`, padding the smaller grid with zeros.
    pub fn inner_product(&self, other: &Self) -> Complex64 {
        let na = self.n_max_a.min(other.n_max_a);
        let nb = self.n_max_b.min(other.n_max_b);
        let mut acc = Complex64::default();
        for n in 0..=na {
            for m in 0..=nb {
                acc += self.amps[self.idx(n, m)].conj() * other.amps[other.idx(n, m)];
            }
        }
        acc
    }

    /// Largest total photon number representable on this grid.
    pub fn max_total_photons(&self) -> usize {
        self.n_max_a + self.n_max_b
    }

    /// Copies the total-photon-number-`total_n` component
    /// `sum_n C_{n, N-n} |n, N-n>` out of the grid. Amplitudes are not
    /// normalized; slots outside the grid are zero.
    pub fn extract_block(&self, total_n: usize) -> BlockVector {
        let mut amps = vec![Complex64::default(); total_n + 1];
        let lo = total_n.saturating_sub(self.n_max_b);
        let hi = total_n.min(self.n_max_a);
        if lo <= hi {
            for n in lo..=hi {
                amps[n] = self.amps[self.idx(n, total_n - n)];
            }
        }
        BlockVector::new(total_n, amps)
    }
}

/// The total-photon-number-`N` component of a two-mode state: amplitudes
/// `d_n` over `|n, N-n>`, `n = 0..=N`, together with the pre-normalization
/// probability `weight = sum |d_n|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    total_n: usize,
    amps: Vec<Complex64>,
    weight: f64,
}

impl BlockVector {
    pub fn new(total_n: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), total_n + 1, "block must have N+1 amplitudes");
        let weight = amps.iter().map(|c| c.norm_sqr()).sum();
        Self { total_n, amps, weight }
    }

    pub fn total_n(&self) -> usize {
        self.total_n
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Amplitude of `|n, N-n>`.
    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn normalized(&self) -> Result<Self> {
        if self.weight <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / self.weight.sqrt();
        let amps = self.amps.iter().map(|c| c * scale).collect();
        Ok(Self { total_n: self.total_n, amps, weight: 1.0 })
    }

    /// `<self|other>` for blocks of equal total photon number.
    pub fn inner_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.total_n, other.total_n, "block photon numbers differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_tensor_is_vacuum_grid() {
        let v = states::number_state(0, 2);
        let grid = v.tensor_product(&v);
        assert_eq!(grid.amp(0, 0), c(1.0, 0.0));
        for n in 0..=2 {
            for m in 0..=2 {
                if (n, m) != (0, 0) {
                    assert_eq!(grid.amp(n, m), c(0.0, 0.0));
                }
            }
        }
        assert!((grid.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_zero_tensor_is_vacuum() {
        let a = states::coherent(c(0.0, 0.0), states::Cutoff::Fixed(3));
        let grid = a.tensor_product(&a);
        assert_eq!(grid.amp(0, 0), c(1.0, 0.0));
        assert!((grid.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_one_product_c11() {
        let a = states::coherent(c(1.0, 0.0), states::Cutoff::Fixed(12));
        let grid = a.tensor_product(&a);
        // C_{1,1} = e^{-1}
        assert!((grid.amp(1, 1).re - (-1.0_f64).exp()).abs() < 1e-14);
        assert!(grid.amp(1, 1).im.abs() < 1e-15);
    }

    #[test]
    fn inner_product_orthogonality_and_norm() {
        let vac = states::number_state(0, 2).tensor_product(&states::number_state(0, 2));
        let one_one = states::number_state(1, 2).tensor_product(&states::number_state(1, 2));
        assert_eq!(vac.inner_product(&one_one), c(0.0, 0.0));
        assert!((vac.inner_product(&vac).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_rescales_and_rejects_zero() {
        let mut g = BipartiteState::zeros(1, 1, 0.0);
        assert!(matches!(g.normalized(), Err(Error::ZeroNorm)));
        g.set_amp(0, 0, c(2.0, 0.0));
        let n = g.normalized().unwrap();
        assert!((n.amp(0, 0).re - 1.0).abs() < 1e-15);
        assert!((n.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extract_block_examples() {
        let vac = states::number_state(0, 3).tensor_product(&states::number_state(0, 3));
        let b0 = vac.extract_block(0);
        assert!((b0.weight() - 1.0).abs() < 1e-15);
        assert_eq!(b0.amp(0), c(1.0, 0.0));
        let b3 = vac.extract_block(3);
        assert_eq!(b3.weight(), 0.0);
        assert_eq!(b3.amps().len(), 4);

        // coherent(1) x coherent(1), N = 2 block: (e^-1/sqrt2, e^-1, e^-1/sqrt2)
        let a = states::coherent(c(1.0, 0.0), states::Cutoff::Fixed(20));
        let grid = a.tensor_product(&a);
        let b2 = grid.extract_block(2);
        let e1 = (-1.0_f64).exp();
        assert!((b2.amp(0).re - e1 / 2.0_f64.sqrt()).abs() < 1e-14);
        assert!((b2.amp(1).re - e1).abs() < 1e-14);
        assert!((b2.amp(2).re - e1 / 2.0_f64.sqrt()).abs() < 1e-14);
        assert!((b2.weight() - 2.0 * (-2.0_f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn block_normalization_unit_weight() {
        let b = BlockVector::new(2, vec![c(0.3, 0.0), c(0.0, -0.4), c(1.0, 1.0)]);
        let n = b.normalized().unwrap();
        assert!((n.weight() - 1.0).abs() < 1e-15);
        let s: f64 = n.amps().iter().map(|x| x.norm_sqr()).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_tail_bound_combines() {
        let a = SingleModeState::with_tail_bound(vec![c(1.0, 0.0)], 1e-13);
        let b = SingleModeState::with_tail_bound(vec![c(1.0, 0.0)], 2e-13);
        let g = a.tensor_product(&b);
        let expect = 1.0 - (1.0 - 1e-13) * (1.0 - 2e-13);
        assert!((g.tail_bound() - expect).abs() < 1e-25);
    }
}
