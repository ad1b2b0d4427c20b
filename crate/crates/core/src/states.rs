//! Constructors for the states used throughout: coherent, squeezed vacuum,
//! even/odd cat, number states, NOON states, and the ideal beam-splitter
//! input that a 50-50 splitter maps onto a NOON state.
//!
//! Constructors evaluate the closed-form expansion coefficients verbatim
//! (no rephasing, no renormalization of the truncated vector); `tail_bound`
//! records an upper bound on the probability mass beyond the cutoff.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BipartiteState, SingleModeState};
use crate::math::sqrt_binomial;

/// Parity of a superposed-coherent (cat) state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatParity {
    /// Symmetric combination of `|b>` and `|-b>`: even photon numbers only.
    Even,
    /// Antisymmetric combination of `|b>` and `|-b>`: odd photon numbers only.
    Odd,
}

impl std::fmt::Display for CatParity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CatParity::Even => write!(f, "even"),
            CatParity::Odd => write!(f, "odd"),
        }
    }
}

/// Identifies one of the three input-state families fed to the splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    /// Squeezed vacuum in mode a, coherent state in mode b.
    SvCs,
    /// Even cat in mode a, coherent state in mode b.
    EcsCs,
    /// Odd cat in mode a, coherent state in mode b.
    OcsCs,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 3] = [FamilyTag::SvCs, FamilyTag::EcsCs, FamilyTag::OcsCs];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyTag::SvCs => "sv-cs",
            FamilyTag::EcsCs => "ecs-cs",
            FamilyTag::OcsCs => "ocs-cs",
        }
    }
}

impl std::fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FamilyTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sv-cs" | "sv_cs" => Ok(FamilyTag::SvCs),
            "ecs-cs" | "ecs_cs" => Ok(FamilyTag::EcsCs),
            "ocs-cs" | "ocs_cs" => Ok(FamilyTag::OcsCs),
            other => Err(format!("unknown family '{other}' (expected sv-cs, ecs-cs or ocs-cs)")),
        }
    }
}

/// A fully parameterized two-mode input: mode a carries the squeezed vacuum
/// or cat state, mode b the coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputFamily {
    SvCs { r: f64, alpha: Complex64 },
    EcsCs { beta: Complex64, alpha: Complex64 },
    OcsCs { beta: Complex64, alpha: Complex64 },
}

impl InputFamily {
    pub fn tag(&self) -> FamilyTag {
        match self {
            InputFamily::SvCs { .. } => FamilyTag::SvCs,
            InputFamily::EcsCs { .. } => FamilyTag::EcsCs,
            InputFamily::OcsCs { .. } => FamilyTag::OcsCs,
        }
    }
}

/// Photon-number cutoff policy for the single-mode constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// Grow the cutoff until the discarded tail probability falls below the
    /// given tolerance.
    Auto { tail_tol: f64 },
    /// Truncate at exactly this photon number.
    Fixed(usize),
}

impl Cutoff {
    pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

    pub fn auto() -> Self {
        Cutoff::Auto { tail_tol: Self::DEFAULT_TAIL_TOL }
    }
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff::auto()
    }
}

// Hard ceiling for Auto cutoffs; generous for any desk-scale amplitude.
const AUTO_CUTOFF_CEILING: usize = 200_000;

/// Builds a strided amplitude sequence `c_{offset}, c_{offset+stride}, ...`
/// from a term recurrence, together with a tail bound on the discarded
/// probability mass.
///
/// `step(n)` is the multiplier taking the amplitude at slot `n` to slot
/// `n + stride`; `ratio_bound(n)` must upper-bound `p_{m+stride}/p_m` for
/// every slot `m >= n`, which makes the geometric tail estimate valid.
fn strided_amplitudes(
    cutoff: Cutoff,
    first: Complex64,
    offset: usize,
    stride: usize,
    step: impl Fn(usize) -> Complex64,
    ratio_bound: impl Fn(usize) -> f64,
) -> (Vec<Complex64>, f64) {
    let mut amps = vec![Complex64::default(); offset + 1];
    amps[offset] = first;
    let mut slot = offset;
    let mut cur = first;
    let mut kept = first.norm_sqr();
    let mut terms = 1usize;

    // Geometric-series bound on the analytic tail, widened by a summation
    // roundoff allowance of one epsilon per computed term so that the bound
    // also covers the floating-point norm deficit.
    let tail_at = |slot: usize, cur: Complex64, kept: f64, terms: usize| -> f64 {
        let allowance = (terms as f64 + 2.0) * f64::EPSILON;
        let q = ratio_bound(slot);
        if q < 1.0 {
            let p_next = cur.norm_sqr() * q;
            (p_next / (1.0 - q)).max(0.0) + allowance
        } else {
            (1.0 - kept).max(0.0) + allowance
        }
    };

    match cutoff {
        Cutoff::Fixed(n_max) => {
            while slot + stride <= n_max {
                cur *= step(slot);
                slot += stride;
                amps.resize(slot + 1, Complex64::default());
                amps[slot] = cur;
                kept += cur.norm_sqr();
                terms += 1;
            }
            let tail = tail_at(slot, cur, kept, terms);
            amps.resize(n_max + 1, Complex64::default());
            (amps, tail.min(1.0))
        }
        Cutoff::Auto { tail_tol } => {
            loop {
                let q = ratio_bound(slot);
                if q < 1.0 && tail_at(slot, cur, kept, terms) < tail_tol {
                    break;
                }
                if slot + stride > AUTO_CUTOFF_CEILING {
                    break;
                }
                cur *= step(slot);
                slot += stride;
                amps.resize(slot + 1, Complex64::default());
                amps[slot] = cur;
                kept += cur.norm_sqr();
                terms += 1;
            }
            let tail = tail_at(slot, cur, kept, terms);
            (amps, tail.min(1.0))
        }
    }
}

/// Number state `|n>` on a grid truncated at `n_max >= n`.
pub fn number_state(n: usize, n_max: usize) -> SingleModeState {
    assert!(n <= n_max, "number_state: n = {n} exceeds n_max = {n_max}");
    let mut amps = vec![Complex64::default(); n_max + 1];
    amps[n] = Complex64::new(1.0, 0.0);
    SingleModeState::with_tail_bound(amps, 0.0)
}

/// Coherent state: `c_n = e^{-|a|^2/2} a^n / sqrt(n!)`.
pub fn coherent(alpha: Complex64, cutoff: Cutoff) -> SingleModeState {
    let lam = alpha.norm_sqr();
    let c0 = Complex64::new((-lam / 2.0).exp(), 0.0);
    let (amps, tail) = strided_amplitudes(
        cutoff,
        c0,
        0,
        1,
        |n| alpha / (((n + 1) as f64).sqrt()),
        // p_{n+1}/p_n = lam/(n+1), decreasing in n.
        |n| lam / (n + 1) as f64,
    );
    SingleModeState::with_tail_bound(amps, tail)
}

/// Squeezed vacuum: `c_{2k} = (-tanh r)^k sqrt((2k)!) / (2^k k! sqrt(cosh r))`,
/// odd amplitudes zero. The squeeze amplitude `r` is real; `r = 0` gives the
/// vacuum.
pub fn squeezed_vacuum(r: f64, cutoff: Cutoff) -> SingleModeState {
    let t = r.tanh();
    if t == 0.0 {
        let n_max = match cutoff {
            Cutoff::Auto { .. } => 0,
            Cutoff::Fixed(n) => n,
        };
        return number_state(0, n_max);
    }
    let c0 = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    let t2 = t * t;
    let (amps, tail) = strided_amplitudes(
        cutoff,
        c0,
        0,
        2,
        // c_{n+2}/c_n = -tanh r * sqrt((n+1)/(n+2)) for even n.
        move |n| Complex64::new(-t * ((n + 1) as f64 / (n + 2) as f64).sqrt(), 0.0),
        // p_{n+2}/p_n = tanh^2 r * (n+1)/(n+2) < tanh^2 r for all n.
        move |_| t2,
    );
    SingleModeState::with_tail_bound(amps, tail)
}

/// Even or odd cat state of complex amplitude `beta`.
///
/// Even: `c_{2k} = b^{2k} / (sqrt((2k)!) sqrt(cosh |b|^2))`;
/// odd:  `c_{2k+1} = b^{2k+1} / (sqrt((2k+1)!) sqrt(sinh |b|^2))`.
/// The odd cat is undefined at `beta = 0`.
pub fn cat(beta: Complex64, parity: CatParity, cutoff: Cutoff) -> Result<SingleModeState> {
    let b2 = beta.norm_sqr();
    let (first, offset) = match parity {
        CatParity::Even => {
            if b2 == 0.0 {
                let n_max = match cutoff {
                    Cutoff::Auto { .. } => 0,
                    Cutoff::Fixed(n) => n,
                };
                return Ok(number_state(0, n_max));
            }
            (Complex64::new(1.0 / b2.cosh().sqrt(), 0.0), 0)
        }
        CatParity::Odd => {
            if b2 == 0.0 {
                return Err(Error::OddCatAtZero);
            }
            (beta / b2.sinh().sqrt(), 1)
        }
    };
    let beta2 = beta * beta;
    let b4 = b2 * b2;
    let (amps, tail) = strided_amplitudes(
        cutoff,
        first,
        offset,
        2,
        // c_{n+2}/c_n = beta^2 / sqrt((n+1)(n+2)).
        move |n| beta2 / ((((n + 1) * (n + 2)) as f64).sqrt()),
        // p_{n+2}/p_n = |b|^4 / ((n+1)(n+2)), decreasing in n.
        move |n| b4 / ((n + 1) * (n + 2)) as f64,
    );
    Ok(SingleModeState::with_tail_bound(amps, tail))
}

/// NOON state `(|N,0> + |0,N>)/sqrt(2)` on an N x N grid.
pub fn noon(n: usize) -> Result<BipartiteState> {
    if n == 0 {
        return Err(Error::InvalidNoonOrder { n });
    }
    let mut state = BipartiteState::zeros(n, n, 0.0);
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    state.set_amp(n, 0, amp);
    state.set_amp(0, n, amp);
    Ok(state)
}

/// Block amplitudes (over `|k, N-k>`, index k = photons in mode a) of the
/// ideal input state in its closed real form.
///
/// For N = 0 mod 4 the support is on even-even pairs with amplitudes
/// `(-1)^j sqrt(C(N,2j)) / sqrt(2^{N-1})` at `|N-2j, 2j>`; for N = 2 mod 4
/// it sits on odd-odd pairs `|N-2j-1, 2j+1>` with the same alternating-sign
/// binomial profile. A 50-50 beam splitter maps this state onto `noon(N)`
/// up to a global phase.
pub(crate) fn ideal_input_block_amps(n: usize) -> Result<Vec<Complex64>> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::EvenPhotonNumberRequired { n });
    }
    let scale = (-(0.5 * std::f64::consts::LN_2) * ((n - 1) as f64)).exp();
    let mut amps = vec![Complex64::default(); n + 1];
    if n % 4 == 0 {
        for j in 0..=n / 2 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            amps[n - 2 * j] = Complex64::new(sign * sqrt_binomial(n, 2 * j) * scale, 0.0);
        }
    } else {
        for j in 0..n / 2 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            amps[n - 2 * j - 1] = Complex64::new(sign * sqrt_binomial(n, 2 * j + 1) * scale, 0.0);
        }
    }
    Ok(amps)
}

/// The finite superposition that a 50-50 beam splitter (`gamma = i pi/4`)
/// maps onto `noon(N)`; defined for positive even `N`.
pub fn ideal_input(n: usize) -> Result<BipartiteState> {
    let amps = ideal_input_block_amps(n)?;
    let mut state = BipartiteState::zeros(n, n, 0.0);
    for (k, amp) in amps.into_iter().enumerate() {
        if amp != Complex64::default() {
            state.set_amp(k, n - k, amp);
        }
    }
    Ok(state)
}

/// Product input `(SV or cat) (x) coherent` with mode a holding the
/// squeezed or superposed state.
pub fn build_input(family: &InputFamily, cutoff: Cutoff) -> Result<BipartiteState> {
    let (mode_a, alpha) = match *family {
        InputFamily::SvCs { r, alpha } => (squeezed_vacuum(r, cutoff), alpha),
        InputFamily::EcsCs { beta, alpha } => (cat(beta, CatParity::Even, cutoff)?, alpha),
        InputFamily::OcsCs { beta, alpha } => (cat(beta, CatParity::Odd, cutoff)?, alpha),
    };
    let mode_b = coherent(alpha, cutoff);
    Ok(mode_a.tensor_product(&mode_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn coherent_frozen_values() {
        // alpha = 0 is exactly the vacuum
        let v = coherent(re(0.0), Cutoff::auto());
        assert_eq!(v.amp(0), re(1.0));
        assert_eq!(v.n_max(), 0);

        // alpha = 1: c_0 = c_1 = e^{-1/2}
        let a = coherent(re(1.0), Cutoff::auto());
        let e_half = (-0.5_f64).exp();
        assert!((a.amp(0).re - e_half).abs() < 1e-15);
        assert!((a.amp(1).re - e_half).abs() < 1e-15);

        // alpha = i has the same moduli
        let b = coherent(I, Cutoff::auto());
        for n in 0..=a.n_max() {
            assert!((a.amp(n).norm() - b.amp(n).norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn coherent_norm_within_tail_bound() {
        for mag in [0.3, 1.0, 2.5, 4.0] {
            let s = coherent(re(mag), Cutoff::auto());
            assert!(
                (s.norm().powi(2) - 1.0).abs() <= s.tail_bound().max(1e-14),
                "norm deficit exceeds tail bound at |alpha| = {mag}"
            );
            assert!(s.tail_bound() < 1e-12);
        }
        // Forced tiny cutoff: bound still honest.
        let s = coherent(re(2.0), Cutoff::Fixed(3));
        assert!((s.norm().powi(2) - 1.0).abs() <= s.tail_bound() + 1e-14);
    }

    #[test]
    fn squeezed_vacuum_frozen_values() {
        let v = squeezed_vacuum(0.0, Cutoff::auto());
        assert_eq!(v.amp(0), re(1.0));

        let s = squeezed_vacuum(0.5, Cutoff::auto());
        assert!((s.amp(0).re - 0.941_710_615_831_675_7).abs() < 1e-14);
        assert!((s.amp(2).re - (-0.307_719_176_458_370_4)).abs() < 1e-14);
        assert_eq!(s.amp(1), re(0.0));
        assert_eq!(s.amp(3), re(0.0));

        let s1 = squeezed_vacuum(1.0, Cutoff::auto());
        assert!((s1.norm() - 1.0).abs() < 1e-12);
        // negative squeeze flips the sign pattern
        let sm = squeezed_vacuum(-0.5, Cutoff::auto());
        assert!((sm.amp(2).re - 0.307_719_176_458_370_4).abs() < 1e-14);
    }

    #[test]
    fn cat_frozen_values() {
        // even, beta -> 0 limit is the vacuum
        let v = cat(re(0.0), CatParity::Even, Cutoff::auto()).unwrap();
        assert_eq!(v.amp(0), re(1.0));

        let e = cat(re(1.0), CatParity::Even, Cutoff::auto()).unwrap();
        assert!((e.amp(0).re - 0.805_018_182_194_592_1).abs() < 1e-14);
        assert!((e.amp(2).re - 0.569_233_815_608_263_8).abs() < 1e-14);
        assert_eq!(e.amp(1), re(0.0));

        let o = cat(re(1.0), CatParity::Odd, Cutoff::auto()).unwrap();
        assert!((o.amp(1).re - 0.922_452_236_291_571_6).abs() < 1e-14);
        assert_eq!(o.amp(0), re(0.0));
        assert_eq!(o.amp(2), re(0.0));

        assert!(matches!(
            cat(re(0.0), CatParity::Odd, Cutoff::auto()),
            Err(Error::OddCatAtZero)
        ));
    }

    #[test]
    fn cat_matches_explicit_superposition() {
        // (|b> +- |-b>) / normalization, cross-checked against the closed form.
        for mag in [0.5_f64, 1.0, 2.0, 3.0] {
            for phase in [0.0_f64, 0.9] {
                let beta = Complex64::from_polar(mag, phase);
                let n_max = 80;
                let plus = coherent(beta, Cutoff::Fixed(n_max));
                let minus = coherent(-beta, Cutoff::Fixed(n_max));
                for (parity, sign) in [(CatParity::Even, 1.0), (CatParity::Odd, -1.0)] {
                    let direct = cat(beta, parity, Cutoff::Fixed(n_max)).unwrap();
                    let mut sup: Vec<Complex64> = plus
                        .amps()
                        .iter()
                        .zip(minus.amps())
                        .map(|(p, m)| p + sign * m)
                        .collect();
                    let norm: f64 = sup.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    sup.iter_mut().for_each(|c| *c /= norm);
                    for n in 0..=n_max {
                        assert!(
                            (direct.amp(n) - sup[n]).norm() < 1e-12,
                            "parity {parity:?} beta {beta} slot {n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cat_norm_within_tail_bound() {
        let e = cat(re(1.0), CatParity::Even, Cutoff::Fixed(20)).unwrap();
        assert!((e.norm() - 1.0).abs() < 1e-12);
        for mag in [0.5, 1.5, 3.0] {
            for parity in [CatParity::Even, CatParity::Odd] {
                let s = cat(re(mag), parity, Cutoff::auto()).unwrap();
                assert!((s.norm().powi(2) - 1.0).abs() <= s.tail_bound().max(1e-14));
            }
        }
    }

    #[test]
    fn noon_examples() {
        let n1 = noon(1).unwrap();
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        assert!((n1.amp(1, 0).re - amp).abs() < 1e-15);
        assert!((n1.amp(0, 1).re - amp).abs() < 1e-15);

        let n2 = noon(2).unwrap();
        assert!((n2.amp(2, 0).re - 0.707_106_8).abs() < 1e-7);
        assert!((n2.amp(0, 2).re - 0.707_106_8).abs() < 1e-7);

        assert!((noon(5).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!(matches!(noon(0), Err(Error::InvalidNoonOrder { .. })));
    }

    #[test]
    fn ideal_input_examples() {
        // N = 2 is exactly |1,1> (the Hong-Ou-Mandel input).
        let i2 = ideal_input(2).unwrap();
        assert!((i2.amp(1, 1).re - 1.0).abs() < 1e-15);
        assert!((i2.norm() - 1.0).abs() < 1e-14);

        // N = 4: (1, -sqrt6, 1)/sqrt8 on |4,0>, |2,2>, |0,4>.
        let i4 = ideal_input(4).unwrap();
        assert!((i4.amp(4, 0).re - 0.353_553_390_593_273_8).abs() < 1e-14);
        assert!((i4.amp(2, 2).re - (-0.866_025_403_784_438_6)).abs() < 1e-14);
        assert!((i4.amp(0, 4).re - 0.353_553_390_593_273_8).abs() < 1e-14);

        assert!((ideal_input(8).unwrap().norm() - 1.0).abs() < 1e-12);

        assert!(matches!(ideal_input(3), Err(Error::EvenPhotonNumberRequired { n: 3 })));
        assert!(matches!(ideal_input(0), Err(Error::EvenPhotonNumberRequired { .. })));
    }

    #[test]
    fn build_input_vacuum_case() {
        let g = build_input(
            &InputFamily::SvCs { r: 0.0, alpha: re(0.0) },
            Cutoff::auto(),
        )
        .unwrap();
        assert_eq!(g.amp(0, 0), re(1.0));
        assert!((g.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn parity_selection_rules() {
        let s = squeezed_vacuum(0.8, Cutoff::auto());
        let e = cat(re(1.3), CatParity::Even, Cutoff::auto()).unwrap();
        let o = cat(re(1.3), CatParity::Odd, Cutoff::auto()).unwrap();
        for n in 0..=s.n_max() {
            if n % 2 == 1 {
                assert_eq!(s.amp(n), re(0.0));
            }
        }
        for n in 0..=e.n_max() {
            if n % 2 == 1 {
                assert_eq!(e.amp(n), re(0.0));
            }
        }
        for n in 0..=o.n_max() {
            if n % 2 == 0 {
                assert_eq!(o.amp(n), re(0.0));
            }
        }
    }
}
