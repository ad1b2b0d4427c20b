//! Self-contained invariant suite behind the `verify` command: unitarity,
//! block conservation, Parseval, the dual-route beam-splitter equivalence,
//! cat-input unit fidelity, and the overlap-exponent resolution.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::beamsplitter::{apply_direct, apply_disentangled, apply_disentangled_faulty, gamma_5050};
use crate::fock::BipartiteState;
use crate::postselect::{analytic_overlap_cat, noon_fidelity, postselection_overlap};
use crate::states::{self, build_input, CatParity, Cutoff, InputFamily};

/// Deliberate defects for mutation-testing the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultInjection {
    None,
    /// Flip the signs of the disentangling parameters p and r.
    DisentangledSignFlip,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, deviation: f64, tolerance: f64) -> Self {
        Self { name, deviation, tolerance, passed: deviation.is_finite() && deviation <= tolerance }
    }
}

/// Outcome of the numerator-power comparison for the closed-form cat
/// overlap: `|alpha|^(2N)` against the `|alpha|^2` variant.
#[derive(Debug, Clone, Copy)]
pub struct ExponentResolution {
    /// True when the `|alpha|^(2N)` form matches the numerical overlap.
    pub two_n_wins: bool,
    pub max_dev_power_two_n: f64,
    pub max_dev_power_two: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub exponent: ExponentResolution,
}

/// Knobs for the verification suite. The suite pins its own truncation
/// tolerance: every tolerance below was calibrated for tails <= 1e-12,
/// so loosening the truncation would report physics failures that are
/// really resolution artifacts.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Grid size (and block band) of the random unitarity samples.
    pub n_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { n_max: 16 }
    }
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Plain-text pass/fail table plus the exponent-resolution note.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {:<42} max deviation {:>10.3e}  (tolerance {:.0e})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.deviation,
                c.tolerance,
            ));
        }
        out.push_str(&format!(
            "resolved overlap numerator exponent: |alpha|^(2N) \
             (matches numerics to {:.3e}; the |alpha|^2 variant misses by {:.3e})\n",
            self.exponent.max_dev_power_two_n, self.exponent.max_dev_power_two
        ));
        out
    }
}

const GAMMAS: [Complex64; 3] = [
    Complex64::new(0.0, std::f64::consts::FRAC_PI_4),
    Complex64::new(std::f64::consts::FRAC_PI_4, 0.0),
    Complex64::new(0.229_524_1, 0.193_291_5), // 0.3 e^{0.7 i}
];

/// Random state supported on the blocks that fit inside the grid
/// (total photons <= n_max), where the splitter acts exactly.
fn random_band_state(rng: &mut ChaCha8Rng, n_max: usize) -> BipartiteState {
    let mut s = BipartiteState::zeros(n_max, n_max, 0.0);
    for n in 0..=n_max {
        for m in 0..=(n_max - n) {
            s.set_amp(n, m, Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        }
    }
    s.normalized().expect("band state has positive norm")
}

/// Random state over the full rectangular grid, corner blocks included.
fn random_grid_state(rng: &mut ChaCha8Rng, n_max: usize) -> BipartiteState {
    let dim = (n_max + 1) * (n_max + 1);
    let amps: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    BipartiteState::from_grid(n_max, n_max, amps)
        .expect("grid dimensions consistent")
        .normalized()
        .expect("grid state has positive norm")
}

fn state_distance(a: &BipartiteState, b: &BipartiteState) -> f64 {
    let mut acc = 0.0;
    for n in 0..=a.n_max_a() {
        for m in 0..=a.n_max_b() {
            acc += (a.amp(n, m) - b.amp(n, m)).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Runs every invariant check with default options.
pub fn run(fault: FaultInjection) -> VerifyReport {
    run_with(fault, VerifyOptions::default())
}

/// Runs every invariant check and reports per-check deviations.
pub fn run_with(fault: FaultInjection, opts: VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    let n_max = opts.n_max.max(2);

    // -- unitarity, round trip, block conservation, Parseval ---------------
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let band_states: Vec<BipartiteState> = (0..6).map(|_| random_band_state(&mut rng, n_max)).collect();

    let mut norm_dev = 0.0_f64;
    let mut roundtrip_dev = 0.0_f64;
    let mut block_dev = 0.0_f64;
    let mut parseval_dev = 0.0_f64;
    for gamma in GAMMAS {
        for s in &band_states {
            let fwd_direct = apply_direct(s, gamma);
            let fwd_disent = apply_disentangled(s, gamma, false).expect("|gamma| < pi/2");
            norm_dev = norm_dev.max((fwd_direct.norm() - 1.0).abs());
            norm_dev = norm_dev.max((fwd_disent.norm() - 1.0).abs());

            let back = apply_direct(&fwd_direct, -gamma);
            roundtrip_dev = roundtrip_dev.max(state_distance(&back, s));
            let back2 = apply_disentangled(&fwd_disent, gamma, true).expect("|gamma| < pi/2");
            roundtrip_dev = roundtrip_dev.max(state_distance(&back2, s));

            let mut total_weight = 0.0;
            for total_n in 0..=s.max_total_photons() {
                let w_in = s.extract_block(total_n).weight();
                let w_out = fwd_direct.extract_block(total_n).weight();
                block_dev = block_dev.max((w_in - w_out).abs());
                total_weight += w_in;
            }
            parseval_dev = parseval_dev.max((total_weight - s.norm().powi(2)).abs());
        }
    }
    // The round trip through U U-dag must also hold on the NOON example.
    {
        let noon = states::noon(6).expect("N >= 1");
        let back = apply_direct(&apply_direct(&noon, -gamma_5050()), gamma_5050());
        roundtrip_dev = roundtrip_dev.max(state_distance(&back, &noon));
    }
    checks.push(CheckResult::new("norm preservation (both routes)", norm_dev, 1e-12));
    checks.push(CheckResult::new("round trip U then U-dagger", roundtrip_dev, 1e-10));
    checks.push(CheckResult::new("photon-number block conservation", block_dev, 1e-12));
    checks.push(CheckResult::new("Parseval over blocks", parseval_dev, 1e-12));

    // -- dual-route equivalence (fault-injection target) -------------------
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut equiv_dev = 0.0_f64;
    for gamma in GAMMAS {
        for _ in 0..8 {
            let s = random_grid_state(&mut rng, 12);
            let direct = apply_direct(&s, gamma);
            let disent = match fault {
                FaultInjection::None => apply_disentangled(&s, gamma, false).expect("|gamma| < pi/2"),
                FaultInjection::DisentangledSignFlip => {
                    apply_disentangled_faulty(&s, gamma, false).expect("|gamma| < pi/2")
                }
            };
            equiv_dev = equiv_dev.max(state_distance(&direct, &disent));
        }
    }
    checks.push(CheckResult::new("disentangled vs block-exponential oracle", equiv_dev, 1e-10));

    // -- cat-input unit fidelity -------------------------------------------
    let mut cat_dev = 0.0_f64;
    for (parity, ns) in [(CatParity::Even, [4usize, 8]), (CatParity::Odd, [2usize, 6])] {
        for n in ns {
            for mag in [0.5, 1.0, 2.0] {
                let beta = Complex64::new(mag, 0.0);
                let alpha = Complex64::new(0.0, mag);
                let family = match parity {
                    CatParity::Even => InputFamily::EcsCs { beta, alpha },
                    CatParity::Odd => InputFamily::OcsCs { beta, alpha },
                };
                let input = build_input(&family, Cutoff::auto()).expect("valid cat input");
                let out = apply_direct(&input, gamma_5050());
                let f = noon_fidelity(&out, n).expect("nonzero block");
                cat_dev = cat_dev.max((f - 1.0).abs());
            }
        }
    }
    checks.push(CheckResult::new("cat-input unit fidelity (alpha = i beta)", cat_dev, 1e-9));

    // -- Hong-Ou-Mandel regression -----------------------------------------
    let hom_in = states::number_state(1, 2).tensor_product(&states::number_state(1, 2));
    let hom_out = apply_direct(&hom_in, gamma_5050());
    let hom_dev = hom_out
        .amp(1, 1)
        .norm()
        .max((noon_fidelity(&hom_out, 2).expect("two-photon block") - 1.0).abs());
    checks.push(CheckResult::new("Hong-Ou-Mandel regression", hom_dev, 1e-12));

    // -- NOON production from the ideal inputs ------------------------------
    let mut noon_dev = 0.0_f64;
    for n in [2usize, 4, 6, 8] {
        let out = apply_direct(&states::ideal_input(n).expect("even N"), gamma_5050());
        let overlap = states::noon(n).expect("N >= 1").inner_product(&out).norm_sqr();
        noon_dev = noon_dev.max((overlap - 1.0).abs());
    }
    checks.push(CheckResult::new("NOON production from ideal inputs", noon_dev, 1e-9));

    // -- closed-form cat overlap and exponent resolution --------------------
    let exponent = resolve_overlap_exponent();
    checks.push(CheckResult::new(
        "cat overlap closed form (|alpha|^(2N))",
        exponent.max_dev_power_two_n,
        1e-10,
    ));

    VerifyReport { checks, exponent }
}

/// Compares the two candidate closed forms of the cat-coherent overlap
/// against the numerically computed `postselection_overlap` over a grid of
/// amplitudes, for N = 2 and 4.
pub fn resolve_overlap_exponent() -> ExponentResolution {
    let mut dev_two_n = 0.0_f64;
    let mut dev_two = 0.0_f64;
    for n in [2usize, 4] {
        let parity = if n % 4 == 0 { CatParity::Even } else { CatParity::Odd };
        for k in 1..=6 {
            let mag = 0.5 * k as f64;
            let beta = Complex64::new(mag, 0.0);
            let alpha = Complex64::new(0.0, mag);
            let family = match parity {
                CatParity::Even => InputFamily::EcsCs { beta, alpha },
                CatParity::Odd => InputFamily::OcsCs { beta, alpha },
            };
            let input = build_input(&family, Cutoff::auto()).expect("valid cat input");
            let numeric = postselection_overlap(&input, n, gamma_5050()).expect("even N");
            let closed = analytic_overlap_cat(mag, n, parity).expect("even N");
            dev_two_n = dev_two_n.max((numeric - closed).abs());

            // |alpha|^2 variant: divide out |alpha|^{2N} and multiply |alpha|^2.
            let power_two = closed * mag.powi(2) / mag.powi(2 * n as i32);
            dev_two = dev_two.max((numeric - power_two).abs());
        }
    }
    ExponentResolution { two_n_wins: dev_two_n < 1e-8 && dev_two > 1e-3, max_dev_power_two_n: dev_two_n, max_dev_power_two: dev_two }
}
