//! Seeded random structured systems.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64(seed)`. Attempt `a`
//! (rejection sampling) draws `A`, `B`, `C`, `p_u`, `p_y` from streams
//! `8a + 0 … 8a + 4` respectively, so each matrix has its own substream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{Cost, Precision};
use crate::pattern::SparsityPattern;
use crate::selector::check_no_sfm;
use crate::system::{Feedback, Mode, Selection, StructuredSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateShape {
    /// Bernoulli stars everywhere.
    #[default]
    Random,
    /// Diagonal `A` only.
    Diagonal,
    /// A Hamiltonian cycle `x1 → x2 → … → xn → x1` plus Bernoulli stars.
    Irreducible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub state_density: f64,
    pub input_density: f64,
    pub output_density: f64,
    /// Inclusive bounds, drawn uniformly in raw units.
    pub cost_range: (Cost, Cost),
    pub precision: Precision,
    pub seed: u64,
    pub mode: Mode,
    pub require_feasible: bool,
    pub shape: StateShape,
    pub max_attempts: u32,
}

impl GeneratorConfig {
    pub fn new(n: usize, m: usize, p: usize, seed: u64) -> Self {
        let precision = Precision::default();
        GeneratorConfig {
            n,
            m,
            p,
            state_density: 0.3,
            input_density: 0.3,
            output_density: 0.3,
            cost_range: (Cost::from_units(1, precision), Cost::from_units(10, precision)),
            precision,
            seed,
            mode: Mode::Continuous,
            require_feasible: true,
            shape: StateShape::Random,
            max_attempts: 1000,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig { seed, ..self.clone() }
    }

    fn check(&self) -> Result<(), GenerationError> {
        for (name, d) in [
            ("state_density", self.state_density),
            ("input_density", self.input_density),
            ("output_density", self.output_density),
        ] {
            if !(0.0..=1.0).contains(&d) {
                return Err(GenerationError::BadConfig(format!("{name} = {d} is outside [0, 1]")));
            }
        }
        let (lo, hi) = self.cost_range;
        if lo.is_negative() || lo > hi {
            return Err(GenerationError::BadConfig("cost range must satisfy 0 <= lo <= hi".into()));
        }
        if self.n == 0 {
            return Err(GenerationError::BadConfig("n must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("invalid generator config: {0}")]
    BadConfig(String),
    #[error("no system without structurally fixed modes after {0} attempts")]
    GenerationFailed(u32),
}

fn stream(seed: u64, attempt: u32, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(attempt) * 8 + k);
    rng
}

fn bernoulli(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Vec<(usize, usize)> {
    let mut stars = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(density) {
                stars.push((r, c));
            }
        }
    }
    stars
}

fn costs(rng: &mut ChaCha8Rng, count: usize, (lo, hi): (Cost, Cost)) -> Vec<Cost> {
    (0..count).map(|_| Cost::from_raw(rng.gen_range(lo.raw()..=hi.raw()))).collect()
}

fn draw(cfg: &GeneratorConfig, attempt: u32) -> StructuredSystem {
    let n = cfg.n;
    let mut ra = stream(cfg.seed, attempt, 0);
    let a = match cfg.shape {
        StateShape::Random => SparsityPattern::from_stars(n, n, bernoulli(&mut ra, n, n, cfg.state_density)),
        StateShape::Diagonal => SparsityPattern::diagonal(n),
        StateShape::Irreducible => {
            let mut stars = bernoulli(&mut ra, n, n, cfg.state_density);
            stars.extend((0..n).map(|j| ((j + 1) % n, j)));
            SparsityPattern::from_stars(n, n, stars)
        }
    };
    let b = bernoulli(&mut stream(cfg.seed, attempt, 1), n, cfg.m, cfg.input_density);
    let c = bernoulli(&mut stream(cfg.seed, attempt, 2), cfg.p, n, cfg.output_density);
    StructuredSystem {
        a,
        b: SparsityPattern::from_stars(n, cfg.m, b),
        c: SparsityPattern::from_stars(cfg.p, n, c),
        k: Feedback::Complete,
        cost_u: costs(&mut stream(cfg.seed, attempt, 3), cfg.m, cfg.cost_range),
        cost_y: costs(&mut stream(cfg.seed, attempt, 4), cfg.p, cfg.cost_range),
        mode: cfg.mode,
        precision: cfg.precision,
    }
}

/// Deterministic in `cfg`. With `require_feasible`, redraws until the full
/// system has no SFMs.
pub fn generate(cfg: &GeneratorConfig) -> Result<StructuredSystem, GenerationError> {
    cfg.check()?;
    if !cfg.require_feasible {
        return Ok(draw(cfg, 0));
    }
    let full = Selection::full(cfg.m, cfg.p);
    for attempt in 0..cfg.max_attempts {
        let s = draw(cfg, attempt);
        if check_no_sfm(&s, &full).is_free() {
            return Ok(s);
        }
    }
    Err(GenerationError::GenerationFailed(cfg.max_attempts))
}
