//! Seeded random expressions for property corpora and benchmarks.

use rand::Rng;

use crate::alphabet::Alphabet;

use super::{SreExpr, Weight};

/// Shape parameters for [`random_sre`].
#[derive(Debug, Clone)]
pub struct RandomSreConfig {
    pub alphabet: Alphabet,
    /// Maximum tree depth (an atom has depth 1).
    pub max_depth: usize,
    /// Range for choice weights.
    pub choice_weights: (f64, f64),
    /// Range for star discounts.
    pub star_weights: (f64, f64),
}

impl RandomSreConfig {
    pub fn new(alphabet: Alphabet, max_depth: usize) -> Self {
        RandomSreConfig {
            alphabet,
            max_depth,
            choice_weights: (0.1, 0.9),
            star_weights: (0.3, 0.9),
        }
    }
}

pub fn random_sre<R: Rng + ?Sized>(cfg: &RandomSreConfig, rng: &mut R) -> SreExpr {
    gen(cfg, cfg.max_depth.max(1), rng)
}

fn weight_in<R: Rng + ?Sized>(range: (f64, f64), rng: &mut R) -> Weight {
    let v = rng.gen_range(range.0..range.1);
    // Round to 1/1000 so printed corpora stay readable.
    let v = ((v * 1000.0).round() / 1000.0).clamp(0.001, 0.999);
    Weight::new(v).expect("clamped into (0,1)")
}

fn gen<R: Rng + ?Sized>(cfg: &RandomSreConfig, depth: usize, rng: &mut R) -> SreExpr {
    let symbols = cfg.alphabet.symbols();
    if depth <= 1 || rng.gen_bool(0.25) {
        return SreExpr::Atom(symbols[rng.gen_range(0..symbols.len())]);
    }
    match rng.gen_range(0..3) {
        0 => SreExpr::Choice {
            weight: weight_in(cfg.choice_weights, rng),
            left: Box::new(gen(cfg, depth - 1, rng)),
            right: Box::new(gen(cfg, depth - 1, rng)),
        },
        1 => SreExpr::concat(gen(cfg, depth - 1, rng), gen(cfg, depth - 1, rng)),
        _ => SreExpr::Star {
            inner: Box::new(gen(cfg, depth - 1, rng)),
            weight: weight_in(cfg.star_weights, rng),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_depth_and_alphabet() {
        let ab = Alphabet::parse("ab").unwrap();
        let cfg = RandomSreConfig::new(ab.clone(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let e = random_sre(&cfg, &mut rng);
            assert!(e.depth() <= 4);
            e.check_alphabet(&ab).unwrap();
        }
    }
}
