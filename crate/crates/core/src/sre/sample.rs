use rand::Rng;

use crate::alphabet::Word;

use super::SreExpr;

/// Draws one word distributed as `⟦r⟧`.
pub fn sample_sre<R: Rng + ?Sized>(r: &SreExpr, rng: &mut R) -> Word {
    let mut out = Vec::new();
    sample_into(r, rng, &mut out);
    Word::new(out).expect("every constructor emits at least one symbol")
}

fn sample_into<R: Rng + ?Sized>(r: &SreExpr, rng: &mut R, out: &mut Vec<char>) {
    match r {
        SreExpr::Atom(c) => out.push(*c),
        SreExpr::Choice {
            weight,
            left,
            right,
        } => {
            if rng.gen_bool(weight.get()) {
                sample_into(left, rng, out)
            } else {
                sample_into(right, rng, out)
            }
        }
        SreExpr::Concat(left, right) => {
            sample_into(left, rng, out);
            sample_into(right, rng, out);
        }
        SreExpr::Star { inner, weight } => {
            // k ≥ 1 parts, P(k) = α(1−α)^{k−1}: stop after each part w.p. α.
            loop {
                sample_into(inner, rng, out);
                if rng.gen_bool(weight.get()) {
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn atom_always_emits_its_symbol() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            assert_eq!(sample_sre(&SreExpr::atom('a'), &mut rng).to_string(), "a");
        }
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let r = SreExpr::star(
            SreExpr::choice(0.5, SreExpr::atom('a'), SreExpr::atom('b')).unwrap(),
            0.3,
        )
        .unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| sample_sre(&r, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }
}
