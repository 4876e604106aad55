use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::mass::l1_distance_truncated;
use crate::sre::{SreExpr, Weight};

/// A perturbed copy of a reference at a known truncated ℓ1 distance.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedAlternative {
    pub expr: SreExpr,
    /// Pre-order index of the changed weight.
    pub weight_index: usize,
    pub original: f64,
    pub planted: f64,
    /// `Σ_{|w|≤θ} |P(w) − Q(w)|`, at least the target.
    pub distance: f64,
}

const EDGE: f64 = 1e-6;
const BISECTION_STEPS: usize = 60;

/// Moves one weight of `q` until the truncated ℓ1 distance to `q` reaches
/// `target`.
///
/// Weights are tried in pre-order, each first toward 0 and then toward 1;
/// the first direction whose extreme value reaches the target is bisected.
pub fn planted_alternative(
    q: &SreExpr,
    alphabet: &Alphabet,
    theta: usize,
    target: f64,
    budget: u64,
) -> Result<PlantedAlternative> {
    let weights = q.weights();
    let distance_at = |i: usize, v: f64| -> Result<(SreExpr, f64)> {
        let p = q.with_weight(i, Weight::new(v)?).expect("index in range");
        let d = l1_distance_truncated(&p, q, alphabet, theta, budget)?;
        Ok((p, d))
    };
    for (i, w) in weights.iter().enumerate() {
        let original = w.get();
        for edge in [EDGE, 1.0 - EDGE] {
            let (_, d_edge) = distance_at(i, edge)?;
            if d_edge < target {
                continue;
            }
            // invariant: distance(near) < target ≤ distance(far)
            let (mut near, mut far) = (original, edge);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (near + far);
                if distance_at(i, mid)?.1 >= target {
                    far = mid;
                } else {
                    near = mid;
                }
            }
            let (expr, distance) = distance_at(i, far)?;
            return Ok(PlantedAlternative {
                expr,
                weight_index: i,
                original,
                planted: far,
                distance,
            });
        }
    }
    Err(Error::InvalidParameter(format!(
        "no single weight change reaches truncated ℓ1 distance {target}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reaches_target_tightly() {
        let q = SreExpr::star(SreExpr::choice(0.5, SreExpr::atom('a'), SreExpr::atom('b')).unwrap(), 0.5)
            .unwrap();
        let ab = Alphabet::parse("ab").unwrap();
        let p = planted_alternative(&q, &ab, 4, 0.3, 1 << 20).unwrap();
        assert!(p.distance >= 0.3 && p.distance < 0.3 + 1e-9, "{p:?}");
        let check = l1_distance_truncated(&p.expr, &q, &ab, 4, 1 << 20).unwrap();
        assert_eq!(check, p.distance);
    }

    #[test]
    fn unreachable_target() {
        let q = SreExpr::atom('a');
        let a = Alphabet::parse("a").unwrap();
        assert!(planted_alternative(&q, &a, 1, 0.1, 10).is_err());
    }
}
