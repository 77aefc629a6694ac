//! Random commutative squares for the diagram lemma. Neither sampler looks
//! at the conclusion; both filter on the six hypotheses only.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{diagram_hypotheses, DiagramInstance};
use crate::abelian::random::{random_embedding, random_hom, random_torsion_group};
use crate::abelian::{pushout, quotient, FinAbGroup};
use crate::modmat::ring::gcd;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sampler {
    /// Independent groups and maps, kept when the square commutes and the
    /// hypotheses hold.
    S1,
    /// An exact top row built from nested subgroups, closed by a pushout.
    #[default]
    S2,
}

/// One draw; `None` when the draw is rejected. `max_order <= 1` always
/// yields the all-trivial square.
pub fn sample_diagram<R: Rng + ?Sized>(rng: &mut R, max_order: u64, n: u64, sampler: Sampler) -> Option<DiagramInstance> {
    if max_order <= 1 {
        return Some(DiagramInstance::trivial(n));
    }
    let d = match sampler {
        Sampler::S1 => rejection(rng, max_order, n)?,
        Sampler::S2 => constructive(rng, max_order, n)?,
    };
    diagram_hypotheses(&d).iter().all(|c| c.holds).then_some(d)
}

fn rejection<R: Rng + ?Sized>(rng: &mut R, max_order: u64, n: u64) -> Option<DiagramInstance> {
    let a = random_torsion_group(max_order, n, rng);
    let b = random_torsion_group(max_order, n, rng);
    let c = random_torsion_group(max_order, n, rng);
    let b_prime = random_torsion_group(max_order, n, rng);
    let c_prime = random_torsion_group(max_order, n, rng);
    let f = random_hom(&a, &b, rng);
    let g = random_hom(&b, &c, rng);
    let beta = random_hom(&b, &b_prime, rng);
    let gamma = random_hom(&c, &c_prime, rng);
    let g_prime = random_hom(&b_prime, &c_prime, rng);
    DiagramInstance::new(n, f, g, beta, gamma, g_prime).ok()
}

/// `B ⊆ B'` and `A ⊆ B` random subgroups, `C = B/A + D` with `|D|` prime
/// to `n`, and `C'` the pushout of `β` and `g`. Exactness at `B` and
/// `C[n] = im g` hold by construction.
fn constructive<R: Rng + ?Sized>(rng: &mut R, max_order: u64, n: u64) -> Option<DiagramInstance> {
    let b_prime = random_torsion_group(max_order, n, rng);
    let (b, beta) = random_embedding(&b_prime, rng);
    let (_, f) = random_embedding(&b, rng);
    let (q, proj) = quotient(&b, &f.image()).ok()?;
    let coprime: Vec<u64> = [1u64, 3, 5, 7].into_iter().filter(|&d| gcd(d, n) == 1).collect();
    let d = *coprime.choose(rng).expect("1 is always coprime");
    let extra = if d == 1 {
        FinAbGroup::trivial()
    } else {
        FinAbGroup::cyclic(d).ok()?
    };
    let (_, into_c, _) = q.direct_sum(&extra).ok()?;
    let g = proj.then(&into_c).ok()?;
    let (_, g_prime, gamma) = pushout(&beta, &g).ok()?;
    DiagramInstance::new(n, f, g, beta, gamma, g_prime).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn order_one_gives_trivial_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for s in [Sampler::S1, Sampler::S2] {
            let d = sample_diagram(&mut rng, 1, 4, s).unwrap();
            assert!(d.b().is_trivial() && d.b_prime().is_trivial() && d.c_prime().is_trivial());
        }
    }

    #[test]
    fn constructive_rows_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut accepted = 0;
        for _ in 0..200 {
            if let Some(d) = constructive(&mut rng, 32, 4) {
                assert!(d.is_exact_at_b());
                accepted += 1;
            }
        }
        assert_eq!(accepted, 200);
    }
}
