//! Seeded random presentations and elements, for property sampling.

use rand::Rng;

use crate::group::{AbelianGroup, GroupElement, GroupSpec};

/// A random valid presentation. Free generators carry a random alternating
/// form; optional torsion generators pair trivially; an optional redundant
/// generator is tied to the others by a relation, with a form row chosen so
/// that the form descends.
pub fn random_spec<R: Rng>(rng: &mut R) -> GroupSpec {
    let n_free = rng.gen_range(1..=4);
    let n_torsion = rng.gen_range(0..=1);
    let redundant = rng.gen_bool(0.5);
    let n = n_free + n_torsion + usize::from(redundant);
    let mut form = vec![vec![0i64; n]; n];
    for i in 0..n_free {
        for j in i + 1..n_free {
            let w = rng.gen_range(-2..=2);
            form[i][j] = w;
            form[j][i] = -w;
        }
    }
    let mut relations = Vec::new();
    for k in 0..n_torsion {
        let mut r = vec![0; n];
        r[n_free + k] = rng.gen_range(2..=3);
        relations.push(r);
    }
    if redundant {
        // w = sum a_i e_i over the free generators
        let w = n - 1;
        let a: Vec<i64> = (0..n_free).map(|_| rng.gen_range(-1..=1)).collect();
        for j in 0..n_free {
            let v: i64 = (0..n_free).map(|i| a[i] * form[i][j]).sum();
            form[w][j] = v;
            form[j][w] = -v;
        }
        let mut r = vec![0; n];
        r[w] = 1;
        for (i, ai) in a.iter().enumerate() {
            r[i] = -ai;
        }
        relations.push(r);
    }
    GroupSpec::new(n, relations, form).expect("sampled presentation is valid")
}

/// An element with free coordinates in [-radius, radius].
pub fn random_element<R: Rng>(rng: &mut R, h: &AbelianGroup, radius: i64) -> GroupElement {
    let mut c: Vec<i64> = (0..h.free_rank()).map(|_| rng.gen_range(-radius..=radius)).collect();
    c.extend(h.torsion_coefficients().iter().map(|&d| rng.gen_range(0..d)));
    h.from_canonical(c).expect("arity matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_specs_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let spec = random_spec(&mut rng);
            let h = AbelianGroup::new(spec);
            let x = random_element(&mut rng, &h, 3);
            assert!(h.contains(&x));
        }
    }
}
