use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::model::CachingPolicy;

/// A point of the plane, in metres.
pub type Point = [f64; 2];

/// Homogeneous PPP of intensity `density` restricted to the disc of radius
/// `radius` centred at the origin.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, radius: f64, rng: &mut R) -> Vec<Point> {
    assert!(density > 0.0 && radius > 0.0, "PPP needs positive density and radius");
    let mean = density * std::f64::consts::PI * radius * radius;
    let count = Poisson::new(mean)
        .expect("positive finite Poisson mean")
        .sample(rng) as usize;
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let phi = std::f64::consts::TAU * rng.random::<f64>();
            [r * phi.cos(), r * phi.sin()]
        })
        .collect()
}

/// Draws one cache set of exactly `C` distinct files per BS with marginal
/// inclusion probability `q_f` for file `f`.
///
/// The unit interval is tiled by consecutive segments of length `q_f` (total
/// length `C`); a single uniform offset `u` selects the files whose segments
/// contain `u, u + 1, ..., u + C - 1`. Since no segment is longer than one, the
/// selected files are distinct.
pub fn assign_caches<R: Rng + ?Sized>(
    policy: &CachingPolicy,
    num_bs: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    let bounds = cumulative(policy.probs());
    let c = policy.cache_size();
    (0..num_bs)
        .map(|_| systematic_pick(&bounds, c, rng.random::<f64>()))
        .collect()
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|q| {
            acc += q;
            acc
        })
        .collect()
}

fn systematic_pick(bounds: &[f64], c: usize, u: f64) -> Vec<usize> {
    let last = bounds.len() - 1;
    let mut picked = Vec::with_capacity(c);
    let mut f = 0usize;
    for k in 0..c {
        let point = u + k as f64;
        while f < last && bounds[f] <= point {
            f += 1;
        }
        // Rounding in the running sum can leave the final point just past the
        // last bound; the walk then stays on the last file, which is the one
        // whose segment the point belongs to in exact arithmetic.
        if picked.last() == Some(&f) {
            break;
        }
        picked.push(f);
    }
    debug_assert_eq!(picked.len(), c, "systematic placement lost a file");
    picked
}

/// One spatial draw: BS locations, their caches, and the serving BS per file.
#[derive(Debug, Clone)]
pub struct SpatialRealization {
    pub bs_positions: Vec<Point>,
    pub bs_cache: Vec<Vec<usize>>,
    /// Nearest BS caching each file, if any does.
    pub serving_bs: Vec<Option<usize>>,
}

impl SpatialRealization {
    pub fn new(bs_positions: Vec<Point>, bs_cache: Vec<Vec<usize>>, num_files: usize) -> Self {
        assert_eq!(bs_positions.len(), bs_cache.len());
        let mut best: Vec<Option<(usize, f64)>> = vec![None; num_files];
        for (i, (pos, cache)) in bs_positions.iter().zip(&bs_cache).enumerate() {
            let d2 = pos[0] * pos[0] + pos[1] * pos[1];
            for &f in cache {
                match best[f] {
                    Some((_, bd)) if bd <= d2 => {}
                    _ => best[f] = Some((i, d2)),
                }
            }
        }
        Self {
            bs_positions,
            bs_cache,
            serving_bs: best.into_iter().map(|b| b.map(|(i, _)| i)).collect(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(
        policy: &CachingPolicy,
        density: f64,
        radius: f64,
        rng: &mut R,
    ) -> Self {
        let pos = sample_ppp(density, radius, rng);
        let cache = assign_caches(policy, pos.len(), rng);
        Self::new(pos, cache, policy.num_files())
    }

    pub fn num_bs(&self) -> usize {
        self.bs_positions.len()
    }

    pub fn associate(&self, file: usize) -> Option<usize> {
        self.serving_bs.get(file).copied().flatten()
    }

    pub fn distance(&self, bs: usize) -> f64 {
        let p = self.bs_positions[bs];
        p[0].hypot(p[1])
    }

    pub fn serving_distance(&self, file: usize) -> Option<f64> {
        self.associate(file).map(|b| self.distance(b))
    }

    /// Normalised path gains `(r / x_i)^alpha` of every BS other than the one
    /// serving `file`.
    pub fn interference_gains(&self, file: usize, pathloss_exp: f64) -> Option<Vec<f64>> {
        let s = self.associate(file)?;
        let r = self.distance(s);
        Some(
            (0..self.num_bs())
                .filter(|&i| i != s)
                .map(|i| (r / self.distance(i)).powf(pathloss_exp))
                .collect(),
        )
    }
}
