use crate::model::{make_policy, CachingPolicy, Catalog};

/// Most-popular caching: every BS stores files `0..C`.
pub fn mpc_policy(catalog: &Catalog) -> CachingPolicy {
    let c = catalog.cache_size();
    let probs = (0..catalog.num_files())
        .map(|f| if f < c { 1.0 } else { 0.0 })
        .collect();
    make_policy(probs, c).expect("MPC vector satisfies the constraints by construction")
}

/// Uniform caching: `q_f = C / F`.
pub fn uc_policy(catalog: &Catalog) -> CachingPolicy {
    let (c, f) = (catalog.cache_size(), catalog.num_files());
    make_policy(vec![c as f64 / f as f64; f], c)
        .expect("uniform vector satisfies the constraints by construction")
}
