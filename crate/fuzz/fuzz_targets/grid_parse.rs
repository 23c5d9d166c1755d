#![no_main]

use libfuzzer_sys::fuzz_target;
use paoi::cli::{parse_grid, parse_int_grid};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_grid(text) {
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.iter().all(|x| x.is_finite()));
    }
    let _ = parse_int_grid(text);
});
