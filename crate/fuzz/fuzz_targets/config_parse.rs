#![no_main]

use libfuzzer_sys::fuzz_target;
use paoi::cli::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::from_toml_str(text) {
        // Anything that parses must also survive validation and re-serialise.
        let _ = cfg.check();
        let _ = cfg.to_toml_string();
    }
});
