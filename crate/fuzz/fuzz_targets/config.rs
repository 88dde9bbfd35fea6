#![no_main]

use libfuzzer_sys::fuzz_target;
use ybalg_cli::config::Overrides;
use ybalg_cli::{ConfigFile, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = ConfigFile::from_toml_str(text) else {
        return;
    };
    if let Ok(cfg) = RunConfig::resolve(file, &Overrides::default()) {
        assert!(cfg.l >= 1);
        assert!(cfg.mu.as_ref().is_none_or(|m| m.len() == cfg.l));
        assert!(cfg.checks.iter().all(|&c| cfg.tolerance(c) >= 0.0));
    }
});
