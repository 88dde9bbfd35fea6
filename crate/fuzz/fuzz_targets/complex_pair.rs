#![no_main]

use libfuzzer_sys::fuzz_target;
use ybalg_cli::{parse_complex_list, parse_complex_pair};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(z) = parse_complex_pair(s) {
        assert!(z.re.is_finite() && z.im.is_finite());
        assert_eq!(parse_complex_pair(&format!("{},{}", z.re, z.im)), Ok(z));
    }
    if let Ok(v) = parse_complex_list(s) {
        assert_eq!(
            v.len(),
            if s.trim().is_empty() {
                0
            } else {
                s.split(';').count()
            }
        );
    }
});
