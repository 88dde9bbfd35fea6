#![no_main]

use libfuzzer_sys::fuzz_target;
use ybalg_cli::parse_record;

fuzz_target!(|data: &[u8]| {
    let line = String::from_utf8_lossy(data);
    if let Ok(rec) = parse_record(&line) {
        let again = parse_record(&rec.to_line()).expect("serialized record parses");
        assert_eq!(again.check, rec.check);
        assert_eq!(again.sample_index, rec.sample_index);
        assert_eq!(again.pass, rec.pass);
    }
});
