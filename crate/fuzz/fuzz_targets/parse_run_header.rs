#![no_main]

use libfuzzer_sys::fuzz_target;
use rqit_cli::{parse_run_header, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = parse_run_header(text) {
        let back = RunConfig::from_metadata(&config.to_metadata()).expect("own metadata parses");
        assert_eq!(back.command, config.command);
        assert_eq!(back.xi_grid, config.xi_grid);
    }
});
