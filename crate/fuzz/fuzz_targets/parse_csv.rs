#![no_main]

use libfuzzer_sys::fuzz_target;
use rqit_cli::table::{parse_csv, to_csv_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(table) = parse_csv(text) else {
        return;
    };
    assert!(table.rows.iter().all(|row| row.len() == table.columns.len()));
    // Whatever parses must survive a write/read cycle with the same shape.
    if let Ok(written) = to_csv_string(&table) {
        let again = parse_csv(&written).expect("own output parses");
        assert_eq!(again.columns, table.columns);
        assert_eq!(again.rows.len(), table.rows.len());
    }
});
