#![no_main]

use libfuzzer_sys::fuzz_target;
use rqit_core::Grid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(grid) = text.parse::<Grid>() {
        assert!(grid.step > 0.0 && grid.min <= grid.max);
        let n = grid.len();
        assert!(n >= 1 && n <= rqit_core::grid::MAX_GRID_POINTS);
        let back: Grid = grid.to_string().parse().expect("display form re-parses");
        assert_eq!(back, grid);
    }
});
