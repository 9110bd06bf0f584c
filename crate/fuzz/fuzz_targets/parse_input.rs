#![no_main]
use inertia_cli::input::parse_input;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Err(e) = parse_input(data) {
        assert!(e.line >= 1 && e.column >= 1);
        assert!(e.line <= data.lines().count().max(1));
    }
});
